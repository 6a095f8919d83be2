"""Finitely generated abelian groups and exact integer linear algebra.

Matrices are numpy arrays of dtype ``object`` holding Python ints, so no
entry can overflow.  A group is a presentation: ``num_generators`` generators
and a matrix whose *columns* are the relations.  A homomorphism is an integer
matrix acting on generator coordinates (target rows, source columns).

>>> str(FgAbGroup.from_orders([2, 3]))
'Z/6'
>>> kernel(GroupMap(cyclic(4), cyclic(4), [[2]]))[0].canonical_form()
(0, (2,))
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

IntMatrix = np.ndarray

_INT64_SAFE = 2**62


class InvariantViolation(ValueError):
    """Raised when an object fails a structural invariant (d∘d ≠ 0, ill-defined map, ...)."""


class Unsupported(ValueError):
    """Raised when an operation is asked for something outside its scope."""


# ---------------------------------------------------------------------------
# matrix helpers


def as_int_matrix(data, rows: int | None = None, cols: int | None = None) -> IntMatrix:
    """Coerce ``data`` to a 2-d object array of Python ints."""
    if isinstance(data, np.ndarray) and data.dtype == object and data.ndim == 2:
        out = data
    else:
        arr = np.asarray(data, dtype=object)
        if arr.size == 0:
            r = rows if rows is not None else (arr.shape[0] if arr.ndim == 2 else 0)
            c = cols if cols is not None else (arr.shape[1] if arr.ndim == 2 else 0)
            return zeros(r, c)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if rows == 1 else arr.reshape(-1, 1)
        out = np.empty(arr.shape, dtype=object)
        out[...] = [[int(x) for x in row] for row in arr]
    if rows is not None and out.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {out.shape[0]}")
    if cols is not None and out.shape[1] != cols:
        raise ValueError(f"expected {cols} columns, got {out.shape[1]}")
    return out


def zeros(rows: int, cols: int) -> IntMatrix:
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> IntMatrix:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Exact product; uses int64 arithmetic when the bound allows it."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    bound = _max_abs(a) * _max_abs(b) * a.shape[1]
    if bound < _INT64_SAFE:
        prod = a.astype(np.int64) @ b.astype(np.int64)
        return prod.astype(object)
    return a.dot(b)


def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def hstack(blocks: Sequence[IntMatrix], rows: int) -> IntMatrix:
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return zeros(rows, 0)
    return np.concatenate(blocks, axis=1)


def vstack(blocks: Sequence[IntMatrix], cols: int) -> IntMatrix:
    blocks = [b for b in blocks if b.shape[0]]
    if not blocks:
        return zeros(0, cols)
    return np.concatenate(blocks, axis=0)


def kron(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    if _max_abs(a) * _max_abs(b) < _INT64_SAFE:
        return np.kron(a.astype(np.int64), b.astype(np.int64)).astype(object)
    return np.kron(a, b)


# ---------------------------------------------------------------------------
# Smith and Hermite normal forms


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` a divisor chain."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix | None = None

    @property
    def diagonal(self) -> list[int]:
        k = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _swap_rows(m: np.ndarray, i: int, j: int) -> None:
    if i != j:
        m[[i, j], :] = m[[j, i], :]


def _swap_cols(m: np.ndarray, i: int, j: int) -> None:
    if i != j:
        m[:, [i, j]] = m[:, [j, i]]


def smith_normal_form(a, *, with_inverse: bool = False) -> SmithDecomposition:
    """Smith normal form with transforms.

    The pivot is always the smallest nonzero absolute value in the remaining
    block, ties broken by (row, column), so the output is deterministic.

    >>> smith_normal_form([[2, 4], [6, 8]]).diagonal
    [2, 4]
    """
    A = as_int_matrix(a).copy()
    m, n = A.shape
    U = identity(m)
    V = identity(n)
    Ui = identity(m) if with_inverse else None
    t = 0
    while t < min(m, n):
        block = A[t:, t:]
        nz = np.argwhere(block != 0)
        if len(nz) == 0:
            break
        k = int(np.argmin(np.abs(block[nz[:, 0], nz[:, 1]]).astype(object)))
        i, j = int(nz[k][0]) + t, int(nz[k][1]) + t
        _swap_rows(A, t, i)
        _swap_rows(U, t, i)
        if Ui is not None:
            _swap_cols(Ui, t, i)
        _swap_cols(A, t, j)
        _swap_cols(V, t, j)
        while True:
            piv = A[t, t]
            col = A[t + 1 :, t]
            if col.any():
                q = col // piv
                A[t + 1 :, :] -= np.multiply.outer(q, A[t, :])
                U[t + 1 :, :] -= np.multiply.outer(q, U[t, :])
                if Ui is not None:
                    Ui[:, t] += Ui[:, t + 1 :].dot(q)
            row = A[t, t + 1 :]
            if row.any():
                q = row // piv
                A[:, t + 1 :] -= np.multiply.outer(A[:, t], q)
                V[:, t + 1 :] -= np.multiply.outer(V[:, t], q)
            col = A[t + 1 :, t]
            row = A[t, t + 1 :]
            if col.any() or row.any():
                cands = [(abs(int(x)), 0, idx) for idx, x in enumerate(col) if x != 0]
                cands += [(abs(int(x)), 1, idx) for idx, x in enumerate(row) if x != 0]
                _, kind, idx = min(cands)
                if kind == 0:
                    _swap_rows(A, t, t + 1 + idx)
                    _swap_rows(U, t, t + 1 + idx)
                    if Ui is not None:
                        _swap_cols(Ui, t, t + 1 + idx)
                else:
                    _swap_cols(A, t, t + 1 + idx)
                    _swap_cols(V, t, t + 1 + idx)
                continue
            rest = A[t + 1 :, t + 1 :]
            if rest.size:
                bad = np.argwhere(rest % piv != 0)
                if len(bad):
                    i = int(bad[0][0]) + t + 1
                    A[t, :] += A[i, :]
                    U[t, :] += U[i, :]
                    if Ui is not None:
                        Ui[:, i] -= Ui[:, t]
                    continue
            break
        if A[t, t] < 0:
            A[t, :] *= -1
            U[t, :] *= -1
            if Ui is not None:
                Ui[:, t] *= -1
        t += 1
    return SmithDecomposition(U, A, V, Ui)


def column_hnf(a) -> tuple[IntMatrix, list[int]]:
    """Column-echelon basis of the lattice spanned by the columns of ``a``.

    Returns ``(H, pivot_rows)``: the columns of ``H`` are a basis, column k has
    its first nonzero entry (positive) in row ``pivot_rows[k]`` and the pivot
    rows increase strictly.
    """
    A = as_int_matrix(a).copy()
    m, n = A.shape
    r = 0
    pivots: list[int] = []
    for i in range(m):
        if r == n:
            break
        while True:
            row = A[i, r:]
            nzi = np.nonzero(row != 0)[0]
            if len(nzi) == 0:
                break
            k = int(nzi[int(np.argmin(np.abs(row[nzi]).astype(object)))]) + r
            _swap_cols(A, r, k)
            others = A[i, r + 1 :]
            if not others.any():
                break
            q = others // A[i, r]
            A[:, r + 1 :] -= np.multiply.outer(A[:, r], q)
        if A[i, r] != 0:
            if A[i, r] < 0:
                A[:, r] *= -1
            if r:
                q = A[i, :r] // A[i, r]
                A[:, :r] -= np.multiply.outer(A[:, r], q)
            pivots.append(i)
            r += 1
    return A[:, :r].copy(), pivots


def _in_echelon_span(h: IntMatrix, pivots: list[int], v: np.ndarray) -> bool:
    v = v.copy()
    start = 0
    for k, p in enumerate(pivots):
        if v[start:p].any():
            return False
        c = v[p]
        if c % h[p, k]:
            return False
        if c:
            v -= (c // h[p, k]) * h[:, k]
        start = p + 1
    return not v.any()


def solve_integer_matrix(a, b) -> IntMatrix | None:
    """Solve ``a @ X == b`` over the integers; ``None`` when unsolvable."""
    A = as_int_matrix(a)
    B = as_int_matrix(b)
    if B.shape[0] != A.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} vs rhs {B.shape}")
    snf = smith_normal_form(A)
    ub = matmul(snf.U, B)
    d = snf.diagonal
    r = snf.rank
    y = zeros(A.shape[1], B.shape[1])
    for i in range(r):
        if (ub[i] % d[i]).any():
            return None
        y[i] = ub[i] // d[i]
    if ub[r:].any():
        return None
    return matmul(snf.V, y)


def solve_integer(a, b: Sequence[int]) -> list[int] | None:
    """Integer solution of ``a @ x == b``, or ``None``.

    >>> solve_integer([[2, 4], [6, 8]], [2, 6])
    [1, 0]
    >>> solve_integer([[2]], [3]) is None
    True
    """
    A = as_int_matrix(a)
    b = list(b)
    if len(b) != A.shape[0]:
        raise ValueError(f"rhs has length {len(b)}, matrix has {A.shape[0]} rows")
    x = solve_integer_matrix(A, as_int_matrix([[v] for v in b], A.shape[0], 1))
    return None if x is None else [int(v) for v in x[:, 0]]


def integer_kernel(a) -> IntMatrix:
    """Basis (as columns) of the integer null lattice of ``a``."""
    A = as_int_matrix(a)
    snf = smith_normal_form(A)
    return snf.V[:, snf.rank :].copy()


def invariant_factors_of_diagonal(entries: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Canonical form of ⊕ Z/e for a list of orders (0 meaning Z), without factoring."""
    free = 0
    vals = []
    for e in entries:
        e = abs(int(e))
        if e == 0:
            free += 1
        elif e > 1:
            vals.append(e)
    vals.sort()
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            g = math.gcd(vals[i], vals[j])
            vals[i], vals[j] = g, vals[i] // g * vals[j]
    return free, tuple(v for v in vals if v > 1)


def factorize(n: int) -> dict[int, int]:
    """Trial division; the orders handled here are small."""
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# groups


class FgAbGroup:
    """A finitely generated abelian group given by generators and relation columns."""

    __slots__ = ("num_generators", "relations", "_orders", "_canon", "_echelon", "_diag")

    def __init__(self, num_generators: int, relations=None):
        n = int(num_generators)
        if n < 0:
            raise ValueError("negative generator count")
        rel = zeros(n, 0) if relations is None else as_int_matrix(relations, rows=n)
        if rel.shape[1]:
            keep = [j for j in range(rel.shape[1]) if rel[:, j].any()]
            rel = rel[:, keep]
        rel = rel.copy()
        rel.setflags(write=False)
        self.num_generators = n
        self.relations = rel
        self._orders = self._detect_orders()
        self._canon = None
        self._echelon = None
        self._diag = None

    # constructors -----------------------------------------------------------

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FgAbGroup":
        """Diagonal presentation ⊕ Z/orders[i]; an order of 0 means Z."""
        orders = [abs(int(o)) for o in orders]
        n = len(orders)
        cols = [j for j, o in enumerate(orders) if o != 0]
        rel = zeros(n, len(cols))
        for k, j in enumerate(cols):
            rel[j, k] = orders[j]
        return cls(n, rel)

    @classmethod
    def from_invariants(cls, free_rank: int, torsion: Sequence[int] = ()) -> "FgAbGroup":
        return cls.from_orders([0] * free_rank + [int(t) for t in torsion])

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls(0)

    def _detect_orders(self) -> tuple[int, ...] | None:
        rel = self.relations
        orders = [0] * self.num_generators
        for j in range(rel.shape[1]):
            nz = np.nonzero(rel[:, j] != 0)[0]
            if len(nz) != 1:
                return None
            i = int(nz[0])
            orders[i] = math.gcd(orders[i], abs(int(rel[i, j])))
        return tuple(orders)

    # invariants -------------------------------------------------------------

    @property
    def orders(self) -> tuple[int, ...] | None:
        """Per-generator orders when the presentation is diagonal, else ``None``."""
        return self._orders

    def canonical_form(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, invariant factors d1 | d2 | ... with every di ≥ 2)."""
        if self._canon is None:
            if self._orders is not None:
                self._canon = invariant_factors_of_diagonal(self._orders)
            else:
                d = smith_normal_form(self.relations).diagonal
                d = d + [0] * (self.num_generators - len(d))
                free = sum(1 for x in d if x == 0)
                self._canon = (free, tuple(abs(x) for x in d if abs(x) > 1))
        return self._canon

    @property
    def free_rank(self) -> int:
        return self.canonical_form()[0]

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.canonical_form()[1]

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.canonical_form() == (0, ())

    def is_free_presentation(self) -> bool:
        """True when the presentation has no relations at all (the group is Z^n)."""
        return self.relations.shape[1] == 0

    def order(self) -> int | None:
        free, tors = self.canonical_form()
        return None if free else math.prod(tors)

    def is_isomorphic(self, other: "FgAbGroup") -> bool:
        return self.canonical_form() == other.canonical_form()

    def __str__(self) -> str:
        return format_canonical(self.canonical_form())

    def __repr__(self) -> str:
        return f"FgAbGroup({self.num_generators}, relations={self.relations.tolist()})"

    # membership -------------------------------------------------------------

    def contains_columns(self, m: IntMatrix) -> bool:
        """Whether every column of ``m`` lies in the relation lattice."""
        m = as_int_matrix(m, rows=self.num_generators)
        if m.shape[1] == 0 or not m.any():
            return True
        if self._orders is not None:
            for i, o in enumerate(self._orders):
                row = m[i]
                if o == 0:
                    if row.any():
                        return False
                elif (row % o).any():
                    return False
            return True
        if self._echelon is None:
            self._echelon = column_hnf(self.relations)
        h, piv = self._echelon
        return all(_in_echelon_span(h, piv, m[:, j]) for j in range(m.shape[1]))

    def is_zero(self, v: Sequence[int]) -> bool:
        return self.contains_columns(as_int_matrix([[int(x)] for x in v], self.num_generators, 1))

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """A canonical representative of the class of ``v``, in generator coordinates."""
        h, to_h, from_h = self.diagonal_iso()
        y = matmul(to_h, as_int_matrix([[int(x)] for x in v], self.num_generators, 1))[:, 0]
        ho = h.orders
        y = [int(c) % o if o else int(c) for c, o in zip(y, ho)]
        x = matmul(from_h, as_int_matrix([[c] for c in y], len(y), 1))[:, 0]
        return tuple(int(c) for c in x)

    # structure --------------------------------------------------------------

    def diagonal_iso(self) -> tuple["FgAbGroup", IntMatrix, IntMatrix]:
        """An isomorphism onto a diagonal group ``H`` with every order 0 or ≥ 2.

        Returns ``(H, to_h, from_h)``: ``to_h`` maps generator coordinates of
        self to those of ``H`` and ``from_h`` goes back.
        """
        if self._diag is None:
            n = self.num_generators
            if self._orders is not None:
                keep = [i for i, o in enumerate(self._orders) if o != 1]
                to_h = zeros(len(keep), n)
                for k, i in enumerate(keep):
                    to_h[k, i] = 1
                h = FgAbGroup.from_orders([self._orders[i] for i in keep])
                self._diag = (h, to_h, to_h.T.copy())
            else:
                snf = smith_normal_form(self.relations, with_inverse=True)
                d = snf.diagonal + [0] * (n - min(self.relations.shape))
                keep = [i for i in range(n) if abs(d[i]) != 1]
                h = FgAbGroup.from_orders([abs(d[i]) for i in keep])
                to_h = snf.U[keep, :].copy()
                from_h = snf.U_inv[:, keep].copy()
                self._diag = (h, to_h, from_h)
        return self._diag

    def elements(self) -> Iterator["GroupElement"]:
        return elements(self)


def format_canonical(form: tuple[int, tuple[int, ...]]) -> str:
    """Readable form; runs of five or more equal factors collapse to a power."""
    free, tors = form
    runs = [("Z", free)] if free else []
    for d in tors:
        if runs and runs[-1][0] == f"Z/{d}":
            runs[-1] = (runs[-1][0], runs[-1][1] + 1)
        else:
            runs.append((f"Z/{d}", 1))
    parts = []
    for name, k in runs:
        if k >= 5:
            parts.append(f"Z^{k}" if name == "Z" else f"({name})^{k}")
        else:
            parts.extend([name] * k)
    return " ⊕ ".join(parts) if parts else "0"


def cyclic(n: int) -> FgAbGroup:
    """Z/n, with n = 0 meaning Z."""
    return FgAbGroup.from_orders([n])


def free(rank: int) -> FgAbGroup:
    return FgAbGroup(rank)


def direct_sum(groups: Sequence[FgAbGroup]) -> FgAbGroup:
    if not groups:
        return FgAbGroup.trivial()
    n = sum(g.num_generators for g in groups)
    return FgAbGroup(n, block_diag([g.relations for g in groups]))


def tensor_groups(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    """A ⊗ B on generators a_i ⊗ b_j, indexed i * nB + j."""
    if a.orders is not None and b.orders is not None:
        return FgAbGroup.from_orders([math.gcd(x, y) for x in a.orders for y in b.orders])
    na, nb = a.num_generators, b.num_generators
    rel = hstack([kron(a.relations, identity(nb)), kron(identity(na), b.relations)], na * nb)
    return FgAbGroup(na * nb, rel)


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True, eq=False)
class GroupElement:
    parent: FgAbGroup
    coords: tuple[int, ...]

    def key(self) -> tuple[int, ...]:
        return self.parent.reduce(self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement) or other.parent is not self.parent:
            return NotImplemented
        return self.parent.is_zero([a - b for a, b in zip(self.coords, other.coords)])

    def __hash__(self) -> int:
        return hash(self.key())

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.parent, tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)


def elements(g: FgAbGroup) -> Iterator[GroupElement]:
    """Every element class once, in lexicographic order of diagonal coordinates."""
    if not g.is_finite():
        raise Unsupported("cannot enumerate the elements of an infinite group")
    h, _, from_h = g.diagonal_iso()
    ranges = [range(o) for o in h.orders]
    for y in itertools.product(*ranges):
        x = from_h.dot(np.array(y, dtype=object)) if y else np.zeros(g.num_generators, dtype=object)
        yield GroupElement(g, tuple(int(c) for c in x))


class FiniteModel:
    """Index arithmetic on a finite group: elements are numbered 0..order-1.

    The numbering follows :func:`elements`; addition is mixed-radix addition
    on diagonal coordinates, so no tables are needed.
    """

    def __init__(self, group: FgAbGroup):
        if not group.is_finite():
            raise Unsupported("finite group required")
        self.group = group
        self.h, self.to_h, self.from_h = group.diagonal_iso()
        self.radix = np.array(self.h.orders, dtype=np.int64)
        self.size = int(np.prod(self.radix)) if len(self.radix) else 1
        k = len(self.radix)
        w = np.ones(k, dtype=np.int64)
        for i in range(k - 2, -1, -1):
            w[i] = w[i + 1] * self.radix[i + 1]
        self.weights = w
        idx = np.arange(self.size, dtype=np.int64)
        self.digits = np.stack([(idx // w[i]) % self.radix[i] for i in range(k)], axis=1) if k else np.zeros((self.size, 0), dtype=np.int64)

    def index_of_h(self, y: np.ndarray) -> np.ndarray:
        """Indices from diagonal coordinates (last axis), reduced mod the orders."""
        y = np.asarray(y, dtype=np.int64)
        if len(self.radix) == 0:
            return np.zeros(y.shape[:-1], dtype=np.int64)
        return ((y % self.radix) * self.weights).sum(axis=-1)

    def index_of(self, coords: Sequence[int]) -> int:
        """Index of the class of a generator-coordinate vector."""
        y = matmul(self.to_h, as_int_matrix([[int(c)] for c in coords], self.group.num_generators, 1))[:, 0]
        y = np.array([int(c) % int(o) for c, o in zip(y, self.radix)], dtype=np.int64)
        return int(self.index_of_h(y)) if len(y) else 0

    def coords_of(self, index: int) -> tuple[int, ...]:
        """Generator coordinates of the element with a given index."""
        y = self.digits[index]
        x = self.from_h.dot(np.array([int(c) for c in y], dtype=object)) if len(y) else [0] * self.group.num_generators
        return tuple(int(c) for c in x)

    def add(self, a, b):
        return self.index_of_h(self.digits[a] + self.digits[b])

    def neg(self, a):
        return self.index_of_h(-self.digits[a])

    def add_table(self) -> np.ndarray:
        i = np.arange(self.size)
        return self.add(i[:, None], i[None, :])


# ---------------------------------------------------------------------------
# maps


class GroupMap:
    """A homomorphism given by an integer matrix on generator coordinates."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix, *, check: bool = True):
        m = as_int_matrix(matrix, rows=target.num_generators, cols=source.num_generators).copy()
        m.setflags(write=False)
        self.source = source
        self.target = target
        self.matrix = m
        if check and not self.is_well_defined():
            raise InvariantViolation("matrix does not send relations of the source to relations of the target")

    def is_well_defined(self) -> bool:
        return self.target.contains_columns(matmul(self.matrix, self.source.relations))

    @classmethod
    def identity(cls, g: FgAbGroup) -> "GroupMap":
        return cls(g, g, identity(g.num_generators), check=False)

    @classmethod
    def zero(cls, a: FgAbGroup, b: FgAbGroup) -> "GroupMap":
        return cls(a, b, zeros(b.num_generators, a.num_generators), check=False)

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        x = as_int_matrix([[int(c)] for c in v], self.source.num_generators, 1)
        return tuple(int(c) for c in matmul(self.matrix, x)[:, 0])

    def compose(self, inner: "GroupMap") -> "GroupMap":
        """``self ∘ inner``."""
        if inner.target.num_generators != self.source.num_generators:
            raise ValueError("maps are not composable")
        return GroupMap(inner.source, self.target, matmul(self.matrix, inner.matrix), check=False)

    def __matmul__(self, inner: "GroupMap") -> "GroupMap":
        return self.compose(inner)

    def _check_parallel(self, other: "GroupMap") -> None:
        if self.matrix.shape != other.matrix.shape:
            raise ValueError("maps have different shapes")

    def __add__(self, other: "GroupMap") -> "GroupMap":
        self._check_parallel(other)
        return GroupMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "GroupMap") -> "GroupMap":
        self._check_parallel(other)
        return GroupMap(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self) -> "GroupMap":
        return GroupMap(self.source, self.target, -self.matrix, check=False)

    def scaled(self, k: int) -> "GroupMap":
        return GroupMap(self.source, self.target, self.matrix * int(k), check=False)

    def is_zero(self) -> bool:
        return self.target.contains_columns(self.matrix)

    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self) -> str:
        return f"GroupMap({self.source!s} -> {self.target!s}, {self.matrix.tolist()})"


def kernel(f: GroupMap) -> tuple[FgAbGroup, GroupMap]:
    """Kernel with its inclusion.

    The kernel lattice {x : f(x) ∈ relations of the target} is found as the
    projection of the null lattice of [M | R_target]; its echelon basis gives
    the generators, and the source relations are rewritten in that basis.
    """
    a, b = f.source, f.target
    na = a.num_generators
    big = hstack([f.matrix, b.relations], b.num_generators)
    if big.shape[0] == 0:
        lat = identity(na)
    else:
        lat = integer_kernel(big)[:na, :]
    basis, _ = column_hnf(lat)
    if basis.shape[1]:
        rel = solve_integer_matrix(basis, a.relations)
        if rel is None:
            raise InvariantViolation("source relations do not lie in the kernel; map is ill-defined")
    else:
        rel = zeros(0, 0)
    k = FgAbGroup(basis.shape[1], rel)
    return k, GroupMap(k, a, basis, check=False)


def cokernel(f: GroupMap) -> tuple[FgAbGroup, GroupMap]:
    """Target generators with the image columns adjoined as relations."""
    b = f.target
    c = FgAbGroup(b.num_generators, hstack([b.relations, f.matrix], b.num_generators))
    return c, GroupMap(b, c, identity(b.num_generators), check=False)


def image(f: GroupMap) -> tuple[FgAbGroup, GroupMap]:
    """Image as source/kernel, with its inclusion into the target."""
    k, inc = kernel(f)
    a = f.source
    im = FgAbGroup(a.num_generators, hstack([a.relations, inc.matrix], a.num_generators))
    return im, GroupMap(im, f.target, f.matrix, check=False)


def lift_through(inclusion: GroupMap, m: IntMatrix) -> IntMatrix | None:
    """Solve ``inclusion @ X ≡ m`` modulo the target relations (columnwise)."""
    t = inclusion.target
    m = as_int_matrix(m, rows=t.num_generators)
    ni = inclusion.source.num_generators
    if m.shape[1] == 0:
        return zeros(ni, 0)
    big = hstack([inclusion.matrix, t.relations], t.num_generators)
    if big.shape[1] == 0:
        return zeros(0, m.shape[1]) if not m.any() else None
    x = solve_integer_matrix(big, m)
    return None if x is None else x[:ni, :]


class HomSpace:
    """Hom(A, B) with a basis of maps; unpacks as ``(group, basis)``."""

    def __init__(self, a: FgAbGroup, b: FgAbGroup):
        self.source = a
        self.target = b
        snf = smith_normal_form(a.relations, with_inverse=True)
        d = snf.diagonal + [0] * (a.num_generators - min(a.relations.shape))
        self._u = snf.U
        self._u_inv = snf.U_inv
        self._parts = []  # (component index, kernel group, inclusion)
        groups = []
        basis = []
        for i in range(a.num_generators):
            di = abs(d[i])
            if di == 1:
                continue
            if di == 0:
                sub, inc = b, GroupMap.identity(b)
            else:
                sub, inc = kernel(GroupMap(b, b, identity(b.num_generators) * di, check=False))
            self._parts.append((i, sub, inc))
            groups.append(sub)
            for k in range(sub.num_generators):
                mat = np.multiply.outer(inc.matrix[:, k], self._u[i, :])
                basis.append(GroupMap(a, b, mat, check=False))
        self.group = direct_sum(groups)
        self.basis = basis

    def __iter__(self):
        yield self.group
        yield self.basis

    def to_map(self, coords: Sequence[int]) -> GroupMap:
        m = zeros(self.target.num_generators, self.source.num_generators)
        for c, bm in zip(coords, self.basis):
            if c:
                m = m + int(c) * bm.matrix
        return GroupMap(self.source, self.target, m, check=False)

    def coordinates(self, f) -> list[int]:
        """Coordinates of a map (GroupMap or matrix) in the basis."""
        m = f.matrix if isinstance(f, GroupMap) else as_int_matrix(f)
        out: list[int] = []
        for i, sub, inc in self._parts:
            v = matmul(m, self._u_inv[:, i : i + 1])
            c = lift_through(inc, v)
            if c is None:
                raise InvariantViolation("matrix is not a homomorphism from the source")
            out.extend(int(x) for x in c[:, 0])
        return out


def hom_group(a: FgAbGroup, b: FgAbGroup) -> HomSpace:
    """Hom(A, B) via a cyclic decomposition of A: Hom(Z/a, B) = B[a], Hom(Z, B) = B.

    >>> str(hom_group(cyclic(4), cyclic(6)).group)
    'Z/2'
    """
    return HomSpace(a, b)

"""Biextensions of finite abelian groups by cocycle pairs.

A biextension of (P, Q) by G with trivial underlying torsor is a pair of
tables φ: P × P × Q → G and ψ: Q × Q × P → G such that φ(·, ·; q) and
ψ(·, ·; p) are symmetric 2-cocycles and the two partial laws commute:

    φ(p1, p2; q1) + φ(p1, p2; q2) + ψ(q1, q2; p1 + p2)
        = ψ(q1, q2; p1) + ψ(q1, q2; p2) + φ(p1, p2; q1 + q2).

Changing the trivialization by θ: P × Q → G adds the coboundary
φ += θ(p1 + p2, q) − θ(p1, q) − θ(p2, q), ψ += θ(p, q1 + q2) − θ(p, q1) − θ(p, q2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._cochains import CochainProblem
from .abelian import (
    FgAbGroup,
    FiniteModel,
    GroupMap,
    InvariantViolation,
    Unsupported,
    matmul,
)

DEFAULT_MAX_CANDIDATES = 2**24


def _sparse_rows(n_rows: int, n_cols: int, terms) -> np.ndarray:
    m = np.zeros((n_rows, n_cols), dtype=np.int64)
    rows = np.arange(n_rows)
    for coef, cols in terms:
        np.add.at(m, (rows, np.asarray(cols).ravel()), coef)
    return m


class BiextCochains(CochainProblem):
    """G^(P×Q) → G^(P×P×Q) ⊕ G^(Q×Q×P) → (symmetry, cocycle, interchange)."""

    def __init__(self, p: FgAbGroup, q: FgAbGroup, g: FgAbGroup):
        if not (p.is_finite() and q.is_finite()):
            raise Unsupported("biextension cocycles need finite P and Q")
        self.mp, self.mq = FiniteModel(p), FiniteModel(q)
        np_, nq = self.mp.size, self.mq.size
        self.n_phi, self.n_psi = np_ * np_ * nq, nq * nq * np_
        ap, aq = self.mp.add_table(), self.mq.add_table()

        def theta(a, b):
            return a * nq + b

        def phi(a, b, c):
            return (a * np_ + b) * nq + c

        def psi(a, b, c):
            return self.n_phi + (a * nq + b) * np_ + c

        n1 = self.n_phi + self.n_psi
        a, b, c = np.meshgrid(np.arange(np_), np.arange(np_), np.arange(nq), indexing="ij")
        m0_phi = _sparse_rows(self.n_phi, np_ * nq, [(1, theta(ap[a, b], c)), (-1, theta(a, c)), (-1, theta(b, c))])
        x, y, z = np.meshgrid(np.arange(nq), np.arange(nq), np.arange(np_), indexing="ij")
        m0_psi = _sparse_rows(self.n_psi, np_ * nq, [(1, theta(z, aq[x, y])), (-1, theta(z, x)), (-1, theta(z, y))])
        m0 = np.concatenate([m0_phi, m0_psi], axis=0)

        blocks = [
            _sparse_rows(a.size, n1, [(1, phi(a, b, c)), (-1, phi(b, a, c))]),
            _sparse_rows(x.size, n1, [(1, psi(x, y, z)), (-1, psi(y, x, z))]),
        ]
        a4, b4, c4, q4 = np.meshgrid(np.arange(np_), np.arange(np_), np.arange(np_), np.arange(nq), indexing="ij")
        blocks.append(_sparse_rows(a4.size, n1, [
            (1, phi(ap[a4, b4], c4, q4)), (1, phi(a4, b4, q4)), (-1, phi(a4, ap[b4, c4], q4)), (-1, phi(b4, c4, q4)),
        ]))
        x4, y4, z4, p4 = np.meshgrid(np.arange(nq), np.arange(nq), np.arange(nq), np.arange(np_), indexing="ij")
        blocks.append(_sparse_rows(x4.size, n1, [
            (1, psi(aq[x4, y4], z4, p4)), (1, psi(x4, y4, p4)), (-1, psi(x4, aq[y4, z4], p4)), (-1, psi(y4, z4, p4)),
        ]))
        p1, p2, q1, q2 = np.meshgrid(np.arange(np_), np.arange(np_), np.arange(nq), np.arange(nq), indexing="ij")
        blocks.append(_sparse_rows(p1.size, n1, [
            (1, phi(p1, p2, q1)), (1, phi(p1, p2, q2)), (1, psi(q1, q2, ap[p1, p2])),
            (-1, psi(q1, q2, p1)), (-1, psi(q1, q2, p2)), (-1, phi(p1, p2, aq[q1, q2])),
        ]))
        super().__init__(m0, np.concatenate(blocks, axis=0), g)


@dataclass(frozen=True)
class BiextCocycle:
    """Tables in G-generator coordinates, indexed by the elements() order of P and Q."""

    P: FgAbGroup
    Q: FgAbGroup
    G: FgAbGroup
    phi: np.ndarray  # (|P|, |P|, |Q|, gens of G)
    psi: np.ndarray  # (|Q|, |Q|, |P|, gens of G)

    def cochains(self) -> BiextCochains:
        return BiextCochains(self.P, self.Q, self.G)

    def flat(self) -> np.ndarray:
        ng = self.G.num_generators
        n_phi, n_psi = int(np.prod(self.phi.shape[:3])), int(np.prod(self.psi.shape[:3]))
        return np.concatenate([self.phi.reshape(n_phi, ng), self.psi.reshape(n_psi, ng)], axis=0)

    @classmethod
    def from_flat(cls, p, q, g, table) -> "BiextCocycle":
        np_, nq = FiniteModel(p).size, FiniteModel(q).size
        ng = g.num_generators
        t = np.asarray(table, dtype=object).reshape(np_ * np_ * nq + nq * nq * np_, ng)
        n_phi = np_ * np_ * nq
        return cls(p, q, g, t[:n_phi].reshape(np_, np_, nq, ng), t[n_phi:].reshape(nq, nq, np_, ng))

    @classmethod
    def zero(cls, p, q, g) -> "BiextCocycle":
        np_, nq = FiniteModel(p).size, FiniteModel(q).size
        return cls.from_flat(p, q, g, np.zeros((np_ * np_ * nq + nq * nq * np_, g.num_generators), dtype=object))

    def is_valid(self) -> bool:
        return self.cochains().is_cocycle(self.flat())

    def validate(self) -> None:
        if not self.is_valid():
            raise InvariantViolation("tables violate the biextension conditions")

    def same_class(self, other: "BiextCocycle") -> bool:
        return self.cochains().is_coboundary(self.flat() - other.flat())

    def is_trivial_class(self) -> bool:
        return self.cochains().is_coboundary(self.flat())

    def trivialized(self, t: "BiextTrivialization") -> "BiextCocycle":
        """The same biextension seen through another trivialization."""
        c = self.cochains()
        return BiextCocycle.from_flat(self.P, self.Q, self.G, self.flat() + c.coboundary(t.flat()))


@dataclass(frozen=True)
class BiextTrivialization:
    theta: np.ndarray  # (|P|, |Q|, gens of G)

    def flat(self) -> np.ndarray:
        return self.theta.reshape(self.theta.shape[0] * self.theta.shape[1], self.theta.shape[-1])


def _check_groups(p, q, g) -> None:
    for x in (p, q):
        if not x.is_finite():
            raise Unsupported("P and Q must be finite")


def biext_group(p: FgAbGroup, q: FgAbGroup, g: FgAbGroup, i: int) -> FgAbGroup:
    """Biext^i(P, Q; G) for plain groups, i ∈ {−1, 0, 1}.

    i = 1: cocycle pairs modulo coboundaries; i = 0: biadditive maps
    P × Q → G (the θ with vanishing coboundary); i = −1: 0.
    """
    _check_groups(p, q, g)
    if i == -1:
        return FgAbGroup.trivial()
    c = BiextCochains(p, q, g)
    if i == 0:
        n0 = c.sizes[0]
        return CochainProblem(np.zeros((n0, 0), dtype=np.int64), c.m0, g).cocycles()
    if i == 1:
        return c.cohomology()
    raise ValueError("degree must be −1, 0 or 1")


def cocycle_generators(p, q, g) -> list[BiextCocycle]:
    """Cocycle pairs generating all biextensions."""
    c = BiextCochains(p, q, g)
    return [BiextCocycle.from_flat(p, q, g, t) for t in c.cocycle_generators()]


def class_subgroup_order(cocycles: list[BiextCocycle]) -> int | None:
    """Order of the subgroup of Biext^1 generated by some cocycles."""
    if not cocycles:
        return 1
    c = cocycles[0].cochains()
    return c.class_subgroup_order([b.flat() for b in cocycles])


def _same_groups(b1: BiextCocycle, b2: BiextCocycle) -> None:
    for x, y in ((b1.P, b2.P), (b1.Q, b2.Q), (b1.G, b2.G)):
        if x.canonical_form() != y.canonical_form() or x.num_generators != y.num_generators:
            raise ValueError("biextensions live over different groups")


def sum_biext(b1: BiextCocycle, b2: BiextCocycle) -> BiextCocycle:
    """Pointwise sum of the tables."""
    _same_groups(b1, b2)
    return BiextCocycle(b1.P, b1.Q, b1.G, b1.phi + b2.phi, b1.psi + b2.psi)


def _element_map(u: GroupMap) -> np.ndarray:
    ms, mt = FiniteModel(u.source), FiniteModel(u.target)
    return np.array([mt.index_of(u(ms.coords_of(a))) for a in range(ms.size)], dtype=np.int64)


def pullback_biext(b: BiextCocycle, u: GroupMap, v: GroupMap) -> BiextCocycle:
    """φ'(p1, p2; q) = φ(u p1, u p2; v q) and likewise for ψ."""
    if u.target.num_generators != b.P.num_generators or v.target.num_generators != b.Q.num_generators:
        raise ValueError("maps do not land in P and Q")
    iu, iv = _element_map(u), _element_map(v)
    phi = b.phi[np.ix_(iu, iu, iv)]
    psi = b.psi[np.ix_(iv, iv, iu)]
    return BiextCocycle(u.source, v.source, b.G, phi, psi)


def pushdown_biext(b: BiextCocycle, w: GroupMap) -> BiextCocycle:
    """Compose both tables with w: G → G'."""
    if w.source.num_generators != b.G.num_generators:
        raise ValueError("map does not start at G")
    wt = w.matrix.T.copy()
    ng = w.target.num_generators
    phi = matmul(b.phi.reshape(int(np.prod(b.phi.shape[:3])), b.G.num_generators).astype(object), wt).reshape(b.phi.shape[:3] + (ng,))
    psi = matmul(b.psi.reshape(int(np.prod(b.psi.shape[:3])), b.G.num_generators).astype(object), wt).reshape(b.psi.shape[:3] + (ng,))
    return BiextCocycle(b.P, b.Q, w.target, phi, psi)


# ---------------------------------------------------------------------------
# raw enumeration


def brute_force_biext1(p: FgAbGroup, q: FgAbGroup, g: FgAbGroup, max_candidates: int = DEFAULT_MAX_CANDIDATES,
                       chunk: int = 1 << 14) -> int:
    """Count biextension classes by listing every pair of tables.

    Works purely with element indices and the group laws, so it shares no
    linear algebra with :func:`biext_group`.
    """
    _check_groups(p, q, g)
    if not g.is_finite():
        raise Unsupported("raw enumeration needs a finite G")
    mp, mq, mg = FiniteModel(p), FiniteModel(q), FiniteModel(g)
    np_, nq, ng = mp.size, mq.size, mg.size
    n_phi, n_psi = np_ * np_ * nq, nq * nq * np_
    n = n_phi + n_psi
    total = ng**n
    n_theta = ng ** (np_ * nq)
    if total > max_candidates or n_theta > max_candidates:
        raise Unsupported(
            f"raw enumeration refused: |G|^{n} = {total} tables and |G|^{np_ * nq} = {n_theta} "
            f"trivializations, bound {max_candidates}"
        )
    ap, aq = mp.add_table(), mq.add_table()
    add, neg = mg.add, mg.neg

    def conditions(phi, psi):
        ok = (phi == phi.transpose(0, 2, 1, 3)).reshape(len(phi), -1).all(axis=1)
        ok &= (psi == psi.transpose(0, 2, 1, 3)).reshape(len(psi), -1).all(axis=1)
        a, b, c, z = np.ix_(range(np_), range(np_), range(np_), range(nq))
        lhs = add(phi[:, ap[a, b], c, z], phi[:, a, b, z])
        rhs = add(phi[:, a, ap[b, c], z], phi[:, b, c, z])
        ok &= (lhs == rhs).reshape(len(phi), -1).all(axis=1)
        x, y, w, t = np.ix_(range(nq), range(nq), range(nq), range(np_))
        lhs = add(psi[:, aq[x, y], w, t], psi[:, x, y, t])
        rhs = add(psi[:, x, aq[y, w], t], psi[:, y, w, t])
        ok &= (lhs == rhs).reshape(len(psi), -1).all(axis=1)
        p1, p2, q1, q2 = np.ix_(range(np_), range(np_), range(nq), range(nq))
        lhs = add(add(phi[:, p1, p2, q1], phi[:, p1, p2, q2]), psi[:, q1, q2, ap[p1, p2]])
        rhs = add(add(psi[:, q1, q2, p1], psi[:, q1, q2, p2]), phi[:, p1, p2, aq[q1, q2]])
        ok &= (lhs == rhs).reshape(len(phi), -1).all(axis=1)
        return ok

    powers = ng ** np.arange(n - 1, -1, -1, dtype=np.int64)
    valid = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % ng
        phi = digits[:, :n_phi].reshape(-1, np_, np_, nq)
        psi = digits[:, n_phi:].reshape(-1, nq, nq, np_)
        valid.append(digits[conditions(phi, psi)])
    valid = np.concatenate(valid, axis=0)

    # every trivialization θ and the tables it adds
    tpow = ng ** np.arange(np_ * nq - 1, -1, -1, dtype=np.int64)
    tidx = np.arange(n_theta, dtype=np.int64)
    theta = ((tidx[:, None] // tpow[None, :]) % ng).reshape(-1, np_, nq)
    a, b, z = np.ix_(range(np_), range(np_), range(nq))
    dphi = add(theta[:, ap[a, b], z], neg(add(theta[:, a, z], theta[:, b, z])))
    x, y, t = np.ix_(range(nq), range(nq), range(np_))
    dpsi = add(theta[:, t, aq[x, y]], neg(add(theta[:, t, x], theta[:, t, y])))
    cob = np.concatenate([dphi.reshape(n_theta, -1), dpsi.reshape(n_theta, -1)], axis=1)

    seen: set[bytes] = set()
    orbits = 0
    for row in valid:
        key = row.tobytes()
        if key in seen:
            continue
        orbits += 1
        for moved in add(row[None, :], cob):
            seen.add(moved.tobytes())
    return orbits


# ---------------------------------------------------------------------------
# complexes with zero differentials


class BiextProblem(NamedTuple):
    P: FgAbGroup
    Q: FgAbGroup
    G: FgAbGroup


class SplitProblems(NamedTuple):
    degree0: BiextProblem
    degree_minus1: BiextProblem


def split_zero_differential(p, q, g) -> SplitProblems:
    """The degree-0 and degree-(−1) triples of presentations with zero differentials."""
    for x in (p, q, g):
        if not x.d.is_zero():
            raise Unsupported("nonzero differential; use the bar resolution route")
    return SplitProblems(BiextProblem(p.zero, q.zero, g.zero), BiextProblem(p.minus1, q.minus1, g.minus1))

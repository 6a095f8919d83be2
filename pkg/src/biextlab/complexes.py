"""Bounded cochain complexes of finitely generated abelian groups.

Conventions (cohomological indexing throughout):

* shift: ``K[i]^n = K^(n+i)`` with differential multiplied by ``(-1)^i``;
* mapping cone: ``MC(f)^n = S^(n+1) ⊕ T^n``, ``d(x, y) = (-dx, f x + dy)``;
* total complex of a bicomplex with commuting squares: ``d = d_h + (-1)^p d_v``;
* tensor product: ``d(x ⊗ y) = dx ⊗ y + (-1)^i x ⊗ dy`` for ``x`` of degree i.

Direct sums are laid out by concatenating summands in order of the first index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import _local
from .abelian import (
    FgAbGroup,
    GroupMap,
    IntMatrix,
    InvariantViolation,
    as_int_matrix,
    block_diag,
    direct_sum,
    hstack,
    identity,
    kernel,
    kron,
    lift_through,
    matmul,
    tensor_groups,
    zeros,
)

_TRIVIAL = FgAbGroup.trivial()


def _as_map(m, source: FgAbGroup, target: FgAbGroup, check: bool) -> GroupMap:
    if isinstance(m, GroupMap):
        if m.source.num_generators != source.num_generators or m.target.num_generators != target.num_generators:
            raise ValueError("map does not match the terms it connects")
        if m.source is source and m.target is target:
            return m
        return GroupMap(source, target, m.matrix, check=check)
    return GroupMap(source, target, m, check=check)


class BoundedComplex:
    """Terms indexed by degree; ``d(n)`` goes from degree n to n + 1."""

    __slots__ = ("_terms", "_diffs")

    def __init__(self, terms: Mapping[int, FgAbGroup], differentials: Mapping[int, object] | None = None, *, check: bool = True):
        self._terms = {int(n): g for n, g in terms.items() if g.num_generators > 0}
        self._diffs: dict[int, GroupMap] = {}
        for n, m in (differentials or {}).items():
            n = int(n)
            src, tgt = self.term(n), self.term(n + 1)
            if src.num_generators == 0 or tgt.num_generators == 0:
                mm = m.matrix if isinstance(m, GroupMap) else as_int_matrix(m, tgt.num_generators, src.num_generators)
                if mm.size and mm.any():
                    raise ValueError(f"nonzero differential at degree {n} between empty terms")
                continue
            self._diffs[n] = _as_map(m, src, tgt, check)
        if check:
            self.validate()

    def validate(self) -> None:
        for n in self.degrees:
            if (n + 1) in self._diffs and n in self._diffs:
                if not self._diffs[n + 1].compose(self._diffs[n]).is_zero():
                    raise InvariantViolation(f"d∘d ≠ 0 at degree {n}")

    @property
    def degrees(self) -> list[int]:
        return sorted(self._terms)

    @property
    def support(self) -> tuple[int, int] | None:
        if not self._terms:
            return None
        return min(self._terms), max(self._terms)

    def term(self, n: int) -> FgAbGroup:
        return self._terms.get(n, _TRIVIAL)

    def d(self, n: int) -> GroupMap:
        m = self._diffs.get(n)
        if m is None:
            return GroupMap.zero(self.term(n), self.term(n + 1))
        return m

    @property
    def terms(self) -> dict[int, FgAbGroup]:
        return dict(self._terms)

    @property
    def differentials(self) -> dict[int, GroupMap]:
        return dict(self._diffs)

    def is_degreewise_free(self) -> bool:
        return all(g.is_free_presentation() for g in self._terms.values())

    def is_zero(self) -> bool:
        """Every term is the trivial group (possibly with a redundant presentation)."""
        return all(g.is_trivial() for g in self._terms.values())

    @classmethod
    def concentrated(cls, group: FgAbGroup, degree: int = 0) -> "BoundedComplex":
        return cls({degree: group})

    @classmethod
    def two_term(cls, minus1: FgAbGroup, zero: FgAbGroup, d) -> "BoundedComplex":
        """[minus1 --d--> zero] in degrees -1, 0."""
        return cls({-1: minus1, 0: zero}, {-1: d})

    def __repr__(self) -> str:
        parts = [f"{n}: {self.term(n)}" for n in self.degrees]
        return "BoundedComplex(" + ", ".join(parts) + ")"


class ChainMap:
    """Degree-0 map of complexes; components default to zero."""

    __slots__ = ("source", "target", "_comps")

    def __init__(self, source: BoundedComplex, target: BoundedComplex, components: Mapping[int, object] | None = None, *, check: bool = True):
        self.source = source
        self.target = target
        self._comps: dict[int, GroupMap] = {}
        for n, m in (components or {}).items():
            n = int(n)
            s, t = source.term(n), target.term(n)
            if s.num_generators == 0 or t.num_generators == 0:
                continue
            self._comps[n] = _as_map(m, s, t, check)
        if check:
            self.validate()

    def __getitem__(self, n: int) -> GroupMap:
        m = self._comps.get(n)
        if m is None:
            return GroupMap.zero(self.source.term(n), self.target.term(n))
        return m

    @property
    def components(self) -> dict[int, GroupMap]:
        return dict(self._comps)

    def degrees(self) -> list[int]:
        return sorted(set(self.source.degrees) | set(self.target.degrees))

    def validate(self) -> None:
        for n in self.source.degrees:
            lhs = self.target.d(n).compose(self[n])
            rhs = self[n + 1].compose(self.source.d(n))
            if not (lhs - rhs).is_zero():
                raise InvariantViolation(f"chain map does not commute with differentials at degree {n}")

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """``self ∘ inner``."""
        comps = {n: self[n].compose(inner[n]) for n in inner.source.degrees}
        return ChainMap(inner.source, self.target, comps, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, {n: self[n] + other[n] for n in self.degrees()}, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -self[n] for n in self.degrees()}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(self[n].is_zero() for n in self.degrees())

    @classmethod
    def identity(cls, k: BoundedComplex) -> "ChainMap":
        return cls(k, k, {n: GroupMap.identity(k.term(n)) for n in k.degrees}, check=False)

    @classmethod
    def zero(cls, s: BoundedComplex, t: BoundedComplex) -> "ChainMap":
        return cls(s, t, {}, check=False)


class Homotopy:
    """``H^n: S^n → T^(n-1)`` with ``g - f = dH + Hd``."""

    __slots__ = ("f", "g", "_comps")

    def __init__(self, f: ChainMap, g: ChainMap, components: Mapping[int, object] | None = None, *, check: bool = True):
        self.f = f
        self.g = g
        s, t = f.source, f.target
        self._comps: dict[int, GroupMap] = {}
        for n, m in (components or {}).items():
            n = int(n)
            if s.term(n).num_generators == 0 or t.term(n - 1).num_generators == 0:
                continue
            self._comps[n] = _as_map(m, s.term(n), t.term(n - 1), check)
        if check:
            self.validate()

    def __getitem__(self, n: int) -> GroupMap:
        m = self._comps.get(n)
        if m is None:
            return GroupMap.zero(self.f.source.term(n), self.f.target.term(n - 1))
        return m

    @property
    def components(self) -> dict[int, GroupMap]:
        return dict(self._comps)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self._comps.values())

    def validate(self) -> None:
        s, t = self.f.source, self.f.target
        for n in s.degrees:
            lhs = self.g[n] - self.f[n]
            rhs = t.d(n - 1).compose(self[n]) + self[n + 1].compose(s.d(n))
            if not (lhs - rhs).is_zero():
                raise InvariantViolation(f"homotopy identity g - f = dH + Hd fails at degree {n}")


class Bicomplex:
    """Terms at (p, q); ``dh`` raises p, ``dv`` raises q, and squares commute."""

    __slots__ = ("_terms", "_dh", "_dv")

    def __init__(self, terms: Mapping[tuple[int, int], FgAbGroup], dh: Mapping | None = None, dv: Mapping | None = None, *, check: bool = True):
        self._terms = {(int(p), int(q)): g for (p, q), g in terms.items() if g.num_generators > 0}
        self._dh: dict[tuple[int, int], GroupMap] = {}
        self._dv: dict[tuple[int, int], GroupMap] = {}
        for store, maps, step in ((self._dh, dh, (1, 0)), (self._dv, dv, (0, 1))):
            for (p, q), m in (maps or {}).items():
                s = self.term(p, q)
                t = self.term(p + step[0], q + step[1])
                if s.num_generators == 0 or t.num_generators == 0:
                    continue
                store[(p, q)] = _as_map(m, s, t, check)
        if check:
            self.validate()

    def term(self, p: int, q: int) -> FgAbGroup:
        return self._terms.get((p, q), _TRIVIAL)

    @property
    def positions(self) -> list[tuple[int, int]]:
        return sorted(self._terms)

    def dh(self, p: int, q: int) -> GroupMap:
        m = self._dh.get((p, q))
        return m if m is not None else GroupMap.zero(self.term(p, q), self.term(p + 1, q))

    def dv(self, p: int, q: int) -> GroupMap:
        m = self._dv.get((p, q))
        return m if m is not None else GroupMap.zero(self.term(p, q), self.term(p, q + 1))

    def validate(self) -> None:
        for p, q in self.positions:
            if not self.dh(p + 1, q).compose(self.dh(p, q)).is_zero():
                raise InvariantViolation(f"horizontal d∘d ≠ 0 at {(p, q)}")
            if not self.dv(p, q + 1).compose(self.dv(p, q)).is_zero():
                raise InvariantViolation(f"vertical d∘d ≠ 0 at {(p, q)}")
            a = self.dv(p + 1, q).compose(self.dh(p, q))
            b = self.dh(p, q + 1).compose(self.dv(p, q))
            if not (a - b).is_zero():
                raise InvariantViolation(f"square at {(p, q)} does not commute")


@dataclass(frozen=True)
class Block:
    key: tuple[int, int]
    offset: int
    size: int


def total_layout(b: Bicomplex) -> dict[int, list[Block]]:
    """For each total degree, the summands in order of increasing p."""
    layout: dict[int, list[Block]] = {}
    for p, q in sorted(b.positions):
        layout.setdefault(p + q, [])
    for n in layout:
        off = 0
        blocks = []
        for p, q in sorted(pos for pos in b.positions if pos[0] + pos[1] == n):
            size = b.term(p, q).num_generators
            blocks.append(Block((p, q), off, size))
            off += size
        layout[n] = blocks
    return layout


def total(b: Bicomplex, *, check: bool = True) -> BoundedComplex:
    """Tot^n = ⊕_{p+q=n} B^{pq} with d = d_h + (-1)^p d_v."""
    layout = total_layout(b)
    terms = {n: direct_sum([b.term(*blk.key) for blk in blocks]) for n, blocks in layout.items()}
    diffs = {}
    for n, blocks in layout.items():
        if n + 1 not in layout:
            continue
        tgt = {blk.key: blk for blk in layout[n + 1]}
        m = zeros(terms[n + 1].num_generators, terms[n].num_generators)
        for blk in blocks:
            p, q = blk.key
            h = tgt.get((p + 1, q))
            if h is not None:
                m[h.offset : h.offset + h.size, blk.offset : blk.offset + blk.size] = b.dh(p, q).matrix
            v = tgt.get((p, q + 1))
            if v is not None:
                sign = -1 if p % 2 else 1
                m[v.offset : v.offset + v.size, blk.offset : blk.offset + blk.size] = sign * b.dv(p, q).matrix
        diffs[n] = m
    return BoundedComplex(terms, diffs, check=check)


def direct_sum_complex(ks: Iterable[BoundedComplex]) -> BoundedComplex:
    ks = list(ks)
    degrees = sorted(set().union(*[k.degrees for k in ks])) if ks else []
    terms = {n: direct_sum([k.term(n) for k in ks]) for n in degrees}
    diffs = {n: block_diag([k.d(n).matrix for k in ks]) for n in degrees}
    return BoundedComplex(terms, diffs, check=False)


def direct_sum_maps(fs: Iterable[ChainMap], source: BoundedComplex, target: BoundedComplex) -> ChainMap:
    fs = list(fs)
    comps = {n: block_diag([f[n].matrix for f in fs]) for n in source.degrees}
    return ChainMap(source, target, comps, check=False)


# ---------------------------------------------------------------------------
# operations


def shift(k: BoundedComplex, i: int) -> BoundedComplex:
    """K[i]: reindex by i and multiply the differential by (-1)^i."""
    sign = -1 if i % 2 else 1
    terms = {n - i: g for n, g in k.terms.items()}
    diffs = {n - i: sign * m.matrix for n, m in k.differentials.items()}
    return BoundedComplex(terms, diffs, check=False)


def shift_map(f: ChainMap, i: int) -> ChainMap:
    s, t = shift(f.source, i), shift(f.target, i)
    return ChainMap(s, t, {n - i: m.matrix for n, m in f.components.items()}, check=False)


def truncate_with_map(k: BoundedComplex, mode: str, n: int) -> tuple[BoundedComplex, ChainMap]:
    """Good truncation with its comparison map.

    ``leq`` returns τ≤n K and the inclusion τ≤n K → K; ``geq`` returns τ≥n K
    and the projection K → τ≥n K.
    """
    if mode == "leq":
        z, inc = kernel(k.d(n))
        terms = {m: g for m, g in k.terms.items() if m < n}
        terms[n] = z
        diffs = {m: k.d(m).matrix for m in terms if m < n - 1}
        if n - 1 in terms:
            lifted = lift_through(inc, k.d(n - 1).matrix)
            if lifted is None:
                raise InvariantViolation("image of d^(n-1) is not inside ker d^n")
            diffs[n - 1] = lifted
        t = BoundedComplex(terms, diffs, check=False)
        comps = {m: identity(k.term(m).num_generators) for m in terms if m < n}
        comps[n] = inc.matrix
        return t, ChainMap(t, k, comps, check=False)
    if mode == "geq":
        src = k.term(n)
        c = FgAbGroup(src.num_generators, hstack([src.relations, k.d(n - 1).matrix], src.num_generators))
        terms = {m: g for m, g in k.terms.items() if m > n}
        terms[n] = c
        diffs = {m: k.d(m).matrix for m in terms}
        t = BoundedComplex(terms, diffs, check=False)
        comps = {m: identity(t.term(m).num_generators) for m in terms}
        return t, ChainMap(k, t, comps, check=False)
    raise ValueError(f"unknown truncation mode {mode!r}")


def truncate(k: BoundedComplex, mode: str, n: int) -> BoundedComplex:
    """τ≤n (``mode='leq'``) or τ≥n (``mode='geq'``)."""
    return truncate_with_map(k, mode, n)[0]


def mapping_cone(f: ChainMap) -> BoundedComplex:
    s, t = f.source, f.target
    degrees = sorted({n - 1 for n in s.degrees} | set(t.degrees))
    terms = {n: direct_sum([s.term(n + 1), t.term(n)]) for n in degrees}
    diffs = {}
    for n in degrees:
        a1, b1 = s.term(n + 1).num_generators, t.term(n).num_generators
        a2, b2 = s.term(n + 2).num_generators, t.term(n + 1).num_generators
        m = zeros(a2 + b2, a1 + b1)
        m[:a2, :a1] = -s.d(n + 1).matrix
        m[a2:, :a1] = f[n + 1].matrix
        m[a2:, a1:] = t.d(n).matrix
        diffs[n] = m
    return BoundedComplex(terms, diffs, check=False)


def cone_inclusion(f: ChainMap, cone: BoundedComplex) -> ChainMap:
    """T → MC(f), y ↦ (0, y)."""
    comps = {}
    for n in f.target.degrees:
        a = f.source.term(n + 1).num_generators
        b = f.target.term(n).num_generators
        m = zeros(a + b, b)
        m[a:, :] = identity(b)
        comps[n] = m
    return ChainMap(f.target, cone, comps, check=False)


def cone_projection(f: ChainMap, cone: BoundedComplex) -> ChainMap:
    """MC(f) → S[1], (x, y) ↦ x."""
    s1 = shift(f.source, 1)
    comps = {}
    for n in cone.degrees:
        a = f.source.term(n + 1).num_generators
        b = f.target.term(n).num_generators
        m = zeros(a, a + b)
        m[:, :a] = identity(a)
        comps[n] = m
    return ChainMap(cone, s1, comps, check=False)


def tensor_bicomplex(k: BoundedComplex, l: BoundedComplex) -> Bicomplex:
    terms = {}
    dh = {}
    dv = {}
    for i in k.degrees:
        for j in l.degrees:
            terms[(i, j)] = tensor_groups(k.term(i), l.term(j))
    for i, j in terms:
        ni, nj = k.term(i).num_generators, l.term(j).num_generators
        dh[(i, j)] = kron(k.d(i).matrix, identity(nj))
        dv[(i, j)] = kron(identity(ni), l.d(j).matrix)
    return Bicomplex(terms, dh, dv, check=False)


def tensor(k: BoundedComplex, l: BoundedComplex) -> BoundedComplex:
    """Plain (underived) tensor product with the Koszul sign."""
    return total(tensor_bicomplex(k, l), check=False)


def tensor_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """f ⊗ g between the tensor complexes, blockwise kron(f^i, g^j)."""
    sb = tensor_bicomplex(f.source, g.source)
    tb = tensor_bicomplex(f.target, g.target)
    s, t = total(sb, check=False), total(tb, check=False)
    ls, lt = total_layout(sb), total_layout(tb)
    comps = {}
    for n, blocks in ls.items():
        tgt = {blk.key: blk for blk in lt.get(n, [])}
        m = zeros(t.term(n).num_generators, s.term(n).num_generators)
        for blk in blocks:
            other = tgt.get(blk.key)
            if other is None:
                continue
            i, j = blk.key
            m[other.offset : other.offset + other.size, blk.offset : blk.offset + blk.size] = kron(f[i].matrix, g[j].matrix)
        comps[n] = m
    return ChainMap(s, t, comps, check=False)


# ---------------------------------------------------------------------------
# cohomology


def subquotient(f: GroupMap, g: GroupMap) -> FgAbGroup:
    """ker(g) / im(f) for composable f: A → B, g: B → C with g∘f = 0, canonical."""
    b = f.target
    if b.num_generators == 0:
        return FgAbGroup.trivial()
    if b.is_finite():
        hb, to_b, from_b = b.diagonal_iso()
        fm = matmul(to_b, f.matrix)
        gm = matmul(g.matrix, from_b)
        c = g.target
        if c.orders is None:
            hc, to_c, _ = c.diagonal_iso()
            gm = matmul(to_c, gm)
            c_orders = hc.orders
        else:
            c_orders = c.orders
        inv = _local.subquotient_invariants(fm, gm, hb.orders, c_orders)
        return FgAbGroup.from_invariants(0, inv)
    z, inc = kernel(g)
    lifted = lift_through(inc, f.matrix)
    if lifted is None:
        raise InvariantViolation("g∘f ≠ 0")
    h = FgAbGroup(z.num_generators, hstack([z.relations, lifted], z.num_generators))
    return FgAbGroup.from_invariants(*h.canonical_form())


def cohomology(k: BoundedComplex, n: int) -> FgAbGroup:
    """H^n(K) = ker d^n / im d^(n-1), in canonical form."""
    return subquotient(k.d(n - 1), k.d(n))


@dataclass(frozen=True)
class CohomologyData:
    """H^n presented on a basis of the cycles; ``cycles`` maps it into K^n."""

    group: FgAbGroup
    cycles: IntMatrix


def cohomology_data(k: BoundedComplex, n: int) -> CohomologyData:
    z, inc = kernel(k.d(n))
    lifted = lift_through(inc, k.d(n - 1).matrix)
    if lifted is None:
        raise InvariantViolation("d∘d ≠ 0")
    h = FgAbGroup(z.num_generators, hstack([z.relations, lifted], z.num_generators))
    return CohomologyData(h, inc.matrix)


def induced_map(f: ChainMap, n: int) -> GroupMap:
    """H^n(f) in the cycle presentations of :func:`cohomology_data`."""
    hs = cohomology_data(f.source, n)
    ht = cohomology_data(f.target, n)
    images = matmul(f[n].matrix, hs.cycles) if hs.cycles.shape[1] else zeros(f.target.term(n).num_generators, 0)
    z_inc = GroupMap(ht.group, f.target.term(n), ht.cycles, check=False) if ht.cycles.shape[1] else None
    if z_inc is None:
        return GroupMap.zero(hs.group, ht.group)
    coords = lift_through(z_inc, images)
    if coords is None:
        raise InvariantViolation("chain map does not send cycles to cycles")
    return GroupMap(hs.group, ht.group, coords, check=False)


def is_acyclic(k: BoundedComplex) -> bool:
    return all(cohomology(k, n).is_trivial() for n in k.degrees)


def is_quasi_iso(f: ChainMap) -> bool:
    """True iff every cohomology group of the mapping cone vanishes."""
    return is_acyclic(mapping_cone(f))


def is_exact_at(alpha: GroupMap, beta: GroupMap) -> bool:
    """Exactness of A --alpha--> B --beta--> C at B."""
    if not beta.compose(alpha).is_zero():
        return False
    c, _ = _coker_group(alpha)
    induced = GroupMap(c, beta.target, beta.matrix, check=False)
    return kernel(induced)[0].is_trivial()


def _coker_group(f: GroupMap) -> tuple[FgAbGroup, None]:
    b = f.target
    return FgAbGroup(b.num_generators, hstack([b.relations, f.matrix], b.num_generators)), None


# ---------------------------------------------------------------------------
# homotopy classes


def _hom_block_group(src: FgAbGroup, tgt: FgAbGroup) -> FgAbGroup:
    """Matrices tgt.gens × src.gens (column-major) with entries modulo tgt's relations."""
    r = src.num_generators
    if tgt.orders is not None:
        return FgAbGroup.from_orders(list(tgt.orders) * r)
    return FgAbGroup(r * tgt.num_generators, kron(identity(r), tgt.relations))


def homotopy_classes(k: BoundedComplex, l: BoundedComplex) -> FgAbGroup:
    """Chain maps K → L modulo homotopy.

    Works on the ambient groups X_s = ⊕_n Hom(ℤ^{gens K^n}, L^{n+s}) with the
    maps φ ↦ (dφ^n − φ^{n+1}d) (chain condition) and H ↦ (dH^n + H^{n+1}d)
    (homotopies); when K has relations, only matrices killing them count.
    """
    degs = k.degrees

    def layout(s: int):
        blocks = []
        off = 0
        for n in degs:
            t = l.term(n + s)
            if t.num_generators == 0:
                continue
            size = k.term(n).num_generators * t.num_generators
            blocks.append((n, off, size))
            off += size
        grp = direct_sum([_hom_block_group(k.term(n), l.term(n + s)) for n, _, _ in blocks])
        return blocks, grp

    b_m1, x_m1 = layout(-1)
    b_0, x_0 = layout(0)
    b_1, x_1 = layout(1)

    def pre(n_src: int, n_tgt_k: int, s: int):
        # φ ∈ Hom(K^{n_tgt_k}, L^{n_tgt_k + s}) ↦ φ ∘ d_K : Hom(K^{n_src}, ...)
        d = k.d(n_src).matrix
        g = l.term(n_tgt_k + s).num_generators
        return kron(d.T.copy(), identity(g))

    def post(n: int, s: int):
        # φ ∈ Hom(K^n, L^{n+s}) ↦ d_L ∘ φ
        d = l.d(n + s).matrix
        return kron(identity(k.term(n).num_generators), d)

    def assemble(src_blocks, src_grp, tgt_blocks, tgt_grp, s: int, sign_pre: int):
        m = zeros(tgt_grp.num_generators, src_grp.num_generators)
        tgt = {n: (off, size) for n, off, size in tgt_blocks}
        for n, off, size in src_blocks:
            if n in tgt:  # d_L ∘ φ^n lands in the block for the same n
                to, ts = tgt[n]
                m[to : to + ts, off : off + size] = post(n, s)
            if n - 1 in tgt:  # φ^n ∘ d_K^{n-1} lands in the block for n - 1
                to, ts = tgt[n - 1]
                m[to : to + ts, off : off + size] = sign_pre * pre(n - 1, n, s)
        return m

    chain = GroupMap(x_0, x_1, assemble(b_0, x_0, b_1, x_1, 0, -1), check=False)
    homot = GroupMap(x_m1, x_0, assemble(b_m1, x_m1, b_0, x_0, -1, 1), check=False)
    if k.is_degreewise_free():
        return subquotient(homot, chain)

    def wellness(blocks, grp, s: int) -> GroupMap:
        rows = []
        groups = []
        for n, off, size in blocks:
            rel = k.term(n).relations
            t = l.term(n + s)
            g = t.num_generators
            r = zeros(rel.shape[1] * g, grp.num_generators)
            r[:, off : off + size] = kron(rel.T.copy(), identity(g))
            rows.append(r)
            groups.append(FgAbGroup(rel.shape[1] * g, kron(identity(rel.shape[1]), t.relations)))
        tgt = direct_sum(groups)
        mat = as_int_matrix(
            __import__("numpy").concatenate(rows, axis=0) if rows else zeros(0, grp.num_generators),
            tgt.num_generators,
            grp.num_generators,
        )
        return GroupMap(grp, tgt, mat, check=False)

    w0, inc0 = kernel(wellness(b_0, x_0, 0))
    wm1, incm1 = kernel(wellness(b_m1, x_m1, -1))
    cyc, inc_c = kernel(chain.compose(inc0))
    full = inc0.compose(inc_c)
    bounds = lift_through(full, homot.compose(incm1).matrix)
    if bounds is None:
        raise InvariantViolation("homotopy images are not chain maps")
    h = FgAbGroup(cyc.num_generators, hstack([cyc.relations, bounds], cyc.num_generators))
    return FgAbGroup.from_invariants(*h.canonical_form())

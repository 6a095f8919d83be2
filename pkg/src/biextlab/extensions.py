"""Extensions of Picard presentations and the symmetric cocycle model.

An extension of P by G is a sequence G --i--> E --j--> P with a homotopy
h: j∘i ⇒ 0 (so −j∘i = dh + hd) such that, equivalently,

(a) H^0(j) is onto and x ↦ (i x, h x) is a quasi-isomorphism onto
    τ≤0(MC(j)[−1]) in degrees −1, 0;
(b) H^−1(i) is injective and (x, e) ↦ j e − h x identifies τ≥−1 MC(i) with P.

For plain finite P the classes are symmetric 2-cocycles f: P × P → G modulo
coboundaries θ(p + q) − θ(p) − θ(q).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ._cochains import CochainProblem
from .abelian import (
    FgAbGroup,
    FiniteModel,
    GroupMap,
    InvariantViolation,
    Unsupported,
    as_int_matrix,
    block_diag,
    hstack,
    identity,
    kernel,
    lift_through,
    matmul,
    vstack,
    zeros,
)
from .complexes import (
    BoundedComplex,
    ChainMap,
    Homotopy,
    induced_map,
    mapping_cone,
    shift,
)
from .picard import PicardPresentation, fibered_product_square, fibered_sum_square


@dataclass(frozen=True)
class ExtensionDatum:
    E: PicardPresentation
    i: ChainMap
    j: ChainMap
    h: Homotopy | None = None
    # optional set-theoretic section P → E^0 for plain data, as generator coordinates per element of P
    section: tuple | None = field(default=None, compare=False)

    @property
    def G(self) -> BoundedComplex:
        return self.i.source

    @property
    def P(self) -> BoundedComplex:
        return self.j.target

    def homotopy(self) -> Homotopy:
        if self.h is not None:
            return self.h
        ji = self.j.compose(self.i)
        return Homotopy(ji, ChainMap.zero(ji.source, ji.target), {})

    def is_strict(self) -> bool:
        return self.h is None or self.h.is_zero()


@dataclass(frozen=True)
class ExtensionReport:
    condition_a: bool
    condition_b: bool

    @property
    def valid(self) -> bool:
        return self.condition_a and self.condition_b


def _iso_on(f: ChainMap, degrees) -> bool:
    return all(induced_map(f, n).is_isomorphism() for n in degrees)


def _check_a(e: ExtensionDatum, h: Homotopy) -> bool:
    j = e.j
    if not induced_map(j, 0).is_surjective():
        return False
    target = shift(mapping_cone(j), -1)  # degree n: E^n ⊕ P^(n-1)
    comps = {}
    for n in e.G.degrees:
        comps[n] = vstack([e.i[n].matrix, h[n].matrix], e.G.term(n).num_generators)
    u = ChainMap(e.G, target, comps)
    return _iso_on(u, (-1, 0))


def _check_b(e: ExtensionDatum, h: Homotopy) -> bool:
    i = e.i
    if not induced_map(i, -1).is_injective():
        return False
    source = mapping_cone(i)  # degree n: G^(n+1) ⊕ E^n
    comps = {}
    for n in source.degrees:
        comps[n] = hstack([-h[n + 1].matrix, e.j[n].matrix], e.P.term(n).num_generators)
    v = ChainMap(source, e.P, comps)
    return _iso_on(v, (-1, 0))


def validate_extension(e: ExtensionDatum) -> ExtensionReport:
    """Evaluate both defining conditions; they must agree."""
    h = e.homotopy()
    a = _check_a(e, h)
    b = _check_b(e, h)
    if a != b:
        raise InvariantViolation(f"extension conditions disagree: (a)={a}, (b)={b}")
    return ExtensionReport(a, b)


def trivial_extension(p: PicardPresentation, g: PicardPresentation) -> ExtensionDatum:
    """G ⊕ P with the inclusion and projection."""
    pc, gc = p.complex, g.complex
    degs = sorted(set(pc.degrees) | set(gc.degrees))
    terms = {n: FgAbGroup(gc.term(n).num_generators + pc.term(n).num_generators,
                          block_diag([gc.term(n).relations, pc.term(n).relations])) for n in degs}
    e = BoundedComplex(terms, {n: block_diag([gc.d(n).matrix, pc.d(n).matrix]) for n in degs})
    inc, proj = {}, {}
    for n in degs:
        a, b = gc.term(n).num_generators, pc.term(n).num_generators
        inc[n] = vstack([identity(a), zeros(b, a)], a)
        proj[n] = hstack([zeros(b, a), identity(b)], b)
    return ExtensionDatum(PicardPresentation(e), ChainMap(gc, e, inc), ChainMap(e, pc, proj))


def extension_from_ses(i: GroupMap, j: GroupMap) -> ExtensionDatum:
    """A short exact sequence of groups A → B → C, viewed in degree 0."""
    a, b, c = (BoundedComplex.concentrated(x) for x in (i.source, i.target, j.target))
    return ExtensionDatum(PicardPresentation(b), ChainMap(a, b, {0: i.matrix}), ChainMap(b, c, {0: j.matrix}))


# ---------------------------------------------------------------------------
# the symmetric cocycle model


class ExtCochains(CochainProblem):
    """G^P → G^(P×P) → G^(P×P) ⊕ G^(P×P×P) (symmetry, cocycle identity)."""

    def __init__(self, p: FgAbGroup, g: FgAbGroup):
        if not p.is_finite():
            raise Unsupported("the cocycle model needs a finite group P")
        self.p = p
        self.model = FiniteModel(p)
        n = self.model.size
        add = self.model.add_table()
        idx2 = np.arange(n * n).reshape(n, n)
        m0 = np.zeros((n * n, n), dtype=np.int64)
        a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        rows = idx2[a, b].ravel()
        np.add.at(m0, (rows, add[a, b].ravel()), 1)
        np.add.at(m0, (rows, a.ravel()), -1)
        np.add.at(m0, (rows, b.ravel()), -1)
        sym = np.zeros((n * n, n * n), dtype=np.int64)
        np.add.at(sym, (rows, idx2[a, b].ravel()), 1)
        np.add.at(sym, (rows, idx2[b, a].ravel()), -1)
        x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        x, y, z = x.ravel(), y.ravel(), z.ravel()
        rows3 = np.arange(n**3)
        coc = np.zeros((n**3, n * n), dtype=np.int64)
        np.add.at(coc, (rows3, idx2[add[x, y], z]), 1)
        np.add.at(coc, (rows3, idx2[x, y]), 1)
        np.add.at(coc, (rows3, idx2[x, add[y, z]]), -1)
        np.add.at(coc, (rows3, idx2[y, z]), -1)
        super().__init__(m0, np.concatenate([sym, coc], axis=0), g)


@dataclass(frozen=True)
class SymmetricCocycle:
    """A table f: P × P → G (generator coordinates), indexed by elements() order."""

    P: FgAbGroup
    G: FgAbGroup
    table: np.ndarray  # shape (|P|, |P|, number of generators of G)

    def cochains(self) -> ExtCochains:
        return ExtCochains(self.P, self.G)

    def flat(self) -> np.ndarray:
        n = self.table.shape[0]
        return self.table.reshape(n * n, self.G.num_generators)

    def is_valid(self) -> bool:
        return self.cochains().is_cocycle(self.flat())

    def validate(self) -> None:
        if not self.is_valid():
            raise InvariantViolation("table is not a symmetric 2-cocycle")

    def __add__(self, other: "SymmetricCocycle") -> "SymmetricCocycle":
        return SymmetricCocycle(self.P, self.G, self.table + other.table)

    def same_class(self, other: "SymmetricCocycle") -> bool:
        return self.cochains().is_coboundary(self.flat() - other.flat())

    @classmethod
    def zero(cls, p: FgAbGroup, g: FgAbGroup) -> "SymmetricCocycle":
        n = FiniteModel(p).size
        return cls(p, g, np.zeros((n, n, g.num_generators), dtype=object))

    @classmethod
    def from_function(cls, p: FgAbGroup, g: FgAbGroup, fn) -> "SymmetricCocycle":
        """Table from ``fn(a, b)`` on element indices, returning G-coordinates."""
        n = FiniteModel(p).size
        t = np.zeros((n, n, g.num_generators), dtype=object)
        for a, b in itertools.product(range(n), repeat=2):
            t[a, b] = as_int_matrix([[int(c)] for c in fn(a, b)], g.num_generators, 1)[:, 0]
        return cls(p, g, t)


def ext_classes(p: FgAbGroup, g: FgAbGroup) -> FgAbGroup:
    """Symmetric 2-cocycles P × P → G modulo coboundaries."""
    return ExtCochains(p, g).cohomology()


def cocycle_to_extension(c: SymmetricCocycle) -> ExtensionDatum:
    """E on generators e_p (p ∈ P) and those of G, with e_p + e_q − e_(p+q) = f(p, q)."""
    c.validate()
    p, g = c.P, c.G
    model = FiniteModel(p)
    n, ng = model.size, g.num_generators
    add = model.add_table()
    cols = []
    for a, b in itertools.product(range(n), repeat=2):
        v = np.zeros(n + ng, dtype=object)
        v[a] += 1
        v[b] += 1
        v[add[a, b]] -= 1
        v[n:] -= np.asarray(c.table[a, b], dtype=object)
        cols.append(v.reshape(-1, 1))
    rel = hstack(cols + [np.concatenate([zeros(n, g.relations.shape[1]), g.relations], axis=0)], n + ng)
    e = FgAbGroup(n + ng, rel)
    i = vstack([zeros(n, ng), identity(ng)], ng)
    jm = zeros(p.num_generators, n + ng)
    for a in range(n):
        jm[:, a] = model.coords_of(a)
    ec = BoundedComplex.concentrated(e)
    section = tuple(tuple(int(x) for x in identity(n + ng)[:, a]) for a in range(n))
    return ExtensionDatum(
        PicardPresentation(ec),
        ChainMap(BoundedComplex.concentrated(g), ec, {0: i}),
        ChainMap(ec, BoundedComplex.concentrated(p), {0: jm}),
        section=section,
    )


def _plain_parts(e: ExtensionDatum) -> tuple[FgAbGroup, FgAbGroup, FgAbGroup]:
    for k in (e.G, e.E.complex, e.P):
        if any(n != 0 for n in k.degrees):
            raise Unsupported("the cocycle model applies to extensions of groups in degree 0")
    return e.G.term(0), e.E.complex.term(0), e.P.term(0)


def extension_to_cocycle(e: ExtensionDatum) -> SymmetricCocycle:
    """The cocycle of a section p ↦ s(p); the stored section if any, else solved lifts."""
    g, eg, p = _plain_parts(e)
    model = FiniteModel(p)
    n = model.size
    j = e.j[0]
    i = e.i[0]
    if e.section is not None:
        s = [np.array(x, dtype=object) for x in e.section]
    else:
        s = []
        for a in range(n):
            lift = lift_through(j, as_int_matrix([[c] for c in model.coords_of(a)], p.num_generators, 1))
            if lift is None:
                raise InvariantViolation("j is not surjective")
            s.append(lift[:, 0])
    add = model.add_table()
    table = np.zeros((n, n, g.num_generators), dtype=object)
    for a, b in itertools.product(range(n), repeat=2):
        v = (s[a] + s[b] - s[add[a, b]]).reshape(-1, 1)
        x = lift_through(i, v)
        if x is None:
            raise InvariantViolation("s(p) + s(q) − s(p + q) does not come from G")
        table[a, b] = x[:, 0]
    return SymmetricCocycle(p, g, table)


# ---------------------------------------------------------------------------
# operations on strict extensions


def _require_strict(*es: ExtensionDatum) -> None:
    for e in es:
        if not e.is_strict():
            raise Unsupported("operation implemented for extensions with j∘i = 0 on the nose")


def pullback_ext(e: ExtensionDatum, u: ChainMap) -> ExtensionDatum:
    """E ×_P P' along u: P' → P."""
    _require_strict(e)
    sq = fibered_product_square(e.j, u)
    ec = sq.presentation.complex
    comps = {}
    for n in e.G.degrees:
        ng = e.G.term(n).num_generators
        src = u.source.term(n)
        pair = vstack([e.i[n].matrix, zeros(src.num_generators, ng)], ng)
        ambient = FgAbGroup(pair.shape[0], block_diag([e.E.complex.term(n).relations, src.relations]))
        legs = np.concatenate([sq.to_p[n].matrix, sq.to_q[n].matrix], axis=0)
        lifted = lift_through(GroupMap(ec.term(n), ambient, legs, check=False), pair)
        if lifted is None:
            raise InvariantViolation("i does not land in the fibered product")
        comps[n] = lifted
    return ExtensionDatum(sq.presentation, ChainMap(e.G, ec, comps), sq.to_q)


def pushdown_ext(e: ExtensionDatum, w: ChainMap) -> ExtensionDatum:
    """E ⊔_G G' along w: G → G'."""
    _require_strict(e)
    sq = fibered_sum_square(e.i, w)
    ec = sq.presentation.complex
    comps = {}
    for n in ec.degrees:
        b = w.target.term(n).num_generators
        comps[n] = hstack([e.j[n].matrix, zeros(e.P.term(n).num_generators, b)], e.P.term(n).num_generators)
    return ExtensionDatum(sq.presentation, sq.from_q, ChainMap(ec, e.P, comps))


def _same_complex(a: BoundedComplex, b: BoundedComplex) -> bool:
    degs = sorted(set(a.degrees) | set(b.degrees))
    return all(
        a.term(n).num_generators == b.term(n).num_generators
        and a.term(n).relations.shape == b.term(n).relations.shape
        and np.array_equal(a.term(n).relations, b.term(n).relations)
        and np.array_equal(a.d(n).matrix, b.d(n).matrix)
        for n in degs
    )


def baer_sum(e1: ExtensionDatum, e2: ExtensionDatum) -> ExtensionDatum:
    """Degreewise {(x, y): j1 x = j2 y} / {(i1 g, −i2 g)}."""
    _require_strict(e1, e2)
    p, g = e1.P, e1.G
    if not (_same_complex(p, e2.P) and _same_complex(g, e2.G)):
        raise ValueError("extensions have different ends")
    x1, x2 = e1.E.complex, e2.E.complex
    degs = sorted(set(x1.degrees) | set(x2.degrees))
    fib, incs, terms = {}, {}, {}
    for n in degs:
        s = FgAbGroup(x1.term(n).num_generators + x2.term(n).num_generators,
                      block_diag([x1.term(n).relations, x2.term(n).relations]))
        m = hstack([e1.j[n].matrix, -e2.j[n].matrix], p.term(n).num_generators)
        k, inc = kernel(GroupMap(s, p.term(n), m, check=False))
        anti = vstack([e1.i[n].matrix, -e2.i[n].matrix], g.term(n).num_generators)
        lifted = lift_through(inc, anti)
        if lifted is None:
            raise InvariantViolation("(i1, −i2) does not land in the fibered product")
        terms[n] = FgAbGroup(k.num_generators, hstack([k.relations, lifted], k.num_generators))
        fib[n], incs[n] = k, inc
    diffs = {}
    for n in degs:
        if n + 1 in incs:
            dsum = block_diag([x1.d(n).matrix, x2.d(n).matrix])
            d = lift_through(incs[n + 1], matmul(dsum, incs[n].matrix))
            diffs[n] = d
    ec = BoundedComplex(terms, diffs)
    icomp, jcomp = {}, {}
    for n in degs:
        a = x1.term(n).num_generators
        first = vstack([e1.i[n].matrix, zeros(x2.term(n).num_generators, g.term(n).num_generators)],
                       g.term(n).num_generators)
        if g.term(n).num_generators:
            lifted = lift_through(incs[n], first)
            if lifted is None:
                raise InvariantViolation("(i1, 0) does not land in the fibered product")
            icomp[n] = lifted
        jcomp[n] = matmul(e1.j[n].matrix, incs[n].matrix[:a, :])
    return ExtensionDatum(PicardPresentation(ec), ChainMap(g, ec, icomp), ChainMap(ec, p, jcomp))


def ext_class_order(cocycles: list[SymmetricCocycle]) -> int | None:
    """Order of the subgroup of Ext classes generated by the given cocycles."""
    if not cocycles:
        return 1
    c0 = cocycles[0]
    return c0.cochains().class_subgroup_order([c.flat() for c in cocycles])

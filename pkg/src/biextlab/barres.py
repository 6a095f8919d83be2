"""Bar partial resolutions and the Ψ-groups of a three-term complex.

Outer degrees are cohomological: L0 sits in degree 0, L1 in −1, L2 in −2.
Each L_k(P) is itself a complex in the inner degrees of P, with one row
Z[P^n × ... × P^n] per nontrivial term P^n; the inner differential applies
d_P to every coordinate.

On basis elements:

    D0[a, b]    = [a + b] − [a] − [b]
    D1[a, b]    = [a, b] − [b, a]
    D1[a, b, c] = [a + b, c] − [a, b + c] + [a, b] − [b, c]
    ε[a]        = a
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .abelian import (
    FgAbGroup,
    FiniteModel,
    GroupMap,
    InvariantViolation,
    Unsupported,
    as_int_matrix,
    block_diag,
    direct_sum,
    free,
    hom_group,
    matmul,
    zeros,
)
from .complexes import (
    Bicomplex,
    BoundedComplex,
    ChainMap,
    cohomology,
    direct_sum_complex,
    subquotient,
    tensor,
    tensor_maps,
)
from .derived import ext_group
from .picard import PicardPresentation

DEFAULT_MAX_RANK = 20000


def _cx(p) -> BoundedComplex:
    return p.complex if isinstance(p, PicardPresentation) else p


# ---------------------------------------------------------------------------
# three-term complexes of Picard presentations


@dataclass(frozen=True)
class PsiInput:
    """R --DR--> Q --DQ--> P with D^Q D^R = d_P h + h d_R.

    ``h`` maps degree n of R to degree n − 1 of P. When the terms are
    themselves complexes with more than two degrees the same formulas apply.
    """

    R: BoundedComplex
    Q: BoundedComplex
    P: BoundedComplex
    DR: ChainMap
    DQ: ChainMap
    h: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        for n in self.R.degrees:
            lhs = self.DQ[n].compose(self.DR[n]).matrix
            rhs = matmul(self.P.d(n - 1).matrix, self.hmap(n)) + matmul(self.hmap(n + 1), self.R.d(n).matrix)
            diff = GroupMap(self.R.term(n), self.P.term(n), lhs - rhs, check=False)
            if not diff.is_zero():
                raise InvariantViolation(f"D^Q∘D^R ≠ d h + h d at degree {n}")

    def hmap(self, n: int) -> np.ndarray:
        m = self.h.get(n)
        if m is None:
            return zeros(self.P.term(n - 1).num_generators, self.R.term(n).num_generators)
        return as_int_matrix(m, self.P.term(n - 1).num_generators, self.R.term(n).num_generators)

    def total(self) -> BoundedComplex:
        """Tot^n = P^n ⊕ Q^(n+1) ⊕ R^(n+2); d = d_P on P, D^Q − d_Q on Q, D^R + d_R − h on R."""
        p, q, r = self.P, self.Q, self.R
        degs = sorted(set(p.degrees) | {n - 1 for n in q.degrees} | {n - 2 for n in r.degrees})

        def sizes(n):
            return p.term(n).num_generators, q.term(n + 1).num_generators, r.term(n + 2).num_generators

        terms = {n: direct_sum([p.term(n), q.term(n + 1), r.term(n + 2)]) for n in degs}
        diffs = {}
        for n in degs:
            a0, b0, c0 = sizes(n)
            a1, b1, c1 = sizes(n + 1)
            m = zeros(a1 + b1 + c1, a0 + b0 + c0)
            m[:a1, :a0] = p.d(n).matrix
            m[:a1, a0 : a0 + b0] = self.DQ[n + 1].matrix
            m[a1 : a1 + b1, a0 : a0 + b0] = -q.d(n + 1).matrix
            m[:a1, a0 + b0 :] = -self.hmap(n + 2)
            m[a1 : a1 + b1, a0 + b0 :] = self.DR[n + 2].matrix
            m[a1 + b1 :, a0 + b0 :] = r.d(n + 2).matrix
            diffs[n] = m
        return BoundedComplex(terms, diffs)

    @classmethod
    def from_p(cls, p) -> "PsiInput":
        """The degenerate input with R = Q = 0."""
        p = _cx(p)
        z = BoundedComplex({})
        return cls(z, z, p, ChainMap.zero(z, z), ChainMap.zero(z, p))


def psi_groups(l: PsiInput, g, i: int) -> FgAbGroup:
    """Ψ^i = Ext^i(Tot(L), G)."""
    return ext_group(l.total(), _cx(g), i)


def _hom_block_matrix(sources, targets, entries) -> np.ndarray:
    """Matrix of a map ⊕ sources → ⊕ targets between Hom groups.

    ``sources`` and ``targets`` are lists of (name, HomSpace); ``entries``
    maps (target name, source name) to a function of the source matrix.
    """
    cols = []
    for sname, sspace in sources:
        for bm in sspace.basis:
            col = []
            for tname, tspace in targets:
                fn = entries.get((tname, sname))
                if fn is None:
                    col.extend([0] * tspace.group.num_generators)
                else:
                    col.extend(tspace.coordinates(fn(bm.matrix)))
            cols.append(col)
    n_rows = sum(t.group.num_generators for _, t in targets)
    out = zeros(n_rows, len(cols))
    for j, col in enumerate(cols):
        out[:, j] = col
    return out


def psi_low_formula(l: PsiInput, g, literal: bool = False) -> tuple[FgAbGroup, FgAbGroup]:
    """(H^0, H^−1) of [K] = [Hom(P^0, G^−1) → K].

    K is the group of triples a: P^0 → G^0, b: P^−1 → G^−1, c: Q^0 → G^−1
    with d_G b = a d_P, d_G c = a D^Q, b D^Q = c d_Q and b h = c D^R, and
    ψ ↦ (d_G ψ, ψ d_P, ψ D^Q). With ``literal`` set, K is replaced by the
    sum of two separate kernels K1 = {(a, b): a D^Q = 0, b D^Q = 0} and
    K2 = {c: d_G c = 0, c d_Q = 0}, which agrees with the Ψ-groups only in
    special cases. Hom into G is taken term by term, so the result equals
    the Ψ-groups only when R, Q and P have free terms; torsion terms are
    accepted but then Ext^1 contributions are invisible.
    """
    g = _cx(g)
    for k in (l.P, l.Q, l.R, g):
        if any(n not in (-1, 0) for n in k.degrees):
            raise ValueError("the low-degree formula needs complexes in degrees −1, 0")
    P0, P1 = l.P.term(0), l.P.term(-1)
    Q0, Q1 = l.Q.term(0), l.Q.term(-1)
    R0 = l.R.term(0)
    G0, G1 = g.term(0), g.term(-1)
    dP, dQ, dG = l.P.d(-1).matrix, l.Q.d(-1).matrix, g.d(-1).matrix
    DQ0, DQ1 = l.DQ[0].matrix, l.DQ[-1].matrix
    DR0 = l.DR[0].matrix
    h0 = l.hmap(0)

    src = [("psi", hom_group(P0, G1))]
    mid = [("a", hom_group(P0, G0)), ("b", hom_group(P1, G1)), ("c", hom_group(Q0, G1))]
    to_k = _hom_block_matrix(src, mid, {
        ("a", "psi"): lambda m: matmul(dG, m),
        ("b", "psi"): lambda m: matmul(m, dP),
        ("c", "psi"): lambda m: matmul(m, DQ0),
    })
    if not literal:
        tgt = [("P1G0", hom_group(P1, G0)), ("Q0G0", hom_group(Q0, G0)),
               ("Q1G1", hom_group(Q1, G1)), ("R0G1", hom_group(R0, G1))]
        cond = _hom_block_matrix(mid, tgt, {
            ("P1G0", "a"): lambda m: -matmul(m, dP),
            ("P1G0", "b"): lambda m: matmul(dG, m),
            ("Q0G0", "a"): lambda m: -matmul(m, DQ0),
            ("Q0G0", "c"): lambda m: matmul(dG, m),
            ("Q1G1", "b"): lambda m: matmul(m, DQ1),
            ("Q1G1", "c"): lambda m: -matmul(m, dQ),
            ("R0G1", "b"): lambda m: -matmul(m, h0),
            ("R0G1", "c"): lambda m: matmul(m, DR0),
        })
    else:
        tgt = [("K1a", hom_group(Q0, G0)), ("K1b", hom_group(Q1, G1)),
               ("K2a", hom_group(Q0, G0)), ("K2b", hom_group(Q1, G1))]
        cond = _hom_block_matrix(mid, tgt, {
            ("K1a", "a"): lambda m: matmul(m, DQ0),
            ("K1b", "b"): lambda m: matmul(m, DQ1),
            ("K2a", "c"): lambda m: matmul(dG, m),
            ("K2b", "c"): lambda m: matmul(m, dQ),
        })

    def space(blocks) -> FgAbGroup:
        return direct_sum([sp.group for _, sp in blocks])

    s, m_, t = space(src), space(mid), space(tgt)
    f = GroupMap(s, m_, to_k, check=False)
    gmap = GroupMap(m_, t, cond, check=False)
    if not gmap.compose(f).is_zero():
        raise InvariantViolation("Hom(P^0, G^-1) does not map into the kernels for this input")
    h0_group = subquotient(f, gmap)
    hm1 = subquotient(GroupMap(FgAbGroup.trivial(), s, zeros(s.num_generators, 0), check=False), f)
    return h0_group, hm1


# ---------------------------------------------------------------------------
# the bar resolution of one presentation


def _rows(p: BoundedComplex) -> list[int]:
    """Inner degrees carrying a nontrivial group."""
    rows = []
    for n in p.degrees:
        g = p.term(n)
        if not g.is_finite():
            raise Unsupported("the bar resolution needs finite terms")
        if not g.is_trivial():
            rows.append(n)
    return rows


def _element_map(f: GroupMap, ms: FiniteModel, mt: FiniteModel) -> np.ndarray:
    return np.array([mt.index_of(f(ms.coords_of(a))) for a in range(ms.size)], dtype=np.int64)


def _tuple_index(idx: tuple[np.ndarray, ...], n: int) -> np.ndarray:
    out = np.zeros_like(idx[0])
    for x in idx:
        out = out * n + x
    return out


def _basis_map(n_rows: int, n_cols: int, terms) -> np.ndarray:
    m = np.zeros((n_rows, n_cols), dtype=np.int64)
    cols = np.arange(n_cols)
    for coef, rows in terms:
        np.add.at(m, (np.asarray(rows).ravel(), cols), coef)
    return m


@dataclass(frozen=True)
class BarResolution:
    base: PicardPresentation
    L0: BoundedComplex
    L1: BoundedComplex
    L2: BoundedComplex
    D0: ChainMap
    D1: ChainMap
    epsilon: ChainMap

    def as_psi_input(self) -> PsiInput:
        return PsiInput(self.L2, self.L1, self.L0, self.D1, self.D0)

    def total(self) -> BoundedComplex:
        return self.as_psi_input().total()

    def bicomplex(self) -> Bicomplex:
        """Outer degree p, inner degree q; horizontal maps D, vertical the inner differentials."""
        layers = {0: self.L0, -1: self.L1, -2: self.L2}
        maps = {-1: self.D0, -2: self.D1}
        terms, dh, dv = {}, {}, {}
        for p, cx in layers.items():
            for q in cx.degrees:
                terms[(p, q)] = cx.term(q)
                dv[(p, q)] = cx.d(q).matrix
                if p in maps:
                    dh[(p, q)] = maps[p][q].matrix
        return Bicomplex(terms, dh, dv)

    def ranks(self) -> dict[str, dict[int, int]]:
        return {name: {n: cx.term(n).num_generators for n in cx.degrees}
                for name, cx in (("L0", self.L0), ("L1", self.L1), ("L2", self.L2))}


def bar_resolution(p) -> BarResolution:
    """L0 = Z[P], L1 = Z[P×P], L2 = Z[P×P] ⊕ Z[P×P×P], row by row."""
    base = p if isinstance(p, PicardPresentation) else PicardPresentation(p)
    cx = base.complex
    rows = _rows(cx)
    models = {n: FiniteModel(cx.term(n)) for n in rows}
    sizes = {n: models[n].size for n in rows}
    l0 = {n: free(s) for n, s in sizes.items()}
    l1 = {n: free(s * s) for n, s in sizes.items()}
    l2 = {n: free(s * s + s**3) for n, s in sizes.items()}
    d0, d1, eps = {}, {}, {}
    for n in rows:
        s = sizes[n]
        add = models[n].add_table()
        a, b = np.meshgrid(np.arange(s), np.arange(s), indexing="ij")
        d0[n] = _basis_map(s, s * s, [(1, add[a, b]), (-1, a), (-1, b)])
        sym = _basis_map(s * s, s * s, [(1, _tuple_index((a, b), s)), (-1, _tuple_index((b, a), s))])
        x, y, z = np.meshgrid(np.arange(s), np.arange(s), np.arange(s), indexing="ij")
        assoc = _basis_map(s * s, s**3, [
            (1, _tuple_index((add[x, y], z), s)), (-1, _tuple_index((x, add[y, z]), s)),
            (1, _tuple_index((x, y), s)), (-1, _tuple_index((y, z), s)),
        ])
        d1[n] = np.concatenate([sym, assoc], axis=1)
        g = cx.term(n)
        e = zeros(g.num_generators, s)
        for k in range(s):
            e[:, k] = models[n].coords_of(k)
        eps[n] = e

    inner0, inner1, inner2 = {}, {}, {}
    for n in rows:
        if n + 1 not in rows:
            continue
        emap = _element_map(cx.d(n), models[n], models[n + 1])
        s, t = sizes[n], sizes[n + 1]
        inner0[n] = _basis_map(t, s, [(1, emap)])
        a, b = np.meshgrid(np.arange(s), np.arange(s), indexing="ij")
        inner1[n] = _basis_map(t * t, s * s, [(1, _tuple_index((emap[a], emap[b]), t))])
        x, y, z = np.meshgrid(np.arange(s), np.arange(s), np.arange(s), indexing="ij")
        triple = _basis_map(t**3, s**3, [(1, _tuple_index((emap[x], emap[y], emap[z]), t))])
        inner2[n] = block_diag([inner1[n], triple])
    L0 = BoundedComplex(l0, inner0)
    L1 = BoundedComplex(l1, inner1)
    L2 = BoundedComplex(l2, inner2)
    return BarResolution(
        base, L0, L1, L2,
        ChainMap(L1, L0, d0), ChainMap(L2, L1, d1), ChainMap(L0, cx, eps),
    )


# ---------------------------------------------------------------------------
# the pair resolution


@dataclass(frozen=True)
class PairResolution:
    """L(P) ⊗ L(Q) in outer degrees 0, −1, −2.

    Blocks: degree 0 is L0⊗L0; degree −1 is (L0⊗L1, L1⊗L0); degree −2 is
    (L0⊗L2, L2⊗L0, L1⊗L1). Outer maps are D⊗1 + (−1)^k 1⊗D on L_k(P) ⊗ L_l(Q).
    """

    left: BarResolution
    right: BarResolution
    L0: BoundedComplex
    L1: BoundedComplex
    L2: BoundedComplex
    D0: ChainMap
    D1: ChainMap

    def as_psi_input(self) -> PsiInput:
        return PsiInput(self.L2, self.L1, self.L0, self.D1, self.D0)

    def total(self) -> BoundedComplex:
        return self.as_psi_input().total()

    def block_ranks(self) -> dict[tuple[int, int], int]:
        out = {}
        for (k, l), cx in self._blocks.items():
            out[(k, l)] = sum(cx.term(n).num_generators for n in cx.degrees)
        return out

    _blocks: dict = field(default_factory=dict, repr=False, compare=False)


_ORDER = {0: [(0, 0)], -1: [(0, -1), (-1, 0)], -2: [(0, -2), (-2, 0), (-1, -1)]}


def pair_resolution(p, q) -> PairResolution:
    lp, lq = bar_resolution(p), bar_resolution(q)
    layers_p = {0: lp.L0, -1: lp.L1, -2: lp.L2}
    layers_q = {0: lq.L0, -1: lq.L1, -2: lq.L2}
    maps_p = {-1: lp.D0, -2: lp.D1}
    maps_q = {-1: lq.D0, -2: lq.D1}
    ids_p = {k: ChainMap.identity(c) for k, c in layers_p.items()}
    ids_q = {k: ChainMap.identity(c) for k, c in layers_q.items()}
    blocks = {(k, l): tensor(layers_p[k], layers_q[l]) for o in _ORDER for k, l in _ORDER[o]}
    outer = {o: direct_sum_complex([blocks[kl] for kl in _ORDER[o]]) for o in _ORDER}

    def offsets(o, n):
        out, off = {}, 0
        for kl in _ORDER[o]:
            size = blocks[kl].term(n).num_generators
            out[kl] = (off, size)
            off += size
        return out

    def outer_map(o: int) -> ChainMap:
        src, tgt = outer[o], outer[o + 1]
        comps = {}
        for n in src.degrees:
            so, to = offsets(o, n), offsets(o + 1, n)
            m = zeros(tgt.term(n).num_generators, src.term(n).num_generators)
            for k, l in _ORDER[o]:
                s0, ss = so[(k, l)]
                if ss == 0:
                    continue
                if k in maps_p and (k + 1, l) in to:
                    t0, ts = to[(k + 1, l)]
                    if ts:
                        piece = tensor_maps(maps_p[k], ids_q[l])[n].matrix
                        m[t0 : t0 + ts, s0 : s0 + ss] += piece
                if l in maps_q and (k, l + 1) in to:
                    t0, ts = to[(k, l + 1)]
                    if ts:
                        sign = -1 if k % 2 else 1
                        piece = tensor_maps(ids_p[k], maps_q[l])[n].matrix
                        m[t0 : t0 + ts, s0 : s0 + ss] += sign * piece
            comps[n] = m
        return ChainMap(src, tgt, comps)

    d0, d1 = outer_map(-1), outer_map(-2)
    if not d0.compose(d1).is_zero():
        raise InvariantViolation("D0∘D1 ≠ 0 in the pair resolution")
    return PairResolution(lp, lq, outer[0], outer[-1], outer[-2], d0, d1, blocks)


def biext_via_bar(p, q, g, i: int, max_rank: int = DEFAULT_MAX_RANK) -> FgAbGroup:
    """Ext^i(Tot(L(P, Q)), G): the Ψ-group of the pair resolution."""
    pr = pair_resolution(p, q)
    tot = pr.total()
    rank = sum(tot.term(n).num_generators for n in tot.degrees)
    if rank > max_rank:
        raise Unsupported(f"pair resolution has total rank {rank}, above the bound {max_rank}")
    return ext_group(tot, _cx(g), i)


def augmentation_check(p) -> dict[int, tuple[FgAbGroup, FgAbGroup]]:
    """H^i(Tot L(P)) beside H^i(P) for i = −1, 0, 1."""
    r = bar_resolution(p)
    tot = r.total()
    return {i: (cohomology(tot, i), cohomology(r.base.complex, i)) for i in (-1, 0, 1)}



"""Free replacements, Hom complexes and Ext over the integers.

Since Z has global dimension 1, each term K^n is presented as
0 → R^n --B_n--> F^n → K^n → 0 with F^n, R^n free and B_n injective. The
differentials lift to D_n: F^n → F^(n+1) and φ_n: R^n → R^(n+1) with
B φ = D B, and the failure of D to square to zero is absorbed by
h_n: F^n → R^(n+2) with B h = D D. The replacement is

    T^m = F^m ⊕ R^(m+1),   d(x, r) = (D x + B r, −φ r − h x),

and (x, r) ↦ x is a quasi-isomorphism T → K.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .abelian import (
    FgAbGroup,
    GroupMap,
    IntMatrix,
    InvariantViolation,
    column_hnf,
    direct_sum,
    free,
    identity,
    kron,
    matmul,
    solve_integer_matrix,
    zeros,
)
from .complexes import (
    BoundedComplex,
    ChainMap,
    cohomology,
    induced_map,
    is_quasi_iso,
    tensor,
    tensor_maps,
)

Strategy = Literal["generators", "smith"]


@dataclass(frozen=True)
class FreeReplacement:
    free_complex: BoundedComplex
    comparison: ChainMap
    # per degree: (relation lattice basis B_n, lifted differential on relations φ_n, h_n)
    presentation: dict

    def is_quasi_iso(self) -> bool:
        return is_quasi_iso(self.comparison)


def _relation_basis(g: FgAbGroup) -> IntMatrix:
    h, _ = column_hnf(g.relations)
    return h


def _diagonalized(k: BoundedComplex) -> tuple[BoundedComplex, ChainMap]:
    """An isomorphic complex with diagonal terms, and the isomorphism to K."""
    terms, to, back = {}, {}, {}
    for n in k.degrees:
        h, to_h, from_h = k.term(n).diagonal_iso()
        terms[n], to[n], back[n] = h, to_h, from_h
    diffs = {}
    for n in k.degrees:
        if n + 1 in terms:
            diffs[n] = matmul(to[n + 1], matmul(k.d(n).matrix, back[n]))
    kd = BoundedComplex(terms, diffs, check=False)
    return kd, ChainMap(kd, k, {n: back[n] for n in terms}, check=False)


def free_replacement(k: BoundedComplex, strategy: Strategy = "generators") -> FreeReplacement:
    """A degreewise free complex with a quasi-isomorphism onto K.

    ``generators`` presents each term on its own generators; ``smith`` first
    moves every term to its diagonal form. Both give quasi-isomorphic results.
    """
    if strategy == "smith":
        kd, iso = _diagonalized(k)
        rep = free_replacement(kd, "generators")
        comp = iso.compose(rep.comparison)
        return FreeReplacement(rep.free_complex, comp, rep.presentation)
    if strategy != "generators":
        raise ValueError(f"unknown strategy {strategy!r}")
    if k.is_degreewise_free():
        comp = _identity_comparison(k)
        return FreeReplacement(comp.source, comp, {})
    degs = k.degrees
    lo, hi = degs[0], degs[-1]
    f = {n: k.term(n).num_generators for n in range(lo - 1, hi + 3)}
    b = {n: _relation_basis(k.term(n)) for n in range(lo - 1, hi + 3)}
    r = {n: b[n].shape[1] for n in b}
    dmat = {n: k.d(n).matrix for n in range(lo - 1, hi + 2)}

    phi = {}
    hmap = {}
    for n in range(lo - 1, hi + 1):
        if r[n] and r[n + 1]:
            sol = solve_integer_matrix(b[n + 1], matmul(dmat[n], b[n]))
            if sol is None:
                raise InvariantViolation(f"differential at degree {n} is not well defined")
            phi[n] = sol
        else:
            phi[n] = zeros(r[n + 1], r[n])
        dd = matmul(dmat[n + 1], dmat[n]) if f[n] and f[n + 2] else zeros(f[n + 2], f[n])
        if r[n + 2] and f[n]:
            sol = solve_integer_matrix(b[n + 2], dd)
            if sol is None:
                raise InvariantViolation(f"d∘d is not zero at degree {n}")
            hmap[n] = sol
        else:
            if dd.size and dd.any():
                raise InvariantViolation(f"d∘d is not zero at degree {n}")
            hmap[n] = zeros(r[n + 2], f[n])

    terms, diffs, comps = {}, {}, {}
    for m in range(lo - 1, hi + 1):
        size = f[m] + r[m + 1]
        if size:
            terms[m] = free(size)
            c = zeros(f[m], size)
            c[:, : f[m]] = identity(f[m])
            comps[m] = c
    for m in range(lo - 1, hi):
        a0, a1 = f[m], r[m + 1]
        c0, c1 = f[m + 1], r[m + 2]
        mat = zeros(c0 + c1, a0 + a1)
        if c0 and a0:
            mat[:c0, :a0] = dmat[m]
        if c0 and a1:
            mat[:c0, a0:] = b[m + 1]
        if c1 and a1:
            mat[c0:, a0:] = -phi[m + 1]
        if c1 and a0:
            mat[c0:, :a0] = -hmap[m]
        diffs[m] = mat
    t = BoundedComplex(terms, diffs)
    pres = {n: (b[n], phi.get(n), hmap.get(n)) for n in range(lo - 1, hi + 1)}
    return FreeReplacement(t, ChainMap(t, k, comps), pres)


def _identity_comparison(k: BoundedComplex) -> ChainMap:
    t = BoundedComplex({n: free(k.term(n).num_generators) for n in k.degrees},
                       {n: m.matrix for n, m in k.differentials.items()}, check=False)
    return ChainMap(t, k, {n: identity(k.term(n).num_generators) for n in k.degrees}, check=False)


def lift_chain_map(u: ChainMap, source_rep: FreeReplacement, target_rep: FreeReplacement) -> ChainMap:
    """A chain map between replacements covering ``u``.

    Only replacements built with the ``generators`` strategy (or free inputs)
    are supported: (x, r) ↦ (A x, ψ r + k x) with B ψ = A B' and
    B k = A D' − D A.
    """
    s, t = source_rep.free_complex, target_rep.free_complex
    ks, kt = u.source, u.target
    if ks.is_degreewise_free() and kt.is_degreewise_free():
        return ChainMap(s, t, {n: u[n].matrix for n in ks.degrees})
    degs = sorted(set(s.degrees) | set(t.degrees))
    comps = {}

    def basis(rep, k, n):
        entry = rep.presentation.get(n)
        if entry is not None:
            return entry[0]
        return _relation_basis(k.term(n))

    for m in degs:
        fs, ft = ks.term(m).num_generators, kt.term(m).num_generators
        bs1, bt1 = basis(source_rep, ks, m + 1), basis(target_rep, kt, m + 1)
        rs1, rt1 = bs1.shape[1], bt1.shape[1]
        a = u[m].matrix
        a1 = u[m + 1].matrix
        mat = zeros(ft + rt1, fs + rs1)
        if ft and fs:
            mat[:ft, :fs] = a
        if rt1 and rs1:
            sol = solve_integer_matrix(bt1, matmul(a1, bs1))
            if sol is None:
                raise InvariantViolation("chain map is not well defined on relations")
            mat[ft:, fs:] = sol
        if rt1 and fs:
            diff = matmul(a1, ks.d(m).matrix) - matmul(kt.d(m).matrix, a)
            sol = solve_integer_matrix(bt1, diff)
            if sol is None:
                raise InvariantViolation("map does not commute with differentials")
            mat[ft:, :fs] = sol
        comps[m] = mat
    return ChainMap(s, t, comps)


# ---------------------------------------------------------------------------
# Hom complexes


def _hom_term_layout(f: BoundedComplex, g: BoundedComplex, n: int):
    blocks = []
    off = 0
    groups = []
    for j in f.degrees:
        gt = g.term(j + n)
        if gt.num_generators == 0:
            continue
        rj = f.term(j).num_generators
        size = rj * gt.num_generators
        blocks.append((j, off, size))
        off += size
        if gt.orders is not None:
            groups.append(FgAbGroup.from_orders(list(gt.orders) * rj))
        else:
            groups.append(FgAbGroup(size, kron(identity(rj), gt.relations)))
    return blocks, direct_sum(groups)


def hom_degrees(f: BoundedComplex, g: BoundedComplex) -> list[int]:
    if f.is_zero() or g.is_zero():
        return []
    return list(range(g.degrees[0] - f.degrees[-1], g.degrees[-1] - f.degrees[0] + 1))


def hom_complex(f: BoundedComplex, g: BoundedComplex) -> BoundedComplex:
    """Hom^n = ⊕_j Hom(F^j, G^(j+n)) with dφ = d_G φ − (−1)^n φ d_F.

    A map φ: Z^r → G^(j+n) is stored as its columns stacked in order.
    """
    if not f.is_degreewise_free():
        raise ValueError("source of a Hom complex must be degreewise free")
    degs = hom_degrees(f, g)
    layouts = {n: _hom_term_layout(f, g, n) for n in degs}
    terms = {n: grp for n, (_, grp) in layouts.items()}
    diffs = {}
    for n in degs:
        if n + 1 not in layouts:
            continue
        src_blocks, src = layouts[n]
        tgt_blocks, tgt = layouts[n + 1]
        tgt_at = {j: (o, s) for j, o, s in tgt_blocks}
        mat = zeros(tgt.num_generators, src.num_generators)
        sign = 1 if n % 2 else -1  # −(−1)^n
        for j, off, size in src_blocks:
            rj = f.term(j).num_generators
            if j in tgt_at:
                o, s = tgt_at[j]
                mat[o : o + s, off : off + size] = kron(identity(rj), g.d(j + n).matrix)
            if j - 1 in tgt_at:
                o, s = tgt_at[j - 1]
                gj = g.term(j + n).num_generators
                mat[o : o + s, off : off + size] = sign * kron(f.d(j - 1).matrix.T.copy(), identity(gj))
        diffs[n] = mat
    return BoundedComplex(terms, diffs, check=False)


def hom_complex_pullback(u: ChainMap, g: BoundedComplex) -> ChainMap:
    """Hom(u, G): Hom(T, G) → Hom(S, G), φ ↦ φ ∘ u, for u: S → T between free complexes."""
    hs, ht = hom_complex(u.source, g), hom_complex(u.target, g)
    comps = {}
    for n in sorted(set(hs.degrees) | set(ht.degrees)):
        sb, _ = _hom_term_layout(u.target, g, n)
        tb, _ = _hom_term_layout(u.source, g, n)
        tat = {j: (o, s) for j, o, s in tb}
        mat = zeros(hs.term(n).num_generators, ht.term(n).num_generators)
        for j, off, size in sb:
            if j in tat:
                o, s = tat[j]
                gj = g.term(j + n).num_generators
                mat[o : o + s, off : off + size] = kron(u[j].matrix.T.copy(), identity(gj))
        comps[n] = mat
    return ChainMap(ht, hs, comps, check=False)


# ---------------------------------------------------------------------------
# Ext and derived tensor


def ext_group(k: BoundedComplex, g: BoundedComplex, i: int, strategy: Strategy = "generators") -> FgAbGroup:
    """Ext^i(K, G) = H^i(Hom(free replacement of K, G)), canonical."""
    rep = free_replacement(k, strategy)
    return cohomology(hom_complex(rep.free_complex, g), i)


def ext_map(u: ChainMap, g: BoundedComplex, i: int) -> GroupMap:
    """Ext^i(u, G): Ext^i(T, G) → Ext^i(S, G) for u: S → T.

    Groups are presented on cycle bases (see ``complexes.cohomology_data``).
    """
    rs, rt = free_replacement(u.source), free_replacement(u.target)
    lifted = lift_chain_map(u, rs, rt)
    return induced_map(hom_complex_pullback(lifted, g), i)


def derived_tensor(k: BoundedComplex, l: BoundedComplex, strategy: Strategy = "generators") -> BoundedComplex:
    """K ⊗^L L as the tensor product of free replacements."""
    return tensor(free_replacement(k, strategy).free_complex, free_replacement(l, strategy).free_complex)


def derived_tensor_map(u: ChainMap, v: ChainMap) -> ChainMap:
    """u ⊗^L v between derived tensors (built with the default strategy)."""
    ru = lift_chain_map(u, free_replacement(u.source), free_replacement(u.target))
    rv = lift_chain_map(v, free_replacement(v.source), free_replacement(v.target))
    return tensor_maps(ru, rv)


def tor_group(a: FgAbGroup, b: FgAbGroup, i: int) -> FgAbGroup:
    """Tor_i(A, B) = H^(−i)(A ⊗^L B) for groups in degree 0."""
    return cohomology(derived_tensor(BoundedComplex.concentrated(a), BoundedComplex.concentrated(b)), -i)

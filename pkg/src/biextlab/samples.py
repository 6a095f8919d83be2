"""Random and enumerated inputs shared by the tests and the command line."""

from __future__ import annotations

import numpy as np

from .abelian import FgAbGroup, InvariantViolation, hom_group, integer_kernel, zeros
from .barres import PsiInput
from .complexes import BoundedComplex, ChainMap


def finite_groups_up_to(max_order: int) -> list[FgAbGroup]:
    """One group per isomorphism class of order at most ``max_order``, trivial group first."""

    def chains(prefix: tuple[int, ...], rest: int):
        if rest == 1:
            yield prefix
            return
        for d in range(2, rest + 1):
            if rest % d == 0 and (not prefix or d % prefix[-1] == 0):
                yield from chains(prefix + (d,), rest // d)

    return [FgAbGroup.from_invariants(0, c) for n in range(1, max_order + 1) for c in chains((), n)]


def random_matrix(rng: np.random.Generator, rows: int, cols: int, bound: int) -> np.ndarray:
    return zeros(rows, cols) + rng.integers(-bound, bound + 1, size=(rows, cols)).astype(object)


def random_free_complex(rng: np.random.Generator, max_rank: int = 2, bound: int = 2) -> BoundedComplex:
    """[Z^a → Z^b] in degrees −1, 0 with random ranks and entries."""
    a, b = (int(x) for x in rng.integers(0, max_rank + 1, size=2))
    return BoundedComplex({-1: FgAbGroup(a), 0: FgAbGroup(b)}, {-1: random_matrix(rng, b, a, bound)})


def chain_map_basis(k: BoundedComplex, l: BoundedComplex) -> list[dict[int, np.ndarray]]:
    """A lattice basis of chain maps between degreewise free complexes."""
    if not (k.is_degreewise_free() and l.is_degreewise_free()):
        raise ValueError("chain_map_basis needs degreewise free complexes")
    degs = [n for n in k.degrees if l.term(n).num_generators]
    shapes = {n: (l.term(n).num_generators, k.term(n).num_generators) for n in degs}
    unknowns = [(n, i, j) for n in degs for i in range(shapes[n][0]) for j in range(shapes[n][1])]

    def residual(comps):
        out = []
        for n in k.degrees:
            kn1 = k.term(n + 1).num_generators
            ln1 = l.term(n + 1).num_generators
            if k.term(n).num_generators == 0 or ln1 == 0:
                continue
            fn = comps.get(n, zeros(l.term(n).num_generators, k.term(n).num_generators))
            fn1 = comps.get(n + 1, zeros(ln1, kn1))
            lhs = fn1 @ k.d(n).matrix if kn1 else zeros(ln1, k.term(n).num_generators)
            rhs = l.d(n).matrix @ fn if l.term(n).num_generators else zeros(ln1, k.term(n).num_generators)
            out.extend((lhs - rhs).ravel().tolist())
        return out

    if not unknowns:
        return []
    cols = []
    for n, i, j in unknowns:
        comps = {m: zeros(*shapes[m]) for m in degs}
        comps[n][i, j] = 1
        cols.append(residual(comps))
    system = np.array(cols, dtype=object).T if cols and cols[0] else zeros(0, len(unknowns))
    basis = integer_kernel(system) if system.shape[0] else np.eye(len(unknowns), dtype=np.int64).astype(object)
    out = []
    for c in range(basis.shape[1]):
        comps = {m: zeros(*shapes[m]) for m in degs}
        for (n, i, j), v in zip(unknowns, basis[:, c]):
            comps[n][i, j] = v
        out.append(comps)
    return out


def random_chain_map(rng: np.random.Generator, k: BoundedComplex, l: BoundedComplex, bound: int = 1) -> ChainMap:
    comps: dict[int, np.ndarray] = {}
    for b in chain_map_basis(k, l):
        c = int(rng.integers(-bound, bound + 1))
        for n, m in b.items():
            comps[n] = comps.get(n, 0) + c * m
    return ChainMap(k, l, comps)


def random_psi_input(rng: np.random.Generator, max_rank: int = 2, bound: int = 2) -> PsiInput:
    """A random PsiInput with free terms in degrees −1, 0 and a random homotopy h.

    Q is built as R ⊕ Q'' with D^R the inclusion of R, and D^Q restricts to
    d_P h + h d_R on R, so D^Q D^R = d_P h + h d_R holds by construction.
    """
    r = random_free_complex(rng, max_rank=max_rank, bound=bound)
    p = random_free_complex(rng, max_rank=max_rank, bound=bound)
    q2 = random_free_complex(rng, max_rank=max_rank, bound=bound)
    h0 = random_matrix(rng, p.term(-1).num_generators, r.term(0).num_generators, bound)
    # N = d_P h + h d_R with h only in degree 0 (h^n: R^n → P^{n−1})
    n_map = {0: zeros(p.term(0).num_generators, r.term(0).num_generators),
             -1: zeros(p.term(-1).num_generators, r.term(-1).num_generators)}
    if p.term(-1).num_generators and p.term(0).num_generators:
        n_map[0] = p.d(-1).matrix @ h0
    if r.term(-1).num_generators and r.term(0).num_generators:
        n_map[-1] = h0 @ r.d(-1).matrix
    d2 = random_chain_map(rng, q2, p, bound=1)

    terms, diffs = {}, {}
    for n in (-1, 0):
        terms[n] = FgAbGroup(r.term(n).num_generators + q2.term(n).num_generators)
    a1, a0 = r.term(-1).num_generators, r.term(0).num_generators
    b1, b0 = q2.term(-1).num_generators, q2.term(0).num_generators
    dq = zeros(a0 + b0, a1 + b1)
    if a0 and a1:
        dq[:a0, :a1] = r.d(-1).matrix
    if b0 and b1:
        dq[a0:, a1:] = q2.d(-1).matrix
    diffs[-1] = dq
    q = BoundedComplex(terms, diffs)

    dr, dqmap = {}, {}
    for n, (a, b) in {-1: (a1, b1), 0: (a0, b0)}.items():
        inc = zeros(a + b, a)
        for i in range(a):
            inc[i, i] = 1
        dr[n] = inc
        pn = p.term(n).num_generators
        blk = zeros(pn, a + b)
        blk[:, :a] = n_map[n]
        if b and pn:
            blk[:, a:] = d2[n].matrix
        dqmap[n] = blk
    return PsiInput(r, q, p, ChainMap(r, q, dr), ChainMap(q, p, dqmap), {0: h0})


def random_finite_two_term(rng: np.random.Generator, orders=(2, 3, 4), max_terms: int = 1) -> BoundedComplex:
    """[A → B] with A, B finite diagonal and a random homomorphism as differential."""

    def group():
        k = int(rng.integers(0, max_terms + 1))
        return FgAbGroup.from_orders([int(rng.choice(orders)) for _ in range(k)])

    a, b = group(), group()
    return BoundedComplex({-1: a, 0: b}, {-1: random_homomorphism(rng, a, b)})


def random_homomorphism(rng: np.random.Generator, a: FgAbGroup, b: FgAbGroup) -> np.ndarray:
    """A random element of Hom(A, B) for finite B, as a matrix."""
    space = hom_group(a, b)
    m = zeros(b.num_generators, a.num_generators)
    for f in space.basis:
        m = m + int(rng.integers(0, 12)) * f.matrix
    return m


def random_finite_chain_map(rng: np.random.Generator, s: BoundedComplex, t: BoundedComplex, tries: int = 200) -> ChainMap:
    """Rejection-sample componentwise homomorphisms until one commutes with d; zero if none does."""
    degs = sorted(set(s.degrees) & set(t.degrees))
    for _ in range(tries):
        comps = {n: random_homomorphism(rng, s.term(n), t.term(n)) for n in degs}
        try:
            return ChainMap(s, t, comps)
        except InvariantViolation:
            continue
    return ChainMap.zero(s, t)

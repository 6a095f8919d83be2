"""Picard stacks over the punctual site, as complexes in degrees -1 and 0."""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import (
    FgAbGroup,
    GroupMap,
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
    cohomology,
    direct_sum_complex,
    mapping_cone,
    shift,
    truncate,
)
from .derived import derived_tensor, free_replacement, hom_complex


@dataclass(frozen=True)
class PicardPresentation:
    """A complex [P^-1 → P^0]; π1 = H^-1 and π0 = H^0."""

    complex: BoundedComplex

    def __post_init__(self):
        bad = [n for n in self.complex.degrees if n not in (-1, 0)]
        if bad:
            raise ValueError(f"Picard presentation has terms outside degrees -1, 0: {bad}")

    @classmethod
    def of(cls, minus1: FgAbGroup, zero: FgAbGroup, d=None) -> "PicardPresentation":
        if d is None:
            d = zeros(zero.num_generators, minus1.num_generators)
        return cls(BoundedComplex({-1: minus1, 0: zero}, {-1: d}))

    @classmethod
    def plain(cls, group: FgAbGroup) -> "PicardPresentation":
        """A group viewed as the discrete stack [0 → G]."""
        return cls(BoundedComplex.concentrated(group, 0))

    @property
    def minus1(self) -> FgAbGroup:
        return self.complex.term(-1)

    @property
    def zero(self) -> FgAbGroup:
        return self.complex.term(0)

    @property
    def d(self) -> GroupMap:
        return self.complex.d(-1)

    def pi(self, i: int) -> FgAbGroup:
        return pi(self, i)

    def is_plain(self) -> bool:
        return self.minus1.num_generators == 0

    def __str__(self) -> str:
        return f"[{self.minus1} → {self.zero}]"


def _cx(p) -> BoundedComplex:
    return p.complex if isinstance(p, PicardPresentation) else p


def pi(p: PicardPresentation, i: int) -> FgAbGroup:
    """π0 = H^0 (classes of objects), π1 = H^-1 (automorphisms of the unit)."""
    if i not in (0, 1):
        raise ValueError("only π0 and π1 exist")
    return cohomology(_cx(p), -i)


def _two_term(k: BoundedComplex) -> PicardPresentation:
    return PicardPresentation(truncate(truncate(k, "leq", 0), "geq", -1))


@dataclass(frozen=True)
class FiberedProduct:
    presentation: PicardPresentation
    to_p: ChainMap
    to_q: ChainMap


def fibered_product_square(f: ChainMap, g: ChainMap) -> FiberedProduct:
    """Degreewise kernel of (f, −g): P ⊕ Q → G, with its two legs."""
    if any(f.target.term(n).num_generators != g.target.term(n).num_generators for n in (-1, 0)):
        raise ValueError("maps do not share a target")
    p, q = f.source, g.source
    terms, incs = {}, {}
    for n in (-1, 0):
        s = FgAbGroup(
            p.term(n).num_generators + q.term(n).num_generators,
            _block(p.term(n).relations, q.term(n).relations),
        )
        m = hstack([f[n].matrix, -g[n].matrix], f.target.term(n).num_generators)
        k, inc = kernel(GroupMap(s, f.target.term(n), m, check=False))
        terms[n], incs[n] = k, inc
    dsum = _block(p.d(-1).matrix, q.d(-1).matrix)
    d = lift_through(incs[0], matmul(dsum, incs[-1].matrix))
    cx = BoundedComplex(terms, {-1: d})
    legs_p, legs_q = {}, {}
    for n in (-1, 0):
        a = p.term(n).num_generators
        legs_p[n] = incs[n].matrix[:a, :]
        legs_q[n] = incs[n].matrix[a:, :]
    return FiberedProduct(PicardPresentation(cx), ChainMap(cx, p, legs_p), ChainMap(cx, q, legs_q))


def fibered_product(f: ChainMap, g: ChainMap) -> PicardPresentation:
    return fibered_product_square(f, g).presentation


@dataclass(frozen=True)
class FiberedSum:
    presentation: PicardPresentation
    from_p: ChainMap
    from_q: ChainMap


def fibered_sum_square(f: ChainMap, g: ChainMap) -> FiberedSum:
    """Degreewise (P ⊕ Q) / {(f x, −g x)}, with the two coprojections."""
    if any(f.source.term(n).num_generators != g.source.term(n).num_generators for n in (-1, 0)):
        raise ValueError("maps do not share a source")
    p, q = f.target, g.target
    terms = {}
    for n in (-1, 0):
        a, b = p.term(n).num_generators, q.term(n).num_generators
        image = vstack([f[n].matrix, -g[n].matrix], f.source.term(n).num_generators)
        rel = hstack([_block(p.term(n).relations, q.term(n).relations), image], a + b)
        terms[n] = FgAbGroup(a + b, rel)
    d = _block(p.d(-1).matrix, q.d(-1).matrix)
    cx = BoundedComplex(terms, {-1: d})
    cp, cq = {}, {}
    for n in (-1, 0):
        a, b = p.term(n).num_generators, q.term(n).num_generators
        cp[n] = vstack([identity(a), zeros(b, a)], a)
        cq[n] = vstack([zeros(a, b), identity(b)], b)
    return FiberedSum(PicardPresentation(cx), ChainMap(p, cx, cp), ChainMap(q, cx, cq))


def fibered_sum(f: ChainMap, g: ChainMap) -> PicardPresentation:
    return fibered_sum_square(f, g).presentation


def _block(a, b):
    return block_diag([a, b])


def product(p: PicardPresentation, q: PicardPresentation) -> PicardPresentation:
    """P × Q, the degreewise direct sum."""
    return PicardPresentation(direct_sum_complex([p.complex, q.complex]))


def kernel_functor(f: ChainMap) -> PicardPresentation:
    """[ker F] = τ≤0 (MC(f)[−1])."""
    return PicardPresentation(truncate(shift(mapping_cone(f), -1), "leq", 0))


def cokernel_functor(f: ChainMap) -> PicardPresentation:
    """[coker F] = τ≥−1 MC(f)."""
    return PicardPresentation(truncate(mapping_cone(f), "geq", -1))


def hom_stack(p: PicardPresentation, q: PicardPresentation) -> PicardPresentation:
    """[HOM(P, Q)] = τ≤0 RHom(P, Q), cut down to degrees −1, 0."""
    return _two_term(hom_complex(free_replacement(p.complex).free_complex, q.complex))


def tensor_stack(p: PicardPresentation, q: PicardPresentation) -> PicardPresentation:
    """[P ⊗ Q] = τ≥−1 (P ⊗^L Q)."""
    return _two_term(derived_tensor(p.complex, q.complex))


def are_equivalent(p: PicardPresentation, q: PicardPresentation) -> bool:
    """Equivalence over the punctual site.

    The invariant ε lives in Ext²(π0, π1), which vanishes over Z, so the two
    homotopy groups decide.
    """
    return pi(p, 0).is_isomorphic(pi(q, 0)) and pi(p, 1).is_isomorphic(pi(q, 1))

"""Complexes of G-valued functions on finite sets.

The cocycle models for extensions and biextensions are complexes
G^X0 → G^X1 → G^X2 whose differentials are integer matrices acting on
tables, so they are M ⊗ G for integer matrices M. A table is an integer
array of shape (|X|, number of generators of G) in generator coordinates.
"""

from __future__ import annotations

import math

import numpy as np

from .abelian import (
    FgAbGroup,
    GroupMap,
    cokernel,
    hstack,
    identity,
    image,
    matmul,
    smith_normal_form,
    solve_integer,
)
from .complexes import subquotient


class CochainProblem:
    """The complex G^X0 --m0--> G^X1 --m1--> G^X2."""

    def __init__(self, m0: np.ndarray, m1: np.ndarray, g: FgAbGroup):
        self.m0 = np.asarray(m0, dtype=np.int64)
        self.m1 = np.asarray(m1, dtype=np.int64)
        if self.m1.shape[1] != self.m0.shape[0]:
            raise ValueError("differentials are not composable")
        if (self.m1 @ self.m0).any():
            raise AssertionError("cochain differentials do not compose to zero")
        self.g = g
        self.h, self.to_h, self.from_h = g.diagonal_iso()

    @property
    def sizes(self) -> tuple[int, int, int]:
        return self.m0.shape[1], self.m0.shape[0], self.m1.shape[0]

    def _space(self, n: int, order: int) -> FgAbGroup:
        return FgAbGroup.from_orders([order] * n)

    def cohomology(self) -> FgAbGroup:
        """ker m1 / im m0 with coefficients in G, one cyclic factor at a time."""
        n0, n1, n2 = self.sizes
        free, tors = 0, []
        for order in self.h.orders:
            c0, c1, c2 = self._space(n0, order), self._space(n1, order), self._space(n2, order)
            part = subquotient(GroupMap(c0, c1, self.m0, check=False), GroupMap(c1, c2, self.m1, check=False))
            f, t = part.canonical_form()
            free += f
            tors.extend(t)
        return FgAbGroup.from_invariants(*FgAbGroup.from_invariants(free, tors).canonical_form())

    def cocycles(self) -> FgAbGroup:
        """ker m1 with coefficients in G."""
        n0, n1, n2 = self.sizes
        free, tors = 0, []
        for order in self.h.orders:
            c1, c2 = self._space(n1, order), self._space(n2, order)
            zero = GroupMap(FgAbGroup.trivial(), c1, np.zeros((n1, 0), dtype=np.int64), check=False)
            part = subquotient(zero, GroupMap(c1, c2, self.m1, check=False))
            f, t = part.canonical_form()
            free += f
            tors.extend(t)
        return FgAbGroup.from_invariants(free, tors)

    # tables ----------------------------------------------------------------

    def _to_h(self, table: np.ndarray) -> np.ndarray:
        t = np.asarray(table, dtype=object)
        if t.ndim != 2:
            t = t.reshape(-1, self.g.num_generators)
        return matmul(t, self.to_h.T.copy()) if t.size else np.zeros((t.shape[0], len(self.h.orders)), dtype=object)

    def _from_h(self, table_h: np.ndarray) -> np.ndarray:
        return matmul(np.asarray(table_h, dtype=object), self.from_h.T.copy())

    def is_zero(self, table: np.ndarray) -> bool:
        th = self._to_h(table)
        for k, order in enumerate(self.h.orders):
            col = th[:, k]
            if order == 0:
                if any(int(x) for x in col):
                    return False
            elif any(int(x) % order for x in col):
                return False
        return True

    def is_cocycle(self, table: np.ndarray) -> bool:
        return self.is_zero(matmul(self.m1.astype(object), np.asarray(table, dtype=object)))

    def coboundary(self, theta: np.ndarray) -> np.ndarray:
        return matmul(self.m0.astype(object), np.asarray(theta, dtype=object))

    def solve_coboundary(self, table: np.ndarray) -> np.ndarray | None:
        """Some θ with m0 θ ≡ table, or None."""
        th = self._to_h(table)
        n0, n1, _ = self.sizes
        out = np.zeros((n0, len(self.h.orders)), dtype=object)
        for k, order in enumerate(self.h.orders):
            a = self.m0.astype(object)
            if order:
                a = hstack([a, identity(n1) * order], n1)
            x = solve_integer(a, [int(v) for v in th[:, k]])
            if x is None:
                return None
            out[:, k] = x[:n0]
        return self._from_h(out)

    def is_coboundary(self, table: np.ndarray) -> bool:
        return self.solve_coboundary(table) is not None

    def cocycle_generators(self) -> list[np.ndarray]:
        """Tables generating the cocycle group.

        With U m1 V = D in Smith form, m1 x ≡ 0 mod n exactly when x = V y
        with d_i y_i ≡ 0 mod n, so the columns (n / gcd(n, d_i)) V e_i generate.
        """
        n1 = self.sizes[1]
        if not self.h.orders:
            return []
        snf = smith_normal_form(self.m1)
        diag = snf.diagonal + [0] * (n1 - len(snf.diagonal))
        out = []
        for k, order in enumerate(self.h.orders):
            for i, d in enumerate(diag):
                if order == 0:
                    if d != 0:
                        continue
                    col = snf.V[:, i]
                else:
                    factor = order // math.gcd(order, d)
                    if factor == order:
                        continue
                    col = (factor * snf.V[:, i]) % order
                th = np.zeros((n1, len(self.h.orders)), dtype=object)
                th[:, k] = col
                out.append(self._from_h(th))
        return out

    def class_subgroup_order(self, tables: list[np.ndarray]) -> int | None:
        """Order of the subgroup of classes generated by some cocycle tables; None if infinite."""
        n0, n1, _ = self.sizes
        total = 1
        for k, order in enumerate(self.h.orders):
            classes, _ = cokernel(GroupMap(FgAbGroup(n0), self._space(n1, order), self.m0, check=False))
            cols = hstack([self._to_h(t)[:, k].reshape(-1, 1) for t in tables], n1)
            sub, _ = image(GroupMap(FgAbGroup(cols.shape[1]), classes, cols, check=False))
            part = sub.order()
            if part is None:
                return None
            total *= part
        return total

"""Subquotients of finite diagonal groups, one prime at a time.

For ker(g) / im(f) with f: A → B, g: B → C, B = ⊕ Z/b_j finite and C
diagonal, the p-part is computed over R = Z/p^E with int64 arithmetic:

* the kernel of g in R^n is the kernel of diag(p^(E-γ)) · g, which a local
  Smith reduction (pivot of minimal valuation) puts in the form ⊕ p^κ_i R;
* the image (columns of f plus the relations p^β_j e_j) is rewritten in the
  same coordinates and divided by p^κ_i;
* the quotient is a cokernel over R, read off from a second local reduction.
"""

from __future__ import annotations

import numpy as np

from .abelian import factorize

_INT64_SAFE = 2**62


def _dtype_for(mod: int, dim: int):
    # sums of dim products of residues must fit in int64, else fall back to Python ints
    return np.int64 if mod * mod * (dim + 1) < _INT64_SAFE else object


def _valuation(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def _local_reduce(a: np.ndarray, p: int, e: int, track: bool):
    """Reduce ``a`` (mod p^e) by row operations and column operations.

    Returns ``(valuations, qinv)``: the pivot valuations in order and, when
    ``track`` is set, the inverse column transform ``qinv`` so that the new
    coordinates of a vector x are ``qinv @ x``.
    """
    mod = p**e
    m, n = np.shape(a)
    dt = _dtype_for(mod, max(m, n))
    a = np.array(a, dtype=object).reshape(m, n) % mod
    a = a.astype(dt)
    qinv = None
    if track:
        qinv = np.zeros((n, n), dtype=dt)
        for i in range(n):
            qinv[i, i] = 1
    vals: list[int] = []
    t = 0
    while t < min(m, n):
        sub = a[t:, t:]
        if not sub.any():
            break
        found = None
        pk = 1
        for k in range(e):
            pk1 = pk * p
            hits = np.argwhere(sub % pk1 != 0)
            if len(hits):
                found = (int(hits[0][0]) + t, int(hits[0][1]) + t, k, pk)
                break
            pk = pk1
        i, j, v, pv = found
        if i != t:
            a[[t, i], :] = a[[i, t], :]
        if j != t:
            a[:, [t, j]] = a[:, [j, t]]
            if track:
                qinv[[t, j], :] = qinv[[j, t], :]
        u = int(a[t, t]) // pv
        uinv = pow(u, -1, mod)
        a[:, t] = (a[:, t] * uinv) % mod
        if track:
            qinv[t, :] = (qinv[t, :] * u) % mod
        # clear the pivot column with row operations
        fac = a[:, t] // pv
        fac[t] = 0
        if fac.any():
            a -= np.outer(fac, a[t, :]) % mod
            a %= mod
        # clear the pivot row with column operations
        cf = a[t, :] // pv
        cf[t] = 0
        if cf.any():
            if track:
                qinv[t, :] = (qinv[t, :] + (cf @ qinv) % mod) % mod
            a[t, :] = np.where(np.arange(n) == t, a[t, :], 0)
        vals.append(v)
        t += 1
    return vals, qinv


def _p_part(f: np.ndarray, g: np.ndarray, b_orders, c_orders, p: int) -> list[int]:
    n = len(b_orders)
    beta = [_valuation(b, p) for b in b_orders]
    gamma = [_valuation(c, p) for c in c_orders]
    e = max(beta + gamma + [0])
    if max(beta + [0]) == 0:
        return []
    mod = p**e
    dt = _dtype_for(mod, n + f.shape[1] + g.shape[0])
    f = f.astype(object)
    g = g.astype(object)
    if g.shape[0]:
        scale = np.array([p ** (e - c) for c in gamma], dtype=object)
        cons = (g % mod) * scale[:, None] % mod
    else:
        cons = np.zeros((0, n), dtype=object)
    vals, qinv = _local_reduce(cons, p, e, track=True)
    kappa = [e - v for v in vals] + [0] * (n - len(vals))
    rel = np.zeros((n, n), dtype=object)
    for j in range(n):
        rel[j, j] = p ** beta[j] % mod
    gens = np.concatenate([f % mod, rel], axis=1) if f.shape[1] else rel
    img = (qinv @ gens.astype(dt)) % mod
    z = np.empty_like(img)
    for i in range(n):
        pk = p ** kappa[i]
        if (img[i] % pk).any():
            raise AssertionError("image does not lie in the kernel")
        z[i] = img[i] // pk
    quot_rel = np.zeros((n, n), dtype=object)
    for i in range(n):
        quot_rel[i, i] = p ** (e - kappa[i]) % mod
    pres = np.concatenate([z.astype(object), quot_rel], axis=1)
    vals2, _ = _local_reduce(pres, p, e, track=False)
    out = [p**v for v in vals2 if v > 0]
    out += [mod] * (n - len(vals2))
    return [x for x in out if x > 1]


def subquotient_invariants(f, g, b_orders, c_orders) -> list[int]:
    """Elementary divisors (prime powers) of ker(g)/im(f).

    ``f`` is n × a and ``g`` is m × n (integer arrays); ``b_orders`` are the
    orders of the n middle generators (all nonzero) and ``c_orders`` those of
    the m target generators (0 allowed: such rows must vanish on B).
    """
    b_orders = [int(b) for b in b_orders]
    n = len(b_orders)
    f = np.asarray(f, dtype=object).reshape(n, -1) if n else np.zeros((0, 0), dtype=object)
    g = np.asarray(g, dtype=object).reshape(-1, n) if n else np.zeros((len(c_orders), 0), dtype=object)
    if any(b == 0 for b in b_orders):
        raise ValueError("middle group must be finite")
    keep = [k for k, c in enumerate(c_orders) if int(c) != 0]
    if len(keep) != len(c_orders):
        drop = [k for k in range(len(c_orders)) if k not in keep]
        if np.any(g[drop, :] != 0):
            raise ValueError("a finite group maps nontrivially to Z")
    c_kept = [int(c_orders[k]) for k in keep]
    g = g[keep, :]
    primes: set[int] = set()
    for b in b_orders:
        primes.update(factorize(b))
    out: list[int] = []
    for p in sorted(primes):
        mod_bound = 1
        for b in b_orders + c_kept:
            mod_bound = max(mod_bound, p ** _valuation(b, p))
        out.extend(_p_part(f % mod_bound, g % mod_bound, b_orders, c_kept, p))
    return out

"""Numba kernels for the event-driven solvers.

The mild solution for finite-activity noise is determined by its values at the
atoms: u_i = 1 + 1/2 * sum over atoms j strictly inside the backward light cone
of atom i of z_j u_j.  In rotated coordinates a = y + s, b = y - s the cone
relation is the strict dominance a_j < a_i and b_j > b_i, which lets the fast
solver use offline divide and conquer over time with a Fenwick tree over b.
"""

import numpy as np
from numba import njit

_BASE = 32  # below this block size the in-block solve is quadratic


@njit(cache=True, nogil=True)
def solve_naive_kernel(s, y, z):
    n = s.size
    u = np.ones(n)
    for i in range(n):
        acc = 0.0
        si = s[i]
        yi = y[i]
        for j in range(i):
            if abs(yi - y[j]) < si - s[j]:
                acc += z[j] * u[j]
        u[i] = 1.0 + 0.5 * acc
    return u


@njit(cache=True, nogil=True)
def _cross(lo, mid, hi, a, b, z, u, acc):
    # add to acc[i], i in [mid, hi), the sum of z_j u_j over j in [lo, mid)
    # with a_j < a_i and b_j > b_i; left block is fully solved at this point
    nl = mid - lo
    la = np.argsort(a[lo:mid])
    ra = np.argsort(a[mid:hi])
    sb = np.sort(b[lo:mid])
    tree = np.zeros(nl + 1)
    total = 0.0
    p = 0
    for t in range(hi - mid):
        i = mid + ra[t]
        ai = a[i]
        while p < nl and a[lo + la[p]] < ai:
            j = lo + la[p]
            w = z[j] * u[j]
            k = np.searchsorted(sb, b[j]) + 1
            while k <= nl:
                tree[k] += w
                k += k & (-k)
            total += w
            p += 1
        k = np.searchsorted(sb, b[i], side="right")  # left atoms with b_j <= b_i
        ssum = 0.0
        while k > 0:
            ssum += tree[k]
            k -= k & (-k)
        acc[i] += total - ssum


@njit(cache=True, nogil=True)
def solve_fast_kernel(s, y, z):
    n = s.size
    u = np.ones(n)
    if n == 0:
        return u
    a = y + s
    b = y - s
    acc = np.zeros(n)
    # explicit stack for (lo, hi, phase); depth is O(log n)
    cap = 200
    st_lo = np.empty(cap, np.int64)
    st_hi = np.empty(cap, np.int64)
    st_ph = np.empty(cap, np.int64)
    st_lo[0] = 0
    st_hi[0] = n
    st_ph[0] = 0
    sp = 1
    while sp > 0:
        sp -= 1
        lo = st_lo[sp]
        hi = st_hi[sp]
        ph = st_ph[sp]
        if ph == 0:
            if hi - lo <= _BASE:
                for i in range(lo, hi):
                    t = acc[i]
                    for j in range(lo, i):
                        if a[j] < a[i] and b[j] > b[i]:
                            t += z[j] * u[j]
                    u[i] = 1.0 + 0.5 * t
                continue
            mid = (lo + hi) // 2
            st_lo[sp] = lo
            st_hi[sp] = hi
            st_ph[sp] = 1
            sp += 1
            st_lo[sp] = lo
            st_hi[sp] = mid
            st_ph[sp] = 0
            sp += 1
        else:
            mid = (lo + hi) // 2
            _cross(lo, mid, hi, a, b, z, u, acc)
            st_lo[sp] = mid
            st_hi[sp] = hi
            st_ph[sp] = 0
            sp += 1
    return u


@njit(cache=True, nogil=True)
def insert_delta_kernel(s, y, z, u, r, ys, zs):
    """Solve the configuration with one extra atom (r, ys, zs) in delta form.

    Returns (u_xi, delta, k): the solution value at the new atom, the exact
    perturbations u'_i - u_i for atoms i >= k, and the insertion index k.
    Atoms outside the forward cone of xi keep delta identically 0.0, so the
    perturbed solution agrees bitwise with the base solution there.
    """
    n = s.size
    k = np.searchsorted(s, r)  # ties: xi precedes equal-time atoms
    acc = 0.0
    for j in range(k):
        if abs(ys - y[j]) < r - s[j]:
            acc += z[j] * u[j]
    u_xi = 1.0 + 0.5 * acc
    m = n - k
    delta = np.zeros(m)
    seed = zs * u_xi
    for t in range(m):
        i = k + t
        d = 0.0
        if abs(y[i] - ys) < s[i] - r:
            d += seed
        for jt in range(t):
            dj = delta[jt]
            if dj != 0.0:
                j = k + jt
                if abs(y[i] - y[j]) < s[i] - s[j]:
                    d += z[j] * dj
        delta[t] = 0.5 * d
    return u_xi, delta, k

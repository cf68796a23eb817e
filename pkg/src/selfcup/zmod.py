"""Linear algebra over Z/m for prime powers m.

Everything here works on dense ``int64`` numpy arrays with entries in
``[0, m)``.  Over a field this is ordinary Gauss-Jordan elimination; for
``m = p**k`` with ``k > 1`` the elimination keeps Howell-style annihilator
rows so that membership tests, canonical reduction and back substitution
stay correct even though pivots need not be units.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


class ZmodError(ValueError):
    pass


@lru_cache(maxsize=None)
def prime_power(m: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``m == p**k``; raise for other moduli."""
    if m < 2:
        raise ZmodError(f"modulus must be >= 2, got {m}")
    p = next(d for d in range(2, m + 1) if m % d == 0)
    k, r = 0, m
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise ZmodError(f"modulus {m} is not a prime power")
    return p, k


@lru_cache(maxsize=None)
def _tables(m: int):
    p, k = prime_power(m)
    val = np.zeros(m, dtype=np.int64)
    val[0] = k
    for x in range(1, m):
        v, y = 0, x
        while y % p == 0:
            y //= p
            v += 1
        val[x] = v
    inv = np.zeros(m, dtype=np.int64)
    for x in range(1, m):
        if x % p:
            inv[x] = pow(x, -1, m)
    return p, k, val, inv


def unit_inverse(x: int, m: int) -> int:
    return pow(int(x) % m, -1, m)


def is_prime(m: int) -> bool:
    try:
        return prime_power(m)[1] == 1
    except ZmodError:
        return False


class Echelon:
    """Echelon form of the row span of ``rows`` over Z/m.

    Only the first ``npivot`` columns are eliminated; trailing columns ride
    along (they hold right-hand sides when solving).  ``pivots`` lists
    ``(col, valuation)`` in column order and ``self.rows[i]`` is the row
    whose leading entry is ``p**valuation`` in that column.
    """

    def __init__(self, rows, m: int, npivot: int | None = None):
        p, k, val, inv = _tables(m)
        a = np.asarray(rows, dtype=np.int64)
        if a.ndim != 2:
            raise ZmodError("rows must be a 2-d array")
        nr, w = a.shape
        npivot = w if npivot is None else npivot
        self.m, self.p, self.k = m, p, k
        self.width, self.npivot = w, npivot

        work = np.zeros((nr + npivot, w), dtype=np.int64)
        work[:nr] = a % m
        active = np.zeros(nr + npivot, dtype=bool)
        active[:nr] = True
        n = nr
        pivot_rows, pivots = [], []
        for j in range(npivot):
            idx = np.flatnonzero(active[:n] & (work[:n, j] != 0))
            if idx.size == 0:
                continue
            vals = val[work[idx, j]]
            r = int(idx[int(np.argmin(vals))])
            v = int(vals.min())
            pv = p**v
            unit = (work[r, j] // pv) % m
            if unit != 1:
                work[r, j:] = work[r, j:] * inv[unit] % m
            active[r] = False
            others = idx[idx != r]
            if others.size:
                factor = work[others, j] // pv
                work[others, j:] = (work[others, j:] - factor[:, None] * work[r, j:]) % m
            if v > 0:
                ann = work[r, j:] * p ** (k - v) % m
                if ann.any():
                    work[n, j:] = ann
                    active[n] = True
                    n += 1
            pivot_rows.append(r)
            pivots.append((j, v))
        self.pivots = pivots
        self.rows = work[pivot_rows].copy() if pivot_rows else np.zeros((0, w), np.int64)
        rest = work[:n][active[:n]]
        self.residual = rest[rest.any(axis=1)] if rest.size else np.zeros((0, w), np.int64)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def span_order(self) -> int:
        """Number of elements of the span (pivot columns only)."""
        if self.residual.shape[0] and self.npivot == self.width:
            raise ZmodError("residual rows in a full-width echelon")
        out = 1
        for _, v in self.pivots:
            out *= self.p ** (self.k - v)
        return out

    def reduce(self, vecs) -> np.ndarray:
        """Canonical representatives of ``vecs`` modulo the span."""
        x = np.array(vecs, dtype=np.int64) % self.m
        single = x.ndim == 1
        if single:
            x = x[None, :]
        for (j, v), row in zip(self.pivots, self.rows):
            q = x[:, j] // self.p**v
            nz = q != 0
            if nz.any():
                x[nz] = (x[nz] - q[nz, None] * row) % self.m
        return x[0] if single else x

    def contains(self, vecs) -> np.ndarray:
        red = self.reduce(vecs)
        return ~red.any(axis=-1)

    def back_substitute(self, rhs: np.ndarray, seeds: np.ndarray | None = None):
        """Solve the pivot rows for the unknowns, one column per system.

        ``rhs`` has shape (rank, s): right-hand side of each pivot row.
        ``seeds`` (npivot, s) gives preset values; nonzero seeds are kept.
        Returns (x, ok) where ok flags the systems that were consistent.
        """
        m, p = self.m, self.p
        s = rhs.shape[1]
        u = self.npivot
        x = np.zeros((u, s), dtype=np.int64) if seeds is None else seeds.copy() % m
        keep = np.zeros((u, s), dtype=bool) if seeds is None else seeds % m != 0
        ok = np.ones(s, dtype=bool)
        for i in range(len(self.pivots) - 1, -1, -1):
            j, v = self.pivots[i]
            row = self.rows[i]
            t = (rhs[i] - row[j + 1 : u] @ x[j + 1 : u]) % m
            pv = p**v
            bad = t % pv != 0
            ok &= ~bad | keep[j]
            val = (t // pv) % (p ** (self.k - v))
            x[j] = np.where(keep[j], x[j], val)
        return x, ok


def solve(a, b, m: int):
    """Solve ``a @ x == b (mod m)`` for each column of ``b``.

    Returns a list with one solution vector (or ``None``) per column.
    Free unknowns are set to zero, so the answer is deterministic.
    """
    a = np.asarray(a, dtype=np.int64) % m
    b = np.asarray(b, dtype=np.int64) % m
    single = b.ndim == 1
    if single:
        b = b[:, None]
    u = a.shape[1]
    ech = Echelon(np.hstack([a, b]), m, npivot=u)
    ok = np.ones(b.shape[1], dtype=bool)
    if ech.residual.shape[0]:
        ok &= ~ech.residual[:, u:].any(axis=0)
    rhs = ech.rows[:, u:] if ech.rank else np.zeros((0, b.shape[1]), np.int64)
    x, ok2 = ech.back_substitute(rhs)
    ok &= ok2
    # cheap certificate that nothing went wrong above
    good = np.flatnonzero(ok)
    if good.size:
        assert not ((a @ x[:, good] - b[:, good]) % m).any()
    out = [x[:, c].copy() if ok[c] else None for c in range(b.shape[1])]
    return out[0] if single else out


def kernel(a, m: int) -> np.ndarray:
    """Generators of ``{x : a @ x == 0 (mod m)}`` as rows.

    Over a prime field the rows form a basis.
    """
    a = np.asarray(a, dtype=np.int64) % m
    u = a.shape[1]
    ech = Echelon(a, m)
    p, k = ech.p, ech.k
    piv = dict(ech.pivots)
    seeds = []
    for j in range(u):
        if j not in piv:
            seeds.append((j, 1))
        elif piv[j] > 0:
            seeds.append((j, p ** (k - piv[j])))
    if not seeds:
        return np.zeros((0, u), dtype=np.int64)
    s = np.zeros((u, len(seeds)), dtype=np.int64)
    for c, (j, value) in enumerate(seeds):
        s[j, c] = value
    x, ok = ech.back_substitute(np.zeros((ech.rank, len(seeds)), np.int64), seeds=s)
    assert ok.all()
    gens = x.T % m
    assert not ((a @ gens.T) % m).any()
    return gens


def span_order(rows, m: int, width: int | None = None) -> int:
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, width if width is not None else np.shape(rows)[-1])
    if rows.shape[0] == 0:
        return 1
    return Echelon(rows, m).span_order()


def rank(a, m: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return Echelon(a, m).rank


def mat_inverse(a, m: int) -> np.ndarray:
    """Inverse of a square matrix over Z/m; raises if it is singular."""
    a = np.asarray(a, dtype=np.int64) % m
    d = a.shape[0]
    if a.shape != (d, d):
        raise ZmodError("matrix is not square")
    cols = solve(a, np.eye(d, dtype=np.int64), m)
    if any(c is None for c in cols):
        raise ZmodError("matrix is not invertible")
    return np.stack(cols, axis=1) % m


def is_invertible(a, m: int) -> bool:
    try:
        mat_inverse(a, m)
    except ZmodError:
        return False
    return True

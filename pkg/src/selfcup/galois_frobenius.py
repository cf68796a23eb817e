"""Integer polynomials: discriminants, Frobenius cycle types, and an S_n certificate.

Polynomials are lists of Python ints in ascending degree.  Arithmetic mod p
uses plain ints, so any prime works; the scans in this package stay below
2**31.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor

RAMIFIED = "ramified"
CERTIFIED_FULL = "CERTIFIED_FULL"
UNKNOWN = "UNKNOWN"
DEFAULT_PRIME_BOUND = 2000


class PolyError(ValueError):
    pass


def parse_poly(text: str) -> list[int]:
    """``"6,1,0,0,0,0,1"`` -> x^6 + x + 6 (coefficients ascending)."""
    try:
        coeffs = [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError as exc:
        raise PolyError(f"bad coefficient list {text!r}") from exc
    return trim(coeffs)


def trim(f) -> list[int]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f) -> int:
    return len(trim(f)) - 1


def derivative(f) -> list[int]:
    return [i * c for i, c in enumerate(f)][1:]


def poly_to_string(f) -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        coef = str(c) if (c not in (1, -1) or i == 0) else ("-" if c == -1 else "")
        terms.append(coef + mono)
    return " + ".join(terms).replace("+ -", "- ") or "0"


# -- discriminant --------------------------------------------------------------


def sylvester(f, g) -> list[list[int]]:
    m, n = degree(f), degree(g)
    fd, gd = list(reversed(trim(f))), list(reversed(trim(g)))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - n - 1 - i))
    return rows


def bareiss_det(a) -> int:
    """Exact determinant by fraction-free elimination."""
    a = [list(r) for r in a]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def resultant(f, g) -> int:
    if degree(f) < 1 and degree(g) < 1:
        raise PolyError("resultant of two constants")
    return bareiss_det(sylvester(f, g))


def discriminant(f) -> int:
    f = trim(f)
    if not f:
        raise PolyError("zero polynomial")
    n = degree(f)
    if n < 2:
        raise PolyError("discriminant needs degree >= 2")
    res = resultant(f, derivative(f))
    q, r = divmod(res, f[-1])
    assert r == 0
    return (-1) ** (n * (n - 1) // 2) * q


# -- arithmetic mod p ------------------------------------------------------------


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(bound**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


def _mod(f, p):
    return trim([c % p for c in f])


def _monic(f, p):
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def _divmod(a, b, p):
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(len(b)):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return trim(q), trim(a[:db])


def _rem(a, b, p):
    return _divmod(a, b, p)[1]


def _gcd(a, b, p):
    a, b = _mod(a, p), _mod(b, p)
    while b:
        a, b = b, _rem(a, b, p)
    return _monic(a, p) if a else a


def _mulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _rem(out, f, p)


def _powmod(a, e, f, p):
    result, base = [1], _rem(a, f, p)
    while e:
        if e & 1:
            result = _mulmod(result, base, f, p)
        base = _mulmod(base, base, f, p)
        e >>= 1
    return result


def _sub(a, b, p):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return trim([(x - y) % p for x, y in zip(a, b)])


def _check_prime(f, p):
    if not is_prime(p):
        raise PolyError(f"{p} is not prime")
    f = trim(f)
    if not f or f[-1] % p == 0:
        raise PolyError(f"{p} divides the leading coefficient")
    return _monic(_mod(f, p), p)


def _ddf(fp, p) -> list[int]:
    """Factor degrees of a squarefree monic polynomial over F_p."""
    parts = []
    h = [0, 1]
    d = 0
    while len(fp) - 1 >= 2 * (d + 1):
        d += 1
        h = _powmod(h, p, fp, p)
        g = _gcd(_sub(h, [0, 1], p), fp, p)
        k = len(g) - 1
        if k > 0:
            parts += [d] * (k // d)
            fp = _divmod(fp, g, p)[0]
            h = _rem(h, fp, p)
    if len(fp) > 1:
        parts.append(len(fp) - 1)
    return sorted(parts)


def ddf_cycle_type(f, p: int):
    """Sorted factor degrees of f mod p, or RAMIFIED when f mod p is not squarefree."""
    fp = _check_prime(f, p)
    if len(fp) - 1 < 1:
        return ()
    if len(_gcd(fp, derivative(fp), p)) != 1:
        return RAMIFIED
    return tuple(_ddf(fp, p))


def squarefree_part_degrees(f, p: int) -> tuple[int, ...]:
    """Factor degrees of the squarefree part of f mod p (distinct irreducible factors).

    Repeated-root primes are exactly where this differs from the cycle type.
    """
    fp = _check_prime(f, p)
    df = _mod(derivative(fp), p)
    if not df:
        raise PolyError("f' vanishes mod p; the squarefree part needs a p-th root")
    g = _gcd(fp, df, p)
    core = _monic(_divmod(fp, g, p)[0], p)
    return tuple(_ddf(core, p))


def count_roots(f, p: int) -> int:
    """Number of distinct roots of f in F_p, by direct evaluation."""
    fp = _mod(f, p)
    cnt = 0
    for x in range(p):
        acc = 0
        for c in reversed(fp):
            acc = (acc * x + c) % p
        cnt += acc == 0
    return cnt


# -- certification and scanning -------------------------------------------------


def certify_symmetric(observed, n: int) -> str:
    """CERTIFIED_FULL when the observed types force S_n, else UNKNOWN.

    An n-cycle makes the group transitive; a transitive group containing an
    (n-1)-cycle is doubly transitive, and a doubly transitive group with a
    transposition is S_n.
    """
    types = {tuple(sorted(t)) for t in observed}
    need = [(n,), (1, n - 1), tuple([1] * (n - 2) + [2])]
    if n >= 2 and all(t in types for t in need):
        return CERTIFIED_FULL
    return UNKNOWN


def frobenius_scan(f, prime_bound: int = DEFAULT_PRIME_BOUND, threads: int = 1) -> dict:
    """Cycle types of f mod p for every prime p <= prime_bound."""
    f = trim(f)
    n = degree(f)
    primes = primes_up_to(prime_bound)
    good = [p for p in primes if f[-1] % p]

    def one(p):
        return p, ddf_cycle_type(f, p)

    if threads > 1 and len(good) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(one, good))
    else:
        results = [one(p) for p in good]
    table = [(p, t) for p, t in results if t != RAMIFIED]
    ramified = [p for p, t in results if t == RAMIFIED]
    counts = Counter(t for _, t in table)
    observed = sorted(counts)
    return {
        "polynomial": poly_to_string(f),
        "degree": n,
        "discriminant": discriminant(f) if n >= 2 else None,
        "prime_bound": prime_bound,
        "table": [{"p": p, "cycle_type": list(t)} for p, t in table],
        "ramified": ramified,
        "skipped_leading": [p for p in primes if f[-1] % p == 0],
        "observed": [{"cycle_type": list(t), "count": counts[t]} for t in observed],
        "verdict": certify_symmetric(observed, n),
    }

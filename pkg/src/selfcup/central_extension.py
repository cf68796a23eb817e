"""Central extensions 1 -> A -> B -> C -> 1 with C abelian, built from a 2-cocycle.

Elements of B are pairs ``(a, c)`` with

    (a, c)(a', c') = (a + a' + f(c, c'), c + c')

and G acts componentwise.  B is never tabulated; ``f`` is stored as a table
over the elements of C, indexed by base-m codes (first coordinate most
significant, the order of ``GModule.all_vectors``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cohomology import CohClass, Cochain, CochainError, cup11, is_cocycle, pushforward
from .gmodule import GModule, ModuleError
from .u_construction import BilinearForm

EXHAUSTIVE_TRIPLES = 32  # |C| up to which associativity is checked on all triples
SPOT_TRIPLES = 4096


class CentralExt:
    def __init__(self, A: GModule, C: GModule, f, name: str = "", seed: int = 0):
        if A.group is not C.group:
            raise ModuleError("A and C must live over the same group")
        if A.m != C.m:
            raise ModuleError("A and C must share a modulus")
        self.A, self.C, self.name = A, C, name
        self.m = C.m
        self._weights = C.m ** np.arange(C.dim - 1, -1, -1, dtype=np.int64)
        vecs = C.all_vectors()
        self._vecs = vecs
        if callable(f):
            table = np.array([[f(x, y) for y in vecs] for x in vecs], dtype=np.int64)
            table = table.reshape(len(vecs), len(vecs), A.dim)
        else:
            table = np.asarray(f, dtype=np.int64)
        if table.shape != (len(vecs), len(vecs), A.dim):
            raise ModuleError(f"cocycle table has shape {table.shape}")
        self.f = table % A.m
        self._add = self.code((vecs[:, None, :] + vecs[None, :, :]) % C.m)
        self._neg = self.code((-vecs) % C.m)
        self._validate(seed)

    def code(self, v) -> np.ndarray:
        return np.asarray(v, dtype=np.int64) % self.m @ self._weights

    def _validate(self, seed):
        f, add = self.f, self._add
        if f[0].any() or f[:, 0].any():
            raise ModuleError("cocycle is not normalized")
        k = len(self._vecs)
        if k <= EXHAUSTIVE_TRIPLES:
            x, y, z = (a.ravel() for a in np.indices((k, k, k)))
        else:
            rng = np.random.default_rng(seed)
            x, y, z = rng.integers(0, k, size=(3, SPOT_TRIPLES))
        lhs = f[x, y] + f[add[x, y], z]
        rhs = f[y, z] + f[x, add[y, z]]
        if ((lhs - rhs) % self.A.m).any():
            raise ModuleError("extension 2-cocycle condition fails")
        A, C = self.A, self.C
        for gi in A.group.generator_indices:
            gv = self.code(self._vecs @ C.action[gi].T)
            moved = f[gv[:, None], gv[None, :]]
            if ((moved - f @ A.action[gi].T) % A.m).any():
                raise ModuleError("cocycle is not G-equivariant")

    # element arithmetic on arrays of pairs; leading axes broadcast
    def mul(self, a1, c1, a2, c2):
        fa = self.f[self.code(c1), self.code(c2)]
        return (a1 + a2 + fa) % self.A.m, (c1 + c2) % self.m

    def inv(self, a, c):
        # (a, c)(a', -c) = (a + a' + f(c, -c), 0)
        k = self.code(c)
        return (-a - self.f[k, self._neg[k]]) % self.A.m, (-c) % self.m

    def act(self, gi, a, c):
        return (a @ self.A.action[gi].T) % self.A.m, (c @ self.C.action[gi].T) % self.m

    def lift(self, c):
        c = np.asarray(c, dtype=np.int64)
        return np.zeros(c.shape[:-1] + (self.A.dim,), dtype=np.int64), c % self.m

    def commutator(self, b1, b2):
        x = self.mul(*b1, *b2)
        y = self.mul(*self.inv(*b1), *self.inv(*b2))
        return self.mul(*x, *y)

    def is_abelian(self) -> bool:
        return not ((self.f - self.f.transpose(1, 0, 2)) % self.A.m).any()

    def __repr__(self) -> str:
        return f"CentralExt({self.name or '?'}: {self.A.name} -> B -> {self.C.name})"


def make_central_ext(A: GModule, C: GModule, f, name: str = "") -> CentralExt:
    return CentralExt(A, C, f, name=name)


def bilinear_ext(A: GModule, C: GModule, coeffs, name: str = "") -> CentralExt:
    """Extension with ``f(c, c') = sum_ij coeffs[k][i][j] c_i c'_j`` in coordinate k.

    A 2-d ``coeffs`` is taken as the single coordinate of a 1-dim A.
    """
    F = np.asarray(coeffs, dtype=np.int64)
    if F.ndim == 2:
        F = F[None]
    return CentralExt(A, C, lambda x, y: np.einsum("kij,i,j->k", F, x, y), name=name)


def pushout_extension(beta: BilinearForm) -> CentralExt:
    """UM pushed out along beta: the cocycle ``m (x) m'`` becomes ``beta(m, m')``."""
    return CentralExt(beta.target, beta.source, lambda x, y: beta(x, y), name="pushout")


def commutator_pairing(E: CentralExt) -> BilinearForm:
    """The alternating form ``[c1, c2]`` computed from literal commutators in B."""
    if getattr(E, "_pairing", None) is None:
        E._pairing = _commutator_pairing(E)
    return E._pairing


def _commutator_pairing(E: CentralExt) -> BilinearForm:
    C, A = E.C, E.A
    vecs = E._vecs
    k = len(vecs)
    b1 = E.lift(np.repeat(vecs, k, axis=0))
    b2 = E.lift(np.tile(vecs, (k, 1)))
    a, c = E.commutator(b1, b2)
    assert not c.any(), "commutator left the kernel"
    table = a.reshape(k, k, A.dim)
    closed = (E.f - E.f.transpose(1, 0, 2)) % A.m
    assert np.array_equal(table, closed), "commutator differs from f(c1,c2) - f(c2,c1)"
    d = C.dim
    basis = E.code(np.eye(d, dtype=np.int64)) if d else np.zeros(0, np.int64)
    mat = table[basis[:, None], basis[None, :]].reshape(d * d, A.dim).T
    beta = BilinearForm(C, A, mat)
    # bilinearity: the table must agree with the form on every pair
    assert np.array_equal(table.reshape(k * k, A.dim), beta(b1[1], b2[1])), "commutator pairing is not bilinear"
    assert beta.is_alternating, "commutator pairing is not alternating"
    return beta


def nonabelian_connecting(E: CentralExt, gamma: Cochain) -> Cochain:
    """``(g, h) -> l(gamma(g)) . g l(gamma(h)) . l(gamma(gh))^-1``, read off in A."""
    if gamma.degree != 1 or gamma.module is not E.C:
        raise CochainError("expected a 1-cochain in the quotient module")
    if not is_cocycle(gamma):
        raise CochainError("nonabelian_connecting expects a cocycle")
    G = E.C.group
    n = G.order
    z = gamma.values
    a0 = np.zeros((n, n, E.A.dim), dtype=np.int64)
    c1 = np.broadcast_to(z[:, None, :], (n, n, E.C.dim))
    c2 = np.einsum("gij,hj->ghi", E.C.action, z) % E.m  # g . l(gamma(h)) = (0, g gamma(h))
    p = E.mul(a0, c1, a0, c2)
    a, c = E.mul(*p, *E.inv(a0, z[G.mul_table]))
    if c.any():
        raise AssertionError("2-coboundary left the kernel A")
    out = Cochain(E.A, 2, a)
    closed = E.f[E.code(c1), E.code(c2)]
    assert np.array_equal(out.values, closed % E.A.m), "closed form f(gamma(g), g gamma(h)) violated"
    assert is_cocycle(out)
    return out


@dataclass
class IdentityVerdict:
    holds: bool
    holds_other_sign: bool
    lhs_zero: bool

    def as_dict(self) -> dict:
        return {"holds": self.holds, "holds_other_sign": self.holds_other_sign, "lhs_zero": self.lhs_zero}


def commutator_identity_check(E: CentralExt, g1: Cochain, g2: Cochain, sign: int = -1) -> IdentityVerdict:
    """Is ``q(g1+g2) - q(g1) - q(g2)`` cohomologous to ``[,]_*(sign * g1 u g2)``?

    The opposite sign is evaluated as well, so callers can see whether the
    check is sensitive to it at all.
    """
    q = lambda x: nonabelian_connecting(E, x)
    lhs = q(g1 + g2) - q(g1) - q(g2)
    pairing = commutator_pairing(E)
    cup = pushforward(cup11(g1, g2), pairing.matrix, E.A)
    rhs = cup * sign
    L = CohClass(lhs)
    return IdentityVerdict(L == CohClass(rhs), L == CohClass(-rhs), L.is_zero())


# -- the concrete extensions used by the test grid ------------------------------


def split_ext(A: GModule, C: GModule) -> CentralExt:
    k = C.size
    return CentralExt(A, C, np.zeros((k, k, A.dim), dtype=np.int64), name="split")


def z4_ext(A: GModule, C: GModule) -> CentralExt:
    """F_2 -> Z/4 -> F_2: the carry cocycle f(1, 1) = 1."""
    if A.m != 2 or A.dim != 1 or C.dim != 1:
        raise ModuleError("the Z/4 extension needs 1-dim F_2 modules")
    return CentralExt(A, C, lambda x, y: np.array([x[0] * y[0]]), name="Z/4")


def dihedral_ext(A: GModule, C: GModule) -> CentralExt:
    """F_2 -> D_4 -> F_2^2 with f(c, c') = c_1 c'_2."""
    return bilinear_ext(A, C, [[0, 1], [0, 0]], name="D4")


def heisenberg_ext(A: GModule, C: GModule, swap: bool = False) -> CentralExt:
    """F_3 -> Heis(F_3) -> F_3^2.

    With ``swap`` the cocycle is ``2 c_1 c'_2 + c_2 c'_1``, which is
    equivariant when the swap of C acts on A by -1.  Either way the
    commutator pairing is the standard symplectic form.
    """
    F = [[0, 2], [1, 0]] if swap else [[0, 1], [0, 0]]
    return bilinear_ext(A, C, F, name="Heis3-swap" if swap else "Heis3")

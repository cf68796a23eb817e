"""Group cohomology through the normalized bar resolution.

A k-cochain is stored as an array of shape ``(|G|,) * k + (d,)``, indexed
by element positions in the group's canonical order; identity is index 0
and every slot holding the identity is zero.  Coboundary convention::

    (dc)(g1, ..., gk+1) = g1 . c(g2, ...) + sum_i (-1)^i c(..., gi gi+1, ...)
                          + (-1)^(k+1) c(g1, ..., gk)

Cup product of 1-cochains: ``(a u b)(g, h) = a(g) (x) g.b(h)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import zmod
from .gmodule import GModule, ModuleError, restrict, tensor
from .perm_group import GroupSizeError, Perm, PermGroup

DEFAULT_SEED = 0xC0C0
EXHAUSTIVE_DIM = 12
SAMPLE_SIZE = 64
DEFAULT_H2_CAP = 200
# dense coboundary matrices beyond this many entries are refused
MATRIX_BUDGET = 60_000_000


class CochainError(ValueError):
    pass


class Cochain:
    def __init__(self, module: GModule, degree: int, values):
        n = module.group.order
        values = np.asarray(values, dtype=np.int64) % module.m
        if values.shape != (n,) * degree + (module.dim,):
            raise CochainError(
                f"degree-{degree} cochain needs shape {(n,) * degree + (module.dim,)}, got {values.shape}"
            )
        for axis in range(degree):
            if np.take(values, 0, axis=axis).any():
                raise CochainError("cochain is not normalized (nonzero on an identity slot)")
        self.module = module
        self.degree = degree
        self.values = values

    @property
    def group(self) -> PermGroup:
        return self.module.group

    def __repr__(self) -> str:
        return f"Cochain(degree={self.degree}, module={self.module!r})"

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return Cochain(self.module, self.degree, self.values + other.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return Cochain(self.module, self.degree, self.values - other.values)

    def __neg__(self) -> "Cochain":
        return Cochain(self.module, self.degree, -self.values)

    def __mul__(self, k: int) -> "Cochain":
        return Cochain(self.module, self.degree, self.values * int(k))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain)
            and other.module is self.module
            and other.degree == self.degree
            and np.array_equal(other.values, self.values)
        )

    def is_zero(self) -> bool:
        return not self.values.any()

    def at(self, *elems) -> np.ndarray:
        idx = tuple(self.group.index[g] if isinstance(g, Perm) else int(g) for g in elems)
        return self.values[idx]

    def to_vector(self) -> np.ndarray:
        sl = (slice(1, None),) * self.degree
        return self.values[sl].reshape(-1).copy()

    @classmethod
    def from_vector(cls, module: GModule, degree: int, vec) -> "Cochain":
        n = module.group.order
        vals = np.zeros((n,) * degree + (module.dim,), dtype=np.int64)
        sl = (slice(1, None),) * degree
        vals[sl] = np.asarray(vec, dtype=np.int64).reshape((n - 1,) * degree + (module.dim,))
        return cls(module, degree, vals)

    @classmethod
    def zero(cls, module: GModule, degree: int) -> "Cochain":
        n = module.group.order
        return cls(module, degree, np.zeros((n,) * degree + (module.dim,), dtype=np.int64))

    @classmethod
    def from_function(cls, module: GModule, degree: int, fn) -> "Cochain":
        """Build a cochain from ``fn(*perms)``; identity slots are forced to 0."""
        G = module.group
        n = G.order
        vals = np.zeros((n,) * degree + (module.dim,), dtype=np.int64)
        for idx in product(range(1, n), repeat=degree):
            vals[idx] = fn(*(G.elements[i] for i in idx))
        return cls(module, degree, vals)

    def _compatible(self, other: "Cochain"):
        if other.module is not self.module or other.degree != self.degree:
            raise CochainError("cochains live in different spaces")


@dataclass
class CohClass:
    """A cohomology class, carried by a cocycle representative."""

    representative: Cochain

    def __post_init__(self):
        if not is_cocycle(self.representative):
            raise CochainError("representative is not a cocycle")

    @property
    def module(self) -> GModule:
        return self.representative.module

    @property
    def degree(self) -> int:
        return self.representative.degree

    def is_zero(self) -> bool:
        return cohomologous(self.representative, Cochain.zero(self.module, self.degree)) is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohClass):
            return NotImplemented
        return cohomologous(self.representative, other.representative) is not None

    def __add__(self, other: "CohClass") -> "CohClass":
        return CohClass(self.representative + other.representative)


# -- coboundaries ------------------------------------------------------------


def coboundary(c: Cochain) -> Cochain:
    M, k = c.module, c.degree
    G, m = M.group, M.m
    A, T, v = M.action, G.mul_table, c.values
    if k == 0:
        out = np.einsum("gij,j->gi", A, v) - v[None, :]
    elif k == 1:
        out = np.einsum("gij,hj->ghi", A, v) - v[T] + v[:, None, :]
    elif k == 2:
        n = G.order
        out = (
            np.einsum("gij,hkj->ghki", A, v)
            - v[T]
            + v[np.arange(n)[:, None, None], T[None, :, :]]
            - v[:, :, None, :]
        )
    else:
        raise CochainError("coboundary is only implemented in degrees 0, 1, 2")
    return Cochain(M, k + 1, out % m)


def is_cocycle(c: Cochain) -> bool:
    if c.degree >= 3:
        raise CochainError("cocycle test is only implemented up to degree 2")
    return not coboundary(c).values.any()


def _check_budget(rows: int, cols: int):
    if rows * cols > MATRIX_BUDGET:
        raise GroupSizeError(
            f"coboundary matrix {rows} x {cols} exceeds the dense budget of {MATRIX_BUDGET} entries"
        )


def coboundary_matrix(M: GModule, k: int) -> np.ndarray:
    """Matrix of d: C^k -> C^{k+1} on normalized coordinates."""
    return _coboundary_matrix(id(M), M, k)


_MATRIX_CACHE: dict = {}


def _coboundary_matrix(key, M: GModule, k: int) -> np.ndarray:
    cached = _MATRIX_CACHE.get((key, k))
    if cached is not None and cached[0] is M:
        return cached[1]
    mat = _build_coboundary_matrix(M, k)
    if len(_MATRIX_CACHE) > 64:
        _MATRIX_CACHE.clear()
    _MATRIX_CACHE[(key, k)] = (M, mat)
    return mat


def _build_coboundary_matrix(M: GModule, k: int) -> np.ndarray:
    G, d, m = M.group, M.dim, M.m
    n, A, T = G.order, M.action, G.mul_table
    n1 = n - 1
    _check_budget(n1 ** (k + 1) * d, n1**k * d)
    eye = np.eye(d, dtype=np.int64)
    if k == 0:
        full = (A - eye[None]).reshape(n * d, d)
        return full[d:] % m
    if k == 1:
        D = np.zeros((n, n, d, n, d), dtype=np.int64)
        hs = np.arange(n)
        for g in range(n):
            D[g, hs, :, hs, :] += A[g]
            D[g, hs, :, T[g], :] -= eye
            D[g, hs, :, g, :] += eye
        D = D[1:, 1:, :, 1:, :]
        return D.reshape(n1 * n1 * d, n1 * d) % m
    if k == 2:
        D = np.zeros((n, n, n, d, n, n, d), dtype=np.int64)
        ks = np.arange(n)
        for g in range(n):
            for h in range(n):
                D[g, h, ks, :, h, ks, :] += A[g]
                D[g, h, ks, :, T[g, h], ks, :] -= eye
                D[g, h, ks, :, g, T[h], :] += eye
                D[g, h, ks, :, g, h, :] -= eye
        D = D[1:, 1:, 1:, :, 1:, 1:, :]
        return D.reshape(n1**3 * d, n1 * n1 * d) % m
    raise CochainError("coboundary matrices exist for k = 0, 1, 2")


def cochain_dim(M: GModule, k: int) -> int:
    return (M.group.order - 1) ** k * M.dim


# -- cohomology groups -------------------------------------------------------


@dataclass
class CohomologySpace:
    module: GModule
    degree: int
    z_order: int
    b_order: int
    classes: list = field(repr=False)
    exhaustive: bool = True
    generators: np.ndarray = field(default=None, repr=False)

    @property
    def h_order(self) -> int:
        return self.z_order // self.b_order

    def _dim(self, order: int):
        m = self.module.m
        d, x = 0, 1
        while x < order:
            x *= m
            d += 1
        return d if x == order else None

    @property
    def dim_z(self):
        return self._dim(self.z_order)

    @property
    def dim_b(self):
        return self._dim(self.b_order)

    @property
    def dim_h(self):
        return self._dim(self.h_order)

    def summary(self) -> dict:
        return {
            "degree": self.degree,
            "dim_Z": self.dim_z,
            "dim_B": self.dim_b,
            "dim_H": self.dim_h,
            "order_H": self.h_order,
            "classes_listed": len(self.classes),
            "exhaustive": self.exhaustive,
        }


def cohomology_space(
    M: GModule,
    k: int,
    h2_cap: int = DEFAULT_H2_CAP,
    seed: int = DEFAULT_SEED,
    enumerate_classes: bool = True,
) -> CohomologySpace:
    """Cocycles, coboundaries and class representatives of H^k(G, M), k in {1, 2}.

    Representatives are canonical: each is reduced modulo the coboundaries,
    so the zero class is represented by the zero cochain.  Classes are listed
    exhaustively when dim H^k <= 12, otherwise 64 are drawn with ``seed``.
    """
    if k not in (1, 2):
        raise CochainError("only H^1 and H^2 are supported")
    G, m = M.group, M.m
    if k == 2 and G.order > h2_cap:
        raise GroupSizeError(f"|G| = {G.order} exceeds the H^2 cap {h2_cap}")
    width = cochain_dim(M, k)
    if width == 0:
        zero = Cochain.zero(M, k)
        return CohomologySpace(M, k, 1, 1, [zero] if enumerate_classes else [], True,
                               np.zeros((0, 0), np.int64))
    dk = coboundary_matrix(M, k)
    dprev = coboundary_matrix(M, k - 1)
    z_gens = zmod.kernel(dk, m) if dk.size else np.eye(width, dtype=np.int64)
    z_order = zmod.span_order(z_gens, m, width) if len(z_gens) else 1
    b_rows = dprev.T % m
    b_ech = zmod.Echelon(b_rows, m) if b_rows.size else None
    b_order = b_ech.span_order() if b_ech is not None else 1

    if b_ech is not None and len(z_gens):
        reduced = b_ech.reduce(z_gens)
    else:
        reduced = z_gens
    reduced = reduced[reduced.any(axis=1)] if len(reduced) else reduced
    # generators of Z/B, themselves reduced mod B
    if len(reduced):
        h_ech = zmod.Echelon(reduced, m)
        h_gens = h_ech.rows
        if b_ech is not None:
            h_gens = b_ech.reduce(h_gens)
    else:
        h_gens = np.zeros((0, width), dtype=np.int64)

    space = CohomologySpace(M, k, z_order, b_order, [], True, h_gens)
    if not enumerate_classes:
        return space
    h_order = space.h_order

    def canon(vecs):
        return b_ech.reduce(vecs) if b_ech is not None else np.asarray(vecs) % m

    limit = m**EXHAUSTIVE_DIM
    if h_order <= limit:
        if zmod.is_prime(m):
            coeffs = np.array(list(product(range(m), repeat=len(h_gens))), dtype=np.int64)
            vecs = canon(coeffs @ h_gens % m) if len(h_gens) else np.zeros((1, width), np.int64)
        else:
            vecs = _enumerate_quotient(h_gens, canon, width, m)
        assert len(vecs) == h_order, (len(vecs), h_order)
        space.classes = [Cochain.from_vector(M, k, v) for v in vecs]
    else:
        rng = np.random.default_rng(seed)
        coeffs = rng.integers(0, m, size=(SAMPLE_SIZE, len(h_gens)))
        vecs = canon(coeffs @ h_gens % m)
        space.classes = [Cochain.from_vector(M, k, v) for v in vecs]
        space.exhaustive = False
    return space


def _enumerate_quotient(gens, canon, width, m):
    zero = np.zeros(width, dtype=np.int64)
    seen = {zero.tobytes(): zero}
    frontier = [zero]
    while frontier:
        batch = np.array(frontier)
        nxt = []
        for g in gens:
            for v in canon((batch + g) % m):
                key = v.tobytes()
                if key not in seen:
                    seen[key] = v
                    nxt.append(v)
        frontier = nxt
    keys = sorted(seen)
    return np.array([seen[k] for k in keys])


def cohomologous(c1: Cochain, c2: Cochain):
    """A (k-1)-cochain u with du = c1 - c2, or None when none exists."""
    if c1.module is not c2.module or c1.degree != c2.degree:
        raise CochainError("cochains live in different spaces")
    M, k = c1.module, c1.degree
    if k == 0:
        return Cochain.zero(M, 0) if c1 == c2 else None
    diff = (c1.values - c2.values) % M.m
    if not diff.any():
        return Cochain.zero(M, k - 1)
    d = coboundary_matrix(M, k - 1)
    rhs = (c1 - c2).to_vector()
    x = zmod.solve(d, rhs, M.m)
    if x is None:
        return None
    u = Cochain.from_vector(M, k - 1, x)
    assert (coboundary(u) - (c1 - c2)).is_zero()
    return u


def cohomologous_many(pairs):
    """Batch version of :func:`cohomologous` for pairs over one module."""
    pairs = list(pairs)
    if not pairs:
        return []
    M, k = pairs[0][0].module, pairs[0][0].degree
    out: list = [None] * len(pairs)
    todo = []
    for i, (a, b) in enumerate(pairs):
        if a.module is not M or b.module is not M or a.degree != k or b.degree != k:
            raise CochainError("all pairs must live over the same module and degree")
        if np.array_equal(a.values, b.values):
            out[i] = Cochain.zero(M, k - 1)
        else:
            todo.append(i)
    if todo:
        d = coboundary_matrix(M, k - 1)
        rhs = np.stack([(pairs[i][0] - pairs[i][1]).to_vector() for i in todo], axis=1)
        sols = zmod.solve(d, rhs, M.m)
        for i, x in zip(todo, sols):
            if x is not None:
                out[i] = Cochain.from_vector(M, k - 1, x)
    return out


def cohomologous2(c1: Cochain, c2: Cochain):
    if c1.degree != 2:
        raise CochainError("cohomologous2 expects 2-cochains")
    return cohomologous(c1, c2)


def is_coboundary(c: Cochain) -> bool:
    return cohomologous(c, Cochain.zero(c.module, c.degree)) is not None


# -- products and pushforwards ------------------------------------------------


def pushforward(c: Cochain, mat, target: GModule) -> Cochain:
    """Apply a G-equivariant linear map (target.dim x source.dim) to values."""
    mat = np.asarray(mat, dtype=np.int64)
    if mat.shape != (target.dim, c.module.dim):
        raise CochainError(f"map has shape {mat.shape}, expected {(target.dim, c.module.dim)}")
    if not c.module.is_equivariant_map(target, mat):
        raise CochainError("pushforward map is not G-equivariant")
    vals = np.einsum("ij,...j->...i", mat, c.values) % target.m
    return Cochain(target, c.degree, vals)


def cup11(a: Cochain, b: Cochain, target: GModule | None = None, check: bool = True) -> Cochain:
    """Cup product of 1-cocycles, ``(a u b)(g, h) = a(g) (x) g.b(h)``.

    Lands in ``tensor(a.module, b.module)`` unless ``target`` is given (it
    must have the same action as that tensor module).
    """
    if a.degree != 1 or b.degree != 1:
        raise CochainError("cup11 expects 1-cochains")
    M, N = a.module, b.module
    if M.group is not N.group:
        raise CochainError("cochains over different groups")
    if check and not (is_cocycle(a) and is_cocycle(b)):
        raise CochainError("cup11 expects cocycles")
    T = tensor(M, N) if target is None else target
    gb = np.einsum("gij,hj->ghi", N.action, b.values)
    vals = np.einsum("gi,ghj->ghij", a.values, gb).reshape(M.group.order, M.group.order, -1)
    out = Cochain(T, 2, vals % T.m)
    assert is_cocycle(out)
    return out


def cup11_paired(a: Cochain, b: Cochain, pairing, target: GModule) -> Cochain:
    """Cup product pushed along a bilinear map ``pairing``: M (x) N -> target."""
    return pushforward(cup11(a, b), pairing, target)


# -- short exact sequences and connecting maps -------------------------------


@dataclass
class ShortExactSequence:
    """0 -> A --inj--> B --surj--> C -> 0 of G-modules (moduli may differ)."""

    A: GModule
    B: GModule
    C: GModule
    inj: np.ndarray
    surj: np.ndarray

    def __post_init__(self):
        A, B, C = self.A, self.B, self.C
        self.inj = np.asarray(self.inj, dtype=np.int64) % B.m
        self.surj = np.asarray(self.surj, dtype=np.int64) % C.m
        if not (A.group.elements == B.group.elements == C.group.elements):
            raise ModuleError("sequence terms live over different groups")
        if self.inj.shape != (B.dim, A.dim) or self.surj.shape != (C.dim, B.dim):
            raise ModuleError("map shapes do not match module dimensions")
        if ((A.m * self.inj) % B.m).any() or B.m % C.m != 0:
            raise ModuleError("maps are not well defined between these moduli")
        if ((self.surj @ self.inj) % C.m).any():
            raise ModuleError("surj o inj is not zero")
        for g in A.group.generator_indices:
            if ((self.inj @ A.action[g] - B.action[g] @ self.inj) % B.m).any():
                raise ModuleError("inj is not G-equivariant")
            if ((self.surj @ B.action[g] - C.action[g] @ self.surj) % C.m).any():
                raise ModuleError("surj is not G-equivariant")
        img_inj = zmod.span_order(self.inj.T, B.m, B.dim) if A.dim else 1
        img_surj = zmod.span_order(self.surj.T, C.m, C.dim) if B.dim and C.dim else 1
        if img_inj != A.size:
            raise ModuleError("inj is not injective")
        if img_surj != C.size:
            raise ModuleError("surj is not surjective")
        if B.size != A.size * C.size:
            raise ModuleError("sequence is not exact in the middle")

    def lift(self, values: np.ndarray) -> np.ndarray:
        """Deterministic set-theoretic section C -> B applied to rows."""
        scale = self.B.m // self.C.m
        vals = np.asarray(values, dtype=np.int64).reshape(-1, self.C.dim)
        if self.C.dim == 0:
            return np.zeros((len(vals), self.B.dim), dtype=np.int64)
        sols = zmod.solve(scale * self.surj, (scale * vals.T) % self.B.m, self.B.m)
        if any(s is None for s in sols):
            raise ModuleError("value outside the image of surj")
        return np.stack(sols) % self.B.m

    def pullback(self, values: np.ndarray) -> np.ndarray:
        """Preimages under inj of rows known to lie in its image."""
        vals = np.asarray(values, dtype=np.int64).reshape(-1, self.B.dim)
        if self.A.dim == 0:
            return np.zeros((len(vals), 0), dtype=np.int64)
        sols = zmod.solve(self.inj, vals.T % self.B.m, self.B.m)
        if any(s is None for s in sols):
            raise ModuleError("value outside the image of inj")
        return np.stack(sols) % self.A.m


def connecting1(ses: ShortExactSequence, gamma: Cochain) -> Cochain:
    """Connecting map H^1(C) -> H^2(A) on cocycle level: lift, d, pull back."""
    if gamma.module is not ses.C and gamma.module.action.tobytes() != ses.C.action.tobytes():
        raise CochainError("cocycle does not live in the quotient module")
    if not is_cocycle(gamma):
        raise CochainError("connecting1 expects a cocycle")
    n = ses.B.group.order
    lifted = ses.lift(gamma.values).reshape(n, ses.B.dim)
    lifted[0] = 0
    db = coboundary(Cochain(ses.B, 1, lifted))
    a = ses.pullback(db.values).reshape(n, n, ses.A.dim)
    out = Cochain(ses.A, 2, a)
    assert is_cocycle(out)
    return out


# -- torsors -----------------------------------------------------------------


class AffineGSet:
    """A G-set that is a principal homogeneous space under a G-module.

    ``act(g, p)`` gives the action on points, ``difference(p, q)`` the module
    element ``p - q``.
    """

    def __init__(self, module: GModule, points, act, difference, check: bool = True):
        self.module = module
        self.points = sorted(points)
        if not self.points:
            raise CochainError("an affine G-set needs at least one point")
        self.act = act
        self.difference = difference
        if check:
            self._check()

    def _check(self):
        M = self.module
        pts = self.points
        if len(pts) != M.size:
            raise CochainError(f"{len(pts)} points but the module has {M.size} elements")
        base = pts[0]
        seen = {tuple(self.difference(p, base) % M.m) for p in pts}
        if len(seen) != len(pts):
            raise CochainError("difference to a base point is not a bijection")
        for p in pts[: min(len(pts), 8)]:
            for q in pts:
                r = pts[-1]
                lhs = (self.difference(p, q) + self.difference(q, r)) % M.m
                if not np.array_equal(lhs, self.difference(p, r) % M.m):
                    raise CochainError("difference map is not additive")
        for gi in M.group.generator_indices:
            g = M.group.elements[gi]
            for p in pts:
                if self.act(g, p) not in self._point_set:
                    raise CochainError("action does not preserve the point set")
                lhs = self.difference(self.act(g, p), self.act(g, base)) % M.m
                rhs = M.act(gi, self.difference(p, base))
                if not np.array_equal(lhs, rhs):
                    raise CochainError("difference map is not G-equivariant")

    @property
    def _point_set(self):
        if not hasattr(self, "_ps"):
            self._ps = set(self.points)
        return self._ps

    def fixed_points(self, H: PermGroup | None = None) -> list:
        gens = (H or self.module.group).generators
        return [p for p in self.points if all(self.act(g, p) == p for g in gens)]

    def cocycle(self, base=None) -> Cochain:
        base = self.points[0] if base is None else base
        M = self.module
        vals = np.zeros((M.group.order, M.dim), dtype=np.int64)
        for i, g in enumerate(M.group.elements):
            if i:
                vals[i] = self.difference(self.act(g, base), base)
        return Cochain(M, 1, vals)


def torsor_class(T: AffineGSet, base=None) -> CohClass:
    """Class of ``g -> g.p0 - p0``; zero exactly when T has a G-fixed point."""
    return CohClass(T.cocycle(base))


def restrict_cochain(c: Cochain, H: PermGroup) -> Cochain:
    M = c.module
    MH = restrict(M, H)
    idx = np.array([M.group.index[h] for h in H.elements])
    vals = c.values[np.ix_(*([idx] * c.degree))] if c.degree else c.values
    return Cochain(MH, c.degree, vals)


def restrict_class(x: CohClass, H: PermGroup) -> CohClass:
    return CohClass(restrict_cochain(x.representative, H))

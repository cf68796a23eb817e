"""The group UM = {1 + m + t} and what it computes.

UM is the central extension of M by M (x) M with product

    (1 + m + t)(1 + m' + t') = 1 + (m + m') + (m (x) m' + t + t').

Its connecting map H^1(M) -> H^2(M (x) M) is the self cup product.  Here we
also build the obstruction class of a bilinear form (the connecting image
of the form under the dual of the abelianised sequence) and search for
equivariant quadratic refinements, whose existence that class controls.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .cohomology import (
    DEFAULT_H2_CAP,
    DEFAULT_SEED,
    CohClass,
    Cochain,
    CochainError,
    cohomologous_many,
    cohomology_space,
    coboundary,
    cup11,
    is_cocycle,
    pushforward,
)
from .perm_group import GroupSizeError
from .gmodule import (
    GModule,
    ModuleError,
    UnsupportedError,
    evaluation_map,
    hom_module,
    tensor,
    tensor_square,
)


@dataclass(frozen=True)
class UElement:
    """``1 + m + t`` with ``m`` in M and ``t`` in M (x) M (flattened, index i*d+j)."""

    module: GModule
    m: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        M = self.module
        object.__setattr__(self, "m", np.asarray(self.m, dtype=np.int64) % M.m)
        object.__setattr__(self, "t", np.asarray(self.t, dtype=np.int64) % M.m)
        if self.m.shape != (M.dim,) or self.t.shape != (M.dim * M.dim,):
            raise ModuleError("UElement components have the wrong shape")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UElement)
            and other.module is self.module
            and np.array_equal(other.m, self.m)
            and np.array_equal(other.t, self.t)
        )

    def __mul__(self, other: "UElement") -> "UElement":
        return u_mul(self, other)

    @classmethod
    def identity(cls, M: GModule) -> "UElement":
        return cls(M, np.zeros(M.dim), np.zeros(M.dim * M.dim))


def _outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...j->...ij", a, b).reshape(*a.shape[:-1], -1)


# array-level group law; leading axes broadcast
def _mul(m1, t1, m2, t2, mod):
    return (m1 + m2) % mod, (t1 + t2 + _outer(m1, m2)) % mod


def _inv(m1, t1, mod):
    return (-m1) % mod, (-t1 + _outer(m1, m1)) % mod


def u_mul(x: UElement, y: UElement) -> UElement:
    if x.module is not y.module:
        raise ModuleError("UM elements over different modules")
    m, t = _mul(x.m, x.t, y.m, y.t, x.module.m)
    return UElement(x.module, m, t)


def u_inv(x: UElement) -> UElement:
    m, t = _inv(x.m, x.t, x.module.m)
    return UElement(x.module, m, t)


def u_act(g, x: UElement) -> UElement:
    M = x.module
    T = tensor_square(M)
    return UElement(M, M.act(g, x.m), T.act(g, x.t))


def u_commutator(x: UElement, y: UElement) -> UElement:
    return u_mul(u_mul(x, y), u_mul(u_inv(x), u_inv(y)))


def section_s(M: GModule, v) -> UElement:
    """The set-theoretic section m -> 1 + m."""
    return UElement(M, v, np.zeros(M.dim * M.dim))


def u_connecting(zeta: Cochain) -> Cochain:
    """Nonabelian 2-coboundary of ``s o zeta`` inside UM.

    ``(g, h) -> s(zeta(g)) . g s(zeta(h)) . s(zeta(gh))^-1``, which lies in
    M (x) M.  The closed form ``zeta(g) (x) g zeta(h)`` is asserted.
    """
    if zeta.degree != 1:
        raise CochainError("u_connecting expects a 1-cochain")
    if not is_cocycle(zeta):
        raise CochainError("u_connecting expects a cocycle")
    M = zeta.module
    G, mod, d = M.group, M.m, M.dim
    n = G.order
    z = zeta.values
    zero_t = np.zeros((n, n, d * d), dtype=np.int64)
    # s(zeta(g)), broadcast over h
    m1 = np.broadcast_to(z[:, None, :], (n, n, d))
    # g . s(zeta(h)) = (g zeta(h), (g (x) g) 0)
    m2 = np.einsum("gij,hj->ghi", M.action, z) % mod
    m3, t3 = _inv(z[G.mul_table], zero_t, mod)
    m12, t12 = _mul(m1, zero_t, m2, zero_t, mod)
    m123, t123 = _mul(m12, t12, m3, t3, mod)
    if m123.any():
        raise AssertionError("2-coboundary left the kernel M (x) M")
    T = tensor_square(M)
    out = Cochain(T, 2, t123)
    closed = np.einsum("gi,ghj->ghij", z, m2).reshape(n, n, d * d) % mod
    assert np.array_equal(out.values, closed), "closed form zeta(g) (x) g.zeta(h) violated"
    return out


@dataclass
class SelfCupReport:
    module: str
    group_order: int
    dim_h1: int | None
    order_h1: int
    exhaustive: bool
    classes_checked: int = 0
    perturbed_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.classes_checked > 0

    def as_dict(self) -> dict:
        return {
            "module": self.module,
            "group_order": self.group_order,
            "dim_H1": self.dim_h1,
            "order_H1": self.order_h1,
            "exhaustive": self.exhaustive,
            "classes_checked": self.classes_checked,
            "perturbed_checked": self.perturbed_checked,
            "passed": self.passed,
            "failures": self.failures,
        }


def corrupted_cup(a: Cochain, b: Cochain) -> Cochain:
    """Cup product with the g-action dropped: ``a(g) (x) b(h)``.  Test hook only."""
    M = a.module
    n = M.group.order
    vals = np.einsum("gi,hj->ghij", a.values, b.values).reshape(n, n, -1)
    return Cochain(tensor(M, b.module), 2, vals % M.m)


def selfcup_check(
    M: GModule, seed: int = DEFAULT_SEED, perturb: int = 4, cup=None, h2_cap: int = DEFAULT_H2_CAP
) -> SelfCupReport:
    """Check ``u_connecting(x) ~ cup11(x, x)`` for every listed class of H^1(G, M).

    ``perturb`` classes are additionally re-represented as ``x + dv`` for a
    random v before the comparison, which forces a real coboundary solve.
    """
    if M.group.order > h2_cap:
        raise GroupSizeError(f"|G| = {M.group.order} exceeds the H^2 cap {h2_cap}")
    cup = cup or (lambda a, b: cup11(a, b, check=False))
    space = cohomology_space(M, 1, seed=seed)
    rep = SelfCupReport(M.name, M.group.order, space.dim_h, space.h_order, space.exhaustive)
    rng = np.random.default_rng(seed)
    pairs, labels = [], []
    for i, x in enumerate(space.classes):
        pairs.append((u_connecting(x), cup(x, x)))
        labels.append({"class_index": i, "perturbed": False})
    for i, x in enumerate(space.classes[:perturb]):
        v = Cochain(M, 0, rng.integers(0, M.m, size=M.dim))
        x2 = x + coboundary(v)
        pairs.append((u_connecting(x2), cup(x, x)))
        labels.append({"class_index": i, "perturbed": True})
    witnesses = cohomologous_many(pairs)
    for lab, w in zip(labels, witnesses):
        if lab["perturbed"]:
            rep.perturbed_checked += 1
        else:
            rep.classes_checked += 1
        if w is None:
            x = space.classes[lab["class_index"]]
            rep.failures.append({**lab, "cocycle": x.to_vector().tolist()})
    return rep


# -- bilinear forms, obstruction classes, quadratic refinements ---------------


class BilinearForm:
    """A G-equivariant bilinear map M x M -> N, stored as N.dim x M.dim^2."""

    def __init__(self, source: GModule, target: GModule, matrix):
        self.source = source
        self.target = target
        mat = np.asarray(matrix, dtype=np.int64) % target.m
        d = source.dim
        if mat.shape != (target.dim, d * d):
            raise ModuleError(f"bilinear form matrix must be {(target.dim, d * d)}, got {mat.shape}")
        if source.m != target.m:
            raise ModuleError("source and target moduli differ")
        self.matrix = mat
        if not tensor_square(source).is_equivariant_map(target, mat):
            raise ModuleError("bilinear form is not G-equivariant")

    @classmethod
    def from_gram(cls, source: GModule, target: GModule, gram) -> "BilinearForm":
        """Form with values ``x^T gram y`` in a 1-dimensional target."""
        gram = np.asarray(gram, dtype=np.int64)
        return cls(source, target, gram.reshape(1, -1))

    def __call__(self, x, y) -> np.ndarray:
        return _outer(np.asarray(x), np.asarray(y)) @ self.matrix.T % self.target.m

    def values(self) -> np.ndarray:
        """Array b[i, j] = beta(e_i, e_j) with shape (d, d, N.dim)."""
        d = self.source.dim
        return self.matrix.T.reshape(d, d, -1)

    @property
    def is_symmetric(self) -> bool:
        b = self.values()
        return np.array_equal(b, b.transpose(1, 0, 2))

    @property
    def is_alternating(self) -> bool:
        b = self.values()
        d = self.source.dim
        diag = b[np.arange(d), np.arange(d)]
        return not diag.any() and not ((b + b.transpose(1, 0, 2)) % self.target.m).any()

    def __add__(self, other: "BilinearForm") -> "BilinearForm":
        return BilinearForm(self.source, self.target, self.matrix + other.matrix)


def basis_refinement(beta: BilinearForm, x) -> np.ndarray:
    """A (generally non-equivariant) map Q with Q(x+y) - Q(x) - Q(y) = -beta(x, y).

    ``Q(x) = -sum_{i<j} x_i x_j b_ij - sum_i C(x_i, 2) b_ii`` on coordinates
    taken in [0, m).  For m = 2 the sign is immaterial.
    """
    b = beta.values()
    x = np.asarray(x, dtype=np.int64)
    d = beta.source.dim
    iu, ju = np.triu_indices(d, k=1)
    cross = np.einsum("...k,kn->...n", x[..., iu] * x[..., ju], b[iu, ju]) if len(iu) else 0
    diag = np.einsum("...i,in->...n", x * (x - 1) // 2, b[np.arange(d), np.arange(d)])
    return (-(cross + diag)) % beta.target.m


def _check_variant(beta: BilinearForm, variant: str):
    m = beta.source.m
    if variant == "alternating":
        if m != 2:
            raise UnsupportedError("the alternating variant needs 2M = 0")
        if not beta.is_alternating:
            raise ModuleError("form is not alternating")
    elif variant == "symmetric":
        if m % 2 == 0:
            raise UnsupportedError("symmetric variant needs odd m: (UM)^ab is not killed by m")
        if not beta.is_symmetric:
            raise ModuleError("form is not symmetric")
    else:
        raise ValueError(f"unknown variant {variant!r}")


def obstruction_cocycle(beta: BilinearForm, variant: str = "alternating") -> Cochain:
    """``c(g) = phi - g.phi`` restricted along s, with phi a lift of beta.

    The lift is ``phi(s(m)) = Q(m)`` for the basis refinement Q; the result
    lies in Hom(M, N) because two refinements of an invariant form differ by
    a homomorphism.
    """
    _check_variant(beta, variant)
    M, N = beta.source, beta.target
    G = M.group
    H = hom_module(M, N)
    n, d = G.order, M.dim
    basis = np.eye(d, dtype=np.int64)
    vals = np.zeros((n, H.dim), dtype=np.int64)
    probe = M.all_vectors() if M.size <= 256 else None
    for gi in range(1, n):
        ginv = M.inverse_action[gi]

        def c_of(vecs):
            q = basis_refinement(beta, vecs)
            gq = basis_refinement(beta, vecs @ ginv.T % M.m) @ N.action[gi].T
            return (q - gq) % N.m

        cols = c_of(basis)  # row i = c(g)(e_i)
        if probe is not None:
            # c(g) must be additive; compare with the linear extension
            assert np.array_equal(c_of(probe), probe @ cols % N.m), "obstruction cochain not linear"
        vals[gi] = cols.reshape(-1)
    out = Cochain(H, 1, vals)
    assert is_cocycle(out)
    return out


def obstruction_class(beta: BilinearForm, variant: str = "alternating") -> CohClass:
    return CohClass(obstruction_cocycle(beta, variant))


@dataclass
class QuadraticMap:
    """``q(x) = -Q_basis(x) + linear @ x``, whose polar form is beta."""

    beta: BilinearForm
    linear: np.ndarray

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return (-basis_refinement(self.beta, x) + x @ self.linear.T) % self.beta.target.m

    def polar(self, x, y) -> np.ndarray:
        x, y = np.asarray(x), np.asarray(y)
        mod = self.beta.target.m
        return (self(x + y) - self(x) - self(y)) % mod


def quadratic_refinement(beta: BilinearForm, cross_check: bool = True) -> QuadraticMap | None:
    """Search the affine space of refinements of beta for a G-equivariant one.

    Refinements are ``Q_basis + l`` for linear l: M -> N, so the search runs
    over all N.dim x M.dim matrices.  The result satisfies
    ``q(x + y) - q(x) - q(y) == beta(x, y)``.
    """
    M, N = beta.source, beta.target
    _check_variant(beta, "alternating" if M.m == 2 else "symmetric")
    vecs = M.all_vectors()
    q0 = -basis_refinement(beta, vecs)
    gens = M.group.generator_indices
    found = None
    for entries in product(range(N.m), repeat=N.dim * M.dim):
        lin = np.array(entries, dtype=np.int64).reshape(N.dim, M.dim)
        q = (q0 + vecs @ lin.T) % N.m
        ok = True
        for gi in gens:
            moved = vecs @ M.action[gi].T % M.m
            qm = (-basis_refinement(beta, moved) + moved @ lin.T) % N.m
            if not np.array_equal(qm, q @ N.action[gi].T % N.m):
                ok = False
                break
        if ok:
            found = QuadraticMap(beta, lin)
            break
    if cross_check:
        zero = obstruction_class(beta, "alternating" if M.m == 2 else "symmetric").is_zero()
        assert zero == (found is not None), "refinement search disagrees with the obstruction class"
    return found


def evaluation_cup(c: Cochain, x: Cochain, N: GModule) -> Cochain:
    """``ev(c u x)`` for c in Hom(M, N) and x in M, landing in N."""
    M = x.module
    if c.module is not hom_module(M, N):
        raise CochainError("first argument must live in Hom(M, N)")
    return pushforward(cup11(c, x), evaluation_map(M, N), N)


def corollary_check(beta: BilinearForm, x: Cochain, variant: str | None = None) -> dict:
    """Compare three maps H^1(M) -> H^2(N) on one class x.

    cup: beta(x u x).  connecting: the connecting map of the pushout of UM
    along beta.  evaluation: ev(c_beta u x).  Returns which agree with cup.
    """
    from .central_extension import nonabelian_connecting, pushout_extension

    M, N = beta.source, beta.target
    variant = variant or ("alternating" if M.m == 2 else "symmetric")
    cup = pushforward(cup11(x, x), beta.matrix, N)
    conn = nonabelian_connecting(pushout_extension(beta), x)
    ev = evaluation_cup(obstruction_cocycle(beta, variant), x, N)
    return {
        "connecting": CohClass(cup) == CohClass(conn),
        "evaluation": CohClass(cup) == CohClass(ev),
        "evaluation_negated": CohClass(cup) == CohClass(-ev),
    }

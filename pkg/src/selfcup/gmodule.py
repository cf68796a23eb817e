"""Modules over Z/m with a permutation-group action.

A :class:`GModule` is ``(Z/m)^d`` with one invertible matrix per group
element.  Vectors are plain ``int64`` numpy arrays reduced mod ``m``.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations_with_replacement, combinations

import numpy as np

from . import zmod
from .perm_group import Perm, PermGroup

SUPPORTED_MODULI = (2, 3, 4, 5)


class ModuleError(ValueError):
    pass


class UnsupportedError(ModuleError):
    pass


class GModule:
    def __init__(self, group: PermGroup, m: int, action, name: str = ""):
        if m not in SUPPORTED_MODULI:
            raise UnsupportedError(f"modulus {m} not in {SUPPORTED_MODULI}")
        action = np.asarray(action, dtype=np.int64) % m
        if action.ndim != 3 or action.shape[0] != group.order or action.shape[1] != action.shape[2]:
            raise ModuleError("action must have shape (|G|, d, d)")
        self.group = group
        self.m = m
        self.action = action
        self.action.setflags(write=False)
        self.name = name
        self._derived: dict = {}
        if self.dim:
            self._check()

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def size(self) -> int:
        return self.m**self.dim

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"GModule{label}(m={self.m}, dim={self.dim}, |G|={self.group.order})"

    def _check(self):
        G, m, d = self.group, self.m, self.dim
        if not np.array_equal(self.action[0], np.eye(d, dtype=np.int64)):
            raise ModuleError("identity must act trivially")
        for a in G.generator_indices:
            if not zmod.is_invertible(self.action[a], m):
                raise ModuleError(f"action of generator {G.elements[a]} is not invertible mod {m}")
        # A(g x) == A(g) A(x) for generators g and all x pins down a homomorphism
        table = G.mul_table
        for a in G.generator_indices:
            lhs = self.action[table[a]]
            rhs = np.einsum("ij,xjk->xik", self.action[a], self.action) % m
            if not np.array_equal(lhs, rhs):
                raise ModuleError("matrices do not define a group action (a relation fails)")

    def act(self, g, v) -> np.ndarray:
        """Apply element ``g`` (a Perm or an element index) to vector(s) ``v``."""
        i = self.group.index[g] if isinstance(g, Perm) else int(g)
        return np.asarray(v, dtype=np.int64) @ self.action[i].T % self.m

    @cached_property
    def inverse_action(self) -> np.ndarray:
        return self.action[self.group.inverse_index]

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def all_vectors(self) -> np.ndarray:
        """Every element of the module, as rows (only sensible for small modules)."""
        d, m = self.dim, self.m
        if d == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices((m,) * d).reshape(d, -1).T
        return grids.astype(np.int64)

    def is_equivariant_map(self, other: "GModule", mat) -> bool:
        """Whether ``mat`` (other.dim x self.dim) commutes with the actions."""
        mat = np.asarray(mat, dtype=np.int64)
        for a in self.group.generator_indices:
            lhs = mat @ self.action[a] % other.m
            rhs = other.action[a] @ mat % other.m
            if not np.array_equal(lhs, rhs):
                return False
        return True


def make_module(G: PermGroup, m: int, generator_matrices, name: str = "") -> GModule:
    """Extend one matrix per generator of G to a full action."""
    mats = [np.asarray(a, dtype=np.int64) % m for a in generator_matrices]
    if len(mats) != len(G.generators):
        raise ModuleError(f"expected {len(G.generators)} matrices, got {len(mats)}")
    if mats:
        d = mats[0].shape[0]
        for a in mats:
            if a.shape != (d, d):
                raise ModuleError("generator matrices must be square and of equal size")
            if not zmod.is_invertible(a, m):
                raise ModuleError("generator matrix is not invertible")
    else:
        raise ModuleError("use trivial_module for a group without generators")
    action = np.empty((G.order, d, d), dtype=np.int64)
    for i, word in enumerate(G.words):
        acc = np.eye(d, dtype=np.int64)
        for a in word:
            acc = acc @ mats[a] % m
        action[i] = acc
    return GModule(G, m, action, name=name)


def trivial_module(G: PermGroup, m: int = 2, dim: int = 1, name: str = "") -> GModule:
    action = np.broadcast_to(np.eye(dim, dtype=np.int64), (G.order, dim, dim))
    return GModule(G, m, action, name=name or f"trivial(Z/{m})^{dim}")


def permutation_module(G: PermGroup, m: int = 2, points=None, name: str = "") -> GModule:
    """``(Z/m)^points`` with G permuting coordinates; ``points`` must be G-stable."""
    pts = list(range(G.n)) if points is None else sorted(points)
    pos = {p: i for i, p in enumerate(pts)}
    k = len(pts)
    action = np.zeros((G.order, k, k), dtype=np.int64)
    for gi, g in enumerate(G.elements):
        for p in pts:
            if g(p) not in pos:
                raise ModuleError(f"points {pts} are not stable under {g}")
            action[gi, pos[g(p)], pos[p]] = 1
    return GModule(G, m, action, name=name or f"perm(Z/{m})^{k}")


def character_module(G: PermGroup, m: int, chi, name: str = "") -> GModule:
    """One-dimensional module where g acts by the scalar ``chi(g)``."""
    action = np.array([[[chi(g) % m]] for g in G.elements], dtype=np.int64)
    return GModule(G, m, action, name=name)


def sign_module(G: PermGroup, m: int, name: str = "") -> GModule:
    return character_module(G, m, lambda g: g.sign(), name=name or f"sign(Z/{m})")


def swap_module(G: PermGroup, parity, m: int = 2, name: str = "") -> GModule:
    """(Z/m)^2 where g swaps the coordinates iff ``parity(g)`` is odd."""
    swap = np.array([[0, 1], [1, 0]])
    action = np.array([swap if parity(g) % 2 else np.eye(2, dtype=np.int64) for g in G.elements])
    return GModule(G, m, action, name=name or f"swap(Z/{m})^2")


# -- derived modules ---------------------------------------------------------
# Derived modules are memoised on their source so that cochains built by
# different routes (cup products, pushforwards) share one module object.


def _memo(M: GModule, key, build):
    hit = M._derived.get(key)
    if hit is None:
        hit = build()
        M._derived[key] = hit
    return hit


def tensor(M: GModule, N: GModule) -> GModule:
    _same_base(M, N)
    return _memo(M, ("tensor", id(N), N), lambda: _tensor(M, N))


def _tensor(M: GModule, N: GModule) -> GModule:
    action = np.einsum("gij,gkl->gikjl", M.action, N.action).reshape(
        M.group.order, M.dim * N.dim, M.dim * N.dim
    )
    return GModule(M.group, M.m, action, name=f"({M.name} x {N.name})")


def tensor_square(M: GModule) -> GModule:
    return tensor(M, M)


def sym_basis(d: int) -> list[tuple[int, int]]:
    return list(combinations_with_replacement(range(d), 2))


def wedge_basis(d: int) -> list[tuple[int, int]]:
    return list(combinations(range(d), 2))


def sym_projection(d: int, m: int) -> np.ndarray:
    """Matrix of M (x) M -> S^2 M, basis e_i e_j (i <= j) lexicographic."""
    basis = {pair: k for k, pair in enumerate(sym_basis(d))}
    proj = np.zeros((len(basis), d * d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            proj[basis[(min(i, j), max(i, j))], i * d + j] = 1
    return proj % m


def wedge_projection(d: int, m: int = 2) -> np.ndarray:
    """Matrix of M (x) M -> wedge^2 M, basis e_i ^ e_j (i < j) lexicographic."""
    basis = {pair: k for k, pair in enumerate(wedge_basis(d))}
    proj = np.zeros((len(basis), d * d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            if i < j:
                proj[basis[(i, j)], i * d + j] = 1
            elif i > j:
                proj[basis[(j, i)], i * d + j] = -1
    return proj % m


def _quotient_action(M: GModule, proj: np.ndarray, pairs) -> np.ndarray:
    d, m = M.dim, M.m
    lift = np.zeros((d * d, len(pairs)), dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        lift[i * d + j, k] = 1
    tens = np.einsum("gij,gkl->gikjl", M.action, M.action).reshape(M.group.order, d * d, d * d)
    return np.einsum("ab,gbc,cd->gad", proj, tens, lift) % m


def sym_square(M: GModule) -> GModule:
    return _memo(M, "sym", lambda: _sym_square(M))


def _sym_square(M: GModule) -> GModule:
    pairs = sym_basis(M.dim)
    proj = sym_projection(M.dim, M.m)
    return GModule(M.group, M.m, _quotient_action(M, proj, pairs), name=f"S2({M.name})")


def wedge_square(M: GModule) -> GModule:
    if M.m != 2:
        raise UnsupportedError("wedge_square is only modelled for 2M = 0 (m = 2)")
    return _memo(M, "wedge", lambda: _wedge_square(M))


def _wedge_square(M: GModule) -> GModule:
    pairs = wedge_basis(M.dim)
    proj = wedge_projection(M.dim, M.m)
    action = _quotient_action(M, proj, pairs) if pairs else np.zeros((M.group.order, 0, 0))
    return GModule(M.group, M.m, action, name=f"W2({M.name})")


def dual(M: GModule) -> GModule:
    """Contragredient module: g acts by the transpose of action(g^-1)."""
    def build():
        action = M.inverse_action.transpose(0, 2, 1)
        return GModule(M.group, M.m, action, name=f"{M.name}*")

    return _memo(M, "dual", build)


def hom_module(M: GModule, N: GModule) -> GModule:
    """Hom(M, N) realised as dual(M) (x) N.

    Coordinate ``i * N.dim + j`` of a homomorphism ``phi`` is ``phi(e_i)_j``.
    """
    _same_base(M, N)
    return tensor(dual(M), N)


def hom_to_matrix(vec, M: GModule, N: GModule) -> np.ndarray:
    """The N.dim x M.dim matrix of a Hom(M, N) coordinate vector."""
    return np.asarray(vec, dtype=np.int64).reshape(M.dim, N.dim).T % N.m


def matrix_to_hom(mat, M: GModule, N: GModule) -> np.ndarray:
    return np.asarray(mat, dtype=np.int64).T.reshape(-1) % N.m


def evaluation_map(M: GModule, N: GModule) -> np.ndarray:
    """Matrix of Hom(M, N) (x) M -> N, phi (x) x -> phi(x)."""
    dm, dn = M.dim, N.dim
    ev = np.zeros((dn, dm * dn * dm), dtype=np.int64)
    for i in range(dm):
        for j in range(dn):
            # (phi coordinate i*dn + j) (x) (x coordinate i)
            ev[j, (i * dn + j) * dm + i] = 1
    return ev


def invariants(M: GModule, H: PermGroup | None = None) -> np.ndarray:
    """Generators (a basis for prime m) of the vectors fixed by H, as rows."""
    H = M.group if H is None else H
    d = M.dim
    rows = [M.action[M.group.index[h]] - np.eye(d, dtype=np.int64) for h in H.generators]
    if not rows or d == 0:
        return np.eye(d, dtype=np.int64)
    return zmod.kernel(np.vstack(rows) % M.m, M.m)


def fixed_dim(M: GModule, H: PermGroup | None = None) -> int:
    if not zmod.is_prime(M.m):
        raise UnsupportedError("dimension of fixed points needs a prime modulus")
    return len(invariants(M, H))


def cyclic_rank_check(M: GModule, g: Perm) -> tuple[int, int]:
    """``(dim M^<g>, dim dual(M)^<g>)``; these always agree."""
    H = M.group.subgroup([g]) if not g.is_identity() else M.group.subgroup([])
    a = fixed_dim(M, H)
    b = fixed_dim(dual(M), H)
    assert a == b, f"fixed dimensions differ: {a} != {b}"
    return a, b


def restrict(M: GModule, H: PermGroup) -> GModule:
    if H is M.group:
        return M
    if not H.is_subgroup_of(M.group):
        raise ModuleError("restriction target is not a subgroup")
    idx = [M.group.index[h] for h in H.elements]
    return _memo(M, ("restrict", id(H), H), lambda: GModule(H, M.m, M.action[idx], name=f"{M.name}|H"))


def _same_base(M: GModule, N: GModule):
    if M.group is not N.group and M.group.elements != N.group.elements:
        raise ModuleError("modules live over different groups")
    if M.m != N.m:
        raise ModuleError("modules have different moduli")

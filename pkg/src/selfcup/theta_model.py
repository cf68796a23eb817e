"""2-torsion and theta characteristics of y^2 = f(x) as subset classes of the roots.

With Delta the 2g+2 roots, W_p is the set of subsets of Delta of size
parity p taken modulo complementation.  W_0 is the 2-torsion module, with
basis classes ``{i, i+1}`` for i < 2g, and W_{(g+1) mod 2} is the torsor of
theta characteristics.  Subsets are bitmasks; a class is stored by its
member that avoids the largest root.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cohomology import (
    DEFAULT_H2_CAP,
    DEFAULT_SEED,
    AffineGSet,
    CohClass,
    cohomologous_many,
    cohomology_space,
    cup11,
    pushforward,
    restrict_class,
)
from .gmodule import GModule, ModuleError, hom_module, trivial_module
from .perm_group import Perm, PermGroup, cyclic_subgroup_reps, parse_generators
from .u_construction import BilinearForm, obstruction_cocycle

EXTERNAL_PLACES_NOTE = (
    "cyclic subgroups model unramified places only; ramified and archimedean "
    "places need separate local input"
)


def popcount(x: int) -> int:
    return bin(x).count("1")


def canonical(S: int, n: int) -> int:
    """The member of {S, complement} not containing root n-1."""
    return S ^ ((1 << n) - 1) if S >> (n - 1) & 1 else S


def subset_mask(points) -> int:
    return sum(1 << p for p in set(points))


def mask_points(S: int) -> list[int]:
    return [i for i in range(S.bit_length()) if S >> i & 1]


def apply_perm(g: Perm, S: int, n: int) -> int:
    out = 0
    for i in range(n):
        if S >> i & 1:
            out |= 1 << g.images[i]
    return canonical(out, n)


def w0_coords(S: int, n: int) -> np.ndarray:
    """Coordinates of an even class in the basis {i, i+1}: prefix parities."""
    S = canonical(S, n)
    if popcount(S) % 2:
        raise ModuleError("odd subset has no W0 coordinates")
    bits = np.array([S >> i & 1 for i in range(n - 2)], dtype=np.int64)
    return np.cumsum(bits) % 2


def w0_subset(x, n: int) -> int:
    """Canonical even subset with W0 coordinates x."""
    S = 0
    for i, xi in enumerate(x):
        if xi % 2:
            S ^= (1 << i) | (1 << (i + 1))
    return canonical(S, n)


def weil_pairing(S: int, T: int, n: int | None = None) -> int:
    """Intersection parity |S n T| mod 2 of two even subsets (any representatives)."""
    if popcount(S) % 2 or popcount(T) % 2:
        raise ModuleError("the pairing is defined on even subsets")
    return popcount(S & T) % 2


def gram_matrix(genus: int) -> np.ndarray:
    """Weil pairing on the basis {i, i+1}: 1 exactly for neighbouring indices."""
    k = 2 * genus
    E = np.zeros((k, k), dtype=np.int64)
    for i in range(k - 1):
        E[i, i + 1] = E[i + 1, i] = 1
    return E


def w0_module(G: PermGroup, genus: int = 2, name: str = "W0") -> GModule:
    """W0 for G acting on the first points of Delta (G is padded with fixed roots)."""
    n = 2 * genus + 2
    if G.n > n:
        raise ModuleError(f"group on {G.n} points does not fit in {n} roots")
    basis = [(1 << i) | (1 << (i + 1)) for i in range(n - 2)]
    action = np.zeros((G.order, n - 2, n - 2), dtype=np.int64)
    for gi, g in enumerate(G.elements):
        gp = g.padded(n)
        for i, b in enumerate(basis):
            action[gi, :, i] = w0_coords(apply_perm(gp, b, n), n)
    return GModule(G, 2, action, name=name)


@dataclass
class ThetaData:
    genus: int
    group: PermGroup
    W0: GModule
    W1: AffineGSet
    e2: BilinearForm
    parity: int

    @property
    def n(self) -> int:
        return 2 * self.genus + 2


def build_theta(genus: int, gens) -> ThetaData:
    """Theta data for G generated by ``gens`` (Perms, a PermGroup, or 1-based cycle text)."""
    if genus < 1:
        raise ModuleError("genus must be at least 1")
    n = 2 * genus + 2
    if isinstance(gens, PermGroup):
        G = gens
    else:
        if isinstance(gens, str):
            gens = parse_generators(gens, n)
        G = PermGroup(n, list(gens))
    if G.n != n:
        raise ModuleError(f"genus {genus} needs a group on {n} roots, got {G.n}")
    W0 = w0_module(G, genus)
    parity = (genus + 1) % 2
    pts = [S for S in range(1 << (n - 1)) if popcount(S) % 2 == parity]
    T = AffineGSet(
        W0,
        pts,
        act=lambda g, S: apply_perm(g, S, n),
        difference=lambda S, R: w0_coords(S ^ R, n),
    )
    N = trivial_module(G, 2, name="F2")
    e2 = BilinearForm.from_gram(W0, N, gram_matrix(genus))
    assert e2.is_alternating
    return ThetaData(genus, G, W0, T, e2, parity)


@dataclass
class ThetaClass:
    c_T: CohClass
    trivial: bool
    fixed_points: list = field(default_factory=list)


def theta_class(data: ThetaData) -> ThetaClass:
    c = CohClass(data.W1.cocycle())
    fixed = data.W1.fixed_points()
    trivial = c.is_zero()
    assert trivial == bool(fixed), "class triviality disagrees with the fixed-point search"
    return ThetaClass(c, trivial, fixed)


def _points_1based(S: int) -> list[int]:
    return [p + 1 for p in mask_points(S)]


def local_report(data: ThetaData, tc: ThetaClass | None = None) -> dict:
    """Restriction of c_T to one cyclic subgroup per conjugacy class."""
    tc = tc or theta_class(data)
    G = data.group
    table = []
    for h in cyclic_subgroup_reps(G):
        H = G.subgroup([h]) if not h.is_identity() else G.subgroup([])
        fixed = bool(data.W1.fixed_points(H))
        triv = restrict_class(tc.c_T, H).is_zero()
        assert triv == fixed, f"restriction to <{h}> disagrees with the fixed-point search"
        table.append({"generator_cycles": h.to_cycle_string(), "order": h.order(), "trivial": triv})
    locally = all(row["trivial"] for row in table)
    return {
        "genus": data.genus,
        "group_order": G.order,
        "c_T_trivial": tc.trivial,
        "fixed_points": [_points_1based(S) for S in tc.fixed_points],
        "cyclic_table": table,
        "locally_trivial": locally,
        "sha_style": locally and not tc.trivial,
        "note": EXTERNAL_PLACES_NOTE,
    }


def lambda_matrix(data: ThetaData) -> np.ndarray:
    """W0 -> Hom(W0, F2), v -> e2(., v), in hom-module coordinates."""
    return gram_matrix(data.genus)


def jacobian_identity_check(
    data: ThetaData, tc: ThetaClass | None = None, h2_cap: int = DEFAULT_H2_CAP, seed: int = DEFAULT_SEED
) -> dict:
    """(i) e2(x u x) ~ e2(x u c_T) for listed x in H^1(G, W0);  (ii) c_e2 = lambda(c_T)."""
    tc = tc or theta_class(data)
    G, W0, e2 = data.group, data.W0, data.e2
    N = e2.target
    H = hom_module(W0, N)
    obstruction = CohClass(obstruction_cocycle(e2, "alternating"))
    image = CohClass(pushforward(tc.c_T.representative, lambda_matrix(data), H))
    out = {"group_order": G.order, "obstruction_matches": obstruction == image, "identity_checked": False}
    if G.order > h2_cap:
        out["reason"] = f"|G| = {G.order} above the H^2 cap {h2_cap}"
        return out
    space = cohomology_space(W0, 1, seed=seed)
    cT = tc.c_T.representative
    pairs = [
        (pushforward(cup11(x, x), e2.matrix, N), pushforward(cup11(x, cT), e2.matrix, N))
        for x in space.classes
    ]
    wit = cohomologous_many(pairs)
    bad = [i for i, w in enumerate(wit) if w is None]
    out.update(
        identity_checked=True,
        classes_checked=len(pairs),
        exhaustive=space.exhaustive,
        dim_H1=space.dim_h,
        failures=[space.classes[i].to_vector().tolist() for i in bad],
        identity_holds=not bad,
    )
    return out

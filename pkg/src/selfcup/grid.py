"""The test grid of (group, module) pairs and the verification suites run on it."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations, product

import numpy as np

from . import zmod
from .central_extension import (
    commutator_identity_check,
    dihedral_ext,
    heisenberg_ext,
    split_ext,
    z4_ext,
    nonabelian_connecting,
)
from .cohomology import (
    DEFAULT_H2_CAP,
    DEFAULT_SEED,
    CohClass,
    ShortExactSequence,
    cohomologous_many,
    cohomology_space,
    connecting1,
    cup11,
    pushforward,
)
from .gmodule import (
    GModule,
    cyclic_rank_check,
    make_module,
    permutation_module,
    sign_module,
    swap_module,
    tensor_square,
    trivial_module,
)
from .perm_group import Perm, PermGroup, subgroup_classes, symmetric_group
from .theta_model import w0_module
from .u_construction import (
    BilinearForm,
    corollary_check,
    corrupted_cup,
    obstruction_class,
    quadratic_refinement,
    selfcup_check,
)


def _cyc(n, *cycles):
    return Perm.from_cycles(n, cycles)


def quaternion_group() -> PermGroup:
    """Q8 acting on itself by left multiplication (8 points)."""
    # elements 0..7 = 1, i, j, k, -1, -i, -j, -k
    table = {}
    units = ["1", "i", "j", "k"]
    rule = {
        ("1", x): (1, x) for x in units
    }
    rule.update({(x, "1"): (1, x) for x in units})
    rule.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })

    def idx(sign, u):
        return units.index(u) + (0 if sign == 1 else 4)

    for a in range(8):
        for b in range(8):
            sa, ua = (1 if a < 4 else -1), units[a % 4]
            sb, ub = (1 if b < 4 else -1), units[b % 4]
            s, u = rule[(ua, ub)]
            table[a, b] = idx(sa * sb * s, u)
    left = lambda a: Perm(tuple(table[a, b] for b in range(8)))
    return PermGroup(8, [left(1), left(2)])


def grid_groups() -> dict[str, PermGroup]:
    return {
        "Z2": PermGroup(2, [_cyc(2, (0, 1))]),
        "Z3": PermGroup(3, [_cyc(3, (0, 1, 2))]),
        "Z4": PermGroup(4, [_cyc(4, (0, 1, 2, 3))]),
        "V4": PermGroup(4, [_cyc(4, (0, 1), (2, 3)), _cyc(4, (0, 2), (1, 3))]),
        "S3": symmetric_group(3),
        "D4": PermGroup(4, [_cyc(4, (0, 1, 2, 3)), _cyc(4, (0, 2))]),
        "Q8": quaternion_group(),
        "S4": symmetric_group(4),
    }


def coset_module(G: PermGroup, H: PermGroup, m: int = 2, name: str = "") -> GModule:
    """Permutation module on the left cosets G/H."""
    cosets, where = [], {}
    for g in G.elements:
        if g in where:
            continue
        c = frozenset(g * h for h in H.elements)
        for x in c:
            where[x] = len(cosets)
        cosets.append(min(c))
    k = len(cosets)
    action = np.zeros((G.order, k, k), dtype=np.int64)
    for gi, g in enumerate(G.elements):
        for j, rep in enumerate(cosets):
            action[gi, where[g * rep], j] = 1
    return GModule(G, m, action, name=name or f"perm(G/H)^{k}")


def index_two_parities(G: PermGroup) -> list:
    """Homomorphisms G -> Z/2 (one per index-2 subgroup) as parity functions."""
    out = []
    for H in subgroup_classes(G, G.order // 2):
        if 2 * H.order == G.order:
            members = set(H.elements)
            out.append(lambda g, members=members: 0 if g in members else 1)
    return out


def grid_modules(name: str, G: PermGroup) -> list[GModule]:
    mods = [trivial_module(G, 2, name="F2")]
    if G.n <= 4:
        mods.append(permutation_module(G, 2, name=f"F2^{G.n} perm"))
    for H in subgroup_classes(G, G.order // 2):
        k = G.order // H.order
        if 2 <= k <= 4 and H.order > 1 and (G.n > 4 or k != G.n):
            mods.append(coset_module(G, H, 2, name=f"F2[G/H] k={k}"))
    for i, par in enumerate(index_two_parities(G)):
        mods.append(swap_module(G, par, name=f"swap#{i}"))
    if G.n <= 6:
        mods.append(w0_module(G, 2, name="W0"))
    mods.append(sign_module(G, 3, name="F3 sign"))
    mods.append(sign_module(G, 4, name="Z4 sign"))
    return mods


def threads() -> int:
    try:
        return max(1, int(os.environ.get("SELFCUP_THREADS", "1")))
    except ValueError:
        return 1


def _run(fn, cells):
    n = threads()
    if n > 1 and len(cells) > 1:
        with ThreadPoolExecutor(n) as pool:
            return list(pool.map(fn, cells))
    return [fn(c) for c in cells]


# -- suites ----------------------------------------------------------------------


def selfcup_suite(
    groups=None, seed: int = DEFAULT_SEED, corrupt: bool = False, h2_cap: int = DEFAULT_H2_CAP
) -> list[dict]:
    allg = grid_groups()
    names = groups or list(allg)
    cells = [(n, M) for n in names for M in grid_modules(n, allg[n])]
    cup = corrupted_cup if corrupt else None

    def one(cell):
        n, M = cell
        rep = selfcup_check(M, seed=seed, cup=cup, h2_cap=h2_cap).as_dict()
        rep["group"] = n
        return rep

    return _run(one, cells)


def bockstein_suite(groups=None, seed: int = DEFAULT_SEED) -> list[dict]:
    allg = grid_groups()
    out = []
    for n in ("Z2", "Z4", "V4"):
        if groups and n not in groups:
            continue
        G = allg[n]
        A, C = trivial_module(G, 2, name="F2"), trivial_module(G, 2, name="F2")
        B = trivial_module(G, 4, name="Z4")
        ses = ShortExactSequence(A, B, C, [[2]], [[1]])
        E = z4_ext(A, C)
        space = cohomology_space(C, 1, seed=seed)
        pairs, pairs2 = [], []
        for x in space.classes:
            sq = pushforward(cup11(x, x), [[1]], A)
            pairs.append((connecting1(ses, x), sq))
            pairs2.append((nonabelian_connecting(E, x), sq))
        ok = [w is not None for w in cohomologous_many(pairs)]
        ok2 = [w is not None for w in cohomologous_many(pairs2)]
        nonzero = sum(not CohClass(b).is_zero() for _, b in pairs)
        out.append({
            "group": n,
            "classes_checked": len(pairs),
            "nonzero_squares": nonzero,
            "passed": all(ok) and all(ok2),
        })
    return out


def extension_cells(groups=None) -> list[tuple]:
    """(group, extension label, CentralExt) for the commutator suite."""
    allg = grid_groups()
    cells = []
    for n in ("Z2", "Z3", "V4"):
        if groups and n not in groups:
            continue
        G = allg[n]
        F2, F3 = trivial_module(G, 2, name="F2"), trivial_module(G, 3, name="F3")
        C2 = trivial_module(G, 2, 2, name="F2^2")
        C3 = trivial_module(G, 3, 2, name="F3^2")
        cells.append((n, "split", split_ext(F2, C2)))
        cells.append((n, "Z/4", z4_ext(F2, trivial_module(G, 2, name="F2"))))
        cells.append((n, "D4", dihedral_ext(F2, C2)))
        cells.append((n, "Heis3", heisenberg_ext(F3, C3)))
        for i, par in enumerate(index_two_parities(G)):
            sw2 = swap_module(G, par, 2, name="swap F2^2")
            cells.append((n, f"split/swap#{i}", split_ext(F2, sw2)))
            sw3 = swap_module(G, par, 3, name="swap F3^2")
            sgn = GModule(G, 3, np.array([[[(-1) ** par(g)]] for g in G.elements]), name="F3(-1)")
            cells.append((n, f"Heis3/swap#{i}", heisenberg_ext(sgn, sw3, swap=True)))
    return cells


def commutator_suite(groups=None, seed: int = DEFAULT_SEED, sign: int = -1) -> list[dict]:
    def one(cell):
        n, label, E = cell
        space = cohomology_space(E.C, 1, seed=seed)
        res = [commutator_identity_check(E, a, b, sign=sign) for a in space.classes for b in space.classes]
        return {
            "group": n,
            "extension": label,
            "pairs_checked": len(res),
            "nontrivial_pairs": sum(not r.lhs_zero for r in res),
            "sign_sensitive_pairs": sum(r.holds != r.holds_other_sign for r in res),
            "passed": all(r.holds for r in res),
        }

    return _run(one, extension_cells(groups))


def random_cyclic_instance(rng, m: int, max_order: int = 24):
    """A random d-dim module over Z/m for a cyclic group, plus the group generator."""
    while True:
        d = int(rng.integers(1, 5))
        A = rng.integers(0, m, size=(d, d))
        if not zmod.is_invertible(A, m):
            continue
        k, P = 1, A % m
        while not np.array_equal(P, np.eye(d, dtype=np.int64)) and k <= max_order:
            P = P @ A % m
            k += 1
        if k > max_order:
            continue
        G = PermGroup(k, [Perm(tuple((i + 1) % k for i in range(k)))]) if k > 1 else PermGroup(1, [])
        if k == 1:
            return trivial_module(G, m, d), G.identity
        M = make_module(G, m, [A])
        power = int(rng.integers(1, k + 1))
        g = G.generators[0]
        h = G.identity
        for _ in range(power):
            h = h * g
        return M, h


def cyclic_rank_suite(count: int = 200, seed: int = DEFAULT_SEED) -> list[dict]:
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        m = (2, 3, 5)[i % 3]
        M, g = random_cyclic_instance(rng, m)
        try:
            a, b = cyclic_rank_check(M, g)
            ok = a == b
        except AssertionError:
            a = b = None
            ok = False
        out.append({"m": m, "dim": M.dim, "order": g.order(), "fixed": a, "dual_fixed": b, "passed": ok})
    return out


def alternating_forms(M: GModule, N: GModule) -> list[BilinearForm]:
    """Every G-equivariant alternating form M x M -> N for a 1-dim F_2 target."""
    d = M.dim
    pairs = list(combinations(range(d), 2))
    T = tensor_square(M)
    out = []
    for bits in product(range(2), repeat=len(pairs)):
        gram = np.zeros((d, d), dtype=np.int64)
        for b, (i, j) in zip(bits, pairs):
            gram[i, j] = gram[j, i] = b
        if T.is_equivariant_map(N, gram.reshape(1, -1)):
            out.append(BilinearForm.from_gram(M, N, gram))
    return out


THETA_GROUPS = {
    "V4(Q3)": "(1 2)(5 6), (3 4)(5 6)",
    "S6": "(1 2 3 4 5 6), (1 2)",
}


def theta_cells() -> list[tuple[str, GModule]]:
    """W0 for the two genus-2 Galois actions, where the torsor is nontrivial."""
    from .theta_model import build_theta

    return [(name, build_theta(2, gens).W0) for name, gens in THETA_GROUPS.items()]


def duality_suite(groups=None, with_theta: bool = True) -> list[dict]:
    allg = grid_groups()
    cells = [(n, M) for n in (groups or list(allg)) for M in grid_modules(n, allg[n])]
    if with_theta:
        cells += theta_cells()
    out = []
    for n, M in cells:
        if M.m != 2 or M.dim > 4 or M.dim == 0:
            continue
        N = trivial_module(M.group, 2, name="F2")
        for beta in alternating_forms(M, N):
            zero = obstruction_class(beta).is_zero()
            q = quadratic_refinement(beta, cross_check=False)
            out.append({
                "group": n,
                "module": M.name,
                "gram": beta.matrix.reshape(M.dim, M.dim).tolist(),
                "obstruction_zero": zero,
                "refinement_exists": q is not None,
                "passed": zero == (q is not None),
            })
    return out


def corollary_suite(groups=None, seed: int = DEFAULT_SEED) -> list[dict]:
    """Cup, pushout-connecting and evaluation-cup maps agree on the F_2 grid."""
    allg = grid_groups()
    out = []
    for n in groups or list(allg):
        G = allg[n]
        N = trivial_module(G, 2, name="F2")
        for M in grid_modules(n, G):
            if M.m != 2 or M.dim > 4 or M.dim == 0:
                continue
            space = cohomology_space(M, 1, seed=seed)
            for beta in alternating_forms(M, N):
                res = [corollary_check(beta, x) for x in space.classes]
                out.append({
                    "group": n,
                    "module": M.name,
                    "classes_checked": len(res),
                    "passed": all(r["connecting"] and r["evaluation"] for r in res),
                })
    return out

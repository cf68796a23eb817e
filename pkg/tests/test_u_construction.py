from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from selfcup.cohomology import CohClass, Cochain, CochainError, cohomology_space, cup11, is_cocycle
from selfcup.gmodule import ModuleError, UnsupportedError, permutation_module, swap_module, trivial_module
from selfcup.grid import alternating_forms, grid_groups, grid_modules
from selfcup.perm_group import PermGroup, symmetric_group
from selfcup.theta_model import build_theta
from selfcup.u_construction import (
    BilinearForm,
    UElement,
    basis_refinement,
    corollary_check,
    obstruction_class,
    quadratic_refinement,
    section_s,
    selfcup_check,
    u_commutator,
    u_connecting,
    u_inv,
    u_mul,
)


def outer(a, b):
    return np.outer(a, b).reshape(-1)


@pytest.fixture(scope="module")
def M3():
    return trivial_module(symmetric_group(3), 3, 2)


def random_u(M, rng):
    return UElement(M, rng.integers(0, M.m, M.dim), rng.integers(0, M.m, M.dim**2))


def test_displayed_law(M3):
    m, m2 = np.array([1, 2]), np.array([2, 2])
    x = u_mul(section_s(M3, m), section_s(M3, m2))
    assert np.array_equal(x.m, (m + m2) % 3)
    assert np.array_equal(x.t, outer(m, m2) % 3)


def test_identity_and_inverse(M3):
    rng = np.random.default_rng(0)
    e = UElement.identity(M3)
    for _ in range(20):
        x = random_u(M3, rng)
        assert e * x == x == x * e
        assert x * u_inv(x) == e == u_inv(x) * x


def test_square_over_f2():
    M = trivial_module(symmetric_group(3), 2, 3)
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = random_u(M, rng)
        assert x * x == UElement(M, np.zeros(3), outer(x.m, x.m))


def test_section(M3):
    assert section_s(M3, [0, 0]) == UElement.identity(M3)
    rng = np.random.default_rng(2)
    for _ in range(20):
        m, m2 = rng.integers(0, 3, 2), rng.integers(0, 3, 2)
        y = section_s(M3, m) * section_s(M3, m2) * u_inv(section_s(M3, m + m2))
        assert y == UElement(M3, [0, 0], outer(m, m2))


def test_inverse_of_section(M3):
    for m in product(range(3), repeat=2):
        m = np.array(m)
        guess = UElement(M3, -m, outer(m, m))
        assert section_s(M3, m) * guess == UElement.identity(M3)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_group_axioms_and_commutator(seed):
    rng = np.random.default_rng(seed)
    M = trivial_module(PermGroup(1, []), int(rng.choice([2, 3, 4, 5])), int(rng.integers(1, 4)))
    x, y, z = (random_u(M, rng) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    c = u_commutator(x, y)
    assert c == UElement(M, np.zeros(M.dim), outer(x.m, y.m) - outer(y.m, x.m))


def test_module_mismatch(M3):
    other = trivial_module(symmetric_group(3), 3, 2)
    with pytest.raises(ModuleError):
        u_mul(UElement.identity(M3), UElement.identity(other))


def test_u_connecting_zero(M3):
    assert u_connecting(Cochain.zero(M3, 1)).is_zero()


def test_u_connecting_z2(z2):
    M = trivial_module(z2, 2)
    x = cohomology_space(M, 1).classes[1]
    out = u_connecting(x)
    s = z2.elements[1]
    assert out.at(s, s)[0] == 1
    assert not CohClass(out).is_zero()


def test_u_connecting_rejects_non_cocycle(groups):
    M = trivial_module(groups["Z3"], 2)
    with pytest.raises(CochainError):
        u_connecting(Cochain(M, 1, [[0], [1], [0]]))


@pytest.mark.parametrize("name", ["Z4", "V4", "S3", "D4", "Q8"])
def test_u_connecting_matches_cup(name, groups):
    G = groups[name]
    for M in grid_modules(name, G):
        for x in cohomology_space(M, 1).classes[:8]:
            assert CohClass(u_connecting(x)) == CohClass(cup11(x, x))


def test_selfcup_z2():
    G = grid_groups()["Z2"]
    rep = selfcup_check(trivial_module(G, 2))
    assert rep.passed and rep.classes_checked == 2


def test_selfcup_klein_w0(groups):
    W0 = next(M for M in grid_modules("V4", groups["V4"]) if M.name == "W0")
    assert selfcup_check(W0).passed
    W0q = build_theta(2, "(1 2)(5 6), (3 4)(5 6)").W0
    rep = selfcup_check(W0q)
    assert rep.passed and rep.exhaustive


def test_selfcup_s4_perm():
    G = symmetric_group(4)
    rep = selfcup_check(permutation_module(G, 2))
    assert rep.passed and rep.classes_checked >= 2


def test_bilinear_form_equivariance(z2):
    sw = swap_module(z2, lambda g: g.sign() == -1)
    N = trivial_module(z2, 2)
    with pytest.raises(ModuleError):
        BilinearForm.from_gram(sw, N, [[1, 0], [0, 0]])
    b = BilinearForm.from_gram(sw, N, [[0, 1], [1, 0]])
    assert b.is_alternating and b.is_symmetric


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_basis_refinement_polar(seed, m):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    G = PermGroup(1, [])
    M, N = trivial_module(G, m, d), trivial_module(G, m, 1)
    gram = rng.integers(0, m, (d, d))
    gram = (gram + gram.T) % m
    if m == 2:
        np.fill_diagonal(gram, 0)
    beta = BilinearForm.from_gram(M, N, gram)
    x, y = rng.integers(0, m, d), rng.integers(0, m, d)
    Q = lambda v: basis_refinement(beta, v)
    assert np.array_equal((Q(x + y) - Q(x) - Q(y)) % m, (-beta(x, y)) % m)


def test_obstruction_of_zero_form(s3):
    M = permutation_module(s3, 2)
    beta = BilinearForm(M, trivial_module(s3, 2), np.zeros((1, 9), dtype=int))
    assert obstruction_class(beta).is_zero()
    assert quadratic_refinement(beta) is not None


def test_trivial_group_always_refines():
    G = PermGroup(4, [])
    M, N = trivial_module(G, 2, 4), trivial_module(G, 2)
    for beta in alternating_forms(M, N):
        assert quadratic_refinement(beta) is not None


def test_variant_guards():
    G = PermGroup(2, [])
    M, N = trivial_module(G, 3, 2), trivial_module(G, 3)
    beta = BilinearForm.from_gram(M, N, [[0, 1], [2, 0]])
    with pytest.raises(UnsupportedError):
        obstruction_class(beta, "alternating")
    with pytest.raises(ModuleError):
        obstruction_class(beta, "symmetric")  # not symmetric
    M4, N4 = trivial_module(G, 4, 2), trivial_module(G, 4)
    with pytest.raises(UnsupportedError):
        obstruction_class(BilinearForm.from_gram(M4, N4, [[0, 1], [1, 0]]), "symmetric")


def brute_refinements(beta):
    """All q: M -> F2 with q(x+y) = q(x)+q(y)+beta(x,y), built from values on a basis."""
    M = beta.source
    d = M.dim
    vecs = [tuple(v) for v in M.all_vectors()]
    out = []
    for vals in product(range(2), repeat=d):
        q = {tuple([0] * d): 0}
        for v in vecs:
            # add basis vectors one at a time
            acc = np.zeros(d, dtype=int)
            val = 0
            for i in range(d):
                if v[i]:
                    e = np.eye(d, dtype=int)[i]
                    val = (val + vals[i] + beta(acc, e)[0]) % 2
                    acc = (acc + e) % 2
            q[v] = val
        out.append(q)
    return out


def is_equivariant_q(q, M):
    for gi in M.group.generator_indices:
        for v, val in q.items():
            if q[tuple(M.act(gi, np.array(v)))] != val:
                return False
    return True


def test_s6_weil_pairing_has_no_equivariant_refinement(s6):
    d = build_theta(2, s6)
    qs = brute_refinements(d.e2)
    assert len(qs) == 16
    assert not any(is_equivariant_q(q, d.W0) for q in qs)
    assert quadratic_refinement(d.e2) is None
    assert not obstruction_class(d.e2).is_zero()


def test_refinement_polar_equals_beta():
    d = build_theta(2, "(1 2)")
    q = quadratic_refinement(d.e2)
    assert q is not None
    vecs = d.W0.all_vectors()
    for x in vecs[::3]:
        for y in vecs[::5]:
            assert np.array_equal(q.polar(x, y), d.e2(x, y))


def test_obstruction_additive(groups):
    G = groups["D4"]
    N = trivial_module(G, 2)
    for M in grid_modules("D4", G):
        if M.m != 2:
            continue
        forms = alternating_forms(M, N)
        for a in forms:
            for b in forms:
                assert obstruction_class(a + b) == obstruction_class(a) + obstruction_class(b)


def test_obstruction_additive_theta():
    d = build_theta(2, "(1 2)(5 6), (3 4)(5 6)")
    forms = alternating_forms(d.W0, d.e2.target)
    for a in forms[:6]:
        for b in forms[:6]:
            assert obstruction_class(a + b) == obstruction_class(a) + obstruction_class(b)


@pytest.mark.parametrize("gens", ["(1 2)(5 6), (3 4)(5 6)", "(1 2 3)(4 5 6), (1 4)(2 5)(3 6)", "(1 2)"])
def test_three_maps_agree(gens):
    d = build_theta(2, gens)
    for x in cohomology_space(d.W0, 1).classes:
        r = corollary_check(d.e2, x)
        assert r["connecting"] and r["evaluation"]


def test_three_maps_agree_odd(groups):
    # symmetric variant at m = 3: beta is the standard dot product on F3^2 with S3 acting... trivially
    G = groups["Z3"]
    M, N = trivial_module(G, 3, 2), trivial_module(G, 3)
    beta = BilinearForm.from_gram(M, N, [[1, 2], [2, 0]])
    for x in cohomology_space(M, 1).classes:
        r = corollary_check(beta, x)
        assert r["connecting"] and r["evaluation"]

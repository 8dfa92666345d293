import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cobordcalc import cobord as cb
from cobordcalc.exactlin import Matrix


CATALOG = [
    cb.identity_cylinder((1, 2)), cb.mapping_class(1, [[0, -1], [1, 0]]),
    cb.permutation([1, 0], (1, 2)), cb.chi(1), cb.chi(2), cb.chi_dagger(2),
    cb.pi_gen((1, 2)), cb.pi_dagger((1, 0, 2)), cb.handlebody(2), cb.handlebody_dagger(1),
    cb.circle_product(0), cb.circle_product(3), cb.sphere_times_circle(), cb.ball(),
    cb.ball_dagger(), cb.empty(),
]


@pytest.mark.parametrize("M", CATALOG, ids=repr)
def test_catalog_is_valid(M):
    assert cb.validate(M) == []
    rep = cb.betti_int(M)
    assert rep.betaInt1 == rep.betaInt1Coker
    assert cb.CobordismDatum.from_json(M.to_json()).to_json() == M.to_json()


def test_make_generator_errors():
    assert cb.make_generator("chi", 1).to_json() == cb.chi(1).to_json()
    with pytest.raises(cb.CobordismError):
        cb.make_generator("nope")
    with pytest.raises(cb.CobordismError):
        cb.make_generator("mappingClass", 1, [[2, 0], [0, 1]])


def test_validator_catches_half_rank_violation():
    data = cb.circle_product(1).to_json()
    bad = cb.chi(1).to_json()
    bad["pieces"][0]["psi"] = [[0, 0, 0, 0]] * len(bad["pieces"][0]["psi"])
    with pytest.raises(cb.CobordismError):
        cb.CobordismDatum.from_json(bad)
    assert cb.CobordismDatum.from_json(data)


@pytest.mark.parametrize("g", range(5))
def test_circle_products(g):
    M = cb.circle_product(g)
    assert M.beta_int1 == 2 * g + 1
    total, _ = cb.rho_bounds(M)
    assert total.exact and total.lower == max(g, 1)


@pytest.mark.parametrize("A, order", [
    ([[0, -1], [1, 0]], 1), ([[1, 0], [3, 1]], 3), ([[2, 1], [5, 3]], 5),
    ([[1, 0], [-7, 1]], 7), ([[1, 2], [0, 1]], 0),
])
def test_genus_one_heegaard_splittings(A, order):
    # gluing two solid tori by A gives |H1| = |c| (c the lower left entry)
    M, _ = cb.compose_cobordisms(cb.mapping_class(1, A), cb.handlebody(1))
    N, _ = cb.compose_cobordisms(cb.handlebody_dagger(1), M)
    rep = cb.betti_int(N)
    if order:
        assert rep.freeRank == 0 and rep.torsion == ([order] if order > 1 else [])
    else:
        assert rep.freeRank == 1 and rep.torsion == []


def test_solid_tori_anomaly():
    _, rep = cb.compose_cobordisms(cb.handlebody_dagger(1), cb.handlebody(1))
    assert (rep.mu0, rep.mu1, rep.muPartial) == (0, 1, 1)


@pytest.mark.parametrize("pattern", [(1, 1), (0, 2), (1, 2, 0), (2, 1, 1, 0)])
def test_connecting_cobordisms(pattern):
    K = len(pattern)
    lam, rep = cb.compose_cobordisms(cb.pi_gen(pattern), cb.pi_dagger(pattern))
    assert rep.mu0 == K - 1 and rep.mu1 == K - 1
    total, _ = cb.rho_bounds(lam)
    assert total.lower == total.upper == K - 1
    back, rep2 = cb.compose_cobordisms(cb.pi_dagger(pattern), cb.pi_gen(pattern))
    assert rep2.mu0 == 0
    for M in (cb.pi_gen(pattern), cb.pi_dagger(pattern)):
        assert cb.rho_bounds(M)[0].upper == 0


def test_object_mismatch():
    with pytest.raises(cb.CobordismError):
        cb.compose_cobordisms(cb.chi(1), cb.handlebody(2))


def test_symplectic_check():
    assert cb.is_symplectic(Matrix([[2, 1], [1, 1]]), 1)
    assert not cb.is_symplectic(Matrix([[2, 0], [0, 1]]), 1)


seeds = st.integers(0, 10 ** 6)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_random_samples_are_valid(seed):
    rng = random.Random(seed)
    M = cb.random_cobordism(rng, layers=rng.randint(1, 3))
    assert cb.validate(M) == []
    A = cb.random_symplectic(rng, 2)
    assert cb.is_symplectic(A if isinstance(A, Matrix) else Matrix(A), 2)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_anomaly_identities(seed):
    rng = random.Random(seed)
    M1, M2 = cb.random_composable_pair(rng)
    M, rep = cb.compose_cobordisms(M2, M1)
    assert rep.mu0 == rep.w12Dim == rep.mu0Graph == rep.mu0Betti >= 0
    assert rep.mu0Betti == M.beta_int0 - M1.beta_int0 - M2.beta_int0
    assert rep.mu1 == M.beta_int1 - M1.beta_int1 - M2.beta_int1
    assert rep.mu1 == rep.mu0 + rep.v1SumV2Codim
    assert rep.muPartial >= 0
    b = cb.betti_int(M)
    assert b.betaInt1 == b.betaInt1Coker
    if b.freeRank is not None:
        assert b.freeRank == b.betaInt1


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    M1 = cb.random_cobordism(rng, layers=1)
    M2 = cb.random_cobordism(rng, source=M1.target, layers=1)
    M3 = cb.random_cobordism(rng, source=M2.target, layers=1)
    a, ra = cb.compose_cobordisms(M2, M1)
    left, rl = cb.compose_cobordisms(M3, a)
    b, rb = cb.compose_cobordisms(M3, M2)
    right, rr = cb.compose_cobordisms(b, M1)
    assert cb.betti_int(left).to_json() == cb.betti_int(right).to_json()
    # the anomaly is a 2-cocycle
    assert ra.mu0 + rl.mu0 == rb.mu0 + rr.mu0
    assert ra.mu1 + rl.mu1 == rb.mu1 + rr.mu1


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_rho_recursion(seed):
    rng = random.Random(seed)
    M1, M2 = cb.random_composable_pair(rng)
    M, rep = cb.compose_cobordisms(M2, M1)
    lo = cb.rho_bounds(M)[0]
    assert lo.lower >= cb.rho_bounds(M1)[0].lower + cb.rho_bounds(M2)[0].lower + rep.mu0
    assert lo.lower <= lo.upper <= M.beta_int1


def test_tensor_adds_invariants():
    M = cb.tensor_cobordisms(cb.circle_product(1), cb.sphere_times_circle())
    assert M.beta_int1 == 4 and M.beta_int0 == Fraction(2)
    assert cb.rho_bounds(M)[0].lower == 2


def test_coordinate_graph():
    cg = cb.coordinate_graph_of(cb.circle_product(2))
    assert cg["minimalSpider"].beta1 == 0 and cg["certifiedFaithful"].beta1 == 2

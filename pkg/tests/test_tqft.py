import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cobordcalc import cobord, tqft
from cobordcalc.exactlin import Matrix


@pytest.fixture(scope="module")
def abelian():
    return tqft.build_evaluator(tqft.instance("abelian:4"))


@pytest.fixture(scope="module")
def hopf():
    return tqft.build_evaluator(tqft.instance("hopf:d-sweedler"))


def two_adic(v):
    v = Fraction(v)
    assert v.denominator == 1
    n, k = v.numerator, 0
    while n and n % 2 == 0:
        n //= 2
        k += 1
    return k


# -- expression language -----------------------------------------------------------

@pytest.mark.parametrize("text", [
    "chidag(1) ; chi(1)", "pidag([1,2]) ; pi([1,2])", "(hbody(1) * ball) ; id([1,0])",
    "perm([[0,1]];[1,2]) ; perm([[0,1]];[2,1])", "mcg([[0,-1],[1,0]];1)",
    "hbody(2) ; hbodydag(2) ; circle(2)", "s1xs2 * ball",
])
def test_text_round_trip(text):
    e = tqft.parse_expression(text)
    assert tqft.parse_expression(tqft.to_text(e)) == e


@pytest.mark.parametrize("text", [
    "chi(1) ; chi(1)", "foo(1)", "chi(1", "mcg([[2,0],[0,1]];1)", "pi([1,2]) ; chi(2)",
    "", "perm([[0,5]];[1,2])", "chi(-1)",
])
def test_syntax_errors(text):
    with pytest.raises(tqft.ExpressionSyntaxError):
        tqft.parse_expression(text)


def test_composition_reads_left_to_right():
    e = tqft.parse_expression("pidag([1,2]) ; pi([1,2])")
    assert tqft.signature(e) == ((3,), (3,))
    assert tqft.lower(e)[1] == 1
    e = tqft.parse_expression("pi([1,2]) ; pidag([1,2])")
    assert tqft.signature(e) == ((1, 2), (1, 2))
    assert tqft.lower(e)[1] == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_expressions_round_trip(seed):
    rng = random.Random(seed)
    e, obj = tqft.random_expression(rng, tqft.instance("abelian:4"), (), rng.randint(1, 3))
    e2 = tqft.parse_expression(tqft.to_text(e))
    assert tqft.signature(e2) == ((), obj)
    assert tqft.lower(e2)[0].to_json() == tqft.lower(e)[0].to_json()


# -- abelian instance ---------------------------------------------------------------

@pytest.mark.parametrize("g", range(4))
def test_abelian_circle_products(abelian, g):
    assert abelian.data.dim(g) == 4 ** g
    for text in ("circle(%d)" % g, "chidag(%d) ; chi(%d)" % (g, g)):
        v = tqft.evaluate(abelian, text)[0, 0]
        assert v == 2 ** (2 * g + 1) == abelian.x * abelian.data.dim(g)
        assert two_adic(v) >= max(g, 1)


def test_abelian_small_manifolds(abelian):
    assert tqft.evaluate(abelian, "s1xs2")[0, 0] == 2
    assert tqft.evaluate(abelian, "hbody(1) ; hbodydag(1)")[0, 0] == 2
    assert tqft.evaluate(abelian, "hbody(1) ; mcg([[0,-1],[1,0]];1) ; hbodydag(1)")[0, 0] == 1
    res = tqft.evaluate_full(abelian, "chidag(1) ; chi(1)")
    assert res.to_json() == {"value": 8, "mu0Total": 1, "source": [], "target": []}


def test_abelian_lens_spaces_count_homomorphisms(abelian):
    # |Hom(Z/p, Z/2)| for the lens space glued by [[1,0],[p,1]]
    for p in range(1, 6):
        v = tqft.evaluate(abelian, "hbody(1) ; mcg([[1,0],[%d,1]];1) ; hbodydag(1)" % p)
        assert v[0, 0] == (2 if p % 2 == 0 else 1)


def test_lambda_is_x_power(abelian):
    for gs in ((1, 1), (1, 0, 1)):
        e = tqft.compose(tqft.atom("pidag", gs), tqft.atom("pi", gs))
        v = tqft.evaluate(abelian, e)
        assert v == Matrix.identity(v.nrows).scale(abelian.x ** (len(gs) - 1))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_abelian_valuation_bounded_by_rho(seed):
    rng = random.Random(seed)
    data = tqft.instance("abelian:4")
    e, obj = tqft.random_expression(rng, data, (), rng.randint(1, 4))
    if obj:
        return
    v = tqft.evaluate(data, e)[0, 0]
    if v:
        assert two_adic(v) >= cobord.rho_bounds(tqft.lower(e)[0])[0].lower


def test_abelian_half_projectivity(abelian):
    rep = tqft.half_projectivity_suite(abelian, 40, seed=7)
    assert rep["passed"] == 40


def test_permutations_form_a_representation(abelian):
    assert tqft.permutation_representation_check(abelian, (1, 0, 2), trials=10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_connected_reduction(seed):
    rng = random.Random(seed)
    data = tqft.instance("abelian:4")
    src = (1, 1)
    parts = [tqft.Atom("pi", ((1, 1),)), tqft.Atom("pidag", ((1, 1),))]
    e, _ = tqft.random_expression(rng, data, src, 2)
    e = tqft.compose(*parts, e)
    red, k = tqft.connected_reduction(e)
    assert tqft.evaluate(data, e) == tqft.evaluate(data, red).scale(data.x ** k)


# -- Hopf instance ----------------------------------------------------------------------

def test_hopf_build_checks(hopf):
    assert hopf.x == 0
    assert hopf.checks == {p: "ok" for p in ("P2", "P4", "P5", "P7", "P8")}
    assert hopf.data.dims == {0: 1, 1: 2}


def test_hopf_vanishes_on_first_betti(hopf):
    rng = random.Random(11)
    seen = 0
    while seen < 25:
        e, obj = tqft.random_expression(rng, hopf.data, (), rng.randint(1, 4))
        if obj or tqft.lower(e)[0].beta_int1 == 0:
            continue
        seen += 1
        assert tqft.evaluate(hopf, e)[0, 0] == 0


def test_hopf_modular_relations(hopf):
    rel = hopf.data.info["relations"]
    assert rel["S4"] == 1 and rel["ST3overS2"] == -1 and rel["S2T"] is True


def test_hopf_half_projectivity(hopf):
    assert tqft.half_projectivity_suite(hopf, 40, seed=3)["passed"] == 40


def test_hopf_scalar_ambiguity(hopf):
    # the three-sphere from a genus-one splitting picks up the projective scalar
    v = tqft.evaluate(hopf, "hbody(1) ; mcg([[0,-1],[1,0]];1) ; hbodydag(1)")[0, 0]
    assert v == -1


def test_unsupported_genus(hopf):
    with pytest.raises(tqft.TQFTError):
        tqft.evaluate(hopf, "circle(2)")


def test_unknown_instance():
    with pytest.raises(tqft.TQFTError):
        tqft.instance("lattice:3")
    with pytest.raises(tqft.TQFTError):
        tqft.instance("abelian:3")


def test_error_json():
    err = tqft.TQFTError("boom", prop="P2", witness=[1])
    assert err.to_json() == {"error": "boom", "property": "P2", "witness": [1]}

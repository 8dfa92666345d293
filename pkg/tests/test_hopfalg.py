import pytest

from cobordcalc import hopfalg as h
from cobordcalc.exactlin import Matrix, rank

SMALL = ["z2", "z3", "z4", "sweedler", "taft3", "s3", "d-z2", "d-sweedler"]


def trace_form_rank(H):
    """Rank of (a, b) -> Tr(L_a L_b); full rank iff H is semisimple in characteristic 0."""
    L = [H.left_mult_matrix(H.basis(i)) for i in range(H.n)]
    tr = lambda M: sum((M[k, k] for k in range(M.nrows)), H.zero_scalar)
    return rank(Matrix([[tr(a @ b) for b in L] for a in L], H.n))


@pytest.mark.parametrize("name", SMALL)
def test_builtin_axioms(name):
    H = h.builtin(name)
    assert all(h.verify_hopf_axioms(H).values())


@pytest.mark.parametrize("name", SMALL)
def test_integrals_are_unique(name):
    ints = h.integrals_of(h.builtin(name))
    assert ints.dims == {"left": 1, "right": 1, "coLeft": 1, "coRight": 1}


@pytest.mark.parametrize("name", SMALL)
def test_semisimplicity_matches_trace_form(name):
    H = h.builtin(name)
    assert h.is_semisimple(H) == (trace_form_rank(H) == H.n)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_group_algebra_integral(n):
    ints = h.integrals_of(h.group_algebra(n))
    assert ints.semisimple and ints.epsOfLambda == n
    assert ints.unimodular


def test_sweedler_and_double():
    for name in ("sweedler", "d-sweedler"):
        ints = h.integrals_of(h.builtin(name))
        assert not ints.semisimple and ints.epsOfLambda == 0
    assert not h.integrals_of(h.sweedler()).unimodular
    assert h.integrals_of(h.builtin("d-sweedler")).unimodular


def test_double_is_quasitriangular():
    H = h.sweedler()
    D = h.drinfeld_double_algebra(H)
    R = h.canonical_r_matrix(H, D)
    assert D.n == 16
    assert all(h.quasitriangular_report(D, R).values())


def test_sweedler_double_ribbon_extension():
    with pytest.raises(h.HopfError):
        h.drinfeld_double(h.sweedler())
    D, rib = h.drinfeld_double(h.sweedler(), extend=True)
    assert D.n == 32
    assert all(rib.checks.values())
    assert D.is_central(rib.ribbonV)


def test_group_double_ribbon():
    D, rib = h.drinfeld_double(h.group_algebra(3))
    assert all(rib.checks.values())


def test_cointegral_action_is_a_differential():
    act = h.cointegral_transformation(h.builtin("d-sweedler"))
    assert act.checks == {"squareZero": True, "imageInInvNull": True}
    act = h.cointegral_transformation(h.group_algebra(3))
    assert act.checks["scalarOnInv"] and act.checks["idempotentOnInv"]


@pytest.mark.parametrize("name", ["z3", "s3", "d-z2"])
def test_semisimple_coend_counts_center(name):
    H = h.builtin(name)
    co = h.coend_invariants(H)
    assert co.invDim == co.invBarDim == H.center_basis().ncols


def test_sweedler_coend():
    co = h.coend_invariants(h.sweedler())
    assert (co.invDim, co.invBarDim, co.invNullDim) == (2, 1, 1)


def test_small_quantum_group():
    U = h.small_quantum_sl2(3)
    assert U.n == 27
    assert all(h.verify_hopf_axioms(U).values())
    co = h.coend_invariants(U)
    assert (co.invDim, co.invBarDim) == (4, 2)
    ints = h.integrals_of(U)
    assert not ints.semisimple


def test_analyze_summary():
    out = h.analyze(h.sweedler())
    assert out["integralDim"] == 1 and out["epsLambda"] == 0 and out["semisimple"] is False
    assert out["axioms"] and out["lambdaRank"] == 1


def test_unknown_algebra():
    with pytest.raises(h.HopfError):
        h.builtin("octonions")

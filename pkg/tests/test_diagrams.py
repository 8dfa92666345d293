import itertools
import random
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from cobordcalc import diagrams as dg
from cobordcalc.cobord import betti_int


def closed_word(rng, caps, ncross):
    ev = ["cap(%d)" % (2 * i) for i in range(caps)]
    ev += ["%s(%d)" % (rng.choice(["x+", "x-"]), rng.randrange(2 * caps - 1))
           for _ in range(ncross)]
    ev += ["cup(%d)" % (2 * i) for i in reversed(range(caps))]
    return ev


def random_closed(rng, max_caps=3, max_cross=6):
    ev = closed_word(rng, rng.randint(1, max_caps), rng.randint(0, max_cross))
    m = dg.FramedDiagram((), (), ev).ncomponents
    return dg.FramedDiagram((), (), ev, [rng.randint(-3, 3) for _ in range(m)])


def count_hom_to_cyclic(L, n):
    """|Hom(H1, Z/n)| for H1 presented by the linking matrix, by brute force."""
    m = L.nrows
    return sum(all(sum(int(L[i, j]) * x[j] for j in range(m)) % n == 0 for i in range(m))
               for x in itertools.product(range(n), repeat=m))


def s3_roots(m):
    """#{g in S3 : g^m = 1} by brute force over permutations."""
    def power(p, k):
        out = tuple(range(3))
        for _ in range(k):
            out = tuple(p[i] for i in out)
        return out
    if m == 0:
        return 6
    return sum(power(p, m) == (0, 1, 2) for p in permutations(range(3)))


def test_parse_formats_agree():
    text = "# hopf link\nframing: 2 1\ncap(0) cap(2)\nx+(1) x+(1)\ncup(2) cup(0)\n"
    d = dg.parse_diagram(text)
    assert dg.parse_diagram(d.to_text()) == d
    assert dg.FramedDiagram.from_json(d.to_json()) == d
    assert d.ncomponents == 2 and d.is_closed


@pytest.mark.parametrize("text", [
    "cap(0)\n", "framing: 1 2\ncap(0)\ncup(0)\n", "cup(0)\n", "blob(1)\n",
    "top: 2\nbottom: 2\nframing: 0\ncap(5)\n", "colour: 1\n",
])
def test_parse_errors(text):
    with pytest.raises(dg.DiagramError):
        dg.parse_diagram(text)


def test_linking_matrix_of_hopf_link():
    d = dg.parse_diagram("framing: 2 1\ncap(0) cap(2) x+(1) x+(1) cup(2) cup(0)")
    L = d.linking_matrix()
    assert L == L.T and abs(L[0, 1]) == 1
    assert d.h1_order() == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_linking_matrix_is_symmetric_and_integral(seed):
    d = random_closed(random.Random(seed))
    L = d.linking_matrix()
    assert L == L.T
    assert all(float(x).is_integer() for r in L.rows for x in r)
    free, torsion = d.surgery_homology()
    M = dg.diagram_to_cobordism(d)
    rep = betti_int(M)
    assert (rep.freeRank, rep.torsion) == (free, torsion)


def test_empty_and_unknots():
    z2 = dg.hennings_data("d-z2")
    sw = dg.hennings_data("d-sweedler")
    empty = dg.FramedDiagram()
    unknot = dg.parse_diagram("framing: 0\ncap(0)\ncup(0)")
    assert dg.hennings_evaluate(empty, z2) == 1
    assert dg.hennings_evaluate(unknot, z2) == 2
    assert dg.hennings_evaluate(unknot, sw) == 0


def test_sweedler_normalizers_vanish():
    sw = dg.hennings_data("d-sweedler")
    assert dg.hennings_normalizers(sw) == (0, 0)
    with pytest.raises(dg.DiagramError):
        dg.hennings_evaluate(dg.lens_diagram(1), sw)


@pytest.mark.parametrize("name, n", [("d-z2", 2), ("d-z3", 3)])
def test_abelian_doubles_count_homomorphisms(name, n):
    data = dg.hennings_data(name)
    rng = random.Random(n)
    for _ in range(40):
        d = random_closed(rng)
        assert dg.hennings_evaluate(d, data) == count_hom_to_cyclic(d.linking_matrix(), n)


def test_s3_double_counts_homomorphisms():
    data = dg.hennings_data("d-s3")
    for p in range(1, 7):
        assert dg.hennings_evaluate(dg.lens_diagram(p), data) == s3_roots(p)
    for a, b in [(2, 1), (1, 1), (3, 2), (0, 0), (-2, 3), (2, 2)]:
        d = dg.parse_diagram("framing: %d %d\ncap(0) cap(2) x+(1) x+(1) cup(2) cup(0)" % (a, b))
        assert dg.hennings_evaluate(d, data) == s3_roots(abs(a * b - 1))


def test_quantum_sl2_lens_spaces():
    data = dg.hennings_data("uqsl2")
    rows = dg.lens_table(data, 3)
    assert [r["value"] for r in rows] == ["1", "2", "3"]


def test_lens_table_shape():
    rows = dg.lens_table(dg.hennings_data("d-z2"), 6)
    assert [r["p"] for r in rows] == list(range(1, 7))
    assert [r["h1"] for r in rows] == list(range(1, 7))
    assert all(r["status"] == "normalized" for r in rows)


@pytest.mark.parametrize("name", ["d-z2", "d-z3"])
def test_curated_moves_small_doubles(name):
    rep = dg.move_invariance_suite(dg.curated_move_suite(), dg.hennings_data(name))
    assert len(rep) >= 20 and all(r["ok"] for r in rep)


def test_moves_have_syntactic_inverses():
    for d, moves in dg.curated_move_suite():
        for m in moves:
            inv = dg.inverse_move(d, m)
            if inv is None or m.kind == "zeroHopfAddRemove" and m.get("op") == "remove":
                continue
            d2 = dg.apply_move(d, m)
            assert dg.apply_move(d2, inv) == d
            break


def test_bad_move_site():
    d = dg.lens_diagram(2)
    with pytest.raises(dg.DiagramError):
        dg.apply_move(d, dg.MoveKind("o2Slide", a=0, b=3))
    with pytest.raises(dg.DiagramError):
        dg.MoveKind("teleport")


@pytest.mark.parametrize("genera", [[1], [1, 1], [2, 0, 1]])
def test_connecting_tangles(genera):
    lam = dg.connecting_tangle("Lambda", genera)
    # 2g through strands per block plus one annulus between consecutive blocks
    assert lam.ncomponents == 2 * sum(genera) + len(genera) - 1
    pi = dg.connecting_tangle("Pi", genera)
    assert list(pi.top) == [2 * g for g in genera]


@pytest.mark.parametrize("word", [["x+(1)", "x+(0)", "x+(0)", "x+(1)"],
                                  ["x+(1)", "x+(0)", "x-(0)", "x-(1)"]])
@pytest.mark.parametrize("end", ["source", "target"])
def test_tau_move_is_an_involution(word, end):
    d = dg.FramedDiagram((2, 2), (2, 2), word)
    m = dg.MoveKind("tauMove", end=end, group=0)
    e = dg.apply_move(d, m)
    assert e != d and e.ncomponents == d.ncomponents
    assert dg.apply_move(e, dg.inverse_move(d, m)) == d


@pytest.mark.parametrize("end", ["source", "target"])
def test_sigma_move_round_trip(end):
    d = dg.connecting_tangle("Lambda", [1, 1])
    m = dg.MoveKind("sigmaMove", end=end, group=0, pair=0)
    e = dg.apply_move(d, m)
    # the pair becomes arc, annulus, arc: one new zero-framed closed component
    assert e.ncomponents == d.ncomponents + 1 and e.framings[-1] == 0
    assert dg.apply_move(e, dg.inverse_move(d, m)) == d


def test_tau_needs_a_sweeping_strand():
    with pytest.raises(dg.DiagramError):
        dg.apply_move(dg.connecting_tangle("Lambda", [1, 1]), dg.MoveKind("tauMove", group=0))

"""Homological skeletons of 3-dimensional cobordisms and their exact calculus.

A cobordism between ordered unions of closed surfaces is recorded per connected
piece: which boundary components it touches, the rational first homology of the
piece and the chart matrix ``psi`` sending the boundary H1 (in the symplectic
basis a1, b1, ..., ag, bg of every component) into it.  Optionally a piece also
carries an integral presentation of H1 so torsion can be read off.

Composition glues along the middle surface with Mayer-Vietoris:

    H1(M2 o M1) = coker(f) + Q^mu0

where f sends the middle H1 to H1(M1) + H1(M2) by (psi1, -psi2).  The sign only
enters through f; the stored charts are unsigned.
"""

from dataclasses import dataclass
from fractions import Fraction

from .exactlin import (Matrix, block_diag, cokernel_data, kernel_basis, rank,
                       subspace_combine, abelian_group_of_presentation)
from . import graphcat


class CobordismError(ValueError):
    pass


SOURCE, TARGET = "s", "t"


def _slot_key(slot):
    return (0 if slot[0] == SOURCE else 1, slot[1])


@dataclass(frozen=True)
class Piece:
    """One connected component of a cobordism.

    slots      -- boundary components ('s', j) / ('t', j), sources first
    bdims      -- 2g for every slot, same order
    h1         -- dim H1(piece; Q)
    psi        -- h1 x sum(bdims) chart matrix
    gens/rel/psiInt -- optional integral presentation Z^gens / im(rel)
    """
    slots: tuple
    bdims: tuple
    h1: int
    psi: Matrix
    rhoCertificate: int = 0
    rhoExact: object = None
    gens: object = None
    rel: object = None
    psiInt: object = None

    @property
    def bdim(self):
        return sum(self.bdims)

    @property
    def boundary_genus(self):
        return self.bdim // 2

    @property
    def beta_int1(self):
        return self.h1 - self.boundary_genus

    @property
    def beta_int0(self):
        return Fraction(2 - len(self.slots), 2)

    @property
    def has_integral(self):
        return self.gens is not None

    def slot_columns(self, slot):
        off = 0
        for s, d in zip(self.slots, self.bdims):
            if s == slot:
                return range(off, off + d)
            off += d
        raise KeyError(slot)

    def with_certificate(self, cert):
        return Piece(self.slots, self.bdims, self.h1, self.psi, cert, self.rhoExact,
                     self.gens, self.rel, self.psiInt)


class CobordismDatum:
    """Homological skeleton M: source -> target (tuples of genera)."""

    def __init__(self, source, target, pieces, check=True):
        self.source = tuple(int(g) for g in source)
        self.target = tuple(int(g) for g in target)
        self.pieces = tuple(sorted(pieces, key=lambda p: (
            _slot_key(p.slots[0]) if p.slots else (2, 0), p.h1)))
        if check:
            problems = validate(self)
            if problems:
                raise CobordismError("; ".join(problems))

    def genus_of(self, slot):
        side, j = slot
        return (self.source if side == SOURCE else self.target)[j]

    @property
    def beta_int1(self):
        return sum(p.beta_int1 for p in self.pieces)

    @property
    def beta_int0(self):
        return sum((p.beta_int0 for p in self.pieces), Fraction(0))

    @property
    def has_integral(self):
        return all(p.has_integral for p in self.pieces)

    def __repr__(self):
        return "CobordismDatum(%s -> %s, %d pieces, b1int=%d)" % (
            list(self.source), list(self.target), len(self.pieces), self.beta_int1)

    def to_json(self):
        pieces = []
        for p in self.pieces:
            d = {"slots": [list(s) for s in p.slots], "h1": p.h1, "psi": p.psi.to_json(),
                 "rhoCertificate": p.rhoCertificate}
            if p.rhoExact is not None:
                d["rhoExact"] = p.rhoExact
            if p.has_integral:
                d["integral"] = {"gens": p.gens, "relations": p.rel.to_json(),
                                 "psi": p.psiInt.to_json()}
            pieces.append(d)
        return {"source": list(self.source), "target": list(self.target), "pieces": pieces}

    @classmethod
    def from_json(cls, data):
        source, target = data["source"], data["target"]
        pieces = []
        for d in data["pieces"]:
            slots = tuple(sorted(((s[0], int(s[1])) for s in d["slots"]), key=_slot_key))
            bdims = tuple(2 * (source if s == SOURCE else target)[j] for s, j in slots)
            bdim = sum(bdims)
            h1 = int(d["h1"])
            psi = Matrix([[Fraction(x) for x in r] for r in d.get("psi", [])] or [], bdim) \
                if h1 else Matrix.zeros(0, bdim)
            integral = d.get("integral")
            gens = rel = psiInt = None
            if integral:
                gens = int(integral["gens"])
                rows = integral.get("relations", [])
                rel = Matrix(rows, len(rows[0]) if rows and rows[0] else 0) if gens else \
                    Matrix.zeros(0, 0)
                psiInt = Matrix(integral["psi"], bdim) if gens else Matrix.zeros(0, bdim)
            pieces.append(Piece(slots, bdims, h1, psi, int(d.get("rhoCertificate", 0)),
                                d.get("rhoExact"), gens, rel, psiInt))
        return cls(source, target, pieces)


def _make_piece(datum_source, datum_target, slots, h1, psi_rows, cert=0, exact=None,
                integral=True):
    slots = tuple(sorted(slots, key=_slot_key))
    bdims = tuple(2 * (datum_source if s == SOURCE else datum_target)[j] for s, j in slots)
    psi = Matrix(psi_rows, sum(bdims)) if h1 else Matrix.zeros(0, sum(bdims))
    if integral:
        return Piece(slots, bdims, h1, psi, cert, exact, h1, Matrix.zeros(h1, 0), psi)
    return Piece(slots, bdims, h1, psi, cert, exact)


def validate(M):
    """List of human-readable problems with M (empty when valid)."""
    problems = []
    expected = [(SOURCE, j) for j in range(len(M.source))] + \
               [(TARGET, j) for j in range(len(M.target))]
    seen = [s for p in M.pieces for s in p.slots]
    if sorted(seen, key=_slot_key) != expected:
        problems.append("boundary slots are not partitioned by the pieces")
    for k, p in enumerate(M.pieces):
        if p.psi.shape != (p.h1, p.bdim):
            problems.append("piece %d: psi has shape %s, expected %s"
                            % (k, p.psi.shape, (p.h1, p.bdim)))
            continue
        r = rank(p.psi)
        if 2 * r != p.bdim:
            problems.append("piece %d: half-rank violation (rank %d, boundary dim %d)"
                            % (k, r, p.bdim))
        if p.rhoCertificate < 0 or p.rhoCertificate > max(p.beta_int1, 0):
            problems.append("piece %d: certificate violation (certificate %d > b1int %d)"
                            % (k, p.rhoCertificate, p.beta_int1))
        if p.rhoExact is not None and p.rhoExact != p.rhoCertificate:
            problems.append("piece %d: exact rho %s differs from certificate %d"
                            % (k, p.rhoExact, p.rhoCertificate))
        if p.has_integral:
            if p.psiInt.shape != (p.gens, p.bdim) or p.rel.nrows != p.gens:
                problems.append("piece %d: integral data has inconsistent shape" % k)
            else:
                free, _ = abelian_group_of_presentation(p.rel, p.gens)
                if free != p.h1:
                    problems.append("piece %d: integral rank %d differs from h1 %d"
                                    % (k, free, p.h1))
    return problems


# ---------------------------------------------------------------------------
# generator catalog

def _sympl_form(g):
    J = Matrix.zeros(2 * g, 2 * g).rows
    J = [list(r) for r in J]
    for i in range(g):
        J[2 * i][2 * i + 1] = 1
        J[2 * i + 1][2 * i] = -1
    return Matrix(J, 2 * g)


def is_symplectic(A, g):
    if A.shape != (2 * g, 2 * g):
        return False
    if any(not isinstance(a, int) for r in A.rows for a in r):
        return False
    J = _sympl_form(g)
    return A.T @ J @ A == J


def _eye_rows(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def identity_cylinder(genera):
    genera = tuple(genera)
    pieces = []
    for j, g in enumerate(genera):
        n = 2 * g
        rows = [r + r for r in _eye_rows(n)]
        pieces.append(_make_piece(genera, genera, [(SOURCE, j), (TARGET, j)], n, rows,
                                  cert=0, exact=0))
    return CobordismDatum(genera, genera, pieces)


def mapping_class(g, A):
    A = A if isinstance(A, Matrix) else Matrix(A, 2 * g)
    if not is_symplectic(A, g):
        raise CobordismError("mapping class matrix is not integral symplectic")
    n = 2 * g
    rows = [e + list(a) for e, a in zip(_eye_rows(n), A.rows)]
    return CobordismDatum((g,), (g,), [_make_piece((g,), (g,), [(SOURCE, 0), (TARGET, 0)], n,
                                                   rows, cert=0, exact=0)])


def permutation(perm, genera):
    """Cylinders sending source component j to target component perm[j]."""
    genera = tuple(genera)
    perm = list(perm)
    if sorted(perm) != list(range(len(genera))):
        raise CobordismError("not a permutation of %d components" % len(genera))
    target = [None] * len(genera)
    for j, k in enumerate(perm):
        target[k] = genera[j]
    pieces = []
    for j, g in enumerate(genera):
        n = 2 * g
        rows = [r + r for r in _eye_rows(n)]
        pieces.append(_make_piece(genera, target, [(SOURCE, j), (TARGET, perm[j])], n, rows,
                                  cert=0, exact=0))
    return CobordismDatum(genera, target, pieces)


def chi(g):
    """Sigma x I read as Sigma + Sigma -> empty."""
    n = 2 * g
    rows = [r + r for r in _eye_rows(n)]
    return CobordismDatum((g, g), (), [_make_piece((g, g), (), [(SOURCE, 0), (SOURCE, 1)], n,
                                                   rows, cert=0, exact=0)])


def chi_dagger(g):
    n = 2 * g
    rows = [r + r for r in _eye_rows(n)]
    return CobordismDatum((), (g, g), [_make_piece((), (g, g), [(TARGET, 0), (TARGET, 1)], n,
                                                   rows, cert=0, exact=0)])


def _pi_rows(genera):
    G = sum(genera)
    return [r + r for r in _eye_rows(2 * G)], G


def pi_gen(genera):
    """Boundary connected sum of cylinders: S1 + ... + SK -> S1 # ... # SK."""
    genera = tuple(genera)
    if not genera:
        raise CobordismError("pi needs at least one component")
    rows, G = _pi_rows(genera)
    slots = [(SOURCE, j) for j in range(len(genera))] + [(TARGET, 0)]
    return CobordismDatum(genera, (G,), [_make_piece(genera, (G,), slots, 2 * G, rows,
                                                     cert=0, exact=0)])


def pi_dagger(genera):
    genera = tuple(genera)
    if not genera:
        raise CobordismError("pidag needs at least one component")
    rows, G = _pi_rows(genera)
    slots = [(SOURCE, 0)] + [(TARGET, j) for j in range(len(genera))]
    return CobordismDatum((G,), genera, [_make_piece((G,), genera, slots, 2 * G, rows,
                                                     cert=0, exact=0)])


def _hbody_rows(g):
    rows = []
    for i in range(g):
        r = [0] * (2 * g)
        r[2 * i + 1] = 1  # b_i survives, a_i bounds
        rows.append(r)
    return rows


def handlebody(g):
    """Handlebody empty -> Sigma_g in which the a-cycles bound."""
    return CobordismDatum((), (g,), [_make_piece((), (g,), [(TARGET, 0)], g, _hbody_rows(g),
                                                 cert=0, exact=0)])


def handlebody_dagger(g):
    return CobordismDatum((g,), (), [_make_piece((g,), (), [(SOURCE, 0)], g, _hbody_rows(g),
                                                 cert=0, exact=0)])


def circle_product(g):
    """The closed manifold S^1 x Sigma_g."""
    r = max(g, 1)
    return CobordismDatum((), (), [_make_piece((), (), [], 2 * g + 1, [[0] * 0] * (2 * g + 1),
                                               cert=r, exact=r)])


def sphere_times_circle():
    return circle_product(0)


def ball():
    """The 3-ball as empty -> S^2."""
    return handlebody(0)


def ball_dagger():
    return handlebody_dagger(0)


def empty():
    return CobordismDatum((), (), [])


def make_generator(kind, *params):
    """Catalog lookup by name; see the individual constructors."""
    table = {
        "identityCylinder": identity_cylinder, "mappingClass": mapping_class,
        "permutation": permutation, "chi": chi, "chiDagger": chi_dagger, "pi": pi_gen,
        "piDagger": pi_dagger, "handlebody": handlebody, "handlebodyDagger": handlebody_dagger,
        "circleProduct": circle_product, "sphereTimesCircle": sphere_times_circle,
        "ball": ball, "ballDagger": ball_dagger, "empty": empty,
    }
    if kind not in table:
        raise CobordismError("unknown generator kind %r" % kind)
    try:
        return table[kind](*params)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, CobordismError):
            raise
        raise CobordismError("malformed parameters for %s: %s" % (kind, exc))


# ---------------------------------------------------------------------------
# composition

@dataclass
class AnomalyReport:
    mu0: int
    mu1: int
    muPartial: int
    w12Dim: int
    v1SumV2Codim: int
    mu0Graph: int = 0
    mu0Betti: int = 0

    def to_json(self):
        return {"mu0": self.mu0, "mu1": self.mu1, "muPartial": self.muPartial,
                "w12Dim": self.w12Dim, "v1SumV2Codim": self.v1SumV2Codim,
                "mu0Graph": self.mu0Graph, "mu0Betti": self.mu0Betti}


def _clusters(M2, M1):
    uf = graphcat._UnionFind()
    members = [(1, k) for k in range(len(M1.pieces))] + [(2, k) for k in range(len(M2.pieces))]
    own1 = {s[1]: k for k, p in enumerate(M1.pieces) for s in p.slots if s[0] == TARGET}
    own2 = {s[1]: k for k, p in enumerate(M2.pieces) for s in p.slots if s[0] == SOURCE}
    for m in members:
        uf.find(m)
    for j in range(len(M1.target)):
        uf.union((1, own1[j]), (2, own2[j]))
    return uf.groups(members), own1, own2


def _rho_lower(p):
    if p.rhoExact is not None:
        return p.rhoExact
    return max(p.rhoCertificate, 1 if p.beta_int1 > 0 else 0)


def _glue_cluster(M2, M1, group, own1):
    pieces = [(w, k, (M1 if w == 1 else M2).pieces[k]) for w, k in sorted(group)]
    middle = sorted(j for j, k in own1.items() if (1, k) in group)
    mu = len(middle) - (len(pieces) - 1)
    offsets, off = {}, 0
    for w, k, p in pieces:
        offsets[(w, k)] = off
        off += p.h1
    ambient = off
    mid_dim = sum(2 * M1.target[j] for j in middle)
    # gluing map f: middle H1 -> H1(members)
    fcols = []
    for j in middle:
        cols1 = _member_cols(pieces, offsets, 1, (TARGET, j), ambient)
        cols2 = _member_cols(pieces, offsets, 2, (SOURCE, j), ambient)
        for c1, c2 in zip(cols1, cols2):
            fcols.append([a - b for a, b in zip(c1, c2)])
    f = Matrix.from_columns(fcols, ambient)
    P, c = cokernel_data(f)

    src_slots = [(w, k, s) for w, k, p in pieces if w == 1 for s in p.slots if s[0] == SOURCE]
    tgt_slots = [(w, k, s) for w, k, p in pieces if w == 2 for s in p.slots if s[0] == TARGET]
    outer = sorted(src_slots + tgt_slots, key=lambda x: _slot_key(x[2]))
    outer_cols = []
    for w, k, s in outer:
        outer_cols += _member_cols(pieces, offsets, w, s, ambient, one=(w, k))
    Psi = Matrix.from_columns(outer_cols, ambient)
    new_psi = (P @ Psi).vstack(Matrix.zeros(mu, Psi.ncols))
    slots = tuple(s for _, _, s in outer)
    bdims = tuple(2 * (M1.source if s[0] == SOURCE else M2.target)[s[1]] for s in slots)
    cert = sum(_rho_lower(p) for _, _, p in pieces) + mu

    gens = rel = psiInt = None
    if all(p.has_integral for _, _, p in pieces):
        goff, g0 = {}, 0
        for w, k, p in pieces:
            goff[(w, k)] = g0
            g0 += p.gens
        gens = g0 + mu
        frel = []
        for j in middle:
            c1 = _member_cols(pieces, goff, 1, (TARGET, j), g0, integral=True)
            c2 = _member_cols(pieces, goff, 2, (SOURCE, j), g0, integral=True)
            frel += [[a - b for a, b in zip(x, y)] for x, y in zip(c1, c2)]
        rel_blocks = block_diag(*[p.rel for _, _, p in pieces])
        rel = rel_blocks.hstack(Matrix.from_columns(frel, g0))
        rel = rel.vstack(Matrix.zeros(mu, rel.ncols))
        icols = []
        for w, k, s in outer:
            icols += _member_cols(pieces, goff, w, s, g0, one=(w, k), integral=True)
        psiInt = Matrix.from_columns([c + (0,) * mu for c in icols], gens) if icols else \
            Matrix.zeros(gens, 0)
    piece = Piece(slots, bdims, c + mu, new_psi, cert, None, gens, rel, psiInt)
    return piece, mu, len(middle), mid_dim


def _member_cols(pieces, offsets, which, slot, ambient, one=None, integral=False):
    """Chart columns of `slot` on the member of side `which`, embedded in the ambient space."""
    for w, k, p in pieces:
        if w != which or slot not in p.slots or (one is not None and (w, k) != one):
            continue
        M = p.psiInt if integral else p.psi
        base = offsets[(w, k)]
        cols = []
        for c in p.slot_columns(slot):
            v = [0] * ambient
            for i in range(M.nrows):
                v[base + i] = M[i, c]
            cols.append(tuple(v))
        return cols
    raise CobordismError("slot %r not found among cluster members" % (slot,))


def _middle_h0_kernels(M2, M1):
    """W1 = ker H0(psi1^t), W2 = ker H0(psi2^s) inside H0(middle)."""
    k = len(M1.target)

    def incidence(M, side):
        rows = []
        for p in M.pieces:
            rows.append([1 if (side, j) in p.slots else 0 for j in range(k)])
        return Matrix(rows, k) if rows else Matrix.zeros(0, k)

    return kernel_basis(incidence(M1, TARGET)), kernel_basis(incidence(M2, SOURCE))


def _boundary_kernel_projection(M, side):
    """p(ker psi) restricted to the components on `side`, as columns in their H1."""
    comps = M.target if side == TARGET else M.source
    offs, off = [], 0
    for g in comps:
        offs.append(off)
        off += 2 * g
    cols = []
    for p in M.pieces:
        K = kernel_basis(p.psi)
        for col in K.columns():
            v = [0] * off
            pos = 0
            for s, d in zip(p.slots, p.bdims):
                if s[0] == side:
                    for i in range(d):
                        v[offs[s[1]] + i] = col[pos + i]
                pos += d
            cols.append(v)
    return Matrix.from_columns(cols, off), off


def compose_cobordisms(M2, M1):
    """(M2 o M1, AnomalyReport) for M1: A -> B and M2: B -> C."""
    if M1.target != M2.source:
        raise CobordismError("object mismatch: target %s vs source %s"
                             % (list(M1.target), list(M2.source)))
    groups, own1, _ = _clusters(M2, M1)
    new_pieces = []
    mu_clusters = 0
    for group in groups:
        if len(group) == 1:
            # a piece that does not touch the middle surface passes through untouched
            w, k = group[0]
            p = (M1 if w == 1 else M2).pieces[k]
            if not any(s[0] == (TARGET if w == 1 else SOURCE) for s in p.slots):
                new_pieces.append(p)
                continue
        piece, mu, _, _ = _glue_cluster(M2, M1, set(group), own1)
        new_pieces.append(piece)
        mu_clusters += mu
    result = CobordismDatum(M1.source, M2.target, new_pieces, check=False)
    problems = validate(result)
    if problems:
        raise CobordismError("composite violates realizability: " + "; ".join(problems))

    W1, W2 = _middle_h0_kernels(M2, M1)
    w12 = subspace_combine(W1, W2, len(M1.target))["intersectionDim"]
    V1, amb = _boundary_kernel_projection(M1, TARGET)
    V2, _ = _boundary_kernel_projection(M2, SOURCE)
    codim = subspace_combine(V1, V2, amb)["codimOfSum"]
    mu1 = result.beta_int1 - M1.beta_int1 - M2.beta_int1
    mu0_betti = result.beta_int0 - M1.beta_int0 - M2.beta_int0
    _, mu0_graph = graphcat.compose_graphs(coordinate_graph_of(M2)["minimalSpider"],
                                           coordinate_graph_of(M1)["minimalSpider"])
    if not (w12 == mu_clusters == mu0_betti == mu0_graph):
        raise AssertionError("inconsistent mu0: %s" % ((w12, mu_clusters, mu0_betti, mu0_graph),))
    report = AnomalyReport(mu0=w12, mu1=mu1, muPartial=mu1 - w12, w12Dim=w12,
                           v1SumV2Codim=codim, mu0Graph=mu0_graph, mu0Betti=int(mu0_betti))
    return result, report


def tensor_cobordisms(M1, M2):
    ns, nt = len(M1.source), len(M1.target)
    shifted = []
    for p in M2.pieces:
        slots = tuple((s, j + (ns if s == SOURCE else nt)) for s, j in p.slots)
        shifted.append(Piece(slots, p.bdims, p.h1, p.psi, p.rhoCertificate, p.rhoExact,
                             p.gens, p.rel, p.psiInt))
    return CobordismDatum(M1.source + M2.source, M1.target + M2.target,
                          list(M1.pieces) + shifted, check=False)


# ---------------------------------------------------------------------------
# reports

@dataclass
class BettiReport:
    perPiece: list
    betaInt0: Fraction
    betaInt1: int
    betaInt1Coker: int
    torsion: object = None
    freeRank: object = None

    def to_json(self):
        b0 = self.betaInt0
        return {
            "betaInt0": int(b0) if b0.denominator == 1 else str(b0),
            "betaInt1": self.betaInt1, "betaInt1Coker": self.betaInt1Coker,
            "perPiece": [{"betaInt0": int(b) if b.denominator == 1 else str(b), "betaInt1": c}
                         for b, c in self.perPiece],
            "torsion": self.torsion, "freeRank": self.freeRank,
        }


def betti_int(M):
    """Interior Betti numbers, with beta^int_1 computed by counting and as dim coker(psi)."""
    per = []
    total_coker = 0
    for k, p in enumerate(M.pieces):
        coker = p.h1 - rank(p.psi)
        if coker != p.beta_int1:
            raise CobordismError("piece %d: half-rank violation (coker %d vs count %d)"
                                 % (k, coker, p.beta_int1))
        total_coker += coker
        per.append((p.beta_int0, p.beta_int1))
    torsion = free = None
    if M.has_integral:
        torsion, free = [], 0
        for p in M.pieces:
            pres = p.rel.hstack(p.psiInt) if p.gens else Matrix.zeros(0, 0)
            f, t = abelian_group_of_presentation(pres, p.gens)
            free += f
            torsion += t
        torsion.sort()
    return BettiReport(per, M.beta_int0, M.beta_int1, total_coker, torsion, free)


@dataclass
class RhoBounds:
    lower: int
    upper: int
    exact: bool
    betaUpper: int = 0

    def to_json(self):
        return {"lower": self.lower, "upper": self.upper, "exact": self.exact,
                "betaUpper": self.betaUpper}


def rho_bounds(M):
    """Bounds on the maximal number of non-separating surfaces, per piece and total.

    Returns (total, [per piece]).  When the catalog knows the exact value the
    bounds collapse to it; ``betaUpper`` always carries the homological bound."""
    per = []
    for p in M.pieces:
        b = p.beta_int1
        if p.rhoExact is not None:
            per.append(RhoBounds(p.rhoExact, p.rhoExact, True, b))
            continue
        lo = _rho_lower(p)
        per.append(RhoBounds(lo, b, lo == b, b))
    total = RhoBounds(sum(r.lower for r in per), sum(r.upper for r in per),
                      all(r.exact for r in per), sum(r.betaUpper for r in per))
    return total, per


def coordinate_graph_of(M):
    """Minimal spider and certified faithful coordinate graph of M."""
    src = graphcat.GraphObject(M.source)
    tgt = graphcat.GraphObject(M.target)
    spiders, faithful = [], []
    for p in M.pieces:
        s = [j for side, j in p.slots if side == SOURCE]
        t = [j for side, j in p.slots if side == TARGET]
        spiders.append(graphcat.GraphComponent(s, t, 0))
        faithful.append(graphcat.GraphComponent(s, t, _rho_lower(p)))
    return {"minimalSpider": graphcat.GraphMorphism(src, tgt, spiders),
            "certifiedFaithful": graphcat.GraphMorphism(src, tgt, faithful)}


# ---------------------------------------------------------------------------
# seeded random samples from the catalog

def random_symplectic(rng, g, steps=3):
    """Product of a few elementary transvections and handle swaps."""
    n = 2 * g
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    if not g:
        return A
    for _ in range(rng.randint(0, steps)):
        h = rng.randrange(g)
        E = [[int(i == j) for j in range(n)] for i in range(n)]
        a, b = 2 * h, 2 * h + 1
        kind = rng.choice("TLSX" if g > 1 else "TLS")
        if kind == "T":
            E[a][b] = rng.choice((-1, 1))
        elif kind == "L":
            E[b][a] = rng.choice((-1, 1))
        elif kind == "S":
            E[a][a], E[a][b], E[b][a], E[b][b] = 0, -1, 1, 0
        else:
            # a_h -> a_h + a_k, b_k -> b_k - b_h mixes two handles
            k = (h + 1) % g
            E[2 * h][2 * k] = 1
            E[2 * k + 1][2 * h + 1] = -1
        A = [[sum(A[i][k] * E[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return A


def random_layer(rng, source, max_genus=2):
    """A random disjoint union of catalog generators with the given source."""
    source = tuple(source)
    blocks, j = [], 0
    while j < len(source) or (rng.random() < 0.25 and len(blocks) < 6):
        left = len(source) - j
        k = rng.choice([s for s in (0, 1, 1, 1, 2, 2, 3) if s <= left]) if left else 0
        g = source[j:j + k]
        j += k
        if k == 0:
            h = rng.randint(0, max_genus)
            blocks.append(rng.choice([lambda: handlebody(h), lambda: chi_dagger(h), ball,
                                      lambda: circle_product(h)])())
        elif k == 1:
            g0 = g[0]
            opts = [lambda: identity_cylinder(g), lambda: mapping_class(
                g0, random_symplectic(rng, g0)), lambda: handlebody_dagger(g0)]
            if g0:
                h = rng.randint(0, g0)
                opts.append(lambda: pi_dagger((h, g0 - h)))
            blocks.append(rng.choice(opts)())
        else:
            opts = [lambda: permutation(rng.sample(range(k), k), g)]
            if sum(g) <= max_genus:
                opts.append(lambda: pi_gen(g))
            if k == 2 and g[0] == g[1]:
                opts.append(lambda: chi(g[0]))
            blocks.append(rng.choice(opts)())
    if not blocks:
        return empty()
    out = blocks[0]
    for b in blocks[1:]:
        out = tensor_cobordisms(out, b)
    return out


def random_cobordism(rng, source=None, layers=2, max_genus=2):
    """A random composite of ``layers`` catalog layers, starting at ``source``."""
    if source is None:
        source = tuple(rng.randint(0, max_genus) for _ in range(rng.randint(0, 3)))
    M = random_layer(rng, source, max_genus)
    for _ in range(layers - 1):
        M, _ = compose_cobordisms(random_layer(rng, M.target, max_genus), M)
    return M


def random_composable_pair(rng, max_genus=2):
    """(M1, M2) with M1.target == M2.source."""
    M1 = random_cobordism(rng, layers=rng.randint(1, 2), max_genus=max_genus)
    M2 = random_cobordism(rng, M1.target, layers=rng.randint(1, 2), max_genus=max_genus)
    return M1, M2

"""Half-projective TQFT evaluation over the cobordism generator catalog.

An expression is a tree of catalog atoms joined by composition and disjoint
union.  Its value is computed by structural recursion: atoms take the images
supplied by an instance, disjoint union is the Kronecker product, and every
composition node multiplies by x**mu0 with mu0 taken from the anomaly engine in
``cobord``.  The convention 0**0 == 1 is built in, so a theory with x == 0
kills exactly the composites that create new closed components in the
gluing graph.

Text syntax (``;`` composes left to right, ``*`` is disjoint union and binds
tighter, parentheses group)::

    expr := term | expr ';' term
    term := atom | term '*' atom
    atom := id([g,...]) | pi([g,...]) | pidag([g,...]) | chi(g) | chidag(g)
          | circle(g) | hbody(g) | hbodydag(g) | perm(cycles;[g,...])
          | mcg(matrix;g) | ball | s1xs2 | '(' expr ')'

Matrices act on column vectors: V(M) has shape dim V(target) x dim V(source),
and V(empty surface) is the ground field.
"""

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import cobord
from .exactlin import (Matrix, column_space_basis, inverse, rank, scalar_to_json,
                       simplify, solve)


class TQFTError(ValueError):
    """Evaluation or construction failure; ``prop`` names a violated property."""

    def __init__(self, msg, prop=None, witness=None):
        super().__init__(msg)
        self.prop = prop
        self.witness = witness

    def to_json(self):
        out = {"error": str(self)}
        if self.prop:
            out["property"] = self.prop
        if self.witness is not None:
            out["witness"] = self.witness
        return out


class ExpressionSyntaxError(TQFTError):
    """Malformed or ill-typed expression text."""


# ---------------------------------------------------------------------------
# expressions

ATOMS = ("id", "pi", "pidag", "chi", "chidag", "circle", "hbody", "hbodydag", "perm",
         "mcg", "ball", "s1xs2")


@dataclass(frozen=True)
class Atom:
    kind: str
    params: tuple = ()

    def text(self):
        k, p = self.kind, self.params
        if k in ("ball", "s1xs2"):
            return k
        if k in ("id", "pi", "pidag"):
            return "%s(%s)" % (k, _list_text(p[0]))
        if k == "perm":
            return "perm(%s;%s)" % (_list_text(p[0]), _list_text(p[1]))
        if k == "mcg":
            return "mcg(%s;%d)" % (_list_text(p[0]), p[1])
        return "%s(%d)" % (k, p[0])


@dataclass(frozen=True)
class Compose:
    """``first ; second``, i.e. second o first."""
    first: object
    second: object


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object


def _list_text(x):
    return json.dumps(_tuplify_back(x), separators=(",", ""))


def _tuplify(x):
    if isinstance(x, (list, tuple)):
        return tuple(_tuplify(y) for y in x)
    return x


def _tuplify_back(x):
    if isinstance(x, tuple):
        return [_tuplify_back(y) for y in x]
    return x


def to_text(e):
    if isinstance(e, Atom):
        return e.text()
    if isinstance(e, Compose):
        rhs = to_text(e.second)
        if isinstance(e.second, Compose):
            rhs = "(" + rhs + ")"
        return to_text(e.first) + " ; " + rhs
    left, right = to_text(e.left), to_text(e.right)
    if isinstance(e.left, Compose):
        left = "(" + left + ")"
    if not isinstance(e.right, Atom):
        right = "(" + right + ")"
    return left + " * " + right


def atom(kind, *params):
    """Build a checked atom from python values."""
    if kind not in ATOMS:
        raise TQFTError("unknown atom %r" % kind)
    params = _tuplify(params)
    arity = {"ball": 0, "s1xs2": 0, "perm": 2, "mcg": 2}.get(kind, 1)
    if len(params) != arity:
        raise TQFTError("%s takes %d parameter(s)" % (kind, arity))
    if kind in ("id", "pi", "pidag"):
        gs = params[0]
        if not isinstance(gs, tuple) or not all(_is_genus(g) for g in gs):
            raise TQFTError("%s needs a list of genera" % kind)
        if kind != "id" and not gs:
            raise TQFTError("%s needs at least one component" % kind)
    elif kind == "perm":
        cycles, gs = params
        if not all(_is_genus(g) for g in gs):
            raise TQFTError("perm needs a list of genera")
        _cycles_to_perm(cycles, len(gs))
    elif kind == "mcg":
        mat, g = params
        if not _is_genus(g) or len(mat) != 2 * g or any(len(r) != 2 * g for r in mat):
            raise TQFTError("mcg needs a 2g x 2g integer matrix")
        if g and not cobord.is_symplectic(Matrix([list(r) for r in mat], 2 * g), g):
            raise TQFTError("mcg matrix is not symplectic")
    elif arity == 1 and not _is_genus(params[0]):
        raise TQFTError("%s needs a genus" % kind)
    return Atom(kind, params)


def _is_genus(g):
    return isinstance(g, int) and not isinstance(g, bool) and g >= 0


def _cycles_to_perm(cycles, n):
    perm = list(range(n))
    seen = set()
    for cyc in cycles:
        if not isinstance(cyc, tuple) or any(not isinstance(c, int) or not 0 <= c < n
                                            for c in cyc):
            raise TQFTError("bad cycle %r for %d components" % (cyc, n))
        if seen & set(cyc) or len(set(cyc)) != len(cyc):
            raise TQFTError("cycles are not disjoint")
        seen |= set(cyc)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return perm


def compose(*parts):
    """Left-to-right composite ``parts[0] ; parts[1] ; ...`` (left associated)."""
    out = parts[0]
    for p in parts[1:]:
        out = Compose(out, p)
    return out


def tensor(*parts):
    out = parts[0]
    for p in parts[1:]:
        out = Tensor(out, p)
    return out


# -- parsing -----------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.s = text
        self.i = 0

    def error(self, msg):
        raise ExpressionSyntaxError("parse error at %d: %s" % (self.i, msg))

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self):
        self.ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def expr(self):
        e = self.term()
        while self.peek() == ";":
            self.i += 1
            e = Compose(e, self.term())
        return e

    def term(self):
        e = self.atom()
        while self.peek() == "*":
            self.i += 1
            e = Tensor(e, self.atom())
        return e

    def atom(self):
        c = self.peek()
        if c == "(":
            self.i += 1
            e = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.i += 1
            return e
        j = self.i
        while j < len(self.s) and (self.s[j].isalnum() or self.s[j] == "_"):
            j += 1
        name = self.s[self.i:j]
        if name not in ATOMS:
            self.error("unknown atom %r" % name)
        self.i = j
        if self.peek() != "(":
            if name in ("ball", "s1xs2"):
                return atom(name)
            self.error("expected '(' after %s" % name)
        # argument text up to the matching parenthesis
        depth, k = 0, self.i
        while k < len(self.s):
            if self.s[k] in "([":
                depth += 1
            elif self.s[k] in ")]":
                depth -= 1
                if depth == 0:
                    break
            k += 1
        if k >= len(self.s):
            self.error("unbalanced parentheses")
        inner = self.s[self.i + 1:k].strip()
        self.i = k + 1
        args = []
        if inner:
            for piece in _split_top(inner, ";"):
                try:
                    args.append(json.loads(piece))
                except ValueError:
                    self.error("bad argument %r" % piece)
        try:
            return atom(name, *args)
        except TQFTError as exc:
            self.error(str(exc))


def _split_top(s, sep):
    out, depth, cur = [], 0, []
    for ch in s:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_expression(text, check_types=True):
    p = _Parser(text)
    e = p.expr()
    if p.peek():
        p.error("trailing input")
    if check_types:
        try:
            signature(e)
        except TQFTError as exc:
            raise ExpressionSyntaxError(str(exc))
    return e


def signature(e):
    """(source genera, target genera) of a well-typed expression."""
    if isinstance(e, Atom):
        k, p = e.kind, e.params
        if k == "id":
            return p[0], p[0]
        if k == "pi":
            return p[0], (sum(p[0]),)
        if k == "pidag":
            return (sum(p[0]),), p[0]
        if k == "perm":
            perm = _cycles_to_perm(p[0], len(p[1]))
            tgt = [0] * len(perm)
            for j, q in enumerate(perm):
                tgt[q] = p[1][j]
            return p[1], tuple(tgt)
        if k == "mcg":
            return (p[1],), (p[1],)
        g = p[0] if p else 0
        return {"chi": ((g, g), ()), "chidag": ((), (g, g)), "circle": ((), ()),
                "hbody": ((), (g,)), "hbodydag": ((g,), ()), "ball": ((), (0,)),
                "s1xs2": ((), ())}[k]
    if isinstance(e, Tensor):
        (a, b), (c, d) = signature(e.left), signature(e.right)
        return a + c, b + d
    (a, b), (c, d) = signature(e.first), signature(e.second)
    if b != c:
        raise TQFTError("type mismatch: %s ends on %s but %s starts on %s"
                        % (to_text(e.first), list(b), to_text(e.second), list(c)))
    return a, d


# -- lowering ----------------------------------------------------------------

def lower_atom(a):
    k, p = a.kind, a.params
    table = {
        "id": lambda: cobord.identity_cylinder(p[0]),
        "pi": lambda: cobord.pi_gen(p[0]),
        "pidag": lambda: cobord.pi_dagger(p[0]),
        "chi": lambda: cobord.chi(p[0]),
        "chidag": lambda: cobord.chi_dagger(p[0]),
        "circle": lambda: cobord.circle_product(p[0]),
        "hbody": lambda: cobord.handlebody(p[0]),
        "hbodydag": lambda: cobord.handlebody_dagger(p[0]),
        "perm": lambda: cobord.permutation(_cycles_to_perm(p[0], len(p[1])), p[1]),
        "mcg": lambda: cobord.mapping_class(p[1], [list(r) for r in p[0]]),
        "ball": cobord.ball,
        "s1xs2": cobord.sphere_times_circle,
    }
    try:
        return table[k]()
    except cobord.CobordismError as exc:
        raise TQFTError("%s: %s" % (a.text(), exc))


def lower(e):
    """(CobordismDatum, total mu0 over composition nodes)."""
    if isinstance(e, Atom):
        return lower_atom(e), 0
    if isinstance(e, Tensor):
        (a, m), (b, n) = lower(e.left), lower(e.right)
        return cobord.tensor_cobordisms(a, b), m + n
    (a, m), (b, n) = lower(e.first), lower(e.second)
    if a.target != b.source:
        raise TQFTError("type mismatch: %s ends on %s but %s starts on %s"
                        % (to_text(e.first), list(a.target), to_text(e.second), list(b.source)))
    glued, report = cobord.compose_cobordisms(b, a)
    return glued, m + n + report.mu0


# ---------------------------------------------------------------------------
# linear algebra helpers

def kron(A, B):
    rows = []
    for ra in A.rows:
        for rb in B.rows:
            rows.append([a * b for a in ra for b in rb])
    return Matrix(rows, A.ncols * B.ncols)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def xpow(x, k):
    """x**k with 0**0 == 1."""
    return 1 if k == 0 else x ** k


def _unit_matrix():
    return Matrix([[1]], 1)


# ---------------------------------------------------------------------------
# instance data

@dataclass
class ConnectedTQFTData:
    """Data on connected surfaces from which the evaluator is assembled.

    ``iMaps``/``pMaps`` are keyed by genus patterns (g1, ..., gK) and map
    V(g1) (x) ... (x) V(gK) into V(g1 + ... + gK) and back; missing patterns
    are filled on demand by the instance.  ``generatorImages`` returns the
    matrix of a catalog atom on supported genera.
    """
    name: str
    x: object
    dims: dict
    supportedGenera: frozenset
    generatorImages: object
    iMaps: dict = field(default_factory=dict)
    pMaps: dict = field(default_factory=dict)
    lambdaImages: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    _maps: object = None
    _lambda: object = None

    def dim(self, g):
        if g not in self.supportedGenera:
            raise TQFTError("genus %d is not supported by %s" % (g, self.name))
        return self.dims[g]

    def i_map(self, pattern):
        pattern = tuple(pattern)
        if pattern not in self.iMaps:
            self.iMaps[pattern] = self._maps(pattern)[0]
        return self.iMaps[pattern]

    def p_map(self, pattern):
        pattern = tuple(pattern)
        if pattern not in self.pMaps:
            self.pMaps[pattern] = self._maps(pattern)[1]
        return self.pMaps[pattern]

    def lambda_image(self, pattern):
        pattern = tuple(pattern)
        if pattern not in self.lambdaImages:
            self.lambdaImages[pattern] = self._lambda(pattern)
        return self.lambdaImages[pattern]

    def patterns(self, max_len=3):
        """Genus patterns of length 2..max_len whose connected sum is supported."""
        top = max(self.supportedGenera)
        gs = sorted(self.supportedGenera)
        out = []
        for k in range(2, max_len + 1):
            for pat in itertools.product(gs, repeat=k):
                if sum(pat) <= top:
                    out.append(pat)
        return out


def _identity_pattern_maps(data, pattern):
    n = _prod(data.dim(g) for g in pattern)
    if n != data.dim(sum(pattern)):
        raise TQFTError("dimensions do not multiply for %s" % (pattern,))
    I = Matrix.identity(n)
    return I, I


# -- the semisimple abelian instance -------------------------------------------

def _handle_vectors(n, g):
    return list(itertools.product(range(n), repeat=2 * g))


def abelian_instance(r, max_genus=3):
    """Instance for an abelian modular category with r = n^2 invertible objects.

    All quantum dimensions are 1, so the global dimension and x are n and
    V(Sigma_g) has dimension r * n^(2g-2) = n^(2g).  The space is realized as
    functions on H1(Sigma_g; Z/n) in the basis a1, b1, ..., ag, bg; mapping
    classes act by pulling back along the inverse, the pairing of chi is the
    identity and the handlebody vector sums over classes vanishing on the
    a-cycles.  Connected sums concatenate coordinates, so i and p are
    identities and Lambda acts as x^(K-1).
    """
    if not isinstance(r, int) or r < 1 or math.isqrt(r) ** 2 != r:
        raise TQFTError("abelian instance needs a perfect square, got %r" % (r,))
    n = math.isqrt(r)
    x = Fraction(n)
    dims = {}
    for g in range(max_genus + 1):
        d = Fraction(r) * Fraction(n) ** (2 * g - 2)
        dims[g] = int(d)
    data = ConnectedTQFTData("abelian:%d" % r, x, dims, frozenset(dims), None,
                             info={"r": r, "globalDimension": n})

    def index(v):
        out = 0
        for c in v:
            out = out * n + c
        return out

    def hbody(g):
        col = [0] * dims[g]
        for v in _handle_vectors(n, g):
            if all(v[2 * i] == 0 for i in range(g)):
                col[index(v)] = 1
        return col

    def images(kind, params):
        if kind in ("ball", "s1xs2"):
            return _unit_matrix() if kind == "ball" else Matrix([[x]], 1)
        if kind == "mcg":
            mat, g = params
            N = dims[g]
            Ainv = inverse(Matrix(mat, 2 * g))
            if any(isinstance(a, Fraction) and a.denominator != 1 for r_ in Ainv.rows for a in r_):
                raise TQFTError("mapping class matrix is not invertible over Z")
            AinvT = Ainv.T
            rows = [[0] * N for _ in range(N)]
            for v in _handle_vectors(n, g):
                w = tuple(int(sum(AinvT[i, j] * v[j] for j in range(2 * g))) % n
                          for i in range(2 * g))
                rows[index(w)][index(v)] = 1
            return Matrix(rows, N)
        g = params[0]
        N = data.dim(g)
        if kind == "chi":
            return Matrix([[1 if a == b else 0 for a in range(N) for b in range(N)]], N * N)
        if kind == "chidag":
            return Matrix([[1 if a == b else 0] for a in range(N) for b in range(N)], 1)
        if kind == "hbody":
            return Matrix([[c] for c in hbody(g)], 1)
        if kind == "hbodydag":
            return Matrix([hbody(g)], N)
        if kind == "circle":
            return Matrix([[x * N]], 1)
        raise TQFTError("no image for %s" % kind)

    data.generatorImages = images
    data._maps = lambda pat: _identity_pattern_maps(data, pat)
    data._lambda = lambda pat: Matrix.identity(data.dim(sum(pat))).scale(
        xpow(x, len(pat) - 1))
    return data


# -- the genus-one Hopf instance -----------------------------------------------

def sl2_word(A):
    """Word in ("S", 1) / ("T", k) whose ordered product is A in SL(2, Z).

    S = [[0, -1], [1, 0]] and T = [[1, 1], [0, 1]]; a trailing ("S", 2) carries
    the sign -1."""
    M = [list(A[0]), list(A[1])]
    if M[0][0] * M[1][1] - M[0][1] * M[1][0] != 1:
        raise TQFTError("not in SL(2, Z): %r" % (A,))
    word = []
    while M[1][0] != 0:
        q = M[0][0] // M[1][0]
        if q:
            word.append(("T", q))
            M[0] = [M[0][0] - q * M[1][0], M[0][1] - q * M[1][1]]
        word.append(("S", 1))
        M = [M[1], [-M[0][0], -M[0][1]]]
    e = M[0][0]
    if e == -1:
        word.append(("S", 2))
    if M[0][1] * e:
        word.append(("T", M[0][1] * e))
    return word


def _sl2_mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def word_matrix(word):
    out = [[1, 0], [0, 1]]
    gens = {"S": [[0, -1], [1, 0]], "T": [[1, 1], [0, 1]], "Ti": [[1, -1], [0, 1]]}
    for g, k in word:
        if g == "T" and k < 0:
            g, k = "Ti", -k
        for _ in range(k):
            out = _sl2_mul(out, gens[g])
    return out


@dataclass
class GenusOneData:
    m: int
    S: Matrix
    T: Matrix
    pairing: Matrix          # Hopf pairing on the quotient
    chiForm: Matrix          # pairing composed with S: the image of chi(1)
    vacuum: Matrix           # class of the counit, image of hbody(1)
    lambdaClass: Matrix      # action of the integral on the quotient
    relations: dict


def _genus_one_data(A, R, twist, integrals, coend, lambda_action):
    n = A.n
    mono = A.tensor_mul(A.flip(R), R)
    drin = Matrix([list(r) for r in mono], n).T          # f -> (f (x) id)(R21 R)
    N, B = coend.invNullBasis, coend.invBasis
    basis = column_space_basis(N.hstack(B)) if N.ncols else B
    C = basis.submatrix(cols=range(N.ncols, basis.ncols))
    full = basis
    m = C.ncols
    keep = list(range(N.ncols, full.ncols))

    def on_quotient(L, what):
        if N.ncols and rank(N.hstack(L @ N)) != N.ncols:
            raise TQFTError("%s does not preserve the null space" % what)
        X = solve(full, L @ C)
        if X is None:
            raise TQFTError("%s leaves the invariants" % what)
        return X.submatrix(rows=keep)

    def coords(vec, what):
        X = solve(full, Matrix.from_columns([vec], n))
        if X is None:
            raise TQFTError("%s is not an invariant" % what)
        return X.submatrix(rows=keep)

    W = C.T @ drin.T @ C
    if N.ncols and not ((N.T @ drin.T @ C).is_zero() and (C.T @ drin.T @ N).is_zero()):
        raise TQFTError("Hopf pairing does not descend to the quotient")
    if rank(W) != m:
        raise TQFTError("degenerate quotient pairing (rank %d of %d)" % (rank(W), m))
    lamR = integrals.rightCointegral
    E = [A.basis(i) for i in range(n)]
    cols = []
    for j in range(n):
        cols.append([sum((lamR[k] * c for k, c in enumerate(A.mul(E[j], E[a]))), A.zero_scalar)
                     for a in range(n)])
    radford = Matrix.from_columns(cols, n)                # z -> lambda'(z .)
    S = on_quotient(radford @ drin, "S transform")
    T = on_quotient(A.left_mult_matrix(twist).T, "twist")
    vac = coords(list(A.counit), "counit")
    lam = on_quotient(lambda_action, "integral action")
    chi_form = W @ S
    rel = {}
    S2 = S @ S
    S4 = S2 @ S2
    ST = S @ T
    ST3 = ST @ ST @ ST
    rel["S4"] = _scalar_multiple(S4, Matrix.identity(m))
    rel["ST3overS2"] = _scalar_multiple(ST3, S2)
    rel["S2T"] = (S2 @ T) == (T @ S2)
    return GenusOneData(m, S, T, W, chi_form, vac, lam, rel)


def _scalar_multiple(X, Y):
    """c with X == c Y, or None."""
    c = None
    for rx, ry in zip(X.rows, Y.rows):
        for a, b in zip(rx, ry):
            if b:
                c = a / b
                break
        if c is not None:
            break
    if c is None:
        return None if not X.is_zero() else 0
    return c if X == Y.scale(c) else None


def hopf_genus_one_instance(A, R, twist, name=None):
    """Instance on surfaces of genus <= 1 built from a factorizable ribbon algebra.

    V(S^2) is the ground field and V(T^2) is the quotient of the coadjoint
    invariants of A* by the null space of their pairing with the center.  chi
    is the Hopf pairing followed by the S transform (Drinfeld map then the
    right cointegral), T is multiplication by the central ``twist`` and the
    solid torus is the class of the counit.  x is eps of the integral
    normalized against the cointegral.
    """
    from . import hopfalg
    if twist is None or not A.is_central(twist):
        raise TQFTError("missing ribbon: no central twist element")
    ints = hopfalg.integrals_of(A)
    coend = hopfalg.coend_invariants(A)
    action = hopfalg.cointegral_transformation(A, ints, coend)
    g1 = _genus_one_data(A, R, twist, ints, coend, action.lambdaAction)
    x = ints.epsOfLambda
    dims = {0: 1, 1: g1.m}
    data = ConnectedTQFTData(name or "hopf:" + A.name, x, dims, frozenset(dims), None,
                             info={"invDim": coend.invDim, "invBarDim": g1.m,
                                   "relations": g1.relations})
    data.genusOne = g1
    chidag = inverse(g1.chiForm)
    Tinv = inverse(g1.T)

    def rho(mat):
        out = Matrix.identity(g1.m)
        for g, k in sl2_word(mat):
            base = g1.S if g == "S" else (g1.T if k > 0 else Tinv)
            for _ in range(abs(k)):
                out = out @ base
        return out

    def images(kind, params):
        if kind == "ball":
            return _unit_matrix()
        if kind == "s1xs2":
            return Matrix([[x]], 1)
        if kind == "mcg":
            mat, g = params
            data.dim(g)
            return _unit_matrix() if g == 0 else rho(mat)
        g = params[0]
        N = data.dim(g)
        if kind == "circle":
            return Matrix([[x * N]], 1)
        if g == 0:
            return _unit_matrix()
        if kind == "chi":
            return Matrix([[g1.chiForm[a, b] for a in range(N) for b in range(N)]], N * N)
        if kind == "chidag":
            return Matrix([[chidag[a, b]] for a in range(N) for b in range(N)], 1)
        if kind == "hbody":
            return g1.vacuum
        if kind == "hbodydag":
            return g1.vacuum.T @ g1.chiForm
        raise TQFTError("no image for %s" % kind)

    def lam(pattern):
        out = _unit_matrix()
        for j, g in enumerate(pattern):
            last = j == len(pattern) - 1
            if g == 0:
                f = _unit_matrix() if last else Matrix([[x]], 1)
            else:
                f = Matrix.identity(g1.m) if last else g1.lambdaClass
            out = kron(out, f)
        return out

    data.generatorImages = images
    data._maps = lambda pat: _identity_pattern_maps(data, pat)
    data._lambda = lam
    return data


_INSTANCES = {}


def hopf_instance(algebra="d-sweedler"):
    """Genus-one instance for a named algebra: d-sweedler, d-z2, d-z3 or uqsl2."""
    from . import hopfalg
    key = algebra.lower()
    if key in ("d-sweedler", "d-z2", "d-z3"):
        H = hopfalg.builtin(key[2:])
        D = hopfalg.drinfeld_double_algebra(H)
        R = hopfalg.canonical_r_matrix(H, D)
        bal = hopfalg.balancing_grouplikes(D, hopfalg.double_grouplikes(H, D))
        if not bal:
            raise TQFTError("missing ribbon: no balancing grouplike in %s" % key)
        # G^-1 u is central for any balancing G; it is a ribbon element only
        # when G^2 = u S(u)^-1, which fails for the Sweedler double
        twist = D.mul(D.S(bal[0]), hopfalg.drinfeld_element(D, R))
        return hopf_genus_one_instance(D, R, twist, "hopf:" + key)
    if key in ("uqsl2", "uq", "u_q(sl2)"):
        U, rib = hopfalg.quantum_sl2_ribbon()
        return hopf_genus_one_instance(U, rib.R, rib.ribbonV, "hopf:uqsl2")
    raise TQFTError("unknown algebra for the Hopf instance: %r" % algebra)


def instance(spec):
    """Instance from a string: ``abelian:<r>`` or ``hopf:<algebra>`` (cached)."""
    if spec in _INSTANCES:
        return _INSTANCES[spec]
    kind, _, arg = spec.partition(":")
    if kind == "abelian":
        try:
            r = int(arg or 4)
        except ValueError:
            raise TQFTError("abelian instance needs an integer, got %r" % arg)
        data = abelian_instance(r)
    elif kind == "hopf":
        data = hopf_instance(arg or "d-sweedler")
    else:
        raise TQFTError("unknown instance %r" % spec)
    _INSTANCES[spec] = data
    return data


# ---------------------------------------------------------------------------
# the evaluator

def _swap_block(g1, g2):
    """Symplectic matrix moving the handles of the first summand behind the second."""
    n = 2 * (g1 + g2)
    rows = [[0] * n for _ in range(n)]
    for i in range(2 * g1):
        rows[2 * g2 + i][i] = 1
    for i in range(2 * g2):
        rows[i][2 * g1 + i] = 1
    return rows


def _tensor_swap(d1, d2):
    rows = [[0] * (d1 * d2) for _ in range(d1 * d2)]
    for a in range(d1):
        for b in range(d2):
            rows[b * d1 + a][a * d2 + b] = 1
    return Matrix(rows, d1 * d2)


def check_properties(data, max_len=3):
    """Run the structural checks; returns {property: list of failing patterns}."""
    x = data.x
    fails = {"P2": [], "P4": [], "P5": [], "P7": [], "P8": []}
    pats = data.patterns(max_len)
    for pat in pats:
        i, p = data.i_map(pat), data.p_map(pat)
        if not (p @ i).is_identity():
            fails["P2"].append(list(pat))
        # Lambda = Pi o Pi^dagger: instance image, x^(K-1) i p and the anomaly of the gluing
        _, rep = cobord.compose_cobordisms(cobord.pi_gen(pat), cobord.pi_dagger(pat))
        ip = (i @ p).scale(xpow(x, len(pat) - 1))
        if data.lambda_image(pat) != ip or rep.mu0 != len(pat) - 1:
            fails["P7"].append(list(pat))
        if len(pat) == 2:
            g1, g2 = pat
            lhs = data.generatorImages("mcg", (_swap_block(g1, g2), g1 + g2)) @ i
            rhs = data.i_map((g2, g1)) @ _tensor_swap(data.dim(g1), data.dim(g2))
            if lhs != rhs:
                fails["P5"].append(list(pat))
        if len(pat) == 3:
            g1, g2, g3 = pat
            d1, d3 = data.dim(g1), data.dim(g3)
            I1, I3 = Matrix.identity(d1), Matrix.identity(d3)
            a = data.i_map((g1 + g2, g3)) @ kron(data.i_map((g1, g2)), I3)
            b = data.i_map((g1, g2 + g3)) @ kron(I1, data.i_map((g2, g3)))
            c = kron(data.p_map((g1, g2)), I3) @ data.p_map((g1 + g2, g3))
            d = kron(I1, data.p_map((g2, g3))) @ data.p_map((g1, g2 + g3))
            if not (a == data.i_map(pat) == b and c == data.p_map(pat) == d):
                fails["P4"].append(list(pat))
            lhs = kron(data.i_map((g1, g2)), I3) @ kron(I1, data.p_map((g2, g3)))
            rhs = data.p_map((g1 + g2, g3)) @ data.i_map((g1, g2 + g3))
            if lhs != rhs:
                fails["P8"].append(list(pat))
    for g in data.supportedGenera:
        if not (data.p_map((g,)) @ data.i_map((g,))).is_identity():
            fails["P2"].append([g])
    return fails


@dataclass(frozen=True)
class HalfProjectiveEvaluator:
    data: ConnectedTQFTData
    checks: dict

    @property
    def x(self):
        return self.data.x


def build_evaluator(data, max_len=3):
    """Verify P2, P4, P5, P7 and P8 on the supported patterns, then wrap the data."""
    fails = check_properties(data, max_len)
    for prop in ("P2", "P4", "P5", "P7", "P8"):
        if fails[prop]:
            raise TQFTError("%s fails for %s" % (prop, data.name), prop=prop,
                            witness=fails[prop][0])
    return HalfProjectiveEvaluator(data, {k: "ok" for k in fails})


def _atom_value(data, a):
    k, p = a.kind, a.params
    if k == "id":
        return Matrix.identity(_prod(data.dim(g) for g in p[0]))
    if k == "pi":
        return data.i_map(p[0])
    if k == "pidag":
        return data.p_map(p[0])
    if k == "perm":
        gs = p[1]
        perm = _cycles_to_perm(p[0], len(gs))
        sdims = [data.dim(g) for g in gs]
        tdims = [0] * len(gs)
        for j, q in enumerate(perm):
            tdims[q] = sdims[j]
        total = _prod(sdims)
        rows = [[0] * total for _ in range(total)]
        for idx in itertools.product(*[range(d) for d in sdims]):
            t = [0] * len(gs)
            for j, q in enumerate(perm):
                t[q] = idx[j]
            rows[_flat(t, tdims)][_flat(idx, sdims)] = 1
        return Matrix(rows, total)
    return data.generatorImages(k, p)


def _flat(idx, dims):
    out = 0
    for i, d in zip(idx, dims):
        out = out * d + i
    return out


@dataclass
class Evaluation:
    value: Matrix
    mu0Total: int
    source: tuple
    target: tuple

    def to_json(self):
        v = self.value
        if v.shape == (1, 1):
            val = scalar_to_json(v[0, 0])
        else:
            val = [[scalar_to_json(a) for a in r] for r in v.rows]
        return {"value": val, "mu0Total": self.mu0Total, "source": list(self.source),
                "target": list(self.target)}


def evaluate_full(ev, e):
    data = ev.data if isinstance(ev, HalfProjectiveEvaluator) else ev
    if isinstance(e, str):
        e = parse_expression(e)

    def rec(node):
        if isinstance(node, Atom):
            d = lower_atom(node)
            for g in d.source + d.target:
                data.dim(g)
            return _atom_value(data, node), d, 0
        if isinstance(node, Tensor):
            A, da, ma = rec(node.left)
            B, db, mb = rec(node.right)
            return kron(A, B), cobord.tensor_cobordisms(da, db), ma + mb
        A, da, ma = rec(node.first)
        B, db, mb = rec(node.second)
        if da.target != db.source:
            raise TQFTError("type mismatch: %s ends on %s but %s starts on %s"
                            % (to_text(node.first), list(da.target), to_text(node.second),
                               list(db.source)))
        glued, rep = cobord.compose_cobordisms(db, da)
        val = (B @ A).scale(xpow(data.x, rep.mu0))
        return val, glued, ma + mb + rep.mu0

    val, d, mu = rec(e)
    return Evaluation(val.map(simplify), mu, d.source, d.target)


def evaluate(ev, e):
    return evaluate_full(ev, e).value


# ---------------------------------------------------------------------------
# rewriting

def _chain(e):
    if isinstance(e, Compose):
        return _chain(e.first) + _chain(e.second)
    return [e]


def connected_reduction(e):
    """Cancel adjacent ``pi(gs) ; pidag(gs)`` pairs and identity layers.

    Returns (e', k) with V(e) = x^k V(e'): the atom-level identity p i = 1 keeps
    the linear algebra, and k is the drop in total mu0 caused by removing the
    connecting tubes.
    """
    if not isinstance(e, Compose):
        return e, 0
    items = _chain(e)
    changed = True
    while changed:
        changed = False
        for j in range(len(items) - 1):
            a, b = items[j], items[j + 1]
            if (isinstance(a, Atom) and isinstance(b, Atom) and a.kind == "pi"
                    and b.kind == "pidag" and a.params == b.params):
                items[j:j + 2] = [Atom("id", a.params)]
                changed = True
                break
        if len(items) > 1:
            kept = [it for it in items if not (isinstance(it, Atom) and it.kind == "id")]
            if len(kept) != len(items):
                items = kept or [items[0]]
                changed = True
    out = compose(*items)
    return out, lower(e)[1] - lower(out)[1]


# ---------------------------------------------------------------------------
# random expressions and the half-projectivity suite

def _layer(rng, data, obj, max_dim):
    """A random well-typed layer obj -> obj' (returns (expr, obj'))."""
    gs = sorted(data.supportedGenera)
    top = max(gs)
    obj = tuple(obj)

    def pad(pre, op, post):
        parts = []
        if pre:
            parts.append(Atom("id", (tuple(pre),)))
        parts.append(op)
        if post:
            parts.append(Atom("id", (tuple(post),)))
        return tensor(*parts)

    def size(o):
        return _prod(data.dim(g) for g in o)

    for _ in range(50):
        choice = rng.choice(["mcg", "perm", "pi", "pidag", "chi", "chidag", "hbody",
                             "hbodydag", "closed"])
        k = len(obj)
        if choice == "mcg" and k:
            j = rng.randrange(k)
            g = obj[j]
            A = _random_symplectic(rng, g)
            return pad(obj[:j], Atom("mcg", (_tuplify(A), g)), obj[j + 1:]), obj
        if choice == "perm" and k >= 2:
            p = list(range(k))
            rng.shuffle(p)
            cycles = _perm_to_cycles(p)
            new = [0] * k
            for j, q in enumerate(p):
                new[q] = obj[j]
            return Atom("perm", (cycles, obj)), tuple(new)
        if choice == "pi" and k >= 2:
            j = rng.randrange(k - 1)
            if obj[j] + obj[j + 1] <= top:
                new = obj[:j] + (obj[j] + obj[j + 1],) + obj[j + 2:]
                return pad(obj[:j], Atom("pi", (obj[j:j + 2],)), obj[j + 2:]), new
        if choice == "pidag" and k:
            j = rng.randrange(k)
            g1 = rng.randint(0, obj[j])
            parts = (g1, obj[j] - g1)
            new = obj[:j] + parts + obj[j + 1:]
            if size(new) <= max_dim:
                return pad(obj[:j], Atom("pidag", (parts,)), obj[j + 1:]), new
        if choice == "chi" and k >= 2:
            j = rng.randrange(k - 1)
            if obj[j] == obj[j + 1]:
                return pad(obj[:j], Atom("chi", (obj[j],)), obj[j + 2:]), obj[:j] + obj[j + 2:]
        if choice == "chidag":
            g = rng.choice(gs)
            j = rng.randrange(k + 1)
            new = obj[:j] + (g, g) + obj[j:]
            if size(new) <= max_dim:
                return pad(obj[:j], Atom("chidag", (g,)), obj[j:]), new
        if choice == "hbody":
            g = rng.choice(gs)
            j = rng.randrange(k + 1)
            new = obj[:j] + (g,) + obj[j:]
            if size(new) <= max_dim:
                return pad(obj[:j], Atom("hbody", (g,)), obj[j:]), new
        if choice == "hbodydag" and k:
            j = rng.randrange(k)
            return pad(obj[:j], Atom("hbodydag", (obj[j],)), obj[j + 1:]), obj[:j] + obj[j + 1:]
        if choice == "closed":
            c = rng.choice([Atom("s1xs2"), Atom("circle", (rng.choice(gs),)), Atom("ball")])
            if c.kind == "ball":
                new = (0,) + obj
                if size(new) <= max_dim:
                    return pad((), c, obj), new
                continue
            return pad((), c, obj), obj
    return (Atom("id", (obj,)) if obj else Atom("s1xs2")), obj


def _perm_to_cycles(p):
    seen, out = set(), []
    for s in range(len(p)):
        if s in seen or p[s] == s:
            continue
        cyc, j = [], s
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return tuple(out)


def _random_symplectic(rng, g):
    n = 2 * g
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(rng.randint(0, 3)):
        h = rng.randrange(g) if g else None
        if h is None:
            break
        S = [[int(i == j) for j in range(n)] for i in range(n)]
        c = rng.choice([-1, 1])
        kind = rng.choice(["T", "S", "L"])
        a, b = 2 * h, 2 * h + 1
        if kind == "T":
            S[a][b] = c
        elif kind == "L":
            S[b][a] = c
        else:
            S[a][a], S[a][b], S[b][a], S[b][b] = 0, -1, 1, 0
        A = [[sum(A[i][k] * S[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return A


def random_expression(rng, data, source=(), layers=3, max_dim=64):
    """A random left-associated chain of layers starting at ``source``."""
    obj = tuple(source)
    parts = []
    for _ in range(max(1, layers)):
        e, obj = _layer(rng, data, obj, max_dim)
        parts.append(e)
    return compose(*parts), obj


def _rebracket(rng, items):
    if len(items) == 1:
        return items[0]
    k = rng.randrange(1, len(items))
    return Compose(_rebracket(rng, items[:k]), _rebracket(rng, items[k:]))


def half_projectivity_suite(ev, n=50, seed=0, max_dim=64):
    """Check V(N;M) == x^mu0 V(M) V(N) and association independence on random pairs."""
    if n < 1:
        raise TQFTError("suite size must be at least 1")
    data = ev.data if isinstance(ev, HalfProjectiveEvaluator) else ev
    rng = random.Random(seed)
    rows = []
    for t in range(n):
        while True:
            src = tuple(rng.choice(sorted(data.supportedGenera)) for _ in range(rng.randint(0, 2)))
            if _prod(data.dim(g) for g in src) <= max_dim:
                break
        N, mid = random_expression(rng, data, src, rng.randint(1, 3), max_dim)
        M, _ = random_expression(rng, data, mid, rng.randint(1, 3), max_dim)
        vN, vM = evaluate_full(data, N), evaluate_full(data, M)
        _, rep = cobord.compose_cobordisms(lower(M)[0], lower(N)[0])
        flat = parse_expression(to_text(N) + " ; " + to_text(M))
        vMN = evaluate_full(data, flat)
        law = vMN.value == (vM.value @ vN.value).scale(xpow(data.x, rep.mu0)).map(simplify)
        items = _chain(N) + _chain(M)
        other = evaluate_full(data, _rebracket(rng, items))
        assoc = other.value == vMN.value and other.mu0Total == vMN.mu0Total
        rows.append({"case": t, "first": to_text(N), "second": to_text(M), "mu0": rep.mu0,
                     "law": law, "association": assoc})
    return {"instance": data.name, "x": scalar_to_json(data.x), "n": n,
            "passed": sum(r["law"] and r["association"] for r in rows), "cases": rows}


def permutation_representation_check(ev, genera, trials=20, seed=0):
    """V restricted to permutations is an honest representation of the symmetric group."""
    data = ev.data if isinstance(ev, HalfProjectiveEvaluator) else ev
    rng = random.Random(seed)
    k = len(genera)
    ok = True
    for _ in range(trials):
        p, q = list(range(k)), list(range(k))
        rng.shuffle(p)
        rng.shuffle(q)
        a = Atom("perm", (_perm_to_cycles(p), tuple(genera)))
        mid = [0] * k
        for j, t in enumerate(p):
            mid[t] = genera[j]
        b = Atom("perm", (_perm_to_cycles(q), tuple(mid)))
        qp = [q[p[j]] for j in range(k)]
        c = Atom("perm", (_perm_to_cycles(qp), tuple(genera)))
        ok &= evaluate(data, Compose(a, b)) == evaluate(data, c)
    return ok

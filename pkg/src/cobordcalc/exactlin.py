"""Exact linear algebra over Z, Q and cyclotomic fields Q(zeta_N).

Matrices are dense and small.  Entries are Python ints, ``Fraction`` or
``Cyclotomic`` values; nothing here ever touches floating point.
"""

from fractions import Fraction
from functools import lru_cache


# ---------------------------------------------------------------------------
# cyclotomic scalars

@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients (lowest degree first) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, cyclotomic_polynomial(d))
    return tuple(num)


def _poly_divexact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        q = num[k + len(den) - 1] // lead
        out[k] = q
        for j, c in enumerate(den):
            num[k + j] -= q * c
    assert not any(num), "inexact polynomial division"
    return out


class Cyclotomic:
    """An element of Q(zeta_N) in the power basis 1, z, ..., z^(phi(N)-1)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs):
        self.order = order
        phi = cyclotomic_polynomial(order)
        deg = len(phi) - 1
        c = [Fraction(x) for x in coeffs]
        # reduce modulo the (monic) cyclotomic polynomial
        for k in range(len(c) - 1, deg - 1, -1):
            lead = c[k]
            if lead:
                for j in range(deg + 1):
                    c[k - deg + j] -= lead * phi[j]
        c = c[:deg] + [Fraction(0)] * (deg - len(c))
        self.coeffs = tuple(c)

    @classmethod
    def zeta(cls, order, power=1):
        power %= order
        c = [0] * (power + 1)
        c[power] = 1
        return cls(order, c)

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.order != self.order:
                raise ValueError("mixing cyclotomic fields %d and %d" % (self.order, other.order))
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.order, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.order, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return Cyclotomic(self.order, prod)

    __rmul__ = __mul__

    def _mult_matrix(self):
        deg = len(self.coeffs)
        cols = []
        for j in range(deg):
            basis = [0] * deg
            basis[j] = 1
            cols.append((self * Cyclotomic(self.order, basis)).coeffs)
        return Matrix([[cols[j][i] for j in range(deg)] for i in range(deg)])

    def inverse(self):
        if not self:
            raise ZeroDivisionError("cyclotomic zero")
        deg = len(self.coeffs)
        rhs = [1] + [0] * (deg - 1)
        sol = solve(self._mult_matrix(), Matrix([[x] for x in rhs]))
        return Cyclotomic(self.order, [sol[i, 0] for i in range(deg)])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic(self.order, [1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.coeffs == o.coeffs

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def rational(self):
        """The value as a Fraction, or None when it is irrational."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else "%s*z%d^%d" % (c, self.order, k))
        return " + ".join(terms) if terms else "0"

    def to_json(self):
        return {"cyclotomicOrder": self.order, "coeffs": [str(c) for c in self.coeffs]}


def simplify(x):
    """Collapse a rational cyclotomic value or integral Fraction to a plainer type."""
    if isinstance(x, Cyclotomic):
        r = x.rational()
        if r is None:
            return x
        x = r
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def scalar_to_json(x):
    x = simplify(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    return x.to_json()


# ---------------------------------------------------------------------------
# matrices

class Matrix:
    """Dense immutable matrix with explicit shape (so 0 x n matrices are fine)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols, nrows):
        cols = [tuple(c) for c in cols]
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self):
        return Matrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
                      self.nrows)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        cols = other.T.rows
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([sum((a * c[k] for k, a in nz), 0) for c in cols])
        return Matrix(out, other.ncols)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.ncols)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Matrix([[c * a for a in r] for r in self.rows], self.ncols)

    def map(self, f):
        return Matrix([[f(a) for a in r] for r in self.rows], self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __hash__(self):
        return hash((self.shape, tuple(simplify(a) for r in self.rows for a in r)))

    def is_zero(self):
        return not any(a for r in self.rows for a in r)

    def is_identity(self):
        return self.nrows == self.ncols and self == Matrix.identity(self.nrows)

    def submatrix(self, rows=None, cols=None):
        rows = range(self.nrows) if rows is None else list(rows)
        cols = range(self.ncols) if cols is None else list(cols)
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def hstack(self, *others):
        mats = (self,) + others
        if any(m.nrows != self.nrows for m in mats):
            raise ValueError("row count mismatch in hstack")
        return Matrix([sum((m.rows[i] for m in mats), ()) for i in range(self.nrows)],
                      sum(m.ncols for m in mats))

    def vstack(self, *others):
        mats = (self,) + others
        if any(m.ncols != self.ncols for m in mats):
            raise ValueError("column count mismatch in vstack")
        return Matrix([r for m in mats for r in m.rows], self.ncols)

    def to_json(self):
        return [[scalar_to_json(a) for a in r] for r in self.rows]

    def __repr__(self):
        return "Matrix(%r, ncols=%d)" % ([list(map(simplify, r)) for r in self.rows], self.ncols)


def block_diag(*mats):
    nr = sum(m.nrows for m in mats)
    nc = sum(m.ncols for m in mats)
    out = [[0] * nc for _ in range(nr)]
    r0 = c0 = 0
    for m in mats:
        for i, row in enumerate(m.rows):
            out[r0 + i][c0:c0 + m.ncols] = row
        r0 += m.nrows
        c0 += m.ncols
    return Matrix(out, nc)


def _field(x):
    return Fraction(x) if isinstance(x, int) else x


def rref(A):
    """Reduced row echelon form over the field generated by the entries.

    Returns (R, pivot_columns)."""
    m = [[_field(a) for a in r] for r in A.rows]
    pivots = []
    r = 0
    for c in range(A.ncols):
        p = next((i for i in range(r, A.nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [a * inv for a in m[r]]
        for i in range(A.nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == A.nrows:
            break
    return Matrix(m, A.ncols), pivots


def rank(A):
    return len(rref(A)[1])


def kernel_basis(A):
    """Columns spanning the right kernel of A (an ncols x k matrix)."""
    R, piv = rref(A)
    free = [c for c in range(A.ncols) if c not in piv]
    cols = []
    for f in free:
        v = [Fraction(0)] * A.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R[i, f]
        cols.append(v)
    return Matrix.from_columns(cols, A.ncols)


def column_space_basis(A):
    """A subset of the columns of A forming a basis of its image."""
    _, piv = rref(A)
    return A.submatrix(cols=piv)


def cokernel_data(A):
    """Projection P onto coker(A): P @ A == 0, P has full row rank rows(A) - rank(A).

    The rows of P span the left kernel of A, so ker(P) is exactly im(A)."""
    P = kernel_basis(A.T).T
    return P, P.nrows


def subspace_combine(V1, V2, ambient_dim):
    """Dimensions of the sum and intersection of two column spans."""
    if V1.nrows != ambient_dim or V2.nrows != ambient_dim:
        raise ValueError("subspace generators must live in dimension %d" % ambient_dim)
    r1, r2 = rank(V1), rank(V2)
    s = rank(V1.hstack(V2))
    return {"sumDim": s, "intersectionDim": r1 + r2 - s, "codimOfSum": ambient_dim - s}


def intersection_basis(V1, V2):
    """Basis columns of span(V1) & span(V2)."""
    B1, B2 = column_space_basis(V1), column_space_basis(V2)
    K = kernel_basis(B1.hstack(-B2))
    return B1 @ K.submatrix(rows=range(B1.ncols))


def solve(A, B):
    """One solution X of A @ X == B, or None when inconsistent."""
    aug = A.hstack(B)
    R, piv = rref(aug)
    if any(p >= A.ncols for p in piv):
        return None
    X = [[Fraction(0)] * B.ncols for _ in range(A.ncols)]
    for i, p in enumerate(piv):
        for j in range(B.ncols):
            X[p][j] = R[i, A.ncols + j]
    return Matrix(X, B.ncols)


def inverse(A):
    if A.nrows != A.ncols:
        raise ValueError("inverse of a non-square matrix")
    X = solve(A, Matrix.identity(A.nrows))
    if X is None or rank(A) < A.nrows:
        raise ZeroDivisionError("singular matrix")
    return X


# ---------------------------------------------------------------------------
# Smith normal form over Z

def smith_normal_form(A):
    """(U, D, V) with U @ A @ V == D, U and V unimodular, D diagonal.

    Diagonal entries are non-negative and each divides the next.  Pivots are
    chosen with the smallest absolute value, ties broken by lowest (row, col).
    """
    m, n = A.nrows, A.ncols
    D = [[int(a) for a in r] for r in A.rows]
    if any(D[i][j] != A[i, j] for i in range(m) for j in range(n)):
        raise ValueError("smith_normal_form needs an integer matrix")
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for M in (D, V):
            for r in M:
                r[j], r[k] = r[k], r[j]

    def add_row(dst, src, f):  # row_dst += f * row_src
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for M in (D, V):
            for r in M:
                r[dst] += f * r[src]

    t = 0
    while t < min(m, n):
        cands = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not cands:
            break
        _, pi, pj = min(cands)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                cands = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
                cands += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
                _, pi, pj = min(cands)
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1

    U, D, V = Matrix(U, m), Matrix(D, n), Matrix(V, n)
    if not (U @ A @ V) == D:
        raise AssertionError("Smith normal form failed to verify")
    return U, D, V


def invariant_factors(A):
    """Nonzero diagonal of the Smith form of A."""
    _, D, _ = smith_normal_form(A)
    return [D[i, i] for i in range(min(D.nrows, D.ncols)) if D[i, i]]


def abelian_group_of_presentation(rel, ngens):
    """Free rank and torsion of Z^ngens / (column span of rel)."""
    if rel.ncols == 0:
        return ngens, []
    f = invariant_factors(rel)
    return ngens - len(f), [d for d in f if d != 1]

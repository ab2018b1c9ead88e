"""Exact dense linear algebra over prime fields and the rationals.

Everything downstream (presheaf kernels, Hom spaces, Ext groups, homotopy
systems) reduces to rank / nullspace / solve over an exact field, so these
routines are deliberately boring: dense rows, fraction-free never needed,
Gaussian elimination with leftmost pivot and smallest-row tie-breaking so
that every basis is reproducible bit for bit.

Matrices over F_2 get a fast path where rows are stored as Python ints
(one bit per column) and elimination is XOR; this is what keeps the
coherence-lifting suites inside their time budget.
"""

from fractions import Fraction


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """An exact field: F_p for a prime p, or the rationals Q."""

    __slots__ = ("kind", "p")

    def __init__(self, kind, p=None):
        if kind == "prime":
            if not _is_prime(p):
                raise ValueError("modulus %r is not prime" % (p,))
            self.p = p
        elif kind == "rationals":
            self.p = None
        else:
            raise ValueError("unknown field kind %r" % (kind,))
        self.kind = kind

    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "Q" if self.kind == "rationals" else "F_%d" % self.p

    @property
    def zero(self):
        return Fraction(0) if self.kind == "rationals" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "rationals" else 1

    def of_int(self, n):
        """Canonical representative of the integer n in this field."""
        if self.kind == "rationals":
            return Fraction(n)
        return n % self.p

    def add(self, a, b):
        return a + b if self.kind == "rationals" else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.kind == "rationals" else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.kind == "rationals" else (a * b) % self.p

    def neg(self, a):
        return -a if self.kind == "rationals" else (-a) % self.p

    def inv(self, a):
        if self.kind == "rationals":
            if a == 0:
                raise ZeroDivisionError
            return 1 / Fraction(a)
        return pow(a, self.p - 2, self.p)

    def parse(self, s):
        """Parse a scalar from its serialized string form."""
        if self.kind == "rationals":
            return Fraction(s)
        return int(s) % self.p

    def show(self, a):
        if self.kind == "rationals":
            return "%d/%d" % (a.numerator, a.denominator) if a.denominator != 1 else str(a.numerator)
        return str(a)


QQ = Field("rationals")
GF2 = Field("prime", 2)


class Matrix:
    """Immutable dense matrix with exact entries.

    entries is a tuple of row tuples; scalars are ints in [0, p) for F_p
    and Fractions for Q.
    """

    __slots__ = ("field", "rows", "cols", "entries", "_hash")

    def __init__(self, field, rows, cols, entries):
        entries = tuple(tuple(r) for r in entries)
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError("entry grid does not match %dx%d" % (rows, cols))
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._hash = None

    @staticmethod
    def from_rows(field, rows_list):
        r = len(rows_list)
        c = len(rows_list[0]) if r else 0
        ent = [[field.of_int(v) if isinstance(v, int) else v for v in row] for row in rows_list]
        return Matrix(field, r, c, ent)

    @staticmethod
    def zeros(field, rows, cols):
        z = field.zero
        return Matrix(field, rows, cols, [[z] * cols for _ in range(rows)])

    @staticmethod
    def identity(field, n):
        z, o = field.zero, field.one
        return Matrix(field, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows, self.cols, self.entries))
        return self._hash

    def __repr__(self):
        return "Matrix(%r, %d, %d, %r)" % (self.field, self.rows, self.cols,
                                           [list(r) for r in self.entries])

    def is_zero(self):
        z = self.field.zero
        return all(v == z for row in self.entries for v in row)

    def transpose(self):
        return Matrix(self.field, self.cols, self.rows,
                      [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __add__(self, other):
        _check_same_shape(self, other)
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      [[f.add(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        _check_same_shape(self, other)
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      [[f.sub(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      [[f.neg(a) for a in row] for row in self.entries])

    def scale(self, c):
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      [[f.mul(c, a) for a in row] for row in self.entries])

    def __mul__(self, other):
        """Matrix product self * other."""
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError("shape mismatch: %dx%d * %dx%d"
                             % (self.rows, self.cols, other.rows, other.cols))
        f = self.field
        if f.kind == "prime" and f.p == 2:
            bits = _to_bits(other)
            out = []
            for row in self.entries:
                acc = 0
                for a, b in zip(row, bits):
                    if a:
                        acc ^= b
                out.append(acc)
            return _from_bits(f, out, self.rows, other.cols)
        ot = other.transpose().entries
        if f.kind == "rationals":
            rows = [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ot]
                    for r in self.entries]
        else:
            p = f.p
            rows = [[sum(a * b for a, b in zip(r, c)) % p for c in ot]
                    for r in self.entries]
        return Matrix(f, self.rows, other.cols, rows)

    def column(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def submatrix(self, row_range, col_range):
        return Matrix(self.field, len(row_range), len(col_range),
                      [[self.entries[i][j] for j in col_range] for i in row_range])


def _check_same_shape(a, b):
    if a.field != b.field:
        raise ValueError("field mismatch")
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("shape mismatch")


# --- F_2 bitset representation -------------------------------------------

def _to_bits(m):
    """Rows of an F_2 matrix as integers, bit j = column j."""
    out = []
    for row in m.entries:
        acc = 0
        for j, v in enumerate(row):
            if v:
                acc |= 1 << j
        out.append(acc)
    return out

def _from_bits(field, bits, rows, cols):
    return Matrix(field, rows, cols,
                  [[(b >> j) & 1 for j in range(cols)] for b in bits])


def _rref_bits(bits, cols):
    """In-place reduced row echelon over F_2. Returns pivot column list."""
    pivots = []
    r = 0
    nrows = len(bits)
    for c in range(cols):
        mask = 1 << c
        pivot = -1
        for i in range(r, nrows):
            if bits[i] & mask:
                pivot = i
                break
        if pivot < 0:
            continue
        bits[r], bits[pivot] = bits[pivot], bits[r]
        row = bits[r]
        for i in range(nrows):
            if i != r and (bits[i] & mask):
                bits[i] ^= row
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def _rref_generic(rows, cols, field):
    """In-place reduced row echelon form; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    zero = field.zero
    for c in range(cols):
        pivot = -1
        for i in range(r, nrows):
            if rows[i][c] != zero:
                pivot = i
                break
        if pivot < 0:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        if inv != field.one:
            rows[r] = [field.mul(inv, v) for v in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r:
                factor = rows[i][c]
                if factor != zero:
                    rows[i] = [field.sub(a, field.mul(factor, b))
                               for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rref(m):
    """Reduced row echelon form of m; returns (matrix, pivot column tuple)."""
    f = m.field
    if f.kind == "prime" and f.p == 2:
        bits = _to_bits(m)
        pivots = _rref_bits(bits, m.cols)
        return _from_bits(f, bits, m.rows, m.cols), tuple(pivots)
    rows = [list(r) for r in m.entries]
    pivots = _rref_generic(rows, m.cols, f)
    return Matrix(f, m.rows, m.cols, rows), tuple(pivots)


def rank(m):
    f = m.field
    if f.kind == "prime" and f.p == 2:
        bits = _to_bits(m)
        return len(_rref_bits(bits, m.cols))
    rows = [list(r) for r in m.entries]
    return len(_rref_generic(rows, m.cols, f))


def kernel_basis(m):
    """Matrix whose columns are a basis of the right null space of m.

    Deterministic: one column per free column, in increasing column order,
    with the free coordinate set to 1 and pivot coordinates back-filled
    from the reduced echelon form.
    """
    return kernel_basis_and_free(m)[0]


def kernel_basis_and_free(m):
    """kernel_basis together with the free column indices.

    Because basis column k has a 1 at free column k and 0 at every other
    free column, the coordinates of a kernel vector in this basis can be
    read off at the free positions.
    """
    f = m.field
    R, pivots = rref(m)
    pivset = set(pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    z, o = f.zero, f.one
    cols = []
    for fc in free:
        v = [z] * m.cols
        v[fc] = o
        for r, pc in enumerate(pivots):
            # pivot row r reads: x_pc + sum_{free j} R[r][j] x_j = 0
            v[pc] = f.neg(R.entries[r][fc])
        cols.append(v)
    basis = Matrix(f, m.cols, len(cols),
                   [[cols[k][i] for k in range(len(cols))] for i in range(m.cols)])
    return basis, tuple(free)


def image_basis(m):
    """Matrix whose columns are the pivot columns of m (a basis of the image)."""
    _, pivots = rref(m)
    return Matrix(m.field, m.rows, len(pivots),
                  [[m.entries[i][j] for j in pivots] for i in range(m.rows)])


def solve(a, b):
    """Some x with a*x = b, or None.  b may have several columns.

    The particular solution sets all free variables to zero (pivot-ordered),
    so re-running is bit-identical.
    """
    if a.field != b.field:
        raise ValueError("field mismatch")
    if a.rows != b.rows:
        raise ValueError("shape mismatch: a has %d rows, b has %d" % (a.rows, b.rows))
    f = a.field
    n, k = a.cols, b.cols
    aug = Matrix(f, a.rows, n + k,
                 [list(ra) + list(rb) for ra, rb in zip(a.entries, b.entries)])
    R, pivots = rref(aug)
    if any(p >= n for p in pivots):
        return None
    z = f.zero
    x = [[z] * k for _ in range(n)]
    for r, pc in enumerate(pivots):
        for j in range(k):
            x[pc][j] = R.entries[r][n + j]
    return Matrix(f, n, k, x)


def block(field, grid):
    """Assemble a matrix from a 2D grid of matrices (row of column blocks)."""
    if not grid:
        return Matrix.zeros(field, 0, 0)
    rows = []
    for brow in grid:
        if not brow:
            continue
        h = brow[0].rows
        if any(m.rows != h for m in brow):
            raise ValueError("inconsistent block heights")
        for i in range(h):
            row = []
            for m in brow:
                row.extend(m.entries[i])
            rows.append(row)
    width = sum(m.cols for m in grid[0]) if grid[0] else 0
    return Matrix(field, len(rows), width, rows)


def direct_sum(a, b):
    if a.field != b.field:
        raise ValueError("field mismatch")
    f = a.field
    return block(f, [[a, Matrix.zeros(f, a.rows, b.cols)],
                     [Matrix.zeros(f, b.rows, a.cols), b]])


def direct_sum_many(field, mats):
    acc = Matrix.zeros(field, 0, 0)
    for m in mats:
        acc = direct_sum(acc, m)
    return acc


def kronecker_product(a, b):
    if a.field != b.field:
        raise ValueError("field mismatch")
    f = a.field
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            row = []
            for j in range(a.cols):
                aij = a.entries[i][j]
                row.extend(f.mul(aij, v) for v in b.entries[k])
            rows.append(row)
    return Matrix(f, a.rows * b.rows, a.cols * b.cols, rows)


def hstack(field, mats):
    return block(field, [list(mats)]) if mats else Matrix.zeros(field, 0, 0)


def vstack(field, mats):
    return block(field, [[m] for m in mats]) if mats else Matrix.zeros(field, 0, 0)


def flatten_matrix(m):
    """Row-major flattening of m into a single column vector."""
    ent = [[v] for row in m.entries for v in row]
    return Matrix(m.field, m.rows * m.cols, 1, ent)


def unflatten_matrix(field, vec, rows, cols):
    """Inverse of flatten_matrix on a (rows*cols) x 1 column."""
    ent = [[vec.entries[i * cols + j][0] for j in range(cols)] for i in range(rows)]
    return Matrix(field, rows, cols, ent)

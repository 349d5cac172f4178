"""Exact linear algebra over any of the coefficient fields."""

from __future__ import annotations

from .errors import DivisionByZero, SingularSystem


class SquareMatrix:
    """Dense n x n matrix with exact entries; ``rows[i][j]`` is row i, column j."""

    def __init__(self, field, rows):
        self.field = field
        self.rows = tuple(tuple(field(c) for c in row) for row in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("matrix is not square")

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[field.one if i == j else field.zero for j in range(n)]
                           for i in range(n)])

    def __eq__(self, other):
        return isinstance(other, SquareMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"SquareMatrix({[[self.field.format(c) for c in r] for r in self.rows]})"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __sub__(self, other):
        return SquareMatrix(self.field, [[a - b for a, b in zip(r, s)]
                                         for r, s in zip(self.rows, other.rows)])

    def __matmul__(self, other):
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = self.field.zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return SquareMatrix(self.field, out)

    def transpose(self):
        return SquareMatrix(self.field, list(zip(*self.rows)))

    def is_zero(self):
        return all(not c for r in self.rows for c in r)

    def is_identity(self):
        return self == SquareMatrix.identity(self.field, self.n)

    def is_unipotent(self) -> bool:
        """True iff ``(M - I)^n = 0``."""
        n = self.n
        N = self - SquareMatrix.identity(self.field, n)
        P = N
        for _ in range(n - 1):
            if P.is_zero():
                return True
            P = P @ N
        return P.is_zero()

    def determinant(self):
        return determinant(self.field, [list(r) for r in self.rows])

    def inverse(self):
        return SquareMatrix(self.field, inverse(self.field, [list(r) for r in self.rows]))

    def to_json(self):
        return [[self.field.format(c) for c in r] for r in self.rows]


def determinant(field, rows):
    a = [list(r) for r in rows]
    n = len(a)
    det = field.one
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return field.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = field.one / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def solve(field, matrix, rhs):
    """Solve ``matrix @ X = rhs`` where ``rhs`` is a list of row vectors.

    The right-hand side entries may be anything supporting ``+``, ``-`` and
    multiplication by field scalars (polynomials, for example).
    """
    n = len(matrix)
    a = [list(r) for r in matrix]
    b = list(rhs)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise SingularSystem("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        inv = field.one / a[col][col]
        a[col] = [x * inv for x in a[col]]
        b[col] = b[col] * inv
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                b[r] = b[r] - b[col] * f
    return b


def inverse(field, rows):
    n = len(rows)
    ident = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    try:
        sol = _solve_rows(field, rows, ident)
    except SingularSystem:
        raise DivisionByZero("matrix is not invertible") from None
    return sol


def _solve_rows(field, matrix, rhs_rows):
    n = len(matrix)
    a = [list(r) + list(s) for r, s in zip(matrix, rhs_rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise SingularSystem("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = field.one / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def sparse_kernel(field, vectors, order_key=None):
    """Basis of linear relations among sparse vectors.

    ``vectors`` is a list of ``{coordinate: value}`` dicts.  Returns a list of
    ``{vector index: coefficient}`` dicts, each a relation
    ``sum c_i * vectors[i] = 0``, together spanning all relations.
    """
    key = order_key or (lambda k: k)
    pivots = {}
    relations = []
    for idx, vec in enumerate(vectors):
        v = dict(vec)
        combo = {idx: field.one}
        while True:
            hits = [k for k in v if k in pivots]
            if not hits:
                break
            k = max(hits, key=key)
            row, row_combo = pivots[k]
            c = v[k]
            for i, x in row.items():
                s = v.get(i, field.zero) - c * x
                if s:
                    v[i] = s
                else:
                    v.pop(i, None)
            for i, x in row_combo.items():
                s = combo.get(i, field.zero) - c * x
                if s:
                    combo[i] = s
                else:
                    combo.pop(i, None)
        if not v:
            relations.append(combo)
            continue
        k = max(v, key=key)
        inv = field.one / v[k]
        pivots[k] = ({i: x * inv for i, x in v.items()},
                     {i: x * inv for i, x in combo.items()})
    return relations


def rref_rows(field, rows, order_key=None):
    """Reduced row echelon form of sparse rows ``{coordinate: value}``.

    Pivots are the largest coordinate under ``order_key``; pivots are monic and
    cleared from every other row.  Rows are returned sorted by pivot, ascending.
    """
    key = order_key or (lambda k: k)
    basis = {}
    for row in rows:
        v = {k: x for k, x in row.items() if x}
        for p in sorted(basis, key=key, reverse=True):
            if p in v:
                c = v[p]
                for i, x in basis[p].items():
                    s = v.get(i, field.zero) - c * x
                    if s:
                        v[i] = s
                    else:
                        v.pop(i, None)
        if not v:
            continue
        p = max(v, key=key)
        inv = field.one / v[p]
        v = {i: x * inv for i, x in v.items()}
        for q in list(basis):
            if p in basis[q]:
                c = basis[q][p]
                r = dict(basis[q])
                for i, x in v.items():
                    s = r.get(i, field.zero) - c * x
                    if s:
                        r[i] = s
                    else:
                        r.pop(i, None)
                basis[q] = r
        basis[p] = v
    return [basis[p] for p in sorted(basis, key=key)]

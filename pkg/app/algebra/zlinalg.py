"""Exact integer linear algebra: Hermite normal form, kernels, small Diophantine solves"""

from math import gcd
from typing import List, Optional, Sequence, Tuple

try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex

from ..utils.errors import ValidationError


class IntMatrix:
    """Dense integer matrix stored row-major"""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[Sequence[int]] = None):
        if data is None:
            data = [0] * (rows * cols)
        if len(data) != rows * cols:
            raise ValidationError(f"IntMatrix data has {len(data)} entries, expected {rows * cols}")
        self.rows = rows
        self.cols = cols
        self.data = [int(x) for x in data]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValidationError(f"Row {r} does not have {cols} columns")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def row(self, i: int) -> List[int]:
        return self.data[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[List[int]]:
        return [self.row(i) for i in range(self.rows)]

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.data[i * self.cols + j]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.rows
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValidationError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = other.to_rows()
        result = []
        for r in self.to_rows():
            result.append([sum(a * cols[k][j] for k, a in enumerate(r)) for j in range(other.cols)])
        return IntMatrix.from_rows(result, other.cols)

    def nonzero_rows(self) -> "IntMatrix":
        return IntMatrix.from_rows([r for r in self.to_rows() if any(r)], self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(self.data)))

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})"


def _sub_row(rows: List[List[int]], target: int, source: int, q: int):
    src = rows[source]
    rows[target] = [a - q * b for a, b in zip(rows[target], src)]


def hermite_normal_form(M: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """
    Row-style Hermite normal form

    Returns:
        (H, U) with U unimodular and U*M = H; pivots of H are positive,
        entries above a pivot lie in [0, pivot), zero rows come last
    """
    m, n = M.rows, M.cols
    H = M.to_rows()
    U = IntMatrix.identity(m).to_rows()
    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            live = [i for i in range(r, m) if H[i][j]]
            if not live:
                break
            piv = min(live, key=lambda i: (abs(H[i][j]), i))
            H[r], H[piv] = H[piv], H[r]
            U[r], U[piv] = U[piv], U[r]
            cleared = True
            for i in range(r + 1, m):
                if H[i][j]:
                    q = H[i][j] // H[r][j]
                    _sub_row(H, i, r, q)
                    _sub_row(U, i, r, q)
                    if H[i][j]:
                        cleared = False
            if cleared:
                break
        if not H[r][j]:
            continue
        if H[r][j] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][j] // H[r][j]
            if q:
                _sub_row(H, i, r, q)
                _sub_row(U, i, r, q)
        r += 1
    return IntMatrix.from_rows(H, n), IntMatrix.from_rows(U, m)


def row_lattice_basis(rows: Sequence[Sequence[int]], cols: int) -> IntMatrix:
    """HNF basis (nonzero rows only) of the lattice spanned by rows"""
    if not rows:
        return IntMatrix(0, cols)
    H, _ = hermite_normal_form(IntMatrix.from_rows(rows, cols))
    return H.nonzero_rows()


def integer_kernel(M: IntMatrix) -> IntMatrix:
    """
    Z-basis of {s : s * M^T = 0}, returned in Hermite normal form

    Args:
        M: k x n matrix; kernel vectors have length n

    Returns:
        IntMatrix with n columns (possibly zero rows)
    """
    T = M.transpose()
    H, U = hermite_normal_form(T)
    kernel = [U.row(i) for i in range(H.rows) if not any(H.row(i))]
    return row_lattice_basis(kernel, M.cols)


def solve_affine(d_G: int, d_H: int, z_h: int) -> Optional[Tuple[int, int]]:
    """
    Solve m*d_G = n*d_H + z_h

    Returns:
        The solution with minimal |m| (ties towards m >= 0), or None when
        gcd(d_G, d_H) does not divide z_h
    """
    if d_G < 1 or d_H < 1:
        raise ValidationError("solve_affine needs positive d_G and d_H")
    x, y, g = igcdex(d_G, d_H)
    if z_h % g:
        return None
    k = z_h // g
    m0, n0 = x * k, -y * k
    step = d_H // g
    low = m0 % step
    m = low if abs(low) <= abs(low - step) else low - step
    t = (m - m0) // step
    n = n0 + t * (d_G // g)
    return int(m), int(n)


def bezout_vector(values: Sequence[int]) -> Tuple[int, List[int]]:
    """
    gcd of values with coefficients, by iterated extended Euclid

    Returns:
        (g, c) with sum c_i * values_i = g >= 0
    """
    g, coeffs = 0, []
    for v in values:
        x, y, g2 = igcdex(g, v)
        coeffs = [c * x for c in coeffs] + [y]
        g = g2
    return int(g), [int(c) for c in coeffs]


def lattice_hits_last_one(basis: IntMatrix) -> bool:
    """True iff some integer combination of the rows has last coordinate 1"""
    if basis.rows == 0 or basis.cols == 0:
        return False
    H, _ = hermite_normal_form(basis)
    g = 0
    for i in range(H.rows):
        g = gcd(g, H[i, H.cols - 1])
    return g == 1


def lattice_point_with_last_one(basis: IntMatrix) -> Optional[List[int]]:
    """A lattice vector whose last coordinate is 1, or None"""
    if basis.rows == 0 or basis.cols == 0:
        return None
    n = basis.cols
    permuted = [[r[-1]] + r[:-1] for r in basis.to_rows()]
    H, _ = hermite_normal_form(IntMatrix.from_rows(permuted, n))
    first = H.row(0)
    if first[0] != 1:
        return None
    return first[1:] + [first[0]]


def solve_in_lattice(basis: IntMatrix, v: Sequence[int]) -> Optional[List[int]]:
    """
    Coefficients c with c * basis = v, or None if v is not in the row lattice
    """
    if len(v) != basis.cols:
        raise ValidationError(f"Vector has length {len(v)}, lattice lives in Z^{basis.cols}")
    if basis.rows == 0:
        return [] if not any(v) else None
    H, U = hermite_normal_form(basis)
    rest = list(v)
    y = [0] * H.rows
    for i in range(H.rows):
        row = H.row(i)
        pivot = next((j for j, x in enumerate(row) if x), None)
        if pivot is None:
            break
        q, r = divmod(rest[pivot], row[pivot])
        if r:
            return None
        y[i] = q
        rest = [a - q * b for a, b in zip(rest, row)]
    if any(rest):
        return None
    return [sum(y[i] * U[i, j] for i in range(U.rows)) for j in range(U.cols)]


def rref_mod_p(rows: Sequence[Sequence[int]], p: int, cols: int) -> Tuple[List[List[int]], List[int]]:
    """
    Reduced row echelon basis of the F_p-span of rows

    Returns:
        (basis rows, pivot column of each basis row)
    """
    work = [[x % p for x in r] for r in rows]
    basis: List[List[int]] = []
    pivots: List[int] = []
    for j in range(cols):
        piv = next((i for i, r in enumerate(work) if r[j]), None)
        if piv is None:
            continue
        row = work.pop(piv)
        inv = pow(row[j], -1, p)
        row = [(x * inv) % p for x in row]
        for k, r in enumerate(work):
            if r[j]:
                c = r[j]
                work[k] = [(a - c * b) % p for a, b in zip(r, row)]
        for k, r in enumerate(basis):
            if r[j]:
                c = r[j]
                basis[k] = [(a - c * b) % p for a, b in zip(r, row)]
        basis.append(row)
        pivots.append(j)
    return basis, pivots


def reduce_mod_p(v: Sequence[int], basis: Sequence[Sequence[int]], pivots: Sequence[int], p: int) -> Tuple[int, ...]:
    """Canonical representative of v modulo the span of an rref basis"""
    out = [x % p for x in v]
    for row, j in zip(basis, pivots):
        c = out[j]
        if c:
            out = [(a - c * b) % p for a, b in zip(out, row)]
    return tuple(out)

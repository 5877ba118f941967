"""Exact linear algebra over prime fields GF(p).

Everything downstream (modules, hom spaces, Ext groups, exact structures)
reduces to the operations in this module.  Matrices carry their field and are
immutable after construction; all arithmetic is done on reduced residues, so
comparisons are exact equality.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class LinalgError(Exception):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldPrime:
    """The prime field GF(p)."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise LinalgError(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return pow(a, self.p - 2, self.p)


class Matrix:
    """A rows x cols matrix over GF(p), stored as reduced residues.

    Instances are immutable; operations return new matrices.  Vectors are
    columns (shape (n, 1)).
    """

    __slots__ = ("field", "a")

    def __init__(self, field: FieldPrime, data):
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            raise LinalgError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr = np.mod(arr, field.p)
        arr.setflags(write=False)
        self.field = field
        self.a = arr

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, field: FieldPrime, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldPrime, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_columns(cls, field: FieldPrime, rows: int, columns) -> "Matrix":
        cols = list(columns)
        if not cols:
            return cls.zeros(field, rows, 0)
        return cls(field, np.column_stack([np.asarray(c, dtype=np.int64).reshape(rows) for c in cols]))

    # -- basic properties ---------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def is_zero(self) -> bool:
        return not self.a.any()

    def key(self) -> bytes:
        return self.a.shape[0].to_bytes(4, "little") + self.a.shape[1].to_bytes(4, "little") + self.a.tobytes()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __repr__(self) -> str:
        return f"Matrix(GF({self.field.p}), {self.a.tolist()})"

    # -- arithmetic ---------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinalgError(f"shape mismatch in product: {self.a.shape} @ {other.a.shape}")
        return Matrix(self.field, self.a @ other.a)

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, self.a + other.a)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, self.a - other.a)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, -self.a)

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.field, self.a * (c % self.field.p))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.a.T)

    def column(self, j: int) -> "Matrix":
        return Matrix(self.field, self.a[:, j : j + 1])

    def take_columns(self, indices) -> "Matrix":
        idx = list(indices)
        return Matrix(self.field, self.a[:, idx].reshape(self.rows, len(idx)))


def hstack(field: FieldPrime, mats) -> Matrix:
    mats = list(mats)
    if not mats:
        raise LinalgError("hstack of no matrices")
    return Matrix(field, np.hstack([m.a for m in mats]))


def vstack(field: FieldPrime, mats) -> Matrix:
    mats = list(mats)
    if not mats:
        raise LinalgError("vstack of no matrices")
    return Matrix(field, np.vstack([m.a for m in mats]))


def block_diag(field: FieldPrime, mats) -> Matrix:
    mats = list(mats)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Matrix(field, out)


# -- row reduction ----------------------------------------------------


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form of m together with its pivot columns."""
    p = m.field.p
    a = m.a.copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * m.field.inv(int(a[r, c]))) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return Matrix(m.field, a), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Basis of the right null space of m, as columns.

    The basis is the standard one read off the reduced row echelon form (one
    column per free variable, in increasing column order), so it is
    deterministic in the input's column order.
    """
    r, pivots = rref(m)
    p = m.field.p
    free = [c for c in range(m.cols) if c not in pivots]
    cols = []
    for f in free:
        v = np.zeros(m.cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-r.a[i, f]) % p
        cols.append(v)
    return Matrix.from_columns(m.field, m.cols, cols)


def solve_right(a: Matrix, b: Matrix) -> Matrix | None:
    """One solution x of a @ x = b, or None when the system is inconsistent."""
    if a.rows != b.rows:
        raise LinalgError(f"solve_right: row mismatch {a.rows} vs {b.rows}")
    aug = Matrix(a.field, np.hstack([a.a, b.a]))
    r, pivots = rref(aug)
    if any(c >= a.cols for c in pivots):
        return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r.a[i, a.cols :]
    return Matrix(a.field, x)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise LinalgError("inverse of non-square matrix")
    x = solve_right(m, Matrix.identity(m.field, m.rows))
    if x is None:
        raise LinalgError("matrix is singular")
    return x


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def column_space_basis(m: Matrix) -> Matrix:
    """Basis of the column space: the input columns at the rref pivot positions."""
    _, pivots = rref(m)
    return m.take_columns(pivots)


def in_column_space(m: Matrix, v: Matrix) -> bool:
    return solve_right(m, v) is not None


def row_space_contains(a: Matrix, b: Matrix) -> bool:
    """True when every row of b lies in the row space of a."""
    if b.rows == 0:
        return True
    return solve_right(a.transpose(), b.transpose()) is not None


def random_matrix(field: FieldPrime, rows: int, cols: int, rng: np.random.RandomState) -> Matrix:
    return Matrix(field, rng.randint(0, field.p, size=(rows, cols)))


def iterate_subspaces(field: FieldPrime, dim: int, k: int):
    """Yield basis matrices (columns) of every k-dimensional subspace of GF(p)^dim.

    Subspaces are enumerated through their reduced-echelon basis (one matrix
    per subspace), in a fixed deterministic order.
    """
    if k < 0 or k > dim:
        return
    if k == 0:
        yield Matrix.zeros(field, dim, 0)
        return
    p = field.p
    import itertools

    for pivots in itertools.combinations(range(dim), k):
        free_positions = [
            (i, r)
            for i, pc in enumerate(pivots)
            for r in range(pc + 1, dim)
            if r not in pivots
        ]
        nfree = len(free_positions)
        for values in itertools.product(range(p), repeat=nfree):
            basis = np.zeros((dim, k), dtype=np.int64)
            for i, pc in enumerate(pivots):
                basis[pc, i] = 1
            for (i, r), val in zip(free_positions, values):
                basis[r, i] = val
            yield Matrix(field, basis)


def count_subspaces(p: int, dim: int, k: int) -> int:
    """Gaussian binomial coefficient: number of k-dim subspaces of GF(p)^dim."""
    if k < 0 or k > dim:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (dim - i) - 1
        den *= p ** (i + 1) - 1
    return num // den

"""
Linear algebra over prime fields F_p.

Matrices are immutable values holding their entries as int64 residues;
products, ranks, row reduction and inverses go through `galois.GF(p)`
arrays. Reduced row-echelon forms are unique, so ranks, solutions and
inverses are reproducible byte for byte. The batched routines at the
bottom work on plain numpy stacks and back the exhaustive code search.
"""

import logging
from functools import lru_cache
from numbers import Integral
from typing import Optional, Sequence

import galois
import numpy as np

from .config import get_config
from .errors import DimensionError, FieldError, SingularMatrixError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def galois_field(q: int) -> type[galois.FieldArray]:
    return galois.GF(q)


def _plain(a: galois.FieldArray) -> np.ndarray:
    return a.view(np.ndarray).astype(np.int64)


@lru_cache(maxsize=None)
def inverse_table(q: int) -> np.ndarray:
    """Multiplicative inverses modulo q, indexed by residue (entry 0 is 0)."""
    gf = galois_field(q)
    table = np.zeros(q, dtype=np.int64)
    table[1:] = _plain(gf(np.arange(1, q)) ** -1)
    table.setflags(write=False)
    return table


class Field:
    """The prime field F_q."""

    __slots__ = ("q", "gf")

    def __init__(self, q: int):
        limit = get_config().linalg.max_prime
        if isinstance(q, bool) or not isinstance(q, Integral):
            raise FieldError(f"field modulus must be an integer, got {q!r}")
        q = int(q)
        if not 2 <= q <= limit or not galois.is_prime(q):
            raise FieldError(f"field modulus must be a prime in [2, {limit}], got {q}")
        self.q = q
        self.gf = galois_field(q)

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.gf(a) ** -1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("F", self.q))

    def __repr__(self) -> str:
        return f"Field({self.q})"

    def __reduce__(self):
        return (Field, (self.q,))

    def to_dict(self) -> dict:
        return {"q": self.q}


class Mat:
    """An immutable matrix over a prime field."""

    __slots__ = ("field", "_data")

    def __init__(self, field: Field, data):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionError(f"matrix data must be two-dimensional, got shape {arr.shape}")
        arr %= field.q
        arr.setflags(write=False)
        self.field = field
        self._data = arr

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[int]], cols: int = 0) -> "Mat":
        """Build from row lists; `cols` gives the width of a matrix with no rows."""
        if len(rows) == 0:
            return cls(field, np.zeros((0, cols), dtype=np.int64))
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise DimensionError(f"ragged rows: widths {sorted(widths)}")
        return cls(field, rows)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def gf(self) -> galois.FieldArray:
        return self.field.gf(self._data)

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Mat":
        return Mat(self.field, self._data.T)

    def columns(self, index: Sequence[int]) -> "Mat":
        return Mat(self.field, self._data[:, list(index)].reshape(self.rows, len(index)))

    def to_rows(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self._data]

    def __matmul__(self, other: "Mat") -> "Mat":
        _same_field(self, other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if 0 in (self.rows, self.cols, other.cols):
            return Mat.zeros(self.field, self.rows, other.cols)
        return Mat(self.field, _plain(self.gf @ other.gf))

    def __add__(self, other: "Mat") -> "Mat":
        _same_field(self, other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Mat(self.field, _plain(self.gf + other.gf))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Mat)
            and other.field == self.field
            and other.shape == self.shape
            and bool(np.array_equal(other._data, self._data))
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"Mat(q={self.field.q}, {self.to_rows()})"

    def __reduce__(self):
        return (Mat, (self.field, self._data.copy()))


def _same_field(a: Mat, b: Mat) -> None:
    if a.field != b.field:
        raise FieldError(f"field mismatch: F_{a.field.q} and F_{b.field.q}")


def matmul(a: Mat, b: Mat) -> Mat:
    return a @ b


def rref_array(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of an integer array modulo q, plus pivot columns."""
    m = np.array(a, dtype=np.int64) % q
    if m.size == 0:
        return m, []
    reduced = _plain(galois_field(q)(m).row_reduce())
    pivots = [int(np.argmax(row != 0)) for row in reduced if np.any(row)]
    return reduced, pivots


def rref(m: Mat) -> tuple[Mat, list[int]]:
    reduced, pivots = rref_array(m.data, m.field.q)
    return Mat(m.field, reduced), pivots


def rank(m: Mat) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(np.linalg.matrix_rank(m.gf))


def hconcat(ms: Sequence[Mat], rows: Optional[int] = None, field: Optional[Field] = None) -> Mat:
    """Concatenate columns. An empty list needs `rows` and `field` and yields a rows x 0 matrix."""
    if not ms:
        if rows is None or field is None:
            raise DimensionError("hconcat of no matrices needs rows and field")
        return Mat.zeros(field, rows, 0)
    first = ms[0]
    for m in ms[1:]:
        _same_field(first, m)
        if m.rows != first.rows:
            raise DimensionError(f"hconcat row mismatch: {first.rows} and {m.rows}")
    if rows is not None and rows != first.rows:
        raise DimensionError(f"hconcat expected {rows} rows, got {first.rows}")
    return Mat(first.field, np.concatenate([m.data for m in ms], axis=1))


def solve_right(a: Mat, b: Mat) -> Optional[Mat]:
    """
    Solve a·X = b.

    Returns None when the column space of b is not inside that of a.
    Free variables are set to zero.
    """
    _same_field(a, b)
    if a.rows != b.rows:
        raise DimensionError(f"solve_right row mismatch: {a.shape} and {b.shape}")
    q = a.field.q
    aug = np.concatenate([a.data, b.data], axis=1)
    reduced, pivots = rref_array(aug, q)
    if any(p >= a.cols for p in pivots):
        return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for row, col in enumerate(pivots):
        x[col] = reduced[row, a.cols:]
    solution = Mat(a.field, x)
    if get_config().linalg.check_solutions and a @ solution != b:
        raise RuntimeError(f"solve_right re-multiplication mismatch for {a!r}, {b!r}")
    return solution


def invert(a: Mat) -> Mat:
    if a.rows != a.cols:
        raise DimensionError(f"cannot invert non-square {a.shape} matrix")
    if a.rows == 0:
        return a
    try:
        inverse = np.linalg.inv(a.gf)
    except np.linalg.LinAlgError:
        raise SingularMatrixError(f"matrix of order {a.rows} has rank {rank(a)}") from None
    return Mat(a.field, _plain(inverse))


def column_basis(m: Mat) -> Mat:
    """The pivot columns of m: a deterministic basis of its column space."""
    if m.rows == 0 or m.cols == 0:
        return Mat.zeros(m.field, m.rows, 0)
    _, pivots = rref_array(m.data, m.field.q)
    return m.columns(pivots)


def pad_columns(m: Mat, width: int) -> Mat:
    if m.cols > width:
        raise DimensionError(f"cannot pad {m.cols} columns down to {width}")
    if m.cols == width:
        return m
    pad = np.zeros((m.rows, width - m.cols), dtype=np.int64)
    return Mat(m.field, np.concatenate([m.data, pad], axis=1))


def random_matrix(field: Field, rows: int, cols: int, rng: np.random.Generator) -> Mat:
    return Mat(field, rng.integers(0, field.q, size=(rows, cols)))


def random_invertible(field: Field, n: int, rng: np.random.Generator) -> Mat:
    while True:
        m = random_matrix(field, n, n, rng)
        if rank(m) == n:
            return m


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# ==================== Batched elimination ====================


def batch_rref(stack: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Row-reduce every matrix of a (count, rows, cols) stack modulo q.

    Returns the reduced stack and the rank of each matrix. Pivot rows end
    up on top and the remaining rows are zero, exactly as rref_array does
    for a single matrix.
    """
    m = np.array(stack, dtype=np.int64) % q
    if m.ndim != 3:
        raise DimensionError(f"batch_rref expects a 3-d stack, got shape {m.shape}")
    count, rows, cols = m.shape
    ranks = np.zeros(count, dtype=np.int64)
    if count == 0 or rows == 0 or cols == 0:
        return m, ranks
    inv = inverse_table(q)
    row_ids = np.arange(rows)
    for c in range(cols):
        eligible = (m[:, :, c] != 0) & (row_ids[None, :] >= ranks[:, None])
        active = np.flatnonzero(eligible.any(axis=1))
        if active.size == 0:
            continue
        pivot_rows = eligible[active].argmax(axis=1)
        target = ranks[active]
        pivot_vals = m[active, pivot_rows].copy()
        m[active, pivot_rows] = m[active, target]
        pivot_vals = (pivot_vals * inv[pivot_vals[:, c]][:, None]) % q
        m[active, target] = pivot_vals
        factors = m[active, :, c].copy()
        factors[np.arange(active.size), target] = 0
        m[active] = (m[active] - factors[:, :, None] * pivot_vals[:, None, :]) % q
        ranks[active] += 1
    return m, ranks


def batch_rank(stack: np.ndarray, q: int) -> np.ndarray:
    return batch_rref(stack, q)[1]

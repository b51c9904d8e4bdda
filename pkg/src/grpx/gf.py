"""Exact arithmetic and dense linear algebra over small finite fields.

Field elements are plain ints: the element with coefficient vector
``(c_0, ..., c_{e-1})`` over GF(p) is encoded as ``sum c_i * p**i``.  All bulk
work is done on numpy integer arrays holding these codes.  GF(2) matrices
additionally have a bit-packed path (rows as arrays of uint64 words) used for
the large eliminations in the cohomology code.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass

import numpy as np

MAX_ORDER = 1 << 20
_TABLE_LIMIT = 1 << 10


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- polynomials over GF(p), coefficient lists low -> high -------------------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = _poly_trim(a)
    m = _poly_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a = _poly_trim(a)
    return a


def _poly_mulmod(a, b, m, p):
    out = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_mod(out, m, p)


def _poly_gcd(a, b, p):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(base, n, m, p):
    result = [1]
    base = _poly_mod(base, m, p)
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        n >>= 1
    return result


def is_irreducible_poly(poly, p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p) (coefficients low -> high)."""
    poly = _poly_trim(poly)
    e = len(poly) - 1
    if e < 1:
        return False
    if e == 1:
        return True
    for k in range(1, e // 2 + 1):
        xq = _poly_powmod([0, 1], p ** k, poly, p)
        xq = xq + [0] * max(0, 2 - len(xq))
        xq[1] = (xq[1] - 1) % p
        if len(_poly_gcd(poly, xq, p)) > 1:
            return False
    return True


def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Least monic irreducible of degree e, ordering by the base-p code of
    the non-leading coefficients."""
    for code in range(p ** e):
        coeffs = [(code // p ** i) % p for i in range(e)]
        if e > 1 and coeffs[0] == 0:
            continue
        poly = coeffs + [1]
        if is_irreducible_poly(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {e} over GF({p})")


# -- fields ------------------------------------------------------------------

class FieldSpec:
    """GF(p^e) with a fixed defining polynomial.

    Use :func:`GF` to obtain the shared instance for a given (p, e).
    """

    def __init__(self, p: int, e: int = 1, poly=None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if e < 1 or p ** e > MAX_ORDER:
            raise FieldError(f"unsupported field order {p}^{e}")
        self.p = p
        self.e = e
        self.q = p ** e
        if poly is None:
            poly = least_irreducible(p, e) if e > 1 else (0, 1)
        poly = tuple(int(c) % p for c in poly)
        if len(poly) != e + 1 or poly[-1] != 1 or (e > 1 and not is_irreducible_poly(poly, p)):
            raise FieldError(f"defining polynomial {poly} is not monic irreducible of degree {e}")
        self.poly = poly
        q = self.q
        self.digits = np.array([[(a // p ** i) % p for i in range(e)] for a in range(q)],
                               dtype=np.int64) if q <= MAX_ORDER else None
        self.powers = np.array([p ** i for i in range(e)], dtype=np.int64)
        self._build_log_tables()
        if q <= _TABLE_LIMIT:
            idx = np.arange(q)
            self.add_table = self._add_slow(idx[:, None], idx[None, :])
            self.mul_table = self._mul_slow(idx[:, None], idx[None, :])
        else:
            self.add_table = self.mul_table = None
        self.neg_table = self._neg_slow(np.arange(q))
        inv = np.zeros(q, dtype=np.int64)
        nz = np.arange(1, q)
        inv[nz] = self.exp[(-self.log[nz]) % (q - 1)]
        self.inv_table = inv

    # construction helpers
    def _mul_poly_codes(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da = [(a // p ** i) % p for i in range(e)]
        db = [(b // p ** i) % p for i in range(e)]
        prod = [0] * (2 * e)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        r = _poly_mod([c % p for c in prod], list(self.poly), p) if e > 1 else [prod[0] % p]
        return sum(c * p ** i for i, c in enumerate(r))

    def _build_log_tables(self):
        q = self.q
        if q == 2:
            self.primitive = 1
            self.exp = np.array([1, 1], dtype=np.int64)
            self.log = np.array([0, 0], dtype=np.int64)
            return
        order = q - 1
        for g in range(2, q) if self.e == 1 else range(self.p, q):
            exp = [1]
            x = 1
            for _ in range(order - 1):
                x = self._mul_poly_codes(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == order:
                break
        else:  # pragma: no cover - every finite field has a primitive element
            raise FieldError("no primitive element found")
        self.primitive = g
        self.exp = np.array(exp + exp, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[np.array(exp)] = np.arange(order)
        self.log = log

    def _add_slow(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.e == 1:
            return (a + b) % self.p
        return ((self.digits[a] + self.digits[b]) % self.p) @ self.powers

    def _neg_slow(self, a):
        if self.p == 2:
            return a.copy()
        if self.e == 1:
            return (-a) % self.p
        return ((-self.digits[a]) % self.p) @ self.powers

    def _mul_slow(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    # vectorized arithmetic on code arrays
    def add(self, a, b):
        if self.e == 1:
            return np.bitwise_xor(a, b) if self.p == 2 else (np.asarray(a) + b) % self.p
        if self.add_table is not None:
            return self.add_table[a, b]
        return self._add_slow(np.asarray(a), np.asarray(b))

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg_table[b])

    def mul(self, a, b):
        if self.e == 1:
            return (np.asarray(a) * b) % self.p
        if self.mul_table is not None:
            return self.mul_table[a, b]
        return self._mul_slow(a, b)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + str(self))
        return self.inv_table[a]

    def power(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n > 0 else 1
        return int(self.exp[(int(self.log[a]) * n) % (self.q - 1)])

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, int(code) % self.q if self.e == 1 else int(code))

    def root_of_unity(self, n: int) -> int:
        """A primitive n-th root of unity (requires n | q-1)."""
        if (self.q - 1) % n:
            raise FieldError(f"GF({self.q}) has no primitive {n}-th root of unity")
        return int(self.exp[(self.q - 1) // n]) if self.q > 2 else 1

    def subfield_elements(self, f: int) -> np.ndarray:
        """Codes of the subfield GF(p^f) (f | e)."""
        if self.e % f:
            raise FieldError(f"{f} does not divide {self.e}")
        qf = self.p ** f
        if qf == 2:
            return np.array([0, 1])
        step = (self.q - 1) // (qf - 1)
        return np.concatenate([[0], self.exp[np.arange(0, self.q - 1, step)]])

    def frobenius(self, a, k: int = 1):
        """a -> a^(p^k), vectorized."""
        a = np.asarray(a)
        out = self.exp[(self.log[a] * self.p ** k) % (self.q - 1)] if self.q > 2 else a
        return np.where(a == 0, 0, out)

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (GF, (self.p, self.e))


@functools.lru_cache(maxsize=None)
def GF(p: int, e: int = 1) -> FieldSpec:
    """Shared field instance with the canonical defining polynomial."""
    return FieldSpec(p, e)


def field_of_order(q: int) -> FieldSpec:
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            n = q
            while n % p == 0:
                n //= p
                e += 1
            if n != 1 or not is_prime(p):
                raise FieldError(f"{q} is not a prime power")
            return GF(p, e)
    raise FieldError(f"{q} is not a prime power")


@dataclass(frozen=True)
class FieldElement:
    """A single field element; convenient for scalar code and tests."""
    field: FieldSpec
    code: int

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("field mismatch")
            return other.code
        return int(other) % self.field.p if self.field.e == 1 else int(other)

    def __add__(self, other):
        return FieldElement(self.field, int(self.field.add(self.code, self._coerce(other))))

    def __sub__(self, other):
        return FieldElement(self.field, int(self.field.sub(self.code, self._coerce(other))))

    def __mul__(self, other):
        return FieldElement(self.field, int(self.field.mul(self.code, self._coerce(other))))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg(self.code)))

    def inverse(self):
        return FieldElement(self.field, int(self.field.inv(self.code)))

    def __truediv__(self, other):
        return self * FieldElement(self.field, self._coerce(other)).inverse()

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.power(self.code, n))

    @property
    def coefficients(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.field.digits[self.code])

    def __int__(self):
        return self.code


# -- matrices ----------------------------------------------------------------

class Matrix:
    """Immutable dense matrix over a FieldSpec."""

    __slots__ = ("field", "a", "_key")

    def __init__(self, field: FieldSpec, data):
        a = np.array(data, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        if a.size and (a.min() < 0 or a.max() >= field.q):
            raise FieldError(f"entries out of range for {field}")
        a.setflags(write=False)
        self.field = field
        self.a = a
        self._key = None

    @classmethod
    def _wrap(cls, field, a):
        m = cls.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.int64)
        a.setflags(write=False)
        m.field = field
        m.a = a
        m._key = None
        return m

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls._wrap(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zero(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls._wrap(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def scalar(cls, field: FieldSpec, n: int, c: int) -> "Matrix":
        return cls._wrap(field, np.eye(n, dtype=np.int64) * int(c))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.a.astype(np.int32).tobytes()
        return self._key

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.field is self.field
                and other.shape == self.shape and other.key() == self.key())

    def __hash__(self):
        return hash((self.shape, self.key()))

    def __repr__(self):
        return f"Matrix({self.field}, {self.a.tolist()})"

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_same(self, other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._wrap(self.field, self.field.add(self.a, other.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        _check_same(self, other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._wrap(self.field, self.field.sub(self.a, other.a))

    def scale(self, c: int) -> "Matrix":
        return Matrix._wrap(self.field, self.field.mul(self.a, int(c)))

    def transpose(self) -> "Matrix":
        return Matrix._wrap(self.field, self.a.T)

    T = property(transpose)

    def inverse(self) -> "Matrix":
        return mat_inv(self)

    def __pow__(self, n: int) -> "Matrix":
        if n < 0:
            return self.inverse() ** (-n)
        result = Matrix.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return self.rows == self.cols and np.array_equal(self.a, np.eye(self.rows, dtype=np.int64))

    def rank(self) -> int:
        return rref(self)[1]

    def to_text(self) -> str:
        lines = [f"matrix {self.rows} {self.cols} over {self.field.p}^{self.field.e}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.a]
        return "\n".join(lines) + "\n"


def _check_same(a: Matrix, b: Matrix):
    if a.field is not b.field:
        raise FieldError(f"field mismatch: {a.field} vs {b.field}")


_MATRIX_HEADER = re.compile(r"^\s*matrix\s+(\d+)\s+(\d+)\s+over\s+(\d+)\^(\d+)\s*$")


def parse_matrix(text: str, start: int = 0):
    """Parse one matrix block; returns (Matrix, next line index)."""
    lines = text.splitlines() if isinstance(text, str) else text
    i = start
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines):
        raise ValueError("expected matrix header, got end of input")
    m = _MATRIX_HEADER.match(lines[i])
    if not m:
        raise ValueError(f"line {i + 1}: expected 'matrix <rows> <cols> over <p>^<e>'")
    rows, cols, p, e = map(int, m.groups())
    field = GF(p, e)
    data = []
    for r in range(rows):
        i += 1
        if i >= len(lines):
            raise ValueError(f"line {i + 1}: matrix truncated")
        vals = [int(x) for x in lines[i].split()]
        if len(vals) != cols:
            raise ValueError(f"line {i + 1}: expected {cols} entries, got {len(vals)}")
        data.append(vals)
    a = np.array(data, dtype=np.int64).reshape(rows, cols)
    return Matrix(field, a), i + 1


# -- products ------------------------------------------------------------------

def _prime_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[1]
    if n * (p - 1) ** 2 < (1 << 52):
        return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % p
    return (a.astype(object) @ b.astype(object)).astype(np.int64) % p


@functools.lru_cache(maxsize=None)
def _reduction_table(field: FieldSpec) -> np.ndarray:
    """Row t: digits of x^t reduced mod the defining polynomial, t < 2e-1."""
    p, e = field.p, field.e
    out = []
    for t in range(2 * e - 1):
        mono = [0] * t + [1]
        r = _poly_mod(mono, list(field.poly), p)
        out.append(r + [0] * (e - len(r)))
    return np.array(out, dtype=np.int64)


def array_matmul(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of code arrays (last axis of a against first of b)."""
    p, e = field.p, field.e
    if e == 1:
        return _prime_matmul(a, b, p)
    da = field.digits[a]
    db = field.digits[b]
    layers = [None] * (2 * e - 1)
    for i in range(e):
        for j in range(e):
            prod = _prime_matmul(da[..., i], db[..., j], p)
            layers[i + j] = prod if layers[i + j] is None else layers[i + j] + prod
    red = _reduction_table(field)
    out = np.zeros(layers[0].shape, dtype=np.int64)
    for k in range(e):
        acc = np.zeros(layers[0].shape, dtype=np.int64)
        for t in range(2 * e - 1):
            if red[t, k]:
                acc = acc + red[t, k] * (layers[t] % p)
        out = out + (acc % p) * p ** k
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Standard matrix product."""
    _check_same(a, b)
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return Matrix._wrap(a.field, array_matmul(a.field, a.a, b.a))


def vec_mat(field: FieldSpec, v: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Row vector(s) times matrix; v may be 1-d or a stack of rows."""
    v = np.asarray(v, dtype=np.int64)
    if v.ndim == 1:
        return array_matmul(field, v[None, :], m)[0]
    return array_matmul(field, v, m)


# -- elimination ---------------------------------------------------------------

def _rref_array(field: FieldSpec, m: np.ndarray, max_rank=None):
    m = np.array(m, dtype=np.int64, copy=True)
    rows, cols = m.shape
    pivots = []
    r = 0
    p = field.p
    prime = field.e == 1
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        lead = int(m[r, c])
        if lead != 1:
            m[r] = field.mul(m[r], int(field.inv(lead)))
        col = m[:, c].copy()
        col[r] = 0
        others = np.nonzero(col)[0]
        if others.size:
            if prime:
                m[others] = (m[others] - np.outer(col[others], m[r])) % p
            else:
                m[others] = field.sub(m[others], field.mul(col[others][:, None], m[r][None, :]))
        pivots.append(c)
        r += 1
        if max_rank is not None and r >= max_rank:
            break
    return m, r, pivots


def rref(m: Matrix):
    """Reduced row echelon form: returns (Matrix, rank, pivot columns)."""
    if m.field.q == 2 and m.rows * m.cols > 4096:
        e, r, piv = gf2_rref(m.a)
        return Matrix._wrap(m.field, e), r, piv
    e, r, piv = _rref_array(m.field, m.a)
    return Matrix._wrap(m.field, e), r, piv


def row_space(field: FieldSpec, vectors) -> np.ndarray:
    """Echelon basis (as rows) of the span of the given row vectors."""
    v = np.asarray(vectors, dtype=np.int64)
    if v.size == 0:
        return np.zeros((0, v.shape[-1] if v.ndim == 2 else 0), dtype=np.int64)
    if field.q == 2 and v.shape[0] * v.shape[1] > 4096:
        e, r, _ = gf2_rref(v)
    else:
        e, r, _ = _rref_array(field, v)
    return e[:r]


def nullspace(m: Matrix) -> list[np.ndarray]:
    """Basis of the right kernel {x : m x = 0}, as a list of vectors."""
    return list(nullspace_array(m.field, m.a))


def nullspace_array(field: FieldSpec, a: np.ndarray) -> np.ndarray:
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    if field.q == 2 and rows * cols > 4096:
        return gf2_nullspace_packed(gf2_pack(a), cols)
    e, r, piv = _rref_array(field, a)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = int(field.neg(e[i, f]))
    return basis


def left_nullspace_array(field: FieldSpec, a: np.ndarray) -> np.ndarray:
    """Rows x with x a = 0."""
    return nullspace_array(field, np.ascontiguousarray(a.T))


def solve_linear(a: Matrix, b) -> np.ndarray | None:
    """Some x with a x = b, or None when the system is inconsistent."""
    field = a.field
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if a.rows != b.size:
        raise ValueError("right-hand side length must equal row count")
    aug = np.concatenate([a.a, b[:, None]], axis=1)
    if field.q == 2 and aug.size > 4096:
        e, r, piv = gf2_rref(aug)
    else:
        e, r, piv = _rref_array(field, aug)
    if piv and piv[-1] == a.cols:
        return None
    x = np.zeros(a.cols, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = e[i, a.cols]
    return x


def mat_inv(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("inverse of non-square matrix")
    n = m.rows
    aug = np.concatenate([m.a, np.eye(n, dtype=np.int64)], axis=1)
    e, r, piv = _rref_array(m.field, aug, max_rank=n)
    if r < n or piv[-1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return Matrix._wrap(m.field, e[:, n:])


def determinant(m: Matrix) -> int:
    field = m.field
    a = np.array(m.a, copy=True)
    n = m.rows
    det = 1
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if nz.size == 0:
            return 0
        piv = c + nz[0]
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            det = int(field.neg(det))
        lead = int(a[c, c])
        det = int(field.mul(det, lead))
        inv = int(field.inv(lead))
        below = a[c + 1:, c]
        idx = np.nonzero(below)[0] + c + 1
        if idx.size:
            factors = field.mul(a[idx, c], inv)
            a[idx] = field.sub(a[idx], field.mul(factors[:, None], a[c][None, :]))
    return det


# -- bit-packed GF(2) ----------------------------------------------------------

def gf2_pack(a: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into rows of little-endian uint64 words."""
    a = np.asarray(a, dtype=np.uint8)
    rows, cols = a.shape
    words = (cols + 63) // 64
    padded = np.zeros((rows, words * 64), dtype=np.uint8)
    padded[:, :cols] = a
    bytes_ = np.packbits(padded, axis=1, bitorder="little")
    return bytes_.view(np.uint64).reshape(rows, words).copy()


def gf2_unpack(packed: np.ndarray, cols: int) -> np.ndarray:
    bits = np.unpackbits(packed.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :cols].astype(np.int64)


def gf2_rref_packed(packed: np.ndarray, cols: int):
    """In-place style elimination on packed rows; returns (rows, rank, pivots)."""
    m = packed.copy()
    rows = m.shape[0]
    r = 0
    pivots = []
    one = np.uint64(1)
    for c in range(cols):
        if r >= rows:
            break
        w, b = divmod(c, 64)
        colbits = (m[r:, w] >> np.uint64(b)) & one
        nz = np.flatnonzero(colbits)
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        hits = np.flatnonzero((m[:, w] >> np.uint64(b)) & one)
        hits = hits[hits != r]
        if hits.size:
            m[hits, w:] ^= m[r, w:]
        pivots.append(c)
        r += 1
    return m, r, pivots


def gf2_rref(a: np.ndarray):
    packed = gf2_pack(a)
    m, r, piv = gf2_rref_packed(packed, a.shape[1])
    return gf2_unpack(m, a.shape[1]), r, piv


def gf2_nullspace_packed(packed: np.ndarray, cols: int) -> np.ndarray:
    """Right kernel of a packed 0/1 matrix, as int64 rows."""
    m, r, piv = gf2_rref_packed(packed, cols)
    ech = np.unpackbits(m[:r].view(np.uint8), axis=1, bitorder="little")[:, :cols] if r else np.zeros((0, cols), np.uint8)
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    if free:
        basis[np.arange(len(free)), free] = 1
        if r:
            basis[:, piv] = ech[:, free].T
    return basis


def gf2_matmul_packed(a: np.ndarray, b_packed: np.ndarray) -> np.ndarray:
    """(0/1 matrix a) times packed b, result packed: XOR of selected rows."""
    out = np.zeros((a.shape[0], b_packed.shape[1]), dtype=np.uint64)
    for k in range(a.shape[1]):
        sel = np.flatnonzero(a[:, k])
        if sel.size:
            out[sel] ^= b_packed[k]
    return out


# -- misc helpers ----------------------------------------------------------------

def all_vectors(field: FieldSpec, dim: int):
    """Iterate over every vector of field^dim (small cases only)."""
    for t in itertools.product(range(field.q), repeat=dim):
        yield np.array(t, dtype=np.int64)


def normalize_projective(field: FieldSpec, a: np.ndarray):
    """Scale so that the first nonzero entry is 1. Returns (scaled, scalar used)."""
    flat = a.reshape(-1)
    nz = np.flatnonzero(flat)
    if nz.size == 0:
        return a, 1
    lead = int(flat[nz[0]])
    if lead == 1:
        return a, 1
    inv = int(field.inv(lead))
    return field.mul(a, inv), inv

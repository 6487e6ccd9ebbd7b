"""Exact linear algebra over the Gaussian rationals.

Everything downstream (representation theory, kinematic-term analysis,
operator algebra) runs on the two types defined here: ``Scalar``, a complex
number with ``fractions.Fraction`` real and imaginary parts, and
``ExactMatrix``, an immutable dense matrix of scalars.  No floating point
enters except in ``antisym_eigensplit``, which may return float magnitudes
for certified-irrational eigenvalues.
"""

from __future__ import annotations

import enum
import json
import math
from fractions import Fraction

__all__ = [
    "DimensionError",
    "Scalar",
    "ExactMatrix",
    "SymmetryClass",
    "symmetry_decompose",
    "kernel",
    "antisym_eigensplit",
    "hermitian_signature",
]


class DimensionError(ValueError):
    """Shapes do not line up for the requested operation."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class Scalar:
    """A Gaussian rational: exact rational real and imaginary parts.

    The text form is ``a/b`` for real values and ``a/b+c/di`` (or ``-``)
    otherwise, e.g. ``-1/2``, ``0+1i``, ``3/4-2i``.  ``str`` emits the
    canonical form; ``parse`` additionally tolerates spaces around the
    central sign and a bare imaginary part like ``2i`` or ``-i``.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def parse(text: str) -> "Scalar":
        t = text.strip().replace(" ", "")
        if not t:
            raise ValueError("empty scalar literal")
        if not t.endswith("i"):
            return Scalar(Fraction(t))
        body = t[:-1]
        # Find the sign separating the real part from the imaginary part.
        # Signs at position 0 or right after '/' belong to a single number.
        split = None
        for idx in range(len(body) - 1, 0, -1):
            if body[idx] in "+-" and body[idx - 1] not in "/+-":
                split = idx
                break
        if split is None:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:split], body[split:]
        if im_part in ("", "+"):
            im = Fraction(1)
        elif im_part == "-":
            im = Fraction(-1)
        else:
            im = Fraction(im_part)
        return Scalar(Fraction(re_part), im)

    @staticmethod
    def coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(value)
        if isinstance(value, str):
            return Scalar.parse(value)
        raise TypeError(f"cannot interpret {value!r} as a scalar")

    # -- arithmetic ---------------------------------------------------

    def _binary(self, other):
        try:
            return Scalar.coerce(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return Scalar(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        # real factors are the common case; skip the vanishing cross terms
        if not self.im:
            return Scalar(self.re * o.re, self.re * o.im)
        if not o.im:
            return Scalar(self.re * o.re, self.im * o.re)
        return Scalar(self.re * o.re - self.im * o.im,
                      self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("scalar division by zero")
        return Scalar((self.re * o.re + self.im * o.im) / d,
                      (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    # -- structure ----------------------------------------------------

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    @property
    def is_imaginary(self) -> bool:
        """Purely imaginary (zero real part; zero counts)."""
        return self.re == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self):
        return f"Scalar('{self}')"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


class SymmetryClass(enum.Enum):
    ZERO = "Zero"
    SYMMETRIC = "Symmetric"
    ANTISYMMETRIC = "Antisymmetric"
    MIXED = "Mixed"

    def __str__(self):
        return self.value


class ExactMatrix:
    """Immutable dense matrix of ``Scalar`` entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows):
        data = tuple(tuple(Scalar.coerce(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise DimensionError("matrix needs at least one row and column")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise DimensionError("ragged rows")
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "_data", data)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int | None = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        return ExactMatrix([[ZERO] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix([[ONE if i == j else ZERO for j in range(n)]
                            for i in range(n)])

    @staticmethod
    def diagonal(values) -> "ExactMatrix":
        vals = [Scalar.coerce(v) for v in values]
        n = len(vals)
        return ExactMatrix([[vals[i] if i == j else ZERO for j in range(n)]
                            for i in range(n)])

    @staticmethod
    def from_columns(columns) -> "ExactMatrix":
        cols = [list(c) for c in columns]
        return ExactMatrix([[cols[j][i] for j in range(len(cols))]
                            for i in range(len(cols[0]))])

    @staticmethod
    def block(grid) -> "ExactMatrix":
        """Assemble from a 2-D grid of matrices with matching edges."""
        row_chunks = []
        for band in grid:
            height = band[0].rows
            if any(m.rows != height for m in band):
                raise DimensionError("block row heights differ")
            for i in range(height):
                row = []
                for m in band:
                    row.extend(m._data[i])
                row_chunks.append(row)
        return ExactMatrix(row_chunks)

    @staticmethod
    def kron(a: "ExactMatrix", b: "ExactMatrix") -> "ExactMatrix":
        out = []
        for i in range(a.rows):
            for k in range(b.rows):
                row = []
                for j in range(a.cols):
                    aij = a[i, j]
                    row.extend(aij * b[k, l] for l in range(b.cols))
                out.append(row)
        return ExactMatrix(out)

    @staticmethod
    def from_nested(nested) -> "ExactMatrix":
        return ExactMatrix(nested)

    @staticmethod
    def loads(text: str) -> "ExactMatrix":
        """Parse the serialized form: a JSON nested array of scalar strings."""
        try:
            nested = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"matrix text is not valid JSON: {exc}") from exc
        if not isinstance(nested, list) or not all(isinstance(r, list) for r in nested):
            raise ValueError("matrix JSON must be a nested array")
        return ExactMatrix(nested)

    def dumps(self) -> str:
        return json.dumps(self.to_nested_strings())

    def to_nested_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self._data]

    # -- access -------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key) -> Scalar:
        i, j = key
        return self._data[i][j]

    def row(self, i: int) -> tuple[Scalar, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Scalar, ...]:
        return tuple(row[j] for row in self._data)

    def submatrix(self, row_idx, col_idx) -> "ExactMatrix":
        return ExactMatrix([[self._data[i][j] for j in col_idx] for i in row_idx])

    def principal(self, idx) -> "ExactMatrix":
        return self.submatrix(idx, idx)

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self._data)
        return f"ExactMatrix({self.rows}x{self.cols}: {body})"

    # -- arithmetic ---------------------------------------------------

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._same_shape(other)
        return ExactMatrix([[a + b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self._data, other._data)])

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._same_shape(other)
        return ExactMatrix([[a - b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self._data, other._data)])

    def __neg__(self):
        return ExactMatrix([[-a for a in row] for row in self._data])

    def scale(self, factor) -> "ExactMatrix":
        f = Scalar.coerce(factor)
        return ExactMatrix([[f * a for a in row] for row in self._data])

    def __mul__(self, factor):
        return self.scale(factor)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        # accumulate row by row, skipping zero factors; the matrices here
        # are mostly sparse (band generators, pairing forms) and exact
        # arithmetic is expensive enough to make the skip worthwhile
        out = [[ZERO] * other.cols for _ in range(self.rows)]
        for i, row in enumerate(self._data):
            target = out[i]
            for k, a in enumerate(row):
                if a.is_zero:
                    continue
                for j, b in enumerate(other._data[k]):
                    if not b.is_zero:
                        target[j] = target[j] + a * b
        return ExactMatrix(out)

    def apply(self, vector):
        """Matrix times a vector (any iterable of scalars)."""
        vec = [Scalar.coerce(v) for v in vector]
        if len(vec) != self.cols:
            raise DimensionError("vector length does not match column count")
        return tuple(sum((a * v for a, v in zip(row, vec)), start=ZERO)
                     for row in self._data)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self._data)))

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def conjugate(self) -> "ExactMatrix":
        return ExactMatrix([[a.conjugate() for a in row] for row in self._data])

    def dagger(self) -> "ExactMatrix":
        return self.conjugate().transpose()

    @property
    def H(self) -> "ExactMatrix":
        return self.dagger()

    def trace(self) -> Scalar:
        if not self.is_square:
            raise DimensionError("trace needs a square matrix")
        return sum((self._data[i][i] for i in range(self.rows)), start=ZERO)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return all(a.is_zero for row in self._data for a in row)

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.transpose()

    def is_antisymmetric(self) -> bool:
        return self.is_square and self == -self.transpose()

    def is_hermitian(self) -> bool:
        return self.is_square and self == self.dagger()

    def is_real(self) -> bool:
        return all(a.is_real for row in self._data for a in row)

    def is_imaginary(self) -> bool:
        return all(a.is_imaginary for row in self._data for a in row)

    # -- elimination --------------------------------------------------

    def rref(self) -> tuple["ExactMatrix", tuple[int, ...]]:
        """Reduced row echelon form with leftmost pivot selection."""
        data = [list(row) for row in self._data]
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot_row = None
            for i in range(r, self.rows):
                if not data[i][c].is_zero:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            data[r], data[pivot_row] = data[pivot_row], data[r]
            inv = ONE / data[r][c]
            data[r] = [inv * x for x in data[r]]
            for i in range(self.rows):
                if i != r and not data[i][c].is_zero:
                    f = data[i][c]
                    data[i] = [x - f * y for x, y in zip(data[i], data[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return ExactMatrix(data), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list[tuple[Scalar, ...]]:
        """Basis of the right null space, one vector per free column.

        Each basis vector has a 1 in its free coordinate and the negated
        reduced coefficients in the pivot coordinates, so the result is
        deterministic given the matrix.
        """
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for f in free:
            vec = [ZERO] * self.cols
            vec[f] = ONE
            for r, p in enumerate(pivots):
                vec[p] = -reduced[r, f]
            basis.append(tuple(vec))
        return basis

    def inverse(self) -> "ExactMatrix":
        if not self.is_square:
            raise DimensionError("inverse needs a square matrix")
        n = self.rows
        aug = ExactMatrix([list(self._data[i]) + list(ExactMatrix.identity(n)._data[i])
                           for i in range(n)])
        reduced, pivots = aug.rref()
        if len(pivots) < n or any(p >= n for p in pivots):
            raise ZeroDivisionError("matrix is singular")
        return reduced.submatrix(range(n), range(n, 2 * n))

    def determinant(self) -> Scalar:
        if not self.is_square:
            raise DimensionError("determinant needs a square matrix")
        # Fraction-free would be faster, but charpoly is already exact and
        # these matrices stay small.
        c0 = self.charpoly()[0]
        return c0 if self.rows % 2 == 0 else -c0

    def charpoly(self) -> tuple[Scalar, ...]:
        """Coefficients of det(tI - M), ascending, leading coefficient 1.

        Faddeev-LeVerrier: exact over the scalar field, no pivoting noise.
        """
        if not self.is_square:
            raise DimensionError("charpoly needs a square matrix")
        n = self.rows
        coeffs = [ZERO] * n + [ONE]
        m = ExactMatrix.zeros(n)
        ident = ExactMatrix.identity(n)
        for k in range(1, n + 1):
            m = self @ m + ident.scale(coeffs[n - k + 1])
            coeffs[n - k] = (self @ m).trace() * Scalar(Fraction(-1, k))
        return tuple(coeffs)


# ---------------------------------------------------------------------------
# module-level operations


def symmetry_decompose(m: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix, SymmetryClass]:
    """Split a square matrix into symmetric and antisymmetric parts.

    Returns (sym, antisym, classification).  Classification checks the zero
    matrix first, then pure symmetry, pure antisymmetry, and finally Mixed.
    """
    if not m.is_square:
        raise DimensionError("symmetry decomposition needs a square matrix")
    half = Scalar(Fraction(1, 2))
    mt = m.transpose()
    sym = (m + mt).scale(half)
    anti = (m - mt).scale(half)
    if m.is_zero():
        cls = SymmetryClass.ZERO
    elif anti.is_zero():
        cls = SymmetryClass.SYMMETRIC
    elif sym.is_zero():
        cls = SymmetryClass.ANTISYMMETRIC
    else:
        cls = SymmetryClass.MIXED
    return sym, anti, cls


def kernel(m: ExactMatrix) -> list[tuple[Scalar, ...]]:
    """Exact basis of the right null space (see ExactMatrix.kernel_basis)."""
    return m.kernel_basis()


# -- polynomial machinery for the eigen-pair split -------------------------
# Polynomials are lists of Fractions, ascending powers, trimmed.


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_derive(p: list[Fraction]) -> list[Fraction]:
    return _trim([k * c for k, c in enumerate(p)][1:])


def _poly_eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    q = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        coeff = num[k + len(den) - 1] / den[-1]
        q[k] = coeff
        for j, d in enumerate(den):
            num[k + j] -= coeff * d
    return _trim(q), _trim(num)


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _squarefree_factors(p: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: [(factor, multiplicity)] with factors square-free."""
    out = []
    g = _poly_gcd(p, _poly_derive(p))
    if len(g) <= 1:
        return [(p, 1)]
    w = _poly_divmod(p, g)[0]
    mult = 1
    while len(w) > 1:
        y = _poly_gcd(w, g)
        factor = _poly_divmod(w, y)[0]
        if len(factor) > 1:
            out.append((factor, mult))
        w = y
        g = _poly_divmod(g, y)[0]
        mult += 1
    if len(g) > 1:
        # remaining factor is a perfect power pattern; recurse
        for f, m in _squarefree_factors(g):
            out.append((f, m * mult))
    return out


def _sturm_chain(p: list[Fraction]) -> list[list[Fraction]]:
    chain = [list(p), _poly_derive(p)]
    while len(chain[-1]) > 0 and len(chain[-1]) > 1:
        rem = _poly_divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append([-c for c in rem])
    return [c for c in chain if c]


def _sign_variations(chain, x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _root_bound(p: list[Fraction]) -> Fraction:
    lead = abs(p[-1])
    return Fraction(1) + max(abs(c) for c in p) / lead


def _isolate_real_roots(p: list[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open intervals each holding exactly one root of square-free p."""
    chain = _sturm_chain(p)
    bound = _root_bound(p)
    intervals = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        count = _sign_variations(chain, a) - _sign_variations(chain, b)
        if count == 0:
            continue
        if count == 1:
            intervals.append((a, b))
            continue
        mid = (a + b) / 2
        # nudge off an exact root so interval ends stay sign-definite
        while _poly_eval(p, mid) == 0:
            mid += (b - a) / 64
        stack.append((a, mid))
        stack.append((mid, b))
    intervals.sort()
    return intervals


def _bisect_root(p: list[Fraction], lo: Fraction, hi: Fraction) -> float:
    flo = _poly_eval(p, lo)
    for _ in range(80):
        mid = (lo + hi) / 2
        fmid = _poly_eval(p, mid)
        if fmid == 0:
            return float(mid)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if float(hi - lo) < 1e-14 * max(1.0, abs(float(lo))):
            break
    return float((lo + hi) / 2)


def _divisors(n: int, cap: int = 200000) -> list[int] | None:
    """All positive divisors, or None when n is too composite to enumerate."""
    n = abs(n)
    if n == 0:
        return None
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
        if len(small) + len(large) > cap or d > 2_000_000:
            return None
    return small + large[::-1]


def _rational_roots(p: list[Fraction]) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicities, found exactly and deflated."""
    # scale to integer coefficients
    denom = math.lcm(*[c.denominator for c in p])
    ints = [int(c * denom) for c in p]
    while ints and ints[0] == 0:
        # zero roots are handled by the caller; strip defensively
        ints = ints[1:]
    if not ints:
        return []
    p0 = _divisors(ints[0])
    pl = _divisors(ints[-1])
    if p0 is None or pl is None:
        return []
    candidates = set()
    for a in p0:
        for b in pl:
            candidates.add(Fraction(a, b))
            candidates.add(Fraction(-a, b))
    work = list(p)
    found = []
    for cand in sorted(candidates):
        mult = 0
        while len(work) > 1 and _poly_eval(work, cand) == 0:
            work = _poly_divmod(work, [-cand, Fraction(1)])[0]
            mult += 1
        if mult:
            found.append((cand, mult))
    return found


def antisym_eigensplit(m: ExactMatrix):
    """Eigenvalue magnitudes of a matrix with M^T = -M, as (mu, multiplicity).

    Accepts the two shapes that occur in practice: all entries real (spectrum
    +-i*mu) or all entries purely imaginary (Hermitian case, spectrum +-mu).
    Either way the characteristic polynomial is even in its nonzero part and
    the returned mu are the nonnegative magnitudes, ascending, with the pair
    counted once.  A zero eigenvalue is reported as mu = 0 with its full
    algebraic multiplicity.

    Rational magnitudes come back as Fraction, certified by exact root
    search and deflation.  Irrational ones come back as float (Sturm
    isolation plus bisection, abs error below 1e-12); they are certified
    nonzero because the rational stage already deflated every zero root.
    """
    if not m.is_square:
        raise DimensionError("eigensplit needs a square matrix")
    if not (-m.transpose() == m):
        raise ValueError("matrix must satisfy M^T = -M")
    if not (m.is_real() or m.is_imaginary()):
        raise ValueError("entries must be all real or all purely imaginary")
    hermitian_case = m.is_imaginary() and not m.is_zero()

    coeffs = m.charpoly()
    if any(not c.is_real for c in coeffs):
        raise ValueError("characteristic polynomial is not real")
    p = [c.re for c in coeffs]

    # strip lambda^z
    z = 0
    while p[0] == 0:
        p = p[1:]
        z += 1
    # the remaining polynomial must be even: p(l) = q(l^2)
    if any(c != 0 for c in p[1::2]):
        raise ValueError("spectrum is not symmetric under negation")
    q = p[0::2]

    results = []
    if z:
        results.append((Fraction(0), z))

    for t, mult in _rational_roots(q):
        # real case: t = -mu^2 <= 0; hermitian case: t = +mu^2 >= 0
        signed = -t if not hermitian_case else t
        if signed < 0:
            raise ValueError("eigenvalue pair with impossible sign pattern")
        num, den = signed.numerator, signed.denominator
        root_n, root_d = math.isqrt(num * den), den
        if root_n * root_n == num * den:
            results.append((Fraction(root_n, root_d), mult))
        else:
            results.append((math.sqrt(float(signed)), mult))
        for _ in range(mult):
            q = _poly_divmod(q, [-t, Fraction(1)])[0]

    if len(q) > 1:
        for factor, mult in _squarefree_factors(q):
            for lo, hi in _isolate_real_roots(factor):
                t = _bisect_root(factor, lo, hi)
                mu2 = -t if not hermitian_case else t
                if mu2 <= 0:
                    raise ValueError("irrational eigenvalue with impossible sign")
                results.append((math.sqrt(mu2), mult))

    results.sort(key=lambda pair: float(pair[0]))
    return results


def hermitian_signature(m: ExactMatrix) -> tuple[int, int, int]:
    """Signature (positives, negatives, zeros) of a hermitian matrix.

    A hermitian matrix has only real eigenvalues, so Descartes' rule of
    signs on the characteristic polynomial counts them exactly: the zero
    multiplicity is the power of t dividing the polynomial, and the sign
    variations of the remaining coefficients (of p(t) and p(-t)) give the
    positive and negative counts with no slack.
    """
    if not m.is_hermitian():
        raise ValueError("signature is defined for hermitian matrices only")
    coeffs = []
    for c in m.charpoly():
        if c.im != 0:
            raise ValueError("hermitian matrix produced complex charpoly")
        coeffs.append(c.re)

    zeros = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        zeros += 1

    def variations(seq):
        signs = [1 if c > 0 else -1 for c in seq if c != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    positives = variations(coeffs)
    negatives = variations([c if k % 2 == 0 else -c for k, c in enumerate(coeffs)])
    return positives, negatives, zeros

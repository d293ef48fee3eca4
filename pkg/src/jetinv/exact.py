"""Exact rational scalars, sparse multivariate polynomials, and fraction-free
linear algebra.

Scalars are ``fractions.Fraction`` (aliased ``Rational``): always in lowest
terms, positive denominator, no rounding ever.  A polynomial is a sparse map
from exponent tuples (one entry per variable of its ring) to nonzero rational
coefficients; two polynomials are equal iff they share a variable set and
their term maps agree.  Rank, kernel and determinant over the rationals use
Bareiss fraction-free elimination so intermediate entries stay integral after
row scaling; determinants of matrices with polynomial entries fall back to
division-free Laplace expansion with memoisation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence, Union

Rational = Fraction

Scalar = Union[int, Fraction]


class ResourceLimitError(RuntimeError):
    """A computation would exceed the configured size ceiling."""


def rat(x: Scalar) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def rat_str(x: Fraction) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is 1."""
    x = rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Fraction:
    return Fraction(s.strip())


class PolyRing:
    """An ordered set of variable names; the factory for its polynomials.

    The variable order is the declaration order and fixes the graded
    lexicographic term order used for printing and leading terms.
    """

    __slots__ = ("names", "index")

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.index = {name: i for i, name in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"PolyRing({list(self.names)})"

    def zero(self) -> "SparsePolynomial":
        return SparsePolynomial(self, {})

    def one(self) -> "SparsePolynomial":
        return self.const(1)

    def const(self, c: Scalar) -> "SparsePolynomial":
        c = rat(c)
        if c == 0:
            return self.zero()
        return SparsePolynomial(self, {(0,) * len(self.names): c})

    def var(self, name: str) -> "SparsePolynomial":
        i = self.index[name]
        exp = [0] * len(self.names)
        exp[i] = 1
        return SparsePolynomial(self, {tuple(exp): Fraction(1)})

    def gens(self) -> list["SparsePolynomial"]:
        return [self.var(n) for n in self.names]

    def poly(self, terms: Mapping[tuple[int, ...], Scalar]) -> "SparsePolynomial":
        clean = {}
        for exp, c in terms.items():
            c = rat(c)
            if c == 0:
                continue
            if len(exp) != len(self.names) or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp!r}")
            clean[tuple(exp)] = c
        return SparsePolynomial(self, clean)


def _grlex_key(exp: tuple[int, ...]) -> tuple:
    return (sum(exp), exp)


class SparsePolynomial:
    """Multivariate polynomial with exact rational coefficients.

    Immutable by convention: operations return new instances and never mutate
    ``terms``.  Zero coefficients are never stored.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict[tuple[int, ...], Fraction]):
        self.ring = ring
        self.terms = terms

    # -- ring plumbing -------------------------------------------------

    def _coerce(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            if other.ring != self.ring:
                raise ValueError("variable-set mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented  # type: ignore[return-value]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other) -> "SparsePolynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return SparsePolynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "SparsePolynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SparsePolynomial":
        return (-self) + other

    def __mul__(self, other) -> "SparsePolynomial":
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            if c == 0:
                return self.ring.zero()
            return SparsePolynomial(self.ring, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return SparsePolynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "SparsePolynomial":
        if m < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while m:
            if m & 1:
                result = result * base
            base = base * base if m > 1 else base
            m >>= 1
        return result

    # -- queries -------------------------------------------------------

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        """Greatest term in graded lex order; raises on the zero polynomial."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def normalized(self) -> "SparsePolynomial":
        """Scalar multiple with leading coefficient 1 (zero stays zero)."""
        if not self.terms:
            return self
        _, lc = self.leading_term()
        return self * (1 / lc)

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Exact value at a full rational assignment of the ring variables."""
        vals = []
        for name in self.ring.names:
            if name not in assignment:
                raise KeyError(f"missing variable {name!r}")
            vals.append(rat(assignment[name]))
        total = Fraction(0)
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(vals, exp):
                if e:
                    v *= x**e
            total += v
        return total

    def subs(self, assignment: Mapping[str, "SparsePolynomial | Scalar"]) -> "SparsePolynomial":
        """Substitute polynomials (or scalars) for every variable.

        All polynomial values must share one ring; the result lives there.
        """
        target: PolyRing | None = None
        for v in assignment.values():
            if isinstance(v, SparsePolynomial):
                target = v.ring
                break
        if target is None:
            raise ValueError("subs needs at least one polynomial value")
        vals: list[SparsePolynomial] = []
        for name in self.ring.names:
            if name not in assignment:
                raise KeyError(f"missing variable {name!r}")
            v = assignment[name]
            vals.append(v if isinstance(v, SparsePolynomial) else target.const(v))
        out = target.zero()
        for exp, c in self.terms.items():
            term = target.const(c)
            for val, e in zip(vals, exp):
                if e:
                    term = term * val**e
            out = out + term
        return out

    def term_list(self) -> list[tuple[list[int], str]]:
        """Canonical JSON-ready term list, graded-lex descending."""
        out = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            out.append((list(exp), rat_str(self.terms[exp])))
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[exp]
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.names, exp)
                if e
            ]
            if not factors:
                body = rat_str(c)
            elif c == 1:
                body = "*".join(factors)
            elif c == -1:
                body = "-" + "*".join(factors)
            else:
                body = rat_str(c) + "*" + "*".join(factors)
            parts.append(body)
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    __repr__ = __str__


Coef = Union[Fraction, SparsePolynomial]


class Matrix:
    """Dense matrix over Rational or SparsePolynomial entries.

    rank/kernel_basis/inverse require rational entries; determinant and
    products work over either coefficient ring.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[Coef]]):
        self.data = [list(row) for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise ValueError("ragged rows")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[Fraction(0)] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Coef:
        return self.data[ij[0]][ij[1]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(
            self.data[i][j] == other.data[i][j]
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = None
                for l in range(self.cols):
                    term = self.data[i][l] * other.data[l][j]
                    acc = term if acc is None else acc + term
                row.append(acc if acc is not None else Fraction(0))
            out.append(row)
        return Matrix(out)

    def transpose(self) -> "Matrix":
        return Matrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def is_square(self) -> bool:
        return self.rows == self.cols

    def _rational_rows(self) -> list[list[Fraction]]:
        for row in self.data:
            for x in row:
                if isinstance(x, SparsePolynomial):
                    raise TypeError("operation requires rational entries")
        return [[rat(x) for x in row] for row in self.data]

    def rank(self) -> int:
        ech, pivots, _sign, _scale = _bareiss(self._rational_rows())
        return len(pivots)

    def kernel_basis(self) -> list[list[Fraction]]:
        return kernel_basis(self._rational_rows(), self.cols)

    def det(self) -> Coef:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        if any(isinstance(x, SparsePolynomial) for row in self.data for x in row):
            return _det_laplace(self.data)
        return _det_bareiss(self._rational_rows())

    def inverse(self) -> "Matrix":
        rows = self._rational_rows()
        n = self.rows
        if self.cols != n:
            raise ValueError("inverse of a non-square matrix")
        aug = [rows[i] + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[r], aug[piv] = aug[piv], aug[r]
            pv = aug[r][c]
            aug[r] = [x / pv for x in aug[r]]
            for i in range(n):
                if i != r and aug[i][c] != 0:
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
            r += 1
        return Matrix([row[n:] for row in aug])

    def to_strings(self) -> list[list[str]]:
        return [
            [rat_str(x) if isinstance(x, Fraction) else str(x) for x in row]
            for row in self.data
        ]


# -- fraction-free elimination ------------------------------------------


def _scale_rows_integral(rows: list[list[Fraction]]) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; returns rows and the product of scalings."""
    out = []
    scale = Fraction(1)
    for row in rows:
        l = 1
        for x in row:
            l = l * x.denominator // math.gcd(l, x.denominator)
        scale *= l
        out.append([int(x * l) for x in row])
    return out, scale


def _bareiss(rows: list[list[Fraction]]) -> tuple[list[list[int]], list[int], int, Fraction]:
    """Fraction-free echelon form.

    Returns (integer echelon rows, pivot column list, permutation sign,
    row-scaling product).  The echelon rows below each pivot are zeroed; the
    division by the previous pivot is exact at every step.
    """
    m, scale = _scale_rows_integral(rows)
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: list[int] = []
    sign = 1
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        for i in range(r + 1, nrows):
            mic = m[i][c]
            mrc = m[r][c]
            for j in range(c + 1, ncols):
                m[i][j] = (mrc * m[i][j] - mic * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots, sign, scale


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    frac = [[rat(x) for x in row] for row in rows]
    if not frac:
        return 0
    _, pivots, _, _ = _bareiss(frac)
    return len(pivots)


def kernel_basis(rows: Sequence[Sequence[Scalar]], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right null space {x : M x = 0}, via fraction-free echelon.

    One basis vector per free column, with a 1 in that column; exact back
    substitution on the echelon rows.
    """
    frac = [[rat(x) for x in row] for row in rows]
    if ncols is None:
        if not frac:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(frac[0])
    if not frac:
        return [[Fraction(1 if i == j else 0) for i in range(ncols)] for j in range(ncols)]
    ech, pivots, _, _ = _bareiss(frac)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            p = pivots[r]
            s = Fraction(0)
            for j in range(p + 1, ncols):
                if ech[r][j] and x[j]:
                    s += ech[r][j] * x[j]
            x[p] = -s / ech[r][p]
        basis.append(x)
    return basis


def _det_bareiss(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    ech, pivots, sign, scale = _bareiss(rows)
    if len(pivots) < n:
        return Fraction(0)
    return Fraction(sign) * ech[n - 1][pivots[-1]] / scale


def _det_laplace(data: Sequence[Sequence[Coef]]) -> Coef:
    """Division-free determinant: Laplace along rows, memoised on column sets.

    Valid over any commutative ring; intended for polynomial entries at the
    modest sizes that occur here.
    """
    n = len(data)
    if n == 0:
        return Fraction(1)
    cache: dict[tuple[int, ...], Coef] = {}

    def minor(row: int, cols: tuple[int, ...]) -> Coef:
        if row == n:
            return Fraction(1)
        got = cache.get(cols)
        if got is not None:
            return got
        acc = None
        for idx, c in enumerate(cols):
            x = data[row][c]
            if isinstance(x, Fraction) and x == 0:
                continue
            if isinstance(x, SparsePolynomial) and x.is_zero():
                continue
            rest = cols[:idx] + cols[idx + 1 :]
            sub = minor(row + 1, rest)
            term = x * sub
            if idx % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = Fraction(0)
        cache[cols] = acc
        return acc

    return minor(0, tuple(range(n)))


def solve_unique(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> list[Fraction] | None:
    """Solve M x = b when a solution exists and is unique; None otherwise."""
    m = [[rat(x) for x in row] + [rat(b)] for row, b in zip(rows, rhs)]
    ncols = len(rows[0])
    ech, pivots, _, _ = _bareiss(m)
    if ncols in pivots:
        return None  # inconsistent: pivot in the augmented column
    if len(pivots) < ncols:
        return None  # underdetermined
    x = [Fraction(0)] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        p = pivots[r]
        s = Fraction(ech[r][ncols])
        for j in range(p + 1, ncols):
            s -= ech[r][j] * x[j]
        x[p] = s / ech[r][p]
    return x

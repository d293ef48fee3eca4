"""The embedding of jets into homomorphisms to the truncated symmetric
algebra, the distinguished wedge points, and sparse exterior algebra.

Column s of the embedded matrix collects, over all ordered tuples of nonzero
multi-indices (s_1, ..., s_j) with s_1 + ... + s_j = s, the symmetric product
of the corresponding jet coefficients.  With multiset grouping this puts the
number-of-orderings factor on each product, which is the convention forced by
the worked small cases and preserved by the right-action equivariance law

    phi(compose(gamma, psi)) = phi(gamma) @ group_matrix(psi).

Wedge vectors are kept sparse: a term is a strictly increasing tuple of
positions into the ordered basis of Sym^{<=k} C^n, and every expansion routine
sign-normalizes as it inserts factors.  Dense exterior powers are never built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Matrix, rank, rat, rat_str
from .jets import JetMap, flat_jet, _nonzero
from .symbasis import Exponent, Monomial, SymBasis, sym_basis


def _merge_monomials(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


def _vector_to_sym(vec, n: int) -> dict[Monomial, object]:
    """A vector in C^n as a degree-1 element of the symmetric algebra."""
    out = {}
    for j in range(n):
        if _nonzero(vec[j]):
            out[(j + 1,)] = vec[j]
    return out


def _sym_mul(a: dict, b: dict) -> dict:
    out: dict[Monomial, object] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _merge_monomials(m1, m2)
            term = c1 * c2
            cur = out.get(m)
            val = term if cur is None else cur + term
            if _nonzero(val):
                out[m] = val
            elif cur is not None:
                del out[m]
    return out


@dataclass
class PhiMatrix:
    """Hom(C^{sym<=k}(p), Sym^{<=k} C^n) with columns indexed by the domain basis.

    columns[i] is a sparse map from row position (into the Sym basis of C^n)
    to the coefficient; column i corresponds to domain multi-index col_index[i].
    """

    n: int
    k: int
    p: int
    col_index: list[Exponent]
    columns: list[dict[int, object]]
    basis: SymBasis = field(repr=False)

    def entry(self, row_pos: int, col: int):
        return self.columns[col].get(row_pos, Fraction(0))

    def dense(self) -> Matrix:
        rows = len(self.basis)
        data = [
            [self.columns[c].get(r, Fraction(0)) for c in range(len(self.columns))]
            for r in range(rows)
        ]
        return Matrix(data)

    def submatrix(self, row_positions: list[int], cols: list[int]) -> Matrix:
        return Matrix(
            [[self.columns[c].get(r, Fraction(0)) for c in cols] for r in row_positions]
        )

    def columns_of_degree_at_most(self, d: int) -> list[int]:
        return [i for i, s in enumerate(self.col_index) if sum(s) <= d]


def phi(gamma: JetMap) -> PhiMatrix:
    """Embed a jet as the matrix whose degree-d column sums coefficient
    products over ordered decompositions of d.

    Columns are built by the first-piece recursion
    C_s = gamma_s + sum_{0 < s' < s} gamma_{s'} * C_{s - s'},
    which enumerates ordered tuples exactly once.
    """
    p, n, k = gamma.p, gamma.q, gamma.k
    basis = sym_basis(n, k)
    domain = sym_basis(p, k)
    cols_by_exp: dict[Exponent, dict[Monomial, object]] = {}
    for s in domain.exponents:
        acc: dict[Monomial, object] = {}
        gs = gamma.coeffs.get(s)
        if gs is not None:
            acc = dict(_vector_to_sym(gs, n))
        for s1, vec in gamma.coeffs.items():
            rest = tuple(a - b for a, b in zip(s, s1))
            if any(x < 0 for x in rest) or not any(rest):
                continue
            tail = cols_by_exp.get(rest)
            if not tail:
                continue
            head = _vector_to_sym(vec, n)
            for m, c in _sym_mul(head, tail).items():
                cur = acc.get(m)
                val = c if cur is None else cur + c
                if _nonzero(val):
                    acc[m] = val
                elif cur is not None:
                    del acc[m]
        cols_by_exp[s] = acc
    col_index = list(domain.exponents)
    columns = []
    for s in col_index:
        columns.append({basis.index_of(m): c for m, c in cols_by_exp[s].items()})
    return PhiMatrix(n=n, k=k, p=p, col_index=col_index, columns=columns, basis=basis)


@dataclass
class WedgeVector:
    """Sparse element of the r-th exterior power of Sym^{<=k} C^n.

    Terms map strictly increasing position tuples to rational coefficients;
    the zero vector is the empty map.
    """

    n: int
    k: int
    r: int
    terms: dict[tuple[int, ...], Fraction]

    def basis(self) -> SymBasis:
        return sym_basis(self.n, self.k)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WedgeVector):
            return NotImplemented
        return (
            (self.n, self.k, self.r) == (other.n, other.k, other.r)
            and self.terms == other.terms
        )

    def scaled(self, c: Fraction) -> "WedgeVector":
        if c == 0:
            return WedgeVector(self.n, self.k, self.r, {})
        return WedgeVector(self.n, self.k, self.r, {t: v * c for t, v in self.terms.items()})

    def add(self, other: "WedgeVector") -> "WedgeVector":
        out = dict(self.terms)
        for t, c in other.terms.items():
            s = out.get(t, Fraction(0)) + c
            if s:
                out[t] = s
            else:
                out.pop(t, None)
        return WedgeVector(self.n, self.k, self.r, out)

    def proportional_to(self, other: "WedgeVector") -> Fraction | None:
        """The scalar c with self = c * other, if one exists (None otherwise)."""
        if self.is_zero():
            return Fraction(0)
        if other.is_zero() or set(self.terms) != set(other.terms):
            return None
        t0 = next(iter(self.terms))
        c = self.terms[t0] / other.terms[t0]
        for t, v in self.terms.items():
            if v != c * other.terms[t]:
                return None
        return c

    def to_json(self) -> dict:
        basis = self.basis()
        terms = []
        for t in sorted(self.terms):
            terms.append(
                {
                    "factors": [list(basis.monomial_at(pos)) for pos in t],
                    "coeff": rat_str(self.terms[t]),
                }
            )
        return {"n": self.n, "k": self.k, "r": self.r, "terms": terms}

    @classmethod
    def from_json(cls, obj: dict) -> "WedgeVector":
        n, k, r = int(obj["n"]), int(obj["k"]), int(obj["r"])
        basis = sym_basis(n, k)
        terms = {}
        for item in obj["terms"]:
            pos = tuple(basis.index_of(tuple(f)) for f in item["factors"])
            terms[pos] = rat(Fraction(item["coeff"]))
        return cls(n, k, r, terms)


def _wedge_insert(factors: tuple[int, ...], pos: int) -> tuple[tuple[int, ...], int] | None:
    """Insert a factor position, keeping the tuple strictly increasing.

    Returns (new tuple, sign) or None if the factor already occurs.
    """
    lo = 0
    hi = len(factors)
    while lo < hi:
        mid = (lo + hi) // 2
        if factors[mid] < pos:
            lo = mid + 1
        else:
            hi = mid
    if lo < len(factors) and factors[lo] == pos:
        return None
    sign = -1 if (len(factors) - lo) % 2 else 1
    return factors[:lo] + (pos,) + factors[lo:], sign


def wedge_of_sparse_vectors(
    n: int, k: int, vectors: list[dict[int, Fraction]]
) -> WedgeVector:
    """Exterior product of sparse vectors over the Sym basis, sign-normalized."""
    terms: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
    for vec in vectors:
        nxt: dict[tuple[int, ...], Fraction] = {}
        for factors, c in terms.items():
            for pos, v in vec.items():
                ins = _wedge_insert(factors, pos)
                if ins is None:
                    continue
                newf, sign = ins
                val = nxt.get(newf, Fraction(0)) + c * v * sign
                if val:
                    nxt[newf] = val
                else:
                    nxt.pop(newf, None)
        terms = nxt
        if not terms:
            break
    return WedgeVector(n, k, len(vectors), terms)


def wedge_columns(m: PhiMatrix, column_subset: list[int] | None = None) -> WedgeVector:
    """Exterior product of the selected columns (all columns by default)."""
    cols = list(range(len(m.columns))) if column_subset is None else list(column_subset)
    if len(set(cols)) != len(cols):
        raise ValueError("columns must be distinct")
    vectors = [m.columns[c] for c in cols]
    return wedge_of_sparse_vectors(m.n, m.k, vectors)


def p_point(p: int, k: int) -> WedgeVector:
    """The distinguished wedge point: full column wedge at the flat jet.

    Ambient dimension is n = sym^{<=k}(p); for p = 1 this is the point whose
    special-linear stabilizer is the unipotent reparametrization group.
    """
    return wedge_columns(phi(flat_jet(p, k)))


def in_affine_chart(w: WedgeVector) -> bool:
    """True iff some term uses only degree-1 factors (projection to the top
    cell of the wedge of the linear block is nonzero)."""
    basis = w.basis()
    for t in w.terms:
        if all(basis.degree_of(pos) == 1 for pos in t):
            return True
    return False


def flag_spans(m: PhiMatrix) -> list[list[list[Fraction]]]:
    """For each degree d <= k, a basis of the span of columns of degree <= d.

    Each basis is a list of dense coordinate vectors over the Sym basis.
    Rational matrices only.
    """
    nrows = len(m.basis)
    out = []
    for d in range(1, m.k + 1):
        cols = m.columns_of_degree_at_most(d)
        vectors = []
        for c in cols:
            col = m.columns[c]
            vectors.append([rat(col.get(rpos, Fraction(0))) for rpos in range(nrows)])
        basis_rows = _row_space_basis(vectors)
        out.append(basis_rows)
    return out


def _row_space_basis(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduced independent spanning subset computation via elimination."""
    work = [list(r) for r in rows]
    basis: list[tuple[int, list[Fraction]]] = []  # (pivot column, row)
    for row in work:
        for pcol, prow in basis:
            if row[pcol] != 0:
                f = row[pcol] / prow[pcol]
                row = [a - f * b for a, b in zip(row, prow)]
        lead = next((i for i, x in enumerate(row) if x != 0), None)
        if lead is not None:
            basis.append((lead, row))
    basis.sort(key=lambda t: t[0])
    return [r for _, r in basis]


def span_dims(spans: list[list[list[Fraction]]]) -> list[int]:
    return [len(b) for b in spans]


def same_span(a: list[list[Fraction]], b: list[list[Fraction]]) -> bool:
    """Exact span equality by ranks of the stacked matrices."""
    if not a and not b:
        return True
    ra = rank(a) if a else 0
    rb = rank(b) if b else 0
    rab = rank(a + b) if (a or b) else 0
    return ra == rb == rab


# -- induced group actions -------------------------------------------------


def sym_image_of_monomial(g: Matrix, m: Monomial, n: int) -> dict[Monomial, object]:
    """Image of a basis monomial under the multiplicative action of g on C^n.

    g acts by columns: e_j maps to sum_i g[i][j] e_i, extended as an algebra
    map to products of letters.
    """
    out: dict[Monomial, object] = {(): Fraction(1)}
    for letter in m:
        img: dict[Monomial, object] = {}
        for i in range(n):
            if _nonzero(g.data[i][letter - 1]):
                img[(i + 1,)] = g.data[i][letter - 1]
        out = _sym_mul(out, img)
    return out


def apply_group_to_wedge(g: Matrix, w: WedgeVector) -> WedgeVector:
    """Natural action of g in GL(n) on the wedge, factor by factor."""
    basis = w.basis()
    if g.rows != w.n or g.cols != w.n:
        raise ValueError("matrix size must match the ambient dimension")
    image_cache: dict[int, dict[int, Fraction]] = {}

    def factor_image(pos: int) -> dict[int, Fraction]:
        got = image_cache.get(pos)
        if got is None:
            mono = basis.monomial_at(pos)
            img = sym_image_of_monomial(g, mono, w.n)
            got = {basis.index_of(m): c for m, c in img.items()}
            image_cache[pos] = got
        return got

    total = WedgeVector(w.n, w.k, w.r, {})
    for factors, coeff in w.terms.items():
        piece = wedge_of_sparse_vectors(w.n, w.k, [factor_image(pos) for pos in factors])
        total = total.add(piece.scaled(coeff))
    return total


def sym_matrix_of(g: Matrix, n: int, k: int) -> Matrix:
    """Dense matrix of the induced action on Sym^{<=k} C^n (columns = images)."""
    basis = sym_basis(n, k)
    size = len(basis)
    data = [[Fraction(0)] * size for _ in range(size)]
    for col, mono in enumerate(basis.monomials):
        img = sym_image_of_monomial(g, mono, n)
        for m, c in img.items():
            data[basis.index_of(m)][col] = c
    return Matrix(data)

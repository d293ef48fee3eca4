"""One-parameter-subgroup degenerations of the distinguished orbit, limit
stabilizers, infinitesimal stabilizer dimensions, and the torus
Hilbert-Mumford criterion.

Weights live in Q + Q*eps with eps an infinitesimal positive formal symbol,
ordered lexicographically; this is the exact small-eps limit of the "fix
0 < eps < 1" convention and removes all genericity tuning.  The projective
limit of a wedge point under a diagonal one-parameter subgroup is its
minimal-total-weight part, computed by brute force over the expanded terms;
the per-degree closed forms are then verified against that limit rather than
assumed.

Twist reduction (used for stabilizers of w tensor e_1^K and its p > 1
analogue): in the equation X.(w ox e_1^K) = 0, the tensor slots that acquire
a factor e_i with i > 1 are linearly independent across slots, which forces
X e_1 = c e_1 and X w = -K c w with a single scalar unknown c; for the
wedge-line twist the constraint becomes X-invariance of span(e_1..e_p) with
c the trace of X on that span.  The reduction is cross-checked against a
full tensor expansion at small sizes in the test suite before reliance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .exact import (
    Matrix,
    PolyRing,
    ResourceLimitError,
    SparsePolynomial,
    kernel_basis,
    rank,
    rat,
    rat_str,
)
from .embedding import WedgeVector, p_point, phi, wedge_of_sparse_vectors
from .jets import flat_jet
from .symbasis import Monomial, defect, defect_of_partition, sym_basis, sym_dim

WEDGE_COST_CEILING = 6000


@total_ordering
@dataclass(frozen=True)
class EpsWeight:
    """Value a + b*eps with eps infinitesimal positive; lexicographic order."""

    a: Fraction
    b: Fraction = Fraction(0)

    @classmethod
    def of(cls, a, b=0) -> "EpsWeight":
        return cls(Fraction(a), Fraction(b))

    def __add__(self, other: "EpsWeight") -> "EpsWeight":
        return EpsWeight(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "EpsWeight") -> "EpsWeight":
        return EpsWeight(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "EpsWeight":
        return EpsWeight(-self.a, -self.b)

    def __mul__(self, c) -> "EpsWeight":
        c = Fraction(c)
        return EpsWeight(self.a * c, self.b * c)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EpsWeight):
            return NotImplemented
        return (self.a, self.b) == (other.a, other.b)

    def __lt__(self, other: "EpsWeight") -> bool:
        return (self.a, self.b) < (other.a, other.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __str__(self) -> str:
        if self.b == 0:
            return rat_str(self.a)
        if self.a == 0:
            return f"{rat_str(self.b)}e"
        sign = "+" if self.b > 0 else "-"
        return f"{rat_str(self.a)}{sign}{rat_str(abs(self.b))}e"


ZERO_W = EpsWeight(Fraction(0))


@dataclass(frozen=True)
class OneParamSubgroup:
    """Diagonal one-parameter subgroup, encoded by its weight vector."""

    weights: tuple[EpsWeight, ...]

    @property
    def k(self) -> int:
        return len(self.weights)

    def weight_of(self, m: Monomial) -> EpsWeight:
        total = ZERO_W
        for i in m:
            total = total + self.weights[i - 1]
        return total


def lambda_tilde(k: int) -> OneParamSubgroup:
    """(1, 2, ..., k): the subgroup fixing the distinguished point."""
    return OneParamSubgroup(tuple(EpsWeight.of(i) for i in range(1, k + 1)))


def lambda_sigma(sigma: int, k: int, eps: Fraction | None = None) -> OneParamSubgroup:
    """Regular distinguished subgroup: weight i - floor(i/sigma)*eps."""
    if not 2 <= sigma <= k:
        raise ValueError("need 2 <= sigma <= k")
    if eps is None:
        ws = [EpsWeight.of(i, -defect(sigma, i)) for i in range(1, k + 1)]
    else:
        ws = [EpsWeight.of(Fraction(i) - defect(sigma, i) * Fraction(eps)) for i in range(1, k + 1)]
    return OneParamSubgroup(tuple(ws))


def mu_sigma(sigma: int, k: int, eps: Fraction | None = None) -> OneParamSubgroup:
    """Degenerate distinguished subgroup: weight i except sigma + eps at sigma."""
    if not 2 <= sigma <= k - 1:
        raise ValueError("need 2 <= sigma <= k-1")
    ws = []
    for i in range(1, k + 1):
        if i != sigma:
            ws.append(EpsWeight.of(i))
        elif eps is None:
            ws.append(EpsWeight.of(sigma, 1))
        else:
            ws.append(EpsWeight.of(Fraction(sigma) + Fraction(eps)))
    return OneParamSubgroup(tuple(ws))


def head(lam: OneParamSubgroup) -> tuple[int, str] | None:
    """(sigma, "regular"|"degenerate") at the first departure from multiples
    of the first weight; None for the fixed-point direction itself."""
    l1 = lam.weights[0]
    for i in range(2, lam.k + 1):
        li = lam.weights[i - 1]
        expected = l1 * i
        if li != expected:
            return (i, "regular" if li < expected else "degenerate")
    return None


def weight_of(lam: OneParamSubgroup, m: Monomial) -> EpsWeight:
    return lam.weight_of(m)


def _check_wedge_cost(n_letters: int, k: int):
    cost = k * sym_dim(n_letters, k)
    if cost > WEDGE_COST_CEILING:
        raise ResourceLimitError(
            f"wedge cost {cost} exceeds ceiling {WEDGE_COST_CEILING}"
        )


def limit_point(w: WedgeVector, lam: OneParamSubgroup) -> WedgeVector:
    """The projective limit of lam(t).w as t -> 0: the minimal-weight part.

    Every expanded term's total weight is the sum of its factor weights; the
    terms achieving the minimum survive with their original coefficients.
    """
    if w.is_zero():
        raise ValueError("limit of the zero vector")
    basis = w.basis()
    best: EpsWeight | None = None
    kept: dict[tuple[int, ...], Fraction] = {}
    for factors, c in w.terms.items():
        total = ZERO_W
        for pos in factors:
            total = total + lam.weight_of(basis.monomial_at(pos))
        if best is None or total < best:
            best = total
            kept = {factors: c}
        elif total == best:
            kept[factors] = c
    return WedgeVector(w.n, w.k, w.r, kept)


def _p1_columns(k: int) -> list[dict[int, Fraction]]:
    """Sparse columns of the embedded flat curve jet (ambient n = k)."""
    return phi(flat_jet(1, k)).columns


def z_closed_form(sigma: int, k: int, kind: str, force: bool = False) -> WedgeVector:
    """Per-degree closed form of the limit point, by partition filtering.

    regular: keep degree-i partitions of maximal defect (= defect of i);
    degenerate: keep partitions avoiding sigma as a part.  Coefficients are
    inherited from the distinguished point, so the result must equal the
    brute-force limit exactly (a verified theorem, not a definition).
    """
    if kind not in ("regular", "degenerate"):
        raise ValueError("kind must be regular or degenerate")
    if kind == "regular" and not 2 <= sigma <= k:
        raise ValueError("regular kind needs 2 <= sigma <= k")
    if kind == "degenerate" and not 2 <= sigma <= k - 1:
        raise ValueError("degenerate kind needs 2 <= sigma <= k-1")
    if not force:
        _check_wedge_cost(k, k)
    basis = sym_basis(k, k)
    cols = _p1_columns(k)
    filtered: list[dict[int, Fraction]] = []
    for i in range(1, k + 1):
        col = cols[i - 1]
        keep: dict[int, Fraction] = {}
        for pos, c in col.items():
            parts = basis.monomial_at(pos)
            if kind == "regular":
                ok = defect_of_partition(sigma, parts) == defect(sigma, i)
            else:
                ok = sigma not in parts
            if ok:
                keep[pos] = c
        filtered.append(keep)
    return wedge_of_sparse_vectors(k, k, filtered)


def limit_of_distinguished(sigma: int, k: int, kind: str, eps: Fraction | None = None,
                           force: bool = False) -> WedgeVector:
    """Brute-force limit of the distinguished point under the (sigma, kind)
    subgroup; numeric eps substitutes a rational for the formal symbol."""
    if not force:
        _check_wedge_cost(k, k)
    lam = lambda_sigma(sigma, k, eps) if kind == "regular" else mu_sigma(sigma, k, eps)
    return limit_point(p_point(1, k), lam)


def toral_dimension(lam: OneParamSubgroup, k: int) -> int:
    """Number of degrees whose minimal-weight column part is the single
    coordinate monomial of that degree."""
    basis = sym_basis(k, k)
    cols = _p1_columns(k)
    count = 0
    for i in range(1, k + 1):
        col = cols[i - 1]
        best: EpsWeight | None = None
        argbest: set[Monomial] = set()
        for pos in col:
            m = basis.monomial_at(pos)
            wgt = lam.weight_of(m)
            if best is None or wgt < best:
                best = wgt
                argbest = {m}
            elif wgt == best:
                argbest.add(m)
        if argbest == {(i,)}:
            count += 1
    return count


# -- infinitesimal stabilizers ---------------------------------------------


@dataclass
class TwistedPoint:
    """w^(ox a) ox (twist line)^(ox b), the affine-embedding coordinates.

    twist_dim p selects the line e_1 ^ ... ^ e_p (p = 1: the vector e_1).
    """

    wedge: WedgeVector
    a: int = 1
    b: int = 0
    twist_dim: int = 1

    def __post_init__(self):
        if self.a < 1 or self.b < 0:
            raise ValueError("need a >= 1 and b >= 0")


@dataclass
class StabilizerResult:
    dimension: int
    basis: list[Matrix]


def _lie_action_on_monomial(a: int, b: int, m: Monomial) -> dict[Monomial, int]:
    """Derivation action of the elementary matrix E_{a<-b} on a monomial:
    each occurrence of letter b is replaced by a once."""
    out: dict[Monomial, int] = {}
    mult = m.count(b)
    if mult == 0:
        return out
    lst = list(m)
    lst.remove(b)
    new = tuple(sorted(lst + [a]))
    out[new] = mult
    return out


def _lie_action_on_wedge(a: int, b: int, w: WedgeVector) -> dict[tuple[int, ...], Fraction]:
    """E_{a<-b} acting by the Leibniz rule over the wedge factors.

    Replacing the factor in a slot and re-sorting costs one transposition per
    position moved, so the sign is (-1)^(slot + insertion index).
    """
    import bisect

    basis = w.basis()
    out: dict[tuple[int, ...], Fraction] = {}
    for factors, c in w.terms.items():
        for slot, pos in enumerate(factors):
            m = basis.monomial_at(pos)
            img = _lie_action_on_monomial(a, b, m)
            for new_m, mult in img.items():
                new_pos = basis.index_of(new_m)
                rest = factors[:slot] + factors[slot + 1 :]
                lo = bisect.bisect_left(rest, new_pos)
                if lo < len(rest) and rest[lo] == new_pos:
                    continue
                sign = -1 if (slot + lo) % 2 else 1
                newf = rest[:lo] + (new_pos,) + rest[lo:]
                val = out.get(newf, Fraction(0)) + c * mult * sign
                if val:
                    out[newf] = val
                else:
                    out.pop(newf, None)
    return out


def infinitesimal_stabilizer(
    target: WedgeVector | TwistedPoint,
    algebra: str = "sl",
    mode: str = "affine",
) -> StabilizerResult:
    """Dimension and basis of the Lie-algebra stabilizer of a wedge point.

    affine solves X.w = 0; projective solves X.w in span(w) via one scalar
    unknown (the scalar is determined by X, so the joint kernel dimension is
    the stabilizer dimension).  For a twisted point the reduced system of the
    module docstring is solved; only the affine mode applies there.
    """
    if algebra not in ("sl", "gl"):
        raise ValueError("algebra must be sl or gl")
    if isinstance(target, TwistedPoint):
        if mode != "affine":
            raise ValueError("twisted points use the affine mode")
        return _twisted_stabilizer(target, algebra)
    w = target
    if w.is_zero():
        raise ValueError("stabilizer of the zero vector")
    n = w.n
    unknowns = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    columns = {u: _lie_action_on_wedge(u[0], u[1], w) for u in unknowns}
    keys: set[tuple[int, ...]] = set()
    for col in columns.values():
        keys.update(col)
    extra = 1 if mode == "projective" else 0
    if mode == "projective":
        keys.update(w.terms)
    key_list = sorted(keys)
    rows = []
    for key in key_list:
        row = [columns[u].get(key, Fraction(0)) for u in unknowns]
        if mode == "projective":
            row.append(-w.terms.get(key, Fraction(0)))
        rows.append(row)
    if algebra == "sl":
        trace_row = [Fraction(1) if a == b else Fraction(0) for (a, b) in unknowns]
        trace_row += [Fraction(0)] * extra
        rows.append(trace_row)
    kern = kernel_basis(rows, len(unknowns) + extra)
    basis_mats = [_reshape(vec[: len(unknowns)], n) for vec in kern]
    return StabilizerResult(dimension=len(kern), basis=basis_mats)


def _reshape(entries: list[Fraction], n: int) -> Matrix:
    data = [[Fraction(0)] * n for _ in range(n)]
    for idx, (a, b) in enumerate((a, b) for a in range(1, n + 1) for b in range(1, n + 1)):
        data[a - 1][b - 1] = entries[idx]
    return Matrix(data)


def _twisted_stabilizer(tp: TwistedPoint, algebra: str) -> StabilizerResult:
    w = tp.wedge
    n = w.n
    p = tp.twist_dim
    unknowns = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    columns = {u: dict(_lie_action_on_wedge(u[0], u[1], w)) for u in unknowns}
    ratio = Fraction(tp.b, tp.a)
    for j in range(1, p + 1):
        col = columns[(j, j)]
        for key, c in w.terms.items():
            val = col.get(key, Fraction(0)) + ratio * c
            if val:
                col[key] = val
            else:
                col.pop(key, None)
    keys: set[tuple[int, ...]] = set()
    for col in columns.values():
        keys.update(col)
    key_list = sorted(keys)
    rows = [[columns[u].get(key, Fraction(0)) for u in unknowns] for key in key_list]
    for j in range(1, p + 1):  # X must keep the twist span invariant
        for a in range(p + 1, n + 1):
            row = [Fraction(0)] * len(unknowns)
            row[unknowns.index((a, j))] = Fraction(1)
            rows.append(row)
    if algebra == "sl":
        rows.append([Fraction(1) if a == b else Fraction(0) for (a, b) in unknowns])
    kern = kernel_basis(rows, len(unknowns))
    return StabilizerResult(dimension=len(kern), basis=[_reshape(v, n) for v in kern])


def stabilizer_full_tensor_e1(w: WedgeVector, K: int, algebra: str = "sl") -> int:
    """Stabilizer dimension of w ox e_1^K from the full tensor expansion.

    Exponential in K; exists to cross-validate the twist reduction at small
    sizes before the reduced system is relied on.
    """
    n = w.n
    unknowns = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    base_slots = (1,) * K
    columns: dict[tuple[int, int], dict] = {}
    for a, b in unknowns:
        col: dict = {}
        for key, c in _lie_action_on_wedge(a, b, w).items():
            col[(key, base_slots)] = col.get((key, base_slots), Fraction(0)) + c
        if b == 1:
            for slot in range(K):
                slots = tuple(a if i == slot else 1 for i in range(K))
                for key, c in w.terms.items():
                    col[(key, slots)] = col.get((key, slots), Fraction(0)) + c
        columns[(a, b)] = {kk: v for kk, v in col.items() if v}
    keys = sorted({kk for col in columns.values() for kk in col})
    rows = [[columns[u].get(kk, Fraction(0)) for u in unknowns] for kk in keys]
    if algebra == "sl":
        rows.append([Fraction(1) if a == b else Fraction(0) for (a, b) in unknowns])
    return len(kernel_basis(rows, len(unknowns)))


# -- limit of the stabilizer group ------------------------------------------


class NegativePowerError(RuntimeError):
    """A substituted entry acquired a negative power of t, contradicting the
    polynomiality of the substituted stabilizer family."""


@dataclass
class LimitStabilizerMatrix:
    """Entrywise t -> 0 limit of the conjugated stabilizer family.

    entries[i][j] is a polynomial in b1..bk (b1 invertible on the group);
    n_exponents ledgers the substitution exponents used per parameter.
    """

    sigma: int
    k: int
    ring: PolyRing
    entries: list[list[SparsePolynomial]]
    n_exponents: list[EpsWeight]

    def evaluate(self, beta: list[Fraction]) -> Matrix:
        assignment = {f"b{i}": beta[i - 1] for i in range(1, self.k + 1)}
        return Matrix(
            [[e.evaluate(assignment) for e in row] for row in self.entries]
        )

    def first_order_directions(self) -> list[Matrix]:
        """d/ds at s = 0 of the curve beta = (1, 0, .., 0) + s e_i, per i."""
        out = []
        point = [Fraction(1)] + [Fraction(0)] * (self.k - 1)
        for i in range(1, self.k + 1):
            data = []
            for row in self.entries:
                data.append([_partial_at(e, i - 1, point) for e in row])
            out.append(Matrix(data))
        return out


def _partial_at(poly: SparsePolynomial, var: int, point: list[Fraction]) -> Fraction:
    total = Fraction(0)
    for exp, c in poly.terms.items():
        if exp[var] == 0:
            continue
        v = c * exp[var]
        for j, e in enumerate(exp):
            ee = e - 1 if j == var else e
            if ee:
                v *= point[j] ** ee
        total += v
    return total


def n_sigma_exponents(sigma: int, k: int) -> list[EpsWeight]:
    """n_i = max_j (lambda_{j+i-1} - lambda_j), with n_1 = 0."""
    lam = lambda_sigma(sigma, k)
    out = []
    for i in range(1, k + 1):
        candidates = [
            lam.weights[j + i - 2] - lam.weights[j - 1] for j in range(1, k - i + 2)
        ]
        out.append(max(candidates))
    return out


def theta_choice(sigma: int, k: int, i: int) -> int:
    """A maximizer j of lambda_{j+i-1} - lambda_j (the smallest one)."""
    lam = lambda_sigma(sigma, k)
    n_i = n_sigma_exponents(sigma, k)[i - 1]
    for j in range(1, k - i + 2):
        if lam.weights[j + i - 2] - lam.weights[j - 1] == n_i:
            return j
    raise AssertionError("unreachable: maximum not attained")


def limit_stabilizer_matrix(sigma: int, k: int) -> LimitStabilizerMatrix:
    """Conjugate the stabilizer family by the distinguished subgroup,
    substitute b_i = t^(-n_i) a_i, verify polynomiality in t, take t -> 0.

    Entry (i, j) of the conjugated family is t^(lambda_i - lambda_j) times
    the sum over ordered compositions j = a_1 + ... + a_i of the parameter
    products; after the substitution each term carries t to the power
    lambda_i - lambda_j + n_{a_1} + ... + n_{a_i}, which must be >= 0.
    """
    if not 2 <= sigma <= k:
        raise ValueError("need 2 <= sigma <= k")
    lam = lambda_sigma(sigma, k)
    ns = n_sigma_exponents(sigma, k)
    ring = PolyRing([f"b{i}" for i in range(1, k + 1)])
    entries = []
    for i in range(1, k + 1):
        row = []
        for j in range(1, k + 1):
            limit = ring.zero()
            for parts in _compositions_exact(j, i):
                expo = lam.weights[i - 1] - lam.weights[j - 1]
                for a in parts:
                    expo = expo + ns[a - 1]
                if expo < ZERO_W:
                    raise NegativePowerError(
                        f"entry ({i},{j}) composition {parts} has t-power {expo}"
                    )
                if expo.is_zero():
                    term = ring.one()
                    for a in parts:
                        term = term * ring.var(f"b{a}")
                    limit = limit + term
            row.append(limit)
        entries.append(row)
    return LimitStabilizerMatrix(sigma=sigma, k=k, ring=ring, entries=entries, n_exponents=ns)


def _compositions_exact(j: int, i: int) -> list[tuple[int, ...]]:
    from .jets import _compositions_fixed_length

    return _compositions_fixed_length(j, i)


# -- extra stabilizing transformations --------------------------------------


def extra_stabilizer_case(sigma: int, k: int) -> int:
    """1: sigma = k; 2: sigma < k, k not = -1 mod sigma; 3: the remainder
    case, which needs k >= 4."""
    if sigma == k:
        return 1
    if sigma < k and k % sigma != sigma - 1:
        return 2
    if sigma < k and k % sigma == sigma - 1:
        if k < 4:
            raise ValueError("the residual case requires k >= 4")
        return 3
    raise ValueError("parameters outside all three cases")


def extra_stabilizer(sigma: int, k: int, zeta: Fraction = Fraction(1)) -> Matrix:
    """The extra unipotent transformation fixing the regular limit point.

    Case 1 adds zeta*e_k to e_{k-1}; case 2 adds zeta*e_sigma to e_k; case 3
    adds zeta*e_sigma to e_{k-1} and zeta*e_{sigma+1} to e_k.
    """
    case = extra_stabilizer_case(sigma, k)
    m = Matrix.identity(k)
    if case == 1:
        m.data[k - 1][k - 2] = rat(zeta)  # column k-1 gains a row-k entry
    elif case == 2:
        m.data[sigma - 1][k - 1] = rat(zeta)
    else:
        m.data[sigma - 1][k - 2] = rat(zeta)
        m.data[sigma][k - 1] = rat(zeta)
    return m


def lie_direction_of_extra(sigma: int, k: int) -> Matrix:
    t1 = extra_stabilizer(sigma, k, Fraction(1))
    ident = Matrix.identity(k)
    return Matrix(
        [[t1.data[i][j] - ident.data[i][j] for j in range(k)] for i in range(k)]
    )


def extra_direction_is_new(sigma: int, k: int) -> bool:
    """Rank test: the extra direction is outside the span of the limit
    stabilizer's first-order directions plus the two torus directions, so the
    combined stabilizer directions span dimension at least k + 1."""
    lsm = limit_stabilizer_matrix(sigma, k)
    dirs = lsm.first_order_directions()
    torus1 = Matrix([[Fraction(i + 1) if i == j else Fraction(0) for j in range(k)] for i in range(k)])
    torus2 = Matrix(
        [[Fraction(defect(sigma, i + 1)) if i == j else Fraction(0) for j in range(k)] for i in range(k)]
    )
    base = [_flatten(m) for m in dirs] + [_flatten(torus1), _flatten(torus2)]
    extra = _flatten(lie_direction_of_extra(sigma, k))
    total = rank(base + [extra])
    return total == rank(base) + 1 and total >= k + 1


def _flatten(m: Matrix) -> list[Fraction]:
    return [rat(x) for row in m.data for x in row]


# -- Hilbert-Mumford torus criterion -----------------------------------------


def hilbert_mumford_torus(weights: list[tuple[int, ...]]) -> str:
    """Exact torus (semi)stability from the weight polytope.

    semistable: 0 lies in the convex hull (LP feasibility); stable: the hull
    is full-dimensional and 0 is a strictly positive convex combination
    (strict LP feasibility), i.e. 0 is interior.
    """
    if not weights:
        raise ValueError("empty weight list")
    d = len(weights[0])
    if any(len(w) != d for w in weights):
        raise ValueError("mixed dimensions")
    pts = [tuple(Fraction(x) for x in w) for w in weights]
    if not _lp_zero_in_hull(pts, strict=False):
        return "unstable"
    full_dim = rank([list(p) for p in pts]) == d
    if full_dim and _lp_zero_in_hull(pts, strict=True):
        return "stable"
    return "semistable-not-stable"


def _lp_zero_in_hull(pts: list[tuple[Fraction, ...]], strict: bool) -> bool:
    """Feasibility of sum c_i p_i = 0, sum c_i = 1, c_i >= 0 (or all > 0).

    Strict feasibility is decided by maximizing the common floor delta with
    c_i >= delta; zero is in the relative interior iff the optimum is > 0.
    """
    m = len(pts)
    d = len(pts[0])
    # variables: c_1..c_m, delta, s_1..s_m  (c_i - delta - s_i = 0)
    nvars = m + 1 + m
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for j in range(d):
        rows.append([pts[i][j] for i in range(m)] + [Fraction(0)] * (m + 1))
        rhs.append(Fraction(0))
    rows.append([Fraction(1)] * m + [Fraction(0)] * (m + 1))
    rhs.append(Fraction(1))
    for i in range(m):
        row = [Fraction(0)] * nvars
        row[i] = Fraction(1)
        row[m] = Fraction(-1)
        row[m + 1 + i] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(0))
    objective = [Fraction(0)] * nvars
    objective[m] = Fraction(1)
    opt = _simplex_max(rows, rhs, objective)
    if opt is None:
        return False
    return opt > 0 if strict else True


def _simplex_max(
    a: list[list[Fraction]], b: list[Fraction], c: list[Fraction]
) -> Fraction | None:
    """Two-phase exact simplex for max c.x with A x = b, x >= 0.

    Bland's rule guarantees termination; all arithmetic is rational.  Returns
    the optimum (assumed bounded here: delta <= 1/m in the usage above) or
    None when infeasible.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    # make b >= 0
    a = [list(row) for row in a]
    b = list(b)
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    # phase 1 tableau with artificial variables
    total = n + m
    tab = [a[i] + [Fraction(1 if j == i else 0) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m

    def run(costvec: list[Fraction], allowed: int) -> Fraction:
        # minimize costvec . x over the current tableau, Bland's rule
        while True:
            # reduced costs
            y = [costvec[basis[i]] for i in range(m)]
            entering = -1
            for j in range(allowed):
                if j in basis:
                    continue
                red = costvec[j] - sum(y[i] * tab[i][j] for i in range(m))
                if red < 0:
                    entering = j
                    break
            if entering < 0:
                return sum(costvec[basis[i]] * tab[i][-1] for i in range(m))
            leaving = -1
            best = None
            for i in range(m):
                if tab[i][entering] > 0:
                    ratio = tab[i][-1] / tab[i][entering]
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leaving]
                    ):
                        best = ratio
                        leaving = i
            if leaving < 0:
                raise ArithmeticError("unbounded linear program")
            piv = tab[leaving][entering]
            tab[leaving] = [x / piv for x in tab[leaving]]
            for i in range(m):
                if i != leaving and tab[i][entering] != 0:
                    f = tab[i][entering]
                    tab[i] = [x - f * y2 for x, y2 in zip(tab[i], tab[leaving])]
            basis[leaving] = entering

    val = run(cost, total)
    if val != 0:
        return None
    # drive artificial variables out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            piv_col = next((j for j in range(n) if tab[i][j] != 0), None)
            if piv_col is None:
                continue  # redundant row
            piv = tab[i][piv_col]
            tab[i] = [x / piv for x in tab[i]]
            for r in range(m):
                if r != i and tab[r][piv_col] != 0:
                    f = tab[r][piv_col]
                    tab[r] = [x - f * y2 for x, y2 in zip(tab[r], tab[i])]
            basis[i] = piv_col
    phase2 = [-x for x in c] + [Fraction(0)] * m  # maximize c.x = minimize -c.x
    run(phase2, n)
    return sum(c[basis[i]] * tab[i][-1] for i in range(m) if basis[i] < n)


def hilbert_mumford_bruteforce(weights: list[tuple[int, ...]]) -> str:
    """Independent oracle: Caratheodory subset enumeration for hull
    membership and separating-ray enumeration for interiority."""
    if not weights:
        raise ValueError("empty weight list")
    d = len(weights[0])
    pts = [tuple(Fraction(x) for x in w) for w in weights]
    semistable = _zero_in_hull_caratheodory(pts, d)
    if not semistable:
        return "unstable"
    if rank([list(p) for p in pts]) == d and not _separating_ray_exists(pts, d):
        return "stable"
    return "semistable-not-stable"


def _zero_in_hull_caratheodory(pts: list[tuple[Fraction, ...]], d: int) -> bool:
    from .exact import solve_unique

    idx = range(len(pts))
    for size in range(1, d + 2):
        for subset in itertools.combinations(idx, size):
            rows = [[pts[i][j] for i in subset] for j in range(d)]
            rows.append([Fraction(1)] * size)
            rhs = [Fraction(0)] * d + [Fraction(1)]
            sol = solve_unique(rows, rhs)
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


def _separating_ray_exists(pts: list[tuple[Fraction, ...]], d: int) -> bool:
    """Is there a nonzero functional weakly nonnegative on all points?

    Candidates: kernel directions of the point matrix (the lineality of the
    polar cone) and, for a pointed polar cone, extreme rays supported on d-1
    independent points (perpendiculars and cross products).
    """
    candidates: list[tuple[Fraction, ...]] = []
    kern = kernel_basis([list(p) for p in pts], d)
    candidates.extend(tuple(v) for v in kern)
    if d == 1:
        candidates.extend([(Fraction(1),), (Fraction(-1),)])
    elif d == 2:
        for p in pts:
            candidates.append((-p[1], p[0]))
            candidates.append((p[1], -p[0]))
    elif d == 3:
        for p, q in itertools.combinations(pts, 2):
            cx = (
                p[1] * q[2] - p[2] * q[1],
                p[2] * q[0] - p[0] * q[2],
                p[0] * q[1] - p[1] * q[0],
            )
            candidates.append(cx)
            candidates.append(tuple(-x for x in cx))
    else:
        raise NotImplementedError("oracle implemented for d <= 3")
    for l in candidates:
        if all(x == 0 for x in l):
            continue
        if all(sum(a * b for a, b in zip(l, p)) >= 0 for p in pts):
            return True
    return False


# -- reports -----------------------------------------------------------------


def twist_exponent(p: int, k: int, M: int) -> int:
    """K = M * sum_i i * dim Sym^i C^p + 1."""
    from math import comb

    total = sum(i * comb(p + i - 1, i) for i in range(1, k + 1))
    return M * total + 1


def distinguished_twisted_point(p: int, k: int, M: int) -> TwistedPoint:
    return TwistedPoint(
        wedge=p_point(p, k), a=1, b=twist_exponent(p, k, M), twist_dim=p
    )


def codim_report(k: int, M: int = 1, force: bool = False) -> dict:
    """Stabilizer dimensions of the distinguished point and of every
    candidate boundary limit, with the codimension-two verdict per candidate.

    The open orbit has dimension (k^2 - 1) - (k - 1); a boundary candidate
    with projective stabilizer dimension s spans an orbit of codimension
    s - (k - 1), so the bound holds iff s >= k + 1.
    """
    if k < 2 or M < 1:
        raise ValueError("need k >= 2 and M >= 1")
    if not force:
        _check_wedge_cost(k, k)
    K = twist_exponent(1, k, M)
    base = infinitesimal_stabilizer(
        distinguished_twisted_point(1, k, M), algebra="sl", mode="affine"
    )
    candidates = []
    specs = [("lambda", s) for s in range(2, k + 1)]
    specs += [("mu", s) for s in range(2, k)]
    for kind, sigma in specs:
        z = z_closed_form(sigma, k, "regular" if kind == "lambda" else "degenerate",
                          force=force)
        stab = infinitesimal_stabilizer(z, algebra="sl", mode="projective")
        codim = stab.dimension - (k - 1)
        candidates.append(
            {
                "kind": kind,
                "sigma": sigma,
                "proj_stab_dim": stab.dimension,
                "orbit_codim": codim,
                "bound_ok": stab.dimension >= k + 1,
            }
        )
    return {
        "k": k,
        "M": M,
        "K": K,
        "base_stabilizer_dim": base.dimension,
        "base_stabilizer_expected": k - 1,
        "open_orbit_dim": (k * k - 1) - (k - 1),
        "candidates": candidates,
        "all_bounds_ok": all(c["bound_ok"] for c in candidates),
    }


def probe_stabilizer_conjecture(p: int, k: int, M: int = 1, force: bool = False) -> dict:
    """Measure the special-linear stabilizer dimension of the distinguished
    twisted point for surfaces and report it against the predicted value
    p * sym^{<=k}(p) - 1.  Exploratory: a mismatch is reported, not raised.
    """
    if p == 1:
        res = infinitesimal_stabilizer(
            distinguished_twisted_point(1, k, M), algebra="sl", mode="affine"
        )
        predicted = k - 1
        return {
            "p": p,
            "k": k,
            "M": M,
            "K": twist_exponent(1, k, M),
            "n": k,
            "measured_dim": res.dimension,
            "predicted_dim": predicted,
            "match": res.dimension == predicted,
        }
    if not force and (p, k) != (2, 2):
        raise ResourceLimitError(
            "the conjecture probe is gated to (p, k) = (2, 2); pass force to override"
        )
    n = sym_dim(p, k)
    res = infinitesimal_stabilizer(
        distinguished_twisted_point(p, k, M), algebra="sl", mode="affine"
    )
    predicted = p * n - 1
    return {
        "p": p,
        "k": k,
        "M": M,
        "K": twist_exponent(p, k, M),
        "n": n,
        "measured_dim": res.dimension,
        "predicted_dim": predicted,
        "match": res.dimension == predicted,
    }

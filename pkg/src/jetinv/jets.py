"""Jets of map germs, truncated composition, and the reparametrization groups
as explicit matrices.

A k-jet of a germ (C^p, 0) -> (C^q, 0) is stored through its monomial
expansion f(u) = sum_s coeffs[s] * u^s over nonzero exponent vectors s with
1 <= |s| <= k; that is, coefficient s holds the normalized Taylor data
(the degree-|s| derivative divided by the multinomial factorials).  The
matrix of the right composition action acts on these coefficient rows, so
the closed-form entry formulas below carry the multiplicities of ordered
compositions.

Truncated composition (`compose`) is the single source of truth here: the
group matrix is extracted from it column by column, and every closed-form
entry is tested against that extraction.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import Matrix, PolyRing, SparsePolynomial, rat, rat_str, parse_rat
from .symbasis import Exponent, Monomial, entries_to_exponent, sym_basis, vector_compositions

CoefVec = tuple


def _vec_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


@dataclass
class JetMap:
    """Truncation-order-k germ C^p -> C^q with no constant term.

    coeffs maps each nonzero exponent vector s (1 <= |s| <= k) to a length-q
    coefficient vector; absent keys are zero.  Entries are Fractions, or
    SparsePolynomials for symbolic jets.
    """

    p: int
    q: int
    k: int
    coeffs: dict[Exponent, CoefVec]

    def __post_init__(self):
        clean = {}
        for s, vec in self.coeffs.items():
            s = tuple(s)
            if len(s) != self.p or not (1 <= sum(s) <= self.k):
                raise ValueError(f"bad source multi-index {s!r}")
            if len(vec) != self.q:
                raise ValueError("coefficient vector length mismatch")
            if any(_nonzero(c) for c in vec):
                clean[s] = tuple(vec)
        self.coeffs = clean

    def coefficient(self, s: Exponent) -> CoefVec:
        return self.coeffs.get(tuple(s), (Fraction(0),) * self.q)

    def coordinate_poly(self, j: int) -> dict[Exponent, object]:
        """The j-th coordinate (0-based) as a sparse exponent -> coefficient map."""
        out = {}
        for s, vec in self.coeffs.items():
            if _nonzero(vec[j]):
                out[s] = vec[j]
        return out

    def linear_matrix(self) -> Matrix:
        """The q x p matrix L of the degree-1 block (column i = image of e_i)."""
        cols = []
        for i in range(self.p):
            e = tuple(1 if j == i else 0 for j in range(self.p))
            cols.append(self.coefficient(e))
        return Matrix([[cols[i][r] for i in range(self.p)] for r in range(self.q)])

    def is_reparam(self) -> bool:
        if self.p != self.q:
            return False
        d = self.linear_matrix().det()
        return _nonzero(d)

    def is_unipotent(self) -> bool:
        return self.p == self.q and self.linear_matrix() == Matrix.identity(self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JetMap):
            return NotImplemented
        return (
            (self.p, self.q, self.k) == (other.p, other.q, other.k)
            and self.coeffs == other.coeffs
        )

    def to_json(self) -> dict:
        coeffs = {}
        for s in sorted(self.coeffs):
            vec = self.coeffs[s]
            coeffs["[" + ",".join(map(str, s)) + "]"] = [rat_str(rat(c)) for c in vec]
        return {"p": self.p, "q": self.q, "k": self.k, "coeffs": coeffs}

    @classmethod
    def from_json(cls, obj: dict) -> "JetMap":
        coeffs = {}
        for key, vec in obj["coeffs"].items():
            s = tuple(int(x) for x in key.strip("[]").split(","))
            coeffs[s] = tuple(parse_rat(c) for c in vec)
        return cls(int(obj["p"]), int(obj["q"]), int(obj["k"]), coeffs)


def _nonzero(c) -> bool:
    if isinstance(c, SparsePolynomial):
        return not c.is_zero()
    return c != 0


def identity_jet(p: int, k: int) -> JetMap:
    coeffs = {}
    for i in range(p):
        e = tuple(1 if j == i else 0 for j in range(p))
        coeffs[e] = tuple(Fraction(1 if j == i else 0) for j in range(p))
    return JetMap(p, p, k, coeffs)


def flat_jet(p: int, k: int) -> JetMap:
    """The jet whose coefficient array is the identity of Hom(C^sym, C^n).

    Coefficient s is the standard basis vector at the canonical position of
    s; its embedding image is the distinguished point of the orbit analysis.
    """
    basis = sym_basis(p, k)
    n = len(basis)
    coeffs = {}
    for pos, exp in enumerate(basis.exponents):
        coeffs[exp] = tuple(Fraction(1 if j == pos else 0) for j in range(n))
    return JetMap(p, n, k, coeffs)


def _mul_trunc(a: dict, b: dict, k: int) -> dict:
    out: dict[Exponent, object] = {}
    for s1, c1 in a.items():
        d1 = sum(s1)
        for s2, c2 in b.items():
            if d1 + sum(s2) > k:
                continue
            s = _vec_add(s1, s2)
            prod = c1 * c2
            cur = out.get(s)
            val = prod if cur is None else cur + prod
            if _nonzero(val):
                out[s] = val
            elif cur is not None:
                del out[s]
    return out


def _coord_power(coords: list[dict], j: int, e: int, k: int, cache: dict) -> dict:
    key = (j, e)
    got = cache.get(key)
    if got is None:
        got = coords[j] if e == 1 else _mul_trunc(
            _coord_power(coords, j, e - 1, k, cache), coords[j], k
        )
        cache[key] = got
    return got


def _monomial_of_coords(coords: list[dict], s: Exponent, k: int, cache: dict) -> dict:
    """Truncated product prod_j coords[j]^(s_j), with cached coordinate powers."""
    result: dict | None = None
    for j, e in enumerate(s):
        if e == 0:
            continue
        powed = _coord_power(coords, j, e, k, cache)
        result = powed if result is None else _mul_trunc(result, powed, k)
    return result if result is not None else {}


def compose(g: JetMap, f: JetMap) -> JetMap:
    """Truncated formal substitution g(f(u)): (q -> r) after (p -> q).

    Exact in the coefficient ring; this operation is the oracle every
    closed-form matrix entry in this module is checked against.
    """
    if g.p != f.q:
        raise ValueError("dimension mismatch: g.p != f.q")
    if g.k != f.k:
        raise ValueError("order mismatch")
    k = f.k
    coords = [f.coordinate_poly(j) for j in range(f.q)]
    cache: dict = {}
    acc: dict[Exponent, list] = {}
    for s, gvec in g.coeffs.items():
        mono = _monomial_of_coords(coords, s, k, cache)
        for t, c in mono.items():
            slot = acc.get(t)
            if slot is None:
                slot = [None] * g.q
                acc[t] = slot
            for r in range(g.q):
                if not _nonzero(gvec[r]):
                    continue
                term = c * gvec[r]
                slot[r] = term if slot[r] is None else slot[r] + term
    coeffs = {}
    for t, slot in acc.items():
        vec = tuple(Fraction(0) if c is None else c for c in slot)
        if any(_nonzero(c) for c in vec):
            coeffs[t] = vec
    return JetMap(f.p, g.q, k, coeffs)


def group_matrix(psi: JetMap) -> Matrix:
    """Right-action matrix of a reparametrization on jet coefficient rows.

    Row s holds the expansion coefficients of psi(u)^s, so that for every jet
    gamma the coefficient row-array of compose(gamma, psi) equals that of
    gamma times this matrix.  Block upper triangular in the (degree, lex)
    basis order; diagonal block l is the induced action on Sym^l C^p.
    """
    if psi.p != psi.q:
        raise ValueError("reparametrization must have equal source and target dims")
    if not psi.is_reparam():
        raise ValueError("non-invertible linear part")
    basis = sym_basis(psi.p, psi.k)
    coords = [psi.coordinate_poly(j) for j in range(psi.p)]
    cache: dict = {}
    rows = []
    for s in basis.exponents:
        mono = _monomial_of_coords(coords, s, psi.k, cache)
        rows.append([mono.get(t, Fraction(0)) for t in basis.exponents])
    return Matrix(rows)


def _compositions_fixed_length(j: int, i: int) -> list[tuple[int, ...]]:
    """Ordered compositions of j into exactly i positive parts."""
    if i < 1 or j < i:
        return []
    out = []
    for cuts in itertools.combinations(range(1, j), i - 1):
        prev = 0
        parts = []
        for c in cuts + (j,):
            parts.append(c - prev)
            prev = c
        out.append(tuple(parts))
    return out


def gk_param_ring(k: int) -> PolyRing:
    return PolyRing([f"a{i}" for i in range(1, k + 1)])


def gk_entry(i: int, j: int, ring: PolyRing) -> SparsePolynomial:
    """Closed form for the one-variable group matrix entry (i, j).

    Sum over ordered compositions j = s_1 + ... + s_i of a_{s_1} ... a_{s_i};
    zero above the diagonal transpose (i > j).
    """
    out = ring.zero()
    for parts in _compositions_fixed_length(j, i):
        term = ring.one()
        for s in parts:
            term = term * ring.var(f"a{s}")
        out = out + term
    return out


def group_param_name(l: int, s: Exponent) -> str:
    if len(s) == 1:
        return f"a{s[0]}"
    return f"a{l}[" + ",".join(map(str, s)) + "]"


def gkp_param_ring(p: int, k: int) -> PolyRing:
    basis = sym_basis(p, k)
    names = []
    for l in range(1, p + 1):
        for s in basis.exponents:
            names.append(group_param_name(l, s))
    return PolyRing(names)


def gkp_entry(
    tau: Monomial, nu: Monomial, p: int, k: int, ring: PolyRing
) -> SparsePolynomial:
    """Closed form for the block entry indexed by row tau and column nu.

    Sum over ordered tuples (nu_1, ..., nu_l) of nonzero multi-indices with
    nu_1 + ... + nu_l = nu of a^{tau[1]}_{nu_1} ... a^{tau[l]}_{nu_l}.  The
    ordered range of the tuple is the reading pinned by the composition
    oracle; repeated entries of tau therefore produce multiplicities.
    """
    l = len(tau)
    m = len(nu)
    if l > m:
        return ring.zero()
    nu_exp = entries_to_exponent(nu, p)
    out = ring.zero()
    for pieces in vector_compositions(nu_exp):
        if len(pieces) != l:
            continue
        term = ring.one()
        for slot, piece in enumerate(pieces):
            term = term * ring.var(group_param_name(tau[slot], piece))
        out = out + term
    return out


def symbolic_reparam(p: int, k: int, unipotent: bool = False) -> tuple[JetMap, PolyRing]:
    """Fully symbolic reparametrization jet; optionally with identity linear part."""
    ring = gkp_param_ring(p, k)
    basis = sym_basis(p, k)
    coeffs: dict[Exponent, CoefVec] = {}
    for s in basis.exponents:
        vec = []
        for l in range(1, p + 1):
            if unipotent and sum(s) == 1:
                vec.append(ring.const(1 if s[l - 1] == 1 else 0))
            else:
                vec.append(ring.var(group_param_name(l, s)))
        coeffs[s] = tuple(vec)
    return JetMap(p, p, k, coeffs), ring


def symbolic_jet(p: int, n: int, k: int, prefix: str = "u") -> tuple[JetMap, PolyRing]:
    """Fully symbolic jet C^p -> C^n; variable u{i}_{j} or u[s]_{j}."""
    basis = sym_basis(p, k)
    names = []
    for s in basis.exponents:
        for j in range(1, n + 1):
            names.append(_jet_var_name(prefix, s, j))
    ring = PolyRing(names)
    coeffs = {}
    for s in basis.exponents:
        coeffs[s] = tuple(ring.var(_jet_var_name(prefix, s, j)) for j in range(1, n + 1))
    return JetMap(p, n, k, coeffs), ring


def _jet_var_name(prefix: str, s: Exponent, j: int) -> str:
    if len(s) == 1:
        return f"{prefix}{s[0]}_{j}"
    return f"{prefix}[" + ",".join(map(str, s)) + f"]_{j}"


def jet_var_name(prefix: str, s: Exponent, j: int) -> str:
    return _jet_var_name(prefix, s, j)


def invert(psi: JetMap) -> JetMap:
    """Two-sided compositional inverse, by degree-by-degree back substitution.

    Degree d of the inverse is the unique solution of a triangular linear
    system once degrees < d are known, so the loop terminates in k steps with
    an exact answer.  Rational coefficients only: the inverse of a symbolic
    jet has rational-function coefficients, outside this module's ring.
    """
    if psi.p != psi.q:
        raise ValueError("only reparametrizations invert")
    for vec in psi.coeffs.values():
        if any(isinstance(c, SparsePolynomial) for c in vec):
            raise TypeError("symbolic jets have no polynomial inverse")
    L = psi.linear_matrix()
    if L.det() == 0:
        raise ZeroDivisionError("singular linear part")
    Li = L.inverse()
    p, k = psi.p, psi.k
    inv_coeffs: dict[Exponent, CoefVec] = {}
    for i in range(p):
        e = tuple(1 if j == i else 0 for j in range(p))
        inv_coeffs[e] = tuple(Li.data[r][i] for r in range(p))
    chi = JetMap(p, p, k, inv_coeffs)
    for d in range(2, k + 1):
        r = compose(psi, chi)
        fixes: dict[Exponent, CoefVec] = {}
        for s, vec in r.coeffs.items():
            if sum(s) != d:
                continue
            corr = tuple(
                -sum(Li.data[a][b] * vec[b] for b in range(p)) for a in range(p)
            )
            if any(c != 0 for c in corr):
                fixes[s] = corr
        if fixes:
            merged = dict(chi.coeffs)
            merged.update(fixes)
            chi = JetMap(p, p, k, merged)
    return chi


def torus_weights(p: int, k: int) -> dict[Exponent, tuple[int, ...]]:
    """Torus weight of each jet coefficient: coordinate s scales by lambda^s."""
    return {s: s for s in sym_basis(p, k).exponents}


# -- random sampling ------------------------------------------------------


def random_rational(rng: random.Random, bound: int = 20) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_jet(
    rng: random.Random,
    p: int,
    q: int,
    k: int,
    bound: int = 20,
    regular: bool = False,
) -> JetMap:
    """Random rational jet; with `regular`, the linear block has full rank p."""
    while True:
        coeffs = {}
        for s in sym_basis(p, k).exponents:
            coeffs[s] = tuple(random_rational(rng, bound) for _ in range(q))
        jet = JetMap(p, q, k, coeffs)
        if not regular:
            return jet
        if jet.linear_matrix().rank() == p:
            return jet


def random_sl(rng: random.Random, p: int, bound: int = 5) -> Matrix:
    """Random determinant-1 rational matrix, as a product of shears."""
    m = Matrix.identity(p)
    for _ in range(2 * p):
        i = rng.randrange(p)
        j = rng.randrange(p)
        if i == j:
            continue
        shear = Matrix.identity(p)
        shear.data[i][j] = random_rational(rng, bound)
        m = m @ shear
    return m


def random_reparam(
    rng: random.Random,
    p: int,
    k: int,
    bound: int = 20,
    unipotent: bool = False,
    special: bool = False,
) -> JetMap:
    """Random reparametrization jet.

    unipotent: identity linear part; special: determinant-1 linear part (for
    p = 1 both mean linear coefficient 1).
    """
    coeffs: dict[Exponent, CoefVec] = {}
    basis = sym_basis(p, k)
    for s in basis.exponents:
        coeffs[s] = tuple(random_rational(rng, bound) for _ in range(p))
    if unipotent:
        L = Matrix.identity(p)
    elif special:
        L = random_sl(rng, p, bound=min(bound, 5)) if p > 1 else Matrix.identity(1)
    else:
        while True:
            L = Matrix([[random_rational(rng, bound) for _ in range(p)] for _ in range(p)])
            if L.det() != 0:
                break
    for i in range(p):
        e = tuple(1 if j == i else 0 for j in range(p))
        coeffs[e] = tuple(L.data[r][i] for r in range(p))
    return JetMap(p, p, k, coeffs)

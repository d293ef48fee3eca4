import random
from fractions import Fraction

import pytest

from jetinv.jets import (
    JetMap,
    compose,
    jet_var_name,
    random_jet,
    random_reparam,
    symbolic_jet,
)
from jetinv.invariants import test_curve_system as curve_system
from jetinv.invariants import (
    InvariantPoly,
    ResourceLimitError,
    bulk_invariance_check,
    count_candidate_minors,
    generator_set,
    scale_jet,
    solution_space_equals_perp,
    verify_generator_suite,
    verify_invariance,
    verify_invariance_symbolic,
)
from jetinv.symbasis import sym_basis, sym_dim


def test_generator_set_2_2_contents():
    gens = generator_set(2, 2, 1)
    polys = {str(g.poly.normalized()) for g in gens}
    assert polys == {
        "u1_1",
        "u1_2",
        "u1_1*u2_2 - u1_2*u2_1",
        "u1_1^3",
        "u1_1^2*u1_2",
        "u1_1*u1_2^2",
        "u1_2^3",
    }
    degree_one = [g for g in gens if g.weighted_degree == 1]
    assert {str(g.poly) for g in degree_one} == {"u1_1", "u1_2"}


def test_generator_set_1_1():
    gens = generator_set(1, 1, 1)
    assert len(gens) == 1 and str(gens[0].poly) == "u1_1"


def test_generator_weighted_degrees_are_column_sums():
    gens = generator_set(3, 3, 1)
    for g in gens:
        s = len(g.cols)
        assert g.weighted_degree == s * (s + 1) // 2


def test_generator_homogeneity_symbolic():
    """Every term of a generator has torus weight equal to the stated
    weighted degree (the symbolic homogeneity check)."""
    for n, k in [(2, 2), (3, 3)]:
        gens = generator_set(n, k, 1)
        dom = sym_basis(1, k)
        for g in gens:
            ring = g.poly.ring
            weights = []
            for name in ring.names:
                for s in dom.exponents:
                    for j in range(1, n + 1):
                        if name == jet_var_name("u", s, j):
                            weights.append(s[0])
            assert len(weights) == len(ring.names)
            for exp in g.poly.terms:
                w = sum(e * wt for e, wt in zip(exp, weights))
                assert w == g.weighted_degree, (g.rows, g.cols)


def test_verify_invariance_positive():
    gens = generator_set(2, 2, 1)
    for g in gens:
        rep = verify_invariance(g, trials=30, seed=11)
        assert rep["ok"] and rep["homogeneous"], rep


def test_verify_invariance_detects_noninvariant():
    """A raw second-derivative coordinate is not invariant; a witness must
    be found."""
    fake = InvariantPoly(
        n=2, k=2, p=1, rows=((1,),), cols=((2,),), weighted_degree=2
    )
    # rows e1, column 2 picks u2_1 + quadratic terms; its degree-1 part alone
    # transforms with an alpha_2 shear, so the minor (here a single entry)
    # is *not* unipotent-invariant.
    rep = verify_invariance(fake, trials=50, seed=0)
    assert not rep["ok"]
    assert rep["witness"] is not None


def test_verify_invariance_symbolic_small():
    gens = generator_set(2, 2, 1)
    for g in gens:
        assert verify_invariance_symbolic(g)
    gens33 = generator_set(3, 3, 1)
    picked = [gens33[0], gens33[len(gens33) // 2], gens33[-1]]
    for g in picked:
        assert verify_invariance_symbolic(g)


def test_verify_generator_suite():
    gens = generator_set(3, 3, 1)
    rep = verify_generator_suite(gens, trials=15, seed=4)
    assert rep["ok"] and rep["generators"] == len(gens)


def test_bulk_invariance_check():
    rep = bulk_invariance_check(4, 4, trials=10, seed=9)
    assert rep["ok"] and rep["failures"] == 0


def test_generator_count_limit():
    assert count_candidate_minors(4, 4) > 20000
    with pytest.raises(ResourceLimitError):
        generator_set(4, 4, 1, limit=1000)


def test_generator_set_p2_maximal_minors():
    gens = generator_set(3, 2, 2, limit=None)
    assert gens, "maximal minors should exist for n=3, p=k=2"
    for g in gens:
        assert len(g.cols) == sym_dim(2, 2) == 5
        assert g.weighted_degree == (4, 4)
    rep = verify_generator_suite(gens[:10], trials=10, seed=2)
    assert rep["ok"]


def test_scale_jet():
    rng = random.Random(3)
    jet = random_jet(rng, 2, 2, 2, bound=5)
    lam = (Fraction(2), Fraction(3))
    scaled = scale_jet(jet, lam)
    assert scaled.coeffs[(1, 1)][0] == 6 * jet.coeffs[(1, 1)][0]
    assert scaled.coeffs[(2, 0)][1] == 4 * jet.coeffs[(2, 0)][1]


# -- test-curve systems ------------------------------------------------------


def test_rank_kN_random_regular():
    rng = random.Random(17)
    for k, n, N in [(2, 2, 1), (3, 3, 2), (4, 4, 1)]:
        for _ in range(8):
            g = random_jet(rng, 1, n, k, bound=7, regular=True)
            assert curve_system(g, N).rank() == k * N


def test_rank_p2():
    rng = random.Random(19)
    g = random_jet(rng, 2, 3, 2, bound=7, regular=True)
    sysm = curve_system(g, 1)
    assert sysm.rank() == sym_dim(2, 2)
    assert sysm.matrix.rows == sym_dim(2, 2)


def test_nonregular_rank_drops():
    bad = JetMap(1, 2, 4, {(2,): (Fraction(1), Fraction(2)), (4,): (Fraction(3), Fraction(1))})
    assert curve_system(bad, 1).rank() < 4


def test_solution_space_equals_perp():
    rng = random.Random(23)
    for k, n, N in [(3, 3, 1), (2, 2, 2), (2, 3, 1)]:
        for _ in range(6):
            g = random_jet(rng, 1, n, k, bound=7, regular=True)
            assert solution_space_equals_perp(g, N)
    from jetinv.jets import flat_jet

    assert solution_space_equals_perp(flat_jet(1, 3), 1)
    g = random_jet(rng, 2, 3, 2, bound=7, regular=True)
    assert solution_space_equals_perp(g, 1)


def test_reparametrization_closure():
    rng = random.Random(29)
    g = random_jet(rng, 1, 3, 3, bound=5, regular=True)
    sysm = curve_system(g, 1)
    kernel_jets = sysm.kernel_jets()
    assert kernel_jets
    for Psi in kernel_jets:
        assert not compose(Psi, g).coeffs
    psi = random_reparam(rng, 1, 3, bound=5)
    g2 = compose(g, psi)
    for Psi in kernel_jets[:5]:
        assert not compose(Psi, g2).coeffs


def test_example_8_3_symbolic_rows():
    """The five displayed vanishing equations at k = p = 2, written with the
    hom pairing Psi''(v, w) = sum_s Psi_s [e^s](v w)/orderings(s)."""
    n = 3
    gamma, _ = symbolic_jet(2, n, 2, prefix="g")
    sysm = curve_system(gamma, 1)
    ring = gamma.coeffs[(1, 0)][0].ring
    g = lambda s, j: ring.var(f"g[{s[0]},{s[1]}]_{j}")
    psi_basis = sym_basis(n, 2)

    def hom_pair_row(linear_vec, quad_pairs):
        """Expected row: Psi'(linear_vec) + sum of c * Psi''(v, w) terms."""
        row = {}
        for j in range(1, n + 1):
            row[((0,) * (j - 1) + (1,) + (0,) * (n - j), 0)] = linear_vec[j - 1]
        from jetinv.embedding import _sym_mul, _vector_to_sym
        from jetinv.symbasis import orderings_count

        for coeff, v, w in quad_pairs:
            prod = _sym_mul(_vector_to_sym(v, n), _vector_to_sym(w, n))
            for mono, c in prod.items():
                s = psi_basis.exponents[psi_basis.index_of(mono)]
                key = (s, 0)
                add = coeff * c * Fraction(1, orderings_count(mono))
                row[key] = row.get(key, ring.zero()) + add
        return row

    vec = lambda s: [g(s, j) for j in range(1, n + 1)]
    expected_rows = {
        (1, 0): hom_pair_row(vec((1, 0)), []),
        (0, 1): hom_pair_row(vec((0, 1)), []),
        (2, 0): hom_pair_row(vec((2, 0)), [(1, vec((1, 0)), vec((1, 0)))]),
        (1, 1): hom_pair_row(vec((1, 1)), [(2, vec((1, 0)), vec((0, 1)))]),
        (0, 2): hom_pair_row(vec((0, 2)), [(1, vec((0, 1)), vec((0, 1)))]),
    }
    col_of = {sc: i for i, sc in enumerate(sysm.col_index)}
    for (m, c), row in zip(sysm.row_index, sysm.matrix.data):
        expected = expected_rows[m]
        for idx, entry in enumerate(row):
            want = expected.get(sysm.col_index[idx], ring.zero())
            assert entry == want, (m, sysm.col_index[idx], str(entry), str(want))

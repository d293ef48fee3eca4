import random
from fractions import Fraction
from math import factorial

import pytest

from jetinv.exact import Matrix, PolyRing
from jetinv.jets import (
    JetMap,
    compose,
    gk_entry,
    gk_param_ring,
    gkp_entry,
    group_matrix,
    group_param_name,
    identity_jet,
    invert,
    jet_var_name,
    random_jet,
    random_reparam,
    symbolic_reparam,
    torus_weights,
)
from jetinv.symbasis import orderings_count, partitions_of, sym_basis


def test_compose_identity():
    rng = random.Random(0)
    f = random_jet(rng, 1, 3, 3)
    assert compose(identity_jet(3, 3), f) == f
    assert compose(f, identity_jet(1, 3)) == f


def test_compose_k2_by_hand():
    g = JetMap(1, 1, 2, {(1,): (Fraction(2),), (2,): (Fraction(3),)})
    f = JetMap(1, 1, 2, {(1,): (Fraction(5),), (2,): (Fraction(7),)})
    out = compose(g, f)
    # g(f(t)) = g1*f1 t + (g1*f2 + g2*f1^2) t^2
    assert out.coeffs[(1,)] == (Fraction(10),)
    assert out.coeffs[(2,)] == (Fraction(2 * 7 + 3 * 25),)


def test_compose_associative_random():
    rng = random.Random(1)
    for p, k in [(1, 4), (2, 2)]:
        for _ in range(15):
            h = random_reparam(rng, p, k, bound=6)
            g = random_reparam(rng, p, k, bound=6)
            f = random_reparam(rng, p, k, bound=6)
            assert compose(compose(h, g), f) == compose(h, compose(g, f))


def test_group_matrix_eq1_small():
    psi, ring = symbolic_reparam(1, 2)
    m = group_matrix(psi)
    a1, a2 = ring.var("a1"), ring.var("a2")
    assert m.data[0] == [a1, a2]
    assert m.data[1][0] == 0 and m.data[1][1] == a1**2


def test_group_matrix_identity():
    assert group_matrix(identity_jet(1, 3)) == Matrix.identity(3)
    assert group_matrix(identity_jet(2, 2)) == Matrix.identity(5)


def test_gk_entry_fixtures():
    ring = gk_param_ring(4)
    a = {i: ring.var(f"a{i}") for i in range(1, 5)}
    assert gk_entry(2, 3, ring) == 2 * a[1] * a[2]
    assert gk_entry(3, 2, ring) == 0
    for j in range(1, 5):
        assert gk_entry(1, j, ring) == a[j]


@pytest.mark.parametrize("p,k", [(1, 4), (2, 2), (2, 3)])
def test_closed_form_matches_oracle(p, k):
    psi, ring = symbolic_reparam(p, k)
    m = group_matrix(psi)
    basis = sym_basis(p, k)
    for i, tau in enumerate(basis.monomials):
        for j, nu in enumerate(basis.monomials):
            if p == 1:
                expected = gk_entry(len(tau), len(nu), ring)
            else:
                expected = gkp_entry(tau, nu, p, k, ring)
            assert m.data[i][j] == expected, (tau, nu)


def test_example_2_1_pinned_entries():
    """The worked 9x9 case: generating first rows, P, Q, and the clean rows."""
    psi, ring = symbolic_reparam(2, 3)
    m = group_matrix(psi)
    basis = sym_basis(2, 3)
    a = lambda s: ring.var(group_param_name(1, s))
    b = lambda s: ring.var(group_param_name(2, s))
    # first two rows are the free parameters, in basis order
    for j, nu in enumerate(basis.exponents):
        assert m.data[0][j] == a(nu)
        assert m.data[1][j] == b(nu)
    i_e1e2 = basis.index_of((1, 2))
    j_112 = basis.index_of((1, 1, 2))
    j_122 = basis.index_of((1, 2, 2))
    P = a((1, 0)) * b((1, 1)) + a((1, 1)) * b((1, 0)) + a((2, 0)) * b((0, 1)) + a((0, 1)) * b((2, 0))
    Q = a((0, 1)) * b((1, 1)) + a((1, 1)) * b((0, 1)) + a((0, 2)) * b((1, 0)) + a((1, 0)) * b((0, 2))
    assert m.data[i_e1e2][j_112] == P
    assert m.data[i_e1e2][j_122] == Q
    # block (2,2) row e1e2 as displayed
    assert m.data[i_e1e2][basis.index_of((1, 1))] == a((1, 0)) * b((1, 0))
    assert m.data[i_e1e2][i_e1e2] == a((1, 0)) * b((0, 1)) + a((0, 1)) * b((1, 0))
    assert m.data[i_e1e2][basis.index_of((2, 2))] == a((0, 1)) * b((0, 1))
    # block upper triangularity
    for i, tau in enumerate(basis.monomials):
        for j, nu in enumerate(basis.monomials):
            if len(tau) > len(nu):
                assert m.data[i][j] == 0


def test_group_law_random():
    rng = random.Random(9)
    for p, k, trials in [(1, 4, 25), (2, 3, 8)]:
        for _ in range(trials):
            psi = random_reparam(rng, p, k, bound=6)
            chi = random_reparam(rng, p, k, bound=6)
            assert group_matrix(compose(psi, chi)) == group_matrix(psi) @ group_matrix(chi)


def test_group_law_product_order_frozen():
    """Regression: the law is M(psi o chi) = M(psi) M(chi), not the reverse.

    Pinned on a pair where the matrices do not commute."""
    psi = JetMap(1, 1, 3, {(1,): (Fraction(1),), (2,): (Fraction(1),)})
    chi = JetMap(1, 1, 3, {(1,): (Fraction(2),)})
    lhs = group_matrix(compose(psi, chi))
    good = group_matrix(psi) @ group_matrix(chi)
    bad = group_matrix(chi) @ group_matrix(psi)
    assert lhs == good
    assert not (lhs == bad)


def test_unipotent_diagonal_and_exact_sequence():
    rng = random.Random(4)
    for p, k in [(1, 4), (2, 2)]:
        psi = random_reparam(rng, p, k, bound=6, unipotent=True)
        m = group_matrix(psi)
        size = len(sym_basis(p, k))
        for i in range(size):
            assert m.data[i][i] == 1
        # diagonal depends only on the linear block
        chi = random_reparam(rng, p, k, bound=6)
        chi2_coeffs = dict(chi.coeffs)
        for s in sym_basis(p, k).exponents:
            if sum(s) > 1:
                chi2_coeffs[s] = tuple(Fraction(0) for _ in range(p))
        chi2 = JetMap(p, p, k, chi2_coeffs)
        m1 = group_matrix(chi)
        m2 = group_matrix(chi2)
        for i in range(size):
            assert m1.data[i][i] == m2.data[i][i]


def test_invert_hand_case_and_two_sided():
    rng = random.Random(6)
    for _ in range(25):
        psi = random_reparam(rng, 1, 2, bound=8)
        inv = invert(psi)
        a1 = psi.coeffs[(1,)][0]
        a2 = psi.coefficient((2,))[0]
        assert inv.coeffs[(1,)][0] == 1 / a1
        assert inv.coefficient((2,))[0] == -a2 / a1**3
    for p, k in [(1, 4), (2, 3)]:
        for _ in range(25 if p == 1 else 8):
            psi = random_reparam(rng, p, k, bound=6)
            inv = invert(psi)
            assert compose(psi, inv) == identity_jet(p, k)
            assert compose(inv, psi) == identity_jet(p, k)
            assert invert(inv) == psi


def test_invert_rejects_symbolic_and_singular():
    psi, _ = symbolic_reparam(1, 2)
    with pytest.raises(TypeError):
        invert(psi)
    with pytest.raises((ZeroDivisionError, ValueError)):
        invert(JetMap(1, 1, 2, {(2,): (Fraction(1),)}))


def test_torus_weights():
    w1 = torus_weights(1, 4)
    assert w1[(3,)] == (3,)
    w2 = torus_weights(2, 3)
    assert w2[(1, 1)] == (1, 1)
    assert w2[(3, 0)] == (3, 0)


def test_composition_matches_partition_expansion():
    """Raw-derivative form of the vanishing equations.

    The m-th coefficient of the composed jet equals the partition sum
    sum_tau perm(tau)/prod(i!) Psi(gamma_tau) once raw derivatives
    gamma^(i) = i! gamma_i and the hom pairing are substituted.
    """
    k, n = 4, 2
    dom = sym_basis(1, k)
    names = []
    for s in dom.exponents:
        for j in range(1, n + 1):
            names.append(jet_var_name("u", s, j))
    psi_basis = sym_basis(n, k)
    for s in psi_basis.exponents:
        names.append(jet_var_name("P", s, 1))
    ring = PolyRing(names)
    gamma = JetMap(
        1,
        n,
        k,
        {
            s: tuple(ring.var(jet_var_name("u", s, j)) for j in range(1, n + 1))
            for s in dom.exponents
        },
    )
    psi = JetMap(
        n,
        1,
        k,
        {s: (ring.var(jet_var_name("P", s, 1)),) for s in psi_basis.exponents},
    )
    composed = compose(psi, gamma)

    from jetinv.embedding import _sym_mul, _vector_to_sym

    def psi_hom(sym_elt):
        total = ring.zero()
        for mono, coeff in sym_elt.items():
            s = psi_basis.exponents[psi_basis.index_of(mono)]
            total = total + ring.var(jet_var_name("P", s, 1)) * coeff * Fraction(
                1, orderings_count(mono)
            )
        return total

    for m in range(1, k + 1):
        rhs = ring.zero()
        for tau in partitions_of(m):
            raw = {(): Fraction(1)}
            for i in tau:
                vec = tuple(c * factorial(i) for c in gamma.coeffs[(i,)])
                raw = _sym_mul(raw, _vector_to_sym(vec, n))
            coeff = Fraction(orderings_count(tau))
            for i in tau:
                coeff /= factorial(i)
            rhs = rhs + coeff * psi_hom(raw)
        assert composed.coeffs[(m,)][0] == rhs, m


def test_jet_json_roundtrip():
    rng = random.Random(12)
    jet = random_jet(rng, 2, 3, 2, bound=9)
    again = JetMap.from_json(jet.to_json())
    assert again == jet

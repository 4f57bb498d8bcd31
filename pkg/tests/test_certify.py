import numpy as np
import pytest

from nclp.algebra import (
    AlgebraDescriptor,
    DomainError,
    Element,
    ToleranceConfig,
    identity,
    matrix_algebra,
    matrix_unit,
)
from nclp.certify import (
    NO_YTF,
    NOT_ISOMETRY,
    ROUTE_COMMUTATIVE,
    ROUTE_P1,
    ROUTE_POSITIVE,
    ROUTE_SEPARATING,
    ROUTE_TWO_POSITIVE,
    YTF,
    certify_l1_norm,
    classify_l2_isometry,
    constructive_witnesses,
    is_l2_isometry,
    l1_ratio_lower,
    regular_norm_commutative,
)
from nclp.lp import is_positive
from nclp.maps import (
    LinearMap,
    commutative_matrix,
    convex_combination,
    depolarizing,
    identity_map,
    kraus_map,
    op_norm,
    rotation_mixing,
    scale_map,
    transpose_map,
    unitary_conjugation,
)
from nclp.sampling import ginibre, random_element, random_unitary, rng_from
from nclp.sequences import sequence
from nclp import synth

CFG = ToleranceConfig(seed=555)


def test_ratio_lower_identity_and_scaling():
    alg = matrix_algebra(2)
    r, info = l1_ratio_lower(identity_map(alg), 2.0, CFG, budget=15)
    assert r >= 1.0 - 1e-7
    r2, _ = l1_ratio_lower(scale_map(identity_map(alg), 2.0), 2.0, CFG, budget=15)
    assert r2 >= 2.0 - 1e-6


def test_ratio_lower_transpose_contractive():
    T = transpose_map(matrix_algebra(2), 2.0)
    r, _ = l1_ratio_lower(T, 2.0, CFG, budget=25)
    assert r <= 1.0 + 1e-7


def test_certify_transpose_separating_route():
    T = transpose_map(matrix_algebra(2), 2.0)
    cert = certify_l1_norm(T, 2.0, CFG)
    assert cert.route == ROUTE_SEPARATING
    assert not cert.alarm
    assert cert.value_interval.lower == pytest.approx(1.0, abs=1e-6)
    assert cert.value_interval.upper == pytest.approx(1.0, abs=1e-6)


def test_certify_p1_route():
    rng = rng_from(1)
    alg = matrix_algebra(2)
    T = LinearMap(alg, alg, ginibre(rng, 4), 1.0)
    cert = certify_l1_norm(T, 1.0, CFG)
    assert cert.route == ROUTE_P1
    assert cert.value_interval.lower <= cert.value_interval.upper
    assert not cert.alarm


def test_certify_p1_positive_exact():
    # positive maps have an exact norm at p = 1, so the route collapses
    T = depolarizing(matrix_algebra(2), 0.3, 1.0)
    cert = certify_l1_norm(T, 1.0, CFG)
    assert cert.route == ROUTE_P1
    assert cert.value_interval.upper == pytest.approx(1.0, rel=1e-9)
    assert cert.value_interval.lower >= 1.0 - 1e-6


def test_certify_two_positive_route():
    T = depolarizing(matrix_algebra(2), 0.4, 2.0)
    cert = certify_l1_norm(T, 2.0, CFG)
    assert cert.route == ROUTE_TWO_POSITIVE
    assert cert.value_interval.upper <= 1.0 + 1e-9


def test_certify_positive_4x_route():
    rng = rng_from(2)
    T = synth.random_positive_map(matrix_algebra(2), 2.0, rng)
    cert = certify_l1_norm(T, 2.0, CFG)
    assert cert.route == ROUTE_POSITIVE
    n2 = op_norm(T, 2.0, CFG)
    assert cert.value_interval.lower <= 4.0 * n2.upper * (1 + 1e-9)


def test_certify_convex_combination():
    rng = rng_from(3)
    alg = matrix_algebra(2)
    v = random_element(alg, rng)
    lam = max((v * v.H).sup_norm(), (v.H * v).sup_norm())
    v = (1.0 / np.sqrt(lam)) * v
    mix = convex_combination(kraus_map([v], 2.0), kraus_map([v], 2.0, transposed=True), 0.5)
    cert = certify_l1_norm(mix, 2.0, CFG)
    assert cert.route == ROUTE_TWO_POSITIVE
    assert cert.evidence.get("via") == "convex_combination"
    assert cert.value_interval.upper <= 1.0 + 1e-9


def test_certify_commutative_route_and_regular_norm():
    M = commutative_matrix(np.array([[1, -1], [1, 1]]) / np.sqrt(2), [1, 1], [1, 1], 2.0)
    # frozen: entrywise modulus has top singular value sqrt(2), plain norm 1
    assert regular_norm_commutative(M, 2.0, CFG) == pytest.approx(np.sqrt(2.0), rel=1e-12)
    assert op_norm(M, 2.0, CFG).upper == pytest.approx(1.0, rel=1e-12)
    cert = certify_l1_norm(M, 2.0, CFG)
    assert cert.route == ROUTE_COMMUTATIVE
    assert cert.value_interval.upper == pytest.approx(np.sqrt(2.0), rel=1e-9)


def test_regular_norm_nonnegative_matrix_equals_op_norm():
    M = commutative_matrix(np.array([[0.5, 0.25], [0.1, 1.0]]), [1, 2], [2, 1], 2.0)
    assert regular_norm_commutative(M, 2.0, CFG) == pytest.approx(
        op_norm(M, 2.0, CFG).upper, rel=1e-12
    )


def test_regular_norm_identity():
    M = commutative_matrix(np.eye(3), [1, 1, 1], [1, 1, 1], 2.0)
    assert regular_norm_commutative(M, 2.0, CFG) == pytest.approx(1.0, rel=1e-12)


def test_regular_norm_rejects_matrix_blocks():
    with pytest.raises(DomainError):
        regular_norm_commutative(transpose_map(matrix_algebra(2), 2.0), 2.0, CFG)


def test_classify_unitary_conjugation_ytf():
    rng = rng_from(4)
    T = unitary_conjugation(random_unitary(matrix_algebra(2), rng))
    cls = classify_l2_isometry(T, CFG)
    assert cls.status == YTF and not cls.alarm


def test_classify_rotation_no_ytf_with_witness():
    cls = classify_l2_isometry(rotation_mixing(np.pi / 4), CFG)
    assert cls.status == NO_YTF
    assert cls.witness is not None
    a, b = cls.witness
    from nclp.lp import disjoint

    T = rotation_mixing(np.pi / 4)
    assert disjoint(a, b, CFG) and not disjoint(T(a), T(b), CFG)
    assert not cls.alarm


def test_classify_non_isometry():
    cls = classify_l2_isometry(scale_map(identity_map(matrix_algebra(2)), 2.0), CFG)
    assert cls.status == NOT_ISOMETRY


def test_classify_positive_block_embedding():
    # a positive isometry always factors
    dom = matrix_algebra(2, 1.0)
    cod = AlgebraDescriptor(((2, 1.0), (2, 1.0)))
    from nclp.maps import map_from_function, yeadon_synthetic

    def embed(x):
        return Element(cod, [x.blocks[0].copy(), np.zeros((2, 2))])

    J = map_from_function(dom, cod, embed, 2.0)
    e = J(identity(dom))
    T = yeadon_synthetic(e, e, J, 2.0)
    assert is_l2_isometry(T, CFG)
    cls = classify_l2_isometry(T, CFG)
    assert cls.status == YTF and not cls.alarm


def test_polarization_witness_reconstructs():
    rng = rng_from(5)
    alg = matrix_algebra(2)
    seq = sequence([random_element(alg, rng) for _ in range(2)])
    w = constructive_witnesses(identity_map(alg), seq, "polarization", CFG)
    assert w.reconstruction_residual < 1e-9
    for comp in w.components:
        for y in comp:
            assert is_positive(y, CFG)
    # with normalized factors, each component sum stays below 4
    for s in w.component_sum_norms:
        assert s <= 4.0 + 1e-9


def test_polarization_single_product():
    alg = matrix_algebra(2)
    e11 = matrix_unit(alg, 0, 0, 0)
    e12 = matrix_unit(alg, 0, 0, 1)
    seq = sequence([e11 * e12])
    w = constructive_witnesses(identity_map(alg), seq, "polarization", CFG)
    assert w.reconstruction_residual < 1e-12


def test_two_positive_sqrt_identity_on_e12():
    # frozen oracle: the 2x2 block matrix over E11, E12 and its square root
    alg = matrix_algebra(2)
    T = identity_map(alg)
    e12 = matrix_unit(alg, 0, 0, 1)
    seq = sequence([e12])
    w = constructive_witnesses(T, seq, "two_positive_sqrt", CFG)
    assert w.identity_residual < 1e-9
    # independent 4x4 eigendecomposition oracle for the square root
    a, b = np.zeros((2, 2), dtype=complex), np.zeros((2, 2), dtype=complex)
    iv_a, iv_b = None, None
    from nclp.sequences import l1_norm_bounds

    iv = l1_norm_bounds(seq, 2.0, CFG)
    a_el, b_el = iv.witness[0][0], iv.witness[1][0]
    big = np.zeros((4, 4), dtype=complex)
    big[:2, :2] = (a_el * a_el.H).blocks[0]
    big[:2, 2:] = (a_el * b_el).blocks[0]
    big[2:, :2] = (b_el.H * a_el.H).blocks[0]
    big[2:, 2:] = (b_el.H * b_el).blocks[0]
    vals, vecs = np.linalg.eigh(big)
    root = (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    assert np.abs(root @ root - big).max() < 1e-10


def test_two_positive_sqrt_norm_bound():
    rng = rng_from(6)
    alg = matrix_algebra(2)
    T = synth.random_cp_contraction(alg, 2.0, rng)
    seq = sequence([random_element(alg, rng) for _ in range(2)])
    w = constructive_witnesses(T, seq, "two_positive_sqrt", CFG)
    assert w.identity_residual < 1e-8
    nv = op_norm(T, 2.0, CFG, positive_certified=True)
    from nclp.sequences import l1_norm_bounds

    iv = l1_norm_bounds(seq, 2.0, CFG)
    assert w.factor_bound <= nv.upper * iv.upper * (1 + 1e-6) * (1 + 1e-6)


def test_two_positive_sqrt_requires_certified_map():
    T = transpose_map(matrix_algebra(2), 2.0)
    seq = sequence([identity(matrix_algebra(2))])
    with pytest.raises(DomainError):
        constructive_witnesses(T, seq, "two_positive_sqrt", CFG)


def test_certified_routes_dominate_sampled_ratios():
    rng = rng_from(7)
    battery = [
        transpose_map(matrix_algebra(2), 2.0),
        depolarizing(matrix_algebra(2), 0.7, 2.0),
        synth.random_yeadon_map(rng, p=2.0)[0],
        synth.random_cp_contraction(matrix_algebra(2), 2.0, rng),
    ]
    for T in battery:
        cert = certify_l1_norm(T, T.p, CFG, ratio_budget=15)
        assert not cert.alarm
        assert cert.value_interval.lower <= cert.value_interval.upper * (1 + 1e-7)

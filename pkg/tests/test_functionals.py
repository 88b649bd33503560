import numpy as np
import pytest

from centrality_kit.algebra import AlgebraShape, random_element, random_gaussian, symmetry_from_projection
from centrality_kit.errors import NotHermitian, NotPositive, ShapeMismatch
from centrality_kit.functionals import (
    NormalFunctional,
    evaluate,
    functional_abs,
    functional_norm,
    functional_polar,
    jordan_decompose,
    module_action,
    support_projection,
)

M2 = AlgebraShape((2,))
FLIP = np.array([[0.0, 1.0], [1.0, 0.0]])


def func(shape, *blocks):
    return NormalFunctional(shape.element(list(blocks)))


def rand_general(shape, rng):
    return NormalFunctional(random_gaussian(shape, rng))


def rand_hermitian(shape, rng):
    return NormalFunctional(random_element("hermitian", shape, rng))


# -- evaluation and classification -------------------------------------------

def test_evaluate_examples():
    phi = func(M2, np.diag([1.0, 0.0]))
    a = M2.element([np.diag([1.0, 0.0])])
    assert evaluate(phi, a) == pytest.approx(1.0)
    assert evaluate(phi, M2.identity()) == pytest.approx(phi.density.trace())
    psi = func(M2, [[0.5, 1.0], [1.0, 2.0]])
    assert evaluate(psi, a) == pytest.approx(0.5)


def test_evaluate_shape_mismatch():
    phi = func(M2, np.eye(2))
    with pytest.raises(ShapeMismatch):
        evaluate(phi, AlgebraShape((3,)).identity())


def test_classification_flags():
    assert func(M2, [[0.0, 1.0], [0.0, 0.0]]).klass == "general"
    assert func(M2, [[0.0, 2.0], [2.0, 0.0]]).klass == "hermitian"
    assert func(M2, np.diag([0.5, 0.0])).klass == "positive"


# -- module actions ------------------------------------------------------------

def test_module_action_sandwich_example():
    phi = func(M2, np.diag([1.0, 0.0]))
    s = M2.element([FLIP])
    out = module_action("sandwich", s, phi)
    np.testing.assert_allclose(out.density.blocks[0], np.diag([0.0, 1.0]), atol=1e-12)


def test_module_action_identity_left():
    rng = np.random.default_rng(1)
    phi = rand_general(M2, rng)
    out = module_action("left", M2.identity(), phi)
    assert (out.density - phi.density).fro_norm() == 0.0


def test_module_action_sandwich_preserves_positivity():
    rng = np.random.default_rng(2)
    phi = NormalFunctional(random_element("psd", M2, rng))
    x = random_element("hermitian", M2, rng)
    assert module_action("sandwich", x, phi).klass == "positive"


def test_module_action_pointwise_contract():
    # (x phi)(y) = phi(xy), (phi x)(y) = phi(yx), (x phi x)(y) = phi(xyx)
    shape = AlgebraShape((2, 3))
    rng = np.random.default_rng(3)
    for _ in range(10):
        phi = rand_general(shape, rng)
        x = random_gaussian(shape, rng)
        left = module_action("left", x, phi)
        right = module_action("right", x, phi)
        sand = module_action("sandwich", x, phi)
        for _ in range(5):
            y = random_gaussian(shape, rng)
            assert abs(evaluate(left, y) - evaluate(phi, x @ y)) <= 1e-10
            assert abs(evaluate(right, y) - evaluate(phi, y @ x)) <= 1e-10
            assert abs(evaluate(sand, y) - evaluate(phi, x @ y @ x)) <= 1e-10


# -- Jordan decomposition -------------------------------------------------------

def test_jordan_flip_example():
    # eigenpairs +-2 at (1, +-1)/sqrt(2)
    phi = func(M2, [[0.0, 2.0], [2.0, 0.0]])
    jp = jordan_decompose(phi)
    np.testing.assert_allclose(jp.positive_part.density.blocks[0], [[1, 1], [1, 1]], atol=1e-12)
    np.testing.assert_allclose(jp.negative_part.density.blocks[0], [[1, -1], [-1, 1]], atol=1e-12)


def test_jordan_diagonal_example():
    jp = jordan_decompose(func(M2, np.diag([1.0, -2.0])))
    np.testing.assert_allclose(jp.positive_part.density.blocks[0], np.diag([1.0, 0.0]), atol=1e-12)
    np.testing.assert_allclose(jp.negative_part.density.blocks[0], np.diag([0.0, 2.0]), atol=1e-12)


def test_jordan_of_positive_functional():
    rng = np.random.default_rng(4)
    phi = NormalFunctional(random_element("psd", M2, rng))
    jp = jordan_decompose(phi)
    assert (jp.positive_part.density - phi.density).fro_norm() <= 1e-12 * phi.density.fro_norm()
    assert jp.negative_part.density.fro_norm() <= 1e-12 * phi.density.fro_norm()


def test_jordan_requires_hermitian():
    with pytest.raises(NotHermitian):
        jordan_decompose(func(M2, [[0.0, 1.0], [0.0, 0.0]]))


def test_jordan_invariants_random():
    shape = AlgebraShape((3, 2))
    rng = np.random.default_rng(5)
    for _ in range(30):
        phi = rand_hermitian(shape, rng)
        jp = jordan_decompose(phi)
        plus, minus = jp.positive_part, jp.negative_part
        scale = max(1.0, phi.density.fro_norm())
        assert plus.klass == "positive" and minus.klass == "positive"
        assert (plus.density - minus.density - phi.density).fro_norm() <= 1e-9 * scale
        cross = plus.density @ minus.density
        assert cross.fro_norm() <= 1e-9 * scale**2
        total = evaluate(plus, shape.identity()).real + evaluate(minus, shape.identity()).real
        assert total == pytest.approx(functional_norm(phi), rel=1e-9)


# -- absolute value and polar -----------------------------------------------------

def test_abs_hermitian_example():
    phi = func(M2, [[0.0, 2.0], [2.0, 0.0]])
    np.testing.assert_allclose(functional_abs(phi).density.blocks[0], 2 * np.eye(2), atol=1e-12)


def test_abs_fixed_on_positive():
    rng = np.random.default_rng(6)
    phi = NormalFunctional(random_element("psd", M2, rng))
    assert (functional_abs(phi).density - phi.density).fro_norm() <= 1e-9


def test_abs_strips_unitary_factor():
    # density sigma @ u has absolute value sigma
    shape = AlgebraShape((2, 3))
    rng = np.random.default_rng(7)
    sigma = random_element("psd", shape, rng)
    u = random_element("unitary", shape, rng)
    phi = NormalFunctional(sigma @ u)
    assert (functional_abs(phi).density - sigma).fro_norm() <= 1e-9 * sigma.fro_norm()


def test_polar_positive_functional():
    phi = func(M2, [[1.0, 0.25], [0.25, 2.0]])
    u, absphi = functional_polar(phi)
    np.testing.assert_allclose(u.blocks[0], np.eye(2), atol=1e-9)
    assert (absphi.density - phi.density).fro_norm() <= 1e-9


def test_polar_nilpotent_density():
    # hand polar: rho = diag(1,0) @ flip
    phi = func(M2, [[0.0, 1.0], [0.0, 0.0]])
    u, absphi = functional_polar(phi)
    np.testing.assert_allclose(absphi.density.blocks[0], np.diag([1.0, 0.0]), atol=1e-12)
    np.testing.assert_allclose(u.blocks[0], FLIP, atol=1e-12)


def test_polar_hermitian_density_gives_sign_unitary():
    phi = func(M2, np.diag([1.0, -2.0]))
    u, absphi = functional_polar(phi)
    np.testing.assert_allclose(absphi.density.blocks[0], np.diag([1.0, 2.0]), atol=1e-12)
    np.testing.assert_allclose(u.blocks[0], np.diag([1.0, -1.0]), atol=1e-12)


def test_polar_contract_random():
    # phi(y) = |phi|(u y) with the left module action convention
    from centrality_kit.algebra import is_unitary

    shape = AlgebraShape((2, 3))
    rng = np.random.default_rng(8)
    for _ in range(20):
        phi = rand_general(shape, rng)
        u, absphi = functional_polar(phi)
        assert is_unitary(u)
        for _ in range(5):
            y = random_gaussian(shape, rng)
            lhs = evaluate(phi, y)
            rhs = evaluate(absphi, u @ y)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


# -- support projection -----------------------------------------------------------

def test_support_projection_examples():
    p = support_projection(func(M2, np.diag([0.5, 0.0])))
    np.testing.assert_allclose(p.blocks[0], np.diag([1.0, 0.0]), atol=1e-12)

    rng = np.random.default_rng(9)
    full = NormalFunctional(random_element("psd", M2, rng))
    np.testing.assert_allclose(support_projection(full).blocks[0], np.eye(2), atol=1e-9)

    rank1 = support_projection(func(M2, [[1.0, 1.0], [1.0, 1.0]]))
    np.testing.assert_allclose(rank1.blocks[0], [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)


def test_support_projection_reproduces_functional():
    shape = AlgebraShape((3, 2))
    rng = np.random.default_rng(10)
    psi = NormalFunctional(random_element("psd", shape, rng))
    p = support_projection(psi)
    compressed = module_action("sandwich", p, psi)
    assert (compressed.density - psi.density).fro_norm() <= 1e-9 * psi.density.fro_norm()


def test_support_projection_needs_positive():
    with pytest.raises(NotPositive):
        support_projection(func(M2, np.diag([1.0, -1.0])))


# -- norms ---------------------------------------------------------------------

def test_functional_norm_examples():
    rng = np.random.default_rng(11)
    state = NormalFunctional(random_element("state", AlgebraShape((2, 2)), rng))
    assert functional_norm(state) == pytest.approx(1.0, abs=1e-9)
    assert functional_norm(func(M2, [[0.0, 2.0], [2.0, 0.0]])) == pytest.approx(4.0, abs=1e-12)
    assert functional_norm(NormalFunctional(M2.zero())) == 0.0


def test_anticommutator_norm_identity():
    # for positive phi and a symmetry s: ||phi s + s phi|| = (phi s + s phi)(s) = 2 phi(1)
    shape = AlgebraShape((3, 2))
    rng = np.random.default_rng(12)
    for _ in range(15):
        phi = NormalFunctional(random_element("psd", shape, rng))
        s = symmetry_from_projection(random_element("projection", shape, rng))
        anti = module_action("right", s, phi) + module_action("left", s, phi)
        at_s = evaluate(anti, s).real
        two_phi_one = 2.0 * evaluate(phi, shape.identity()).real
        assert functional_norm(anti) == pytest.approx(two_phi_one, rel=1e-9)
        assert at_s == pytest.approx(two_phi_one, rel=1e-9)


def test_right_action_by_central_positive_is_positive():
    # y -> psi(y a) stays positive when a is central positive
    shape = AlgebraShape((2, 3))
    rng = np.random.default_rng(13)
    for _ in range(10):
        psi = NormalFunctional(random_element("psd", shape, rng))
        a = random_element("central_positive", shape, rng)
        assert module_action("right", a, psi).klass == "positive"

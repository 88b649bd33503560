import numpy as np
import pytest

from centrality_kit._batch import draw_batch, inputs_at, margins_from_batch
from centrality_kit.algebra import AlgebraShape, psd_sqrt_element, random_element
from centrality_kit.conditions import (
    ALL_CONDITIONS,
    ConditionId,
    ConditionInputs,
    MarginReport,
    condition_margin,
    sample_inputs,
)
from centrality_kit.errors import InvalidInputs, NotPositiveElement
from centrality_kit.functionals import (
    NormalFunctional,
    evaluate,
    functional_abs,
    functional_norm,
    module_action,
)

M2 = AlgebraShape((2,))
A_DIAG = M2.element([np.diag([1.0, 0.0])])
GOLDEN_MIN_EIG = 0.3090169943749474  # lam_max(pap - a): trace -0.5, det -0.25


def herm_functional(shape, rng):
    return NormalFunctional(random_element("hermitian", shape, rng))


def test_condition_ii_golden_projection():
    p = M2.element([[[0.5, 0.5], [0.5, 0.5]]])
    rep = condition_margin(ConditionId.II, A_DIAG, ConditionInputs(ConditionId.II, projection=p))
    assert rep.lhs == pytest.approx(GOLDEN_MIN_EIG, abs=1e-12)
    assert rep.rhs == 0.0
    assert rep.margin == pytest.approx(-GOLDEN_MIN_EIG, abs=1e-12)


def test_condition_vi_golden_pair():
    # the two-functional bundle of the worked example: lhs 2, rhs 1
    psi1 = NormalFunctional(M2.element([[[0.5, 1.0], [1.0, 2.0]]]))
    psi2 = NormalFunctional(M2.element([[[0.5, -1.0], [-1.0, 2.0]]]))
    inputs = ConditionInputs(ConditionId.VI, functionals=(psi1, -psi2))
    rep = condition_margin(ConditionId.VI, A_DIAG, inputs)
    assert rep.lhs == pytest.approx(2.0, abs=1e-12)
    assert rep.rhs == pytest.approx(1.0, abs=1e-12)
    assert rep.margin == pytest.approx(-1.0, abs=1e-12)


def test_condition_gardner_satisfied_for_central():
    rng = np.random.default_rng(0)
    c = random_element("central_positive", M2, rng)
    for _ in range(20):
        inputs = sample_inputs(ConditionId.GARDNER, M2, rng)
        rep = condition_margin(ConditionId.GARDNER, c, inputs)
        assert rep.margin >= -1e-9 * rep.scale


def test_condition_margin_requires_positive_element():
    bad = M2.element([np.diag([1.0, -1.0])])
    with pytest.raises(NotPositiveElement):
        condition_margin(
            ConditionId.II, bad, ConditionInputs(ConditionId.II, projection=M2.identity())
        )


def test_inputs_validation_errors():
    rng = np.random.default_rng(1)
    phi = herm_functional(M2, rng)
    general = NormalFunctional(M2.element([[[0.0, 1.0], [0.0, 0.0]]]))
    psd = NormalFunctional(random_element("psd", M2, rng))

    with pytest.raises(InvalidInputs):  # wrong arity
        condition_margin(ConditionId.V, A_DIAG, ConditionInputs(ConditionId.V, functionals=(phi,)))
    with pytest.raises(InvalidInputs):  # vi needs Hermitian inputs
        condition_margin(
            ConditionId.VI, A_DIAG, ConditionInputs(ConditionId.VI, functionals=(general, phi))
        )
    with pytest.raises(InvalidInputs):  # broken decomposition
        condition_margin(
            ConditionId.III,
            A_DIAG,
            ConditionInputs(ConditionId.III, functionals=(phi, psd, psd)),
        )
    with pytest.raises(InvalidInputs):  # weight out of range
        condition_margin(
            ConditionId.VII,
            A_DIAG,
            ConditionInputs(ConditionId.VII, functionals=(phi, phi), weight=1.5),
        )
    with pytest.raises(InvalidInputs):  # iv ordering fails
        condition_margin(
            ConditionId.IV,
            A_DIAG,
            ConditionInputs(ConditionId.IV, functionals=(phi + psd, phi)),
        )
    with pytest.raises(InvalidInputs):  # tag mismatch
        condition_margin(ConditionId.V, A_DIAG, ConditionInputs(ConditionId.VI, functionals=(phi, phi)))


@pytest.mark.parametrize("cond", ALL_CONDITIONS)
def test_sample_inputs_are_valid_and_deterministic(cond):
    shape = AlgebraShape((2, 2))
    inputs = sample_inputs(cond, shape, np.random.default_rng(77))
    inputs.validate(shape)
    again = sample_inputs(cond, shape, np.random.default_rng(77))
    for f, g in zip(inputs.functionals, again.functionals):
        assert (f.density - g.density).fro_norm() == 0.0
    if inputs.projection is not None:
        assert (inputs.projection - again.projection).fro_norm() == 0.0
    assert inputs.weight == again.weight


def test_sample_inputs_iii_decomposition_exact():
    rng = np.random.default_rng(2)
    inputs = sample_inputs(ConditionId.III, M2, rng)
    phi, phi1, phi2 = inputs.functionals
    assert (phi1.density - phi2.density - phi.density).fro_norm() <= 1e-12
    assert phi1.klass == "positive" and phi2.klass == "positive"


def test_sample_inputs_iv_ordering_exact():
    rng = np.random.default_rng(3)
    inputs = sample_inputs(ConditionId.IV, M2, rng)
    phi, psi = inputs.functionals
    gap = psi.density - phi.density
    from centrality_kit.algebra import is_positive

    assert is_positive(gap)


def test_homogeneity_links_weighted_to_plain():
    # vii on (phi, psi, t) has the same margin as v on (t phi, (1-t) psi)
    shape = AlgebraShape((2, 2))
    rng = np.random.default_rng(4)
    a = random_element("central_positive", shape, rng)
    for _ in range(10):
        phi, psi = herm_functional(shape, rng), herm_functional(shape, rng)
        t = float(rng.uniform())
        weighted = condition_margin(
            ConditionId.VII, a, ConditionInputs(ConditionId.VII, functionals=(phi, psi), weight=t)
        )
        plain = condition_margin(
            ConditionId.V, a, ConditionInputs(ConditionId.V, functionals=(t * phi, (1 - t) * psi))
        )
        assert weighted.margin == pytest.approx(plain.margin, abs=1e-10)
        weighted = condition_margin(
            ConditionId.VIII, a, ConditionInputs(ConditionId.VIII, functionals=(phi, psi), weight=t)
        )
        plain = condition_margin(
            ConditionId.VI, a, ConditionInputs(ConditionId.VI, functionals=(t * phi, (1 - t) * psi))
        )
        assert weighted.margin == pytest.approx(plain.margin, abs=1e-10)


def test_positive_functional_equalities():
    # for positive psi: |psi|(a) = psi(a) and ||a^1/2 psi a^1/2|| = psi(a)
    shape = AlgebraShape((3, 2))
    rng = np.random.default_rng(5)
    for _ in range(10):
        a = random_element("psd", shape, rng)
        psi = NormalFunctional(random_element("psd", shape, rng))
        val = evaluate(psi, a).real
        assert evaluate(functional_abs(psi), a).real == pytest.approx(val, rel=1e-9)
        sq = psd_sqrt_element(a)
        sandwiched = module_action("sandwich", sq, psi)
        assert functional_norm(sandwiched) == pytest.approx(val, rel=1e-9)


def test_central_equality_chain_sampled():
    # for central a: ix margin ~ 0 and gardner margin >= 0 across samples
    shape = AlgebraShape((2, 2))
    rng = np.random.default_rng(6)
    a = random_element("central_positive", shape, rng)
    for _ in range(50):
        inputs = sample_inputs(ConditionId.IX, shape, rng)
        rep = condition_margin(ConditionId.IX, a, inputs)
        assert abs(rep.margin) <= 1e-8 * rep.scale
        inputs = ConditionInputs(ConditionId.GARDNER, functionals=inputs.functionals)
        rep = condition_margin(ConditionId.GARDNER, a, inputs)
        assert rep.margin >= -1e-8 * rep.scale


def test_condition_ii_tight_for_central():
    shape = AlgebraShape((3, 2))
    rng = np.random.default_rng(7)
    a = random_element("central_positive", shape, rng)
    for _ in range(50):
        inputs = sample_inputs(ConditionId.II, shape, rng)
        rep = condition_margin(ConditionId.II, a, inputs)
        assert rep.lhs <= 1e-9 * max(1.0, a.op_norm())


@pytest.mark.parametrize("cond", ALL_CONDITIONS)
@pytest.mark.parametrize("dims", [(2,), (2, 2)])
def test_batched_margins_agree_with_object_path(cond, dims):
    shape = AlgebraShape(dims)
    rng = np.random.default_rng(8)
    a = random_element("central_positive", shape, rng)
    batch = draw_batch(cond, shape, 16, rng)
    margins, scales = margins_from_batch(cond, a, batch, 1e-9)
    for i in range(16):
        inputs = inputs_at(cond, shape, batch, i)
        rep = condition_margin(cond, a, inputs)
        assert margins[i] == pytest.approx(rep.margin, abs=1e-10 * rep.scale), (cond, i)
        assert scales[i] == pytest.approx(rep.scale, rel=1e-9), (cond, i)


def test_batched_margins_deterministic():
    shape = AlgebraShape((2, 3))
    a = random_element("central_positive", shape, np.random.default_rng(9))
    from centrality_kit._batch import sampled_margins

    m1, s1 = sampled_margins(ConditionId.VI, a, 50, np.random.default_rng(10), 1e-9)
    m2, s2 = sampled_margins(ConditionId.VI, a, 50, np.random.default_rng(10), 1e-9)
    np.testing.assert_array_equal(m1, m2)
    np.testing.assert_array_equal(s1, s2)

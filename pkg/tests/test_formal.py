import pytest

from glaplace.ratfield import ONE, X, Y
from glaplace.diffop import DiffOp, conjugate
from glaplace.formal import (
    PDESystem, analyze, complete, reduce, gdims, jet_gdims, char_divisor, divisor_to_str,
    is_straightened, complexity, spencer_numbers, spencer_identities, type_label, is_compatible,
    SpencerData, SYMBOL_RING, XI, ETA,
    )
from glaplace.zoo import complexity_bound
from glaplace.errors import TrivialIdeal, ZeroOperator

from conftest import property_cases, random_rf

Dx, Dy = DiffOp.dx(), DiffOp.dy()


def _extend(dims, upto):
    dims = list(dims)
    return tuple(dims[:upto + 1] + [dims[-1]] * (upto + 1 - len(dims)))


def test_reduction_to_normal_form():
    assert not reduce(Dx * Dx * Dy, [Dx * Dx])
    r = reduce(Dx * Dy + Dy, [Dx + X])
    # Dx Dy = Dy o (Dx + x) - x Dy
    assert r == DiffOp({(0, 1): ONE - X})


def test_autoreduced_generators():
    sys = PDESystem([Dx * Dx, Dx * Dx * Dx, 2 * Dy * Dy])
    assert set(sys.generators) == {Dx * Dx, Dy * Dy}
    with pytest.raises(ZeroOperator):
        PDESystem([DiffOp()])


def test_incompatible_system_has_witness():
    # u_xx = 0, u_xy = u
    sys = PDESystem([Dx * Dx, Dx * Dy - 1])
    a = analyze(sys)
    assert not a.verdict.compatible
    assert a.verdict.order == 1
    assert a.verdict.witness.monic() == Dx
    assert a.ideal.trivial
    with pytest.raises(TrivialIdeal):
        gdims(a.ideal)


def test_completion_adds_hidden_equation():
    # u_xx = u_y, u_xy = 0 implies u_yy = 0
    ci = complete(PDESystem([Dx * Dx - Dy, Dx * Dy]))
    assert set(ci.leading_monomials) == {(2, 0), (1, 1), (0, 2)}
    assert ci.contains(Dy * Dy)
    assert any(red.remainder for red in ci.witness)


def test_example1_profile(example1):
    a = analyze(example1)
    assert a.verdict.compatible
    assert a.profile.gdims == (1, 2, 3, 1, 1)
    assert a.profile.k_stab == 3
    assert a.profile.omega == 1
    assert is_straightened(a.profile.char_divisor)
    assert a.profile.kappa == 3
    assert a.spencer.m == {3: 3}
    assert a.spencer.s == {4: 2}
    assert type_label(a.spencer.type_sig) == '3E3'


def test_example3_profile(example3):
    a = analyze(example3)
    assert a.verdict.compatible
    assert a.profile.gdims == (1, 2, 2, 1, 1)
    assert a.profile.kappa == 2
    assert a.spencer.m == {2: 1, 3: 1}
    assert a.spencer.s == {4: 1}
    assert type_label(a.spencer.type_sig) == 'E2+E3'


def test_char_divisor_and_class():
    ci = complete(PDESystem([Dx * Dx, Dx * Dy]))
    divisor, omega = char_divisor(ci)
    assert omega == 1
    assert divisor_to_str(divisor) == '{xi}'
    _, omega = char_divisor(complete(PDESystem([Dx * Dy + X * Dx])))
    assert omega == 2
    _, omega = char_divisor(complete(PDESystem([Dx - Y, Dy - X])))
    assert omega == 0


def test_complexity_formula():
    assert complexity((1, 2, 3, 1, 1), 1) == 3
    assert complexity((1, 2, 2, 2), 2) == 0
    assert complexity((1, 2, 3, 2, 2), 2) == 1
    assert complexity((1, 1, 0), 0) == 2


def test_type_labels():
    assert type_label((2, 2)) == '2E2'
    assert type_label((2, 3)) == 'E2+E3'
    assert type_label((3, 3, 4)) == '2E3+E4'


def test_compatible_single_equation():
    sys = PDESystem([Dx * Dy + Y * Dx])
    assert is_compatible(sys).compatible
    assert spencer_numbers(sys).h1 == 1


@pytest.mark.parametrize('generators', [
    [Dx * Dx, Dx * Dy],
    [Dx * Dx - Dy, Dx * Dy],
    [Dx * Dx * Dx, Dy * Dy - Dx],
    [Dx * Dx, Dy * Dy],
    [Dx * Dx * Dx, Dx * Dx * Dy, Dx * Dy * Dy],
    [Dx * Dy - 1],
    ])
def test_staircase_matches_jet_counting(generators):
    ci = complete(PDESystem(generators))
    dims, _ = gdims(ci)
    assert _extend(dims, 8) == jet_gdims(generators, 8)


def test_jet_counting_needs_constant_coefficients():
    with pytest.raises(ValueError):
        jet_gdims([Dx + X], 3)


@pytest.mark.parametrize('generators, omega', [
    ([Dx * Dx, Dx * Dy], 1),
    ([Dx * Dx * Dx, Dx * Dx * Dy, Dx * Dy * Dy], 1),
    ([Dx * Dx, Dx * Dy * Dy], 1),
    ([Dx * Dy + Y * Dx], 2),
    ([Dx - Y, Dy - X], 0),
    ])
def test_spencer_identities(generators, omega):
    data = spencer_numbers(PDESystem(generators))
    assert data.h2 == data.h1 - 1
    assert spencer_identities(data, omega) == [
        ('h2 = h1 - 1', True), ('sum k m_k - sum k s_k = omega', True)]


def test_spencer_identities_of_the_examples(example1, example3):
    a = analyze(example1)
    assert (a.spencer.h1, a.spencer.h2) == (3, 2)
    assert all(holds for _, holds in spencer_identities(a.spencer, a.profile.omega))
    a = analyze(example3)
    assert (a.spencer.h1, a.spencer.h2) == (2, 1)


def test_spencer_identities_detect_inconsistent_counts():
    bad = SpencerData({2: 2}, {}, 2, 0, (2, 2))
    assert spencer_identities(bad, 1) == [
        ('h2 = h1 - 1', False), ('sum k m_k - sum k s_k = omega', False)]


@pytest.mark.parametrize('k', [2, 3, 4, 5])
def test_kek_complexity(k):
    # Dx Dy^(k-1), ..., Dx^k: symbol ideal xi*(xi, eta)^(k-1)
    a = analyze(PDESystem([DiffOp.monomial(i, k - i) for i in range(1, k + 1)]))
    assert a.verdict.compatible
    assert a.profile.omega == 1
    assert a.profile.gdims[:k + 1] == tuple(range(1, k + 1)) + (1,)
    assert a.profile.kappa == k * (k - 1) // 2
    assert a.spencer.m == {k: k}
    assert type_label(a.spencer.type_sig) == '%dE%d' % (k, k)
    bound = complexity_bound((k,) * k)
    assert bound.equality and bound.exact == a.profile.kappa


GAUGE_SYSTEMS = [
    [Dx * Dx, Dx * Dy],
    [Dx * Dx - Dy, Dx * Dy],
    [Dx * Dx * Dx, Dy * Dy - Dx],
    [Dx * Dy + Y * Dx],
    [Dx * Dx + Dy, Dx * Dy * Dy],
    [Dx * Dx * Dx, Dx * Dx * Dy, Dx * Dy * Dy + Dy],
    ]


def test_symbol_profile_is_gauge_invariant(rng):
    for n in range(property_cases(20)):
        generators = GAUGE_SYSTEMS[n % len(GAUGE_SYSTEMS)]
        sigma = random_rf(rng, degree=1)
        if not sigma:
            continue
        a = analyze(PDESystem(generators))
        b = analyze(PDESystem([conjugate(g, sigma) for g in generators]))
        assert b.verdict.compatible == a.verdict.compatible
        assert b.profile.gdims == a.profile.gdims
        assert (b.profile.omega, b.profile.kappa) == (a.profile.omega, a.profile.kappa)
        if a.spencer is not None:
            assert b.spencer.type_sig == a.spencer.type_sig


def test_divisor_rendering_in_the_symbol_ring():
    assert divisor_to_str([(ETA + 2 * XI, 1), (XI, 2)]) == '{2*xi + eta} {xi}^2'
    assert divisor_to_str([(SYMBOL_RING.gens[0] * XI + ETA, 1)]) == '{x*xi + eta}'
    assert divisor_to_str([]) == '{}'
    ci = complete(PDESystem([Dx * Dy + Y * Dx]))
    divisor, _ = char_divisor(ci)
    assert sorted(divisor_to_str([d]) for d in divisor) == ['{eta}', '{xi}']

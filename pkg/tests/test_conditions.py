from fractions import Fraction

import pytest

from helmholtz.conditions import (
    CONDITION_IDS,
    ConditionReport,
    HessianNotSymmetric,
    NotQuasiLinear,
    QuasiLinearForm,
    SodeSystem,
    all_passed,
    classical_check,
    classical_gh_check,
    compute_r_s,
    condition_identities,
    decompose,
    first_order_check,
    generalized_check_full,
    generalized_check_minimal,
    gh_form_check,
    gh_form_check_system,
    redundancy_witness,
)
from helmholtz.expr import Expression, acc, coord, param, var, vel
from helmholtz.parser import parse

q1, q2, q3 = (var(coord(a)) for a in (1, 2, 3))
qd1, qd2, qd3 = (var(vel(a)) for a in (1, 2, 3))
qdd2 = var(acc(2))
g_, w_ = var(param("g")), var(param("w"))
ONE = Expression.constant(1)
Z = Expression()
HALF = Fraction(1, 2)

DAMPED = SodeSystem.from_strings(["qdd1 + 2*g*qd1 + w^2*q1"], ["g", "w"])
GYRO = SodeSystem.from_strings(["qdd1 + qd2", "qdd2 - qd1"])
GHC3_FAIL = SodeSystem.from_strings(["qdd1 + q3*qd2", "qdd2", "qdd3"])


def by_id(reports):
    return {r.condition: r for r in reports}


def failing(reports):
    return {r.condition for r in reports if not r.passed}


# -- types -------------------------------------------------------------------


def test_system_invariants():
    with pytest.raises(ValueError):
        SodeSystem(())
    with pytest.raises(ValueError, match="jet order"):
        SodeSystem((var(coord(1, 3)),))
    with pytest.raises(ValueError, match="n = 1"):
        SodeSystem((q2,))
    with pytest.raises(ValueError, match="undeclared"):
        SodeSystem((g_ * q1,))


def test_report_invariants():
    assert ConditionReport("HC1").status == "pass"
    with pytest.raises(ValueError):
        ConditionReport("HC1", (((1, 2), Z),))
    rep = ConditionReport("HC2", (((1, 1), 4 * g_),))
    assert rep.status == "fail"
    assert rep.to_dict() == {
        "condition": "HC2", "status": "fail", "note": "", "residuals": [{"index": [1, 1], "residual": "4*g"}]
    }


def test_condition_catalogue_is_unique():
    assert len(set(CONDITION_IDS)) == len(CONDITION_IDS)


# -- decompose ---------------------------------------------------------------


def test_decompose_linear():
    q = decompose(DAMPED)
    assert q.g == ((ONE,),)
    assert q.h == (2 * g_ * qd1 + w_ ** 2 * q1,)
    assert q.recompose() == DAMPED.f


def test_decompose_symmetric_coupled():
    q = decompose(SodeSystem.from_strings(["qdd1 + qdd2", "qdd1 - qdd2"]))
    assert q.g == ((ONE, ONE), (ONE, -ONE))


def test_decompose_asymmetric():
    with pytest.raises(HessianNotSymmetric) as info:
        decompose(SodeSystem.from_strings(["qdd1 + qdd2", "-qdd1 - qdd2"]))
    assert info.value.residuals == [((1, 2), 2 * ONE)]


def test_decompose_not_quasi_linear():
    with pytest.raises(NotQuasiLinear) as info:
        decompose(SodeSystem.from_strings(["qdd1^2"]))
    assert [r for _, r in info.value.residuals] == [2 * ONE]


def test_quasi_linear_form_rejects_second_order_coefficients():
    with pytest.raises(ValueError):
        QuasiLinearForm(((var(acc(1)),),), (Z,))


# -- classical ---------------------------------------------------------------


def test_classical_harmonic():
    assert all_passed(classical_check(SodeSystem.from_strings(["qdd1 + w^2*q1"], ["w"])))


def test_classical_damped():
    reps = by_id(classical_check(DAMPED))
    assert reps["HC2"].residuals == (((1, 1), 4 * g_),)
    assert reps["HC1"].passed and reps["HC3"].passed


def test_classical_gyroscopic():
    assert all_passed(classical_check(GYRO))
    assert all_passed(classical_gh_check(decompose(GYRO)))


def test_classical_gh_oscillator():
    assert all_passed(classical_gh_check(QuasiLinearForm(((ONE,),), (w_ ** 2 * q1,))))


def test_classical_gh_damped_fails_symmetric_part():
    assert failing(classical_gh_check(decompose(DAMPED))) == {"gh-7", "c-11"}


# -- r, s and first order ----------------------------------------------------


def test_r_s_damped():
    im = compute_r_s(DAMPED)
    assert im.r == ((Z,),)
    assert im.s == ((2 * g_,),)


def test_r_s_gyroscopic_vanish():
    im = compute_r_s(GYRO)
    assert all(e.is_zero() for row in im.r + im.s for e in row)


def test_r_s_three_dof():
    im = compute_r_s(GHC3_FAIL)
    assert im.s[0][1] == HALF * q3
    assert im.r[0][1] == -HALF * qd3
    assert im.r[1][0] == HALF * qd3
    assert all_passed(first_order_check(im))


def test_first_order_failure_reports_rho():
    reps = by_id(first_order_check(compute_r_s(SodeSystem.from_strings(["qdd1 + q1*qd2^2", "qdd2"]))))
    assert reps["rho"].residuals == (((1, 2, 2), -q1),)
    assert reps["first-order-r"].residuals == (((1, 2), -q1 * qdd2),)
    assert "rho nonzero at (a,b,c)=(1,2,2): -q1" in reps["first-order-r"].note


def test_first_order_from_lagrangian_pair():
    # EL of Lambda = q1*qd1^2 + qd1*qd2 - q2^3, plus dD/dqd with D = q1*qd2^2
    f = SodeSystem.from_strings([
        "2*q1*qdd1 + qd1^2 + qdd2 + 3*q2^2",
        "qdd1 + 2*q1*qd2",
    ])
    assert all_passed(first_order_check(compute_r_s(f)))


# -- generalized -------------------------------------------------------------


def test_generalized_full_damped():
    assert all_passed(generalized_check_full(DAMPED))


def test_generalized_full_ghc3_failure():
    reps = generalized_check_full(GHC3_FAIL)
    assert failing(reps) == {"GHC3"}
    assert by_id(reps)["GHC3"].residuals[0] == ((1, 2, 3), -HALF * ONE)


def test_generalized_zero_system():
    assert all_passed(generalized_check_full(SodeSystem((Z, Z))))


def test_generalized_minimal():
    reps = generalized_check_minimal(GHC3_FAIL)
    assert failing(reps) == {"prop-17"}
    assert by_id(reps)["prop-17"].residuals[0] == ((1, 2, 3), -HALF * ONE)
    assert all_passed(generalized_check_minimal(SodeSystem.from_strings(["qdd1 + q2", "qdd2"])))


def test_minimal_rejects_asymmetric_g():
    reps = by_id(generalized_check_minimal(SodeSystem.from_strings(["qdd1 + qdd2", "-qdd1 - qdd2"])))
    assert not reps["GHC1"].passed


# -- g/h form ----------------------------------------------------------------


def test_gh_form_damped():
    assert all_passed(gh_form_check(decompose(DAMPED)))


def test_gh_form_cyclic_failure():
    q = QuasiLinearForm(((ONE, Z, Z), (Z, ONE, Z), (Z, Z, ONE)), (q3 * qd2, Z, Z))
    reps = gh_form_check(q)
    assert failing(reps) == {"ghform-3"}
    assert by_id(reps)["ghform-3"].residuals == (((1, 2, 3), -ONE),)


def test_gh_form_velocity_symmetry_failure():
    q = QuasiLinearForm(((qd2, ONE), (ONE, ONE)), (Z, Z))
    rep = by_id(gh_form_check(q))["ghform-1"]
    assert rep.residuals[0][1] == ONE


def test_gh_form_system_maps_decomposition_errors():
    assert failing(gh_form_check_system(SodeSystem.from_strings(["qdd1^2"]))) == {"first-order-s"}
    assert failing(gh_form_check_system(SodeSystem.from_strings(["qdd1 + qdd2", "-qdd1 - qdd2"]))) == {"GHC1"}


# -- redundancy --------------------------------------------------------------


def test_redundancy_on_ghc3_failure():
    reps = by_id(redundancy_witness(GHC3_FAIL))
    assert reps["redundancy-A"].passed and reps["redundancy-A"].note != "hypothesis not met"
    assert reps["redundancy-B"].passed and reps["redundancy-B"].note == "hypothesis not met"
    # GHC4 happens to hold here regardless
    assert by_id(generalized_check_full(GHC3_FAIL))["GHC4"].passed


def test_redundancy_vacuous_when_not_first_order():
    reps = redundancy_witness(SodeSystem.from_strings(["qdd1 + q1*qd2^2", "qdd2"]))
    assert all(r.passed and r.note == "hypothesis not met" for r in reps)


def test_condition_identities_include_passing_instances():
    ids = condition_identities(GHC3_FAIL, "GHC3")
    assert len(ids) == 3 * 3
    assert sum(1 for i in ids if i.residual) == 3


@pytest.mark.parametrize("cid", [c for c in CONDITION_IDS if not c.startswith(("redundancy", "first-order", "rho"))])
def test_condition_identities_cover_catalogue(cid):
    ids = condition_identities(DAMPED, cid)
    assert isinstance(ids, list)

"""Order-parameter recursion, closed-form condition, amplification replay.

The cubic closed form is checked against a fine grid scan for its sign
change and against the recursion it is supposed to solve; the schedule
replay is pinned to hand-verified trace values at alpha = 0.0816.
"""

import math

import numpy as np
import pytest

from kurasync import (
    BracketError,
    DomainError,
    ExpanderProfile,
    InputError,
    LargeArcStep,
    Schedule,
    ScheduleError,
    SmallArcStep,
    TailStep,
    amplification_run,
    cubic_root_a,
    expander_profile,
    gen_named,
    max_alpha_regular,
    min_ramanujan_degree,
    order_param_bounds,
    order_param_validity_limit,
    preset_regular_schedule,
    theorem_condition,
)

from _oracles import sign_scan_roots


def regular_profile(alpha):
    return ExpanderProfile(n=1, d_ref=1.0, alpha=alpha,
                           c_minus=-alpha, c_plus=alpha)


def cubic(alpha, a):
    return a ** 3 + (2.0 * alpha - 1.0) * a ** 2 + 2.0 * alpha ** 2 * a - 2.0 * alpha ** 4


def test_cubic_root_against_grid_scan():
    # independent root location: sign change on a 10^7-point grid
    for alpha in (0.05, 0.12, 0.2):
        a = cubic_root_a(alpha)
        roots = sign_scan_roots(lambda x: cubic(alpha, x), 0.3, 1.0, 10 ** 7)
        assert len(roots) == 1
        assert abs(a - roots[0]) < 1e-7
        assert abs(cubic(alpha, a)) < 1e-10


def test_cubic_root_values_and_bounds():
    assert 0.431 <= cubic_root_a(0.2) <= 0.434
    grid = np.linspace(0.001, 0.2, 40)
    last = 1.0
    for alpha in grid:
        a = cubic_root_a(float(alpha))
        assert a >= 1.0 - 3.0 * alpha - 1e-9
        assert a < last  # decreasing in alpha
        last = a


def test_cubic_root_domain():
    with pytest.raises(DomainError):
        cubic_root_a(0.0)
    with pytest.raises(DomainError):
        cubic_root_a(0.21)
    with pytest.raises(DomainError):
        cubic_root_a(-0.1)


def test_recursion_limit_solves_cubic():
    # the general-mode fixed point is exactly the cubic root: substituting
    # b = (1 - 2 alpha^2/a)^2 into 2a = 1 + b - 4 alpha gives the cubic
    for alpha in np.linspace(0.002, 0.2, 25):
        bounds = order_param_bounds(float(alpha), regular_mode=False)
        assert abs(bounds.a - cubic_root_a(float(alpha))) < 1e-9


def test_order_param_bounds_structure():
    b0 = order_param_bounds(0.0)
    assert b0.a == 1.0 and b0.b == 1.0 and b0.s_budget == 0.0

    for regular in (False, True):
        prev = 1.1
        for alpha in np.linspace(0.0, 0.19, 15):
            res = order_param_bounds(float(alpha), regular_mode=regular)
            assert res.a <= prev + 1e-15  # a decreases in alpha
            assert 0.0 <= res.b <= 1.0
            assert res.s_budget == res.alpha ** 2 / res.a
            assert res.a >= 1.0 - 3.0 * alpha - 1e-12
            prev = res.a

    # the regular refinement loses less per round trip
    gen = order_param_bounds(0.15, regular_mode=False)
    reg = order_param_bounds(0.15, regular_mode=True)
    assert reg.a > gen.a
    assert reg.s_budget < gen.s_budget


def test_order_param_bounds_domain():
    with pytest.raises(InputError):
        order_param_bounds(-0.01)
    with pytest.raises(DomainError):
        order_param_bounds(0.21)  # general-mode gate at 0.2
    with pytest.raises(DomainError):
        order_param_bounds(0.26, regular_mode=True)


def test_validity_limits():
    reg = order_param_validity_limit(regular_mode=True)
    gen = order_param_validity_limit(regular_mode=False)
    assert 0.245 < reg < 0.247
    assert 0.2055 < gen < 0.2056
    assert order_param_validity_limit(regular_mode=True) == reg  # cached

    # just inside works, just outside raises
    order_param_bounds(reg - 1e-6, regular_mode=True)
    with pytest.raises(DomainError):
        order_param_bounds(reg + 1e-3, regular_mode=True)


def test_theorem_condition_formulas():
    # re-evaluate both closed forms independently on a spread of profiles
    rng = np.random.default_rng(17)
    for _ in range(50):
        alpha = float(rng.uniform(0.001, 0.4))
        cm = float(rng.uniform(-0.9, 0.3))
        cp = float(rng.uniform(cm, 0.8))
        prof = ExpanderProfile(n=100, d_ref=5.0, alpha=alpha, c_minus=cm, c_plus=cp)
        res = theorem_condition(prof)
        c1 = 64.0 * alpha * (1.0 + 2.0 * cp - cm) / (1.0 + cm) ** 2
        c2 = (64.0 * alpha * (1.0 + cp) * math.log((1.0 + cp + alpha) / (2.0 * alpha))
              / ((1.0 + cm) * (1.0 + 5.0 * cp - 4.0 * cm)))
        assert res.condition1 == c1
        assert res.condition2 == c2
        expect = "pass" if c1 < 1.0 and c2 < 1.0 and alpha <= 0.2 else "fail"
        assert res.verdict == expect


def test_theorem_condition_cases():
    res = theorem_condition(expander_profile(gen_named("complete", 10)))
    assert res.verdict == "fail"
    assert res.condition1 == pytest.approx(8.691358024691356, abs=1e-12)
    assert res.condition2 == pytest.approx(8.659037928830099, abs=1e-12)
    assert len(res.reasons) == 2

    res = theorem_condition(ExpanderProfile(n=10, d_ref=1.0, alpha=0.0,
                                            c_minus=0.0, c_plus=0.0))
    assert res.verdict == "pass"
    assert res.condition1 == 0.0 and res.condition2 == 0.0

    res = theorem_condition(ExpanderProfile(n=10, d_ref=1.0, alpha=0.1,
                                            c_minus=-1.0, c_plus=0.1))
    assert res.verdict == "fail"
    assert math.isinf(res.condition1)
    assert "disconnected" in res.reasons[0]

    res = theorem_condition(regular_profile(0.25))
    assert any("1/5" in r for r in res.reasons)

    obj = res.to_json_dict()
    assert obj["verdict"] == "fail" and isinstance(obj["reasons"], list)


def test_preset_schedule_shape():
    sched = preset_regular_schedule()
    kinds = [s.kind for s in sched.steps]
    assert kinds == ["small_arc"] * 3 + ["large_arc"] * 4 + ["tail"]
    assert all(s.eps == 0.23 and s.rho == 0.38 for s in sched.steps[:3])
    assert all(s.eps == 0.184 for s in sched.steps[3:])


def test_schedule_validation():
    with pytest.raises(InputError):
        Schedule(steps=())
    with pytest.raises(InputError):
        Schedule(steps=(SmallArcStep(eps=0.0, rho=0.1),))
    with pytest.raises(InputError):
        Schedule(steps=(SmallArcStep(eps=0.1, rho=-0.1),))
    with pytest.raises(InputError):
        Schedule(steps=(TailStep(eps=0.1), LargeArcStep(eps=0.1)))
    with pytest.raises(InputError):
        Schedule(steps=(SmallArcStep(eps=0.1, rho=0.1), "tail"))


def test_schedule_json_round_trip(tmp_path):
    sched = preset_regular_schedule()
    again = Schedule.from_json_dict(sched.to_json_dict())
    assert again == sched

    path = tmp_path / "schedule.json"
    sched.save(path)
    assert Schedule.load(path) == sched

    with pytest.raises(InputError):
        Schedule.from_json_dict({"steps": [{"kind": "sideways", "eps": 0.1}]})
    with pytest.raises(InputError):
        Schedule.from_json_dict([1, 2])


def test_amplification_preset_trace():
    tr = amplification_run(regular_profile(0.0816), preset_regular_schedule(),
                           mode="numeric")
    assert tr.verdict == "pass"
    assert tr.final_check_lhs == pytest.approx(0.009055288178210153, abs=1e-15)
    assert tr.final_check_rhs == pytest.approx(0.007722083173020028, abs=1e-15)
    assert tr.final_check_lhs > tr.final_check_rhs

    rows = tr.rows
    assert [r.step_kind for r in rows] == (
        ["start"] + ["small_arc"] * 3 + ["large_arc"] * 4 + ["tail"])
    assert rows[0].beta == pytest.approx(math.pi / 2, abs=1e-15)
    betas = [r.beta for r in rows]
    assert all(b1 > b2 for b1, b2 in zip(betas, betas[1:]))  # strictly shrinking
    assert min(betas) >= 0.117
    assert min(betas) == pytest.approx(0.14130345309246664, abs=1e-12)

    # small-arc rows are capped by the alpha*n absolute bound, the tail
    # certifies half the vertices outright
    assert [r.cap_hit for r in rows] == (
        ["none"] + ["alpha_n"] * 3 + ["none"] * 4 + ["half_n"])
    ratios = [r.mass_ratio for r in rows]
    assert all(r2 >= r1 for r1, r2 in zip(ratios, ratios[1:]))
    assert rows[-1].mass_frac == 0.5
    assert all(r.status == "ok" for r in rows)


def test_amplification_paper_mode_never_beats_numeric():
    sched = preset_regular_schedule()
    for alpha in (0.005, 0.01, 0.03, 0.05, 0.0816):
        prof = regular_profile(alpha)
        numeric = amplification_run(prof, sched, mode="numeric").verdict
        paper = amplification_run(prof, sched, mode="paper_proof").verdict
        if paper == "pass":
            assert numeric == "pass"
    # at the preset's edge the overestimates lose the verdict
    assert amplification_run(regular_profile(0.0816), sched,
                             mode="paper_proof").verdict == "fail"


def test_amplification_failure_is_a_verdict():
    tr = amplification_run(regular_profile(0.15), preset_regular_schedule(),
                           mode="numeric")
    assert tr.verdict == "fail"
    assert "angle budget exhausted" in tr.reason
    assert tr.rows[-1].status == "below_zero"

    # disconnected window short-circuits
    prof = ExpanderProfile(n=1, d_ref=1.0, alpha=0.05, c_minus=-1.2, c_plus=0.05)
    tr = amplification_run(prof, preset_regular_schedule(), mode="numeric")
    assert tr.verdict == "fail"
    assert "disconnected" in tr.reason


def test_amplification_argument_errors():
    prof = regular_profile(0.05)
    with pytest.raises(InputError):
        amplification_run(prof, preset_regular_schedule(), mode="fast")
    with pytest.raises(InputError):
        amplification_run(prof, None, mode="numeric")
    with pytest.raises(ScheduleError):
        amplification_run(prof, Schedule(steps=(LargeArcStep(eps=0.1),)),
                          mode="numeric")


def test_amplification_auto_paper_proof():
    assert amplification_run(regular_profile(0.0031), None,
                             mode="paper_proof").verdict == "pass"
    assert amplification_run(regular_profile(0.0032), None,
                             mode="paper_proof").verdict == "fail"


def test_max_alpha_regular_brackets():
    v = max_alpha_regular(preset_regular_schedule(), 0.05, 0.12)
    assert v == pytest.approx(0.08217163085937501, abs=1e-12)
    assert v >= 0.0816

    auto = max_alpha_regular(None, 0.001, 0.01)
    assert auto == pytest.approx(0.00314453125, abs=1e-12)

    with pytest.raises(BracketError):
        max_alpha_regular(preset_regular_schedule(), 0.2, 0.25)
    with pytest.raises(BracketError):
        max_alpha_regular(preset_regular_schedule(), 0.01, 0.05)
    with pytest.raises(InputError):
        max_alpha_regular(None, 0.05, 0.01)
    with pytest.raises(InputError):
        max_alpha_regular(None, 0.001, 0.01, tol=0.0)


def test_min_ramanujan_degree():
    assert min_ramanujan_degree(0.0816) == 600
    assert min_ramanujan_degree(1.0) == 3
    # the defining inequality is tight: d passes, d - 1 does not
    for t in (0.9, 0.5, 0.21, 0.1, 0.05, 0.0816):
        d = min_ramanujan_degree(t)
        assert 2.0 * math.sqrt(d - 1.0) / d <= t
        if d > 3:
            assert 2.0 * math.sqrt(d - 2.0) / (d - 1.0) > t
    with pytest.raises(InputError):
        min_ramanujan_degree(0.0)
    with pytest.raises(InputError):
        min_ramanujan_degree(1.5)


def test_trace_csv(tmp_path):
    tr = amplification_run(regular_profile(0.0816), preset_regular_schedule(),
                           mode="numeric")
    path = tmp_path / "trace.csv"
    tr.to_csv(path)
    lines = path.read_text(encoding="utf-8").strip().splitlines()
    assert lines[0] == "k,beta_k,mass_frac,step_kind"
    assert len(lines) == len(tr.rows) + 1
    assert float(lines[-1].split(",")[1]) == tr.rows[-1].beta

    obj = tr.to_json_dict()
    assert obj["verdict"] == "pass"
    assert len(obj["rows"]) == len(tr.rows)

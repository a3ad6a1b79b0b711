"""Certificates of global synchronization from an expander profile.

Three layers, all exact arithmetic on scale-free quantities (fractions of n,
ratios of arc masses), so a certificate is independent of graph size:

* order-parameter bounds: a monotone two-variable recursion whose limit a
  lower-bounds rho_1^2 at any stable state, giving the budget
  (1/n) sum_x s(theta_x) <= alpha^2 / a;
* a closed-form sufficient condition in alpha, c_minus, c_plus;
* an amplification engine that replays arc-growth steps (small-arc,
  large-arc, geometric tail) and passes when the certified mass-times-sin^2
  accounting strictly exceeds the budget.

The engine tracks arc mass as a ratio to the unknown starting mass c_0.
Each small-arc step also records the scenario in which its absolute cap
(rho * alpha * n) binds; the final check takes the minimum over the main
chain and all recorded cap scenarios, which is the worst case over c_0 of
the telescoping mass sum.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

from .errors import BracketError, DomainError, InputError, ScheduleError
from .spectral import ExpanderProfile

__all__ = [
    "OrderParamBounds",
    "cubic_root_a",
    "order_param_bounds",
    "order_param_validity_limit",
    "CertResult",
    "theorem_condition",
    "SmallArcStep",
    "LargeArcStep",
    "TailStep",
    "Schedule",
    "preset_regular_schedule",
    "TraceRow",
    "AmplificationTrace",
    "amplification_run",
    "max_alpha_regular",
    "min_ramanujan_degree",
]

CUBIC_ALPHA_SUP = 0.2055  # cubic discriminant is negative strictly below this
GENERAL_ALPHA_SUP = 0.2
ROOT_TOL = 1e-12
FIXED_POINT_TOL = 1e-14
FIXED_POINT_MAX_ITERS = 10 ** 6


def cubic_root_a(alpha):
    """Unique real root of a^3 + (2a-1)... the order-parameter cubic.

    Solves a**3 + (2*alpha - 1)*a**2 + 2*alpha**2*a - 2*alpha**4 = 0 by
    bisection on [2*alpha**4, 1] to absolute tolerance 1e-12. The root is
    the fixed point of the general-mode recursion and decreases in alpha.
    """
    if not (0.0 < alpha < CUBIC_ALPHA_SUP):
        raise DomainError(
            f"cubic has a unique real root only for alpha in (0, {CUBIC_ALPHA_SUP}), got {alpha}"
        )

    def p(a):
        return a ** 3 + (2.0 * alpha - 1.0) * a ** 2 + 2.0 * alpha ** 2 * a - 2.0 * alpha ** 4

    lo, hi = 2.0 * alpha ** 4, 1.0
    if p(lo) >= 0.0 or p(hi) <= 0.0:  # cannot happen in the gated domain
        raise DomainError(f"root bracket [2*alpha^4, 1] is invalid at alpha={alpha}")
    while hi - lo > ROOT_TOL:
        mid = 0.5 * (lo + hi)
        if p(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class OrderParamBounds:
    """Certified lower bounds at a stable state: rho_1^2 >= a, |rho_2|^2 >= b.

    s_budget stores alpha**2 / a exactly as computed; it upper-bounds the
    average of s(theta_x) over vertices and is what amplification must beat.
    """

    a: float
    b: float
    s_budget: float
    alpha: float
    regular_mode: bool
    iterations: int


def _fixed_point(alpha, regular_mode):
    # coupling constant: the general argument loses 4*alpha per round trip,
    # the regular-graph refinement only 3*alpha
    coef = 3.0 if regular_mode else 4.0
    a, b = 0.0, 0.0
    two_a2 = 2.0 * alpha * alpha
    for k in range(1, FIXED_POINT_MAX_ITERS + 1):
        a_next = 0.5 * (1.0 + b - coef * alpha)
        if a_next <= 0.0:
            raise DomainError(
                f"order-parameter recursion is vacuous at alpha={alpha} (nonpositive first bound)"
            )
        b_next = (1.0 - two_a2 / a_next) ** 2
        if a_next < a or b_next < b:
            raise DomainError(
                f"order-parameter recursion lost monotonicity at alpha={alpha} (step {k})"
            )
        if abs(a_next - a) < FIXED_POINT_TOL:
            return a_next, b_next, k
        a, b = a_next, b_next
    raise DomainError(
        f"order-parameter recursion did not converge in {FIXED_POINT_MAX_ITERS} iterations "
        f"at alpha={alpha}"
    )


def order_param_bounds(alpha, regular_mode=False):
    """Iterate the paired lower-bound recursion to its limit.

    a_{k+1} = (1 + b_k - 4*alpha)/2 (3*alpha in regular mode) and
    b_{k+1} = (1 - 2*alpha^2/a_{k+1})^2 from a_0 = b_0 = 0, stopping when
    |a_{k+1} - a_k| < 1e-14. Monotone increase of both sequences is checked
    every step. Past the mode's validity limit the recursion either stalls
    against a spurious low fixed point or stops being monotone; both raise
    DomainError, as does a limit below the linear bound 1 - 3*alpha.
    """
    if alpha < 0.0:
        raise InputError(f"alpha must be nonnegative, got {alpha}")
    if not regular_mode and alpha > GENERAL_ALPHA_SUP + 1e-12:
        raise DomainError(
            f"general mode requires alpha <= {GENERAL_ALPHA_SUP}, got {alpha}"
        )
    a, b, iters = _fixed_point(alpha, regular_mode)
    if a < 1.0 - 3.0 * alpha - 1e-12:
        raise DomainError(
            f"recursion converged to the spurious branch at alpha={alpha} "
            f"(a={a:.6f} < 1 - 3*alpha={1.0 - 3.0 * alpha:.6f})"
        )
    s_budget = alpha * alpha / a
    return OrderParamBounds(
        a=a, b=b, s_budget=s_budget, alpha=alpha,
        regular_mode=bool(regular_mode), iterations=iters,
    )


_validity_limit_cache = {}


def order_param_validity_limit(regular_mode=True, tol=1e-9):
    """Largest alpha (to tol) where order_param_bounds still succeeds.

    Recomputed by bisection on the recursion itself rather than hard-coded,
    so a change to the recursion moves the limit with it.
    """
    key = (bool(regular_mode), tol)
    if key in _validity_limit_cache:
        return _validity_limit_cache[key]

    def ok(x):
        try:
            a, _, _ = _fixed_point(x, regular_mode)
        except DomainError:
            return False
        return a >= 1.0 - 3.0 * x - 1e-12

    lo, hi = 0.15, 0.30
    if not ok(lo) or ok(hi):
        raise BracketError("validity-limit bracket [0.15, 0.30] is invalid")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    _validity_limit_cache[key] = lo
    return lo


@dataclass(frozen=True)
class CertResult:
    verdict: str  # pass | fail
    condition1: float
    condition2: float
    reasons: tuple = ()
    trace: "AmplificationTrace | None" = None

    def to_json_dict(self):
        out = {
            "verdict": self.verdict,
            "condition1": self.condition1,
            "condition2": self.condition2,
            "reasons": list(self.reasons),
        }
        if self.trace is not None:
            out["trace"] = self.trace.to_json_dict()
        return out


def theorem_condition(profile):
    """Closed-form sufficient condition on (alpha, c_minus, c_plus).

    condition1 = 64*alpha*(1 + 2*c_plus - c_minus) / (1 + c_minus)^2
    condition2 = 64*alpha*(1 + c_plus)*log((1 + c_plus + alpha)/(2*alpha))
                 / ((1 + c_minus)*(1 + 5*c_plus - 4*c_minus))

    Pass iff both are below 1, alpha <= 1/5 and c_minus > -1. alpha = 0 is
    the degenerate limit where both conditions vanish.
    """
    alpha, cm, cp = profile.alpha, profile.c_minus, profile.c_plus
    for name, v in (("alpha", alpha), ("c_minus", cm), ("c_plus", cp)):
        if not math.isfinite(v):
            raise InputError(f"profile field {name} is not finite: {v}")
    reasons = []
    if cm <= -1.0:
        return CertResult(
            verdict="fail", condition1=math.inf, condition2=math.inf,
            reasons=("spectral window reaches -1: the graph may be disconnected",),
        )
    if alpha == 0.0:
        c1, c2 = 0.0, 0.0
    else:
        c1 = 64.0 * alpha * (1.0 + 2.0 * cp - cm) / (1.0 + cm) ** 2
        c2 = (
            64.0 * alpha * (1.0 + cp) * math.log((1.0 + cp + alpha) / (2.0 * alpha))
            / ((1.0 + cm) * (1.0 + 5.0 * cp - 4.0 * cm))
        )
    if alpha > 0.2:
        reasons.append(f"alpha={alpha} exceeds the 1/5 gate")
    if c1 >= 1.0:
        reasons.append(f"condition1={c1:.6f} is not below 1")
    if c2 >= 1.0:
        reasons.append(f"condition2={c2:.6f} is not below 1")
    verdict = "pass" if not reasons else "fail"
    return CertResult(verdict=verdict, condition1=c1, condition2=c2, reasons=tuple(reasons))


@dataclass(frozen=True)
class SmallArcStep:
    """Arc growth driven by edge counts within a small set; needs eps and rho."""

    eps: float
    rho: float
    kind: str = field(default="small_arc", init=False, repr=False)


@dataclass(frozen=True)
class LargeArcStep:
    """Arc growth once the mass ratio has cleared the (1+c_plus+alpha)/(2*alpha) gate."""

    eps: float
    kind: str = field(default="large_arc", init=False, repr=False)


@dataclass(frozen=True)
class TailStep:
    """Terminal step: geometric series of large-arc spends driving mass to 1/2."""

    eps: float
    kind: str = field(default="tail", init=False, repr=False)


_STEP_KINDS = {"small_arc": SmallArcStep, "large_arc": LargeArcStep, "tail": TailStep}


@dataclass(frozen=True)
class Schedule:
    steps: tuple

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise InputError("schedule has no steps")
        for i, s in enumerate(steps):
            if not isinstance(s, (SmallArcStep, LargeArcStep, TailStep)):
                raise InputError(f"step {i} has unknown type {type(s).__name__}")
            if not s.eps > 0.0:
                raise InputError(f"step {i}: eps must be positive, got {s.eps}")
            if isinstance(s, SmallArcStep) and not s.rho > 0.0:
                raise InputError(f"step {i}: rho must be positive, got {s.rho}")
            if isinstance(s, TailStep) and i != len(steps) - 1:
                raise InputError("a tail step must be the last step")

    def to_json_dict(self):
        out = []
        for s in self.steps:
            d = {"kind": s.kind, "eps": s.eps}
            if isinstance(s, SmallArcStep):
                d["rho"] = s.rho
            out.append(d)
        return {"steps": out}

    @classmethod
    def from_json_dict(cls, data):
        try:
            raw = data["steps"]
        except (TypeError, KeyError):
            raise InputError("schedule JSON must be an object with a 'steps' list")
        steps = []
        for i, d in enumerate(raw):
            kind = d.get("kind")
            if kind == "small_arc":
                steps.append(SmallArcStep(eps=float(d["eps"]), rho=float(d["rho"])))
            elif kind == "large_arc":
                steps.append(LargeArcStep(eps=float(d["eps"])))
            elif kind == "tail":
                steps.append(TailStep(eps=float(d["eps"])))
            else:
                raise InputError(f"step {i}: unknown kind {kind!r}")
        return cls(steps=tuple(steps))

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def preset_regular_schedule():
    """The hand-tuned schedule for near-regular profiles: three small-arc
    steps, four large-arc steps, then the tail, all with fixed eps/rho."""
    return Schedule(
        steps=(
            SmallArcStep(eps=0.23, rho=0.38),
            SmallArcStep(eps=0.23, rho=0.38),
            SmallArcStep(eps=0.23, rho=0.38),
            LargeArcStep(eps=0.184),
            LargeArcStep(eps=0.184),
            LargeArcStep(eps=0.184),
            LargeArcStep(eps=0.184),
            TailStep(eps=0.184),
        )
    )


@dataclass(frozen=True)
class TraceRow:
    k: int
    beta: float
    mass_ratio: float  # certified |C_beta| / |C_{pi/2}|, worst case
    mass_frac: float  # certified |C_beta| / n; 0.0 until an absolute bound exists
    step_kind: str
    cap_hit: str  # none | alpha_n | half_n
    status: str  # ok | infeasible | below_zero

    def to_json_dict(self):
        return {
            "k": self.k, "beta": self.beta, "mass_ratio": self.mass_ratio,
            "mass_frac": self.mass_frac, "step_kind": self.step_kind,
            "cap_hit": self.cap_hit, "status": self.status,
        }


@dataclass(frozen=True)
class AmplificationTrace:
    rows: tuple
    verdict: str  # pass | fail
    final_check_lhs: float
    final_check_rhs: float
    mode: str
    alpha: float
    reason: str = ""

    def to_json_dict(self):
        return {
            "rows": [r.to_json_dict() for r in self.rows],
            "verdict": self.verdict,
            "final_check_lhs": self.final_check_lhs,
            "final_check_rhs": self.final_check_rhs,
            "mode": self.mode,
            "alpha": self.alpha,
            "reason": self.reason,
        }

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "beta_k", "mass_frac", "step_kind"])
            for r in self.rows:
                w.writerow([r.k, repr(r.beta), repr(r.mass_frac), r.step_kind])


def _fail_trace(rows, rhs, mode, alpha, reason):
    return AmplificationTrace(
        rows=tuple(rows), verdict="fail", final_check_lhs=0.0,
        final_check_rhs=rhs, mode=mode, alpha=alpha, reason=reason,
    )


def _spend(x, paper_proof):
    # pi*x/2 dominates asin(x) on [0, 1], so the paper_proof variant is
    # strictly more conservative step by step
    if paper_proof:
        return 0.5 * math.pi * x
    return math.asin(x)


def _schedule_run(profile, schedule, mode, budget):
    alpha, cm, cp = profile.alpha, profile.c_minus, profile.c_plus
    paper_proof = mode == "paper_proof"
    gate = (1.0 + cp + alpha) / (2.0 * alpha) if alpha > 0.0 else math.inf
    beta = 0.5 * math.pi
    ratio = 1.0
    rows = [TraceRow(0, beta, 1.0, 0.0, "start", "none", "ok")]
    cap_candidates = []
    saw_small_arc = False
    main_lhs = None
    for i, step in enumerate(schedule.steps, start=1):
        if not step.eps < 1.0 + cm:
            raise ScheduleError(
                f"step {i}: eps={step.eps} must be below 1 + c_minus = {1.0 + cm}"
            )
        denom = 1.0 + cm - step.eps
        delta = step.eps / (cp - cm) if cp > cm else math.inf
        if isinstance(step, SmallArcStep):
            x = 2.0 * (1.0 + step.rho) * alpha / denom
            if x > 1.0:
                rows.append(TraceRow(i, beta, ratio, 0.0, step.kind, "none", "infeasible"))
                return _fail_trace(rows, budget, mode, alpha,
                                   f"step {i}: required sine {x:.4f} exceeds 1")
            beta_new = beta - _spend(x, paper_proof)
            if beta_new < 0.0:
                rows.append(TraceRow(i, beta_new, ratio, 0.0, step.kind, "none", "below_zero"))
                return _fail_trace(rows, budget, mode, alpha,
                                   f"step {i}: angle budget exhausted")
            ratio = ratio * (1.0 + delta) if math.isfinite(delta) else math.inf
            # scenario where the rho*alpha*n cap binds at this step: that
            # mass sits beyond beta_new and already contributes to the sum
            cap_candidates.append(step.rho * alpha * math.sin(beta_new) ** 2)
            saw_small_arc = True
            beta = beta_new
            rows.append(TraceRow(i, beta, ratio, 0.0, step.kind, "alpha_n", "ok"))
        else:
            if not (ratio >= gate or saw_small_arc):
                raise ScheduleError(
                    f"step {i}: large-arc step before the mass-ratio gate "
                    f"{gate:.4f} (ratio is {ratio:.4f} and no small-arc cap is available)"
                )
            x = 2.0 * (1.0 + cp + alpha) / (denom * ratio) if math.isfinite(ratio) else 0.0
            if isinstance(step, LargeArcStep):
                if x > 1.0:
                    rows.append(TraceRow(i, beta, ratio, 0.0, step.kind, "none", "infeasible"))
                    return _fail_trace(rows, budget, mode, alpha,
                                       f"step {i}: required sine {x:.4f} exceeds 1")
                beta_new = beta - _spend(x, paper_proof)
                if beta_new < 0.0:
                    rows.append(TraceRow(i, beta_new, ratio, 0.0, step.kind, "none", "below_zero"))
                    return _fail_trace(rows, budget, mode, alpha,
                                       f"step {i}: angle budget exhausted")
                ratio = ratio * (1.0 + delta) if math.isfinite(delta) else math.inf
                beta = beta_new
                rows.append(TraceRow(i, beta, ratio, 0.0, step.kind, "none", "ok"))
            else:  # TailStep
                if x > 1.0:
                    rows.append(TraceRow(i, beta, ratio, 0.0, step.kind, "none", "infeasible"))
                    return _fail_trace(rows, budget, mode, alpha,
                                       f"step {i}: required sine {x:.4f} exceeds 1")
                if x == 0.0:
                    total = 0.0
                elif paper_proof:
                    # closed form of the geometric series of pi*x/2 spends
                    if math.isfinite(delta):
                        total = 0.5 * math.pi * x * (1.0 + delta) / delta
                    else:
                        total = 0.5 * math.pi * x
                else:
                    total = 0.0
                    xj = x
                    j = 0
                    while xj > 1e-9 and j < 400:
                        total += math.asin(xj)
                        xj /= 1.0 + delta
                        j += 1
                    total += 0.5 * math.pi * xj / delta
                beta_new = beta - total
                if beta_new < 0.0:
                    rows.append(TraceRow(i, beta_new, ratio, 0.0, step.kind, "none", "below_zero"))
                    return _fail_trace(rows, budget, mode, alpha,
                                       f"step {i}: angle budget exhausted in the tail")
                beta = beta_new
                main_lhs = 0.5 * math.sin(beta) ** 2
                rows.append(TraceRow(i, beta, ratio, 0.5, step.kind, "half_n", "ok"))
    if main_lhs is None:
        return _fail_trace(rows, budget, mode, alpha,
                           "schedule has no tail step, so no absolute mass bound exists")
    lhs = min([main_lhs] + cap_candidates)
    if lhs > budget:
        return AmplificationTrace(
            rows=tuple(rows), verdict="pass", final_check_lhs=lhs,
            final_check_rhs=budget, mode=mode, alpha=alpha,
        )
    return AmplificationTrace(
        rows=tuple(rows), verdict="fail", final_check_lhs=lhs,
        final_check_rhs=budget, mode=mode, alpha=alpha,
        reason=f"certified mass {lhs:.6g} does not exceed the budget {budget:.6g}",
    )


def _auto_proof_run(profile, budget):
    """Aggregate replay of the sufficient-condition proof.

    Stage 1 (small-arc regime, eps = (1+c_minus)/2, rho = 1) spends at most
    (pi/4) * stage1_frac of angle, where stage1_frac bounds both the per-step
    cost times the step count and the leftover rounding step; the tail spends
    at most (pi/16) * condition1. The two scenario values are the alpha*n cap
    at the stage-1 angle and the half-mass bound at the final angle.
    """
    alpha, cm, cp = profile.alpha, profile.c_minus, profile.c_plus
    mode = "paper_proof"
    cond = theorem_condition(profile)
    rows = [TraceRow(0, 0.5 * math.pi, 1.0, 0.0, "start", "none", "ok")]
    if alpha > 0.2:
        return _fail_trace(rows, budget, mode, alpha, f"alpha={alpha} exceeds the 1/5 gate")
    if alpha == 0.0:
        return _fail_trace(rows, budget, mode, alpha,
                           "alpha = 0 leaves no strict margin over the zero budget")
    c1, c2 = cond.condition1, cond.condition2
    stage1_frac = max(16.0 * alpha / (1.0 + cm), c2)
    if c1 >= 1.0 or stage1_frac >= 1.0:
        return _fail_trace(
            rows, budget, mode, alpha,
            f"closed-form condition fails (condition1={c1:.4f}, stage1 fraction={stage1_frac:.4f})",
        )
    gate = (1.0 + cp + alpha) / (2.0 * alpha)
    beta_mid = 0.5 * math.pi - 0.25 * math.pi * stage1_frac
    beta_final = beta_mid - (math.pi / 16.0) * c1
    branch_lhs = alpha * math.sin(beta_mid) ** 2
    main_lhs = 0.5 * math.sin(beta_final) ** 2
    rows.append(TraceRow(1, beta_mid, gate, 0.0, "stage1", "alpha_n", "ok"))
    rows.append(TraceRow(2, beta_final, gate, 0.5, "tail", "half_n", "ok"))
    lhs = min(branch_lhs, main_lhs)
    if lhs > budget:
        return AmplificationTrace(
            rows=tuple(rows), verdict="pass", final_check_lhs=lhs,
            final_check_rhs=budget, mode=mode, alpha=alpha,
        )
    return AmplificationTrace(
        rows=tuple(rows), verdict="fail", final_check_lhs=lhs,
        final_check_rhs=budget, mode=mode, alpha=alpha,
        reason=f"certified mass {lhs:.6g} does not exceed the budget {budget:.6g}",
    )


def amplification_run(profile, schedule=None, mode="numeric", regular_mode=None):
    """Replay an amplification schedule against a profile.

    mode numeric uses exact asin spends and a truncated tail series; mode
    paper_proof replaces every asin(x) by its overestimate pi*x/2 and sums
    the tail in closed form, so it never passes where numeric mode fails.
    With schedule None, mode must be paper_proof and the aggregate replay of
    the closed-form proof is used. regular_mode (for the budget recursion)
    is auto-detected from c_minus == -alpha == -c_plus when not given.

    Returns a trace; infeasible steps and exhausted angle budgets are fail
    verdicts with the offending row marked, never exceptions. A large-arc
    step before its mass-ratio gate is a ScheduleError.
    """
    if mode not in ("numeric", "paper_proof"):
        raise InputError(f"mode must be 'numeric' or 'paper_proof', got {mode!r}")
    if schedule is None and mode != "paper_proof":
        raise InputError("numeric mode needs an explicit schedule")
    alpha, cm, cp = profile.alpha, profile.c_minus, profile.c_plus
    if regular_mode is None:
        regular_mode = alpha > 0.0 and cm == -alpha and cp == alpha
    start_row = TraceRow(0, 0.5 * math.pi, 1.0, 0.0, "start", "none", "ok")
    if cm <= -1.0:
        return _fail_trace([start_row], math.inf, mode, alpha,
                           "spectral window reaches -1: the graph may be disconnected")
    try:
        budget = order_param_bounds(alpha, regular_mode=regular_mode).s_budget
    except DomainError as exc:
        return _fail_trace([start_row], math.inf, mode, alpha, str(exc))
    if schedule is None:
        return _auto_proof_run(profile, budget)
    return _schedule_run(profile, schedule, mode, budget)


def max_alpha_regular(schedule, lo, hi, tol=1e-5):
    """Largest alpha in [lo, hi] (bisection to tol) certified for the
    regular-shape profile (alpha, -alpha, alpha).

    With an explicit schedule the run is numeric; with schedule None the
    aggregate paper_proof replay is used. The pass region is assumed to be
    an interval, verified by requiring a pass at lo and a fail at hi.
    """
    if not (0.0 <= lo < hi):
        raise InputError(f"need 0 <= lo < hi, got lo={lo}, hi={hi}")
    if not tol > 0.0:
        raise InputError(f"tol must be positive, got {tol}")

    def passes(a):
        prof = ExpanderProfile(n=1, d_ref=1.0, alpha=a, c_minus=-a, c_plus=a)
        if schedule is None:
            tr = amplification_run(prof, None, mode="paper_proof", regular_mode=True)
        else:
            tr = amplification_run(prof, schedule, mode="numeric", regular_mode=True)
        return tr.verdict == "pass"

    if not passes(lo):
        raise BracketError(f"amplification already fails at the lower endpoint {lo}")
    if passes(hi):
        raise BracketError(f"amplification still passes at the upper endpoint {hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            lo = mid
        else:
            hi = mid
    return lo


def min_ramanujan_degree(alpha_threshold):
    """Smallest d >= 3 with 2*sqrt(d-1)/d <= alpha_threshold.

    The spectral radius bound 2*sqrt(d-1)/d of an optimal d-regular graph
    is decreasing in d, so the answer is the ceiling of the closed-form
    root refined by a short upward scan.
    """
    t = float(alpha_threshold)
    if not (0.0 < t <= 1.0):
        raise InputError(f"threshold must lie in (0, 1], got {alpha_threshold}")
    # larger root of t^2 d^2 - 4d + 4 = 0
    root = (2.0 + 2.0 * math.sqrt(max(0.0, 1.0 - t * t))) / (t * t)
    d = max(3, int(root) - 2)
    while 2.0 * math.sqrt(d - 1.0) / d > t:
        d += 1
    return d

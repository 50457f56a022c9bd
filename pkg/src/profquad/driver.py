"""Worst-first adaptive integration that tracks verdicts across generations.

Sampling lives here rather than in the rule: the driver owns the integrand,
counts its evaluations and hands the endpoint values of a parent down to
its children when it bisects.
"""

from dataclasses import dataclass, field
import enum
import math

import numpy as np

from .criteria import analyze
from .profile import profile_from_values
from .rule import (
    GK21, IntegrandError, Interval, NonFiniteSampleError, local_estimate, map_knots,
)
from .verdict import VerdictKind, decide, needs_analysis

DEFAULT_LIMIT = 500
# generations a suspect verdict must survive on the child holding its locus
STABLE_GENERATIONS = 3


class Status(enum.Enum):
    CONVERGED = "Converged"
    SUSPECT_POINTS_REMAIN = "SuspectPointsRemain"
    LIMIT_REACHED = "LimitReached"

    def __str__(self):
        return self.value


class Sampler:
    """Evaluate an integrand on profile abscissas and count the calls.

    With ``vectorized=True`` the integrand receives a whole array of
    abscissas at once; otherwise it is called with one float at a time.
    """

    def __init__(self, f, rule=GK21, vectorized=False):
        self.f = f
        self.rule = rule
        self.vectorized = vectorized
        self.evaluations = 0

    def _eval(self, x):
        if self.vectorized:
            with np.errstate(all="ignore"):
                v = np.asarray(self.f(x), dtype=float)
            if v.shape != x.shape:
                v = np.broadcast_to(v, x.shape).astype(float)
            self.evaluations += x.shape[0]
        else:
            v = np.empty_like(x)
            for i, xi in enumerate(x):
                self.evaluations += 1
                try:
                    v[i] = self.f(float(xi))
                except (ArithmeticError, ValueError) as exc:
                    raise IntegrandError(float(xi), str(exc) or type(exc).__name__) from exc
        bad = np.flatnonzero(~np.isfinite(v))
        if bad.size:
            i = int(bad[0])
            raise NonFiniteSampleError(float(x[i]), value=float(v[i]))
        return v

    def __call__(self, iv, ends=None):
        """Profile values on ``iv``; ``ends = (f(a), f(b))`` skips the endpoints."""
        x = map_knots(self.rule, iv)
        if ends is None:
            return self._eval(x)
        v = np.empty_like(x)
        v[0], v[-1] = ends
        v[1:-1] = self._eval(x[1:-1])
        return v


def sample(f, iv, rule=GK21):
    """The ``2n+3`` profile values of ``f`` on ``iv``."""
    return Sampler(f, rule)(iv)


@dataclass(frozen=True)
class Assessment:
    """Everything the rule and the profile analysis say about one subrange."""

    iv: Interval
    values: np.ndarray = field(repr=False)
    est: object
    profile: object = field(repr=False)
    diagnosis: object
    verdict: object


def assess(rule, iv, values):
    """Estimate, profile, criteria (when needed) and verdict for one subrange."""
    x = map_knots(rule, iv)
    est = local_estimate(rule, values[1:-1], iv)
    prof = profile_from_values(rule, x, values, est.f_bar)
    diag = analyze(prof) if needs_analysis(est, prof) else None
    return Assessment(iv, values, est, prof, diag, decide(est, prof, diag))


@dataclass(frozen=True)
class SubrangeRecord:
    iv: Interval
    est: object
    verdict: object
    generation: int
    parent_verdict: object = None
    stable: bool = False
    suspect_streak: int = 0
    accepted: bool = False
    assessment: Assessment = field(default=None, repr=False, compare=False)

    @property
    def reliable(self):
        return self.verdict.reliable

    def locus_point(self):
        """Abscissa of the first reported locus, or None without reports."""
        diag = self.assessment.diagnosis if self.assessment else None
        if not diag or not diag.reports:
            return None
        prof = self.assessment.profile
        xs = [prof.abscissas[prof.position(lab)] for lab in diag.reports[0].locus]
        return float(np.mean(xs))


@dataclass(frozen=True)
class AdaptiveResult:
    Q: float
    E: float
    status: Status
    ledger: tuple
    evaluations: int
    bisections: int = 0

    @property
    def converged(self):
        return self.status is Status.CONVERGED

    @property
    def worst_verdict(self):
        """Least favourable leaf verdict kind, in declaration order of severity."""
        order = [
            VerdictKind.UNRESOLVED,
            VerdictKind.INACCURATE_MONOTONE,
            VerdictKind.SUSPECT_ISOLATED_POINT,
            VerdictKind.RELIABLE_VALIDATED,
            VerdictKind.RELIABLE_ACCURATE,
        ]
        kinds = {r.verdict.kind for r in self.ledger}
        return next(k for k in order if k in kinds)


def _child(parent, a):
    """Record for a child, carrying the suspect streak when the locus follows."""
    v = a.verdict
    streak = 0
    if v.kind is VerdictKind.SUSPECT_ISOLATED_POINT:
        streak = 1
        pt = parent.locus_point()
        if (
            parent.verdict.kind is VerdictKind.SUSPECT_ISOLATED_POINT
            and pt is not None
            and a.iv.a <= pt <= a.iv.b
        ):
            streak = parent.suspect_streak + 1
    return SubrangeRecord(
        iv=a.iv,
        est=a.est,
        verdict=v,
        generation=parent.generation + 1,
        parent_verdict=parent.verdict,
        stable=v.kind is parent.verdict.kind,
        suspect_streak=streak,
        accepted=streak >= STABLE_GENERATIONS,
        assessment=a,
    )


def _splittable(rec):
    a, b = rec.iv.a, rec.iv.b
    return a < rec.iv.c < b


def integrate(f, iv, eps_abs=0.0, eps_rel=1e-10, max_subdivisions=DEFAULT_LIMIT,
              rule=GK21, vectorized=False):
    """Adaptive integral of ``f`` over ``iv``.

    Leaves are bisected worst-first by their combined estimate (ties go to
    the leftmost) until the summed estimate meets the tolerance and every
    leaf is reliable. Unreliable leaves keep being split even when the
    tolerance is already met. A leaf whose isolated-point suspicion follows
    its locus through ``STABLE_GENERATIONS`` generations is accepted as is.
    """
    if eps_abs < 0 or eps_rel < 0 or (eps_abs == 0 and eps_rel == 0):
        raise ValueError("tolerances must be non-negative and not both zero")
    if max_subdivisions < 1:
        raise ValueError("max_subdivisions must be at least 1")
    if not isinstance(iv, Interval):
        iv = Interval(*iv)

    sampler = Sampler(f, rule, vectorized)
    root = assess(rule, iv, sampler(iv))
    streak = 1 if root.verdict.kind is VerdictKind.SUSPECT_ISOLATED_POINT else 0
    leaves = [SubrangeRecord(root.iv, root.est, root.verdict, 0,
                             suspect_streak=streak, assessment=root)]
    bisections = 0
    mid = rule.n + 1

    while True:
        Q = math.fsum(r.est.q2n for r in leaves)
        E = math.fsum(r.est.e2n for r in leaves)
        met = E <= max(eps_abs, eps_rel * abs(Q))
        pending = [r for r in leaves if not r.reliable and not r.accepted]
        if met and not pending:
            accepted = any(r.accepted for r in leaves)
            status = Status.SUSPECT_POINTS_REMAIN if accepted else Status.CONVERGED
            break
        if bisections >= max_subdivisions:
            status = Status.LIMIT_REACHED
            break
        pool = pending if met else [r for r in leaves if not r.accepted]
        pool = [r for r in pool if _splittable(r)]
        if not pool:
            status = Status.SUSPECT_POINTS_REMAIN if met else Status.LIMIT_REACHED
            break

        worst = max(pool, key=lambda r: (r.est.e2n, -r.iv.a))
        i = leaves.index(worst)
        v = worst.assessment.values
        left_iv, right_iv = worst.iv.split()
        left = assess(rule, left_iv, sampler(left_iv, ends=(v[0], v[mid])))
        right = assess(rule, right_iv, sampler(right_iv, ends=(v[mid], v[-1])))
        leaves[i:i + 1] = [_child(worst, left), _child(worst, right)]
        bisections += 1

    return AdaptiveResult(Q, E, status, tuple(leaves), sampler.evaluations, bisections)

"""Per-subrange decision from the local estimate and the profile diagnosis."""

from dataclasses import dataclass
import enum

SKIP_THRESHOLD = 2.0 ** -18  # relative estimate below which validation is skipped
MONOTONE_INACCURATE = 0.5  # e2n / |q2n| above which a monotone profile is rejected


class VerdictKind(enum.Enum):
    RELIABLE_ACCURATE = "ReliableAccurate"
    RELIABLE_VALIDATED = "ReliableValidated"
    SUSPECT_ISOLATED_POINT = "SuspectIsolatedPoint"
    UNRESOLVED = "Unresolved"
    INACCURATE_MONOTONE = "InaccurateMonotone"

    @property
    def reliable(self):
        return self in (VerdictKind.RELIABLE_ACCURATE, VerdictKind.RELIABLE_VALIDATED)


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    lambda_: int = 0

    @property
    def flag(self):
        return 0 if self.kind.reliable else 1

    @property
    def reliable(self):
        return self.kind.reliable

    def __str__(self):
        return self.kind.value


def accurate_enough(est, threshold=SKIP_THRESHOLD):
    """Is the estimate small enough to trust without looking at the profile?"""
    if est.q2n == 0.0:
        return est.e2n <= est.e_roff
    return abs(est.e2n / est.q2n) <= threshold


def monotone_inaccurate(est, profile):
    return profile.is_monotone and est.e2n > MONOTONE_INACCURATE * abs(est.q2n)


def needs_analysis(est, profile):
    return not (accurate_enough(est) or monotone_inaccurate(est, profile))


def from_lambda(lam):
    if lam == 0:
        return Verdict(VerdictKind.RELIABLE_VALIDATED, 0)
    if lam <= 2:
        return Verdict(VerdictKind.SUSPECT_ISOLATED_POINT, lam)
    return Verdict(VerdictKind.UNRESOLVED, lam)


def decide(est, profile, diag=None):
    """Five-way decision; ``diag`` is required unless a skip rule applies."""
    if accurate_enough(est):
        return Verdict(VerdictKind.RELIABLE_ACCURATE, 0)
    if monotone_inaccurate(est, profile):
        return Verdict(VerdictKind.INACCURATE_MONOTONE, 0)
    if diag is None:
        raise ValueError("profile diagnosis required: no skip rule applies")
    v = from_lambda(diag.lambda_)
    diag.verdict = v.kind
    return v

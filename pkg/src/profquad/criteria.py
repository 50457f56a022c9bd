"""Consistency criteria for integrand profiles and the ill-conditioning pointer.

Each ``criterion_*`` function inspects an :class:`~profquad.profile.IntegrandProfile`
and returns a list of :class:`CriterionReport`; one report is one infringement.
Loci are knot labels (endpoints are ``-(n+1)`` and ``n+1``).
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .profile import KnotClass, classify_extremal_knot
from .rule import EPS0

AREA_RATIO = 10.0  # t_1
JUMP_RATIO = 10.0  # t_jmp away from inflections
JUMP_RATIO_AT_MAX = 5.0  # next to an inflection where f' peaks
JUMP_RATIO_AT_MIN = 50.0  # next to an inflection where f' bottoms out
# divided differences below this fraction of the largest one in the run are
# treated as vanishing and never enter a jump ratio
VANISHING_SLOPE = 0.03
ROUNDOFF_FACTOR = 50.0
# knots on the lateral side of an extremum that must be free of turning points
ISOLATION_REACH = 3
# an end run longer than this many knots is a boundary-truncated lobe
END_RUN_SPAN = 2
# curvature is only compared over knots at least this fraction of the
# extremum's distance from the mean line
LOBE_CORE = 0.5

ORDER = ("I", "IIa", "IIb", "III", "IV", "V", "VI")


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    locus: tuple
    detail: dict = field(default_factory=dict, compare=False)
    side: str = ""

    def __str__(self):
        if len(self.locus) == 1:
            where = f"y{self.locus[0]}"
        else:
            where = f"[y{self.locus[0]}, y{self.locus[1]}]"
        side = f" ({self.side})" if self.side else ""
        return f"{self.criterion} at {where}{side}"


@dataclass
class ReliabilityDiagnosis:
    reports: list
    verdict: object = None

    @property
    def lambda_(self):
        return len(self.reports)

    def by_criterion(self, criterion):
        return [r for r in self.reports if r.criterion == criterion]

    def counts(self):
        return {c: len(self.by_criterion(c)) for c in ORDER}


# --------------------------------------------------------------------------
# helpers


def _cuts(profile):
    """Turning points bracketed by the two endpoints."""
    return [0, *profile.extrema.tolist(), profile.size - 1]


def _distance(profile, pos):
    return abs(profile.values[pos] - profile.f_bar)


def _inner_crosses(profile, p, q):
    # a monotone run crosses the line iff its ends are not strictly on one side
    return profile.side(p) * profile.side(q) <= 0


def _end_diverges(profile, end, turn):
    # walking inward from the endpoint the profile moves away from the mean
    # line, never meets it, and turns within END_RUN_SPAN knots at a point the
    # line isolates from a neighbour; longer runs are just a well-sampled lobe
    # cut off by the boundary
    s_end, s_turn = profile.side(end), profile.side(turn)
    if not (s_end * s_turn > 0 and _distance(profile, turn) > _distance(profile, end)):
        return False
    if abs(turn - end) > END_RUN_SPAN:
        return False
    return classify_extremal_knot(profile, turn) is not KnotClass.REGULAR


def _run_passes_alternation(profile, p, q):
    last = profile.size - 1
    if p == 0:
        return not _end_diverges(profile, 0, q)
    if q == last:
        return not _end_diverges(profile, last, p)
    return _inner_crosses(profile, p, q)


def _crossing_abscissa(profile, p, q):
    """Abscissa where the piecewise-linear profile meets the mean line in [p, q].

    Returns None when the run stays strictly on one side.
    """
    x, d = profile.abscissas, profile.values - profile.f_bar
    for k in range(p, q):
        if d[k] == 0.0:
            return x[k]
        if d[k] * d[k + 1] < 0.0:
            return x[k] + (x[k + 1] - x[k]) * d[k] / (d[k] - d[k + 1])
    if d[q] == 0.0:
        return x[q]
    return None


def _signed_area(profile, xs, xe):
    """Compound trapezoid area between profile and mean line over [xs, xe]."""
    x, d = profile.abscissas, profile.values - profile.f_bar
    inner = (x > xs) & (x < xe)
    pts = np.concatenate(([xs], x[inner], [xe]))
    vals = np.interp(pts, x, d)
    return float(np.trapezoid(vals, pts))


def _lobe(profile, cuts, j):
    """Signed area of the lobe around turning point ``cuts[j]``."""
    x = profile.abscissas
    left = x[cuts[0]]
    if j > 0:
        c = _crossing_abscissa(profile, cuts[j - 1], cuts[j])
        left = x[cuts[j - 1]] if c is None else c
    right = x[cuts[-1]]
    if j < len(cuts) - 1:
        c = _crossing_abscissa(profile, cuts[j], cuts[j + 1])
        right = x[cuts[j + 1]] if c is None else c
    return _signed_area(profile, left, right)


def cubic_lateral_derivative(xm1, x0, x1, x2, fm1, f0, f1, f2):
    """Derivative at ``x0`` of the cubic through four points.

    Written in the divided-difference form used by the lateral derivative
    test; passing the points in mirrored order gives the left-lateral value.
    """
    h10 = x1 - x0
    h0m1 = x0 - xm1
    h20 = x2 - x0
    h21 = x2 - x1
    h1m1 = x1 - xm1
    h2m1 = x2 - xm1
    d10 = (f1 - f0) / h10
    d20 = (f2 - f0) / h20
    d0m1 = (f0 - fm1) / h0m1
    d2_21 = (d20 - d10) / h21
    d2_1m1 = (d10 - d0m1) / h1m1
    return d10 - h10 / h2m1 * (h0m1 * d2_21 + h20 * d2_1m1)


def _lateral_windows(profile, pos, reach=ISOLATION_REACH):
    """Yield ``(side, (i_-1, i_0, i_1, i_2))`` for each isolated direction.

    The right window is ``pos-1 .. pos+2``; the left one mirrors it. A
    direction qualifies when no other turning point lies within ``reach``
    knots on that side or on the adjacent knot of the other side.
    """
    ext = set(profile.extrema.tolist())
    last = profile.size - 1
    right = {pos - 1, *range(pos + 1, pos + reach + 1)}
    left = {pos + 1, *range(pos - reach, pos)}
    if pos + 2 <= last and not ext & right:
        yield "right", (pos - 1, pos, pos + 1, pos + 2)
    if pos - 2 >= 0 and not ext & left:
        yield "left", (pos + 1, pos, pos - 1, pos - 2)


# --------------------------------------------------------------------------
# criteria


def _shifted_coarse_extremum(profile, pos, coarse):
    # the coarse sampling cannot place a turning point on an even knot; a
    # coarse extremum of the same kind on an adjacent knot that is not itself
    # a fine turning point is the same one, seen one knot off
    v = profile.values
    fine = set(profile.extrema.tolist())
    is_max = v[pos] > v[pos - 1]
    for c in (pos - 1, pos + 1):
        if c in coarse and c not in fine and (v[c] > v[c - 2]) == is_max:
            return True
    return False


def criterion_I(profile, prior_coarse_extrema=None):
    """Refinement must not create new gray or sensitive extrema in dense regions."""
    coarse = profile.coarse_extrema if prior_coarse_extrema is None else prior_coarse_extrema
    coarse = set(np.asarray(coarse).tolist())
    out = []
    for pos in profile.extrema.tolist():
        if not profile.is_dense(pos) or pos in coarse:
            continue
        if _shifted_coarse_extremum(profile, pos, coarse):
            continue
        cls = classify_extremal_knot(profile, pos)
        if cls is not KnotClass.REGULAR:
            out.append(CriterionReport("I", (profile.label(pos),), {"class": cls.value}))
    return out


def criterion_IIa(profile):
    """Inner runs must cross the mean line; end runs must not run away from it."""
    if profile.is_monotone:
        return []
    cuts = _cuts(profile)
    last = profile.size - 1
    out = []
    for p, q in zip(cuts[:-1], cuts[1:]):
        if p == 0:
            bad = _end_diverges(profile, 0, q)
        elif q == last:
            bad = _end_diverges(profile, last, p)
        else:
            bad = not _inner_crosses(profile, p, q)
        if bad:
            out.append(
                CriterionReport(
                    "IIa",
                    (profile.label(p), profile.label(q)),
                    {"start": float(profile.values[p]), "end": float(profile.values[q])},
                    "end" if p == 0 or q == last else "inner",
                )
            )
    return out


def criterion_IIb(profile, t1=AREA_RATIO):
    """Gray extrema that alternate properly must still stand clear of the line."""
    if profile.is_monotone:
        return []
    cuts = _cuts(profile)
    out = []
    # both neighbours must be turning points; an endpoint only truncates a lobe
    for j in range(2, len(cuts) - 2):
        pos = cuts[j]
        if classify_extremal_knot(profile, pos) is KnotClass.REGULAR:
            continue
        lpos, rpos = cuts[j - 1], cuts[j + 1]
        if not (_run_passes_alternation(profile, lpos, pos)
                and _run_passes_alternation(profile, pos, rpos)):
            continue
        d0 = _distance(profile, pos)
        if not (d0 < _distance(profile, lpos) and d0 < _distance(profile, rpos)):
            continue
        a0 = _lobe(profile, cuts, j)
        al = _lobe(profile, cuts, j - 1)
        ar = _lobe(profile, cuts, j + 1)
        if t1 * abs(a0) < abs(al + ar):
            out.append(
                CriterionReport("IIb", (profile.label(pos),), {"a0": a0, "al": al, "ar": ar})
            )
    return out


def criterion_III(profile):
    """Fine and coarse samplings must see the same number of zeros in dense regions."""
    out = []
    for (lo, hi), nf, nc in zip(
        profile.regions, profile.fine_zero_counts, profile.coarse_zero_counts
    ):
        if nf == nc:
            continue
        v = profile.values
        where = [
            (profile.label(k), profile.label(k + 1))
            for k in range(lo, hi)
            if _kernels.crossings(v[k:k + 2], profile.f_bar)
        ]
        out.append(
            CriterionReport(
                "III",
                (profile.label(lo), profile.label(hi)),
                {"fine": nf, "coarse": nc, "subranges": where},
            )
        )
    return out


def _window(profile, idx):
    x = profile.abscissas
    v = profile.values
    return [x[i] for i in idx], [v[i] for i in idx]


def criterion_IV(profile):
    """At isolated extrema the fine lateral slope must be flatter than the coarse one."""
    out = []
    for pos in profile.extrema.tolist():
        for side, idx in _lateral_windows(profile, pos):
            (xm1, x0, x1, x2), (fm1, f0, f1, f2) = _window(profile, idx)
            fine = cubic_lateral_derivative(xm1, x0, x1, x2, fm1, f0, f1, f2)
            coarse = (f2 - f0) / (x2 - x0)
            # opposite signs put the true turning point inside the window,
            # where the lateral slopes are not comparable
            if fine * coarse > 0.0 and abs(fine) >= abs(coarse):
                out.append(
                    CriterionReport(
                        "IV", (profile.label(pos),), {"fine": fine, "coarse": coarse}, side
                    )
                )
    return out


def curvature_product(xm1, x0, x1, x2, fm1, f0, f1, f2):
    d20 = (f2 - f0) / (x2 - x0)
    d10 = (f1 - f0) / (x1 - x0)
    d0m1 = (f0 - fm1) / (x0 - xm1)
    return (d20 - d10) * (d10 - d0m1)


def _in_lobe_core(profile, idx, fraction=LOBE_CORE):
    """Do the lateral knots stay on the extremum's side, well clear of the line?"""
    pos = idx[1]
    s0 = profile.side(pos)
    d0 = _distance(profile, pos)
    return all(
        profile.side(i) == s0 and _distance(profile, i) >= fraction * d0 for i in idx[2:]
    )


def criterion_V(profile):
    """Curvature at isolated extrema must keep its sign across the window."""
    out = []
    for pos in profile.extrema.tolist():
        for side, idx in _lateral_windows(profile, pos):
            # past the lobe core the curvature may turn legitimately
            if not _in_lobe_core(profile, idx):
                continue
            (xm1, x0, x1, x2), (fm1, f0, f1, f2) = _window(profile, idx)
            prod = curvature_product(xm1, x0, x1, x2, fm1, f0, f1, f2)
            if prod <= 0.0:
                out.append(
                    CriterionReport("V", (profile.label(pos),), {"product": prod}, side)
                )
    return out


def _jump_threshold(d, k):
    """Jump ratio allowed between divided differences ``k`` and ``k+1`` of a run.

    A sign change of the second differences is an inflection; it counts as a
    first-derivative maximum when ``|d|`` peaks there and as a minimum when
    ``|d|`` bottoms out.
    """
    d = np.abs(d)

    def turn(i, sign):
        return 0 < i < d.size - 1 and sign * (d[i] - d[i - 1]) > 0 and sign * (d[i] - d[i + 1]) > 0

    if turn(k, 1) or turn(k + 1, 1):
        return JUMP_RATIO_AT_MAX
    if turn(k, -1) or turn(k + 1, -1):
        return JUMP_RATIO_AT_MIN
    return JUMP_RATIO


def _vanishing_tail(ad, fraction=VANISHING_SLOPE):
    """Mask of slopes that fade out toward either end of a monotone run.

    A slope belongs to a tail when the magnitudes shrink strictly all the
    way from it to the run end; it is vanishing when it also falls below
    ``fraction`` of the largest slope in the run.
    """
    n = ad.size
    tail = np.zeros(n, dtype=bool)
    k = 0
    while k + 1 < n and ad[k] < ad[k + 1]:
        tail[k] = True
        k += 1
    k = n - 1
    while k - 1 >= 0 and ad[k] < ad[k - 1]:
        tail[k] = True
        k -= 1
    return tail & (ad < fraction * ad.max())


def criterion_VI(profile, eps0=EPS0):
    """No jumps between successive slopes inside a monotone run."""
    ext = set(profile.extrema.tolist())
    x, v = profile.abscissas, profile.values
    scale = float(np.max(np.abs(v)))
    out = []
    for p, q in profile.monotone_subranges:
        if q - p < 2:
            continue
        d = np.asarray(_kernels.divided_differences(x[p:q + 1], v[p:q + 1]))
        ad = np.abs(d)
        gaps = np.diff(x[p:q + 1])
        fading = _vanishing_tail(ad)
        for k in range(d.size - 1):
            small = k if ad[k] <= ad[k + 1] else k + 1
            if fading[small]:
                continue
            if ad[small] * gaps[small] < ROUNDOFF_FACTOR * eps0 * scale:
                continue
            # the slope next to a turning point is expected to vanish
            if (small == 0 and p in ext) or (small == d.size - 1 and q in ext):
                continue
            ratio = max(ad[k], ad[k + 1]) / ad[small]
            t = _jump_threshold(d, k)
            if ratio > t:
                out.append(
                    CriterionReport(
                        "VI",
                        (profile.label(p + k), profile.label(p + k + 2)),
                        {"ratio": float(ratio), "threshold": t},
                    )
                )
    return out


def analyze(profile, prior_coarse_extrema=None):
    """Run all criteria in order and collect every infringement."""
    reports = []
    reports += criterion_I(profile, prior_coarse_extrema)
    reports += criterion_IIa(profile)
    reports += criterion_IIb(profile)
    reports += criterion_III(profile)
    reports += criterion_IV(profile)
    reports += criterion_V(profile)
    reports += criterion_VI(profile)
    return ReliabilityDiagnosis(reports)

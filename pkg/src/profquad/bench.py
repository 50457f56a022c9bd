"""Parametric benchmark families, single-rule and adaptive sweeps, reports.

Six families with closed forms:

* ``POW``: x**n on [0, 1], n = 0..1023
* ``ATG``: 1/(1 + x**2) on [0, b], b = n = 1..10000
* ``C1``/``S1``: exp(p (x - x0)) cos/sin(w x) on [-1, 1]
* ``C2``/``S2``: 2 exp(-p x0) cosh/sinh(p x) cos/sin(w x) on [0, 1]

with w = n pi / 60, n = 0..6000, p = 1 and x0 = -1. C1/C2 (and S1/S2) are
algebraically equivalent forms of the same integral.

Three acceptance pipelines run on the same engine:

* ``alpha``: accept when e_qdp / |q2n| is below ``ALPHA_TOLERANCE``
* ``beta``: accept when e2n / |q2n| is below ``BETA_TOLERANCE``
* ``gamma``: the full verdict, profile criteria included
"""

from dataclasses import dataclass, replace
import csv
import io
import math

import numpy as np

from .driver import Sampler, Status, assess, integrate
from .rule import GK21, Interval, local_estimate
from .verdict import VerdictKind

FAMILIES = ("POW", "ATG", "C1", "S1", "C2", "S2")
OSCILLATORY = ("C1", "S1", "C2", "S2")
PIPELINES = ("alpha", "beta", "gamma")
MODES = ("single", "adaptive")

P = 1.0
X0 = -1.0

# relative-estimate tolerances that reproduce the reference codes' basins
ALPHA_TOLERANCE = 5e-3
BETA_TOLERANCE = 5.5e-3

# subdivision check of a reliable claim: refine both halves to this fraction
# of the claimed error, with at most this many bisections per half
CONFIRM_FRACTION = 0.1
CONFIRM_LIMIT = 200

CSV_COLUMNS = (
    "parameter", "q2n", "I", "eps_Q", "rho_qdp", "rho_2n",
    "lambda", "verdict", "corrected_verdict", "plot_window",
)
REFUTED = "RefutedBySubdivision"


def omega(n):
    return n * math.pi / 60.0


def _closed_cos(w, p=P, x0=X0):
    return 2.0 * math.exp(-p * x0) * (
        p * math.sinh(p) * math.cos(w) + w * math.cosh(p) * math.sin(w)
    ) / (w * w + p * p)


def _closed_sin(w, p=P, x0=X0):
    return 2.0 * math.exp(-p * x0) * (
        p * math.cosh(p) * math.sin(w) - w * math.sinh(p) * math.cos(w)
    ) / (w * w + p * p)


@dataclass(frozen=True)
class FamilySpec:
    family_id: str
    grid: range
    plot_window: int
    lower: float
    upper_fn: object
    integrand_fn: object
    exact_fn: object

    def interval(self, n):
        return Interval(self.lower, self.upper_fn(n))

    def integrand(self, n):
        """Vectorized integrand for parameter ``n``."""
        return self.integrand_fn(n)

    def exact(self, n):
        return self.exact_fn(n)


def _pow_f(n):
    return lambda x: np.power(x, n)


def _atg_f(n):
    return lambda x: 1.0 / (x * x + 1.0)


def _c1_f(n):
    w = omega(n)
    return lambda x: np.exp(P * (x - X0)) * np.cos(w * x)


def _s1_f(n):
    w = omega(n)
    return lambda x: np.exp(P * (x - X0)) * np.sin(w * x)


def _c2_f(n):
    w = omega(n)
    return lambda x: 2.0 * math.exp(-P * X0) * np.cosh(P * x) * np.cos(w * x)


def _s2_f(n):
    w = omega(n)
    return lambda x: 2.0 * math.exp(-P * X0) * np.sinh(P * x) * np.sin(w * x)


_OSC_GRID = range(0, 6001)
_SPECS = {
    "POW": FamilySpec("POW", range(0, 1024), 200, 0.0, lambda n: 1.0, _pow_f,
                      lambda n: 1.0 / (n + 1)),
    "ATG": FamilySpec("ATG", range(1, 10001), 260, 0.0, float, _atg_f, math.atan),
    "C1": FamilySpec("C1", _OSC_GRID, 1080, -1.0, lambda n: 1.0, _c1_f,
                     lambda n: _closed_cos(omega(n))),
    "S1": FamilySpec("S1", _OSC_GRID, 1080, -1.0, lambda n: 1.0, _s1_f,
                     lambda n: _closed_sin(omega(n))),
    "C2": FamilySpec("C2", _OSC_GRID, 1080, 0.0, lambda n: 1.0, _c2_f,
                     lambda n: _closed_cos(omega(n))),
    "S2": FamilySpec("S2", _OSC_GRID, 1080, 0.0, lambda n: 1.0, _s2_f,
                     lambda n: _closed_sin(omega(n))),
}


def family(name):
    """The :class:`FamilySpec` for a family id (case-insensitive)."""
    try:
        return _SPECS[name.upper()]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}") from None


def _ratio(num, den):
    num = abs(num)
    if num == 0.0:
        return 0.0
    return num / abs(den) if den != 0.0 else math.inf


@dataclass(frozen=True)
class SweepRow:
    family: str
    pipeline: str
    parameter: int
    q2n: float
    e2n: float
    e_qdp: float
    exact: float
    verdict: str
    reliable: bool
    lambda_: object = None
    corrected_verdict: object = None
    corrected_reliable: object = None
    plot_window: bool = True

    @property
    def e_Q(self):
        return self.exact - self.q2n

    @property
    def eps_Q(self):
        return _ratio(self.e_Q, self.exact)

    @property
    def rho_qdp(self):
        return _ratio(self.e_qdp, self.q2n)

    @property
    def rho_2n(self):
        return _ratio(self.e2n, self.q2n)

    @property
    def claimed_error(self):
        """The estimate the pipeline stands behind when it accepts the row."""
        return self.e_qdp if self.pipeline == "alpha" else self.e2n

    @property
    def final_reliable(self):
        return self.reliable if self.corrected_reliable is None else self.corrected_reliable


def confirm_by_subdivision(f, iv, est, rule=GK21, vectorized=True):
    """Check a reliable claim ``(q2n, e2n)`` by refining both halves of ``iv``.

    The claim stands when the refined value is trustworthy (both halves
    converge) and lies within the claimed error of ``q2n`` once the refined
    error is added. A claim sitting on the roundoff floor cannot be refined
    below that floor; there only the agreement itself is required.
    """
    roundoff_bound = est.e2n <= est.e_roff
    tol = est.e2n * (2.0 if roundoff_bound else CONFIRM_FRACTION)
    tol = max(0.5 * tol, np.finfo(float).tiny)
    halves = [
        integrate(f, h, eps_abs=tol, eps_rel=0.0, max_subdivisions=CONFIRM_LIMIT,
                  rule=rule, vectorized=vectorized)
        for h in iv.split()
    ]
    if any(r.status is not Status.CONVERGED for r in halves):
        return False
    Q = math.fsum(r.Q for r in halves)
    E = math.fsum(r.E for r in halves)
    gap = abs(Q - est.q2n)
    if roundoff_bound:
        return gap <= est.e2n
    return gap + E <= est.e2n


def _row(spec, pipeline, n, rule, adaptive):
    iv = spec.interval(n)
    f = spec.integrand(n)
    values = Sampler(f, rule, vectorized=True)(iv)
    exact = spec.exact(n)
    in_window = n <= spec.plot_window
    if pipeline == "gamma":
        a = assess(rule, iv, values)
        est, v = a.est, a.verdict
        lam = a.diagnosis.lambda_ if a.diagnosis is not None else 0
        row = SweepRow(spec.family_id, pipeline, n, est.q2n, est.e2n, est.e_qdp, exact,
                       str(v), v.reliable, lam, plot_window=in_window)
        if adaptive:
            if v.reliable and confirm_by_subdivision(f, iv, est, rule):
                row = replace(row, corrected_verdict=str(v), corrected_reliable=True)
            elif v.reliable:
                row = replace(row, corrected_verdict=REFUTED, corrected_reliable=False)
            else:
                row = replace(row, corrected_verdict=str(v), corrected_reliable=False)
        return row

    est = local_estimate(rule, values[1:-1], iv)
    if pipeline == "alpha":
        ok = _ratio(est.e_qdp, est.q2n) <= ALPHA_TOLERANCE
    else:
        ok = _ratio(est.e2n, est.q2n) <= BETA_TOLERANCE
    return SweepRow(spec.family_id, pipeline, n, est.q2n, est.e2n, est.e_qdp, exact,
                    "Accepted" if ok else "Rejected", ok, plot_window=in_window)


def run_sweep(spec, mode="single", pipeline="gamma", params=None, rule=GK21):
    """One :class:`SweepRow` per parameter value, in grid order.

    ``mode="adaptive"`` additionally checks every reliable gamma verdict by
    subdivision and records the corrected verdict.
    """
    if isinstance(spec, str):
        spec = family(spec)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if pipeline not in PIPELINES:
        raise ValueError(f"pipeline must be one of {PIPELINES}, got {pipeline!r}")
    grid = spec.grid if params is None else params
    adaptive = mode == "adaptive"
    return [_row(spec, pipeline, int(n), rule, adaptive) for n in grid]


def accuracy_basin(rows):
    """``(n_max, monotone_threshold)`` of an ordered sweep.

    ``n_max`` is the largest parameter up to which every row is reliable,
    -1 when the first row already fails. ``monotone_threshold`` is the first
    parameter rejected outright as an inaccurate monotone profile, or None.
    """
    if not rows:
        raise ValueError("accuracy_basin needs at least one row")
    n_max = -1
    for r in rows:
        if not r.reliable:
            break
        n_max = r.parameter
    kind = VerdictKind.INACCURATE_MONOTONE.value
    threshold = next((r.parameter for r in rows if r.verdict == kind), None)
    return n_max, threshold


def spurious_count(rows):
    """``(primary, corrected)`` counts of reliable rows whose true error exceeds the claim."""
    primary = sum(1 for r in rows if r.reliable and abs(r.e_Q) > r.claimed_error)
    corrected = sum(1 for r in rows if r.final_reliable and abs(r.e_Q) > r.claimed_error)
    return primary, corrected


def _num(x):
    return format(float(x), ".17g")


def _csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([
            r.parameter, _num(r.q2n), _num(r.exact), _num(r.eps_Q), _num(r.rho_qdp),
            _num(r.rho_2n), "" if r.lambda_ is None else r.lambda_, r.verdict,
            "" if r.corrected_verdict is None else r.corrected_verdict, int(r.plot_window),
        ])
    return buf.getvalue()


def summarize(rows):
    """Basin and spurious counts per (family, pipeline), in first-seen order."""
    groups = {}
    for r in rows:
        groups.setdefault((r.family, r.pipeline), []).append(r)
    out = {}
    for key, rs in groups.items():
        n_max, threshold = accuracy_basin(rs)
        primary, corrected = spurious_count(rs)
        checked = any(r.corrected_reliable is not None for r in rs)
        out[key] = {
            "basin": n_max,
            "monotone_threshold": threshold,
            "spurious": primary,
            "spurious_corrected": corrected if checked else None,
        }
    return out


def _table(rows):
    summary = summarize(rows)
    fams = list(dict.fromkeys(f for f, _ in summary))
    pipes = [p for p in PIPELINES if any(q == p for _, q in summary)]
    head = ["family"] + [f"basin_{p}" for p in pipes] + [f"spurious_{p}" for p in pipes]
    lines = []
    for fam in fams:
        cells = [fam]
        for p in pipes:
            s = summary.get((fam, p))
            cells.append("-" if s is None else str(s["basin"]))
        for p in pipes:
            s = summary.get((fam, p))
            if s is None:
                cells.append("-")
            elif s["spurious_corrected"] is None:
                cells.append(str(s["spurious"]))
            else:
                cells.append(f"{s['spurious']} ({s['spurious_corrected']})")
        lines.append(cells)
    widths = [max(len(c) for c in col) for col in zip(head, *lines)]
    fmt = "  ".join(f"{{:<{w}}}" if i == 0 else f"{{:>{w}}}" for i, w in enumerate(widths))
    return "\n".join(fmt.format(*r) for r in [head, *lines]) + "\n"


def emit_report(rows, format="csv", sink=None):
    """Render rows as CSV or as the basin/spurious summary table.

    Returns the UTF-8 bytes; when ``sink`` (a path or binary file object) is
    given the bytes are also written there.
    """
    if not rows:
        raise ValueError("emit_report needs at least one row")
    if format == "csv":
        text = _csv(rows)
    elif format == "table":
        text = _table(rows)
    else:
        raise ValueError(f"format must be 'csv' or 'table', got {format!r}")
    data = text.encode("utf-8")
    if sink is not None:
        if hasattr(sink, "write"):
            sink.write(data)
        else:
            with open(sink, "wb") as fh:
                fh.write(data)
    return data

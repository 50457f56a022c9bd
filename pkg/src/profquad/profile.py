"""Integrand profile over one subrange and the structural facts derived from it.

Profile points are stored by position ``p = 0 .. 2n+2``. Their knot labels are
``p - (n+1)``: the endpoints carry labels ``-(n+1)`` and ``n+1`` and the centre
knot label 0. Reports and dumps speak in labels; internal indexing uses
positions.
"""

from dataclasses import dataclass
import enum
import io

import numpy as np

from . import _kernels
from .rule import map_knots, _check_finite


class KnotClass(enum.Enum):
    SENSITIVE = "sensitive"
    REGULAR = "regular"
    GRAY = "gray"


def dense_region_flags(rule):
    """Per inner knot: are both adjacent reduced spacings below ``d_av``?"""
    gaps = np.diff(rule.reduced_profile)
    return (gaps[:-1] < rule.d_av) & (gaps[1:] < rule.d_av)


def dense_regions(rule):
    """Position spans ``(lo, hi)`` of the dense knot clusters.

    Each maximal run of dense knots is widened to the nearest enclosing
    points of the coarse profile so the fine and coarse samplings share the
    span ends.
    """
    flags = dense_region_flags(rule)
    coarse = set(coarse_positions(rule).tolist())
    spans = []
    p = 0
    while p < flags.size:
        if not flags[p]:
            p += 1
            continue
        q = p
        while q + 1 < flags.size and flags[q + 1]:
            q += 1
        lo, hi = p + 1, q + 1  # inner knot k sits at profile position k + 1
        while lo not in coarse:
            lo -= 1
        while hi not in coarse:
            hi += 1
        spans.append((lo, hi))
        p = q + 1
    return spans


def coarse_positions(rule):
    """Profile positions of the coarse sampling: endpoints plus the coarse knots."""
    inner = rule.coarse_labels + rule.n + 1
    return np.concatenate(([0], inner, [2 * rule.n + 2]))


@dataclass(frozen=True)
class IntegrandProfile:
    n: int
    abscissas: np.ndarray
    values: np.ndarray
    f_bar: float
    extrema: np.ndarray
    coarse_extrema: np.ndarray
    dense: np.ndarray
    regions: tuple
    fine_zero_counts: tuple
    coarse_zero_counts: tuple

    @property
    def size(self):
        return self.values.shape[0]

    @property
    def labels(self):
        return np.arange(-self.n - 1, self.n + 2)

    def label(self, pos):
        return int(pos) - self.n - 1

    def position(self, label):
        return int(label) + self.n + 1

    @property
    def is_monotone(self):
        return self.extrema.size == 0

    @property
    def monotone_subranges(self):
        """Position pairs ``(start, end)`` between consecutive turning points."""
        cuts = [0, *self.extrema.tolist(), self.size - 1]
        return list(zip(cuts[:-1], cuts[1:]))

    def is_dense(self, pos):
        """Dense flag for a profile position; endpoints are never dense."""
        return 0 < pos < self.size - 1 and bool(self.dense[pos - 1])

    def side(self, pos):
        """-1, 0 or +1 as the value sits below, on or above the mean line."""
        d = float(self.values[pos]) - self.f_bar
        return (d > 0) - (d < 0)

    def dump(self):
        """Tab-separated table: label, abscissa, value, class, dense, coarse."""
        coarse = set(range(0, self.size, 2))
        ext = set(self.extrema.tolist())
        buf = io.StringIO()
        buf.write("label\tabscissa\tvalue\tclass\tdense\tcoarse\n")
        for p in range(self.size):
            if p in ext:
                cls = classify_extremal_knot(self, p).value
            else:
                cls = "-"
            buf.write(
                f"{self.label(p)}\t{float(self.abscissas[p])!r}\t{float(self.values[p])!r}\t"
                f"{cls}\t{int(self.is_dense(p))}\t{int(p in coarse)}\n"
            )
        buf.write(f"# f_bar\t{self.f_bar!r}\n")
        return buf.getvalue()


def profile_from_values(rule, abscissas, values, f_bar):
    """Assemble a profile from the ``2n+3`` sampled values."""
    x = np.asarray(abscissas, dtype=float)
    v = _check_finite(values, x, offset=-rule.n - 1)
    if v.shape[0] != 2 * rule.n + 3:
        raise ValueError(f"expected {2 * rule.n + 3} profile values, got {v.shape[0]}")
    f_bar = float(f_bar)
    cpos = coarse_positions(rule)
    regions = tuple(dense_regions(rule))
    fine_z = []
    coarse_z = []
    for lo, hi in regions:
        fine_z.append(int(_kernels.crossings(v[lo:hi + 1], f_bar)))
        sel = cpos[(cpos >= lo) & (cpos <= hi)]
        coarse_z.append(int(_kernels.crossings(v[sel], f_bar)))
    return IntegrandProfile(
        n=rule.n,
        abscissas=x,
        values=v,
        f_bar=f_bar,
        extrema=np.asarray(_kernels.extrema(v), dtype=np.int64),
        coarse_extrema=cpos[np.asarray(_kernels.extrema(v[cpos]), dtype=np.int64)],
        dense=dense_region_flags(rule),
        regions=regions,
        fine_zero_counts=tuple(fine_z),
        coarse_zero_counts=tuple(coarse_z),
    )


def build_profile(f, iv, rule, est):
    """Sample ``f`` at the profile abscissas and build the profile."""
    x = map_knots(rule, iv)
    v = np.array([f(xi) for xi in x], dtype=float)
    return profile_from_values(rule, x, v, est.f_bar)


def classify_extremal_knot(profile, pos):
    """Sensitive, regular or gray, by how the mean line splits the neighbours."""
    if pos not in profile.extrema:
        raise ValueError(f"position {pos} (label {profile.label(pos)}) is not an extremum")
    s0 = profile.side(pos)
    split = 0
    for q in (pos - 1, pos + 1):
        s = profile.side(q)
        if s0 == 0:
            split += s != 0
        else:
            split += s * s0 < 0
    if split == 2:
        return KnotClass.SENSITIVE
    if split == 1:
        return KnotClass.GRAY
    return KnotClass.REGULAR

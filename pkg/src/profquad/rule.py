"""Gauss-Kronrod 10-21 rule: knots, quadrature sums and local error estimates."""

from dataclasses import dataclass, field
import math

import numpy as np

from . import _kernels

EPS0 = float(np.finfo(float).eps)
ROUNDOFF_FACTOR = 50.0  # QUADPACK's tau_0

# QUADPACK qk21 tables, abscissas in decreasing order, last entry is the centre.
_XGK = (
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525478260,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
)
# Gauss-10 weights for xgk[1], xgk[3], ..., xgk[9]
_WG = (
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
)


class IntegrandError(ValueError):
    """The integrand could not be evaluated at ``abscissa``."""

    def __init__(self, abscissa, message, index=None):
        self.abscissa = abscissa
        self.index = index
        where = f"x = {abscissa!r}"
        if index is not None:
            where += f" (knot {index})"
        super().__init__(f"{message} at {where}")


class NonFiniteSampleError(IntegrandError):
    """The integrand returned inf or nan at a sampled abscissa."""

    def __init__(self, abscissa, index=None, value=None):
        self.value = value
        super().__init__(abscissa, f"non-finite integrand value {value!r}", index)


@dataclass(frozen=True)
class QuadRule:
    """Symmetric (2n+1)-knot rule with an embedded coarse subset.

    Arrays are indexed by position ``i + n`` for knot label ``i = -n..n``.
    ``coarse_weights`` has zeros at the labels outside the coarse subset.
    """

    n: int
    reduced_knots: np.ndarray
    fine_weights: np.ndarray
    coarse_weights: np.ndarray
    gamma: int = 1
    d_av: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "d_av", 2.0 / (2 * self.n + 3))
        for name in ("reduced_knots", "fine_weights", "coarse_weights"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def labels(self):
        """Knot labels ``-n..n``."""
        return np.arange(-self.n, self.n + 1)

    @property
    def coarse_labels(self):
        """Labels of the coarse subset ``-n+gamma, -n+gamma+2, ..., n-gamma``."""
        return np.arange(-self.n + self.gamma, self.n - self.gamma + 1, 2)

    @property
    def profile_labels(self):
        """Labels of the profile points; the endpoints carry ``-(n+1)`` and ``n+1``."""
        return np.arange(-self.n - 1, self.n + 2)

    @property
    def reduced_profile(self):
        """Reduced abscissas of the full profile, endpoints included."""
        return np.concatenate(([-1.0], self.reduced_knots, [1.0]))


def gauss_kronrod_21():
    """The QUADPACK Gauss-Kronrod 10-21 rule."""
    xgk = np.array(_XGK)
    wgk = np.array(_WGK)
    y = np.concatenate((-xgk[:-1], xgk[::-1]))
    w = np.concatenate((wgk[:-1], wgk[::-1]))
    wg_half = np.zeros(11)
    wg_half[1:10:2] = _WG
    wg = np.concatenate((wg_half[:-1], wg_half[::-1]))
    return QuadRule(n=10, reduced_knots=y, fine_weights=w, coarse_weights=wg)


GK21 = gauss_kronrod_21()


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"interval endpoints must be finite, got [{a}, {b}]")
        if not a < b:
            raise ValueError(f"interval requires a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def c(self):
        return 0.5 * (self.b + self.a)

    @property
    def h(self):
        return 0.5 * (self.b - self.a)

    @property
    def length(self):
        return self.b - self.a

    def split(self):
        """Bisect at the midpoint; both halves share the same stored midpoint."""
        c = self.c
        return Interval(self.a, c), Interval(c, self.b)


def map_knots(rule, iv):
    """Profile abscissas ``a, x_{-n}, ..., x_n, b`` for the interval."""
    x = np.empty(2 * rule.n + 3)
    x[0] = iv.a
    x[-1] = iv.b
    # symmetric pairs use the same |h y_i| so the mapping is symmetric about c
    half = iv.h * rule.reduced_knots[rule.n + 1:]
    x[rule.n + 2:-1] = iv.c + half
    x[1:rule.n + 1] = iv.c - half[::-1]
    x[rule.n + 1] = iv.c
    return x


def _check_finite(samples, abscissas=None, offset=0):
    samples = np.asarray(samples, dtype=float)
    bad = np.flatnonzero(~np.isfinite(samples))
    if bad.size:
        i = int(bad[0])
        x = None if abscissas is None else float(abscissas[i])
        raise NonFiniteSampleError(x, index=i + offset, value=float(samples[i]))
    return samples


def quad_sums(rule, samples, iv):
    """Return ``(q2n, qn)`` from the integrand values at the inner knots."""
    fv = _check_finite(samples, offset=-rule.n)
    s, sg, _, _ = _kernels.rule_sums(fv, rule.fine_weights, rule.coarse_weights)
    return iv.h * s, iv.h * sg


def qdp_estimate(e_ggk, delta):
    """QUADPACK damped rescaling of the raw embedded-rule difference."""
    if delta == 0.0:
        return 0.0
    return delta * min((200.0 * e_ggk / delta) ** 1.5, 1.0)


def roundoff_floor(abs_sum, eps0=EPS0):
    return ROUNDOFF_FACTOR * eps0 * abs_sum


def combine_estimates(e_ggk, e_qdp, e_roff):
    return max(e_roff, min(e_ggk, e_qdp))


@dataclass(frozen=True)
class LocalEstimate:
    """Quadrature sums and error estimates for one subrange."""

    q2n: float
    qn: float
    f_bar: float
    delta: float
    e_ggk: float
    e_qdp: float
    e_roff: float
    e2n: float
    abs_sum: float

    @property
    def rho_2n(self):
        return abs(self.e2n / self.q2n) if self.q2n != 0.0 else math.inf

    @property
    def rho_qdp(self):
        return abs(self.e_qdp / self.q2n) if self.q2n != 0.0 else math.inf


def local_estimate(rule, samples, iv, eps0=EPS0):
    fv = _check_finite(samples, offset=-rule.n)
    s, sg, sa, sd = _kernels.rule_sums(fv, rule.fine_weights, rule.coarse_weights)
    h = iv.h
    q2n = h * s
    qn = h * sg
    abs_sum = abs(h) * sa
    delta = abs(h) * sd
    e_ggk = abs(q2n - qn)
    e_qdp = qdp_estimate(e_ggk, delta)
    e_roff = roundoff_floor(abs_sum, eps0)
    return LocalEstimate(
        q2n=q2n,
        qn=qn,
        f_bar=q2n / iv.length,
        delta=delta,
        e_ggk=e_ggk,
        e_qdp=e_qdp,
        e_roff=e_roff,
        e2n=combine_estimates(e_ggk, e_qdp, e_roff),
        abs_sum=abs_sum,
    )

"""Profile builders shared by the test modules."""

import numpy as np

from profquad import bench
from profquad.driver import Sampler, assess
from profquad.profile import profile_from_values
from profquad.rule import GK21, Interval, local_estimate, map_knots


def fixture_assessment(fam, n):
    spec = bench.family(fam)
    iv = spec.interval(n)
    return assess(GK21, iv, Sampler(spec.integrand(n), GK21, vectorized=True)(iv))


def profile_of(values, iv=Interval(-1.0, 1.0), f_bar=None):
    """Profile from explicit values on the rule's abscissas."""
    x = map_knots(GK21, iv)
    v = np.asarray(values, dtype=float)
    if f_bar is None:
        f_bar = float(np.mean(v))
    return profile_from_values(GK21, x, v, f_bar)


def profile_of_function(f, iv=Interval(-1.0, 1.0)):
    x = map_knots(GK21, iv)
    v = np.array([f(t) for t in x])
    est = local_estimate(GK21, v[1:-1], iv)
    return profile_from_values(GK21, x, v, est.f_bar)

#!/usr/bin/python
# hybridlr synthetic credit data with a planted pairwise effect
# Started: Oct 2026
#
# True log-odds are
#
#     b0 + beta * (X1 + ... + Xk) + strength * 1[X1 > 0 and X2 > 0]
#
# with every X standard normal. The indicator term cannot be written as a sum
# of functions of X1 and X2 alone, so an additive scorecard misses it. b0 is
# solved so the mean event probability equals the requested event rate.

from __future__ import print_function, absolute_import, division

import logging
from collections import OrderedDict

import numpy as np
import pandas as pd
from scipy import optimize
from scipy.special import expit

log = logging.getLogger(__name__)

__all__ = ['SynthSpec', 'generate', 'write']

TARGET = 'BAD'
MIN_ROWS = 100

class SynthSpec(object):
    """Generator parameters; the planted pair is always (X1, X2)"""
    def __init__(self, n_rows=10000, n_signal=4, n_noise=4, strength=3.0, event_rate=0.8,
                 missing_rate=0.02, beta=0.5, seed=0):
        self.n_rows = int(n_rows)
        self.n_signal = int(n_signal)
        self.n_noise = int(n_noise)
        self.strength = float(strength)
        self.event_rate = float(event_rate)
        self.missing_rate = float(missing_rate)
        self.beta = float(beta)
        self.seed = seed
        self.validate()

    def validate(self):
        if self.n_rows < MIN_ROWS:
            raise ValueError("n_rows must be at least %d" % MIN_ROWS)
        if self.n_signal < 2:
            raise ValueError("n_signal must be at least 2 to plant a pair")
        if self.n_noise < 0:
            raise ValueError("n_noise must be non-negative")
        if not 0.0 < self.event_rate < 1.0:
            raise ValueError("event_rate must be in (0,1)")
        if not 0.0 <= self.missing_rate < 1.0:
            raise ValueError("missing_rate must be in [0,1)")

def _solve_intercept(shift, rate):
    """b0 with mean(sigmoid(b0 + shift)) == rate"""
    def gap(b0):
        return float(np.mean(expit(b0 + shift))) - rate
    lo, hi = -50.0, 50.0
    return optimize.brentq(gap, lo - float(shift.max()), hi - float(shift.min()), xtol=1e-12)

def generate(spec):
    """DataFrame of X1..Xk, N1..Nm and the 0/1 target; missing cells are NaN"""
    rng = np.random.default_rng(spec.seed)
    n = spec.n_rows
    signal = rng.standard_normal((n, spec.n_signal))
    noise = rng.standard_normal((n, spec.n_noise))
    shift = spec.beta * signal.sum(axis=1) + spec.strength * ((signal[:, 0] > 0) & (signal[:, 1] > 0))
    b0 = _solve_intercept(shift, spec.event_rate)
    y = (rng.random(n) < expit(b0 + shift)).astype(np.int64)
    log.debug("synth: n=%d intercept %.6f realised event rate %.4f", n, b0, y.mean())

    columns = OrderedDict()
    for i in range(spec.n_signal):
        columns['X%d' % (i + 1)] = signal[:, i]
    for i in range(spec.n_noise):
        columns['N%d' % (i + 1)] = noise[:, i]
    df = pd.DataFrame(columns)
    if spec.missing_rate > 0:
        holes = rng.random(df.shape) < spec.missing_rate
        df = df.mask(holes)
    df[TARGET] = y
    return df

def write(spec, path):
    df = generate(spec)
    df.to_csv(path, index=False, na_rep='', float_format='%.17g')
    return df

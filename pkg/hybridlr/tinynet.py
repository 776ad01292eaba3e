#!/usr/bin/python
# hybridlr two input sigmoid network used to build pairwise features
# Started: Oct 2026
#
#    Z1 = b1 + w1*x1 + w2*x2      A1 = sigmoid(Z1)
#    Z2 = v*A1 + b2               yhat = sigmoid(Z2)
#
# Trained by full batch gradient descent on mean binary cross-entropy over a
# grid of learning rates, keeping the run with the lowest final loss.

from __future__ import print_function, absolute_import, division

import logging

import numpy as np
from scipy.special import expit

from hybridlr.parser import NonFiniteLoss, UnknownVariable

log = logging.getLogger(__name__)

__all__ = ['TinyNet', 'TrainReport', 'sigmoid', 'forward', 'loss_and_grad', 'train', 'predict_column',
           'DEFAULT_GRID']

DEFAULT_GRID = (1e-5, 1e-4, 1e-3, 1e-2, 1e-1)
MIN_RATE = 1e-5
MAX_RATE = 1e-1
MAX_ITERS = 10000
REL_TOL = 1e-7
PATIENCE = 10

def sigmoid(x):
    """Logistic function, stable for large |x|.

    >>> float(sigmoid(0))
    0.5
    >>> round(float(sigmoid(-0.745)), 5)
    0.32191
    >>> float(sigmoid(3.0) + sigmoid(-3.0))
    1.0
    """
    return expit(x)

# ------------------------------------------------------------------
# TinyNet object
#
#    .weights        - hidden x 2 input weights
#    .hidden_bias    - hidden biases
#    .output_weights - hidden -> output weights
#    .output_bias    - output bias
#    .input_names    - (variable_a, variable_b)
#
# With one hidden node the parameters read as w1, w2, b1, v, b2.
# ------------------------------------------------------------------

class TinyNet(object):
    def __init__(self, weights, hidden_bias, output_weights, output_bias, input_names=('x1', 'x2')):
        self.weights = np.array(weights, dtype=np.float64).reshape(-1, 2)
        self.hidden_bias = np.array(hidden_bias, dtype=np.float64).reshape(-1)
        self.output_weights = np.array(output_weights, dtype=np.float64).reshape(-1)
        self.output_bias = float(output_bias)
        self.input_names = tuple(input_names)
        h = self.weights.shape[0]
        if len(self.hidden_bias) != h or len(self.output_weights) != h:
            raise ValueError("inconsistent hidden width")

    @classmethod
    def from_params(cls, w1, w2, b1, v, b2, input_names=('x1', 'x2')):
        return cls([[w1, w2]], [b1], [v], b2, input_names)

    @classmethod
    def from_vector(cls, theta, hidden=1, input_names=('x1', 'x2')):
        theta = np.asarray(theta, dtype=np.float64)
        if len(theta) != 4 * hidden + 1:
            raise ValueError("expected %d parameters, got %d" % (4 * hidden + 1, len(theta)))
        W = theta[:2 * hidden].reshape(hidden, 2)
        b1 = theta[2 * hidden:3 * hidden]
        v = theta[3 * hidden:4 * hidden]
        return cls(W, b1, v, theta[-1], input_names)

    @property
    def hidden(self):
        return self.weights.shape[0]

    def vector(self):
        """Flat parameter vector: weights row-major, hidden biases, output weights, output bias"""
        return np.concatenate([self.weights.ravel(), self.hidden_bias, self.output_weights, [self.output_bias]])

    def _single(self):
        if self.hidden != 1:
            raise AttributeError("named parameters exist only for one hidden node")

    @property
    def w1(self):
        self._single()
        return float(self.weights[0, 0])

    @property
    def w2(self):
        self._single()
        return float(self.weights[0, 1])

    @property
    def b1(self):
        self._single()
        return float(self.hidden_bias[0])

    @property
    def v(self):
        self._single()
        return float(self.output_weights[0])

    @property
    def b2(self):
        return self.output_bias

    def is_finite(self):
        return bool(np.all(np.isfinite(self.vector())))

    def to_dict(self):
        d = {'inputs': list(self.input_names)}
        if self.hidden == 1:
            d.update(w1=self.w1, w2=self.w2, b1=self.b1, v=self.v, b2=self.b2)
        else:
            d.update(weights=self.weights.tolist(), hidden_bias=self.hidden_bias.tolist(),
                     output_weights=self.output_weights.tolist(), b2=self.output_bias)
        return d

    @classmethod
    def from_dict(cls, d):
        if 'weights' in d:
            return cls(d['weights'], d['hidden_bias'], d['output_weights'], d['b2'], d['inputs'])
        return cls.from_params(d['w1'], d['w2'], d['b1'], d['v'], d['b2'], d['inputs'])

    def __repr__(self):
        if self.hidden == 1:
            return "TinyNet(%s: w1=%.4g w2=%.4g b1=%.4g v=%.4g b2=%.4g)" % (
                '*'.join(self.input_names), self.w1, self.w2, self.b1, self.v, self.b2)
        return "TinyNet(%s, %d hidden)" % ('*'.join(self.input_names), self.hidden)

def _layers(net, X):
    Z1 = X.dot(net.weights.T) + net.hidden_bias
    A1 = expit(Z1)
    Z2 = A1.dot(net.output_weights) + net.output_bias
    return Z1, A1, Z2

def forward(net, x1, x2, trace=False):
    """Network output for scalar or vector inputs. With ``trace`` returns
    (Z1, A1, Z2, yhat) instead, hidden quantities per node.

    >>> net = TinyNet.from_params(1.630, -2.255, -0.745, -3.168, -2.805)
    >>> round(float(forward(net, 0.0, 0.0)), 5)
    0.02136
    >>> z1, a1, z2, y = forward(net, 0.0, 0.0, trace=True)
    >>> round(float(z2), 5)
    -3.82482
    """
    scalar = np.ndim(x1) == 0 and np.ndim(x2) == 0
    X = np.column_stack([np.atleast_1d(np.asarray(x1, dtype=np.float64)),
                         np.atleast_1d(np.asarray(x2, dtype=np.float64))])
    Z1, A1, Z2 = _layers(net, X)
    yhat = expit(Z2)
    if scalar:
        Z1, A1, Z2, yhat = Z1[0], A1[0], Z2[0], yhat[0]
        if net.hidden == 1:
            Z1, A1 = Z1[0], A1[0]
    if trace:
        return Z1, A1, Z2, yhat
    return yhat

def loss_and_grad(net, X, y):
    """Mean binary cross-entropy and its gradient as a flat vector laid out
    like ``TinyNet.vector()``"""
    n = len(y)
    Z1, A1, Z2 = _layers(net, X)
    loss = float(np.mean(np.logaddexp(0.0, Z2) - y * Z2))
    dZ2 = (expit(Z2) - y) / n
    d_out_w = A1.T.dot(dZ2)
    d_out_b = dZ2.sum()
    dZ1 = np.outer(dZ2, net.output_weights) * A1 * (1.0 - A1)
    d_w = dZ1.T.dot(X)
    d_hidden_b = dZ1.sum(axis=0)
    return loss, np.concatenate([d_w.ravel(), d_hidden_b, d_out_w, [d_out_b]])

# ------------------------------------------------------------------
# TrainReport object
#
#    .final_loss    - Mean cross-entropy of the chosen run
#    .iterations    - Gradient steps taken by the chosen run
#    .learning_rate - Rate of the chosen run
#    .converged     - The chosen run met the relative change test
#    .seed          - Seed the initial weights were drawn from
#    .runs          - (rate, final loss or None if diverged, iterations) per rate
# ------------------------------------------------------------------

class TrainReport(object):
    def __init__(self, final_loss, iterations, learning_rate, converged, seed, runs=()):
        self.final_loss = final_loss
        self.iterations = iterations
        self.learning_rate = learning_rate
        self.converged = converged
        self.seed = seed
        self.runs = list(runs)

    def to_dict(self):
        return {'final_loss': self.final_loss, 'iterations': self.iterations,
                'learning_rate': self.learning_rate, 'converged': self.converged,
                'seed': list(self.seed) if isinstance(self.seed, (tuple, list)) else self.seed,
                'runs': self.runs}

    @classmethod
    def from_dict(cls, d):
        return cls(d['final_loss'], d['iterations'], d['learning_rate'], d['converged'], d['seed'],
                   [tuple(r) for r in d['runs']])

def _descend(theta0, X, y, rate, max_iters, hidden, names):
    """One gradient descent run. Returns (theta, loss, iterations, converged)
    or None when the loss stops being finite."""
    theta = theta0.copy()
    prev = None
    quiet = 0
    loss = None
    for it in range(max_iters + 1):
        net = TinyNet.from_vector(theta, hidden, names)
        loss, grad = loss_and_grad(net, X, y)
        if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
            return None
        if prev is not None:
            if abs(prev - loss) <= REL_TOL * max(abs(prev), 1e-300):
                quiet += 1
                if quiet >= PATIENCE:
                    return theta, loss, it, True
            else:
                quiet = 0
        if it == max_iters:
            break
        prev = loss
        theta = theta - rate * grad
    return theta, loss, max_iters, False

def train(X, y, seed, grid=DEFAULT_GRID, max_iters=MAX_ITERS, hidden=1, input_names=('x1', 'x2')):
    """Fit a TinyNet to the two columns of X.

    Initial weights are uniform(-0.5, 0.5) from ``seed`` (an int or a
    sequence of ints) and shared by every learning rate in ``grid``. Runs
    whose loss turns non-finite are discarded.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != 2:
        raise ValueError("train needs an n x 2 input matrix")
    if len(y) != X.shape[0] or len(y) == 0:
        raise ValueError("input and target lengths differ or are empty")
    if np.isnan(X).any():
        raise ValueError("inputs contain missing values")
    grid = list(grid)
    if not grid or any(not (MIN_RATE <= r <= MAX_RATE) for r in grid):
        raise ValueError("learning rates must lie in [%g, %g]" % (MIN_RATE, MAX_RATE))
    if not 1 <= max_iters <= MAX_ITERS:
        raise ValueError("max_iters must be in [1, %d]" % MAX_ITERS)
    if hidden < 1:
        raise ValueError("hidden must be at least 1")

    rng = np.random.default_rng(seed)
    theta0 = rng.uniform(-0.5, 0.5, size=4 * hidden + 1)
    best = None
    runs = []
    for rate in grid:
        result = _descend(theta0, X, y, rate, max_iters, hidden, input_names)
        if result is None:
            log.debug("tinynet %s: rate %g diverged", '*'.join(input_names), rate)
            runs.append((rate, None, 0))
            continue
        theta, loss, iterations, converged = result
        runs.append((rate, loss, iterations))
        log.debug("tinynet %s: rate %g loss %.6f after %d iterations%s", '*'.join(input_names), rate,
                  loss, iterations, " (converged)" if converged else "")
        if best is None or loss < best[1]:
            best = (theta, loss, iterations, converged, rate)
    if best is None:
        raise NonFiniteLoss("every learning rate diverged for %s" % '*'.join(input_names))
    theta, loss, iterations, converged, rate = best
    net = TinyNet.from_vector(theta, hidden, input_names)
    return net, TrainReport(loss, iterations, rate, converged, seed, runs)

def predict_column(net, frame, name):
    """(name, yhat) for every row of the frame"""
    for n in net.input_names:
        if n not in frame:
            raise UnknownVariable("network input '%s' not present" % n)
    a, b = net.input_names
    return name, forward(net, frame.column(a), frame.column(b))

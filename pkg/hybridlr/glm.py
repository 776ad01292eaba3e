#!/usr/bin/python
# hybridlr logistic regression: Newton-Raphson fitting with Wald inference,
# stepwise selection and variance inflation factors
# Started: Oct 2026

from __future__ import print_function, absolute_import, division

import logging

import numpy as np
import pandas as pd
from scipy import linalg, stats
from scipy.special import expit

from hybridlr.parser import SingularInformation, EmptyDesign, NoCandidates, ColumnMismatch, \
    LengthMismatch, UnknownVariable

log = logging.getLogger(__name__)

__all__ = ['FitOptions', 'LogisticModel', 'fit_logistic', 'fit_interaction_pair', 'predict_proba',
           'stepwise_select', 'vif']

SEPARATION_BETA = 30.0
SCORE_TOL = 1e-7
MAX_HALVINGS = 30

class FitOptions(object):
    """Newton-Raphson controls. ``ridge`` is added to the information matrix
    only when it cannot be factorised; ``ridge_on_singular`` lets a rank
    deficient design fit with that ridge instead of raising."""
    def __init__(self, max_iter=100, tol=1e-8, ridge=1e-8, ridge_on_singular=False):
        if not (max_iter > 0 and tol > 0 and ridge > 0):
            raise ValueError("FitOptions values must be positive")
        self.max_iter = int(max_iter)
        self.tol = tol
        self.ridge = ridge
        self.ridge_on_singular = ridge_on_singular

# ------------------------------------------------------------------
# LogisticModel object
#
#    .terms          - Variable names, intercept implicit
#    .beta           - Coefficients, intercept first
#    .se             - Standard errors, intercept first
#    .wald_chisq     - (beta/se)^2 per coefficient
#    .p_value        - Upper tail chi-square(1) probability
#    .log_likelihood - Bernoulli log-likelihood at beta
#    .converged      - False if max_iter was hit
#    .separated      - Some |beta| exceeded the quasi-separation bound
#    .ridge_used     - The information matrix needed the ridge
#    .history        - Log-likelihood after every iteration
# ------------------------------------------------------------------

class LogisticModel(object):
    def __init__(self, terms, beta, se, log_likelihood=float('nan'), converged=True,
                 iterations=0, separated=False, ridge_used=False, history=()):
        self.terms = list(terms)
        self.beta = np.asarray(beta, dtype=np.float64)
        self.se = np.asarray(se, dtype=np.float64)
        with np.errstate(divide='ignore', invalid='ignore'):
            self.wald_chisq = (self.beta / self.se) ** 2
        self.p_value = stats.chi2.sf(self.wald_chisq, 1)
        self.log_likelihood = log_likelihood
        self.converged = converged
        self.iterations = iterations
        self.separated = separated
        self.ridge_used = ridge_used
        self.history = list(history)

    @property
    def intercept(self):
        return float(self.beta[0])

    def coef(self, name):
        return float(self.beta[1 + self._index(name)])

    def wald(self, name):
        return float(self.wald_chisq[1 + self._index(name)])

    def p(self, name):
        return float(self.p_value[1 + self._index(name)])

    def _index(self, name):
        try:
            return self.terms.index(name)
        except ValueError:
            raise UnknownVariable("model has no term '%s'" % name)

    def linear_predictor(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != len(self.terms):
            raise ColumnMismatch("design has %d columns, model has %d terms" % (X.shape[1], len(self.terms)))
        return self.beta[0] + X.dot(self.beta[1:])

    def predict_frame(self, frame):
        return predict_proba(self, frame.matrix(self.terms))

    def coefficient_table(self):
        return pd.DataFrame({'term': ['Intercept'] + self.terms, 'estimate': self.beta, 'se': self.se,
                             'wald': self.wald_chisq, 'p_value': self.p_value},
                            columns=['term', 'estimate', 'se', 'wald', 'p_value'])

    def to_dict(self):
        return {'terms': self.terms, 'beta': self.beta.tolist(), 'se': self.se.tolist(),
                'log_likelihood': self.log_likelihood, 'converged': self.converged,
                'iterations': self.iterations, 'separated': self.separated,
                'ridge_used': self.ridge_used}

    @classmethod
    def from_dict(cls, d):
        return cls(d['terms'], d['beta'], d['se'], d['log_likelihood'], d['converged'],
                   d['iterations'], d['separated'], d['ridge_used'])

    def __repr__(self):
        return "LogisticModel(%s)" % ', '.join('%s=%.4g' % t for t in zip(['Intercept'] + self.terms, self.beta))

def _log_likelihood(eta, y):
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))

def _factor(info, ridge):
    """Cholesky factor of the information matrix, adding the ridge if needed.
    Returns (factor, ridge_used) or raises SingularInformation."""
    try:
        return linalg.cho_factor(info), False
    except linalg.LinAlgError:
        pass
    try:
        return linalg.cho_factor(info + ridge * np.eye(len(info))), True
    except linalg.LinAlgError:
        raise SingularInformation("information matrix is singular even with ridge %g" % ridge)

def fit_logistic(X, y, names=None, opts=None):
    """Maximum likelihood logistic regression by Newton-Raphson with step
    halving. X holds the predictors only; the intercept is added here."""
    if opts is None:
        opts = FitOptions()
    y = np.asarray(y, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    n = len(y)
    if n == 0:
        raise EmptyDesign("no rows to fit")
    if X.shape[0] != n:
        raise LengthMismatch("design has %d rows, target has %d" % (X.shape[0], n))
    if names is None:
        names = ['x%d' % (i + 1) for i in range(X.shape[1])]
    names = list(names)
    if len(names) != X.shape[1]:
        raise ColumnMismatch("%d names for %d columns" % (len(names), X.shape[1]))
    D = np.column_stack([np.ones(n), X])
    k = D.shape[1]

    rank_deficient = bool(k > 1 and np.linalg.matrix_rank(D) < k)
    if rank_deficient and not opts.ridge_on_singular:
        raise SingularInformation("design matrix is rank deficient (%s)" % ', '.join(names))
    ridge = opts.ridge if rank_deficient else 0.0

    beta = np.zeros(k)
    eta = D.dot(beta)
    ll = _log_likelihood(eta, y)
    history = [ll]
    ridge_used = rank_deficient
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        p = expit(eta)
        w = p * (1.0 - p)
        score = D.T.dot(y - p)
        info = (D * w[:, None]).T.dot(D) + ridge * np.eye(k)
        factor, fallback = _factor(info, opts.ridge)
        ridge_used = ridge_used or fallback
        step = linalg.cho_solve(factor, score)
        t = 1.0
        for _ in range(MAX_HALVINGS):
            cand = beta + t * step
            cand_eta = D.dot(cand)
            cand_ll = _log_likelihood(cand_eta, y)
            if cand_ll >= ll - 1e-12 * abs(ll):
                break
            t *= 0.5
        else:
            log.debug("fit_logistic: step halving exhausted at iteration %d", it)
            break
        change = abs(cand_ll - ll)
        beta, eta, ll = cand, cand_eta, cand_ll
        history.append(ll)
        grad = np.max(np.abs(D.T.dot(y - expit(eta))))
        if change <= opts.tol * (abs(ll) + opts.tol) and grad < SCORE_TOL:
            converged = True
            break

    p = expit(eta)
    w = p * (1.0 - p)
    info = (D * w[:, None]).T.dot(D) + ridge * np.eye(k)
    factor, fallback = _factor(info, opts.ridge)
    ridge_used = ridge_used or fallback
    cov = linalg.cho_solve(factor, np.eye(k))
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    if not np.all(se > 0) or not np.all(np.isfinite(se)):
        raise SingularInformation("non-positive standard error in (%s)" % ', '.join(names))
    separated = bool(np.any(np.abs(beta[1:]) > SEPARATION_BETA)) if k > 1 else bool(abs(beta[0]) > SEPARATION_BETA)
    log.debug("fit_logistic: %d terms, %d iterations, ll=%.6f, converged=%s", k - 1, it, ll, converged)
    return LogisticModel(names, beta, se, ll, converged, it, separated, ridge_used, history)

def fit_interaction_pair(x_a, x_b, y, names=('a', 'b'), opts=None):
    """Fit [1, x_a, x_b, x_a*x_b] and return (model, interaction wald, p).
    A fit that did not converge or is quasi-separated reports wald 0, p 1."""
    x_a = np.asarray(x_a, dtype=np.float64)
    x_b = np.asarray(x_b, dtype=np.float64)
    a, b = names
    model = fit_logistic(np.column_stack([x_a, x_b, x_a * x_b]), y, [a, b, '%s*%s' % (a, b)], opts)
    if not model.converged or model.separated:
        return model, 0.0, 1.0
    return model, float(model.wald_chisq[3]), float(model.p_value[3])

def predict_proba(model, X):
    """sigmoid(beta0 + X beta) row by row"""
    return expit(model.linear_predictor(X))

def _enter_key(model, name):
    # larger wald first, then name order; ordering equals smallest p first
    return (-model.wald(name), name)

def stepwise_select(X, y, names, alpha_enter=0.15, alpha_stay=0.15, opts=None, trace=None):
    """Forward entry / backward removal on Wald p-values.

    Each round enters the excluded variable with the smallest p below
    ``alpha_enter``, then removes included variables with p above
    ``alpha_stay``, worst first. Stops when nothing changes or a variable set
    recurs. ``trace``, if given, receives ('enter'|'remove', name, p) events.
    """
    X = np.asarray(X, dtype=np.float64)
    names = list(names)
    if not names:
        raise NoCandidates("stepwise selection needs at least one candidate")
    if not (0 < alpha_enter < 1 and 0 < alpha_stay < 1):
        raise ValueError("alpha values must be in (0,1)")
    col = dict((n, i) for i, n in enumerate(names))

    def fit(terms):
        return fit_logistic(X[:, [col[t] for t in terms]], y, terms, opts)

    included = []
    visited = set([frozenset()])
    while True:
        changed = False
        best = None
        for name in sorted(n for n in names if n not in included):
            try:
                model = fit(included + [name])
            except SingularInformation:
                continue
            if not model.converged:
                continue
            key = _enter_key(model, name)
            if best is None or key < best[0]:
                best = (key, name, model.p(name))
        if best is not None and best[2] < alpha_enter:
            included.append(best[1])
            changed = True
            if trace is not None:
                trace(('enter', best[1], best[2]))
        while included:
            model = fit(included)
            worst = max(included, key=lambda t: (model.p(t), t))
            if model.p(worst) <= alpha_stay:
                break
            included.remove(worst)
            changed = True
            if trace is not None:
                trace(('remove', worst, model.p(worst)))
        state = frozenset(included)
        if not changed:
            break
        if state in visited:
            log.debug("stepwise: variable set recurred, stopping")
            break
        visited.add(state)
    return fit(included)

def vif(X, names=None):
    """Variance inflation factor per column: 1/(1 - R2) from OLS of the column
    on all others plus an intercept; +inf on perfect collinearity."""
    X = np.asarray(X, dtype=np.float64)
    n, k = X.shape
    if k < 2:
        raise ValueError("vif needs at least two columns")
    out = np.empty(k)
    for j in range(k):
        target = X[:, j]
        sst = np.sum((target - target.mean()) ** 2)
        if not sst > 0:
            raise ValueError("column %s has zero variance" % (names[j] if names else j))
        others = np.column_stack([np.ones(n), np.delete(X, j, axis=1)])
        coef = np.linalg.lstsq(others, target, rcond=None)[0]
        resid = target - others.dot(coef)
        r2 = 1.0 - np.sum(resid ** 2) / sst
        out[j] = np.inf if r2 >= 1.0 - 1e-12 else 1.0 / (1.0 - r2)
    return out

"""Bessel functions of matrix argument on the cone of PSD matrices.

The central object is the series

    J_mu(x) = sum over partitions lambda of
              (-1)^|lambda| Z_lambda(x) / ( (mu)_lambda |lambda|! ),

summed weight by weight with a certified tail bound: since the generalized
Pochhammer symbol satisfies (mu)_lambda >= 2^{-dq(q-1)/2} mu^|lambda| for
mu > rho - 1, and |Z_lambda(x)| <= Z_lambda(|x|) with the weight-k layer of
Z(|x|) summing to (tr|x|)^k, everything beyond weight K is bounded by

    2^{dq(q-1)/2} * sum_{k>K} (tr|x| / mu)^k / k!,

a scalar Poisson tail.  Truncation is therefore never silent: callers get
the certified bound, or a ConvergenceError carrying the bound achieved at
the weight cap.

The same function has an integral form against the ball density
Delta(I - v*v)^{mu-rho}, estimated here by importance sampling; the
normalization kappa_mu of that density has a closed form for rank one and
is estimated the same way for higher rank.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .errors import ConvergenceError, DimensionError, DomainError
from .jack import gen_pochhammer, layer_values
from .linalg import HermitianMatrix, StructureParams, _as_array

DEFAULT_TOL = 1e-10
DEFAULT_MAX_WEIGHT = 30


def _poisson_tail(k: int, s: np.ndarray) -> np.ndarray:
    """sum_{j > k} s^j / j!  for s >= 0, via the regularized incomplete gamma."""
    with np.errstate(over="ignore"):
        return np.exp(s) * special.gammainc(k + 1, s)


def _series_from_eigs(
    mu: float,
    eigs: np.ndarray,
    params: StructureParams,
    tol: float = DEFAULT_TOL,
    max_weight: int = DEFAULT_MAX_WEIGHT,
):
    """Truncated Bessel series on a batch of eigenvalue vectors.

    eigs has shape (batch, q).  Returns (values, certified tail bounds),
    both of shape (batch,).
    """
    if mu <= params.rho - 1.0:
        raise DomainError(
            f"series index mu={mu} must exceed rho - 1 = {params.rho - 1.0}"
        )
    if tol <= 0:
        raise DomainError("tol must be positive")
    eigs = np.asarray(eigs, dtype=float)
    if eigs.ndim != 2 or eigs.shape[1] != params.q:
        raise DimensionError(f"expected eigenvalue batch of shape (n, {params.q})")
    q, d = params.q, params.d
    poch_floor = 2.0 ** (d * q * (q - 1) / 2.0)
    s = np.abs(eigs).sum(axis=1) / mu

    total = np.ones(eigs.shape[0])
    tail = poch_floor * _poisson_tail(0, s)
    if np.max(tail) <= tol:
        return total, tail
    sign = 1.0
    inv_fact = 1.0
    for k in range(1, max_weight + 1):
        sign = -sign
        inv_fact /= k
        parts, vals = layer_values(params.alpha, q, k, eigs)
        poch = np.array([gen_pochhammer(mu, lam, params.alpha) for lam in parts])
        layer = (vals / poch[:, None]).sum(axis=0)
        total += sign * inv_fact * layer
        tail = poch_floor * _poisson_tail(k, s)
        if np.max(tail) <= tol:
            return total, tail
    raise ConvergenceError(
        f"Bessel series not certified to {tol:.2e} within weight {max_weight}; "
        f"achieved bound {float(np.max(tail)):.2e}",
        achieved_bound=float(np.max(tail)),
    )


def bessel_series(
    mu: float,
    x,
    params: StructureParams,
    tol: float = DEFAULT_TOL,
    max_weight: int = DEFAULT_MAX_WEIGHT,
):
    """J_mu at a Hermitian matrix argument, with certified truncation.

    Returns (value, tail_bound).  The argument may be any Hermitian matrix
    (points of the cone, negated cone points for the growing direction, or
    anything in between); only its eigenvalues enter.
    """
    a = _as_array(x)
    if a.shape != (params.q, params.q):
        raise DimensionError(f"argument must be {params.q} x {params.q}, got {a.shape}")
    eigs = HermitianMatrix(a).eigenvalues()
    vals, tails = _series_from_eigs(mu, eigs[None, :], params, tol, max_weight)
    return float(vals[0]), float(tails[0])


def bessel_classical(kappa: float, z: float, tol: float = 1e-12, max_terms: int = 300):
    """One-variable normalized Bessel function 0F1(kappa+1; -z^2/4).

    Returns (value, tail_bound); the tail is certified by the geometric
    ratio once the term ratio drops below one.  kappa = -1/2 reproduces
    cos z.  Requires kappa > -1 so every Pochhammer factor is positive.
    """
    if kappa <= -1.0:
        raise DomainError(f"kappa must exceed -1, got {kappa}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    w = z * z / 4.0
    total = 1.0
    term = 1.0
    for n in range(max_terms):
        ratio_next = w / ((kappa + 1 + n) * (n + 1))
        bound_ratio = w / ((kappa + 2 + n) * (n + 2))
        if abs(term) * ratio_next <= tol * (1.0 - bound_ratio) and bound_ratio < 1.0:
            return total, abs(term) * ratio_next / (1.0 - bound_ratio)
        term *= -w / ((kappa + 1 + n) * (n + 1))
        total += term
    raise ConvergenceError(
        f"classical Bessel series not certified to {tol:.2e} in {max_terms} terms",
        achieved_bound=abs(term),
    )


def _ball_proposal_weights(mu: float, params: StructureParams, n: int, rng):
    """Importance weights for the ball density Delta(I - v*v)^{mu-rho}.

    Draws n proposals and returns (weights, v) where the weights are
    nonnegative, vanish outside the spectral unit ball and have expectation
    kappa_mu.  For mu > rho the proposal is the dominating Gaussian with
    per-real-coordinate variance 1/(2(mu-rho)); at or below rho it falls
    back to the uniform law on the entry-wise box [-1, 1].
    """
    q, d = params.q, params.d
    expo = mu - params.rho
    dim = params.ambient_dim
    if expo > 0.0:
        sd = math.sqrt(1.0 / (2.0 * expo))
        v = rng.standard_normal((n, q, q)) * sd
        if d == 2:
            v = v + 1j * (rng.standard_normal((n, q, q)) * sd)
        log_base = (dim / 2.0) * math.log(math.pi / expo)
        a = np.linalg.eigvalsh(np.conj(np.swapaxes(v, 1, 2)) @ v)
        inside = a[:, -1] < 1.0
        a_in = np.where(inside[:, None], a, 0.0)
        logw = expo * (np.log1p(-a_in).sum(axis=1) + a_in.sum(axis=1)) + log_base
        w = np.where(inside, np.exp(logw), 0.0)
    else:
        v = rng.uniform(-1.0, 1.0, (n, q, q))
        if d == 2:
            v = v + 1j * rng.uniform(-1.0, 1.0, (n, q, q))
        log_base = dim * math.log(2.0)
        a = np.linalg.eigvalsh(np.conj(np.swapaxes(v, 1, 2)) @ v)
        inside = a[:, -1] < 1.0
        a_in = np.where(inside[:, None], a, 0.0)
        with np.errstate(over="ignore"):
            w = np.where(inside, np.exp(expo * np.log1p(-a_in).sum(axis=1) + log_base), 0.0)
    return w, v


_MC_CHUNK = 1 << 18


def kappa_mu(params: StructureParams, n_samples: int = 200_000, rng=None):
    """Normalization of the ball density: integral of Delta(I-v*v)^{mu-rho}.

    Rank one has the closed form pi^{d/2} Gamma(mu-rho+1)/Gamma(mu-rho+1+d/2)
    and returns std_error 0.  Higher ranks use importance sampling (unbiased)
    and return the Monte Carlo standard error.
    """
    mu = params.mu
    if params.q == 1:
        a = mu - params.rho + 1.0
        value = math.exp(
            (params.d / 2.0) * math.log(math.pi)
            + special.gammaln(a)
            - special.gammaln(a + params.d / 2.0)
        )
        return value, 0.0
    if rng is None:
        raise DomainError("kappa_mu needs an rng for rank above one")
    if n_samples < 2:
        raise DomainError("n_samples must be at least 2")
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        m = min(_MC_CHUNK, n_samples - done)
        w, _ = _ball_proposal_weights(mu, params, m, rng)
        total += float(w.sum())
        total_sq += float((w * w).sum())
        done += m
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0)
    return mean, math.sqrt(var / n_samples)


def _integral_mc_parts(mu: float, x: np.ndarray, params: StructureParams, n_samples: int, rng):
    """Ratio-estimator pieces for the oscillatory ball integral.

    Returns (re, im, se_re, se_im) for
    (1/kappa_mu) integral over the ball of exp(-2i <v, x>) dball.
    """
    sums = np.zeros(3)  # w, w cos, w sin
    sq = np.zeros((3, 3))
    done = 0
    while done < n_samples:
        m = min(_MC_CHUNK, n_samples - done)
        w, v = _ball_proposal_weights(mu, params, m, rng)
        phase = 2.0 * np.real(np.sum(np.conj(v) * x, axis=(1, 2)))
        rows = np.stack([w, w * np.cos(phase), w * np.sin(phase)])
        sums += rows.sum(axis=1)
        sq += rows @ rows.T
        done += m
    n = n_samples
    mean = sums / n
    cov = sq / n - np.outer(mean, mean)
    r_re = mean[1] / mean[0]
    r_im = -mean[2] / mean[0]
    # delta method for a ratio a/w: var(a - r w) / (n w_bar^2)
    var_re = max(cov[1, 1] - 2 * r_re * cov[0, 1] + r_re**2 * cov[0, 0], 0.0)
    var_im = max(cov[2, 2] + 2 * r_im * cov[0, 2] + r_im**2 * cov[0, 0], 0.0)
    se_re = math.sqrt(var_re / n) / mean[0]
    se_im = math.sqrt(var_im / n) / mean[0]
    return r_re, r_im, se_re, se_im


def bessel_integral_mc(mu: float, x, params: StructureParams, n_samples: int, rng):
    """Monte Carlo estimate of J_mu(x* x) through its ball integral form.

    x is a q x q matrix over the field.  Uses the same importance sampling
    as kappa_mu with a shared sample stream (ratio estimator) and returns
    (value, std_error) for the real part; the imaginary part vanishes in
    expectation and is checked in the test suite.
    """
    a = _as_array(x)
    if a.shape != (params.q, params.q):
        raise DimensionError(f"argument must be {params.q} x {params.q}, got {a.shape}")
    if mu <= params.rho - 1.0:
        raise DomainError(f"mu={mu} must exceed rho - 1 = {params.rho - 1.0}")
    if n_samples < 2:
        raise DomainError("n_samples must be at least 2")
    r_re, _, se_re, _ = _integral_mc_parts(mu, a, params, n_samples, rng)
    return r_re, se_re


def gaussian_tail_H(x, r: float, params: StructureParams, n_samples: int = 200_000, rng=None):
    """Gaussian mass outside the spectral ball of radius r, centered at x:

        H(x, r) = integral over {v in M_q : ||v||_spec >= r} of e^{-||v-x||^2} dv.

    Rank one over the reals is exact, (sqrt(pi)/2)(erfc(r-x) + erfc(r+x)),
    with std_error 0; otherwise a plain Monte Carlo proportion of Gaussian
    draws (per-real-coordinate variance 1/2) scaled by pi^{dim/2}.
    """
    a = np.atleast_2d(_as_array(x))
    if a.shape != (params.q, params.q):
        raise DimensionError(f"center must be {params.q} x {params.q}, got {a.shape}")
    if r < 0:
        raise DomainError(f"radius must be nonnegative, got {r}")
    if params.q == 1 and params.d == 1:
        c = float(np.real(a[0, 0]))
        value = (math.sqrt(math.pi) / 2.0) * (special.erfc(r - c) + special.erfc(r + c))
        return value, 0.0
    if rng is None:
        raise DomainError("gaussian_tail_H needs an rng beyond rank one over the reals")
    scale = math.pi ** (params.ambient_dim / 2.0)
    hits = 0
    done = 0
    while done < n_samples:
        m = min(_MC_CHUNK, n_samples - done)
        g = rng.standard_normal((m, params.q, params.q)) * math.sqrt(0.5)
        if params.d == 2:
            g = g + 1j * (rng.standard_normal((m, params.q, params.q)) * math.sqrt(0.5))
        sv = np.linalg.svd(a[None, :, :] + g, compute_uv=False)
        hits += int(np.count_nonzero(sv[:, 0] >= r))
        done += m
    p = hits / n_samples
    return scale * p, scale * math.sqrt(p * (1.0 - p) / n_samples)


def theorem1_gap(
    mu: float,
    y,
    params: StructureParams,
    tol: float = 1e-9,
    max_weight: int = 80,
):
    """Distance of J_mu(mu y) from its rank-independent limit e^{-tr y}.

    Returns (gap, envelope) with envelope = min(1, (tr y)^2) / mu; the
    caller judges stability of gap/envelope across mu (no universal
    constant is hardcoded).  Requires mu > 2 rho.
    """
    if mu <= 2.0 * params.rho:
        raise DomainError(f"mu={mu} must exceed 2 rho = {2.0 * params.rho}")
    a = _as_array(y)
    eigs = HermitianMatrix(a).eigenvalues()
    if np.min(eigs) < -1e-10 * (1.0 + float(np.max(np.abs(eigs)))):
        raise DomainError("y must be positive semidefinite")
    tr = float(eigs.sum())
    vals, _ = _series_from_eigs(mu, mu * eigs[None, :], params, tol, max_weight)
    gap = abs(float(vals[0]) - math.exp(-tr))
    envelope = min(1.0, tr * tr) / mu
    return gap, envelope


def prop3_envelope(
    mu: float,
    x,
    params: StructureParams,
    rng=None,
    c_emp: float | None = None,
    tol: float = 1e-10,
    max_weight: int = DEFAULT_MAX_WEIGHT,
):
    """Empirical sandwich for the growing direction J_mu(-(mu-rho) x^2).

    Returns (lower, value, upper) with

        lower = e^{<x,x>} (1 - c/mu <x,x>^2 - H(x, sqrt(mu-rho)))
        upper = e^{<x,x>} (1 + c/mu)

    where c is an empirical constant: if not supplied it is calibrated at
    mu_cal = max(2 rho + 1, mu/4) from the observed deviation there and
    doubled as a safety margin.  The envelope is a diagnostic, not a
    certified bound.
    """
    a = _as_array(x)
    eigs = HermitianMatrix(a).eigenvalues()
    rho = params.rho
    if mu <= rho:
        raise DomainError(f"mu={mu} must exceed rho = {rho}")
    xx = float((eigs * eigs).sum())

    def _value_at(m):
        v, _ = _series_from_eigs(m, -(m - rho) * (eigs * eigs)[None, :], params, tol, max_weight)
        return float(v[0])

    def _h_at(m):
        return gaussian_tail_H(a, math.sqrt(m - rho), params, rng=rng)[0]

    if c_emp is None:
        mu_cal = max(2.0 * rho + 1.0, mu / 4.0)
        j_cal = _value_at(mu_cal)
        h_cal = _h_at(mu_cal)
        ratio = j_cal * math.exp(-xx)
        up_c = (ratio - 1.0) * mu_cal
        low_c = (1.0 - ratio - h_cal) * mu_cal / (xx * xx) if xx > 0 else 0.0
        c_emp = 2.0 * max(up_c, low_c, 0.1)

    value = _value_at(mu)
    h = _h_at(mu)
    base = math.exp(xx)
    lower = base * (1.0 - (c_emp / mu) * xx * xx - h)
    upper = base * (1.0 + c_emp / mu)
    return lower, value, upper

"""Random-walk convolution on the cone of PSD matrices.

The convolution of two point masses delta_r and delta_s is the law of

    sqrt( r^2 + s^2 + s v r + r v* s ),    v drawn from the ball density
                                           Delta(I - v*v)^{mu - rho} / kappa_mu,

which interpolates, as mu grows, between genuinely spread-out laws and the
deterministic Pythagorean sum.  For mu = p d / 2 with integer p the same
law arises from sums of p x q matrices with uniformly rotated singular
frame ("orbit" walks), which gives an independent simulation path used by
the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, SamplingError
from .linalg import (
    BallMatrix,
    ConeMatrix,
    RectMatrix,
    StructureParams,
    _as_array,
    haar_unitary,
    psd_sqrt,
    phi_p,
)

_MAX_PROPOSALS = 1_000_000
_MIN_RATE = 1e-4


@dataclass(frozen=True)
class RadialLaw:
    """Finitely supported law on the cone: weights and PSD atoms."""

    weights: tuple
    atoms: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise DomainError("need at least one atom")
        if len(self.atoms) != w.size:
            raise DimensionError("weights and atoms must have equal length")
        if np.any(w <= 0):
            raise DomainError("atom weights must be positive")
        if abs(float(w.sum()) - 1.0) > 1e-12:
            raise DomainError(f"atom weights must sum to 1, got {w.sum()!r}")
        atoms = tuple(a if isinstance(a, ConeMatrix) else ConeMatrix(a) for a in self.atoms)
        q = atoms[0].q
        if any(a.q != q for a in atoms):
            raise DimensionError("all atoms must share the same rank")
        if all(a.is_zero() for a in atoms):
            raise DomainError("law must put mass on at least one nonzero atom")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "atoms", atoms)

    @property
    def q(self) -> int:
        return self.atoms[0].q

    def sample_index(self, rng: np.random.Generator) -> int:
        return int(rng.choice(len(self.atoms), p=self.weights))


@dataclass(frozen=True)
class WalkPath:
    """Trajectory of a cone random walk; steps[0] is the zero matrix."""

    params: StructureParams
    steps: tuple
    label: str = ""

    def __post_init__(self):
        steps = tuple(s if isinstance(s, ConeMatrix) else ConeMatrix(s) for s in self.steps)
        if not steps or not steps[0].is_zero():
            raise DomainError("a walk must start at the zero matrix")
        object.__setattr__(self, "steps", steps)

    @property
    def n_steps(self) -> int:
        return len(self.steps) - 1

    def last(self) -> ConeMatrix:
        return self.steps[-1]


def _sample_ball_batch(params: StructureParams, rng: np.random.Generator, n: int) -> np.ndarray:
    """n draws from the ball density, stacked (n, q, q)."""
    q, d = params.q, params.d
    expo = params.mu - params.rho
    if expo < 0.0:
        raise SamplingError(
            f"ball density has exponent mu - rho = {expo:.3g} < 0 and is unbounded "
            "near the boundary; rejection sampling cannot dominate it "
            "(mu is pathologically close to rho - 1)"
        )
    gaussian = expo >= 1.0
    sd = np.sqrt(1.0 / (2.0 * expo)) if gaussian else None
    out = np.empty((n, q, q), dtype=params.dtype)
    filled = 0
    proposals = 0
    while filled < n:
        m = max(n - filled, 16)
        if gaussian:
            v = rng.standard_normal((m, q, q)) * sd
            if d == 2:
                v = v + 1j * (rng.standard_normal((m, q, q)) * sd)
        else:
            v = rng.uniform(-1.0, 1.0, (m, q, q))
            if d == 2:
                v = v + 1j * rng.uniform(-1.0, 1.0, (m, q, q))
        a = np.linalg.eigvalsh(np.conj(np.swapaxes(v, 1, 2)) @ v)
        inside = a[:, -1] < 1.0 - 1e-13
        a_in = np.where(inside[:, None], a, 0.0)
        if gaussian:
            # target/proposal bound: Delta(I-v*v)^expo * exp(expo <v,v>) <= 1
            log_acc = expo * (np.log1p(-a_in).sum(axis=1) + a_in.sum(axis=1))
        else:
            log_acc = expo * np.log1p(-a_in).sum(axis=1)
        accept = inside & (np.log(rng.uniform(size=m)) < log_acc)
        take = np.flatnonzero(accept)[: n - filled]
        out[filled : filled + take.size] = v[take]
        filled += take.size
        proposals += m
        if proposals >= _MAX_PROPOSALS and filled / proposals < _MIN_RATE:
            raise SamplingError(
                f"ball sampler acceptance rate {filled/proposals:.2e} after "
                f"{proposals} proposals (mu is pathologically close to rho - 1)"
            )
    return out


def sample_ball(params: StructureParams, rng: np.random.Generator) -> BallMatrix:
    """One draw from the normalized ball density Delta(I-v*v)^{mu-rho}."""
    return BallMatrix(_sample_ball_batch(params, rng, 1)[0])


def convolve_sample(r, s, params: StructureParams, rng: np.random.Generator) -> ConeMatrix:
    """One draw from delta_r * delta_s under the index-mu convolution.

    The zero matrix is the neutral element exactly: if either argument is
    zero the other is returned unchanged and no randomness is consumed.
    """
    rm = r if isinstance(r, ConeMatrix) else ConeMatrix(r)
    sm = s if isinstance(s, ConeMatrix) else ConeMatrix(s)
    if rm.q != sm.q or rm.q != params.q:
        raise DimensionError("rank mismatch between arguments and params")
    if rm.is_zero():
        return sm
    if sm.is_zero():
        return rm
    v = _sample_ball_batch(params, rng, 1)[0]
    ra, sa = rm.array, sm.array
    m = ra @ ra + sa @ sa + sa @ v @ ra + ra @ v.conj().T @ sa
    m = (m + m.conj().T) / 2.0
    return psd_sqrt(ConeMatrix(m))


def convolve_expectation(f, r, s, params: StructureParams, n_samples: int, rng):
    """Monte Carlo mean of f over delta_r * delta_s, with standard error."""
    if n_samples < 2:
        raise DomainError("n_samples must be at least 2")
    vals = np.empty(n_samples)
    for i in range(n_samples):
        vals[i] = f(convolve_sample(r, s, params, rng))
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n_samples))


def walk_simulate(nu: RadialLaw, params: StructureParams, n_steps: int, rng, label: str = "") -> WalkPath:
    """Random walk started at zero: each step convolves with a fresh atom of nu."""
    if nu.q != params.q:
        raise DimensionError("law rank does not match params")
    if n_steps < 0:
        raise DomainError("n_steps must be nonnegative")
    zero = ConeMatrix(np.zeros((params.q, params.q), dtype=params.dtype))
    steps = [zero]
    current = zero
    for _ in range(n_steps):
        atom = nu.atoms[nu.sample_index(rng)]
        current = convolve_sample(current, atom, params, rng)
        steps.append(current)
    return WalkPath(params=params, steps=tuple(steps), label=label)


def radial_matrix_sample(nu: RadialLaw, p: int, params: StructureParams, rng) -> RectMatrix:
    """p x q matrix with uniformly rotated frame and radial part drawn from nu."""
    if p < params.q:
        raise DimensionError(f"need p >= q, got p={p}, q={params.q}")
    atom = nu.atoms[nu.sample_index(rng)]
    iota = np.zeros((p, params.q), dtype=params.dtype)
    iota[: params.q, :] = atom.array
    u = haar_unitary(p, params.d, rng)
    return RectMatrix(u @ iota)


def orbit_walk_simulate(nu: RadialLaw, p: int, params: StructureParams, n_steps: int, rng, label: str = "") -> WalkPath:
    """Radial parts of partial sums of independent rotated-frame matrices.

    For mu = p d / 2 this has the same law, step by step, as walk_simulate.
    """
    if n_steps < 0:
        raise DomainError("n_steps must be nonnegative")
    total = np.zeros((p, params.q), dtype=params.dtype)
    zero = ConeMatrix(np.zeros((params.q, params.q), dtype=params.dtype))
    steps = [zero]
    for _ in range(n_steps):
        total = total + radial_matrix_sample(nu, p, params, rng).array
        steps.append(phi_p(total))
    return WalkPath(params=params, steps=tuple(steps), label=label)

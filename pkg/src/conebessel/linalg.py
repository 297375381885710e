"""Matrix types and primitives for Hermitian matrices over R or C.

Everything downstream (Bessel series, hypergroup sampling, experiment
drivers) goes through the small set of primitives defined here, so the
numerical policy is in one place: Hermiticity is enforced to 1e-12
relative, positive semidefiniteness to 1e-10 relative with eigenvalue
clamping at construction, and eigendecomposition is the single primitive
used for square roots, determinant powers and ball membership.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
BALL_TOL = 1e-14


@dataclass(frozen=True)
class StructureParams:
    """Rank, base field and index of a matrix cone problem.

    q is the rank (matrices are q x q), d selects the field (1 for real
    symmetric, 2 for complex Hermitian) and mu is the continuous index of
    the Bessel function / hypergroup. The half-sum shift rho and the Jack
    parameter alpha are derived, never stored.
    """

    q: int
    d: int
    mu: float

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or self.q < 1:
            raise DomainError(f"rank q must be a positive integer, got {self.q!r}")
        if self.d == 4:
            raise DomainError(
                "d=4 (quaternionic matrices) is not supported; only d=1 (real) "
                "and d=2 (complex) are implemented"
            )
        if self.d not in (1, 2):
            raise DomainError(f"field selector d must be 1 or 2, got {self.d!r}")
        mu = float(self.mu)
        if not np.isfinite(mu) or mu <= self.rho - 1.0:
            raise DomainError(
                f"index mu must exceed rho - 1 = {self.rho - 1.0}; got mu={self.mu}"
            )

    @property
    def rho(self) -> float:
        """Half-sum shift d*(q - 1/2) + 1."""
        return self.d * (self.q - 0.5) + 1.0

    @property
    def alpha(self) -> float:
        """Jack parameter 2/d."""
        return 2.0 / self.d

    @property
    def dtype(self):
        return np.complex128 if self.d == 2 else np.float64

    @property
    def ambient_dim(self) -> int:
        """Real dimension of the q x q matrix space over the field."""
        return self.d * self.q * self.q

    def with_mu(self, mu: float) -> "StructureParams":
        return StructureParams(self.q, self.d, float(mu))


def _as_array(x) -> np.ndarray:
    if isinstance(x, (HermitianMatrix, RectMatrix, BallMatrix)):
        return x.array
    return np.asarray(x)


class HermitianMatrix:
    """Square matrix equal to its conjugate transpose within tolerance.

    The stored array is the exact Hermitian part (x + x*)/2 of the input.
    """

    __slots__ = ("array",)

    def __init__(self, array):
        a = np.asarray(_as_array(array))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainError("matrix entries must be finite")
        scale = float(np.linalg.norm(a)) + 1.0
        dev = float(np.linalg.norm(a - a.conj().T))
        if dev > HERMITIAN_TOL * scale:
            raise DomainError(
                f"matrix is not Hermitian: |x - x*| = {dev:.3e} exceeds "
                f"{HERMITIAN_TOL:.0e} relative tolerance"
            )
        h = (a + a.conj().T) / 2.0
        if np.iscomplexobj(h) and np.max(np.abs(h.imag)) == 0.0:
            h = h.real
        object.__setattr__(self, "array", h)

    @property
    def q(self) -> int:
        return self.array.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return np.linalg.eigvalsh(self.array)[::-1]

    def trace(self) -> float:
        return float(np.real(np.trace(self.array)))

    def __repr__(self):
        return f"{type(self).__name__}(q={self.q})"


class ConeMatrix(HermitianMatrix):
    """Positive semidefinite Hermitian matrix (a point of the cone).

    Eigenvalues are computed once at construction, negatives within
    tolerance are clamped to zero and the array is rebuilt from the
    clamped spectrum, so the stored matrix is PSD exactly (up to the
    reconstruction rounding).
    """

    __slots__ = ("eigs", "_vecs")

    def __init__(self, array):
        super().__init__(array)
        w, v = np.linalg.eigh(self.array)
        scale = max(float(w[-1]), 0.0) + 1.0
        if w[0] < -PSD_TOL * scale:
            raise DomainError(
                f"matrix is not positive semidefinite: min eigenvalue {w[0]:.3e} "
                f"below -{PSD_TOL:.0e} relative tolerance"
            )
        clamped = np.maximum(w, 0.0)
        if w[0] < 0.0:
            rebuilt = (v * clamped) @ v.conj().T
            rebuilt = (rebuilt + rebuilt.conj().T) / 2.0
            object.__setattr__(self, "array", rebuilt)
        object.__setattr__(self, "eigs", clamped[::-1].copy())
        object.__setattr__(self, "_vecs", v[:, ::-1].copy())

    @classmethod
    def _from_eigh(cls, eigs_desc: np.ndarray, vecs: np.ndarray) -> "ConeMatrix":
        """Build directly from a known eigendecomposition (internal fast path)."""
        obj = object.__new__(cls)
        e = np.maximum(np.asarray(eigs_desc, dtype=float), 0.0)
        a = (vecs * e) @ vecs.conj().T
        a = (a + a.conj().T) / 2.0
        if np.iscomplexobj(a) and np.max(np.abs(a.imag)) == 0.0:
            a = a.real
        object.__setattr__(obj, "array", a)
        object.__setattr__(obj, "eigs", e.copy())
        object.__setattr__(obj, "_vecs", vecs.copy())
        return obj

    def eigenvalues(self) -> np.ndarray:
        return self.eigs

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self.array))

    def is_zero(self) -> bool:
        return not np.any(self.array)


class RectMatrix:
    """Rectangular p x q matrix over the field, finite entries."""

    __slots__ = ("array",)

    def __init__(self, array):
        a = np.asarray(_as_array(array))
        if a.ndim != 2:
            raise DimensionError(f"expected a 2-d array, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainError("matrix entries must be finite")
        object.__setattr__(self, "array", a.copy())

    @property
    def p(self) -> int:
        return self.array.shape[0]

    @property
    def q(self) -> int:
        return self.array.shape[1]

    def __repr__(self):
        return f"RectMatrix(p={self.p}, q={self.q})"


class BallMatrix:
    """q x q matrix with spectral norm strictly below one.

    Membership is checked through the largest eigenvalue of v* v, which
    must stay below 1 - 1e-14.
    """

    __slots__ = ("array",)

    def __init__(self, array):
        a = np.asarray(_as_array(array))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {a.shape}")
        top = float(np.linalg.eigvalsh(a.conj().T @ a)[-1])
        if not top < 1.0 - BALL_TOL:
            raise DomainError(
                f"matrix is not inside the open spectral unit ball: "
                f"max eig of v*v = {top!r}"
            )
        object.__setattr__(self, "array", a.copy())

    @property
    def q(self) -> int:
        return self.array.shape[0]


def frob_inner(x, y) -> float:
    """Real Frobenius inner product Re tr(x* y)."""
    a, b = _as_array(x), _as_array(y)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.real(np.sum(a.conj() * b)))


def psd_sqrt(a) -> ConeMatrix:
    """Unique PSD square root of a PSD matrix."""
    if isinstance(a, ConeMatrix):
        return ConeMatrix._from_eigh(np.sqrt(a.eigs), a._vecs)
    c = ConeMatrix(a)
    return ConeMatrix._from_eigh(np.sqrt(c.eigs), c._vecs)


def phi_p(x) -> ConeMatrix:
    """Radial part (x* x)^{1/2} of a rectangular matrix."""
    a = _as_array(x)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {a.shape}")
    g = a.conj().T @ a
    return psd_sqrt((g + g.conj().T) / 2.0)


def delta_power(x, power: float) -> float:
    """det(x)^power through the eigenvalues, for Hermitian x.

    For non-integer power the spectrum must be strictly positive.
    """
    a = _as_array(x)
    w = np.linalg.eigvalsh((a + a.conj().T) / 2.0)
    if float(power) == int(power):
        return float(np.prod(w ** int(power)))
    if w[0] <= 0.0:
        raise DomainError(
            f"det^power with non-integer power {power} needs a positive "
            f"definite argument; min eigenvalue {w[0]:.3e}"
        )
    return float(np.exp(power * np.sum(np.log(w))))


def spectral_decomp(a):
    """Eigenvalues (descending) and a unitary of eigenvectors, a = u diag(w) u*."""
    h = _as_array(a)
    w, v = np.linalg.eigh((h + h.conj().T) / 2.0)
    return w[::-1].copy(), v[:, ::-1].copy()


def haar_unitary(p: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal (d=1) or unitary (d=2) p x p matrix.

    QR of a Gaussian matrix with the R-diagonal phase folded back into Q,
    which makes the distribution exactly Haar rather than QR-convention
    dependent. p=1, d=1 gives +-1 with equal probability.
    """
    if p < 1:
        raise DomainError(f"p must be at least 1, got {p}")
    if d not in (1, 2):
        raise DomainError(f"field selector d must be 1 or 2, got {d!r}")
    return _haar_batch(p, d, rng, 1)[0]


def _haar_batch(p: int, d: int, rng: np.random.Generator, n: int) -> np.ndarray:
    """n Haar matrices stacked along the first axis."""
    if d == 1:
        g = rng.standard_normal((n, p, p))
    else:
        g = rng.standard_normal((n, p, p)) + 1j * rng.standard_normal((n, p, p))
    q, r = np.linalg.qr(g)
    diag = np.einsum("nii->ni", r)
    phase = diag / np.abs(diag)
    return q * phase[:, None, :]


def matrix_to_json(x) -> list:
    """Row-major nested lists; complex entries become [re, im] pairs."""
    a = _as_array(x)
    if np.iscomplexobj(a):
        return [[[float(v.real), float(v.imag)] for v in row] for row in a]
    return [[float(v) for v in row] for row in a]


def matrix_from_json(data, d: int) -> np.ndarray:
    """Inverse of matrix_to_json; d picks the field the entries live in."""
    rows = []
    for row in data:
        vals = []
        for v in row:
            if d == 2:
                if not (isinstance(v, (list, tuple)) and len(v) == 2):
                    raise DomainError(
                        "complex matrix entries must be [re, im] pairs"
                    )
                vals.append(complex(float(v[0]), float(v[1])))
            else:
                if isinstance(v, (list, tuple)):
                    raise DomainError("real matrix entries must be plain numbers")
                vals.append(float(v))
        rows.append(vals)
    a = np.asarray(rows, dtype=np.complex128 if d == 2 else np.float64)
    if a.ndim != 2:
        raise DimensionError("matrix JSON must be a list of equal-length rows")
    return a

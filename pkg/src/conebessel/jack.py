"""Integer partitions and Jack polynomials in the C normalization.

The series modules need, for each weight k, the values of all Jack
polynomials C_lambda^alpha at a vector of eigenvalues, normalized so that

    sum over |lambda| = k of  C_lambda^alpha(xi)  =  (xi_1 + ... + xi_q)^k.

The implementation expands the monic Jack polynomial P_lambda in the
monomial symmetric basis with the classical eigenoperator recurrence: the
coefficient of m_mu in P_lambda is

    c(lambda, mu) = (2/alpha) / (rho(lambda) - rho(mu))
                    * sum over raising moves (mu_i + t, mu_j - t) of
                      (mu_i - mu_j + 2t) * c(lambda, sorted move result),

with rho(lambda) = sum_i lambda_i (lambda_i - 1 - (2/alpha)(i-1)).  The
denominator is strictly positive for mu strictly below lambda in dominance
order, so the recurrence is well defined for every alpha > 0.  Coefficients
are computed in exact rational arithmetic and converted to floats once.

The C normalization is obtained from P through the arm/leg hook product

    C_lambda = alpha^k k! / prod over cells (alpha (arm+1) + leg) * P_lambda,

which is independent of the power-trace identity above; that identity is
kept as a test of the whole pipeline rather than being built in.

Expansion coefficients do not depend on the number of variables, and the
set of partitions with at most q parts is closed upward in dominance
order, so the table for q variables restricts every sum to partitions of
length at most q.  Tables are memoized per (alpha, q) and filled one
weight at a time under a lock.
"""

from __future__ import annotations

import itertools
import math
import threading
from fractions import Fraction

import numpy as np

from .errors import DomainError

__all__ = [
    "Partition",
    "partitions_of_weight",
    "gen_pochhammer",
    "jack_C",
    "zonal_Z",
    "layer_values",
]


class Partition(tuple):
    """Non-increasing tuple of positive integers (weakly, trailing zeros dropped)."""

    def __new__(cls, parts=()):
        cleaned = []
        prev = None
        for p in parts:
            ip = int(p)
            if ip != p or ip < 0:
                raise DomainError(f"partition parts must be nonnegative integers, got {p!r}")
            if prev is not None and ip > prev:
                raise DomainError(f"partition parts must be non-increasing, got {tuple(parts)}")
            prev = ip
            if ip > 0:
                cleaned.append(ip)
            # a zero part forces all later parts to be zero via the ordering check
        return super().__new__(cls, cleaned)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def __repr__(self):
        return f"Partition{tuple(self)}"


def partitions_of_weight(weight: int, max_parts: int) -> list[Partition]:
    """All partitions of the given weight into at most max_parts parts.

    Returned in reverse lexicographic order, e.g. weight 3, max_parts 2
    gives [(3,), (2, 1)].  That order refines dominance order, which the
    coefficient recurrence relies on.
    """
    if weight < 0 or max_parts < 0:
        raise DomainError("weight and max_parts must be nonnegative")

    out: list[Partition] = []

    def rec(prefix, remaining, max_part, slots):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if slots == 0:
            return
        top = min(remaining, max_part)
        # remaining units must fit into the available slots
        low = -(-remaining // slots)
        for first in range(top, low - 1, -1):
            rec(prefix + [first], remaining - first, first, slots - 1)

    rec([], weight, weight, max_parts)
    return out


def gen_pochhammer(mu: float, lam, alpha: float) -> float:
    """Generalized rising factorial prod_j (mu - (j-1)/alpha)_{lam_j}."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    total = 1.0
    inv = 1.0 / float(alpha)
    for j, part in enumerate(lam):
        base = float(mu) - j * inv
        for m in range(int(part)):
            total *= base + m
    return total


def _dominated(mu, lam) -> bool:
    """True when mu <= lam in dominance order (same weight assumed)."""
    acc_l = acc_m = 0
    for i in range(max(len(mu), len(lam))):
        acc_l += lam[i] if i < len(lam) else 0
        acc_m += mu[i] if i < len(mu) else 0
        if acc_m > acc_l:
            return False
    return True


def _hook_norm(lam: Partition, alpha: Fraction) -> Fraction:
    """C-normalization constant alpha^k k! / prod(alpha (arm+1) + leg)."""
    k = lam.weight
    conj = lam.conjugate()
    denom = Fraction(1)
    for i, part in enumerate(lam):
        for j in range(part):
            arm = part - j - 1
            leg = conj[j] - i - 1
            denom *= alpha * (arm + 1) + leg
    return alpha**k * Fraction(math.factorial(k)) / denom


class _JackTable:
    """Per-(alpha, q) cache of C-normalized monomial expansion coefficients."""

    def __init__(self, alpha: Fraction, q: int):
        self.alpha = alpha
        self.q = q
        self._layers = {}
        self._lock = threading.Lock()

    def layer(self, k: int):
        """(partitions, coeff matrix, exponent arrays) for weight k.

        coeff[i, j] is the coefficient of m_{parts[j]} in C_{parts[i]};
        exponent arrays list, per partition, the distinct permutations of
        its parts padded to q slots, ready for monomial evaluation.
        """
        with self._lock:
            got = self._layers.get(k)
            if got is None:
                got = self._build(k)
                self._layers[k] = got
            return got

    def _build(self, k: int):
        parts = partitions_of_weight(k, self.q)
        n = len(parts)
        index = {p: i for i, p in enumerate(parts)}
        alpha = self.alpha
        two_over_alpha = Fraction(2) / alpha

        rho = []
        for lam in parts:
            val = Fraction(0)
            for i, part in enumerate(lam):
                val += part * (Fraction(part - 1) - two_over_alpha * i)
            rho.append(val)

        # raising moves out of each mu: (target row index, integer factor)
        moves: list[list[tuple[int, int]]] = []
        for mi, mu in enumerate(parts):
            lst = []
            mlist = list(mu)
            for j in range(1, len(mlist)):
                for i in range(j):
                    for t in range(1, mlist[j] + 1):
                        cand = mlist.copy()
                        cand[i] += t
                        cand[j] -= t
                        nu = Partition(sorted(cand, reverse=True))
                        lst.append((index[nu], mlist[i] - mlist[j] + 2 * t))
            moves.append(lst)

        coeff = np.zeros((n, n))
        for li, lam in enumerate(parts):
            row = {li: Fraction(1)}
            for mi in range(li + 1, n):
                if not _dominated(parts[mi], lam):
                    continue
                total = Fraction(0)
                for ci, factor in moves[mi]:
                    c = row.get(ci)
                    if c is not None:
                        total += factor * c
                if total:
                    row[mi] = two_over_alpha * total / (rho[li] - rho[mi])
            scale = _hook_norm(lam, alpha)
            for mi, c in row.items():
                coeff[li, mi] = float(scale * c)

        expo = []
        for mu in parts:
            padded = tuple(mu) + (0,) * (self.q - len(mu))
            perms = sorted(set(itertools.permutations(padded)))
            expo.append(np.asarray(perms, dtype=np.intp))
        return parts, coeff, expo


_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()


def _alpha_key(alpha) -> Fraction:
    if isinstance(alpha, Fraction):
        key = alpha
    elif isinstance(alpha, int):
        key = Fraction(alpha)
    else:
        key = Fraction(float(alpha))
    if key <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return key


def _get_table(alpha, q: int) -> _JackTable:
    key = (_alpha_key(alpha), int(q))
    with _TABLES_LOCK:
        table = _TABLES.get(key)
        if table is None:
            table = _JackTable(key[0], key[1])
            _TABLES[key] = table
    return table


def _monomial_values(expo_list, xi_batch: np.ndarray, k: int) -> np.ndarray:
    """Monomial symmetric polynomial values, shape (n partitions, batch)."""
    n_batch, q = xi_batch.shape
    powers = xi_batch[:, :, None] ** np.arange(k + 1)
    cols = np.arange(q)
    out = np.empty((len(expo_list), n_batch))
    for r, expo in enumerate(expo_list):
        acc = np.zeros(n_batch)
        for perm in expo:
            acc += powers[:, cols, perm].prod(axis=1)
        out[r] = acc
    return out


def layer_values(alpha, q: int, k: int, xi_batch: np.ndarray):
    """Values of every C_lambda^alpha with |lambda| = k, len(lambda) <= q.

    xi_batch has shape (batch, q); the result is (partitions, values) with
    values of shape (n partitions, batch).
    """
    table = _get_table(alpha, q)
    parts, coeff, expo = table.layer(k)
    mvals = _monomial_values(expo, np.asarray(xi_batch, dtype=float), k)
    return parts, coeff @ mvals


def jack_C(lam, alpha, xi) -> float:
    """Jack polynomial C_lambda^alpha at the point xi.

    xi is a vector of q real numbers; lam must have at most q parts.
    Normalized so the weight-k layer sums to (sum xi)^k.
    """
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    x = np.asarray(xi, dtype=float).reshape(-1)
    if lam.length > x.size:
        raise DomainError(
            f"partition has {lam.length} parts but only {x.size} variables"
        )
    if lam.weight == 0:
        return 1.0
    table = _get_table(alpha, x.size)
    parts, coeff, expo = table.layer(lam.weight)
    row = parts.index(lam)
    mvals = _monomial_values(expo, x[None, :], lam.weight)
    return float(coeff[row] @ mvals[:, 0])


def zonal_Z(lam, x, params) -> float:
    """Zonal polynomial Z_lambda(x) = C_lambda^{2/d} at the eigenvalues of x."""
    from .linalg import HermitianMatrix, _as_array

    a = _as_array(x)
    if a.shape != (params.q, params.q):
        raise DomainError(
            f"argument must be {params.q} x {params.q}, got {a.shape}"
        )
    eigs = HermitianMatrix(a).eigenvalues()
    return jack_C(lam, Fraction(2, params.d), eigs)

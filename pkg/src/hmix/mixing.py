"""Mixing diagnostics: exact distances, transform bounds, central coordinate.

The exact total-variation curve comes from repeated convolution, which
costs n^3 work per step and is gated behind a state budget (override
with the HMIX_BUDGET environment variable).  Upper bounds come from the
transform-side inequality

    4 * tv(k)^2 <= sum over nontrivial labels of dim * ||qhat^k||_F^2,

split into its one-dimensional and higher-dimensional parts, and lower
bounds from projecting the walk onto one axis, where it becomes the
lazy +-1 cycle walk whose distribution has a closed spectral form.

A second exact route expands the deviation from uniformity in
eigenvectors of the per-label transforms.  It matches the convolution
curve wherever the latter is above float noise and stays accurate at
arbitrarily large step counts, where convolved tables bottom out near
machine epsilon.

On even moduli the coordinate parity x + y alternates with every step,
so plain total variation never drops below 1/2; odd moduli are the
interesting regime for all of these curves.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import fourier
from .errors import NumericalCheckError
from .group import DistributionTable, canonical_measure, iterate_convolutions, tv_distance
from .harper import build_harper

DEFAULT_STATE_BUDGET = 9261  # 21^3

_TAU = 2.0 * np.pi


def state_budget() -> int:
    raw = os.environ.get("HMIX_BUDGET", "")
    return int(raw) if raw else DEFAULT_STATE_BUDGET


def _check_budget(n: int) -> None:
    budget = state_budget()
    if n**3 > budget:
        raise ValueError(
            f"n^3 = {n**3} exceeds the state budget {budget}; "
            "set HMIX_BUDGET to raise it"
        )


@dataclass(frozen=True)
class TVPoint:
    """One row of a mixing curve."""

    n: int
    k: int
    eta: float
    tv_exact: float
    ub_fourier: float
    lb_projection: float


def fourier_bound_terms(n: int, ks) -> tuple[np.ndarray, np.ndarray]:
    """One-dimensional and higher-dimensional parts of the bound sum.

    Term one sums lambda^(2k) over the nontrivial scalar labels; term
    two sums dim * mu^(2k) over the eigenvalues mu of each higher
    transform.  Both are exact spectral sums, vectorised over ks.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    scal = fourier.scalar_eigenvalues(n)
    term1 = np.sum(scal[None, :] ** (2 * ks[:, None]), axis=1)
    vals = []
    mult = []
    for irr in fourier.enumerate_irreps(n):
        if irr.m >= 2:
            vals.append(np.linalg.eigvalsh(fourier.walk_transform(irr)))
            mult.append(np.full(irr.m, irr.m))
    if vals:
        v = np.concatenate(vals)
        d = np.concatenate(mult)
        term2 = np.sum(d[None, :] * v[None, :] ** (2 * ks[:, None]), axis=1)
    else:
        term2 = np.zeros_like(term1)
    return term1, term2


def fourier_upper_bounds(n: int, ks) -> np.ndarray:
    """Transform-side upper bounds sqrt(term1 + term2)/2 for each k."""
    term1, term2 = fourier_bound_terms(n, ks)
    return 0.5 * np.sqrt(term1 + term2)


def projection_lower_bounds(n: int, ks) -> np.ndarray:
    """Exact distance to uniform of the projected one-axis walk.

    The x coordinate performs the lazy cycle walk (hold 1/2, step 1/4
    each way), whose k-step law is a cosine sum over the circle modes.
    Projections only lose total variation, so this is a lower bound.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    a = np.arange(n)
    lam = 0.5 + 0.5 * np.cos(_TAU * a / n)
    modes = np.cos(_TAU * np.outer(a, a) / n)
    pk = (lam[None, :] ** ks[:, None]) @ modes / n
    return 0.5 * np.abs(pk - 1.0 / n).sum(axis=1)


def projection_lower_bound(n: int, k: int) -> float:
    """Lower bound on the distance to uniform after k steps."""
    if k < 0:
        raise ValueError("step count must be nonnegative")
    return float(projection_lower_bounds(n, [k])[0])


def convolution_tv(n: int, ks) -> np.ndarray:
    """Exact distances to uniform along the convolution walk."""
    _check_budget(n)
    want = sorted({int(k) for k in np.atleast_1d(ks)})
    if want and want[0] < 0:
        raise ValueError("step counts must be nonnegative")
    out = {}
    if want and want[0] == 0:
        out[0] = tv_distance(DistributionTable.point_mass(n))
    top = want[-1] if want else 0
    q = canonical_measure(n)
    remaining = set(want)
    for k, table in iterate_convolutions(q, top):
        if k in remaining:
            out[k] = tv_distance(table)
    return np.array([out[k] for k in np.atleast_1d(ks)])


def tv_spectral(n: int, ks) -> np.ndarray:
    """Exact distances to uniform built from per-label eigenvectors.

    The deviation of the k-step law from uniform is assembled as

        p_k(g) - 1/n^3 = (1/n^3) * sum over nontrivial labels of
            dim * sum_l mu_l^k * v_l^* rho(g^-1) v_l,

    which never subtracts nearly equal quantities, so tiny distances
    come out with full relative accuracy.
    """
    _check_budget(n)
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    acc = np.zeros((ks.size, n**3), dtype=np.complex128)
    for irr in fourier.enumerate_irreps(n):
        if irr.is_trivial:
            continue
        vals, vecs = np.linalg.eigh(fourier.walk_transform(irr))
        weights = fourier.eigenweight_table(irr, vecs)
        powers = vals[None, :] ** ks[:, None]
        acc += irr.m * (powers @ weights.T)
    dev = acc.real / n**3
    return 0.5 * np.abs(dev).sum(axis=1)


def hybrid_tv(n: int, ks, noise_floor: float = 1e-11) -> np.ndarray:
    """Convolution distances where they are trustworthy, spectral beyond.

    Convolved tables accumulate rounding noise around 1e-15 per state,
    so once the true distance sinks below ``noise_floor`` the spectral
    route takes over.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    conv = convolution_tv(n, ks)
    spec = tv_spectral(n, ks)
    return np.where(conv >= noise_floor, conv, spec)


def exact_tv_curve(n: int, k_max: int) -> list[TVPoint]:
    """Exact curve with matching bounds at every step count up to k_max."""
    if n < 3 or n % 2 == 0:
        raise ValueError("the mixing curve needs an odd modulus of at least 3")
    if k_max < 0:
        raise ValueError("step count must be nonnegative")
    _check_budget(n)
    ks = list(range(k_max + 1))
    tvs = hybrid_tv(n, ks)
    ubs = fourier_upper_bounds(n, ks)
    lbs = projection_lower_bounds(n, ks)
    return [
        TVPoint(n, k, k / float(n * n), float(tv), float(ub), float(lb))
        for k, tv, ub, lb in zip(ks, tvs, ubs, lbs)
    ]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def center_distribution(p: int, k: int) -> np.ndarray:
    """Exact law of the central coordinate after k steps, for odd prime p.

    P{Z_k = z} = 1/p + (1/p) * sum over frequencies xi = 1..p-1 of
    exp(-2*pi*i*xi*z/p) times the top-row sum of the xi-band matrix
    raised to the k-th power.
    """
    if p == 2 or not _is_prime(p):
        raise ValueError("the central coordinate formula needs an odd prime")
    if k < 0:
        raise ValueError("step count must be nonnegative")
    z = np.arange(p)
    acc = np.zeros(p, dtype=np.complex128)
    for xi in range(1, p):
        vals, vecs = np.linalg.eigh(build_harper(p, xi))
        row_sum = float(np.sum((vals**k) * vecs[0, :] * vecs.sum(axis=0)))
        acc += np.exp(-_TAU * 1j * xi * z / p) * row_sum
    if np.abs(acc.imag).max() / p > 1e-9:
        raise NumericalCheckError("central coordinate sum failed to come out real")
    return 1.0 / p + acc.real / p


def center_distribution_fourier(p: int, k: int, z: int) -> float:
    """Probability that the central coordinate equals z after k steps."""
    return float(center_distribution(p, k)[z % p])


def rate_ratios(n: int, etas) -> list[tuple[float, int, float]]:
    """Distance at k = ceil(eta*n^2) rescaled by exp(2*pi^2*eta).

    The rescaled values settle into a narrow band as n grows, which
    pins the decay constant of the distance profile in diffusive time.
    """
    etas = [float(e) for e in np.atleast_1d(etas)]
    ks = [math.ceil(e * n * n) for e in etas]
    tvs = hybrid_tv(n, ks)
    return [
        (eta, k, float(tv * math.exp(2.0 * math.pi**2 * eta)))
        for eta, k, tv in zip(etas, ks, tvs)
    ]


@dataclass(frozen=True)
class EnvelopeReport:
    """Two-sided envelope for the rescaled distance in diffusive time."""

    rows: tuple[tuple[int, float, int, float], ...]
    lower: float
    upper: float


def envelope_constants(ns, etas) -> EnvelopeReport:
    """Explicit envelope constants for the distance in diffusive time.

    For every modulus n and every eta the distance at k = ceil(eta*n^2)
    is rescaled by exp(2*pi^2*eta); the report collects the rescaled
    values as rows (n, eta, k, ratio) together with their global
    extremes.  At each eta the values must agree across the sampled
    moduli within a factor of two, otherwise the envelope is not
    trustworthy and a NumericalCheckError is raised.
    """
    ns = [int(n) for n in np.atleast_1d(ns)]
    etas = [float(e) for e in np.atleast_1d(etas)]
    if not ns or not etas:
        raise ValueError("need at least one modulus and one eta")
    rows = []
    for n in ns:
        for eta, k, ratio in rate_ratios(n, etas):
            rows.append((n, eta, k, ratio))
    for eta in etas:
        vals = [row[3] for row in rows if row[1] == eta]
        if max(vals) > 2.0 * min(vals):
            raise NumericalCheckError(
                f"rescaled distances at eta={eta} spread beyond a factor of "
                f"two across moduli {ns}: {vals}"
            )
    ratios = [row[3] for row in rows]
    return EnvelopeReport(tuple(rows), min(ratios), max(ratios))


def decay_rate_estimate(n: int, k1: int | None = None, k2: int | None = None) -> float:
    """Asymptotic exponential decay rate of the distance to uniform.

    Fitted between two late step counts via the spectral route; the
    limit is -log of the largest-magnitude nontrivial transform
    eigenvalue.  That eigenvalue comes from the scalar label with both
    frequencies at (n -+ 1)/2 and equals -cos(pi/n) for odd n, so the
    fitted rate behaves like pi^2/(2*n^2) for large n.
    """
    if k1 is None:
        k1 = 5 * n * n
    if k2 is None:
        k2 = 10 * n * n
    if not 0 < k1 < k2:
        raise ValueError("need 0 < k1 < k2")
    tv1, tv2 = tv_spectral(n, [k1, k2])
    return float(np.log(tv1 / tv2) / (k2 - k1))

"""Cosine band matrices on the cycle and their spectral symmetries.

The n-point matrix with frequency xi and offset alpha has quarter
weights on the two wrapped off-diagonals and diagonal entries

    d_j = cos(2*pi*xi*(alpha + j)/n) / 2.

At the top labels of the representation table these matrices are
exactly the transforms of the four-generator step measure, so their
extreme eigenvalues control both mixing upper bounds and the
distribution of the central coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalCheckError

_TAU = 2.0 * np.pi


def harper_diagonal(n: int, xi: int, alpha: float = 0.0) -> np.ndarray:
    """Diagonal of the band matrix.

    With alpha = 0 the angles are reduced to integers r = min(xi*j mod n,
    n - xi*j mod n) before the cosine, which makes the diagonals for xi
    and n - xi agree bit for bit.
    """
    j = np.arange(n)
    if alpha == 0:
        r = (int(xi) * j) % n
        return 0.5 * np.cos(_TAU * np.minimum(r, n - r) / n)
    phase = np.mod(xi * (alpha + j), n)
    return 0.5 * np.cos(_TAU * phase / n)


def build_general(diag: np.ndarray) -> np.ndarray:
    """Band matrix with a caller-supplied diagonal and quarter couplings."""
    diag = np.asarray(diag, dtype=np.float64)
    n = diag.size
    if n < 3:
        raise ValueError("need at least three sites on the cycle")
    if np.abs(diag).max() > 0.5 + 1e-12:
        raise ValueError("diagonal entries must lie in [-1/2, 1/2]")
    j = np.arange(n)
    out = np.zeros((n, n))
    out[j, j] = diag
    out[j, (j + 1) % n] = 0.25
    out[j, (j - 1) % n] = 0.25
    return out


def build_harper(n: int, xi: int, alpha: float = 0.0) -> np.ndarray:
    if n < 3:
        raise ValueError("need at least three sites on the cycle")
    return build_general(harper_diagonal(n, xi, alpha))


def spectrum(mat: np.ndarray) -> np.ndarray:
    """Eigenvalues in descending order."""
    try:
        return np.linalg.eigvalsh(mat)[::-1]
    except np.linalg.LinAlgError as exc:
        raise NumericalCheckError(
            f"eigensolver failed to converge on a {mat.shape[0]}-site matrix: {exc}"
        ) from exc


def spectrum_with_vectors(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Descending eigenvalues together with matching eigenvector columns."""
    vals, vecs = np.linalg.eigh(mat)
    return vals[::-1], vecs[:, ::-1]


def beta_star(n: int, xi: int, alpha: float = 0.0) -> float:
    """max(beta_1, -beta_n): the spectral radius of the band matrix."""
    s = spectrum(build_harper(n, xi, alpha))
    return float(max(s[0], -s[-1]))


def _contained(small: np.ndarray, big: np.ndarray, tol: float) -> bool:
    """Greedy sorted matching: every entry of small has a partner in big."""
    small = np.sort(small)
    big = np.sort(big)
    j = 0
    for val in small:
        while j < big.size and big[j] < val - tol:
            j += 1
        if j >= big.size or big[j] > val + tol:
            return False
        j += 1
    return True


def _nearest_gap(small: np.ndarray, big: np.ndarray) -> float:
    """Largest distance from an entry of small to its nearest entry of big."""
    return float(np.max(np.min(np.abs(small[:, None] - big[None, :]), axis=1)))


@dataclass(frozen=True)
class ClauseCheck:
    """Outcome of one symmetry clause: verdict plus how far off it was."""

    ok: bool
    discrepancy: float


def check_spectral_symmetries(
    n: int, xi: int, alpha: float = 0.0, cover_factor: int = 2
) -> dict[str, ClauseCheck]:
    """Verify the symmetry clauses that apply at (n, xi, alpha).

    reflection_entrywise    exact matrix equality between xi and n - xi
                            (offset zero only, where the integer-reduced
                            diagonal makes it bitwise)
    cover_inclusion         the spectrum embeds in the one at
                            (k*n, k*xi, alpha)
    half_period_negation    even n: shifting alpha by n/(2*xi) negates
                            the spectrum
    doubled_negation_inclusion
                            odd n: the negated spectrum embeds in the
                            doubled matrix at the shifted offset

    Each clause reports a verdict together with its largest observed
    deviation (entrywise difference, unmatched-eigenvalue distance, or
    sorted-spectrum mismatch, as appropriate).
    """
    out: dict[str, ClauseCheck] = {}
    spec = spectrum(build_harper(n, xi, alpha))
    if alpha == 0:
        left, right = build_harper(n, xi), build_harper(n, n - xi)
        out["reflection_entrywise"] = ClauseCheck(
            bool(np.array_equal(left, right)), float(np.abs(left - right).max())
        )
    big = spectrum(build_harper(cover_factor * n, cover_factor * xi, alpha))
    out["cover_inclusion"] = ClauseCheck(
        _contained(spec, big, 1e-8), _nearest_gap(spec, big)
    )
    shifted = alpha + n / (2.0 * xi)
    if n % 2 == 0:
        moved = spectrum(build_harper(n, xi, shifted))
        gap = float(np.abs(np.sort(moved) - np.sort(-spec)).max())
        out["half_period_negation"] = ClauseCheck(gap <= 1e-10, gap)
    else:
        doubled = spectrum(build_harper(2 * n, 2 * xi, shifted))
        out["doubled_negation_inclusion"] = ClauseCheck(
            _contained(-spec, doubled, 1e-8), _nearest_gap(-spec, doubled)
        )
    return out


def dft_commutator(n: int) -> float:
    """Frobenius norm of the commutator of the unit-frequency matrix
    with the discrete Fourier matrix."""
    j = np.arange(n)
    f = np.exp(_TAU * 1j * np.outer(j, j) / n) / np.sqrt(n)
    m = build_harper(n, 1)
    return float(np.linalg.norm(f @ m - m @ f))


@dataclass(frozen=True)
class SweepResult:
    """Frequency sweep: per-frequency extremes plus one full spectrum.

    ``rows`` holds (xi, beta_top, beta_bottom, beta_star) tuples;
    ``base_spectrum`` is the complete descending spectrum at xi = 1,
    whose low-frequency well shape the sweep rows summarise.
    """

    rows: list[tuple[int, float, float, float]]
    base_spectrum: np.ndarray


def spectrum_sweep(
    n: int, xi_values: list[int] | np.ndarray | None = None, alpha: float = 0.0
) -> SweepResult:
    """Extreme eigenvalues over a frequency range, default 1..n-1."""
    if xi_values is None:
        xi_values = range(1, n)
    rows = []
    for xi in xi_values:
        s = spectrum(build_harper(n, int(xi), alpha))
        top, bottom = float(s[0]), float(s[-1])
        rows.append((int(xi), top, bottom, max(top, -bottom)))
    return SweepResult(rows, spectrum(build_harper(n, 1, alpha)))

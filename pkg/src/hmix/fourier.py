"""Irreducible representations of the mod-n Heisenberg group.

For each divisor m of n the group has (n/m)^2 * phi(m) inequivalent
irreducibles of dimension m, labelled (m, a, b, c) with a, b in
{0, ..., n/m - 1} and c a unit mod m (c = 0 when m = 1).  The matrix
acting on C^m places, for a group element (x, y, z),

    rho[i, (i + x) mod m] = w_n^(a*x + b*y) * w_m^(c*(y*i + z))

with w_n = exp(2*pi*i/n) and w_m = exp(2*pi*i/m).  Summing the squared
dimensions over all labels recovers n^3, and the characters form an
orthonormal family, so the table is complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalCheckError
from .group import DistributionTable, GroupElement, WalkMeasure, inv

_TAU = 2.0 * np.pi

DEFAULT_GRAM_CAP = 30


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _units(m: int) -> list[int]:
    if m == 1:
        return [0]
    return [c for c in range(1, m) if math.gcd(c, m) == 1]


def _coords(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coordinate arrays (x, y, z) for all n^3 elements in index order."""
    idx = np.arange(n**3)
    return idx % n, (idx // n) % n, idx // (n * n)


@dataclass(frozen=True)
class Irrep:
    """One irreducible representation, identified by its label."""

    n: int
    m: int
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1 or self.n % self.m:
            raise ValueError(f"dimension {self.m} must divide the modulus {self.n}")
        if self.m == 1:
            if self.c != 0:
                raise ValueError("one-dimensional labels take c = 0")
        elif math.gcd(self.c % self.m, self.m) != 1:
            raise ValueError(f"c = {self.c} is not a unit mod {self.m}")
        object.__setattr__(self, "a", self.a % self.n)
        object.__setattr__(self, "b", self.b % self.n)
        object.__setattr__(self, "c", self.c % self.m if self.m > 1 else 0)

    @property
    def dim(self) -> int:
        return self.m

    @property
    def is_trivial(self) -> bool:
        return self.m == 1 and self.a == 0 and self.b == 0

    def matrix(self, g: GroupElement) -> np.ndarray:
        """Evaluate the representing matrix at a group element."""
        n, m = self.n, self.m
        i = np.arange(m)
        phase = np.exp(_TAU * 1j * ((self.a * g.x + self.b * g.y) % n) / n)
        twist = np.exp(_TAU * 1j * ((self.c * (g.y * i + g.z)) % m) / m)
        out = np.zeros((m, m), dtype=np.complex128)
        out[i, (i + g.x) % m] = phase * twist
        return out

    def character(self, g: GroupElement) -> complex:
        """Trace of the representing matrix, in closed form.

        Vanishes unless m divides both x and y; on that set it equals
        m * w_n^(a*x + b*y) * w_m^(c*z).
        """
        n, m = self.n, self.m
        if g.x % m or g.y % m:
            return 0j
        val = np.exp(_TAU * 1j * ((self.a * g.x + self.b * g.y) % n) / n)
        return m * val * np.exp(_TAU * 1j * ((self.c * g.z) % m) / m)


def enumerate_irreps(n: int) -> list[Irrep]:
    """All irreducible labels for modulus n, dimension ascending."""
    out = []
    for m in _divisors(n):
        span = n // m
        for a in range(span):
            for b in range(span):
                for c in _units(m):
                    out.append(Irrep(n, m, a, b, c))
    return out


def character_table(n: int) -> tuple[list[Irrep], np.ndarray]:
    """Characters of every irrep evaluated over the whole group.

    Returns the label list together with a (num_irreps, n^3) complex
    array whose rows follow the enumeration order.
    """
    irreps = enumerate_irreps(n)
    x, y, z = _coords(n)
    table = np.zeros((len(irreps), n**3), dtype=np.complex128)
    for r, irr in enumerate(irreps):
        m = irr.m
        mask = ((x % m) == 0) & ((y % m) == 0)
        xs, ys, zs = x[mask], y[mask], z[mask]
        vals = np.exp(_TAU * 1j * ((irr.a * xs + irr.b * ys) % n) / n)
        vals = vals * np.exp(_TAU * 1j * ((irr.c * zs) % m) / m)
        table[r, mask] = m * vals
    return irreps, table


def character_gram(n: int, cap: int = DEFAULT_GRAM_CAP) -> np.ndarray:
    """Gram matrix of the characters under the group inner product.

    The summation touches all n^3 elements per character pair, so the
    modulus is capped (default 30); raise ``cap`` explicitly to go
    beyond it.
    """
    if n > cap:
        raise ValueError(f"modulus {n} exceeds the character gram cap {cap}")
    _, table = character_table(n)
    return (table @ table.conj().T) / n**3


def fourier_transform(q: WalkMeasure, irrep: Irrep) -> np.ndarray:
    """Fourier transform sum(q(s) * rho(s)) of a finitely supported measure."""
    out = np.zeros((irrep.m, irrep.m), dtype=np.complex128)
    for s, w in zip(q.support, q.weights):
        out += w * irrep.matrix(s)
    return out


def transform_table(p: DistributionTable, irrep: Irrep) -> np.ndarray:
    """Fourier transform of a dense distribution over the whole group."""
    n, m = irrep.n, irrep.m
    if p.n != n:
        raise ValueError("modulus mismatch between table and label")
    x, y, z = _coords(n)
    phase = np.exp(_TAU * 1j * ((irrep.a * x + irrep.b * y) % n) / n) * p.probs
    out = np.zeros((m, m), dtype=np.complex128)
    for i in range(m):
        col = (i + x) % m
        val = phase * np.exp(_TAU * 1j * ((irrep.c * (y * i + z)) % m) / m)
        out[i] = np.bincount(col, weights=val.real, minlength=m) + 1j * np.bincount(
            col, weights=val.imag, minlength=m
        )
    return out


def inverse_transform(n: int, pairs: list[tuple[Irrep, np.ndarray]]) -> np.ndarray:
    """Rebuild a function on the group from its Fourier coefficients.

    Evaluates f(g) = (1/n^3) * sum_rho dim(rho) * trace(rho(g^-1) fhat(rho))
    and returns the real part as a flat array in index order.
    """
    x, y, z = _coords(n)
    xp, yp, zp = (-x) % n, (-y) % n, (-z + x * y) % n
    acc = np.zeros(n**3, dtype=np.complex128)
    for irrep, fhat in pairs:
        m = irrep.m
        phase = np.exp(_TAU * 1j * ((irrep.a * xp + irrep.b * yp) % n) / n)
        for i in range(m):
            col = (i + xp) % m
            twist = np.exp(_TAU * 1j * ((irrep.c * (yp * i + zp)) % m) / m)
            acc += m * phase * twist * fhat[col, i]
    return acc.real / n**3


def fourier_inversion(transforms, g: GroupElement) -> float:
    """Recover the value of a function at one element from its transforms.

    ``transforms`` maps every label to its coefficient matrix (a dict or
    an iterable of pairs); the full dual is required, which is checked
    through the squared-dimension count.  The reconstructed value must
    be real: an imaginary part at or above 1e-10 raises.
    """
    pairs = list(transforms.items()) if hasattr(transforms, "items") else list(transforms)
    if not pairs:
        raise ValueError("incomplete dual: no transforms supplied")
    n = pairs[0][0].n
    labels = {(irr.m, irr.a, irr.b, irr.c) for irr, _ in pairs}
    if any(irr.n != n for irr, _ in pairs):
        raise ValueError("incomplete dual: mixed moduli")
    if len(labels) != len(pairs) or sum(m * m for m, _, _, _ in labels) != n**3:
        raise ValueError(
            "incomplete dual: need every label exactly once "
            f"(squared dimensions must total {n**3})"
        )
    gi = inv(g)
    acc = 0j
    for irr, fhat in pairs:
        acc += irr.m * np.trace(irr.matrix(gi) @ np.asarray(fhat))
    val = acc / n**3
    if abs(val.imag) >= 1e-10:
        raise NumericalCheckError(
            f"inversion at {g} has imaginary part {val.imag:.3e}"
        )
    return float(val.real)


def eigenweight_table(irrep: Irrep, vectors: np.ndarray) -> np.ndarray:
    """Diagonal matrix elements v_l^* rho(g^-1) v_l over the whole group.

    ``vectors`` holds eigenvectors of a transform as columns; the result
    has shape (n^3, num_vectors) with rows in group index order.  These
    weights turn per-label eigenvalue powers into pointwise deviations
    from uniformity without forming any k-step distribution.
    """
    n, m = irrep.n, irrep.m
    x, y, z = _coords(n)
    xp, yp, zp = (-x) % n, (-y) % n, (-z + x * y) % n
    phase = np.exp(_TAU * 1j * ((irrep.a * xp + irrep.b * yp) % n) / n)
    out = np.zeros((n**3, vectors.shape[1]), dtype=np.complex128)
    for i in range(m):
        col = (i + xp) % m
        twist = phase * np.exp(_TAU * 1j * ((irrep.c * (yp * i + zp)) % m) / m)
        out += twist[:, None] * (vectors[i].conj()[None, :] * vectors[col, :])
    return out


def walk_transform(irrep: Irrep) -> np.ndarray:
    """Transform of the four-generator step measure, in closed form.

    The (+-1, 0, 0) steps contribute quarter weights on the wrapped
    off-diagonals and the (0, +-1, 0) steps a real cosine diagonal, so
    the result is Hermitian:

        diag_j  = cos(2*pi*(b + c*j*(n/m)) / n) / 2
        off     = exp(+-2*pi*i*a/n) / 4  on columns j +- 1 mod m
    """
    n, m, a = irrep.n, irrep.m, irrep.a
    if m == 1:
        val = 0.5 * np.cos(_TAU * a / n) + 0.5 * np.cos(_TAU * irrep.b / n)
        return np.array([[val]], dtype=np.complex128)
    j = np.arange(m)
    r = (irrep.b + irrep.c * j * (n // m)) % n
    r = np.minimum(r, n - r)
    out = np.zeros((m, m), dtype=np.complex128)
    out[j, (j + 1) % m] += 0.25 * np.exp(_TAU * 1j * a / n)
    out[j, (j - 1) % m] += 0.25 * np.exp(-_TAU * 1j * a / n)
    out[j, j] += 0.5 * np.cos(_TAU * r / n)
    return out


def qhat_closed_form(irrep: Irrep) -> np.ndarray:
    """Closed-form step transform for labels of dimension three or more.

    Below dimension three the wrapped neighbour columns collide with
    each other or with the diagonal, so the displayed band shape does
    not apply and the request is rejected; ``walk_transform`` handles
    every dimension by accumulating the collisions instead.
    """
    if irrep.m < 3:
        raise ValueError(f"closed band form needs dimension >= 3, got {irrep.m}")
    return walk_transform(irrep)


def scalar_eigenvalues(n: int, include_trivial: bool = False) -> np.ndarray:
    """Transform values of the step measure at the one-dimensional labels.

    These are cos(2*pi*a/n)/2 + cos(2*pi*b/n)/2 over the (a, b) grid;
    the trivial label (0, 0) contributes 1 and is dropped by default.
    """
    half = 0.5 * np.cos(_TAU * np.arange(n) / n)
    grid = (half[:, None] + half[None, :]).ravel()
    if include_trivial:
        return grid
    return np.delete(grid, 0)


def nontrivial_walk_spectra(n: int) -> list[tuple[int, np.ndarray]]:
    """Eigenvalues of the step transform at every nontrivial label.

    Returns (dimension, eigenvalues) pairs: the one-dimensional labels
    appear as singleton arrays and the higher labels via a Hermitian
    eigendecomposition of the closed-form transform.
    """
    out = [(1, np.array([lam])) for lam in scalar_eigenvalues(n)]
    for irr in enumerate_irreps(n):
        if irr.m >= 2:
            out.append((irr.m, np.linalg.eigvalsh(walk_transform(irr))))
    return out


def ub_lemma_bound(n: int, k: int) -> tuple[float, float]:
    """Spectral pieces of the distance bound after k steps.

    Returns the pair (scalar part, matrix part): the first sums
    lambda^(2k) over nontrivial one-dimensional labels, the second sums
    dim * mu^(2k) over eigenvalues of the higher transforms.  Together
    they dominate 4 * tv(k)^2.  Only odd moduli qualify: for even n the
    coordinate parity makes the walk periodic, the antipodal label has
    |lambda| = 1, and the sum stops decaying.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"distance bound needs an odd modulus >= 3, got {n}")
    if k < 0:
        raise ValueError("step count must be nonnegative")
    term_one = float(np.sum(scalar_eigenvalues(n) ** (2 * k)))
    term_two = 0.0
    for irr in enumerate_irreps(n):
        if irr.m >= 2:
            vals = np.linalg.eigvalsh(walk_transform(irr))
            term_two += irr.m * float(np.sum(vals ** (2 * k)))
    return term_one, term_two

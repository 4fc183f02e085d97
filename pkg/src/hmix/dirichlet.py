"""Eigenvalue bounds for the band matrices via absorbing-chain paths.

Mixing a band matrix M with a third of the identity gives the lazy
kernel L = I/3 + 2M/3, which is substochastic: every state keeps
neighbour rates 1/6, holds with rate (1 + 2*d_j)/3, and leaks mass
(1 - 2*d_j)/3 to an absorbing state.  Assign each cycle state z a
canonical path gamma_z through chain edges to the absorbing state and
let |gamma_z| be its edge count.  The constant

    A = max over directed edges (u, v) of
        (2 / K(u, v)) * sum of |gamma_z| over paths using (u, v)

controls the top of the spectrum through the Dirichlet form:
beta_1(L) <= 1 - 1/A, hence beta_1(M) <= 1 - 3/(2A).

Two routing strategies are implemented.  For low frequencies the cycle
splits into phase groups, one per frequency unit; states near a group's
peak (where absorption nearly vanishes) shift sideways by roughly
(n/xi)^(2/3) sites before absorbing, which balances congestion on the
cycle edges against the weak absorption rates.  For high frequencies
every state either absorbs in place, when its diagonal entry is at most
1/4, or hops about a quarter period toward the nearest such state.

Negated variants of the same machinery bound the bottom eigenvalue:
shifting the offset by n/(2*xi) negates the diagonal profile, exactly
on even cycles and through a doubled cycle on odd ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .harper import build_harper, harper_diagonal, spectrum

NEIGHBOR_RATE = 1.0 / 6.0


class AbsorbingChain:
    """Lazy cycle walk with state-dependent absorption rates."""

    def __init__(self, diag: np.ndarray):
        diag = np.asarray(diag, dtype=np.float64)
        if diag.size < 3:
            raise ValueError("need at least three cycle states")
        if np.abs(diag).max() > 0.5 + 1e-12:
            raise ValueError("diagonal entries must lie in [-1/2, 1/2]")
        self.diag = diag
        self.stay = (1.0 + 2.0 * diag) / 3.0
        self.absorb = (1.0 - 2.0 * diag) / 3.0

    @property
    def n(self) -> int:
        return self.diag.size

    @classmethod
    def from_frequency(cls, n: int, xi: int, alpha: float = 0.0) -> "AbsorbingChain":
        return cls(harper_diagonal(n, xi, alpha))

    def kernel(self) -> np.ndarray:
        """Dense (n+1) x (n+1) stochastic kernel, absorbing state last."""
        n = self.n
        out = np.zeros((n + 1, n + 1))
        j = np.arange(n)
        out[j, (j + 1) % n] = NEIGHBOR_RATE
        out[j, (j - 1) % n] = NEIGHBOR_RATE
        out[j, j] = self.stay
        out[j, n] = self.absorb
        out[n, n] = 1.0
        return out

    def rate(self, u: int, v: int) -> float:
        """Transition rate K(u, v); the absorbing state is index n."""
        n = self.n
        if v == n:
            return float(self.absorb[u])
        step = (v - u) % n
        if step == 1 or step == n - 1:
            return NEIGHBOR_RATE
        if step == 0:
            return float(self.stay[u])
        return 0.0


def build_absorbing_chain(mat: np.ndarray) -> AbsorbingChain:
    """Absorbing lazy chain attached to a band matrix.

    Accepts the full matrix, insists on the quarter couplings of the
    cosine family, and keeps the diagonal; the lazy kernel I/3 + 2M/3
    then fixes hold rates (1 + 2*d_j)/3 and leak rates (1 - 2*d_j)/3.
    """
    mat = np.asarray(mat, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("need a square matrix")
    n = mat.shape[0]
    j = np.arange(n)
    pattern = np.zeros((n, n))
    pattern[j, (j + 1) % n] = 0.25
    pattern[j, (j - 1) % n] = 0.25
    pattern[j, j] = mat[j, j]
    if not np.array_equal(mat, pattern):
        raise ValueError("couplings must be exactly 1/4 on the two wrapped off-diagonals")
    return AbsorbingChain(mat.diagonal().copy())


@dataclass(frozen=True)
class PathSystem:
    """One canonical path per cycle state, ending at the absorbing index n."""

    n: int
    paths: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.paths) != self.n:
            raise ValueError("need exactly one path per cycle state")
        for z, path in enumerate(self.paths):
            if len(path) < 2 or path[0] != z or path[-1] != self.n:
                raise ValueError(f"path for state {z} must run from {z} to {self.n}")
            body = path[:-1]
            if any(not 0 <= s < self.n for s in body):
                raise ValueError("intermediate states must live on the cycle")
            for u, v in zip(body, body[1:]):
                if (v - u) % self.n not in (1, self.n - 1):
                    raise ValueError(f"step {u} -> {v} is not a cycle edge")


def edge_loads(system: PathSystem) -> dict[tuple[int, int], int]:
    """Total |gamma_z| carried by each directed edge, as exact integers."""
    loads: dict[tuple[int, int], int] = {}
    for path in system.paths:
        length = len(path) - 1
        for u, v in zip(path, path[1:]):
            loads[(u, v)] = loads.get((u, v), 0) + length
    return loads


def path_constant(
    chain: AbsorbingChain, system: PathSystem
) -> tuple[float, tuple[int, int]]:
    """The congestion constant A and the directed edge attaining it."""
    if chain.n != system.n:
        raise ValueError("chain and path system sizes differ")
    loads = edge_loads(system)
    best = -math.inf
    witness = (-1, -1)
    for edge in sorted(loads):
        k = chain.rate(*edge)
        if k <= 0.0:
            raise ValueError(f"edge {edge} has zero rate")
        val = 2.0 * loads[edge] / k
        if val > best:
            best, witness = val, edge
    return best, witness


def _group_starts(n: int, xi: int, alpha: float) -> np.ndarray:
    """First state of each phase group, i.e. where floor(xi*(alpha+j)/n) jumps."""
    j = np.arange(n)
    if alpha == 0:
        ids = (xi * j) // n
        before = (-xi) // n
    else:
        ids = np.floor(xi * (alpha + j) / n).astype(np.int64)
        before = math.floor(xi * (alpha - 1.0) / n)
    prev = np.empty(n, dtype=np.int64)
    prev[0] = before
    prev[1:] = ids[:-1]
    return np.flatnonzero(ids != prev)


def _shift_width(n: int, xi: int) -> int:
    """floor((n/xi)^(2/3)) computed exactly: largest x with x^3*xi^2 <= n^2."""
    x = max(0, int(round((n * n / (xi * xi)) ** (1.0 / 3.0))))
    while (x + 1) ** 3 * xi * xi <= n * n:
        x += 1
    while x > 0 and x**3 * xi * xi > n * n:
        x -= 1
    return x


def build_paths_small_xi(n: int, xi: int, alpha: float = 0.0) -> PathSystem:
    """Low-frequency routing: shift away from the peaks before absorbing.

    Each phase group keeps a peak at its left boundary where absorption
    (nearly) vanishes.  The x_eff states nearest the peak walk x_eff + 1
    sites rightward and absorb there; the x_eff - 1 states nearest the
    next peak mirror that leftward; everything in between absorbs in
    place.  x_eff is floor((n/xi)^(2/3)) clamped to a third of the group.
    """
    if xi < 1:
        raise ValueError("need a positive frequency")
    starts = _group_starts(n, xi, alpha)
    if starts.size == 0:
        raise ValueError("frequency too low to form any phase group")
    width = _shift_width(n, xi)
    paths: list[tuple[int, ...] | None] = [None] * n
    count = starts.size
    for t in range(count):
        p = int(starts[t])
        g = int((starts[(t + 1) % count] - p) % n) or n
        if g < 3:
            raise ValueError("phase groups too small for shifted routing")
        x_eff = max(1, min(width, g // 3))
        for q in range(g):
            j = (p + q) % n
            if q < x_eff:
                body = tuple((j + s) % n for s in range(x_eff + 2))
            elif q > g - x_eff:
                body = tuple((j - s) % n for s in range(x_eff + 2))
            else:
                body = (j,)
            paths[j] = body + (n,)
    return PathSystem(n, tuple(paths))  # type: ignore[arg-type]


def build_paths_large_xi(n: int, xi: int, alpha: float = 0.0) -> PathSystem:
    """High-frequency routing: absorb in place or hop a quarter period.

    States whose diagonal entry is at most 1/4 absorb directly.  The
    rest hop toward rising phase (rightward below phase 1/2, leftward
    above) by a quarter of the period, extending one site at a time
    until the landing state absorbs comfortably.
    """
    if xi < 1:
        raise ValueError("need a positive frequency")
    diag = harper_diagonal(n, xi, alpha)
    phase = np.mod(xi * (alpha + np.arange(n)) / n, 1.0)
    stride = max(1, (n // xi) // 4)
    paths = []
    for j in range(n):
        if diag[j] <= 0.25:
            paths.append((j, n))
            continue
        direction = 1 if phase[j] < 0.5 else -1
        t = stride
        while t < n and diag[(j + direction * t) % n] > 0.25:
            t += 1
        if t >= n:
            raise ValueError("no absorbing landing state on the cycle")
        body = tuple((j + direction * s) % n for s in range(t + 1))
        paths.append(body + (n,))
    return PathSystem(n, tuple(paths))


def build_paths_general(diag: np.ndarray) -> PathSystem:
    """Routing for an arbitrary diagonal profile with entries in [-1/2, 1/2].

    States with a nonpositive diagonal entry hold at least a third of
    their mass on the leak edge and absorb directly.  Every other state
    walks the shorter arc of the cycle to the nearest such state, ties
    broken rightward.
    """
    diag = np.asarray(diag, dtype=np.float64)
    if diag.ndim != 1:
        raise ValueError("need a one-dimensional profile")
    n = diag.size
    if n < 3:
        raise ValueError("need at least three cycle sites")
    if np.max(np.abs(diag)) > 0.5 + 1e-12:
        raise ValueError("profile entries must lie in [-1/2, 1/2]")
    strong = np.flatnonzero(diag <= 0.0)
    if strong.size == 0:
        raise ValueError("no state leaks at least a third of its mass")
    paths = []
    for j in range(n):
        if diag[j] <= 0.0:
            paths.append((j, n))
            continue
        fw = (strong - j) % n
        bw = (j - strong) % n
        best_fw = int(fw.min())
        best_bw = int(bw.min())
        if best_fw <= best_bw:
            body = tuple((j + s) % n for s in range(best_fw + 1))
        else:
            body = tuple((j - s) % n for s in range(best_bw + 1))
        paths.append(body + (n,))
    return PathSystem(n, tuple(paths))


@dataclass(frozen=True)
class SpectralBound:
    """A one-sided eigenvalue bound produced by a path system."""

    value: float
    constant: float
    method: str
    witness: tuple[int, int]

    @property
    def chain_bound(self) -> float:
        """Bound 1 - 1/A on the top eigenvalue of the lazy absorbing chain."""
        return 1.0 - 1.0 / self.constant


_BUILDERS = (
    ("shifted_peaks", build_paths_small_xi),
    ("threshold_hops", build_paths_large_xi),
)


def upper_bound_beta1(n: int, xi: int, alpha: float = 0.0) -> SpectralBound:
    """Best available path bound on the top eigenvalue of the band matrix."""
    xi_n = xi % n
    if xi_n == 0:
        raise ValueError("the top eigenvalue at frequency zero is exactly one")
    if alpha == 0:
        xi_n = min(xi_n, n - xi_n)
    chain = AbsorbingChain.from_frequency(n, xi_n, alpha)
    results = []
    for method, builder in _BUILDERS:
        try:
            system = builder(n, xi_n, alpha)
        except ValueError:
            continue
        constant, witness = path_constant(chain, system)
        results.append(SpectralBound(1.0 - 1.5 / constant, constant, method, witness))
    if not results:
        raise ValueError(f"no routing strategy applies at n={n}, xi={xi}")
    return min(results, key=lambda r: r.constant)


def upper_bound_from_profile(diag: np.ndarray) -> SpectralBound:
    """Path bound on the top eigenvalue for an arbitrary diagonal profile."""
    diag = np.asarray(diag, dtype=np.float64)
    chain = AbsorbingChain(diag)
    system = build_paths_general(diag)
    constant, witness = path_constant(chain, system)
    return SpectralBound(1.0 - 1.5 / constant, constant, "nearest_absorber", witness)


def doubled_profile(n: int, xi: int, shift: bool = False) -> np.ndarray:
    """Diagonal of the doubled-cycle matrix carrying the negated spectrum.

    For odd n the 2n-point profile at frequency 2*xi and offset
    n/(2*xi) is the negation of the original one, repeated twice.  The
    optional cyclic shift by (1 - n)/2 relabels the sites so that at
    frequency one the diagonal reads cos(pi*(2j + 1)/n)/2; relabelling
    leaves the spectrum untouched.
    """
    base = harper_diagonal(2 * n, 2 * xi, alpha=n / (2.0 * xi))
    if not shift:
        return base
    if n % 2 == 0:
        raise ValueError("the site relabelling is defined for odd n")
    return np.roll(base, -(((1 - n) // 2) % (2 * n)))


def lower_bound_betamin(n: int, xi: int) -> SpectralBound:
    """Path bound on the bottom eigenvalue at offset zero, odd n.

    Inside the doubled cycle, twice the frequency at offset n/(2*xi)
    negates the diagonal profile, so a top-eigenvalue bound there
    bounds the bottom eigenvalue here from below.
    """
    if n % 2 == 0:
        raise ValueError("the doubled-cycle negation needs odd n")
    xi_n = xi % n
    if xi_n == 0:
        raise ValueError("the bottom eigenvalue at frequency zero is explicit")
    xi_n = min(xi_n, n - xi_n)
    top = upper_bound_beta1(2 * n, 2 * xi_n, alpha=n / (2.0 * xi_n))
    return SpectralBound(-top.value, top.constant, "negated_" + top.method, top.witness)


def lower_bound_betamin_even(n: int, xi: int) -> SpectralBound:
    """Path bound on the bottom eigenvalue at offset zero, even n.

    On even cycles the offset shift by n/(2*xi) negates the diagonal
    profile at the same size, with no doubling needed.
    """
    if n % 2 == 1:
        raise ValueError("the same-size negation needs even n")
    xi_n = xi % n
    if xi_n == 0:
        raise ValueError("the bottom eigenvalue at frequency zero is explicit")
    xi_n = min(xi_n, n - xi_n)
    top = upper_bound_beta1(n, xi_n, alpha=n / (2.0 * xi_n))
    return SpectralBound(-top.value, top.constant, "negated_" + top.method, top.witness)


def bound_report(n: int, xi: int) -> dict:
    """Bounds next to exact eigenvalues, as one flat record."""
    spec = spectrum(build_harper(n, xi))
    upper = upper_bound_beta1(n, xi)
    if n % 2 == 1:
        lower = lower_bound_betamin(n, xi)
    else:
        lower = lower_bound_betamin_even(n, xi)
    return {
        "n": n,
        "xi": xi,
        "bound_upper": upper.value,
        "beta1_exact": float(spec[0]),
        "gap_ratio": (1.0 - upper.value) / (1.0 - float(spec[0])),
        "bound_lower": lower.value,
        "betamin_exact": float(spec[-1]),
    }

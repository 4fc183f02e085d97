"""Monte Carlo experiments for the generator walk on the integer group.

Endpoints are sampled in exact integer arithmetic from the closed
coordinate formulas: with steps (eps_i, delta_i) uniform on the four
generators and the newest step multiplied on the left,

    X_k = eps_1 + ... + eps_k,
    Y_k = delta_1 + ... + delta_k,
    Z_k = sum_i eps_i * (delta_1 + ... + delta_{i-1}).

Trials are processed in fixed-size batches, each drawing its own child
stream of the seed, so every estimate is a deterministic function of
(seed, trials, k) no matter how many workers run the batches.
Aggregation uses integer hit counts and order-independent reductions.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import ks_1samp

from . import kernels, special
from .errors import NumericalCheckError
from .group import GroupElement, identity, mul

_BATCH_BYTES = 1 << 26  # step-code bytes held in memory per batch


def _batch_trials(k: int) -> int:
    """Batch size: a fixed function of k alone, so streams line up."""
    return max(256, min(65536, _BATCH_BYTES // max(k, 1)))


@dataclass(frozen=True)
class WalkSample:
    """Endpoint of one k-step walk, unreduced or modulo a given modulus."""

    k: int
    x: int
    y: int
    z: int
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.modulus is None:
            if abs(self.x) + abs(self.y) > self.k:
                raise ValueError("coordinate sizes exceed the step count")
            if (self.x + self.y - self.k) % 2 != 0:
                raise ValueError("coordinate parity disagrees with the step count")


def _endpoint_batch(seed_seq: np.random.SeedSequence, size: int, k: int):
    """Exact endpoints of ``size`` independent k-step walks."""
    rng = np.random.default_rng(seed_seq)
    codes = rng.integers(0, 4, size=(size, k), dtype=np.uint8)
    x = np.empty(size, dtype=np.int64)
    y = np.empty(size, dtype=np.int64)
    z = np.empty(size, dtype=np.int64)
    kernels.walk_endpoints(codes, x, y, z)
    return x, y, z


def _batches(k: int, trials: int, seed):
    if trials < 1:
        raise ValueError("need at least one trial")
    batch = _batch_trials(k)
    nbatch = (trials + batch - 1) // batch
    seeds = np.random.SeedSequence(seed).spawn(nbatch)
    sizes = [batch] * (nbatch - 1) + [trials - batch * (nbatch - 1)]
    return seeds, sizes


def _map_batches(worker, k: int, trials: int, seed, jobs: int):
    """Apply ``worker(x, y, z)`` to every batch, in index order."""
    seeds, sizes = _batches(k, trials, seed)

    def one(args):
        seed_seq, size = args
        return worker(*_endpoint_batch(seed_seq, size, k))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, zip(seeds, sizes)))
    return [one(args) for args in zip(seeds, sizes)]


def endpoint_via_products(codes: np.ndarray, modulus: int | None = None):
    """Endpoint by chained group multiplication, for cross-validation.

    Works inside a finite group large enough that no coordinate can
    wrap, then maps residues back to the symmetric range, so the result
    is the exact integer endpoint.
    """
    k = len(codes)
    big = modulus if modulus is not None else 2 * (k + 2) ** 2
    gens = {
        0: GroupElement(1, 0, 0, big),
        1: GroupElement(-1, 0, 0, big),
        2: GroupElement(0, 1, 0, big),
        3: GroupElement(0, -1, 0, big),
    }
    acc = identity(big)
    for code in codes:
        acc = mul(gens[int(code)], acc)  # newest step on the left
    if modulus is not None:
        return acc.x, acc.y, acc.z

    def signed(r: int) -> int:
        return r if r <= big // 2 else r - big

    return signed(acc.x), signed(acc.y), signed(acc.z)


def sample_walk(k: int, modulus: int | None = None, seed=None, validate: bool = False) -> WalkSample:
    """Endpoint of one k-step walk from the identity.

    Coordinates are exact integers from the closed formulas; when
    ``modulus`` is given they are reduced into 0..modulus-1.  With
    ``validate`` the same step sequence is pushed through chained group
    multiplication and any mismatch raises.
    """
    if k < 0:
        raise ValueError("step count must be nonnegative")
    if modulus is not None and modulus < 1:
        raise ValueError("modulus must be positive")
    codes = np.zeros((1, 0), dtype=np.uint8)
    x = np.zeros(1, dtype=np.int64)
    y = np.zeros(1, dtype=np.int64)
    z = np.zeros(1, dtype=np.int64)
    if k > 0:
        rng = np.random.default_rng(seed)
        codes = rng.integers(0, 4, size=(1, k), dtype=np.uint8)
        kernels.walk_endpoints(codes, x, y, z)
    if validate:
        again = endpoint_via_products(codes[0])
        if again != (int(x[0]), int(y[0]), int(z[0])):
            raise NumericalCheckError(
                f"coordinate formulas disagree with group products: "
                f"{(int(x[0]), int(y[0]), int(z[0]))} vs {again}"
            )
    if modulus is not None:
        return WalkSample(
            k, int(x[0]) % modulus, int(y[0]) % modulus, int(z[0]) % modulus, modulus
        )
    return WalkSample(k, int(x[0]), int(y[0]), int(z[0]))


def return_probability(k: int, trials: int, seed=None, jobs: int = 1) -> tuple[float, float]:
    """Hit-count estimate of the identity-return probability at step k.

    Returns (estimate, binomial standard error).  Odd step counts are
    rejected: the coordinate parity forbids returning.
    """
    if k < 2 or k % 2 != 0:
        raise ValueError("returns need a positive even step count")
    counts = _map_batches(
        lambda x, y, z: int(np.count_nonzero((x == 0) & (y == 0) & (z == 0))),
        k,
        trials,
        seed,
        jobs,
    )
    estimate = sum(counts) / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    return estimate, stderr


def xy_return_probability(k: int, trials: int, seed=None, jobs: int = 1) -> tuple[float, float]:
    """Hit-count estimate of P{(X_k, Y_k) = (0, 0)}, k even."""
    if k < 2 or k % 2 != 0:
        raise ValueError("returns need a positive even step count")
    counts = _map_batches(
        lambda x, y, z: int(np.count_nonzero((x == 0) & (y == 0))),
        k,
        trials,
        seed,
        jobs,
    )
    estimate = sum(counts) / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    return estimate, stderr


@dataclass(frozen=True)
class ZnReport:
    """Distribution test of the rescaled central coordinate Z_k/k.

    The limit law is half the Brownian area integral, so the main
    statistic ``ks`` compares against that reading (``ks_half_area``);
    the unhalved reading is evaluated alongside and whichever fits
    better is named in ``preferred``.
    """

    k: int
    trials: int
    ks: float
    preferred: str
    ks_half_area: float
    ks_plain_area: float
    median: float
    second_moment: float


def zn_limit_test(k: int, trials: int, seed=None, jobs: int = 1) -> ZnReport:
    """Kolmogorov-Smirnov comparison of Z_k/k against its limit law."""
    if k < 1000:
        raise ValueError("the diffusive regime needs k >= 1000")
    pieces = _map_batches(lambda x, y, z: z, k, trials, seed, jobs)
    sample = np.concatenate(pieces) / float(k)
    ev = special.default_evaluator()
    ks_half = float(ks_1samp(sample, ev.cdf_half).statistic)
    ks_plain = float(ks_1samp(sample, ev.cdf).statistic)
    preferred = "half_area" if ks_half <= ks_plain else "plain_area"
    return ZnReport(
        k=k,
        trials=trials,
        ks=min(ks_half, ks_plain),
        preferred=preferred,
        ks_half_area=ks_half,
        ks_plain_area=ks_plain,
        median=float(np.median(sample)),
        second_moment=float(np.mean(sample**2)),
    )

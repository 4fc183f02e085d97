"""Finite Heisenberg group H(n) and exact distribution arithmetic.

Elements are triples (x, y, z) of residues mod n with product

    (x, y, z) * (x', y', z') = (x + x', y + y', z + z' + x*y') mod n,

identity (0, 0, 0) and inverse (-x, -y, -z + x*y). Distributions over the
n^3 elements are stored as flat float64 tables indexed by

    index(x, y, z) = x + n*y + n^2*z,

which fixes byte-stable serialization. Convolution uses the convention
(Q * P)(g) = sum_h Q(h) P(g h^{-1}); for i.i.d. steps the left/right
choice does not change the distribution of the walk, the formula is fixed
so tables are reproducible bit for bit.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from hmix import kernels

_MAGIC = b"HSB1"
_HEADER = struct.Struct("<4sIQ")  # magic, n, table length


@dataclass(frozen=True)
class GroupElement:
    """One element of H(n), coordinates normalized to 0..n-1."""

    x: int
    y: int
    z: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"modulus must be positive, got n={self.n}")
        object.__setattr__(self, "x", self.x % self.n)
        object.__setattr__(self, "y", self.y % self.n)
        object.__setattr__(self, "z", self.z % self.n)

    @property
    def index(self) -> int:
        return self.x + self.n * self.y + self.n * self.n * self.z


def identity(n: int) -> GroupElement:
    return GroupElement(0, 0, 0, n)


def mul(a: GroupElement, b: GroupElement) -> GroupElement:
    """Group product a*b; the twist term is x_a * y_b."""
    if a.n != b.n:
        raise ValueError(f"mixed moduli: {a.n} != {b.n}")
    n = a.n
    return GroupElement(a.x + b.x, a.y + b.y, a.z + b.z + a.x * b.y, n)


def inv(a: GroupElement) -> GroupElement:
    return GroupElement(-a.x, -a.y, -a.z + a.x * a.y, a.n)


def element_from_index(n: int, i: int) -> GroupElement:
    if not 0 <= i < n**3:
        raise ValueError(f"index {i} out of range for n={n}")
    return GroupElement(i % n, (i // n) % n, i // (n * n), n)


@dataclass(frozen=True)
class WalkMeasure:
    """Finitely supported probability measure used as the convolution step."""

    n: int
    support: tuple[GroupElement, ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.support) != len(self.weights):
            raise ValueError("support/weights length mismatch")
        if len(set(g.index for g in self.support)) != len(self.support):
            raise ValueError("duplicate support elements")
        if any(g.n != self.n for g in self.support):
            raise ValueError("support element modulus mismatch")
        if any(w < 0 for w in self.weights):
            raise ValueError("negative weight")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {sum(self.weights)!r}, not 1")


def canonical_measure(n: int) -> WalkMeasure:
    """Uniform weight 1/4 on (+-1, 0, 0) and (0, +-1, 0).

    Support is ordered by element index so downstream sums have a fixed
    accumulation order.
    """
    if n < 3:
        raise ValueError(f"canonical measure needs n >= 3, got {n}")
    gens = [
        GroupElement(1, 0, 0, n),
        GroupElement(-1, 0, 0, n),
        GroupElement(0, 1, 0, n),
        GroupElement(0, -1, 0, n),
    ]
    gens.sort(key=lambda g: g.index)
    return WalkMeasure(n, tuple(gens), (0.25, 0.25, 0.25, 0.25))


@dataclass
class DistributionTable:
    """Exact probability table over all n^3 group elements."""

    n: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        self.probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        if self.probs.shape != (self.n**3,):
            raise ValueError(
                f"table for n={self.n} must have shape ({self.n**3},), "
                f"got {self.probs.shape}"
            )

    @classmethod
    def point_mass(cls, n: int, g: GroupElement | None = None) -> "DistributionTable":
        probs = np.zeros(n**3)
        probs[(g or identity(n)).index] = 1.0
        return cls(n, probs)

    @classmethod
    def uniform(cls, n: int) -> "DistributionTable":
        return cls(n, np.full(n**3, 1.0 / n**3))

    @classmethod
    def from_measure(cls, q: WalkMeasure) -> "DistributionTable":
        probs = np.zeros(q.n**3)
        for g, w in zip(q.support, q.weights):
            probs[g.index] += w
        return cls(q.n, probs)

    def prob(self, g: GroupElement) -> float:
        return float(self.probs[g.index])

    def mass(self) -> float:
        return float(self.probs.sum())

    def x_marginal(self) -> np.ndarray:
        return self.probs.reshape(self.n, self.n, self.n).sum(axis=(0, 1))

    def y_marginal(self) -> np.ndarray:
        return self.probs.reshape(self.n, self.n, self.n).sum(axis=(0, 2))

    def z_marginal(self) -> np.ndarray:
        # reshape axes are (z, y, x) for the flat index x + n*y + n^2*z
        return self.probs.reshape(self.n, self.n, self.n).sum(axis=(1, 2))

    # -- serialization ----------------------------------------------------

    def to_csv(self, path: str) -> None:
        """Rows x,y,z,prob in table index order (x fastest)."""
        n = self.n
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "z", "prob"])
            for i, p in enumerate(self.probs):
                writer.writerow([i % n, (i // n) % n, i // (n * n), repr(float(p))])

    @classmethod
    def from_csv(cls, path: str) -> "DistributionTable":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["x", "y", "z", "prob"]:
                raise ValueError(f"unexpected CSV header: {header}")
            rows = list(reader)
        n = round(len(rows) ** (1 / 3))
        if n**3 != len(rows):
            raise ValueError(f"row count {len(rows)} is not a cube")
        probs = np.zeros(n**3)
        for x, y, z, p in rows:
            probs[int(x) + n * int(y) + n * n * int(z)] = float(p)
        return cls(n, probs)

    def to_binary(self, path: str) -> None:
        """16-byte header (magic HSB1, u32 n, u64 length) + little-endian float64."""
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, self.n, self.probs.size))
            fh.write(self.probs.astype("<f8").tobytes())

    @classmethod
    def from_binary(cls, path: str) -> "DistributionTable":
        with open(path, "rb") as fh:
            magic, n, length = _HEADER.unpack(fh.read(_HEADER.size))
            if magic != _MAGIC:
                raise ValueError(f"bad magic {magic!r}")
            if length != n**3:
                raise ValueError(f"length {length} inconsistent with n={n}")
            data = np.frombuffer(fh.read(8 * length), dtype="<f8")
            if data.size != length:
                raise ValueError("truncated table data")
        return cls(n, data.copy())


# -- convolution ----------------------------------------------------------

_PERM_CACHE: dict[tuple[int, tuple[int, ...]], np.ndarray] = {}


def _gather_indices(q: WalkMeasure) -> np.ndarray:
    """Row s holds index(g * support[s]^{-1}) for every flat index of g."""
    key = (q.n, tuple(g.index for g in q.support))
    cached = _PERM_CACHE.get(key)
    if cached is not None:
        return cached
    n = q.n
    i = np.arange(n**3, dtype=np.int64)
    gx, gy, gz = i % n, (i // n) % n, i // (n * n)
    rows = []
    for h in q.support:
        hi = inv(h)
        nx = (gx + hi.x) % n
        ny = (gy + hi.y) % n
        nz = (gz + hi.z + gx * hi.y) % n
        rows.append(nx + n * ny + n * n * nz)
    idx = np.ascontiguousarray(np.stack(rows))
    _PERM_CACHE[key] = idx
    return idx


def convolve(p: DistributionTable, q: WalkMeasure) -> DistributionTable:
    """(Q * P)(g) = sum_h Q(h) P(g h^{-1}), summed in support order."""
    if p.n != q.n:
        raise ValueError(f"mixed moduli: table n={p.n}, measure n={q.n}")
    idx = _gather_indices(q)
    out = np.empty_like(p.probs)
    kernels.gather_mix(p.probs, idx, np.asarray(q.weights), out)
    return DistributionTable(p.n, out)


def convolution_power(q: WalkMeasure, k: int) -> DistributionTable:
    """Distribution of the k-step walk started at the identity."""
    if k < 0:
        raise ValueError(f"negative power k={k}")
    p = DistributionTable.point_mass(q.n)
    for _ in range(k):
        p = convolve(p, q)
    return p


def iterate_convolutions(q: WalkMeasure, k_max: int) -> Iterable[tuple[int, DistributionTable]]:
    """Yield (k, Q^{*k}) for k = 0..k_max, reusing each step's table."""
    p = DistributionTable.point_mass(q.n)
    yield 0, p
    for k in range(1, k_max + 1):
        p = convolve(p, q)
        yield k, p


def tv_distance(p: DistributionTable, other: DistributionTable | None = None) -> float:
    """Total variation distance, against the uniform table by default."""
    if other is None:
        return float(0.5 * np.abs(p.probs - 1.0 / p.n**3).sum())
    if other.n != p.n:
        raise ValueError("mixed moduli")
    return float(0.5 * np.abs(p.probs - other.probs).sum())

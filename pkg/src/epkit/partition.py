"""Ewens-Pitman partitions: simulation, sufficient statistics, and I/O.

The likelihood depends on a partition of [n] only through the block-size
histogram S_{n,j} (number of blocks of size j), so everything here is
expressed in terms of :class:`PartitionStats`.
"""
import json
import math
from collections import Counter
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import DomainError
from .rng import as_generator

MAX_ENUMERATE_N = 10


@dataclass(frozen=True)
class PartitionStats:
    """Sufficient statistic (n, K_n, {j: S_{n,j}}) of a partition of [n]."""

    n: int
    k: int
    s: dict = field(hash=False)

    def __post_init__(self):
        s = {int(j): int(c) for j, c in self.s.items()}
        if any(c < 1 for c in s.values()):
            raise DomainError("block-size counts must be positive")
        if any(not 1 <= j <= self.n for j in s):
            raise DomainError("block sizes must lie in 1..n")
        if sum(s.values()) != self.k:
            raise DomainError("sum of counts must equal k")
        if sum(j * c for j, c in s.items()) != self.n:
            raise DomainError("sum of j * count must equal n")
        if not 1 <= self.k <= self.n:
            raise DomainError("need 1 <= k <= n")
        object.__setattr__(self, "s", dict(sorted(s.items())))

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self):
        """Hashable shape of the partition, as sorted (size, count) pairs."""
        return tuple(self.s.items())

    @property
    def sizes(self):
        return np.fromiter(self.s.keys(), dtype=np.int64, count=len(self.s))

    @property
    def counts(self):
        return np.fromiter(self.s.values(), dtype=np.int64, count=len(self.s))

    def to_dict(self):
        return {"n": self.n, "k": self.k, "s": {str(j): c for j, c in self.s.items()}}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(int(d["n"]), int(d["k"]), {int(j): int(c) for j, c in d["s"].items()})
        except (KeyError, TypeError, AttributeError) as exc:
            raise DomainError(f"malformed stats record: {exc}") from None

    @classmethod
    def from_block_sizes(cls, sizes):
        sizes = np.asarray(sizes, dtype=np.int64)
        js, cs = np.unique(sizes, return_counts=True)
        return cls(int(sizes.sum()), int(len(sizes)), dict(zip(js.tolist(), cs.tolist())))


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Block-size frequencies P_n(j) = S_{n,j} / K_n."""

    weights: dict

    def __call__(self, j):
        return self.weights.get(j, 0.0)

    def expect(self, g):
        """Integral of g against the measure, sum_j P_n(j) g(j)."""
        return math.fsum(w * g(j) for j, w in self.weights.items())


def empirical_measure(stats):
    return EmpiricalMeasure({j: c / stats.k for j, c in stats.s.items()})


# --------------------------------------------------------------------------
# sequential urn scheme
# --------------------------------------------------------------------------

@numba.njit(cache=True)
def _urn_advance(labels, block_sizes, k, m_from, m_to, alpha, theta, rng):
    # Ball m+1 opens a new block with prob (theta + k alpha)/(theta + m); otherwise
    # it joins block b with prob proportional to (size_b - alpha). The join step
    # picks an earlier ball uniformly (prob proportional to size_b) and accepts
    # with prob (size_b - alpha)/size_b >= 1 - alpha.
    for m in range(m_from, m_to):
        if m == 0:
            labels[0] = 0
            block_sizes[0] = 1
            k = 1
            continue
        if rng.random() * (theta + m) < theta + k * alpha:
            labels[m] = k
            block_sizes[k] = 1
            k += 1
        else:
            while True:
                b = labels[int(rng.random() * m)]
                if rng.random() * block_sizes[b] < block_sizes[b] - alpha:
                    break
            labels[m] = b
            block_sizes[b] += 1
    return k


@numba.njit(cache=True)
def _urn_batch(alpha, theta, n, reps, rng):
    out = np.zeros((reps, n), dtype=np.int64)
    labels = np.empty(n, dtype=np.int64)
    block_sizes = np.zeros(n, dtype=np.int64)
    for r in range(reps):
        block_sizes[:] = 0
        k = _urn_advance(labels, block_sizes, 0, 0, n, alpha, theta, rng)
        srt = np.sort(block_sizes[:k])[::-1]
        out[r, :k] = srt
    return out


class UrnProcess:
    """A growing Ewens-Pitman partition that can be advanced ball by ball.

    Only per-ball block labels and per-block sizes are kept; checkpoints
    are summarized into :class:`PartitionStats`.
    """

    def __init__(self, params, capacity, rng=None):
        self.params = params
        self.capacity = int(capacity)
        if self.capacity < 1:
            raise DomainError("capacity must be at least 1")
        self.rng = as_generator(rng)
        self._labels = np.empty(self.capacity, dtype=np.int64)
        self._block_sizes = np.zeros(self.capacity, dtype=np.int64)
        self.m = 0
        self.k = 0

    def advance_to(self, n):
        if not self.m <= n <= self.capacity:
            raise DomainError(f"cannot advance from {self.m} to {n} (capacity {self.capacity})")
        self.k = int(_urn_advance(
            self._labels, self._block_sizes, self.k, self.m, n,
            self.params.alpha, self.params.theta, self.rng,
        ))
        self.m = n
        return self

    def block_sizes(self):
        return self._block_sizes[:self.k].copy()

    def stats(self):
        if self.m == 0:
            raise DomainError("no balls have been placed yet")
        return PartitionStats.from_block_sizes(self._block_sizes[:self.k])


def simulate(params, n, rng=None):
    """Run the urn scheme for n balls and return the block-size statistic."""
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    return UrnProcess(params, n, rng).advance_to(int(n)).stats()


def simulate_trajectory(params, checkpoints, rng=None):
    """Statistics of one growing partition observed at increasing sizes."""
    cps = [int(c) for c in checkpoints]
    if not cps or cps[0] < 1 or any(b <= a for a, b in zip(cps, cps[1:])):
        raise DomainError("checkpoints must be strictly increasing positive integers")
    urn = UrnProcess(params, cps[-1], rng)
    return [urn.advance_to(c).stats() for c in cps]


def sample_block_sizes(params, n, reps, rng=None):
    """(reps, n) array; row r holds the block sizes of replicate r sorted
    in decreasing order and padded with zeros. Meant for small n."""
    return _urn_batch(params.alpha, params.theta, int(n), int(reps), as_generator(rng))


# --------------------------------------------------------------------------
# construction from data
# --------------------------------------------------------------------------

def stats_from_blocks(block_sizes):
    sizes = list(block_sizes)
    if not sizes:
        raise DomainError("need at least one block")
    if any(int(b) != b or b < 1 for b in sizes):
        raise DomainError("block sizes must be positive integers")
    return PartitionStats.from_block_sizes(sizes)


def stats_from_degrees(degrees, mu=2.0):
    """Network reading: n = total degree, K_n = vertices, S_{n,j} = vertices of degree j."""
    degrees = list(degrees)
    if not degrees:
        raise DomainError("need at least one vertex")
    if any(d == 0 for d in degrees):
        raise DomainError("isolated vertices (degree 0) must be dropped before ingestion")
    if any(int(d) != d or d < 0 for d in degrees):
        raise DomainError("degrees must be non-negative integers")
    if not mu >= 1:
        raise DomainError("mu must be at least 1")
    return PartitionStats.from_block_sizes(degrees), float(mu)


def naive_alpha(stats):
    """log K_n / log n; consistent only at rate log n."""
    if stats.n < 2:
        raise DomainError("naive estimator needs n >= 2")
    return math.log(stats.k) / math.log(stats.n)


# --------------------------------------------------------------------------
# brute-force enumeration
# --------------------------------------------------------------------------

def set_partitions(n):
    """Yield every set partition of {0..n-1} as a restricted growth string."""
    if n < 1:
        return
    a = [0] * n
    b = [1] * n  # b[i] = 1 + max(a[:i])

    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for t in range(i + 1, n):
            a[t] = 0
            b[t] = max(b[t - 1], a[t - 1] + 1)


def enumerate_partitions(n):
    """All set partitions of [n], aggregated by shape: list of (stats, multiplicity)."""
    if int(n) != n or not 1 <= n <= MAX_ENUMERATE_N:
        raise DomainError(f"enumeration is limited to 1 <= n <= {MAX_ENUMERATE_N}")
    shapes = Counter()
    for rgs in set_partitions(int(n)):
        shapes[tuple(sorted(Counter(rgs).values()))] += 1
    return [(PartitionStats.from_block_sizes(sizes), mult) for sizes, mult in sorted(shapes.items())]


# --------------------------------------------------------------------------
# file formats
# --------------------------------------------------------------------------

def stats_to_json(stats):
    return json.dumps(stats.to_dict(), separators=(",", ":"))


def stats_from_json(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON: {exc}") from None
    return PartitionStats.from_dict(d)


def _data_lines(path):
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def read_block_sizes(path):
    """One positive integer per line; '#' starts a comment."""
    sizes = []
    for lineno, line in _data_lines(path):
        try:
            v = int(line)
        except ValueError:
            raise DomainError(f"{path}:{lineno}: expected an integer, got {line!r}") from None
        if v < 1:
            raise DomainError(f"{path}:{lineno}: block sizes must be positive")
        sizes.append(v)
    return sizes


def read_edge_list(path, multi=False):
    """Vertex degrees from a whitespace-separated edge list.

    By default the graph is taken as undirected and simple: repeated edges
    and self-loops are ignored. With ``multi=True`` every line counts and a
    self-loop adds 2 to its vertex.
    """
    deg = Counter()
    seen = set()
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) < 2:
            raise DomainError(f"{path}:{lineno}: expected two vertex ids")
        u, v = parts[0], parts[1]
        if not multi:
            if u == v:
                continue
            e = (u, v) if u <= v else (v, u)
            if e in seen:
                continue
            seen.add(e)
        deg[u] += 1
        deg[v] += 1
    return [deg[v] for v in sorted(deg)]

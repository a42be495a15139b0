"""Deterministic, splittable random streams.

Every random quantity in the package is drawn from a stream identified by a
:class:`StreamKey`, i.e. a ``(seed, stream_id)`` pair of unsigned 64-bit
integers.  The pair is used verbatim as the 128-bit key of a Philox4x64
counter-based generator, so distinct pairs give distinct key schedules and
every stream starts at counter zero.  Results therefore depend only on the
seed and on *which* work item a stream belongs to, never on the order in
which worker threads happen to pick work up.

Stream ids are derived from a purpose tag plus integer indices (feature,
fold, ...) with :func:`stream_id`, which hashes the ASCII string
``"<purpose>:<i>:<j>..."`` with BLAKE2b (8-byte digest, little endian).

Subset sampling
---------------
:func:`uniform_subset` draws one subset with Floyd's algorithm.
:func:`uniform_subsets` draws many subsets at once with a partial
Fisher-Yates shuffle vectorised over rows: for ``i = 0, ..., m-1`` every row
swaps position ``i`` with a uniform position in ``[i, n)``.  Both produce
each of the ``C(n, m)`` subsets with equal probability and both are exactly
reproducible from the stream.
"""

import hashlib
from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_int

_UINT64_MAX = 2**64 - 1

PURPOSES = frozenset(
    {"design", "permutation", "ties", "folds", "synthetic", "bootstrap", "null-data", "simulation"}
)


@dataclass(frozen=True)
class StreamKey:
    """Identifies one independent random stream."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if not 0 <= int(value) <= _UINT64_MAX:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {value}")
            object.__setattr__(self, name, int(value))

    def child(self, purpose, *indices):
        """Key for a sub-task, keeping the seed and deriving a new stream id."""
        return StreamKey(self.seed, stream_id(purpose, self.stream_id, *indices))


def stream_id(purpose, *indices):
    """Hash a purpose tag and integer indices into a 64-bit stream id.

    >>> stream_id("permutation", 3) == stream_id("permutation", 3)
    True
    >>> stream_id("permutation", 3) != stream_id("permutation", 4)
    True
    """
    parts = [str(purpose)] + [str(int(i)) for i in indices]
    digest = hashlib.blake2b(":".join(parts).encode("ascii"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def make_stream(key):
    """Return a fresh :class:`numpy.random.Generator` for ``key``.

    The generator wraps :class:`numpy.random.Philox`, which supports unbiased
    bounded integers (``integers``), uniform doubles on ``[0, 1)``
    (``random``) and O(1) jump-ahead (see :func:`advance`).
    """
    if not isinstance(key, StreamKey):
        raise TypeError(f"expected a StreamKey, got {type(key).__name__}")
    bit_gen = np.random.Philox(key=np.array([key.seed, key.stream_id], dtype=np.uint64))
    return np.random.Generator(bit_gen)


def advance(stream, delta):
    """Jump ``stream`` ahead by ``delta`` Philox blocks in O(1) and return it."""
    stream.bit_generator.advance(int(delta))
    return stream


def uniform_subset(stream, n, m):
    """Draw a uniformly random ``m``-subset of ``range(n)`` (Floyd's algorithm).

    Returns
    -------
    ndarray of int64, shape (m,)
        Strictly increasing 0-based indices.
    """
    n = check_positive_int(n, "n")
    m = check_positive_int(m, "m")
    if m > n:
        raise ValueError(f"subset size m={m} exceeds population size n={n}")
    chosen = set()
    for j in range(n - m, n):
        t = int(stream.integers(0, j + 1))
        chosen.add(j if t in chosen else t)
    return np.array(sorted(chosen), dtype=np.int64)


def uniform_subsets(stream, n, m, count):
    """Draw ``count`` independent uniform ``m``-subsets of ``range(n)``.

    Returns
    -------
    ndarray of int64, shape (count, m)
        Each row strictly increasing.
    """
    n = check_positive_int(n, "n")
    m = check_positive_int(m, "m")
    count = check_positive_int(count, "count")
    if m > n:
        raise ValueError(f"subset size m={m} exceeds population size n={n}")
    if m == n:
        return np.tile(np.arange(n, dtype=np.int64), (count, 1))
    idx = np.tile(np.arange(n, dtype=np.int64), (count, 1))
    rows = np.arange(count)
    for i in range(m):
        j = stream.integers(i, n, size=count)
        tmp = idx[rows, i].copy()
        idx[rows, i] = idx[rows, j]
        idx[rows, j] = tmp
    return np.sort(idx[:, :m], axis=1)

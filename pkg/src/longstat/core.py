"""Shared primitives: block layout, seeded normal streams, normal quantiles.

Every statistic in this package slices a series of length ``n_obs`` into
``n_blocks`` adjacent, non-overlapping windows of an even length
``n_window``, discarding any trailing remainder.  :class:`BlockScheme`
pins that layout down once, so all downstream computations agree on
window boundaries, rescaled-time midpoints and the truncation count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import InvalidArgumentError

__all__ = [
    "BlockScheme",
    "GaussianSource",
    "as_series",
    "make_block_scheme",
    "normal_quantile",
]


def as_series(values) -> np.ndarray:
    """Coerce ``values`` to a one-dimensional float64 array and validate it.

    Parameters
    ----------
    values : array_like
        Ordered real observations, at least two of them.

    Returns
    -------
    numpy.ndarray
        A float64 copy (or view) of the input.

    Raises
    ------
    InvalidArgumentError
        If the input is not one-dimensional, is shorter than 2, or
        contains NaN or infinite entries.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise InvalidArgumentError(f"series must be one-dimensional, got shape {x.shape}")
    if x.size < 2:
        raise InvalidArgumentError("series must contain at least 2 observations")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("series contains NaN or infinite values")
    return x


@dataclass(frozen=True, eq=False)
class BlockScheme:
    """Partition of ``1..n_used`` into ``n_blocks`` windows of length ``n_window``.

    Attributes
    ----------
    n_used : int
        Number of observations covered by the windows.  Always equals
        ``n_blocks * n_window``; trailing observations beyond that are
        not part of the scheme.
    n_window : int
        Window length.  Even and at least 4.
    n_blocks : int
        Number of windows.
    n_discarded : int
        Trailing observations dropped because they do not fill a window.
    midpoints : numpy.ndarray
        Rescaled-time midpoint of each window, ``(j + 0.5) * n_window / n_used``
        for ``j = 0..n_blocks-1``.  All lie strictly inside (0, 1).
    block_starts : numpy.ndarray
        Zero-based start index of each window; window ``j`` covers
        ``values[block_starts[j] : block_starts[j] + n_window]``.
    """

    n_used: int
    n_window: int
    n_blocks: int
    n_discarded: int
    midpoints: np.ndarray
    block_starts: np.ndarray


def make_block_scheme(n_obs: int, n_window: int) -> BlockScheme:
    """Build the window layout for a series of length ``n_obs``.

    The trailing ``n_obs mod n_window`` observations do not fill a
    window and are recorded as discarded.

    Raises
    ------
    InvalidArgumentError
        If ``n_window`` is odd, smaller than 4, or exceeds ``n_obs``.
    """
    n_obs = int(n_obs)
    n_window = int(n_window)
    if n_window % 2 != 0:
        raise InvalidArgumentError(f"window length must be even, got {n_window}")
    if n_window < 4:
        raise InvalidArgumentError(f"window length must be at least 4, got {n_window}")
    if n_window > n_obs:
        raise InvalidArgumentError(
            f"window length {n_window} exceeds the series length {n_obs}"
        )
    n_blocks = n_obs // n_window
    n_used = n_blocks * n_window
    midpoints = (np.arange(n_blocks) + 0.5) * n_window / n_used
    starts = np.arange(n_blocks) * n_window
    return BlockScheme(
        n_used=n_used,
        n_window=n_window,
        n_blocks=n_blocks,
        n_discarded=n_obs - n_used,
        midpoints=midpoints,
        block_starts=starts,
    )


class GaussianSource:
    """Deterministic, splittable stream of standard normal draws.

    Streams are generated by the counter-based Philox engine.  Two
    sources constructed with the same ``seed`` and key produce
    bit-identical draws, and :meth:`child` derives statistically
    independent sub-streams from an integer key path, so parallel work
    can be assigned reproducible randomness regardless of scheduling.

    Parameters
    ----------
    seed : int
        64-bit master seed.
    key : tuple of int, optional
        Key path of this source below the master seed.  Normally left
        empty; children extend it.
    """

    __slots__ = ("seed", "key", "_gen")

    def __init__(self, seed: int, key: tuple = ()):
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.Philox(ss))

    def child(self, *key: int) -> "GaussianSource":
        """Return a fresh source whose key path extends this one."""
        return GaussianSource(self.seed, self.key + tuple(int(k) for k in key))

    def standard_normal(self, size=None) -> np.ndarray:
        """Draw standard normal variates, advancing this source's state."""
        return self._gen.standard_normal(size)

    def integers(self, low: int, high: int, size=None) -> np.ndarray:
        """Draw uniform integers from [low, high), advancing the state.

        Resampling procedures need index draws; routing them through the
        same source keeps every random decision on one keyed stream.
        """
        return self._gen.integers(low, high, size=size)

    def __repr__(self):
        return f"GaussianSource(seed={self.seed}, key={self.key})"


def normal_quantile(q: float) -> float:
    """Quantile function of the standard normal distribution.

    Accurate to better than 1e-10 in the sense that the normal CDF of
    the returned value differs from ``q`` by at most 1e-10.

    Raises
    ------
    InvalidArgumentError
        If ``q`` is not strictly between 0 and 1.
    """
    q = float(q)
    if not 0.0 < q < 1.0:
        raise InvalidArgumentError(f"quantile level must lie strictly in (0, 1), got {q}")
    return float(special.ndtri(q))

"""Seeded, splittable random streams."""

from typing import Optional, Sequence, Union

import numpy as np

_UINT64_MASK: int = (1 << 64) - 1
_MANTISSA: int = 1 << 53

Size = Optional[Union[int, tuple[int, ...]]]


class RngStream:
    """
    Deterministic random stream identified by a master seed and a stream path.

    The underlying bit generator is the counter-based Philox generator seeded
    through a numpy SeedSequence whose spawn key is the stream path, so the
    substream (seed, path + (i,)) is independent of its siblings and of its
    parent. Identical (seed, path) pairs always produce identical draws.

    Args:
        master_seed (int): Master seed, reduced modulo 2**64.
        stream_path (Sequence[int], optional): Path of substream indices. Defaults to ().
    """

    def __init__(self, master_seed: int, stream_path: Sequence[int] = ()) -> None:
        self.master_seed: int = int(master_seed) & _UINT64_MASK
        self.stream_path: tuple[int, ...] = tuple(
            int(index) & _UINT64_MASK for index in stream_path
        )
        seed_sequence = np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=self.stream_path
        )
        self.generator: np.random.Generator = np.random.Generator(
            np.random.Philox(seed_sequence)
        )

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_path={self.stream_path})"

    @property
    def stream_index(self) -> int:
        """Last index of the stream path, 0 for the root stream."""
        return self.stream_path[-1] if self.stream_path else 0

    def substream(self, index: int) -> "RngStream":
        return RngStream(self.master_seed, self.stream_path + (int(index),))

    def uniform(self, size: Size = None) -> Union[float, np.ndarray]:
        """
        Uniform draws from the open interval (0, 1).

        Args:
            size (Size, optional): Output shape. Defaults to a scalar.

        Returns:
            Union[float, np.ndarray]: Draws strictly inside (0, 1).
        """
        draws = (self.generator.integers(0, _MANTISSA, size=size) + 0.5) / _MANTISSA
        return float(draws) if size is None else draws

    def exponential(self, size: Size = None) -> Union[float, np.ndarray]:
        """Unit exponential draws, strictly positive."""
        return -np.log(self.uniform(size))

    def poisson(self, lam: Union[float, np.ndarray], size: Size = None) -> np.ndarray:
        return self.generator.poisson(lam, size=size)

    def gamma(self, shape: Union[float, np.ndarray], size: Size = None) -> np.ndarray:
        return self.generator.standard_gamma(shape, size=size)

    def logseries(self, p: Union[float, np.ndarray], size: Size = None) -> np.ndarray:
        return self.generator.logseries(p, size=size)

    def integers(self, low: int, high: int, size: Size = None) -> np.ndarray:
        return self.generator.integers(low, high, size=size)

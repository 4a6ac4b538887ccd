"""Binary event time series and their timestamp sets.

An event series of length ``N_T`` is stored as the sorted set of 1-indexed
ticks at which an event starts. Duplicate timestamps collapse silently, since a
binary series cannot express multiplicity.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidSeriesError, SeriesRangeError, TooFewEventsError

PathLike = Union[str, "os.PathLike[str]"]

_HEADER = re.compile(r"^#\s*length\s*=\s*(\d+)\s*$")


@dataclass(frozen=True, eq=False)
class EventSeries:
    """Immutable set of event timestamps on ``[1, length]``.

    Use :meth:`from_binary` or :meth:`from_timestamps` rather than the
    constructor; they validate and normalise the input.
    """

    timestamps: np.ndarray
    length: int

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=np.int64)
        ts.setflags(write=False)
        object.__setattr__(self, "timestamps", ts)

    @classmethod
    def from_binary(cls, bits: Sequence[int]) -> "EventSeries":
        """Build a series from a dense 0/1 sequence (position 1 is ``bits[0]``)."""
        arr = np.asarray(bits)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidSeriesError("binary series must be a non-empty 1-d sequence")
        if not np.isin(arr, (0, 1)).all():
            raise InvalidSeriesError("binary series may only contain 0 and 1")
        return cls(np.flatnonzero(arr) + 1, int(arr.size))

    @classmethod
    def from_timestamps(cls, stamps: Iterable[int], length: int) -> "EventSeries":
        """Build a series from integer timestamps; duplicates are dropped."""
        arr = np.asarray(list(stamps), dtype=float)
        if arr.size and not np.all(arr == np.round(arr)):
            raise InvalidSeriesError("timestamps must be integers")
        arr = np.unique(arr.astype(np.int64))
        length = int(length)
        if length < 1:
            raise SeriesRangeError(f"series length must be >= 1, got {length}")
        if arr.size and arr[0] < 1:
            raise SeriesRangeError(f"timestamp {arr[0]} < 1")
        if arr.size and arr[-1] > length:
            raise SeriesRangeError(f"timestamp {arr[-1]} exceeds series length {length}")
        return cls(arr, length)

    def __len__(self) -> int:
        return int(self.timestamps.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventSeries):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.timestamps, other.timestamps)

    def __hash__(self) -> int:
        return hash((self.length, self.timestamps.tobytes()))

    def to_binary(self) -> np.ndarray:
        bits = np.zeros(self.length, dtype=np.int8)
        bits[self.timestamps - 1] = 1
        return bits

    def shifted(self, offset: int) -> "EventSeries":
        """Translate every timestamp by ``offset`` and extend the length to match."""
        return EventSeries.from_timestamps(self.timestamps + offset, self.length + offset)

    def first_order_intervals(self) -> np.ndarray:
        return np.diff(self.timestamps)

    def mean_interval(self) -> float:
        """Crude single-period estimate ``N_T / |S|``.

        Only meaningful for one noiseless stationary period; not used by detection.
        """
        if len(self) == 0:
            return float("nan")
        return self.length / len(self)


def read_series(path: PathLike) -> EventSeries:
    """Read a series from a text file.

    Two layouts are accepted. With a ``# length=N`` header every remaining
    token is a timestamp. Without it the file must be dense 0/1 values, one or
    more per line. Blank lines and trailing whitespace are ignored.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()

    length = None
    tokens: list[str] = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER.match(line)
            if m:
                length = int(m.group(1))
            continue
        tokens.extend(re.split(r"[\s,]+", line))

    try:
        values = [int(t) for t in tokens if t]
    except ValueError as exc:
        raise InvalidSeriesError(f"{path}: non-integer token ({exc})") from None

    if length is not None:
        return EventSeries.from_timestamps(values, length)
    if not values:
        raise TooFewEventsError(f"too few events: {path} contains no events")
    if all(v in (0, 1) for v in values):
        return EventSeries.from_binary(values)
    raise InvalidSeriesError(f"{path}: timestamps need a '# length=N' header")


def write_series(series: EventSeries, path, fmt: str = "timestamps") -> None:
    """Write ``series`` to a path or text stream.

    ``fmt="timestamps"`` writes a ``# length=N`` header and one timestamp per
    line; ``fmt="binary"`` writes the dense 0/1 sequence, one value per line.
    """
    if fmt == "timestamps":
        lines = [f"# length={series.length}"] + [str(int(t)) for t in series.timestamps]
    elif fmt == "binary":
        lines = [str(int(b)) for b in series.to_binary()]
    else:
        raise ValueError(f"unknown format {fmt!r}")
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)

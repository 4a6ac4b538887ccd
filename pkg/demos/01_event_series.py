"""
Event series: building, shifting and saving
===========================================

A series is a set of integer timestamps on ``1..N_T``. It can be built from a
0/1 vector or from the timestamps directly, and written to disk in either
layout.
"""

import tempfile
from pathlib import Path

import numpy as np

from gmpda import EventSeries, read_series, write_series

bits = [0, 1, 0, 0, 1, 1, 0, 1]
s = EventSeries.from_binary(bits)
print("timestamps:", s.timestamps, "length:", s.length)
print("first-order gaps:", s.first_order_intervals())

# the same series from timestamps, then moved three ticks later
t = EventSeries.from_timestamps([2, 5, 6, 8], 8)
print("equal:", s == t)
print("shifted:", t.shifted(3).timestamps)

# round trip through both file layouts
with tempfile.TemporaryDirectory() as tmp:
    for fmt in ("timestamps", "binary"):
        path = Path(tmp) / f"series_{fmt}.txt"
        write_series(s, path, fmt=fmt)
        print(fmt, "file:", path.read_text().splitlines()[:3], "->",
              read_series(path) == s)

print("binary vector:", np.asarray(s.to_binary()))

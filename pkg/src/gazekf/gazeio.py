"""Eye-gaze CSV ingestion: blink marking, velocity derivation, TimedSeries.

Input schema: header ``t,x,y`` with an optional fourth column ``blink``
(0/1). Blank or ``nan`` coordinates also mark a blink. UTF-8, ``.`` decimal
separator, LF or CRLF line endings.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

_HEADER_SHORT = ("t", "x", "y")
_HEADER_LONG = ("t", "x", "y", "blink")


@dataclass(frozen=True)
class GazeSample:
    """One gaze observation: time in seconds, screen position in pixels.

    ``blink`` is true exactly when both coordinates are absent.
    """

    t: float
    x: Optional[float]
    y: Optional[float]
    blink: bool

    def __post_init__(self):
        if self.blink:
            if self.x is not None or self.y is not None:
                raise ValueError("blink sample must not carry coordinates")
        else:
            if self.x is None or self.y is None:
                raise ValueError("non-blink sample must carry both coordinates")


@dataclass(frozen=True)
class TimedSeries:
    """Ordered measurement stream: (timestamp, optional vector) pairs.

    A missing vector marks a blink/dropout at that timestamp. All present
    vectors share one dimension.
    """

    samples: tuple
    channel_names: tuple

    def __post_init__(self):
        samples = []
        dim = None
        prev_t = None
        for t, z in self.samples:
            t = float(t)
            if prev_t is not None and t <= prev_t:
                raise ValueError(
                    f"timestamps must be strictly increasing ({t} after {prev_t})"
                )
            prev_t = t
            if z is not None:
                z = np.asarray(z, dtype=float)
                if dim is None:
                    dim = z.size
                elif z.size != dim:
                    raise ValueError(
                        f"inconsistent measurement dimension: {z.size} vs {dim}"
                    )
            samples.append((t, z))
        object.__setattr__(self, "samples", tuple(samples))
        object.__setattr__(self, "channel_names", tuple(self.channel_names))

    def __len__(self) -> int:
        return len(self.samples)


def _parse_coord(text: str) -> Optional[float]:
    text = text.strip()
    if not text or text.lower() == "nan":
        return None
    value = float(text)
    return None if math.isnan(value) else value


def ingest_gaze_csv(source) -> list[GazeSample]:
    """Parse a gaze CSV into GazeSamples, preserving row order.

    ``source`` may be a path, a text stream, or a binary stream. Rows with
    empty/NaN coordinates (or blink=1) become blink samples. Raises
    ValueError with the offending line number on malformed input.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return ingest_gaze_csv(fh)
    if isinstance(source, bytes):
        return ingest_gaze_csv(io.StringIO(source.decode("utf-8")))
    if hasattr(source, "read") and isinstance(source.read(0), bytes):
        source = io.TextIOWrapper(source, encoding="utf-8", newline="")

    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("line 1: missing header (expected t,x,y[,blink])") from None
    header = tuple(col.strip().lower() for col in header)
    if header not in (_HEADER_SHORT, _HEADER_LONG):
        raise ValueError(
            f"line 1: bad header {','.join(header)!r} (expected t,x,y[,blink])"
        )
    has_blink_col = header == _HEADER_LONG

    samples: list[GazeSample] = []
    prev_t = None
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ValueError(
                f"line {lineno}: expected {len(header)} fields, got {len(row)}"
            )
        try:
            t = float(row[0])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric timestamp {row[0]!r}") from None
        if not math.isfinite(t):
            raise ValueError(f"line {lineno}: non-finite timestamp {row[0]!r}")
        if prev_t is not None and t <= prev_t:
            raise ValueError(
                f"line {lineno}: timestamp {t} not greater than previous {prev_t}"
            )
        prev_t = t

        try:
            x = _parse_coord(row[1])
            y = _parse_coord(row[2])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric coordinate") from None

        blink = x is None or y is None
        if has_blink_col:
            flag = row[3].strip()
            if flag not in ("0", "1"):
                raise ValueError(f"line {lineno}: blink flag must be 0 or 1, got {flag!r}")
            # An explicit blink flag wins over whatever the coordinates say.
            blink = blink or flag == "1"
        if blink:
            x = y = None
        samples.append(GazeSample(t=t, x=x, y=y, blink=blink))
    return samples


def emit_gaze_csv(samples: Sequence[GazeSample], dest) -> None:
    """Write samples in the ingest schema; inverse of ingest_gaze_csv.

    Blinks are written as empty coordinate fields with blink=1.
    """
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            emit_gaze_csv(samples, fh)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(_HEADER_LONG)
    for s in samples:
        if s.blink:
            writer.writerow([_format(s.t), "", "", "1"])
        else:
            writer.writerow([_format(s.t), _format(s.x), _format(s.y), "0"])


def _format(value: float) -> str:
    # repr is the shortest representation that round-trips exactly, which
    # the emit/ingest inverse contract requires.
    return repr(float(value))


def to_per_axis_series(samples: Sequence[GazeSample], axis: str) -> TimedSeries:
    """Build a [position, velocity] measurement series for one axis.

    Velocity is the backward finite difference over the most recent pair of
    non-blink samples (blinks are skipped, not interpolated); the first
    non-blink sample gets velocity 0. Blink samples map to missing vectors.
    """
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    n_present = sum(1 for s in samples if not s.blink)
    if n_present < 2:
        raise ValueError(f"need at least 2 non-blink samples, got {n_present}")

    entries = []
    prev: Optional[tuple[float, float]] = None  # (t, position)
    for s in samples:
        if s.blink:
            entries.append((s.t, None))
            continue
        pos = s.x if axis == "x" else s.y
        if prev is None:
            vel = 0.0
        else:
            vel = (pos - prev[1]) / (s.t - prev[0])
        prev = (s.t, pos)
        entries.append((s.t, np.array([pos, vel])))
    return TimedSeries(
        samples=tuple(entries),
        channel_names=(f"pos_{axis}", f"vel_{axis}"),
    )

"""Regenerate the CSV fixtures under tests/data/.

The golden recording is hand-constructed so the surviving follower pairs
can be enumerated on paper (see tests/test_pair_extraction.py for the
enumeration):

  track 1  car        frames 0-199   x = 50 + 0.4 f   y = 0
  track 2  car        frames 0-199   x = 30 + 0.4 f   y = 0
  track 3  truck      frames 0-199   x = 80 + 0.4 f   y = 0
  track 4  car        frames 0-199   x = 130 - 0.4 f  y = 8     heading 180
  track 5  motorcycle frames 100-149 x = 40 + 0.4 f   y = 1.0   (keeps pace
           between tracks 2 and 1, breaking that pair for 50 frames)
  track 6  van        frames 0-19    x = 10 + 0.4 f   y = 0     (0.8 s only)
  track 7  van        frames 50-149  x = 10 + 0.4 f   y = 0.95  (offset lane
           position, inside the 1 m lateral limit but not at 0.9 m)

All movers run at 10 m/s along +x except track 4 (10 m/s along -x);
f is the absolute frame index, so x0 is each track's frame-0 extrapolation.
"""
import csv
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"

GOLDEN_TRACKS = [
    # id, kind, length, width, frames, x0, y, heading, vx
    (1, "car", 5.0, 2.0, range(0, 200), 50.0, 0.0, 0.0, 10.0),
    (2, "car", 5.0, 2.0, range(0, 200), 30.0, 0.0, 0.0, 10.0),
    (3, "truck", 10.0, 2.5, range(0, 200), 80.0, 0.0, 0.0, 10.0),
    (4, "car", 5.0, 2.0, range(0, 200), 130.0, 8.0, 180.0, -10.0),
    (5, "motorcycle", 2.0, 0.8, range(100, 150), 40.0, 1.0, 0.0, 10.0),
    (6, "van", 6.0, 2.2, range(0, 20), 10.0, 0.0, 0.0, 10.0),
    (7, "van", 6.0, 2.2, range(50, 150), 10.0, 0.95, 0.0, 10.0),
]

MINIMAL_TRACKS = [
    (1, "car", 5.0, 2.0, range(0, 100), 20.0, 0.0, 0.0, 10.0),
    (2, "car", 5.0, 2.0, range(0, 100), 0.0, 0.0, 0.0, 10.0),
]


def write_recording(directory: Path, tracks) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / "tracks_meta.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trackId", "class", "length", "width"])
        for tid, kind, length, width, *_ in tracks:
            writer.writerow([tid, kind, length, width])
    with open(directory / "tracks.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["trackId", "frame", "xCenter", "yCenter", "heading", "xVelocity", "yVelocity"]
        )
        for tid, _, _, _, frames, x0, y, heading, vx in tracks:
            for f in frames:
                x = x0 + vx * 0.04 * f
                writer.writerow([tid, f, repr(x), repr(y), repr(heading), repr(vx), "0.0"])


if __name__ == "__main__":
    write_recording(DATA / "golden", GOLDEN_TRACKS)
    write_recording(DATA / "minimal", MINIMAL_TRACKS)
    print(f"fixtures written under {DATA}")

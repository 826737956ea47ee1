#!/usr/bin/env python3
"""Build data/mnist01 IDX files from the npm `mnist` package.

The npm package (https://www.npmjs.com/package/mnist, MIT) ships a subset of
the MNIST handwritten digits as JSON, one file per digit, with pixel values
rounded to round(byte/255, 3). That rounding is invertible, so the original
byte images are recovered exactly and written in the standard IDX layout.

Usage:
  npm install mnist
  python3 scripts/mnist01_from_npm.py node_modules/mnist/src/digits data/mnist01
"""

import json
import pathlib
import struct
import sys


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__)
        return 2
    src = pathlib.Path(sys.argv[1])
    dst = pathlib.Path(sys.argv[2])
    dst.mkdir(parents=True, exist_ok=True)

    images = bytearray()
    labels = bytearray()
    count = 0
    for digit in (0, 1):
        values = json.loads((src / f"{digit}.json").read_text())["data"]
        assert len(values) % 784 == 0
        for v in values:
            b = round(v * 255)
            assert 0 <= b <= 255 and abs(v - round(b / 255, 3)) < 1e-9
            images.append(b)
        n = len(values) // 784
        labels.extend([digit] * n)
        count += n
        print(f"digit {digit}: {n} samples")

    with open(dst / "images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, count, 28, 28))
        f.write(images)
    with open(dst / "labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, count))
        f.write(labels)
    print(f"wrote {count} samples to {dst}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Writes the sample figure pool under assets/images."""
import pathlib
import sys

import numpy as np
from PIL import Image, ImageDraw

SIZES = [(640, 480), (480, 640), (800, 400), (500, 500), (720, 540), (400, 600),
         (900, 300), (600, 450), (350, 350), (640, 360), (300, 500), (760, 570)]


def bars(draw, w, h, rng):
    n = int(rng.integers(4, 10))
    draw.line([(40, h - 40), (w - 20, h - 40)], fill=(30, 30, 30), width=2)
    draw.line([(40, 20), (40, h - 40)], fill=(30, 30, 30), width=2)
    bw = (w - 80) // n
    for i in range(n):
        bh = int(rng.integers(h // 8, h - 80))
        col = tuple(int(c) for c in rng.integers(40, 220, 3))
        draw.rectangle([50 + i * bw, h - 40 - bh, 40 + (i + 1) * bw - 6, h - 41], fill=col)


def curve(draw, w, h, rng):
    draw.rectangle([30, 20, w - 20, h - 30], outline=(40, 40, 40), width=2)
    for k in range(int(rng.integers(1, 4))):
        f, p = rng.uniform(1, 4), rng.uniform(0, 6.28)
        xs = np.linspace(0, 1, 200)
        pts = [(30 + x * (w - 50), (h - 10) / 2 + np.sin(x * f * 6.28 + p) * (h / 3)) for x in xs]
        draw.line(pts, fill=tuple(int(c) for c in rng.integers(0, 200, 3)), width=3)


def shapes(draw, w, h, rng):
    for _ in range(int(rng.integers(6, 16))):
        x0, y0 = rng.integers(0, w - 40), rng.integers(0, h - 40)
        x1, y1 = x0 + rng.integers(20, w // 2), y0 + rng.integers(20, h // 2)
        col = tuple(int(c) for c in rng.integers(0, 255, 3))
        if rng.random() < 0.5:
            draw.ellipse([x0, y0, x1, y1], fill=col)
        else:
            draw.rectangle([x0, y0, x1, y1], fill=col)


def photo(w, h, rng):
    y, x = np.mgrid[0:h, 0:w] / max(w, h)
    base = np.stack([np.sin(x * rng.uniform(2, 8)) * 0.5 + 0.5,
                     np.cos(y * rng.uniform(2, 8)) * 0.5 + 0.5,
                     (x + y) / 2], axis=-1)
    noise = rng.normal(0, 0.05, base.shape)
    return Image.fromarray((np.clip(base + noise, 0, 1) * 255).astype(np.uint8))


def main(out):
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(7)
    for i, (w, h) in enumerate(SIZES):
        if i % 4 == 3:
            im = photo(w, h, rng)
        else:
            im = Image.new("RGB", (w, h), (250, 250, 250))
            [bars, curve, shapes][i % 4](ImageDraw.Draw(im), w, h, rng)
        im.save(out / f"figure_{i:02d}.png", optimize=True)


if __name__ == "__main__":
    main(pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parents[1] / "assets" / "images")

#!/usr/bin/env python3
"""Smoke test for the wmark_py extension module.

Builds the cdylib with cargo, loads it, and runs one embed -> attack ->
extract pass plus a couple of sanity checks. Exit code 0 means the
bindings work end to end.
"""

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
ASSETS = ROOT / "assets"


def build_and_import():
    subprocess.run(
        ["cargo", "build", "-p", "wmark-py", "--release"], cwd=ROOT, check=True
    )
    staging = Path(tempfile.mkdtemp(prefix="wmark_py_"))
    suffix = {"linux": "so", "darwin": "dylib"}.get(sys.platform[:6].rstrip("0123456789"), "so")
    lib = ROOT / "target" / "release" / f"libwmark_py.{suffix}"
    shutil.copy(lib, staging / "wmark_py.so")
    sys.path.insert(0, str(staging))
    import wmark_py

    return wmark_py


def main():
    wm_py = build_and_import()

    assert wm_py.arnold_period(2) == 3
    assert wm_py.arnold_period(30) == 60

    host = wm_py.load_rgb(str(ASSETS / "camera.png"))
    assert (host.width, host.height) == (256, 256)
    wm = wm_py.load_watermark(str(ASSETS / "watermark_30.png"))
    assert wm.side == 30

    # Clean round trip at the default step.
    marked, key = wm_py.embed(host, wm, delta=1.0, arnold=10)
    got = wm_py.extract(marked, key)
    assert got == wm
    assert wm_py.nc(wm, got) == 1.0
    assert wm_py.error_bits_pct(wm, got) == 0.0
    p = wm_py.psnr(host, marked)
    assert p >= 60.0, p
    assert wm_py.pearson(host, marked) >= 0.999

    # Key survives its text form.
    key2 = wm_py.Key.from_text(key.to_text())
    assert key2.to_text() == key.to_text()
    assert key2.quant_step == 1.0

    # Robustness run at a coarser step.
    marked4, key4 = wm_py.embed(host, wm, delta=4.0)
    attacked = wm_py.wavelet_compress(marked4, 3.0)
    got4 = wm_py.extract(attacked, key4)
    assert wm_py.nc(wm, got4) >= 0.95

    cropped = wm_py.crop(marked4, 0, 0, 64, 64)
    got_crop = wm_py.extract(cropped, key4)
    assert 0.0 < wm_py.nc(wm, got_crop) <= 1.0

    # Hand-built watermark through the constructor.
    tiny = wm_py.Watermark(2, [1, 1, 0, 1])
    tiny_star = wm_py.Watermark(2, [1, 0, 0, 1])
    assert abs(wm_py.nc(tiny, tiny_star) - 2.0 / 3.0) < 1e-15

    print("smoke test passed")


if __name__ == "__main__":
    main()

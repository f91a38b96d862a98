"""Smoke test for the pyhypersum extension.

Build first:
    cargo build -p hypersum-py --release --features extension-module
then run this script. It imports an installed pyhypersum if there is one,
otherwise loads the freshly built library from target/release.
"""

import importlib.util
import math
import pathlib
import shutil
import sys
import tempfile


def load():
    try:
        import pyhypersum
        return pyhypersum
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parents[3]
    for name in ("libpyhypersum.so", "libpyhypersum.dylib", "pyhypersum.dll"):
        lib = root / "target" / "release" / name
        if lib.exists():
            break
    else:
        sys.exit("pyhypersum is not built; see the module docstring")
    tmp = pathlib.Path(tempfile.mkdtemp())
    target = tmp / ("pyhypersum.pyd" if lib.suffix == ".dll" else "pyhypersum.so")
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("pyhypersum", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    hs = load()

    r = hs.partial_sum(0.5, 0.5, 1.0, 2)
    assert r["branch"] == "logarithmic", r
    assert abs(r["value"] - 1.25) < 1e-13, r

    a, b, c = 0.5 + 1j, -0.25, 2 - 1j
    r = hs.partial_sum(a, b, c, 20)
    ref = hs.oracle_partial_sum(a, b, c, 20, digits=40)
    assert abs(r["value"] - ref) <= 1e-10 * abs(ref), (r, ref)

    assert hs.classify(1, 0.5, -0.5).startswith("degenerate_negative_integer")

    g10 = hs.landau_constant(10)
    assert abs(hs.landau_constant(10, "watson") - g10) < 1e-13
    assert abs(g10 - (math.log(11) / math.pi + 1.0)) < 0.1

    cells = hs.table1_cells()
    assert len(cells) == 18
    assert all(abs(comp / printed - 1) <= 0.01 for _, _, comp, printed in cells)

    try:
        hs.partial_sum(1, 1, 0, 3)
    except ValueError as e:
        assert "negative integer" in str(e)
    else:
        raise AssertionError("c = 0 was accepted")

    print("pyhypersum smoke test passed")


if __name__ == "__main__":
    main()

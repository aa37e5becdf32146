#!/usr/bin/env python3
"""Smoke test for the tropical_plucker_py extension module.

Builds nothing itself: expects `cargo build -p tropical-plucker-py` (or
--release) to have produced the cdylib, which it copies next to itself under
the importable name. Run from anywhere:

    cargo build -p tropical-plucker-py
    python3 python/smoke_test.py
"""

import pathlib
import shutil
import sys

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent


def stage_module() -> None:
    names = ["libtropical_plucker_py.so", "tropical_plucker_py.so",
             "libtropical_plucker_py.dylib", "tropical_plucker_py.pyd"]
    for profile in ("release", "debug"):
        for name in names:
            src = ROOT / "target" / profile / name
            if src.exists():
                dst = HERE / "tropical_plucker_py.so"
                if not dst.exists() or src.stat().st_mtime > dst.stat().st_mtime:
                    shutil.copyfile(src, dst)
                return
    sys.exit("build the extension first: cargo build -p tropical-plucker-py")


stage_module()
sys.path.insert(0, str(HERE))

import tropical_plucker_py as tp  # noqa: E402


def test_basis_and_classification():
    basis = tp.standard_basis([1, 1, 1], 0, 3)
    assert len(basis) == 7
    assert [1, 0, 1] not in basis  # 13 is not a fuzzy-interval
    assert tp.classify([1, 1, 1, 1], [1, 0, 1, 0]) == "sint"
    assert tp.classify([1, 2, 1, 1], [0, 2, 1, 0]) == "fint"
    assert tp.classify([1, 1, 1, 1], [0, 1, 0, 1]) == "other"


def test_reconstruct_verify():
    basis = tp.standard_basis([1, 1, 1], 0, 3)
    g = {tuple(b): 0 for b in basis}
    g[(0, 1, 0)] = -1
    f = tp.reconstruct([1, 1, 1], 0, 3, g)
    assert f[(1, 0, 1)] == "1"  # max{f(12)+f(3), f(1)+f(23)} - f(2)
    assert tp.verify([1, 1, 1], 0, 3, f) == []
    f[(1, 0, 1)] = "2"
    violations = tp.verify([1, 1, 1], 0, 3, f)
    assert len(violations) == 1 and violations[0]["kind"] == "Tp3"


def test_properties():
    # the fixture which is TP but not supermodular globally
    f = {(0, 0, 0): 0, (1, 0, 0): 0, (0, 1, 0): 0, (0, 0, 1): 0,
         (1, 1, 0): 0, (1, 0, 1): 1, (0, 1, 1): 1, (1, 1, 1): 1}
    assert tp.verify([1, 1, 1], 0, 3, f) == []
    report = tp.properties_report([1, 1, 1], 0, 3, f)
    assert report["submodular"] > 0  # it is supermodular-ish, not submodular


def test_laurent():
    poly = tp.laurent_box([1, 1, 1], [1, 0, 1])
    assert len(poly) == 2  # max{f(1)+f(23), f(3)+f(12)} - f(2)
    for mono in poly:
        coeffs = {point: c for point, c in mono}
        assert coeffs[(0, 1, 0)] == -1
        assert sum(coeffs.values()) == 1


def test_tilings():
    assert tp.count_tilings([1, 1, 1]) == 2
    assert tp.count_tilings([1, 1, 1, 1]) == 8
    rhombi = tp.tile([1, 1, 1], [[1, 0, 1]])
    assert len(rhombi) == 3
    corners = {anchor for anchor, _, _ in rhombi}
    assert (0, 0, 1) in corners or (1, 0, 0) in corners
    try:
        tp.tile([1, 1, 1], [[0, 1, 0], [1, 0, 1]])
    except ValueError as e:
        assert "obstacle" in str(e)
    else:
        raise AssertionError("expected an obstacle")
    svg = tp.tiling_svg([1, 2, 1])
    assert svg.startswith("<svg")


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    main()

"""Smoke test for the Python bindings.

Uses an installed ``biext`` module when present; otherwise builds the
extension with cargo and loads the shared library from target/.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import biext

        return biext
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "biext-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libbiext_py.so"
    loader = importlib.machinery.ExtensionFileLoader("biext", str(lib))
    spec = importlib.util.spec_from_file_location("biext", lib, loader=loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    biext = load()

    f3 = biext.Field(3)
    f = biext.SkewPoly(f3, "F - 1")
    assert str(f.adjoint()) == str(biext.SkewPoly(f3, "F^-1 - 1")), f.adjoint()
    assert sorted(f.kernel()) == ["0", "1", "2"]
    assert all(f.check_g_equation(2, x, y) for x in range(9) for y in range(9))

    report = biext.analyze("p=3 n=1 | [F - 1]")
    assert report.all_passed
    assert report.constants == (0, 1)
    assert report.pi0_log == 1
    assert json.loads(report.json())["schema"] == biext.SCHEMA_VERSION
    assert report.json() == biext.analyze("p=3 n=1 | [F - 1]").json()

    pr = biext.Problem("p=2 | [F^2 - 1, 0; 0, F - 1]")
    assert pr.shape == (2, 2)
    r = pr.analyze()
    assert r.all_passed and r.pi0_log == 3
    rep = json.loads(pr.rep_check())
    assert rep["doubled_schur_sum"] == 4 * rep["group_order"]

    s, complete, points = biext.oracle_kernel("p=2 | [F^2 - 1]", 2)
    assert (s, complete, len(points)) == (2, True, 4)

    assert all(failures == 0 for _, _, failures in biext.selftest(3, 10))

    try:
        biext.Problem("p=3 [F]")
    except ValueError as e:
        assert "column 5" in str(e)
    else:
        raise AssertionError("syntax error not raised")

    print("python smoke test passed")


if __name__ == "__main__":
    sys.exit(main())

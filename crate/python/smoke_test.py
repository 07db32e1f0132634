"""Smoke test for the symsep extension module.

Build first with `cargo build --release -p symsep-python`, then run
`python3 python/smoke_test.py`. Pass a path to the built library to use a
different build.
"""

import cmath
import importlib.util
import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def find_library():
    if len(sys.argv) > 1:
        return Path(sys.argv[1])
    for profile in ("release", "debug"):
        for name in ("libsymsep.so", "libsymsep.dylib", "symsep.dll"):
            path = ROOT / "target" / profile / name
            if path.exists():
                return path
    sys.exit("built library not found; run `cargo build --release -p symsep-python`")


def load(lib):
    tmp = Path(tempfile.mkdtemp())
    target = tmp / ("symsep.pyd" if lib.suffix == ".dll" else "symsep.so")
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("symsep", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    s = load(find_library())

    c = s.ghz(3, 2).classify()
    assert c.verdict == "GloballyEntangled", c
    assert c.ranks == [2, 2, 2]

    h = 1 / math.sqrt(2)
    zero_bell = s.PureState([2, 2, 2], [h, 0, 0, h, 0, 0, 0, 0])
    c = zero_bell.classify()
    assert c.verdict == "PartiallySeparable" and c.witness == "{1}:{2,3}", c

    c = s.random_product(4, 2, seed=3).tensor().classify()
    assert c.verdict == "FullySeparable" and c.factor_fidelity > 1 - 1e-9

    w = s.w_state(3)
    assert w.is_permutation_invariant()
    assert close(w.translation()["theta"], 0.0)
    assert s.slater(3, 3).is_antisymmetric()

    k1 = s.translation_eigenstate(3, 2, 1, seed=5).translation()
    assert k1["is_eigenstate"] and close(k1["theta"], 2 * math.pi / 3, 1e-8)

    phi = s.ProductState([[1, 0], [h, h]])
    sym, norm_squared = phi.symmetrize()
    assert close(norm_squared, 0.75)
    assert close(phi.marcus_bounds()["perm"], 1.5)
    r = phi.verify_symmetrization()
    assert r["holds"] and r["classification"].verdict == "GloballyEntangled"
    assert s.ProductState([[1, 0], [1, 0]]).verify_symmetrization()["classification"].verdict == "FullySeparable"

    assert phi.rdm_crosscheck()["max_deviation"] < 1e-8
    assert close(s.permanent([[1, 2], [3, 4]]), 10)
    m = [[cmath.exp(1j * (i * j + 0.3)) for j in range(5)] for i in range(5)]
    assert abs(s.permanent(m) - s.permanent(m, method="naive")) < 1e-10

    back = s.parse_state(zero_bell.to_json())
    assert back.amplitudes == zero_bell.amplitudes
    assert isinstance(s.parse_state(phi.to_json()), s.ProductState)

    try:
        s.ghz(30, 2)
    except s.SizeGuardError:
        pass
    else:
        raise AssertionError("size guard did not fire")
    try:
        s.PureState([2, 2], [1, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("dimension mismatch accepted")

    passed, rows = s.verify("permanent", trials=20, seed=1)
    assert passed, rows

    print("python smoke test passed")


if __name__ == "__main__":
    main()

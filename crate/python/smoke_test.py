"""Smoke test for the detourkit_py extension module.

Build and run:

    cargo build --release -p detourkit-py
    python3 python/smoke_test.py

The script looks for the module on sys.path first, then for the shared
library under target/release, copied into a temp dir as detourkit_py.so.
"""

import importlib
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        return importlib.import_module("detourkit_py")
    except ImportError:
        pass
    for name in ("libdetourkit_py.so", "libdetourkit_py.dylib"):
        built = os.path.join(ROOT, "target", "release", name)
        if os.path.exists(built):
            tmp = tempfile.mkdtemp()
            shutil.copy(built, os.path.join(tmp, "detourkit_py.so"))
            sys.path.insert(0, tmp)
            return importlib.import_module("detourkit_py")
    sys.exit("detourkit_py not found; run `cargo build --release -p detourkit-py` first")


def main():
    dk = load()

    c5 = dk.Graph.cycle(5)
    assert (c5.n, c5.m) == (5, 5)
    assert c5.distances(0) == [0, 1, 2, 2, 1]

    res = dk.detour(c5, 0, 1, 3)
    assert res.answer and res.dist_st == 1
    assert res.lengths(0) == [1, 4]
    assert not dk.detour(c5, 0, 1, 2).answer

    p3 = dk.Graph.path(3)
    assert not dk.detour(p3, 0, 2, 1).answer
    assert dk.Graph.parse(p3.to_text()).edges() == p3.edges()

    assert dk.bipath(p3, 0, 2, 2, 1, 0)
    assert not dk.bipath(p3, 0, 2, 2, 0, 0)
    assert dk.oracle_bipath(p3, 0, 2, 2, 1, 0)

    pet = dk.Graph.petersen()
    assert dk.path_lengths(pet, 0, 1, 9, strategy="sieve") == dk.oracle_path_lengths(pet, 0, 1, 9)

    for seed in range(5):
        g = dk.Graph.gnp(9, 0.4, seed)
        for t in range(1, g.n):
            for k in range(4):
                got = dk.detour(g, 0, t, k, seed=seed).answer
                assert got == dk.oracle_detour(g, 0, t, k), (seed, t, k)

    apart = dk.Graph(4, [(0, 1), (2, 3)])
    res = dk.detour(apart, 0, 3, 1)
    assert not res.answer and res.dist_st is None

    a = 0x123456789ABCDEF
    assert dk.gf_mul(a, dk.gf_inv(a)) == 1
    assert dk.gf_inv(0) is None

    try:
        dk.Graph(2, [(0, 0)])
    except ValueError:
        pass
    else:
        raise AssertionError("self-loop accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()

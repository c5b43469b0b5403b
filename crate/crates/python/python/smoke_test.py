"""Smoke test for the ramify_py extension.

Build and run from the workspace root:

    cargo build --release -p ramify-py --features extension-module
    cp target/release/libramify_py.so crates/python/python/ramify_py.so
    python3 crates/python/python/smoke_test.py
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import ramify_py as rp


def main():
    pair = rp.example_pair(3, 2, 1, 0)
    r, u = pair.jumps()
    assert u == [1, 4, Fraction(13, 3)], u
    assert r == [4, Fraction(13, 3)], r
    m_prime, oracle_r = pair.oracle()
    assert m_prime == [5] and oracle_r == [Fraction(13, 3)]
    assert pair.verify()

    raw = rp.Pair(3, 1, [0, 1], [(-3, [1]), (-1, [1])], [[(-2, [1]), (-6, [1])], [(-3, [2])]])
    norm = raw.normalize()
    assert norm.conditions()["cond_i"]
    again = rp.Pair.from_json(norm.to_json())
    assert again.jumps() == norm.jumps()

    assert rp.layer_checks(3, 4) == (4, 10, True)
    assert rp.psi(3, 1, 2, 1) == 4

    summary = rp.selftest(3, 2, 20, 1)
    assert summary["fail"] == 0 and summary["pass"] + summary["rejected"] == 20

    try:
        rp.Pair(3, 1, [0, 1], [(-1, [1])], [[(-1, [2])], []]).normalize()
    except rp.RamifyError as e:
        assert "DegenerateGroup" in str(e)
    else:
        raise AssertionError("expected a degenerate group")

    print("ramify_py smoke test: ok")


if __name__ == "__main__":
    main()

"""Smoke test for the pyhyperdense extension.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/pyhyperdense-*.whl
"""

from fractions import Fraction

import pyhyperdense as hd


def k4_pendant():
    supports = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3], [3, 4]]
    return hd.Hypergraph(5, supports)


def main():
    h = k4_pendant()
    r = hd.solve(h)
    assert r.optimal, r
    assert r.exact_density == (3, 2), r.exact_density
    assert r.vertices == [0, 1, 2, 3]
    assert hd.oracle_densest(h)[0] == (3, 2)

    factors = hd.spectral_decompose(h)
    assert [f.exact_density for f in factors] == [(3, 2), (1, 1)]
    dual = hd.dual_decompose(h)
    assert [Fraction(*f.exact_density) for f in dual] == [Fraction(1), Fraction(2, 3)]

    v_plus, v_zero, v_minus, *_ = hd.dm_decompose(h)
    assert (v_plus, v_zero, v_minus) == ([0, 1, 2, 3], [4], [])

    values, level = hd.equalize_row([1.5, 1.4, 1.0, 0.75, 0.9, 1.15], [1.0] * 6, 1.0)
    assert abs(level - 1.2) < 1e-12
    assert all(abs(a - b) < 1e-12 for a, b in zip(values, [0, 0, 0.2, 0.45, 0.3, 0.05]))

    assert abs(hd.gram_eigenvalue(h) - 1.5) < 1e-6

    text = h.serialize()
    assert hd.Hypergraph.parse(text).serialize() == text
    assert h.dual().dual().serialize() == text

    g = hd.Hypergraph.random(40, 80, seed=3)
    assert hd.solve(g, threads=4).exact_density == hd.solve(g).exact_density

    try:
        hd.Hypergraph.parse("3 3 0\n1 2\n\n2 3\n")
    except ValueError as e:
        assert "line 3" in str(e)
    else:
        raise AssertionError("empty support accepted")

    print("pyhyperdense smoke test passed:", r)


if __name__ == "__main__":
    main()

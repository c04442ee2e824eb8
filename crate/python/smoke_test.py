"""Smoke test for the ddelta extension module.

Build and install it first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist && pip install dist/ddelta-*.whl
"""
import math

import ddelta


def main():
    s1 = ddelta.Element("s - 1")
    z = ddelta.Element("z")
    assert str(ddelta.gcd(s1, z)) == "z"
    g, u, v = ddelta.bezout("s-1", "z")
    assert u * s1 + v * z == g
    assert ddelta.divides(z, s1 * z) == s1
    assert ddelta.divides("s-1", "z") is None
    assert ddelta.Element("s^2 - 2*s + 1") == s1 ** 2
    try:
        ddelta.Element("(s-1)/z^2")
    except ddelta.DdeltaError as e:
        assert e.args[1] == 4
    else:
        raise AssertionError("(s-1)/z^2 accepted")

    d = ddelta.smith_form("[[s-1],[z]]")["D"]["entries"]
    assert d[0][0]["expr"] == "z" and d[1][0]["expr"] == "0"

    zs = ddelta.zeros("s - 1", [-1, 1, -7, 7])
    assert [m for _, m in zs] == [1, 1, 1]
    assert max(abs(c.imag - k * 2 * math.pi) for (c, _), k in zip(zs, (-1, 0, 1))) < 1e-9

    assert ddelta.member("z", ["s-1", "z"])["verified"]
    assert ddelta.hefer("s^2 - z", 2)["identity"]["holds"]

    ys = ddelta.simulate("s - 1/2", [1.0], 3.0, 0.5)
    assert abs(ys[-1][1] - 0.25) < 1e-12

    r = ddelta.residue("z", 0j, 1.0)
    assert abs(r - math.pi) < 1e-4, r
    print("smoke test ok")


if __name__ == "__main__":
    main()

"""Smoke test for the pysyzcalc extension: run with `python python/smoke.py`."""

import pysyzcalc as sc


def main():
    r = sc.Ring(["x", "y", "z", "w"])
    cubic = sc.Ideal(r, ["x*z - y^2", "x*w - y*z", "y*w - z^2"])
    gb = cubic.groebner_basis()
    assert len(gb.generators) == 3, gb.generators
    assert gb.contains("x*z*w - y^2*w")
    assert cubic.quotient().betti_table() == {(0, 0): 1, (1, 1): 3, (2, 1): 2}

    t = sc.Ring(["t", "x", "y"], order="lex")
    image = sc.Ideal(t, ["x - t^2", "y - t^3"]).eliminate(["t"])
    assert image.generators == ["x^3 - y^2"], image.generators

    xy = sc.Ring(["x", "y"])
    meet = sc.Ideal(xy, ["x"]).intersect(sc.Ideal(xy, ["y"]))
    assert meet.generators == ["x*y"], meet.generators

    m = sc.Module.from_text("vars: x, y\nshifts: 0\nx\ny\n")
    assert m.betti_table() == m.koszul_table(2, -1, 1) == {(0, 0): 1, (1, 0): 2, (2, 0): 1}

    # rational normal cubic: K_{1,1} has dimension 1·C(3, 2)
    assert sc.koszul_of_sections(0, 3, 1, 1) == 3
    assert sc.Module.sections(0, 3).koszul(1, 1) == 3

    amp = sc.ampleness_order(2)
    assert amp["order"] == 2 and amp["proved"]

    crit = sc.curve_criterion(0, 4, 0, 1)
    assert crit["certified"], crit
    d, hyp = sc.effective_bound(2, 3)
    assert d == 10 and "very ample" in hyp

    pg = sc.polygraph_check(2, 1)
    assert pg["verdict"] == "ext-zero", pg["summary"]

    try:
        sc.polygraph_check(4, 1)
    except sc.SyzcalcError as e:
        print("guarded:", e)
    else:
        raise AssertionError("n = 4 should exceed the limits")

    print("ok")


if __name__ == "__main__":
    main()

"""Smoke test for the sasaki7 extension module."""

import json
from fractions import Fraction

import sasaki7


def main() -> None:
    model = sasaki7.Model("1")
    f1, f2, omega = model.canonical_structure()
    assert omega == f1 + f2
    assert model.torsion == f2.scale("2") - f1.scale("6")
    assert model.inner_product(model.d(omega), model.star(omega)) == "36"
    assert model.scalar_curvature() == "42"
    assert model.dirac_eigenvalue() == "9/2"
    assert model.act(omega, model.psi0) == [str(-7 * Fraction(c)) for c in model.psi0]
    assert model.holonomy_dimension() == 6

    p1, p7, p27 = model.type_split(model.torsion)
    assert p1 == "6/7" and p7.is_zero()
    assert p27 == (f2 - f1.scale("6")).scale("8/7")

    squashed = sasaki7.Model("1/5")
    assert squashed.s == "sqrt(1/5)"
    assert all(r[i] == "54/5" for i, r in enumerate(squashed.ricci()))

    report = sasaki7.verify()
    assert report["summary"]["fail"] == 0, report["summary"]
    assert len(report["results"]) >= 40

    rows = sasaki7.sweep("1/2", "1", 2)
    assert abs(rows[0]["char_ricci_vertical"]) < 1e-12

    coset = sasaki7.dump("coset")
    assert sasaki7.ingest(json.dumps(coset))["valid"]

    try:
        sasaki7.Model("-1")
    except ValueError as e:
        assert "t must be positive" in str(e)
    else:
        raise AssertionError("negative t accepted")

    print(f"ok: {report['summary']['pass']} checks pass")


if __name__ == "__main__":
    main()

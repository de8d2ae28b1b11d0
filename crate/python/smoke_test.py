"""Smoke test for the er2 extension module.

Build first:  cd crates/py && maturin develop --release
"""
import json

import er2


def main():
    p = er2.derive_parameters(6)
    assert (p["n"], p["k"], p["alpha"]) == (7, 10, 2), p
    assert p["passes_gates"]

    report = json.loads(er2.check(m=6))
    assert sorted(report) == ["caps", "gates", "params", "survivors", "timings", "verdict"]
    assert report["verdict"] == "RP^{14} does not immerse in R^{21}"
    assert [s["monomial"] for s in report["survivors"]] == ["u1^7*u2^21"]
    assert er2.check(n=7, k=10, format="csv").splitlines()[1] == "u1^7*u2^21,7,21,true"

    try:
        er2.check(m=4086)
    except er2.GateRefused as e:
        assert "beyond desk scale" in str(e)
    else:
        raise AssertionError("4086 should be refused at desk scale")

    page8 = er2.bss_pages("rp-odd", big_k=1, page=8).splitlines()
    assert page8[1:] == ["8,v2^2*alpha^3*i25,13,", "8,v2^6*alpha^3*i25,37,"], page8
    erratum = json.loads(er2.erratum_report("rp-odd", big_k=1))
    assert any(c["selected"] for c in erratum["repair_candidates"])

    assert er2.er2_normalize("w*w") == er2.er2_normalize("alpha*alpha")
    assert er2.fgl_csv("araki", 3).startswith("x,y,")
    assert er2.basis_csv(1).startswith("family,k,j,degree")
    print("smoke test passed")


if __name__ == "__main__":
    main()

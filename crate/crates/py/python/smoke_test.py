"""Smoke test for the rainbow_py extension module."""

import os
import tempfile

import rainbow_py as rb


def main():
    c4 = rb.Pattern.named("C4")
    assert (c4.num_vertices, c4.num_edges) == (4, 4)
    assert c4.is_isomorphic(rb.Pattern(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))

    fam = rb.Family.uniform(800, 3, 9)
    out = rb.find(fam, c4)
    success = out["result"]["success"]
    assert rb.check_certificate(fam, success) == []
    assert out["diagnostics"]["finder"] == "find_c4"

    refused = rb.find(rb.Family.uniform(24, 9999, 1), rb.Pattern.named("I4"))
    stop = refused["result"]["threshold_not_met"]
    assert stop["found"] < stop["required"]

    p2 = rb.Pattern.named("P2")
    report = rb.family_is_good(rb.Family.monochromatic(5, 2), p2)
    assert not report["is_good"]
    assert rb.check_certificate(rb.Family.monochromatic(5, 2), report["witness"]) == []
    assert rb.family_is_good(rb.Family.injective(5, 10), p2)["is_good"]

    summary, witness = rb.compute_c(3, p2, 4)
    assert summary["value"] == {"exact": 2}
    assert rb.family_is_good(witness, p2)["is_good"]
    assert rb.decide_good_exists(3, p2, 1) is None

    good = rb.construct_good_family(6, rb.Pattern.named("I2"), 5)
    assert rb.family_is_good(good, rb.Pattern.named("I2"))["is_good"]

    with tempfile.TemporaryDirectory() as d:
        counts = rb.export_cnf(3, p2, 2, os.path.join(d, "p2.cnf"))
        assert counts["color_vars"] == 18
        path = os.path.join(d, "g.fam")
        good.save(path)
        assert rb.Family.load(path).to_dense() == good.to_dense()

    a = rb.generate_family("uniform-random", 10, 2, seed=42)
    b = rb.generate_family("uniform-random", 10, 2, seed=42)
    assert a.to_dense() == b.to_dense()

    try:
        rb.generate_family("resampled-good", 6, 1, pattern=p2, budget=50)
    except rb.RainbowError as e:
        assert "budget_exhausted" in str(e)
    else:
        raise AssertionError("expected the resample budget to run out")

    print("smoke test passed")


if __name__ == "__main__":
    main()

"""Smoke test for the `hnr` extension module."""

import math
import os
import tempfile

import hnr


def main():
    h = hnr.height_of(3, 1, a=10.0)
    assert abs(h.h - math.pi / 4) < 1e-4, h
    assert h.total_height == 2 * h.h
    assert hnr.height_derivative(4, 2, 1.0) < 0
    assert hnr.slab_obstruction(3, 1, 2 * hnr.height_limit(3, 1))
    assert hnr.classify_regime(3, 1, 2.0) == "TwoSheets"

    p = hnr.sample_profile(3, 1, 2.0, samples=200)
    assert len(p) == 200 and len(p.h) == 3
    assert p.residual < 1e-6
    for rho, ld in zip(p.rho, p.lambda_dot):
        assert abs(hnr.first_integral(3, 1, rho, ld) - 2.0) < 1e-9

    decay = [v for (_, _, _, v) in hnr.decay_check(3, 1, 2.0)]
    assert all(b < a for a, b in zip(decay, decay[1:]))

    mesh = hnr.Mesh.generate(3, 1, 2.0, rows=48, columns=8)
    base = mesh.strong_total_curvature(4.0)
    assert abs(mesh.dilated(2.0).strong_total_curvature(4.0) - base) <= 1e-12 * base
    with tempfile.TemporaryDirectory() as d:
        v, e = os.path.join(d, "v.csv"), os.path.join(d, "e.csv")
        mesh.write_csv(v, e)
        assert hnr.Mesh.read_csv(v, e).strong_total_curvature(4.0) == base

    assert hnr.run_fixture("containment").verdict == "Containment"
    rep = hnr.run_fixture("violation")
    assert rep.verdict == "FirstContact" and 0 <= rep.contact_gap < 1e-6

    plane = hnr.Hyperplane([0.0, 0.0, 1.0])
    a = hnr.waist(3, 1, 2.0)
    far = math.tanh(1.5 * a)
    swept = hnr.sweep([[0.0, 0.0, far, 0.0]], plane, 1, 2.0, [6.0 - 0.05 * k for k in range(121)])
    assert swept.verdict == "FirstContact"
    assert abs(swept.contact_s - 2 * a) < 1e-6

    try:
        hnr.height_of(3, 3, d=2.0)
    except ValueError:
        pass
    else:
        raise AssertionError("r = n should be rejected")
    print("smoke test passed")


if __name__ == "__main__":
    main()

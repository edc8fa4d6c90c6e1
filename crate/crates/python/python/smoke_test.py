"""Smoke test for the spr_forge extension module.

Build and install first, e.g. from crates/python:

    maturin build --release && pip install ../../target/wheels/spr_forge-*.whl

then run ``python python/smoke_test.py``.
"""

import json

import spr_forge


def close(u, v, tol=1e-12):
    return len(u) == len(v) and all(abs(x - y) <= tol for x, y in zip(u, v))


def main():
    # (s + 1)^3 is Hurwitz, s^2 - 1 is not.
    assert spr_forge.is_hurwitz([1, 3, 3, 1])
    assert not spr_forge.is_hurwitz([1, 0, -1])
    assert spr_forge.is_schur([1, -0.5])
    assert not spr_forge.is_schur([1, -2])

    # 1/(s+1): Re = 1/(1+w^2), numerator of the real part is the constant 1.
    assert close(spr_forge.real_part_numerator([1], [1, 1]), [1.0])
    assert spr_forge.is_spr([1, 2], [1, 1])
    assert not spr_forge.is_spr([1, -2], [1, 1])

    verdict = spr_forge.segment_hurwitz([1, 1, 2.75, 1.25, 1.75], [1, 1, 1.25, 0.75, 0.25])
    assert not verdict.stable
    assert abs(verdict.witness_lambda - 0.5) < 1e-6
    assert abs(verdict.witness_root.real) < 1e-6

    result = spr_forge.synthesize([1, 3, 3, 1], [1, 6, 12, 8])
    assert result.cert_a.spr and result.cert_b.spr
    assert len(result.c_final) == 4 and result.c_final[0] == 1.0
    assert result.epsilon is not None and result.epsilon > 0 and result.delta > 0
    for den in (result.a, result.b):
        low, _ = spr_forge.grid_min_real_part(result.c_final, den)
        assert low > 0, low
    ok, checks = spr_forge.certify(result.to_json())
    assert ok, checks
    assert json.loads(result.cert_a.to_json())["spr"] is True

    try:
        spr_forge.synthesize([1, 1, 2.75, 1.25, 1.75], [1, 1, 1.25, 0.75, 0.25])
    except spr_forge.SegmentUnstableError as e:
        assert abs(e.args[1] - 0.5) < 1e-6
    else:
        raise AssertionError("unstable segment was not refused")

    try:
        spr_forge.synthesize([1, 2], [1, 2, 3])
    except spr_forge.InputError:
        pass
    else:
        raise AssertionError("degree mismatch was not rejected")

    tight = spr_forge.Tolerances(pos=1e-10)
    assert spr_forge.is_hurwitz([1, 2, 1], tol=tight)

    discrete = spr_forge.synthesize_discrete([1, 0, 0], [1, -0.5, 0.06])
    assert discrete.cert_a.spr and discrete.cert_b.spr
    assert len(discrete.c_z) <= 3
    ok, _ = spr_forge.certify(discrete.to_json())
    assert ok

    code, out, _ = spr_forge.run_cli(["check-hurwitz", "1,3,3,1"])
    assert code == 0 and json.loads(out)["result"]["hurwitz"] is True

    print("spr_forge smoke test passed")


if __name__ == "__main__":
    main()

import json
import math

import mpmath as mp
import numpy as np
import pytest

from parawrist import load_params, lower_attachment_point, solve_link_parameters
from parawrist.errors import InfeasibleArcRadius, InvalidInput, NonPositiveInput
from parawrist.geometry import StructuralParams, home_upper_points


def test_prototype_dimensions(params):
    assert params.theta0 == math.pi / 4
    assert params.l1 == pytest.approx(5.0, abs=1e-12)
    assert params.l2 == pytest.approx(13.678740930904155, abs=1e-12)
    assert round(params.l2, 2) == 13.68


def test_other_design_against_extended_precision():
    p = solve_link_parameters(10, 20, 17.320508, 15)
    mp.mp.dps = 30
    theta0 = mp.atan(mp.mpf(10) / mp.mpf("17.320508"))
    l2 = mp.mpf("17.320508") / mp.cos(theta0) - 15
    assert p.theta0 == pytest.approx(float(theta0), abs=1e-15)
    assert p.theta0 == pytest.approx(math.pi / 6, abs=1e-7)
    assert p.l1 == 5.0
    assert p.l2 == pytest.approx(float(l2), abs=1e-12)


@pytest.mark.parametrize("bad", [(0, 30, 27.35, 25), (27.35, -1, 27.35, 25), (27.35, 30, 27.35, float("nan"))])
def test_non_positive_inputs(bad):
    with pytest.raises(NonPositiveInput, match="non-positive input"):
        solve_link_parameters(*bad)


def test_arc_radius_too_large():
    with pytest.raises(InfeasibleArcRadius, match="l1"):
        solve_link_parameters(27.35, 30, 27.35, 31)
    with pytest.raises(InfeasibleArcRadius, match="l2"):
        solve_link_parameters(27.35, 50, 27.35, 40)


def test_params_reject_inconsistent_fields(params):
    fields = params.to_dict()
    fields["l1"] = 4.0
    with pytest.raises(InvalidInput):
        StructuralParams(**fields)


def test_attachment_points(params):
    np.testing.assert_allclose(lower_attachment_point(params, 0.0), [27.35, 0.0, 0.0])
    np.testing.assert_allclose(
        lower_attachment_point(params, 2 * math.pi / 3), [-13.675, 27.35 * math.sqrt(3) / 2, 0.0], atol=1e-12
    )


def test_home_upper_points_are_120_deg_apart(params):
    u = home_upper_points(params)
    np.testing.assert_allclose(np.linalg.norm(u, axis=1), params.r2)
    np.testing.assert_allclose(u.sum(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(u[0], [0.0, 30.0, 0.0], atol=1e-12)


def test_load_params(tmp_path, params):
    assert load_params(None) == params
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"r1": 27.35, "r2": 30, "h": 27.35, "rl": 25, "l2": 99}))
    assert load_params(f) == params
    f.write_text(json.dumps({"r1": 27.35}))
    with pytest.raises(InvalidInput, match="missing key"):
        load_params(f)

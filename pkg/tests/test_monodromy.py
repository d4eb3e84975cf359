import math
from fractions import Fraction

import numpy as np
import pytest

from billiardbook import (
    BookTable,
    FiberTag,
    ValidationError,
    classify_fiber,
    continue_theta,
    loop_around_origin,
    molecule_labels,
    radial_period_quadrature,
    radial_period_simulated,
)

K = -1.0


def circle_loop(center, radius, count=48):
    angles = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
    return [
        (center[0] + radius * math.cos(a), center[1] + radius * math.sin(a))
        for a in angles
    ]


class TestRadialPeriodQuadrature:
    def test_diameter_closed_form(self):
        # time 0 -> 1 along a diameter is asinh(1/sqrt(2h)); dphi is the
        # center-passage jump pi
        table = BookTable(k=K, sheets=1)
        sample = radial_period_quadrature(table, 0.5, 0.0)
        assert sample.T_r == pytest.approx(2.0 * math.asinh(1.0), abs=1e-10)
        assert sample.dphi == math.pi
        assert radial_period_quadrature(table, 0.5, 0.0, f0_sign=-1).dphi == -math.pi

    def test_matches_direct_simulation(self):
        table = BookTable(k=K, sheets=1)
        quad = radial_period_quadrature(table, 0.375, 0.5)
        sim = radial_period_simulated(table, 0.375, 0.5)
        assert quad.T_r == pytest.approx(sim.T_r, abs=1e-6)
        assert quad.dphi == pytest.approx(sim.dphi, abs=1e-6)

    def test_dphi_odd_in_f(self):
        table = BookTable(k=K, sheets=2)
        rng = np.random.default_rng(21)
        for _ in range(20):
            h = rng.uniform(-0.2, 0.8)
            f = rng.uniform(0.05, 0.7)
            if classify_fiber(table, h, f).tag is not FiberTag.REGULAR_TORUS:
                continue
            plus = radial_period_quadrature(table, h, f)
            minus = radial_period_quadrature(table, h, -f)
            assert minus.dphi == pytest.approx(-plus.dphi, abs=1e-10)
            assert minus.T_r == pytest.approx(plus.T_r, abs=1e-10)

    def test_theta_scales_with_sheets(self):
        one = radial_period_quadrature(BookTable(k=K, sheets=1), 0.3, 0.4)
        four = radial_period_quadrature(BookTable(k=K, sheets=4), 0.3, 0.4)
        assert four.theta == pytest.approx(4.0 * one.dphi, abs=1e-12)

    def test_singular_value_rejected(self):
        table = BookTable(k=K, sheets=1)
        with pytest.raises(ValidationError):
            radial_period_quadrature(table, 0.0, 0.0)
        with pytest.raises(ValidationError):
            radial_period_quadrature(table, -0.5, 0.0)


class TestLoopAroundOrigin:
    def test_parabola_point_left_of_origin(self):
        table = BookTable(k=K, sheets=1)
        loop = loop_around_origin(table, c=0.5, f_max=0.8)
        h_at_f0 = min(h for h, f in loop if abs(f) < 1e-12)
        assert h_at_f0 == pytest.approx(-0.25, abs=1e-12)

    def test_every_waypoint_regular(self):
        table = BookTable(k=K, sheets=3)
        for h, f in loop_around_origin(table, c=0.5, f_max=0.8):
            assert classify_fiber(table, h, f).tag is FiberTag.REGULAR_TORUS

    def test_winding_number_is_one(self):
        # counterclockwise in the (f, h) plane
        table = BookTable(k=K, sheets=1)
        loop = loop_around_origin(table)
        pts = np.array(loop + [loop[0]])
        angles = np.unwrap(np.arctan2(pts[:, 0], pts[:, 1]))
        assert (angles[-1] - angles[0]) / (2.0 * math.pi) == pytest.approx(1.0, abs=1e-9)

    def test_non_enclosing_parameters_rejected(self):
        table = BookTable(k=K, sheets=1)
        with pytest.raises(ValidationError):
            loop_around_origin(table, c=0.5, f_max=0.4)
        with pytest.raises(ValidationError):
            loop_around_origin(table, c=1.5)


class TestContinueTheta:
    def test_single_sheet_monodromy(self):
        table = BookTable(k=K, sheets=1)
        report = continue_theta(table, loop_around_origin(table, c=0.5))
        assert report.m == 1
        assert report.monodromy_matrix == ((1, 0), (1, 1))

    def test_two_sheets(self):
        table = BookTable(k=K, sheets=2)
        report = continue_theta(table, loop_around_origin(table, c=0.5))
        assert report.m == 2
        assert report.monodromy_matrix == ((1, 0), (2, 1))

    def test_non_enclosing_loop_gives_identity(self):
        table = BookTable(k=K, sheets=3)
        report = continue_theta(table, circle_loop((-0.3, 0.0), 0.08))
        assert report.m == 0
        assert report.monodromy_matrix == ((1, 0), (0, 1))
        assert report.labels is None

    def test_start_point_invariance(self):
        table = BookTable(k=K, sheets=2)
        loop = loop_around_origin(table)
        shifted = loop[37:] + loop[:37]
        assert continue_theta(table, shifted).m == 2

    def test_theta_odd_under_loop_reflection(self):
        table = BookTable(k=K, sheets=1)
        report = continue_theta(table, loop_around_origin(table))
        by_value = {(s.h, s.f): s.theta for s in report.samples}
        for (h, f), theta in by_value.items():
            if (h, -f) in by_value and f != 0.0:
                assert by_value[(h, -f)] == pytest.approx(-theta, abs=1e-10)


class TestMoleculeLabels:
    def test_h_negative_side(self):
        labels = molecule_labels(BookTable(k=K, sheets=1), -1)
        assert labels.r_hneg == math.inf
        assert labels.epsilon == 1

    def test_single_sheet_h_positive(self):
        labels = molecule_labels(BookTable(k=K, sheets=1), +1)
        assert labels.r_hpos == Fraction(0)
        assert labels.epsilon == 1

    def test_four_sheets_h_positive(self):
        labels = molecule_labels(BookTable(k=K, sheets=4), +1)
        assert labels.r_hpos == Fraction(1, 4)
        assert labels.derived_from_m == 4

    def test_labels_from_supplied_report(self):
        table = BookTable(k=K, sheets=2)
        report = continue_theta(table, loop_around_origin(table))
        labels = molecule_labels(table, +1, report=report)
        assert labels.derived_from_m == report.m == 2
        assert labels.r_hpos == Fraction(1, 2)

    def test_gluing_matrix_consistent_with_label(self):
        table = BookTable(k=K, sheets=3)
        report = continue_theta(table, loop_around_origin(table))
        alpha, beta = report.gluing_matrix_hpos[0]
        assert Fraction(alpha, beta) % 1 == report.labels.r_hpos

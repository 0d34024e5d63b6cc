"""End-to-end constructors, certification, verification, and classification.

Frozen instances were computed once from the building blocks (certificate
vector of {1, 2} translated from {0, 1, 2}, closed-form moment data) and
pinned here; everything else checks structure and invariants.
"""

from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

import jsonschema
import pytest

from majorant.constructions import (
    Certificate,
    assign_signs,
    classify,
    construct_abundant,
    construct_independent,
    construct_moment,
    emit_plot_data,
    verify_certificate,
)
from majorant.cvector import OpenInterval, build_c
from majorant.errors import DomainError, HypothesisError
from majorant.exact_lattice import FrequencySet
from majorant.lp_engine import EvalConfig

DOCS = Path(__file__).resolve().parent.parent / "docs"

MOMENT_GEN = FrequencySet.from_json(
    {
        "dim": 2,
        "points": [],
        "generator": {"kind": "moment_curve", "params": {}},
    }
)

COLLINEAR_GEN = FrequencySet.from_json(
    {
        "dim": 2,
        "points": [],
        "generator": {"kind": "arith_progression", "params": {"start": [0, 0], "step": [1, 1]}},
    }
)


class TestAssignSigns:
    def test_flip_sits_at_first_odd_entry(self):
        cv = build_c((4, -2))  # primitive form (2, -1)
        assert assign_signs(cv, 0.25) == (0.25, -0.25)
        cv2 = build_c((3, -1))
        assert assign_signs(cv2, 0.5) == (-0.5, 0.5)

    def test_magnitude_range(self):
        cv = build_c((2, -1))
        with pytest.raises(DomainError):
            assign_signs(cv, 0.0)
        with pytest.raises(DomainError):
            assign_signs(cv, 1.0)


class TestConstructIndependent:
    def test_three_point_line_frozen(self):
        cert = construct_independent(FrequencySet(1, ((0,), (1,), (2,))))
        assert cert.theorem_tag == "independent"
        assert cert.frequencies == ((0,), (1,), (2,))
        assert cert.coefficients == (1.0, 0.25, -0.25)
        assert cert.cvector.c == (2, -1)
        assert cert.p_interval == OpenInterval(0, 2)
        assert cert.p_tested == 1.0
        assert cert.verified
        assert cert.margin is not None and cert.margin > 0
        assert cert.reduction is None

    def test_collinear_plane_set_reduces(self):
        cert = construct_independent(FrequencySet(2, ((1, 1), (3, 3), (7, 7))))
        assert cert.dim == 1
        assert cert.cvector.c == (3, -1)
        assert cert.verified
        assert cert.reduction is not None
        origin = cert.reduction["origin"]
        cols = cert.reduction["basis_columns"]
        # the recorded affine map must reproduce members of the input set
        for reduced, original in (((0,), (1, 1)), ((1,), (3, 3)), ((3,), (7, 7))):
            image = tuple(
                origin[axis] + sum(cols[j][axis] * t for j, t in enumerate(reduced))
                for axis in range(2)
            )
            assert image == original

    def test_unit_square_is_dependent_and_certifies(self):
        pts = ((0, 0), (1, 0), (0, 1), (1, 1))
        cert = construct_independent(FrequencySet(2, pts))
        assert cert.dim == 2
        assert cert.verified
        assert cert.reduction is None
        # translated square corners give c = (-1, -1, 1) up to ordering
        assert cert.cvector.m_plus == 2
        assert cert.p_interval == OpenInterval(0, 2)

    def test_rejects_affinely_independent_set(self):
        with pytest.raises(HypothesisError):
            construct_independent(FrequencySet(2, ((0, 0), (1, 0), (0, 1))))

    def test_rejects_generated_set(self):
        with pytest.raises(HypothesisError):
            construct_independent(MOMENT_GEN)


class TestConstructAbundant:
    def test_moment_generator_family(self):
        certs = construct_abundant(MOMENT_GEN, 2, EvalConfig())
        assert len(certs) == 2
        first, second = certs
        assert first.cvector.m_plus == 4
        assert first.cvector.c == (-1, 1, 3)
        assert first.p_interval == OpenInterval(4, 6)
        assert first.verified
        assert second.cvector.m_plus == 9
        assert second.p_interval == OpenInterval(14, 16)
        # escalation keeps the violation intervals disjoint
        assert first.p_interval.hi <= second.p_interval.lo

    def test_count_validation(self):
        with pytest.raises(DomainError):
            construct_abundant(MOMENT_GEN, 0)

    def test_rejects_non_abundant_set(self):
        with pytest.raises(HypothesisError):
            construct_abundant(COLLINEAR_GEN, 1)
        with pytest.raises(HypothesisError):
            construct_abundant(FrequencySet(1, ((0,), (1,), (2,))), 1)


class TestConstructMoment:
    def test_plane_cubic_instance(self):
        cert = construct_moment(2, 3, EvalConfig(grid_points_per_axis=1024))
        assert cert.theorem_tag == "moment_curve"
        assert cert.cvector.c == (6, -8, 3)
        assert cert.p_interval == OpenInterval(2, 4)
        assert cert.p_tested == 3.0
        assert cert.verified
        assert "k=2" in cert.note
        assert cert.frequencies[0] == (0, 0)
        assert cert.frequencies[1:] == ((2, 4), (3, 9), (4, 16))

    def test_rejects_even_and_nonpositive_exponents(self):
        with pytest.raises(DomainError):
            construct_moment(2, 4)
        with pytest.raises(DomainError):
            construct_moment(2, 0)
        with pytest.raises(DomainError):
            construct_moment(2, -1.5)

    def test_large_exponent_fails_honestly(self):
        cert = construct_moment(2, 9.5, EvalConfig(grid_points_per_axis=64))
        assert cert.cvector.c == (10, -15, 6)
        assert cert.cvector.total_order == 31
        assert not cert.verified
        assert "resolution" in cert.note
        # the structural data is still usable even though numerics cannot
        # resolve a margin of order 0.25^31
        assert cert.p_interval.contains(9.5)


@pytest.fixture(scope="module")
def cert():
    return construct_independent(FrequencySet(1, ((0,), (1,), (2,))))


class TestVerifyCertificate:
    def test_round_trip_verifies(self, cert):
        res = verify_certificate(cert)
        assert res.verdict is True
        assert res.margin > 0
        assert res.rhs > res.lhs

    def test_sign_stripped_coefficients_fail(self, cert):
        tampered = replace(cert, coefficients=tuple(abs(x) for x in cert.coefficients))
        assert verify_certificate(tampered).verdict is False

    def test_exponent_moved_to_even_fails(self, cert):
        tampered = replace(cert, p_tested=2.0)
        assert verify_certificate(tampered).verdict is False

    def test_json_survives_verification(self, cert):
        res = verify_certificate(Certificate.from_json(cert.to_json()))
        assert res.verdict is True


class TestEmitPlotData:
    def test_samples_are_interior_and_positive(self, cert):
        rows = emit_plot_data(cert, 5)
        assert len(rows) == 5
        lo, hi = cert.p_interval
        for row in rows:
            assert lo < row["p"] < hi
            assert row["rhs"] > row["lhs"]
            assert row["difference"] > 0
        ps = [row["p"] for row in rows]
        assert ps == sorted(ps)

    def test_zero_samples_give_empty_table(self, cert):
        assert emit_plot_data(cert, 0) == []

    def test_negative_request_rejected(self, cert):
        with pytest.raises(DomainError):
            emit_plot_data(cert, -1)


class TestClassify:
    def test_affinely_independent_set(self):
        rep = classify(FrequencySet(2, ((0, 0), (1, 0), (0, 1))))
        assert rep["smp_status"] == "holds_all_p"
        assert rep["affinely_independent"]
        assert rep["certificate"] is None

    def test_dependent_finite_set(self):
        rep = classify(FrequencySet(1, ((0,), (1,), (2,))))
        assert rep["smp_status"] == "violated_with_certificate"
        assert rep["certificate"] is not None
        assert rep["certificate"]["verified"]

    def test_moment_generator_is_abundant(self):
        rep = classify(MOMENT_GEN)
        assert rep["abundance"] == "yes"
        assert rep["smp_status"] == "violated_with_certificate"
        assert rep["certificate"]["theorem_tag"] == "abundant"

    def test_collinear_generator_uses_sample(self):
        rep = classify(COLLINEAR_GEN)
        assert rep["abundance"] == "no"
        assert rep["smp_status"] == "violated_with_certificate"
        cert = rep["certificate"]
        assert cert["theorem_tag"] == "independent"
        assert cert["reduction"] is not None

    def test_certificate_can_be_suppressed(self):
        rep = classify(FrequencySet(1, ((0,), (1,), (2,))), with_certificate=False)
        assert rep["smp_status"] == "violated_with_certificate"
        assert rep["certificate"] is None


class TestJsonContracts:
    def test_certificate_round_trip(self):
        cert = construct_independent(FrequencySet(2, ((1, 1), (3, 3), (7, 7))))
        assert Certificate.from_json(cert.to_json()) == cert

    def test_certificate_schema(self):
        schema = json.loads((DOCS / "certificate.schema.json").read_text())
        cert = construct_moment(2, 3, EvalConfig(grid_points_per_axis=256))
        jsonschema.validate(cert.to_json(), schema)

    def test_frequency_set_schema(self):
        schema = json.loads((DOCS / "frequency_set.schema.json").read_text())
        jsonschema.validate(MOMENT_GEN.to_json(), schema)
        jsonschema.validate(FrequencySet(1, ((0,), (1,), (2,))).to_json(), schema)

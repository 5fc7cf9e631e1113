import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expobs.circle import (
    CIRCLE_DIAM_CAP,
    Certificate,
    PLCircleMap,
    analyze_rotation_case,
    certify,
    circle_power,
    compose_circle,
    conjugate_by_rotation,
    interval_fixed_blocks,
    interval_pipeline,
    interval_power,
    map_identifier,
    parse_certificate,
    parse_circle_map,
    parse_interval_map,
    parse_pl_observable,
    periodic_points,
    property_p_check,
    rotation_number,
    separation_gap,
    serialize_certificate,
    serialize_circle_map,
    serialize_interval_map,
    shift_values,
    verify_certificate,
    wandering_intervals,
)
from expobs.errors import (
    AllFixed,
    InvalidDocument,
    NoPeriodicOrbit,
    NotRigid,
    NotWandering,
    NoWanderingInterval,
)
from expobs.library import (
    m0_circle_document,
    plateau_circle_document,
    reflection_interval_document,
    rigid_rotation_document,
    valley_interval_document,
)


@pytest.fixture(scope="module")
def m0():
    return parse_circle_map(m0_circle_document())


@pytest.fixture(scope="module")
def plateau():
    return parse_circle_map(plateau_circle_document())


def rational_points(count, seed, den=96):
    rng = random.Random(seed)
    return [Fraction(rng.randrange(den), den) for _ in range(count)]


class TestPLCircleMap:
    def test_lift_is_degree_one(self, m0):
        for x in rational_points(20, 1):
            assert m0.eval_lift(x + 1) == m0.eval_lift(x) + 1

    def test_monotone(self, m0):
        pts = sorted(rational_points(20, 2))
        vals = [m0.eval_lift(x) for x in pts]
        assert vals == sorted(vals)

    def test_inverse_lift(self, m0):
        for x in rational_points(30, 3):
            assert m0.inverse_lift(m0.eval_lift(x)) == x

    def test_build_rejects_bad_documents(self):
        with pytest.raises(InvalidDocument):
            parse_circle_map({"breakpoints": ["1/4"], "lift_values": ["0"]})
        with pytest.raises(InvalidDocument):
            parse_circle_map(
                {"breakpoints": ["0", "1/2"], "lift_values": ["1/2", "0"]}
            )
        with pytest.raises(InvalidDocument):
            parse_circle_map({"breakpoints": ["0", "0"], "lift_values": ["0", "0"]})

    def test_document_round_trip(self, m0, plateau):
        for mapping in (m0, plateau):
            assert parse_circle_map(serialize_circle_map(mapping)) == mapping

    def test_map_identifier_is_stable_hex(self, m0):
        a = map_identifier(serialize_circle_map(m0))
        b = map_identifier(serialize_circle_map(m0))
        assert a == b
        assert len(a) == 12
        int(a, 16)


class TestComposition:
    def test_compose_matches_pointwise(self, m0, plateau):
        comp = compose_circle(m0, plateau)
        for x in rational_points(40, 4):
            assert comp.eval_lift(x) == m0.eval_lift(plateau.eval_lift(x))

    def test_power_matches_iteration(self, m0):
        cubed = circle_power(m0, 3)
        for x in rational_points(25, 5):
            assert cubed.eval_lift(x) == m0.eval_lift(m0.eval_lift(m0.eval_lift(x)))

    def test_shift_values(self, m0):
        shifted = shift_values(m0, 2)   # F - 2
        for x in rational_points(10, 6):
            assert shifted.eval_lift(x) == m0.eval_lift(x) - 2


class TestRotationNumber:
    def test_m0_has_fixed_points(self, m0):
        assert rotation_number(m0) == 0

    def test_rigid_three_eighths(self):
        rot = parse_circle_map(rigid_rotation_document("3/8"))
        assert rotation_number(rot) == Fraction(3, 8)

    def test_q_max_cutoff(self):
        rot = parse_circle_map(rigid_rotation_document("5/7"))
        assert rotation_number(rot, q_max=3) is None
        assert rotation_number(rot, q_max=7) == Fraction(5, 7)

    def test_conjugation_invariance(self, m0):
        for c in (Fraction(1, 3), Fraction(5, 8)):
            assert rotation_number(conjugate_by_rotation(m0, c)) == 0


class TestPeriodicStructure:
    def test_m0_fixed_set(self, m0):
        blocks, full = periodic_points(m0, 0, 1)
        assert blocks == ((Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(1, 2)))
        assert not full

    def test_plateau_fixed_block(self, plateau):
        blocks, full = periodic_points(plateau, 0, 1)
        assert blocks == ((Fraction(1, 4), Fraction(1, 2)),)
        assert not full

    def test_wandering_arcs(self, m0, plateau):
        assert wandering_intervals(m0).arcs == (
            (Fraction(0), Fraction(1, 2)),
            (Fraction(1, 2), Fraction(1)),
        )
        assert wandering_intervals(plateau).arcs == (
            (Fraction(1, 2), Fraction(5, 4)),
        )

    def test_rigid_rotation_has_no_arcs(self):
        rot = parse_circle_map(rigid_rotation_document("3/8"))
        with pytest.raises(NoWanderingInterval):
            certify(rot, Fraction(1, 16))

    def test_irrational_like_map_raises(self):
        rot = parse_circle_map(rigid_rotation_document("5/7"))
        with pytest.raises(NoPeriodicOrbit):
            wandering_intervals(rot, q_max=3)


class TestCertify:
    def test_m0_frozen_certificate(self, m0):
        cert = certify(m0, Fraction(1, 16))
        assert cert.q == 1 and cert.p == 0
        assert cert.arc == (Fraction(0), Fraction(1, 2))
        assert cert.probe == (Fraction(11, 48), Fraction(13, 48))
        assert cert.horizon == 1
        assert cert.mode == "contracting"
        assert verify_certificate(cert).ok

    def test_cap_mode(self, m0):
        cert = certify(m0, Fraction(2))
        assert cert.mode == "cap"
        assert cert.horizon == 0
        assert cert.delta >= CIRCLE_DIAM_CAP
        assert verify_certificate(cert).ok

    def test_verify_at_larger_delta(self, m0):
        cert = certify(m0, Fraction(1, 16))
        assert verify_certificate(cert, Fraction(1, 8)).ok
        report = verify_certificate(cert, Fraction(1, 32))
        assert not report.ok
        assert any("smaller" in v for v in report.violations)

    def test_tampered_probe_detected(self, m0):
        cert = certify(m0, Fraction(1, 16))
        bad = Certificate(
            space=cert.space,
            map_document=cert.map_document,
            map_id=cert.map_id,
            delta=cert.delta,
            q=cert.q,
            p=cert.p,
            arc=cert.arc,
            probe=(Fraction(11, 48), Fraction(7, 24)),
            horizon=cert.horizon,
            direction=cert.direction,
            mode=cert.mode,
            trace=cert.trace,
            tail=cert.tail,
        )
        assert not verify_certificate(bad).ok

    def test_tampered_map_id_detected(self, m0):
        cert = certify(m0, Fraction(1, 16))
        doc = serialize_certificate(cert)
        doc["map_id"] = "0" * 12
        assert not verify_certificate(parse_certificate(doc)).ok

    def test_certificate_document_round_trip(self, m0):
        cert = certify(m0, Fraction(1, 16))
        doc = serialize_certificate(cert)
        again = parse_certificate(doc)
        assert again == cert
        assert verify_certificate(again).ok

    def test_dual_threshold_fields(self, m0):
        doc = serialize_certificate(certify(m0, Fraction(1, 16)))
        assert doc["base_delta"] == "1/16"           # q = 1: L^(q-1) = 1
        assert doc["base_map_max_slope"] == "3/2"

    def test_plateau_certalready_wanders(self, plateau):
        cert = certify(plateau, Fraction(1, 16))
        assert cert.q == 1
        assert verify_certificate(cert).ok

    def test_certify_conjugated_map(self, m0):
        moved = conjugate_by_rotation(m0, Fraction(1, 3))
        cert = certify(moved, Fraction(1, 16))
        assert verify_certificate(cert).ok


class TestPropertyP:
    def test_rejects_overlapping_probe(self, m0):
        # g([1/8, 1/4]) = [3/16, 3/8] overlaps [1/8, 1/4]; iterates collide.
        with pytest.raises(NotWandering):
            property_p_check(
                m0,
                (Fraction(0), Fraction(1, 2)),
                (Fraction(1, 8), Fraction(1, 4)),
            )

    def test_disjoint_probe_passes(self, m0):
        result = property_p_check(
            m0,
            (Fraction(0), Fraction(1, 2)),
            (Fraction(1, 8), Fraction(5, 32)),
        )
        assert result["disjoint"]
        assert result["total_length_ok"]
        assert result["fwd_tail_guaranteed"] and result["bwd_tail_guaranteed"]

    def test_probe_must_sit_inside_an_arc(self, m0):
        with pytest.raises(NotWandering):
            property_p_check(
                m0,
                (Fraction(0), Fraction(1, 2)),
                (Fraction(0), Fraction(1, 4)),   # touches the fixed endpoint
            )


class TestSeparationGap:
    def test_identity_observable_gap(self, m0):
        cert = certify(m0, Fraction(1, 16))
        phi = parse_pl_observable({"breakpoints": ["0", "1"], "values": ["0", "1"]})
        gap = separation_gap(cert, phi)
        assert gap == Fraction(1, 48)
        assert gap > 0

    def test_constant_observable_has_no_gap(self, m0):
        cert = certify(m0, Fraction(1, 16))
        phi = parse_pl_observable(
            {"breakpoints": ["0", "1"], "values": ["1/3", "1/3"]}
        )
        assert separation_gap(cert, phi) == 0


class TestRotationCase:
    def test_three_eighths_reproduces_grid_collapse(self):
        rot = parse_circle_map(rigid_rotation_document("3/8"))
        case = analyze_rotation_case(rot)
        assert case.rho == Fraction(3, 8)
        assert case.grid_size == 8
        assert case.e_star == Fraction(1, 8)
        assert case.mesh == Fraction(1, 8)
        assert case.omega_identity
        assert case.quotient_threshold == Fraction(1, 8)
        assert case.single_block
        assert case.identity_chain_match

    def test_non_rigid_map_rejected(self, m0):
        with pytest.raises(NotRigid):
            analyze_rotation_case(m0)


class TestIntervalPipeline:
    def test_valley_yields_verified_certificate(self):
        cert = interval_pipeline(valley_interval_document(), Fraction(1, 16))
        assert cert.space == "interval"
        assert cert.q == 1
        assert verify_certificate(cert).ok
        lo, hi = cert.arc
        assert (lo, hi) in (
            (Fraction(0), Fraction(1, 2)),
            (Fraction(1, 2), Fraction(1)),
        )

    def test_identity_is_all_fixed(self):
        doc = {"space": "interval", "breakpoints": ["0", "1"], "values": ["0", "1"]}
        with pytest.raises(AllFixed) as exc:
            interval_pipeline(doc, Fraction(1, 8))
        assert exc.value.report["power"] == 1

    def test_reflection_squares_to_all_fixed(self):
        with pytest.raises(AllFixed) as exc:
            interval_pipeline(reflection_interval_document(), Fraction(1, 8))
        assert exc.value.report["power"] == 2

    def test_decreasing_document_parses_to_square(self):
        square, power = parse_interval_map(reflection_interval_document())
        assert power == 2
        for x in rational_points(10, 7):
            assert square.eval_lift(x) == x   # reflection squared is the identity

    def test_interval_round_trip(self):
        mapping, power = parse_interval_map(valley_interval_document())
        assert power == 1
        assert parse_interval_map(serialize_interval_map(mapping))[0] == mapping

    def test_fixed_blocks_of_valley(self):
        mapping, _ = parse_interval_map(valley_interval_document())
        blocks = interval_fixed_blocks(mapping)
        assert blocks == (
            (Fraction(0), Fraction(0)),
            (Fraction(1, 2), Fraction(1, 2)),
            (Fraction(1), Fraction(1)),
        )

    def test_interval_power_matches_iteration(self):
        mapping, _ = parse_interval_map(valley_interval_document())
        sq = interval_power(mapping, 2)
        for x in rational_points(12, 8):
            assert sq.eval_lift(x) == mapping.eval_lift(mapping.eval_lift(x))

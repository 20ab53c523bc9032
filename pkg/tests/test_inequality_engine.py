"""Tests for the inequality catalog, grid verifier, and counterexample search."""

import io
import json
import math

import pytest

from meanslab import inequality_engine as eng
from meanslab import scalar_means as sm


def small_grid(case, x_points=60, p_points=17, **kw):
    return eng.default_grid(case, x_points=x_points, p_points=p_points, **kw)


class TestCatalog:
    def test_size_and_statuses(self):
        cat = eng.builtin_catalog()
        assert len(cat) >= 22
        by_status = {}
        for case in cat:
            by_status.setdefault(case.status, []).append(case.name)
        assert len(by_status["proven"]) >= 18
        assert set(by_status["false"]) == {"cand_k_xp", "cand_s_xp", "cand_k_xpp"}
        assert by_status["open"] == ["cand_s_ratio"]

    def test_lookup(self):
        assert eng.lookup("ratio_wp_le_kpl").status == "proven"
        assert eng.lookup("cand_k_xp").status == "false"
        with pytest.raises(KeyError):
            eng.lookup("no_such_case")

    def test_names_unique(self):
        names = eng.case_names()
        assert len(names) == len(set(names))

    def test_regions_are_total(self):
        for case in eng.builtin_catalog():
            for x in (1e-4, 1.0, 1e4):
                for p in (-1.0, 0.0, 0.25, 0.5, 1.0, 2.0):
                    assert case.region(x, p) in (True, False)

    def test_shifted_chain_factory(self):
        for r in (0.25, 0.4, 2.0):
            for case in eng.shifted_chain_cases(r):
                rep = eng.verify(case, small_grid(case))
                assert rep.passed, (r, case.name, rep.max_signed_gap)
        with pytest.raises(eng.ConfigError):
            eng.shifted_chain_cases(0.2)
        # the middle link is an identity at exactly r = 1/4
        middle = eng.shifted_chain_cases(0.25)[1]
        for x in (0.04, 3.0, 900.0):
            assert abs(middle.gap(x, 0.5)) <= 1e-12 * max(1.0, x)


class TestEvaluate:
    def test_named_expressions(self):
        E = eng.EXPRESSIONS
        assert eng.evaluate(E["wyd"], 4.0, 0.5) == pytest.approx(2.25, rel=1e-14)
        assert eng.evaluate(E["kant_pow_logmean"], 1.0, 0.3) == 1.0
        l = sm.log_mean(math.e**2, 1.0)
        assert eng.evaluate(E["logmean_sq"], math.e**2, 0.0) == pytest.approx(
            l * l, rel=1e-14
        )

    def test_expressions_delegate_to_scalar_means(self):
        E = eng.EXPRESSIONS
        x, p = 7.3, 0.37
        assert eng.evaluate(E["ghat"], x, p) == sm.geometric_bound(p, x, 1.0)
        assert eng.evaluate(E["ahat"], x, p) == sm.arithmetic_bound(p, x, 1.0)
        assert eng.evaluate(E["wyd_half"], x, p) == sm.binomial_mean(0.5, x, 1.0)

    def test_reduction_to_unit_second_argument(self):
        # two-argument means reduce to the (x/y, 1) slice by homogeneity
        E = eng.EXPRESSIONS
        pairs = [(8.0, 2.5), (0.3, 7.0), (123.0, 123.0)]
        for x, y in pairs:
            for tag, two_arg in [
                ("arith", sm.arithmetic_mean),
                ("geom", sm.geometric_mean),
                ("harm", sm.harmonic_mean),
                ("logmean", sm.log_mean),
            ]:
                assert y * eng.evaluate(E[tag], x / y, 0.3) == pytest.approx(
                    two_arg(x, y), rel=1e-12
                )
            assert y * eng.evaluate(E["wyd"], x / y, 0.3) == pytest.approx(
                sm.wyd(0.3, x, y), rel=1e-12
            )


class TestGridSpec:
    def test_validation(self):
        with pytest.raises(eng.ConfigError):
            eng.GridSpec(x_min=0.0, x_max=1.0, x_points=5, p_min=0, p_max=1, p_points=5)
        with pytest.raises(eng.ConfigError):
            eng.GridSpec(x_min=2.0, x_max=1.0, x_points=5, p_min=0, p_max=1, p_points=5)
        with pytest.raises(eng.ConfigError):
            eng.GridSpec(x_min=1.0, x_max=2.0, x_points=1, p_min=0, p_max=1, p_points=5)
        with pytest.raises(eng.ConfigError):
            eng.GridSpec(
                x_min=1.0, x_max=2.0, x_points=5, p_min=0, p_max=1, p_points=5,
                tolerance=0.0,
            )
        with pytest.raises(eng.ConfigError):
            eng.GridSpec(
                x_min=1.0, x_max=2.0, x_points=5, p_min=0, p_max=1, p_points=5,
                x_scale="linear",
            )

    def test_values(self):
        g = eng.GridSpec(x_min=1e-2, x_max=1e2, x_points=5, p_min=0, p_max=1, p_points=3)
        assert g.x_values() == pytest.approx([1e-2, 1e-1, 1.0, 1e1, 1e2], rel=1e-12)
        assert g.p_values() == [0.0, 0.5, 1.0]
        assert g.size() == 15


class TestVerify:
    def test_proven_sample_passes(self):
        for name in [
            "basic_l_le_wp",
            "diff_wp_le_shifted_logmean",
            "ratio_wp_le_kpl",
            "wp_le_ahat_outside",
            "ghat_le_kinvw_outside",
            "cube_cross_le_l",
            "lnt_low_le_log",
        ]:
            case = eng.lookup(name)
            rep = eng.verify(case, small_grid(case))
            assert rep.passed, (name, rep.max_signed_gap, rep.argmax)

    def test_false_case_fails_with_witness(self):
        case = eng.lookup("cand_k_xp")
        rep = eng.verify(case, eng.default_grid(case))
        assert not rep.passed
        x, p = rep.argmax
        # reconfirm the witness by direct evaluation
        lhs = sm.wyd(p, x, 1.0)
        rhs = sm.kantorovich(x**p) * sm.log_mean(x, 1.0)
        assert lhs - rhs > 1e-8 * max(1.0, abs(lhs), abs(rhs))

    def test_single_point_grid_at_equality(self):
        grid = eng.GridSpec(
            x_min=1.0, x_max=1.0, x_points=1, p_min=0.3, p_max=0.3, p_points=1
        )
        for case in eng.builtin_catalog():
            if not case.region(1.0, 0.3):
                continue
            rep = eng.verify(case, grid)
            assert rep.samples == 1
            assert abs(rep.max_signed_gap) <= grid.tolerance

    def test_vacuous_region(self):
        case = eng.lookup("wp_le_lsq")  # region x >= 1
        grid = eng.GridSpec(
            x_min=1e-3, x_max=0.5, x_points=8, p_min=0.0, p_max=1.0, p_points=5
        )
        with pytest.raises(eng.VacuousRegionError):
            eng.verify(case, grid)

    def test_skip_accounting(self):
        case = eng.lookup("wp_le_lsq")
        grid = eng.GridSpec(
            x_min=1e-2, x_max=1e2, x_points=9, p_min=0.0, p_max=1.0, p_points=5
        )
        rep = eng.verify(case, grid)
        in_region = sum(1 for x in grid.x_values() if x >= 1.0) * 5
        assert rep.samples == in_region
        assert rep.skipped == grid.size() - in_region

    def test_report_json_contract(self):
        case = eng.lookup("ratio_wp_le_kpl")
        rep = eng.verify(case, small_grid(case))
        text = eng.json_text(rep.to_json_dict())
        parsed = json.loads(text)
        assert set(parsed) == {
            "case", "grid", "max_signed_gap", "argmax", "pass", "samples", "skipped",
        }
        assert parsed["case"] == "ratio_wp_le_kpl"
        assert parsed["pass"] is True
        assert parsed["argmax"]["x"] == rep.argmax[0]
        assert parsed["max_signed_gap"] == rep.max_signed_gap

    def test_boundary_consistency_between_regions(self):
        # the two directions of the WYD / arithmetic-type comparison meet with
        # equality at p = 0 and p = 1/2
        for x in [0.01, 0.5, 3.0, 250.0]:
            for p in [0.0, 0.5]:
                w = sm.wyd(p, x, 1.0)
                a = sm.arithmetic_bound(p, x, 1.0)
                assert abs(w - a) <= 1e-12 * max(1.0, w, a)


class TestSharpness:
    def test_equality_at_one(self):
        # interior p values keep x = 1 as the only equality locus
        case = eng.lookup("ratio_wp_le_kpl")
        grid = eng.GridSpec(
            x_min=1e-2, x_max=1e2, x_points=9, p_min=0.25, p_max=0.75, p_points=9
        )
        rep = eng.sharpness(case, grid)
        assert rep.argmin[0] == pytest.approx(1.0, rel=1e-12)
        assert rep.min_abs_gap <= 1e-12
        for p in grid.p_values():
            assert abs(case.gap(1.0, p)) <= grid.tolerance

    def test_diff_case_half_slice_reduces_to_g_le_l(self):
        # at p = 1/2 the difference-type bound's gap equals G - L
        case = eng.lookup("diff_wp_le_shifted_logmean")
        for x in [0.2, 2.0, 50.0]:
            gap = case.gap(x, 0.5)
            expected = sm.geometric_mean(x, 1.0) - sm.log_mean(x, 1.0)
            assert gap == pytest.approx(expected, rel=1e-10, abs=1e-13)

    def test_zero_slice_of_kantorovich_comparison(self):
        # at p = 0 both sides collapse onto the logarithmic mean
        case = eng.lookup("kinvw_le_ghat_smallp")
        for x in [0.05, 0.8, 17.0]:
            assert case.gap(x, 0.0) == 0.0


class TestSearch:
    def test_finds_known_counterexamples(self):
        for name in ["cand_k_xp", "cand_s_xp", "cand_k_xpp"]:
            case = eng.lookup(name)
            res = eng.search_counterexample(eng.default_search_config(case))
            assert res.found, name
            assert res.evaluations <= 1_000_000
            lhs = eng.evaluate(case.lhs, res.x, res.p)
            rhs = eng.evaluate(case.rhs, res.x, res.p)
            assert lhs - rhs > 1e-8 * max(1.0, abs(lhs), abs(rhs))

    def test_no_witness_for_proven_case(self):
        case = eng.lookup("ratio_wp_le_kpl")
        res = eng.search_counterexample(
            eng.default_search_config(case, x_points=128, p_points=33)
        )
        assert not res.found
        assert res.rel_gap <= 1e-8

    def test_open_case_reports_gap_only(self):
        case = eng.lookup("cand_s_ratio")
        cfg = eng.SearchConfig(
            case=case,
            coarse=eng.GridSpec(
                x_min=1e-4, x_max=1e4, x_points=128,
                p_min=1e-3, p_max=1.0 - 1e-3, p_points=33,
                tolerance=1e-8,
            ),
            budget=10_000,
        )
        res = eng.search_counterexample(cfg)
        # no violation; the refined optimum sits at the x -> 1 equality locus
        # where the true gap vanishes, so only sub-tolerance noise remains
        assert not res.found
        assert res.rel_gap <= 1e-8
        assert res.to_json_dict() == {"found": False, "max_gap": res.rel_gap}
        # away from the equality loci the observed gap is genuinely negative
        # (100 points over 8 decades place no grid point at x = 1 exactly)
        interior = eng.GridSpec(
            x_min=1e-4, x_max=1e4, x_points=100,
            p_min=5e-4, p_max=1.0 - 5e-4, p_points=100,
        )
        rep = eng.verify(case, interior)
        assert rep.max_signed_gap < 0.0

    def test_determinism(self):
        case = eng.lookup("cand_k_xp")
        cfg = eng.default_search_config(case, seed=13)
        r1 = eng.search_counterexample(cfg)
        r2 = eng.search_counterexample(cfg)
        assert r1 == r2
        assert eng.json_text(r1.to_json_dict()) == eng.json_text(r2.to_json_dict())

    def test_budget_must_cover_coarse_grid(self):
        case = eng.lookup("cand_k_xp")
        grid = eng.GridSpec(
            x_min=1e-2, x_max=1e2, x_points=100, p_min=0.0, p_max=1.0, p_points=100
        )
        with pytest.raises(eng.ConfigError):
            eng.SearchConfig(case=case, coarse=grid, budget=9_999)

    def test_budget_is_respected(self):
        case = eng.lookup("cand_s_ratio")
        grid = eng.GridSpec(
            x_min=1e-2, x_max=1e2, x_points=50, p_min=0.01, p_max=0.99, p_points=20
        )
        cfg = eng.SearchConfig(case=case, coarse=grid, budget=1_000)
        res = eng.search_counterexample(cfg)
        assert res.evaluations <= 1_000


class TestNoOrdering:
    WIDE = eng.GridSpec(
        x_min=1e-4, x_max=1e4, x_points=400, p_min=0.0, p_max=1.0, p_points=2
    )

    def test_p_three_quarters(self):
        rep = eng.no_ordering_witness(0.75, self.WIDE)
        assert rep.found
        x_pos, g_pos = rep.positive
        x_neg, g_neg = rep.negative
        assert g_pos > 0 and g_neg < 0
        # the positive-gap region contains x = e, matching the sign of the
        # log-gap function there
        e = math.e
        gap_at_e = sm.geometric_bound(0.75, e, 1.0) - sm.kantorovich(e) ** (
            -0.75 * 0.25
        ) * sm.wyd(0.75, e, 1.0)
        assert gap_at_e > 0
        assert sm.ghat_kantorovich_log_gap(0.75, e) > 0
        assert sm.ghat_kantorovich_log_gap(0.75, x_pos) > 0
        assert x_neg > x_pos

    def test_p_barely_above_half(self):
        # the closer p sits to 1/2 the further out the sign change moves;
        # at p = 0.51 it is near x ~ 1e31
        grid = eng.GridSpec(
            x_min=1.0, x_max=1e34, x_points=600, p_min=0.51, p_max=0.51, p_points=1
        )
        rep = eng.no_ordering_witness(0.51, grid)
        assert rep.found
        assert rep.positive[1] > 0 > rep.negative[1]

    def test_domain(self):
        for bad in [0.5, 1.0, 0.3, 1.2]:
            with pytest.raises(sm.DomainError):
                eng.no_ordering_witness(bad, self.WIDE)


class TestEmitCsv:
    def grid_10x10(self):
        return eng.GridSpec(
            x_min=1e-1, x_max=1e1, x_points=10, p_min=0.0, p_max=1.0, p_points=10
        )

    def test_header_and_row_count(self):
        sink = io.StringIO()
        rows = eng.emit_csv(eng.lookup("ratio_wp_le_kpl"), self.grid_10x10(), sink)
        lines = sink.getvalue().splitlines()
        assert lines[0] == "x,p,lhs,rhs,gap"
        assert rows == 100
        assert len(lines) == 101

    def test_region_filter(self):
        sink = io.StringIO()
        rows = eng.emit_csv(eng.lookup("wp_le_lsq"), self.grid_10x10(), sink)
        xs = self.grid_10x10().x_values()
        assert rows == sum(1 for x in xs if x >= 1.0) * 10

    def test_binary_sink_and_determinism(self):
        case = eng.lookup("diff_wp_le_shifted_logmean")
        b1, b2 = io.BytesIO(), io.BytesIO()
        eng.emit_csv(case, self.grid_10x10(), b1)
        eng.emit_csv(case, self.grid_10x10(), b2)
        assert b1.getvalue() == b2.getvalue()
        assert b1.getvalue().startswith(b"x,p,lhs,rhs,gap\n")

    def test_values_round_trip(self):
        sink = io.StringIO()
        case = eng.lookup("basic_g_le_l")
        eng.emit_csv(case, self.grid_10x10(), sink)
        for line in sink.getvalue().splitlines()[1:3]:
            x, p, lhs, rhs, gap = map(float, line.split(","))
            assert lhs == eng.evaluate(case.lhs, x, p)
            assert rhs == eng.evaluate(case.rhs, x, p)
            assert gap == lhs - rhs


class TestJsonText:
    def test_round_trip_17_digits(self):
        values = [math.pi, 1e-300, 3.0, -2.5e17, 0.1]
        text = eng.json_text({"v": values, "b": True, "n": None, "s": 'a"b'})
        parsed = json.loads(text)
        assert parsed["v"] == values
        assert parsed["b"] is True
        assert parsed["n"] is None
        assert parsed["s"] == 'a"b'

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            eng.json_text(math.inf)

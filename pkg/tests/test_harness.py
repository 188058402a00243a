"""Tests for the experiment harness: statistics, experiments, reports."""
import json
import math
import warnings

import numpy as np
import pytest
import scipy.stats

from gxtr.asymptotics import ConstantProvider, gumbel_cdf
from gxtr.errors import (ConfigError, ConfigurationWarning, ParameterError,
                         ReportIOError, UnresolvedConstantError)
from gxtr.harness import (GumbelRow, TailExperimentReport, TailRow,
                          _window_max_rows, ks_statistic, parse_run_config,
                          report_to_csv, report_to_json, run_gumbel_experiment,
                          run_tail_experiment, wilson_interval, write_report)
from gxtr.model import (FbmMixture, GridSpec, StationaryCovariance, Storage,
                        parse_model_config)
from gxtr.simulate import RngStream

GAUSS_CONFIG = "kind = stationary_covariance\nr = gauss"
BROWNIAN_MIX_CONFIG = "kind = fbm_mixture\nlambdas = 1\nhursts = 0.5"
# Shepp field of Brownian motion reduces to the all-equal regime, whose
# constant has no closed form; 1.103 is a Monte Carlo estimate.
BROWNIAN_MIXED_KEY = "mixed(alpha=1,a1=0.5,a2=0.5,a3=0.5,b=0.5)"
BROWNIAN_MIXED_VALUE = 1.103


# ---------------------------------------------------------------------------
# ks_statistic


class TestKsStatistic:

    def test_hand_case_uniform(self):
        # sorted [0.25, 0.75] vs identity cdf: both one-sided gaps are 0.25
        assert ks_statistic([0.75, 0.25], lambda x: x) == pytest.approx(0.25)

    def test_near_perfect_gumbel_quantiles(self):
        n = 100
        q = (np.arange(1, n + 1) - 0.5) / n
        x = -np.log(-np.log(q))
        d = ks_statistic(x, gumbel_cdf)
        assert d == pytest.approx(0.5 / n, abs=1e-12)

    def test_degenerate_sample_all_zeros(self):
        d = ks_statistic(np.zeros(10), gumbel_cdf)
        assert d == pytest.approx(1.0 - math.exp(-1.0), rel=1e-12)

    def test_single_point_at_median(self):
        cdf = lambda x: np.full(np.asarray(x).shape, 0.5)
        assert ks_statistic([1.7], cdf) == pytest.approx(0.5)

    def test_matches_scipy_kstest(self):
        rng = np.random.default_rng(7)
        sample = rng.standard_normal(257)
        mine = ks_statistic(sample, scipy.stats.norm.cdf)
        ref = scipy.stats.kstest(sample, scipy.stats.norm.cdf).statistic
        assert mine == pytest.approx(float(ref), abs=1e-15)

    def test_empty_sample_rejected(self):
        with pytest.raises(ParameterError):
            ks_statistic([], gumbel_cdf)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_non_finite_entries_rejected(self, bad):
        with pytest.raises(ParameterError):
            ks_statistic([0.1, bad, 0.3], gumbel_cdf)


# ---------------------------------------------------------------------------
# wilson_interval


class TestWilsonInterval:

    @pytest.mark.parametrize("k,n", [(0, 10), (3, 10), (5, 10), (10, 10),
                                     (1, 1000), (999, 1000)])
    def test_brackets_point_estimate(self, k, n):
        lo, hi = wilson_interval(k, n)
        assert 0.0 <= lo <= k / n <= hi <= 1.0
        assert lo < hi

    def test_boundary_counts_clamp(self):
        lo, _ = wilson_interval(0, 25)
        _, hi = wilson_interval(25, 25)
        assert lo == 0.0
        assert hi == 1.0

    def test_rule_of_one(self):
        # k=0, n=1 collapses to [0, z^2 / (1 + z^2)]
        z = 1.959963984540054
        lo, hi = wilson_interval(0, 1)
        assert lo == 0.0
        assert hi == pytest.approx(z * z / (1.0 + z * z), rel=1e-12)

    def test_complement_symmetry(self):
        lo, hi = wilson_interval(7, 40)
        lo2, hi2 = wilson_interval(33, 40)
        assert lo2 == pytest.approx(1.0 - hi, abs=1e-12)
        assert hi2 == pytest.approx(1.0 - lo, abs=1e-12)

    def test_narrows_with_sample_size(self):
        lo1, hi1 = wilson_interval(5, 10)
        lo2, hi2 = wilson_interval(500, 1000)
        assert hi2 - lo2 < hi1 - lo1

    @pytest.mark.parametrize("k,n", [(-1, 10), (11, 10), (0, 0)])
    def test_validation(self, k, n):
        with pytest.raises(ParameterError):
            wilson_interval(k, n)


# ---------------------------------------------------------------------------
# windowed increment maxima


def _brute_window_max(paths, n_s, n_t):
    paths = np.atleast_2d(np.asarray(paths, dtype=float))
    out = np.empty(paths.shape[0])
    for r, row in enumerate(paths):
        best = -np.inf
        for i in range(n_s):
            for j in range(n_t):
                best = max(best, row[i + j] - row[i])
        out[r] = best
    return out


class TestWindowMaxRows:

    @pytest.mark.parametrize("n_s,n_t", [(8, 1), (8, 2), (5, 5), (1, 6),
                                         (12, 4)])
    def test_matches_double_loop(self, n_s, n_t):
        rng = np.random.default_rng(5 * n_s + n_t)
        paths = rng.standard_normal((3, n_s + n_t - 1))
        got = _window_max_rows(paths, n_s, n_t)
        want = _brute_window_max(paths, n_s, n_t)
        assert np.array_equal(got, want)

    def test_window_of_one_is_zero(self):
        # j < 1 leaves only the trivial increment path[i] - path[i]
        paths = np.random.default_rng(0).standard_normal((4, 9))
        assert np.array_equal(_window_max_rows(paths, 9, 1), np.zeros(4))


# ---------------------------------------------------------------------------
# tail experiment


def _gauss_region():
    return GridSpec(origin=(0.0, 0.0), step=(0.05, 0.05), count=(41, 11))


class TestTailExperimentValidation:

    def test_zero_reps(self):
        model = parse_model_config(GAUSS_CONFIG)
        with pytest.raises(ParameterError, match="reps"):
            run_tail_experiment(model, _gauss_region(), [2.0], 0, RngStream(1))

    @pytest.mark.parametrize("u", [[], [-1.0], [0.0], [2.0, -0.5]])
    def test_bad_thresholds(self, u):
        model = parse_model_config(GAUSS_CONFIG)
        with pytest.raises(ParameterError, match="positive"):
            run_tail_experiment(model, _gauss_region(), u, 10, RngStream(1))

    def test_missing_stream(self):
        model = parse_model_config(GAUSS_CONFIG)
        with pytest.raises(ParameterError, match="RngStream"):
            run_tail_experiment(model, _gauss_region(), [2.0], 10, None)

    def test_increment_model_needs_2d_region(self):
        model = parse_model_config(GAUSS_CONFIG)
        region = GridSpec(origin=0.0, step=0.05, count=41)
        with pytest.raises(ParameterError, match="2-D"):
            run_tail_experiment(model, region, [2.0], 10, RngStream(1))

    def test_unequal_steps_rejected(self):
        model = parse_model_config(GAUSS_CONFIG)
        region = GridSpec(origin=(0.0, 0.0), step=(0.05, 0.04), count=(41, 11))
        with pytest.raises(ParameterError, match="equal"):
            run_tail_experiment(model, region, [2.0], 10, RngStream(1))

    def test_shifted_origin_rejected(self):
        model = parse_model_config(GAUSS_CONFIG)
        region = GridSpec(origin=(0.1, 0.0), step=(0.05, 0.05), count=(41, 11))
        with pytest.raises(ParameterError, match="origin"):
            run_tail_experiment(model, region, [2.0], 10, RngStream(1))

    def test_degenerate_extent_rejected(self):
        model = parse_model_config(GAUSS_CONFIG)
        region = GridSpec(origin=(0.0, 0.0), step=(0.05, 0.05), count=(1, 11))
        with pytest.raises(ParameterError, match="extent"):
            run_tail_experiment(model, region, [2.0], 10, RngStream(1))

    def test_unresolved_constant_surfaces_before_sampling(self):
        # exp_alpha at alpha=1 lands in the all-equal regime, which needs an
        # injected constant; the theory column is evaluated first
        model = parse_model_config(
            "kind = stationary_covariance\nr = exp_alpha\nalpha = 1")
        with pytest.raises(UnresolvedConstantError):
            run_tail_experiment(model, _gauss_region(), [2.0], 10**6,
                                RngStream(1))

    def test_storage_rejects_2d_region(self):
        with pytest.raises(ParameterError, match="1-D"):
            run_tail_experiment(Storage(hurst=0.4, c=1.0), _gauss_region(),
                                [1.5], 10, RngStream(1))

    def test_storage_rejects_single_point(self):
        region = GridSpec(origin=0.0, step=1e-3, count=1)
        with pytest.raises(ParameterError, match="extent"):
            run_tail_experiment(Storage(hurst=0.4, c=1.0), region, [1.5], 10,
                                RngStream(1))

    def test_storage_needs_fractional_pickands(self):
        region = GridSpec(origin=0.0, step=1e-3, count=2001)
        with pytest.raises(UnresolvedConstantError) as exc:
            run_tail_experiment(Storage(hurst=0.4, c=1.0), region, [1.5],
                                4000, RngStream(1))
        assert exc.value.constant == "pickands(alpha=0.8)"


@pytest.fixture(scope="module")
def report():
    model = parse_model_config(GAUSS_CONFIG)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        return run_tail_experiment(model, _gauss_region(), [1.0, 1.5], 400,
                                   RngStream(11))


class TestTailExperimentSmoke:

    def test_report_header(self, report):
        assert report.model_kind == "StationaryCovariance"
        assert report.variant == "one_sided"
        assert report.S == pytest.approx(2.0)
        assert report.T == pytest.approx(0.5)
        assert report.reps == 400
        # increment variance at lag T is 2(1 - r(T)) for r(t) = e^{-t^2}
        sigma = math.sqrt(2.0 * (1.0 - math.exp(-0.25)))
        assert report.sigma_T == pytest.approx(sigma, rel=1e-12)

    def test_rows_are_coherent(self, report):
        assert [r.u for r in report.rows] == [1.0, 1.5]
        for row in report.rows:
            assert 0 <= row.count <= report.reps
            assert row.empirical == row.count / report.reps
            assert row.ci_low <= row.empirical <= row.ci_high
            assert row.theory > 0
            assert row.ratio == pytest.approx(row.empirical / row.theory,
                                              rel=1e-15)
            assert row.u_normalized == pytest.approx(row.u / report.sigma_T,
                                                     rel=1e-12)

    def test_counts_and_theory_decrease_in_u(self, report):
        r1, r2 = report.rows
        assert r1.count >= r2.count
        assert r1.theory > r2.theory

    def test_mapped_params_recorded(self, report):
        # r(t) = e^{-t^2} is twice differentiable at 0: local exponent 2
        assert report.mapped_params.alpha1 == pytest.approx(2.0)

    def test_rerun_same_seed_byte_identical(self, report):
        model = parse_model_config(GAUSS_CONFIG)
        again = run_tail_experiment(model, _gauss_region(), [1.0, 1.5], 400,
                                    RngStream(11))
        assert report_to_json(again) == report_to_json(report)

    def test_sparse_exceedances_warn(self):
        model = parse_model_config(GAUSS_CONFIG)
        with pytest.warns(ConfigurationWarning, match="expected exceedances"):
            run_tail_experiment(model, _gauss_region(), [2.0], 400,
                                RngStream(12))


class TestTailStepInvariance:

    def test_ratio_stable_under_step_halving(self):
        # discretization bias is mildest for twice-differentiable covariances,
        # so halving the step must not move the ratio beyond the CI noise
        model = parse_model_config(GAUSS_CONFIG)
        coarse = GridSpec(origin=(0.0, 0.0), step=(0.08, 0.08), count=(26, 8))
        fine = GridSpec(origin=(0.0, 0.0), step=(0.04, 0.04), count=(51, 15))
        r1 = run_tail_experiment(model, coarse, [1.2], 1500,
                                 RngStream(21)).rows[0]
        r2 = run_tail_experiment(model, fine, [1.2], 1500,
                                 RngStream(22)).rows[0]
        w1 = (r1.ci_high - r1.ci_low) / r1.theory
        w2 = (r2.ci_high - r2.ci_low) / r2.theory
        assert abs(r1.ratio - r2.ratio) <= w1 + w2


class TestStorageTailExperiment:

    def test_overflow_ratio_in_band(self):
        provider = ConstantProvider().inject("pickands(alpha=0.8)", 1.25)
        region = GridSpec(origin=0.0, step=1e-3, count=2001)
        report = run_tail_experiment(Storage(hurst=0.4, c=1.0), region, [1.5],
                                     4000, RngStream(21), provider=provider)
        assert report.model_kind == "Storage"
        assert report.variant == "two_sided"
        assert report.S == pytest.approx(2.0)
        assert report.sigma_T == 1.0
        assert report.mapped_params.alpha1 == pytest.approx(0.8)
        row = report.rows[0]
        assert row.u_normalized == row.u
        assert row.ci_low <= row.empirical <= row.ci_high
        assert 0.5 <= row.ratio <= 1.4


# ---------------------------------------------------------------------------
# gumbel experiment


class TestGumbelExperimentValidation:

    def _mix(self):
        return parse_model_config(BROWNIAN_MIX_CONFIG)

    @pytest.mark.parametrize("ladder", [[], [1.0, 20.0], [0.5], [20.0, 20.0],
                                        [50.0, 20.0]])
    def test_bad_ladders(self, ladder):
        with pytest.raises(ParameterError):
            run_gumbel_experiment(self._mix(), ladder, 1.0, 200, "theory",
                                  RngStream(1))

    def test_too_few_replications(self):
        with pytest.raises(ParameterError, match="at least 100"):
            run_gumbel_experiment(self._mix(), [20.0], 1.0, 99, "theory",
                                  RngStream(1))

    def test_unknown_norming_source(self):
        with pytest.raises(ParameterError, match="norming_source"):
            run_gumbel_experiment(self._mix(), [20.0], 1.0, 200, "plugin",
                                  RngStream(1))

    @pytest.mark.parametrize("T,d0", [(0.0, 0.05), (-1.0, 0.05), (1.0, 0.0),
                                      (1.0, -0.1)])
    def test_nonpositive_scales(self, T, d0):
        with pytest.raises(ParameterError, match="positive"):
            run_gumbel_experiment(self._mix(), [20.0], T, 200, "theory",
                                  RngStream(1), d0=d0)

    def test_missing_stream(self):
        with pytest.raises(ParameterError, match="RngStream"):
            run_gumbel_experiment(self._mix(), [20.0], 1.0, 200, "theory",
                                  None)

    def test_theory_source_needs_constant(self):
        with pytest.raises(UnresolvedConstantError):
            run_gumbel_experiment(self._mix(), [20.0], 1.0, 200, "theory",
                                  RngStream(1))


@pytest.fixture(scope="module")
def theory_report():
    model = parse_model_config(BROWNIAN_MIX_CONFIG)
    provider = ConstantProvider().inject(BROWNIAN_MIXED_KEY,
                                         BROWNIAN_MIXED_VALUE)
    return run_gumbel_experiment(model, [20.0, 50.0], 1.0, 300, "theory",
                                 RngStream(31), provider=provider)


class TestGumbelExperimentSmoke:

    def test_report_header(self, theory_report):
        assert theory_report.model_kind == "FbmMixture"
        assert theory_report.norming_source == "theory"
        assert theory_report.bs_shift == 0.0
        assert theory_report.fitted_log_k is None
        assert len(theory_report.rows) == 2

    def test_norming_columns(self, theory_report):
        for row in theory_report.rows:
            a = math.sqrt(2.0 * math.log(row.S))
            assert row.a_S == pytest.approx(a, rel=1e-14)
            # all-equal regime: K is the injected constant and p = 2, so
            # omega = ln(K a_S / sqrt(2 pi))
            omega = math.log(BROWNIAN_MIXED_VALUE * a / math.sqrt(2 * math.pi))
            assert row.omega_S == pytest.approx(omega, rel=1e-12)
            assert row.b_S == pytest.approx(a + omega / a, rel=1e-12)
            assert row.step == pytest.approx(0.05 / (a * a), rel=1e-12)
            assert row.reps == 300

    def test_ks_small_and_improving(self, theory_report):
        ks = [row.ks for row in theory_report.rows]
        assert all(0.0 < k < 0.25 for k in ks)
        assert ks[1] < ks[0]
        assert ks[1] < 0.15

    def test_fitted_constant_source(self):
        model = parse_model_config(BROWNIAN_MIX_CONFIG)
        report = run_gumbel_experiment(model, [20.0, 50.0], 1.0, 300,
                                       "fitted-constant", RngStream(31))
        assert report.norming_source == "fitted-constant"
        assert report.fitted_log_k is not None
        assert math.isfinite(report.fitted_log_k)
        assert all(row.ks < 0.2 for row in report.rows)

    def test_single_entry_ladder(self):
        model = parse_model_config(BROWNIAN_MIX_CONFIG)
        report = run_gumbel_experiment(model, [20.0], 1.0, 300,
                                       "fitted-constant", RngStream(31))
        assert len(report.rows) == 1
        # the constant was fitted on this very sample, so the fit is tight
        assert report.rows[0].ks < 0.1

    def test_location_fault_blows_up_ks(self, theory_report):
        model = parse_model_config(BROWNIAN_MIX_CONFIG)
        provider = ConstantProvider().inject(BROWNIAN_MIXED_KEY,
                                             BROWNIAN_MIXED_VALUE)
        shifted = run_gumbel_experiment(model, [50.0], 1.0, 300, "theory",
                                        RngStream(31), provider=provider,
                                        inject_bs_shift=1.0)
        assert shifted.bs_shift == 1.0
        clean_ks = theory_report.rows[1].ks
        assert shifted.rows[0].ks > 0.5
        assert shifted.rows[0].ks > clean_ks + 0.3


class TestGumbelLocationScaleInvariance:

    def test_normalized_sample_is_transform_invariant(self):
        # a_S (m - b_S) is unchanged when maxima and norming undergo the
        # same affine map: m' = c m + d, b' = c b + d, a' = a / c
        rng = np.random.default_rng(77)
        maxima = 3.0 + 0.4 * rng.standard_normal(500)
        a, b = 2.8971, 3.05
        c, d = 1.7, -0.3
        x = a * (maxima - b)
        x2 = (a / c) * ((c * maxima + d) - (c * b + d))
        k1 = ks_statistic(x, gumbel_cdf)
        k2 = ks_statistic(x2, gumbel_cdf)
        assert np.max(np.abs(x - x2)) < 1e-12
        assert k2 == pytest.approx(k1, abs=1e-12)


# ---------------------------------------------------------------------------
# run configuration


class TestParseRunConfig:

    def test_tail_config_roundtrip(self):
        cfg = parse_run_config(
            "experiment = tail\n"
            "model.kind = stationary_covariance\n"
            "model.r = gauss\n"
            "u = 2.5, 3, 3.5\n"
            "step = 0.05\n"
            "S = 2\n"
            "T = 0.5\n")
        assert cfg.experiment == "tail"
        assert isinstance(cfg.model, StationaryCovariance)
        assert cfg.u == (2.5, 3.0, 3.5)
        assert cfg.step == 0.05
        assert cfg.S == 2.0
        assert cfg.T == 0.5
        assert cfg.reps == 10000
        assert cfg.seed is None
        assert cfg.norming_source == "theory"
        assert cfg.horizon_mult == 10.0

    def test_gumbel_config_roundtrip(self):
        cfg = parse_run_config(
            "experiment = gumbel\n"
            "model.kind = fbm_mixture\n"
            "model.lambdas = 1\n"
            "model.hursts = 0.5\n"
            "s_ladder = 20, 80, 200\n"
            "reps = 2000\n"
            "seed = 7\n"
            "norming_source = fitted-constant\n")
        assert cfg.experiment == "gumbel"
        assert isinstance(cfg.model, FbmMixture)
        assert cfg.s_ladder == (20.0, 80.0, 200.0)
        assert cfg.reps == 2000
        assert cfg.seed == 7
        assert cfg.d0 == 0.05
        assert cfg.norming_source == "fitted-constant"

    def test_missing_model_keys(self):
        with pytest.raises(ConfigError, match="model"):
            parse_run_config("experiment = tail\nu = 3\n")

    def test_unknown_keys_listed(self):
        with pytest.raises(ConfigError, match="colour, speed"):
            parse_run_config(
                "experiment = tail\n"
                "model.kind = storage\n"
                "model.hurst = 0.4\n"
                "model.c = 1\n"
                "speed = 9\n"
                "colour = red\n")

    def test_bad_experiment(self):
        with pytest.raises(ConfigError, match="experiment"):
            parse_run_config(
                "experiment = scan\n"
                "model.kind = storage\nmodel.hurst = 0.4\nmodel.c = 1\n")

    @pytest.mark.parametrize("line", ["reps = 2.5", "reps = -3", "reps = 0",
                                      "seed = -1", "seed = 1.5",
                                      "u = 3, apple"])
    def test_bad_values(self, line):
        with pytest.raises(ConfigError):
            parse_run_config(
                "experiment = tail\n"
                "model.kind = storage\nmodel.hurst = 0.4\nmodel.c = 1\n"
                + line + "\n")


# ---------------------------------------------------------------------------
# report serialization


def _tiny_tail_report(theory=0.02):
    row = TailRow(u=3.0, u_normalized=3.0, count=7, empirical=0.07,
                  ci_low=0.03, ci_high=0.14, theory=theory, ratio=3.5)
    return TailExperimentReport(model_kind="Storage", S=2.0, T=10.0,
                                sigma_T=1.0, reps=100, rows=(row,),
                                mapped_params=None, variant="two_sided")


class TestReportSerialization:

    def test_json_is_canonical(self):
        text = report_to_json(_tiny_tail_report())
        assert text.endswith("\n")
        data = json.loads(text)
        canon = json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"
        assert text == canon

    def test_json_roundtrip_recovers_numbers(self):
        data = json.loads(report_to_json(_tiny_tail_report(theory=0.1)))
        row = data["rows"][0]
        assert row["theory"] == 0.1
        assert row["count"] == 7
        assert data["S"] == 2.0

    def test_json_rejects_non_finite(self):
        with pytest.raises(ReportIOError, match="non-finite"):
            report_to_json(_tiny_tail_report(theory=float("nan")))

    def test_tail_csv_layout(self):
        text = report_to_csv(_tiny_tail_report(theory=0.1))
        lines = text.splitlines()
        assert lines[0] == ("u,u_normalized,count,empirical,ci_low,ci_high,"
                            "theory,ratio")
        assert len(lines) == 2
        cells = lines[1].split(",")
        assert cells[2] == "7"
        # floats carry 17 significant digits so parsing is lossless
        assert cells[6] == "0.10000000000000001"
        assert float(cells[6]) == 0.1

    def test_gumbel_csv_layout(self):
        row = GumbelRow(S=20.0, step=0.01, reps=300, a_S=2.44, b_S=2.47,
                        omega_S=0.07, ks=0.15)
        report = type("R", (), {"rows": (row, row)})()
        lines = report_to_csv(report).splitlines()
        assert lines[0] == "S,step,reps,a_S,b_S,omega_S,ks"
        assert len(lines) == 3

    def test_csv_needs_rows(self):
        report = type("R", (), {"rows": ()})()
        with pytest.raises(ReportIOError, match="no rows"):
            report_to_csv(report)

    def test_csv_unknown_row_type(self):
        report = type("R", (), {"rows": (object(),)})()
        with pytest.raises(ReportIOError, match="row type"):
            report_to_csv(report)

    def test_write_report_json(self, tmp_path):
        path = tmp_path / "report.json"
        write_report(_tiny_tail_report(), path)
        assert path.read_text() == report_to_json(_tiny_tail_report())

    def test_write_report_csv(self, tmp_path):
        path = tmp_path / "report.csv"
        write_report(_tiny_tail_report(), path, format="csv")
        assert path.read_text() == report_to_csv(_tiny_tail_report())

    def test_write_report_deterministic(self, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        write_report(_tiny_tail_report(), p1)
        write_report(_tiny_tail_report(), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_write_report_bad_format(self, tmp_path):
        with pytest.raises(ParameterError, match="format"):
            write_report(_tiny_tail_report(), tmp_path / "r.xml", format="xml")

    def test_write_report_bad_path(self, tmp_path):
        missing = tmp_path / "nodir" / "report.json"
        with pytest.raises(ReportIOError, match="nodir"):
            write_report(_tiny_tail_report(), missing)

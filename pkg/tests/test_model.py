"""Regime classification, model catalog, local expansions and probes."""

import math

import numpy as np
import pytest

from gxtr.errors import (ConfigError, ModelError, ParameterError)
from gxtr.model import (BUILTIN_COVARIANCES, FbmMixture, GridSpec,
                        IntegratedStationary, LocalExpansion, Regime,
                        RegimeParams, StationaryCovariance,
                        StationaryIncrementVariogram, Storage,
                        classify_regime, local_expansion,
                        make_builtin_covariance, mapped_regime_params,
                        parse_config_text, parse_model_config,
                        shepp_correlation, shepp_covariance,
                        validate_local_expansion, variogram_to_covariance,
                        weak_dependence_probe)


def params(alpha1, alpha2, beta, a1=1.0, a2=1.0, a3=1.0, b=1.0):
    return RegimeParams(alpha1=alpha1, alpha2=alpha2, beta=beta,
                        a1=a1, a2=a2, a3=a3, b=b)


# ---------------------------------------------------------------------------
# classification


CLASSIFICATION_CASES = [
    # beta strictly above both exponents
    ((1.0, 1.0, 2.0), Regime.BetaDominates),
    ((2.0, 1.5, 2.5), Regime.BetaDominates),
    ((0.5, 2.0, 2.0 + 1e-12), Regime.BetaDominates),
    # full three-way tie
    ((1.0, 1.0, 1.0), Regime.AllEqual),
    ((1.7, 1.7, 1.7), Regime.AllEqual),
    # beta ties the larger exponent
    ((1.0, 2.0, 2.0), Regime.BetaEqA2GtA1),
    ((2.0, 1.0, 2.0), Regime.BetaEqA1GtA2),
    # beta strictly below a tie
    ((1.5, 1.5, 1.0), Regime.BetaLtA2EqA1),
    # beta strictly below the strict maximum
    ((1.0, 2.0, 0.5), Regime.BetaLtA2A1LtA2),
    ((2.0, 1.0, 0.5), Regime.BetaLtA1A2LtA1),
    # beta below the larger but tying or above the smaller exponent:
    # the strict-inequality cases absorb these orderings
    ((2.0, 1.0, 1.0), Regime.BetaLtA1A2LtA1),
    ((1.0, 2.0, 1.0), Regime.BetaLtA2A1LtA2),
    ((2.0, 1.0, 1.5), Regime.BetaLtA1A2LtA1),
]


@pytest.mark.parametrize("exponents,regime", CLASSIFICATION_CASES)
def test_classification_lattice(exponents, regime):
    assert classify_regime(params(*exponents)) is regime


def test_classification_uses_exact_equality():
    eps = 1e-12
    assert classify_regime(params(1.0, 1.0, 1.0)) is Regime.AllEqual
    assert classify_regime(params(1.0, 1.0, 1.0 + eps)) is Regime.BetaDominates
    assert classify_regime(params(1.0, 1.0, 1.0 - eps)) is Regime.BetaLtA2EqA1


@pytest.mark.parametrize("bad", [
    dict(alpha1=0.0), dict(alpha1=2.5), dict(alpha2=-1.0),
    dict(alpha2=math.nan), dict(beta=0.0), dict(beta=-2.0),
    dict(a1=0.0), dict(a2=-1.0), dict(a3=0.0), dict(b=0.0),
    dict(b=math.inf),
])
def test_regime_params_domain(bad):
    kwargs = dict(alpha1=1.0, alpha2=1.0, beta=1.0, a1=1.0, a2=1.0,
                  a3=1.0, b=1.0)
    kwargs.update(bad)
    with pytest.raises(ParameterError):
        RegimeParams(**kwargs)


def test_negative_a3_is_valid():
    p = params(1.5, 1.0, 0.5, a3=-2.0)
    assert classify_regime(p) is Regime.BetaLtA1A2LtA1


# ---------------------------------------------------------------------------
# grids


def test_grid_1d_geometry():
    g = GridSpec(origin=-1.0, step=0.5, count=5)
    assert g.ndim == 1
    assert g.total == 5
    assert g.extent == pytest.approx(2.0)
    assert np.allclose(g.axis(), [-1.0, -0.5, 0.0, 0.5, 1.0])
    with pytest.raises(ParameterError):
        g.axis(1)


def test_grid_2d_geometry():
    g = GridSpec(origin=(0.0, 0.0), step=(0.5, 0.25), count=(3, 5))
    assert g.ndim == 2
    assert g.total == 15
    assert g.extent == (1.0, 1.0)
    assert np.allclose(g.axis(0), [0.0, 0.5, 1.0])
    assert np.allclose(g.axis(1), [0.0, 0.25, 0.5, 0.75, 1.0])


@pytest.mark.parametrize("kwargs", [
    dict(origin=0.0, step=0.5, count=(3, 3)),
    dict(origin=0.0, step=0.0, count=3),
    dict(origin=0.0, step=-1.0, count=3),
    dict(origin=0.0, step=0.5, count=0),
    dict(origin=0.0, step=0.5, count=2.5),
    dict(origin=(0.0, 0.0), step=(0.5, 0.5), count=(3, 0)),
])
def test_grid_rejects_bad_shapes(kwargs):
    with pytest.raises(ParameterError):
        GridSpec(**kwargs)


# ---------------------------------------------------------------------------
# builtin covariances


@pytest.mark.parametrize("name,kwargs", [
    ("exp_alpha", dict(alpha=1.0)),
    ("exp_alpha", dict(alpha=0.7)),
    ("cauchy", dict(alpha=1.5, beta=2.0)),
    ("gauss", {}),
    ("sech", {}),
])
def test_builtin_local_expansion_matches_covariance(name, kwargs):
    bi = make_builtin_covariance(name, **kwargs)
    assert float(bi.r(0.0)) == pytest.approx(1.0, abs=1e-12)
    # 1 - r(t) = coeff0 t^alpha0 (1 + o(1)) near 0
    for t in (1e-4, 1e-5):
        lead = bi.coeff0 * t ** bi.alpha0
        assert (1.0 - float(bi.r(t))) == pytest.approx(lead, rel=5e-3)
    # dr_abs matches a central difference away from the origin
    t, h = 0.7, 1e-6
    num = abs(float(bi.r(t + h)) - float(bi.r(t - h))) / (2 * h)
    assert bi.dr_abs(t) == pytest.approx(num, rel=1e-6)


def test_builtin_catalog_errors():
    with pytest.raises(ConfigError):
        make_builtin_covariance("nope")
    with pytest.raises(ConfigError):
        make_builtin_covariance("gauss", alpha=1.0)
    with pytest.raises(ConfigError):
        make_builtin_covariance("exp_alpha", alpha=3.0)
    assert set(BUILTIN_COVARIANCES) == {"exp_alpha", "cauchy", "gauss", "sech"}


def test_stationary_covariance_validation():
    with pytest.raises(ModelError):
        StationaryCovariance(r=lambda t: 2.0 * np.exp(-np.abs(t)))
    with pytest.raises(ModelError):
        StationaryCovariance(r=lambda t: 1.0 + np.asarray(t, dtype=float) ** 2)
    m = StationaryCovariance(r=lambda t: np.exp(-np.abs(t)))
    assert m.variogram(1.0) == pytest.approx(2.0 * (1.0 - math.exp(-1.0)))


def test_variogram_model_validation():
    with pytest.raises(ModelError):
        StationaryIncrementVariogram(variogram_fn=lambda t: np.abs(t) + 1.0)
    with pytest.raises(ModelError):
        StationaryIncrementVariogram(variogram_fn=lambda t: -np.abs(t))
    m = StationaryIncrementVariogram(variogram_fn=lambda t: np.abs(t) ** 0.8)
    assert m.variogram(-2.0) == pytest.approx(2.0 ** 0.8)


def test_fbm_mixture_validation():
    with pytest.raises(ParameterError):
        FbmMixture(lambdas=(1.0, 1.0), hursts=(0.25, 0.75))
    with pytest.raises(ParameterError):
        FbmMixture(lambdas=(1.0,), hursts=(1.0,))
    with pytest.raises(ParameterError):
        FbmMixture(lambdas=(0.6, 0.8), hursts=(0.75, 0.25))
    lam = (0.6, 0.8)
    m = FbmMixture(lambdas=lam, hursts=(0.25, 0.75))
    t = 2.0
    expect = 0.36 * t ** 0.5 + 0.64 * t ** 1.5
    assert m.variogram(t) == pytest.approx(expect, rel=1e-14)


def test_integrated_variance_closed_form():
    # r = e^{-t}: sigma^2(t) = 2 n (t - 1 + e^{-t})
    m = IntegratedStationary(r_zeta=lambda t: math.exp(-abs(t)), n=3)
    for t in (0.3, 1.0, 4.0):
        expect = 6.0 * (t - 1.0 + math.exp(-t))
        assert m.variance(t) == pytest.approx(expect, rel=1e-8)
    assert m.variance(0.0) == 0.0
    assert m.mean_covariance_integral(2.0) == pytest.approx(
        3.0 * (1.0 - math.exp(-2.0)), rel=1e-8)
    with pytest.raises(ParameterError):
        IntegratedStationary(r_zeta=lambda t: math.exp(-abs(t)), n=0)
    with pytest.raises(ModelError):
        IntegratedStationary(r_zeta=lambda t: 0.9 * math.exp(-abs(t)))


def test_storage_validation():
    Storage(hurst=0.25, c=1.0)
    with pytest.raises(ParameterError):
        Storage(hurst=1.0, c=1.0)
    with pytest.raises(ParameterError):
        Storage(hurst=0.25, c=0.0)


# ---------------------------------------------------------------------------
# variogram identities


def test_variogram_to_covariance_fbm():
    h = 0.3
    v = lambda t: np.abs(t) ** (2 * h)
    for s, t in ((0.5, 2.0), (1.0, 1.0), (3.0, 0.1)):
        expect = 0.5 * (s ** (2 * h) + t ** (2 * h) - abs(s - t) ** (2 * h))
        assert variogram_to_covariance(v, t, s) == pytest.approx(expect,
                                                                 rel=1e-14)
    with pytest.raises(ParameterError):
        variogram_to_covariance(lambda t: np.abs(t) + 1.0, 1.0, 1.0)


def test_shepp_covariance_brownian_disjoint_increments():
    v = lambda t: np.abs(t)
    # disjoint Brownian increments are exactly independent
    assert float(shepp_covariance(v, 5.0, 1.0, 0.0, 1.0)) == 0.0
    assert float(shepp_correlation(v, 5.0, 1.0, 0.0, 1.0)) == 0.0
    # overlapping increments share their intersection length
    assert float(shepp_covariance(v, 0.5, 1.0, 0.0, 1.0)) == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# local expansion and mapping


def test_local_expansion_exp_covariance():
    bi = make_builtin_covariance("exp_alpha", alpha=1.0)
    m = StationaryCovariance(r=bi.r, builtin=bi)
    T = 1.0
    le = local_expansion(m, T)
    sigma2 = 2.0 * (1.0 - math.exp(-T))
    assert le.alpha == 1.0
    assert le.sigma_T == pytest.approx(math.sqrt(sigma2), rel=1e-14)
    # a_raw = (2 coeff0)^{1/alpha} = 2, then normalized by sigma_T^{-2/alpha}
    assert le.a == pytest.approx(2.0 / sigma2, rel=1e-14)
    assert le.beta == 1.0
    assert le.b == pytest.approx(math.exp(-T) / sigma2, rel=1e-14)


def test_local_expansion_mixture_and_integrated():
    m = FbmMixture(lambdas=(1.0,), hursts=(0.25,))
    le = local_expansion(m, 2.0)
    assert le.alpha == pytest.approx(0.5)
    assert le.sigma_T == pytest.approx(2.0 ** 0.25)
    # b = d(sigma^2)/dT / (2 sigma^2) = H / T
    assert le.b == pytest.approx(0.25 / 2.0, rel=1e-14)

    mi = IntegratedStationary(r_zeta=lambda t: math.exp(-abs(t)), n=4)
    le = local_expansion(mi, 1.0)
    sigma2 = 8.0 * math.exp(-1.0)  # 2 n (T - 1 + e^{-T}) at T = 1
    assert le.alpha == 2.0
    assert le.sigma_T == pytest.approx(math.sqrt(sigma2), rel=1e-8)
    assert le.b == pytest.approx(4.0 * (1.0 - math.exp(-1.0)) / sigma2,
                                 rel=1e-8)


def test_local_expansion_rejects_opaque_models():
    with pytest.raises(ParameterError):
        local_expansion(FbmMixture(lambdas=(1.0,), hursts=(0.5,)), 0.0)
    with pytest.raises(ModelError):
        local_expansion(StationaryCovariance(r=lambda t: np.exp(-np.abs(t))),
                        1.0)
    with pytest.raises(ModelError):
        local_expansion(
            StationaryIncrementVariogram(variogram_fn=lambda t: np.abs(t)),
            1.0)


def test_mapped_params_have_equal_coefficients():
    m = FbmMixture(lambdas=(1.0,), hursts=(0.25,))
    p, sigma_t = mapped_regime_params(m, 1.0)
    le = local_expansion(m, 1.0)
    coef = 2.0 ** (-1.0 / le.alpha) * le.a
    assert p.a1 == p.a2 == p.a3 == pytest.approx(coef, rel=1e-14)
    assert p.beta == 1.0
    assert sigma_t == le.sigma_T
    assert classify_regime(p) is Regime.BetaDominates


# ---------------------------------------------------------------------------
# probes


def test_expansion_probe_converges_for_brownian_increments():
    m = FbmMixture(lambdas=(1.0,), hursts=(0.5,))
    p, _ = mapped_regime_params(m, 1.0)
    report = validate_local_expansion(m, p, [0.1, 0.01, 0.001], T=1.0)
    assert report.converged
    finest = [r.ratio for r in report.rows if r.scale == 0.001]
    assert len(finest) == 3
    assert all(abs(x - 1.0) < 0.05 for x in finest)


def test_expansion_probe_input_validation():
    m = FbmMixture(lambdas=(1.0,), hursts=(0.5,))
    p, _ = mapped_regime_params(m, 1.0)
    with pytest.raises(ParameterError):
        validate_local_expansion(m, p, [0.01, 0.1], T=1.0)
    with pytest.raises(ParameterError):
        validate_local_expansion(m, p, [2.0, 0.1], T=1.0)


def test_weak_dependence_probe_brownian_exact_zero():
    m = FbmMixture(lambdas=(1.0,), hursts=(0.5,))
    p, _ = mapped_regime_params(m, 1.0)
    rows = weak_dependence_probe(m, p, [10.0, 100.0], t_window=1.0)
    assert [lag for lag, _ in rows] == [10.0, 100.0]
    assert all(v == 0.0 for _, v in rows)


def test_weak_dependence_probe_fbm_decays():
    m = FbmMixture(lambdas=(1.0,), hursts=(0.25,))
    p, _ = mapped_regime_params(m, 1.0)
    rows = weak_dependence_probe(m, p, [10.0, 100.0, 1000.0])
    vals = [v for _, v in rows]
    assert vals[0] > vals[1] > vals[2] > 0.0
    with pytest.raises(ParameterError):
        weak_dependence_probe(m, p, [0.5, 10.0])


# ---------------------------------------------------------------------------
# config parsing


def test_parse_config_text():
    text = """
    # a comment
    kind = fbm_mixture   # trailing comment
    lambdas = 0.6, 0.8

    hursts = 0.25,0.75
    """
    d = parse_config_text(text)
    assert d == {"kind": "fbm_mixture", "lambdas": "0.6, 0.8",
                 "hursts": "0.25,0.75"}
    with pytest.raises(ConfigError):
        parse_config_text("kind fbm_mixture")
    with pytest.raises(ConfigError):
        parse_config_text("a = 1\na = 2")
    with pytest.raises(ConfigError):
        parse_config_text("= 2")


def test_parse_model_config_all_kinds():
    m = parse_model_config("kind = stationary_covariance\nr = exp_alpha\n"
                           "alpha = 0.8")
    assert isinstance(m, StationaryCovariance)
    assert m.builtin.alpha0 == 0.8

    m = parse_model_config("kind = fbm_mixture\nlambdas = 0.6,0.8\n"
                           "hursts = 0.25,0.75")
    assert isinstance(m, FbmMixture)

    m = parse_model_config("kind = integrated\nr_zeta = exp_alpha\n"
                           "alpha = 1\nn = 2")
    assert isinstance(m, IntegratedStationary)
    assert m.n == 2

    m = parse_model_config("kind = storage\nhurst = 0.25\nc = 1")
    assert isinstance(m, Storage)


def test_parse_model_config_rejects_unknowns():
    with pytest.raises(ConfigError):
        parse_model_config("kind = storage\nhurst = 0.25\nc = 1\nxyz = 3")
    with pytest.raises(ConfigError):
        parse_model_config("kind = elliptical")
    with pytest.raises(ConfigError):
        parse_model_config("kind = stationary_covariance")
    with pytest.raises(ConfigError):
        parse_model_config("kind = storage\nhurst = zero\nc = 1")

"""Tail asymptotics and Gumbel norming constants.

Every regime reduces to mu(u) = K u^p Psi(u) with a regime-specific
constant K built from Pickands, Piterbarg or mixed constants, and the
norming pair follows from the same (K, p) through
omega_S = ln(K a_S^{p-1} / sqrt(2 pi)), b_S = a_S + omega_S / a_S.
Application-level wrappers (stationary covariance, stationary-increment
variogram, fBm mixtures, integrated processes, the storage model) reduce
their published parameterizations to the same core, so the two routes
agree exactly by construction wherever both exist.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.special import erfc, gamma as _gamma

from .errors import ParameterError, UnresolvedConstantError
from .model import FbmMixture, Regime, RegimeParams, classify_regime
from .constants import lookup_known_constant

_SQRT_2PI = math.sqrt(2.0 * math.pi)

ONE_SIDED = "one_sided"
TWO_SIDED = "two_sided"


def _norm_variant(variant) -> str:
    v = str(variant).replace("-", "_").lower()
    if v not in (ONE_SIDED, TWO_SIDED):
        raise ParameterError(f"variant must be one_sided or two_sided, got {variant!r}")
    return v


def normal_tail(u):
    """Psi(u) = P(N(0,1) > u), accurate in the far tail."""
    u = np.asarray(u, dtype=float)
    out = 0.5 * erfc(u / math.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def gumbel_cdf(x):
    """exp(-exp(-x))."""
    x = np.asarray(x, dtype=float)
    out = np.exp(-np.exp(-x))
    return float(out) if out.ndim == 0 else out


def gamma_fn(x):
    """Gamma function on the positive axis, as used by the case formulas."""
    x = float(x)
    if not (x > 0.0) or not math.isfinite(x):
        raise ParameterError(f"gamma argument must be positive and finite, got {x!r}")
    return float(_gamma(x))


# ---------------------------------------------------------------------------
# constant provider


def constant_key(kind, variant=ONE_SIDED, **params) -> str:
    """Canonical injection key, e.g. 'pickands(alpha=1.5)' or
    'piterbarg_two_sided(alpha=2,b=0.37)'."""
    body = ",".join(f"{k}={float(v):g}" for k, v in params.items())
    suffix = "_two_sided" if variant == TWO_SIDED else ""
    return f"{kind}{suffix}({body})"


class ConstantProvider:
    """Resolves the constants entering K: closed forms where they exist,
    injected estimates otherwise.

    Injection keys are the canonical strings produced by constant_key;
    an unresolvable constant raises UnresolvedConstantError carrying the
    exact key to inject.
    """

    def __init__(self, overrides=None):
        self._overrides = dict(overrides or {})

    def inject(self, key, value):
        value = float(value)
        if not (value > 0) or not math.isfinite(value):
            raise ParameterError(f"injected constant must be positive, got {value!r}")
        self._overrides[str(key)] = value
        return self

    def overrides(self):
        return dict(self._overrides)

    def pickands(self, alpha) -> float:
        key = constant_key("pickands", alpha=alpha)
        if key in self._overrides:
            return self._overrides[key]
        try:
            return lookup_known_constant("pickands", alpha=float(alpha))
        except UnresolvedConstantError:
            raise UnresolvedConstantError(key) from None

    def piterbarg(self, alpha, b, variant=ONE_SIDED) -> float:
        key = constant_key("piterbarg", variant=variant, alpha=alpha, b=b)
        if key in self._overrides:
            return self._overrides[key]
        if variant == ONE_SIDED:
            try:
                return lookup_known_constant("piterbarg", alpha=float(alpha),
                                             b=float(b))
            except UnresolvedConstantError:
                pass
        raise UnresolvedConstantError(key)

    def mixed(self, p: RegimeParams, variant=ONE_SIDED) -> float:
        key = constant_key("mixed", variant=variant, alpha=p.alpha1,
                           a1=p.a1, a2=p.a2, a3=p.a3, b=p.b)
        if key in self._overrides:
            return self._overrides[key]
        raise UnresolvedConstantError(key)


# ---------------------------------------------------------------------------
# the (K, p) core


def regime_constant(p: RegimeParams, provider: ConstantProvider,
                    variant=ONE_SIDED):
    """(K, p_exponent, regime) for mu(u) = K u^p Psi(u).

    The two-sided variant doubles the Gamma factor when the variance decay
    dominates and swaps in the two-sided Piterbarg or mixed constants on
    the equality regimes; the three strict-inequality regimes are variant
    independent.
    """
    variant = _norm_variant(variant)
    provider = provider or ConstantProvider()
    regime = classify_regime(p)
    a1, a2, a3, b = p.a1, p.a2, abs(p.a3), p.b
    al1, al2, beta = p.alpha1, p.alpha2, p.beta
    if regime is Regime.BetaDominates:
        k = (gamma_fn(1.0 / beta + 1.0)
             * (a1 * provider.pickands(al1))
             * (a2 * provider.pickands(al2))
             * b ** (-1.0 / beta))
        if variant == TWO_SIDED:
            k *= 2.0
        exp_p = 2.0 / al1 + 2.0 / al2 - 2.0 / beta
    elif regime is Regime.AllEqual:
        k = provider.mixed(p, variant=variant)
        exp_p = 2.0 / al1
    elif regime is Regime.BetaEqA2GtA1:
        b_eff = b * a2 ** (-al2)
        k = (a1 * a2 * provider.piterbarg(al2, b_eff, variant=variant)
             * provider.pickands(al1))
        exp_p = 2.0 / al1
    elif regime is Regime.BetaLtA2EqA1:
        k = (a1 ** al1 + a3 ** al1) ** (1.0 / al1) * provider.pickands(al1)
        exp_p = 2.0 / al1
    elif regime is Regime.BetaLtA2A1LtA2:
        k = a1 * provider.pickands(al1)
        exp_p = 2.0 / al1
    elif regime is Regime.BetaEqA1GtA2:
        b_eff = b * (a3 / (a1 * a2)) ** al1
        k = (a1 * provider.piterbarg(al1, b_eff, variant=variant)
             * provider.pickands(al2))
        exp_p = 2.0 / al2
    else:  # BetaLtA1A2LtA1
        k = a3 * provider.pickands(al2)
        exp_p = 2.0 / al2
    return float(k), float(exp_p), regime


def eval_mu(p: RegimeParams, u, provider=None, variant=ONE_SIDED) -> float:
    """mu(u) = K u^p Psi(u), the per-unit-length tail intensity."""
    u = float(u)
    if not (u > 0):
        raise ParameterError(f"u must be positive, got {u!r}")
    k, exp_p, _ = regime_constant(p, provider or ConstantProvider(), variant)
    return k * u ** exp_p * normal_tail(u)


@dataclasses.dataclass(frozen=True)
class NormingPair:
    """Gumbel norming: P(a_S (sup - b_S) <= x) -> exp(-exp(-x))."""

    a_S: float
    b_S: float
    omega_S: float
    regime: Regime
    variant: str


def norming_from_kp(S, k, exp_p, regime=None, variant=ONE_SIDED) -> NormingPair:
    """Norming pair built directly from a constant K and u-exponent p:
    a_S = sqrt(2 ln S), b_S = a_S + omega_S / a_S with
    omega_S = ln(K a_S^{p-1} / sqrt(2 pi))."""
    S = float(S)
    if not (S > 1.0):
        raise ParameterError(f"S must exceed 1, got {S!r}")
    k = float(k)
    if not (k > 0.0 and math.isfinite(k)):
        raise ParameterError(f"constant K must be positive finite, got {k!r}")
    a_s = math.sqrt(2.0 * math.log(S))
    omega = math.log(k * a_s ** (float(exp_p) - 1.0) / _SQRT_2PI)
    return NormingPair(a_S=a_s, b_S=a_s + omega / a_s, omega_S=omega,
                       regime=regime, variant=_norm_variant(variant))


def eval_norming(S, p: RegimeParams, provider=None,
                 variant=ONE_SIDED) -> NormingPair:
    """Norming pair at horizon S for the regime of p."""
    k, exp_p, regime = regime_constant(p, provider or ConstantProvider(),
                                       variant)
    return norming_from_kp(S, k, exp_p, regime=regime, variant=variant)


# ---------------------------------------------------------------------------
# applications

_APPLICATIONS = ("stationary", "variogram", "mixture", "integrated")


@dataclasses.dataclass(frozen=True)
class ApplicationEval:
    """Result of an application evaluation: the reduced regime parameters
    and whichever of mu / norming was requested."""

    app: str
    mapped_params: RegimeParams
    mu: float | None = None
    norming: NormingPair | None = None


def _app_stationary(params):
    """Stationary covariance on [0, T], unit normalization 2(1 - r(T)) = 1:
    r decays like 1 - a2 t^alpha2 at 0 and hits its minimum at T with
    |t - T|^alpha1 regularity and coefficient a1."""
    al1 = float(params["alpha1"])
    al2 = float(params["alpha2"])
    a1 = float(params["a1"])
    a2 = float(params["a2"])
    if not (0.0 < al2 < 2.0):
        raise ParameterError(f"alpha2 must lie in (0, 2), got {al2!r}")
    if not (0.0 < al1 <= 2.0):
        raise ParameterError(f"alpha1 must lie in (0, 2], got {al1!r}")
    if not (a1 > 0 and a2 > 0):
        raise ParameterError("a1 and a2 must be positive")
    coef = a2 ** (1.0 / al2)
    return RegimeParams(alpha1=al2, alpha2=al2, beta=al1,
                        a1=coef, a2=coef, a3=coef, b=a1), False


def _app_variogram(params):
    """Stationary-increment field, sigma(T) normalized to 1: variance
    (a t)^alpha at 0, variance decay b (T - t)^beta at the endpoint."""
    al = float(params["alpha"])
    a = float(params["a"])
    beta = float(params["beta"])
    b = float(params["b"])
    if not (0.0 < al <= 2.0):
        raise ParameterError(f"alpha must lie in (0, 2], got {al!r}")
    coef = 2.0 ** (-1.0 / al) * a
    return RegimeParams(alpha1=al, alpha2=al, beta=beta,
                        a1=coef, a2=coef, a3=coef, b=b), True


def _app_mixture(params):
    """fBm mixture on [0, 1]: weights with sum of squares 1, increasing
    Hurst indices; the smallest index drives the tail."""
    mix = FbmMixture(lambdas=tuple(float(x) for x in params["lambdas"]),
                     hursts=tuple(float(h) for h in params["hursts"]))
    t_end = float(params.get("T", 1.0))
    if t_end != 1.0:
        raise ParameterError("the mixture reduction is normalized to T = 1; "
                             "rescale the weights for other windows")
    h0 = mix.hursts[0]
    if h0 == 0.5 and len(mix.lambdas) > 1:
        raise ParameterError(
            "the mixed-constant branch (smallest Hurst = 1/2) is published "
            "for a single component only; reduce multi-component mixtures "
            "to regime parameters and use eval_mu directly")
    lam1 = mix.lambdas[0]
    b = sum(l * l * h for l, h in zip(mix.lambdas, mix.hursts))
    al = 2.0 * h0
    coef = 2.0 ** (-1.0 / al) * lam1 ** (1.0 / h0)
    return RegimeParams(alpha1=al, alpha2=al, beta=1.0,
                        a1=coef, a2=coef, a3=coef, b=b), True


def _app_integrated(params):
    """Integrated stationary process: n iid unit-variance components, each
    integrated; locally the sum is sqrt(n) t + o(t), a smooth (alpha = 2)
    field whose endpoint decay constant drops out of the reduction."""
    n = params.get("n", 1)
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    coef = 2.0 ** (-0.5) * math.sqrt(float(n))
    return RegimeParams(alpha1=2.0, alpha2=2.0, beta=1.0,
                        a1=coef, a2=coef, a3=coef, b=1.0), True


def eval_application(app, params, provider=None, u=None, S=None,
                     variant=ONE_SIDED) -> ApplicationEval:
    """Evaluate a published application by exact reduction to the core.

    app is one of 'stationary', 'variogram', 'mixture', 'integrated';
    params is the application's parameter dict.  u requests mu(u), S
    requests the norming pair; at least one is required.  The stationary
    application is norming-only (it has no published mu display).
    """
    if app not in _APPLICATIONS:
        raise ParameterError(f"unknown application {app!r}; choose one of "
                             f"{_APPLICATIONS}")
    if u is None and S is None:
        raise ParameterError("pass u for mu(u) and/or S for the norming pair")
    reduce_fn = {"stationary": _app_stationary, "variogram": _app_variogram,
                 "mixture": _app_mixture, "integrated": _app_integrated}[app]
    try:
        mapped, has_mu = reduce_fn(params)
    except KeyError as e:
        raise ParameterError(f"application {app!r} is missing parameter "
                             f"{e.args[0]!r}") from None
    provider = provider or ConstantProvider()
    mu_val = None
    if u is not None:
        if not has_mu:
            raise ParameterError(f"application {app!r} defines norming "
                                 "constants only; request S instead of u")
        mu_val = eval_mu(mapped, u, provider, variant)
    norming = eval_norming(S, mapped, provider, variant) if S is not None else None
    return ApplicationEval(app=app, mapped_params=mapped, mu=mu_val,
                           norming=norming)


# ---------------------------------------------------------------------------
# storage model


@dataclasses.dataclass(frozen=True)
class StorageEval:
    """Storage-model evaluation: derived scale constants, the reduced
    regime parameters, and whichever of tail / norming was requested."""

    hurst: float
    c: float
    t0: float
    big_a: float
    script_a: float
    script_b: float
    mapped_params: RegimeParams
    tail: float | None = None
    norming: NormingPair | None = None


def storage_constants(hurst, c):
    """(t0, A, script_a, script_b) for the storage tail.

    t0 = H / (c (1 - H)) is the rescaled maximizer, A the threshold scale,
    script_a the variance curvature and script_b the quadratic decay rate
    of the rescaled standard deviation."""
    hurst, c = float(hurst), float(c)
    if not (0.0 < hurst < 0.5):
        raise ParameterError(
            f"storage asymptotics require hurst in (0, 1/2), got {hurst!r}")
    if not (c > 0):
        raise ParameterError(f"service rate must be positive, got {c!r}")
    t0 = hurst / (c * (1.0 - hurst))
    big_a = t0 ** (-hurst) / (1.0 - hurst)
    big_b = hurst * t0 ** (-hurst - 2.0)
    script_b = big_b / (2.0 * big_a)
    script_a = 0.5 * t0 ** (-2.0 * hurst)
    return t0, big_a, script_a, script_b


def eval_storage(hurst, c, provider=None, u=None, S=None) -> StorageEval:
    """Tail and norming constants for the fBm storage process.

    tail is the supremum intensity per unit horizon: P(sup_{[0,S]} Z > u)
    = S * tail(u) (1 + o(1)) with tail(u) = sqrt(pi) H_{2H}^2
    script_a^{1/H} script_b^{-1/2} u^{-1} (A u^{1-H})^{2/H-1}
    Psi(A u^{1-H}).  The norming pair uses the nonstandard scale
    a_S = (2 A^{-2} ln S)^{1/(2(1-H))}.  Reduced regime parameters (a
    two-sided, variance-decay dominated field with alpha = 2H) are always
    returned.
    """
    if u is None and S is None:
        raise ParameterError("pass u for the tail and/or S for the norming pair")
    t0, big_a, script_a, script_b = storage_constants(hurst, c)
    hurst = float(hurst)
    provider = provider or ConstantProvider()
    coef = 2.0 ** (-1.0 / (2.0 * hurst)) / t0
    mapped = RegimeParams(alpha1=2.0 * hurst, alpha2=2.0 * hurst, beta=2.0,
                          a1=coef, a2=coef, a3=coef, b=script_b)
    tail = None
    if u is not None:
        u = float(u)
        if not (u > 0):
            raise ParameterError(f"u must be positive, got {u!r}")
        h_const = provider.pickands(2.0 * hurst)
        v = big_a * u ** (1.0 - hurst)
        tail = (math.sqrt(math.pi) * h_const ** 2
                * script_a ** (1.0 / hurst) * script_b ** (-0.5) / u
                * v ** (2.0 / hurst - 1.0) * normal_tail(v))
    norming = None
    if S is not None:
        S = float(S)
        if not (S > 1.0):
            raise ParameterError(f"S must exceed 1, got {S!r}")
        h_const = provider.pickands(2.0 * hurst)
        a_s = (2.0 * big_a ** (-2.0) * math.log(S)) ** (1.0 / (2.0 * (1.0 - hurst)))
        inner = (2.0 ** (-0.5) * h_const ** 2 * script_a ** (1.0 / hurst)
                 * script_b ** (-0.5) * big_a ** (1.0 / hurst - 2.0)
                 * a_s ** ((2.0 - 5.0 * hurst + 2.0 * hurst * hurst) / hurst))
        omega = math.log(inner)
        norming = NormingPair(a_S=a_s, b_S=a_s + omega / a_s, omega_S=omega,
                              regime=Regime.BetaDominates, variant=TWO_SIDED)
    return StorageEval(hurst=hurst, c=float(c), t0=t0, big_a=big_a,
                       script_a=script_a, script_b=script_b,
                       mapped_params=mapped, tail=tail, norming=norming)

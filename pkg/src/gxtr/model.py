"""Domain types for regime parameters and Gaussian models.

Holds the seven-way regime classification, the model catalog (stationary
covariance, stationary-increment variogram, fBm mixtures, integrated
stationary processes, the storage process), and the numeric diagnostics
that probe the local-expansion and weak-dependence assumptions on a grid.
The probes are diagnostics, never gates: formulas stay computable even
when a probe looks bad.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import ConfigError, ModelError, NumericalError, ParameterError


# ---------------------------------------------------------------------------
# regime parameters and classification


@dataclasses.dataclass(frozen=True)
class RegimeParams:
    """The tuple (alpha1, alpha2, beta, a1, a2, a3, b) driving every regime
    dispatch.

    alpha1, alpha2 are the spatial/temporal regularity exponents in (0, 2],
    beta > 0 is the variance-decay exponent at the boundary maximizer,
    a1, a2 > 0 and a3 != 0 are the local correlation coefficients and
    b > 0 scales the variance decay.
    """

    alpha1: float
    alpha2: float
    beta: float
    a1: float
    a2: float
    a3: float
    b: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2"):
            v = getattr(self, name)
            if not (0.0 < v <= 2.0) or not math.isfinite(v):
                raise ParameterError(f"{name} must lie in (0, 2], got {v!r}")
        for name in ("beta", "a1", "a2", "b"):
            v = getattr(self, name)
            if not (v > 0.0) or not math.isfinite(v):
                raise ParameterError(f"{name} must be positive, got {v!r}")
        if self.a3 == 0.0 or not math.isfinite(self.a3):
            raise ParameterError(f"a3 must be nonzero, got {self.a3!r}")


class Regime(enum.Enum):
    """The seven orderings of (alpha1, alpha2, beta), each with its own
    tail formula and norming constant."""

    BetaDominates = "beta_dominates"            # beta > max(alpha1, alpha2)
    AllEqual = "all_equal"                      # beta = alpha2 = alpha1
    BetaEqA2GtA1 = "beta_eq_a2_gt_a1"           # beta = alpha2 > alpha1
    BetaLtA2EqA1 = "beta_lt_a2_eq_a1"           # beta < alpha2 = alpha1
    BetaLtA2A1LtA2 = "beta_lt_a2_a1_lt_a2"      # beta < alpha2, alpha1 < alpha2
    BetaEqA1GtA2 = "beta_eq_a1_gt_a2"           # beta = alpha1 > alpha2
    BetaLtA1A2LtA1 = "beta_lt_a1_a2_lt_a1"      # beta < alpha1, alpha2 < alpha1


def classify_regime(p: RegimeParams) -> Regime:
    """Map valid parameters to their unique regime.

    Comparisons are exact floating equality on the user-entered values:
    the regimes are structurally discontinuous, so fuzzy matching would
    silently change which formula is used.  Boundary orderings that no
    named case spells out (beta = alpha2 < alpha1, beta = alpha1 < alpha2)
    satisfy the strict-inequality conditions of the last two cases and are
    routed there.
    """
    a1, a2, beta = p.alpha1, p.alpha2, p.beta
    if beta > max(a1, a2):
        return Regime.BetaDominates
    if beta == a2 == a1:
        return Regime.AllEqual
    if beta == a2 and a2 > a1:
        return Regime.BetaEqA2GtA1
    if beta == a1 and a1 > a2:
        return Regime.BetaEqA1GtA2
    if beta < a2 and a2 == a1:
        return Regime.BetaLtA2EqA1
    if beta < a2 and a1 < a2:
        return Regime.BetaLtA2A1LtA2
    if beta < a1 and a2 < a1:
        return Regime.BetaLtA1A2LtA1
    raise AssertionError("classification is total; unreachable")


# ---------------------------------------------------------------------------
# grids


@dataclasses.dataclass(frozen=True)
class GridSpec:
    """A rectangular discretization: origin, positive step(s), count(s).

    1-D grids use scalars, 2-D grids use pairs.  The derived extent along
    an axis is step * (count - 1).
    """

    origin: float | tuple[float, float]
    step: float | tuple[float, float]
    count: int | tuple[int, int]

    def __post_init__(self):
        o, st, ct = self.origin, self.step, self.count
        scalars = [np.isscalar(o), np.isscalar(st), np.isscalar(ct)]
        if all(scalars):
            pass
        elif not any(scalars) and len(o) == len(st) == len(ct) == 2:
            pass
        else:
            raise ParameterError("origin, step and count must be all scalars "
                                 "or all pairs")
        for s in np.atleast_1d(np.asarray(st, dtype=float)):
            if not (s > 0.0) or not math.isfinite(s):
                raise ParameterError(f"grid step must be positive, got {s!r}")
        for c in np.atleast_1d(ct):
            if int(c) != c or c < 1:
                raise ParameterError(f"grid count must be a positive integer, got {c!r}")

    @property
    def ndim(self) -> int:
        return 1 if np.isscalar(self.count) else 2

    def axis(self, i: int = 0) -> np.ndarray:
        """Grid coordinates along axis i."""
        if self.ndim == 1:
            if i != 0:
                raise ParameterError("1-D grid has a single axis")
            o, st, ct = self.origin, self.step, self.count
        else:
            o, st, ct = self.origin[i], self.step[i], self.count[i]
        return o + st * np.arange(int(ct))

    @property
    def extent(self):
        if self.ndim == 1:
            return self.step * (self.count - 1)
        return tuple(s * (c - 1) for s, c in zip(self.step, self.count))

    @property
    def total(self) -> int:
        if self.ndim == 1:
            return int(self.count)
        return int(self.count[0]) * int(self.count[1])


# ---------------------------------------------------------------------------
# builtin covariance catalog


@dataclasses.dataclass(frozen=True)
class BuiltinCovariance:
    """A named covariance with closed-form local behavior.

    ``coeff0`` and ``alpha0`` describe 1 - r(t) = coeff0 * t^alpha0 (1+o(1))
    at the origin; ``dr_abs`` evaluates |r'(t)| away from 0.  Both feed the
    tail-theory mapping, so they must match ``r`` exactly.
    """

    name: str
    params: tuple
    r: object
    alpha0: float
    coeff0: float
    dr_abs: object

    def __call__(self, t):
        return self.r(t)


def _builtin_exp_alpha(alpha=1.0):
    alpha = float(alpha)
    if not (0.0 < alpha <= 2.0):
        raise ConfigError(f"exp_alpha needs alpha in (0, 2], got {alpha!r}")
    return BuiltinCovariance(
        name="exp_alpha",
        params=(("alpha", alpha),),
        r=lambda t: np.exp(-np.abs(t) ** alpha),
        alpha0=alpha,
        coeff0=1.0,
        dr_abs=lambda t: alpha * abs(t) ** (alpha - 1.0) * math.exp(-abs(t) ** alpha),
    )


def _builtin_cauchy(alpha=1.0, beta=1.0):
    alpha, beta = float(alpha), float(beta)
    if not (0.0 < alpha <= 2.0) or not beta > 0.0:
        raise ConfigError("cauchy needs alpha in (0, 2] and beta > 0, "
                          f"got alpha={alpha!r}, beta={beta!r}")
    return BuiltinCovariance(
        name="cauchy",
        params=(("alpha", alpha), ("beta", beta)),
        r=lambda t: (1.0 + np.abs(t) ** alpha) ** (-beta),
        alpha0=alpha,
        coeff0=beta,
        dr_abs=lambda t: beta * alpha * abs(t) ** (alpha - 1.0)
        * (1.0 + abs(t) ** alpha) ** (-beta - 1.0),
    )


def _builtin_gauss():
    return BuiltinCovariance(
        name="gauss",
        params=(),
        r=lambda t: np.exp(-np.asarray(t, dtype=float) ** 2),
        alpha0=2.0,
        coeff0=1.0,
        dr_abs=lambda t: 2.0 * abs(t) * math.exp(-t * t),
    )


def _builtin_sech():
    return BuiltinCovariance(
        name="sech",
        params=(),
        r=lambda t: 1.0 / np.cosh(np.asarray(t, dtype=float)),
        alpha0=2.0,
        coeff0=0.5,
        dr_abs=lambda t: math.sinh(abs(t)) / math.cosh(t) ** 2,
    )


BUILTIN_COVARIANCES = {
    "exp_alpha": _builtin_exp_alpha,
    "cauchy": _builtin_cauchy,
    "gauss": _builtin_gauss,
    "sech": _builtin_sech,
}


def make_builtin_covariance(name, **params) -> BuiltinCovariance:
    """Instantiate a catalog covariance by name."""
    try:
        factory = BUILTIN_COVARIANCES[name]
    except KeyError:
        raise ConfigError(
            f"unknown builtin covariance {name!r}; "
            f"choose one of {sorted(BUILTIN_COVARIANCES)}") from None
    try:
        return factory(**params)
    except TypeError:
        raise ConfigError(f"bad parameters {params!r} for builtin {name!r}") from None


# ---------------------------------------------------------------------------
# field models

_PROBE_POINTS = np.concatenate([np.linspace(0.05, 5.0, 40), [10.0, 20.0, 50.0]])


@dataclasses.dataclass(frozen=True)
class StationaryCovariance:
    """Stationary Gaussian model described by its covariance r with r(0) = 1."""

    r: object
    builtin: BuiltinCovariance | None = None

    def __post_init__(self):
        r0 = float(self.r(0.0))
        if abs(r0 - 1.0) > 1e-12:
            raise ModelError(f"covariance must satisfy r(0) = 1, got r(0) = {r0!r}")
        vals = np.asarray(self.r(_PROBE_POINTS), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ModelError("covariance evaluates to non-finite values on probe points")
        if np.any(np.abs(vals) > 1.0 + 1e-12):
            raise ModelError("|r(t)| exceeds 1 on probe points; not a correlation")

    def variogram(self, t):
        return 2.0 * (1.0 - np.asarray(self.r(np.abs(t)), dtype=float))


@dataclasses.dataclass(frozen=True)
class StationaryIncrementVariogram:
    """Stationary-increment model described by its variogram, v(0) = 0."""

    variogram_fn: object

    def __post_init__(self):
        v0 = float(self.variogram_fn(0.0))
        if abs(v0) > 1e-12:
            raise ModelError(f"variogram must satisfy v(0) = 0, got v(0) = {v0!r}")
        vals = np.asarray(self.variogram_fn(_PROBE_POINTS), dtype=float)
        if not np.all(np.isfinite(vals)) or np.any(vals < -1e-12):
            raise ModelError("variogram must be finite and nonnegative on probe points")

    def variogram(self, t):
        return np.asarray(self.variogram_fn(np.abs(t)), dtype=float)


@dataclasses.dataclass(frozen=True)
class FbmMixture:
    """Normalized sum of independent fBms: sum of lambda_i * B_{H_i}.

    Weights must satisfy sum(lambda_i^2) = 1 within 1e-12 and the Hurst
    indices must be strictly increasing inside (0, 1).
    """

    lambdas: tuple
    hursts: tuple

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lambdas)
        hs = tuple(float(h) for h in self.hursts)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "hursts", hs)
        if len(lam) != len(hs) or not lam:
            raise ParameterError("lambdas and hursts must be equally long and nonempty")
        if abs(sum(x * x for x in lam) - 1.0) > 1e-12:
            raise ParameterError("mixture weights must satisfy sum(lambda^2) = 1 "
                                 "within 1e-12")
        if any(not (0.0 < h < 1.0) for h in hs):
            raise ParameterError("Hurst indices must lie in (0, 1)")
        if any(h2 <= h1 for h1, h2 in zip(hs, hs[1:])):
            raise ParameterError("Hurst indices must be strictly increasing")

    def variogram(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        out = np.zeros_like(t)
        for lam, h in zip(self.lambdas, self.hursts):
            out = out + lam * lam * t ** (2.0 * h)
        return out


@dataclasses.dataclass(frozen=True)
class IntegratedStationary:
    """Sum of n independent integrals of a unit-variance stationary process.

    The component covariance r_zeta gives the exact variance
    sigma^2(t) = 2 n * int_0^t (t - s) r_zeta(s) ds, evaluated by adaptive
    quadrature at relative tolerance 1e-9 and cached per lag.
    """

    r_zeta: object
    n: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"component count n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        r0 = float(self.r_zeta(0.0))
        if abs(r0 - 1.0) > 1e-12:
            raise ModelError(f"component covariance must have r(0) = 1, got {r0!r}")

    def variance(self, t):
        """sigma^2(t), exact up to quadrature tolerance."""
        scalar = np.isscalar(t)
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.array([self._variance_scalar(float(x)) for x in np.abs(ts)])
        return float(out[0]) if scalar else out

    def _variance_scalar(self, t):
        if t == 0.0:
            return 0.0
        return _integrated_variance_cached(self.r_zeta, self.n, t)

    def variogram(self, t):
        return self.variance(t)

    def mean_covariance_integral(self, t):
        """n * int_0^t r_zeta(s) ds, the derivative of sigma^2 / 2."""
        val, err = quad(self.r_zeta, 0.0, float(t), epsrel=1e-9, limit=200)
        if not math.isfinite(val):
            raise NumericalError("quadrature of r_zeta did not converge")
        return self.n * val


@lru_cache(maxsize=65536)
def _integrated_variance_cached(r_zeta, n, t):
    f = lambda s: (t - s) * r_zeta(s)
    val, err = quad(f, 0.0, t, epsrel=1e-9, limit=200)
    if not math.isfinite(val) or (val != 0 and abs(err / val) > 1e-6):
        raise NumericalError(f"variance quadrature did not converge at t = {t!r}")
    return 2.0 * n * val


@dataclasses.dataclass(frozen=True)
class Storage:
    """Workload of a fluid queue with fBm input and service rate c."""

    hurst: float
    c: float

    def __post_init__(self):
        if not (0.0 < self.hurst < 1.0):
            raise ParameterError(f"storage Hurst index must lie in (0, 1), got {self.hurst!r}")
        if not self.c > 0.0:
            raise ParameterError(f"service rate must be positive, got {self.c!r}")


FieldModel = (StationaryCovariance | StationaryIncrementVariogram | FbmMixture
              | IntegratedStationary | Storage)


# ---------------------------------------------------------------------------
# variogram identities


def variogram_to_covariance(v, t, s):
    """Covariance of a stationary-increment process from its variogram:
    Cov(X(t), X(s)) = (v(t) + v(s) - v(|t - s|)) / 2 for t, s >= 0."""
    if float(np.asarray(v(0.0))) != 0.0:
        raise ParameterError("variogram must vanish at 0")
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    return 0.5 * (np.asarray(v(t)) + np.asarray(v(s)) - np.asarray(v(np.abs(t - s))))


def shepp_covariance(v, s, t, sp, tp):
    """Covariance of increments Z(s,t) = X(s+t) - X(s) for stationary-increment X.

    Expanding the four cross terms of E[(X(s+t)-X(s))(X(s'+t')-X(s'))] with
    the variogram identity leaves
    (v(s+t-s') + v(s-s'-t') - v(s+t-s'-t') - v(s-s')) / 2.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    sp = np.asarray(sp, dtype=float)
    tp = np.asarray(tp, dtype=float)
    return 0.5 * (np.asarray(v(np.abs(s + t - sp)))
                  + np.asarray(v(np.abs(s - sp - tp)))
                  - np.asarray(v(np.abs(s + t - sp - tp)))
                  - np.asarray(v(np.abs(s - sp))))


def shepp_correlation(v, s, t, sp, tp):
    num = shepp_covariance(v, s, t, sp, tp)
    den = np.sqrt(np.asarray(v(np.abs(t))) * np.asarray(v(np.abs(tp))))
    return num / den


def _model_variogram(m):
    if isinstance(m, (StationaryCovariance, StationaryIncrementVariogram,
                      FbmMixture, IntegratedStationary)):
        return m.variogram
    raise ModelError(f"model {type(m).__name__} has no correlation representation "
                     "for increment fields")


# ---------------------------------------------------------------------------
# local expansion of the normalized increment field


@dataclasses.dataclass(frozen=True)
class LocalExpansion:
    """Local parameters of the normalized increment field at window T.

    After dividing by sigma_T = sqrt(v(T)), the normalized variogram behaves
    like (a t)^alpha at 0 and the normalized standard deviation like
    1 - b (T - t)^beta at the window edge.
    """

    alpha: float
    a: float
    beta: float
    b: float
    sigma_T: float


def local_expansion(m, T) -> LocalExpansion:
    """Closed-form local parameters for models that expose them.

    Only catalog covariances, fBm mixtures and integrated processes carry
    exact local data; bare callables would need symbolic differentiation.
    """
    T = float(T)
    if T <= 0.0:
        raise ParameterError(f"window T must be positive, got {T!r}")
    if isinstance(m, FbmMixture):
        lam, hs = np.asarray(m.lambdas), np.asarray(m.hursts)
        sigma2_T = float(np.sum(lam ** 2 * T ** (2 * hs)))
        alpha = 2.0 * hs[0]
        a_raw = lam[0] ** (1.0 / hs[0])
        dv = float(np.sum(lam ** 2 * 2 * hs * T ** (2 * hs - 1)))
        b = dv / (2.0 * sigma2_T)
    elif isinstance(m, IntegratedStationary):
        sigma2_T = float(m.variance(T))
        if sigma2_T <= 0.0:
            raise ModelError("integrated-process variance is not positive at T")
        alpha = 2.0
        a_raw = math.sqrt(m.n)
        b = m.mean_covariance_integral(T) / sigma2_T
    elif isinstance(m, StationaryCovariance):
        if m.builtin is None:
            raise ModelError("local expansion needs a catalog covariance with "
                             "closed-form derivatives")
        bi = m.builtin
        sigma2_T = float(2.0 * (1.0 - float(np.asarray(bi.r(T)))))
        if sigma2_T <= 0.0:
            raise ModelError("increment variance vanishes at T")
        alpha = bi.alpha0
        a_raw = (2.0 * bi.coeff0) ** (1.0 / bi.alpha0)
        b = bi.dr_abs(T) / sigma2_T
    else:
        raise ModelError(f"model {type(m).__name__} has no increment-field "
                         "local expansion")
    sigma_T = math.sqrt(sigma2_T)
    a = a_raw * sigma_T ** (-2.0 / alpha)
    return LocalExpansion(alpha=float(alpha), a=float(a), beta=1.0, b=float(b),
                          sigma_T=sigma_T)


def mapped_regime_params(m, T) -> tuple[RegimeParams, float]:
    """RegimeParams of the normalized increment field, plus sigma_T.

    The increment structure makes both local coefficients equal: the field
    moves through X(s+t) and X(s) at the same speed, so a1 = a2 = a3 =
    2^(-1/alpha) * a.
    """
    le = local_expansion(m, T)
    coef = 2.0 ** (-1.0 / le.alpha) * le.a
    p = RegimeParams(alpha1=le.alpha, alpha2=le.alpha, beta=le.beta,
                     a1=coef, a2=coef, a3=coef, b=le.b)
    return p, le.sigma_T


# ---------------------------------------------------------------------------
# assumption probes


@dataclasses.dataclass(frozen=True)
class ExpansionProbeRow:
    scale: float
    direction: str
    ratio: float


@dataclasses.dataclass(frozen=True)
class ExpansionProbeReport:
    rows: tuple
    converged: bool


def _a2_expression(p, ds, dt):
    return (abs(p.a1 * ds) ** p.alpha1 + abs(p.a2 * dt + p.a3 * ds) ** p.alpha2)


def validate_local_expansion(m, p, probe_scales, T=1.0, s0=None) -> ExpansionProbeReport:
    """Probe the claimed local correlation expansion near the variance
    maximizer.

    For each scale h the probe evaluates
    (1 - corr) / (|a1 ds|^alpha1 + |a2 dt + a3 ds|^alpha2)
    along the t, s and antidiagonal directions at the point (s0, T).  Ratios
    approaching 1 support the claim; the report flags otherwise but never
    raises.  The antidiagonal keeps s + t fixed, so it isolates the a3 cross
    term.
    """
    scales = [float(h) for h in probe_scales]
    if any(h2 >= h1 for h1, h2 in zip(scales, scales[1:])):
        raise ParameterError("probe scales must be strictly decreasing")
    v = _model_variogram(m)
    T = float(T)
    if s0 is None:
        s0 = 2.0 * T
    rows = []
    for h in scales:
        if not (0.0 < h < T):
            raise ParameterError(f"probe scale {h!r} must lie in (0, T)")
        # (ds, dt) are coordinate differences; both probe points keep t <= T
        pairs = (
            ("t", 0.0, h),
            ("s", h, 0.0),
            ("diag", h, -h),
        )
        for label, ds, dt in pairs:
            s1, t1 = s0 + ds, T + min(dt, 0.0)
            s2, t2 = s0, T - max(dt, 0.0)
            corr = float(shepp_correlation(v, s1, t1, s2, t2))
            denom = _a2_expression(p, ds, dt)
            ratio = (1.0 - corr) / denom if denom > 0 else math.nan
            rows.append(ExpansionProbeRow(scale=h, direction=label, ratio=ratio))
    finest = [r.ratio for r in rows if r.scale == scales[-1]] if scales else []
    converged = bool(finest) and all(math.isfinite(x) and abs(x - 1.0) < 0.05
                                     for x in finest)
    return ExpansionProbeReport(rows=tuple(rows), converged=converged)


def weak_dependence_probe(m, p, lags, s_window=1.0, t_window=1.0):
    """Berman-type decay diagnostic: for each lag v, maximize |corr| over a
    coarse grid with s - s' >= v and report (lag, max|corr| * (ln v)^c).

    c = 1 + max(0, beta - max(alpha1, alpha2)) from the supplied parameters.
    A sequence decaying toward 0 supports the asymptotic-independence
    condition.  Grids are dyadic so that exactly-zero correlations (disjoint
    Brownian increments) survive floating point untouched.
    """
    lags = [float(v) for v in lags]
    if any(v <= 1.0 for v in lags):
        raise ParameterError("lags must exceed 1 so that ln(lag) is positive")
    vario = _model_variogram(m)
    c = 1.0 + max(0.0, p.beta - max(p.alpha1, p.alpha2))
    # dyadic probe offsets inside the windows keep exact-zero covariances exact
    t_probe = np.array([0.25, 0.5, 0.75, 1.0]) * t_window
    s_probe = np.array([0.0, 0.5, 1.0]) * s_window
    sep_extra = np.array([0.0, 0.5, 1.0]) * s_window
    out = []
    for v in lags:
        worst = 0.0
        for sp in s_probe:
            for ex in sep_extra:
                s = sp + v + ex  # separation s - s' = v + ex >= v
                for t in t_probe:
                    for tp in t_probe:
                        rho = float(shepp_correlation(vario, s, t, sp, tp))
                        worst = max(worst, abs(rho))
        out.append((v, worst * math.log(v) ** c))
    return out


# ---------------------------------------------------------------------------
# config parsing

_MODEL_KINDS = ("stationary_covariance", "fbm_mixture", "integrated", "storage")


def parse_config_text(text):
    """Parse flat `key = value` lines into an ordered dict of strings.

    '#' starts a comment; blank lines are skipped; duplicate keys are
    rejected so that a config file reads unambiguously.
    """
    out = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected 'key = value', got {raw!r}")
        key, val = line.split("=", 1)
        key, val = key.strip(), val.strip()
        if not key:
            raise ConfigError(f"line {ln}: empty key")
        if key in out:
            raise ConfigError(f"line {ln}: duplicate key {key!r}")
        out[key] = val
    return out


def _as_float(d, key):
    try:
        return float(d[key])
    except KeyError:
        raise ConfigError(f"missing required key {key!r}") from None
    except ValueError:
        raise ConfigError(f"key {key!r} must be a number, got {d[key]!r}") from None


def _as_float_list(d, key):
    try:
        raw = d[key]
    except KeyError:
        raise ConfigError(f"missing required key {key!r}") from None
    try:
        return [float(x) for x in raw.split(",") if x.strip() != ""]
    except ValueError:
        raise ConfigError(f"key {key!r} must be a comma-separated number list, "
                          f"got {raw!r}") from None


def _reject_unknown(d, allowed):
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")


def parse_model_config(text) -> FieldModel:
    """Build a FieldModel from flat config text with a `kind` discriminator."""
    d = parse_config_text(text)
    kind = d.get("kind")
    if kind not in _MODEL_KINDS:
        raise ConfigError(f"config must set kind to one of {_MODEL_KINDS}, "
                          f"got {kind!r}")
    if kind == "stationary_covariance":
        _reject_unknown(d, {"kind", "r", "alpha", "beta"})
        name = d.get("r")
        if name is None:
            raise ConfigError("stationary_covariance needs key 'r' naming a "
                              "builtin covariance")
        params = {}
        if "alpha" in d:
            params["alpha"] = _as_float(d, "alpha")
        if "beta" in d:
            params["beta"] = _as_float(d, "beta")
        bi = make_builtin_covariance(name, **params)
        return StationaryCovariance(r=bi.r, builtin=bi)
    if kind == "fbm_mixture":
        _reject_unknown(d, {"kind", "lambdas", "hursts"})
        return FbmMixture(lambdas=tuple(_as_float_list(d, "lambdas")),
                          hursts=tuple(_as_float_list(d, "hursts")))
    if kind == "integrated":
        _reject_unknown(d, {"kind", "r_zeta", "alpha", "beta", "n"})
        name = d.get("r_zeta")
        if name is None:
            raise ConfigError("integrated needs key 'r_zeta' naming a builtin "
                              "covariance")
        params = {}
        if "alpha" in d:
            params["alpha"] = _as_float(d, "alpha")
        if "beta" in d:
            params["beta"] = _as_float(d, "beta")
        bi = make_builtin_covariance(name, **params)
        n = int(_as_float(d, "n")) if "n" in d else 1
        return IntegratedStationary(r_zeta=bi.r, n=n)
    # storage
    _reject_unknown(d, {"kind", "hurst", "c"})
    return Storage(hurst=_as_float(d, "hurst"), c=_as_float(d, "c"))

"""Monte Carlo estimators for Pickands, Piterbarg and mixed constants.

The Pickands constant uses the exact tilted-ratio identity on a lattice
(every lattice site has unit expected exponential weight), the Piterbarg
constant uses the direct expectation of the exponential supremum, and the
mixed two-parameter constant uses an exact window-tilting identity when the
drift is linear, falling back to the direct estimator otherwise.  Grid bias
is removed by Richardson extrapolation over a step ladder driven by common
random numbers.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from fractions import Fraction

import numpy as np
from scipy.ndimage import maximum_filter1d
from scipy.special import logsumexp

from .errors import (NumericalError, ParameterError, SizeError,
                     UnresolvedConstantError)
from .model import GridSpec, RegimeParams, Regime, classify_regime
from .simulate import RngStream, fbm_batch

_SQRT2 = math.sqrt(2.0)
_SQRT_PI = math.sqrt(math.pi)
_EXP_LO, _EXP_HI = -40.0, 700.0
_EXP_WARN = 600.0


@dataclasses.dataclass(frozen=True)
class ConstantEstimate:
    """A Monte Carlo constant estimate with its sampling setup.

    ladder holds (label, value) diagnostics: the grid-step ladder behind a
    Richardson extrapolation, or the (S, 2S) window ladder for the mixed
    constant.
    """

    value: float
    std_error: float
    replications: int
    grid_step: float
    window: float
    two_sided: bool
    ladder: tuple = ()


# ---------------------------------------------------------------------------
# closed forms


def lookup_known_constant(kind, alpha=None, b=None) -> float:
    """Closed-form values: Pickands at alpha = 1 (value 1) and alpha = 2
    (1/sqrt(pi)), Piterbarg at alpha = 1 (1 + 1/b).  Anything else raises
    UnresolvedConstantError."""
    if kind == "pickands":
        if alpha == 1.0:
            return 1.0
        if alpha == 2.0:
            return 1.0 / _SQRT_PI
        raise UnresolvedConstantError(f"pickands(alpha={alpha!r})")
    if kind == "piterbarg":
        if alpha == 1.0 and b is not None and b > 0:
            return 1.0 + 1.0 / float(b)
        raise UnresolvedConstantError(f"piterbarg(alpha={alpha!r}, b={b!r})")
    raise UnresolvedConstantError(f"{kind}()")


# ---------------------------------------------------------------------------
# shared numerics


def _clamped_exp(x):
    x = np.asarray(x, dtype=float)
    if np.any(x > _EXP_WARN):
        warnings.warn("exponent within 100 of the overflow clamp; the "
                      "estimate may be biased low", RuntimeWarning,
                      stacklevel=3)
    return np.exp(np.clip(x, _EXP_LO, _EXP_HI))


def _richardson(values, per_rep_mid, per_rep_fine):
    """Extrapolate a geometric step ladder to step 0.

    values = (v0, v1, v2) at steps (a, a/2, a/4).  The empirical rate
    q = (v1-v0)/(v2-v1) must be monotone and inside (1.1, 16); otherwise
    the finest value stands.  The standard error propagates the frozen
    extrapolation weights through the per-replication values.
    """
    v0, v1, v2 = values
    d01, d12 = v1 - v0, v2 - v1
    n = len(per_rep_fine)
    se_fine = float(np.std(per_rep_fine, ddof=1) / math.sqrt(n))
    if d12 == 0.0 or d01 * d12 <= 0.0:
        return float(v2), se_fine
    q = d01 / d12
    if not (1.1 < q < 16.0):
        return float(v2), se_fine
    c2 = q / (q - 1.0)
    c1 = -1.0 / (q - 1.0)
    y = c2 * per_rep_fine + c1 * per_rep_mid
    return float(c2 * v2 + c1 * v1), float(np.std(y, ddof=1) / math.sqrt(n))


def _check_positive(name, v):
    if not (v > 0) or not math.isfinite(v):
        raise ParameterError(f"{name} must be positive, got {v!r}")


def _check_alpha(alpha):
    if not (0.0 < alpha <= 2.0):
        raise ParameterError(f"alpha must lie in (0, 2], got {alpha!r}")


def _check_reps(reps):
    if reps < 16:
        raise ParameterError(f"reps must be at least 16, got {reps}")


# ---------------------------------------------------------------------------
# Pickands constant


def estimate_pickands(alpha, T=8.0, a=0.005, reps=100000, stream=None,
                      workers=None) -> ConstantEstimate:
    """Estimate the Pickands constant by the lattice ratio identity.

    On the lattice a Z intersected with [-T, T], with zeta(t) =
    sqrt(2) B_{alpha/2}(t) - |t|^alpha,

        value(a) = E[ exp(max zeta) / sum exp(zeta) ] / a

    equals the lattice constant at step a up to window truncation, because
    every site carries unit expected exponential weight.  The ladder
    a, a/2, a/4 shares one sample path per replication (decimation) and is
    Richardson-extrapolated to step 0.
    """
    alpha = float(alpha)
    _check_alpha(alpha)
    T, a, reps = float(T), float(a), int(reps)
    _check_positive("T", T)
    _check_positive("a", a)
    _check_reps(reps)
    if stream is None:
        raise ParameterError("an RngStream is required")
    n_base = int(round(T / a))
    if n_base < 1:
        raise ParameterError("T must be at least one grid step")
    step_fine = a / 4.0
    n_fine = 4 * n_base
    grid = GridSpec(origin=-n_fine * step_fine, step=step_fine,
                    count=2 * n_fine + 1)
    drift = np.abs(grid.axis()) ** alpha
    hurst = alpha / 2.0

    r_levels = np.empty((reps, 3))
    for r in range(reps):
        path = fbm_batch(hurst, grid, stream.child(r), 1)[0]
        zeta = _SQRT2 * path - drift
        for lvl, dec in enumerate((4, 2, 1)):
            z = zeta[::dec]
            r_levels[r, lvl] = math.exp(float(np.max(z)) - float(logsumexp(z)))

    steps = (a, a / 2.0, a / 4.0)
    per_level = [r_levels[:, i] / steps[i] for i in range(3)]
    values = tuple(float(np.mean(x)) for x in per_level)
    vinf, se = _richardson(values, per_level[1], per_level[2])
    ladder = tuple(zip((f"a={s:g}" for s in steps), values))
    return ConstantEstimate(value=vinf, std_error=se, replications=reps,
                            grid_step=a, window=T, two_sided=True,
                            ladder=ladder)


# ---------------------------------------------------------------------------
# Piterbarg constant


def estimate_piterbarg(alpha, b, T=8.0, a=0.005, reps=100000,
                       two_sided=False, stream=None,
                       workers=None) -> ConstantEstimate:
    """Estimate the Piterbarg constant E exp(sup sqrt(2) B_{alpha/2}(t)
    - (1 + b) |t|^alpha) over [0, T] (or [-T, T] when two_sided).

    The window bias decays exponentially in T; the grid bias is removed by
    the same decimation ladder as the Pickands estimator.  T = 0 collapses
    the window to {0}, where the supremum is exactly 0 and the constant 1.
    """
    alpha, b = float(alpha), float(b)
    _check_alpha(alpha)
    _check_positive("b", b)
    T, a, reps = float(T), float(a), int(reps)
    if T < 0:
        raise ParameterError(f"T must be nonnegative, got {T!r}")
    _check_positive("a", a)
    _check_reps(reps)
    if stream is None:
        raise ParameterError("an RngStream is required")
    if T == 0.0:
        return ConstantEstimate(value=1.0, std_error=0.0, replications=reps,
                                grid_step=a, window=0.0,
                                two_sided=bool(two_sided))
    n_base = int(round(T / a))
    if n_base < 1:
        raise ParameterError("T must be at least one grid step")
    step_fine = a / 4.0
    n_fine = 4 * n_base
    if two_sided:
        grid = GridSpec(origin=-n_fine * step_fine, step=step_fine,
                        count=2 * n_fine + 1)
    else:
        grid = GridSpec(origin=0.0, step=step_fine, count=n_fine + 1)
    drift = (1.0 + b) * np.abs(grid.axis()) ** alpha
    hurst = alpha / 2.0

    maxima = np.empty((reps, 3))
    for r in range(reps):
        path = fbm_batch(hurst, grid, stream.child(r), 1)[0]
        zeta = _SQRT2 * path - drift
        for lvl, dec in enumerate((4, 2, 1)):
            maxima[r, lvl] = float(np.max(zeta[::dec]))

    per_level = [np.asarray(_clamped_exp(maxima[:, i])) for i in range(3)]
    values = tuple(float(np.mean(x)) for x in per_level)
    steps = (a, a / 2.0, a / 4.0)
    vinf, se = _richardson(values, per_level[1], per_level[2])
    ladder = tuple(zip((f"a={s:g}" for s in steps), values))
    return ConstantEstimate(value=vinf, std_error=se, replications=reps,
                            grid_step=a, window=T, two_sided=bool(two_sided),
                            ladder=ladder)


# ---------------------------------------------------------------------------
# mixed constant: lattice construction for Y(s, t)


def _commensurate_w_step(x, y, max_den=4096):
    """Common refinement of two positive reals: delta with x = q delta,
    y = p delta for integers q, p.  Returns (delta, q, p) or None."""
    ratio = y / x
    frac = Fraction(ratio).limit_denominator(max_den)
    p, q = frac.numerator, frac.denominator
    if p == 0 or abs(float(frac) - ratio) > 1e-9 * max(ratio, 1.0):
        return None
    return x / q, q, p


class _FieldLattice:
    """Sampler for sqrt(2) Y - Var Y on a rectangular lattice, where
    Y(s, t) = B1(a1 s) + B2(a2 t - a3 s) with independent fBms of Hurst
    alpha1/2 and alpha2/2.

    Exactness relies on the second fBm's argument set living on one
    arithmetic lattice; construction raises SizeError when the two step
    products have no small common refinement.
    """

    def __init__(self, p: RegimeParams, i_vals, j_vals, delta_s, delta_t):
        self.p = p
        self.i_vals = np.asarray(i_vals, dtype=int)
        self.j_vals = np.asarray(j_vals, dtype=int)
        self.delta_s = float(delta_s)
        self.delta_t = float(delta_t)
        self.s = self.i_vals * self.delta_s
        self.t = self.j_vals * self.delta_t
        if self.s.min() > 0 or self.s.max() < 0:
            raise ParameterError("s lattice must contain 0")

        com = _commensurate_w_step(p.a2 * self.delta_t, abs(p.a3) * self.delta_s)
        if com is None:
            raise SizeError(
                "a2*step and a3*step have no small common refinement; "
                "choose commensurate steps for the lattice sampler")
        self.w_step, q, pp = com
        sgn = 1 if p.a3 > 0 else -1
        # w(i, j) = a2 dt j - a3 ds i = w_step * (q j - sgn p i)
        self.w_index = (q * self.j_vals[None, :]
                        - sgn * pp * self.i_vals[:, None])
        w_lo = min(int(self.w_index.min()), 0)
        w_hi = max(int(self.w_index.max()), 0)
        n_w = w_hi - w_lo + 1
        if n_w > (1 << 21) or len(self.i_vals) > (1 << 21):
            raise SizeError(f"lattice needs {n_w} fBm points; reduce the "
                            "window or enlarge the step")
        self.w_grid = GridSpec(origin=w_lo * self.w_step, step=self.w_step,
                               count=n_w)
        self.w_offset = -w_lo
        self.s_grid = GridSpec(origin=float(p.a1 * self.s[0]),
                               step=p.a1 * self.delta_s,
                               count=len(self.i_vals))
        self.var = (np.abs(p.a1 * self.s[:, None]) ** p.alpha1
                    + np.abs(p.a2 * self.t[None, :]
                             - p.a3 * self.s[:, None]) ** p.alpha2)

    def sample_sqrt2y_minus_var(self, rng_stream):
        """One draw of sqrt(2) Y - Var Y, shape (n_s, n_t)."""
        b1 = fbm_batch(self.p.alpha1 / 2.0, self.s_grid,
                       rng_stream.child(0), 1)[0]
        b2 = fbm_batch(self.p.alpha2 / 2.0, self.w_grid,
                       rng_stream.child(1), 1)[0]
        y = b1[:, None] + b2[self.w_index + self.w_offset]
        return _SQRT2 * y - self.var


# ---------------------------------------------------------------------------
# mixed constant estimator


def estimate_pickands_piterbarg(p: RegimeParams, S, T, a=0.05, reps=2000,
                                two_sided=False, stream=None, workers=None,
                                sigma_window=25.0) -> ConstantEstimate:
    """Estimate the mixed constant

        lim (1/S) E exp( sup_{[0,S] x [0,T]} sqrt(2) Y - Var Y - b t^beta )

    for the all-equal regime (beta = alpha2 = alpha1); the two-sided
    variant takes t in [-T, T] with drift b |t|^beta.

    With a linear drift (beta = 1) and a one-sided window the estimator
    uses an exact tilting identity: each lattice origin x0 contributes
    exp(-b t0) E[exp(max over the recentred window) / sum over the window],
    a ratio bounded by 1 with no heavy tail.  Origins far from both window
    edges share one recentred window, so S may be math.inf, in which case
    the interior term alone gives the limit.  Otherwise the direct
    estimator with clamped exponents runs, and both report an (S, 2S)
    window ladder instead of extrapolating in S.  sigma_window truncates
    recentred windows in s where the variance penalty has made sites
    negligible.
    """
    if not isinstance(p, RegimeParams):
        raise ParameterError("p must be a RegimeParams instance")
    regime = classify_regime(p)
    if regime is not Regime.AllEqual:
        raise ParameterError(
            "the mixed constant is defined for the all-equal regime "
            f"(beta = alpha2 = alpha1); got parameters in regime {regime.name}")
    if stream is None:
        raise ParameterError("an RngStream is required")
    T, a, reps = float(T), float(a), int(reps)
    if T < 0 or not math.isfinite(T):
        raise ParameterError(f"T must be nonnegative, got {T!r}")
    _check_positive("a", a)
    _check_positive("sigma_window", float(sigma_window))
    _check_reps(reps)
    infinite_S = S == math.inf
    if not infinite_S:
        S = float(S)
        _check_positive("S", S)
    tilted = (p.beta == 1.0) and not two_sided
    if infinite_S and not tilted:
        raise ParameterError("S = inf needs the tilted estimator "
                             "(linear drift, one-sided window)")
    if tilted:
        return _mixed_tilted(p, S, T, a, reps, stream, infinite_S,
                             float(sigma_window))
    return _mixed_direct(p, S, T, a, reps, two_sided, stream)


def _window_aggregates(row_max, row_sumexp, size):
    """Sliding max and sliding sum over every contiguous window of `size`
    along the last axis, indexed by the window's start.  Output length is
    n - size + 1 per row."""
    n = row_max.shape[-1]
    # origin -(size // 2) makes the filter window start at the output index
    f = maximum_filter1d(row_max, size=size, origin=-(size // 2),
                         mode="nearest", axis=-1)
    wmax = f[..., :n - size + 1]
    cs = np.cumsum(row_sumexp, axis=-1)
    wsum = np.empty_like(wmax)
    wsum[..., 0] = cs[..., size - 1]
    wsum[..., 1:] = cs[..., size:] - cs[..., :-size]
    return wmax, wsum


def _tilted_rowsums(row_max, row_sumexp, t_win, wgt, g):
    """For each row of window-shape aggregates over s, return
    sum_j0 wgt[j0] * R(shape, j0), sliding the t-window across positions.

    Position j0 has stored start index n_t - j0, hence the column flip.
    """
    wmax, wsum = _window_aggregates(row_max, row_sumexp, t_win)
    r = np.exp(wmax - g - np.log(wsum))[..., ::-1]
    return r @ wgt


def _mixed_tilted(p, S, T, a, reps, stream, infinite_S, sigma_window):
    delta = a
    # n_t = 0 degenerates the t-window to {0}, which stays well defined
    n_t = int(round(T / delta))
    if not infinite_S:
        n_s = int(round(S / delta))
        if n_s < 1:
            raise ParameterError("S must be at least one lattice step")
        S = n_s * delta
        n_half = min(int(math.ceil(sigma_window / delta)), 2 * n_s)
    else:
        n_s = None
        n_half = int(math.ceil(sigma_window / delta))
    t_idx = np.arange(-n_t, n_t + 1)
    i_idx = np.arange(-n_half, n_half + 1)
    lat = _FieldLattice(p, i_idx, t_idx, delta, delta)
    t_win = n_t + 1
    wgt = np.exp(-p.b * delta * np.arange(n_t + 1))
    mid = n_half

    est = np.empty(reps)
    est2 = None if infinite_S else np.empty(reps)
    for r in range(reps):
        zeta = lat.sample_sqrt2y_minus_var(stream.child(r)) \
            - p.b * lat.t[None, :]
        g = float(np.max(zeta))
        if g - float(np.min(zeta)) > 600.0:
            raise NumericalError(
                "field dynamic range exceeds exp() precision for the shared-"
                "shift window aggregation; reduce the window or the horizon")
        ez = np.exp(zeta - g)
        interior = float(_tilted_rowsums(zeta.max(axis=0), ez.sum(axis=0),
                                         t_win, wgt, g))
        if infinite_S:
            est[r] = interior / delta
            continue
        est[r], est2[r] = _finite_s_pair(zeta, ez, g, wgt, t_win, n_s,
                                         n_half, mid, delta, interior)

    value = float(np.mean(est))
    se = float(np.std(est, ddof=1) / math.sqrt(reps))
    if infinite_S:
        ladder = (("S=inf", value),)
    else:
        v2 = float(np.mean(est2))
        ladder = ((f"S={S:g}", value), (f"S={2 * S:g}", v2))
    return ConstantEstimate(value=value, std_error=se, replications=reps,
                            grid_step=a, window=T, two_sided=False,
                            ladder=ladder)


def _shape_rows(zeta, ez, n_origin, n_half, mid):
    """Row aggregates over s for each origin i0 = 0..n_origin, where the
    recentred window spans rows [mid - min(i0, n_half),
    mid + min(n_origin - i0, n_half)].

    Returns (max_rows, sum_rows, interior_count): stacked aggregates for
    the non-interior origins in i0 order, and how many origins share the
    full-lattice interior window.
    """
    n_rows, n_cols = zeta.shape
    sfx_max = np.maximum.accumulate(zeta[::-1], axis=0)[::-1]
    sfx_sum = np.cumsum(ez[::-1], axis=0)[::-1]
    pfx_max = np.maximum.accumulate(zeta, axis=0)
    pfx_sum = np.cumsum(ez, axis=0)
    flt_max = flt_sum = None
    if n_origin < 2 * n_half:
        # some windows touch neither lattice edge; they all share one size
        size = n_origin + 1
        flt_max, flt_sum = _s_window_aggregates(zeta, ez, size)
    max_rows, sum_rows = [], []
    interior = 0
    for i0 in range(n_origin + 1):
        lo = mid - min(i0, n_half)
        hi = mid + min(n_origin - i0, n_half)
        if lo == 0 and hi == n_rows - 1:
            interior += 1
        elif hi == n_rows - 1:
            max_rows.append(sfx_max[lo])
            sum_rows.append(sfx_sum[lo])
        elif lo == 0:
            max_rows.append(pfx_max[hi])
            sum_rows.append(pfx_sum[hi])
        else:
            max_rows.append(flt_max[lo])
            sum_rows.append(flt_sum[lo])
    return max_rows, sum_rows, interior


def _s_window_aggregates(zeta, ez, size):
    """Max and sum over every contiguous row window of `size`, indexed by
    the window's start row."""
    n = zeta.shape[0]
    f = maximum_filter1d(zeta, size=size, origin=-(size // 2),
                         mode="nearest", axis=0)
    wmax = f[:n - size + 1]
    cs = np.cumsum(ez, axis=0)
    wsum = np.empty_like(wmax)
    wsum[0] = cs[size - 1]
    wsum[1:] = cs[size:] - cs[:cs.shape[0] - size]
    return wmax, wsum


def _finite_s_pair(zeta, ez, g, wgt, t_win, n_s, n_half, mid, delta,
                   interior):
    """The tilted sums for windows S and 2S from one field sample."""
    S = n_s * delta
    out = []
    for n_origin, span in ((n_s, S), (2 * n_s, 2 * S)):
        max_rows, sum_rows, n_int = _shape_rows(zeta, ez, n_origin, n_half,
                                                mid)
        total = n_int * interior
        if max_rows:
            sums = _tilted_rowsums(np.stack(max_rows), np.stack(sum_rows),
                                   t_win, wgt, g)
            total += float(np.sum(sums))
        out.append(total / span)
    return out[0], out[1]


def _mixed_direct(p, S, T, a, reps, two_sided, stream):
    """Direct estimator (1/S) E exp(max zeta) with clamped exponents and an
    (S, 2S) window ladder sharing each field sample."""
    delta = a
    n_s = int(round(S / delta))
    n_t = int(round(T / delta))
    if n_s < 1:
        raise ParameterError("S must be at least one lattice step")
    S = n_s * delta
    i_idx = np.arange(0, 2 * n_s + 1)
    j_idx = np.arange(-n_t, n_t + 1) if two_sided else np.arange(0, n_t + 1)
    lat = _FieldLattice(p, i_idx, j_idx, delta, delta)
    drift = p.b * np.abs(lat.t) ** p.beta
    m1 = np.empty(reps)
    m2 = np.empty(reps)
    for r in range(reps):
        zeta = lat.sample_sqrt2y_minus_var(stream.child(r)) - drift[None, :]
        row_max = zeta.max(axis=1)
        m1[r] = float(np.max(row_max[:n_s + 1]))
        m2[r] = float(np.max(row_max))
    e1 = np.asarray(_clamped_exp(m1))
    e2 = np.asarray(_clamped_exp(m2))
    v1 = float(np.mean(e1)) / S
    v2 = float(np.mean(e2)) / (2 * S)
    se = float(np.std(e1, ddof=1) / math.sqrt(reps)) / S
    return ConstantEstimate(value=v1, std_error=se, replications=reps,
                            grid_step=a, window=T, two_sided=bool(two_sided),
                            ladder=((f"S={S:g}", v1), (f"S={2 * S:g}", v2)))

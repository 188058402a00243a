"""Exact Gaussian sampling on grids.

Stationary paths and fractional Gaussian noise go through circulant
embedding (FFT), fBm is integrated noise pinned at zero, general fields on
small grids go through dense Cholesky, and the storage process reduces to
a windowed running maximum of drifted fBm.  Everything is driven by
hierarchical, order-independent random streams so that any replication can
be regenerated in isolation.
"""

from __future__ import annotations

import dataclasses
import math
import struct
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.linalg import cholesky as _cholesky, LinAlgError
from scipy.ndimage import maximum_filter1d

from .errors import (ConfigurationWarning, ModelError, NumericalError,
                     ParameterError, SizeError)
from .model import (FbmMixture, GridSpec, IntegratedStationary,
                    StationaryCovariance, StationaryIncrementVariogram,
                    Storage, shepp_covariance, variogram_to_covariance)


# ---------------------------------------------------------------------------
# random streams


@dataclasses.dataclass(frozen=True)
class RngStream:
    """Hierarchical random stream: a master seed plus a substream path.

    Derivation is by SeedSequence spawn keys, so child(i) is deterministic,
    collision-resistant and independent of how many other children exist.
    Replication r of any experiment draws from stream.child(r), which makes
    results invariant under worker count and chunk scheduling.
    """

    master_seed: int
    substream_index: tuple = ()

    def __post_init__(self):
        if int(self.master_seed) != self.master_seed or self.master_seed < 0:
            raise ParameterError(f"master_seed must be a nonnegative integer, "
                                 f"got {self.master_seed!r}")
        object.__setattr__(self, "master_seed", int(self.master_seed))
        idx = tuple(int(i) for i in self.substream_index)
        if any(i < 0 for i in idx):
            raise ParameterError("substream indices must be nonnegative")
        object.__setattr__(self, "substream_index", idx)

    def child(self, *indices) -> "RngStream":
        return RngStream(self.master_seed, self.substream_index + tuple(indices))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.master_seed,
                                     spawn_key=self.substream_index)
        return np.random.Generator(np.random.PCG64(seq))


# ---------------------------------------------------------------------------
# sample containers


@dataclasses.dataclass(frozen=True)
class SamplePath1D:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if self.grid.ndim != 1 or vals.shape != (self.grid.count,):
            raise ParameterError("values must be 1-D and match grid.count")


@dataclasses.dataclass(frozen=True)
class FieldSample2D:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if self.grid.ndim != 2 or vals.shape != tuple(self.grid.count):
            raise ParameterError("values must be 2-D with shape grid.count")


def grid_supremum(sample) -> float:
    """Maximum of the sampled values."""
    return float(np.max(sample.values))


# ---------------------------------------------------------------------------
# circulant embedding


def _circulant_eigs(lags):
    """Eigenvalues of the minimal even circulant extension of a lag sequence."""
    n = len(lags)
    ext = np.concatenate([lags, lags[-2:0:-1]]) if n > 2 else np.asarray(lags)
    return np.fft.fft(ext).real, len(ext)


def _embed_lags(cov_at):
    """Find a nonnegative circulant embedding, doubling the lag range once.

    cov_at(k) must return covariance values for integer lag array k.  Tiny
    negative eigenvalues (relative to the largest) are clamped; a genuinely
    indefinite embedding falls back to the caller's dense path by raising.
    """
    def attempt(n):
        eigs, m = _circulant_eigs(cov_at(np.arange(n)))
        floor = -1e-8 * max(eigs.max(), 1e-300)
        if eigs.min() >= floor:
            return np.maximum(eigs, 0.0), m
        return None, m

    return attempt


def _sample_circulant(eigs, m, n, count, rng):
    """count exact N(0, C) samples of length n from circulant eigenvalues.

    With lambda = fft(c_ext), Z = sqrt(m) ifft(sqrt(lambda) (eta1 + i eta2))
    has real and imaginary parts independent N(0, C); each complex draw
    yields two samples.
    """
    half = (count + 1) // 2
    root = np.sqrt(eigs)
    eta = rng.standard_normal((half, m)) + 1j * rng.standard_normal((half, m))
    z = math.sqrt(m) * np.fft.ifft(root * eta, axis=1)
    out = np.empty((2 * half, n))
    out[0::2] = z.real[:, :n]
    out[1::2] = z.imag[:, :n]
    return out[:count]


def _stationary_samples(cov_at, n, count, rng, context):
    """count samples of a length-n stationary Gaussian vector with lag
    covariance cov_at(k), via circulant embedding with one doubling retry
    and a dense Cholesky fallback."""
    if n == 1:
        sd = math.sqrt(max(float(cov_at(np.array([0]))[0]), 0.0))
        return sd * rng.standard_normal((count, 1))
    attempt = _embed_lags(cov_at)
    for size in (n, 2 * n):
        eigs, m = attempt(size)
        if eigs is not None:
            return _sample_circulant(eigs, m, n, count, rng)
    # fall back to a dense factorization of the Toeplitz covariance
    lags = cov_at(np.arange(n))
    cov = np.empty((n, n))
    idx = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    cov[:] = lags[idx]
    L = _chol_with_jitter(cov, context)
    return rng.standard_normal((count, n)) @ L.T


def _chol_with_jitter(cov, context):
    """Lower Cholesky factor with an escalating diagonal jitter ladder."""
    scale = float(np.mean(np.diag(cov))) or 1.0
    last_err = None
    for jitter in (0.0, 1e-12, 1e-10, 1e-8):
        try:
            shifted = cov if jitter == 0.0 else cov + jitter * scale * np.eye(len(cov))
            return _cholesky(shifted, lower=True)
        except LinAlgError as e:
            last_err = e
    pivot = _failing_pivot(last_err)
    raise NumericalError(
        f"{context}: covariance is not positive definite even with jitter "
        f"1e-8 (failing pivot {pivot})")


def _failing_pivot(err):
    # scipy reports "k-th leading minor ... not positive definite"
    for tok in str(err).split():
        if tok.rstrip("-thstnrd").isdigit():
            return int(tok.rstrip("-thstnrd"))
    return "unknown"


# ---------------------------------------------------------------------------
# public samplers


def sample_stationary_path(r, grid: GridSpec, stream: RngStream) -> SamplePath1D:
    """One exact sample of a stationary Gaussian path with covariance r."""
    if grid.ndim != 1:
        raise ParameterError("sample_stationary_path needs a 1-D grid")
    rng = stream.generator()
    n, h = int(grid.count), float(grid.step)
    cov_at = lambda k: np.asarray(r(k * h), dtype=float)
    vals = _stationary_samples(cov_at, n, 1, rng, "stationary path")[0]
    return SamplePath1D(grid=grid, values=vals)


def fgn_increments(hurst, step, n, count, rng):
    """count rows of n exact fractional Gaussian noise increments at the
    given step: increments of B_H over consecutive cells."""
    if not (0.0 < hurst <= 1.0):
        raise ParameterError(f"hurst must lie in (0, 1], got {hurst!r}")
    if hurst == 0.5:
        return math.sqrt(step) * rng.standard_normal((count, n))
    if hurst == 1.0:
        # B(t) = t Z exactly: every increment equals step * Z
        z = rng.standard_normal((count, 1))
        return (step * z) * np.ones((1, n))
    h2 = 2.0 * hurst

    def cov_at(k):
        k = np.abs(np.asarray(k, dtype=float))
        return 0.5 * step ** h2 * ((k + 1) ** h2 - 2 * k ** h2
                                   + np.abs(k - 1) ** h2)

    return _stationary_samples(cov_at, n, count, rng, "fGn")


def sample_fbm(hurst, grid: GridSpec, stream: RngStream) -> SamplePath1D:
    """One exact fBm sample on a 1-D grid that contains 0.

    The grid may start at a negative origin; the path is pinned to 0 at the
    grid point closest to the origin of time (which must lie on the grid).
    """
    vals = fbm_batch(hurst, grid, stream, 1)[0]
    return SamplePath1D(grid=grid, values=vals)


def fbm_batch(hurst, grid: GridSpec, stream: RngStream, count: int) -> np.ndarray:
    """count exact fBm samples, shape (count, grid.count)."""
    if grid.ndim != 1:
        raise ParameterError("fBm sampling needs a 1-D grid")
    n, h, o = int(grid.count), float(grid.step), float(grid.origin)
    i0 = round(-o / h)
    if not (0 <= i0 < n) or abs(-o / h - i0) > 1e-9:
        raise ParameterError("fBm grid must contain t = 0 as a grid point")
    rng = stream.generator()
    if n == 1:
        return np.zeros((count, 1))
    inc = fgn_increments(hurst, h, n - 1, count, rng)
    walk = np.concatenate([np.zeros((count, 1)), np.cumsum(inc, axis=1)], axis=1)
    return walk - walk[:, i0:i0 + 1]


def sample_fbm_mixture(model: FbmMixture, grid: GridSpec,
                       stream: RngStream) -> SamplePath1D:
    """One sample of sum_i lambda_i B_{H_i} with independent components.

    Component i draws from stream.child(i), so a one-component mixture with
    lambda = 1 reproduces sample_fbm(H, grid, stream.child(0)) exactly.
    """
    if grid.ndim != 1:
        raise ParameterError("mixture sampling needs a 1-D grid")
    total = np.zeros(int(grid.count))
    for i, (lam, hurst) in enumerate(zip(model.lambdas, model.hursts)):
        total = total + lam * fbm_batch(hurst, grid, stream.child(i), 1)[0]
    return SamplePath1D(grid=grid, values=total)


def integrated_cholesky(model: IntegratedStationary, grid: GridSpec) -> np.ndarray:
    """Lower Cholesky factor of the exact covariance of the integrated
    process on the grid.  Stationary increments give
    Cov(X(t), X(s)) = (v(t) + v(s) - v(|t-s|)) / 2 with v the variance."""
    if grid.ndim != 1:
        raise ParameterError("integrated-process sampling needs a 1-D grid")
    t = grid.axis()
    if t[0] < 0:
        raise ParameterError("integrated-process grid must start at t >= 0")
    # variance at every distinct lag; the grid is uniform so lags are shared
    v_lag = model.variance(grid.step * np.arange(int(grid.count)))
    v_t = v_lag if t[0] == 0.0 else model.variance(t)
    idx = np.abs(np.subtract.outer(np.arange(len(t)), np.arange(len(t))))
    cov = 0.5 * (v_t[:, None] + v_t[None, :] - v_lag[idx])
    zero_var = v_t <= 0
    cov[zero_var, :] = 0.0
    cov[:, zero_var] = 0.0
    cov[zero_var, zero_var] = 1e-300  # keep the factorization defined at t = 0
    return _chol_with_jitter(cov, "integrated process")


def sample_integrated_process(model: IntegratedStationary, grid: GridSpec,
                              stream: RngStream) -> SamplePath1D:
    """One exact sample of the integrated stationary process on the grid."""
    L = integrated_cholesky(model, grid)
    vals = L @ stream.generator().standard_normal(L.shape[0])
    return SamplePath1D(grid=grid, values=vals)


def derive_shepp_field(model, window: float):
    """Covariance callable of the increment field Z(s, t) = X(s+t) - X(s)
    on coordinates (s in [0, S], t in (0, window]).

    Valid for any model with a variogram representation; the callable
    broadcasts over coordinate arrays (s, t, sp, tp).
    """
    if isinstance(model, Storage):
        raise ModelError("the storage process is not an increment field; "
                         "use sample_storage_path")
    if isinstance(model, (StationaryCovariance, StationaryIncrementVariogram,
                          FbmMixture, IntegratedStationary)):
        v = model.variogram
    else:
        raise ModelError(f"no increment-field covariance for {type(model).__name__}")
    window = float(window)
    if window <= 0:
        raise ParameterError("window must be positive")

    def cov(s, t, sp, tp):
        return shepp_covariance(v, s, t, sp, tp)

    cov.window = window
    cov.variogram = v
    return cov


_CHOLESKY_POINT_CAP = 4096


def sample_field_cholesky(cov, grid: GridSpec, stream: RngStream,
                          jitter: float = 1e-12):
    """Exact dense sampling of a Gaussian field on a small grid.

    cov takes broadcastable coordinate arrays: (t, tp) for a 1-D grid,
    (s, t, sp, tp) for a 2-D grid.  Grids above 4096 total points are
    rejected (the dense factorization is cubic).  The covariance matrix
    must be symmetric to 1e-8; an escalating jitter ladder starting at
    `jitter` handles borderline rank deficiency.
    """
    if grid.total > _CHOLESKY_POINT_CAP:
        raise SizeError(f"grid has {grid.total} points, above the dense cap "
                        f"{_CHOLESKY_POINT_CAP}")
    if not (0.0 <= jitter <= 1e-6):
        raise ParameterError(f"jitter must lie in [0, 1e-6], got {jitter!r}")
    if grid.ndim == 1:
        t = grid.axis()
        mat = np.asarray(cov(t[:, None], t[None, :]), dtype=float)
        shape = (len(t),)
    else:
        s_ax, t_ax = grid.axis(0), grid.axis(1)
        ss, tt = np.meshgrid(s_ax, t_ax, indexing="ij")
        sf, tf = ss.ravel(), tt.ravel()
        mat = np.asarray(cov(sf[:, None], tf[:, None], sf[None, :], tf[None, :]),
                         dtype=float)
        shape = ss.shape
    asym = float(np.max(np.abs(mat - mat.T))) if mat.size else 0.0
    if asym > 1e-8:
        raise ModelError(f"covariance matrix is asymmetric (max deviation {asym:.3e})")
    mat = 0.5 * (mat + mat.T)
    if jitter > 0:
        mat = mat + jitter * max(float(np.mean(np.diag(mat))), 1e-300) * np.eye(len(mat))
    L = _chol_with_jitter(mat, "field covariance")
    vals = (L @ stream.generator().standard_normal(len(mat))).reshape(shape)
    if grid.ndim == 1:
        return SamplePath1D(grid=grid, values=vals)
    return FieldSample2D(grid=grid, values=vals)


def storage_time_scale(hurst, c) -> float:
    """Characteristic time c^{-1/(1-H)} past which the drift has beaten the
    fluctuation of B_H(t) - c t at the bulk scale."""
    return float(c) ** (-1.0 / (1.0 - float(hurst)))


def sample_storage_path(hurst, c, grid: GridSpec, stream: RngStream,
                        horizon_mult: float = 10.0,
                        strict: bool = False) -> SamplePath1D:
    """One sample of the storage process Z(s) = sup_{t >= s} (B_H(t) - B_H(s)
    - c (t - s)) on a 1-D grid starting at 0.

    The supremum is truncated at lookahead horizon_mult * c^{-1/(1-H)};
    the neglected mass is roughly Psi(c * horizon^{1-H}), about 1e-8 at the
    default multiplier for H = 1/4, c = 1.  Multipliers below 5 warn
    (ConfigurationWarning), or raise when strict=True.
    """
    if not (0.0 < hurst < 1.0):
        raise ParameterError(f"storage Hurst index must lie in (0, 1), got {hurst!r}")
    if not c > 0:
        raise ParameterError(f"service rate must be positive, got {c!r}")
    if grid.ndim != 1 or float(grid.origin) != 0.0:
        raise ParameterError("storage sampling needs a 1-D grid starting at 0")
    horizon_mult = float(horizon_mult)
    if horizon_mult <= 0:
        raise ParameterError("horizon_mult must be positive")
    if horizon_mult < 5.0:
        msg = (f"storage horizon multiplier {horizon_mult} is below 5; the "
               "truncated supremum may visibly undershoot")
        if strict:
            raise ParameterError(msg)
        warnings.warn(msg, ConfigurationWarning, stacklevel=2)
    h = float(grid.step)
    n_s = int(grid.count)
    horizon = horizon_mult * storage_time_scale(hurst, c)
    w = int(math.ceil(horizon / h)) + 1
    total = n_s + w - 1
    ext = GridSpec(origin=0.0, step=h, count=total)
    b = fbm_batch(hurst, ext, stream, 1)[0]
    drifted = b - c * ext.axis()
    if n_s == 1:
        z = np.array([float(np.max(drifted)) - drifted[0]])
    else:
        # forward-window running max: window of size w starting at each index
        fwd = maximum_filter1d(drifted, size=w, origin=-(w // 2),
                               mode="nearest")
        z = fwd[:n_s] - drifted[:n_s]
    return SamplePath1D(grid=grid, values=np.maximum(z, 0.0))


# ---------------------------------------------------------------------------
# replication engine

_CHUNK = 1024


def replicate(fn, reps, stream: RngStream, workers: int | None = None):
    """Evaluate fn(stream.child(r)) for r = 0..reps-1, in fixed-size chunks.

    Chunks may run on a thread pool, but results are merged in chunk order
    and every replication uses its own substream, so the output is
    bit-identical for any worker count.
    """
    reps = int(reps)
    if reps < 1:
        raise ParameterError(f"reps must be positive, got {reps!r}")
    chunks = [(k, min(k + _CHUNK, reps)) for k in range(0, reps, _CHUNK)]

    def run(chunk):
        lo, hi = chunk
        return [fn(stream.child(r)) for r in range(lo, hi)]

    if workers is None or workers <= 1 or len(chunks) == 1:
        parts = [run(ch) for ch in chunks]
    else:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            parts = list(pool.map(run, chunks))
    out = [x for part in parts for x in part]
    return np.asarray(out)


# ---------------------------------------------------------------------------
# path output

_GXTR_MAGIC = b"GXTR"
_GXTR_VERSION = 1


def write_path_gxtr(sample, fh):
    """Binary layout: magic 'GXTR', u16 version, u16 dim, two u32 counts
    (second is 1 for paths), then the values as little-endian float64."""
    vals = sample.values
    if vals.ndim == 1:
        n0, n1 = len(vals), 1
        dim = 1
    else:
        n0, n1 = vals.shape
        dim = 2
    fh.write(_GXTR_MAGIC)
    fh.write(struct.pack("<HHII", _GXTR_VERSION, dim, n0, n1))
    fh.write(np.ascontiguousarray(vals, dtype="<f8").tobytes())


def read_path_gxtr(fh):
    """Inverse of write_path_gxtr; returns (dim, values array)."""
    head = fh.read(16)
    if len(head) != 16 or head[:4] != _GXTR_MAGIC:
        raise ParameterError("not a GXTR file (bad magic or truncated header)")
    version, dim, n0, n1 = struct.unpack("<HHII", head[4:])
    if version != _GXTR_VERSION:
        raise ParameterError(f"unsupported GXTR version {version}")
    raw = fh.read(8 * n0 * n1)
    if len(raw) != 8 * n0 * n1:
        raise ParameterError("GXTR payload truncated")
    data = np.frombuffer(raw, dtype="<f8")
    if dim == 1:
        return 1, data.copy()
    return 2, data.reshape(n0, n1).copy()


def write_path_csv(sample, fh):
    """Coordinate/value rows with full float precision."""
    if isinstance(sample, SamplePath1D):
        fh.write("t,value\n")
        for t, v in zip(sample.grid.axis(), sample.values):
            fh.write(f"{t:.17g},{v:.17g}\n")
    else:
        fh.write("s,t,value\n")
        s_ax, t_ax = sample.grid.axis(0), sample.grid.axis(1)
        for i, s in enumerate(s_ax):
            for j, t in enumerate(t_ax):
                fh.write(f"{s:.17g},{t:.17g},{sample.values[i, j]:.17g}\n")

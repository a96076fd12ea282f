"""Fractionally integrated ARMA models, stationary and time-varying.

A stationary FARIMA(p, d, q) process solves

    a(B) (1 - B)^d X_t = sigma * b(B) Z_t,     Z_t iid N(0, 1),

with ``a(z) = 1 - sum_j ar[j] z^(j+1)`` and ``b(z) = 1 + sum_j ma[j] z^(j+1)``.
The time-varying variant lets ``d``, the ARMA coefficients and the
innovation scale depend on rescaled time u = t / n_obs, which makes the
process locally stationary with spectral density

    f(u, lam) = sigma(u)^2 / (2*pi) * |b(u, e^{-i lam})|^2 / |a(u, e^{-i lam})|^2
                * |1 - e^{-i lam}|^{-2 d(u)}.

Simulation follows the truncated moving-average convention: the
short-memory part is generated recursively from zero initial
conditions over a burn-in prefix plus the sample, coefficients frozen
at u = t / n_obs per step (u = 0 throughout the burn-in), and the
fractional integration is applied as a truncated expansion over the
whole generated path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, signal, special

from .core import GaussianSource
from .errors import DomainError, InvalidArgumentError

__all__ = [
    "ConstantFn",
    "CosComposite",
    "FarimaSpec",
    "QuadratureResult",
    "SineWave",
    "SqrtSine",
    "TvFarimaSpec",
    "builtin_model",
    "frac_diff",
    "frac_diff_weights",
    "frac_integrate",
    "frac_integrate_weights",
    "simulate_farima",
    "simulate_tvfarima",
    "theoretical_distance_sq",
    "tv_spectral_density",
]

DEFAULT_BURN_IN = 8192
_STABILITY_MARGIN = 1e-8
_VALIDATION_GRID = 1024


# ----------------------------------------------------------------------
# fractional difference / integration weights and operators

def frac_diff_weights(d: float, n: int) -> np.ndarray:
    """First ``n`` series coefficients of ``(1 - B)^d``.

    ``w[0] = 1`` and ``w[j] = w[j-1] * (j - 1 - d) / j``.
    """
    if n < 1:
        raise InvalidArgumentError(f"need at least one weight, got n={n}")
    d = float(d)
    j = np.arange(1, n, dtype=float)
    return np.concatenate(([1.0], np.cumprod((j - 1.0 - d) / j)))


def frac_integrate_weights(d: float, n: int) -> np.ndarray:
    """First ``n`` series coefficients of ``(1 - B)^(-d)``.

    ``w[0] = 1`` and ``w[j] = w[j-1] * (j - 1 + d) / j``.
    """
    if n < 1:
        raise InvalidArgumentError(f"need at least one weight, got n={n}")
    d = float(d)
    j = np.arange(1, n, dtype=float)
    return np.concatenate(([1.0], np.cumprod((j - 1.0 + d) / j)))


class _ConvKernel:
    """Truncated convolution with a fixed weight sequence, FFT-backed.

    Applying the kernel to ``x`` returns ``y`` with
    ``y[t] = sum_{j<=t} w[j] * x[t-j]``, the convolution truncated at
    the start of the sample.
    """

    __slots__ = ("n", "nfft", "wf")

    def __init__(self, weights: np.ndarray, n: int):
        self.n = n
        self.nfft = 1 << int(max(2 * n - 1, 1)).bit_length()
        self.wf = np.fft.rfft(weights, self.nfft)

    def apply(self, x: np.ndarray) -> np.ndarray:
        xf = np.fft.rfft(x, self.nfft)
        return np.fft.irfft(xf * self.wf, self.nfft)[: self.n]


def _frac_apply(x, d, weight_fn):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidArgumentError(f"expected a one-dimensional array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("input contains NaN or infinite values")
    if d == 0.0:
        return x.copy()
    n = x.size
    return _ConvKernel(weight_fn(d, n), n).apply(x)


def frac_diff(values, d: float) -> np.ndarray:
    """Apply ``(1 - B)^d`` as a truncated expansion from the sample start.

    ``frac_diff(x, 0)`` returns a copy of ``x`` unchanged, and
    ``frac_diff(frac_integrate(x, d), d)`` recovers ``x`` up to
    rounding.
    """
    return _frac_apply(values, d, frac_diff_weights)


def frac_integrate(values, d: float) -> np.ndarray:
    """Apply ``(1 - B)^(-d)`` as a truncated expansion from the sample start."""
    return _frac_apply(values, d, frac_integrate_weights)


# ----------------------------------------------------------------------
# model specifications

def _max_inverse_root(ar) -> float:
    """Largest modulus among the inverse roots of 1 - sum ar[j] z^(j+1)."""
    ar = np.asarray(ar, dtype=float)
    if ar.size == 0:
        return 0.0
    return float(np.abs(np.roots(np.concatenate(([1.0], -ar)))).max())


@dataclass(frozen=True)
class FarimaSpec:
    """Parameters of a stationary FARIMA(p, d, q) model.

    ``d`` must lie in [0, 0.5) so the process has a square-integrable
    spectral density, ``sigma`` must be positive, and the AR polynomial
    must have all inverse roots of modulus below ``1 - 1e-8``.
    """

    d: float = 0.0
    ar: tuple = ()
    ma: tuple = ()
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "ar", tuple(float(a) for a in np.atleast_1d(self.ar)))
        object.__setattr__(self, "ma", tuple(float(b) for b in np.atleast_1d(self.ma)))
        object.__setattr__(self, "sigma", float(self.sigma))
        if not 0.0 <= self.d < 0.5:
            raise InvalidArgumentError(f"memory parameter d must lie in [0, 0.5), got {self.d}")
        if not (np.isfinite(self.sigma) and self.sigma > 0.0):
            raise InvalidArgumentError(f"sigma must be a positive finite number, got {self.sigma}")
        if not all(np.isfinite(self.ar)) or not all(np.isfinite(self.ma)):
            raise InvalidArgumentError("ARMA coefficients must be finite")
        rho = _max_inverse_root(self.ar)
        if rho >= 1.0 - _STABILITY_MARGIN:
            raise InvalidArgumentError(
                f"AR polynomial has an inverse root of modulus {rho:.10f}; "
                f"stationarity requires < {1.0 - _STABILITY_MARGIN}"
            )


# Picklable coefficient functions of rescaled time, usable as ``d``,
# ``sigma`` or ARMA entries of TvFarimaSpec.  Plain Python callables
# work too, but these survive a round trip through process pools.

@dataclass(frozen=True)
class ConstantFn:
    """Constant function of rescaled time."""

    value: float

    def __call__(self, u):
        if np.ndim(u):
            return np.full(np.shape(u), self.value)
        return self.value


@dataclass(frozen=True)
class SineWave:
    """``amplitude * sin(2*pi*cycles*u)``."""

    amplitude: float
    cycles: float = 1.0

    def __call__(self, u):
        return self.amplitude * np.sin(2.0 * np.pi * self.cycles * np.asarray(u, dtype=float))


@dataclass(frozen=True)
class CosComposite:
    """``amplitude * cos(phase - cos(2*pi*cycles*u))``, an oscillation
    whose local frequency itself oscillates."""

    amplitude: float = 0.8
    phase: float = 1.5
    cycles: float = 2.0

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        return self.amplitude * np.cos(self.phase - np.cos(2.0 * np.pi * self.cycles * u))


@dataclass(frozen=True)
class SqrtSine:
    """``sqrt(sin(pi*u))``: an innovation-scale profile that vanishes at
    both ends of the observation window."""

    def __call__(self, u):
        return np.sqrt(np.clip(np.sin(np.pi * np.asarray(u, dtype=float)), 0.0, None))


def _as_fn(value):
    if callable(value):
        return value
    return ConstantFn(float(value))


def _eval_fn(fn, u):
    """Evaluate a coefficient function on an array of rescaled times."""
    u = np.asarray(u, dtype=float)
    out = np.asarray(fn(u), dtype=float)
    if out.shape == u.shape:
        return out
    if out.ndim == 0:
        return np.full(u.shape, float(out))
    # scalar-only callable: fall back to a Python loop
    return np.array([float(fn(ui)) for ui in u])


@dataclass(frozen=True)
class TvFarimaSpec:
    """Time-varying FARIMA specification.

    Each field is either a number (held constant) or a callable of
    rescaled time u in [0, 1].  On construction the specification is
    frozen at 1024 interior grid points and each frozen model must be a
    valid :class:`FarimaSpec`; endpoints are deliberately not checked so
    profiles like :class:`SqrtSine` that vanish at u = 0 or u = 1 are
    allowed.
    """

    d: object = 0.0
    ar: tuple = ()
    ma: tuple = ()
    sigma: object = 1.0

    def __post_init__(self):
        ar = self.ar if isinstance(self.ar, (tuple, list)) else (self.ar,)
        ma = self.ma if isinstance(self.ma, (tuple, list)) else (self.ma,)
        object.__setattr__(self, "d", _as_fn(self.d))
        object.__setattr__(self, "ar", tuple(_as_fn(a) for a in ar))
        object.__setattr__(self, "ma", tuple(_as_fn(b) for b in ma))
        object.__setattr__(self, "sigma", _as_fn(self.sigma))
        self._validate_on_grid()

    @classmethod
    def from_constant(cls, spec: FarimaSpec) -> "TvFarimaSpec":
        return cls(d=spec.d, ar=spec.ar, ma=spec.ma, sigma=spec.sigma)

    def _validate_on_grid(self):
        u = (np.arange(_VALIDATION_GRID) + 0.5) / _VALIDATION_GRID
        dv = _eval_fn(self.d, u)
        if not np.all(np.isfinite(dv)) or dv.min() < 0.0 or dv.max() >= 0.5:
            raise InvalidArgumentError(
                "memory parameter d(u) must map [0, 1] into [0, 0.5); "
                f"observed range [{dv.min():.6g}, {dv.max():.6g}] on the check grid"
            )
        sv = _eval_fn(self.sigma, u)
        if not np.all(np.isfinite(sv)) or sv.min() <= 0.0:
            raise InvalidArgumentError(
                "sigma(u) must be positive on the interior of [0, 1]; "
                f"observed minimum {sv.min():.6g} on the check grid"
            )
        for fn in self.ma:
            mv = _eval_fn(fn, u)
            if not np.all(np.isfinite(mv)):
                raise InvalidArgumentError("MA coefficient function is not finite on [0, 1]")
        if self.ar:
            arm = np.column_stack([_eval_fn(fn, u) for fn in self.ar])
            if not np.all(np.isfinite(arm)):
                raise InvalidArgumentError("AR coefficient function is not finite on [0, 1]")
            if arm.shape[1] == 1:
                worst = float(np.abs(arm).max())
            else:
                worst = max(_max_inverse_root(row) for row in arm)
            if worst >= 1.0 - _STABILITY_MARGIN:
                raise InvalidArgumentError(
                    f"frozen AR polynomial loses stability on the check grid "
                    f"(max inverse-root modulus {worst:.10f})"
                )

    def frozen(self, u: float) -> FarimaSpec:
        """The stationary model obtained by freezing all coefficients at ``u``."""
        return FarimaSpec(
            d=float(self.d(u)),
            ar=tuple(float(fn(u)) for fn in self.ar),
            ma=tuple(float(fn(u)) for fn in self.ma),
            sigma=float(self.sigma(u)),
        )

    def d_max(self, grid: int = _VALIDATION_GRID) -> float:
        u = (np.arange(grid) + 0.5) / grid
        return float(_eval_fn(self.d, u).max())


def builtin_model(name: str, d: float = 0.2) -> TvFarimaSpec:
    """Named time-varying models used throughout the test-bench configs.

    ``tvma-cos``
        MA(1) whose coefficient oscillates as 0.8*cos(1.5 - cos(4*pi*u)).
    ``tvar-sin``
        AR(1) with coefficient 0.6*sin(4*pi*u).
    ``sigma-sin``
        Uncorrelated short-memory part with innovation scale
        sqrt(sin(pi*u)).
    """
    if name == "tvma-cos":
        return TvFarimaSpec(d=d, ma=(CosComposite(0.8, 1.5, 2.0),))
    if name == "tvar-sin":
        return TvFarimaSpec(d=d, ar=(SineWave(0.6, 2.0),))
    if name == "sigma-sin":
        return TvFarimaSpec(d=d, sigma=SqrtSine())
    raise InvalidArgumentError(
        f"unknown builtin model {name!r}; available: tvma-cos, tvar-sin, sigma-sin"
    )


# ----------------------------------------------------------------------
# simulation

def _check_sim_args(n_obs, rng, burn_in):
    if n_obs < 1:
        raise InvalidArgumentError(f"n_obs must be positive, got {n_obs}")
    if burn_in < 0:
        raise InvalidArgumentError(f"burn_in must be non-negative, got {burn_in}")
    if not isinstance(rng, GaussianSource):
        raise InvalidArgumentError("rng must be a GaussianSource")


def _arma_filter_const(e, ar, ma):
    b = np.concatenate(([1.0], np.asarray(ma, dtype=float)))
    a = np.concatenate(([1.0], -np.asarray(ar, dtype=float)))
    return signal.lfilter(b, a, e)


def _arma_filter_tv(e, ar_t, ma_t):
    """Recursive ARMA path with per-step coefficients, zero initial state."""
    n = e.size
    q = ma_t.shape[1] if ma_t is not None else 0
    w = e.copy()
    for j in range(1, q + 1):
        w[j:] += ma_t[j:, j - 1] * e[:-j]
    p = ar_t.shape[1] if ar_t is not None else 0
    if p == 0:
        return w
    y = np.empty(n)
    for t in range(n):
        acc = w[t]
        for j in range(1, min(p, t) + 1):
            acc += ar_t[t, j - 1] * y[t - j]
        y[t] = acc
    return y


def simulate_farima(spec: FarimaSpec, n_obs: int, rng: GaussianSource,
                    burn_in: int = DEFAULT_BURN_IN) -> np.ndarray:
    """Draw one path of length ``n_obs`` from a stationary FARIMA model.

    The ARMA recursion runs from zero initial conditions over
    ``burn_in + n_obs`` steps, the fractional integration is applied as
    a truncated expansion over that whole path, and the last ``n_obs``
    values are returned.

    Identical ``rng`` state and ``burn_in`` give bit-identical output
    across runs and platforms following IEEE-754 semantics.
    """
    _check_sim_args(n_obs, rng, burn_in)
    z = rng.standard_normal(burn_in + n_obs)
    e = spec.sigma * z
    y = _arma_filter_const(e, spec.ar, spec.ma) if (spec.ar or spec.ma) else e
    x = frac_integrate(y, spec.d)
    return x[-n_obs:]


def simulate_tvfarima(spec: TvFarimaSpec, n_obs: int, rng: GaussianSource,
                      burn_in: int = DEFAULT_BURN_IN) -> np.ndarray:
    """Draw one path of length ``n_obs`` from a time-varying FARIMA model.

    Coefficients are frozen at u = t / n_obs for the t-th in-sample
    step and at u = 0 throughout the burn-in.  With all coefficients
    constant the output is bit-identical to :func:`simulate_farima`
    under the same ``rng`` state, because the exact same filtering code
    paths are taken.
    """
    _check_sim_args(n_obs, rng, burn_in)
    total = burn_in + n_obs
    u = np.zeros(total)
    u[burn_in:] = np.arange(1, n_obs + 1, dtype=float) / n_obs
    z = rng.standard_normal(total)
    sig = _eval_fn(spec.sigma, u)
    e = sig * z

    ar_t = np.column_stack([_eval_fn(fn, u) for fn in spec.ar]) if spec.ar else None
    ma_t = np.column_stack([_eval_fn(fn, u) for fn in spec.ma]) if spec.ma else None

    def _is_const(mat):
        return mat is None or bool(np.all(mat == mat[0]))

    if _is_const(ar_t) and _is_const(ma_t):
        ar0 = ar_t[0] if ar_t is not None else ()
        ma0 = ma_t[0] if ma_t is not None else ()
        y = _arma_filter_const(e, ar0, ma0) if (len(ar0) or len(ma0)) else e
    else:
        y = _arma_filter_tv(e, ar_t, ma_t)

    dv = _eval_fn(spec.d, u)
    if np.all(dv == dv[0]):
        x = frac_integrate(y, float(dv[0]))
        return x[-n_obs:]
    # Time-varying memory: weights depend on the target time point, so
    # each in-sample value needs its own truncated expansion.
    out = np.empty(n_obs)
    for i in range(n_obs):
        g = burn_in + i
        w = frac_integrate_weights(dv[g], g + 1)
        out[i] = np.dot(w, y[g::-1])
    return out


# ----------------------------------------------------------------------
# population quantities

def tv_spectral_density(spec: TvFarimaSpec, u: float, freqs):
    """Time-varying spectral density ``f(u, lam)`` of ``spec``.

    Parameters
    ----------
    spec : TvFarimaSpec
    u : float
        Rescaled time in [0, 1].
    freqs : array_like or float
        Angular frequencies; the density diverges at 0 when d(u) > 0.

    Returns
    -------
    numpy.ndarray or float
        Density values, matching the shape of ``freqs``.
    """
    lam = np.asarray(freqs, dtype=float)
    scalar = lam.ndim == 0
    lam = np.atleast_1d(lam)
    z = np.exp(-1j * lam)
    b = np.ones_like(z)
    for j, fn in enumerate(spec.ma, start=1):
        b = b + float(fn(u)) * z**j
    a = np.ones_like(z)
    for j, fn in enumerate(spec.ar, start=1):
        a = a - float(fn(u)) * z**j
    # 4*sin(lam/2)^2 equals 2 - 2*cos(lam) but keeps full precision for
    # small lam, where the direct difference cancels catastrophically
    half_sin = np.sin(0.5 * lam)
    w = 4.0 * half_sin * half_sin
    d = float(spec.d(u))
    s2 = float(spec.sigma(u)) ** 2
    with np.errstate(divide="ignore"):
        f = s2 / (2.0 * np.pi) * (b.real**2 + b.imag**2) / (a.real**2 + a.imag**2) * w ** (-d)
    return float(f[0]) if scalar else f


@dataclass(frozen=True)
class QuadratureResult:
    """Value of a numerical integral together with an error estimate."""

    value: float
    error: float


def theoretical_distance_sq(spec, u_nodes: int = 257, lam_split: float = 1e-3,
                            singular_nodes: int = 48) -> QuadratureResult:
    """Population squared L2 distance from stationarity of ``spec``.

    Computes ``integral_0^1 integral_{-pi}^{pi} (f(u, lam) - fbar(lam))^2
    dlam du`` with ``fbar`` the time average of the density.  The time
    integral uses a fixed Gauss-Legendre rule; the frequency integral
    exploits symmetry, splits at ``lam_split``, handles the power-law
    divergence of the integrand near zero with a Gauss-Jacobi rule
    weighted by ``lam**(-4*d_max)``, and integrates the smooth remainder
    adaptively.

    Raises
    ------
    DomainError
        If ``sup_u d(u) >= 1/4``, where the integral stops being finite.
    """
    if isinstance(spec, FarimaSpec):
        spec = TvFarimaSpec.from_constant(spec)
    nodes, weights = np.polynomial.legendre.leggauss(u_nodes)
    ug = 0.5 * (nodes + 1.0)
    uw = 0.5 * weights

    dv = _eval_fn(spec.d, ug)
    d_max = max(float(dv.max()), spec.d_max())
    if d_max >= 0.25:
        raise DomainError(
            f"squared distance undefined: sup d(u) = {d_max:.4g} >= 1/4, the "
            "integrated squared density diverges"
        )
    s2 = _eval_fn(spec.sigma, ug) ** 2
    arm = np.column_stack([_eval_fn(fn, ug) for fn in spec.ar]) if spec.ar else None
    mam = np.column_stack([_eval_fn(fn, ug) for fn in spec.ma]) if spec.ma else None

    def density_profile(lam):
        z = np.exp(-1j * lam)
        if mam is not None:
            zp = z ** np.arange(1, mam.shape[1] + 1)
            b = 1.0 + mam @ zp
            bb = b.real**2 + b.imag**2
        else:
            bb = 1.0
        if arm is not None:
            zp = z ** np.arange(1, arm.shape[1] + 1)
            a = 1.0 - arm @ zp
            aa = a.real**2 + a.imag**2
        else:
            aa = 1.0
        # stable form of 2 - 2*cos(lam); the Jacobi nodes below reach
        # into the region where the direct difference loses most digits
        w = 4.0 * math.sin(0.5 * lam) ** 2
        return s2 / (2.0 * np.pi) * bb / aa * w ** (-dv)

    def deviation_sq(lam):
        f = density_profile(lam)
        fbar = uw @ f
        dev = f - fbar
        return float(uw @ (dev * dev))

    alpha = 4.0 * d_max

    def singular_part(n_nodes):
        # integral_0^split of lam^(-alpha) * [deviation_sq(lam) * lam^alpha]
        xj, wj = special.roots_jacobi(n_nodes, 0.0, -alpha)
        lam_j = lam_split * 0.5 * (xj + 1.0)
        h = np.array([deviation_sq(l) * l**alpha for l in lam_j])
        return (lam_split / 2.0) ** (1.0 - alpha) * float(wj @ h)

    near = singular_part(singular_nodes)
    near_err = abs(near - singular_part(max(singular_nodes // 2, 4)))
    far, far_err = integrate.quad(
        deviation_sq, lam_split, np.pi, epsabs=1e-12, epsrel=1e-10, limit=200
    )
    value = 2.0 * (near + far)
    return QuadratureResult(value=max(value, 0.0), error=2.0 * (near_err + far_err))

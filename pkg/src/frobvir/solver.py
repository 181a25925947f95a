"""Pseudo-spectral integration of algebra-valued Euler equations on a periodic interval.

State is the moment ``m`` in Fourier space (``rfft`` along the grid axis, one
column per algebra coordinate).  The velocity ``u`` is recovered mode by mode
by solving ``L_{S(kappa)} u_hat = m_hat`` with the regular representation of
the inertia symbol ``S(kappa) = alpha_0 + sum_k alpha_k kappa^(2k)``.

Two schemes are available:

* ``"rk4"``: classical RK4 on the full right-hand side.
* ``"ifrk4"``: integrating-factor RK4 where the dispersive term
  ``-zeta u_xxx = -(i kappa)^3 L_zeta L_S^{-1} m_hat`` is advanced exactly by a
  per-mode matrix exponential.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .algebra import FrobeniusAlgebra
from .euler import EulerEquation, Kind

log = logging.getLogger(__name__)

BLOWUP_THRESHOLD = 1e8
SINGULAR_TOL = 1e-12
GAUGE_TOL = 1e-10
CFL_CONSTANT = 2.8 / np.pi**3


class SolverError(RuntimeError):
    pass


class SingularSymbol(SolverError):
    def __init__(self, kappa: float):
        super().__init__(f"inertia symbol is not invertible at wavenumber kappa={kappa:g}")
        self.kappa = kappa


class NonzeroMeanHS(SolverError):
    pass


class NumericalBlowup(SolverError):
    pass


class CFLViolation(ValueError):
    pass


@dataclass(frozen=True)
class GridField:
    """Samples of an algebra-valued function at ``x_j = j L / N``; ``values`` has shape (N, l)."""

    L: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        N = vals.shape[0]
        if N < 16 or N & (N - 1):
            raise ValueError(f"grid size must be a power of two >= 16, got {N}")
        if self.L <= 0:
            raise ValueError("domain length must be positive")
        object.__setattr__(self, "values", vals)

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.N, self.L)

    @classmethod
    def from_function(cls, f: Callable, N: int, L: float) -> "GridField":
        return cls(L, np.asarray(f(grid_points(N, L))))


def grid_points(N: int, L: float) -> np.ndarray:
    return np.arange(N) * (L / N)


def wavenumbers(N: int, L: float) -> np.ndarray:
    """Angular wavenumbers of the ``rfft`` modes."""
    return 2 * np.pi / L * np.arange(N // 2 + 1)


def derivative_multiplier(N: int, L: float, order: int) -> np.ndarray:
    ik = 1j * wavenumbers(N, L)
    mult = ik**order
    if order % 2 == 1:
        mult[-1] = 0.0
    return mult


def dealias_mask(N: int) -> np.ndarray:
    """2/3 rule: keep integer wavenumbers ``k <= N // 3``."""
    return np.arange(N // 2 + 1) <= N // 3


def spectral_derivative(f: GridField, order: int) -> GridField:
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    fh = np.fft.rfft(f.values, axis=0)
    out = np.fft.irfft(derivative_multiplier(f.N, f.L, order)[:, None] * fh, n=f.N, axis=0)
    return GridField(f.L, out)


def algebra_product(C: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pointwise algebra product of (N, l) arrays."""
    l = C.shape[0]
    A = (a @ C.reshape(l, l * l)).reshape(a.shape[0], l, l)
    return np.einsum("nj,njk->nk", b, A)


def left_mult(C: np.ndarray, a) -> np.ndarray:
    return np.tensordot(np.asarray(a, dtype=float), C, axes=([0], [0])).T


class InertiaInverter:
    """Mode-wise inverse of the inertia operator, factorized once per grid."""

    def __init__(self, equation: EulerEquation, N: int, L: float):
        self.N, self.L = N, L
        kappa = wavenumbers(N, L)
        mats = equation.inertia.symbol_matrices(kappa)
        self.symbols = mats
        dim = equation.algebra.dim
        self.gauge = False
        inv = np.zeros_like(mats)
        for idx, (k, M) in enumerate(zip(kappa, mats)):
            scale = max(1.0, float(np.max(np.abs(M)))) ** dim
            if abs(np.linalg.det(M)) < SINGULAR_TOL * scale:
                if idx == 0 and equation.kind is Kind.FHS:
                    self.gauge = True
                    continue
                raise SingularSymbol(float(k))
            inv[idx] = np.linalg.inv(M)
        self.inverse = inv

    def check_gauge(self, m_hat: np.ndarray) -> None:
        if not self.gauge:
            return
        norm = float(np.max(np.abs(m_hat))) if m_hat.size else 0.0
        if np.max(np.abs(m_hat[0])) > GAUGE_TOL * max(norm, 1.0):
            raise NonzeroMeanHS(
                f"moment has nonzero mean {m_hat[0].real / self.N} but the inertia operator annihilates constants"
            )

    def apply(self, m_hat: np.ndarray) -> np.ndarray:
        return np.einsum("kij,kj->ki", self.inverse, m_hat)

    def forward(self, u_hat: np.ndarray) -> np.ndarray:
        return np.einsum("kij,kj->ki", self.symbols, u_hat)


def invert_inertia(m: GridField, equation: EulerEquation) -> GridField:
    """``u`` with ``Lambda(u) = m``; raises SingularSymbol / NonzeroMeanHS."""
    inv = InertiaInverter(equation, m.N, m.L)
    m_hat = np.fft.rfft(m.values, axis=0)
    inv.check_gauge(m_hat)
    return GridField(m.L, np.fft.irfft(inv.apply(m_hat), n=m.N, axis=0))


def apply_inertia(u: GridField, equation: EulerEquation) -> GridField:
    inv = InertiaInverter.__new__(InertiaInverter)
    inv.symbols = equation.inertia.symbol_matrices(wavenumbers(u.N, u.L))
    u_hat = np.fft.rfft(u.values, axis=0)
    return GridField(u.L, np.fft.irfft(inv.forward(u_hat), n=u.N, axis=0))


class SpectralModel:
    """Precomputed operators for one equation on one grid."""

    def __init__(self, equation: EulerEquation, N: int, L: float, dealias: bool = True):
        self.equation = equation
        self.N, self.L = N, L
        self.C = equation.algebra.C
        self.dim = equation.algebra.dim
        self.kappa = wavenumbers(N, L)
        self.d1 = derivative_multiplier(N, L, 1)[:, None]
        self.d2 = derivative_multiplier(N, L, 2)[:, None]
        self.d3 = derivative_multiplier(N, L, 3)[:, None]
        self.mask = (dealias_mask(N) if dealias else np.ones(N // 2 + 1, dtype=bool))[:, None]
        self.inverter = InertiaInverter(equation, N, L)
        zeta = np.array(equation.zeta.coeffs, dtype=float)
        self.zeta = zeta
        self.L_zeta = left_mult(self.C, zeta)
        # linear part of dm/dt: -(i kappa)^3 L_zeta L_S^{-1}
        d3 = derivative_multiplier(N, L, 3)
        self.linear = -d3[:, None, None] * np.einsum("ij,kjl->kil", self.L_zeta, self.inverter.inverse)
        self._exp_cache: dict = {}

    def irfft(self, fh: np.ndarray) -> np.ndarray:
        return np.fft.irfft(fh, n=self.N, axis=0)

    def rfft(self, f: np.ndarray) -> np.ndarray:
        return np.fft.rfft(f, axis=0)

    def velocity_hat(self, m_hat: np.ndarray) -> np.ndarray:
        return self.inverter.apply(m_hat)

    def nonlinear(self, m_hat: np.ndarray) -> np.ndarray:
        """``-(2 m u_x + m_x u)`` in Fourier space, with 2/3-rule dealiasing."""
        u_hat = self.velocity_hat(m_hat) * self.mask
        mt = m_hat * self.mask
        m = self.irfft(mt)
        m_x = self.irfft(self.d1 * mt)
        u = self.irfft(u_hat)
        u_x = self.irfft(self.d1 * u_hat)
        prod = 2.0 * algebra_product(self.C, m, u_x) + algebra_product(self.C, m_x, u)
        return -(self.mask * self.rfft(prod))

    def linear_term(self, m_hat: np.ndarray) -> np.ndarray:
        return np.einsum("kij,kj->ki", self.linear, m_hat)

    def full_rhs(self, m_hat: np.ndarray) -> np.ndarray:
        return self.nonlinear(m_hat) + self.linear_term(m_hat)

    def exponentials(self, dt: float) -> tuple[np.ndarray, np.ndarray]:
        if dt not in self._exp_cache:
            full = scipy.linalg.expm(self.linear * dt)
            half = scipy.linalg.expm(self.linear * (dt / 2))
            self._exp_cache[dt] = (full, half)
        return self._exp_cache[dt]


def _mv(M: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.einsum("kij,kj->ki", M, x)


@dataclass
class SolverState:
    t: float
    m_hat: np.ndarray
    model: SpectralModel = field(repr=False)
    scheme: str = "ifrk4"
    dt: float = 1e-3

    @property
    def N(self) -> int:
        return self.model.N

    @property
    def L(self) -> float:
        return self.model.L

    @property
    def equation(self) -> EulerEquation:
        return self.model.equation

    @property
    def m(self) -> GridField:
        return GridField(self.L, self.model.irfft(self.m_hat))

    @property
    def u(self) -> GridField:
        return GridField(self.L, self.model.irfft(self.model.velocity_hat(self.m_hat)))

    def consistency_error(self) -> float:
        """``max |Lambda(u) - m|`` relative to ``1 + max|m|``."""
        u_hat = self.model.velocity_hat(self.m_hat)
        back = self.model.irfft(self.model.inverter.forward(u_hat))
        m = self.model.irfft(self.m_hat)
        return float(np.max(np.abs(back - m)) / (1.0 + np.max(np.abs(m))))


def initial_state(
    equation: EulerEquation,
    N: int,
    L: float,
    *,
    u0: Callable | np.ndarray | None = None,
    m0: Callable | np.ndarray | None = None,
    scheme: str | None = None,
    dt: float = 1e-3,
    dealias: bool = True,
) -> SolverState:
    """Build a state from either the velocity ``u0`` or the moment ``m0``."""
    if (u0 is None) == (m0 is None):
        raise ValueError("give exactly one of u0 and m0")
    model = SpectralModel(equation, N, L, dealias)
    x = grid_points(N, L)
    data = u0 if u0 is not None else m0
    values = np.asarray(data(x) if callable(data) else data, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.shape != (N, equation.algebra.dim):
        raise ValueError(f"initial data has shape {values.shape}, expected {(N, equation.algebra.dim)}")
    if u0 is not None:
        u_hat = model.rfft(values)
        if model.inverter.gauge:
            u_hat[0] = 0.0
        m_hat = model.inverter.forward(u_hat)
    else:
        m_hat = model.rfft(values)
    model.inverter.check_gauge(m_hat)
    return SolverState(0.0, m_hat, model, scheme or default_scheme(equation), dt)


def default_scheme(equation: EulerEquation) -> str:
    return "rk4" if equation.zeta.is_zero() else "ifrk4"


def check_cfl(state: SolverState, dt: float) -> None:
    if state.scheme != "rk4" or state.equation.zeta.is_zero():
        return
    zeta_norm = float(np.linalg.norm(state.model.L_zeta, 2))
    limit = CFL_CONSTANT * (state.L / state.N) ** 3 / zeta_norm
    if abs(dt) > limit:
        raise CFLViolation(
            f"explicit rk4 with dt={dt:g} exceeds the dispersive limit {limit:.3e}; use scheme 'ifrk4'"
        )


def _check_finite(m_hat: np.ndarray, model: SpectralModel, t: float) -> None:
    m = model.irfft(m_hat)
    peak = float(np.max(np.abs(m))) if np.all(np.isfinite(m)) else np.inf
    if not np.isfinite(peak) or peak > BLOWUP_THRESHOLD:
        raise NumericalBlowup(f"|m| reached {peak:.3e} at t={t:g}")


def step(state: SolverState, dt: float | None = None) -> SolverState:
    """Advance by one step of size ``dt`` (may be negative)."""
    dt = state.dt if dt is None else dt
    if dt == 0:
        raise ValueError("dt must be nonzero")
    model = state.model
    v = state.m_hat
    if state.scheme == "rk4":
        check_cfl(state, dt)
        F = model.full_rhs
        k1 = F(v)
        k2 = F(v + 0.5 * dt * k1)
        k3 = F(v + 0.5 * dt * k2)
        k4 = F(v + dt * k3)
        new = v + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    elif state.scheme == "ifrk4":
        E, E2 = model.exponentials(dt)
        Nf = model.nonlinear
        a = dt * Nf(v)
        b = dt * Nf(_mv(E2, v + a / 2))
        c = dt * Nf(_mv(E2, v) + b / 2)
        d = dt * Nf(_mv(E, v) + _mv(E2, c))
        new = _mv(E, v) + (_mv(E, a) + 2 * _mv(E2, b + c) + d) / 6.0
    else:
        raise ValueError(f"unknown scheme {state.scheme!r}")
    _check_finite(new, model, state.t + dt)
    return replace(state, t=state.t + dt, m_hat=new)


def advance(state: SolverState, t_end: float, dt: float | None = None) -> SolverState:
    """Step until ``t_end`` with a fixed number of equal steps."""
    dt = state.dt if dt is None else dt
    n = int(round((t_end - state.t) / dt))
    if n < 0 or not np.isclose(state.t + n * dt, t_end, rtol=0, atol=1e-9 * max(1.0, abs(t_end))):
        raise ValueError(f"t_end={t_end} is not reachable from t={state.t} in steps of {dt}")
    t0 = state.t
    for i in range(1, n + 1):
        state = step(state, dt)
        state.t = t0 + i * dt
    return state


def rhs_eval(state: SolverState) -> GridField:
    """``dm/dt`` on the grid."""
    return GridField(state.L, state.model.irfft(state.model.full_rhs(state.m_hat)))


# -- diagnostics ---------------------------------------------------------------


def _quadrature(values: np.ndarray, L: float) -> float:
    return float(np.sum(values) * (L / values.shape[0]))


def hamiltonians(state: SolverState, traces: Sequence[FrobeniusAlgebra]) -> dict[str, float]:
    """H1 and (for inertia order <= 1) H2 under each trace, by spectral quadrature."""
    model = state.model
    eq = state.equation
    u_hat = model.velocity_hat(state.m_hat)
    u = model.irfft(u_hat)
    m = model.irfft(state.m_hat)
    C = model.C
    out: dict = {}
    mu = algebra_product(C, m, u)
    h2_field = None
    if eq.inertia.n <= 1:
        u_xx = model.irfft(model.d2 * u_hat)
        u_x = model.irfft(model.d1 * u_hat)
        alpha = np.array(eq.inertia.alpha.coeffs, dtype=float)
        beta = np.array(eq.inertia.beta.coeffs, dtype=float)
        uu = algebra_product(C, u, u)
        uuxx = algebra_product(C, u, u_xx)
        body = (
            uuxx @ left_mult(C, model.zeta).T
            + algebra_product(C, uu, u) @ left_mult(C, alpha).T
            - 0.5 * algebra_product(C, uu, u_xx) @ left_mult(C, beta).T
        )
        h2_field = 0.5 * body
        del u_x
    for alg in traces:
        t = np.array(alg.trace_vector, dtype=float)
        out[f"H1[{alg.trace_name}]"] = 0.5 * _quadrature(mu @ t, state.L)
        if h2_field is not None:
            out[f"H2[{alg.trace_name}]"] = _quadrature(h2_field @ t, state.L)
    return out


@dataclass
class TimeSeries:
    times: list = field(default_factory=list)
    records: list = field(default_factory=list)
    final: SolverState | None = None
    snapshots: list = field(default_factory=list)  # (t, u GridField)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.records])

    @property
    def names(self) -> list[str]:
        return list(self.records[0]) if self.records else []

    def drift(self, name: str) -> np.ndarray:
        values = self.column(name)
        ref = values[0]
        scale = abs(ref) if abs(ref) > 1e-300 else 1.0
        return np.abs(values - ref) / scale

    def max_drift(self, name: str) -> float:
        return float(np.max(self.drift(name)))


def diagnostics(state: SolverState, traces: Sequence[FrobeniusAlgebra], reference: dict | None = None) -> dict:
    """Conserved functionals plus relative drift against ``reference`` (t = 0 values)."""
    values = hamiltonians(state, traces)
    record = dict(values)
    if reference is not None:
        for k, v in values.items():
            ref = reference[k]
            scale = abs(ref) if abs(ref) > 1e-300 else 1.0
            record[f"drift {k}"] = abs(v - ref) / scale
    return record


@dataclass
class RunConfig:
    """Solver-level run description (the CLI builds one from its config file)."""

    equation: EulerEquation
    traces: Sequence[FrobeniusAlgebra]
    N: int
    L: float
    dt: float
    t_end: float
    scheme: str | None = None
    u0: Callable | np.ndarray | None = None
    m0: Callable | np.ndarray | None = None
    every: int = 1
    keep_fields: bool = False
    dealias: bool = True


def run(config: RunConfig) -> TimeSeries:
    if config.dt <= 0 or config.t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    state = initial_state(
        config.equation,
        config.N,
        config.L,
        u0=config.u0,
        m0=config.m0,
        scheme=config.scheme,
        dt=config.dt,
        dealias=config.dealias,
    )
    n_steps = int(round(config.t_end / config.dt))
    reference = hamiltonians(state, config.traces)
    series = TimeSeries()

    def record(s: SolverState):
        series.times.append(s.t)
        rec = diagnostics(s, config.traces, reference)
        series.records.append({"t": s.t, **rec})
        if config.keep_fields:
            series.snapshots.append((s.t, s.u))

    record(state)
    for i in range(1, n_steps + 1):
        state = step(state, config.dt)
        state.t = i * config.dt  # avoid accumulated rounding in the clock
        if i % config.every == 0 or i == n_steps:
            record(state)
    series.final = state
    log.debug("run finished at t=%g after %d steps", state.t, n_steps)
    return series

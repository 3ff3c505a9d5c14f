"""Domain types and exact dephasing dynamics of a qubit in a spin bath.

The interaction gives each of the N environment spins a conditional
energy of +-g_k/2, so the two environment branches evolve with per-spin
phases exp(+-i g_k t / 2).  The decoherence factor is the overlap of the
branches; the half phases combine into full ones:

    r(t) = prod_k ( |alpha_k|^2 exp(+i g_k t) + |beta_k|^2 exp(-i g_k t) )

This is the single place the factor-of-2 bookkeeping is fixed: branch
evolution carries g_k t / 2, the overlap carries g_k t, and the
convention is pinned by the equal-coupling closed form r(t) = cos^N(g t)
at |alpha_k|^2 = 1/2.  Couplings are angular frequencies with hbar = 1.

All types are immutable value objects (arrays are marked read-only) and
all operations are pure functions, so everything here is safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, ValidationError

#: Tolerance for every normalization invariant.  Inputs outside it are
#: rejected, never silently renormalized.
NORM_TOL = 1e-12

#: Above this many spins the product is accumulated as log-magnitude plus
#: phase so that intermediate magnitudes cannot underflow to zero.
_LOG_PRODUCT_CUTOFF = 10_000


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _abs_sq(z: np.ndarray) -> np.ndarray:
    # re^2 + im^2 directly; abs() would round through a square root.
    return np.square(z.real) + np.square(z.imag)


def _require_matching_sizes(n_left: int, n_right: int, what: str) -> None:
    if n_left != n_right:
        raise DimensionMismatchError(f"{what}: {n_left} vs {n_right} spins")


@dataclass(frozen=True, eq=False)
class CouplingSet:
    """The N coupling strengths g_k (angular frequency units)."""

    couplings: np.ndarray

    def __post_init__(self) -> None:
        g = np.array(self.couplings, dtype=np.float64, copy=True)
        if g.ndim != 1 or g.size < 1:
            raise ValidationError("couplings must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(g)):
            raise ValidationError("couplings must be finite")
        object.__setattr__(self, "couplings", _readonly(g))

    @property
    def n(self) -> int:
        return self.couplings.size


@dataclass(frozen=True, eq=False)
class EnvironmentAmplitudes:
    """Per-spin amplitude pairs (alpha_k, beta_k), each pair normalized."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self) -> None:
        alpha = np.array(self.alpha, dtype=np.complex128, copy=True)
        beta = np.array(self.beta, dtype=np.complex128, copy=True)
        if alpha.ndim != 1 or alpha.size < 1:
            raise ValidationError("amplitudes must form a non-empty 1-d sequence")
        _require_matching_sizes(alpha.size, beta.size, "amplitude pair arrays")
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(beta))):
            raise ValidationError("amplitudes must be finite")
        norms = _abs_sq(alpha) + _abs_sq(beta)
        worst = float(np.max(np.abs(norms - 1.0)))
        if worst > NORM_TOL:
            raise ValidationError(
                f"amplitude pair norm off by {worst:.3e} (> {NORM_TOL:.0e})"
            )
        object.__setattr__(self, "alpha", _readonly(alpha))
        object.__setattr__(self, "beta", _readonly(beta))

    @property
    def n(self) -> int:
        return self.alpha.size

    @property
    def alpha_sq(self) -> np.ndarray:
        """Per-spin weight |alpha_k|^2 of the spin-up branch."""
        return _abs_sq(self.alpha)

    @property
    def beta_sq(self) -> np.ndarray:
        return _abs_sq(self.beta)

    @classmethod
    def equal_superposition(cls, n: int) -> "EnvironmentAmplitudes":
        """All pairs (1/sqrt(2), 1/sqrt(2))."""
        a = np.full(n, 1.0 / np.sqrt(2.0), dtype=np.complex128)
        return cls(a, a.copy())

    @classmethod
    def from_up_weights(cls, weights) -> "EnvironmentAmplitudes":
        """Real pairs (sqrt(w_k), sqrt(1 - w_k)) from up-branch weights."""
        w = np.asarray(weights, dtype=np.float64)
        if np.any(w < 0.0) or np.any(w > 1.0):
            raise ValidationError("up weights must lie in [0, 1]")
        return cls(np.sqrt(w).astype(np.complex128), np.sqrt(1.0 - w).astype(np.complex128))


@dataclass(frozen=True)
class SystemState:
    """Qubit amplitudes a|0> + b|1>."""

    a: complex
    b: complex

    def __post_init__(self) -> None:
        a, b = complex(self.a), complex(self.b)
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"system state norm off by {abs(norm - 1.0):.3e}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Uniform time grid from start to stop with a fixed number of samples."""

    start: float
    stop: float
    steps: int
    samples: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        start, stop, steps = float(self.start), float(self.stop), int(self.steps)
        if not (np.isfinite(start) and np.isfinite(stop)):
            raise ValidationError("grid endpoints must be finite")
        if steps < 1:
            raise ValidationError("grid needs at least one step")
        if start > stop:
            raise ValidationError("grid start must not exceed stop")
        if steps > 1 and start == stop:
            raise ValidationError("zero-width grid cannot hold multiple samples")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "stop", stop)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "samples", _readonly(np.linspace(start, stop, steps)))

    def __len__(self) -> int:
        return self.steps


@dataclass(frozen=True, eq=False)
class DecoherenceTrace:
    """Sampled complex r(t) on a time grid, plus model metadata."""

    times: np.ndarray
    values: np.ndarray
    n_spins: int
    label: str = ""
    seed: int | None = None

    def __post_init__(self) -> None:
        times = np.array(self.times, dtype=np.float64, copy=True)
        values = np.array(self.values, dtype=np.complex128, copy=True)
        if times.ndim != 1 or times.size < 1 or times.shape != values.shape:
            raise ValidationError("trace times and values must be matching 1-d arrays")
        mags = np.abs(values)
        if np.any(mags > 1.0 + NORM_TOL):
            raise ValidationError(f"|r| exceeds 1 by {float(mags.max() - 1.0):.3e}")
        at_zero = values[times == 0.0]
        if at_zero.size and not np.all(at_zero == 1.0 + 0.0j):
            raise ValidationError("r(0) must equal 1 exactly")
        object.__setattr__(self, "times", _readonly(times))
        object.__setattr__(self, "values", _readonly(values))

    def __len__(self) -> int:
        return self.times.size


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """2x2 system density matrix entries."""

    rho00: complex
    rho01: complex
    rho10: complex
    rho11: complex

    def __post_init__(self) -> None:
        entries = [complex(v) for v in (self.rho00, self.rho01, self.rho10, self.rho11)]
        rho00, rho01, rho10, rho11 = entries
        if abs(rho00 + rho11 - 1.0) > NORM_TOL:
            raise ValidationError("density matrix trace must equal 1")
        if abs(rho01 - rho10.conjugate()) > NORM_TOL:
            raise ValidationError("density matrix must be Hermitian")
        for d in (rho00, rho11):
            if abs(d.imag) > NORM_TOL or d.real < -NORM_TOL:
                raise ValidationError("diagonal entries must be real and nonnegative")
        object.__setattr__(self, "rho00", rho00)
        object.__setattr__(self, "rho01", rho01)
        object.__setattr__(self, "rho10", rho10)
        object.__setattr__(self, "rho11", rho11)

    def as_array(self) -> np.ndarray:
        return np.array([[self.rho00, self.rho01], [self.rho10, self.rho11]])

    def purity(self) -> float:
        return float(np.real(np.trace(self.as_array() @ self.as_array())))


def _checked_time(t) -> float:
    t = float(t)
    if not np.isfinite(t):
        raise ValidationError("time must be finite")
    return t


def decoherence_factor(couplings: CouplingSet, amps: EnvironmentAmplitudes, t) -> complex:
    """Exact decoherence factor r(t) as a product over environment spins.

    At t = 0 every factor reduces to the pair norm |alpha_k|^2 + |beta_k|^2,
    which is 1 for validated inputs, so exactly 1 is returned without
    accumulating rounding noise.  Beyond ``_LOG_PRODUCT_CUTOFF`` spins the
    product is carried as log-magnitude plus phase; a plain product of that
    many sub-unit magnitudes would quietly flush to zero.
    """
    _require_matching_sizes(couplings.n, amps.n, "couplings vs amplitudes")
    t = _checked_time(t)
    if t == 0.0:
        return 1.0 + 0.0j
    phases = np.exp(1j * couplings.couplings * t)
    factors = amps.alpha_sq * phases + amps.beta_sq * np.conj(phases)
    if couplings.n <= _LOG_PRODUCT_CUTOFF:
        return complex(np.prod(factors))
    with np.errstate(divide="ignore"):
        log_mag = float(np.sum(np.log(np.abs(factors))))
    if log_mag == -np.inf:
        return 0.0 + 0.0j
    angle = float(np.sum(np.angle(factors)))
    return complex(np.exp(log_mag) * np.exp(1j * angle))


def decoherence_trace(
    couplings: CouplingSet,
    amps: EnvironmentAmplitudes,
    grid: TimeGrid,
    *,
    label: str = "",
    seed: int | None = None,
) -> DecoherenceTrace:
    """Evaluate r(t) on a grid, pointwise-identical to decoherence_factor."""
    values = np.array(
        [decoherence_factor(couplings, amps, t) for t in grid.samples],
        dtype=np.complex128,
    )
    return DecoherenceTrace(
        times=grid.samples, values=values, n_spins=couplings.n, label=label, seed=seed
    )


def evolve_environment_branch(
    couplings: CouplingSet, amps: EnvironmentAmplitudes, t, branch: int
) -> EnvironmentAmplitudes:
    """Evolve the environment along one qubit branch.

    Branch 0 applies exp(+i g_k t / 2) to the up amplitude and the
    conjugate phase to the down amplitude; branch 1 is branch 0 at -t.
    """
    _require_matching_sizes(couplings.n, amps.n, "couplings vs amplitudes")
    t = _checked_time(t)
    if branch not in (0, 1):
        raise ValidationError(f"branch must be 0 or 1, got {branch!r}")
    sign = 1.0 if branch == 0 else -1.0
    half = np.exp(0.5j * sign * couplings.couplings * t)
    return EnvironmentAmplitudes(amps.alpha * half, amps.beta * np.conj(half))


def environment_overlap(
    left: EnvironmentAmplitudes, right: EnvironmentAmplitudes
) -> complex:
    """Inner product <left|right> of two product environment states."""
    _require_matching_sizes(left.n, right.n, "environment overlap")
    factors = np.conj(left.alpha) * right.alpha + np.conj(left.beta) * right.beta
    return complex(np.prod(factors))


def reduced_density_matrix(system: SystemState, r) -> ReducedDensityMatrix:
    """System density matrix with off-diagonals damped by the factor r."""
    r = complex(r)
    if abs(r) > 1.0 + NORM_TOL:
        raise ValidationError(f"|r| = {abs(r):.6f} exceeds 1")
    a, b = system.a, system.b
    return ReducedDensityMatrix(
        rho00=abs(a) ** 2,
        rho01=a * b.conjugate() * r,
        rho10=a.conjugate() * b * r.conjugate(),
        rho11=abs(b) ** 2,
    )

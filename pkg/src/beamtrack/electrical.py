"""Electrical fine alignment: stochastic perturbation of the analog phase
shifters against the noisy instant-power oracle.

Three optimizers share the oracle contract (two queries per iteration for
the simultaneous methods, 2*MN per sweep for the sequential baseline):

* ``run_assp`` - simultaneous perturbation whose probe mixes a
  deterministic element-distance structure (a radial ramp that swings the
  whole beam) with an isotropic Bernoulli vector.
* ``run_isotropic_spsa`` - the same machinery with the structure weight
  forced to zero; the classic fully isotropic baseline.
* ``run_sequential_perturbation`` - one shifter at a time, keeping the
  probe sign that increased measured power.

Gradient estimators: ``assp_gradient`` is the elementwise central
difference divided by the perturbation.  For pure +/-c Bernoulli probes
this equals projecting the measured difference back onto the probe
direction (1/x = x/x^2 for x = +/-c), and that projection form,
``aligned_gradient``, is the generalization that stays consistent when
probe magnitudes differ per element; the update loop uses it.  Dividing
elementwise instead amplifies the shared structured measurement into
unbounded kicks on small-probe elements and diverges even without noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ArrayGeometry, PowerOracle


class DegeneratePerturbationError(RuntimeError):
    """A perturbation component is exactly zero; the draw must be resampled."""


@dataclass
class AsspParams:
    gain: float = 0.7  # a: step-size scale
    structure_weight: float = 0.02  # b: structured probe scale
    isotropic_weight: float = 0.01  # c: Bernoulli probe scale
    gain_offset: float = 0.1  # zeta in the step-size denominator
    step_exponent: float = 0.602  # xi: step-size decay
    probe_exponent: float = 0.101  # Omega: probe decay
    max_iters: int = 100
    stop_epsilon: float = 1e-3  # relative best-power improvement threshold
    stop_window: int = 3  # consecutive stalled iterations before stopping
    seq_step: float = 0.25  # rad, sequential probe quantum
    seq_max_sweeps: int = 12

    def __post_init__(self):
        if self.gain <= 0 or self.isotropic_weight <= 0:
            raise ValueError("gain and isotropic_weight must be positive")
        if self.structure_weight < 0 or self.gain_offset < 0:
            raise ValueError("structure_weight and gain_offset must be non-negative")
        if not (0 < self.probe_exponent <= 1 and 0 < self.step_exponent <= 1):
            raise ValueError("exponents must lie in (0, 1]")

    def step_size(self, k: int) -> float:
        return self.gain / (self.gain_offset + k) ** self.step_exponent


def structure_matrix(geom: ArrayGeometry) -> np.ndarray:
    """Element distances from the reference corner, flattened column-major."""
    m = np.arange(geom.rows)[:, None]
    n = np.arange(geom.cols)[None, :]
    return np.sqrt(m * m + n * n, dtype=float).flatten(order="F")


def draw_perturbation(rng: np.random.Generator, size: int) -> tuple[int, np.ndarray]:
    """One Bernoulli draw: scalar xi and the +/-1 vector, each fair."""
    xi = int(rng.integers(0, 2)) * 2 - 1
    delta = rng.integers(0, 2, size) * 2 - 1
    return xi, delta.astype(float)


def perturbation_vector(
    structure: np.ndarray, xi: int, bernoulli: np.ndarray, params: AsspParams, k: int
) -> np.ndarray:
    """Per-element probe (b*D*xi + c*Delta) / (k+1)^Omega."""
    decay = (k + 1) ** params.probe_exponent
    return (
        params.structure_weight * structure * xi
        + params.isotropic_weight * bernoulli
    ) / decay


def assp_gradient(
    phases: np.ndarray, delta: np.ndarray, oracle
) -> tuple[np.ndarray, float, float]:
    """Elementwise central-difference gradient estimate.

    Queries the oracle at phases +/- delta and divides the difference by
    2*delta per element.  Raises if any component of delta is exactly zero
    (possible only when the structured and isotropic terms cancel).
    """
    delta = np.asarray(delta, dtype=float)
    if np.any(delta == 0.0):
        raise DegeneratePerturbationError("perturbation has a zero component")
    p_plus = oracle(phases + delta)
    p_minus = oracle(phases - delta)
    return (p_plus - p_minus) / (2.0 * delta), p_plus, p_minus


def aligned_gradient(p_plus: float, p_minus: float, delta: np.ndarray) -> np.ndarray:
    """Projection of the measured difference onto the probe direction.

    (p_plus - p_minus) * delta / (2 * mean(delta^2)).  Coincides with the
    elementwise division when all probe magnitudes are equal.
    """
    delta = np.asarray(delta, dtype=float)
    return (p_plus - p_minus) * delta / (2.0 * float(np.mean(delta * delta)))


@dataclass
class OptimizerTrace:
    """Per-iteration records; for the sequential method one row per sweep."""

    k: list[int] = field(default_factory=list)
    p_plus: list[float] = field(default_factory=list)
    p_minus: list[float] = field(default_factory=list)
    nrsp: list[float] = field(default_factory=list)
    checksum: list[float] = field(default_factory=list)
    queries: list[int] = field(default_factory=list)

    def append(self, k, p_plus, p_minus, nrsp, checksum, queries):
        self.k.append(k)
        self.p_plus.append(p_plus)
        self.p_minus.append(p_minus)
        self.nrsp.append(nrsp)
        self.checksum.append(checksum)
        self.queries.append(queries)

    def __len__(self):
        return len(self.k)

    def iterations_to(self, threshold: float, budget: int | None = None) -> int:
        """1-based iteration count at which nrsp first reached ``threshold``.

        Runs that never reach it score the configured iteration budget
        (falling back to the trace length), so medians stay meaningful when
        some seeds stall."""
        for i, v in enumerate(self.nrsp):
            if v >= threshold:
                return i + 1
        return budget if budget is not None else len(self.nrsp)


@dataclass
class OptimizerState:
    phases: np.ndarray
    k: int = 0
    best_power: float = -math.inf
    stalled: int = 0


def assp_step(
    state: OptimizerState,
    oracle,
    params: AsspParams,
    rng: np.random.Generator,
    structure: np.ndarray,
    trace: OptimizerTrace,
    gradient_form: str = "aligned",
) -> OptimizerState:
    """One perturbation/measure/update cycle; appends a trace row.

    Degenerate draws (a perturbation component exactly zero) are resampled;
    they can only occur when b*D_i*xi and c*Delta_i cancel exactly.
    """
    for _ in range(16):
        xi, bern = draw_perturbation(rng, state.phases.size)
        delta = perturbation_vector(structure, xi, bern, params, state.k)
        if not np.any(delta == 0.0):
            break
    else:
        raise DegeneratePerturbationError("could not draw a nonzero perturbation")
    p_plus = oracle(state.phases + delta)
    p_minus = oracle(state.phases - delta)
    if gradient_form == "aligned":
        grad = aligned_gradient(p_plus, p_minus, delta)
    elif gradient_form == "reciprocal":
        grad = (p_plus - p_minus) / (2.0 * delta)
    else:
        raise ValueError(f"unknown gradient_form {gradient_form!r}")
    phases = state.phases + params.step_size(state.k) * grad
    k = state.k + 1

    observed = max(p_plus, p_minus)
    best = state.best_power
    stalled = state.stalled
    if observed > best * (1.0 + params.stop_epsilon) or best == -math.inf:
        best = max(best, observed)
        stalled = 0
    else:
        best = max(best, observed)
        stalled += 1
    trace.append(
        k, p_plus, p_minus, oracle.true_nrsp(phases), float(phases.sum()), oracle.queries
    )
    return OptimizerState(phases, k, best, stalled)


def run_assp(
    initial_phases: np.ndarray,
    oracle: PowerOracle,
    params: AsspParams,
    rng: np.random.Generator,
    geom: ArrayGeometry,
    gradient_form: str = "aligned",
) -> tuple[np.ndarray, OptimizerTrace]:
    """Iterate ASSP until the iteration budget or the stop rule fires
    (best observed power improved by less than stop_epsilon relative over
    stop_window consecutive iterations)."""
    structure = structure_matrix(geom)
    state = OptimizerState(np.asarray(initial_phases, dtype=float).copy())
    trace = OptimizerTrace()
    while state.k < params.max_iters:
        state = assp_step(state, oracle, params, rng, structure, trace, gradient_form)
        if state.stalled >= params.stop_window:
            break
    return state.phases, trace


def run_isotropic_spsa(
    initial_phases: np.ndarray,
    oracle: PowerOracle,
    params: AsspParams,
    rng: np.random.Generator,
    geom: ArrayGeometry,
) -> tuple[np.ndarray, OptimizerTrace]:
    """Fully isotropic baseline: ASSP with the structure weight zeroed.

    Shares the exact code path and random stream, so equal seeds give
    bit-identical traces to ``run_assp`` with b = 0.
    """
    return run_assp(initial_phases, oracle, replace(params, structure_weight=0.0), rng, geom)


def run_sequential_perturbation(
    initial_phases: np.ndarray,
    oracle: PowerOracle,
    params: AsspParams,
    rng: np.random.Generator,
    geom: ArrayGeometry,
) -> tuple[np.ndarray, OptimizerTrace]:
    """Coordinate-wise baseline: probe each shifter +/-seq_step in turn and
    keep the sign that increased measured power.

    One trace row per full sweep (2*MN oracle queries); the recorded
    p_plus/p_minus are from the sweep's last element.  The combiner sum is
    maintained incrementally, so each probe costs O(1).
    """
    phases = np.asarray(initial_phases, dtype=float).copy()
    size = phases.size
    h = np.asarray(oracle.h_vec)
    trace = OptimizerTrace()
    step = params.seq_step
    rot_plus = complex(np.exp(-1j * step))
    rot_minus = complex(np.exp(1j * step))
    for sweep in range(1, params.seq_max_sweeps + 1):
        contrib = np.conj(np.exp(1j * phases)) * h  # per-element terms of w^H h
        total = complex(contrib.sum())
        p_plus = p_minus = 0.0
        for i in range(size):
            ci = complex(contrib[i])
            base = total - ci
            p_plus = oracle.sample_pair(base, ci * rot_plus)
            p_minus = oracle.sample_pair(base, ci * rot_minus)
            if p_plus > p_minus:
                phases[i] += step
                contrib[i] = ci * rot_plus
                total = base + ci * rot_plus
            elif p_minus > p_plus:
                phases[i] -= step
                contrib[i] = ci * rot_minus
                total = base + ci * rot_minus
        trace.append(
            sweep, p_plus, p_minus, oracle.true_nrsp(phases), float(phases.sum()),
            oracle.queries,
        )
        if trace.nrsp[-1] >= 1.0 - 1e-9:
            break
    return phases, trace


def fit_doa(phases: np.ndarray, geom: ArrayGeometry, pad: int = 4) -> tuple[float, float]:
    """Fit the converged phase vector to the plane-wave model, least squares
    in the complex domain.

    A zero-padded 2-D FFT of exp(j*phases) locates the dominant plane-wave
    component; Newton refinement on the correlation power polishes the two
    direction sines.  Returns (azimuth, elevation) of the fitted arrival.
    Working on exp(j*phases) rather than raw phases keeps the fit immune
    to 2*pi wraps.
    """
    w = np.exp(1j * np.asarray(phases, dtype=float)).reshape(
        geom.rows, geom.cols, order="F"
    )
    spec = np.fft.fft2(w, s=(pad * geom.rows, pad * geom.cols))
    peak = np.unravel_index(np.argmax(np.abs(spec)), spec.shape)
    fr = peak[0] / (pad * geom.rows)
    fc = peak[1] / (pad * geom.cols)
    if fr > 0.5:
        fr -= 1.0
    if fc > 0.5:
        fc -= 1.0
    # model exp(+2pi i d u m) against fft kernel exp(-2pi i f m): peak at f = d*u
    d = geom.spacing_over_wavelength
    u_r, u_c = fr / d, fc / d

    m = np.arange(geom.rows)[:, None]
    n = np.arange(geom.cols)[None, :]

    def corr(ur, uc):
        model = np.exp(1j * 2.0 * math.pi * d * (m * ur + n * uc))
        return abs(np.vdot(model, w)) ** 2

    h = 1e-6
    for _ in range(60):
        f0 = corr(u_r, u_c)
        gr = (corr(u_r + h, u_c) - corr(u_r - h, u_c)) / (2 * h)
        gc = (corr(u_r, u_c + h) - corr(u_r, u_c - h)) / (2 * h)
        hrr = (corr(u_r + h, u_c) - 2 * f0 + corr(u_r - h, u_c)) / h**2
        hcc = (corr(u_r, u_c + h) - 2 * f0 + corr(u_r, u_c - h)) / h**2
        step_r = -gr / hrr if hrr < 0 else 0.0
        step_c = -gc / hcc if hcc < 0 else 0.0
        u_r += step_r
        u_c += step_c
        if abs(step_r) < 1e-12 and abs(step_c) < 1e-12:
            break
    radial = math.hypot(u_r, u_c)
    azimuth = math.asin(min(1.0, radial))
    elevation = math.atan2(u_c, u_r)
    return azimuth, elevation

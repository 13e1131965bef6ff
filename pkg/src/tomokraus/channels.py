"""Ready-made processes: Kraus definitions, kernels and closed-form cross-checks.

Every channel exposes two routes to its output tomogram. ``apply`` works on
tomograms only (kernel contraction, per-ray shifts or blurs); ``oracle``
runs the density-matrix pipeline and maps the result to a tomogram. The two
are compared in the test and verification suites.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.fft import irfft, next_fast_len, rfft, rfftfreq

from .basis import (
    DensityMatrix,
    KrausSet,
    apply_channel_oracle,
    displacement_matrix,
    hermite_functions,
)
from .errors import UsageError, ValidationError
from .kernels import (
    ProcessKernel,
    _ChiInterpolator,
    apply_kernel,
    partial_kernel,
    total_kernel,
)
from .tomography import RayGrid, TomogramGrid, symbol_values

__all__ = [
    "LibraryChannel",
    "SelectiveOutput",
    "VonNeumannModel",
    "von_neumann_kraus",
    "von_neumann_channel",
    "decoherence_factor",
    "PointerChannel",
    "von_neumann_pointer_channel",
    "basis_projector_channel",
    "gaussian_basis_kraus",
    "gaussian_basis_projector_channel",
    "GaussianProjectorCV",
    "GaussianPositionChannel",
    "gaussian_position_channel",
    "SharpLimitRow",
    "position_projection_trend",
    "QubitChannel",
    "ClosedFormKernel",
    "qubit_channel",
    "unitary_channel",
    "REGISTRY",
    "build_channel",
    "trapezoid_weights",
]

ORACLE_DIM = 64


def trapezoid_weights(nodes: np.ndarray) -> np.ndarray:
    h = np.diff(nodes)
    w = np.zeros(len(nodes))
    w[:-1] += 0.5 * h
    w[1:] += 0.5 * h
    return w


def _tomogram(matrix: np.ndarray, grid: RayGrid, source: str) -> TomogramGrid:
    vals = symbol_values(matrix, grid)
    return TomogramGrid(grid, vals.real, provenance={"source": source})


@dataclass(frozen=True)
class SelectiveOutput:
    """Tomogram density for one outcome; ``probability`` is its normalization."""

    tomogram: TomogramGrid
    probability: float

    def normalized(self) -> TomogramGrid:
        return TomogramGrid(self.tomogram.grid, self.tomogram.values / self.probability,
                            provenance=dict(self.tomogram.provenance, normalized=True))


@dataclass(frozen=True, eq=False)
class LibraryChannel:
    """A channel acting on a finite basis through its Kraus set and kernel."""

    name: str
    params: dict
    kraus: KrausSet
    kernel: ProcessKernel
    outcome_operator: Callable | None = None
    extras: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.kraus.dim

    def apply(self, tomogram: TomogramGrid, k_max: float | None = None) -> TomogramGrid:
        return apply_kernel(tomogram, self.kernel, k_max)

    def oracle_matrix(self, rho: DensityMatrix) -> np.ndarray:
        return apply_channel_oracle(rho, self.kraus).matrix

    def oracle(self, rho: DensityMatrix, grid: RayGrid) -> TomogramGrid:
        return _tomogram(self.oracle_matrix(rho), grid, f"oracle:{self.name}")

    def _outcome(self, outcome) -> np.ndarray:
        if self.outcome_operator is None:
            raise UsageError(f"channel {self.name!r} has no selective form")
        return self.outcome_operator(outcome)

    def selective(self, tomogram: TomogramGrid, outcome, k_max: float | None = None) -> SelectiveOutput:
        out = apply_kernel(tomogram, partial_kernel(self._outcome(outcome), 1.0, outcome), k_max)
        return SelectiveOutput(out, float(np.mean(out.normalization())))

    def oracle_selective(self, rho: DensityMatrix, outcome, grid: RayGrid) -> SelectiveOutput:
        a = self._outcome(outcome)
        mat = a @ rho.matrix @ a.conj().T
        return SelectiveOutput(_tomogram(mat, grid, f"oracle:{self.name}[{outcome}]"),
                               float(np.trace(mat).real))


# ---------------------------------------------------------------------------
# von Neumann measurement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VonNeumannModel:
    """Observable diag(a_i) coupled to a Gaussian pointer through g A (x) p.

    ``amplitudes`` are the system amplitudes c_i seen from the pointer side.
    The outcome grid spans g a_i +- 6 / sqrt(kappa) unless ``q_range`` is set.
    """

    eigenvalues: tuple
    coupling: float
    kappa: float
    amplitudes: tuple | None = None
    pointer_dim: int = 40
    q_nodes: int = 129
    q_range: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", tuple(float(a) for a in self.eigenvalues))
        if self.kappa <= 0:
            raise ValidationError("pointer width parameter kappa must be positive")
        if self.amplitudes is not None:
            c = np.asarray(self.amplitudes, dtype=complex)
            if len(c) != len(self.eigenvalues):
                raise ValidationError("one amplitude per eigenvalue is required")
            if abs(np.sum(np.abs(c) ** 2) - 1.0) > 1e-10:
                raise ValidationError("amplitudes must satisfy sum |c|^2 = 1 within 1e-10")
            object.__setattr__(self, "amplitudes", tuple(complex(v) for v in c))
        if self.q_nodes < 3:
            raise ValidationError("the outcome grid needs at least 3 nodes")

    @property
    def required_span(self) -> tuple[float, float]:
        ga = self.coupling * np.asarray(self.eigenvalues)
        half = 6.0 / np.sqrt(self.kappa)
        return float(ga.min() - half), float(ga.max() + half)

    @property
    def q_grid(self) -> np.ndarray:
        lo, hi = self.required_span
        if self.q_range is not None:
            if self.q_range[0] > lo + 1e-12 or self.q_range[1] < hi - 1e-12:
                raise ValidationError(f"outcome grid {self.q_range} does not span "
                                      f"g a_i +- 6/sqrt(kappa) = [{lo:.4g}, {hi:.4g}]")
            lo, hi = self.q_range
        return np.linspace(lo, hi, self.q_nodes)


def von_neumann_kraus(model: VonNeumannModel) -> KrausSet:
    """M_Q = (kappa/2pi)^(1/4) exp(-kappa (Q - g A)^2 / 4) on the outcome grid."""
    q = model.q_grid
    a = np.asarray(model.eigenvalues)
    amp = (model.kappa / (2 * np.pi)) ** 0.25 * np.exp(
        -model.kappa * (q[:, None] - model.coupling * a[None, :]) ** 2 / 4)
    ops = [np.diag(row).astype(complex) for row in amp]
    return KrausSet(ops, labels=tuple(float(v) for v in q), weights=trapezoid_weights(q),
                    tol_complete=1e-4, name="von-neumann")


def von_neumann_channel(model: VonNeumannModel) -> LibraryChannel:
    kraus = von_neumann_kraus(model)
    q = model.q_grid
    a = np.asarray(model.eigenvalues)

    def outcome(Q):
        amp = (model.kappa / (2 * np.pi)) ** 0.25 * np.exp(-model.kappa * (float(Q) - model.coupling * a) ** 2 / 4)
        return np.diag(amp).astype(complex)

    return LibraryChannel("von-neumann", {"kappa": model.kappa, "g": model.coupling,
                                          "eigenvalues": list(model.eigenvalues)},
                          kraus, total_kernel(kraus), outcome, {"model": model, "q": q})


def decoherence_factor(model: VonNeumannModel) -> np.ndarray:
    a = np.asarray(model.eigenvalues)
    return np.exp(-model.kappa * model.coupling ** 2 * (a[:, None] - a[None, :]) ** 2 / 8)


def _fourier_rows(values: np.ndarray, dx: float, multiplier: np.ndarray | Callable) -> np.ndarray:
    """Multiply each row's spectrum by ``multiplier(k)`` with zero padding."""
    n = values.shape[-1]
    m = next_fast_len(2 * n)
    k = 2 * np.pi * rfftfreq(m, d=dx)
    spec = rfft(values, n=m, axis=-1)
    mult = multiplier(k) if callable(multiplier) else multiplier
    return irfft(spec * mult, n=m, axis=-1)[..., :n]


@dataclass(frozen=True, eq=False)
class PointerChannel:
    """Pointer side of the von Neumann model: a mixture of coordinate shifts.

    L_j = c_j exp(-i g a_j p) moves the pointer by g a_j, so each ray is
    shifted in X by cos(theta) g a_j.
    """

    weights: tuple
    shifts: tuple
    name: str = "pointer"

    def _check(self, grid: RayGrid):
        if max(abs(s) for s in self.shifts) >= grid.x_max:
            raise ValidationError(f"pointer shift {max(map(abs, self.shifts)):.4g} exceeds the grid span "
                                  f"x_max = {grid.x_max}")

    def apply(self, tomogram: TomogramGrid) -> TomogramGrid:
        grid = tomogram.grid
        self._check(grid)
        mu = np.cos(grid.theta)[:, None]
        out = np.zeros_like(tomogram.values)
        for w, s in zip(self.weights, self.shifts):
            out += w * _fourier_rows(tomogram.values, grid.dx, lambda k: np.exp(-1j * k[None, :] * mu * s))
        lost = np.max(np.abs(out @ grid.wx - tomogram.values @ grid.wx))
        if lost > 1e-6:
            raise ValidationError(f"pointer shift pushes weight {lost:.3e} off the X grid")
        return TomogramGrid(grid, out, provenance=dict(tomogram.provenance, channel=self.name))

    def apply_kernel_form(self, tomogram: TomogramGrid, t_max: float = 30.0, n_t: int = 1201) -> np.ndarray:
        """The delta-bearing kernel with its constraint resolved on the ray.

        (1/2pi) sum_j w_j int dt chi(t mu, t nu) exp(-it(X - mu g a_j)),
        chi taken from the input rays by X quadrature.
        """
        grid = tomogram.grid
        t = np.linspace(-t_max, t_max, n_t)
        wt = trapezoid_weights(t)
        chi = (tomogram.values * grid.wx) @ np.exp(1j * np.outer(grid.x, t))  # (theta, t)
        mu = np.cos(grid.theta)
        out = np.zeros((grid.n_theta, grid.n_x), dtype=complex)
        for w, s in zip(self.weights, self.shifts):
            ph = np.exp(-1j * t[None, None, :] * (grid.x[None, :, None] - mu[:, None, None] * s))
            out += w * np.einsum("tk,txk,k->tx", chi, ph, wt)
        return (out / (2 * np.pi)).real

    def oracle_matrix(self, rho: DensityMatrix, dim: int = ORACLE_DIM) -> np.ndarray:
        mats = []
        for w, s in zip(self.weights, self.shifts):
            d = displacement_matrix(dim, 0.0, s, cols=rho.dim)
            mats.append(w * d @ rho.matrix @ d.conj().T)
        return sum(mats)

    def oracle(self, rho: DensityMatrix, grid: RayGrid, dim: int = ORACLE_DIM) -> TomogramGrid:
        return _tomogram(self.oracle_matrix(rho, dim), grid, "oracle:pointer")


def von_neumann_pointer_channel(model: VonNeumannModel) -> PointerChannel:
    if model.amplitudes is None:
        raise ValidationError("the pointer channel needs system amplitudes c_i")
    w = tuple(float(abs(c) ** 2) for c in model.amplitudes)
    s = tuple(model.coupling * a for a in model.eigenvalues)
    return PointerChannel(w, s)


# ---------------------------------------------------------------------------
# projective measurements in the number basis
# ---------------------------------------------------------------------------


def _projector(m: int, dim: int) -> np.ndarray:
    if not 0 <= m < dim:
        raise ValidationError(f"basis index {m} outside 0..{dim - 1}")
    p = np.zeros((dim, dim), dtype=complex)
    p[m, m] = 1.0
    return p


def basis_projector_channel(dim: int) -> LibraryChannel:
    """Projection onto |m><m|; selective per m, full dephasing when summed."""
    kraus = KrausSet([_projector(m, dim) for m in range(dim)], labels=tuple(range(dim)), name="basis-proj")
    return LibraryChannel("basis-proj", {"dim": dim}, kraus, total_kernel(kraus),
                          lambda m: _projector(int(m), dim))


def _gaussian_outcomes(kappa: float, dim: int, nodes: int | None = None) -> np.ndarray:
    sigma = 1.0 / kappa
    lo, hi = -6 * sigma, dim - 1 + 6 * sigma
    need = int(np.ceil((hi - lo) / (0.5 * sigma))) + 1
    n = max(129, need + (need + 1) % 2) if nodes is None else nodes
    return np.linspace(lo, hi, n)


def _gaussian_basis_op(a: float, kappa: float, dim: int) -> np.ndarray:
    norm = (np.sqrt(2 * np.pi) / kappa) ** 0.5
    n = np.arange(dim)
    return np.diag(np.exp(-kappa ** 2 * (n - a) ** 2 / 4) / norm).astype(complex)


def gaussian_basis_kraus(kappa: float, dim: int, outcomes: np.ndarray | None = None) -> KrausSet:
    """Pi_a = N^-1 sum_n exp(-kappa^2 (n - a)^2 / 4) |n><n| with N^2 = sqrt(2 pi) / kappa."""
    if kappa <= 0:
        raise ValidationError("kappa must be positive")
    a = _gaussian_outcomes(kappa, dim) if outcomes is None else np.asarray(outcomes, dtype=float)
    ops = [_gaussian_basis_op(v, kappa, dim) for v in a]
    return KrausSet(ops, labels=tuple(float(v) for v in a), weights=trapezoid_weights(a),
                    tol_complete=1e-4, name="gauss-basis")


def gaussian_basis_projector_channel(kappa: float, dim: int, outcomes: np.ndarray | None = None) -> LibraryChannel:
    kraus = gaussian_basis_kraus(kappa, dim, outcomes)
    return LibraryChannel("gauss-basis", {"kappa": kappa, "dim": dim}, kraus, total_kernel(kraus),
                          lambda a: _gaussian_basis_op(float(a), kappa, dim))


# ---------------------------------------------------------------------------
# Gaussian position measurement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianProjectorCV:
    """Pi_a = (pi kappa^2)^(-1/4) int exp(-(q - a)^2 / (2 kappa^2)) |q><q| dq."""

    kappa: float
    outcomes: tuple = ()

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValidationError("kappa must be positive")

    def profile(self, q, a) -> np.ndarray:
        return (np.pi * self.kappa ** 2) ** -0.25 * np.exp(-(np.asarray(q) - a) ** 2 / (2 * self.kappa ** 2))


def _coordinate_basis(dim: int, q_max: float = 14.0, step: float = 0.04):
    q = np.arange(-q_max, q_max + step / 2, step)
    return q, hermite_functions(dim, q), trapezoid_weights(q)


@dataclass(frozen=True, eq=False)
class GaussianPositionChannel:
    """Gaussian-profile position measurement.

    Non-selective: each ray is blurred in X by a Gaussian of standard
    deviation |sin theta| / (kappa sqrt 2). Selective: the tomogram density
    for outcome a is

        T'_a(X, theta) = (1/4pi^2) int ds du chi(s mu + u, s nu)
                         exp(-iXs - iua - kappa^2 u^2 / 4 - s^2 nu^2 / (4 kappa^2)),

    with chi(xi) = int T(X, xi) exp(iX) dX read off the input rays.
    """

    projector: GaussianProjectorCV
    name: str = "gauss-pos"

    @property
    def kappa(self) -> float:
        return self.projector.kappa

    def blur_sigma(self, theta) -> np.ndarray:
        return np.abs(np.sin(theta)) / (self.kappa * np.sqrt(2.0))

    def apply(self, tomogram: TomogramGrid) -> TomogramGrid:
        grid = tomogram.grid
        sig = self.blur_sigma(grid.theta)[:, None]
        if sig.max() < 0.1 * grid.dx:
            warnings.warn(f"blur width {sig.max():.3e} is below the grid resolution {grid.dx:.3e}; "
                          "output equals input within tolerance", RuntimeWarning, stacklevel=2)
        out = _fourier_rows(tomogram.values, grid.dx, lambda k: np.exp(-0.5 * (sig * k[None, :]) ** 2))
        return TomogramGrid(grid, out, provenance=dict(tomogram.provenance, channel=self.name))

    def selective(self, tomogram: TomogramGrid, outcomes, r_max: float = 16.0, step: float = 0.1,
                  tail: float = 1e-12) -> list[SelectiveOutput]:
        grid = tomogram.grid
        outcomes = np.atleast_1d(np.asarray(outcomes, dtype=float))
        chi = _ChiInterpolator(tomogram.as_symbol(), r_max)
        kap = self.kappa
        s = np.arange(-r_max, r_max + step / 2, step)
        u_max = min(2 * r_max, np.sqrt(-4 * np.log(tail)) / kap)
        u = np.arange(-u_max, u_max + step / 2, step)
        ws, wu = trapezoid_weights(s), trapezoid_weights(u)
        out = np.empty((len(outcomes), grid.n_theta, grid.n_x))
        e_ua = np.exp(-1j * np.outer(u, outcomes)) * wu[:, None]  # (u, a)
        e_xs = np.exp(-1j * np.outer(s, grid.x)) * ws[:, None]  # (s, x)
        for t, th in enumerate(grid.theta):
            mu, nu = np.cos(th), np.sin(th)
            damp = np.exp(-kap ** 2 * u[None, :] ** 2 / 4 - (s[:, None] * nu) ** 2 / (4 * kap ** 2))
            c = chi(s[:, None] * mu + u[None, :], s[:, None] * nu * np.ones_like(u)[None, :]) * damp
            f = c @ e_ua  # (s, a)
            out[:, t, :] = ((f.T @ e_xs).real) / (4 * np.pi ** 2)
        res = []
        for i, a in enumerate(outcomes):
            tomo = TomogramGrid(grid, out[i], provenance=dict(tomogram.provenance, channel=self.name,
                                                               outcome=float(a)))
            res.append(SelectiveOutput(tomo, float(np.mean(tomo.normalization()))))
        return res

    def oracle_matrix(self, rho: DensityMatrix, dim: int = ORACLE_DIM) -> np.ndarray:
        """rho'(q, q') = rho(q, q') exp(-(q - q')^2 / (4 kappa^2)), mapped to a large basis."""
        q, psi, w = _coordinate_basis(dim)
        small = psi[: rho.dim] * w
        rqq = small.T @ rho.matrix @ small
        rqq = rqq * np.exp(-(q[:, None] - q[None, :]) ** 2 / (4 * self.kappa ** 2))
        return psi @ rqq @ psi.T

    def oracle(self, rho: DensityMatrix, grid: RayGrid, dim: int = ORACLE_DIM) -> TomogramGrid:
        return _tomogram(self.oracle_matrix(rho, dim), grid, "oracle:gauss-pos")

    def oracle_selective(self, rho: DensityMatrix, outcome: float, grid: RayGrid,
                         dim: int = ORACLE_DIM) -> SelectiveOutput:
        q, psi, w = _coordinate_basis(dim)
        f = (psi * (w * self.projector.profile(q, outcome))) @ psi.T
        mat = f[:, : rho.dim] @ rho.matrix @ f[:, : rho.dim].conj().T
        return SelectiveOutput(_tomogram(mat, grid, f"oracle:gauss-pos[{outcome}]"), float(np.trace(mat).real))


def gaussian_position_channel(kappa: float, outcomes: Sequence[float] = ()) -> GaussianPositionChannel:
    return GaussianPositionChannel(GaussianProjectorCV(float(kappa), tuple(outcomes)))


@dataclass(frozen=True)
class SharpLimitRow:
    kappa: float
    probability: float
    ray_mean: float
    ray_variance: float


def position_projection_trend(tomogram: TomogramGrid, outcome: float, kappas: Sequence[float],
                              step: float = 0.1) -> tuple[list[SharpLimitRow], float]:
    """Selective Gaussian position measurement as kappa -> 0.

    A sharp coordinate projection has no normalizable output, so it is only
    approached through the Gaussian family. For each kappa the row holds the
    outcome probability and the mean and variance of the normalized output's
    theta = 0 ray (the position distribution). The second return value is the
    limit of the probability, the input's position density at the outcome.
    The grid must resolve momenta of order 1/kappa.
    """
    grid = tomogram.grid
    i0 = int(np.argmin(grid.theta))
    rows = []
    for kap in kappas:
        ch = gaussian_position_channel(kap)
        out = ch.selective(tomogram, [outcome], r_max=max(16.0, 10.0 / kap), step=step)[0]
        ray = out.tomogram.values[i0] / out.probability
        mean = float(np.sum(grid.wx * ray * grid.x))
        var = float(np.sum(grid.wx * ray * (grid.x - mean) ** 2))
        rows.append(SharpLimitRow(float(kap), out.probability, mean, var))
    limit = float(np.interp(outcome, grid.x, tomogram.values[i0]))
    return rows, limit


# ---------------------------------------------------------------------------
# qubit channels
# ---------------------------------------------------------------------------


def _basis_tomogram(m: int, X, mu, nu) -> np.ndarray:
    r = np.hypot(mu, nu)
    return hermite_functions(m + 1, np.asarray(X) / r)[m] ** 2 / r


@dataclass(frozen=True)
class ClosedFormKernel:
    """identity_weight * delta(xb - x) + sum_t c_t/(2pi) T_out(x) int T_in(Xb + X', mub, nub) e^{-iX'} dX'.

    ``terms`` holds (c, out, in) with basis tomograms T_0, T_1. The X'
    integral runs by trapezoid quadrature on the basis tomograms, which
    keeps this evaluator independent of the tensor route.
    """

    identity_weight: float
    terms: tuple
    labels: dict = field(default_factory=dict)

    def evaluate_regular(self, xbar, x, n_quad: int = 4001, span: float = 14.0) -> np.ndarray:
        xbar = np.atleast_2d(np.asarray(xbar, dtype=float))
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros((len(xbar), len(x)), dtype=complex)
        for c, m_out, m_in in self.terms:
            t_out = _basis_tomogram(m_out, x[:, 0], x[:, 1], x[:, 2])
            moment = np.empty(len(xbar), dtype=complex)
            for i, (Xb, mb, nb) in enumerate(xbar):
                rb = np.hypot(mb, nb)
                y = np.linspace(-span * rb, span * rb, n_quad)
                vals = _basis_tomogram(m_in, y, mb, nb) * np.exp(-1j * (y - Xb))
                moment[i] = np.trapezoid(vals, y)
            out += c / (2 * np.pi) * np.outer(moment, t_out)
        return out


@dataclass(frozen=True)
class QubitChannel:
    kind: str
    parameter: float

    def __post_init__(self):
        if self.kind not in ("phase_flip", "amplitude_damping"):
            raise ValidationError(f"unknown qubit channel kind {self.kind!r}")
        if not 0.0 <= self.parameter <= 1.0:
            raise ValidationError(f"qubit channel parameter must lie in [0, 1], got {self.parameter}")

    @property
    def kraus(self) -> KrausSet:
        p = self.parameter
        if self.kind == "phase_flip":
            ops = [np.sqrt(p) * np.eye(2), np.sqrt(1 - p) * np.diag([1.0, -1.0])]
        else:
            ops = [np.diag([1.0, np.sqrt(1 - p)]), np.sqrt(p) * np.array([[0.0, 1.0], [0.0, 0.0]])]
        return KrausSet([o.astype(complex) for o in ops], labels=("A1", "A2"),
                        name=self.kind.replace("_", "-"), tol_complete=1e-12)

    @property
    def kernel(self) -> ProcessKernel:
        return total_kernel(self.kraus)

    def closed_form(self) -> ClosedFormKernel:
        p = self.parameter
        if self.kind == "phase_flip":
            # K_1 = p delta, K_2 = (1-p) [2 D00 U00 + 2 D11 U11 - delta]
            return ClosedFormKernel(p - (1 - p), ((2 * (1 - p), 0, 0), (2 * (1 - p), 1, 1)),
                                    {"K_1": "A1", "K_2": "A2"})
        s = np.sqrt(1 - p)
        # the gamma-weighted kernel comes from A2 = sqrt(gamma)|0><1|, the rest from A1
        return ClosedFormKernel(s, ((1 - s, 0, 0), (1 - p - s, 1, 1), (p, 0, 1)),
                                {"K_1": "A2", "K_2": "A1"})

    def channel(self) -> LibraryChannel:
        kraus = self.kraus
        ops = kraus.operators
        return LibraryChannel(kraus.name, {"parameter": self.parameter}, kraus, total_kernel(kraus),
                              lambda i: ops[int(i)], {"closed_form": self.closed_form()})


def qubit_channel(kind: str, parameter: float) -> QubitChannel:
    return QubitChannel(kind, float(parameter))


def unitary_channel(unitary, name: str = "unitary") -> LibraryChannel:
    kraus = KrausSet([np.asarray(unitary, dtype=complex)], name=name, tol_complete=1e-10)
    return LibraryChannel(name, {}, kraus, total_kernel(kraus))


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


def _rotation(phi: float, dim: int) -> LibraryChannel:
    ch = unitary_channel(np.diag(np.exp(-1j * phi * np.arange(dim))), "rotation")
    return LibraryChannel("rotation", {"phi": phi, "dim": dim}, ch.kraus, ch.kernel)


def _identity(dim: int) -> LibraryChannel:
    kraus = KrausSet([np.eye(dim, dtype=complex)], name="identity")
    return LibraryChannel("identity", {"dim": dim}, kraus, total_kernel(kraus))


def _von_neumann(kappa: float, g: float, dim: int = 3) -> LibraryChannel:
    return von_neumann_channel(VonNeumannModel(tuple(np.arange(dim) - (dim - 1) / 2), g, kappa))


def _pointer(g: float, dim: int = 3) -> PointerChannel:
    a = np.arange(dim) - (dim - 1) / 2
    c = np.ones(dim) / np.sqrt(dim)
    return von_neumann_pointer_channel(VonNeumannModel(tuple(a), g, 2.0, tuple(c)))


REGISTRY: dict = {
    "identity": (_identity, ()),
    "phase-flip": (lambda p, dim=2: qubit_channel("phase_flip", p).channel(), ("p",)),
    "amp-damp": (lambda g, dim=2: qubit_channel("amplitude_damping", g).channel(), ("gamma",)),
    "basis-proj": (basis_projector_channel, ()),
    "gauss-basis": (lambda kappa, dim: gaussian_basis_projector_channel(kappa, dim), ("kappa",)),
    "gauss-pos": (lambda kappa, dim=None: gaussian_position_channel(kappa), ("kappa",)),
    "von-neumann": (lambda kappa, g, dim=3: _von_neumann(kappa, g, dim), ("kappa", "g")),
    "pointer": (lambda g, dim=3: _pointer(g, dim), ("g",)),
    "rotation": (lambda phi, dim: _rotation(phi, dim), ("phi",)),
}

# channels whose Kraus matrices live on a fixed system dimension
FIXED_DIM = {"phase-flip": 2, "amp-damp": 2}


def build_channel(name: str, params: Sequence[float], dim: int):
    """Registry lookup by name; parameters are positional in the listed order."""
    if name not in REGISTRY:
        raise UsageError(f"unknown channel {name!r}; known: {', '.join(sorted(REGISTRY))}")
    fn, names = REGISTRY[name]
    if len(params) != len(names):
        raise UsageError(f"channel {name!r} takes parameters ({', '.join(names) or 'none'}), got {list(params)}")
    if name in ("identity", "basis-proj"):
        return fn(dim)
    return fn(*[float(v) for v in params], dim=dim)

"""Process kernels: a Kraus set acting directly on tomograms.

A partial operation with Kraus matrix A acts on a tomogram as

    T'(x) = int T(xb) K(xb, x) dxb,
    K(xb, x) = sum_{ijkl} A_ij conj(A_lk) D_jk(xb) U_il(x),

where D_jk is a quantizer matrix element and U_il = Tr(|i><l| U(x)) a
dequantizer element. Kernels of this form carry delta distributions (the
identity channel has K = delta(xb - x)), so they are stored as the
coefficient tensor M[j, k, l, i] = sum_a w_a A_a,ij conj(A_a,lk) and
evaluated on grids only on demand. The xb integral against D_jk is the
reconstruction functional, which is how :func:`apply_kernel` works.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .basis import KrausSet, displacement_matrix, hermite_functions
from .errors import GeneralizedObjectError, ValidationError
from .tomography import (
    DEFAULT_GRID,
    RadialRule,
    RayGrid,
    SymbolGrid,
    TomogramGrid,
    _cache,
    _rule,
    characteristic_rays,
    reconstruction_moments,
    scalar_product,
    symbol_values,
)

__all__ = [
    "PartialKernel",
    "ProcessKernel",
    "kraus_symbols",
    "kraus_symbols_from_joint",
    "partial_kernel",
    "total_kernel",
    "apply_kernel",
    "apply_kernel_quadrature",
    "CompletenessReport",
    "completeness_check",
    "TripleTraceValue",
    "triple_trace",
    "DeltaForm",
    "DequantizerSymbol",
    "postprocess_dequantizer_symbol",
    "QUADRATURE_BUDGET",
]

QUADRATURE_BUDGET = {"n_x": 65, "n_theta": 16}


def _slice_tensor(a: np.ndarray, w: float) -> np.ndarray:
    # M[j, k, l, i] = w A_ij conj(A_lk)
    return w * np.einsum("ij,lk->jkli", a, a.conj())


def identity_tensor(dim: int) -> np.ndarray:
    return _slice_tensor(np.eye(dim, dtype=complex), 1.0)


def _identity_split(a: np.ndarray, w: float) -> float:
    """Weight of the delta(xb - x) component carried by one Kraus matrix.

    Nonzero only for diagonal A whose off-diagonal products a_j conj(a_k) are
    all equal; then K = c delta + sum_j (|a_j|^2 - c) D_jj U_jj.
    """
    if np.max(np.abs(a - np.diag(np.diag(a)))) > 0:
        return 0.0
    d = np.diag(a)
    prod = np.outer(d, d.conj())
    off = prod[~np.eye(len(d), dtype=bool)]
    if np.max(np.abs(off - off[0])) > 1e-14 or abs(off[0].imag) > 1e-14:
        return 0.0
    return float(w * off[0].real)


@dataclass(frozen=True, eq=False)
class PartialKernel:
    """Single-outcome slice of a process kernel."""

    coefficients: np.ndarray
    label: object = None
    weight: float = 1.0
    identity_weight: float = 0.0

    @property
    def dim(self) -> int:
        return self.coefficients.shape[0]

    def evaluate(self, xbar, x) -> np.ndarray:
        return _evaluate_tensor(self.coefficients, xbar, x)


@dataclass(frozen=True, eq=False)
class ProcessKernel:
    """Kernel of a whole process, as a coefficient tensor.

    ``kind`` is ``"regular"`` when no delta(xb - x) component is present and
    ``"generalized"`` otherwise; the regular remainder is always available as
    :attr:`regular_part`.
    """

    coefficients: np.ndarray
    identity_weight: float = 0.0
    name: str = ""
    partials: tuple = ()
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        if c.ndim != 4 or len(set(c.shape)) != 1:
            raise ValidationError("kernel coefficients must be a rank-4 tensor with equal extents")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def dim(self) -> int:
        return self.coefficients.shape[0]

    @property
    def kind(self) -> str:
        return "generalized" if abs(self.identity_weight) > 0 else "regular"

    @property
    def regular_part(self) -> np.ndarray:
        return self.coefficients - self.identity_weight * identity_tensor(self.dim)

    def hermiticity_residual(self) -> float:
        m = self.coefficients
        return float(np.max(np.abs(m - np.conj(m.transpose(1, 0, 3, 2)))))

    def trace_map(self) -> np.ndarray:
        """sum_i M[j, k, i, i] = (sum_a w_a A_a^dagger A_a)_kj."""
        return np.einsum("jkii->kj", self.coefficients)

    def completeness_residual(self) -> float:
        return float(np.max(np.abs(self.trace_map() - np.eye(self.dim))))

    def apply_matrix(self, rho: np.ndarray) -> np.ndarray:
        """rho'_il = sum_jk M[j, k, l, i] rho_jk."""
        return np.einsum("jkli,jk->il", self.coefficients, rho)

    def evaluate(self, xbar, x, regular_only: bool = False) -> np.ndarray:
        """Kernel values K(xb, x) for point arrays of shape (n, 3) and (m, 3).

        In the truncated basis every kernel is a regular function; a
        ``generalized`` kernel's pointwise values are the truncated image of
        its delta component. ``regular_only`` drops that component.
        """
        coeff = self.regular_part if regular_only else self.coefficients
        return _evaluate_tensor(coeff, xbar, x)

    def __add__(self, other: "ProcessKernel") -> "ProcessKernel":
        return ProcessKernel(self.coefficients + other.coefficients,
                             self.identity_weight + other.identity_weight,
                             f"{self.name}+{other.name}", self.partials + other.partials)


def _quantizer_rows(dim: int, pts: np.ndarray) -> np.ndarray:
    """D_jk at points (n, 3) -> (n, j, k)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    disp = displacement_matrix(dim, pts[:, 1], pts[:, 2])
    return disp * (np.exp(1j * pts[:, 0]) / (2 * np.pi))[:, None, None]


def _dequantizer_rows(dim: int, pts: np.ndarray) -> np.ndarray:
    """U_il = Tr(|i><l| U(x)) at points (m, 3) -> (m, i, l).

    Uses homogeneity to map each point onto the unit circle; the
    mu = nu = 0 points are delta functions of X and are refused.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    r = np.hypot(pts[:, 1], pts[:, 2])
    if np.any(r == 0):
        raise GeneralizedObjectError("dequantizer elements at mu = nu = 0 are delta functions")
    theta = np.arctan2(pts[:, 2], pts[:, 1])
    psi = hermite_functions(dim, pts[:, 0] / r)  # (n, m)
    idx = np.arange(dim)
    phase = np.exp(1j * theta[:, None, None] * (idx[None, None, :] - idx[None, :, None]))
    return psi.T[:, :, None] * psi.T[:, None, :] * phase / r[:, None, None]


def _evaluate_tensor(coeff: np.ndarray, xbar, x) -> np.ndarray:
    dim = coeff.shape[0]
    d = _quantizer_rows(dim, xbar)
    u = _dequantizer_rows(dim, x)
    return np.einsum("ajk,jkli,bil->ab", d, coeff, u, optimize=True)


# ---------------------------------------------------------------------------
# symbols of Kraus operators
# ---------------------------------------------------------------------------


def kraus_symbols(kraus: KrausSet, grid: RayGrid = DEFAULT_GRID) -> list[SymbolGrid]:
    """Symbol of each Kraus operator on the grid.

    Finite-dimensional symbols are regular; the generalized flag is only set
    by the continuous-variable constructions in the channel library.
    """
    return [SymbolGrid(grid, symbol_values(a, grid), tag=f"A[{lab}]")
            for a, lab in zip(kraus.operators, kraus.labels)]


def kraus_symbols_from_joint(unitary, env_probs: Sequence[float], sys_dim: int, env_dim: int,
                             grid: RayGrid, env_grid: RayGrid, k_max: float | None = None) -> list[SymbolGrid]:
    """Kraus symbols through the two-mode symbol of the joint evolution.

    f_{A_mn}(x) = sqrt(p_n) int f_U(x, y) D^E_mn(y) dy, with the environment
    integral done by the reconstruction quadrature on ``env_grid``.
    """
    u = np.asarray(unitary, dtype=complex).reshape(sys_dim, env_dim, sys_dim, env_dim)
    # two-mode symbol f_U(x, y) = sum U_{(s e),(s' e')} Usys_{s' s}(x) Uenv_{e' e}(y)
    psi_s = hermite_functions(sys_dim, grid.x)
    psi_e = hermite_functions(env_dim, env_grid.x)
    s = np.arange(sys_dim)
    e = np.arange(env_dim)
    ph_s = np.exp(1j * np.outer(grid.theta, s))
    ph_e = np.exp(1j * np.outer(env_grid.theta, e))
    # system dequantizer Tr(|s'><s| U(x)) = psi_s' psi_s exp(i (s - s') theta)
    usys = np.einsum("px,sx,tp,ts->txps", psi_s, psi_s, ph_s.conj(), ph_s)
    uenv = np.einsum("px,sx,tp,ts->txps", psi_e, psi_e, ph_e.conj(), ph_e)
    f_u = np.einsum("aebf,txab,uyef->txuy", u, usys, uenv, optimize=True)
    # environment integral against D^E_mn, batched over the system samples
    cache = _cache(env_dim, env_grid, _rule(k_max, None))
    per_theta = np.einsum("txuy,yc->txuc", f_u, cache.filters)
    mats = np.einsum("txuc,uc->txc", per_theta, cache.angular).reshape(
        grid.n_theta, grid.n_x, env_dim, env_dim)
    out = []
    p = np.asarray(env_probs, dtype=float)
    for n, pn in enumerate(p):
        if pn == 0:
            continue
        for m in range(env_dim):
            out.append(SymbolGrid(grid, np.sqrt(pn) * mats[:, :, m, n], tag=f"A[{(m, n)}]"))
    return out


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def partial_kernel(a, weight: float = 1.0, label=None) -> PartialKernel:
    a = np.asarray(a, dtype=complex)
    return PartialKernel(_slice_tensor(a, weight), label, weight, _identity_split(a, weight))


def total_kernel(kraus: KrausSet, name: str | None = None) -> ProcessKernel:
    parts = tuple(partial_kernel(a, w, lab) for a, w, lab in zip(kraus.operators, kraus.weights, kraus.labels))
    coeff = np.einsum("a,aij,alk->jkli", kraus.weights, kraus.stack, kraus.stack.conj(), optimize=True)
    ident = float(sum(p.identity_weight for p in parts))
    meta = {"completeness_residual": kraus.completeness_residual()}
    if meta["completeness_residual"] > kraus.tol_complete:
        meta["warning"] = "incomplete Kraus set"
    return ProcessKernel(coeff, ident, name or kraus.name, parts, meta)


def _kernel_of(kernel) -> ProcessKernel:
    if isinstance(kernel, PartialKernel):
        return ProcessKernel(kernel.coefficients, kernel.identity_weight, str(kernel.label), (kernel,))
    return kernel


def apply_kernel(tomogram: TomogramGrid, kernel: ProcessKernel | PartialKernel,
                 k_max: float | None = None, taper: float | None = None) -> TomogramGrid:
    """Structured route: reconstruction moments contracted with the kernel tensor."""
    kernel = _kernel_of(kernel)
    grid = tomogram.grid
    rho = reconstruction_moments(tomogram.values, grid, kernel.dim, k_max, taper)
    out = kernel.apply_matrix(rho)
    vals = symbol_values(out, grid)
    imag = np.max(np.abs(vals.imag))
    if imag > 1e-8:
        raise ValidationError(f"kernel output has imaginary residue {imag:.3e}")
    prov = dict(tomogram.provenance)
    prov["channels"] = list(prov.get("channels", [])) + [kernel.name]
    return TomogramGrid(grid, vals.real, provenance=prov)


def apply_kernel_quadrature(tomogram: TomogramGrid, kernel: ProcessKernel | PartialKernel,
                            k_max: float = 10.0, order: int = 24, chunk: int = 4096) -> TomogramGrid:
    """Brute-force route: T'(x) = sum over xb nodes of T(xb) K(xb, x) dxb.

    The xb integral runs over (X, mu, nu) in polar form, (mu, nu) = k
    (cos theta, sin theta), with X = k Y so that homogeneity puts T back on
    the stored unit-circle samples. Every kernel value is evaluated from the
    closed-form matrix elements. Cost grows as the product of both grids, so
    only coarse grids are accepted.
    """
    kernel = _kernel_of(kernel)
    grid = tomogram.grid
    if grid.n_x > QUADRATURE_BUDGET["n_x"] or grid.n_theta > QUADRATURE_BUDGET["n_theta"]:
        raise ValidationError(f"grid {grid.n_theta}x{grid.n_x} exceeds the quadrature budget "
                              f"{QUADRATURE_BUDGET['n_theta']}x{QUADRATURE_BUDGET['n_x']}")
    k, wk = RadialRule(k_max, 0.0, order).nodes_weights
    th, y, kk = np.meshgrid(grid.theta, grid.x, k, indexing="ij")
    w = (grid.wtheta[:, None, None] * grid.wx[None, :, None] * wk[None, None, :]
         * tomogram.values[:, :, None]).ravel()
    # |k| from dX = |k| dY cancels the 1/|k| of homogeneity; wk carries the polar |k|
    xbar = np.stack([(kk * y).ravel(), (kk * np.cos(th)).ravel(), (kk * np.sin(th)).ravel()], axis=1)
    keep = np.abs(w) > 0
    xbar, w = xbar[keep], w[keep]
    tt, xx = np.meshgrid(grid.theta, grid.x, indexing="ij")
    xout = np.stack([xx.ravel(), np.cos(tt).ravel(), np.sin(tt).ravel()], axis=1)
    dim = kernel.dim
    u = _dequantizer_rows(dim, xout)
    mu_ = np.einsum("jkli,bil->jkb", kernel.coefficients, u).reshape(dim * dim, -1)
    acc = np.zeros(len(xout), dtype=complex)
    for s in range(0, len(xbar), chunk):
        d = _quantizer_rows(dim, xbar[s:s + chunk]).reshape(-1, dim * dim)
        acc += (w[s:s + chunk] @ d) @ mu_
    vals = acc.reshape(grid.n_theta, grid.n_x)
    return TomogramGrid(grid, vals.real, provenance={"route": "quadrature", "imag": float(np.abs(vals.imag).max())})


# ---------------------------------------------------------------------------
# completeness of symbol sets
# ---------------------------------------------------------------------------


class _ChiInterpolator:
    """chi(mu, nu) = int f(X, mu, nu) exp(iX) dX at arbitrary points.

    The radial dependence is splined from a fine uniform radius grid; the
    angular dependence is a trigonometric polynomial recovered exactly from
    the 2 n_theta directions (theta and theta + pi by parity).
    """

    def __init__(self, symbol: SymbolGrid, r_max: float, dr: float = 0.02, rel_cut: float = 1e-13):
        grid = symbol.grid
        r = np.arange(0.0, r_max + dr, dr)
        g_pos = characteristic_rays(symbol.values, grid, r)
        g_neg = characteristic_rays(symbol.values, grid, -r)
        samples = np.concatenate([g_pos, g_neg], axis=0)  # (2 n_theta, n_r), angle i pi / n_theta
        coef = np.fft.fft(samples, axis=0) / samples.shape[0]
        freqs = np.fft.fftfreq(samples.shape[0], d=1.0 / samples.shape[0])
        mag = np.max(np.abs(coef), axis=1)
        keep = mag > rel_cut * max(mag.max(), 1e-300)
        self.freqs = freqs[keep]
        self.spline = CubicSpline(r, coef[keep].T, axis=0)
        self.r_max = r_max

    def __call__(self, mu, nu) -> np.ndarray:
        r = np.hypot(mu, nu)
        phi = np.arctan2(nu, mu)
        c = self.spline(np.clip(r, 0, self.r_max))
        val = np.sum(c * np.exp(1j * phi[..., None] * self.freqs), axis=-1)
        return np.where(r <= self.r_max, val, 0.0)


@dataclass(frozen=True)
class CompletenessReport:
    weak_value: float
    weak_target: float
    weak_residual: float
    smeared_values: tuple
    smeared_targets: tuple
    smeared_residual: float
    tol: float

    @property
    def residual(self) -> float:
        return max(self.weak_residual, self.smeared_residual)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol

    def as_dict(self) -> dict:
        return {
            "weak_value": self.weak_value,
            "weak_target": self.weak_target,
            "weak_residual": self.weak_residual,
            "smeared_values": [[v.real, v.imag] for v in self.smeared_values],
            "smeared_targets": [[v.real, v.imag] for v in self.smeared_targets],
            "smeared_residual": self.smeared_residual,
            "residual": self.residual,
            "tol": self.tol,
            "passed": self.passed,
        }


SMEAR_WIDTH = 0.2
SMEAR_CENTERS = ((0.0, 0.0), (0.3, 0.0), (0.0, 0.3), (0.25, -0.25))


def _smearing_nodes(center, width, order=5):
    t, w = np.polynomial.hermite_e.hermegauss(order)
    w = w / np.sqrt(2 * np.pi)
    a, b = np.meshgrid(center[0] + width * t, center[1] + width * t, indexing="ij")
    return a.ravel(), b.ravel(), np.outer(w, w).ravel()


def _polar_nodes(r_max, n_angle, order):
    k, wk = RadialRule(r_max, 0.0, order).nodes_weights
    th = np.pi * np.arange(n_angle) / n_angle
    kk, tt = np.meshgrid(k, th, indexing="ij")
    wt = np.outer(wk, np.full(n_angle, np.pi / n_angle))
    return (kk * np.cos(tt)).ravel(), (kk * np.sin(tt)).ravel(), wt.ravel()


def _identity_lhs(dim, mu_b, nu_b):
    # (1/2pi) Tr(1_N W(-xb)) = (1/2pi) sum_n <n| exp(-i mu q - i nu p) |n>
    disp = displacement_matrix(dim, mu_b, nu_b)
    return np.trace(disp, axis1=-2, axis2=-1) / (2 * np.pi)


def _compress(symbols: list, w: np.ndarray):
    """Equivalent family for sums of the form sum_a w_a B(f_a, f_a).

    Both completeness sums are sesquilinear in the symbols, so only
    sum_a w_a f_a conj(f_a) matters; the SVD of the weighted samples gives an
    equivalent family of at most (number of samples) members.
    """
    if len(symbols) <= 2 or np.any(w < 0):
        return symbols, w
    grid = symbols[0].grid
    stack = np.stack([s.values.ravel() for s in symbols]) * np.sqrt(w)[:, None]
    _, sv, vh = np.linalg.svd(stack, full_matrices=False)
    keep = sv > 1e-13 * sv[0]
    eff = [SymbolGrid(grid, (v * sig).reshape(grid.n_theta, grid.n_x), tag=f"svd{i}")
           for i, (sig, v) in enumerate(zip(sv[keep], vh[keep]))]
    return eff, np.ones(len(eff))


def completeness_check(symbols: Sequence[SymbolGrid], weights: Sequence[float] | None, dim: int,
                       tol: float = 1e-4, k_max: float = 16.0, centers=SMEAR_CENTERS,
                       width: float = SMEAR_WIDTH, n_angle: int = 48, order: int = 48) -> CompletenessReport:
    """Report on the symbol-level completeness condition.

    Two checks run on the symbols alone:

    * the weaker scalar constraint sum_a w_a (f_a, f_a) against its value for
      the truncated identity, Tr 1 = dim;
    * the full condition, whose left side L(mub, nub) must equal the image of
      the identity, (1/2pi) Tr(1_N exp(-i mub q - i nub p)), which becomes
      delta(mub) delta(nub) without truncation. Both sides are smeared with
      unit-mass Gaussian test functions of the given width.

    The smeared residual is the worst deviation over the test functions,
    scaled so that one basis level's worth of identity counts as 1.
    """
    symbols = list(symbols)
    w = np.ones(len(symbols)) if weights is None else np.asarray(weights, dtype=float)
    for s in symbols:
        if s.generalized:
            raise GeneralizedObjectError(f"completeness needs regular symbols, got {s.tag!r}")
    symbols, w = _compress(symbols, w)
    weak = float(sum(wa * scalar_product(s, s, k_max).real for wa, s in zip(w, symbols)))
    weak_res = abs(weak - dim)

    mu, nu, wxi = _polar_nodes(k_max, n_angle, order)
    chis = [_ChiInterpolator(s, k_max + 2.0) for s in symbols]
    chi0 = np.stack([c(mu, nu) for c in chis])  # (a, xi)
    vals, targets = [], []
    for center in centers:
        mb, nb, wb = _smearing_nodes(center, width)
        total = 0.0 + 0.0j
        for a, c in enumerate(chis):
            shifted = c(mu[None, :] + mb[:, None], nu[None, :] + nb[:, None])  # (xb, xi)
            phase = np.exp(0.5j * (mb[:, None] * nu[None, :] - mu[None, :] * nb[:, None]))
            lhs = (shifted.conj() * phase) @ (chi0[a] * wxi)
            total += w[a] * np.dot(wb, lhs)
        vals.append(total / (4 * np.pi ** 2))
        targets.append(complex(np.dot(wb, _identity_lhs(dim, mb, nb))))
    vals, targets = np.array(vals), np.array(targets)
    scale = np.max(np.abs(targets)) / dim
    smeared_res = float(np.max(np.abs(vals - targets)) / scale)
    return CompletenessReport(weak, float(dim), weak_res, tuple(vals), tuple(targets), smeared_res, tol)


# ---------------------------------------------------------------------------
# structural objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TripleTraceValue:
    """Tr{D(x1) D(xb) D(x2) U(x)} = prefactor * delta(constraint).

    ``constraint`` holds the coefficients of the delta argument
    (mub + mu1 + mu2) nu - (nub + nu1 + nu2) mu: one coefficient for each of
    mub, nub, mu1, nu1, mu2, nu2 at fixed (mu, nu), then those of mu and nu
    at fixed other arguments.
    """

    prefactor: complex
    symplectic_phase: float
    constraint: tuple
    argument: float

    def on_surface(self, tol: float = 1e-12) -> bool:
        return abs(self.argument) <= tol

    def value(self, tol: float = 1e-12):
        """Structural zero off the constraint surface; on it the delta has no finite value."""
        if not self.on_surface(tol):
            return 0.0
        raise GeneralizedObjectError("triple trace on its constraint surface is a delta function")


def triple_trace(x1, xbar, x2, x) -> TripleTraceValue:
    X1, m1, n1 = map(float, x1)
    Xb, mb, nb = map(float, xbar)
    X2, m2, n2 = map(float, x2)
    X, m, n = map(float, x)
    smu, snu = mb + m1 + m2, nb + n1 + n2
    if X == 0.0:
        ratio_term = 0.0
    elif n != 0.0:
        ratio_term = X * snu / n
    elif m != 0.0:
        ratio_term = X * smu / m  # equal to X snu / nu on the constraint surface
    else:
        raise GeneralizedObjectError("U(x) with mu = nu = 0 is a delta function of X")
    sym = 0.5 * (mb * (n1 - n2) - (m1 - m2) * nb - m1 * n2 + m2 * n1)
    pref = np.exp(1j * (Xb + X1 + X2 - ratio_term)) * np.exp(1j * sym) / (2 * np.pi) ** 3
    coeffs = (n, -m, n, -m, n, -m, -snu, smu)
    return TripleTraceValue(complex(pref), sym, coeffs, smu * n - snu * m)


@dataclass(frozen=True)
class DeltaForm:
    """coefficient * delta(argument): a structural value."""

    argument: float
    phase: complex

    def on_constraint(self, tol: float = 1e-12) -> bool:
        return abs(self.argument) <= tol

    def value(self, tol: float = 1e-12):
        if not self.on_constraint(tol):
            return 0.0
        raise GeneralizedObjectError("delta form evaluated on its support; smear it instead")


class DequantizerSymbol:
    """Symbol of the dequantizer U(xb) as a function of x.

    Pointwise values do not exist. Inside scalar and star products the symbol
    only appears integrated against exp(-iX) over X, which gives
    delta(mub nu - mu nub) exp(-i Xb mu / mub).
    """

    def __init__(self, xbar):
        self.xbar = tuple(float(v) for v in xbar)
        if self.xbar[1] == 0.0 and self.xbar[2] == 0.0:
            raise GeneralizedObjectError("dequantizer at mub = nub = 0 is not supported")

    def __call__(self, *x):
        raise GeneralizedObjectError(
            "the dequantizer symbol is a generalized function; use regularized(mu, nu) "
            "(its X-integral against exp(-iX)) or smeared(test_function)")

    def regularized(self, mu: float, nu: float) -> DeltaForm:
        Xb, mb, nb = self.xbar
        arg = mb * nu - mu * nb
        if mb != 0.0:
            phase = np.exp(-1j * Xb * mu / mb)
        else:
            phase = np.exp(-1j * Xb * nu / nb)  # same value on the support
        return DeltaForm(arg, complex(phase))

    def smeared(self, test_function, t_max: float = 12.0, n: int = 4001) -> complex:
        """int dmu dnu g(mu, nu) delta(mub nu - mu nub) exp(-i Xb mu / mub).

        On the support (mu, nu) = t (mub, nub) / rb and the delta contributes
        1 / rb.
        """
        Xb, mb, nb = self.xbar
        rb = np.hypot(mb, nb)
        t = np.linspace(-t_max, t_max, n)
        vals = test_function(t * mb / rb, t * nb / rb) * np.exp(-1j * Xb * t / rb)
        return complex(np.trapezoid(vals, t) / rb)


def postprocess_dequantizer_symbol(xbar) -> DequantizerSymbol:
    return DequantizerSymbol(xbar)

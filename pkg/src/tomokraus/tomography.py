"""Symplectic tomograms and operator symbols on a ray grid.

A symbol f(X, mu, nu) is stored only on the unit circle mu = cos(theta),
nu = sin(theta), theta in [0, pi). Every other point follows from

    f(lam X, lam mu, lam nu) = f(X, mu, nu) / |lam|

which is exact for the dequantizer delta(X - mu q - nu p). The inverse map
(operator from symbol) is done in polar coordinates: the radial variable k
of (mu, nu) = k (cos theta, sin theta) is integrated over |k| <= k_max with
Gauss-Legendre panels and a cosine taper over the outer part of the range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .basis import DensityMatrix, HilbertSpec, displacement_element, displacement_matrix, hermite_functions
from .errors import ConvergenceError, GeneralizedObjectError, ValidationError

__all__ = [
    "RayGrid",
    "RadialRule",
    "TomogramGrid",
    "SymbolGrid",
    "QuantizerCache",
    "Reconstruction",
    "dequantizer_element",
    "quantizer_element",
    "symbol_values",
    "tomogram_from_density",
    "symbol_from_operator",
    "reconstruction_moments",
    "reconstruct",
    "density_from_tomogram",
    "operator_from_symbol",
    "star_product",
    "characteristic_rays",
    "scalar_product",
    "decomposition_coefficients",
    "DEFAULT_GRID",
    "DEFAULT_KMAX",
]

DEFAULT_KMAX = 12.0
DEFAULT_TAPER = 0.15
REALITY_TOL = 1e-10
NORMALIZATION_ERROR = 1e-4
ASYMMETRY_ERROR = 1e-3


@dataclass(frozen=True)
class RayGrid:
    """Uniform X nodes on [-x_max, x_max] and theta nodes on [0, pi)."""

    x_max: float = 8.0
    n_x: int = 257
    n_theta: int = 64

    def __post_init__(self):
        if self.x_max <= 0:
            raise ValidationError("x_max must be positive")
        if self.n_x < 3 or self.n_x % 2 == 0:
            raise ValidationError("n_x must be odd and >= 3 so that X = 0 is a node")
        if self.n_theta < 1:
            raise ValidationError("n_theta must be >= 1")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(-self.x_max, self.x_max, self.n_x)

    @property
    def dx(self) -> float:
        return 2.0 * self.x_max / (self.n_x - 1)

    @property
    def wx(self) -> np.ndarray:
        w = np.full(self.n_x, self.dx)
        w[0] = w[-1] = 0.5 * self.dx
        return w

    @property
    def theta(self) -> np.ndarray:
        return np.pi * np.arange(self.n_theta) / self.n_theta

    @property
    def wtheta(self) -> np.ndarray:
        # periodic trapezoid: the integrand over theta in [0, pi) with k over
        # the whole real line covers the full plane once
        return np.full(self.n_theta, np.pi / self.n_theta)

    def as_dict(self) -> dict:
        return {"x_max": float(self.x_max), "n_x": int(self.n_x), "n_theta": int(self.n_theta)}


DEFAULT_GRID = RayGrid()


@dataclass(frozen=True)
class RadialRule:
    """Quadrature for int dk |k| window(k) g(k) over -k_max..k_max.

    Panels are split at 0 and at the taper start so every panel integrand is
    smooth; each panel uses ``order`` Gauss-Legendre nodes.
    """

    k_max: float = DEFAULT_KMAX
    taper: float = DEFAULT_TAPER
    order: int = 48

    def __post_init__(self):
        if self.k_max <= 0:
            raise ValidationError("k_max must be positive")
        if not 0 <= self.taper < 1:
            raise ValidationError("taper fraction must lie in [0, 1)")

    @property
    def nodes_weights(self) -> tuple[np.ndarray, np.ndarray]:
        return _radial_nodes(self.k_max, self.taper, self.order)


@lru_cache(maxsize=32)
def _radial_nodes(k_max, taper, order):
    t, w = np.polynomial.legendre.leggauss(order)
    k0 = k_max * (1.0 - taper)
    edges = [0.0, k0, k_max] if taper > 0 else [0.0, k_max]
    ks, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        ks.append(0.5 * (b - a) * t + 0.5 * (b + a))
        ws.append(0.5 * (b - a) * w)
    k = np.concatenate(ks)
    wk = np.concatenate(ws) * k
    if taper > 0:
        outer = k > k0
        wk[outer] *= 0.5 * (1.0 + np.cos(np.pi * (k[outer] - k0) / (k_max - k0)))
    k = np.concatenate([-k[::-1], k])
    wk = np.concatenate([wk[::-1], wk])
    k.setflags(write=False)
    wk.setflags(write=False)
    return k, wk


# ---------------------------------------------------------------------------
# grids of values
# ---------------------------------------------------------------------------


def _theta_lookup(grid: RayGrid, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Indices, parities and weights for linear theta interpolation."""
    step = np.pi / grid.n_theta
    pos = theta / step
    i0 = int(np.floor(pos + 1e-12))
    frac = pos - i0
    if abs(frac) < 1e-9:
        return [(i0 % grid.n_theta, 1 if (i0 // grid.n_theta) % 2 == 0 else -1, 1.0)]
    out = []
    for i, wt in ((i0, 1.0 - frac), (i0 + 1, frac)):
        sign = 1 if (i // grid.n_theta) % 2 == 0 else -1
        out.append((i % grid.n_theta, sign, wt))
    return out


@dataclass(frozen=True, eq=False)
class _RayValues:
    grid: RayGrid
    values: np.ndarray

    def _spline(self, row: int):
        cache = self.__dict__.setdefault("_splines", {})
        if row not in cache:
            v = self.values[row]
            if np.iscomplexobj(v):
                re, im = CubicSpline(self.grid.x, v.real), CubicSpline(self.grid.x, v.imag)
                cache[row] = lambda x: re(x) + 1j * im(x)
            else:
                cache[row] = CubicSpline(self.grid.x, v)
        return cache[row]

    def evaluate(self, X, mu, nu):
        """Value at an arbitrary (X, mu, nu) through homogeneity and interpolation.

        mu = nu = 0 is a generalized point (delta in X) and is refused.
        """
        r = float(np.hypot(mu, nu))
        if r == 0.0:
            raise GeneralizedObjectError("symbol at mu = nu = 0 is a delta function of X")
        theta = float(np.arctan2(nu, mu))
        sign = 1.0
        if theta < 0:
            theta += np.pi
            sign = -1.0
        if theta >= np.pi:
            theta -= np.pi
            sign = -sign
        xs = sign * np.asarray(X, dtype=float) / r
        total = 0.0
        for row, parity, wt in _theta_lookup(self.grid, theta):
            xr = parity * xs
            inside = np.abs(xr) <= self.grid.x_max
            vals = np.where(inside, self._spline(row)(np.clip(xr, -self.grid.x_max, self.grid.x_max)), 0.0)
            total = total + wt * vals
        return total / r


@dataclass(frozen=True, eq=False)
class TomogramGrid(_RayValues):
    """Tomogram samples T(X, cos theta, sin theta) on a :class:`RayGrid`."""

    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.grid.n_theta, self.grid.n_x):
            raise ValidationError(f"tomogram values have shape {vals.shape}, grid needs "
                                  f"{(self.grid.n_theta, self.grid.n_x)}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def normalization(self) -> np.ndarray:
        """Per-theta integral over X."""
        return self.values @ self.grid.wx

    def check(self, tol_norm: float = 1e-6, tol_neg: float = 1e-8) -> None:
        if self.values.min() < -tol_neg:
            raise ValidationError(f"tomogram has negative values down to {self.values.min():.3e}")
        drift = np.max(np.abs(self.normalization() - 1.0))
        if drift > tol_norm:
            raise ValidationError(f"tomogram normalization drift {drift:.3e}")

    def as_symbol(self) -> "SymbolGrid":
        return SymbolGrid(self.grid, self.values.astype(complex), tag=self.provenance.get("source", "state"))


@dataclass(frozen=True, eq=False)
class SymbolGrid(_RayValues):
    """Complex operator-symbol samples on a :class:`RayGrid`.

    ``generalized`` marks distribution-valued symbols that may only be used
    through a regularized (X-integrated) form.
    """

    tag: str = ""
    generalized: bool = False

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (self.grid.n_theta, self.grid.n_x):
            raise ValidationError("symbol values do not match the grid")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def conj(self) -> "SymbolGrid":
        return SymbolGrid(self.grid, self.values.conj(), tag=f"({self.tag})^dagger",
                          generalized=self.generalized)

    def __add__(self, other):
        _same_grid(self, other)
        return SymbolGrid(self.grid, self.values + other.values, tag=f"{self.tag}+{other.tag}")

    def __sub__(self, other):
        _same_grid(self, other)
        return SymbolGrid(self.grid, self.values - other.values, tag=f"{self.tag}-{other.tag}")

    def __mul__(self, c):
        return SymbolGrid(self.grid, c * self.values, tag=f"{c}*{self.tag}")

    __rmul__ = __mul__

    def evaluate(self, X, mu, nu):
        if self.generalized:
            raise GeneralizedObjectError(f"symbol {self.tag!r} is generalized; use its regularized form")
        return super().evaluate(X, mu, nu)


def _same_grid(a, b):
    if a.grid != b.grid:
        raise ValidationError("symbols live on different grids")


# ---------------------------------------------------------------------------
# matrix elements
# ---------------------------------------------------------------------------


def dequantizer_element(n: int, m: int, X, theta):
    """Tr(|n><m| U(X, cos theta, sin theta)) = psi_n(X) psi_m(X) exp(i (m - n) theta)."""
    if n < 0 or m < 0:
        raise ValueError("basis indices must be nonnegative")
    psi = hermite_functions(max(n, m) + 1, X)
    return psi[n] * psi[m] * np.exp(1j * (m - n) * np.asarray(theta, dtype=float))


def quantizer_element(n: int, m: int, X, mu, nu):
    """<n| D(X, mu, nu) |m> = exp(iX) <n| exp(-i mu q - i nu p) |m> / 2 pi."""
    return np.exp(1j * np.asarray(X, dtype=float)) * displacement_element(n, m, mu, nu) / (2 * np.pi)


def symbol_values(matrix: np.ndarray, grid: RayGrid) -> np.ndarray:
    """f_A(X, theta) = sum_nm A_nm psi_n(X) psi_m(X) exp(i (m - n) theta)."""
    a = np.asarray(matrix, dtype=complex)
    dim = a.shape[0]
    psi = hermite_functions(dim, grid.x)  # (n, x)
    ph = np.exp(1j * np.outer(grid.theta, np.arange(dim)))  # (t, n)
    b = ph.conj()[:, :, None] * a[None] * ph[:, None, :]
    return np.einsum("nx,tnm,mx->tx", psi, b, psi, optimize=True)


def tomogram_from_density(rho: DensityMatrix, grid: RayGrid = DEFAULT_GRID,
                          provenance: dict | None = None) -> TomogramGrid:
    """T(X, theta) = Tr(rho U(X, cos theta, sin theta))."""
    vals = symbol_values(rho.matrix, grid)
    imag = np.max(np.abs(vals.imag))
    if imag > REALITY_TOL:
        raise ValidationError(f"tomogram imaginary residue {imag:.3e} exceeds {REALITY_TOL:.0e}")
    tomo = TomogramGrid(grid, vals.real, provenance=dict(provenance or {"source": rho.label or "state"}))
    drift = np.max(np.abs(tomo.normalization() - 1.0))
    if drift > NORMALIZATION_ERROR:
        raise ConvergenceError(f"tomogram normalization drift {drift:.3e}: the grid does not resolve "
                               f"the state (increase x_max or n_x)")
    return tomo


def symbol_from_operator(operator, grid: RayGrid = DEFAULT_GRID, tag: str = "") -> SymbolGrid:
    a = np.asarray(operator, dtype=complex)
    return SymbolGrid(grid, symbol_values(a, grid), tag=tag or f"op{a.shape[0]}")


# ---------------------------------------------------------------------------
# inverse map
# ---------------------------------------------------------------------------


class QuantizerCache:
    """Radial filters h_jl(X) = int dk |k| w(k) exp(ikX) <j|exp(-ikq)|l> on the X nodes.

    Write-once: built in the constructor, read-only afterwards.
    """

    def __init__(self, dim: int, grid: RayGrid, rule: RadialRule):
        self.dim, self.grid, self.rule = dim, grid, rule
        k, wk = rule.nodes_weights
        e = displacement_matrix(dim, k, np.zeros_like(k))  # (k, j, l)
        phase = np.exp(1j * np.outer(k, grid.x))  # (k, x)
        h = np.einsum("k,kx,kjl->xjl", wk, phase, e, optimize=True)
        h = h * grid.wx[:, None, None]
        self.filters = h.reshape(grid.n_x, dim * dim)
        self.filters.setflags(write=False)
        j = np.arange(dim)
        self.angular = np.exp(1j * grid.theta[:, None, None] * (j[:, None] - j[None, :])[None]) \
            * grid.wtheta[:, None, None] / (2 * np.pi)
        self.angular = self.angular.reshape(grid.n_theta, dim * dim)
        self.angular.setflags(write=False)

    def moments(self, values: np.ndarray) -> np.ndarray:
        """Matrix int f(x) D_jl(x) dx for symbol samples ``values`` (n_theta, n_x)."""
        per_theta = np.asarray(values) @ self.filters  # (t, jl)
        return np.sum(per_theta * self.angular, axis=0).reshape(self.dim, self.dim)


_CACHES: dict = {}


def _cache(dim: int, grid: RayGrid, rule: RadialRule) -> QuantizerCache:
    key = (dim, grid, rule)
    if key not in _CACHES:
        if len(_CACHES) > 16:
            _CACHES.clear()
        _CACHES[key] = QuantizerCache(dim, grid, rule)
    return _CACHES[key]


def _rule(k_max, taper) -> RadialRule:
    return RadialRule(DEFAULT_KMAX if k_max is None else float(k_max),
                      DEFAULT_TAPER if taper is None else float(taper))


def reconstruction_moments(values, grid: RayGrid, dim: int, k_max: float | None = None,
                           taper: float | None = None) -> np.ndarray:
    """Raw matrix A_jl = int f(x) D_jl(x) dx; linear in the samples."""
    return _cache(dim, grid, _rule(k_max, taper)).moments(values)


@dataclass(frozen=True, eq=False)
class Reconstruction:
    state: DensityMatrix
    raw: np.ndarray
    asymmetry: float
    trace_correction: float
    clipped: float = 0.0


def reconstruct(tomogram: TomogramGrid, spec: HilbertSpec | int, k_max: float | None = None,
                taper: float | None = None) -> Reconstruction:
    """Density matrix from a tomogram with Hermitization and trace reports."""
    dim = spec.dim if isinstance(spec, HilbertSpec) else HilbertSpec(int(spec)).dim
    raw = reconstruction_moments(tomogram.values, tomogram.grid, dim, k_max, taper)
    asym = float(np.max(np.abs(raw - raw.conj().T)))
    if asym > ASYMMETRY_ERROR:
        raise ConvergenceError(f"reconstruction asymmetry {asym:.3e}: increase k_max or n_x")
    herm = 0.5 * (raw + raw.conj().T)
    tr = float(np.trace(herm).real)
    w, v = np.linalg.eigh(herm / tr)
    clipped = float(-w[w < 0].sum())
    if clipped > 0:
        # quadrature round-off only; the clipped weight is reported
        w = np.clip(w, 0, None)
        herm = (v * w) @ v.conj().T
        herm = 0.5 * (herm + herm.conj().T) / w.sum()
    else:
        herm = herm / tr
    state = DensityMatrix(herm, label="reconstructed")
    return Reconstruction(state, raw, asym, tr - 1.0, clipped)


def density_from_tomogram(tomogram: TomogramGrid, spec: HilbertSpec | int, k_max: float | None = None,
                          taper: float | None = None) -> DensityMatrix:
    return reconstruct(tomogram, spec, k_max, taper).state


def operator_from_symbol(symbol: SymbolGrid, spec: HilbertSpec | int, k_max: float | None = None,
                         taper: float | None = None) -> np.ndarray:
    if symbol.generalized:
        raise GeneralizedObjectError(f"symbol {symbol.tag!r} is generalized")
    dim = spec.dim if isinstance(spec, HilbertSpec) else int(spec)
    return reconstruction_moments(symbol.values, symbol.grid, dim, k_max, taper)


def star_product(f: SymbolGrid, g: SymbolGrid, spec: HilbertSpec | int, k_max: float | None = None,
                 taper: float | None = None) -> SymbolGrid:
    """Symbol of A B from the symbols of A and B, through the truncated operator algebra."""
    _same_grid(f, g)
    a = operator_from_symbol(f, spec, k_max, taper)
    b = operator_from_symbol(g, spec, k_max, taper)
    return SymbolGrid(f.grid, symbol_values(a @ b, f.grid), tag=f"{f.tag}*{g.tag}")


# ---------------------------------------------------------------------------
# scalar product
# ---------------------------------------------------------------------------


def characteristic_rays(values, grid: RayGrid, k: np.ndarray) -> np.ndarray:
    """G(theta, k) = int f(X, theta) exp(ikX) dX by trapezoid on the stored nodes."""
    phase = np.exp(1j * np.outer(grid.x, k)) * grid.wx[:, None]
    return np.asarray(values) @ phase


def scalar_product(f: SymbolGrid | TomogramGrid, g: SymbolGrid | TomogramGrid, k_max: float | None = None,
                   taper: float = 0.0) -> complex:
    """(f, g) = (1/2pi) int f*(X) g(Xb) exp(i(X - Xb)) dXb dX dmu dnu = Tr(A^dagger B).

    Evaluated in polar form, (1/2pi) int dtheta int dk |k| conj(G_f) G_g.
    """
    for s in (f, g):
        if getattr(s, "generalized", False):
            raise GeneralizedObjectError(
                f"scalar product with generalized symbol {getattr(s, 'tag', '')!r} diverges; "
                "use the regularized dequantizer form")
    _same_grid(f, g)
    k, wk = _rule(k_max, taper).nodes_weights
    gf = characteristic_rays(f.values, f.grid, k)
    gg = gf if g is f else characteristic_rays(g.values, g.grid, k)
    return complex(np.einsum("t,k,tk,tk->", f.grid.wtheta, wk, gf.conj(), gg) / (2 * np.pi))


def decomposition_coefficients(tomogram: TomogramGrid, basis, k_max: float | None = None) -> np.ndarray:
    """alpha_k = (T, T_k) for each basis tomogram."""
    return np.array([scalar_product(tomogram, b, k_max).real for b in basis])

"""Truncated harmonic-oscillator basis: wavefunctions, operators, states and Kraus sets.

Units are fixed to hbar = 1 with unit oscillator mass and frequency, so the
quadratures q and p are dimensionless. Everything that touches the tomographic
layer is checked against :func:`apply_channel_oracle`, the plain
``sum_a w_a A_a rho A_a^dagger`` evaluation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import ValidationError

__all__ = [
    "HilbertSpec",
    "DensityMatrix",
    "KrausSet",
    "hermite_function",
    "hermite_functions",
    "displacement_element",
    "displacement_matrix",
    "position_operator",
    "momentum_operator",
    "number_operator",
    "make_state",
    "fock_state",
    "coherent_state",
    "thermal_state",
    "mixture",
    "random_density_matrix",
    "random_kraus_set",
    "apply_channel_oracle",
    "ChannelResult",
    "joint_unitary_kraus",
    "fidelity",
    "purity",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
LEAKAGE_WARN = 1e-6


@dataclass(frozen=True)
class HilbertSpec:
    """Oscillator basis |0>, ..., |dim-1>."""

    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValidationError(f"basis dimension must be an integer >= 2, got {self.dim}")


def _as_matrix(data, dim=None) -> np.ndarray:
    mat = np.array(data, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {mat.shape}")
    if dim is not None and mat.shape[0] != dim:
        raise ValidationError(f"matrix dimension {mat.shape[0]} does not match basis dimension {dim}")
    if not np.all(np.isfinite(mat)):
        raise ValidationError("matrix has non-finite entries")
    mat.setflags(write=False)
    return mat


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state. ``leakage`` is the weight discarded by basis truncation."""

    matrix: np.ndarray
    leakage: float = 0.0
    label: str = ""

    def __post_init__(self):
        mat = _as_matrix(self.matrix)
        object.__setattr__(self, "matrix", mat)
        if mat.shape[0] < 2:
            raise ValidationError("density matrix must have dimension >= 2")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("density matrix is not Hermitian")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(mat).min() < -PSD_TOL:
            raise ValidationError("density matrix has negative eigenvalues")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spec(self) -> HilbertSpec:
        return HilbertSpec(self.dim)

    def embed(self, dim: int) -> "DensityMatrix":
        """Zero-pad into a larger basis."""
        if dim < self.dim:
            raise ValidationError("cannot embed into a smaller basis")
        out = np.zeros((dim, dim), dtype=complex)
        out[: self.dim, : self.dim] = self.matrix
        return DensityMatrix(out, self.leakage, self.label)


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Kraus operators with outcome labels and quadrature weights.

    The channel is ``rho -> sum_a weights[a] * A_a rho A_a^dagger``. Discrete
    families carry unit weights; continuous outcome families carry trapezoid
    weights on their outcome grid.
    """

    operators: tuple
    labels: tuple = ()
    weights: np.ndarray | None = None
    tol_complete: float = 1e-8
    name: str = ""
    check: bool = True

    def __post_init__(self):
        ops = tuple(_as_matrix(a) for a in self.operators)
        if not ops:
            raise ValidationError("a Kraus set needs at least one operator")
        dim = ops[0].shape[0]
        if any(a.shape[0] != dim for a in ops):
            raise ValidationError("Kraus operators have mismatched dimensions")
        object.__setattr__(self, "operators", ops)
        labels = tuple(self.labels) if self.labels else tuple(range(len(ops)))
        if len(labels) != len(ops):
            raise ValidationError("one label per Kraus operator is required")
        object.__setattr__(self, "labels", labels)
        w = np.ones(len(ops)) if self.weights is None else np.asarray(self.weights, dtype=float)
        if w.shape != (len(ops),) or np.any(w < 0):
            raise ValidationError("weights must be nonnegative, one per operator")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.check and self.completeness_residual() > self.tol_complete:
            raise ValidationError(
                f"Kraus set {self.name!r} is incomplete: residual "
                f"{self.completeness_residual():.3e} > {self.tol_complete:.1e}"
            )

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    @property
    def stack(self) -> np.ndarray:
        return np.stack(self.operators)

    def effect(self) -> np.ndarray:
        """sum_a w_a A_a^dagger A_a."""
        ops = self.stack
        return np.einsum("a,aki,akj->ij", self.weights, ops.conj(), ops)

    def completeness_residual(self) -> float:
        return float(np.max(np.abs(self.effect() - np.eye(self.dim))))

    def without(self, index: int) -> "KrausSet":
        keep = [i for i in range(len(self.operators)) if i != index]
        return KrausSet(
            [self.operators[i] for i in keep],
            [self.labels[i] for i in keep],
            self.weights[keep],
            self.tol_complete,
            self.name + f"-drop{index}",
            check=False,
        )

    def scaled(self, index: int, factor: float) -> "KrausSet":
        ops = list(self.operators)
        ops[index] = ops[index] * factor
        return KrausSet(ops, self.labels, self.weights, self.tol_complete,
                        self.name + f"-scale{index}", check=False)


# ---------------------------------------------------------------------------
# wavefunctions and displacement elements
# ---------------------------------------------------------------------------


def hermite_functions(nmax: int, q) -> np.ndarray:
    """Oscillator eigenfunctions psi_0 .. psi_{nmax-1} at ``q``.

    Returns an array of shape ``(nmax,) + np.shape(q)``. Uses the upward
    recurrence on the normalized functions, so no factorials appear.
    """
    if nmax < 1:
        raise ValueError("nmax must be positive")
    q = np.asarray(q, dtype=float)
    out = np.empty((nmax,) + q.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * q * q)
    if nmax > 1:
        out[1] = np.sqrt(2.0) * q * out[0]
    for n in range(1, nmax - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * q * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_function(n: int, q):
    if n < 0:
        raise ValueError(f"basis index must be nonnegative, got {n}")
    return hermite_functions(n + 1, q)[n]


def _displacement_pair(n: int, m: int, alpha, x):
    # <n| exp(alpha a^dag - alpha^* a) |m>
    e = np.exp(-0.5 * x)
    if n >= m:
        pref = np.exp(0.5 * (gammaln(m + 1) - gammaln(n + 1)))
        return pref * alpha ** (n - m) * e * eval_genlaguerre(m, n - m, x)
    pref = np.exp(0.5 * (gammaln(n + 1) - gammaln(m + 1)))
    return pref * (-np.conj(alpha)) ** (m - n) * e * eval_genlaguerre(n, m - n, x)


def displacement_element(n: int, m: int, mu, nu):
    """<n| exp(-i mu q - i nu p) |m> in closed (Laguerre) form."""
    if n < 0 or m < 0:
        raise ValueError("basis indices must be nonnegative")
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    alpha = (nu - 1j * mu) / np.sqrt(2.0)
    x = 0.5 * (mu * mu + nu * nu)
    return _displacement_pair(n, m, alpha, x)


def displacement_matrix(dim: int, mu, nu, cols: int | None = None) -> np.ndarray:
    """Matrix of :func:`displacement_element` over rows < dim, cols < ``cols``.

    ``mu`` and ``nu`` may be arrays; the result has shape ``shape + (dim, cols)``.
    """
    cols = dim if cols is None else cols
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    mu, nu = np.broadcast_arrays(mu, nu)
    alpha = (nu - 1j * mu) / np.sqrt(2.0)
    x = 0.5 * (mu * mu + nu * nu)
    out = np.empty(mu.shape + (dim, cols), dtype=complex)
    for n in range(dim):
        for m in range(cols):
            out[..., n, m] = _displacement_pair(n, m, alpha, x)
    return out


def annihilation_operator(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def position_operator(dim: int) -> np.ndarray:
    a = annihilation_operator(dim)
    return (a + a.conj().T) / np.sqrt(2.0)


def momentum_operator(dim: int) -> np.ndarray:
    a = annihilation_operator(dim)
    return (a - a.conj().T) / (1j * np.sqrt(2.0))


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim)).astype(complex)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


def fock_state(n: int, dim: int) -> DensityMatrix:
    HilbertSpec(dim)
    if not 0 <= n < dim:
        raise ValidationError(f"Fock index {n} outside basis of dimension {dim}")
    mat = np.zeros((dim, dim), dtype=complex)
    mat[n, n] = 1.0
    return DensityMatrix(mat, label=f"fock{n}")


def _renormalized(weights_or_vec, dim, label, pure):
    if pure:
        vec = weights_or_vec
        kept = float(np.vdot(vec[:dim], vec[:dim]).real)
        vec = vec[:dim] / np.sqrt(kept)
        mat = np.outer(vec, vec.conj())
    else:
        w = weights_or_vec
        kept = float(np.sum(w[:dim]))
        mat = np.diag(w[:dim] / kept).astype(complex)
    leakage = max(0.0, 1.0 - kept)
    if leakage > LEAKAGE_WARN:
        warnings.warn(f"{label}: truncation to dim={dim} discards weight {leakage:.3e}", stacklevel=3)
    mat = 0.5 * (mat + mat.conj().T)
    return DensityMatrix(mat, leakage=leakage, label=label)


def coherent_state(alpha: complex, dim: int) -> DensityMatrix:
    """Truncated coherent state |alpha>, renormalized; leakage recorded."""
    HilbertSpec(dim)
    n = np.arange(dim)
    amp = np.exp(-0.5 * abs(alpha) ** 2 + n * np.log(alpha + 0j) - 0.5 * gammaln(n + 1)) if alpha != 0 else (n == 0).astype(complex)
    return _renormalized(amp, dim, f"coherent({alpha})", pure=True)


def thermal_state(nbar: float, dim: int) -> DensityMatrix:
    HilbertSpec(dim)
    if nbar < 0:
        raise ValidationError("mean occupation must be nonnegative")
    if nbar == 0:
        return fock_state(0, dim)
    r = nbar / (1.0 + nbar)
    w = (1.0 - r) * r ** np.arange(dim)
    return _renormalized(w, dim, f"thermal({nbar})", pure=False)


def mixture(weights: Sequence[float], states: Sequence[DensityMatrix]) -> DensityMatrix:
    w = np.asarray(weights, dtype=float)
    if len(w) != len(states) or not len(w):
        raise ValidationError("need one weight per state")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-10:
        raise ValidationError(f"mixture weights must be nonnegative and sum to 1 (sum={w.sum()!r})")
    dim = states[0].dim
    if any(s.dim != dim for s in states):
        raise ValidationError("mixture components have different dimensions")
    mat = sum(wi * s.matrix for wi, s in zip(w, states))
    mat = mat / np.trace(mat).real
    return DensityMatrix(0.5 * (mat + mat.conj().T), label="mixture")


def make_state(kind: str, dim: int, *args, **kwargs) -> DensityMatrix:
    """Build a state from a descriptor: fock, coherent, thermal or mixture."""
    kind = kind.lower()
    if kind == "fock":
        return fock_state(int(args[0]), dim)
    if kind == "coherent":
        return coherent_state(complex(args[0]), dim)
    if kind == "thermal":
        return thermal_state(float(args[0]), dim)
    if kind == "mixture":
        weights, states = args
        return mixture(weights, states)
    raise ValidationError(f"unknown state kind {kind!r}")


def random_density_matrix(dim: int, rank: int | None = None, support: int | None = None,
                          rng=None) -> DensityMatrix:
    """Random state of given rank, optionally supported on the lowest ``support`` levels."""
    rng = np.random.default_rng(rng)
    rank = dim if rank is None else rank
    support = dim if support is None else support
    g = np.zeros((dim, rank), dtype=complex)
    g[:support] = rng.normal(size=(support, rank)) + 1j * rng.normal(size=(support, rank))
    mat = g @ g.conj().T
    mat /= np.trace(mat).real
    return DensityMatrix(0.5 * (mat + mat.conj().T), label=f"random-rank{rank}")


def random_kraus_set(dim: int, n_ops: int, rng=None) -> KrausSet:
    """Kraus operators cut from a random isometry (dim -> n_ops*dim)."""
    rng = np.random.default_rng(rng)
    z = rng.normal(size=(n_ops * dim, dim)) + 1j * rng.normal(size=(n_ops * dim, dim))
    v, _ = np.linalg.qr(z)
    ops = v.reshape(n_ops, dim, dim)
    return KrausSet(list(ops), name=f"random-{n_ops}", tol_complete=1e-10)


def fidelity(rho: DensityMatrix | np.ndarray, sigma: DensityMatrix | np.ndarray) -> float:
    """Uhlmann fidelity (squared form), (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    w, v = np.linalg.eigh(a)
    sa = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    ev = np.linalg.eigvalsh(sa @ b @ sa)
    return float(np.sum(np.sqrt(np.clip(ev, 0, None))) ** 2)


def purity(rho: DensityMatrix | np.ndarray) -> float:
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return float(np.real(np.trace(a @ a)))


# ---------------------------------------------------------------------------
# channel oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChannelResult:
    """Output of the matrix-route channel.

    ``state`` is None when the raw output is not a valid state (an incomplete
    Kraus set); the raw matrix is always kept and never renormalized.
    """

    matrix: np.ndarray
    trace_drift: float
    flags: tuple = field(default_factory=tuple)

    @property
    def state(self) -> DensityMatrix | None:
        try:
            return DensityMatrix(0.5 * (self.matrix + self.matrix.conj().T))
        except ValidationError:
            return None


def apply_channel_oracle(rho: DensityMatrix | np.ndarray, kraus: KrausSet) -> ChannelResult:
    """rho' = sum_a w_a A_a rho A_a^dagger."""
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if mat.shape[0] != kraus.dim:
        raise ValidationError(f"state dimension {mat.shape[0]} != Kraus dimension {kraus.dim}")
    ops = kraus.stack
    out = np.einsum("a,aij,jk,alk->il", kraus.weights, ops, mat, ops.conj())
    drift = abs(np.trace(out).real - np.trace(mat).real)
    flags = ("trace-drift",) if drift > 10 * kraus.tol_complete else ()
    return ChannelResult(out, drift, flags)


def joint_unitary_kraus(unitary, env_probs: Sequence[float], env_dim: int,
                        tol_complete: float = 1e-10) -> KrausSet:
    """Kraus set A_{mn} = sqrt(p_n) <m|U|n> for an environment diagonal in its basis.

    ``unitary`` acts on system (x) environment with the environment as the
    fast (second) tensor index.
    """
    u = np.asarray(unitary, dtype=complex)
    total = u.shape[0]
    if u.shape != (total, total) or total % env_dim:
        raise ValidationError("unitary shape incompatible with environment dimension")
    if np.max(np.abs(u.conj().T @ u - np.eye(total))) > 1e-10:
        raise ValidationError("joint evolution operator is not unitary")
    p = np.asarray(env_probs, dtype=float)
    if len(p) > env_dim or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
        raise ValidationError("environment probabilities must be nonnegative and sum to 1")
    sys_dim = total // env_dim
    u4 = u.reshape(sys_dim, env_dim, sys_dim, env_dim)
    ops, labels = [], []
    for n, pn in enumerate(p):
        if pn == 0:
            continue
        for m in range(env_dim):
            ops.append(np.sqrt(pn) * u4[:, m, :, n])
            labels.append((m, n))
    return KrausSet(ops, labels, tol_complete=tol_complete, name="joint-unitary")

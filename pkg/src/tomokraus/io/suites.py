"""Verification suites: each compares a tomographic route with an independent one.

A suite takes a :class:`RunConfig` and returns a :class:`ComparisonReport`.
Reports hold only deterministic quantities; wall-clock times go to the
report's ``timing`` field, which is never serialized with the report.
"""

from __future__ import annotations

import time
import warnings

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from ..basis import (
    DensityMatrix,
    KrausSet,
    fidelity,
    fock_state,
    momentum_operator,
    number_operator,
    position_operator,
    random_density_matrix,
)
from ..channels import (
    VonNeumannModel,
    basis_projector_channel,
    build_channel,
    decoherence_factor,
    gaussian_basis_projector_channel,
    gaussian_position_channel,
    qubit_channel,
    trapezoid_weights,
    von_neumann_channel,
)
from ..errors import UsageError
from ..kernels import apply_kernel, apply_kernel_quadrature, completeness_check, kraus_symbols, total_kernel
from ..tomography import (
    RayGrid,
    operator_from_symbol,
    reconstruct,
    scalar_product,
    star_product,
    symbol_from_operator,
    symbol_values,
    tomogram_from_density,
)
from .config import ComparisonReport, RunConfig

COARSE_GRID = RayGrid(8.0, 65, 16)


def plus_state(dim: int) -> DensityMatrix:
    v = np.zeros(dim, dtype=complex)
    v[:2] = 1 / np.sqrt(2)
    return DensityMatrix(np.outer(v, v.conj()), label="plus")


def low_energy_states(dim: int, count: int, rng, support: int = 6, max_mean_n: float = 3.0) -> list:
    """Random rank-2 states on the lowest levels with <n> capped."""
    out = []
    n_op = np.diag(number_operator(dim)).real
    while len(out) < count:
        rho = random_density_matrix(dim, rank=2, support=min(support, dim), rng=rng)
        if float(np.real(np.diag(rho.matrix)) @ n_op) <= max_mean_n:
            out.append(rho)
    return out


# ---------------------------------------------------------------------------


def suite_round_trip(config: RunConfig) -> ComparisonReport:
    rep = ComparisonReport("round-trip", config)
    rng = np.random.default_rng(config.seed)
    grid, dim = config.grid, config.dim
    states = [fock_state(n, dim) for n in range(4)] + low_energy_states(dim, 20, rng)
    t0 = time.perf_counter()
    infid = []
    for rho in states:
        rec = reconstruct(tomogram_from_density(rho, grid), dim, config.k_max)
        infid.append(1.0 - fidelity(rho, rec.state))
    rep.timing["seconds"] = time.perf_counter() - t0
    rep.tables["infidelity"] = {f"{i:02d}:{s.label}": v for i, (s, v) in enumerate(zip(states, infid))}
    rep.add("max_infidelity", max(infid), config.tol["round_trip_infidelity"])
    return rep


def _oracle_cases(dim: int):
    cases = []
    for p in (0.0, 0.3, 0.5, 1.0):
        cases.append((f"phase-flip({p})", qubit_channel("phase_flip", p).channel(), "oracle_qubit"))
    for g in (0.0, 0.3, 1.0):
        cases.append((f"amp-damp({g})", qubit_channel("amplitude_damping", g).channel(), "oracle_qubit"))
    cases.append((f"basis-proj(N={dim})", basis_projector_channel(dim), "oracle"))
    for k in (0.5, 1.0, 10.0):
        cases.append((f"gauss-basis({k},N={dim})", gaussian_basis_projector_channel(k, dim), "oracle"))
    return cases


def suite_oracle_equivalence(config: RunConfig) -> ComparisonReport:
    rep = ComparisonReport("oracle-equivalence", config)
    rng = np.random.default_rng(config.seed)
    grid = config.grid
    qubit_states = [fock_state(0, 2), fock_state(1, 2), plus_state(2), random_density_matrix(2, rng=rng)]
    big_states = [plus_state(config.dim)] + low_energy_states(config.dim, 2, rng)
    for name, ch, tol_key in _oracle_cases(config.dim):
        states = qubit_states if ch.dim == 2 else big_states
        worst = 0.0
        for rho in states:
            t = tomogram_from_density(rho, grid)
            worst = max(worst, float(np.max(np.abs(ch.apply(t, config.k_max).values - ch.oracle(rho, grid).values))))
        rep.add(name, worst, config.tol[tol_key])
    return rep


SWEEP_KAPPA = (0.5, 1.0, 2.0, 4.0, 8.0)
SWEEP_G = (0.0, 0.25, 0.5, 1.0, 2.0)


def suite_von_neumann_sweep(config: RunConfig) -> ComparisonReport:
    rep = ComparisonReport("von-neumann-sweep", config)
    rng = np.random.default_rng(config.seed)
    rho = random_density_matrix(3, rng=rng)
    grid = config.grid
    t_in = tomogram_from_density(rho, grid)
    eig = (-1.0, 0.0, 1.0)
    table, worst_rel, worst_route = {}, 0.0, 0.0
    for kap in SWEEP_KAPPA:
        for g in SWEEP_G:
            ch = von_neumann_channel(VonNeumannModel(eig, g, kap))
            out = ch.oracle_matrix(rho)
            f = decoherence_factor(ch.extras["model"])
            measured = out / rho.matrix
            rel = float(np.max(np.abs(measured - f) / f))
            route = float(np.max(np.abs(ch.apply(t_in, config.k_max).values - ch.oracle(rho, grid).values)))
            table[f"kappa={kap:g},g={g:g}"] = {
                "factor_01": f[0, 1], "measured_01": measured[0, 1].real,
                "factor_02": f[0, 2], "measured_02": measured[0, 2].real,
                "rel_err": rel, "route_max_abs": route}
            worst_rel, worst_route = max(worst_rel, rel), max(worst_route, route)
    rep.tables["decoherence"] = table
    rep.add("decoherence_rel", worst_rel, config.tol["decoherence_rel"])
    rep.add("tomographic_route", worst_route, config.tol["von_neumann_route"])
    return rep


def _gauss(x, amp, mean, sig):
    return amp * np.exp(-0.5 * ((x - mean) / sig) ** 2)


def suite_gauss_position(config: RunConfig) -> ComparisonReport:
    rep = ComparisonReport("gauss-pos", config)
    grid = config.grid
    worst = 0.0
    sig_err = 0.0
    for kap in (0.5, 1.0, 2.0):
        ch = gaussian_position_channel(kap)
        for n in (0, 1, 2):
            rho = fock_state(n, config.dim)
            t = tomogram_from_density(rho, grid)
            out = ch.apply(t)
            worst = max(worst, float(np.max(np.abs(out.values - ch.oracle(rho, grid).values))))
            if n == 0:
                for i, th in enumerate(grid.theta):
                    expect = ch.blur_sigma(th)
                    if expect < 0.1:
                        continue
                    popt, _ = curve_fit(_gauss, grid.x, out.values[i], p0=(0.5, 0.0, 1.0))
                    fitted = np.sqrt(popt[2] ** 2 - 0.5)  # fock-0 rays have variance 1/2
                    sig_err = max(sig_err, abs(fitted - expect) / expect)
    rep.add("blur_vs_oracle", worst, config.tol["blur_oracle"])
    rep.add("blur_sigma_rel", sig_err, config.tol["blur_sigma_rel"])
    # outcome marginalization of the selective density
    ch = gaussian_position_channel(1.0)
    t = tomogram_from_density(fock_state(1, config.dim), grid)
    a = np.linspace(-10.0, 10.0, 201)
    dens = np.stack([o.tomogram.values for o in ch.selective(t, a)])
    marg = np.tensordot(trapezoid_weights(a), dens, 1)
    rep.add("selective_marginal", float(np.max(np.abs(marg - ch.apply(t).values))), config.tol["blur_oracle"])
    sel = ch.selective(t, [0.5])[0]
    ref = ch.oracle_selective(fock_state(1, config.dim), 0.5, grid)
    rep.add("selective_vs_oracle", float(np.max(np.abs(sel.tomogram.values - ref.tomogram.values))),
            config.tol["blur_oracle"])
    return rep


# ---------------------------------------------------------------------------
# completeness
# ---------------------------------------------------------------------------


def builtin_complete_sets() -> dict:
    """Name -> (KrausSet, detectable) for the completeness suite.

    ``detectable`` marks the discrete sets whose elements all carry weight
    comparable to the identity, so that removing or rescaling one of them
    changes the completeness sums by more than the violation threshold.
    """
    sets = {
        "identity(N=4)": (KrausSet([np.eye(4, dtype=complex)]), True),
        "phase-flip(0.3)": (qubit_channel("phase_flip", 0.3).kraus, True),
        "phase-flip(0.5)": (qubit_channel("phase_flip", 0.5).kraus, True),
        "amp-damp(0.3)": (qubit_channel("amplitude_damping", 0.3).kraus, True),
        "amp-damp(0.5)": (qubit_channel("amplitude_damping", 0.5).kraus, True),
        "basis-proj(N=4)": (basis_projector_channel(4).kraus, True),
        "gauss-basis(1,N=4)": (gaussian_basis_projector_channel(1.0, 4).kraus, False),
        "von-neumann(2,0.5)": (von_neumann_channel(VonNeumannModel((-1.0, 0.0, 1.0), 0.5, 2.0)).kraus, False),
    }
    return sets


def _completeness_residual(kraus: KrausSet, grid: RayGrid, tol: float):
    return completeness_check(kraus_symbols(kraus, grid), kraus.weights, kraus.dim, tol=tol)


def suite_completeness(config: RunConfig) -> ComparisonReport:
    """All built-in sets, or one registry channel when suite_args names it.

    suite_args: (channel, params..., optional "drop=i" / "scale=i").
    """
    rep = ComparisonReport("completeness", config)
    grid = config.grid
    tol = config.tol["completeness"]
    args = list(config.suite_args)
    if args:
        drop = [a for a in args if str(a).startswith(("drop=", "scale="))]
        rest = [a for a in args if a not in drop]
        name, params = rest[0], [float(v) for v in rest[1:]]
        ch = build_channel(name, params, config.dim)
        kraus = getattr(ch, "kraus", None)
        if kraus is None:
            raise UsageError(f"channel {name!r} has no finite Kraus set to check")
        label = f"{name}({','.join(f'{p:g}' for p in params)})"
        for d in drop:
            kind, idx = str(d).split("=")
            i = int(idx)
            if not 0 <= i < len(kraus.operators):
                raise UsageError(f"Kraus index {i} outside 0..{len(kraus.operators) - 1}")
            kraus = kraus.without(i) if kind == "drop" else kraus.scaled(i, 0.9)
            label += f"[{kind} {i}]"
        res = _completeness_residual(kraus, grid, tol)
        rep.tables["report"] = {label: res.as_dict()}
        rep.add(label, res.residual, tol)
        return rep
    table = {}
    for label, (kraus, detectable) in builtin_complete_sets().items():
        res = _completeness_residual(kraus, grid, tol)
        table[label] = {"weak": res.weak_residual, "smeared": res.smeared_residual}
        rep.add(label, res.residual, tol)
        if not detectable:
            continue
        for i in range(len(kraus.operators)):
            for kind, broken in (("drop", kraus.without(i) if len(kraus.operators) > 1 else None),
                                 ("scale", kraus.scaled(i, 0.9))):
                if broken is None:
                    continue
                r = _completeness_residual(broken, grid, tol)
                rep.add(f"{label}[{kind} {i}]", r.residual, config.tol["incompleteness_min"], ">")
    rep.tables["residuals"] = table
    return rep


# ---------------------------------------------------------------------------
# symbol calculus
# ---------------------------------------------------------------------------


def suite_star_product(config: RunConfig) -> ComparisonReport:
    rep = ComparisonReport("star-product", config)
    grid = config.grid
    rng = np.random.default_rng(config.seed)
    n = 8
    worst = 0.0
    for _ in range(50):
        a = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2 * n)
        b = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2 * n)
        st = star_product(symbol_from_operator(a, grid), symbol_from_operator(b, grid), n, config.k_max)
        worst = max(worst, float(np.max(np.abs(st.values - symbol_values(a @ b, grid)))))
    rep.add("star_vs_matrix_product", worst, config.tol["star_product"])

    t0 = tomogram_from_density(fock_state(0, config.dim), grid)
    mixed = tomogram_from_density(DensityMatrix(np.eye(2) / 2), grid)
    rep.add("purity_pure", abs(scalar_product(t0, t0) - 1.0), config.tol["scalar_product"])
    rep.add("purity_mixed_qubit", abs(scalar_product(mixed, mixed) - 0.5), config.tol["scalar_product"])

    q, p = position_operator(n), momentum_operator(n)
    fq, fp = symbol_from_operator(q, grid), symbol_from_operator(p, grid)
    comm = star_product(fq, fp, n, config.k_max) - star_product(fp, fq, n, config.k_max)
    c = operator_from_symbol(comm, n, config.k_max)
    # the truncated commutator is i on every level except the top one
    keep = np.zeros((n, n))
    keep[: n - 1, : n - 1] = 1.0
    resid = symbol_values(keep * (c - 1j * np.eye(n)), grid)
    rep.add("commutator_away_from_edge", float(np.max(np.abs(resid))), config.tol["commutator"])
    return rep


def suite_route_vs_route(config: RunConfig) -> ComparisonReport:
    rep = ComparisonReport("route-vs-route", config)
    grid = COARSE_GRID
    rng = np.random.default_rng(config.seed)
    cases = [
        ("amp-damp(0.5)", qubit_channel("amplitude_damping", 0.5).kraus, fock_state(1, 2)),
        ("identity(N=4)", KrausSet([np.eye(4, dtype=complex)]), random_density_matrix(4, rank=2, rng=rng)),
        ("rotation(0.8,N=4)", KrausSet([np.diag(np.exp(-0.8j * np.arange(4)))]),
         random_density_matrix(4, rank=2, rng=rng)),
    ]
    for name, kraus, rho in cases:
        t = tomogram_from_density(rho, grid)
        kern = total_kernel(kraus)
        structured = apply_kernel(t, kern, config.k_max)
        t0 = time.perf_counter()
        brute = apply_kernel_quadrature(t, kern)
        rep.timing[name] = time.perf_counter() - t0
        rep.add_discrepancy(name, structured.values, brute.values, config.tol["route_vs_route"])
    return rep


SUITES = {
    "round-trip": suite_round_trip,
    "oracle-equivalence": suite_oracle_equivalence,
    "von-neumann-sweep": suite_von_neumann_sweep,
    "gauss-pos": suite_gauss_position,
    "completeness": suite_completeness,
    "star-product": suite_star_product,
    "route-vs-route": suite_route_vs_route,
}


def run_suite(name: str, config: RunConfig) -> ComparisonReport:
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        warnings.simplefilter("ignore", OptimizeWarning)
        return SUITES[name](config)

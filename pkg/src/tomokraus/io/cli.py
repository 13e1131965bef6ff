"""``tomo``: command-line front end.

    tomo state fock 0 --dim 4 --out rho.json
    tomo tomogram rho.json --reconstruct --out t.csv
    tomo channel phase-flip 0.5 --method both --out out.csv
    tomo kernel basis-proj --dim 2 --out k.json --dense
    tomo verify completeness phase-flip 0.3 --drop-kraus 1

Errors print one line ``error: <code>: <message>`` on stderr and exit with
the code's status: 2 usage, 3 validation, 4 convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from ..basis import (
    DensityMatrix,
    coherent_state,
    fidelity,
    fock_state,
    mixture,
    random_density_matrix,
    thermal_state,
)
from ..channels import FIXED_DIM, GaussianPositionChannel, PointerChannel, build_channel
from ..errors import TomoError, UsageError, ValidationError
from ..kernels import ProcessKernel
from ..tomography import reconstruct, tomogram_from_density
from .config import ComparisonReport, RunConfig, dumps
from .formats import (
    kernel_to_dict,
    read_density_json,
    write_dense_kernel_csv,
    write_density_json,
    write_kernel_json,
    write_tomogram_csv,
)
from .suites import COARSE_GRID, plus_state, run_suite


# basis dimension used when --dim is omitted
DEFAULT_DIM = {"phase-flip": 2, "amp-damp": 2, "von-neumann": 3, "pointer": 3}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message.replace("\n", " "))


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=None, help="basis dimension (default 16, 2 for qubit channels)")
    p.add_argument("--xmax", type=float, default=8.0)
    p.add_argument("--nx", type=int, default=257)
    p.add_argument("--ntheta", type=int, default=64)
    p.add_argument("--kmax", type=float, default=12.0)
    p.add_argument("--out", default=None, help="output path (stdout when omitted)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true", help="write wall-clock times to <out>.timing.json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tomo", description="Quantum channels acting on symplectic tomograms.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("state", help="write a density matrix file")
    p.add_argument("descriptor", nargs="+", help="fock N | coherent RE [IM] | thermal NBAR | plus | "
                                                 "random RANK | mixture W1 S1 W2 S2 ... (S like fock0)")
    _add_common(p)

    p = sub.add_parser("tomogram", help="tomogram CSV of a state file")
    p.add_argument("state")
    p.add_argument("--reconstruct", action="store_true", help="also reconstruct and report fidelity")
    _add_common(p)

    p = sub.add_parser("channel", help="apply a registry channel to a state")
    p.add_argument("channel")
    p.add_argument("params", nargs="*", type=float)
    p.add_argument("--state", default=None, help="state file (default: (|0>+|1>)/sqrt2)")
    p.add_argument("--method", choices=("tomographic", "oracle", "both"), default="tomographic")
    p.add_argument("--selective", default=None, help="outcome, e.g. a=0.5 or m=0")
    _add_common(p)

    p = sub.add_parser("kernel", help="export a channel kernel")
    p.add_argument("channel")
    p.add_argument("params", nargs="*", type=float)
    p.add_argument("--dense", action="store_true", help="also write the regular part on a coarse grid")
    p.add_argument("--outcome", default=None, help="export only the partial kernel with this outcome label")
    _add_common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite")
    p.add_argument("args", nargs="*")
    p.add_argument("--drop-kraus", type=int, default=None)
    p.add_argument("--scale-kraus", type=int, default=None)
    _add_common(p)
    return parser


# ---------------------------------------------------------------------------


def _config(ns, **extra) -> RunConfig:
    dim = ns.dim if ns.dim is not None else extra.pop("default_dim", 16)
    extra.pop("default_dim", None)
    return RunConfig(ns.command, x_max=ns.xmax, n_x=ns.nx, n_theta=ns.ntheta, k_max=ns.kmax, dim=dim,
                     seed=ns.seed, **extra)


def parse_state(tokens: list[str], dim: int, seed: int = 0) -> DensityMatrix:
    if not tokens:
        raise UsageError("empty state descriptor")
    kind, args = tokens[0].lower(), tokens[1:]
    try:
        if kind == "fock":
            return fock_state(int(args[0]), dim)
        if kind == "coherent":
            return coherent_state(complex(float(args[0]), float(args[1]) if len(args) > 1 else 0.0), dim)
        if kind == "thermal":
            return thermal_state(float(args[0]), dim)
        if kind == "plus":
            return plus_state(dim)
        if kind == "random":
            return random_density_matrix(dim, rank=int(args[0]) if args else None, rng=seed)
        if kind == "mixture":
            if len(args) % 2 or not args:
                raise UsageError("mixture needs weight/state pairs")
            weights = [float(w) for w in args[::2]]
            states = [parse_state(_split_token(s), dim, seed) for s in args[1::2]]
            return mixture(weights, states)
        if kind.startswith("fock") and kind[4:].isdigit():
            return fock_state(int(kind[4:]), dim)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise UsageError(f"bad state descriptor {' '.join(tokens)!r}: {exc}") from exc
    raise UsageError(f"unknown state kind {kind!r}")


def _split_token(tok: str) -> list[str]:
    for kind in ("fock", "thermal", "coherent"):
        if tok.startswith(kind) and tok != kind:
            return [kind, tok[len(kind):]]
    return [tok]


def _write_text(path, text: str) -> None:
    if path is None or path == "-":
        print(text, end="")
    else:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)


def _sidecar(out, suffix: str) -> str | None:
    return None if out in (None, "-") else str(Path(out).with_suffix("")) + suffix


def _timing(ns, timing: dict) -> None:
    if ns.timing and ns.out:
        _write_text(_sidecar(ns.out, ".timing.json"), json.dumps(timing, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------


def cmd_state(ns) -> int:
    cfg = _config(ns, state=tuple(ns.descriptor))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rho = parse_state(list(ns.descriptor), cfg.dim, cfg.seed)
    write_density_json(ns.out, rho)
    if ns.out:
        print(dumps({"dim": rho.dim, "label": rho.label, "leakage": rho.leakage,
                     "trace": float(np.trace(rho.matrix).real), "warnings": [str(w.message) for w in caught]}), end="")
    return 0


def cmd_tomogram(ns) -> int:
    rho = read_density_json(ns.state)
    cfg = _config(ns, state=(ns.state,), default_dim=rho.dim)
    tomo = tomogram_from_density(rho, cfg.grid, provenance={"source": rho.label or "state", "config_hash": cfg.hash})
    write_tomogram_csv(ns.out, tomo)
    norm = tomo.normalization()
    summary = {"config_hash": cfg.hash, "normalization_max_dev": float(np.max(np.abs(norm - 1.0))),
               "min_value": float(tomo.values.min())}
    if ns.reconstruct:
        rec = reconstruct(tomo, rho.dim, cfg.k_max)
        summary.update(fidelity=fidelity(rho, rec.state), asymmetry=rec.asymmetry,
                       trace_correction=rec.trace_correction, clipped=rec.clipped)
    _write_text(_sidecar(ns.out, ".summary.json") if ns.out else None, dumps(summary))
    return 0


def cmd_channel(ns) -> int:
    name = ns.channel
    dim = ns.dim if ns.dim is not None else DEFAULT_DIM.get(name, 16)
    if name in FIXED_DIM and dim != FIXED_DIM[name]:
        raise ValidationError(f"channel {name!r} acts on dimension {FIXED_DIM[name]}")
    rho = read_density_json(ns.state) if ns.state else plus_state(dim)
    if rho.dim != dim:
        if rho.dim > dim:
            raise ValidationError(f"state dimension {rho.dim} exceeds channel dimension {dim}")
        rho = rho.embed(dim)
    cfg = _config(ns, default_dim=dim, channel=name, channel_params=tuple(ns.params),
                  state=(ns.state or "plus",) + ((ns.method,) if ns.method else ()) + ((ns.selective,) if ns.selective else ()))
    grid = cfg.grid
    ch = build_channel(name, ns.params, dim)
    tomo = tomogram_from_density(rho, grid)
    rep = ComparisonReport("channel", cfg)
    if ns.selective:
        key, _, value = ns.selective.partition("=")
        if not value:
            raise UsageError("--selective expects KEY=VALUE, e.g. a=0.5")
        outcome = float(value)
        if isinstance(ch, GaussianPositionChannel):
            tomo_route = ch.selective(tomo, [outcome])[0]
            oracle_route = ch.oracle_selective(rho, outcome, grid)
        elif isinstance(ch, PointerChannel):
            raise UsageError("the pointer channel has no selective form")
        else:
            out_op = outcome if name != "basis-proj" else int(outcome)
            tomo_route = ch.selective(tomo, out_op, cfg.k_max)
            oracle_route = ch.oracle_selective(rho, out_op, grid)
        primary = tomo_route if ns.method != "oracle" else oracle_route
        write_tomogram_csv(ns.out, primary.tomogram, {"probability": primary.probability, "outcome": outcome})
        rep.tables["probability"] = {"tomographic": tomo_route.probability, "oracle": oracle_route.probability}
        if ns.method == "both":
            rep.add_discrepancy("selective_density", tomo_route.tomogram.values, oracle_route.tomogram.values,
                                cfg.tol["oracle"])
    else:
        tomo_out = ch.apply(tomo) if isinstance(ch, (GaussianPositionChannel, PointerChannel)) else ch.apply(tomo, cfg.k_max)
        oracle_out = ch.oracle(rho, grid) if ns.method != "tomographic" else None
        primary = oracle_out if ns.method == "oracle" else tomo_out
        write_tomogram_csv(ns.out, primary)
        norm = primary.normalization()
        rep.tables["normalization_max_dev"] = float(np.max(np.abs(norm - 1.0)))
        if ns.method == "both":
            tol = cfg.tol["oracle_qubit"] if dim == 2 else cfg.tol["oracle"]
            rep.add_discrepancy("tomographic_vs_oracle", tomo_out.values, oracle_out.values, tol)
    _write_text(_sidecar(ns.out, ".report.json") if ns.out else None, rep.to_json())
    return 0 if rep.passed else 1


def cmd_kernel(ns) -> int:
    name = ns.channel
    dim = ns.dim if ns.dim is not None else DEFAULT_DIM.get(name, 2)
    cfg = _config(ns, default_dim=dim, channel=name, channel_params=tuple(ns.params))
    ch = build_channel(name, ns.params, dim)
    if isinstance(ch, GaussianPositionChannel):
        data = {"name": name, "kind": "generalized", "form": "x-blur",
                "kappa": ch.kappa, "sigma": "|sin theta| / (kappa sqrt 2)"}
    elif isinstance(ch, PointerChannel):
        data = {"name": name, "kind": "generalized", "form": "x-shift",
                "weights": list(ch.weights), "shift_per_cos_theta": list(ch.shifts)}
    else:
        kern: ProcessKernel = ch.kernel
        if ns.outcome is not None:
            kern = _select_partial(kern, ns.outcome)
        data = kernel_to_dict(kern)
        regular = kern.regular_part
        data["has_regular_part"] = bool(np.max(np.abs(regular)) > 1e-14)
        if ns.dense:
            if not data["has_regular_part"]:
                data["dense"] = None
                data["dense_note"] = "purely structural kernel: no regular part to tabulate"
            elif ns.out:
                path = _sidecar(ns.out, ".dense.csv")
                grid = COARSE_GRID if (ns.nx, ns.ntheta) == (257, 64) else cfg.grid
                grid = type(grid)(grid.x_max, min(grid.n_x, 17), min(grid.n_theta, 8))
                data["dense"] = {"path": Path(path).name, "rows": write_dense_kernel_csv(path, kern, grid),
                                 "grid": grid.as_dict()}
    data["config_hash"] = cfg.hash
    write_kernel_json(ns.out, data)
    return 0


def _select_partial(kern: ProcessKernel, label: str) -> ProcessKernel:
    for p in kern.partials:
        if str(p.label) == label:
            return ProcessKernel(p.coefficients, p.identity_weight, f"{kern.name}[{label}]", (p,))
    known = ", ".join(str(p.label) for p in kern.partials[:12])
    raise UsageError(f"no outcome {label!r} in kernel {kern.name!r}; outcomes: {known}")


def cmd_verify(ns) -> int:
    args = list(ns.args)
    if ns.drop_kraus is not None:
        args.append(f"drop={ns.drop_kraus}")
    if ns.scale_kraus is not None:
        args.append(f"scale={ns.scale_kraus}")
    default_dim = DEFAULT_DIM.get(args[0], 16) if args else 16
    cfg = _config(ns, default_dim=default_dim, suite_args=tuple(args))
    rep = run_suite(ns.suite, cfg)
    _write_text(ns.out, rep.to_json())
    for line in rep.summary_lines():
        print(line, file=sys.stderr)
    _timing(ns, rep.timing)
    return 0 if rep.passed else 1


COMMANDS = {"state": cmd_state, "tomogram": cmd_tomogram, "channel": cmd_channel,
            "kernel": cmd_kernel, "verify": cmd_verify}


def _thread_limit():
    value = os.environ.get("TOMO_THREADS")
    if not value:
        return nullcontext()
    try:
        n = int(value)
    except ValueError as exc:
        raise UsageError(f"TOMO_THREADS must be a positive integer, got {value!r}") from exc
    if n < 1:
        raise UsageError(f"TOMO_THREADS must be a positive integer, got {value!r}")
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=n)


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        with _thread_limit():
            return COMMANDS[ns.command](ns)
    except TomoError as exc:
        print(f"error: {exc.code}: {' '.join(str(exc).split())}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: io: {' '.join(str(exc).split())}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

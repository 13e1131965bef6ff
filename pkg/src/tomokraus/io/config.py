"""Run configuration, tolerance block and comparison reports."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

from ..errors import ValidationError
from ..tomography import DEFAULT_KMAX, RayGrid

# Every tolerance used by the verification suites and the acceptance tests.
DEFAULT_TOLERANCES = {
    "round_trip_infidelity": 1e-6,
    "round_trip_seconds": 30.0,
    "oracle_qubit": 1e-5,
    "oracle": 1e-4,
    "decoherence_rel": 1e-6,
    "von_neumann_route": 1e-4,
    "blur_oracle": 1e-4,
    "blur_sigma_rel": 0.02,
    "completeness": 1e-4,
    "incompleteness_min": 0.05,
    "star_product": 1e-6,
    "scalar_product": 1e-6,
    "commutator": 1e-5,
    "route_vs_route": 1e-3,
    "quadrature_seconds": 60.0,
    "normalization": 1e-5,
}


def canonical(obj):
    """Floats rounded through %.12e so that serialized output is byte-stable."""
    if isinstance(obj, float):
        return float(f"{obj:.12e}")
    if isinstance(obj, complex):
        return [canonical(obj.real), canonical(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return canonical(obj.item())
    return obj


def dumps(obj) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's output bytes."""

    command: str
    x_max: float = 8.0
    n_x: int = 257
    n_theta: int = 64
    k_max: float = DEFAULT_KMAX
    dim: int = 16
    channel: str = ""
    channel_params: tuple = ()
    state: tuple = ()
    seed: int = 0
    suite_args: tuple = ()
    tolerances: tuple = field(default_factory=lambda: tuple(sorted(DEFAULT_TOLERANCES.items())))

    def __post_init__(self):
        self.grid  # validates n_x, x_max and n_theta
        if self.k_max <= 0:
            raise ValidationError("k_max must be positive")
        if self.dim < 2:
            raise ValidationError("basis dimension must be at least 2")

    @property
    def grid(self) -> RayGrid:
        return RayGrid(self.x_max, self.n_x, self.n_theta)

    @property
    def tol(self) -> dict:
        return dict(self.tolerances)

    def as_dict(self) -> dict:
        return canonical(asdict(self))

    @property
    def hash(self) -> str:
        text = json.dumps(self.as_dict(), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class ComparisonReport:
    """Named checks with their values and limits.

    ``relation`` is "<=" for accuracy checks and ">" for checks that a
    deliberate violation is detected.
    """

    suite: str
    config: RunConfig
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def add(self, name: str, value: float, tol: float, relation: str = "<=") -> bool:
        value = float(value)
        ok = value <= tol if relation == "<=" else value > tol
        self.checks.append({"name": name, "value": value, "tol": float(tol), "relation": relation, "passed": bool(ok)})
        return ok

    def add_discrepancy(self, name: str, a, b, tol: float) -> bool:
        import numpy as np

        d = np.asarray(a) - np.asarray(b)
        self.tables.setdefault("discrepancy", {})[name] = {
            "max_abs": float(np.max(np.abs(d))), "l2": float(np.sqrt(np.sum(np.abs(d) ** 2)))}
        return self.add(name, float(np.max(np.abs(d))), tol)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config_hash": self.config.hash,
            "config": self.config.as_dict(),
            "grid": self.config.grid.as_dict(),
            "tolerances": dict(self.config.tolerances),
            "checks": self.checks,
            "tables": self.tables,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return dumps(self.as_dict())

    def summary_lines(self) -> list[str]:
        return [f"{'PASS' if c['passed'] else 'FAIL'} {self.suite}/{c['name']}: "
                f"{c['value']:.3e} {c['relation']} {c['tol']:.1e}" for c in self.checks]

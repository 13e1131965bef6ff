"""Acceptance criteria 1-8.

Each criterion prints one ``PASS``/``FAIL`` line. Under pytest the lines are
also repeated in the terminal summary; ``python tests/test_acceptance.py``
runs the criteria without pytest.
"""

import sys
import tempfile
from pathlib import Path

import pytest

from tomokraus.io.cli import main
from tomokraus.io.config import DEFAULT_TOLERANCES, RunConfig
from tomokraus.io.suites import SUITES, run_suite

TOL = DEFAULT_TOLERANCES
RESULTS: dict[int, str] = {}
_CACHE: dict = {}


def _report(name):
    if name not in _CACHE:
        _CACHE[name] = run_suite(name, RunConfig("verify"))
    return _CACHE[name]


def _record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}"
    RESULTS[number] = line
    print(line)
    return ok


def _checks(rep):
    return {c["name"]: c for c in rep.checks}


def criterion_1():
    rep = _report("round-trip")
    worst = _checks(rep)["max_infidelity"]["value"]
    secs = rep.timing["seconds"]
    ok = rep.passed and secs <= TOL["round_trip_seconds"]
    return _record(1, "round trip", ok, f"max infidelity {worst:.2e} <= {TOL['round_trip_infidelity']:g}, "
                                        f"{len(rep.tables['infidelity'])} states in {secs:.1f} s")


def criterion_2():
    rep = _report("oracle-equivalence")
    qubit = max(c["value"] for c in rep.checks if c["tol"] == TOL["oracle_qubit"])
    big = max(c["value"] for c in rep.checks if c["tol"] == TOL["oracle"])
    return _record(2, "oracle equivalence", rep.passed, f"qubit {qubit:.2e}, N=16 {big:.2e} "
                                                       f"over {len(rep.checks)} channels")


def criterion_3():
    rep = _report("von-neumann-sweep")
    c = _checks(rep)
    return _record(3, "von Neumann decoherence", rep.passed,
                   f"factor rel {c['decoherence_rel']['value']:.2e}, "
                   f"route {c['tomographic_route']['value']:.2e} over {len(rep.tables['decoherence'])} points")


def criterion_4():
    rep = _report("gauss-pos")
    c = _checks(rep)
    return _record(4, "Gaussian position channel", rep.passed,
                   f"oracle {c['blur_vs_oracle']['value']:.2e}, sigma rel {c['blur_sigma_rel']['value']:.2e}")


def criterion_5():
    rep = _report("completeness")
    complete = [c for c in rep.checks if c["relation"] == "<="]
    broken = [c for c in rep.checks if c["relation"] == ">"]
    return _record(5, "completeness", rep.passed and bool(broken),
                   f"complete sets max {max(c['value'] for c in complete):.2e}, "
                   f"{len(broken)} broken sets min {min(c['value'] for c in broken):.3f}")


def criterion_6():
    rep = _report("star-product")
    c = _checks(rep)
    return _record(6, "star and scalar products", rep.passed,
                   f"star {c['star_vs_matrix_product']['value']:.2e}, "
                   f"purity {max(c['purity_pure']['value'], c['purity_mixed_qubit']['value']):.2e}, "
                   f"commutator {c['commutator_away_from_edge']['value']:.2e}")


def criterion_7():
    rep = _report("route-vs-route")
    slowest = max(rep.timing.values())
    ok = rep.passed and len(rep.checks) >= 3 and slowest <= TOL["quadrature_seconds"]
    return _record(7, "route vs route", ok, f"max {max(c['value'] for c in rep.checks):.2e} over "
                                           f"{len(rep.checks)} channels, slowest quadrature {slowest:.2f} s")


def criterion_8():
    differing = []
    with tempfile.TemporaryDirectory() as tmp:
        for name in SUITES:
            path = Path(tmp) / f"{name}.json"
            main(["verify", name, "--out", str(path)])
            if path.read_bytes() != _report(name).to_json().encode():
                differing.append(name)
    return _record(8, "determinism", not differing,
                   f"{len(SUITES) - len(differing)}/{len(SUITES)} suites byte-identical across two runs")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    sys.exit(0 if all([c() for c in CRITERIA]) else 1)

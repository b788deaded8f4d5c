"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with the measured worst case.
Run with ``pytest tests/test_acceptance.py -s`` to see them, or execute this
file directly.
"""
import json

import numpy as np
import pytest

from qctsim import channels as ch
from qctsim import decompositions, reports, weyl
from qctsim.protocol import (
    AB_ORDERS,
    VARIANTS,
    AncillaNoiseSpec,
    ProtocolAssembly,
    class_residual,
    factorization_report,
    sample_ancilla_noise,
    system_channel,
)

TOL = 1e-9
THREE_KINDS = ("mixed_unitary_in_class", "unitary_in_class", "general_in_class")


def verdict(number, title, passed, detail):
    print(f"\n{'PASS' if passed else 'FAIL'} criterion {number}: {title} ({detail})")
    assert passed, f"criterion {number} failed: {detail}"


def qubit_fidelities(variant, ab_order, ancilla_kinds, n=100):
    assembly = ProtocolAssembly.build(2, variant, ab_order)
    out = []
    for seed in range(n):
        lam = ch.random_cptp(2, 1 + seed % 4, seed)
        kind = ancilla_kinds[seed % len(ancilla_kinds)]
        phi = sample_ancilla_noise(AncillaNoiseSpec(kind, 1000 + seed, 2))
        out.append(ch.entanglement_fidelity(system_channel(assembly.run(lam, phi))))
    return np.array(out)


def test_criterion_01_twirl():
    worst = 0.0
    for d in (2, 3, 4, 5):
        z, x = weyl.clock(d), weyl.shift(d)
        frame = [np.linalg.matrix_power(z, m) @ np.linalg.matrix_power(x, n)
                 for m in range(d) for n in range(d)]
        rng = np.random.default_rng(d)
        for _ in range(50):
            f = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            direct = sum(g @ f @ g.conj().T for g in frame)
            worst = max(worst, np.linalg.norm(direct - d * np.trace(f) * np.eye(d)))
    verdict(1, "twirl over the Weyl frame is d tr(F) 1", worst <= TOL, f"max residual {worst:.2e}")


def test_criterion_02_qubit_transparency():
    fid = qubit_fidelities("eq3_unitary", "AB", ("identity",))
    verdict(2, "qubit transparency, noiseless ancillas", fid.min() >= 1 - TOL,
            f"min fidelity 1 - {1 - fid.min():.2e} over 100 channels")


def test_criterion_03_ancilla_noise_tolerance():
    fid = qubit_fidelities("eq3_unitary", "AB", THREE_KINDS)
    worst_member = 0.0
    for seed in range(100):
        phi = sample_ancilla_noise(AncillaNoiseSpec(THREE_KINDS[seed % 3], 1000 + seed, 2))
        worst_member = max(worst_member, max(class_residual(k, 2) for k in phi.kraus))
    ok = fid.min() >= 1 - TOL and worst_member <= TOL
    verdict(3, "qubit transparency under in-class ancilla noise", ok,
            f"min fidelity 1 - {1 - fid.min():.2e}; max membership residual {worst_member:.2e}")


def test_criterion_04_qudit_transparency():
    worst = 0.0
    for d in (3, 4, 5):
        assembly = ProtocolAssembly.build(d)
        for seed in range(25):
            lam = ch.random_cptp(d, 1 + seed % (d * d), seed)
            phi = sample_ancilla_noise(AncillaNoiseSpec(THREE_KINDS[seed % 3], 500 + seed, d))
            fid = ch.entanglement_fidelity(system_channel(assembly.run(lam, phi)))
            worst = max(worst, 1 - fid)
    verdict(4, "qudit transparency d=3,4,5", worst <= TOL, f"min fidelity 1 - {worst:.2e}")


def test_criterion_05_factorization():
    worst = 0.0
    for d in (2, 3):
        assembly = ProtocolAssembly.build(d)
        for seed in range(25):
            lam = ch.random_cptp(d, 1 + seed % (d * d), seed)
            phi = sample_ancilla_noise(AncillaNoiseSpec(THREE_KINDS[seed % 3], 700 + seed, d))
            rep = factorization_report(assembly.run(lam, phi), max_dim=3)
            worst = max(worst, rep.factorization_residual)
    verdict(5, "full map factorises as ancilla map x identity", worst <= TOL,
            f"max Choi residual {worst:.2e}")


def test_criterion_06_variant_robustness():
    table = {}
    for variant in VARIANTS:
        for order in AB_ORDERS:
            clean = qubit_fidelities(variant, order, ("identity",))
            noisy = qubit_fidelities(variant, order, THREE_KINDS)
            table[(variant, order)] = min(clean.min(), noisy.min())
    winners = [o for o in AB_ORDERS if all(table[(v, o)] >= 1 - TOL for v in VARIANTS)]
    lines = "; ".join(f"{v}/{o} min F={f:.6f}" for (v, o), f in table.items())
    print(f"\nab_order results: {lines}")
    verdict(6, "criteria 2-3 hold for every correction variant", bool(winners),
            f"passing ab_order(s): {winners or 'none'}")


def test_criterion_07_negative_control():
    fid = qubit_fidelities("eq3_unitary", "AB", ("out_of_class_control",))
    below = int((fid < 0.999).sum())
    verdict(7, "out-of-class ancilla noise is detected", below >= 90,
            f"{below}/100 seeds below 0.999, max fidelity {fid.max():.6f}")


def test_criterion_08_decomposition_certificates():
    checks = decompositions.run_all_checks(TOL)
    failed = [c.name for c in checks if not c.passed]
    for c in checks:
        print(f"\n  {'ok ' if c.passed else 'BAD'} {c.name}: residual {c.residual:.2e} {c.note}")
    verdict(8, "optical and atomic decomposition certificates", not failed,
            f"{len(checks) - len(failed)}/{len(checks)} checks pass" + (f", failed {failed}" if failed else ""))


def test_criterion_09_entanglement_protection():
    recs = [reports.run_entanglement_demo(p, seed=0) for p in (0.25, 0.5, 1.0)]
    worst = max(abs(r["negativity_protected"] - 0.5) for r in recs)
    bare = recs[-1]["negativity_bare"]
    ok = worst <= TOL and bare <= TOL
    verdict(9, "Bell-pair negativity survives depolarizing noise", ok,
            f"max |N - 0.5| {worst:.2e}; bare baseline at p=1 gives N={bare:g}")


def test_criterion_10_determinism():
    config = {"d_list": [2, 3], "seeds_per_case": 5,
              "system_noise_kinds": ["random", "depolarizing"],
              "ancilla_noise_kinds": ["identity", "general_in_class", "out_of_class_control"],
              "v_variants": list(VARIANTS), "ab_orders": list(AB_ORDERS)}
    bodies = [reports.report_body(reports.run_transparency_sweep(reports.SweepConfig.from_mapping(config)))
              for _ in range(2)]
    n = len(json.loads(bodies[0])["records"])
    verdict(10, "sweep rerun gives an identical report body", bodies[0] == bodies[1],
            f"{n} records, {len(bodies[0])} bytes")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-s", "-q"]))

"""Batch sweeps, demos and certificate runs with machine-readable reports."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import channels, decompositions
from ._validation import ATOL, check_probability, check_tolerance
from .linalg import partial_trace
from .protocol import (
    AB_ORDERS,
    ANCILLA_KINDS,
    VARIANTS,
    AncillaNoiseSpec,
    ProtocolAssembly,
    factorization_report,
    sample_ancilla_noise,
)

SYSTEM_NOISE_KINDS = ("random", "depolarizing", "amplitude_damping", "phase_damping", "bit_flip")
QUBIT_ONLY_NOISE = ("amplitude_damping", "phase_damping", "bit_flip")
SUPPORTED_DIMS = (2, 3, 4, 5)
FORMATS = ("json", "csv")
SIG_DIGITS = 12


class ConfigError(ValueError):
    pass


def _round(x):
    return float(f"{x:.{SIG_DIGITS}g}")


def _as_list(value, cast=str):
    if isinstance(value, str):
        value = [v for v in value.replace(",", " ").split() if v]
    elif not isinstance(value, (list, tuple)):
        value = [value]
    return [cast(v) for v in value]


@dataclass
class SweepConfig:
    d_list: list = field(default_factory=lambda: [2])
    seeds_per_case: int = 100
    system_noise_kinds: list = field(default_factory=lambda: ["random"])
    ancilla_noise_kinds: list = field(default_factory=lambda: ["identity"])
    v_variants: list = field(default_factory=lambda: ["eq3_unitary"])
    ab_orders: list = field(default_factory=lambda: ["AB"])
    tolerance: float = ATOL
    output_path: str = "-"
    output_format: str = "json"
    max_factorization_dim: int = 3
    jobs: int = 1

    _LISTS = {"d_list": int, "system_noise_kinds": str, "ancilla_noise_kinds": str,
              "v_variants": str, "ab_orders": str}

    @classmethod
    def from_mapping(cls, mapping):
        """Build a config from a flat key-value mapping, ignoring ``None`` values."""
        names = {f.name for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, value in mapping.items():
            if value is None:
                continue
            if key not in names:
                raise ConfigError(f"unknown config key {key!r}")
            if key in cls._LISTS:
                value = _as_list(value, cls._LISTS[key])
            kwargs[key] = value
        config = cls(**kwargs)
        config.validate()
        return config

    def validate(self):
        self.d_list = [int(d) for d in self.d_list]
        if not self.d_list:
            raise ConfigError("d_list must not be empty")
        if not set(self.d_list) <= set(SUPPORTED_DIMS):
            raise ConfigError(f"d_list must be a subset of {SUPPORTED_DIMS}, got {self.d_list}")
        self.seeds_per_case = int(self.seeds_per_case)
        if self.seeds_per_case < 1:
            raise ConfigError("seeds_per_case must be >= 1")
        for name, allowed in [("system_noise_kinds", SYSTEM_NOISE_KINDS),
                              ("ancilla_noise_kinds", ANCILLA_KINDS),
                              ("v_variants", VARIANTS), ("ab_orders", AB_ORDERS)]:
            values = getattr(self, name)
            if not values:
                raise ConfigError(f"{name} must not be empty")
            bad = [v for v in values if v not in allowed]
            if bad:
                raise ConfigError(f"{name}: unknown values {bad}; choose from {allowed}")
        try:
            self.tolerance = check_tolerance(float(self.tolerance))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.output_format not in FORMATS:
            raise ConfigError(f"output_format must be one of {FORMATS}")
        self.jobs = max(1, int(self.jobs))
        return self

    def to_dict(self):
        out = dataclasses.asdict(self)
        out.pop("jobs")
        return out

    def cells(self):
        """All compatible ``(d, system, ancilla, variant, ab_order, seed)`` cells, in order."""
        for d in self.d_list:
            for sys_kind in self.system_noise_kinds:
                if d != 2 and sys_kind in QUBIT_ONLY_NOISE:
                    continue
                for anc in self.ancilla_noise_kinds:
                    for variant in self.v_variants:
                        if d != 2 and variant == "hadamard_conjugated":
                            continue
                        for order in self.ab_orders:
                            for seed in range(self.seeds_per_case):
                                yield d, sys_kind, anc, variant, order, seed


def make_system_noise(kind, d, seed):
    """System channel for a sweep cell.

    ``random`` cycles the Kraus rank through ``1 .. d**2`` with the seed; the
    named kinds draw their strength uniformly from [0, 1].
    """
    if kind == "random":
        return channels.random_cptp(d, 1 + seed % (d * d), seed)
    strength = float(np.random.default_rng(seed).uniform())
    if kind == "depolarizing":
        return channels.depolarizing(strength, d)
    return channels.named_channel(kind, strength)


def _cell_seeds(seed, d):
    sys_seed, anc_seed = np.random.SeedSequence([seed, d]).generate_state(2)
    return int(sys_seed), int(anc_seed)


def run_cell(cell, tolerance, max_factorization_dim):
    d, sys_kind, anc_kind, variant, order, seed = cell
    start = time.perf_counter()
    sys_seed, anc_seed = _cell_seeds(seed, d)
    lam = make_system_noise(sys_kind, d, sys_seed)
    phi = sample_ancilla_noise(AncillaNoiseSpec(anc_kind, anc_seed, d))
    assembled = ProtocolAssembly.build(d, variant, order).run(lam, phi)
    rep = factorization_report(assembled, max_dim=max_factorization_dim)
    residual = "skipped:dim" if rep.factorization_residual is None else _round(rep.factorization_residual)
    fidelity = _round(rep.system_fidelity)
    passed = fidelity >= 1 - tolerance and (residual == "skipped:dim" or residual <= tolerance)
    return {
        "case_id": f"d{d}/{sys_kind}/{anc_kind}/{variant}/{order}/s{seed}",
        "d": d,
        "seed": seed,
        "system_noise": sys_kind,
        "ancilla_noise": anc_kind,
        "variant": variant,
        "ab_order": order,
        "control": anc_kind == "out_of_class_control",
        "system_fidelity": fidelity,
        "factorization_residual": residual,
        "pass": bool(passed),
        "wall_time": _round(time.perf_counter() - start),
    }


def _run_cell_args(args):
    return run_cell(*args)


def summarize(records):
    regular = [r for r in records if not r["control"]]
    controls = [r for r in records if r["control"]]
    orders = sorted({r["ab_order"] for r in regular})
    return {
        "pass_count": sum(r["pass"] for r in regular),
        "fail_count": sum(not r["pass"] for r in regular),
        "control_count": len(controls),
        "control_fail_count": sum(not r["pass"] for r in controls),
        "passing_ab_orders": [o for o in orders
                              if all(r["pass"] for r in regular if r["ab_order"] == o)],
    }


def run_transparency_sweep(config):
    """Run every cell of ``config`` and return the report dictionary."""
    config.validate()
    args = [(cell, config.tolerance, config.max_factorization_dim) for cell in config.cells()]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_run_cell_args, args, chunksize=4))
    else:
        records = [run_cell(*a) for a in args]
    return {"config": config.to_dict(), "records": records, "summary": summarize(records)}


def exit_status(report):
    return 0 if report["summary"]["fail_count"] == 0 else 1


def report_body(report):
    """Deterministic serialisation of a report with timing fields removed."""
    records = [{k: v for k, v in r.items() if k != "wall_time"} for r in report["records"]]
    body = {"config": report.get("config"), "records": records, "summary": report.get("summary")}
    return json.dumps(body, sort_keys=True)


def to_json(report):
    return json.dumps(report, indent=2, sort_keys=False, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_csv(report):
    records = report["records"]
    buf = io.StringIO()
    if records:
        writer = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
        writer.writeheader()
        for r in records:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def read_csv_records(text):
    """Parse CSV emitted by :func:`to_csv` back into typed records."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        rec = {}
        for k, v in row.items():
            if v in ("True", "False"):
                rec[k] = v == "True"
            else:
                try:
                    rec[k] = int(v)
                except ValueError:
                    try:
                        rec[k] = float(v)
                    except ValueError:
                        rec[k] = v
        out.append(rec)
    return out


def write_report(report, path="-", fmt="json"):
    """Write ``report`` to ``path`` (``-`` for stdout); returns the text."""
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    text = to_json(report) if fmt == "json" else to_csv(report)
    if path and path != "-":
        target = Path(path)
        try:
            target.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write report to {target}: {exc}") from exc
    return text


# ---------------------------------------------------------------- demos


def bell_state():
    phi = np.zeros(4, dtype=np.complex128)
    phi[0] = phi[3] = 1 / np.sqrt(2)
    return np.outer(phi, phi.conj())


def _protected_pair_output(noise, ancilla_noise, variant, ab_order, rho):
    """Run both halves of ``rho`` through independent pipelines and trace out the ancillas."""
    pipeline = ProtocolAssembly.build(2, variant, ab_order).run(noise, ancilla_noise)
    both = channels.channel_tensor(pipeline, pipeline)
    out = channels.apply(both, rho)
    # factors: A1 B1 S1 A2 B2 S2
    return partial_trace(out, (2,) * 6, keep=[2, 5])


def run_entanglement_demo(p, seed=0, ancilla_noise="identity", variant="eq3_unitary",
                          ab_order="AB", tolerance=ATOL):
    """Bell-pair protection against local depolarizing noise of strength ``p``."""
    p = check_probability(p)
    noise = channels.depolarizing(p, 2)
    phi = sample_ancilla_noise(AncillaNoiseSpec(ancilla_noise, seed, 2))
    rho = bell_state()
    bare = channels.apply(channels.channel_tensor(noise, noise), rho)
    protected = _protected_pair_output(noise, phi, variant, ab_order, rho)
    n_in = channels.negativity(rho, (2, 2))
    n_bare = channels.negativity(bare, (2, 2))
    n_out = channels.negativity(protected, (2, 2))
    return {
        "p": _round(p),
        "seed": seed,
        "ancilla_noise": ancilla_noise,
        "negativity_in": _round(n_in),
        "negativity_bare": _round(n_bare),
        "negativity_protected": _round(n_out),
        "pass": bool(abs(n_out - 0.5) <= tolerance),
    }


def run_entanglement_demos(p_values, seed=0, **kwargs):
    records = [run_entanglement_demo(p, seed, **kwargs) for p in p_values]
    return {
        "config": {"p_values": [_round(p) for p in p_values], "seed": seed, **kwargs},
        "records": records,
        "summary": {"pass_count": sum(r["pass"] for r in records),
                    "fail_count": sum(not r["pass"] for r in records),
                    "control_count": 0},
    }


def run_decomposition_certs(tolerance=ATOL):
    records = [
        {"check": c.name, "pass": bool(c.passed), "residual": _round(c.residual), "note": c.note}
        for c in decompositions.run_all_checks(tolerance)
    ]
    return {
        "config": {"tolerance": tolerance},
        "records": records,
        "summary": {"pass_count": sum(r["pass"] for r in records),
                    "fail_count": sum(not r["pass"] for r in records),
                    "control_count": 0},
    }


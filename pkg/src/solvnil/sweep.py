"""Sweep harness: shape families, per-instance checks and reproducible manifests."""
from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from typing import Callable, Iterable, Sequence

from . import __version__
from .blockstruct import (
    Shape,
    canonical_seq,
    is_odd_symmetric,
    random_seq,
)
from .exactla import QQ, GF, is_prime, parse_field
from .nilradical import generate_nilradical, rank_table
from .theory import (
    free_check,
    predict_degree,
    predict_degree_canonical,
    predict_r1k,
)


def shape_family(k_min: int = 2, k_max: int = 6, d_max: int = 4, dim_cap: int = 14) -> list[Shape]:
    """All shapes with k_min <= k <= k_max, 1 <= d_i <= d_max and |d| <= dim_cap, in key order."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], left: int):
        if len(prefix) >= k_min:
            out.append(tuple(prefix))
        if len(prefix) == k_max:
            return
        for x in range(1, min(d_max, left) + 1):
            prefix.append(x)
            rec(prefix, left - x)
            prefix.pop()

    rec([], dim_cap)
    return [Shape(d) for d in sorted(out, key=lambda d: (len(d), d))]


def shape_key(d: Sequence[int]) -> tuple:
    return (len(d), tuple(d))


@dataclass
class SweepConfig:
    k_min: int = 2
    k_max: int = 6
    d_max: int = 4
    dim_cap: int = 14
    field: str = "Q"
    seed: int = 0
    samples: int = 20
    entry_bound: int = 3
    checks: tuple[str, ...] = ("degree", "r1k", "free", "general")
    general_k: tuple[int, ...] = (3, 5)
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        self.checks = tuple(self.checks)
        self.general_k = tuple(self.general_k)
        parse_field(self.field)
        if not 2 <= self.k_min <= self.k_max:
            raise ValueError("need 2 <= k_min <= k_max")
        if self.d_max < 1 or self.dim_cap < 2:
            raise ValueError("need d_max >= 1 and dim_cap >= 2")
        unknown = set(self.checks) - {"degree", "r1k", "free", "general"}
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")

    @classmethod
    def from_json(cls, obj: dict) -> SweepConfig:
        known = {f for f in cls.__dataclass_fields__}
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**obj)

    def payload(self) -> dict:
        # output location and parallelism do not affect results
        d = asdict(self)
        d.pop("out")
        d.pop("workers")
        d["checks"] = list(self.checks)
        d["general_k"] = list(self.general_k)
        return d

    def digest(self) -> str:
        return config_hash(self.payload())


def config_hash(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class RunManifest:
    command: str
    config: dict
    field: str
    seed: int
    results: list[dict]
    mismatches: list[dict]
    findings: list[dict] = dc_field(default_factory=list)
    timing: dict = dc_field(default_factory=dict)
    tool_version: str = __version__

    @property
    def config_hash(self) -> str:
        return config_hash(self.config)

    def payload(self) -> dict:
        """Everything except wall-time statistics; byte-stable across reruns."""
        return {
            "tool_version": self.tool_version,
            "command": self.command,
            "config": self.config,
            "config_hash": self.config_hash,
            "field": self.field,
            "seed": self.seed,
            "results": self.results,
            "mismatches": self.mismatches,
            "findings": self.findings,
        }

    def dumps(self, with_timing: bool = True) -> str:
        doc = self.payload()
        if with_timing:
            doc["timing"] = self.timing
        return json.dumps(doc, sort_keys=True, indent=1)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def run_tasks(fn: Callable, tasks: Iterable[tuple], workers: int = 1) -> list:
    tasks = list(tasks)
    if workers <= 1 or len(tasks) < 2:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*tasks), chunksize=max(1, len(tasks) // (8 * workers))))


# --------------------------------------------------------------------------
# Per-instance checks (module level so they pickle)
# --------------------------------------------------------------------------


def canonical_instance(d: tuple[int, ...], checks: tuple[str, ...]) -> dict:
    shape = Shape(d)
    seq = canonical_seq(shape, QQ)
    report = generate_nilradical(seq)
    res: dict = {"kind": "canonical", "shape": list(d), "dim": report.dim, "degree": report.degree}
    bad: list[str] = []
    if "degree" in checks:
        pred = predict_degree_canonical(shape)
        res["predicted_degree"] = pred.predicted_degree
        res["case"] = pred.case_tag
        if report.degree != pred.predicted_degree:
            bad.append("degree")
    if "r1k" in checks:
        table = rank_table(shape, report=report)
        res["r1k"] = table.r1k
        res["predicted_r1k"] = predict_r1k(shape)
        if table.r1k != res["predicted_r1k"]:
            bad.append("r1k")
        if any(table[i, i + 1] != 1 for i in range(1, shape.k)):
            bad.append("r_adjacent")
        if any(v not in (0, 1, 2) for v in table.entries.values()):
            bad.append("r_range")
    if "free" in checks:
        prof = free_check(seq, report)
        res["free"] = prof.verdict
        res["predicted_free"] = prof.predicted_verdict
        res["lcs_quotients"] = prof.quotient_dims
        if not prof.agrees:
            bad.append("free")
    res["failed"] = bad
    return res


def general_instance(d: tuple[int, ...], constraint: str, seed: int, index: int,
                     entry_bound: int) -> dict:
    shape = Shape(d)
    seq = random_seq(shape, seed * 100003 + index, entry_bound, constraint)
    report = generate_nilradical(seq)
    pred = predict_degree(seq)
    return {
        "kind": "general",
        "shape": list(d),
        "constraint": constraint,
        "index": index,
        "seq": seq.dumps(),
        "degree": report.degree,
        "predicted_degree": pred.predicted_degree,
        "case": pred.case_tag,
        "failed": [] if report.degree == pred.predicted_degree else ["degree"],
    }


def charp_instance(d: tuple[int, ...], p: int) -> dict:
    shape = Shape(d)
    report = generate_nilradical(canonical_seq(shape, GF(p)))
    pred = predict_degree_canonical(shape)
    return {
        "kind": "charp",
        "p": p,
        "shape": list(d),
        "dim": report.dim,
        "degree": report.degree,
        "char0_degree": pred.predicted_degree,
        "drop": report.degree < pred.predicted_degree,
    }


def _sort_key(r: dict) -> tuple:
    return (r["kind"], r.get("p", 0), shape_key(r["shape"]), r.get("constraint", ""), r.get("index", 0))


def _general_tasks(cfg: SweepConfig, family: list[Shape]) -> list[tuple]:
    tasks = []
    for s in family:
        if s.k not in cfg.general_k:
            continue
        if is_odd_symmetric(s) and s.d_vec[0] == 1 == s.d_vec[-1]:
            for c in ("normalized_phi_invariant", "normalized"):
                tasks += [(s.d_vec, c, cfg.seed, i, cfg.entry_bound) for i in range(cfg.samples)]
        elif s.d_vec != s.d_vec[::-1]:
            # asymmetric shapes only need a few unnormalized draws each
            tasks += [(s.d_vec, "none", cfg.seed, i, cfg.entry_bound) for i in range(min(cfg.samples, 2))]
    return tasks


def verify_sweep(cfg: SweepConfig) -> RunManifest:
    """Computed-versus-predicted comparisons over the configured shape family."""
    if parse_field(cfg.field).characteristic != 0:
        raise ValueError("verify compares against characteristic-0 theorems; use charp for F_p")
    t0 = time.perf_counter()
    family = shape_family(cfg.k_min, cfg.k_max, cfg.d_max, cfg.dim_cap)
    canon_checks = tuple(c for c in cfg.checks if c != "general")
    results = []
    if canon_checks:
        results += run_tasks(canonical_instance, [(s.d_vec, canon_checks) for s in family], cfg.workers)
    t1 = time.perf_counter()
    if "general" in cfg.checks:
        results += run_tasks(general_instance, _general_tasks(cfg, family), cfg.workers)
    t2 = time.perf_counter()
    results.sort(key=_sort_key)
    mismatches = [{"kind": r["kind"], "shape": r["shape"], "failed": r["failed"],
                   **({"seq": r["seq"]} if "seq" in r else {})}
                  for r in results if r["failed"]]
    return RunManifest(
        command="verify", config=cfg.payload(), field=cfg.field, seed=cfg.seed,
        results=results, mismatches=mismatches,
        timing={"canonical_s": round(t1 - t0, 3), "general_s": round(t2 - t1, 3),
                "instances": len(results)})


def charp_sweep(primes: Sequence[int], k_min: int = 2, k_max: int = 5, d_max: int = 4,
                pattern: str = "constant_p", dim_cap: int = 14, workers: int = 1) -> RunManifest:
    """Degree of n(C) over F_p; instances below the characteristic-0 degree are findings."""
    bad = [p for p in primes if not is_prime(p)]
    if bad:
        raise ValueError(f"not prime: {bad}")
    if pattern not in ("constant_p", "grid"):
        raise ValueError(f"unknown pattern {pattern!r}")
    t0 = time.perf_counter()
    tasks = []
    for p in sorted(set(primes)):
        if pattern == "constant_p":
            shapes = [Shape((p,) * k) for k in range(k_min, k_max + 1)]
        else:
            shapes = shape_family(k_min, k_max, d_max, dim_cap)
        tasks += [(s.d_vec, p) for s in shapes]
    results = sorted(run_tasks(charp_instance, tasks, workers), key=_sort_key)
    config = {"primes": sorted(set(primes)), "k_min": k_min, "k_max": k_max, "d_max": d_max,
              "pattern": pattern, "dim_cap": dim_cap}
    return RunManifest(
        command="charp", config=config, field=",".join(f"F{p}" for p in config["primes"]),
        seed=0, results=results, mismatches=[],
        findings=[{"p": r["p"], "shape": r["shape"], "degree": r["degree"],
                   "char0_degree": r["char0_degree"]} for r in results if r["drop"]],
        timing={"total_s": round(time.perf_counter() - t0, 3), "instances": len(results)})

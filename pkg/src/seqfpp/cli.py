"""Command-line front end: experiment configuration, execution, and
report/plot-data emission.

Every subcommand writes `report.json` (schema-versioned; records the seed,
tolerances, and truncation) into the output directory, plus CSV plot data
where it makes sense. Exit codes: 0 success, 1 a verified inequality was
violated, 2 invalid input. Randomized subcommands require --seed; there is
no hidden entropy. Re-running with an identical config reproduces the report
byte-for-byte apart from the `generated_at` field.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import os
import sys

import numpy as np

from . import basis as basis_mod
from . import constructions as cons
from . import harness, optim, rng
from .backend import BACKEND
from .basis import BasicSequenceSpec, ConstantEstimate, SimplexPoint, from_preset_string
from .constructions import AlphaSchedule
from .errors import SeqFppError
from .spaces import CoeffVector, Space

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2

SCHEMA_VERSION = 1

RANDOMIZED = {
    "key-lemma",
    "hj-check",
    "separation",
    "lipschitz",
    "uniform-probe",
    "verify-all",
}


class ConfigError(SeqFppError):
    pass


def parse_space(s: str) -> Space:
    s = s.strip().lower()
    if s in ("c0", "c0-sup"):
        return Space.c0_sup()
    if s == "ell1":
        return Space.ell1()
    if s.startswith(("ell-p:", "ellp:")):
        return Space.ell_p(float(s.split(":", 1)[1]))
    if s == "summing-c0":
        return Space.summing_c0()
    if s == "lin-ell1":
        return Space.lin_ell1()
    if s.startswith("james:"):
        return Space.james(float(s.split(":", 1)[1]))
    if s == "james":
        return Space.james(2.0)
    raise ConfigError(f"unknown space {s!r}")


def parse_vector(s: str) -> np.ndarray:
    s = s.strip()
    if s.startswith("e") and s[1:].isdigit():
        k = int(s[1:])
        v = np.zeros(k)
        v[k - 1] = 1.0
        return v
    try:
        return np.array([float(x) for x in s.split(",") if x.strip() != ""])
    except ValueError as exc:
        raise ConfigError(f"cannot parse vector {s!r}: {exc}") from None


def parse_alphas(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip() != ""]


def _jsonable(obj):
    if isinstance(obj, (ConstantEstimate, AlphaSchedule, Space, BasicSequenceSpec)):
        return _jsonable(obj.to_json())
    if isinstance(obj, cons.AffineMapSpec):
        return _jsonable(obj.to_json())
    if isinstance(obj, harness.OrbitRecord):
        return _jsonable(obj.to_json())
    if isinstance(obj, optim.SearchReport):
        return _jsonable(obj.to_json())
    if isinstance(obj, SimplexPoint):
        return obj.t.tolist()
    if isinstance(obj, CoeffVector):
        return obj.to_list()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def emit_report(outdir: str, payload: dict, csv_tables: dict | None = None) -> None:
    """Write report.json (deterministic apart from generated_at) and CSVs."""
    os.makedirs(outdir, exist_ok=True)
    body = _jsonable(payload)
    body["schema_version"] = SCHEMA_VERSION
    body["backend"] = BACKEND
    body["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    path = os.path.join(outdir, "report.json")
    with open(path, "w") as fh:
        json.dump(body, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    for name, (fieldnames, rows) in (csv_tables or {}).items():
        with open(os.path.join(outdir, name), "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            for row in rows:
                writer.writerow(_jsonable(row))


def _resolve_seq(cfg: dict) -> BasicSequenceSpec:
    space = parse_space(cfg["space"])
    alphas = cfg.get("alphas")
    return from_preset_string(cfg["preset"], space, cfg["N"], alphas=alphas)


def _schedule_for(seq: BasicSequenceSpec, cfg: dict, n: int) -> AlphaSchedule:
    """Schedule from explicit weights when given, else generated from the
    sequence's own certified constants."""
    if cfg.get("alphas"):
        return AlphaSchedule(tuple(cfg["alphas"]))
    K = basis_mod.basis_constant(seq)
    if K.upper is None:
        raise ConfigError("cannot generate a schedule without a basis-constant bound")
    norms = seq.vector_norms()
    return cons.alpha_generate(K.upper, float(norms.min()), float(norms.max()), n)


# -- subcommand implementations ----------------------------------------------


def cmd_norm(cfg):
    space = parse_space(cfg["space"])
    vec = parse_vector(cfg["vec"])
    val = space.norm(vec)
    print(f"{val:.6f}")
    return {"command": "norm", "space": space, "vec": vec.tolist(), "value": val}, False, None


def cmd_basis_constant(cfg):
    seq = _resolve_seq(cfg)
    est = basis_mod.basis_constant(seq)
    print(f"basis constant at N={seq.n}: {est.lower:.9g} (certified={est.certified})")
    return {"command": "basis-constant", "seq": seq, "estimate": est}, False, None


def cmd_dominate(cfg):
    f = from_preset_string(cfg["from_preset"], parse_space(cfg["from_space"]), cfg["N"], cfg.get("alphas"))
    g = from_preset_string(cfg["to_preset"], parse_space(cfg["to_space"]), cfg["N"], cfg.get("alphas"))
    est = basis_mod.domination_constant(f, g)
    print(f"domination constant at N={cfg['N']}: {est.lower:.9g} (certified={est.certified})")
    return {"command": "dominate", "from": f, "to": g, "estimate": est}, False, None


def cmd_equiv(cfg):
    f = from_preset_string(cfg["from_preset"], parse_space(cfg["from_space"]), cfg["N"], cfg.get("alphas"))
    g = from_preset_string(cfg["to_preset"], parse_space(cfg["to_space"]), cfg["N"], cfg.get("alphas"))
    fwd, bwd = basis_mod.equivalence_constants(f, g)
    L = None
    if fwd.upper is not None and bwd.upper is not None:
        L = max(fwd.upper, bwd.upper)
    print(f"equivalence constant at N={cfg['N']}: {L}")
    return {
        "command": "equiv",
        "forward": fwd,
        "backward": bwd,
        "L": L,
        "certified": fwd.certified and bwd.certified,
    }, False, None


def cmd_wide_s(cfg):
    seq = _resolve_seq(cfg)
    est = basis_mod.wide_s_constant(seq)
    print(f"wide-(s) constant at N={seq.n}: {est.lower:.9g}")
    violated = est.note == "NotWideS"
    return {"command": "wide-s", "seq": seq, "estimate": est}, violated, None


def cmd_alpha(cfg):
    K, lo, hi, n = cfg["K"], cfg["inf_norm"], cfg["sup_norm"], cfg["N"]
    if cfg.get("alphas"):
        sched = AlphaSchedule(tuple(cfg["alphas"]))
    else:
        sched = cons.alpha_generate(K, lo, hi, n)
    report = cons.alpha_validate(sched, K, lo, hi)
    print(f"schedule sum={sched.total:.9g}, passed={report['passed']}")
    return {"command": "alpha", "schedule": sched, "validation": report}, not report["passed"], None


def cmd_key_lemma(cfg):
    seq = _resolve_seq(cfg)
    mode = cfg["mode"].upper()
    g = rng.generator(cfg["seed"])
    worst = None
    runs = []
    violations = 0
    for _ in range(cfg["trials"]):
        w = np.sort(g.uniform(0.02, 1.0, size=seq.n))
        rep = cons.scaling_equivalence_check(seq, w, mode=mode, seed=cfg["seed"])
        runs.append({"alpha_1": float(w[0]), "forward": rep["forward"],
                     "backward": rep["backward"], "L": rep["L"], "passed": rep["passed"]})
        if not rep["passed"]:
            violations += 1
        if worst is None or rep["margin"] < worst["margin"]:
            worst = rep
    print(f"key-lemma {mode}: {cfg['trials']} schedules, violations={violations}")
    return {
        "command": "key-lemma",
        "seq": seq,
        "mode": mode,
        "trials": cfg["trials"],
        "seed": cfg["seed"],
        "violations": violations,
        "worst_margin": worst["margin"],
        "runs": runs,
    }, violations > 0, None


def cmd_hj_check(cfg):
    seq = _resolve_seq(cfg)
    rep = cons.monotone_weight_check(seq, cfg["trials"], cfg["seed"])
    print(f"monotone-weight check: max violation {rep['max_violation']:.3e}")
    return {"command": "hj-check", "seq": seq, "result": rep}, not rep["passed"], None


def cmd_perturbation(cfg):
    seq = _resolve_seq(cfg)
    sched = _schedule_for(seq, cfg, seq.n - 1)
    rep = cons.small_perturbation_sum(seq, sched)
    print(f"perturbation sum {rep['sum']:.9g} vs bound {rep['bound']}")
    return {
        "command": "perturbation",
        "seq": seq,
        "schedule": sched,
        "result": rep,
    }, not rep["passed"], None


def cmd_separation(cfg):
    seq = _resolve_seq(cfg)
    g = rng.generator(cfg["seed"])
    n = seq.n
    pairs = []
    violated = False
    floor = None
    for _ in range(cfg["pairs"]):
        while True:
            ka = np.sort(g.choice(np.arange(1, n + 1), size=max(2, n // 2), replace=False))
            le = np.sort(g.choice(np.arange(1, n + 1), size=max(2, n // 2), replace=False))
            if not np.array_equal(ka, le):
                break
        rep = cons.separation_lower_bound(seq, seq, ka.tolist(), le.tolist())
        floor = rep["floor"]
        ok = rep["floor"] is None or rep["direct_term"] >= rep["floor"] - 1e-9
        violated = violated or not ok
        pairs.append({"kappa": ka.tolist(), "ell": le.tolist(),
                      "direct": rep["direct_term"], "ok": ok})
    print(f"separation floor {floor}, pairs={len(pairs)}, violated={violated}")
    return {
        "command": "separation",
        "seq": seq,
        "floor": floor,
        "pairs": pairs,
        "seed": cfg["seed"],
    }, violated, None


def _build_map(cfg, n: int):
    kind = cfg["map"]
    alphas = None
    if kind == "f-main":
        if cfg.get("alphas"):
            alphas = AlphaSchedule(tuple(cfg["alphas"]))
            if alphas.n < n:
                raise ConfigError(f"f-main at N={n} needs {n} schedule terms")
        else:
            space = parse_space(cfg["space"])
            seq = basis_mod.exemplar_preset(space, n)
            alphas = _schedule_for(seq, {}, n)
    return cons.map_build(kind, n, alphas=alphas, j_max=cfg.get("J") or 60), alphas


def cmd_map_build(cfg):
    spec, sched = _build_map(cfg, cfg["N"])
    sums = spec.column_sums()
    print(f"built {spec.kind} at N={spec.n}, band {spec.band}, "
          f"column sums in [{sums.min():.17g}, {sums.max():.17g}]")
    return {"command": "map-build", "map": spec, "schedule": sched}, False, None


def cmd_orbit(cfg):
    start = parse_vector(cfg["start"])
    support = int(np.nonzero(start)[0][-1]) + 1 if np.any(start) else 1
    steps = cfg["steps"]
    band = {"f-main": 1, "f0": 1, "f1": 2, "f2": cfg.get("J") or 60}.get(cfg["map"], 1)
    needed = support + steps * band + 2
    mapspec, sched = _build_map(cfg, needed)
    space = parse_space(cfg["space"])
    rec = harness.picard_orbit(mapspec, SimplexPoint(start), steps, space)
    print("displacements: " + ",".join(f"{d:g}" for d in rec.step_displacements))
    rows = rec.csv_rows()
    fields = list(rows[0].keys()) if rows else ["step", "displacement"]
    return {
        "command": "orbit",
        "map": mapspec.kind,
        "schedule": sched,
        "orbit": rec,
    }, False, {"orbit.csv": (fields, rows)}


def cmd_displacement(cfg):
    space = parse_space(cfg["space"])
    rows = []
    last = None
    sched_out = None
    for n in range(2, cfg["N"] + 1):
        mapspec, sched = _build_map(cfg, n)
        sched_out = sched
        rep = harness.min_displacement(mapspec, space, seed=cfg.get("seed") or 0)
        rows.append({"N": n, "min_displacement": rep.best_value,
                     "certified": rep.meta.get("certified", False)})
        last = rep
    print(f"min displacement at N={cfg['N']}: {last.best_value:.9g}")
    return {
        "command": "displacement",
        "map": cfg["map"],
        "space": space,
        "schedule": sched_out,
        "sweep": rows,
        "final": last,
    }, False, {"displacement.csv": (["N", "min_displacement", "certified"], rows)}


def cmd_lipschitz(cfg):
    space = parse_space(cfg["space"])
    mapspec, sched = _build_map(cfg, cfg["N"])
    est = harness.lipschitz_estimate(
        mapspec, space,
        method=cfg["method"].upper(),
        direction=cfg["direction"].upper(),
        trials=cfg.get("trials") or 200,
        seed=cfg.get("seed") or 0,
    )
    print(f"lipschitz {cfg['direction']} ({cfg['method']}): {est.lower:.9g}")
    return {
        "command": "lipschitz",
        "map": mapspec.kind,
        "schedule": sched,
        "space": space,
        "estimate": est,
    }, False, None


def cmd_uniform_probe(cfg):
    space = parse_space(cfg["space"])
    sched = None
    if cfg["map"] == "f-main":
        seq = basis_mod.exemplar_preset(space, cfg["N"] + cfg["p_max"] + 1)
        sched = _schedule_for(seq, cfg, cfg["N"] + cfg["p_max"] + 1)
    rep = harness.uniform_lipschitz_probe(
        cfg["map"], space, cfg["N"], cfg["p_max"], alphas=sched,
        trials=cfg.get("trials") or 100, seed=cfg.get("seed") or 0,
    )
    print(f"uniform probe: sup over p<= {cfg['p_max']} is {rep['sup']:.9g}, flat={rep['flat']}")
    rows = [{"p": p + 1, "lipschitz": v} for p, v in enumerate(rep["values"])]
    return {
        "command": "uniform-probe",
        "map": cfg["map"],
        "space": space,
        "result": rep,
    }, False, {"lipschitz_vs_p.csv": (["p", "lipschitz"], rows)}


def _check(name, passed, margin, detail=None):
    entry = {"name": name, "passed": bool(passed),
             "margin": None if margin is None else float(margin)}
    if detail is not None:
        entry["detail"] = detail
    return entry


def cmd_verify_all(cfg):
    """The consolidated verification battery for one preset; the acceptance
    entry point. Exit 1 if any checked inequality is violated."""
    preset = cfg["preset"]
    shorthand = {
        "summing": ("summing", "c0-sup"),
        "canonical-ell1": ("canonical", "ell1"),
        "canonical-c0": ("canonical", "c0-sup"),
        "canonical-lin": ("canonical", "lin-ell1"),
    }
    if preset in shorthand:
        preset, space_str = shorthand[preset]
        if cfg.get("space"):
            space_str = cfg["space"]
    else:
        space_str = cfg.get("space") or "c0-sup"
    space = parse_space(space_str)
    n = cfg["N"]
    seed = cfg["seed"]
    tol = 1e-9
    seq = from_preset_string(preset, space, n)
    checks = []

    K = basis_mod.basis_constant(seq)
    checks.append(_check("basis-constant certified", K.certified or K.lower > 0, None,
                         {"value": K.lower, "certified": K.certified}))

    L = basis_mod.wide_s_constant(seq)
    g = rng.generator(seed)
    A = g.standard_normal((2000, seq.n))
    sums = np.abs(A.sum(axis=1))
    norms = seq.norms_of_rows(A)
    wide_margin = float((norms - L.lower * sums).min())
    checks.append(_check("wide-(s) soundness", wide_margin >= -tol, wide_margin,
                         {"L": L.lower}))

    vnorms = seq.vector_norms()
    sched = cons.alpha_generate(K.upper, float(vnorms.min()), float(vnorms.max()), n)
    val = cons.alpha_validate(sched, K.upper, float(vnorms.min()), float(vnorms.max()))
    checks.append(_check("alpha schedule conditions", val["passed"],
                         val["sum_condition"]["margin"], val))

    seq_ext = from_preset_string(preset, space, n + 1)
    pert = cons.small_perturbation_sum(seq_ext, sched)
    checks.append(_check("small-perturbation criterion", pert["passed"],
                         None if pert["bound"] is None else pert["bound"] - pert["sum"], pert))

    zseq = cons.convex_basis(seq_ext, sched)
    znorms = zseq.vector_norms()
    conv_margin = float((znorms - L.lower).min())
    checks.append(_check("convex-basis norms >= wide-(s) constant",
                         conv_margin >= -tol, conv_margin))

    mode = "ENUM"
    try:
        basis_mod.coefficient_ball_vertex_matrix(seq)
    except SeqFppError:
        mode = "SAMPLE"
    kl_worst = np.inf
    kl_viol = 0
    for w in [np.sort(gg.uniform(0.02, 1.0, size=seq.n)) for gg in rng.spawn(seed, 25)]:
        rep = cons.scaling_equivalence_check(seq, w, mode=mode, seed=seed)
        kl_worst = min(kl_worst, rep["margin"])
        kl_viol += 0 if rep["passed"] else 1
    checks.append(_check(f"scaling equivalence ({mode})", kl_viol == 0, kl_worst,
                         {"violations": kl_viol, "trials": 25}))

    hj = cons.monotone_weight_check(seq, 2000, seed)
    checks.append(_check("monotone-weight monotonicity", hj["passed"],
                         -hj["max_violation"], hj))

    g2 = rng.generator(seed + 1)
    resid = max(
        cons.abel_summation_residual(g2.standard_normal(seq.n), np.sort(g2.uniform(0.01, 1.0, seq.n)))
        for _ in range(200)
    )
    checks.append(_check("partial-summation identity", resid <= 1e-12, 1e-12 - resid,
                         {"max_residual": resid}))

    sched_big = cons.alpha_generate(K.upper, float(vnorms.min()), float(vnorms.max()), n + 1)
    fmain = cons.map_build("f-main", n, alphas=sched_big)
    f0 = cons.map_build("f0", n)
    for mp in (fmain, f0):
        ana = harness.fixed_point_solve(mp)
        checks.append(_check(f"fixed-point solve {mp.kind} only zero",
                             ana["only_zero_solution"], None,
                             {"nullspace_dim": ana["nullspace_dim"]}))
        disp = harness.min_displacement(mp, space, seed=seed)
        checks.append(_check(f"min displacement {mp.kind} > 0",
                             disp.best_value > tol, disp.best_value,
                             {"certified": disp.meta.get("certified", False)}))

    ana_upper = cons.convex_basis_equivalence_bound(seq_ext, sched)
    exact = harness.lipschitz_estimate(fmain, space, method="EXACT", direction="FORWARD",
                                       analytic_upper=ana_upper)
    sampled = harness.lipschitz_estimate(fmain, space, method="SAMPLE", direction="FORWARD",
                                         trials=50, seed=seed)
    if exact.certified:
        chain_ok = sampled.lower <= exact.lower + tol and (
            ana_upper is None or exact.lower <= ana_upper + tol
        )
    else:
        chain_ok = True
    checks.append(_check("lipschitz chain sampled <= exact <= analytic", chain_ok,
                         None, {"sampled": sampled.lower, "exact": exact.lower,
                                "analytic": ana_upper, "exact_certified": exact.certified}))

    probe = harness.uniform_lipschitz_probe("f0", space, min(n, 8), 16, seed=seed)
    probe_ok = (not probe["exact"]) or (abs(probe["sup"] - 1.0) <= tol and probe["flat"])
    checks.append(_check("uniform lipschitz of the shift", probe_ok,
                         None if not probe["exact"] else 1.0 + tol - probe["sup"],
                         {"sup": probe["sup"], "flat": probe["flat"], "exact": probe["exact"]}))

    g3 = rng.generator(seed + 2)
    sep_viol = 0
    floor = None
    for _ in range(50):
        while True:
            ka = np.sort(g3.choice(np.arange(1, seq.n + 1), size=max(2, seq.n // 2), replace=False))
            le = np.sort(g3.choice(np.arange(1, seq.n + 1), size=max(2, seq.n // 2), replace=False))
            if not np.array_equal(ka, le):
                break
        rep = cons.separation_lower_bound(seq, seq, ka.tolist(), le.tolist())
        floor = rep["floor"]
        if rep["floor"] is not None and rep["direct_term"] < rep["floor"] - tol:
            sep_viol += 1
    checks.append(_check("separation floor", sep_viol == 0, None,
                         {"floor": floor, "violations": sep_viol, "pairs": 50}))

    violated = not all(c["passed"] for c in checks)
    for c in checks:
        print(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}"
              + (f" (margin {c['margin']:.3e})" if isinstance(c["margin"], float) else ""))
    return {
        "command": "verify-all",
        "preset": preset,
        "space": space,
        "N": n,
        "seed": seed,
        "checks": checks,
    }, violated, None


COMMANDS = {
    "norm": cmd_norm,
    "basis-constant": cmd_basis_constant,
    "dominate": cmd_dominate,
    "equiv": cmd_equiv,
    "wide-s": cmd_wide_s,
    "alpha": cmd_alpha,
    "key-lemma": cmd_key_lemma,
    "hj-check": cmd_hj_check,
    "perturbation": cmd_perturbation,
    "separation": cmd_separation,
    "map-build": cmd_map_build,
    "orbit": cmd_orbit,
    "displacement": cmd_displacement,
    "lipschitz": cmd_lipschitz,
    "uniform-probe": cmd_uniform_probe,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="seqfpp", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, **flags):
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None, help="JSON config file; flags override")
        p.add_argument("--out", type=str, default=None, help="output directory (default $SEQFPP_OUT or ./seqfpp_out)")
        for flag, spec in flags.items():
            p.add_argument(f"--{flag}", **spec)
        return p

    f_int = {"type": int, "default": None}
    f_str = {"type": str, "default": None}
    f_float = {"type": float, "default": None}

    add("norm", space=f_str, vec=f_str)
    add("basis-constant", preset=f_str, space=f_str, N=f_int, alphas=f_str)
    add("dominate", **{"from-preset": f_str, "from-space": f_str,
                       "to-preset": f_str, "to-space": f_str, "N": f_int, "alphas": f_str})
    add("equiv", **{"from-preset": f_str, "from-space": f_str,
                    "to-preset": f_str, "to-space": f_str, "N": f_int, "alphas": f_str})
    add("wide-s", preset=f_str, space=f_str, N=f_int, alphas=f_str)
    add("alpha", K=f_float, **{"inf-norm": f_float, "sup-norm": f_float}, N=f_int, alphas=f_str)
    add("key-lemma", preset=f_str, space=f_str, N=f_int, mode=f_str, trials=f_int, seed=f_int)
    add("hj-check", preset=f_str, space=f_str, N=f_int, trials=f_int, seed=f_int)
    add("perturbation", preset=f_str, space=f_str, N=f_int, alphas=f_str)
    add("separation", preset=f_str, space=f_str, N=f_int, pairs=f_int, seed=f_int)
    add("map-build", map=f_str, N=f_int, J=f_int, alphas=f_str, space=f_str)
    add("orbit", map=f_str, space=f_str, start=f_str, steps=f_int, alphas=f_str)
    add("displacement", map=f_str, space=f_str, N=f_int, alphas=f_str, seed=f_int)
    add("lipschitz", map=f_str, space=f_str, N=f_int, method=f_str, direction=f_str,
        trials=f_int, seed=f_int, alphas=f_str)
    add("uniform-probe", map=f_str, space=f_str, N=f_int, **{"p-max": f_int},
        trials=f_int, seed=f_int)
    add("verify-all", preset=f_str, space=f_str, N=f_int, seed=f_int)
    return ap


DEFAULTS = {
    "norm": {},
    "basis-constant": {"preset": "summing", "space": "c0-sup", "N": 8},
    "dominate": {"N": 8},
    "equiv": {"N": 8},
    "wide-s": {"preset": "summing", "space": "c0-sup", "N": 8},
    "alpha": {"K": 1.0, "inf_norm": 1.0, "sup_norm": 1.0, "N": 20},
    "key-lemma": {"preset": "summing", "space": "c0-sup", "N": 8, "mode": "enum", "trials": 100},
    "hj-check": {"preset": "summing", "space": "c0-sup", "N": 12, "trials": 10000},
    "perturbation": {"preset": "summing", "space": "c0-sup", "N": 20},
    "separation": {"preset": "summing", "space": "c0-sup", "N": 12, "pairs": 100},
    "map-build": {"map": "f0", "N": 10, "space": "c0-sup"},
    "orbit": {"map": "f0", "space": "ell1", "start": "e1", "steps": 5},
    "displacement": {"map": "f0", "space": "ell1", "N": 10},
    "lipschitz": {"map": "f0", "space": "ell1", "N": 8, "method": "exact", "direction": "forward"},
    "uniform-probe": {"map": "f0", "space": "ell1", "N": 8, "p_max": 16},
    "verify-all": {"preset": "summing", "N": 12},
}

REQUIRED = {
    "norm": ("space", "vec"),
    "dominate": ("from_preset", "from_space", "to_preset", "to_space"),
    "equiv": ("from_preset", "from_space", "to_preset", "to_space"),
}


def _merge_config(args: argparse.Namespace) -> dict:
    command = args.command
    ns = vars(args)
    allowed = {k for k in ns if k not in ("command", "config", "out")}
    cfg = dict(DEFAULTS.get(command, {}))
    if args.config:
        with open(args.config) as fh:
            try:
                file_cfg = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise ConfigError("config must be a JSON object")
        for key, value in file_cfg.items():
            norm_key = key.replace("-", "_")
            if norm_key not in allowed:
                raise ConfigError(f"unknown config key {key!r} for {command}")
            cfg[norm_key] = value
    for key in allowed:
        if ns[key] is not None:
            cfg[key] = ns[key]
    if isinstance(cfg.get("alphas"), str):
        cfg["alphas"] = parse_alphas(cfg["alphas"])
    for key in REQUIRED.get(command, ()):
        if cfg.get(key) is None:
            raise ConfigError(f"{command} requires --{key.replace('_', '-')}")
    if command in RANDOMIZED and cfg.get("seed") is None:
        raise ConfigError(f"{command} is randomized: --seed is mandatory")
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    outdir = args.out or os.environ.get("SEQFPP_OUT") or "seqfpp_out"
    try:
        cfg = _merge_config(args)
        payload, violated, csv_tables = COMMANDS[args.command](cfg)
    except (ConfigError, json.JSONDecodeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SeqFppError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    payload["config"] = {k: _jsonable(v) for k, v in cfg.items()}
    try:
        emit_report(outdir, payload, csv_tables)
    except OSError as exc:
        print(f"error: cannot write reports to {outdir}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_VIOLATION if violated else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``cvbqc <subcommand> [options]``.

Subcommands
    verify-identities   run the symbolic identity suite
    run-blind PROGRAM   one blind protocol run; writes transcript.jsonl and report.json
    blindness-test      classical and quantum indistinguishability of two programs
    demo VARIANT        brickwork | hide-graph | hair | schedule

``--config FILE`` loads a JSON config; explicit flags override it.  Every
subcommand writes JSON into ``--out`` (default ``./results``), prints a
human-readable summary and exits 0 iff all of its checks pass.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .algebra import ByproductFrame, ParamVector, word_equal_up_to_byproduct
from .algebra.identities import verify_identities
from .backends import fidelity
from .exceptions import ConfigError, CVBQCError
from .graphs import (
    BrickworkLayout,
    ModeGraph,
    audit_schedule,
    brick_pattern,
    carve_fidelity,
    disconnector_mutual_information,
    hide_graph,
    hiding_report,
    implant_hairs,
    path_graph,
    replay_check,
    single_brick_layout,
    temporal_schedule,
)
from .protocol import (
    ExperimentConfig,
    blindness_experiment,
    brickwork_plan,
    correctness_experiment,
    hair_strategy_plan,
    load_program,
    run_protocol,
    run_twin,
)
from .protocol.experiments import EXACT_TOL

DEMOS = ("brickwork", "hide-graph", "hair", "schedule")
RECONSTRUCTION_TOL = 1e-12

# flag name -> config field; a flag given on the command line wins over the file
OVERRIDES = {
    "backend": str, "omega": float, "cutoff": int, "budget": float, "L": float, "L_theta": float,
    "n_samples": int, "window": float, "strategy": str, "omega_q": float, "bob_path": str, "alpha": float,
}  # fmt: skip


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--seed", type=int, help="unsigned 64-bit seed")
    common.add_argument("--out", help="output directory (default ./results)")
    for name, kind in OVERRIDES.items():
        common.add_argument(f"--{name.replace('_', '-')}", dest=name, type=kind)

    p = argparse.ArgumentParser(prog="cvbqc", description="Continuous-variable blind MBQC toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-identities", parents=[common], help="run the identity suite")
    v.add_argument("--n-random", type=int, default=100, help="random instances per randomised identity")
    v.add_argument("--tol", type=float, default=1e-9)

    r = sub.add_parser("run-blind", parents=[common], help="run the blind protocol on a program file")
    r.add_argument("program", help="program JSON file")
    r.add_argument("--no-twin", action="store_true", help="skip the matched-outcome twin comparison")

    b = sub.add_parser("blindness-test", parents=[common], help="compare the server's view under two programs")
    b.add_argument("--phi-a", default="1,0,0", help="program A as a,b,c")
    b.add_argument("--phi-b", default="0,1,0", help="program B as a,b,c")
    b.add_argument("--L-list", dest="L_list", help="comma-separated L values (increasing)")
    b.add_argument("--n-ks", type=int, help="delta samples per program for the KS tests (default n_samples)")

    d = sub.add_parser("demo", parents=[common], help="build and verify a named construction")
    d.add_argument("variant", choices=DEMOS)
    return p


def _config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    kw = {name: getattr(args, name, None) for name in OVERRIDES}
    kw["seed"] = args.seed
    kw["out"] = args.out
    if getattr(args, "L_list", None):
        kw["L_list"] = tuple(_floats(args.L_list, "L_list"))
    return cfg.with_overrides(**kw)


def _floats(text: str, field: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(field, f"expected comma-separated numbers, got {text!r}") from None


def _vector(text: str, field: str) -> ParamVector:
    vals = _floats(text, field)
    if not 1 <= len(vals) <= 3:
        raise ConfigError(field, "expected 1 to 3 comma-separated numbers")
    return ParamVector(*vals)


def _outdir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.out or "results")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, ParamVector):
        return list(obj)
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _line(ok: bool, text: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] {text}"


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify_identities(args, cfg) -> bool:
    t0 = time.perf_counter()
    results = verify_identities(seed=cfg.seed, n_random=args.n_random, tol=args.tol)
    elapsed = time.perf_counter() - t0
    for r in results:
        print(_line(r.passed, f"{r.name:<28} {r.level:<10} max dev {r.max_deviation:.2e}  ({r.n_checks} checks)"))
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} identities pass in {elapsed:.2f} s")
    _write(_outdir(cfg) / "identities.json", {
        "seed": cfg.seed, "n_random": args.n_random, "tol": args.tol, "elapsed_s": elapsed,
        "all_passed": ok, "identities": [r.as_dict() for r in results],
    })  # fmt: skip
    return ok


def cmd_run_blind(args, cfg) -> bool:
    plan = load_program(args.program, cfg)
    t0 = time.perf_counter()
    res = run_protocol(plan, cfg)
    errs = res.reconstruction_errors()
    report = {
        "config": cfg.to_dict(),
        "strategy": plan.strategy,
        "n_nodes": len(plan.graph.nodes),
        "n_measured": len(plan.graph.order),
        "max_live_modes": res.max_live,
        "outcomes": {str(k): v for k, v in res.outcomes.items()},
        "effective_outcomes": {str(k): v for k, v in res.effective.items()},
        "readouts": {str(k): v for k, v in res.readouts.items()},
        "transcript_pattern": res.transcript.pattern(),
        "max_reconstruction_error": max(errs, default=0.0),
    }
    checks = {"reconstruction": report["max_reconstruction_error"] <= RECONSTRUCTION_TOL}
    if not args.no_twin and res.output is not None:
        twin, logp, readouts = run_twin(plan, cfg, res.effective)
        report["blind_vs_twin_fidelity"] = fidelity(res.output, twin)
        report["twin_log_density"] = logp
        checks["blind_equals_twin"] = report["blind_vs_twin_fidelity"] >= 1 - EXACT_TOL
        checks["readouts_match"] = bool(np.allclose([readouts[k] for k in sorted(readouts)],
                                                    [res.readouts[k] for k in sorted(readouts)]))  # fmt: skip
    report["elapsed_s"] = time.perf_counter() - t0
    report["checks"] = checks
    out = _outdir(cfg)
    res.transcript.save(out / "transcript.jsonl")
    _write(out / "report.json", report)
    print(f"{plan.strategy}: {len(plan.graph.nodes)} qumodes, {len(plan.graph.order)} measurements, "
          f"{res.max_live} live modes max, {report['elapsed_s']:.2f} s")  # fmt: skip
    for name, ok in checks.items():
        detail = ""
        if name == "reconstruction":
            detail = f"max error {report['max_reconstruction_error']:.1e}"
        elif name == "blind_equals_twin":
            detail = f"fidelity {report['blind_vs_twin_fidelity']:.10f}"
        print(_line(ok, f"{name} {detail}".strip()))
    print(f"wrote {out / 'transcript.jsonl'} and {out / 'report.json'}")
    return all(checks.values())


def cmd_blindness_test(args, cfg) -> bool:
    phi_a, phi_b = _vector(args.phi_a, "phi_a"), _vector(args.phi_b, "phi_b")
    if list(cfg.L_list) != sorted(cfg.L_list):
        raise ConfigError("L_list", "must be increasing")
    t0 = time.perf_counter()
    rep = blindness_experiment(phi_a, phi_b, cfg.L_list, cfg.n_samples, cfg, n_ks=args.n_ks)
    rep["elapsed_s"] = time.perf_counter() - t0
    print(f"{'L':>8} {'trace dist':>11} {'cutoff':>7}   KS p-values (a, b, c)")
    for row in rep["rows"]:
        ps = ", ".join(f"{k['pvalue']:.3f}" for k in row["ks"])
        print(f"{row['L']:>8g} {row['trace_distance']:>11.4f} {row['cutoff']:>7d}   {ps}")
    ok_td = rep["trace_distance_decreasing"]
    ok_ks = bool(rep["ks_pass_at_largest_L"])
    print(_line(ok_td, "trace distance strictly decreasing in L"))
    print(_line(ok_ks, f"KS tests pass at L = {cfg.L_list[-1]:g} (alpha {cfg.alpha})"))
    _write(_outdir(cfg) / "blindness.json", rep)
    return ok_td and ok_ks


# --- demos ------------------------------------------------------------------


def demo_brickwork(cfg) -> bool:
    rng = np.random.default_rng(cfg.seed)
    ok, rows = True, []
    gauss = cfg.with_overrides(backend="gaussian", theta_cubic=False)
    for kind in ("sq", "sp", "cx"):
        worst = True
        for _ in range(20):
            v = ParamVector(*rng.uniform(-1, 1, 2), 0.0)
            pat = brick_pattern(kind, v)
            word = pat.word(rng.normal(size=(2, 4)), ByproductFrame(rng.normal(size=2), rng.normal(size=2)))
            worst &= word_equal_up_to_byproduct(word, pat.target())[0]
        v = ParamVector(0.4, 0.3)
        rep = correctness_experiment(brickwork_plan(single_brick_layout(kind, v)), gauss, seeds=range(3), with_direct=False)
        row = {"kind": kind, "symbolic": bool(worst), "blind_equals_twin": rep["all_exact"],
               "min_blind_vs_twin": rep["min_blind_vs_twin"]}  # fmt: skip
        rows.append(row)
        good = row["symbolic"] and row["blind_equals_twin"]
        ok &= good
        print(_line(good, f"brick {kind}: word equals target up to byproducts (20 random draws); "
                          f"blind = twin, min fidelity {row['min_blind_vs_twin']:.10f}"))  # fmt: skip
    layout = BrickworkLayout(4, 8)
    _write(_outdir(cfg) / "brickwork.json", {"layout": {"n_wires": 4, "n_columns": 8, "bricks": layout.bricks()},
                                            "graph": layout.graph().to_dict(), "bricks": rows})  # fmt: skip
    return ok


def demo_hide_graph(cfg) -> bool:
    settings = (1.0, 0.3, 0.1)
    mi = [disconnector_mutual_information(oq) for oq in settings]
    print(f"{'omega_q':>8} {'MI (nats)':>10}")
    for oq, m in zip(settings, mi):
        print(f"{oq:>8g} {m:>10.4f}")
    ok_mi = all(a > b for a, b in zip(mi, mi[1:])) and mi[-1] < 0.05
    print(_line(ok_mi, "mutual information across a disconnector decays below 0.05 nats"))
    host = ModeGraph(nodes=[0, 1, 2, 3], edges={(0, 1): 1, (1, 2): 1, (2, 3): 1}, outputs=[0, 1, 2, 3])
    logical = ModeGraph(nodes=[0, 2, 3], edges={(2, 3): 1}, outputs=[0, 2, 3])
    spec = hide_graph(logical, host, np.random.default_rng(cfg.seed))
    reports = [hiding_report(spec, 0.6, oq) for oq in (1.0, 0.3, 0.1, 0.03)]
    ups = [r["trace_distance_upper"] for r in reports]
    ok_td = all(a > b for a, b in zip(ups, ups[1:]))
    print(_line(ok_td, "host state approaches the logical graph state: "
                       + ", ".join(f"{u:.3f}" for u in ups)))  # fmt: skip
    _write(_outdir(cfg) / "hide_graph.json", {"mutual_information": dict(zip(map(str, settings), mi)),
                                             "spec": spec.to_dict(), "hiding": reports})  # fmt: skip
    return ok_mi and ok_td


def demo_hair(cfg) -> bool:
    settings = (0.5, 0.3, 0.1)
    fids = [carve_fidelity(om) for om in settings]
    print(f"{'omega':>6} {'carve fidelity':>15}")
    for om, f in zip(settings, fids):
        print(f"{om:>6g} {f:>15.4f}")
    ok_carve = all(a < b for a, b in zip(fids, fids[1:]))
    print(_line(ok_carve, "carving a node through its hair converges as the hair squeezing grows"))
    phi = {0: ParamVector(0.3, 0.5), 1: ParamVector(-0.2, 0.1), 2: ParamVector(0.4, -0.7)}
    gauss = cfg.with_overrides(backend="gaussian", theta_cubic=False)
    rep = correctness_experiment(hair_strategy_plan(path_graph(4), phi), gauss, seeds=range(3), with_direct=False)
    print(_line(rep["all_exact"], f"haired 4-path: blind = twin on {rep['n_runs']} seeds"))
    _write(_outdir(cfg) / "hair.json", {"carve_fidelity": dict(zip(map(str, settings), fids)),
                                       "haired_graph": implant_hairs(path_graph(4)).to_dict(),
                                       "protocol": {"all_exact": rep["all_exact"], "min_blind_vs_twin": rep["min_blind_vs_twin"]}})  # fmt: skip
    return ok_carve and rep["all_exact"]


def demo_schedule(cfg) -> bool:
    layout = BrickworkLayout(4, 8)
    g = layout.graph()
    plan = temporal_schedule(g)
    audit = audit_schedule(g, plan)
    print(_line(audit["ok"] and audit["max_cz_per_step"] == 1,
                f"4-wire brickwork: {audit['steps']} steps, {audit['cz_steps']} CZ, one CZ per step, "
                f"{audit['max_live_modes']} live modes max"))  # fmt: skip
    rep = replay_check(path_graph(4), seed=cfg.seed)
    ok_replay = rep["fidelity"] >= 1 - 1e-6 and rep["audit"]["ok"]
    print(_line(ok_replay, f"streamed replay equals batch construction, fidelity {rep['fidelity']:.10f}"))
    _write(_outdir(cfg) / "schedule.json", {"graph": g.to_dict(), "plan": plan, "audit": audit, "replay": rep})
    return audit["ok"] and audit["max_cz_per_step"] == 1 and ok_replay


DEMO_FUNCS = {"brickwork": demo_brickwork, "hide-graph": demo_hide_graph, "hair": demo_hair, "schedule": demo_schedule}


def cmd_demo(args, cfg) -> bool:
    return DEMO_FUNCS[args.variant](cfg)


COMMANDS = {
    "verify-identities": cmd_verify_identities,
    "run-blind": cmd_run_blind,
    "blindness-test": cmd_blindness_test,
    "demo": cmd_demo,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _config(args)
        ok = COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except CVBQCError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Subcommands: classify, certificate, region, simulate, sweep.  Exit codes are
a stable scripting contract: 0 success, 1 negative verification or
classification outcome (including non-Completed runs), 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import certificate as cert_mod
from . import diagnostics, kernels, region, solver
from .model import RegionTag, classify_pe, classify_pp
from .rational import as_fraction

_AMPLITUDE_NOTE = (
    "init preset amplitudes are artifact choices; no reference magnitudes exist"
)


@dataclass(frozen=True)
class SweepSpec:
    base: solver.SimConfig
    alphas: tuple
    ls: tuple
    masses: Optional[tuple]
    workers: int


def _classify(n, alpha, l, mode):
    fn = classify_pp if mode == "pp" else classify_pe
    return fn(n, alpha, l)


def cmd_classify(args) -> int:
    try:
        verdict = _classify(args.n, args.alpha, args.l, args.mode)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = {
        "n": args.n,
        "alpha": args.alpha,
        "l": args.l,
        "mode": args.mode,
        "tag": verdict.tag.value,
        "detail": verdict.detail,
    }
    print(json.dumps(doc, indent=2))
    return 0 if verdict.tag in (RegionTag.THEOREM, RegionTag.PRIOR_RESULT) else 1


def cmd_certificate(args) -> int:
    if args.verify_only is not None:
        try:
            text = Path(args.verify_only).read_text(encoding="utf-8")
            cert = cert_mod.certificate_from_text(text)
        except (OSError, cert_mod.CertificateError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    else:
        for name in ("n", "alpha", "l"):
            if getattr(args, name) is None:
                print(f"error: --{name} is required without --verify-only", file=sys.stderr)
                return 2
        try:
            cert = cert_mod.make_certificate(args.n, args.alpha, args.l, budget=args.budget)
        except cert_mod.CertificateError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    report = cert_mod.verify_certificate(cert)
    text = cert_mod.certificate_to_text(cert, report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    print(text, end="")
    if not report.ok:
        for c in report.failures():
            print(f"failed: {c.name}: {c.detail}", file=sys.stderr)
        return 1
    return 0


def cmd_region(args) -> int:
    try:
        rows = region.region_table(args.n, args.samples)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    region.write_region_csv(rows, args.output)
    print(json.dumps({"n": args.n, "rows": len(rows), "output": str(args.output)}))
    return 0


def _diag_pq(config: solver.SimConfig):
    """Use the admissibility certificate's (p, q) when one exists."""
    mode = "pp" if config.mode is solver.Mode.PP else "pe"
    verdict = _classify(config.n, config.alpha, config.l, mode)
    if verdict.tag is RegionTag.THEOREM and mode == "pp":
        try:
            cert = cert_mod.make_certificate(config.n, config.alpha, config.l)
            return float(cert.p), float(cert.q), "certificate"
        except cert_mod.CertificateError:
            pass
    return 2.0, 1.0, "default"


def _summarize(result: solver.SimResult, config: solver.SimConfig, p, q, pq_source):
    cfg = {k: (v.value if isinstance(v, solver.Mode) else v) for k, v in vars(config).items()}
    return {
        "termination": result.termination.value,
        "wall_time": result.wall_time,
        "steps": result.steps,
        "final_sup_u": float(result.state.u.values.max()),
        "final_sup_v": float(result.state.v.values.max()),
        "meta": {
            "backend": kernels.BACKEND,
            "diag_p": p,
            "diag_q": q,
            "diag_pq_source": pq_source,
            "config": cfg,
            "note": _AMPLITUDE_NOTE,
        },
    }


def _run_and_write(config: solver.SimConfig):
    p, q, src = _diag_pq(config)
    result = solver.run(config, diag_p=p, diag_q=q)
    summary = _summarize(result, config, p, q, src)
    if config.path:
        out = Path(config.path)
        out.mkdir(parents=True, exist_ok=True)
        diagnostics.write_csv(result.records, out / "diagnostics.csv")
        (out / "summary.json").write_text(
            json.dumps(summary, indent=2) + "\n", encoding="utf-8"
        )
    return result, summary


def cmd_simulate(args) -> int:
    try:
        config = solver.load_sim_config(args.config)
        if args.output:
            config = replace(config, path=str(args.output))
        result, summary = _run_and_write(config)
    except (solver.ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(summary, indent=2))
    return 0 if result.termination is solver.Termination.COMPLETED else 1


def load_sweep_spec(path) -> SweepSpec:
    mapping = solver.read_ini(path)
    sweep_raw = mapping.pop("sweep", None)
    if sweep_raw is None:
        raise solver.ConfigError("sweep config needs a [sweep] section")
    base = solver.sim_config_from_mapping(mapping)
    known = {"alpha", "l", "mass", "workers"}
    unknown = set(sweep_raw) - known
    if unknown:
        raise solver.ConfigError(f"unknown keys in [sweep]: {', '.join(sorted(unknown))}")

    def split(key):
        items = tuple(s.strip() for s in sweep_raw[key].split(",") if s.strip())
        if not items:
            raise solver.ConfigError(f"[sweep] {key} must list at least one value")
        for s in items:
            as_fraction(s)  # validate now, fail early
        return items

    for key in ("alpha", "l"):
        if key not in sweep_raw:
            raise solver.ConfigError(f"[sweep] section must grid over {key!r}")
    masses = split("mass") if "mass" in sweep_raw else None
    workers = int(sweep_raw.get("workers", "1"))
    if workers < 1:
        raise solver.ConfigError("[sweep] workers must be at least 1")
    return SweepSpec(
        base=base, alphas=split("alpha"), ls=split("l"), masses=masses, workers=workers
    )


def _point_configs(spec: SweepSpec, out_root: Path):
    points = []
    for a in spec.alphas:
        for l in spec.ls:
            for m in spec.masses or (None,):
                name = f"alpha_{a}_l_{l}".replace("/", ":")
                cfg = replace(
                    spec.base,
                    alpha=float(as_fraction(a)),
                    l=float(as_fraction(l)),
                )
                if m is not None:
                    name += f"_mass_{m}".replace("/", ":")
                    cfg = replace(cfg, mass=float(as_fraction(m)))
                cfg = replace(cfg, path=str(out_root / name))
                points.append((a, l, m, cfg))
    points.sort(key=lambda t: (as_fraction(t[0]), as_fraction(t[1]), as_fraction(t[2] or 0)))
    return points


def _sweep_worker(item):
    a, l, m, cfg = item
    _, summary = _run_and_write(cfg)
    return a, l, m, summary


def cmd_sweep(args) -> int:
    try:
        spec = load_sweep_spec(args.config)
    except solver.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    workers = args.workers if args.workers is not None else spec.workers
    out_root = Path(args.output) if args.output else Path(spec.base.path or "sweep_out")
    out_root.mkdir(parents=True, exist_ok=True)
    points = _point_configs(spec, out_root)
    if workers == 1:
        results = [_sweep_worker(item) for item in points]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_worker, points))
    mode = "pp" if spec.base.mode is solver.Mode.PP else "pe"
    lines = ["alpha,l,verdict,termination,final_sup_u"]
    for a, l, m, summary in results:
        verdict = _classify(spec.base.n, a, l, mode)
        lines.append(
            ",".join(
                (
                    repr(float(as_fraction(a))),
                    repr(float(as_fraction(l))),
                    verdict.tag.value,
                    summary["termination"],
                    f"{summary['final_sup_u']:.17g}",
                )
            )
        )
    (out_root / "aggregate.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(json.dumps({"points": len(points), "output": str(out_root), "workers": workers}))
    return 0


def _fraction_arg(text):
    try:
        as_fraction(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ksbound",
        description="Chemotaxis boundedness toolkit: region classification, "
        "certificates, and zero-flux simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify (n, alpha, l) against the known regions")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--alpha", type=_fraction_arg, required=True)
    c.add_argument("--l", type=_fraction_arg, required=True)
    c.add_argument("--mode", choices=("pp", "pe"), required=True)
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("certificate", help="construct or verify an exponent certificate")
    c.add_argument("--n", type=int)
    c.add_argument("--alpha", type=_fraction_arg)
    c.add_argument("--l", type=_fraction_arg)
    c.add_argument("--budget", type=int, default=64)
    c.add_argument("--output", type=Path, help="also write the document here")
    c.add_argument("--verify-only", type=Path, help="verify an existing document")
    c.set_defaults(func=cmd_certificate)

    c = sub.add_parser("region", help="emit the region-boundary table as CSV")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--samples", type=int, required=True)
    c.add_argument("--output", type=Path, required=True)
    c.set_defaults(func=cmd_region)

    c = sub.add_parser("simulate", help="run one simulation from a config file")
    c.add_argument("--config", type=Path, required=True)
    c.add_argument("--output", type=Path, help="override the [output] path")
    c.set_defaults(func=cmd_simulate)

    c = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    c.add_argument("--config", type=Path, required=True)
    c.add_argument("--output", type=Path, help="override the output root")
    c.add_argument("--workers", type=int, help="override the [sweep] worker count")
    c.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()

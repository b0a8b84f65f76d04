"""Command-line entry point.

    descent-quiver quiver --n 8 --format dot
    descent-quiver kernel --n 10
    descent-quiver relations --n 8
    descent-quiver verify --n 9
    descent-quiver oracle --n 6
    descent-quiver presentation --n 8 --out q8.json

Structured log lines (key=value) go to stderr; the document goes to stdout
or to ``--out``.  The exit status is 0 exactly when every check the command
ran passed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass

from . import __version__

log = logging.getLogger("descent_quiver")

COMMANDS = ("quiver", "kernel", "relations", "verify", "oracle", "presentation")
FORMATS = {
    "quiver": ("dot", "json", "text"),
    "kernel": ("json", "text"),
    "relations": ("json", "text"),
    "verify": ("json", "text"),
    "oracle": ("json", "text"),
    "presentation": ("json", "text"),
}
DEFAULT_CAP = 12
ORACLE_CAP = 8


@dataclass
class RunConfig:
    command: str
    n: int
    out: str | None
    format: str
    parallel: bool
    seed: int
    max_n_override: bool
    corrupt: bool = False


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="descent-quiver", description="Quiver presentation of the descent algebra of S_n.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--n", type=int, required=True, help="degree of the symmetric group")
        s.add_argument("--out", help="write the document here instead of stdout")
        s.add_argument("--format", choices=FORMATS[name], default=FORMATS[name][0])
        s.add_argument("--parallel", action="store_true", help="compute grades in worker processes")
        s.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
        s.add_argument("--max-n-override", action="store_true", help="allow n above the default caps")
        if name == "verify":
            s.add_argument("--corrupt", action="store_true",
                           help="perturb one relation first (negative control; expected to FAIL)")
    return p


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(
        command=args.command, n=args.n, out=args.out, format=args.format,
        parallel=args.parallel, seed=args.seed, max_n_override=args.max_n_override,
        corrupt=getattr(args, "corrupt", False),
    )
    lowest = 0 if cfg.command in ("quiver", "oracle") else 1
    if cfg.n < lowest:
        raise UsageError(f"--n must be at least {lowest} for {cfg.command}")
    cap = ORACLE_CAP if cfg.command == "oracle" else DEFAULT_CAP
    if cfg.n > cap and not cfg.max_n_override:
        raise UsageError(f"--n {cfg.n} exceeds the cap {cap} for {cfg.command}; pass --max-n-override to proceed")
    return cfg


def _kv(event: str, **fields) -> None:
    parts = [f"event={event}"] + [f"{k}={v}" for k, v in fields.items()]
    log.info(" ".join(parts))


def _text(doc, indent=0) -> str:
    """A plain indented rendering of a JSON-like document."""
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{doc}")
    return "\n".join(lines)


def _render(doc, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return _text(doc) + "\n"


# ---------------------------------------------------------------------------
# commands; each returns (document text, ok)

def cmd_quiver(cfg: RunConfig):
    from .quiver import build_quiver, export_dot, quiver_dict, vertex_name
    q = build_quiver(cfg.n)
    isolated = [vertex_name(v) for v in q.isolated()]
    _kv("quiver", n=cfg.n, vertices=len(q.vertices), edges=len(q.edges), isolated="|".join(isolated) or "-")
    if cfg.format == "dot":
        return export_dot(q), True
    doc = quiver_dict(q)
    doc["isolated"] = isolated
    return _render(doc, cfg.format), True


def kernel_report(n: int, parallel: bool = False) -> dict:
    from .linalg import kernel_delta_iota, minimal_generator_count, path_bases
    from .quiver import vertex_name
    bases = path_bases(n)
    K = kernel_delta_iota(n, bases, parallel=parallel)
    total = sum(len(b) for b in bases.values())
    mg = minimal_generator_count(K)
    by_grade = [
        {"source": vertex_name(g[0]), "dest": vertex_name(g[1]), "count": c}
        for g, c in sorted(mg["by_grade"].items())
    ]
    return {
        "n": n,
        "dim_pathalg": total,
        "dim_kernel": K.dim(),
        "dim_quotient": total - K.dim(),
        "minimal_generators": {"total": mg["total"], "by_grade": by_grade},
    }


def cmd_kernel(cfg: RunConfig):
    doc = kernel_report(cfg.n, cfg.parallel)
    ok = doc["dim_quotient"] == 2 ** (cfg.n - 1)
    _kv("kernel", n=cfg.n, dim_pathalg=doc["dim_pathalg"], dim_kernel=doc["dim_kernel"],
        dim_quotient=doc["dim_quotient"], expected=2 ** (cfg.n - 1),
        minimal=doc["minimal_generators"]["total"], status="PASS" if ok else "FAIL")
    return _render(doc, cfg.format), ok


def cmd_relations(cfg: RunConfig):
    from .relations import relations_document
    doc = relations_document(cfg.n, verify=False)
    c = doc["counts"]
    _kv("relations", n=cfg.n, branch=c["branch"], jacobi=c["jacobi"],
        branch_candidates=c["branch_candidates"], jacobi_candidates=c["jacobi_candidates"],
        minimal=c["minimal"], dedup="scalar-within-grade")
    return _render(doc, cfg.format), True


def _corrupted(gens):
    """Scale one term of the first relation with two or more terms."""
    from fractions import Fraction
    from .forest import FormalSum
    out = list(gens)
    for i, x in enumerate(out):
        if len(x) >= 2:
            P = min(x, key=lambda P: P.word)
            y = FormalSum(x)
            y[P] = y[P] * Fraction(3)
            out[i] = y
            break
    return out


def cmd_verify(cfg: RunConfig):
    from .checks import run_property_suite
    from .relations import branch_relations, jacobi_relations, verify_conjecture
    gens = [x for _, _, x in branch_relations(cfg.n)] + [P for _, P in jacobi_relations(cfg.n)]
    if cfg.corrupt:
        gens = _corrupted(gens)
    report = verify_conjecture(cfg.n, gens)
    props = run_property_suite(cfg.seed, n_max=min(cfg.n, 7))
    report["property_suite"] = props
    report["seed"] = cfg.seed
    ok = report["verdict"] == "PASS" and not any(props.values())
    _kv("verify", n=cfg.n, dim_kernel=report["dim_kernel"], dim_ideal=report["dim_ideal"],
        mismatched=len(report["mismatched_grades"]), minimal=report["minimal"],
        conjecture=report["verdict"], properties="PASS" if not any(props.values()) else "FAIL",
        status="PASS" if ok else "FAIL")
    return _render(report, cfg.format), ok


def cmd_oracle(cfg: RunConfig):
    from .coxeter import oracle_report
    doc = oracle_report(cfg.n, seed=cfg.seed)
    expected = 2 ** (cfg.n - 1) if cfg.n >= 1 else 1
    alley = doc["alley_checks"]
    ok = (doc["solomon_closure"] == "PASS" and doc["dim_descent"] == expected
          and all(v == "PASS" for k, v in alley.items() if k != "n"))
    _kv("oracle", n=cfg.n, solomon_closure=doc["solomon_closure"], mode=doc["solomon_mode"].replace(" ", "/"),
        dim_descent=doc["dim_descent"], orbits=alley["orbits"], delta=alley["delta"],
        status="PASS" if ok else "FAIL")
    return _render(doc, cfg.format), ok


def cmd_presentation(cfg: RunConfig):
    from .quiver import build_quiver, export_dot
    from .relations import emit_presentation
    doc = emit_presentation(cfg.n, verify=True)
    doc["quiver_dot"] = export_dot(build_quiver(cfg.n))
    ok = doc["conjecture"] == "PASS"
    c = doc["counts"]
    _kv("presentation", n=cfg.n, branch=c["branch"], jacobi=c["jacobi"], minimal=c["minimal"],
        conjecture=doc["conjecture"], status="PASS" if ok else "FAIL")
    return _render(doc, cfg.format), ok


HANDLERS = {
    "quiver": cmd_quiver,
    "kernel": cmd_kernel,
    "relations": cmd_relations,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "presentation": cmd_presentation,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr, force=True)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    text, ok = HANDLERS[cfg.command](cfg)
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as err:
            print(f"error: cannot write {cfg.out}: {err}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    _kv("done", command=cfg.command, n=cfg.n, ok=ok, seconds=f"{time.perf_counter() - start:.2f}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

"""cherednik-lab command line.

Exit codes: 0 success, 1 verification mismatch, 2 configuration error,
3 internal consistency failure (e.g. generic-rank cross-check).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import asdict, dataclass

from .dunkl import ParameterError, dunkl_apply, make_context
from .form import RankMismatchError, gram_block, rank_kernel
from .gf import FieldError
from .groups import FAMILY_ALIASES, GroupSpec, GroupSpecError, group_data
from .poly import Polynomial
from .series import (
    ReducedSeriesError,
    SeriesError,
    compare_h0_h1,
    dickson_invariants,
    hilbert_L_report,
    reduced_series,
)
from .verify import (
    NamedPointError,
    claims_for,
    named_point,
    run_claims,
    run_conjecture,
    verification_report,
)

SCHEMA = "cherednik-lab/1"
OK, MISMATCH, CONFIG_ERROR, INTERNAL_ERROR = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    family: str | None = None
    n: int | None = None
    q: int | None = None
    t: int = 1
    c: str = "generic"
    max_degree: int | None = None
    format: str = "json"
    out: str | None = None
    seed: int = 0

    def validate(self, need_group: bool = True) -> None:
        if self.format not in ("json", "csv", "table"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.t not in (0, 1):
            raise ConfigError("t must be 0 or 1")
        if self.max_degree is not None and self.max_degree < 0:
            raise ConfigError("max-degree must be nonnegative")
        if need_group:
            if self.family is None or self.n is None or self.q is None:
                raise ConfigError("--family, --n and --q are required")
            try:
                GroupSpec(self.family, self.n, self.q)
            except GroupSpecError as exc:
                raise ConfigError(str(exc)) from exc

    @property
    def canonical_family(self) -> str:
        return FAMILY_ALIASES.get(self.family, self.family)


def parse_c(ctx, text: str):
    """'generic', 'random', a named hyperplane point, or a comma list of field elements."""
    text = text.strip()
    if text in ("generic", "random"):
        return text
    if "=" in text:
        return named_point(ctx, text.lower())
    F = ctx.field
    parts = [x for x in text.split(",") if x.strip()]
    if len(parts) != ctx.m:
        raise ConfigError(f"--c needs {ctx.m} comma-separated values for {ctx.group.spec.label()}")
    try:
        return tuple(F.element(F.parse(x)) for x in parts)
    except (FieldError, ValueError) as exc:
        raise ConfigError(f"cannot parse --c {text!r}: {exc}") from exc


def _context(cfg: RunConfig):
    G = group_data(cfg.canonical_family, cfg.n, cfg.q)
    ctx = make_context(G, cfg.t)
    return G, ctx


def _envelope(command: str, cfg: RunConfig, result) -> dict:
    return {"schema": SCHEMA, "command": command, "config": asdict(cfg), "result": result}


# ---------------------------------------------------------------------------
# rendering


def _table(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(_table(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


def _csv_matrix(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def emit(cfg: RunConfig, docs: list[dict], csv_text: str | None = None) -> None:
    if cfg.format == "json":
        text = "\n".join(json.dumps(d, sort_keys=True) for d in docs) + "\n"
    elif cfg.format == "csv":
        if csv_text is None:
            raise ConfigError("csv output covers matrices only (the form command)")
        text = csv_text
    else:
        text = "\n\n".join(_table(d["result"]) for d in docs) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_reflections(cfg: RunConfig, args) -> int:
    G, _ = _context(cfg)
    emit(cfg, [_envelope("reflections", cfg, G.to_json(with_reflections=args.all))])
    return OK


def _exponent(text: str, n: int) -> tuple[int, ...]:
    try:
        e = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad exponent {text!r}") from exc
    if len(e) != n or any(x < 0 for x in e):
        raise ConfigError(f"exponent needs {n} nonnegative entries")
    return e


def cmd_dunkl(cfg: RunConfig, args) -> int:
    G, ctx = _context(cfg)
    c = parse_c(ctx, cfg.c)
    if c == "random":
        raise ConfigError("dunkl takes generic or explicit c")
    if c != "generic":
        ctx = ctx.specialize(c)
    e = _exponent(args.monomial, ctx.n)
    js = range(ctx.n) if args.j is None else [args.j - 1]
    if any(not 0 <= j < ctx.n for j in js):
        raise ConfigError(f"--j must lie in 1..{ctx.n}")
    f = Polynomial.monomial(ctx.ring, e)
    out = []
    for j in js:
        g = dunkl_apply(ctx, j, f)
        out.append({"j": j + 1, "input": f.to_json(), "output": g.to_json(), "string": str(g)})
    emit(cfg, [_envelope("dunkl", cfg, {"group": G.spec.label(), "results": out})])
    return OK


def _degrees(text: str) -> list[int]:
    try:
        if "-" in text:
            a, b = text.split("-")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad degree range {text!r}") from exc


def cmd_form(cfg: RunConfig, args) -> int:
    G, ctx = _context(cfg)
    c = parse_c(ctx, cfg.c)
    rng = random.Random(cfg.seed)
    docs, csv_parts = [], []
    if c == "random":
        raise ConfigError("form takes generic or explicit c")
    base = ctx if c == "generic" else ctx.specialize(c)
    for i in _degrees(args.degrees):
        blk = gram_block(base, i)
        rep = rank_kernel(blk, "generic" if c == "generic" else "at-c", rng=rng)
        body = blk.to_json()
        body["rank_generic" if c == "generic" else "rank"] = rep.rank
        body["kernel"] = [v.to_json() for v in rep.kernel]
        body["method"] = rep.method
        if rep.point is not None and c == "generic":
            body["kernel_point"] = [str(x) for x in rep.point]
            body["kernel_point_field"] = rep.field.descriptor()
        docs.append(_envelope("form", cfg, body))
        csv_parts.append(f"# degree {i}\n" + _csv_matrix(body["entries"]))
    emit(cfg, docs, "".join(csv_parts))
    return OK


def cmd_hilbert(cfg: RunConfig, args) -> int:
    G, ctx = _context(cfg)
    c = parse_c(ctx, cfg.c)
    run = hilbert_L_report(ctx, c, cfg.max_degree, random.Random(cfg.seed))
    body = run.to_json()
    body["group"] = G.spec.label()
    body["group_order"] = G.order
    if isinstance(c, tuple):
        body["c"] = [str(x) for x in c]
    if cfg.t == 1:
        try:
            h = reduced_series(run.series, G.field.p, G.rank)
            body["reduced"] = h.to_json()
        except ReducedSeriesError as exc:
            body["reduced"] = None
            body["reduced_error"] = exc.reason
    emit(cfg, [_envelope("hilbert", cfg, body)])
    return OK


def cmd_dickson(cfg: RunConfig, args) -> int:
    ds = dickson_invariants(cfg.n, cfg.q)
    body = ds.to_json()
    if not args.polynomials:
        body = {k: v for k, v in body.items() if k not in ("L", "Q")}
    emit(cfg, [_envelope("dickson", cfg, body)])
    return OK


def cmd_verify_tables(cfg: RunConfig, args) -> int:
    results = run_claims(claims_for(args.scope), cfg.seed, args.workers)
    report = verification_report(results)
    report["scope"] = args.scope
    emit(cfg, [_envelope("verify-tables", cfg, report)])
    if report["failing"]:
        print("failing claims: " + ", ".join(report["failing"]), file=sys.stderr)
        return MISMATCH
    return OK


def cmd_orthogonal(cfg: RunConfig, args) -> int:
    results = run_conjecture(args.slow, cfg.seed, args.workers)
    body = {
        "pairs": [r.to_json() for r in results],
        "mismatches": [f"{r.family}({r.n},{r.q})" for r in results if not r.match],
        "slow": args.slow,
    }
    emit(cfg, [_envelope("orthogonal-conjecture", cfg, body)])
    return OK


def cmd_compare_h(cfg: RunConfig, args) -> int:
    G, ctx = _context(cfg)
    out = compare_h0_h1(ctx, args.max_degree0, cfg.max_degree, random.Random(cfg.seed))
    body = {
        "group": G.spec.label(),
        "h0": list(out["h0"].coeffs),
        "h1": list(out["h1"].coeffs),
        "coefficientwise_leq": out["coefficientwise_leq"],
        "equal": out["equal"],
    }
    emit(cfg, [_envelope("compare-h", cfg, body)])
    return OK


COMMANDS = {
    "reflections": (cmd_reflections, True),
    "dunkl": (cmd_dunkl, True),
    "form": (cmd_form, True),
    "hilbert": (cmd_hilbert, True),
    "dickson": (cmd_dickson, False),
    "verify-tables": (cmd_verify_tables, False),
    "orthogonal-conjecture": (cmd_orthogonal, False),
    "compare-h": (cmd_compare_h, True),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="GL, SL, O+, O-, O, Sym")
    common.add_argument("-n", "--n", type=int)
    common.add_argument("-q", "--q", type=int)
    common.add_argument("--t", type=int, default=1)
    common.add_argument("--c", default="generic",
                        help="generic | random | comma list | sum=1 | lsum=-1 | cq+cr=2 | cq+cr=-2")
    common.add_argument("--max-degree", type=int)
    common.add_argument("--format", default="json", choices=("json", "csv", "table"))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")

    parser = argparse.ArgumentParser(prog="cherednik-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("reflections", parents=[common], help="reflections and their conjugacy classes")
    p.add_argument("--all", action="store_true", help="list every reflection")
    p = sub.add_parser("dunkl", parents=[common], help="Dunkl operators applied to a monomial")
    p.add_argument("--monomial", required=True, help="exponent vector, e.g. 3,0")
    p.add_argument("--j", type=int, help="operator index, 1-based (default: all)")
    p = sub.add_parser("form", parents=[common], help="contravariant form blocks")
    p.add_argument("--degrees", default="0-4", help="range a-b or comma list")
    sub.add_parser("hilbert", parents=[common], help="Hilbert series of L(triv)")
    p = sub.add_parser("dickson", parents=[common], help="Dickson invariants of GL_n(F_q)")
    p.add_argument("--polynomials", action="store_true")
    p = sub.add_parser("verify-tables", parents=[common], help="check the GL and SL character tables")
    p.add_argument("--scope", default="ALL", choices=("GL0", "GL1", "SL0", "SL1", "ALL"))
    p.add_argument("--workers", type=int, default=1)
    p = sub.add_parser("orthogonal-conjecture", parents=[common], help="orthogonal group reduced series")
    p.add_argument("--slow", action="store_true", help="include q = 9")
    p.add_argument("--workers", type=int, default=1)
    p = sub.add_parser("compare-h", parents=[common], help="h at t = 0 against reduced h at t = 1")
    p.add_argument("--max-degree0", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CONFIG_ERROR if exc.code else OK
    cfg = RunConfig(args.family, args.n, args.q, args.t, args.c, args.max_degree, args.format, args.out, args.seed)
    func, need_group = COMMANDS[args.command]
    try:
        if args.command == "dickson":
            if cfg.n is None or cfg.q is None:
                raise ConfigError("--n and --q are required")
            cfg.validate(need_group=False)
        else:
            cfg.validate(need_group)
        return func(cfg, args)
    except RankMismatchError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except (ConfigError, GroupSpecError, ParameterError, NamedPointError, SeriesError, FieldError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())

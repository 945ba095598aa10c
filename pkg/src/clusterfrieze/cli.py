"""Command line entry point.

Exit codes: 0 success, 1 engine or validation failure, 2 usage or parse error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .boundary import (
    OutsideRegion,
    PointAddress,
    T_value,
    all_cluster_variables,
    enumerate_points,
    locate_point,
    position_boundary,
    region_positions,
    split_diagonal,
    split_mixed_diagonal,
    to_boundary,
    transpose_boundary,
)
from .checks import check_frieze_values, run_checks
from .frieze import (
    FriezeArray,
    UnsupportedFork,
    compute_frieze,
    fundamental_quiver,
    modelled_quiver,
    part_F,
)
from .laurent import InexactDivision, LaurentPolynomial, NotAPerfectSquare, eval_at, parse_laurent
from .quiver import (
    BudgetExceeded,
    ForkConfiguration,
    InvalidTriangulation,
    NotDynkinAD,
    Quiver,
    QuiverSyntaxError,
    build_lambda_prime,
    classify,
    fork_info,
    initial_seed,
    mutate_seed,
    parse_quiver,
    parse_triangulation,
    quiver_from_triangulation,
)

SCHEMA = 1


class UsageError(Exception):
    pass


class EngineError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    source: str
    fmt: str = "text"
    point: dict[int, Fraction] | None = None
    all_value: Fraction | None = None
    max_rank: int = 8
    columns: int | None = None
    modelled: bool = False
    at: tuple[int, int] | None = None
    normalize_fork: bool = False
    sweep: bool = False
    samples: int = 100
    frieze_file: str | None = None


@dataclass(frozen=True)
class Problem:
    """A user quiver brought to canonical labels, plus the way back."""

    declared: str | None
    quiver: Quiver  # canonical labels
    kind: str
    to_user: dict[int, int]  # canonical vertex -> user vertex

    @property
    def rank(self) -> int:
        return self.quiver.vertex_count

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    def back(self, p: LaurentPolynomial) -> LaurentPolynomial:
        return p.permute(self.to_user)


def _read_source(args) -> str:
    if args.quiver is not None and args.file is not None:
        raise UsageError("give either --quiver or --file, not both")
    if args.quiver is not None:
        return args.quiver
    if args.file is None:
        raise UsageError("a quiver is required (--quiver or --file)")
    if args.file == "-":
        return sys.stdin.read()
    try:
        with open(args.file, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from exc


def _parse_eval(spec: str | None):
    if spec is None:
        return None, None
    point: dict[int, Fraction] = {}
    every = None
    for item in spec.split(","):
        name, sep, value = item.strip().partition("=")
        if not sep:
            raise UsageError(f"bad --eval item {item!r}")
        try:
            x = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad value in {item!r}") from exc
        if x == 0:
            raise UsageError("specialisation values must be nonzero")
        name = name.strip()
        if name == "all":
            every = x
        elif name.startswith("u") and name[1:].isdigit() and int(name[1:]) > 0:
            point[int(name[1:])] = x
        else:
            raise UsageError(f"unknown variable {name!r}")
    return point, every


def _parse_point(spec: str | None):
    if spec is None:
        return None
    try:
        u, v = (int(s) for s in spec.split(","))
    except ValueError as exc:
        raise UsageError(f"--point expects U,V, got {spec!r}") from exc
    return (u, v)


def load_problem(text: str, max_rank: int) -> Problem:
    text = text.strip()
    if not text:
        raise UsageError("empty quiver description")
    try:
        if text[0].isdigit() or '"polygon_size"' in text:
            tri = parse_triangulation(text)
            declared, q = None, quiver_from_triangulation(tri)
        else:
            declared, q = parse_quiver(text)
    except QuiverSyntaxError as exc:
        raise UsageError(str(exc)) from exc
    except InvalidTriangulation as exc:
        raise EngineError(str(exc)) from exc
    if q.vertex_count > max_rank:
        raise BudgetExceeded(f"rank {q.vertex_count} exceeds --max-rank {max_rank}")
    cls = classify(q)
    if declared is not None and declared != str(cls):
        raise EngineError(f"declared {declared} but the quiver is of type {cls}")
    mapping = cls.mapping
    return Problem(declared, q.relabel(mapping), cls.kind, {c: v for v, c in mapping.items()})


def _sorted(values) -> list[LaurentPolynomial]:
    return sorted(values, key=lambda p: p.sort_key())


def _evaluate(p: LaurentPolynomial, cfg: RunConfig) -> Fraction:
    point = dict(cfg.point or {})
    if cfg.all_value is not None:
        for i in range(1, p.rank + 1):
            point.setdefault(i, cfg.all_value)
    try:
        return eval_at(p, point)
    except KeyError as exc:
        raise UsageError(f"--eval leaves {exc.args[0]}") from exc


def _num(x: Fraction) -> str:
    return str(x)


def _show(p: LaurentPolynomial, cfg: RunConfig) -> str:
    return _num(_evaluate(p, cfg)) if cfg.point is not None else p.fraction_str()


# -- commands -----------------------------------------------------------------

def cluster_variables(prob: Problem, normalize_fork: bool = False) -> set[LaurentPolynomial]:
    if prob.kind == "A":
        seed = initial_seed(prob.quiver)
        f = compute_frieze(seed, prob.rank + 3)
        return set(fundamental_quiver(f, 0).values.values())
    seed = initial_seed(prob.quiver)
    if normalize_fork and fork_info(prob.quiver).configuration is ForkConfiguration.MIXED:
        mutated = mutate_seed(seed, 2)
        fresh = initial_seed(mutated.quiver)
        back = mutated[2]  # u2 of the mutated cluster, in the original variables
        return {v.substitute(2, back) for v in all_cluster_variables(fresh)}
    return all_cluster_variables(seed)


def cmd_vars(cfg: RunConfig, prob: Problem) -> str:
    vals = _sorted(prob.back(v) for v in cluster_variables(prob, cfg.normalize_fork))
    if cfg.fmt == "json":
        items = []
        for v in vals:
            item = {"value": v.fraction_str(), "expanded": str(v)}
            if cfg.point is not None:
                item["eval"] = _num(_evaluate(v, cfg))
            items.append(item)
        return _json({"command": "vars", "type": prob.name, "count": len(vals), "variables": items})
    return "\n".join(_show(v, cfg) for v in vals)


def _frieze_for(prob: Problem, columns: int | None) -> FriezeArray:
    return compute_frieze(initial_seed(prob.quiver), columns)


def cmd_frieze(cfg: RunConfig, prob: Problem) -> str:
    f = _frieze_for(prob, cfg.columns)
    u = prob.to_user
    if cfg.modelled:
        if prob.kind != "D":
            raise EngineError("--modelled needs a type D quiver")
        mq = modelled_quiver(part_F(f))
        rows = [(f"{u[1]}*{u[2]}" if lab == 1 else str(u[lab]), lab) for lab in mq.rows]
        cols = range(prob.rank + 1)
        grid = [[prob.back(mq[(k, lab)]) for k in cols] for _, lab in rows]
        names = [r for r, _ in rows]
    else:
        cols = range(f.first_column, f.last_column + 1)
        names = [str(u[i]) for i in range(1, prob.rank + 1)]
        grid = [[prob.back(f[(k, i)]) for k in cols] for i in range(1, prob.rank + 1)]
    if cfg.fmt == "json":
        columns = [[_show(grid[r][c], cfg) for r in range(len(names))] for c in range(len(cols))]
        return _json({"command": "frieze", "type": prob.name, "quiver": _quiver_text(prob),
                      "modelled": cfg.modelled, "rows": names, "columns": columns})
    lines = []
    for name, row in zip(reversed(names), reversed(grid)):
        lines.append(f"{name}: " + " | ".join(_show(v, cfg) for v in row))
    return "\n".join(lines)


def _quiver_text(prob: Problem) -> str:
    u = prob.to_user
    arrows = " ".join(f"{s}>{t}" for s, t in sorted((u[s], u[t]) for s, t in prob.quiver.arrows))
    return f"{prob.name}: {arrows}".rstrip()


def _split(p: PointAddress, value: LaurentPolynomial, conf: ForkConfiguration):
    try:
        return split_mixed_diagonal(value) if conf is ForkConfiguration.MIXED else split_diagonal(value)
    except NotAPerfectSquare as exc:
        raise EngineError(str(exc)) from exc


def _point_record(prob: Problem, p: PointAddress, value, diag: bool, conf, cfg: RunConfig) -> dict:
    rec = {
        "coords": list(p.position),
        "case": p.case.value,
        "word": {"values": [_show(prob.back(v), cfg) for v in p.word.values], "letters": list(p.word.letters)},
        "value": _show(prob.back(value), cfg),
    }
    if diag:
        rec["split"] = [_show(prob.back(x), cfg) for x in _split(p, value, conf)]
    return rec


def _word_text(prob: Problem, word, cfg: RunConfig) -> str:
    out = [_show(prob.back(word.values[0]), cfg)]
    for c, v in zip(word.letters, word.values[1:]):
        out += [c, _show(prob.back(v), cfg)]
    return " ".join(out)


def cmd_boundary(cfg: RunConfig, prob: Problem) -> str:
    if prob.kind != "D":
        raise EngineError("boundary words are built from type D quivers")
    seed = initial_seed(prob.quiver)
    conf = fork_info(prob.quiver).configuration
    lp = build_lambda_prime(seed)
    w = to_boundary(lp.seed)
    F = position_boundary(w)
    tF = transpose_boundary(F)
    where = region_positions(F)
    diag_row = prob.rank + 1
    if cfg.at is not None:
        try:
            points = [locate_point(F, tF, cfg.at)]
        except OutsideRegion as exc:
            raise EngineError(str(exc)) from exc
    else:
        points = enumerate_points(F, tF)
    records = []
    for p in points:
        val = T_value(p)
        diag = where[p.position][1] == diag_row
        records.append((p, val, diag))
    if cfg.fmt == "json":
        doc = {"command": "boundary", "type": prob.name,
               "word": _word_text(prob, w, cfg),
               "F": {"word": F.rendered(), "coords": [list(c) for c in F.coords]},
               "tF": {"word": tF.rendered(), "coords": [list(c) for c in tF.coords]},
               "points": [_point_record(prob, p, v, d, conf, cfg) for p, v, d in records]}
        if prob.to_user != {i: i for i in range(1, prob.rank + 1)}:
            doc["F"]["word"] = _word_text(prob, F.word(), cfg)
            doc["tF"]["word"] = _word_text(prob, tF.word(), cfg)
        return _json(doc)
    lines = []
    if cfg.at is None:
        lines += [f"word: {_word_text(prob, w, cfg)}",
                  f"F:  {' '.join(f'{c[0]},{c[1]}' for c in F.coords)}",
                  f"tF: {' '.join(f'{c[0]},{c[1]}' for c in tF.coords)}"]
    for p, v, d in records:
        line = f"({p.position[0]},{p.position[1]}) {p.case.value}: {_word_text(prob, p.word, cfg)} => {_show(prob.back(v), cfg)}"
        if d:
            a, b = _split(p, v, conf)
            line += f"  [{_show(prob.back(a), cfg)} | {_show(prob.back(b), cfg)}]"
        lines.append(line)
    return "\n".join(lines)


def _load_frieze_file(path: str, max_rank: int) -> tuple[Problem, FriezeArray]:
    try:
        with (sys.stdin if path == "-" else open(path, encoding="utf-8")) as fh:
            doc = json.load(fh)
        prob = load_problem(doc["quiver"], max_rank)
        if doc.get("modelled"):
            raise UsageError("only plain friezes can be checked")
        n = prob.rank
        to_canon = {v: c for c, v in prob.to_user.items()}
        vals = {}
        for k, col in enumerate(doc["columns"]):
            for name, text in zip(doc["rows"], col):
                p = parse_laurent(text, n).permute(to_canon)
                vals[(k, to_canon[int(name)])] = p
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot load frieze fixture: {exc}") from exc
    return prob, FriezeArray(prob.quiver, 0, len(doc["columns"]) - 1, vals)


def cmd_check(cfg: RunConfig, prob: Problem | None) -> tuple[str, bool]:
    reports = []
    if cfg.frieze_file is not None:
        prob, f = _load_frieze_file(cfg.frieze_file, cfg.max_rank)
        reports.append((prob.name, _quiver_text(prob), check_frieze_values(f)))
    else:
        quivers = [prob.quiver]
        if cfg.sweep:
            from .quiver import a_orientations, d_orientations
            quivers = (d_orientations if prob.kind == "D" else a_orientations)(prob.rank)
        for q in quivers:
            label = Problem(None, q, prob.kind, prob.to_user if q is prob.quiver else {i: i for i in range(1, q.vertex_count + 1)})
            reports.append((prob.name, _quiver_text(label), run_checks(initial_seed(q), cfg.samples)))
    ok = all(r.passed for _, _, rs in reports for r in rs)
    if cfg.fmt == "json":
        return _json({"command": "check", "passed": ok, "reports": [
            {"type": name, "quiver": text,
             "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in rs]}
            for name, text, rs in reports]}), ok
    lines = []
    for name, text, rs in reports:
        lines.append(f"# {text}")
        for r in rs:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status} {r.name}" + (f" ({r.detail})" if r.detail else ""))
    lines.append("all checks passed" if ok else "some checks FAILED")
    return "\n".join(lines), ok


def _json(doc: dict) -> str:
    return json.dumps({"schema": SCHEMA, **doc}, indent=2, sort_keys=False)


# -- argument handling ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clusterfrieze",
                                     description="Cluster variables of type A/D seeds from friezes and boundary words.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--quiver", help='quiver such as "D4: 1>3 2>3 3>4", or a triangulation "6: 1-3 1-4 1-5"')
    common.add_argument("--file", help="read the quiver from a file ('-' for stdin)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--eval", dest="eval_spec", metavar="SPEC", help="specialise: all=1 or u1=2,u2=3,...")
    common.add_argument("--max-rank", type=int, default=8, metavar="N", help="refuse quivers of larger rank (exit 3)")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("vars", parents=[common], help="list all cluster variables")
    p.add_argument("--normalize-fork", action="store_true",
                   help="for a mixed fork, compute in the seed mutated at fork vertex 2 and convert back")
    p = sub.add_parser("frieze", parents=[common], help="print the frieze window")
    p.add_argument("--columns", type=int, metavar="K", help="last column to compute")
    p.add_argument("--modelled", action="store_true", help="merge the two fork rows (type D)")
    p = sub.add_parser("boundary", parents=[common], help="boundary words and per-point formula values")
    p.add_argument("--point", metavar="U,V", help="only this lattice point")
    p = sub.add_parser("check", parents=[common], help="run the self-validation suite")
    p.add_argument("--all-orientations", action="store_true", help="repeat for every orientation of the diagram")
    p.add_argument("--samples", type=int, default=100, help="random words per determinant identity")
    p.add_argument("--frieze-file", metavar="PATH", help="check a frieze JSON produced by the frieze command")
    return parser


def _config(args) -> RunConfig:
    point, every = _parse_eval(args.eval_spec)
    if args.command == "check" and args.frieze_file is not None:
        source = ""
    else:
        source = _read_source(args)
    if args.command == "frieze" and args.columns is not None and args.columns < 1:
        raise UsageError("--columns must be at least 1")
    return RunConfig(
        command=args.command,
        source=source,
        fmt=args.format,
        point=None if point is None else point,
        all_value=every,
        max_rank=args.max_rank,
        columns=getattr(args, "columns", None),
        modelled=getattr(args, "modelled", False),
        at=_parse_point(getattr(args, "point", None)),
        normalize_fork=getattr(args, "normalize_fork", False),
        sweep=getattr(args, "all_orientations", False),
        samples=getattr(args, "samples", 100),
        frieze_file=getattr(args, "frieze_file", None),
    )


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Run the CLI and return ``(exit code, stdout text, stderr text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        cfg = _config(args)
        if cfg.command == "check":
            prob = None if cfg.frieze_file else load_problem(cfg.source, cfg.max_rank)
            text, ok = cmd_check(cfg, prob)
            return (0 if ok else 1), text + "\n", ""
        prob = load_problem(cfg.source, cfg.max_rank)
        handler = {"vars": cmd_vars, "frieze": cmd_frieze, "boundary": cmd_boundary}[cfg.command]
        return 0, handler(cfg, prob) + "\n", ""
    except UsageError as exc:
        return 2, "", f"error: {exc}\n"
    except BudgetExceeded as exc:
        return 3, "", f"budget exceeded: {exc}\n"
    except (EngineError, NotDynkinAD, UnsupportedFork, InexactDivision, NotAPerfectSquare, ValueError) as exc:
        return 1, "", f"error: {exc}\n"


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())

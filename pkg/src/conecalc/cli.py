"""Command-line front end.

Every subcommand maps onto one library operation.  Output is exact text
(``table``, the default), canonical JSON, CSV (``walls``, ``slice``) or SVG
(``slice``).  Exit codes: 0 success, 2 bad input, 3 domain error,
4 unreachable target or incomplete enumeration.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import cone, inflation, report, strata
from .errors import ConeCalcError, InputError, ParseError
from .homlattice import (ManifoldDescriptor, adjunction_genus, codim, format_class,
                         max_e_index, pair, parse_class, riemann_index)

FORMATS = ("table", "json", "csv", "svg")
CSV_COMMANDS = {"walls", "slice"}
SVG_COMMANDS = {"slice"}


@dataclass
class CommandConfig:
    command: str
    args: argparse.Namespace
    g: int = 1
    n: int | None = None
    fmt: str = "table"
    output: str | None = None
    strict: bool = False
    bounds: dict = field(default_factory=dict)


class Outcome:
    def __init__(self, data, text=None, csv=None, svg=None, status=0):
        self.data, self.text, self.csv, self.svg, self.status = data, text, csv, svg, status

    def render(self, fmt):
        if fmt == "json":
            return report.canonical_json(self.data)
        if fmt == "csv":
            return self.csv
        if fmt == "svg":
            return self.svg
        return self.text if self.text is not None else report.canonical_json(self.data)


# argument helpers -----------------------------------------------------------

def _vec(text: str) -> cone.AreaVector:
    return cone.parse_vector(text)


def _infer_n(cfg: CommandConfig, class_texts=(), vectors=()) -> int:
    if cfg.n is not None:
        return cfg.n
    for u in vectors:
        return u.n
    return max((max_e_index(t) for t in class_texts), default=0)


def _desc(cfg, class_texts=(), vectors=()) -> ManifoldDescriptor:
    n = _infer_n(cfg, class_texts, vectors)
    for u in vectors:
        if u.n != n:
            raise InputError(f"area vector {cone.format_vector(u)} has n={u.n}, expected {n}")
    return ManifoldDescriptor(cfg.g, n)


def _classes(text: str, n: int) -> list:
    return [parse_class(t, n) for t in text.split(";") if t.strip()]


def _parts(text: str, n: int) -> tuple:
    parts = []
    for item in (t for t in text.split(";") if t.strip()):
        mult, star, body = item.partition("*")
        if star:
            parts.append((parse_class(body, n), int(mult)))
        else:
            parts.append((parse_class(item, n), 1))
    return tuple(parts)


def _subset(text: str) -> tuple:
    return tuple(sorted(int(x) for x in text.split(",") if x.strip())) if text else ()


def _rat(text: str) -> Fraction:
    return cone.parse_rational(text)


def _assignments(items) -> dict:
    out = {}
    for item in items:
        for tok in item.split():
            key, eq, val = tok.partition("=")
            if not eq:
                raise ParseError(f"expected name=value, got {tok!r}")
            out[key] = val
    return out


# handlers -------------------------------------------------------------------

def cmd_pair(cfg):
    a = cfg.args
    desc = _desc(cfg, (a.a, a.b))
    x, y = parse_class(a.a, desc.n), parse_class(a.b, desc.n)
    v = pair(x, y)
    return Outcome({"a": format_class(x), "b": format_class(y), "pair": report.rat(v)}, f"{v}\n")


def _single_int(name, fn):
    def handler(cfg):
        desc = _desc(cfg, (cfg.args.a,))
        A = parse_class(cfg.args.a, desc.n)
        v = fn(A, desc.g)
        return Outcome({"class": format_class(A), "g": desc.g, name: v}, f"{v}\n")
    return handler


cmd_genus = _single_int("genus", adjunction_genus)
cmd_index = _single_int("index", riemann_index)
cmd_codim = _single_int("codim", codim)


def cmd_exceptional(cfg):
    desc = _desc(cfg)
    classes = [format_class(X) for X in cone.exceptional_set(desc)]
    return Outcome({"g": desc.g, "n": desc.n, "exceptional": classes},
                   "".join(c + "\n" for c in classes))


def cmd_cone_check(cfg):
    u = _vec(cfg.args.u)
    desc = _desc(cfg, vectors=(u,))
    rep = cone.cone_contains(u, desc)
    viol = [{"constraint": k, "value": report.rat(v)} for k, v in rep.violations]
    text = rep.status + "\n" + "".join(f"  {k} = {v}\n" for k, v in rep.violations)
    return Outcome({"vector": cone.format_vector(u), "status": rep.status, "violations": viol}, text)


def cmd_reduced_check(cfg):
    u = _vec(cfg.args.u)
    rep = cone.is_reduced(u)
    text = ("reduced" if rep else "not reduced") + (" (on reduction wall)" if rep.on_reduction_wall else "")
    text += "\n" + "".join(f"  {w}\n" for w in rep.witnesses)
    return Outcome({"vector": cone.format_vector(u), "reduced": rep.reduced,
                    "witnesses": list(rep.witnesses), "on_reduction_wall": rep.on_reduction_wall}, text)


def cmd_chamber(cfg):
    u = _vec(cfg.args.u)
    desc = _desc(cfg, vectors=(u,))
    sig = cone.section_candidates(u, desc)
    lo, hi = cone.chamber_interval(u, desc)
    signs = {format_class(D): (cone.area(u, D) > 0) - (cone.area(u, D) < 0)
             for D in cone.reduction_classes(desc.n)}
    data = {
        "vector": cone.format_vector(u),
        "signature": [format_class(A) for A in sig],
        "on_wall": [format_class(A) for A in sig.on_wall],
        "interval": {"lo": report.rat(lo), "hi": report.rat(hi)},
        "reduction_signs": signs,
    }
    text = f"chamber interval: ({lo}, {hi}]\n"
    text += f"signature ({len(sig)} classes):\n" + "".join(f"  {format_class(A)}\n" for A in sig)
    if sig.on_wall:
        text += "on wall:\n" + "".join(f"  {format_class(A)}\n" for A in sig.on_wall)
    return Outcome(data, text)


def cmd_walls(cfg):
    a = cfg.args
    u0 = _vec(a.u0)
    desc = _desc(cfg, vectors=(u0,))
    if a.u1:
        u1 = _vec(a.u1)
        crossings = cone.segment_walls(u0, u1, desc, include_end=a.include_end)

        def point(s):
            return cone.point_on_segment(u0, u1, s)
    elif a.dir and a.smax:
        direction = tuple(_rat(x) for x in a.dir.split(","))
        if len(direction) != desc.n + 1:
            raise InputError(f"--dir needs {desc.n + 1} entries (dmu, dc1..dcn)")
        crossings = cone.ray_walls(u0, direction, _rat(a.smax), desc)

        def point(s):
            return cone.AreaVector(u0.mu + s * direction[0], 1,
                                   tuple(x + s * d for x, d in zip(u0.c, direction[1:])))
    else:
        raise InputError("walls needs --u1, or --dir together with --smax")
    rows = [(report.rat(w.parameter), format_class(w.wall_class), w.kind,
             cone.format_vector(point(w.parameter))) for w in crossings]
    data = {"crossings": [{"parameter": r[0], "class": r[1], "kind": r[2], "point": r[3]}
                          for r in rows]}
    text = report.table(rows, ("s", "class", "kind", "point"))
    buf = "parameter,class,kind,point\n" + "".join(",".join(r) + "\n" for r in rows)
    return Outcome(data, text, csv=buf)


def cmd_slice(cfg):
    a = cfg.args
    fixed = {k: _rat(v) for k, v in _assignments(a.fix).items()}
    window = {}
    for k, v in _assignments(a.window).items():
        lo, colon, hi = v.partition(":")
        if not colon:
            raise ParseError(f"window bounds must be lo:hi, got {v!r}")
        window[k] = (_rat(lo), _rat(hi))
    if cfg.n is None:
        names = set(fixed) | set(window)
        cfg.n = max((int(k[1:]) for k in names if k.startswith("c") and k[1:].isdigit()), default=0)
    desc = _desc(cfg)
    arr = cone.slice_arrangement(desc, fixed, window)
    data = report.slice_to_json(arr)
    csv_text = report.slice_to_csv(arr)
    svg_text = report.slice_to_svg(arr, scale=a.scale)
    if a.write:
        prefix = Path(a.write)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        prefix.with_suffix(".json").write_text(report.canonical_json(data))
        prefix.with_suffix(".csv").write_text(csv_text)
        prefix.with_suffix(".svg").write_text(svg_text)
    rows = [(format_class(ln.wall_class), ln.kind,
             f"{ln.coeffs[0]}*{arr.free[0]} + {ln.coeffs[1]}*{arr.free[1]} + {ln.const} = 0")
            for ln in arr.lines]
    return Outcome(data, report.table(rows, ("class", "kind", "equation")), csv=csv_text, svg=svg_text)


def cmd_inflate(cfg):
    a = cfg.args
    u = _vec(a.u)
    desc = _desc(cfg, (a.z,), (u,))
    z = parse_class(a.z, desc.n)
    v = inflation.inflate_once(u, z, _rat(a.t), cfg.strict)
    if a.normalize:
        v = inflation.normalize_vector(v)
    return Outcome({"start": cone.format_vector(u), "class": format_class(z), "t": a.t,
                    "end": cone.format_vector(v)}, cone.format_vector(v) + "\n")


def _path_outcome(path, extra=None):
    data = report.path_to_json(path)
    if extra:
        data.update(extra)
    rows = [(format_class(s.z), report.rat(s.t)) for s in path.steps]
    text = f"start: {cone.format_vector(path.start)}\n"
    text += report.table(rows, ("class", "t")) if rows else "(no steps)\n"
    text += f"end:   {cone.format_vector(path.normalized_end)}\n"
    return Outcome(data, text)


def cmd_descend(cfg):
    a = cfg.args
    u = _vec(a.u)
    desc = _desc(cfg, vectors=(u,))
    subset = _subset(a.I)
    if a.t is not None:
        t = _rat(a.t)
    elif a.target_mu is not None:
        t = inflation.descent_parameter(u, a.k, subset, _rat(a.target_mu))
    else:
        raise InputError("descend needs --t or --target-mu")
    path = inflation.section_descent(u, a.k, subset, t, desc, cfg.strict)
    lim = inflation.descent_limit(u, a.k, subset)
    return _path_outcome(path, {"limit": report.rat(lim), "t": report.rat(t)})


def cmd_alternate(cfg):
    a = cfg.args
    u = _vec(a.u)
    desc = _desc(cfg, (a.S, a.X), (u,))
    S, X = parse_class(a.S, desc.n), parse_class(a.X, desc.n)
    vecs = inflation.alternating_inflation(u, S, X, a.rounds, desc.g, cfg.strict,
                                           _rat(a.eps) if a.eps else 0)
    E = S + X
    rows = [(r, cone.format_vector(v), report.rat(cone.area(v, E) - cone.area(v, X)))
            for r, v in enumerate(vecs)]
    data = {"E": format_class(E), "S": format_class(S), "X": format_class(X),
            "rounds": [{"round": r, "vector": v, "gap": gap} for r, v, gap in rows]}
    return Outcome(data, report.table(rows, ("round", "vector", "gap")))


def _load_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from None


def cmd_plan(cfg):
    a = cfg.args
    u0, u1 = _vec(a.start), _vec(a.to)
    desc = _desc(cfg, vectors=(u0, u1))
    hints = None
    if a.profile:
        hints = inflation.hints_from_profile(strata.profile_from_json(_load_json(a.profile), desc), desc)
    path = inflation.plan_path(u0, u1, desc, hints, cfg.strict)
    return _path_outcome(path)


def cmd_replay(cfg):
    data = _load_json(cfg.args.path)
    try:
        start = _vec(data["start"])
        n = start.n
        steps = tuple(inflation.InflationStep(parse_class(s["class"], n), _rat(s["t"]))
                      for s in data["steps"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed inflation path: {exc}") from None
    end = inflation.replay(start, steps, cfg.strict)
    out = {"start": cone.format_vector(start), "end": cone.format_vector(end)}
    status = 0
    text = cone.format_vector(end) + "\n"
    if "end" in data:
        recorded = _vec(data["end"])
        out["matches_recorded_end"] = recorded == end
        if recorded != end:
            status = 3
            text += f"mismatch: recorded end is {cone.format_vector(recorded)}\n"
    return Outcome(out, text, status=status)


def _dec_json(dec):
    return [{"class": format_class(c), "mult": m} for c, m in dec.parts]


def _status_json(st):
    if isinstance(st, strata.Embedded):
        return "embedded"
    if isinstance(st, strata.Mild):
        return {"mild": {"S": format_class(st.S), "X": format_class(st.X)}}
    return {"bad": _dec_json(st.dec)}


def cmd_decompose(cfg):
    a = cfg.args
    u = _vec(a.u)
    desc = _desc(cfg, (a.E,), (u,))
    E = parse_class(a.E, desc.n)
    res = strata.enumerate_decompositions(E, u, desc, cfg.bounds["max_parts"], cfg.bounds["coeff_bound"])
    items = [{"parts": _dec_json(d), "status": _status_json(strata.classify_decomposition(d, desc.g))}
             for d in res.decompositions]
    text = "".join(f"{d}\n" for d in res.decompositions)
    text += "complete\n" if res.complete else "INCOMPLETE: enlarge --coeff-bound / --max-parts\n"
    return Outcome({"E": format_class(E), "decompositions": items, "complete": res.complete},
                   text, status=0 if res.complete else 4)


def cmd_classify_dec(cfg):
    a = cfg.args
    desc = _desc(cfg, (a.E, a.parts))
    dec = strata.Decomposition(parse_class(a.E, desc.n), _parts(a.parts, desc.n))
    st = strata.classify_decomposition(dec, desc.g)
    label = type(st).__name__.lower()
    return Outcome({"E": format_class(dec.total), "status": _status_json(st)}, label + "\n")


def cmd_classify_profile(cfg):
    a = cfg.args
    u = _vec(a.u)
    desc = _desc(cfg, vectors=(u,))
    prof = strata.profile_from_json(_load_json(a.profile), desc)
    lab = strata.classify_profile(prof, u, desc)
    wit = format_class(lab.witness) if lab.witness is not None else None
    text = f"{lab.kind} (codim >= {lab.codim_lower_bound})" + (f" witness {wit}" if wit else "") + "\n"
    return Outcome({"kind": lab.kind, "codim_lower_bound": lab.codim_lower_bound, "witness": wit}, text)


def cmd_collection_codim(cfg):
    a = cfg.args
    desc = _desc(cfg, (a.classes,))
    classes = _classes(a.classes, desc.n)
    v = strata.admissible_codim(classes, desc.g)
    return Outcome({"classes": [format_class(c) for c in classes], "codim": v}, f"{v}\n")


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=int, default=1, help="genus of the base (default 1)")
    common.add_argument("--n", type=int, default=None, help="number of blow-ups (inferred when omitted)")
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--output", "-o", help="write output here instead of stdout")
    common.add_argument("--strict", action="store_true", help="open inflation ranges")
    common.add_argument("--coeff-bound", type=int, default=2)
    common.add_argument("--max-parts", type=int, default=4)

    p = argparse.ArgumentParser(
        prog="conecalc",
        description="Exact chamber, inflation and stratum calculations on blown-up ruled surfaces.",
        epilog="exit codes: 0 ok, 2 bad input, 3 domain error, 4 unreachable or incomplete")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, handler, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(handler=handler)
        return sp

    sp = add("pair", cmd_pair, "intersection pairing of two classes")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    for name, h, hp in (("genus", cmd_genus, "adjunction genus"), ("index", cmd_index, "index"),
                        ("codim", cmd_codim, "stratum codimension")):
        add(name, h, hp).add_argument("--a", required=True)
    add("exceptional", cmd_exceptional, "exceptional classes")
    add("cone-check", cmd_cone_check, "symplectic cone membership").add_argument("--u", required=True)
    add("reduced-check", cmd_reduced_check, "reduced-vector test").add_argument("--u", required=True)
    add("chamber", cmd_chamber, "chamber signature and mu-interval").add_argument("--u", required=True)

    sp = add("walls", cmd_walls, "wall crossings along a segment or ray")
    sp.add_argument("--u0", required=True)
    sp.add_argument("--u1")
    sp.add_argument("--dir", help="ray direction dmu,dc1,..,dcn")
    sp.add_argument("--smax", help="ray length")
    sp.add_argument("--include-end", action="store_true", help="report s = 1 too")

    sp = add("slice", cmd_slice, "wall lines in a 2D slice (SVG/CSV/JSON)")
    sp.add_argument("--fix", action="append", default=[], help='e.g. "c2=1/2"')
    sp.add_argument("--window", action="append", default=[], help='e.g. "mu=1:4 c1=0:1"')
    sp.add_argument("--scale", type=int, default=100, help="pixels per unit")
    sp.add_argument("--write", metavar="PREFIX", help="also write PREFIX.svg/.csv/.json")

    sp = add("inflate", cmd_inflate, "inflate once along a class")
    sp.add_argument("--u", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--t", required=True)
    sp.add_argument("--normalize", action="store_true")

    sp = add("descend", cmd_descend, "section inflation with exceptional correction")
    sp.add_argument("--u", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--I", default="", help="comma-separated indices")
    sp.add_argument("--t")
    sp.add_argument("--target-mu")

    sp = add("alternate", cmd_alternate, "alternating inflation along a mild pair")
    sp.add_argument("--u", required=True)
    sp.add_argument("--S", required=True)
    sp.add_argument("--X", required=True)
    sp.add_argument("--rounds", type=int, default=1)
    sp.add_argument("--eps", help="strict-mode shortfall per round")

    sp = add("plan", cmd_plan, "plan an inflation path")
    sp.add_argument("--from", dest="start", required=True)
    sp.add_argument("--to", required=True)
    sp.add_argument("--profile", help="profile JSON restricting available classes")

    add("replay", cmd_replay, "replay an inflation path JSON").add_argument("--path", required=True)

    sp = add("decompose", cmd_decompose, "decompositions of an exceptional class")
    sp.add_argument("--E", required=True)
    sp.add_argument("--u", required=True)

    sp = add("classify-dec", cmd_classify_dec, "embedded / mild / bad")
    sp.add_argument("--E", required=True)
    sp.add_argument("--parts", required=True, help='";"-separated, "m*class" for multiplicity')

    sp = add("classify-profile", cmd_classify_profile, "stratum of a profile")
    sp.add_argument("--profile", required=True)
    sp.add_argument("--u", required=True)

    add("collection-codim", cmd_collection_codim, "codimension of an admissible collection") \
        .add_argument("--classes", required=True, help='";"-separated classes')
    return p


def run(cfg: CommandConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if cfg.fmt == "csv" and cfg.command not in CSV_COMMANDS:
        print(f"error[INPUT]: --format csv is only available for {sorted(CSV_COMMANDS)}", file=stderr)
        return 2
    if cfg.fmt == "svg" and cfg.command not in SVG_COMMANDS:
        print(f"error[INPUT]: --format svg is only available for {sorted(SVG_COMMANDS)}", file=stderr)
        return 2
    try:
        outcome = cfg.args.handler(cfg)
    except ConeCalcError as exc:
        print(f"error[{exc.code}]: {exc}", file=stderr)
        return exc.exit_status
    except ValueError as exc:
        print(f"error[INPUT]: {exc}", file=stderr)
        return 2
    except OSError as exc:
        print(f"error[IO]: {exc}", file=stderr)
        return 2
    text = outcome.render(cfg.fmt)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        stdout.write(text)
    return outcome.status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CommandConfig(command=args.command, args=args, g=args.g, n=args.n, fmt=args.format,
                        output=args.output, strict=args.strict,
                        bounds={"coeff_bound": args.coeff_bound, "max_parts": args.max_parts})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

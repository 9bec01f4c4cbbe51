"""Command-line entry point: ``redge3 <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import cert as certmod
from .constructions import Family, closed_form_expectation, generate
from .engine import (ALPHA, BETA, check_theorem_32, edge_probabilities, expected_steps,
                     render, simulate)
from .graph import DPGError, PolytopeDigraph, parse_dpg, read_annotations, serialize_dpg
from .graph import validate_polytope
from .mk import validate_mihalisin_klee

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class CheckFailed(Exception):
    pass


def frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def q(x: Fraction) -> str:
    """Exact first, decimal second."""
    return f"{x} ({render(x)})"


def _load(path: str) -> tuple[PolytopeDigraph, dict[str, str]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return parse_dpg(text), read_annotations(text)
    except DPGError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _start(g: PolytopeDigraph, ann: dict, given: int | None) -> int:
    s = given if given is not None else int(ann.get("start", g.top))
    if not 0 <= s < g.vertex_count:
        raise InputError(f"start {s} out of range")
    return s


# --- commands -----------------------------------------------------------------

def cmd_gen(a) -> list[str]:
    try:
        g, start = generate(a.family, a.param)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = serialize_dpg(g, {"family": a.family, "param": a.param, "start": start})
    return text.rstrip("\n").split("\n")


def cmd_eval(a) -> list[str]:
    g, ann = _load(a.file)
    E = expected_steps(g)
    s = _start(g, ann, a.start)
    out = [f"E[{v}] = {q(E[v])}" for v in range(g.vertex_count)] if a.all else []
    out += [f"start: {s}", f"E_start: {q(E[s])}"]
    return out


def cmd_probs(a) -> list[str]:
    g, ann = _load(a.file)
    s = _start(g, ann, a.start)
    probs = edge_probabilities(g, s)
    out = [f"{hi} -> {lo}: {p}" for (hi, lo), p in sorted(probs.items(), reverse=True) if p]
    total = sum(probs.values(), Fraction(0))
    E = expected_steps(g)[s]
    out += [f"sum_p: {q(total)}", f"E_start: {q(E)}", f"flow_equals_E: {total == E}"]
    if total != E:
        raise CheckFailed("\n".join(out))
    return out


def cmd_simulate(a) -> list[str]:
    g, ann = _load(a.file)
    s = _start(g, ann, a.start)
    st = simulate(g, s, a.trials, a.seed, a.jobs)
    E = expected_steps(g)[s]
    z = (st.mean - float(E)) / st.stderr if st.stderr > 0 else 0.0
    out = [f"trials: {st.trials}", f"seed: {st.seed}", f"mean: {st.mean:.6f}",
           f"stderr: {st.stderr:.6f}", f"exact: {q(E)}", f"z: {z:.3f}"]
    out += [f"hist {k}: {c}" for k, c in st.histogram.items()]
    return out


def cmd_validate(a) -> list[str]:
    g, _ = _load(a.file)
    rep = validate_mihalisin_klee(g)
    pol = validate_polytope(g)
    out = rep.lines() + [f"polytope_{name.replace(' ', '_')}: {'yes' if ok else 'no'}"
                         for name, ok, _ in pol.checks]
    out.append(f"accepted: {'yes' if rep.accepted else 'no'}")
    if not rep.accepted:
        raise CheckFailed("\n".join(out))
    return out


def _point(a) -> certmod.CertPoint:
    return certmod.CertPoint(a.alpha if a.alpha is not None else ALPHA,
                             a.beta if a.beta is not None else BETA)


def cmd_cert(a) -> list[str]:
    s = certmod.builtin_system()
    if a.action == "show":
        out = [f"{q_.case_label}: {q_} [{q_.source.value}{', implied' if q_.implied else ''}]"
               for q_ in s.inequalities]
        out += [f"{e.case_label}: {e} [flagged implied]" for e in s.extras]
        out.append(f"entries: {len(s)}")
        return out
    if a.action == "check":
        p = _point(a)
        ok, slacks = certmod.is_feasible(s, p)
        out = [f"{q_.case_label}: slack {x}" for q_, x in zip(s.inequalities, slacks)]
        out.append(f"feasible: {'yes' if ok else 'no'}")
        if ok:
            out.append("tight: " + " ".join(certmod.tight_set(s, p)))
        else:
            raise CheckFailed("\n".join(out))
        return out
    obj = a.obj
    p, value = certmod.minimize(s, obj)
    return [f"objective: {obj[0]} {obj[1]}", f"alpha: {p.alpha}", f"beta: {p.beta}",
            f"value: {q(value)}", "tight: " + " ".join(certmod.tight_set(s, p))]


def cmd_bound(a) -> list[str]:
    try:
        b = certmod.upper_bound(a.n, _point(a))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return [f"n: {a.n}", f"upper_bound: {q(b)}"]


def cmd_enumerate(a) -> list[str]:
    from .enumeration import CapExceeded, compute_f
    cap = 10 if a.allow_long else 9
    try:
        res = compute_f(a.facets, jobs=a.jobs, checkpoint=a.checkpoint, cap=cap)
    except CapExceeded as exc:
        raise InputError(f"{exc} (n=10 needs --allow-long)") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ann = dict(line.split(": ", 1) for line in res.lines())
    ann["start"] = res.witness_start
    return serialize_dpg(res.witness, ann).rstrip("\n").split("\n")


def export_dot(g: PolytopeDigraph, ann: dict[str, str]) -> str:
    lines = [f"// {k}: {v}" for k, v in ann.items()]
    lines.append("digraph polytope {")
    for v in range(g.vertex_count):
        lines.append(f'  {v} [label="{v}"];')
    for hi, lo in g.edges():
        lines.append(f"  {hi} -> {lo};")
    lines.append("}")
    return "\n".join(lines)


def cmd_export(a) -> list[str]:
    g, ann = _load(a.file)
    return export_dot(g, ann).split("\n")


# --- reproduction ---------------------------------------------------------------

def load_manifest() -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a provenance comment."""
    text = resources.files("redge3.data").joinpath("manifest.txt").read_text()
    out = {}
    for raw in text.split("\n"):
        line = raw.split("#", 1)[0].strip()
        if line:
            k, v = (x.strip() for x in line.split("=", 1))
            out[k] = v
    return out


SANDWICH_LOWER = Fraction(13445, 10**4)
SANDWICH_UPPER = Fraction(14943, 10**4)
SWEEP_N = (12, 22, 52, 102, 1002, 10002)


def reproduce_lines(fast: bool = False) -> tuple[list[str], list[str]]:
    """Full reproduction; returns (report lines, failed item names)."""
    from .constructions import dual_cyclic, example2, example3
    m = load_manifest()
    out: list[str] = []
    failed: list[str] = []

    def check(name: str, ok: bool, text: str):
        out.append(f"{name} = {text}" + ("" if ok else "  FAILED"))
        if not ok:
            failed.append(name)

    top_n = int(m["dual_cyclic.max_n"]) if not fast else 40
    bad = []
    for n in range(4, top_n + 1):
        E = expected_steps(dual_cyclic(n))
        if any(E[2 * j] + 2 * E[2 * j + 1] != 4 * j + 2 for j in range(n - 3)):
            bad.append(n)
        if max(E[2 * n - 8], E[2 * n - 7]) < closed_form_expectation(Family.DUAL_CYCLIC, n):
            bad.append(n)
    check("dual_cyclic.relation", not bad, f"n=4..{top_n} " + ("ok" if not bad else f"bad {bad}"))

    for k in (2, 3, 5):
        g, s = example2(k)
        E = expected_steps(g)[s]
        check(f"example2 k={k} E", E == closed_form_expectation(Family.EXAMPLE2, k), str(E))
    check("example2 k=2 matches f(10)", expected_steps(example2(2)[0])[example2(2)[1]]
          == Fraction(m["example2.k2"]), m["example2.k2"])
    for k in (1, 2, 3):
        g, s = example3(k)
        E = expected_steps(g)[s]
        ok = E == closed_form_expectation(Family.EXAMPLE3, k)
        if k == 1:
            ok = ok and E == Fraction(m["example3.k1"])
        check(f"example3 k={k} E", ok, str(E))

    # the per-vertex inequality is reported, the global bound is gated
    excess, glob = Fraction(0), []
    for fam, ks in ((Family.DUAL_CYCLIC, range(4, 31)), (Family.EXAMPLE2, range(2, 6)),
                    (Family.EXAMPLE3, range(1, 4))):
        for k in ks:
            r = check_theorem_32(generate(fam, k)[0], ALPHA, BETA)
            excess = max([excess] + [-r.margins[v] for v in r.violations])
            if r.global_violations:
                glob.append(f"{fam.value}:{k}")
    out.append(f"vertex_bound.max_excess = {excess}")
    check("global_bound", not glob, "ok" if not glob else "violated " + " ".join(glob))

    s = certmod.builtin_system()
    p, value = certmod.minimize(s, (1, 2))
    want = tuple(Fraction(x) for x in m["cert.optimum"].split())
    den = (p.alpha.denominator * p.beta.denominator
           // math.gcd(p.alpha.denominator, p.beta.denominator))
    check("cert.optimum", (p.alpha, p.beta, value) == want,
          f"{p.alpha * den}/{den} {p.beta * den}/{den} value {value}")
    tight = certmod.tight_set(s, p)
    check("cert.tight", tight == m["cert.tight"].split(), " ".join(tight))
    check("cert.entries", len(s) == int(m["cert.entries"]), str(len(s)))
    b12 = certmod.upper_bound(12, p)
    check("bound n=12", b12 == Fraction(m["bound.n12"]), str(b12))

    out.append("table: n lower upper")
    for n in SWEEP_N:
        k = (n - 2) // 10
        lower = closed_form_expectation(Family.EXAMPLE3, k)
        upper = certmod.upper_bound(n, p)
        out.append(f"row {n} {q(lower)} {q(upper)}")
        if lower > upper:
            failed.append(f"row {n}")

    slope_lo = Fraction(1721, 1280)
    offset = Fraction(4722, 1280)
    n0 = -(-offset // (slope_lo - SANDWICH_LOWER))  # ceil
    check("sandwich.lower_slope", slope_lo >= SANDWICH_LOWER,
          f"{slope_lo} >= {SANDWICH_LOWER} (holds without slack from n={n0})")
    n = 10**4
    ub = certmod.upper_bound(n, p)
    check("sandwich.upper n=10000", ub <= SANDWICH_UPPER * n,
          f"{q(ub)} <= {SANDWICH_UPPER * n}")
    return out, failed


def cmd_reproduce(a) -> list[str]:
    out, failed = reproduce_lines(fast=a.fast)
    out.append("status: " + ("ok" if not failed else "failed " + ", ".join(failed)))
    if failed:
        raise CheckFailed("\n".join(out))
    return out


# --- parser -----------------------------------------------------------------------

def _add_input(sp: argparse.ArgumentParser) -> None:
    # `--in f.dpg` and a bare positional path are interchangeable
    sp.add_argument("path", nargs="?", help=argparse.SUPPRESS)
    sp.add_argument("--in", dest="file", metavar="FILE.dpg")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="redge3", description="Random Edge on simple 3-polytopes.")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--quiet", action="store_true", help="no report, exit code only")
    # same flags after the command name; SUPPRESS keeps a value given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a family member as DPG")
    g.add_argument("--family", required=True, choices=[f.value for f in Family])
    g.add_argument("--param", required=True, type=int)
    g.set_defaults(func=cmd_gen)

    for name, func, helptext in (("eval", cmd_eval, "exact expected steps"),
                                 ("probs", cmd_probs, "edge traversal probabilities")):
        e = sub.add_parser(name, parents=[common], help=helptext)
        _add_input(e)
        e.add_argument("--start", type=int)
        if name == "eval":
            e.add_argument("--all", action="store_true", help="print E for every vertex")
        e.set_defaults(func=func)

    s = sub.add_parser("simulate", parents=[common], help="seeded Monte Carlo walks")
    _add_input(s)
    s.add_argument("--start", type=int)
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("validate", parents=[common], help="realizability report")
    _add_input(v)
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("cert", parents=[common], help="inequality certificate")
    c.add_argument("action", choices=["show", "check", "solve"])
    c.add_argument("--alpha", type=frac)
    c.add_argument("--beta", type=frac)
    c.add_argument("--obj", type=lambda t: tuple(frac(x) for x in t.split(",")),
                   default=(Fraction(1), Fraction(2)))
    c.set_defaults(func=cmd_cert)

    b = sub.add_parser("bound", parents=[common], help="upper bound on f(n)")
    b.add_argument("--n", required=True, type=int)
    b.add_argument("--alpha", type=frac)
    b.add_argument("--beta", type=frac)
    b.set_defaults(func=cmd_bound)

    en = sub.add_parser("enumerate", parents=[common], help="exhaustive f(n)")
    en.add_argument("--facets", required=True, type=int)
    en.add_argument("--jobs", type=int, default=1)
    en.add_argument("--checkpoint")
    en.add_argument("--allow-long", action="store_true")
    en.set_defaults(func=cmd_enumerate)

    x = sub.add_parser("export", parents=[common], help="export DPG to DOT")
    _add_input(x)
    x.add_argument("--format", choices=["dot"], default="dot")
    x.set_defaults(func=cmd_export)

    r = sub.add_parser("reproduce", parents=[common], help="reproduce every headline number")
    r.add_argument("--fast", action="store_true", help="shorter dual cyclic sweep")
    r.set_defaults(func=cmd_reproduce)
    return p


def _emit(a, lines: list[str]) -> None:
    if a.quiet:
        return
    text = "\n".join(lines) + "\n"
    if a.out:
        Path(a.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if "path" in a and a.file is None:
        a.file = a.path
    if "path" in a and a.file is None:
        print("error: an input file is required (--in FILE.dpg)", file=sys.stderr)
        return EXIT_INPUT
    try:
        lines = a.func(a)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CheckFailed as exc:
        _emit(a, str(exc).split("\n"))
        return EXIT_FAIL
    _emit(a, lines)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Reports are line-oriented ``key: value`` text with stable field order, so
golden files diff cleanly; exactness flags distinguish exact values from
grid lower bounds.  Exit codes: 0 success, 1 named domain error, 2 usage
error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys

from . import lp, pareto, polyhedra, sensitivity, verify
from .core import Problem, parse_problem
from .errors import DomainError
from .rational import Q, parse_rational, parse_vector, qstr
from .sensitivity import ScaledVector


class UsageError(Exception):
    pass


def fmt_vec(v) -> str:
    return "(" + ",".join(qstr(x) for x in v) + ")"


def fmt_vrep(vertices, rays=()) -> str:
    body = "conv{" + ",".join(fmt_vec(v) for v in vertices) + "}"
    if rays:
        body += "+cone{" + ",".join(fmt_vec(r) for r in rays) + "}"
    return body


def fmt_scaled(sv: ScaledVector) -> str:
    return str(sv)


class Report:
    def __init__(self):
        self.lines: list[str] = []

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key}: {value}")

    def emit(self) -> str:
        return "\n".join(self.lines) + "\n"


def _load(path: str, report: Report) -> Problem:
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    report.add("input", path)
    report.add("input-sha256", hashlib.sha256(raw).hexdigest())
    return parse_problem(raw.decode("utf-8"))


def _vec(text: str, label: str):
    try:
        return parse_vector(text)
    except ValueError as exc:
        raise UsageError(f"bad {label} vector {text!r}: {exc}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_analyze(args, report: Report) -> None:
    problem = _load(args.file, report)
    report.add("n", problem.n)
    report.add("q", problem.q)
    report.add("m", problem.m)
    report.add("decision-norm", problem.decision_norm.kind)
    report.add("image-norm", problem.image_norm.kind)
    report.add("nominal", fmt_vec(problem.nominal))
    feas = lp.feasible(problem.rows, problem.nominal)
    report.add("feasible-at-nominal", "yes" if feas else "no")
    if problem.q == 1:
        consistent = lp.dual_consistent(problem.rows, problem.objectives[0])
        report.add("dual-consistent", "yes" if consistent else "no")
    else:
        consistent = lp.positive_weight_exists(problem.rows, problem.objectives)
        report.add("positive-weighting-exists", "yes" if consistent else "no")
    dom = feas and consistent
    report.add("in-dom-s", "yes" if dom else "no")
    if problem.q == 1 and dom:
        outcome = lp.solve(problem.rows, problem.nominal, problem.objectives[0])
        report.add("value-at-nominal", qstr(outcome.value))
    if dom:
        x_anchor, p_anchor = sensitivity.canonical_anchor(problem, problem.nominal)
        report.add("anchor-x", fmt_vec(x_anchor))
        report.add("anchor-p", fmt_vec(p_anchor))


def cmd_eliminate(args, report: Report) -> None:
    problem = _load(args.file, report)
    sys_ = problem.system()
    steps = [("cone", _vec(u, "--cone")) for u in args.cone or []]
    steps += [("span", _vec(u, "--span")) for u in args.span or []]
    if not steps:
        raise UsageError("eliminate needs at least one --cone or --span direction")
    for kind, direction in steps:
        if kind == "cone":
            sys_ = polyhedra.eliminate_cone_direction(sys_, direction)
        else:
            sys_ = polyhedra.eliminate_span_direction(sys_, direction)
        report.add("step", f"{kind} {fmt_vec(direction)}")
        if args.prune:
            detail = polyhedra.remove_redundancy_detailed(sys_)
            for row in detail.dropped_duplicate:
                report.add("dropped-duplicate", str(row))
            for row in detail.dropped_global:
                report.add("dropped-global", str(row))
            sys_ = detail.system
    report.add("rows", len(sys_.rows))
    report.add("consistency-rows", len(sys_.consistency_rows))
    for line in sys_.format_lines():
        report.add("system", line)


def cmd_value_function(args, report: Report) -> None:
    problem = _load(args.file, report)
    vf = sensitivity.lp_value_function(problem)
    report.add("pieces", len(vf.pieces))
    for piece in vf.pieces:
        report.add("piece", str(piece))
    report.add("conditions", len(vf.domain_conditions))
    for cond in vf.domain_conditions:
        report.add("condition", f"0 <= {cond}")
    value = vf.value(problem.nominal)
    report.add("value-at-nominal", "infeasible" if value is None else qstr(value))


def _grid_for(problem: Problem, mode: str, resolution):
    return sensitivity.WeightGrid.build(problem, mode, resolution)


def cmd_subdiff(args, report: Report) -> None:
    problem = _load(args.file, report)
    report.add("target", args.target)
    if args.target == "f":
        if args.anchor_p:
            raise UsageError("--target f takes --anchor-x, not --anchor-p")
        if args.anchor_x:
            anchor = _vec(args.anchor_x, "--anchor-x")
        else:
            anchor = sensitivity.canonical_anchor(problem, problem.nominal)[0]
        report.add("anchor-x", fmt_vec(anchor))
        grid = _grid_for(problem, sensitivity.COMPOSITE_NORMALIZED, args.grid)
        sub = sensitivity.subdiff_F(problem, problem.nominal, anchor, grid)
    else:
        if args.anchor_x:
            raise UsageError("--target p takes --anchor-p, not --anchor-x")
        if args.anchor_p:
            anchor = _vec(args.anchor_p, "--anchor-p")
        else:
            anchor = sensitivity.canonical_anchor(problem, problem.nominal)[1]
        report.add("anchor-p", fmt_vec(anchor))
        grid = _grid_for(problem, sensitivity.IMAGE_NORMALIZED, args.grid)
        sub = sensitivity.subdiff_P(problem, problem.nominal, anchor, grid)
    report.add("grid-mode", sub.grid.mode)
    report.add("grid-resolution", sub.grid.resolution)
    report.add("exactness", sub.exactness)
    active = sub.active_pieces()
    report.add("active-pieces", len(active))
    for piece in active:
        vertices, rays = piece.face.vrep()
        if piece.scale.is_rational:
            s = piece.scale.coeff
            shown = fmt_vrep(sorted(tuple(-v / s for v in vert) for vert in vertices),
                             sorted(tuple(-r for r in ray) for ray in rays))
        else:
            shown = fmt_vrep(sorted(tuple(-x for x in vert) for vert in vertices),
                             sorted(tuple(-x for x in ray) for ray in rays))
            shown += f" / {piece.scale}"
        report.add("piece", f"weight={fmt_vec(piece.weight)} vrep={shown}")


def cmd_modulus(args, report: Report) -> None:
    problem = _load(args.file, report)
    report.add("target", args.target)
    mode = (sensitivity.COMPOSITE_NORMALIZED if args.target == "ef"
            else sensitivity.IMAGE_NORMALIZED)
    grid = _grid_for(problem, mode, args.grid)
    result = sensitivity.lip_modulus(problem, args.target, grid=grid)
    report.add("grid-mode", mode)
    report.add("grid-resolution", result.grid_resolution)
    report.add("exactness", result.exactness)
    if not result.finite:
        report.add("value", "infinite (not Lipschitz-like)")
        return
    tag = "exact" if result.exactness == sensitivity.EXACT else "grid-lower-bound"
    report.add("value", f"{result.value} ({tag})")
    report.add("value-float", repr(result.value_float()))
    report.add("value-squared", qstr(result.value.squared))
    if result.attaining_weight is not None:
        report.add("attaining-weight", fmt_vec(result.attaining_weight))
        report.add("attaining-subgradient", fmt_scaled(result.attaining_subgradient))
    # plot data: one row per active weight, l1-norm of the piece
    if args.target == "ef":
        sub = sensitivity.subdiff_F(problem, problem.nominal,
                                    sensitivity.canonical_anchor(problem, problem.nominal)[0],
                                    grid)
    else:
        sub = sensitivity.subdiff_P(problem, problem.nominal,
                                    sensitivity.canonical_anchor(problem, problem.nominal)[1],
                                    grid)
    report.add("plot-data", "weight l1-norm l1-float")
    for piece in sub.active_pieces():
        piece_max = piece.max_l1()
        if piece_max is None:
            report.add("plot-row", f"{fmt_vec(piece.weight)} infinite inf")
        else:
            report.add("plot-row",
                       f"{fmt_vec(piece.weight)} {piece_max} {float(piece_max)!r}")


def cmd_pareto_check(args, report: Report) -> None:
    problem = _load(args.file, report)
    b = _vec(args.b, "--b")
    x = _vec(args.x, "--x")
    report.add("b", fmt_vec(b))
    report.add("x", fmt_vec(x))
    dominator = pareto.dominating_point(problem, b, x)
    if dominator is None:
        report.add("result", "nondominated")
    else:
        report.add("result", "dominated")
        report.add("dominator", fmt_vec(dominator))
        report.add("dominator-image", fmt_vec(problem.image(dominator)))


def cmd_dominate(args, report: Report) -> None:
    problem = _load(args.file, report)
    b = _vec(args.b, "--b")
    x = _vec(args.x, "--x")
    report.add("b", fmt_vec(b))
    report.add("x", fmt_vec(x))
    report.add("input-image", fmt_vec(problem.image(x)))
    result = pareto.dominate_to_nondominated(problem, b, x)
    report.add("result", fmt_vec(result))
    report.add("result-image", fmt_vec(problem.image(result)))


def cmd_verify(args, report: Report) -> None:
    problem = _load(args.file, report)
    radius = parse_rational(args.radius)
    config = verify.SampleConfig(radius, args.samples, args.seed,
                                 args.denominator_bound)
    report.add("target", args.target)
    report.add("radius", qstr(radius))
    report.add("samples", args.samples)
    report.add("seed", args.seed)
    if args.target == "convexity":
        outcome = verify.convexity_check(problem, config)
        report.add("result", "convex-ok" if outcome.ok else "violated")
        report.add("samples-used", outcome.samples_used)
        report.add("skipped", outcome.skipped)
        if outcome.witness is not None:
            b1, p1, b2, p2, lam = outcome.witness
            report.add("witness", f"{fmt_vec(b1)} {fmt_vec(p1)} "
                                  f"{fmt_vec(b2)} {fmt_vec(p2)} lambda={qstr(lam)}")
        return
    mapping = {"ef": "EF", "ep": "EP", "p": "P"}[args.target]
    x_anchor, p_anchor = sensitivity.canonical_anchor(problem, problem.nominal)
    anchor = x_anchor if mapping == "EF" else p_anchor
    report.add("anchor", fmt_vec(anchor))
    estimate = verify.empirical_lip(problem, mapping, problem.nominal, anchor,
                                    config)
    report.add("estimate", repr(estimate.value))
    report.add("ratio-squared", qstr(estimate.ratio_squared))
    report.add("samples-used", estimate.samples_used)
    report.add("skipped", estimate.skipped)
    if estimate.witness is not None:
        b, b_prime, z = estimate.witness
        report.add("witness-b", fmt_vec(b))
        report.add("witness-b-prime", fmt_vec(b_prime))
        report.add("witness-z", fmt_vec(z))


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paretolip",
        description="Exact stability analysis of RHS-perturbed linear "
                    "multiobjective programs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="domain checks and nominal value")
    p.add_argument("file")

    p = sub.add_parser("eliminate", help="directional eliminations")
    p.add_argument("file")
    p.add_argument("--cone", action="append", metavar="U")
    p.add_argument("--span", action="append", metavar="U")
    p.add_argument("--prune", action="store_true",
                   help="remove redundant rows after each step")

    p = sub.add_parser("value-function", help="piecewise-affine optimal value (q=1)")
    p.add_argument("file")

    p = sub.add_parser("subdiff", help="subdifferential of F or P")
    p.add_argument("file")
    p.add_argument("--target", choices=("f", "p"), required=True)
    p.add_argument("--anchor-x", metavar="X")
    p.add_argument("--anchor-p", metavar="P")
    p.add_argument("--grid", type=int, default=None, metavar="K")

    p = sub.add_parser("modulus", help="Lipschitz modulus")
    p.add_argument("file")
    p.add_argument("--target", choices=("ef", "ep", "p"), required=True)
    p.add_argument("--grid", type=int, default=None, metavar="K")

    p = sub.add_parser("pareto-check", help="nondominance test")
    p.add_argument("file")
    p.add_argument("--b", required=True)
    p.add_argument("--x", required=True)

    p = sub.add_parser("dominate", help="walk a feasible point to the front")
    p.add_argument("file")
    p.add_argument("--b", required=True)
    p.add_argument("--x", required=True)

    p = sub.add_parser("verify", help="Monte-Carlo estimates and checks")
    p.add_argument("file")
    p.add_argument("--target", choices=("ef", "ep", "p", "convexity"),
                   required=True)
    p.add_argument("--radius", default="1/10")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--denominator-bound", type=int, default=64)
    return parser


_HANDLERS = {
    "analyze": cmd_analyze,
    "eliminate": cmd_eliminate,
    "value-function": cmd_value_function,
    "subdiff": cmd_subdiff,
    "modulus": cmd_modulus,
    "pareto-check": cmd_pareto_check,
    "dominate": cmd_dominate,
    "verify": cmd_verify,
}


def run(argv) -> tuple[int, str]:
    """Execute one invocation; returns (exit_code, report_text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (int(exc.code) if exc.code else 0, "")
    report = Report()
    report.add("command", "paretolip " + " ".join(argv))
    try:
        _HANDLERS[args.command](args, report)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2, ""
    except DomainError as exc:
        report.add("status", "error")
        report.add("error", exc.name)
        report.add("message", str(exc))
        return 1, report.emit()
    report.add("status", "ok")
    return 0, report.emit()


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())

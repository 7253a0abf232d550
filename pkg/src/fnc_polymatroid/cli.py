"""
Command-line entry point: fncpm.

Exit codes: 0 success, 1 the checked property fails, 2 input error,
3 search exhausted without a solution, 4 budget exceeded.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .bridge import (
    check_dpn,
    extract_solution,
    find_maps,
    polymatroid_from_solution,
)
from .codec import rates, verify_solution
from .config import Config, set_config
from .constructor import POLICIES, build_network, replay
from .errors import BudgetError, DpnViolationError, FncError, UnverifiedSolutionError
from .formats import (
    dumps,
    load_choices,
    load_log,
    load_map,
    load_matroid,
    load_network,
    load_rank_oracle,
    load_representation,
    load_solution,
    log_to_dict,
    write_json,
)
from .models import Verdict, fraction_str
from .polymatroid import DiscretePolymatroid, Representation, polymatroid_of, random_representation
from .solver import best_average_rate, max_symmetric_rate, search_linear

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_INPUT = 2
EXIT_NONE = 3
EXIT_BUDGET = 4

DEFAULT_SEED = 20240229


class Output:
    """Collects what a command prints so run() can be tested without capturing streams."""

    def __init__(self, pretty: bool):
        self.pretty = pretty
        self.chunks: list[str] = []

    def json(self, data, table: Optional[Callable[[], list[str]]] = None) -> None:
        if self.pretty and table is not None:
            self.chunks.append("\n".join(table()) + "\n")
        else:
            self.chunks.append(dumps(data, pretty=self.pretty))

    def text(self, text: str) -> None:
        self.chunks.append(text if text.endswith("\n") else text + "\n")


def _ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _polymatroid(args) -> DiscretePolymatroid:
    oracle = load_rank_oracle(args.rep or args.poly)
    if isinstance(oracle, Representation):
        return polymatroid_of(oracle)
    return oracle


# ==================== dpm ====================


def cmd_dpm_rank(args, out: Output) -> int:
    oracle = load_rank_oracle(args.rep or args.poly)
    out.json(oracle.rank_of_set(args.subset))
    return EXIT_OK


def cmd_dpm_bases(args, out: Output) -> int:
    d = _polymatroid(args)
    bases = [list(b) for b in d.bases()]
    summary = {"bases": bases, "rank": d.rank_of(), "rho_max": d.rho_max()}
    out.json(summary, lambda: [_vec(b) for b in bases])
    return EXIT_OK


def cmd_dpm_csets(args, out: Output) -> int:
    d = _polymatroid(args)
    indices = [args.index] if args.index is not None else list(range(1, d.r + 1))
    rows = [{"i": i, "c": [list(u) for u in d.c_set(i)]} for i in indices]

    def table() -> list[str]:
        return [f"C_{row['i']}: " + " ".join(_vec(u) for u in row["c"]) for row in rows]

    out.json(rows[0] if args.index is not None else {"csets": rows}, table)
    return EXIT_OK


def cmd_dpm_axioms(args, out: Output) -> int:
    d = _polymatroid(args)
    report = d.validate_axioms()
    out.json(report.to_dict())
    return EXIT_OK if report.valid else EXIT_FAILS


def cmd_dpm_random(args, out: Output) -> int:
    rng = np.random.default_rng(args.seed)
    rep = random_representation(args.q, args.r, args.ambient, rng)
    if args.out:
        write_json(args.out, rep.to_dict())
    out.json(rep.to_dict())
    return EXIT_OK


# ==================== matroid ====================


def cmd_matroid_check(args, out: Output) -> int:
    report = load_matroid(args.matroid).validate()
    out.json(report.to_dict())
    return EXIT_OK if report.valid else EXIT_FAILS


def cmd_matroid_convert(args, out: Output) -> int:
    m = load_matroid(args.matroid)
    report = m.validate()
    if not report.valid:
        out.json(report.to_dict())
        return EXIT_FAILS
    data = m.to_polymatroid().to_dict()
    if args.out:
        write_json(args.out, data)
    out.json(data)
    return EXIT_OK


# ==================== net ====================


def cmd_net_construct(args, out: Output) -> int:
    d = _polymatroid(args)
    choices = load_choices(args.choices) if args.choices else None
    net, f, state = build_network(d, args.basis, policy=args.policy, choices=choices)
    if args.out:
        write_json(args.out, net.to_dict())
    if args.map:
        write_json(args.map, f.to_dict())
    if args.log:
        write_json(args.log, log_to_dict(state.log))
    if args.dot:
        Path(args.dot).write_text(net.to_dot(), encoding="utf-8")
    out.json(net.to_dict())
    return EXIT_OK


def cmd_net_validate(args, out: Output) -> int:
    report = load_network(args.net).validate()
    out.json(report.to_dict())
    return EXIT_OK if report.valid else EXIT_FAILS


def cmd_net_dot(args, out: Output) -> int:
    text = load_network(args.net).to_dot()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    out.text(text)
    return EXIT_OK


def cmd_net_dpn(args, out: Output) -> int:
    net = load_network(args.net)
    oracle = load_rank_oracle(args.rep or args.poly)
    report = check_dpn(net, oracle, load_map(args.map), args.dims, args.edge_dim)
    out.json(report.to_dict())
    return EXIT_OK if report.holds else EXIT_FAILS


def cmd_net_findmap(args, out: Output) -> int:
    net = load_network(args.net)
    oracle = load_rank_oracle(args.rep or args.poly)
    maps = find_maps(net, oracle, args.dims, args.edge_dim, limit=args.limit)
    out.json({"exponential": True, "maps": [f.to_dict()["f"] for f in maps]})
    return EXIT_OK if maps else EXIT_FAILS


def cmd_net_replay(args, out: Output) -> int:
    net, f, _ = replay(load_log(args.log))
    if args.out:
        write_json(args.out, net.to_dict())
    if args.map:
        write_json(args.map, f.to_dict())
    out.json(net.to_dict())
    return EXIT_OK


# ==================== fnc ====================


def cmd_fnc_extract(args, out: Output) -> int:
    net = load_network(args.net)
    rep = load_representation(args.rep)
    sol = extract_solution(net, rep, load_map(args.map), n=args.edge_dim)
    if args.out:
        write_json(args.out, sol.to_dict())
    out.json(sol.to_dict())
    return EXIT_OK


def cmd_fnc_verify(args, out: Output) -> int:
    report = verify_solution(load_network(args.net), load_solution(args.sol))

    def table() -> list[str]:
        if report.verified:
            return ["verified"]
        return [
            f"{f.kind.value} {f.edge or '-'} {f.node or '-'} {f.detail}" for f in report.failures
        ]

    out.json(report.to_dict(witnesses=args.witnesses), table)
    return EXIT_OK if report.verified else EXIT_FAILS


def cmd_fnc_rates(args, out: Output) -> int:
    report = rates(load_network(args.net), load_solution(args.sol))
    out.json(report.to_dict())
    return EXIT_OK


def _search_exit(verdict: Verdict) -> int:
    return {
        Verdict.FOUND: EXIT_OK,
        Verdict.EXHAUSTED_NONE: EXIT_NONE,
        Verdict.BUDGET_EXCEEDED: EXIT_BUDGET,
    }[verdict]


def cmd_fnc_search(args, out: Output) -> int:
    net = load_network(args.net)
    outcome = search_linear(
        net,
        args.dims,
        args.edge_dim,
        args.q,
        budget=args.budget,
        jobs=args.jobs,
        reduce=not args.unreduced,
    )
    if args.out and outcome.solution is not None:
        write_json(args.out, outcome.solution.to_dict())

    def table() -> list[str]:
        return [
            f"verdict   {outcome.verdict.value} (linear)",
            f"cell      k={_vec(outcome.k)} n={outcome.n} q={outcome.q}",
            f"examined  {outcome.examined} of {outcome.space_size}",
        ]

    out.json(outcome.to_dict(), table)
    return _search_exit(outcome.verdict)


def _grid_exit(cells, found: bool) -> int:
    if found:
        return EXIT_OK
    if any(c.verdict == Verdict.BUDGET_EXCEEDED for c in cells):
        return EXIT_BUDGET
    return EXIT_NONE


def _cell_rows(cells) -> list[str]:
    return [
        f"{_vec(c.k)};{c.n}  {fraction_str(c.average):>6}  {c.verdict.value}" for c in cells
    ]


def cmd_fnc_capacity(args, out: Output) -> int:
    net = load_network(args.net)
    table = max_symmetric_rate(
        net, args.q, args.k_max, args.n_max, budget=args.budget, jobs=args.jobs
    )
    best = fraction_str(table.best) if table.best is not None else "none"
    footer = f"best symmetric (linear): {best}"
    out.json(table.to_dict(), lambda: _cell_rows(table.cells) + [footer])
    return _grid_exit(table.cells, table.best is not None)


def cmd_fnc_average(args, out: Output) -> int:
    net = load_network(args.net)
    result = best_average_rate(
        net, args.q, args.dim_max, args.n_max, budget=args.budget, jobs=args.jobs
    )
    if args.out and result.solution is not None:
        write_json(args.out, result.solution.to_dict())
    best = fraction_str(result.best.average) if result.best is not None else "none"
    footer = f"best average (linear): {best}"
    out.json(result.to_dict(), lambda: _cell_rows(result.cells) + [footer])
    return _grid_exit(result.cells, result.best is not None)


def cmd_fnc_frompoly(args, out: Output) -> int:
    rep, f = polymatroid_from_solution(load_network(args.net), load_solution(args.sol))
    if args.out:
        write_json(args.out, rep.to_dict())
    if args.map_out:
        write_json(args.map_out, f.to_dict())
    out.json({"representation": rep.to_dict(), "map": f.to_dict()["f"]})
    return EXIT_OK


# ==================== Parser ====================


def _oracle_source(p: argparse.ArgumentParser, required: bool = True) -> None:
    group = p.add_mutually_exclusive_group(required=required)
    group.add_argument("--rep", help="representation file")
    group.add_argument("--poly", help="rank-table file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fncpm",
        description="Discrete polymatroids and linear fractional network coding",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--pretty", action="store_true", help="human-readable output")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    parser.add_argument("--config", type=Path, help="configuration file")
    groups = parser.add_subparsers(dest="group", required=True)

    # dpm
    dpm = groups.add_parser("dpm", help="discrete polymatroids").add_subparsers(
        dest="command", required=True
    )
    p = dpm.add_parser("rank", help="rank of a subset")
    _oracle_source(p)
    p.add_argument("--subset", type=_ints, required=True, help='e.g. "1,3" or ""')
    p.set_defaults(func=cmd_dpm_rank)

    p = dpm.add_parser("bases", help="basis vectors")
    _oracle_source(p)
    p.set_defaults(func=cmd_dpm_bases)

    p = dpm.add_parser("csets", help="C-sets of the excluded vectors")
    _oracle_source(p)
    p.add_argument("--index", type=int)
    p.set_defaults(func=cmd_dpm_csets)

    p = dpm.add_parser("axioms", help="check the rank axioms")
    _oracle_source(p)
    p.set_defaults(func=cmd_dpm_axioms)

    p = dpm.add_parser("random", help="random representation")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ambient", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dpm_random)

    # matroid
    mat = groups.add_parser("matroid", help="matroids").add_subparsers(
        dest="command", required=True
    )
    p = mat.add_parser("check", help="check the independent-set axioms")
    p.add_argument("--matroid", required=True)
    p.set_defaults(func=cmd_matroid_check)

    p = mat.add_parser("convert", help="rank table of the matroid's polymatroid")
    p.add_argument("--matroid", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_matroid_convert)

    # net
    net = groups.add_parser("net", help="networks").add_subparsers(dest="command", required=True)
    p = net.add_parser("construct", help="build a network from a polymatroid and a basis")
    _oracle_source(p)
    p.add_argument("--basis", type=_ints, required=True)
    p.add_argument("--policy", choices=POLICIES)
    p.add_argument("--choices", help="choices file for the select policy")
    p.add_argument("--out")
    p.add_argument("--dot")
    p.add_argument("--map")
    p.add_argument("--log")
    p.set_defaults(func=cmd_net_construct)

    p = net.add_parser("validate", help="check network invariants")
    p.add_argument("--net", required=True)
    p.set_defaults(func=cmd_net_validate)

    p = net.add_parser("dot", help="Graphviz export")
    p.add_argument("--net", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_net_dot)

    p = net.add_parser("dpn", help="check the discrete-polymatroidal conditions")
    p.add_argument("--net", required=True)
    _oracle_source(p)
    p.add_argument("--map", required=True)
    p.add_argument("--dims", type=_ints, required=True)
    p.add_argument("--edge-dim", type=int, required=True)
    p.set_defaults(func=cmd_net_dpn)

    p = net.add_parser("findmap", help="brute-force map search (exponential)")
    p.add_argument("--net", required=True)
    _oracle_source(p)
    p.add_argument("--dims", type=_ints, required=True)
    p.add_argument("--edge-dim", type=int, required=True)
    p.add_argument("--limit", type=int)
    p.set_defaults(func=cmd_net_findmap)

    p = net.add_parser("replay", help="rebuild a network from a construction log")
    p.add_argument("--log", required=True)
    p.add_argument("--out")
    p.add_argument("--map")
    p.set_defaults(func=cmd_net_replay)

    # fnc
    fnc = groups.add_parser("fnc", help="network code solutions").add_subparsers(
        dest="command", required=True
    )
    p = fnc.add_parser("extract", help="solution from a representation and a map")
    p.add_argument("--rep", required=True)
    p.add_argument("--net", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--edge-dim", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fnc_extract)

    p = fnc.add_parser("verify", help="check a solution")
    p.add_argument("--net", required=True)
    p.add_argument("--sol", required=True)
    p.add_argument("--witnesses", action="store_true", help="include decoders and local maps")
    p.set_defaults(func=cmd_fnc_verify)

    p = fnc.add_parser("rates", help="rates of a verified solution")
    p.add_argument("--net", required=True)
    p.add_argument("--sol", required=True)
    p.set_defaults(func=cmd_fnc_rates)

    p = fnc.add_parser("search", help="bounded search for a linear solution")
    p.add_argument("--net", required=True)
    p.add_argument("--dims", type=_ints, required=True)
    p.add_argument("--edge-dim", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--budget", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--unreduced", action="store_true", help="enumerate every local matrix")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fnc_search)

    p = fnc.add_parser("capacity", help="symmetric rates over a bounded grid")
    p.add_argument("--net", required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_fnc_capacity)

    p = fnc.add_parser("average", help="best average rate over a bounded grid")
    p.add_argument("--net", required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--dim-max", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fnc_average)

    p = fnc.add_parser("frompoly", help="polymatroid of a verified solution")
    p.add_argument("--net", required=True)
    p.add_argument("--sol", required=True)
    p.add_argument("--out")
    p.add_argument("--map-out")
    p.set_defaults(func=cmd_fnc_frompoly)

    return parser


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def execute(argv: Sequence[str]) -> tuple[int, str]:
    """Run one command; returns the exit code and everything written to stdout."""
    parser = build_parser()
    args = parser.parse_args(list(argv))
    _configure_logging(args.verbose)
    if args.config is not None:
        set_config(Config.load(args.config))

    out = Output(pretty=args.pretty)
    try:
        code = args.func(args, out)
    except DpnViolationError as e:
        out.json(e.report.to_dict())
        code = EXIT_FAILS
    except UnverifiedSolutionError as e:
        out.json(e.report.to_dict())
        code = EXIT_FAILS
    except BudgetError as e:
        print(f"fncpm: {e} (required {e.required}, budget {e.budget})", file=sys.stderr)
        code = EXIT_BUDGET
    except FncError as e:
        print(f"fncpm: error: {e}", file=sys.stderr)
        code = EXIT_INPUT
    return code, "".join(out.chunks)


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, text = execute(argv)
    except SystemExit as e:
        # argparse usage errors
        return EXIT_INPUT if e.code else EXIT_OK
    sys.stdout.write(text)
    sys.stdout.flush()
    return code


def main() -> None:
    """Main entry point."""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.info("Interrupted")
        sys.exit(130)

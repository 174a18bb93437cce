"""Command-line front end.

Machine-readable results go to stdout (or ``-o``) as JSON, a one-line human
summary goes to stderr. Exit status: 0 on success, 2 on a validated failure
(a structured report is still written), 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

from .connectivity import connectivity
from .engine import EngineConfig, EngineError, k_hamilton_cycles, verify_certificate
from .extremal import verify_extremal_claims
from .generators import gen_extremal, gen_planted, gen_random, gen_rotational, gen_transitive
from .graph import TournamentFormatError, read_tournament, to_text
from .hamilton import NotStronglyConnected, hamilton_cycle_camion, validate_cycle
from .linkage import LinkageError, link, link_internally_disjoint


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


@dataclass
class CommandConfig:
    subcommand: str
    params: dict

    def echo(self) -> dict:
        return asdict(self)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TOURNEY_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"TOURNEY_SEED must be an integer, got {env!r}") from None


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pairs(text: str) -> list[tuple[int, int]]:
    try:
        return [tuple(int(v) for v in item.split(":")) for item in text.split(",") if item]  # type: ignore[misc]
    except ValueError:
        raise UsageError(f"pairs must look like 0:5,3:7, got {text!r}") from None


def cmd_gen(args, cfg: CommandConfig) -> int:
    seed = _seed(args)
    cfg.params["seed"] = seed
    kind = args.type
    if kind == "random":
        T = gen_random(_need(args.n, "--n"), seed)
    elif kind == "transitive":
        T = gen_transitive(_need(args.n, "--n"))
    elif kind == "rotational":
        T = gen_rotational(_need(args.ell, "--ell"))
    elif kind == "extremal":
        T = gen_extremal(_need(args.m, "--m"), _need(args.ell, "--ell"))
    else:
        T, _ = gen_planted(_need(args.n, "--n"), args.cycles, seed)
    text = to_text(T)
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"generated {kind} tournament on {T.n} vertices", file=sys.stderr)
    return 0


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this generator")
    return value


def cmd_connectivity(args, cfg: CommandConfig) -> int:
    T = read_tournament(args.input)
    rep = connectivity(T)
    cut = sorted(rep.witness_cut) if rep.witness_cut is not None else None
    _emit({"command": cfg.echo(), "n": T.n, "kappa": rep.kappa, "witness_cut": cut}, args.output)
    print(f"kappa = {rep.kappa}", file=sys.stderr)
    return 0


def cmd_link(args, cfg: CommandConfig) -> int:
    T = read_tournament(args.input)
    pairs = _pairs(args.pairs)
    payload = {"command": cfg.echo(), "n": T.n, "pairs": pairs}
    try:
        ends = [v for p in pairs for v in p]
        if len(set(ends)) == len(ends):
            paths = link(T, pairs, mode=args.mode)
        else:
            paths = link_internally_disjoint(T, pairs, method=args.method, mode=args.mode)
    except LinkageError as exc:
        payload.update(ok=False, stage=exc.stage, detail=exc.detail, cut=sorted(exc.cut) if exc.cut else None)
        _emit(payload, args.output)
        print(f"linkage failed at {exc.stage}: {exc.detail}", file=sys.stderr)
        return 2
    payload.update(ok=True, paths=[list(p) for p in paths])
    _emit(payload, args.output)
    print(f"linked {len(paths)} pairs", file=sys.stderr)
    return 0


def cmd_hamcycle(args, cfg: CommandConfig) -> int:
    T = read_tournament(args.input)
    payload = {"command": cfg.echo(), "n": T.n}
    try:
        C = hamilton_cycle_camion(T)
    except NotStronglyConnected as exc:
        payload.update(ok=False, components=exc.components)
        _emit(payload, args.output)
        print(str(exc), file=sys.stderr)
        return 2
    except ValueError as exc:
        payload.update(ok=False, detail=str(exc))
        _emit(payload, args.output)
        print(str(exc), file=sys.stderr)
        return 2
    payload.update(ok=validate_cycle(T, C), cycle=list(C))
    _emit(payload, args.output)
    print(f"Hamilton cycle on {T.n} vertices", file=sys.stderr)
    return 0


def cmd_hamcycles(args, cfg: CommandConfig) -> int:
    T = read_tournament(args.input)
    ecfg = EngineConfig(mode=args.mode, t=args.t, c=args.c, s=args.s, method=args.method)
    try:
        cert = k_hamilton_cycles(T, args.k, ecfg)
    except EngineError as exc:
        payload = {"command": cfg.echo(), "n": T.n, "k": args.k, "valid": False, "cycles": [], "failures": [str(exc)]}
        _emit(payload, args.output)
        print(f"engine failed: {exc}", file=sys.stderr)
        return 2
    payload = cert.to_dict()
    payload["command"] = cfg.echo()
    _emit(payload, args.output)
    print(f"{len(cert.cycles)} of {args.k} cycles, valid={cert.valid}", file=sys.stderr)
    return 0 if cert.valid else 2


def cmd_extremal(args, cfg: CommandConfig) -> int:
    try:
        rep = verify_extremal_claims(args.m, args.ell)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep["command"] = cfg.echo()
    _emit(rep, args.output)
    print(f"kappa={rep['kappa']} max_r={rep['max_r']} claim2_ok={rep['claim2_ok']}", file=sys.stderr)
    ok = rep["kappa_lower_ok"] and rep["claim2_ok"] is not False and rep["ham_upper_ok"] is not False
    return 0 if ok else 2


def cmd_verify(args, cfg: CommandConfig) -> int:
    T = read_tournament(args.input)
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            cert = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    if not isinstance(cert, dict) or not isinstance(cert.get("cycles"), list):
        raise UsageError("certificate has no cycle list")
    try:
        cycles = [tuple(int(v) for v in C) for C in cert["cycles"]]
    except (TypeError, ValueError):
        raise UsageError("certificate cycles must be integer lists") from None
    rep = verify_certificate(T, {"cycles": cycles, "input_sha": cert.get("input_sha")})
    payload = {
        "command": cfg.echo(),
        "valid": rep.valid,
        "count": rep.count,
        "per_cycle": rep.per_cycle,
        "edge_disjoint": rep.edge_disjoint,
        "input_sha_matches": rep.sha_matches,
    }
    _emit(payload, args.output)
    print(f"{rep.count} cycles, valid={rep.valid}", file=sys.stderr)
    return 0 if rep.valid else 2


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tourney", description="Tournament linkage and Hamilton cycle toolkit")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a tournament")
    g.add_argument("--type", choices=["random", "transitive", "rotational", "extremal", "planted"], required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--ell", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--cycles", type=int, default=1)
    g.add_argument("--seed", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("connectivity", help="exact strong connectivity with a witness cut")
    c.add_argument("input")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_connectivity)

    lk = sub.add_parser("link", help="disjoint paths between given pairs")
    lk.add_argument("input")
    lk.add_argument("--pairs", required=True, help="comma separated x:y pairs")
    lk.add_argument("--mode", choices=["strict", "operational"], default="operational")
    lk.add_argument("--method", choices=["network", "greedy"], default="network")
    lk.add_argument("-o", "--output")
    lk.set_defaults(func=cmd_link)

    h = sub.add_parser("hamcycle", help="one Hamilton cycle of a strong tournament")
    h.add_argument("input")
    h.add_argument("-o", "--output")
    h.set_defaults(func=cmd_hamcycle)

    hs = sub.add_parser("hamcycles", help="k edge-disjoint Hamilton cycles with a certificate")
    hs.add_argument("input")
    hs.add_argument("--k", type=int, required=True)
    hs.add_argument("--mode", choices=["strict", "operational", "best-effort"], default="best-effort")
    hs.add_argument("--t", type=int)
    hs.add_argument("--c", type=int)
    hs.add_argument("--s", type=int)
    hs.add_argument("--method", choices=["network", "greedy"])
    hs.add_argument("-o", "--output")
    hs.set_defaults(func=cmd_hamcycles)

    e = sub.add_parser("extremal", help="check the extremal family's claims")
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--ell", type=int, required=True)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_extremal)

    v = sub.add_parser("verify", help="re-validate a certificate against the raw tournament")
    v.add_argument("certificate")
    v.add_argument("input")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "subcommand")}
    cfg = CommandConfig(args.subcommand, params)
    try:
        return args.func(args, cfg)
    except TournamentFormatError as exc:
        print(f"malformed tournament file: {exc}", file=sys.stderr)
        return 1
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())

"""Command line front end.

Exit codes: 0 success, 1 a check failed, 2 malformed input.  Errors go to
stderr as ``ERROR <code>: <message>``.
"""
import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__, icss
from .cellcx import build_complex
from .disent import analyze, fplus, same_homology
from .equivar import alternating_homology, equivariant_from_json
from .errors import (
    ExtensionProblemUnresolved,
    HigherDifferentialUnknown,
    IcssError,
    MalformedInput,
    NoWitness,
    NonFreeDifferentialDomain,
    OracleMismatch,
)
from .intlin import format_groups, homology
from .multipt import germ_from_json, image_complex, multiple_point_family

COMMANDS = ("validate", "homology", "alt-homology", "mpp", "icss", "analyze", "fplus", "oracle-compare")
CHECK_FAILURES = (OracleMismatch, HigherDifferentialUnknown, ExtensionProblemUnresolved, NoWitness,
                  NonFreeDifferentialDomain)


@dataclass
class RunConfig:
    command: str
    input_path: str
    output: str = "text"
    max_k: int = None


class Result:
    def __init__(self, data, text, code=0):
        self.data = data
        self.text = text
        self.code = code


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def _is_germ(data):
    return isinstance(data, dict) and "branches" in data


def _germ(data):
    if not _is_germ(data):
        raise MalformedInput("this command needs a germ model (an object with 'branches')")
    return germ_from_json(data)


def _groups_json(hs):
    return [g.to_json() for g in hs]


def _check_max_k(g, max_k):
    if max_k is not None and max_k < g.d:
        raise MalformedInput(f"--max-k {max_k} is below d(f) = {g.d}; the spectral sequence would be truncated")


def cmd_validate(data, cfg):
    if _is_germ(data):
        g = germ_from_json(data)
        info = {"kind": "germ", "name": g.name, "s": g.s, "d": g.d, "n": g.n, "p": g.p,
                "source_cells": g.source.n_cells, "target_cells": g.target.n_cells}
        label = f"germ model {g.name}" if g.name else "germ model"
        return Result(info, f"OK {label}: s = {g.s}, d = {g.d}, n = {g.n}, p = {g.p}")
    if isinstance(data, dict) and "action" in data:
        E = equivariant_from_json(data)
        info = {"kind": "equivariant", "k": E.k, "counts": list(E.complex.counts)}
        return Result(info, f"OK equivariant complex: S_{E.k}, cells per dimension {list(E.complex.counts)}")
    K = build_complex(data)
    return Result({"kind": "complex", "counts": list(K.counts)}, f"OK complex: cells per dimension {list(K.counts)}")


def cmd_homology(data, cfg):
    if _is_germ(data):
        K = image_complex(germ_from_json(data))
        what = "image"
    else:
        K = build_complex(data)
        what = "complex"
    hs = homology(K)
    return Result({"of": what, "homology": _groups_json(hs)}, f"H_*({what}) = {format_groups(hs)}")


def cmd_alt_homology(data, cfg):
    if _is_germ(data):
        g = germ_from_json(data)
        top = g.d if cfg.max_k is None else min(g.d, cfg.max_k)
        levels = {}
        lines = []
        for k in range(2, top + 1):
            hs = alternating_homology(g.level(k))
            levels[str(k)] = _groups_json(hs)
            lines.append(f"H^alt_*(D^{k}) = {format_groups(hs) if hs else '0'}")
        return Result({"levels": levels}, "\n".join(lines) or "no multiple points")
    E = equivariant_from_json(data)
    hs = alternating_homology(E)
    return Result({"k": E.k, "homology": _groups_json(hs)}, f"H^alt_* = {format_groups(hs) if hs else '0'}")


def cmd_mpp(data, cfg):
    g = _germ(data)
    fam = multiple_point_family(g, cfg.max_k)
    levels = []
    lines = [f"s(f) = {g.s}, d(f) = {g.d}"]
    for k, E in sorted(fam.levels.items()):
        hs = alternating_homology(E) if k > 1 else homology(E.complex)
        levels.append({"k": k, "dim": fam.dim(k), "counts": list(E.complex.counts),
                       "orbits": len(E.orbits()), "homology": _groups_json(hs)})
        label = "H" if k == 1 else "H^alt"
        lines.append(f"D^{k}: dim {fam.dim(k)}, cells {list(E.complex.counts)}, {label}_* = {format_groups(hs) if hs else '0'}")
    return Result({"s": g.s, "d": g.d, "levels": levels}, "\n".join(lines))


def cmd_icss(data, cfg):
    g = _germ(data)
    _check_max_k(g, cfg.max_k)
    run = icss.run(multiple_point_family(g, cfg.max_k))
    text = "\n".join([
        "E_1:", run.e1.table(), "E_2:", run.e2.table(),
        f"collapse certified at E_{run.certificate.page}",
        f"abutment: H_* = {format_groups(run.homology)}",
    ])
    return Result(run.to_json(), text)


def cmd_analyze(data, cfg):
    g = _germ(data)
    _check_max_k(g, cfg.max_k)
    report = analyze(g, cfg.max_k)
    return Result(report.to_json(), report.text(), 0 if report.passed else 1)


def cmd_fplus(data, cfg):
    g = _germ(data)
    plus, audit = fplus(g)
    text = "\n".join([
        f"witness y = {audit['witness']}, preimages {audit['preimages']}",
        f"decomposition D^k(f+) = D^k(f) u V_k: {'pass' if audit['decomposition']['pass'] else 'FAIL'}",
        f"alternating homology case split: {'pass' if audit['alternating_homology']['pass'] else 'FAIL'}",
        f"H_*(Y+) = {audit['image_homology']['H_Y_plus']} vs H_*(Y) = {audit['image_homology']['H_Y']}: "
        f"{'pass' if audit['image_homology']['pass'] else 'FAIL'}",
    ])
    return Result({"model": plus.to_json(), "audit": audit}, text, 0 if audit["pass"] else 1)


def cmd_oracle_compare(data, cfg):
    g = _germ(data)
    _check_max_k(g, cfg.max_k)
    run = icss.run(multiple_point_family(g, cfg.max_k))
    oracle = homology(image_complex(g))
    if not same_homology(run.homology, oracle):
        raise OracleMismatch(f"ICSS gives {format_groups(run.homology)}, oracle gives {format_groups(oracle)}")
    return Result({"icss": _groups_json(run.homology), "oracle": _groups_json(oracle), "match": True},
                  f"ICSS == oracle: {format_groups(oracle)}")


HANDLERS = {
    "validate": cmd_validate,
    "homology": cmd_homology,
    "alt-homology": cmd_alt_homology,
    "mpp": cmd_mpp,
    "icss": cmd_icss,
    "analyze": cmd_analyze,
    "fplus": cmd_fplus,
    "oracle-compare": cmd_oracle_compare,
}


def run(cfg, out=None, err=None):
    """Execute one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    if cfg.command not in HANDLERS:
        print(f"ERROR MalformedInput: unknown command {cfg.command!r}", file=err)
        return 2
    try:
        data = _load(cfg.input_path)
        result = HANDLERS[cfg.command](data, cfg)
    except CHECK_FAILURES as exc:
        print(f"ERROR {exc.code}: {exc}", file=err)
        return 1
    except IcssError as exc:
        print(f"ERROR {exc.code}: {exc}", file=err)
        return 2
    if cfg.output == "json":
        out.write(json.dumps(result.data, sort_keys=True, indent=1, ensure_ascii=False) + "\n")
    else:
        out.write(result.text + "\n")
    return result.code


def build_parser():
    parser = argparse.ArgumentParser(prog="icsskit", description="Alternating homology and image-computing spectral sequences of multi-germ models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input_path", metavar="INPUT", help="JSON complex or germ model")
    parser.add_argument("--output", choices=("text", "json"), default="text")
    parser.add_argument("--max-k", type=int, default=None, dest="max_k", help="cap on the multiple point level")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.max_k is not None and args.max_k < 1:
        print("ERROR MalformedInput: --max-k must be at least 1", file=sys.stderr)
        return 2
    return run(RunConfig(args.command, args.input_path, args.output, args.max_k))


if __name__ == "__main__":
    sys.exit(main())

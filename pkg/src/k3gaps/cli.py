"""Command-line surface.

Single binary, three subcommand families:

* ``words``: free-group utilities (reduce, level sets, ramification and
  branching checks);
* ``lattice``: exact isometry matrices, spectral classification, the
  normalizer sequence and its boundary limit;
* ``verify``: the two end-to-end scenarios, configured by TOML with
  dotted ``--set key=value`` overrides, emitting a report bundle.

Exit codes: 0 success, 1 verification or internal failure, 2 usage or
configuration error.  With ``--json``, standard output carries exactly
one JSON document.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import experiments as E
from . import germs as G
from . import lattice as L
from . import reporting as R
from . import words as W
from .words import Word, WordError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

USAGE_ERROR = 2
FAILURE = 1


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        sys.stdout.write(R.json_dumps(payload))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# words


def cmd_words_reduce(args) -> int:
    w = Word.parse(args.word)
    _emit(
        args,
        {"input": args.word, "reduced": str(w), "length": len(w), "identity": w.is_identity()},
        [str(w) if w else "(identity)"],
    )
    return 0


def cmd_words_level(args) -> int:
    seeds = W.abstract_generators(args.k)
    if args.count is not None:
        trees = W.level_prefix(seeds, args.n, args.count)
    else:
        trees = W.derived_level(seeds, args.n, args.cap)
    payload = {
        "k": args.k,
        "level": args.n,
        "count": len(trees),
        "truncated": args.count is not None,
        "words": [str(t.word) for t in trees[: args.show]],
    }
    _emit(
        args,
        payload,
        [f"level {args.n}: {len(trees)} elements"]
        + [f"  {w}" for w in payload["words"]],
    )
    return 0


def cmd_words_ramify(args) -> int:
    rep = W.verify_fast_ramification(args.k, args.trials, args.max_n, args.seed)
    payload = {
        "k": rep.k,
        "trials": rep.trials,
        "min_slack": rep.min_slack,
        "violations": rep.violations,
        "ok": rep.ok,
    }
    _emit(
        args,
        payload,
        [
            f"{rep.trials} trials, min slack over 2N+2: {rep.min_slack}, "
            f"violations: {len(rep.violations)}"
        ],
    )
    return 0 if rep.ok else FAILURE


def cmd_words_tree_count(args) -> int:
    rep = W.tree_path_count(args.depth)
    payload = {
        "depth": rep.depth,
        "per_level_min_branching": rep.per_level_min,
        "path_lower_bound": rep.lower_bound,
    }
    _emit(
        args,
        payload,
        [
            f"depth {rep.depth}: min branching per level {rep.per_level_min}, "
            f"distinct path prefixes >= {rep.lower_bound}"
        ],
    )
    return 0


# ---------------------------------------------------------------------------
# lattice


def cmd_lattice_classify(args) -> int:
    m = L.word_matrix(Word.parse(args.word))
    cls = L.classify(m)
    payload = {
        "word": str(m.provenance),
        "kind": cls.kind,
        "spectral_radius": cls.spectral_radius,
    }
    _emit(args, payload, [f"{cls.kind} (spectral radius {cls.spectral_radius!r})"])
    return 0


def cmd_lattice_matrix(args) -> int:
    m = L.word_matrix(Word.parse(args.word))
    payload = m.to_json()
    _emit(args, payload, [" ".join(f"{x:6d}" for x in row) for row in m.m])
    return 0


def cmd_lattice_lambda(args) -> int:
    path = L.canonical_path(W.schreier_generators(), args.depth)
    seq = L.lambda_sequence(path)
    payload = {
        "depth": args.depth,
        "steps": [
            {
                "n": s.n,
                "log10_lambda": s.log10_lambda,
                "lambda_exact": str(s.lam) if s.log10_lambda < 40 else None,
                "self_pairing_residual": s.self_pairing_residual,
            }
            for s in seq.steps
        ],
        "stagnation": seq.stagnation,
    }
    lines = [
        f"n={s.n}  log10(lambda)={s.log10_lambda:.3f}  residual={s.self_pairing_residual!r}"
        for s in seq.steps
    ]
    _emit(args, payload, lines)
    return FAILURE if seq.stagnation else 0


def cmd_lattice_limit(args) -> int:
    path = L.canonical_path(W.schreier_generators(), args.depth)
    ray, conv = L.boundary_limit(path)
    payload = {
        "limit": list(ray.v),
        "rational": ray.rational,
        "self_pairing": ray.self_pairing(),
        "differences": conv.differences,
    }
    if args.svg:
        pt = L.disk_coordinates(ray.v)
        parabolic = []
        for w in ("x y", "y z", "x z"):
            try:
                parabolic.append(
                    L.disk_coordinates(L.eigenray(L.word_matrix(Word.parse(w))).v)
                )
            except L.LatticeError:
                continue
        Path(args.svg).parent.mkdir(parents=True, exist_ok=True)
        Path(args.svg).write_text(R.svg_circle_limit([pt], parabolic))
        payload["svg"] = args.svg
    _emit(
        args,
        payload,
        [
            f"limit ray {tuple(round(x, 12) for x in ray.v)}",
            f"self-pairing {ray.self_pairing()!r}, rational: {ray.rational}",
        ],
    )
    return 0


# ---------------------------------------------------------------------------
# verify


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(E.ScenarioConfig)}


def _coerce(key: str, raw: str):
    t = _FIELD_TYPES.get(key, "str")
    if "bool" in str(t):
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"boolean value expected for {key}, got {raw!r}")
    if "int" in str(t):
        return int(raw)
    if "float" in str(t) or key == "epsilon":
        return float(raw)
    return raw


def _load_scenario_config(args, forced: dict) -> E.ScenarioConfig:
    file_data: dict = {}
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise FileNotFoundError(f"config file not found: {path}")
        file_data = tomllib.loads(path.read_text())
    overrides: dict = {}
    for item in args.set or []:
        if "=" not in item:
            raise ValueError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        overrides[key.strip()] = _coerce(key.strip(), raw.strip())
    if args.out:
        overrides["output_dir"] = args.out
    merged = {**file_data, **overrides, **forced}
    return E.resolve_config(merged)


def cmd_verify(args) -> int:
    scenario = args.scenario
    forced = (
        {"preset": "wehler-example"}
        if scenario == "gap"
        else {"preset": "sphere", "mode": "real"}
    )
    cfg = _load_scenario_config(args, forced)
    if not args.json:
        # resolved-config echo before any long computation
        sys.stdout.write(R.toml_dumps(cfg.to_dict()))
        sys.stdout.flush()
    if scenario == "gap":
        report = E.run_gap_theorem(cfg)
    else:
        report = E.run_real_locus_theorem(cfg)
    payload = report.to_dict()
    _emit(args, payload, [f"scenario {scenario}: {'PASS' if report.ok else 'FAIL'}"])
    return 0 if report.ok else FAILURE


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", help="emit a single JSON document"
    )
    p = argparse.ArgumentParser(
        prog="k3gaps",
        description="Verified gap directions on the ample-cone boundary of (2,2,2) surfaces",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def leaf(subparsers, name, help):
        return subparsers.add_parser(name, help=help, parents=[common])

    pw = sub.add_parser("words", help="free-group word utilities")
    ws = pw.add_subparsers(dest="words_command", required=True)

    w_red = leaf(ws, "reduce", "freely reduce a word")
    w_red.add_argument("word")
    w_red.set_defaults(fn=cmd_words_reduce)

    w_lvl = leaf(ws, "level", "derived-level sets")
    w_lvl.add_argument("--k", type=int, default=5)
    w_lvl.add_argument("--n", type=int, required=True)
    w_lvl.add_argument("--count", type=int, default=None, help="lazy prefix size")
    w_lvl.add_argument("--cap", type=int, default=W.DEFAULT_LEVEL_CAP)
    w_lvl.add_argument("--show", type=int, default=10)
    w_lvl.set_defaults(fn=cmd_words_level)

    w_ram = leaf(ws, "ramify", "fast-ramification length check")
    w_ram.add_argument("--k", type=int, default=5)
    w_ram.add_argument("--trials", type=int, default=10000)
    w_ram.add_argument("--max-n", type=int, default=50)
    w_ram.add_argument("--seed", type=int, default=0)
    w_ram.set_defaults(fn=cmd_words_ramify)

    w_tc = leaf(ws, "tree-count", "branching lower bound")
    w_tc.add_argument("--depth", type=int, default=3)
    w_tc.set_defaults(fn=cmd_words_tree_count)

    pl = sub.add_parser("lattice", help="exact isometry lattice actions")
    ls = pl.add_subparsers(dest="lattice_command", required=True)

    l_cls = leaf(ls, "classify", "spectral trichotomy of a word")
    l_cls.add_argument("word")
    l_cls.set_defaults(fn=cmd_lattice_classify)

    l_mat = leaf(ls, "matrix", "pushforward matrix of a word")
    l_mat.add_argument("word")
    l_mat.set_defaults(fn=cmd_lattice_matrix)

    l_lam = leaf(ls, "lambda", "normalizer sequence along the canonical path")
    l_lam.add_argument("--depth", type=int, default=6)
    l_lam.set_defaults(fn=cmd_lattice_lambda)

    l_lim = leaf(ls, "limit", "boundary limit ray of the canonical path")
    l_lim.add_argument("--depth", type=int, default=6)
    l_lim.add_argument("--svg", default=None, help="write a circle-limit plot here")
    l_lim.set_defaults(fn=cmd_lattice_limit)

    pv = sub.add_parser("verify", help="end-to-end scenario verification", parents=[common])
    pv.add_argument("scenario", choices=["gap", "real-locus"])
    pv.add_argument("--config", default=None, help="TOML scenario config")
    pv.add_argument(
        "--set", action="append", metavar="KEY=VALUE", help="override a config key"
    )
    pv.add_argument("--out", default=None, help="bundle output directory")
    pv.set_defaults(fn=cmd_verify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_ERROR
    try:
        return args.fn(args)
    except (
        E.StageError,
        E.CoverFailureError,
        E.RealLocusEmptyError,
        L.LatticeError,
        W.LevelSizeError,
        G.HypothesisViolationError,
        ArithmeticError,
    ) as e:
        print(f"verification failure: {e}", file=sys.stderr)
        return FAILURE
    except (WordError, ValueError, FileNotFoundError, tomllib.TOMLDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as e:  # internal error, still a stable exit code
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return FAILURE


if __name__ == "__main__":
    sys.exit(main())

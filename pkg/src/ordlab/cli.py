"""Command-line entry point.

Exit codes: 0 on success, 2 on usage errors, 1 on computation errors (which
print a JSON object with an ``error`` reason code).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, TextIO

from . import ef_engine as ef
from . import preorder_lab as pl
from . import sized_boolean as sb
from .formula import (EvalError, FormulaSyntaxError, TranslationError, UnsupportedFragment,
                      classify, evaluate, is_positive, moschovakis_prenex, parse,
                      quantifier_rank, to_text, translate_plus, translate_prime)
from .formula.checker import is_normal
from .ordinal_cnf import (OrdinalSyntaxError, UnsupportedOperand, add, compare,
                          congruent_mod_omega_omega, decompose_mod_omega_omega, mul,
                          parse_ordinal)
from .structures import FiniteStructure, parse_structure_spec, two_sorted


class CommandError(Exception):
    def __init__(self, code: str, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.extra = extra


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


# -- ordinal --------------------------------------------------------------------

def cmd_ordinal(args, out: TextIO) -> None:
    a = parse_ordinal(args.a)
    if args.op == "decomp":
        if args.b is not None:
            raise CommandError("usage", "decomp takes one ordinal")
        q, r = decompose_mod_omega_omega(a)
        out.write(_dump({"quotient": str(q), "remainder": str(r)}) + "\n")
        return
    if args.b is None:
        raise CommandError("usage", f"{args.op} takes two ordinals")
    b = parse_ordinal(args.b)
    if args.op == "eq":
        w = congruent_mod_omega_omega(a, b)
        witness = None if w is None else {"xi": str(w.xi), "eta": str(w.eta),
                                          "delta": str(w.delta)}
        out.write(_dump({"equivalent": w is not None, "witness": witness}) + "\n")
    elif args.op == "cmp":
        out.write(_dump({"result": {-1: "LT", 0: "EQ", 1: "GT"}[compare(a, b)]}) + "\n")
    else:
        res = add(a, b) if args.op == "add" else mul(a, b)
        out.write(_dump({"result": str(res)}) + "\n")


# -- game -------------------------------------------------------------------------

def _structure(spec: str) -> FiniteStructure:
    if spec.startswith("two:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise CommandError("invalid-input", f"bad structure spec {spec!r}")
        return two_sorted(int(parts[1]), int(parts[2]))
    try:
        return parse_structure_spec(spec)
    except (ValueError, KeyError) as exc:
        raise CommandError("invalid-input", str(exc)) from None


def cmd_game(args, out: TextIO, inp: TextIO) -> None:
    left, right = _structure(args.left), _structure(args.right)
    if args.op == "solve":
        outcome = ef.who_wins(left, right, args.rounds, args.budget)
        rank = None
        if not outcome.duplicator_wins:
            rank = ef.ef_rank_distinguishing(left, right, args.rounds, args.budget)
        out.write(_dump({"winner": outcome.winner, "rank": rank}) + "\n")
    elif args.op == "rank":
        rank = ef.ef_rank_distinguishing(left, right, args.rounds, args.budget)
        out.write(_dump({"rank": rank}) + "\n")
    else:
        game_repl(left, right, args.rounds, inp, out, args.transcript)


def game_repl(left, right, rounds: int, inp: TextIO, out: TextIO,
              transcript_path: Optional[str]) -> ef.Play:
    """Human plays Spoiler with moves like ``M 2`` or ``N 0``; ``quit`` ends."""
    state = ef.new_game(left, right, rounds)
    out.write(f"EF game, {rounds} rounds. Move with 'M <element>' or 'N <element>'.\n")
    while not state.finished:
        out.write(f"round {len(state.pairs) + 1}> ")
        out.flush()
        line = inp.readline()
        if not line or line.strip() == "quit":
            break
        words = line.split()
        try:
            if len(words) != 2:
                raise ef.IllegalMoveError("expected '<side> <element>'")
            state = ef.step_game(state, (words[0], int(words[1])))
        except (ef.IllegalMoveError, ValueError) as exc:
            out.write(f"illegal move: {exc}\n")
            continue
        state = ef.step_game(state)
        reply = state.transcript[-1]
        ok = ef.is_partial_embedding(left, right, state.pairs)
        out.write(f"duplicator answers {reply['element']} in {reply['side']}; "
                  f"partial embedding: {str(ok).lower()}\n")
    if state.finished:
        out.write(f"winner: {state.winner}\n")
    _save(transcript_path, state.transcript, out)
    return state


def _save(path: Optional[str], records, out: TextIO) -> None:
    if not path:
        return
    with open(path, "w") as fh:
        for rec in records:
            fh.write(_dump(rec) + "\n")
    out.write(f"transcript saved to {path}\n")


# -- bagame -------------------------------------------------------------------------

def _spec(text: str, default_name: str) -> sb.AlgebraSpec:
    if text in ("inf", "fin"):
        return sb.AlgebraSpec(default_name, text == "inf")
    try:
        if text.lstrip().startswith("{"):
            data = json.loads(text)
        else:
            with open(text) as fh:
                data = json.load(fh)
        return sb.AlgebraSpec.from_json(data)
    except (OSError, ValueError, KeyError) as exc:
        raise CommandError("invalid-input", f"bad algebra spec {text!r}: {exc}") from None


def _adversary(name: str):
    if name == "random":
        return sb.random_adversary
    if name in ("extract-L", "extract-R"):
        return sb.singleton_extractor(name[-1])
    raise CommandError("usage", f"unknown adversary {name!r}")


def _horizon(text: str, rounds: int):
    if text == "unbounded":
        return None
    return rounds if text is None else int(text)


def cmd_bagame(args, out: TextIO, inp: TextIO) -> None:
    left = _spec(args.left_spec, "left")
    right = _spec(args.right_spec, "right")
    horizon = _horizon(args.horizon, args.rounds)
    if args.op == "run":
        if args.seed is None:
            raise CommandError("usage", "--seed is required for randomized runs")
        try:
            transcript = sb.run_adversarial(left, right, args.rounds, _adversary(args.adversary),
                                            args.seed, horizon=horizon, cap=args.cap)
        except sb.StrategyBreakdown as exc:
            raise CommandError("strategy-breakdown", str(exc),
                               transcript=exc.transcript) from None
        for rec in transcript:
            out.write(_dump(rec) + "\n")
    else:
        bagame_repl(sb.initial_state(left, right, horizon, args.cap), args.rounds, inp, out,
                    args.transcript)


def bagame_repl(state: sb.PartitionState, rounds: int, inp: TextIO, out: TextIO,
                transcript_path: Optional[str]) -> sb.PartitionState:
    """Moves look like ``L Fin:1/Large in out``: a side, then one split per atom."""
    records = [{"round": 0, "atoms": state.labels(), "verified": sb.verify_state(state)}]
    out.write("symbolic game. Atoms are listed as [left, right]. "
              "Move: L|R then per atom in | out | <part>/<copart>.\n")
    while state.round < rounds:
        out.write(f"atoms: {_dump(state.labels())}\nround {state.round + 1}> ")
        out.flush()
        line = inp.readline()
        if not line or line.strip() == "quit":
            break
        try:
            move = sb.SpoilerMove.parse(line, len(state.atoms))
            response, state = sb.duplicator_respond(state, move)
        except (sb.IllegalMove, ValueError) as exc:
            out.write(f"illegal move: {exc}\n")
            continue
        except sb.StrategyBreakdown as exc:
            out.write(f"strategy breakdown: {exc}\n")
            records.append({"round": state.round + 1, "move": line.strip(),
                            "breakdown": str(exc)})
            break
        ok = sb.verify_state(state)
        out.write(f"duplicator answers {' '.join(map(str, response))}; "
                  f"condition (*) holds: {str(ok).lower()}\n")
        records.append({"round": state.round, "atoms": state.labels(), "verified": ok,
                        "move": str(move), "response": " ".join(map(str, response))})
    _save(transcript_path, records, out)
    return state


# -- formula ------------------------------------------------------------------------

_FIXED_LANG = {"translate-plus": "l1s", "translate-prime": "lbs"}


def _assignment(items: List[str]) -> dict:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise CommandError("usage", f"assignment {item!r} is not name=value")
        value = value.strip()
        if value.startswith("{"):
            inner = value.strip("{}").strip()
            out[name.strip()] = [int(v) for v in inner.split(",") if v.strip()]
        else:
            out[name.strip()] = int(value)
    return out


def cmd_formula(args, out: TextIO) -> None:
    lang = args.lang or _FIXED_LANG.get(args.op)
    if lang is None:
        raise CommandError("usage", f"formula {args.op} needs --lang")
    if args.op in _FIXED_LANG and lang != _FIXED_LANG[args.op]:
        raise CommandError("usage", f"{args.op} reads {_FIXED_LANG[args.op]} formulas")
    text = args.text if args.text is not None else args.formula
    if text is None:
        raise CommandError("usage", "no formula given (use --in or a positional argument)")
    f = parse(text, lang)
    abbreviate = not args.expand
    if args.op == "parse":
        result = {"formula": to_text(f, abbreviate), "rank": quantifier_rank(f)}
        plain = result["formula"]
    elif args.op == "classify":
        result = {"class": classify(f), "normal": is_normal(f), "rank": quantifier_rank(f)}
        plain = result["class"]
    elif args.op == "positive":
        result = {"positive": is_positive(f)}
        plain = str(result["positive"]).lower()
    elif args.op in ("translate-plus", "translate-prime"):
        g = translate_plus(f) if args.op == "translate-plus" else translate_prime(f)
        result = {"formula": to_text(g, abbreviate)}
        plain = result["formula"]
    elif args.op == "prenex":
        result = {"formula": to_text(moschovakis_prenex(f), abbreviate)}
        plain = result["formula"]
    else:
        if args.structure is None:
            raise CommandError("usage", "eval needs --structure")
        value = evaluate(f, _structure(args.structure), _assignment(args.assign), cof=args.cof)
        result = {"value": value}
        plain = str(value).lower()
    out.write((_dump(result) if args.json else plain) + "\n")


# -- ideals -------------------------------------------------------------------------

def _load_json(text: str):
    try:
        if text.lstrip().startswith("{"):
            return json.loads(text)
        with open(text) as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise CommandError("invalid-input", f"cannot read {text!r}: {exc}") from None


def cmd_ideals(args, out: TextIO) -> None:
    data = _load_json(args.input)
    try:
        if args.op == "seg":
            res = pl.seg_ideal(pl.PreorderSpec.from_json(data), strict=args.strict)
            result = {"improper": True} if res is pl.IMPROPER else res.to_json()
        elif args.op == "access":
            result = pl.is_access_ideal(pl.IdealFamily.from_json(data)).to_json()
        elif args.op == "minimal":
            result = pl.is_minimal_access(pl.IdealFamily.from_json(data)).to_json()
        elif args.op == "surgery":
            result = pl.surgery(pl.SurgeryInstance.from_json(data)).to_json()
        else:
            inst = pl.SurgeryInstance.from_json(data)
            result = {"claims": pl.verify_surgery_claims(inst, pl.surgery(inst))}
    except pl.InvalidInstance as exc:
        raise CommandError("invalid-instance", str(exc)) from None
    except (KeyError, TypeError) as exc:
        raise CommandError("invalid-input", f"missing or malformed field: {exc}") from None
    out.write(_dump(result) + "\n")


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")

    top = argparse.ArgumentParser(prog="ordlab", parents=[common],
                                  description="ordinals, EF games, formulas and ideals")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ordinal", parents=[common], help="ordinal notation arithmetic")
    p.add_argument("op", choices=["eq", "add", "mul", "cmp", "decomp"])
    p.add_argument("a")
    p.add_argument("b", nargs="?")

    p = sub.add_parser("game", parents=[common], help="EF games on finite structures")
    p.add_argument("op", choices=["solve", "rank", "repl"])
    p.add_argument("--left", required=True, help="lin:n, pow:n[:t], two:n:t or a JSON file")
    p.add_argument("--right", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--budget", type=int, default=ef.DEFAULT_BUDGET)
    p.add_argument("--transcript", default="transcript.jsonl",
                   help="where the repl saves its transcript ('' to skip)")

    p = sub.add_parser("bagame", parents=[common], help="symbolic Boolean-algebra games")
    p.add_argument("op", choices=["run", "repl"])
    p.add_argument("--left-spec", required=True, help="inf, fin, inline JSON or a JSON file")
    p.add_argument("--right-spec", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--adversary", default="random", choices=["random", "extract-L", "extract-R"])
    p.add_argument("--seed", type=int)
    p.add_argument("--horizon", default=None, help="number of rounds or 'unbounded'")
    p.add_argument("--cap", type=int, default=sb.DEFAULT_CAP)
    p.add_argument("--transcript", default="transcript.jsonl")

    p = sub.add_parser("formula", parents=[common], help="formula tools")
    p.add_argument("op", choices=["parse", "classify", "positive", "translate-plus",
                                  "translate-prime", "prenex", "eval"])
    p.add_argument("formula", nargs="?")
    p.add_argument("--in", dest="text")
    p.add_argument("--lang", choices=["lord", "lbs", "l1s", "lmon"])
    p.add_argument("--structure")
    p.add_argument("--cof", action="store_true")
    p.add_argument("--assign", action="append", metavar="NAME=VALUE")
    p.add_argument("--expand", action="store_true", help="print Atom(y) expanded")

    p = sub.add_parser("ideals", parents=[common], help="ideals and preorder surgery")
    p.add_argument("op", choices=["seg", "access", "minimal", "surgery", "verify"])
    p.add_argument("--in", dest="input", required=True, help="JSON file or inline JSON")
    p.add_argument("--strict", action="store_true")
    return top


def main(argv: Optional[List[str]] = None, out: TextIO = None, inp: TextIO = None) -> int:
    out = out or sys.stdout
    inp = inp or sys.stdin
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        if extra:
            # a formula given positionally after the options
            if args.command == "formula" and args.formula is None and len(extra) == 1 \
                    and not extra[0].startswith("--"):
                args.formula = extra[0]
            else:
                parser.error("unrecognized arguments: " + " ".join(extra))
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "json"):
        args.json = False
    try:
        if args.command == "ordinal":
            cmd_ordinal(args, out)
        elif args.command == "game":
            cmd_game(args, out, inp)
        elif args.command == "bagame":
            cmd_bagame(args, out, inp)
        elif args.command == "formula":
            cmd_formula(args, out)
        else:
            cmd_ideals(args, out)
    except CommandError as exc:
        if exc.code == "usage":
            sys.stderr.write(f"ordlab: error: {exc}\n")
            return 2
        out.write(_dump({"error": exc.code, "message": str(exc), **exc.extra}) + "\n")
        return 1
    except (OrdinalSyntaxError, FormulaSyntaxError) as exc:
        out.write(_dump({"error": "syntax", "message": str(exc),
                         "position": exc.position}) + "\n")
        return 1
    except UnsupportedOperand as exc:
        out.write(_dump({"error": "unsupported-operand", "message": str(exc)}) + "\n")
        return 1
    except ef.ResourceLimitError as exc:
        out.write(_dump({"error": "budget", "message": str(exc)}) + "\n")
        return 1
    except pl.BudgetExceeded as exc:
        out.write(_dump({"error": "budget", "message": str(exc)}) + "\n")
        return 1
    except UnsupportedFragment as exc:
        sub = None if exc.subformula is None else to_text(exc.subformula)
        out.write(_dump({"error": "unsupported-fragment", "message": str(exc),
                         "subformula": sub}) + "\n")
        return 1
    except (EvalError, TranslationError) as exc:
        out.write(_dump({"error": "evaluation", "message": str(exc)}) + "\n")
        return 1
    except ValueError as exc:
        out.write(_dump({"error": "invalid-input", "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

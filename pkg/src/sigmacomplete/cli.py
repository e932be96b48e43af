"""Command-line front end.

Commands: ``check``, ``axioms``, ``compile``, ``pipeline`` and ``replay``.
Exit status is 0 when no counterexample is found, 1 when one is, 2 on bad
input. JSON reports carry no timing unless ``--timing`` is given, so repeating
a command with the same seed reproduces the report byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .logic import (
    CheckConfig,
    Counterexample,
    axiom_suite,
    check_equation,
    check_equation_in_model,
    check_quasi_direct,
    check_quasi_in_model,
    compile_quasi,
    replay,
)
from .models import (
    ModelElement,
    ModelError,
    QuotientModel,
    check_homomorphism,
    check_sigma_continuity,
    ideal_closure,
    normalize_unit,
)
from .rationals import format_rational, to_rational
from .semantics import EvaluationError
from .syntax import format_equation, format_quasi, parse
from .terms import Equation, QuasiEquation, Signature, TermError

SIGNATURES = [s.value for s in Signature]
EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------


def derive_seed(*parts: str) -> int:
    """64-bit seed from a hash of the inputs."""
    digest = hashlib.sha256("\x00".join(parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def parse_statement(text: str, sig) -> "Equation | QuasiEquation":
    stmt = parse(text, sig)
    if not isinstance(stmt, (Equation, QuasiEquation)):
        raise InputError(f"expected an equation or quasi-equation, got a bare term: {text}")
    return stmt


def read_statements(inline: Optional[str], path: Optional[str]) -> List[str]:
    if (inline is None) == (path is None):
        raise InputError("give exactly one of an inline statement or --file")
    if inline is not None:
        return [inline]
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    out = [ln.strip() for ln in lines if ln.strip() and not ln.strip().startswith("#")]
    if not out:
        raise InputError(f"{path} contains no statements")
    return out


def load_model_file(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "ground" not in data:
        raise InputError(f"{path}: expected an object with a 'ground' list")
    ground = [str(x) for x in data["ground"]]
    if len(set(ground)) != len(ground):
        raise InputError(f"{path}: ground labels must be distinct")
    gens = data.get("ideal_generators", [])
    unit = data.get("unit")
    if unit is not None:
        if not isinstance(unit, dict):
            raise InputError(f"{path}: 'unit' must map labels to rationals")
        unit = {str(k): v for k, v in unit.items()}
        missing = [x for x in ground if x not in unit]
        if missing or set(unit) - set(ground):
            raise InputError(f"{path}: 'unit' must give a value for each ground label")
        try:
            unit = {k: to_rational(v) for k, v in unit.items()}
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{path}: bad rational in 'unit': {exc}") from exc
    return {"ground": ground, "ideal_generators": [[str(x) for x in g] for g in gens], "unit": unit}


def build_model(data: dict) -> QuotientModel:
    ideal = ideal_closure(data["ground"], data["ideal_generators"])
    base = QuotientModel(data["ground"], ideal)
    unit = None
    if data["unit"] is not None:
        unit = tuple(data["unit"][x] for x in base.support)
    return QuotientModel(data["ground"], ideal, True, unit)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _value_text(value) -> str:
    if isinstance(value, ModelElement):
        return "(" + ", ".join(f"{k}: {format_rational(v)}" for k, v in zip(value.labels, value.values)) + ")"
    return format_rational(value)


def verdict_text(verdict) -> str:
    if isinstance(verdict, Counterexample):
        vals = ", ".join(f"{k} = {_value_text(v)}" for k, v in sorted(verdict.valuation.items())) or "(closed)"
        return f"counterexample at trial {verdict.trial}: {vals}; lhs = {_value_text(verdict.lhs_value)}, rhs = {_value_text(verdict.rhs_value)}"
    data = verdict.to_json()
    if data["verdict"] == "exactly_verified":
        return f"verified exactly ({verdict.note})"
    extra = f", premises held in {data['premises_held']}" if "premises_held" in data else ""
    return f"no counterexample in {data['trials']} trials (seed {data['seed']}{extra})"


def emit(report: dict, fmt: str, lines: Sequence[str], elapsed: float, timing: bool) -> None:
    if fmt == "json":
        if timing:
            report = dict(report, elapsed_seconds=round(elapsed, 3))
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
        print(f"({elapsed:.2f}s)")


def _exit_for(results: Sequence[dict]) -> int:
    return EXIT_OK if all(r["ok"] for r in results) else EXIT_COUNTEREXAMPLE


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _check_statement(stmt, config: CheckConfig, model: Optional[QuotientModel]):
    if isinstance(stmt, QuasiEquation):
        if model is None:
            return check_quasi_direct(stmt, config)
        return check_quasi_in_model(stmt, model, config)
    if model is None:
        return check_equation(stmt, config)
    return check_equation_in_model(stmt, model, config)


def _format_statement(stmt) -> str:
    return format_quasi(stmt) if isinstance(stmt, QuasiEquation) else format_equation(stmt)


def cmd_check(args) -> Tuple[dict, List[str], int]:
    texts = read_statements(args.statement, args.file)
    seed = args.seed if args.seed is not None else derive_seed("check", args.sig, *texts)
    config = CheckConfig(args.trials, seed)
    model = build_model(load_model_file(args.model)) if args.model else None
    results, lines = [], []
    for text in texts:
        stmt = parse_statement(text, args.sig)
        verdict = _check_statement(stmt, config, model)
        results.append({"statement": _format_statement(stmt), "ok": verdict.ok, **verdict.to_json()})
        lines.append(f"{'PASS' if verdict.ok else 'FAIL'} {_format_statement(stmt)}")
        lines.append(f"     {verdict_text(verdict)}")
    report = {"command": "check", "signature": args.sig, "seed": seed, "trials": args.trials, "results": results}
    if model is not None:
        report["model"] = model.describe()
    return report, lines, _exit_for(results)


def cmd_axioms(args) -> Tuple[dict, List[str], int]:
    suite = axiom_suite(args.variety)
    seed = args.seed if args.seed is not None else derive_seed("axioms", args.variety)
    config = CheckConfig(args.trials, seed)
    model = build_model(load_model_file(args.model)) if args.model else None
    results, lines = [], []
    where = "the reals" if model is None else f"R^{{{','.join(model.ground)}}} / ideal"
    lines.append(f"{args.variety} suite: {len(suite)} axioms, checked in {where}")
    for name, eq in suite:
        verdict = check_equation(eq, config) if model is None else check_equation_in_model(eq, model, config)
        results.append({"axiom": name, "statement": format_equation(eq), "ok": verdict.ok, **verdict.to_json()})
        lines.append(f"{'PASS' if verdict.ok else 'FAIL'} {name}: {verdict_text(verdict)}")
    passed = sum(r["ok"] for r in results)
    lines.append(f"{passed}/{len(results)} passed")
    report = {"command": "axioms", "variety": args.variety, "seed": seed, "trials": args.trials, "results": results}
    if model is not None:
        report["model"] = model.describe()
    return report, lines, _exit_for(results)


def cmd_compile(args) -> Tuple[dict, List[str], int]:
    texts = read_statements(args.statement, args.file)
    seed = args.seed if args.seed is not None else derive_seed("compile", args.sig, *texts)
    config = CheckConfig(args.trials, seed)
    results, lines = [], []
    for text in texts:
        stmt = parse_statement(text, args.sig)
        if isinstance(stmt, Equation):
            stmt = QuasiEquation((), None, (stmt.lhs, stmt.rhs), stmt.signature)
        compiled = compile_quasi(stmt)
        entry = {"quasi_equation": format_quasi(stmt), "compiled": format_equation(compiled), "ok": True}
        lines.append(format_equation(compiled))
        if args.check:
            via_equation = check_equation(compiled, config)
            direct = check_quasi_direct(stmt, config)
            agree = via_equation.ok == direct.ok
            entry.update(
                compiled_check=via_equation.to_json(),
                direct_check=direct.to_json(),
                agree=agree,
                ok=via_equation.ok and direct.ok,
            )
            lines.append(f"  compiled equation: {verdict_text(via_equation)}")
            lines.append(f"  direct check:      {verdict_text(direct)}")
            lines.append(f"  verdicts {'agree' if agree else 'DISAGREE'}")
        results.append(entry)
    report = {"command": "compile", "signature": args.sig, "results": results}
    if args.check:
        report.update(seed=seed, trials=args.trials)
    return report, lines, _exit_for(results)


def cmd_pipeline(args) -> Tuple[dict, List[str], int]:
    data = load_model_file(args.model_file)
    if data["unit"] is None:
        raise InputError(f"{args.model_file}: the pipeline needs a 'unit'")
    seed = args.seed if args.seed is not None else derive_seed("pipeline", json.dumps(data, default=str, sort_keys=True))
    res = normalize_unit(data["ground"], data["ideal_generators"], data["unit"])
    hom = check_homomorphism(res.phi, samples=args.samples, seed=seed)
    cont = check_sigma_continuity(res.phi, samples=args.samples, seed=seed)
    all_ones = all(v == 1 for v in res.unit_image.values)
    witness = res.kernel_witness()
    report = {
        "command": "pipeline",
        "seed": seed,
        "source": res.source.describe(),
        "unit_representative": {k: format_rational(v) for k, v in res.unit_rep.items()},
        "X": list(res.X),
        "I": res.I.describe(),
        "phi": res.phi.describe(),
        "unit_image": res.unit_image.to_json(),
        "unit_image_all_ones": all_ones,
        "injective": res.injective,
        "criterion": res.explanation,
        "kernel_witness": None if witness is None else witness.to_json(),
        "homomorphism": {"ok": hom.ok, "checked": hom.checked, "note": hom.note},
        "sigma_continuity": {"ok": cont.ok, "checked": cont.checked, "note": cont.note},
    }
    lines = [
        f"X = {{{', '.join(res.X)}}}",
        f"I = {res.I.describe()}",
        "phi: " + ", ".join(f"{t} <- {f} * {s}" for t, (s, f) in zip(res.phi.target.support, ((s, format_rational(f)) for s, f in res.phi.action))),
        f"phi([u]) = {_value_text(res.unit_image)}" + (" (all ones)" if all_ones else ""),
        f"injective: {'yes' if res.injective else 'no'} ({res.explanation})",
    ]
    if witness is not None:
        lines.append(f"kernel contains {_value_text(witness)}")
    lines.append(f"homomorphism check: {'ok' if hom.ok else 'FAILED'} ({hom.note})")
    lines.append(f"sigma-continuity check: {'ok' if cont.ok else 'FAILED'} ({cont.note})")
    ok = hom.ok and cont.ok and all_ones
    return report, lines, EXIT_OK if ok else EXIT_COUNTEREXAMPLE


def _parse_assignments(items: Sequence[str]) -> Dict[str, object]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise InputError(f"expected name=value, got {item!r}")
        try:
            out[name.strip()] = to_rational(value.strip())
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational for {name.strip()}: {value!r}") from exc
    return out


def cmd_replay(args) -> Tuple[dict, List[str], int]:
    if args.report:
        try:
            data = json.loads(Path(args.report).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot load report {args.report}: {exc}") from exc
        sig = data.get("signature", data.get("variety", args.sig))
        todo = [(r["statement"], r["valuation"]) for r in data.get("results", []) if r.get("verdict") == "counterexample"]
        if "model" in data:
            raise InputError("replaying model counterexamples is not supported; re-run check with the same seed")
        if not todo:
            raise InputError(f"{args.report} has no counterexamples to replay")
        todo = [(s, _parse_assignments([f"{k}={v}" for k, v in val.items()])) for s, val in todo]
    else:
        if args.statement is None:
            raise InputError("give a statement with --at assignments, or --report")
        sig = args.sig
        todo = [(args.statement, _parse_assignments(args.at))]
    results, lines = [], []
    for text, valuation in todo:
        stmt = parse_statement(text, sig)
        if isinstance(stmt, QuasiEquation):
            stmt = compile_quasi(stmt)
        lhs, rhs = replay(stmt, valuation)
        refuted = lhs != rhs
        results.append(
            {
                "statement": format_equation(stmt),
                "valuation": {k: format_rational(v) for k, v in sorted(valuation.items())},
                "lhs": format_rational(lhs),
                "rhs": format_rational(rhs),
                "refuted": refuted,
                "ok": not refuted,
            }
        )
        lines.append(f"{format_equation(stmt)}")
        lines.append(f"  lhs = {format_rational(lhs)}, rhs = {format_rational(rhs)}: {'refuted' if refuted else 'sides agree'}")
    report = {"command": "replay", "signature": str(sig), "results": results}
    return report, lines, _exit_for(results)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sigmacomplete", description="Check equations of sigma-complete lattice-ordered groups and Riesz spaces.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--timing", action="store_true", help="include elapsed time in JSON output")
    common.add_argument("--seed", type=int, default=None, help="default: derived from a hash of the input")
    sampled = argparse.ArgumentParser(add_help=False)
    sampled.add_argument("--trials", type=int, default=2000)
    sig = argparse.ArgumentParser(add_help=False)
    sig.add_argument("--sig", choices=SIGNATURES, default="rsu")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common, sampled, sig], help="search for a counterexample to an equation or quasi-equation")
    p.add_argument("statement", nargs="?")
    p.add_argument("--file", help="one statement per line; '#' starts a comment line")
    p.add_argument("--model", help="JSON description of a finite quotient model")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("axioms", parents=[common, sampled], help="check a whole axiom suite")
    p.add_argument("variety", choices=SIGNATURES)
    p.add_argument("--model", help="JSON description of a finite quotient model")
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("compile", parents=[common, sampled, sig], help="turn a quasi-equation into one equation")
    p.add_argument("statement", nargs="?")
    p.add_argument("--file")
    p.add_argument("--check", action="store_true", help="also check the result and the quasi-equation directly")
    p.set_defaults(run=cmd_compile)

    p = sub.add_parser("pipeline", parents=[common], help="normalize a unit of a finite quotient model")
    p.add_argument("model_file")
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(run=cmd_pipeline)

    p = sub.add_parser("replay", parents=[common, sig], help="re-evaluate a statement at given values")
    p.add_argument("statement", nargs="?")
    p.add_argument("--at", nargs="*", default=[], metavar="NAME=VALUE")
    p.add_argument("--report", help="JSON report from 'check'; replays its counterexamples")
    p.set_defaults(run=cmd_replay)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        print("error: --trials must be positive", file=sys.stderr)
        return EXIT_INPUT
    start = time.perf_counter()
    try:
        report, lines, code = args.run(args)
    except (InputError, TermError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EvaluationError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(report, args.format, lines, time.perf_counter() - start, args.timing)
    return code


if __name__ == "__main__":
    sys.exit(main())

# app/cli.py
import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd
from pydantic import ValidationError

from . import TOOL_NAME, __version__, config
from .errors import LabError, ModelInputError, PropertyViolation
from .services import (
    cocycle_service, extension_service, fusion_service, library_service, lifting_service
)
from .services.cocycle_service import AbelianCocycle, FiniteAbelianGroup

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PROPERTY = 2

# Hasil tiap perintah: (payload JSON, teks tabel, exit code)
Outcome = Tuple[Any, Optional[str], int]


class CliUsageError(Exception):
    pass


class LabArgumentParser(argparse.ArgumentParser):
    """argparse yang melempar exception alih-alih sys.exit(2), supaya usage error keluar dengan kode 1."""

    def error(self, message):
        raise CliUsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _table(rows: List[Dict[str, Any]], columns: Optional[List[str]] = None) -> str:
    if not rows:
        return "(empty)"
    frame = pd.DataFrame(rows, columns=columns)
    return frame.to_string(index=False)


def _dump(model) -> Any:
    return model.model_dump(mode="json")


def _params(args) -> Dict[str, Optional[int]]:
    return {key: getattr(args, key, None) for key in ("p", "u", "v", "k", "r")}


def _load_model(args) -> fusion_service.FusionModel:
    if getattr(args, "file", None):
        return fusion_service.load_model_file(args.file)
    if not getattr(args, "model", None):
        raise ModelInputError(f"Either --model or --file is required (built-ins: {', '.join(library_service.builtin_names())})")
    return library_service.build_model(args.model, **_params(args))


def _resolve_current(model, args):
    if getattr(args, "current", None):
        return model.current(args.current)
    # model family memakai current keluarganya, bukan current pertama di daftar
    family = library_service.FAMILY_MODEL_NAMES.get(getattr(args, "model", None) or "")
    if family and not getattr(args, "file", None):
        return model.current(library_service.build_family(family, **_params(args)).current.name)
    return model.default_current()


# --- model / validate ----------------------------------------------------------------------------

def cmd_model_list(args) -> Outcome:
    rows = [{"name": name, "kind": "model", "parameters": dict(defaults)}
            for name, (_, defaults) in library_service.MODEL_BUILDERS.items()]
    for name, family in library_service.FAMILY_MODEL_NAMES.items():
        rows.append({"name": name, "kind": "family",
                     "parameters": dict(library_service.FAMILY_BUILDERS[family][1])})
    text = _table([{**row, "parameters": ", ".join(f"{k}={v}" for k, v in row["parameters"].items()) or "-"}
                   for row in rows])
    return rows, text, EXIT_OK


def cmd_model_dump(args) -> Outcome:
    model = library_service.build_model(args.name, **_params(args))
    return fusion_service.dump_model(model), None, EXIT_OK


def cmd_validate(args) -> Outcome:
    model = _load_model(args)
    report = fusion_service.validate_model(model)
    payload = {"model": report.model, "ok": report.ok, "violations": [_dump(v) for v in report.violations]}
    if report.ok:
        text = f"model {report.model}: no violations"
        code = EXIT_OK
    else:
        text = f"model {report.model}: {len(report.violations)} violation(s)\n" + _table(payload["violations"])
        code = EXIT_PROPERTY if report.has_property_violations else EXIT_INPUT
    return payload, text, code


# --- extend / lift / induce ----------------------------------------------------------------------

def _extension_text(report: extension_service.ExtensionReport) -> str:
    parity = getattr(report.parity, "value", report.parity)
    lines = [
        f"current: {report.current}   grading: {report.grading_group}   parity: {parity}",
        f"theta sign: {report.theta_sign}   c_JJ: {report.braiding_c}   qdim(J): {report.qdim_J}   route: {report.route}",
        _table([{"sector": label, "weight": str(weight), "parity": parity_}
                for label, weight, parity_ in zip(report.sectors, report.sector_weights, report.sector_parities)]),
    ]
    lines += [f"note: {d}" for d in report.diagnostics]
    lines += [f"violation: {v.message}" for v in report.violations]
    return "\n".join(lines)


def cmd_extend(args) -> Outcome:
    model = _load_model(args)
    current = _resolve_current(model, args)
    report = extension_service.build_extension(model, current, bound=args.bound)
    if args.strict:
        extension_service.require_consistent(report)
    code = EXIT_PROPERTY if report.violations else EXIT_OK
    return _dump(report), _extension_text(report), code


def _decision_row(decision: lifting_service.LiftDecision) -> Dict[str, Any]:
    return {"module": decision.module, "phase": str(decision.phase), "lifts": decision.lifts,
            "route": decision.route.value, "flagged": decision.flagged}


def cmd_lift(args) -> Outcome:
    model = _load_model(args)
    current = _resolve_current(model, args)
    if args.module:
        decision = lifting_service.lifts(model, current, args.module)
        text = _table([_decision_row(decision)]) + "".join(f"\nnote: {n}" for n in decision.notes)
        return _dump(decision), text, EXIT_OK
    decisions = lifting_service.sweep_lifts(model, current)
    return [_dump(d) for d in decisions], _table([_decision_row(d) for d in decisions]), EXIT_OK


def cmd_induce(args) -> Outcome:
    model = _load_model(args)
    current = _resolve_current(model, args)
    induced = lifting_service.induce(model, current, args.module)
    payload: Dict[str, Any] = {"induced": _dump(induced), "loewy": None}
    lines = [f"F({induced.base}) = {' + '.join(induced.sectors)}",
             f"simple: {induced.simple}   iso_key: {induced.iso_key}"]
    lines += [f"note: {n}" for n in induced.notes]
    if not model.is_simple(args.module) and model.indecomposable(args.module).loewy is not None:
        diagram = lifting_service.induce_module_loewy(model, current, args.module)
        payload["loewy"] = _dump(diagram)
        lines.append(_table([{"node": n.id, "label": n.label} for n in diagram.nodes]))
        lines.append("edges: " + ", ".join(f"{a}->{b}" for a, b in diagram.edges))
    return payload, "\n".join(lines), EXIT_OK


# --- family --------------------------------------------------------------------------------------

def cmd_family(args) -> Outcome:
    setup = library_service.build_family(args.family, **_params(args))
    if not args.compare_paper:
        report = extension_service.build_extension(setup.model, setup.current)
        payload = {"family": setup.family, "parameters": setup.parameters, "model": setup.model.name,
                   "current": setup.current.name, "labels": len(setup.model.labels),
                   "indecomposables": len(setup.model.indecomposables), "report": _dump(report)}
        code = EXIT_PROPERTY if report.violations else EXIT_OK
        return payload, f"model: {setup.model.name}\n" + _extension_text(report), code

    comparison = library_service.compare_family(setup)
    parity = getattr(comparison.report.parity, "value", comparison.report.parity)
    lines = [
        f"family {comparison.family} {comparison.parameters}: parity {parity}"
        f" (expected {getattr(comparison.expected_parity, 'value', comparison.expected_parity)}, match {comparison.parity_matches})",
        f"vacuum lifts: {comparison.vacuum_lifts}",
        f"derived simple lifts ({len(comparison.derived_simple_lifts)}): {', '.join(comparison.derived_simple_lifts)}",
        f"derived indecomposable lifts: {len(comparison.derived_indecomposable_lifts)}",
    ]
    if comparison.glued_lifts:
        lines.append(f"glued modules lifting: {len(comparison.glued_lifts)}")
    if comparison.divergences:
        lines.append(f"divergences from printed lists ({len(comparison.divergences)}):")
        lines.append(_table([_dump(d) for d in comparison.divergences]))
    else:
        lines.append("divergences from printed lists: none")
    code = EXIT_PROPERTY if comparison.parity_matches is False or comparison.report.violations else EXIT_OK
    return _dump(comparison), "\n".join(lines), code


# --- cocycle -------------------------------------------------------------------------------------

def _read_cocycle(path: str) -> AbelianCocycle:
    try:
        with open(path, encoding="utf-8") as cocycle_file:
            return AbelianCocycle.from_dict(json.load(cocycle_file))
    except OSError as e:
        raise ModelInputError(f"Cannot read cocycle file '{path}': {e}") from e
    except json.JSONDecodeError as e:
        raise ModelInputError(f"Cocycle file '{path}' is not valid JSON: {e}") from e


def _space(args) -> cocycle_service.CocycleSpace:
    if not args.group or not args.values:
        raise ModelInputError("--group and --values are required")
    return cocycle_service.enumerate_cocycles(FiniteAbelianGroup.parse(args.group), args.values)


def _selected_cocycle(args) -> AbelianCocycle:
    if args.file:
        return _read_cocycle(args.file)
    space = _space(args)
    index = args.index or 0
    if not 0 <= index < len(space):
        raise ModelInputError(f"Cocycle index {index} out of range (0..{len(space) - 1})")
    return space[index]


def _q_summary(cocycle: AbelianCocycle) -> str:
    n = cocycle.group.order
    return " ".join(str(cocycle.phase_Omega(i, i)) for i in range(1, n)) or "-"


def _check_rows(checks) -> List[Dict[str, Any]]:
    return [{"identity": c.name, "ok": c.ok, "counterexample": ",".join(c.counterexample or []) or "-"}
            for c in checks]


def cmd_cocycle_verify(args) -> Outcome:
    cocycle = _selected_cocycle(args)
    report = cocycle_service.verify(cocycle)
    checks = list(report.checks)
    if cocycle.group.cyclic_orders == [2]:
        checks.append(cocycle_service.key_identity_Z2(cocycle))
    payload = {"group": report.group, "values": report.values, "ok": all(c.ok for c in checks),
               "checks": [_dump(c) for c in checks]}
    return payload, _table(_check_rows(checks)), EXIT_OK if payload["ok"] else EXIT_PROPERTY


def cmd_cocycle_enumerate(args) -> Outcome:
    space = _space(args)
    count = len(space)
    payload: Dict[str, Any] = {"group": str(space.group), "values": space.values, "count": count}
    lines = [f"{count} cocycle(s) on {space.group} with values in mu_{space.values}"]
    if count <= config.COCYCLE_LIST_LIMIT:
        cocycles = list(space)
        payload["cocycles"] = [c.to_dict() for c in cocycles]
        classes = None
        if space.group.order <= config.COBOUNDARY_MAX_GROUP_ORDER:
            classes = cocycle_service.coboundary_classes(cocycles, space.values)
            payload["classes"] = classes
            lines.append(f"{len(classes)} coboundary class(es)")
        class_of = {i: c for c, members in enumerate(classes or []) for i in members}
        lines.append(_table([{"index": i, "q(g), g != 0": _q_summary(c), "class": class_of.get(i, "-")}
                             for i, c in enumerate(cocycles)]))
    else:
        braidings = space.braiding_representatives()
        payload["braidings"] = len(braidings)
        lines.append(f"{len(braidings)} distinct braiding table(s); listing suppressed above {config.COCYCLE_LIST_LIMIT}")
    return payload, "\n".join(lines), EXIT_OK


def cmd_cocycle_quadratic(args) -> Outcome:
    form = cocycle_service.quadratic_form(_selected_cocycle(args))
    text = _table([{"g": g, "q(g)": str(q)} for g, q in form.q.items()]) + "\n" + _table(_check_rows(form.checks))
    return _dump(form), text, EXIT_OK if form.ok else EXIT_PROPERTY


def cmd_cocycle_pullback(args) -> Outcome:
    result = cocycle_service.pullback_check(_selected_cocycle(args))
    return {"pullback": result}, f"pulled back from G/2G: {result}", EXIT_OK


def cmd_cocycle_equiv(args) -> Outcome:
    if args.file and args.other:
        witness = cocycle_service.coboundary_equivalent(_read_cocycle(args.file), _read_cocycle(args.other))
        payload = {"equivalent": witness is not None, "witness": _dump(witness) if witness else None}
        text = "cohomologous" if witness else "not cohomologous"
        if witness:
            text += "\n" + _table([{"i,j": k, "b": str(v)} for k, v in witness.b.items()])
        return payload, text, EXIT_OK
    space = _space(args)
    classes = cocycle_service.coboundary_classes(list(space), space.values)
    text = f"{len(classes)} coboundary class(es)\n" + _table(
        [{"class": c, "members": ", ".join(str(i) for i in members)} for c, members in enumerate(classes)])
    return {"group": str(space.group), "values": space.values, "classes": classes}, text, EXIT_OK


def cmd_cocycle_monodromy(args) -> Outcome:
    if args.file:
        suite = cocycle_service.monodromy_theorem_suite(_read_cocycle(args.file))
        return _dump(suite), _table(_check_rows(suite.items)), EXIT_OK if suite.ok else EXIT_PROPERTY
    space = _space(args)
    representatives = space.braiding_representatives()
    failures = []
    for index, cocycle in enumerate(representatives):
        suite = cocycle_service.monodromy_theorem_suite(cocycle)
        if not suite.ok:
            failures.append({"representative": index, "items": [_dump(i) for i in suite.items if not i.ok]})
    payload = {"group": str(space.group), "values": space.values, "tables_checked": len(representatives),
               "ok": not failures, "failures": failures}
    text = f"monodromy suite on {len(representatives)} braiding table(s): {'pass' if not failures else 'FAIL'}"
    return payload, text, EXIT_OK if not failures else EXIT_PROPERTY


# --- parser --------------------------------------------------------------------------------------

def _add_params(parser: argparse.ArgumentParser) -> None:
    for flag in ("p", "u", "v", "k", "r"):
        parser.add_argument(f"--{flag}", type=int, default=None)


def _add_model_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", help="built-in model name")
    parser.add_argument("--file", help="path to a model JSON document")
    _add_params(parser)


def _add_cocycle_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--group", help="e.g. Z2, Z4, Z2xZ2")
    parser.add_argument("--values", type=int, help="value order m (m-th roots of unity)")
    parser.add_argument("--index", type=int, default=None, help="index into the enumerated cocycles")
    parser.add_argument("--file", help="path to a cocycle JSON document")


def build_parser() -> LabArgumentParser:
    common = LabArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--quiet", action="store_true", help="only warnings and errors on stderr")

    parser = LabArgumentParser(prog=TOOL_NAME, parents=[common],
                               description="Simple current extensions: parity, lifting and cocycle checks.")
    commands = parser.add_subparsers(dest="command")

    model = commands.add_parser("model", parents=[common], help="list or dump built-in models")
    model_commands = model.add_subparsers(dest="action")
    model_commands.add_parser("list", parents=[common]).set_defaults(handler=cmd_model_list)
    dump = model_commands.add_parser("dump", parents=[common])
    dump.add_argument("--name", required=True)
    _add_params(dump)
    dump.set_defaults(handler=cmd_model_dump)

    validate = commands.add_parser("validate", parents=[common], help="validate a model")
    _add_model_source(validate)
    validate.set_defaults(handler=cmd_validate)

    extend = commands.add_parser("extend", parents=[common], help="classify the extension by a current")
    _add_model_source(extend)
    extend.add_argument("--current")
    extend.add_argument("--bound", type=int, default=None, help="orbit truncation for infinite order")
    extend.add_argument("--strict", action="store_true", help="raise on any property violation")
    extend.set_defaults(handler=cmd_extend)

    lift = commands.add_parser("lift", parents=[common], help="lifting decisions")
    _add_model_source(lift)
    lift.add_argument("--current")
    lift.add_argument("--module", help="omit to sweep every module")
    lift.set_defaults(handler=cmd_lift)

    induce = commands.add_parser("induce", parents=[common], help="induced module and Loewy diagram")
    _add_model_source(induce)
    induce.add_argument("--current")
    induce.add_argument("--module", required=True)
    induce.set_defaults(handler=cmd_induce)

    family = commands.add_parser("family", parents=[common], help="composite families")
    family.add_argument("family", choices=list(library_service.FAMILY_BUILDERS))
    family.add_argument("--compare-paper", action="store_true", dest="compare_paper",
                        help="compare derived lift sets with the printed lists")
    _add_params(family)
    family.set_defaults(handler=cmd_family)

    cocycle = commands.add_parser("cocycle", parents=[common], help="abelian 3-cocycles")
    cocycle_commands = cocycle.add_subparsers(dest="action")
    handlers: Dict[str, Callable[[Any], Outcome]] = {
        "verify": cmd_cocycle_verify,
        "enumerate": cmd_cocycle_enumerate,
        "quadratic": cmd_cocycle_quadratic,
        "pullback": cmd_cocycle_pullback,
        "equiv": cmd_cocycle_equiv,
        "monodromy": cmd_cocycle_monodromy,
    }
    for name, handler in handlers.items():
        sub = cocycle_commands.add_parser(name, parents=[common])
        _add_cocycle_source(sub)
        if name == "equiv":
            sub.add_argument("--other", help="second cocycle JSON document")
        sub.set_defaults(handler=handler)
    return parser


def _emit(payload: Any, text: Optional[str], as_json: bool) -> None:
    if as_json or text is None:
        sys.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
        return
    sys.stdout.write(f"{TOOL_NAME} {__version__}\n{text}\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliUsageError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_INPUT

    logging.basicConfig(level=config.LOG_LEVEL, format=config.LOG_FORMAT, stream=sys.stderr)
    if args.quiet:
        logging.getLogger().setLevel(logging.WARNING)

    handler = getattr(args, "handler", None)
    if handler is None:
        sys.stderr.write(parser.format_help())
        return EXIT_INPUT

    try:
        payload, text, code = handler(args)
    except (ModelInputError, ValidationError) as e:
        logger.error(f"Input error: {e}")
        return EXIT_INPUT
    except PropertyViolation as e:
        logger.error(f"Property violation: {e}")
        return EXIT_PROPERTY
    except LabError as e:
        logger.error(f"Error: {e}")
        return EXIT_INPUT

    _emit(payload, text, args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())

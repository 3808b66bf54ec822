"""Command-line front end: ``gptd validate|bounds|find-advantage|detect|norm``.

The machine-readable report (JSON) goes to ``--out`` or, without it, to
stdout. A short human-readable summary and the wall time go to stderr.

Exit codes: 0 ok, 2 validation failure, 3 parse/shape error,
4 precondition failure, 5 interiority failure, 6 oracle failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import hermitian as H
from .cones import GptModel, psd_model, sep_model, validate_measurement, validate_state
from .discrimination import (
    A3_M0,
    A3_M1,
    A3_RHO0,
    A3_RHO1,
    DiscriminationInstance,
    check_violation,
    construct_advantage,
    distinguishability_norm,
    equality_condition,
    measurement_spectral_stats,
)
from .embedding import (
    AbstractModel,
    contract_into_quantum,
    detect_beyond_quantum,
    embed_model,
    probability_preservation_check,
)
from .errors import (
    ConeError,
    DimensionMismatchError,
    DimNotSquareError,
    EffectNotInDualError,
    GptdError,
    InteriorityError,
    LPFailure,
    NotHermitianError,
    NumericalFailure,
    OracleFailure,
    PreconditionError,
    ValidationError,
    VerificationFailed,
)
from . import io

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PARSE = 3
EXIT_PRECONDITION = 4
EXIT_INTERIORITY = 5
EXIT_ORACLE = 6

DEFAULT_TOL = 1e-9


class Abort(Exception):
    def __init__(self, code, error: dict):
        super().__init__(error.get("message", ""))
        self.code = code
        self.error = error


def _error_dict(exc: Exception) -> dict:
    out = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, EffectNotInDualError):
        out["effect_index"] = exc.index
    verdict = getattr(exc, "verdict", None)
    if verdict is not None:
        out["certificate"] = {
            "status": verdict.status.value,
            "reason": verdict.reason,
            "value": verdict.value,
            "witness": verdict.witness,
        }
    return out


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, ValidationError):
        return EXIT_VALIDATION
    if isinstance(exc, (io.ParseError, DimNotSquareError, DimensionMismatchError, NotHermitianError, ConeError)):
        return EXIT_PARSE
    if isinstance(exc, PreconditionError):
        return EXIT_PRECONDITION
    if isinstance(exc, InteriorityError):
        return EXIT_INTERIORITY
    if isinstance(exc, (OracleFailure, VerificationFailed, NumericalFailure, LPFailure)):
        return EXIT_ORACLE
    if isinstance(exc, ValueError):
        return EXIT_PARSE
    raise exc


class Context:
    def __init__(self, args):
        self.args = args
        self.tol = args.tol
        self.seed = args.seed
        self.inputs: dict[str, str] = {}

    def note_input(self, name, path):
        self.inputs[name] = io.file_digest(path)

    def model(self):
        """Parsed model; abstract models are embedded into Hermitian space."""
        args = self.args
        if args.example:
            self.inputs["model"] = f"builtin:{args.example}"
            return _example_model(args.example, self.tol, self.seed), None
        if not args.model:
            raise io.ParseError("a model file (or --example) is required", "model")
        self.note_input("model", args.model)
        parsed = io.load_model(args.model, self.tol, self.seed)
        if isinstance(parsed, AbstractModel):
            model, iso = embed_model(parsed, self.tol)
            return model, (parsed, iso)
        return parsed, None


def _example_model(name, tol, seed) -> GptModel:
    if name == "sep":
        return sep_model(tol, seed)
    if name.startswith("psd"):
        d = int(name[3:] or 2)
        return psd_model(d, tol)
    raise io.ParseError(f"unknown example {name!r}", "--example")


def _example_instance(ctx: Context, model):
    if ctx.args.example != "sep":
        raise io.ParseError("only --example sep ships an instance", "--example")
    return A3_RHO0, A3_RHO1, 0.5


def _example_measurement(ctx: Context):
    if ctx.args.example != "sep":
        raise io.ParseError("only --example sep ships a measurement", "--example")
    return [A3_M0, A3_M1]


def _instance_matrices(ctx: Context, model, path):
    if ctx.args.example:
        return _example_instance(ctx, model)
    if not path:
        raise io.ParseError("an instance file is required", "instance")
    ctx.note_input("instance", path)
    return io.load_instance(path, model.dim)


def _measurement_matrices(ctx: Context, model, path):
    if ctx.args.example:
        return _example_measurement(ctx)
    if not path:
        raise io.ParseError("a measurement file is required", "meas")
    ctx.note_input("meas", path)
    return io.load_measurement(path, model.dim)


def _cone_name(model) -> str:
    return type(model.cone).__name__


def cmd_validate(ctx: Context) -> dict:
    args = ctx.args
    model, abstract = ctx.model()
    result: dict = {"dim": model.dim, "cone": _cone_name(model)}
    if abstract is not None:
        am, iso = abstract
        result["embedding_max_deviation"] = probability_preservation_check(am, iso, 100, ctx.seed)
    states = []
    if args.state:
        ctx.note_input("state", args.state)
        states = io.load_states(args.state, model.dim)
    elif args.example == "sep":
        states = [A3_RHO0, A3_RHO1]
    for i, s in enumerate(states):
        try:
            validate_state(model, s)
        except ValidationError as exc:
            raise Abort(EXIT_VALIDATION, {**_error_dict(exc), "state_index": i}) from None
    result["states_valid"] = len(states)
    effects = None
    if args.meas:
        ctx.note_input("meas", args.meas)
        effects = io.load_measurement(args.meas, model.dim)
    elif args.example == "sep":
        effects = [A3_M0, A3_M1]
    if effects is not None:
        meas = validate_measurement(model, effects)
        result["measurement_valid"] = True
        if len(meas) == 2:
            result["r"] = measurement_spectral_stats(meas).r
    return result


def cmd_bounds(ctx: Context) -> dict:
    args = ctx.args
    model, _ = ctx.model()
    rho0, rho1, p = _instance_matrices(ctx, model, args.instance)
    if args.p is not None:
        p = args.p
    inst = DiscriminationInstance(validate_state(model, rho0), validate_state(model, rho1), p)
    meas = validate_measurement(model, _measurement_matrices(ctx, model, args.meas))
    report = check_violation(inst, meas, ctx.tol)
    eq = equality_condition(inst, meas, ctx.tol)
    result = report.as_dict()
    result["equality_residual_plus"] = eq.residual_plus
    result["equality_residual_minus"] = eq.residual_minus
    result["general_bound_sound"] = report.general_rhs <= report.err + 1e-9
    return result


def cmd_find_advantage(ctx: Context) -> dict:
    args = ctx.args
    model, _ = ctx.model()
    meas = validate_measurement(model, _measurement_matrices(ctx, model, args.meas))
    stats = measurement_spectral_stats(meas)
    try:
        cert = construct_advantage(model, meas, args.safety)
    except PreconditionError as exc:
        raise Abort(EXIT_PRECONDITION, {**_error_dict(exc), "r": stats.r}) from None
    result = {
        "r": stats.r,
        "err": cert.err,
        "helstrom_rhs": cert.helstrom_rhs,
        "margin": cert.margin,
        "delta": cert.delta,
        "x0": cert.x0,
        "rho0": cert.rho0.matrix,
        "rho1": cert.rho1.matrix,
        "reverified": cert.reverify(),
    }
    companion = args.instance_out
    if companion is None and args.out:
        out = Path(args.out)
        companion = out.with_name(out.stem + ".instance.json")
    if companion is not None:
        Path(companion).write_text(io.dumps_report(io.instance_to_dict(cert.rho0.matrix, cert.rho1.matrix, 0.5)))
        result["instance_file"] = str(companion)
    return result


def cmd_detect(ctx: Context) -> dict:
    model, abstract = ctx.model()
    result: dict = {"dim": model.dim, "cone": _cone_name(model)}
    if abstract is not None:
        am, iso = abstract
        result["embedding_max_deviation"] = probability_preservation_check(am, iso, 100, ctx.seed)
    contraction = contract_into_quantum(model)
    result["contraction_mixing"] = contraction.mixing
    verdict = detect_beyond_quantum(contraction.model, seed=ctx.seed, safety=ctx.args.safety)
    result["verdict"] = verdict.status.value
    result["reason"] = verdict.reason
    if verdict.certificate is not None:
        cert = verdict.certificate
        result["witness"] = verdict.witness
        result["witness_lambda_min"] = H.lambda_min(verdict.witness)
        result["certificate"] = {
            "err": cert.err,
            "helstrom_rhs": cert.helstrom_rhs,
            "margin": cert.margin,
            "delta": cert.delta,
            "rho0": cert.rho0.matrix,
            "rho1": cert.rho1.matrix,
            "effects": list(cert.meas.effects),
            "reverified": cert.reverify(),
        }
    return result


def cmd_norm(ctx: Context) -> dict:
    args = ctx.args
    model, _ = ctx.model()
    rho0, rho1, _ = _instance_matrices(ctx, model, args.instance)
    s0, s1 = validate_state(model, rho0), validate_state(model, rho1)
    value = distinguishability_norm(model, s0, s1)
    half_trace = 0.5 * H.trace_norm(s0.matrix - s1.matrix)
    return {"value": value.value, "exact": value.exact, "half_trace_norm": half_trace}


COMMANDS = {
    "validate": cmd_validate,
    "bounds": cmd_bounds,
    "find-advantage": cmd_find_advantage,
    "detect": cmd_detect,
    "norm": cmd_norm,
}


def _default_tol() -> float:
    raw = os.environ.get("GPTD_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise SystemExit(f"GPTD_TOL must be a number, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--example", choices=["sep", "psd2", "psd3", "psd4"], help="use a built-in fixture")
    common.add_argument("--tol", type=float, default=None, help="membership tolerance (default 1e-9 or $GPTD_TOL)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--safety", type=float, default=0.99)
    common.add_argument("--out", help="write the JSON report here instead of stdout")

    parser = argparse.ArgumentParser(prog="gptd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a model and optional states/measurement")
    p.add_argument("model", nargs="?")
    p.add_argument("--state")
    p.add_argument("--meas")

    p = sub.add_parser("bounds", parents=[common], help="evaluate all error bounds for a tuple")
    p.add_argument("model", nargs="?")
    p.add_argument("instance", nargs="?")
    p.add_argument("meas", nargs="?")
    p.add_argument("--p", type=float)

    p = sub.add_parser("find-advantage", parents=[common], help="construct states beating the Helstrom bound")
    p.add_argument("model", nargs="?")
    p.add_argument("meas", nargs="?")
    p.add_argument("--instance-out", help="companion instance file (default: next to --out)")

    p = sub.add_parser("detect", parents=[common], help="decide whether the model is quantum theory")
    p.add_argument("model", nargs="?")

    p = sub.add_parser("norm", parents=[common], help="discrimination norm D_G of a state pair")
    p.add_argument("model", nargs="?")
    p.add_argument("instance", nargs="?")
    return parser


def _summary(report: dict) -> str:
    lines = [f"gptd {report['command']}: {report['status']} (exit {report['exit_code']})"]
    for key, value in report.get("result", {}).items():
        if isinstance(value, (int, float, str, bool)):
            lines.append(f"  {key} = {value}")
    if "error" in report:
        lines.append(f"  error: {report['error']['type']}: {report['error']['message']}")
    return "\n".join(lines)


def run(argv=None) -> tuple[int, dict, str | None]:
    """Execute one command without printing; return ``(exit_code, report, out_path)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is None:
        args.tol = _default_tol()
    ctx = Context(args)
    report: dict = {
        "command": args.command,
        "argv": list(argv) if argv is not None else sys.argv[1:],
        "tolerance": args.tol,
        "seed": args.seed,
    }
    try:
        result = COMMANDS[args.command](ctx)
        code = EXIT_OK
        report["result"] = result
    except Abort as exc:
        code = exc.code
        report["error"] = exc.error
    except GptdError as exc:
        code = _exit_code(exc)
        report["error"] = _error_dict(exc)
    except ValueError as exc:
        code = EXIT_PARSE
        report["error"] = _error_dict(exc)
    report["inputs"] = ctx.inputs
    report["status"] = "ok" if code == EXIT_OK else "error"
    report["exit_code"] = code
    return code, report, args.out


def main(argv=None) -> int:
    start = time.perf_counter()
    code, report, out = run(argv)
    text = io.dumps_report(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    print(_summary(report), file=sys.stderr)
    print(f"  wall time {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

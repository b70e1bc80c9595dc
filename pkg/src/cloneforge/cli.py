"""Command-line entry point.  Every command emits a JSON report document.

Exit codes: 0 success, 1 a check failed, 2 bad arguments, 3 infeasible.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from typing import Any

import jsonschema
import numpy as np

from . import bell as bl
from .bases import computational_basis, fourier_basis, hadamard_basis
from .cloner import cerf_state, clone_report, reexpand
from .covariance import (
    AmplitudePattern,
    covariant_pattern,
    isotropic_abc_pattern,
    overlap_matrix,
    xyz_pattern,
)
from .optimize import (
    CloneProblem,
    InfeasibleError,
    fmt,
    isotropy_residual,
    self_dual_point,
    symmetric_optimum,
    tradeoff_curve,
    universal_cloner,
    universal_fidelity,
)
from .qlinalg import ATOL, reduced_density
from .suites import SUITES, Check, run_suite

SCHEMA_VERSION = "1.0"
DEFAULT_SEED = 20240917
SEED_ENV = "CLONEFORGE_SEED"

PAIRS = {"comp-fourier": lambda: fourier_basis(4), "comp-hadamard": hadamard_basis}
# hand-reduced patterns; comp-fourier with the hadamard rule has none
REDUCED = {
    ("comp-fourier", "fourier"): xyz_pattern,
    ("comp-hadamard", "fourier"): isotropic_abc_pattern,
    ("comp-hadamard", "hadamard"): xyz_pattern,
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command", "inputs", "outputs", "checks"],
    "properties": {
        "schema_version": {"type": "string"},
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "outputs": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "pass", "residual"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "pass": {"type": "boolean"},
                    # non-finite residuals are serialized as null and rejected here
                    "residual": {"type": "number"},
                },
            },
        },
    },
}


class UsageError(Exception):
    pass


def validate_document(doc: dict) -> None:
    """Raise jsonschema.ValidationError unless ``doc`` matches REPORT_SCHEMA."""
    jsonschema.validate(doc, REPORT_SCHEMA)


def _clean(x: Any) -> Any:
    """Plain JSON types with floats rounded to 15 significant digits."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(x.real), _clean(x.imag)]
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            return None
        v = float(fmt(x))
        return 0.0 if v == 0 else v
    return x


def _complex_list(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).ravel()]


def _check(name: str, residual: float, tol: float = ATOL) -> Check:
    residual = float(residual)
    return Check(name, bool(np.isfinite(residual) and residual <= tol), residual)


def resolve_seed(arg: int | None) -> int:
    if arg is None:
        env = os.environ.get(SEED_ENV)
        if env is None:
            return DEFAULT_SEED
        try:
            arg = int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None
    if not 0 <= arg < 2 ** 64:
        raise UsageError("seed must be an unsigned 64-bit integer")
    return arg


def _pattern(pair: str, rule: str, kind: str) -> AmplitudePattern:
    if kind == "covariant":
        return covariant_pattern(computational_basis(4), PAIRS[pair](), rule)
    if (pair, rule) not in REDUCED:
        raise UsageError(f"no reduced pattern for {pair} with {rule} Bell states; use --pattern covariant")
    return REDUCED[(pair, rule)]()


def cmd_bell(args) -> tuple[dict, dict, list[Check]]:
    N = args.dim
    try:
        bl.check_rule(args.family, N)
        if not (0 <= args.m < N and 0 <= args.n < N):
            raise ValueError(f"indices must lie in 0..{N - 1}")
    except ValueError as e:
        raise UsageError(str(e)) from None
    fam = bl.bell_family(args.family, N=N)
    psi = fam[args.m, args.n]
    ent = max(np.abs(reduced_density(psi, k, (N, N)) - np.eye(N) / N).max() for k in (0, 1))
    outputs: dict = {"amplitudes": _complex_list(psi)}
    checks = [_check("normalized", abs(np.linalg.norm(psi) - 1)),
              _check("maximally_entangled", ent)]
    if args.family == "hadamard":
        outputs["parities"] = dict(zip(["P1", "P3", "P1'", "P3'"], bl.hadamard_parities(args.m, args.n)))
    inputs = {"family": args.family, "dim": N, "m": args.m, "n": args.n}
    return inputs, outputs, checks


def cmd_covariance(args):
    fam1 = bl.bell_family(args.bell, computational_basis(4))
    fam2 = bl.bell_family(args.bell, PAIRS[args.pair]())
    V = overlap_matrix(fam1, fam2)
    pattern = covariant_pattern(computational_basis(4), PAIRS[args.pair](), args.bell)
    layout = [[pattern.labels[c] for c in row] for row in
              np.argmax(pattern.indicators(), axis=0)]
    outputs = {"pattern": pattern.to_json(), "n_params": pattern.n_params, "layout": layout}
    checks = [_check("overlap_unitary", np.abs(V.conj().T @ V - np.eye(16)).max())]
    return {"pair": args.pair, "bell": args.bell}, outputs, checks


def _report_checks(a, rule: str) -> list[Check]:
    rep = clone_report(a, rule)
    fam = bl.bell_family(rule, N=a.shape[0])
    return [
        _check("normalized", abs(np.sum(np.abs(a) ** 2) - 1)),
        _check("duality_reexpansion", np.abs(reexpand(cerf_state(a, fam)) - rep.b_matrix).max()),
        _check("probabilities_A", abs(rep.F_A + rep.D_A.sum() - 1), 1e-9),
        _check("probabilities_B", abs(rep.F_B + rep.D_B.sum() - 1), 1e-9),
        _check("entropic_bound", max(0.0, 2 * np.log2(a.shape[0]) - rep.H_p - rep.H_q), 1e-9),
    ]


def cmd_tradeoff(args):
    if args.grid < 10:
        raise UsageError("--grid must be at least 10")
    pattern = _pattern(args.pair, args.bell, args.pattern)
    curve = tradeoff_curve(pattern, args.bell, args.isotropy, args.grid)
    opt = symmetric_optimum(pattern, args.bell, args.isotropy)
    fa, fb = curve.points[:, 0], curve.points[:, 1]
    problem = CloneProblem(pattern, args.bell)
    norm = max(abs(p @ problem.G @ p - 1) for p in curve.params)
    outputs = {
        "pattern": pattern.to_json(),
        "symmetric_point": curve.crossing(),
        "symmetric_optimum": opt.fidelity,
        "error_rate": 1 - opt.fidelity,
        "optimum_params": dict(zip(pattern.labels, opt.params)),
        "endpoints": {"F_A_min": [fa[0], fb[0]], "F_A_max": [fa[-1], fb[-1]]},
    }
    if args.bell == "fourier" and args.pair == "comp-hadamard":
        try:
            outputs["self_dual_point"] = self_dual_point(pattern, args.bell).fidelity
        except InfeasibleError:
            outputs["self_dual_point"] = None
    checks = [
        _check("monotone", max(0.0, float(np.max(np.diff(fb), initial=0.0))), 1e-7),
        _check("normalization", norm, 1e-9),
        _check("crossing_vs_optimum", abs(curve.crossing() - opt.fidelity), 2e-3),
        _check("optimum_isotropic", isotropy_residual(opt.a) if args.isotropy else 0.0, 1e-9),
    ]
    inputs = {"pair": args.pair, "bell": args.bell, "pattern": args.pattern,
              "grid": args.grid, "isotropy": args.isotropy}
    return inputs, outputs, checks, curve


def _parse_values(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--values must be comma-separated numbers, got {text!r}") from None
    if not all(np.isfinite(vals)):
        raise UsageError("--values must be finite")
    return vals


def cmd_clone_report(args):
    pattern = _pattern(args.pair, args.bell, args.pattern)
    if args.values is None:
        a = symmetric_optimum(pattern, args.bell, True).a
    else:
        vals = np.array(_parse_values(args.values))
        if vals.size != pattern.n_params:
            raise UsageError(f"pattern has {pattern.n_params} classes {pattern.labels}, got {vals.size} values")
        a = pattern.matrix(vals).astype(complex)
        total = np.sum(np.abs(a) ** 2)
        if args.normalize:
            if total == 0:
                raise UsageError("cannot normalize all-zero values")
            a = a / np.sqrt(total)
        elif abs(total - 1) > 1e-9:
            raise UsageError(f"amplitudes not normalized (sum |a|^2 = {total!r}); pass --normalize")
    rep = clone_report(a, args.bell)
    inputs = {"pair": args.pair, "bell": args.bell, "pattern": args.pattern,
              "values": None if args.values is None else _parse_values(args.values),
              "normalize": args.normalize}
    return inputs, rep.to_dict(), _report_checks(rep.a_matrix, args.bell)


def cmd_universal(args):
    if args.dim < 2:
        raise UsageError("--dim must be at least 2")
    u = universal_cloner(args.dim)
    outputs = {"a": u.a[0, 0].real, "b": u.a[0, 1].real, "F": u.fidelity,
               "F_formula": universal_fidelity(args.dim), "report": u.report.to_dict()}
    checks = [
        _check("fidelity_formula", abs(u.fidelity - universal_fidelity(args.dim)), 1e-9),
        _check("self_dual", np.abs(u.a - u.b).max()),
    ] + _report_checks(u.a, "fourier")
    return {"dim": args.dim}, outputs, checks


def cmd_verify(args):
    rng = np.random.Generator(np.random.PCG64(args.seed))
    checks = run_suite(args.suite, rng)
    outputs = {"n_checks": len(checks), "n_failed": sum(not c.passed for c in checks)}
    return {"suite": args.suite}, outputs, checks


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cloneforge", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, help=f"RNG seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    fmt_group = common.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", dest="format", action="store_const", const="json")
    fmt_group.add_argument("--csv", dest="format", action="store_const", const="csv")
    common.set_defaults(format="json")

    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bell", parents=[common], help="one Bell state")
    s.add_argument("--family", choices=bl.RULES, default="fourier")
    s.add_argument("--dim", type=int, default=4)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--n", type=int, default=0)
    s.set_defaults(func=cmd_bell)

    def pair_args(s, with_pattern=True):
        s.add_argument("--pair", choices=sorted(PAIRS), default="comp-fourier")
        s.add_argument("--bell", choices=bl.RULES, default="fourier")
        if with_pattern:
            s.add_argument("--pattern", choices=("reduced", "covariant"), default="reduced")

    s = sub.add_parser("covariance", parents=[common], help="covariant amplitude pattern")
    pair_args(s, with_pattern=False)
    s.set_defaults(func=cmd_covariance)

    s = sub.add_parser("tradeoff", parents=[common], help="fidelity trade-off curve")
    pair_args(s)
    s.add_argument("--grid", type=int, default=101)
    s.add_argument("--isotropy", action=argparse.BooleanOptionalAction, default=True)
    s.set_defaults(func=cmd_tradeoff)

    s = sub.add_parser("clone-report", parents=[common], help="figures of merit for one cloner")
    pair_args(s)
    s.add_argument("--values", help="comma-separated class values (default: symmetric optimum)")
    s.add_argument("--normalize", action="store_true")
    s.set_defaults(func=cmd_clone_report)

    s = sub.add_parser("universal", parents=[common], help="universal cloner")
    s.add_argument("--dim", type=int, default=4)
    s.set_defaults(func=cmd_universal)

    s = sub.add_parser("verify", parents=[common], help="run numerical check suites")
    s.add_argument("suite", nargs="?", default="all", choices=("all", *SUITES))
    s.set_defaults(func=cmd_verify)
    return p


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.seed = resolve_seed(args.seed)
        if args.format == "csv" and args.command != "tradeoff":
            raise UsageError("--csv is only available for tradeoff")
        result = args.func(args)
    except UsageError as e:
        print(f"cloneforge {args.command}: error: {e}", file=sys.stderr)
        return 2
    except InfeasibleError as e:
        print(f"cloneforge {args.command}: infeasible: {e}", file=sys.stderr)
        return 3

    inputs, outputs, checks = result[:3]
    doc = _clean({
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "inputs": {**inputs, "seed": args.seed},
        "outputs": outputs,
        "checks": [c.to_dict() for c in checks],
    })
    validate_document(doc)
    text = json.dumps(doc, indent=2) + "\n"

    if args.command == "tradeoff":
        buf = io.StringIO(newline="")
        result[3].write_csv(buf)
        if args.format == "csv" and args.out is None:
            _emit(buf.getvalue(), None)
        else:
            if args.out is not None:
                _emit(buf.getvalue(), args.out)
            _emit(text, None)
    else:
        _emit(text, args.out)
    return 0 if all(c.passed for c in checks) else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every command loads and validates the document first, then runs its part
of the pipeline.  Structured output is JSON with sorted keys and every
rational rendered as a "p/q" string, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .bounds import NotBigError, bounds_report, jihao_threshold
from .chains import extension_admissible, find_f_chains, is_df_chain, maximal_df_chains, theta_index
from .index import verify_camacho_sad, verify_cln, verify_z_formula
from .null_locus import (
    NotNegativeDefiniteError,
    classify_null_locus,
    egl_torsion_guard,
    fundamental_cycle,
)
from .rational import approx, as_fraction, render
from .surface import ConfigurationError, CurveConfiguration, QDivisor, load_configuration, validate_configuration
from .zariski import (
    MODES,
    REGIMES,
    MissingDataError,
    check_hypotheses,
    compare_decompositions,
    eps_canonical_suite,
    negative_part_oracle,
    noninvariant_checks,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VALIDATION = 2
EXIT_DIVERGENCE = 3
EXIT_MISSING = 4

COMMANDS = ("verify", "chains", "zariski", "classify", "bounds")

TEXT_LABELS = {"Case-G": "NonCanonical-5-analog (Case-G)"}


@dataclass(frozen=True)
class RunManifest:
    command: str
    input_path: str
    regime: str | None
    mode: str | None
    output_format: str
    epsilon: str | None
    jihao: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "input_path": self.input_path,
            "regime": self.regime,
            "mode": self.mode,
            "output_format": self.output_format,
            "epsilon": self.epsilon,
            "jihao": self.jihao,
            "seeded": False,
        }


class _Refusal(Exception):
    def __init__(self, code: int, payload: dict[str, Any]):
        super().__init__(payload.get("error", ""))
        self.code = code
        self.payload = payload


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return render(obj)
    if isinstance(obj, QDivisor):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dump_structured(doc: dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# --- commands -----------------------------------------------------------------


def cmd_verify(config: CurveConfiguration, args) -> tuple[int, dict[str, Any]]:
    report = validate_configuration(config)
    residuals = {}
    for c in config.curves:
        if c.invariant:
            residuals[c.id] = {
                "camacho_sad": verify_camacho_sad(config, c.id),
                "cerveau_lins_neto": verify_cln(config, c.id),
                "gsv": verify_z_formula(config, c.id),
            }
    out = report.to_json()
    out["residuals"] = to_jsonable(residuals)
    return (EXIT_OK if report.ok else EXIT_VALIDATION), out


def _params(config: CurveConfiguration, args):
    params = config.adjoint
    if args.epsilon is not None:
        params = params.with_epsilon(args.epsilon)
    return params


def cmd_chains(config: CurveConfiguration, args) -> tuple[int, dict[str, Any]]:
    params = _params(config, args)
    maximal = {df.parent.curve_ids: df for df in maximal_df_chains(config, params)}
    inventory = []
    for ch in find_f_chains(config):
        verdict = is_df_chain(config, ch, params)
        df = maximal.get(ch.curve_ids)
        entry: dict[str, Any] = {
            "curves": list(ch.curve_ids),
            "e": list(ch.hj.e),
            "n": ch.hj.n,
            "lambda": list(ch.hj.lam),
            "mu": list(ch.hj.mu),
            "d": ch.d_vector(config, params),
            "certificate": verdict.certificate,
            "is_df_chain": verdict.is_df,
            "maximal_df_chain": None,
        }
        if df is not None:
            entry["maximal_df_chain"] = {
                "curves": list(df.curve_ids),
                "certificate": df.certificate,
                "m_divisor": df.m_divisor,
                "extension_admissible": extension_admissible(config, df, params),
            }
        inventory.append(entry)
    chain_curves = {g for df in maximal.values() for g in df.curve_ids}
    theta = {
        cid: theta_index(config, cid, params)
        for cid in config.ids
        if cid not in chain_curves and any(config.dot(cid, g) for g in chain_curves)
    }
    return EXIT_OK, to_jsonable({"epsilon": params.epsilon, "chains": inventory, "theta": theta})


def _comparison(config: CurveConfiguration, args):
    params = _params(config, args)
    modes = (args.mode,) if args.mode else MODES
    return params, compare_decompositions(config, params, modes)


def cmd_zariski(config: CurveConfiguration, args) -> tuple[int, dict[str, Any]]:
    params, cmp = _comparison(config, args)
    out: dict[str, Any] = {
        "headline": "THEOREM == ORACLE" if cmp.equal else "THEOREM != ORACLE",
        "equal": cmp.equal,
        "theorem": cmp.theorem,
        "oracles": cmp.oracles,
        "differences": [
            {"mode": mode, "curve": cid, "theorem": a, "oracle": b} for mode, cid, a, b in cmp.differences
        ],
        "errors": cmp.errors,
        "mismatch_curve": cmp.mismatch_curve,
    }
    if cmp.equal:
        z = negative_part_oracle(config, params, args.mode or "fujita")
        out["positive_dots"] = z.positive_dots
        out["floor_is_zero"] = z.negative.floor_is_zero()
        out["noninvariant_checks"] = [
            {"curve": cid, "value": v, "assumption": a} for cid, v, a in noninvariant_checks(config, params)
        ]
    if args.regime:
        report = check_hypotheses(config, params, args.regime)
        out["hypotheses"] = {
            "regime": args.regime,
            "ok": report.ok,
            "violations": [{"curve": cid, "condition": tag} for cid, tag in report.violations],
        }
        if args.regime == "eps-canonical" and report.ok:
            out["eps_canonical"] = _eps_canonical(config, params)
    return (EXIT_OK if cmp.equal else EXIT_DIVERGENCE), to_jsonable(out)


def _eps_canonical(config: CurveConfiguration, params) -> dict[str, Any]:
    try:
        rep = eps_canonical_suite(config, params)
    except ValueError as exc:
        raise _Refusal(EXIT_VALIDATION, {"error": str(exc)}) from None
    return {
        "epsilon": rep.epsilon,
        "i_delta": rep.i_delta,
        "limit": rep.limit,
        "nef_claim": rep.nef_claim,
        "nef_failures": rep.nef_failures,
        "oracle_equal": rep.oracle_equal,
        "same_support": rep.same_support,
        "null_ok": rep.null_ok,
        "unexpected_null": rep.unexpected_null,
        "every_chain_df": rep.every_chain_df,
        "volume": rep.volume,
        "volume_ok": rep.volume_ok,
        "missing": list(rep.missing),
    }


def _decomposition(config: CurveConfiguration, args):
    params, cmp = _comparison(config, args)
    if not cmp.equal:
        raise _Refusal(EXIT_DIVERGENCE, {
            "error": "theorem and oracle disagree; rerun the zariski command for the divergence table",
            "errors": cmp.errors,
        })
    return negative_part_oracle(config, params, args.mode or "fujita")


def cmd_classify(config: CurveConfiguration, args) -> tuple[int, dict[str, Any]]:
    z = _decomposition(config, args)
    comps = []
    unclassified = False
    for cls in classify_null_locus(config, z):
        try:
            fc = fundamental_cycle(config, cls.curves)
            cycle = {"cycle": fc.cycle, "pa": fc.pa}
        except NotNegativeDefiniteError as exc:
            cycle = {"error": str(exc)}
        adv = egl_torsion_guard(config, z.params, cls)
        comps.append({
            "tag": cls.tag,
            "singularity_type": cls.singularity_type,
            "curves": list(cls.curves),
            "evidence": [{"curve": c, "check": e} for c, e in cls.evidence],
            "curve_cases": dict(cls.curve_cases),
            "fundamental_cycle": cycle,
            "advisory": None if adv is None else {"kind": adv.kind, "text": adv.text},
        })
        unclassified |= cls.tag == "Unclassified"
    out = {"negative_part": z.negative, "components": comps}
    return (EXIT_DIVERGENCE if unclassified else EXIT_OK), to_jsonable(out)


def cmd_bounds(config: CurveConfiguration, args) -> tuple[int, dict[str, Any]]:
    z = _decomposition(config, args)
    try:
        rep = bounds_report(config, z)
    except MissingDataError as exc:
        raise _Refusal(EXIT_MISSING, {"error": str(exc), "missing": list(exc.missing)}) from None
    except NotBigError as exc:
        raise _Refusal(EXIT_VALIDATION, {"error": str(exc)}) from None
    advisories = []
    for cls in classify_null_locus(config, z):
        adv = egl_torsion_guard(config, z.params, cls)
        if adv is not None:
            advisories.append({"kind": adv.kind, "curves": list(adv.curves), "text": adv.text})
    out: dict[str, Any] = {
        "i_index": rep.i_index,
        "p_self": rep.p_self,
        "kx_p": rep.kx_p,
        "a_self": rep.a_self,
        "a_kx": rep.a_kx,
        "alpha": rep.alpha,
        "m_frak": rep.m_frak,
        "vanishing_threshold": rep.vanishing_threshold,
        "birational_threshold": rep.birational_threshold,
        "n_frak": rep.n_frak,
        "n_frak_dominates": rep.n_frak_dominates,
        "rr_coeffs": list(rep.rr_coeffs),
        "side_condition": rep.side_condition,
        "alpha_exceeds_m_frak_minus_one": rep.alpha_exceeds,
        "advisories": advisories,
    }
    if args.jihao:
        out["jihao_threshold"] = jihao_threshold(rep.i_index, rep.m_frak)
    return EXIT_OK, to_jsonable(out)


HANDLERS: dict[str, Callable[[CurveConfiguration, Any], tuple[int, dict[str, Any]]]] = {
    "verify": cmd_verify,
    "chains": cmd_chains,
    "zariski": cmd_zariski,
    "classify": cmd_classify,
    "bounds": cmd_bounds,
}


# --- text rendering -----------------------------------------------------------


def _fmt(value: Any) -> str:
    if isinstance(value, str) and "/" in value:
        try:
            return f"{value} ({approx(as_fraction(value))})"
        except (TypeError, ValueError):
            return value
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_fmt(v)}" for k, v in sorted(value.items())) + "}"
    if isinstance(value, list):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


def render_text(command: str, code: int, result: dict[str, Any]) -> str:
    lines = []
    if command == "zariski" and "headline" in result:
        lines.append(result["headline"])
    if command == "classify" and "components" in result:
        for comp in result["components"]:
            label = TEXT_LABELS.get(comp["tag"], comp["tag"])
            lines.append(f"{label} / {comp['singularity_type']}: {', '.join(comp['curves'])}")
    if command == "bounds" and "vanishing_threshold" in result:
        lines.append(f"thresholds ({result['vanishing_threshold']}, {result['birational_threshold']})")
    for key in sorted(result):
        if key != "headline":
            lines.append(f"{key}: {_fmt(result[key])}")
    lines.append(f"exit: {code}")
    return "\n".join(lines) + "\n"


# --- entry point --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not validation failures
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="foliated-adjoint", description="Exact adjoint-divisor computations on curve configurations.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="configuration document (JSON)")
    p.add_argument("--regime", choices=REGIMES)
    p.add_argument("--mode", choices=MODES, help="oracle mode; both run when omitted")
    p.add_argument("--format", choices=("text", "structured"), default="text", dest="output_format")
    p.add_argument("--jihao", action="store_true", help="also report the threshold i(floor(M(A,0)) + 1)")
    p.add_argument("--epsilon", help="override the document's epsilon ('p/q')")
    return p


def run(argv: list[str] | None = None) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    manifest = RunManifest(args.command, args.input, args.regime, args.mode, args.output_format, args.epsilon, args.jihao)
    try:
        if args.epsilon is not None:
            args.epsilon = as_fraction(args.epsilon)
        config = load_configuration(args.input)
        report = validate_configuration(config)
        if args.command != "verify" and not report.ok:
            raise _Refusal(EXIT_VALIDATION, {"error": "configuration fails validation", **report.to_json()})
        code, result = HANDLERS[args.command](config, args)
    except _Refusal as exc:
        code, result = exc.code, to_jsonable(exc.payload)
    except (ConfigurationError, TypeError, ValueError) as exc:
        code, result = EXIT_INPUT, {"error": str(exc)}
    if args.output_format == "structured":
        return code, dump_structured({"manifest": manifest.to_json(), "exit_code": code, "result": result})
    return code, render_text(args.command, code, result)


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())

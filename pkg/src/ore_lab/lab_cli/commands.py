"""Command dispatch and JSON reports."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..corner_ring import (
    RingElem,
    check_sigma_derivation,
    classify_derivation,
    left_duo_counterexample,
    right_duo_probe,
)
from ..exact_algebra import ParseError, RatFunc
from ..maps import transcendence_over_image
from ..ore_poly import (
    ContractError,
    brute_force_two_sided_probe,
    classify_principal_ideal,
    commutative_vx_check,
    linear_membership_oracle,
    right_ideal_membership,
    verify_marks_conditions,
)
from . import acceptance
from .scenario import ScenarioConfig

__all__ = [
    "COMMANDS",
    "EXIT_FAILURE",
    "EXIT_OK",
    "EXIT_UNKNOWN",
    "EXIT_USAGE",
    "REPORT_SCHEMA",
    "CommandError",
    "Report",
    "reproduce_all",
    "run_command",
]

REPORT_SCHEMA = "ore-lab/report/1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2
EXIT_UNKNOWN = 3

DEFAULT_SAMPLES = {
    "leibniz-check": 200,
    "marks-check": 200,
    "duo-report": 100,
}


class CommandError(ValueError):
    """Bad command, missing argument or malformed polynomial text."""


@dataclass
class Report:
    command: str
    scenario: str | None
    digest: str | None
    seed: int
    verdicts: dict
    witnesses: list = field(default_factory=list)
    verification: dict = field(default_factory=dict)
    summary: str = ""
    exit_code: int = EXIT_OK
    timing: dict = field(default_factory=dict)

    def to_json(self, timing: bool = True) -> dict:
        """Everything except ``timing`` is a function of (scenario, seed, command, args)."""
        out = {
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "scenario": self.scenario,
            "scenario_digest": self.digest,
            "seed": self.seed,
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "verification": self.verification,
            "summary": self.summary,
            "exit_code": self.exit_code,
        }
        if timing:
            out["timing"] = self.timing
        return out


def _need(args: dict, key: str) -> str:
    val = args.get(key)
    if val is None:
        raise CommandError(f"--{key} is required for this command")
    return val


def _parse(cfg: ScenarioConfig, text: str, what: str):
    try:
        return cfg.ext.parse(text)
    except (ParseError, ValueError, ZeroDivisionError) as exc:
        raise CommandError(f"malformed {what} {text!r}: {exc}") from None


def _samples(cfg: ScenarioConfig, args: dict, command: str) -> int:
    n = args.get("samples")
    if n is None:
        n = cfg.sample_count(command, DEFAULT_SAMPLES.get(command, 100))
    if n < 1:
        raise CommandError("--samples must be positive")
    return n


def _classify(cfg, args, seed):
    f = _parse(cfg, _need(args, "poly"), "polynomial")
    cls = classify_principal_ideal(f, seed=seed)
    out = {"poly": str(f), "classification": cls.to_json()}
    witnesses = []
    verification = {"classification_verified": cls.verified}
    if cls.verdict == "Unknown":
        return out, witnesses, verification, f"{f}: Unknown", EXIT_UNKNOWN
    probe = brute_force_two_sided_probe(f, classification=cls)
    out["oracle_probe"] = probe.to_json()
    verification["oracle_probe_passed"] = probe.passed
    if cls.verdict == "NotTwoSided":
        witnesses.append({"kind": "left_multiplier", "r": str(cls.witness), "r_times_f": str(cls.product),
                          "outside_fR": cls.verified})
        summary = f"{f}: NotTwoSided, witness {cls.witness}"
    else:
        summary = f"{f}: TwoSided ({cls.reason})"
    code = EXIT_OK if cls.verified and probe.passed else EXIT_FAILURE
    return out, witnesses, verification, summary, code


def _membership(cfg, args, seed):
    h = _parse(cfg, _need(args, "h"), "polynomial h")
    f = _parse(cfg, _need(args, "f"), "polynomial f")
    oracle = linear_membership_oracle(h, f)
    out = {"h": str(h), "f": str(f), "oracle": oracle.to_json()}
    witnesses = []
    if cfg.ext.is_delta_omega:
        res = right_ideal_membership(h, f)
        out["structural"] = res.to_json()
        agree = bool(res) == bool(oracle)
        verification = {"structural_verified": res.verified, "oracle_agrees": agree}
        if res:
            witnesses.append({"kind": "cofactor", "g": str(res.witness), "f_times_g_equals_h": res.verified})
        else:
            witnesses.append({"kind": "obstruction", "case": res.case, "reason": res.reason})
        verdict = res.verdict
        code = EXIT_OK if agree and res.verified else EXIT_FAILURE
    else:
        verification = {"oracle_certified": oracle.certified}
        if oracle:
            verdict = "In"
            witnesses.append({"kind": "cofactor", "g": str(oracle.witness), "f_times_g_equals_h": True})
            code = EXIT_OK
        elif oracle.certified:
            verdict = "NotIn"
            code = EXIT_OK
        else:
            verdict = "Unknown"
            out["note"] = f"no cofactor of degree <= {oracle.degree_bound}; the structural test needs delta_omega"
            code = EXIT_UNKNOWN
    out["verdict"] = verdict
    return out, witnesses, verification, f"h in fR: {verdict}", code


def _algebraic_generator(cfg, trans):
    ext = cfg.ext
    coeffs = [RingElem(c, RatFunc.zero()) for c in trans.annihilator.coeffs]
    return ext.from_coeffs(coeffs)


def _duo_report(cfg, args, seed):
    n = _samples(cfg, args, "duo-report")
    ring, ext = cfg.ring, cfg.ext
    out = {}
    witnesses = []
    verification = {}
    code = EXIT_OK
    lines = []
    degenerate = ring.is_commutative()
    out["degenerate_commutative"] = degenerate

    corner = {}
    probe = right_duo_probe(ring, n, seed)
    corner["right_duo_probe"] = probe.to_json()
    verification["corner_right_duo_probe"] = probe.passed
    if not probe.passed:
        code = EXIT_FAILURE
    left = left_duo_counterexample(ring)
    if left is not None:
        corner["left_duo_witness"] = left.to_json()
        witnesses.append({"kind": "corner_not_left_duo", **left.to_json()})
        verification["corner_left_witness"] = left.verified
        if not left.verified:
            code = EXIT_FAILURE
        lines.append("corner ring: right duo (sampled), not left duo (certified witness)")
    elif degenerate:
        lines.append("corner ring: commutative (phi = id); duo questions degenerate; flagged")
    else:
        lines.append("corner ring: right duo (sampled); no certified left-duo witness found")
    out["corner_ring"] = corner

    ore: dict = {}
    if ext.is_delta_omega and ext.omega:
        trans = transcendence_over_image(ring.spec, ext.omega, int(cfg.params.get("degree_bound", 8)))
        ore["transcendence"] = trans.to_json()
        if trans.verdict == "Transcendental":
            sampler = ring.sampler(seed)
            refuted = 0
            for _ in range(n):
                f = ext.random_poly(sampler, 4)
                cls = classify_principal_ideal(f, seed=seed)
                if cls.verdict != "TwoSided" or not brute_force_two_sided_probe(f, classification=cls).passed:
                    refuted += 1
                    witnesses.append({"kind": "refutation", "f": str(f), "classification": cls.to_json()})
            ore["right_duo"] = "sampled"
            ore["refutations"] = refuted
            ore["samples"] = n
            verification["ore_sampled_two_sided"] = not refuted
            if refuted:
                code = EXIT_FAILURE
            lines.append(f"right duo (sampled): {refuted} refutations / {n} samples; transcendence certificate attached")
        elif trans.verdict == "AlgebraicWitness":
            f = _algebraic_generator(cfg, trans)
            cls = classify_principal_ideal(f, seed=seed)
            ore["right_duo"] = False
            ore["generator"] = str(f)
            ore["classification"] = cls.to_json()
            ok = cls.verdict == "NotTwoSided" and cls.verified
            verification["ore_not_two_sided_witness"] = ok
            if ok:
                witnesses.append({"kind": "not_two_sided", "f": str(f), "r": str(cls.witness),
                                  "r_times_f": str(cls.product)})
                lines.append(f"not right duo: omega algebraic of degree {trans.degree}; {f} generates a one-sided "
                             f"ideal (witness {cls.witness})")
            else:
                code = EXIT_FAILURE
                lines.append(f"omega algebraic but the generator {f} was not refuted")
        else:
            ore["right_duo"] = "Unknown"
            code = EXIT_UNKNOWN if code == EXIT_OK else code
            lines.append("Ore extension: transcendence of omega undecided")
    elif ext.is_delta_omega:
        ore["right_duo"] = "delta = 0"
        ore["note"] = "omega = 0: X is central over the corner ring"
        lines.append("Ore extension: delta = 0, reduces to R[X; sigma]")
    elif ring.is_commutative():
        vx = commutative_vx_check(ext)
        ore["vX_in_XR"] = vx.to_json()
        ore["right_duo"] = False if vx.certified and not vx else "Unknown"
        verification["ore_vx_certified"] = vx.certified
        if vx.certified and not vx:
            witnesses.append({"kind": "not_two_sided", "f": "X", "r": "v", "r_times_f": str(ext.mul(ext.v, ext.X))})
            lines.append("not right duo: v X lies outside X R[X; sigma, delta] (certified)")
        else:
            code = EXIT_UNKNOWN if code == EXIT_OK else code
            lines.append("Ore extension: v X membership undecided")
    else:
        ore["right_duo"] = "Unknown"
        ore["note"] = "the Ore-level report needs delta = delta_omega or a commutative corner ring"
        code = EXIT_UNKNOWN if code == EXIT_OK else code
        lines.append("Ore extension: not analysed for this derivation")
    out["ore_extension"] = ore
    if degenerate:
        out["flag"] = "phi = id: the corner ring is commutative"
    return out, witnesses, verification, "; ".join(lines), code


def _derivation_classify(cfg, args, seed):
    res = classify_derivation(cfg.ring, cfg.ext.derivation)
    out = {"classification": res.to_json()}
    verification = {"reconstruction_verified": res.verified}
    if res.kind == "Unknown":
        code = EXIT_UNKNOWN
    else:
        code = EXIT_OK if res.verified else EXIT_FAILURE
    return out, [], verification, f"derivation: {res.kind}", code


def _leibniz(cfg, args, seed):
    n = _samples(cfg, args, "leibniz-check")
    rep = check_sigma_derivation(cfg.ring, cfg.ext.derivation, n, seed)
    witnesses = [{"kind": "counterexample", **rep.counterexample}] if rep.counterexample else []
    summary = f"sigma-derivation laws: {'pass' if rep.passed else 'FAIL'} on {rep.checked} pairs"
    return {"leibniz": rep.to_json()}, witnesses, {"passed": rep.passed}, summary, \
        EXIT_OK if rep.passed else EXIT_FAILURE


def _marks(cfg, args, seed):
    n = _samples(cfg, args, "marks-check")
    try:
        rep = verify_marks_conditions(cfg.ext, n, seed)
    except ContractError as exc:
        return {"marks": None, "note": str(exc)}, [], {}, str(exc), EXIT_UNKNOWN
    witnesses = [{"kind": "counterexample", **f} for f in rep.failures]
    summary = f"necessary conditions: {'pass' if rep.passed else 'FAIL'} on {n} samples"
    if cfg.ring.is_commutative():
        summary += "; phi = id, commutative corner ring (flagged)"
    return {"marks": rep.to_json()}, witnesses, {"passed": rep.passed}, summary, \
        EXIT_OK if rep.passed else EXIT_FAILURE


def _reproduce(cfg, args, seed):
    rep = reproduce_all(seed)
    return rep.verdicts, rep.witnesses, rep.verification, rep.summary, rep.exit_code


COMMANDS = {
    "classify": _classify,
    "membership": _membership,
    "duo-report": _duo_report,
    "derivation-classify": _derivation_classify,
    "leibniz-check": _leibniz,
    "marks-check": _marks,
    "reproduce": _reproduce,
}


def run_command(config: ScenarioConfig | None, command: str, args: dict | None = None) -> Report:
    """Run ``command`` on ``config``; ``args`` holds poly, h, f, samples and seed."""
    if command not in COMMANDS:
        raise CommandError(f"unknown command {command!r}; known: {', '.join(COMMANDS)}")
    args = dict(args or {})
    if config is None and command != "reproduce":
        raise CommandError(f"{command} needs --scenario")
    seed = args.get("seed")
    if seed is None:
        seed = config.seed if config is not None else 0
    start = time.perf_counter()
    try:
        verdicts, witnesses, verification, summary, code = COMMANDS[command](config, args, seed)
    except ContractError as exc:
        verdicts, witnesses, verification = {"error": str(exc)}, [], {}
        summary, code = f"{command}: {exc}", EXIT_UNKNOWN
    elapsed = time.perf_counter() - start
    return Report(
        command=command,
        scenario=config.name if config is not None else None,
        digest=config.digest() if config is not None else None,
        seed=seed,
        verdicts=verdicts,
        witnesses=witnesses,
        verification=verification,
        summary=summary,
        exit_code=code,
        timing={"elapsed_s": round(elapsed, 3)},
    )


def reproduce_all(seed: int = 0) -> Report:
    """Run every acceptance criterion; one table row per criterion."""
    start = time.perf_counter()
    results = acceptance.run_all(seed)
    rows = [r.to_json() for r in results]
    timing = {f"criterion_{r.number}_s": round(r.elapsed, 3) for r in results}
    timing["elapsed_s"] = round(time.perf_counter() - start, 3)
    for row in rows:
        row.pop("elapsed_s")
    all_pass = all(r.passed for r in results)
    return Report(
        command="reproduce",
        scenario=None,
        digest=None,
        seed=seed,
        verdicts={"criteria": rows, "all_passed": all_pass},
        verification={f"criterion_{r.number}": r.passed for r in results},
        summary="\n".join(r.line() for r in results),
        exit_code=EXIT_OK if all_pass else EXIT_FAILURE,
        timing=timing,
    )

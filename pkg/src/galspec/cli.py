"""Command-line front end.

Every subcommand reads a family manifest (a JSON file path or a built-in
name), writes structured JSON or CSV to --out or stdout, and prints a
one-line human summary to stderr.  Exit codes: 0 success, 1 a mathematical
check failed (a verification mismatch, an unrealizable condition, a census
mismatch, a rejected identification), 2 malformed input.  All randomness
flows from --seed, so equal invocations produce byte-identical output.
"""

import argparse
import json
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from random import Random

from .arith import format_rat, parse_rat, primes_up_to
from .beckmann import (
    InertiaPrediction,
    PredictionContradiction,
    UnramifiedPrediction,
    bad_primes,
    is_bad_prime,
    predict_inertia,
)
from .family import (
    FamilyManifest,
    ManifestInconsistent,
    branch_locus,
    builtin_manifest,
    load_manifest,
    nondegenerate_check,
)
from .ffact import NotSquarefree, degree_sequence, reduce_mod_p
from .grunwald import (
    SearchFailed,
    Unramified,
    UnsupportedConditionCombination,
    local_model,
    parse_condition,
    run_search,
    verify,
)
from .padic import padic_shape
from .permgrp import CycleType, cycle_type, fingerprint
from .poly import format_poly, specialize, x_poly_coeffs

IDENTIFY_PRIME_BOUND = 2000
IDENTIFY_T_GRID = 10_000


def _load(spec: str) -> FamilyManifest:
    path = Path(spec)
    if path.exists():
        return load_manifest(str(path))
    name = spec[:-5] if spec.endswith(".json") else spec
    try:
        return builtin_manifest(name)
    except (FileNotFoundError, OSError):
        raise ValueError(f"no such manifest file or built-in name: {spec}") from None


def _emit(payload, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _shape_list(pairs) -> list:
    return [list(pair) for pair in pairs]


# -- branch ---------------------------------------------------------------------


def cmd_branch(args) -> int:
    m = _load(args.manifest)
    declared = []
    for bp in m.branch_points:
        declared.append(
            {
                "location": "inf" if bp.is_infinite else format_poly(bp.location),
                "e": bp.e,
                "inertia_class": str(cycle_type(bp.inertia_generator)),
                "decomposition_order": bp.decomposition.order,
                "residue_subextension": None if bp.rho is None else format_poly(bp.rho),
            }
        )
    payload = {"family": m.name, "declared": declared}
    if args.s0 is None:
        locus = m.locus
    else:
        s0 = parse_rat(args.s0)
        locus = branch_locus(m.f, s0)
        check = nondegenerate_check(m, s0)
        payload["s0"] = format_rat(s0)
        payload["nondegenerate"] = check.ok
        payload["degenerate_reasons"] = list(check.reasons)
    payload["points"] = [format_rat(pt) for pt in locus.points]
    payload["residual_degree"] = locus.residual.degree()
    payload["infinity"] = locus.infinity
    _emit(payload, args.out)
    _note(
        f"{m.name}: {len(payload['points'])} rational branch point(s), "
        f"residual degree {locus.residual.degree()}, "
        f"infinity: {'yes' if locus.infinity else 'no'}"
    )
    return 0


# -- badprimes -------------------------------------------------------------------


def cmd_badprimes(args) -> int:
    m = _load(args.manifest)
    s0 = parse_rat(args.s0)
    reports = bad_primes(m, s0, bound=args.bound)
    payload = {
        "family": m.name,
        "s0": format_rat(s0),
        "bound": args.bound,
        "bad_primes": [{"p": r.p, "reasons": list(r.reasons)} for r in reports],
    }
    _emit(payload, args.out)
    _note(f"{m.name} at s0={format_rat(s0)}: {len(reports)} bad prime(s) <= {args.bound}")
    return 0


# -- predict ---------------------------------------------------------------------


def _predict_any(m: FamilyManifest, s0, t0, p: int):
    """Prediction at whichever branch point t0 meets; None when unramified."""
    last = None
    for i in range(len(m.branch_points)):
        try:
            result = predict_inertia(m, i, s0, t0, p)
        except ValueError as exc:
            last = exc
            continue
        if isinstance(result, InertiaPrediction):
            return result
        if isinstance(result, UnramifiedPrediction):
            return None
    if last is not None:
        raise last
    raise ValueError("the manifest declares no branch points")


def cmd_predict(args) -> int:
    m = _load(args.manifest)
    s0, t0 = parse_rat(args.s0), parse_rat(args.t0)
    try:
        result = _predict_any(m, s0, t0, args.p)
    except PredictionContradiction as exc:
        _emit(
            {
                "p": exc.report.p,
                "bad_prime": True,
                "reasons": list(exc.report.reasons),
            },
            args.out,
        )
        _note(f"p={args.p} is bad at this specialization: {', '.join(exc.report.reasons)}")
        return 1
    if result is None:
        _emit({"p": args.p, "ramified": False}, args.out)
        _note(f"p={args.p} is unramified at (s0={args.s0}, t0={args.t0})")
        return 0
    _emit(
        {
            "p": result.p,
            "ramified": result.order > 1,
            "branch": result.branch,
            "multiplicity": result.multiplicity,
            "inertia_class": str(result.generator_class),
            "order": result.order,
        },
        args.out,
    )
    _note(
        f"p={args.p}: inertia order {result.order} "
        f"(class {result.generator_class}, contact {result.multiplicity})"
    )
    return 0


# -- search / verify -------------------------------------------------------------


def _condition_json(cond) -> dict:
    if isinstance(cond, Unramified):
        return {"kind": "unramified", "p": cond.p, "type": str(cond.target)}
    return {
        "kind": "ramified",
        "p": cond.p,
        "branch": cond.branch,
        "d": cond.d,
        "frobenius_target": cond.frobenius_target,
    }


def _record_json(record) -> dict:
    if isinstance(record.observed, str):
        observed = record.observed
    elif record.mode == "full":
        observed = _shape_list(record.observed)
    else:
        observed = list(record.observed)
    if record.mode == "full":
        predicted = [_shape_list(shape) for shape in record.predicted]
    else:
        predicted = list(record.predicted)
    return {
        "condition": _condition_json(record.condition),
        "mode": record.mode,
        "predicted": predicted,
        "observed": observed,
        "passed": record.passed,
    }


def _report_json(report) -> dict:
    payload = {
        "s0": format_rat(report.s0),
        "t0": format_rat(report.t0),
        "records": [_record_json(r) for r in report.records],
        "passed": report.passed,
    }
    if report.s0_progression is not None:
        payload["s0_progression"] = str(report.s0_progression)
    if report.t0_progression is not None:
        prog = report.t0_progression
        payload["t0_progression"] = {
            "chart": prog.chart,
            "congruence": str(prog.congruence),
            "valuations": [list(v) for v in prog.valuations],
        }
    ident = report.identification
    if ident is not None:
        payload["identification"] = {
            "sampled": ident.sampled,
            "observed": {str(ct): n for ct, n in ident.counts},
            "missing": [str(ct) for ct in ident.missing],
            "alien": [str(ct) for ct in ident.alien],
            "passed": ident.passed,
        }
    return payload


def _parse_conditions(m: FamilyManifest, texts) -> list:
    if not texts:
        raise ValueError("give at least one --cond")
    return [parse_condition(text, m) for text in texts]


def cmd_search(args) -> int:
    m = _load(args.manifest)
    conditions = _parse_conditions(m, args.cond)
    try:
        report = run_search(m, conditions, n_id=args.n_id, seed=args.seed)
    except SearchFailed as exc:
        _note(f"search failed: {exc}")
        return 1
    _emit(_report_json(report), args.out)
    _note(
        f"witness (s0, t0) = ({format_rat(report.s0)}, {format_rat(report.t0)}); "
        f"{'all conditions verified' if report.passed else 'VERIFICATION FAILED'}"
    )
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    m = _load(args.manifest)
    conditions = _parse_conditions(m, args.cond)
    report = verify(
        m, parse_rat(args.s0), parse_rat(args.t0), conditions,
        n_id=args.n_id, seed=args.seed,
    )
    _emit(_report_json(report), args.out)
    ok = sum(1 for r in report.records if r.passed)
    _note(f"{ok}/{len(report.records)} condition(s) hold; report {'passed' if report.passed else 'FAILED'}")
    return 0 if report.passed else 1


# -- identify --------------------------------------------------------------------


def identify(
    m: FamilyManifest, s0, samples: int, seed: int, rel_tol: float = 0.5
) -> dict:
    """Sample (t0, p) fibers, tally splitting types, and compare against the
    declared group's cycle-type distribution.

    Without group generators only the tally is reported (support-only mode).
    The verdict is REJECT when a type outside the fingerprint shows up or an
    empirical frequency strays more than rel_tol from its expected value.
    """
    s0 = Fraction(s0)
    check = nondegenerate_check(m, s0)
    if not check:
        raise ValueError(f"s0 = {format_rat(s0)} is degenerate: " + "; ".join(check.reasons))
    odd = [p for p in primes_up_to(IDENTIFY_PRIME_BOUND) if p > 2]
    if m.group is not None:
        pool = [p for p in odd if not is_bad_prime(m, s0, p)]
    else:
        pool = odd
    rng = Random(seed)
    tally = Counter()
    taken = 0
    attempts = 0
    bound = specialize(m.f, {"s": s0})
    n = m.f.degree()
    while taken < samples:
        attempts += 1
        if attempts > 200 * samples:
            raise ValueError("sampling stalled: too few readable fibers")
        t0 = rng.randrange(1, IDENTIFY_T_GRID)
        p = pool[rng.randrange(len(pool))]
        coeffs = x_poly_coeffs(specialize(bound, {"t": Fraction(t0)}))
        if len(coeffs) != n + 1:
            continue
        try:
            seq = degree_sequence(reduce_mod_p(coeffs, p))
        except NotSquarefree:
            continue
        tally[CycleType(tuple(seq))] += 1
        taken += 1

    observed = {str(ct): tally[ct] for ct in sorted(tally, key=lambda c: c.parts)}
    result = {"family": m.name, "s0": format_rat(s0), "samples": samples, "observed": observed}
    if m.group is None:
        result["verdict"] = "SUPPORT-ONLY"
        return result
    fp = fingerprint(m.group)
    expected = {
        str(ct): f"{fp[ct].numerator}/{fp[ct].denominator}"
        for ct in sorted(fp, key=lambda c: c.parts)
    }
    alien = [str(ct) for ct in sorted(tally, key=lambda c: c.parts) if ct not in fp]
    off = []
    for ct, frac in fp.items():
        want = float(frac) * samples
        got = tally[ct]
        if abs(got - want) > rel_tol * want:
            off.append(str(ct))
    result["expected"] = expected
    result["alien"] = alien
    result["frequency_violations"] = sorted(off)
    result["verdict"] = "REJECT" if (alien or off) else "ACCEPT"
    return result


def cmd_identify(args) -> int:
    m = _load(args.manifest)
    result = identify(m, parse_rat(args.s0), args.samples, args.seed)
    _emit(result, args.out)
    _note(f"{m.name}: {len(result['observed'])} type(s) in {args.samples} samples; verdict {result['verdict']}")
    return 1 if result["verdict"] == "REJECT" else 0


# -- census ----------------------------------------------------------------------


@dataclass(frozen=True)
class CensusRow:
    s0: Fraction
    t0: int
    p: int
    predicted: str
    observed: str
    match: str  # "true" | "false" | "bad"


CENSUS_COLUMNS = ("s0", "t0", "p", "predicted", "observed", "match")


def census(m: FamilyManifest, s0, t_lo: int, t_hi: int, p_max: int, jobs: int = 1):
    """One row per (t0, prime): predicted inertia class against the measured
    p-adic shape.  Returns (rows, bad reason map); rows over good primes
    must all match."""
    s0 = Fraction(s0)
    check = nondegenerate_check(m, s0)
    if not check:
        raise ValueError(f"s0 = {format_rat(s0)} is degenerate: " + "; ".join(check.reasons))
    ps = primes_up_to(p_max)
    bad = {r.p: r.reasons for r in bad_primes(m, s0, bound=p_max)}
    n = m.f.degree()
    disc_t = specialize(m.disc, {"s": s0})

    def one(t0: int) -> list:
        if disc_t.evaluate(Fraction(t0)) == 0:
            return []  # exactly on a branch point: no number field to read
        out = []
        for p in ps:
            if p in bad:
                reasons = ";".join(bad[p])  # comma is the CSV delimiter
                out.append(CensusRow(s0, t0, p, f"bad({reasons})", "-", "bad"))
                continue
            prediction = _predict_any(m, s0, t0, p)
            if prediction is None:
                predicted = CycleType((1,) * n)
            else:
                predicted = prediction.generator_class
            shape = padic_shape(local_model(m, s0, t0, p), p)
            observed = CycleType(tuple(e for e, f in shape.pairs for _ in range(f)))
            out.append(
                CensusRow(
                    s0, t0, p, str(predicted), str(observed),
                    "true" if observed == predicted else "false",
                )
            )
        return out

    values = range(t_lo, t_hi + 1)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(one, values))
    else:
        chunks = [one(t0) for t0 in values]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r.t0, r.p))
    return rows, bad


def cmd_census(args) -> int:
    m = _load(args.manifest)
    s0 = parse_rat(args.s0)
    try:
        t_lo, t_hi = (int(x) for x in args.t_range.split("..", 1))
    except ValueError:
        raise ValueError(f"bad --t-range {args.t_range!r}; expected like -500..500") from None
    rows, bad = census(m, s0, t_lo, t_hi, args.p_max, jobs=args.jobs)
    lines = [",".join(CENSUS_COLUMNS)]
    for r in rows:
        lines.append(f"{format_rat(r.s0)},{r.t0},{r.p},{r.predicted},{r.observed},{r.match}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    good = [r for r in rows if r.match != "bad"]
    matched = sum(1 for r in good if r.match == "true")
    rate = matched / len(good) if good else 1.0
    _note(
        f"{m.name}: {len(rows)} rows, {len(good)} over good primes, "
        f"match rate {rate:.4f}, bad primes {sorted(bad)}"
    )
    return 0 if matched == len(good) else 1


# -- argument plumbing ------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="galspec")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, s0_default=None):
        p.add_argument("--manifest", required=True, help="JSON file or built-in name")
        p.add_argument("--out", help="write the JSON/CSV here instead of stdout")
        if s0_default is not None:
            p.add_argument("--s0", default=s0_default)
        return p

    p = common(sub.add_parser("branch", help="branch locus and declared branch data"))
    p.add_argument("--s0", help="bind s to evaluate the locus")
    p.set_defaults(run=cmd_branch)

    p = common(sub.add_parser("badprimes", help="bad primes with reasons"), s0_default="0")
    p.add_argument("--bound", type=int, default=1000)
    p.set_defaults(run=cmd_badprimes)

    p = common(sub.add_parser("predict", help="tame inertia at one prime"), s0_default="0")
    p.add_argument("--t0", required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(run=cmd_predict)

    p = common(sub.add_parser("search", help="find and verify a specialization"))
    p.add_argument("--cond", action="append", default=[])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-id", type=int, default=300)
    p.set_defaults(run=cmd_search)

    p = common(sub.add_parser("verify", help="check conditions at a given (s0, t0)"), s0_default="0")
    p.add_argument("--t0", required=True)
    p.add_argument("--cond", action="append", default=[])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-id", type=int, default=300)
    p.set_defaults(run=cmd_verify)

    p = common(sub.add_parser("identify", help="group identification by sampling"), s0_default="0")
    p.add_argument("--samples", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_identify)

    p = common(sub.add_parser("census", help="prediction vs shape over a grid"), s0_default="0")
    p.add_argument("--t-range", required=True, help="like -500..500")
    p.add_argument("--p-max", type=int, default=97)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_census)
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (SearchFailed,) as exc:
        _note(f"search failed: {exc}")
        return 1
    except (
        ValueError,
        TypeError,
        KeyError,
        OSError,
        ManifestInconsistent,
        UnsupportedConditionCombination,
        json.JSONDecodeError,
    ) as exc:
        _note(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: ``delta`` (bounds for curves, products, Jacobians, bielliptic
and abelian surfaces), ``local`` (p-adic solvability certificates),
``parity-twist`` (simultaneous quadratic rank growth), ``certify``
(non-density certificates), ``fetch`` (LMFDB model lookup with cache), and
``selftest`` (run the shipped fixture corpus against a fresh engine).

Exit codes: 0 success, 2 when a rule needed a fact that was not supplied,
1 on schema or verification errors.  Identical inputs produce byte-identical
``--json`` output.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Mapping, Optional

from . import boundrules, fixtures, lmfdb, localsolve, rootnumber
from .boundrules import BoundResult, NeedsFact
from .curvemodel import CurveFacts, InconsistentFacts
from .localsolve import CertificateError, LocalField
from .polyarith import poly

EXIT_OK = 0
EXIT_SCHEMA = 1
EXIT_NEEDS_FACT = 2

_PREVIEW = 60


class SchemaError(ValueError):
    pass


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False) + "\n"


def pretty_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(obj: Any, args, human: Optional[str] = None) -> None:
    if getattr(args, "pretty", False):
        sys.stdout.write(pretty_json(obj))
    elif getattr(args, "json", False) or human is None:
        sys.stdout.write(canonical_json(obj))
    else:
        sys.stdout.write(human)


# ---------------------------------------------------------------------------
# Input resolution.


def _load_input(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError("cannot read input JSON: %s" % exc)


def _facts_from_spec(spec: Any) -> CurveFacts:
    """A curve spec is a corpus label or an inline facts object."""
    if isinstance(spec, str):
        try:
            return fixtures.curve_facts(spec)
        except KeyError as exc:
            raise SchemaError(str(exc))
    if not isinstance(spec, Mapping) or "facts" not in spec:
        raise SchemaError("curve spec must be a label or {facts: ...}")
    facts = dict(spec["facts"])
    unknown = set(facts) - fixtures._FACT_KEYS
    if unknown:
        raise SchemaError("unknown fact fields: %s" % sorted(unknown))
    if "genus" not in facts:
        raise SchemaError("facts must include the genus")
    try:
        return CurveFacts(label=spec.get("label", ""),
                          anchors=dict(spec.get("anchors", {})), **facts)
    except (TypeError, InconsistentFacts) as exc:
        raise SchemaError("bad facts: %s" % exc)


def _model_from_spec(spec: Any):
    if isinstance(spec, str):
        try:
            return fixtures.curve_model(spec)
        except KeyError as exc:
            raise SchemaError(str(exc))
    if isinstance(spec, Mapping) and ("ainvs" in spec or "f" in spec):
        try:
            return fixtures.model_from_json(spec, label=spec.get("label", ""))
        except (TypeError, ValueError) as exc:
            raise SchemaError("bad model: %s" % exc)
    raise SchemaError("curve model must be a label, {ainvs: ...} or {f, h}")


def _bound_report(res: BoundResult) -> dict:
    preview = min(res.window, _PREVIEW)
    return {
        "window": res.window,
        "exact": res.exact,
        "lower": res.lower.to_json(),
        "upper": res.upper.to_json(),
        "lower_degrees_upto_%d" % preview: res.lower.materialize(preview),
        "upper_excludes_upto_%d" % preview: [
            d for d in range(1, preview + 1) if d not in res.upper],
        "trace": [t.to_json() for t in res.trace],
    }


def _bound_human(res: BoundResult) -> str:
    preview = min(res.window, _PREVIEW)
    lines = [
        "window [1,%d]   exact: %s" % (res.window, "yes" if res.exact else "no"),
        "lower contains: %s" % _squash(res.lower.materialize(preview), preview),
        "upper excludes: %s" % (
            [d for d in range(1, preview + 1) if d not in res.upper] or "nothing"),
        "trace:",
    ]
    for t in res.trace:
        tag = (" [assuming %s]" % ", ".join(t.assumes)) if t.assumes else ""
        lines.append("  - %s%s" % (t.rule, tag))
        for f in t.facts:
            lines.append("      uses %s" % f)
    return "\n".join(lines) + "\n"


def _squash(degrees: list, bound: int) -> str:
    if not degrees:
        return "(empty)"
    runs = []
    start = prev = degrees[0]
    for d in degrees[1:]:
        if d == prev + 1:
            prev = d
            continue
        runs.append((start, prev))
        start = prev = d
    runs.append((start, prev))
    parts = []
    for a, b in runs:
        if a == b:
            parts.append(str(a))
        elif b == bound:
            parts.append("%d..%d" % (a, b))
        else:
            parts.append("%d-%d" % (a, b))
    return "{%s}" % ", ".join(parts)


# ---------------------------------------------------------------------------
# delta


def _delta_one(target: str, doc: Any, window: int, extra_assume: tuple) -> BoundResult:
    if not isinstance(doc, Mapping):
        raise SchemaError("delta input must be a JSON object")
    if target == "curve":
        return boundrules.delta_curve(_facts_from_spec(doc.get("curve", doc)),
                                      window)
    if target == "product":
        if "c" not in doc or "d" not in doc:
            raise SchemaError("product input needs 'c' and 'd'")
        assume = tuple(doc.get("assume", ())) + extra_assume
        return boundrules.delta_product(
            _facts_from_spec(doc["c"]), _facts_from_spec(doc["d"]),
            doc.get("certs"), doc.get("witnesses"),
            assume=assume, window=window)
    if target == "jacobian":
        return boundrules.delta_jacobian_genus2(
            _facts_from_spec(doc.get("curve", doc)), window)
    if target == "bielliptic":
        for key in ("e1", "e2"):
            if key not in doc:
                raise SchemaError("bielliptic input needs 'e1' and 'e2'")
        if "quadratic_density_applicable" not in doc:
            raise SchemaError("bielliptic input needs 'quadratic_density_applicable'")
        return boundrules.delta_bielliptic(
            _facts_from_spec(doc["e1"]), _facts_from_spec(doc["e2"]),
            bool(doc["quadratic_density_applicable"]),
            positive_rank_over_critical_quadratic=doc.get(
                "positive_rank_over_critical_quadratic"),
            rank_zero_over_critical_quadratics=doc.get(
                "rank_zero_over_critical_quadratics"),
            window=window)
    if target == "abelian":
        witness = doc.get("isogeny_witness")
        if "jacobian_of" in doc:
            return boundrules.delta_abelian_transfer(
                _facts_from_spec(doc["jacobian_of"]),
                isogeny_witness=witness, window=window)
        if "c" in doc and "d" in doc:
            return boundrules.delta_abelian_transfer(
                (_facts_from_spec(doc["c"]), _facts_from_spec(doc["d"])),
                isogeny_witness=witness,
                certs=doc.get("certs"), witnesses=doc.get("witnesses"),
                assume=tuple(doc.get("assume", ())) + extra_assume,
                window=window)
        raise SchemaError("abelian input needs 'jacobian_of' or 'c'/'d'")
    raise SchemaError("unknown delta target %r" % target)


def cmd_delta(args) -> int:
    if args.fixture:
        entry = fixtures.fixture_entry(args.fixture)
        doc = dict(entry.inputs)
        target = entry.kind if entry.kind != "potential" else "product"
        if entry.kind not in ("curve", "product", "jacobian", "bielliptic",
                              "abelian"):
            raise SchemaError("fixture %r is not a delta fixture" % args.fixture)
    else:
        if not args.input:
            raise SchemaError("need --fixture or --input")
        doc = _load_input(args.input)
        target = args.target
    extra = tuple(args.assume or ())
    if isinstance(doc, list):
        with ThreadPoolExecutor(max_workers=min(8, max(1, len(doc)))) as pool:
            results = list(pool.map(
                lambda d: _delta_one(target, d, args.window, extra), doc))
        _emit([_bound_report(r) for r in results], args,
              "".join(_bound_human(r) + "\n" for r in results))
        return EXIT_OK
    res = _delta_one(target, doc, args.window, extra)
    _emit(_bound_report(res), args, _bound_human(res))
    return EXIT_OK


# ---------------------------------------------------------------------------
# local


def cmd_local(args) -> int:
    if args.verify:
        blob = _load_input(args.verify)
        try:
            localsolve.verify_certificate(blob)
        except CertificateError as exc:
            _emit({"verified": False, "reason": str(exc)}, args)
            return EXIT_SCHEMA
        _emit({"verified": True}, args)
        return EXIT_OK
    if args.pair:
        doc = _load_input(args.input) if args.input else {}
        c = _model_from_spec(args.curve or doc.get("c"))
        d = _model_from_spec(args.d or doc.get("d"))
        obstructed, cert = localsolve.quadratic_obstruction(c, d, args.p)
        _emit({"p": args.p, "obstructed": obstructed,
               "certificate": cert.to_json()}, args,
              "p=%d quadratic obstruction: %s\n" % (args.p, obstructed))
        return EXIT_OK
    spec = args.curve or (_load_input(args.input) if args.input else None)
    if spec is None:
        raise SchemaError("need a curve label, --input, or --verify")
    curve = _model_from_spec(spec)
    if args.dmax:
        statuses, cert = localsolve.degree_divisibility(curve, args.p, args.dmax)
        _emit({"p": args.p, "dmax": args.dmax,
               "statuses": {str(k): v for k, v in sorted(statuses.items())},
               "certificate": cert.to_json()}, args,
              "".join("degree %d: %s\n" % (k, v)
                      for k, v in sorted(statuses.items())))
        return EXIT_OK
    poly_target = curve.f * 4 + curve.h * curve.h if hasattr(curve, "f") else None
    if poly_target is None:
        raise SchemaError("local solvability needs a hyperelliptic model")
    verdict, cert = localsolve.has_local_points(poly_target, LocalField(args.p))
    _emit({"p": args.p, "has_points": verdict, "certificate": cert.to_json()},
          args, "p=%d points: %s\n" % (args.p, verdict))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parity-twist


def cmd_parity_twist(args) -> int:
    doc = _load_input(args.input) if args.input else {}
    e1 = _model_from_spec(args.e1 or doc.get("e1"))
    e2 = _model_from_spec(args.e2 or doc.get("e2"))
    twist = rootnumber.find_parity_twist(e1, e2, bound=args.bound)
    if twist is None:
        _emit({"twist": None}, args, "no twist found below the bound\n")
        return EXIT_SCHEMA
    rns = [rootnumber.splitting_quadratic_root_number(e, twist)
           for e in (e1, e2)]
    _emit({"twist": twist, "root_numbers": rns}, args,
          "twist by %d: root numbers %s\n" % (twist, rns))
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify


def cmd_certify(args) -> int:
    if args.fixture:
        entry = fixtures.fixture_entry(args.fixture)
        if entry.kind not in ("certify-quadratic", "certify-cubic"):
            raise SchemaError("fixture %r is not a certificate fixture"
                              % args.fixture)
        which = entry.kind.split("-", 1)[1]
        doc = entry.inputs
    else:
        if not args.input:
            raise SchemaError("need --fixture or --input")
        which = args.which
        doc = _load_input(args.input)
    c = _model_from_spec(doc["c"])
    d = _model_from_spec(doc["d"])
    asserted = doc.get("asserted", {})
    if which == "quadratic":
        ok = boundrules.nondensity_quadratic_certificate(c, d, asserted)
    elif which == "cubic":
        ok = boundrules.nondensity_cubic_certificate(c, d, asserted)
    else:
        raise SchemaError("certificate type must be quadratic or cubic")
    _emit({"certificate": which, "verified": ok}, args,
          "%s non-density certificate: %s\n"
          % (which, "verified" if ok else "NOT verified"))
    return EXIT_OK if ok else EXIT_SCHEMA


# ---------------------------------------------------------------------------
# fetch / selftest


def cmd_fetch(args) -> int:
    try:
        model = lmfdb.fetch(args.label, cache=args.cache_dir,
                            online=args.online)
    except lmfdb.FetchError as exc:
        sys.stderr.write("%s\n" % exc)
        return EXIT_SCHEMA
    _emit({"label": args.label, "model": model}, args)
    return EXIT_OK


def cmd_selftest(args) -> int:
    report = fixtures.run_all(args.window)
    failures = 0
    for label in sorted(report):
        problems = report[label]
        if problems:
            failures += 1
            sys.stdout.write("FAIL %s: %s\n" % (label, "; ".join(problems)))
        else:
            sys.stdout.write("PASS %s\n" % label)
    sys.stdout.write("%d/%d fixtures passed\n"
                     % (len(report) - failures, len(report)))
    return EXIT_OK if failures == 0 else EXIT_SCHEMA


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="densdeg",
        description="density degree bounds for products of low-genus curves")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p):
        p.add_argument("--json", action="store_true",
                       help="canonical compact JSON output")
        p.add_argument("--pretty", action="store_true",
                       help="indented JSON output")

    p = sub.add_parser("delta", help="bound a density degree set")
    p.add_argument("target", nargs="?", default="product",
                   choices=["curve", "product", "jacobian", "bielliptic",
                            "abelian"])
    p.add_argument("--fixture", help="run a shipped fixture by label")
    p.add_argument("--input", help="JSON file ('-' for stdin); a list runs as a batch")
    p.add_argument("--window", type=int, default=boundrules.DEFAULT_WINDOW)
    p.add_argument("--assume", action="append",
                   choices=sorted(boundrules.KNOWN_ASSUMPTIONS),
                   help="enable a conditional rule tag")
    add_output_flags(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("local", help="p-adic solvability certificates")
    p.add_argument("curve", nargs="?", help="curve label or via --input")
    p.add_argument("--input", help="JSON file with a model or a pair")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--dmax", type=int, default=0)
    p.add_argument("--pair", action="store_true",
                   help="quadratic obstruction for a pair of curves")
    p.add_argument("--d", help="second curve label (with --pair)")
    p.add_argument("--verify", help="re-check a certificate JSON file")
    add_output_flags(p)
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("parity-twist",
                       help="squarefree twist making both root numbers odd")
    p.add_argument("--e1", help="first elliptic curve label")
    p.add_argument("--e2", help="second elliptic curve label")
    p.add_argument("--input", help="JSON file with e1/e2 models")
    p.add_argument("--bound", type=int, default=10_000)
    add_output_flags(p)
    p.set_defaults(func=cmd_parity_twist)

    p = sub.add_parser("certify", help="verify a non-density certificate")
    p.add_argument("which", nargs="?", default="quadratic",
                   choices=["quadratic", "cubic"])
    p.add_argument("--fixture", help="run a shipped certificate fixture")
    p.add_argument("--input", help="JSON file with c, d, asserted")
    add_output_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("fetch", help="resolve a curve label to a model")
    p.add_argument("label")
    p.add_argument("--online", action="store_true",
                   help="allow network access")
    p.add_argument("--cache-dir", default=None)
    add_output_flags(p)
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("selftest", help="re-derive every shipped fixture")
    p.add_argument("--window", type=int, default=boundrules.DEFAULT_WINDOW)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NeedsFact as exc:
        sys.stdout.write(canonical_json(
            {"needs_fact": {"rule": exc.rule, "fact": exc.fact}}))
        return EXIT_NEEDS_FACT
    except SchemaError as exc:
        sys.stderr.write("input error: %s\n" % exc)
        return EXIT_SCHEMA
    except (CertificateError, InconsistentFacts, ValueError, KeyError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())

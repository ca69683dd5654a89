"""Command-line front end producing deterministic JSON (or CSV) reports."""
import argparse
import csv
import hashlib
import io
import json
import random
import sys
import time

from . import __version__
from .chow import MAX_CHAIN_MONOMIALS, DivisorClass, build_ring, fraction_str
from .errors import CapacityError, ChowForgeError, ParseError
from .identities import random_nef_divisor, run_identities
from .ktheory import (
    KClass,
    canonical_class,
    chern_TM,
    chern_TM_recursive,
    chi_hrr,
    chi_zeta,
    chow_polynomial,
    todd,
    todd_product,
)
from .matroid import Matroid
from .parse import parse_divisor, render_divisor
from .positivity import (
    MAX_P1_GROUND_SET,
    beta_product_positive,
    check_ample,
    check_P1,
    check_P2,
    check_P3,
    deg_alpha_product,
    is_big_and_nef,
    kv_strong_scan,
    kv_weak_scan,
    numerical_dimension,
)

COMMANDS = ("describe", "chow", "tangent", "todd", "chi", "chow-poly", "nef-check", "dhr", "kv-scan", "identities")
EXIT_OK, EXIT_VALIDATION, EXIT_CAPACITY, EXIT_IDENTITY = 0, 2, 3, 4


class IdentityFailure(Exception):
    pass


def _labels(M, F):
    return list(M.to_labels(F))


def _ring(M, limit):
    if len(M.lattice) > limit:
        raise CapacityError(f"{len(M.lattice)} flats exceed the limit {limit}", limit=limit)
    return build_ring(M, max_monomials=limit)


def _divisor(M, args, required=True):
    source = args.divisor
    if source is None and "divisor" in args.params:
        source = args.params["divisor"]
    if source is None:
        if required:
            raise ParseError("this command needs --divisor")
        return None
    return parse_divisor(M, source)


def _element_by_degree(x):
    return {str(d): x.component(d).to_json() for d in range(x.ring.top + 1) if any(x.comps[d])}


def cmd_describe(M, args):
    lat = M.lattice
    return {
        "n": M.n,
        "rank": M.r,
        "flats_by_rank": [[_labels(M, F) for F in level] for level in lat.flats_by_rank],
        "flat_counts": lat.counts(),
        "num_bases": len(M.bases()),
        "simple": M.is_simple(),
        "coloops": [e for e in M.labels if M.is_coloop(e)],
    }


def cmd_chow(M, args):
    ring = _ring(M, args.limit)
    out = {
        "dims": ring.dims,
        "basis": [[ring.monomial_key(m) for m in level] for level in ring.basis],
        "deg_alpha_top": fraction_str(ring.degree(ring.alpha() ** ring.top)),
        "deg_beta_top": fraction_str(ring.degree(ring.beta() ** ring.top)),
    }
    D = _divisor(M, args, required=False)
    if D is not None:
        x = D.element()
        out["divisor"] = render_divisor(D)
        out["divisor_normal_form"] = x.to_json()
        out["deg_divisor_top"] = fraction_str(ring.degree(x**ring.top))
        out["numerical_dimension"] = numerical_dimension(D)
    return out


def _chi_row(M, D):
    return {
        "divisor": render_divisor(D),
        "chi_zeta": fraction_str(chi_zeta(D)),
        "chi_hrr": fraction_str(chi_hrr(KClass.line(D), M)),
    }


def _table_divisors(M, args):
    ring = _ring(M, args.limit)
    listed = args.params.get("divisors")
    if listed is not None:
        return [parse_divisor(M, s) for s in listed]
    D = _divisor(M, args, required=False)
    if D is not None:
        return [D]
    out = [DivisorClass(M, {})]
    if ring.top >= 1:
        a = DivisorClass.from_element(ring.alpha())
        b = DivisorClass.from_element(ring.beta())
        out += [a, -a, b, -b, canonical_class(M)]
    return out


def cmd_tangent(M, args):
    ring = _ring(M, args.limit)
    c = chern_TM(M)
    rec = chern_TM_recursive(M)
    if c.total != rec.total:
        raise IdentityFailure("product and recursive tangent Chern classes disagree")
    return {
        "chow_poly": chow_polynomial(M),
        "c_TM": _element_by_degree(c.total),
        "todd": _element_by_degree(todd(c)),
        "chi_table": [_chi_row(M, D) for D in _table_divisors(M, args)],
        "rank": ring.r - 1,
    }


def cmd_todd(M, args):
    _ring(M, args.limit)
    a = todd(chern_TM(M))
    b = todd_product(M)
    if a != b:
        raise IdentityFailure("universal and product Todd classes disagree")
    return {"todd": _element_by_degree(a), "forms_agree": True}


def cmd_chi(M, args):
    _ring(M, args.limit)
    D = _divisor(M, args)
    row = _chi_row(M, D)
    if row["chi_zeta"] != row["chi_hrr"]:
        raise IdentityFailure("chi pipelines disagree")
    row["value"] = row["chi_zeta"]
    return row


def cmd_chow_poly(M, args):
    _ring(M, args.limit)
    return {"coefficients": chow_polynomial(M)}


def cmd_nef_check(M, args):
    ring = _ring(M, args.limit)
    D = _divisor(M, args)
    p3, cert3 = check_P3(D)
    p2, cert2 = check_P2(D)
    out = {
        "divisor": render_divisor(D),
        "P3": p3,
        "P2": p2,
        "ample": check_ample(D),
        "big_and_nef": is_big_and_nef(D),
        "deg_top_power": fraction_str(ring.degree(D.element() ** ring.top)),
        "numerical_dimension": numerical_dimension(D),
    }
    if M.n <= MAX_P1_GROUND_SET:
        out["P1"] = check_P1(D)[0]
    want = args.params.get("certificate", "P3")
    cert = cert2 if want == "P2" else cert3
    out["certificate"] = cert.to_json() if cert is not None else None
    return out


def cmd_dhr(M, args):
    sets = args.params.get("sets") if isinstance(args.params, dict) else args.params
    if not sets or not isinstance(sets, list):
        raise ParseError("dhr needs --params with a list of subsets")
    masks = [M.to_mask(S) for S in sets]
    out = {"sets": [_labels(M, S) for S in masks], "dhr": M.dragon_hall_rado(masks)}
    if len(masks) == M.r - 1:
        _ring(M, args.limit)
        out["deg_alpha_product"] = deg_alpha_product(M, masks)
        out["beta_product_positive"] = beta_product_positive(M, masks)
    return out


def cmd_kv_scan(M, args):
    _ring(M, args.limit)
    params = args.params
    divisors = []
    if "divisors" in params:
        divisors = [parse_divisor(M, s) for s in params["divisors"]]
    D = _divisor(M, args, required=False)
    if D is not None:
        divisors.append(D)
    rng = random.Random(params.get("seed", 0))
    for _ in range(int(params.get("random", 0 if divisors else 20))):
        divisors.append(random_nef_divisor(M, rng))
    name = str(M)
    rows = []
    for D in divisors:
        text = render_divisor(D)
        nef = check_P3(D)[0]
        rows.append({"matroid": name, "divisor": text, "property": "nef", "value": str(nef).lower()})
        if not nef:
            continue
        ok, value = kv_weak_scan(D)
        rows.append({"matroid": name, "divisor": text, "property": "kv_weak", "value": fraction_str(value)})
        big = is_big_and_nef(D)
        rows.append({"matroid": name, "divisor": text, "property": "big_and_nef", "value": str(big).lower()})
        if big:
            ok, value = kv_strong_scan(D)
            rows.append({"matroid": name, "divisor": text, "property": "kv_strong", "value": fraction_str(value)})
    return {"rows": rows}


def cmd_identities(M, args):
    _ring(M, args.limit)
    results = run_identities(M, samples=int(args.params.get("samples", 5)), seed=int(args.params.get("seed", 0)))
    for r in results:
        r.pop("ms", None)
    return {"identities": results, "all_passed": all(r["passed"] for r in results)}


HANDLERS = {
    "describe": cmd_describe,
    "chow": cmd_chow,
    "tangent": cmd_tangent,
    "todd": cmd_todd,
    "chi": cmd_chi,
    "chow-poly": cmd_chow_poly,
    "nef-check": cmd_nef_check,
    "dhr": cmd_dhr,
    "kv-scan": cmd_kv_scan,
    "identities": cmd_identities,
}


def load_matroid(source):
    if source is None:
        raise ParseError("--matroid is required")
    text = source
    if not source.lstrip().startswith("{"):
        try:
            with open(source) as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read matroid file: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid matroid JSON: {exc}") from None
    return obj, Matroid.from_json(obj)


def _parse_params(text):
    if text is None:
        return {}
    if not text.lstrip().startswith(("{", "[")):
        try:
            with open(text) as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read params file: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid params JSON: {exc}") from None


def digest(report):
    body = {k: v for k, v in report.items() if k not in ("timings", "digest")}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def run(command, matroid_source, divisor=None, params=None, limit=MAX_CHAIN_MONOMIALS):
    """Execute one job and return ``(report, exit_code)``."""
    timings = {}
    inputs = {"command": command, "divisor": divisor, "params": params, "limit": limit}
    report = {"inputs": inputs, "version": __version__}
    t0 = time.perf_counter()
    try:
        if command not in HANDLERS:
            raise ParseError(f"unknown command {command!r}")
        matroid_json, M = load_matroid(matroid_source)
        inputs["matroid"] = matroid_json
        parsed = params if isinstance(params, (dict, list)) else _parse_params(params)
        args = argparse.Namespace(divisor=divisor, params=parsed if isinstance(parsed, dict) else {}, limit=limit)
        if isinstance(parsed, list):
            args.params = {"sets": parsed}
        inputs["params"] = parsed
        timings["parse_ms"] = round(1000 * (time.perf_counter() - t0), 3)
        t1 = time.perf_counter()
        report["results"] = HANDLERS[command](M, args)
        timings["compute_ms"] = round(1000 * (time.perf_counter() - t1), 3)
        code = EXIT_OK
        if command == "identities" and not report["results"]["all_passed"]:
            code = EXIT_IDENTITY
    except CapacityError as exc:
        report["error"] = exc.to_json()
        code = EXIT_CAPACITY
    except IdentityFailure as exc:
        report["error"] = {"code": "IDENTITY", "message": str(exc)}
        code = EXIT_IDENTITY
    except ChowForgeError as exc:
        report["error"] = exc.to_json()
        code = EXIT_VALIDATION
    report["timings"] = timings
    report["digest"] = digest(report)
    return report, code


def _csv(report, command):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    results = report.get("results")
    if results is None:
        writer.writerow(["code", "message"])
        writer.writerow([report["error"]["code"], report["error"]["message"]])
    elif command == "kv-scan":
        writer.writerow(["matroid", "divisor", "property", "value"])
        for row in results["rows"]:
            writer.writerow([row["matroid"], row["divisor"], row["property"], row["value"]])
    elif command == "identities":
        writer.writerow(["identity", "passed"])
        for row in results["identities"]:
            writer.writerow([row["identity"], str(row["passed"]).lower()])
    else:
        writer.writerow(["key", "value"])
        for key, value in _flatten(results):
            writer.writerow([key, value])
    return buf.getvalue()


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and all(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj) if isinstance(obj, list) else obj


def build_parser():
    p = argparse.ArgumentParser(prog="chowforge", description="Exact computations in Chow rings of matroids.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--matroid", required=True, help="matroid JSON file (or inline JSON)")
    p.add_argument("--divisor", help="divisor expression, e.g. '2*alpha - x{1,2}'")
    p.add_argument("--params", help="command parameters as JSON (inline or file)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--limit", type=int, default=MAX_CHAIN_MONOMIALS, help="cap on flats and chain monomials")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    report, code = run(args.command, args.matroid, args.divisor, args.params, args.limit)
    if args.format == "csv":
        text = _csv(report, args.command)
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if "error" in report:
        print(f"chowforge: {report['error']['code']}: {report['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

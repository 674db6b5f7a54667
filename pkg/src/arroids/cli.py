"""Command line interface: ``arroids <verb> [input] [options]``.

Inputs are arroid JSON (``{"rank", "elements", "points"}``) or arrangement
JSON (explicit ``{"curves": ...}`` or abstract ``{"elements", "records"}``);
verbs that need an arroid accept an arrangement and use its arroid.
Reports go to stdout as JSON with sorted keys, or as a short text summary.

Exit codes: 0 success, 1 the input parsed but failed a check, 2 malformed
input or options.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from .arrangement import (
    CurveArrangement,
    arroid_of,
    checks,
    cluster_analysis,
    inf_family,
    maximality_report,
    picard_rays,
    sufficient_unique_balance,
)
from .arroid import Arroid
from .errors import ArroidsError, UnknownCurve, UnknownElement, UnknownRay, ValidationFailed
from .fan import build_arroid_fan, check_balanced, reduced_star, unique_balance_at_ray, verify_modification
from .tropohom import bm_homology, check_thm, check_tpd, ses_dim_check


class InputError(Exception):
    pass


def _read(path: str) -> Any:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _is_arrangement(data) -> bool:
    return isinstance(data, dict) and ("curves" in data or "records" in data)


def _load_arrangement(data) -> CurveArrangement:
    if not _is_arrangement(data):
        raise InputError("expected an arrangement (with 'curves' or 'records')")
    try:
        return CurveArrangement.from_dict(data)
    except ArroidsError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed arrangement: {exc!r}") from None


def _load_arroid(data) -> Arroid:
    if _is_arrangement(data):
        return arroid_of(_load_arrangement(data))
    if not isinstance(data, dict) or "elements" not in data or "points" not in data:
        raise InputError("expected an arroid with 'elements' and 'points'")
    try:
        a = Arroid.from_dict(data)
    except ArroidsError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed arroid: {exc!r}") from None
    report = a.validate()
    if not report.ok:
        raise ValidationFailed(report)
    return a


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name} is required for '{args.verb}'")
    return value


def _element(a: Arroid, args) -> str:
    i = _need(args, "element")
    if i not in a.ids:
        raise UnknownElement(i)
    return i


# ------------------------------------------------------------------- verbs


def cmd_validate(args, data):
    a = _load_arroid_unchecked(data)
    report = a.validate()
    out = report.to_dict()
    out["transversal"] = a.is_transversal()
    text = f"bezout: {'ok' if report.ok else 'violated'}, transversal: {str(a.is_transversal()).lower()}"
    if not report.ok:
        text += "\n" + report.summary()
    return out, text, 0 if report.ok else 1


def _load_arroid_unchecked(data) -> Arroid:
    """Arroid without raising on a Bézout failure, so the report can be shown."""
    if _is_arrangement(data):
        arr = _load_arrangement(data)
        from .arrangement import intersect
        from .arroid import _point_from_json

        points = tuple(
            _point_from_json(list(r.members), {",".join(sorted(k)): v for k, v in r.mults.items()})
            for r in intersect(arr)
        )
        return Arroid(2, tuple(arr.elements), points)
    if not isinstance(data, dict) or "elements" not in data or "points" not in data:
        raise InputError("expected an arroid with 'elements' and 'points'")
    try:
        return Arroid.from_dict(data)
    except ArroidsError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed arroid: {exc!r}") from None


def cmd_fan(args, data):
    fan = build_arroid_fan(_load_arroid(data))
    bal = check_balanced(fan)
    out = fan.to_dict()
    out["balanced"] = bal.ok
    text = f"fan: dim {fan.dim}, {len(fan.rays)} rays, {len(fan.cones)} cones, balanced: {str(bal.ok).lower()}"
    return out, text, 0


def cmd_homology(args, data):
    fan = build_arroid_fan(_load_arroid(data))
    integral = args.coefficients == "integer"
    h = bm_homology(fan, integral)
    out = h.to_dict()
    out["coefficients"] = args.coefficients
    out["tpd"] = check_tpd(fan).to_dict()
    text = (
        f"cohomology dims: {list(h.cohomology_dims)}, BM vanishing off q={fan.dim}: "
        f"{str(h.vanishes_off_top()).lower()}, tpd: {str(out['tpd']['tpd']).lower()}"
    )
    return out, text, 0


def cmd_thm(args, data):
    fan = build_arroid_fan(_load_arroid(data))
    rep = check_thm(fan)
    dims = sorted(set(rep.balancing_dims.values()))
    if dims == [1]:
        detail = "per-ray balancing dims all 1"
    else:
        detail = "failing rays " + ", ".join(
            f"{r} (dim {rep.balancing_dims[r]})" for r in rep.failing_rays
        )
    return rep.to_dict(), f"thm: {str(rep.thm).lower()}, {detail}", 0


def cmd_star(args, data):
    a = _load_arroid(data)
    fan = build_arroid_fan(a)
    ray = args.ray or (f"r:{_element(a, args)}" if args.element else None)
    if ray is None:
        raise InputError("--ray or --element is required for 'star'")
    star = reduced_star(fan, ray)
    out = star.to_dict()
    out["ray"] = ray
    if fan.dim == 2:
        out["balancing_dim"] = unique_balance_at_ray(fan, ray).dim
    text = f"star at {ray}: " + ", ".join(f"{r.label} {list(r.vector)}" for r in star.rays)
    return out, text, 0


def cmd_contract(args, data):
    a = _load_arroid(data)
    b = a.contract(_element(a, args))
    return b.to_dict(), f"contraction: rank 1, {len(b.elements)} elements, {len(b.points)} points", 0


def cmd_delete(args, data):
    a = _load_arroid(data)
    b = a.delete(_element(a, args))
    return b.to_dict(), f"deletion: {len(b.elements)} elements, {len(b.points)} points", 0


def cmd_modify_check(args, data):
    a = _load_arroid(data)
    i = _element(a, args)
    rep = verify_modification(a, i)
    out = rep.to_dict()
    out["ses"] = ses_dim_check(a, i).to_dict()
    text = (
        f"modification at {i}: {str(rep.ok).lower()} (star = contraction: "
        f"{str(rep.star_is_contraction).lower()}, fibers: {str(rep.fibers_ok).lower()})"
    )
    return out, text, 0 if rep.ok else 1


def cmd_tropicalize(args, data):
    arr = _load_arrangement(data)
    pic = picard_rays(arr)
    out = pic.to_dict()
    text = "minimal rays: " + ", ".join(
        f"{lab} {list(col)}" for lab, col in zip(pic.minimal_labels, zip(*pic.minimal_rays))
    )
    return out, text, 0


def cmd_clusters(args, data):
    arr = _load_arrangement(data)
    curve = _need(args, "curve")
    if curve not in arr.ids:
        raise UnknownCurve(curve)
    ca = cluster_analysis(arr, curve)
    out = ca.to_dict()
    out["unique_balance"] = sufficient_unique_balance(arr, curve)
    groups = "; ".join("{" + ", ".join(c.curves) + "}" for c in ca.clusters)
    return out, f"clusters on {curve}: {groups}; unique balance {out['unique_balance']}", 0


def cmd_maximality(args, data):
    arr = _load_arrangement(data)
    rep = maximality_report(arr)
    out = rep.to_dict()
    out["flags"] = checks(arr).to_dict()
    if rep.failing:
        text = f"no claim: failing {', '.join(rep.failing)}"
    else:
        text = f"maximal: b0 = {rep.real_b0} = {' + '.join(map(str, rep.tropical_betti))}"
    return out, text, 0


def cmd_gen_inf_family(args, data):
    if args.k is None or args.k < 0:
        raise InputError("k must be a non-negative integer")
    arr = inf_family(args.k)
    return arr.to_dict(), f"inf family k={args.k}: {len(arr.ids)} curves, {len(arr.abstract_records)} records", 0


VERBS = {
    "validate": cmd_validate,
    "fan": cmd_fan,
    "homology": cmd_homology,
    "thm": cmd_thm,
    "star": cmd_star,
    "contract": cmd_contract,
    "delete": cmd_delete,
    "modify-check": cmd_modify_check,
    "tropicalize": cmd_tropicalize,
    "clusters": cmd_clusters,
    "maximality": cmd_maximality,
    "gen-inf-family": cmd_gen_inf_family,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arroids", description="Arroids, their tropical fans and tropical homology.")
    p.add_argument("verb", choices=sorted(VERBS))
    p.add_argument("input", nargs="?", help="input JSON path, '-' for stdin; k for gen-inf-family")
    p.add_argument("-e", "--element", help="element id")
    p.add_argument("--ray", help="ray label for 'star'")
    p.add_argument("--curve", help="curve id for 'clusters'")
    p.add_argument("--coefficients", choices=("rational", "integer"), default="rational")
    p.add_argument("--output", "--format", dest="output", choices=("json", "text"), default="json")
    return p


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.output
        if args.verb == "gen-inf-family":
            try:
                args.k = int(args.input) if args.input is not None else None
            except ValueError:
                raise InputError("k must be an integer") from None
            data = None
        else:
            if args.input is None:
                raise InputError("an input path is required")
            data = _read(args.input)
        out, text, code = VERBS[args.verb](args, data)
    except (InputError, UnknownElement, UnknownRay, UnknownCurve) as exc:
        return _fail(stdout, fmt, "malformed_input", exc, 2)
    except ValidationFailed as exc:
        out = {"error": "validation_failed", "report": exc.report.to_dict()}
        stdout.write(dumps(out) if fmt == "json" else f"error: {exc}\n")
        return 1
    except ArroidsError as exc:
        return _fail(stdout, fmt, type(exc).__name__, exc, 1)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        return _fail(stdout, fmt, "malformed_input", exc, 2)
    stdout.write(dumps(out) if fmt == "json" else text + "\n")
    return code


def _fail(stdout, fmt, kind, exc, code) -> int:
    msg = str(exc.args[0]) if exc.args else type(exc).__name__
    if fmt == "json":
        stdout.write(dumps({"error": kind, "message": msg}))
    else:
        stdout.write(f"error ({kind}): {msg}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

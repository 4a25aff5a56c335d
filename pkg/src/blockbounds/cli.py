"""Command-line front end.

Exit status: 0 success, 1 a mathematical check failed, 2 input error.
All numeric output shows the exact rational alongside a decimal
approximation; ``--format records`` emits deterministic JSON instead.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import fixtures as fixture_lib
from .bounds import (
    BoundReport,
    ComparisonReport,
    SubsectionSpec,
    compare_all,
    dade_cyclic_bound,
    k0_semidirect,
)
from .exactmat import (
    CartanData,
    DomainError,
    RationalMatrix,
    ShapeError,
    matrix_from_record,
    matrix_to_record,
)
from .gendec import (
    GenDecData,
    InconsistentDataError,
    VerificationReport,
    cyc_reduce,
    verify_all,
)
from .lattice import DEFAULT_DIM_CAP, form_minimum
from .weights import (
    CertificationError,
    PermutationAction,
    WeightMatrix,
    block_tridiagonal_weight,
    from_quadratic_form,
    wada_weight,
    weight_candidates,
)


class InputError(ValueError):
    """Malformed input file or arguments."""


MATH_ERRORS = (CertificationError, InconsistentDataError, AssertionError)


@dataclass
class BlockBundle:
    """Validated contents of a bounds bundle file."""

    label: str
    cartan_b: CartanData
    spec: SubsectionSpec
    forms: list
    ordering: tuple | None
    partition: tuple | None
    known_kb: int | None
    gendec: GenDecData | None = None
    heights: list | None = None


def _approx(x: Fraction) -> float:
    return float(x)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _require(record: dict, field: str, path: str):
    if field not in record:
        raise InputError(f"{path}: missing field '{field}'")
    return record[field]


def _load_action(arrays, degree: int, path: str) -> PermutationAction | None:
    if arrays is None:
        return None
    gens = []
    for arr in arrays:
        if sorted(arr) != list(range(1, degree + 1)):
            raise InputError(
                f"{path}: permutation {arr} is not 1-indexed of degree {degree}"
            )
        gens.append(tuple(x - 1 for x in arr))
    return PermutationAction(degree, gens)


def _load_cartan(record: dict, p: int, q: int, defect, path: str) -> CartanData:
    normalization = _require(record, "normalization", path)
    if normalization not in ("b", "b_bar"):
        raise InputError(f"{path}: normalization must be 'b' or 'b_bar'")
    matrix = matrix_from_record(_require(record, "matrix", path))
    if normalization == "b_bar":
        matrix = matrix.scale(q)
    try:
        return CartanData(matrix, p, defect)
    except DomainError as exc:
        raise InputError(f"{path}: bad Cartan matrix: {exc}") from exc


def _load_spec(record: dict, l: int, path: str) -> SubsectionSpec:
    p = _require(record, "p", path)
    q = _require(record, "q", path)
    gens = record.get("n_generators") or ()
    action = _load_action(record.get("ibr_action"), l, path)
    try:
        return SubsectionSpec(p, q, gens, action)
    except DomainError as exc:
        raise InputError(f"{path}: bad subsection data: {exc}") from exc


def _load_gendec(record: dict, path: str, spec=None, l_hint=None) -> tuple:
    """Returns (GenDecData, CartanData of the dominated block, heights)."""
    q = _require(record, "q", path)
    p = _require(record, "p", path)
    k = _require(record, "k", path)
    l = _require(record, "l", path)
    spec_rec = _require(record, "spec", path)
    if spec_rec.get("p", p) != p or spec_rec.get("q", q) != q:
        raise InputError(f"{path}: spec sub-record disagrees on p or q")
    spec = _load_spec({**spec_rec, "p": p, "q": q}, l, path)
    c_bar = _load_cartan(
        _require(spec_rec, "cartan", path), p, q, spec_rec.get("defect"), path
    )
    if c_bar.l != l:
        raise InputError(f"{path}: cartan size {c_bar.l} does not match l = {l}")
    qm = _require(record, "q_matrix", path)
    from .ntheory import euler_phi_prime_power

    phi = euler_phi_prime_power(q)
    if "stack" in qm:
        stack = [matrix_from_record(m) for m in qm["stack"]]
    elif "powers" in qm:
        rows = qm["powers"]
        if len(rows) != k or any(len(r) != l for r in rows):
            raise InputError(f"{path}: powers array is not {k}x{l}")
        entries = [
            [cyc_reduce({int(e): c for e, c in cell.items()}, q) for cell in row]
            for row in rows
        ]
        stack = [
            RationalMatrix(
                [[entries[r][c].coeffs[i] for c in range(l)] for r in range(k)]
            )
            for i in range(phi)
        ]
    else:
        raise InputError(f"{path}: q_matrix needs 'stack' or 'powers'")
    try:
        data = GenDecData(stack, spec)
    except DomainError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if data.k != k or data.l != l:
        raise InputError(
            f"{path}: declared shape {k}x{l} does not match data "
            f"{data.k}x{data.l}"
        )
    heights = record.get("heights")
    if heights is not None and len(heights) != k:
        raise InputError(f"{path}: need one height per row")
    return data, _divide_cartan(c_bar, q), heights


def _divide_cartan(c_b: CartanData, q: int) -> CartanData:
    """The loader stores b's Cartan matrix; verifiers want the dominated one."""
    if q == 1:
        return c_b
    scaled = c_b.matrix.scale(Fraction(1, q))
    if not scaled.is_integral():
        raise InputError(
            f"Cartan matrix is not divisible by q = {q}; bundle is inconsistent"
        )
    return CartanData(scaled, c_b.p)


def _load_bundle(path: str) -> BlockBundle:
    rec = _load_json(path)
    p = _require(rec, "p", path)
    q = _require(rec, "q", path)
    cartan_rec = _require(rec, "cartan", path)
    matrix = matrix_from_record(_require(cartan_rec, "matrix", path))
    l = matrix.rows
    spec = _load_spec(rec, l, path)
    cartan_b = _load_cartan(cartan_rec, p, q, rec.get("defect"), path)
    ordering = rec.get("ordering")
    if ordering is not None:
        ordering = tuple(x - 1 for x in ordering)
    partition = rec.get("partition")
    if partition is not None:
        partition = tuple(tuple(x - 1 for x in blk) for blk in partition)
    gendec = None
    heights = None
    if rec.get("gendec") is not None:
        gendec, gd_cbar, heights = _load_gendec(rec["gendec"], path)
        if gendec.q != q or gendec.p != p or gendec.l != l:
            raise InputError(f"{path}: gendec sub-record disagrees with the bundle")
        if gd_cbar.matrix != _divide_cartan(cartan_b, q).matrix:
            raise InputError(f"{path}: gendec Cartan disagrees with the bundle")
    return BlockBundle(
        label=rec.get("label", path),
        cartan_b=cartan_b,
        spec=spec,
        forms=rec.get("forms") or [],
        ordering=ordering,
        partition=partition,
        known_kb=rec.get("known_kb"),
        gendec=gendec,
        heights=heights,
    )


def _report_record(rep: BoundReport) -> dict:
    out = {
        "name": rep.name,
        "target": rep.target,
        "value": str(rep.value),
        "approx": _approx(rep.value),
        "integer_bound": rep.integer_bound,
        "citation": rep.citation,
        "inputs": {k: v for k, v in rep.inputs},
        "strict": {k: v for k, v in rep.strict},
        "notes": list(rep.notes),
    }
    if rep.weak_value is not None:
        out["weak_value"] = str(rep.weak_value)
    return out


def _comparison_record(label: str, report: ComparisonReport) -> dict:
    return {
        "label": label,
        "rows": [_report_record(r) for r in report.rows],
        "best_k": None if report.best_k is None else _report_record(report.best_k),
        "best_k0": None if report.best_k0 is None else _report_record(report.best_k0),
        "notes": list(report.notes),
    }


def _print_comparison_table(label: str, report: ComparisonReport):
    print(f"bounds for {label}")
    width = max(len(r.name) for r in report.rows)
    for r in report.rows:
        star = " *" if r in (report.best_k, report.best_k0) else "  "
        flags = " ".join(k for k, v in r.strict if v)
        extra = f"  [{flags}]" if flags else ""
        print(
            f"  {r.name:<{width}}  {r.target:<6} "
            f"{str(r.value):>10}  (~{_approx(r.value):g}, floor {r.integer_bound})"
            f"{star}{extra}"
        )
    for note in report.notes:
        print(f"  note: {note}")
    if report.best_k is not None:
        print(f"  best k(B) bound:  {report.best_k.value} ({report.best_k.name})")
    if report.best_k0 is not None:
        print(f"  best k0(B) bound: {report.best_k0.value} ({report.best_k0.name})")


def _print_verification(report: VerificationReport, as_records: bool) -> int:
    if as_records:
        payload = {
            "ok": report.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in report.checks
            ],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for c in report.checks:
            mark = "PASS" if c.passed else "FAIL"
            detail = f"  {c.detail}" if c.detail else ""
            print(f"{mark} {c.name}{detail}")
        print(f"{'all checks passed' if report.ok else 'CHECKS FAILED'}")
    return 0 if report.ok else 1


def _weight_record(w: WeightMatrix) -> dict:
    return {
        "matrix": matrix_to_record(w.matrix),
        "provenance": w.provenance,
        "minimum": str(w.certificate.value),
        "witness": list(w.certificate.witness),
        "num_minimizers": w.certificate.num_minimizers,
    }


def _emit(payload: dict, output: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {output}")
    else:
        print(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blockbounds")
    sub = parser.add_subparsers(dest="group", required=True)

    bounds_p = sub.add_parser("bounds", help="bound comparison reports")
    bsub = bounds_p.add_subparsers(dest="command", required=True)
    cmp_p = bsub.add_parser("compare", help="evaluate every applicable bound")
    cmp_p.add_argument("--input", required=True, help="bundle file (JSON)")
    cmp_p.add_argument("--format", choices=["table", "records"], default="table")
    cmp_p.add_argument("--max-dim", type=int, default=DEFAULT_DIM_CAP)

    lat_p = sub.add_parser("lattice", help="quadratic form minima")
    lsub = lat_p.add_subparsers(dest="command", required=True)
    min_p = lsub.add_parser("min", help="exact minimum over nonzero integer vectors")
    min_p.add_argument("--input", required=True, help="Gram matrix file (JSON)")
    min_p.add_argument("--format", choices=["table", "records"], default="table")
    min_p.add_argument("--max-dim", type=int, default=DEFAULT_DIM_CAP)

    w_p = sub.add_parser("weights", help="weight matrix constructions")
    wsub = w_p.add_subparsers(dest="command", required=True)
    build_p = wsub.add_parser("build")
    build_p.add_argument(
        "--kind", choices=["un", "blowup", "form", "candidates"], required=True
    )
    build_p.add_argument("--n", type=int, help="size for --kind un")
    build_p.add_argument("--input", help="input file (matrix, form triples or Cartan)")
    build_p.add_argument("--perm", help="1-indexed images, comma separated (blowup)")
    build_p.add_argument("--blocks", type=int, help="block count (blowup)")
    build_p.add_argument("--p", type=int, help="prime for --kind candidates")
    build_p.add_argument("--action", help="action file for --kind candidates")
    build_p.add_argument("--output", help="write JSON here instead of stdout")
    build_p.add_argument("--max-dim", type=int, default=DEFAULT_DIM_CAP)

    g_p = sub.add_parser("gendec", help="decomposition data verification")
    gsub = g_p.add_subparsers(dest="command", required=True)
    ver_p = gsub.add_parser("verify", help="run all structural identity checks")
    ver_p.add_argument("--input", required=True)
    ver_p.add_argument("--format", choices=["table", "records"], default="table")

    k0_p = sub.add_parser("k0", help="height-zero count of <u> x| N")
    k0_p.add_argument("--p", type=int, required=True)
    k0_p.add_argument("--q", type=int, required=True)
    k0_p.add_argument("--n-gen", type=int, nargs="*", default=[])
    k0_p.add_argument("--format", choices=["table", "records"], default="table")

    f_p = sub.add_parser("fixtures", help="built-in data sets")
    fsub = f_p.add_subparsers(dest="command", required=True)
    fsub.add_parser("list")
    emit_p = fsub.add_parser("emit")
    emit_p.add_argument("name", choices=sorted(fixture_lib.FIXTURES))
    emit_p.add_argument("--output", help="target path (default <name>.json)")

    return parser


def _parse_triples(data, path: str) -> list:
    try:
        return [(int(i), int(j), int(v)) for i, j, v in data]
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: form must be a list of [i, j, q_ij] triples") from exc


def _cmd_bounds_compare(args) -> int:
    bundle = _load_bundle(args.input)
    report = compare_all(
        bundle.cartan_b,
        bundle.spec,
        forms=[_parse_triples(f, args.input) for f in bundle.forms],
        ordering=bundle.ordering,
        partition=bundle.partition,
        known_kb=bundle.known_kb,
        max_dim=args.max_dim,
    )
    notes = list(report.notes)
    status = 0
    if bundle.gendec is not None:
        ver = verify_all(bundle.gendec, _divide_cartan(bundle.cartan_b, bundle.spec.q),
                         bundle.heights)
        notes.append(
            "gendec verification passed"
            if ver.ok
            else f"gendec verification FAILED: {ver.failures()[0].detail}"
        )
        if not ver.ok:
            status = 1
    report = ComparisonReport(
        rows=report.rows, best_k=report.best_k, best_k0=report.best_k0,
        notes=tuple(notes),
    )
    if args.format == "records":
        print(json.dumps(_comparison_record(bundle.label, report), indent=2,
                         sort_keys=True))
    else:
        _print_comparison_table(bundle.label, report)
    return status


def _cmd_lattice_min(args) -> int:
    matrix = matrix_from_record(_load_json(args.input))
    try:
        result = form_minimum(matrix, max_dim=args.max_dim)
    except DomainError as exc:
        raise InputError(f"{args.input}: {exc}") from exc
    payload = {
        "minimum": str(result.value),
        "approx": _approx(result.value),
        "witness": list(result.witness),
        "num_minimizers": result.num_minimizers,
    }
    if args.format == "records":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"minimum {result.value} (~{_approx(result.value):g}) "
              f"at {list(result.witness)} ({result.num_minimizers} minimizers up to sign)")
    return 0


def _cmd_weights_build(args) -> int:
    kind = args.kind
    if kind == "un":
        if args.n is None:
            raise InputError("--kind un needs --n")
        w = wada_weight(args.n, max_dim=args.max_dim)
        _emit(_weight_record(w), args.output)
        return 0
    if kind == "form":
        if args.input is None:
            raise InputError("--kind form needs --input")
        triples = _parse_triples(_load_json(args.input), args.input)
        w = from_quadratic_form(triples, max_dim=args.max_dim)
        _emit(_weight_record(w), args.output)
        return 0
    if kind == "blowup":
        if args.input is None or args.perm is None or args.blocks is None:
            raise InputError("--kind blowup needs --input, --perm and --blocks")
        matrix = matrix_from_record(_load_json(args.input))
        images = [int(x) for x in args.perm.split(",")]
        if sorted(images) != list(range(1, matrix.rows + 1)):
            raise InputError(f"--perm {args.perm} is not 1-indexed of degree {matrix.rows}")
        perm = tuple(x - 1 for x in images)
        try:
            w = block_tridiagonal_weight(matrix, perm, args.blocks,
                                         max_dim=args.max_dim)
        except DomainError as exc:
            raise InputError(str(exc)) from exc
        _emit(_weight_record(w), args.output)
        return 0
    # candidates
    if args.input is None or args.p is None:
        raise InputError("--kind candidates needs --input and --p")
    matrix = matrix_from_record(_load_json(args.input))
    try:
        cartan = CartanData(matrix, args.p)
    except DomainError as exc:
        raise InputError(f"{args.input}: {exc}") from exc
    action = None
    if args.action:
        arrays = _load_json(args.action)
        action = _load_action(arrays, matrix.rows, args.action)
    ranked = weight_candidates(cartan, action, max_dim=args.max_dim)
    payload = {
        "candidates": [
            {"provenance": w.provenance, "trace": str(tr), "approx": _approx(tr),
             "minimum": str(w.certificate.value),
             "matrix": matrix_to_record(w.matrix)}
            for w, tr in ranked
        ]
    }
    _emit(payload, args.output)
    return 0


def _cmd_gendec_verify(args) -> int:
    data, c_bar, heights = _load_gendec(_load_json(args.input), args.input)
    report = verify_all(data, c_bar, heights)
    return _print_verification(report, args.format == "records")


def _cmd_k0(args) -> int:
    try:
        spec = SubsectionSpec(args.p, args.q, tuple(args.n_gen))
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    value = k0_semidirect(spec)
    if args.format == "records":
        print(json.dumps({"k0": value, "n": spec.n, "p": args.p, "q": args.q},
                         indent=2, sort_keys=True))
    else:
        print(value)
    return 0


def _cmd_fixtures(args) -> int:
    if args.command == "list":
        for name in sorted(fixture_lib.FIXTURES):
            _, desc = fixture_lib.FIXTURES[name]
            print(f"{name:<16} {desc}")
        return 0
    builder, _ = fixture_lib.FIXTURES[args.name]
    path = args.output or f"{args.name}.json"
    with open(path, "w") as fh:
        fh.write(json.dumps(builder(), indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")
    return 0


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.group == "bounds":
            return _cmd_bounds_compare(args)
        if args.group == "lattice":
            return _cmd_lattice_min(args)
        if args.group == "weights":
            return _cmd_weights_build(args)
        if args.group == "gendec":
            return _cmd_gendec_verify(args)
        if args.group == "k0":
            return _cmd_k0(args)
        if args.group == "fixtures":
            return _cmd_fixtures(args)
        raise InputError(f"unknown command group {args.group}")
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except MATH_ERRORS as exc:
        print(f"mathematical check failed: {exc}", file=sys.stderr)
        return 1
    except (DomainError, ShapeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command-line surface: every computation with machine-readable output.

Exit codes: 0 success, 1 a computation reported a violated expectation,
2 invalid input, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .exact import Matrix
from .invariants import (
    ResourceLimitError,
    generator_set,
    solution_space_equals_perp,
    test_curve_system,
    verify_generator_suite,
)
from .jets import (
    JetMap,
    gk_entry,
    gkp_entry,
    group_matrix,
    random_jet,
    symbolic_jet,
    symbolic_reparam,
)
from .embedding import phi
from .orbits import (
    codim_report,
    distinguished_twisted_point,
    infinitesimal_stabilizer,
    limit_of_distinguished,
    probe_stabilizer_conjecture,
    z_closed_form,
)
from .symbasis import sym_basis, sym_dim

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_BAD_INPUT = 2
EXIT_RESOURCE = 3


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    if getattr(args, "json", False):
        print(text)
        return
    _print_human(payload)


def _print_human(payload: dict, indent: str = "") -> None:
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _print_human(value, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{indent}{key}:")
            for item in value:
                print(f"{indent}  -")
                _print_human(item, indent + "    ")
        else:
            print(f"{indent}{key}: {value}")


def _matrix_json(m: Matrix) -> list[list[str]]:
    return m.to_strings()


def cmd_group_matrix(args) -> int:
    p, k = args.p, args.k
    if p < 1 or k < 1:
        print("need p >= 1 and k >= 1", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.params:
        if p != 1:
            print("--params supports p = 1; use --symbolic for p > 1", file=sys.stderr)
            return EXIT_BAD_INPUT
        try:
            vals = [Fraction(x) for x in args.params.split(",")]
        except (ValueError, ZeroDivisionError):
            print("malformed --params", file=sys.stderr)
            return EXIT_BAD_INPUT
        if len(vals) != k or vals[0] == 0:
            print("--params needs k values with nonzero first", file=sys.stderr)
            return EXIT_BAD_INPUT
        jet = JetMap(1, 1, k, {(i,): (vals[i - 1],) for i in range(1, k + 1)})
        m = group_matrix(jet)
        payload = {"p": p, "k": k, "matrix": _matrix_json(m)}
        _emit(payload, args)
        return EXIT_OK
    psi, ring = symbolic_reparam(p, k)
    m = group_matrix(psi)
    payload = {
        "p": p,
        "k": k,
        "basis": [list(mm) for mm in sym_basis(p, k).monomials],
        "matrix": _matrix_json(m),
    }
    if args.closed_form:
        basis = sym_basis(p, k)
        match = True
        for i, tau in enumerate(basis.monomials):
            for j, nu in enumerate(basis.monomials):
                if p == 1:
                    expected = gk_entry(len(tau), len(nu), ring)
                else:
                    expected = gkp_entry(tau, nu, p, k, ring)
                if m.data[i][j] != expected:
                    match = False
        payload["closed_form_matches_oracle"] = match
        _emit(payload, args)
        return EXIT_OK if match else EXIT_VIOLATION
    _emit(payload, args)
    return EXIT_OK


def cmd_phi(args) -> int:
    p, k, n = args.p, args.k, args.n
    if min(p, k, n) < 1:
        print("need positive sizes", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.symbolic:
        jet, _ = symbolic_jet(p, n, k)
    else:
        rng = random.Random(args.seed)
        jet = random_jet(rng, p, n, k, bound=args.coeff_bound, regular=True)
    pm = phi(jet)
    cols = {}
    for i, s in enumerate(pm.col_index):
        entries = {}
        for rpos in sorted(pm.columns[i]):
            mono = pm.basis.monomial_at(rpos)
            entries[str(list(mono))] = str(pm.columns[i][rpos])
        cols["[" + ",".join(map(str, s)) + "]"] = entries
    payload = {"p": p, "k": k, "n": n, "columns": cols}
    if not args.symbolic:
        payload["jet"] = jet.to_json()
    _emit(payload, args)
    return EXIT_OK


def cmd_generators(args) -> int:
    try:
        gens = generator_set(args.n, args.k, args.p, limit=None if args.force else 20000)
    except ResourceLimitError as e:
        print(str(e), file=sys.stderr)
        return EXIT_RESOURCE
    by_degree: dict[str, int] = {}
    for g in gens:
        key = str(g.weighted_degree)
        by_degree[key] = by_degree.get(key, 0) + 1
    payload = {
        "n": args.n,
        "k": args.k,
        "p": args.p,
        "count": len(gens),
        "count_per_degree": by_degree,
        "generators": [g.to_json() for g in gens],
    }
    code = EXIT_OK
    if args.verify:
        report = verify_generator_suite(gens, trials=args.trials, seed=args.seed)
        payload["verification"] = report
        if not report["ok"]:
            code = EXIT_VIOLATION
    _emit(payload, args)
    return code


def cmd_test_curve(args) -> int:
    p, k, n, N = args.p, args.k, args.n, args.N
    if args.symbolic:
        jet, _ = symbolic_jet(p, n, k)
        sysm = test_curve_system(jet, N)
        rows = {}
        for (m, c), row in zip(sysm.row_index, sysm.matrix.data):
            terms = []
            for (s, c2), entry in zip(sysm.col_index, row):
                if c2 == c and str(entry) != "0":
                    terms.append(
                        {"psi_index": list(s), "coefficient": str(entry)}
                    )
            rows["[" + ",".join(map(str, m)) + f"]@{c}"] = terms
        payload = {"p": p, "k": k, "n": n, "N": N, "rows": rows}
        _emit(payload, args)
        return EXIT_OK
    rng = random.Random(args.seed)
    jet = random_jet(rng, p, n, k, bound=args.coeff_bound, regular=True)
    sysm = test_curve_system(jet, N)
    expected = N * sym_dim(p, k)
    perp = solution_space_equals_perp(jet, N)
    payload = {
        "p": p,
        "k": k,
        "n": n,
        "N": N,
        "jet": jet.to_json(),
        "rank": sysm.rank(),
        "expected_codimension": expected,
        "solution_space_equals_perp": perp,
    }
    _emit(payload, args)
    if sysm.rank() != expected or not perp:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_orbit(args) -> int:
    try:
        if args.orbit_cmd == "limit":
            eps = Fraction(args.eps) if args.eps else None
            w = limit_of_distinguished(args.sigma, args.k, _kind(args.kind), eps=eps,
                                       force=args.force)
            _emit(w.to_json(), args)
            return EXIT_OK
        if args.orbit_cmd == "closed-form":
            z = z_closed_form(args.sigma, args.k, _kind(args.kind), force=args.force)
            lim = limit_of_distinguished(args.sigma, args.k, _kind(args.kind),
                                         force=args.force)
            payload = z.to_json()
            payload["matches_limit"] = z == lim
            _emit(payload, args)
            return EXIT_OK if z == lim else EXIT_VIOLATION
        if args.orbit_cmd == "stabilizer":
            tp = distinguished_twisted_point(1, args.k, args.M)
            res = infinitesimal_stabilizer(tp, algebra="sl", mode="affine")
            payload = {
                "k": args.k,
                "M": args.M,
                "dimension": res.dimension,
                "expected": args.k - 1,
            }
            _emit(payload, args)
            return EXIT_OK if res.dimension == args.k - 1 else EXIT_VIOLATION
        if args.orbit_cmd == "codim-report":
            rep = codim_report(args.k, args.M, force=args.force)
            _emit(rep, args)
            if args.k >= 4 and not rep["all_bounds_ok"]:
                return EXIT_VIOLATION
            return EXIT_OK
        if args.orbit_cmd == "probe-p":
            rep = probe_stabilizer_conjecture(args.p, args.k, args.M, force=args.force)
            _emit(rep, args)
            return EXIT_OK
    except ResourceLimitError as e:
        print(str(e), file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return EXIT_BAD_INPUT
    print("unknown orbit subcommand", file=sys.stderr)
    return EXIT_BAD_INPUT


def _kind(kind: str) -> str:
    return {"lambda": "regular", "mu": "degenerate"}[kind]


# -- golden fixtures ---------------------------------------------------------


def compute_fixtures() -> dict[str, dict]:
    """The worked small cases, in canonical serialized form."""
    out: dict[str, dict] = {}

    psi23, _ = symbolic_reparam(2, 3)
    m = group_matrix(psi23)
    out["example_2_1"] = {
        "p": 2,
        "k": 3,
        "basis": [list(mm) for mm in sym_basis(2, 3).monomials],
        "matrix": _matrix_json(m),
    }

    jet22, _ = symbolic_jet(1, 2, 2)
    pm = phi(jet22)
    out["example_7_4"] = {
        "n": 2,
        "k": 2,
        "phi": _phi_json(pm),
        "minors": sorted(
            str(g.poly.normalized()) for g in generator_set(2, 2, 1) if g.weighted_degree == 3
        ),
        "coordinates": sorted(
            str(g.poly) for g in generator_set(2, 2, 1) if g.weighted_degree == 1
        ),
    }

    jet33, _ = symbolic_jet(1, 3, 3)
    out["example_7_5"] = {"n": 3, "k": 3, "phi": _phi_json(phi(jet33))}

    jet87, _ = symbolic_jet(2, 2, 2, prefix="v")
    out["example_8_7"] = {"p": 2, "k": 2, "n": 2, "phi": _phi_json(phi(jet87))}
    return out


def _phi_json(pm) -> dict:
    cols = {}
    for i, s in enumerate(pm.col_index):
        entries = {}
        for rpos in sorted(pm.columns[i]):
            mono = pm.basis.monomial_at(rpos)
            entries[",".join(map(str, mono))] = str(pm.columns[i][rpos])
        cols[",".join(map(str, s))] = entries
    return cols


def cmd_fixtures(args) -> int:
    directory = Path(args.dir)
    fixtures = compute_fixtures()
    if args.fixtures_cmd == "regenerate":
        directory.mkdir(parents=True, exist_ok=True)
        for name, payload in fixtures.items():
            path = directory / f"{name}.json"
            path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
            print(f"wrote {path}")
        return EXIT_OK
    mismatches = []
    for name, payload in fixtures.items():
        path = directory / f"{name}.json"
        if not path.exists():
            mismatches.append(f"{name}: missing stored fixture")
            continue
        stored = json.loads(path.read_text())
        if stored != payload:
            mismatches.append(f"{name}: stored fixture differs from current output")
    if mismatches:
        for line in mismatches:
            print(line, file=sys.stderr)
        return EXIT_VIOLATION
    print(f"{len(fixtures)} fixtures match")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetinv",
        description="Exact computations for reparametrization-invariant jets",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="print JSON instead of a table")
        p.add_argument("--out", help="also write JSON to this file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--coeff-bound", type=int, default=20, dest="coeff_bound")
        p.add_argument("--force", action="store_true", help="override resource limits")

    gm = sub.add_parser("group-matrix", help="matrix of the reparametrization action")
    gm.add_argument("--p", type=int, default=1)
    gm.add_argument("--k", type=int, required=True)
    gm.add_argument("--symbolic", action="store_true")
    gm.add_argument("--params", help="comma-separated rational coefficients (p=1)")
    gm.add_argument("--closed-form", action="store_true", dest="closed_form")
    common(gm)
    gm.set_defaults(func=cmd_group_matrix)

    ph = sub.add_parser("phi", help="embedded matrix of a jet")
    ph.add_argument("--p", type=int, default=1)
    ph.add_argument("--k", type=int, required=True)
    ph.add_argument("--n", type=int, required=True)
    ph.add_argument("--symbolic", action="store_true")
    common(ph)
    ph.set_defaults(func=cmd_phi)

    ge = sub.add_parser("generators", help="invariant generator set")
    ge.add_argument("--n", type=int, required=True)
    ge.add_argument("--k", type=int, required=True)
    ge.add_argument("--p", type=int, default=1)
    ge.add_argument("--verify", action="store_true")
    ge.add_argument("--trials", type=int, default=100)
    common(ge)
    ge.set_defaults(func=cmd_generators)

    tc = sub.add_parser("test-curve", help="vanishing linear system of a jet")
    tc.add_argument("--p", type=int, default=1)
    tc.add_argument("--k", type=int, required=True)
    tc.add_argument("--n", type=int, required=True)
    tc.add_argument("--N", type=int, default=1)
    tc.add_argument("--symbolic", action="store_true")
    common(tc)
    tc.set_defaults(func=cmd_test_curve)

    orb = sub.add_parser("orbit", help="one-parameter-subgroup limit analysis")
    orbsub = orb.add_subparsers(dest="orbit_cmd", required=True)
    ol = orbsub.add_parser("limit")
    ol.add_argument("--k", type=int, required=True)
    ol.add_argument("--sigma", type=int, required=True)
    ol.add_argument("--kind", choices=["lambda", "mu"], required=True)
    ol.add_argument("--eps", help="rational epsilon instead of the formal symbol")
    common(ol)
    ol.set_defaults(func=cmd_orbit)
    oc = orbsub.add_parser("closed-form")
    oc.add_argument("--k", type=int, required=True)
    oc.add_argument("--sigma", type=int, required=True)
    oc.add_argument("--kind", choices=["lambda", "mu"], required=True)
    common(oc)
    oc.set_defaults(func=cmd_orbit)
    os_ = orbsub.add_parser("stabilizer")
    os_.add_argument("--k", type=int, required=True)
    os_.add_argument("--M", type=int, default=1)
    common(os_)
    os_.set_defaults(func=cmd_orbit)
    ocr = orbsub.add_parser("codim-report")
    ocr.add_argument("--k", type=int, required=True)
    ocr.add_argument("--M", type=int, default=1)
    common(ocr)
    ocr.set_defaults(func=cmd_orbit)
    op = orbsub.add_parser("probe-p")
    op.add_argument("--p", type=int, required=True)
    op.add_argument("--k", type=int, required=True)
    op.add_argument("--M", type=int, default=1)
    common(op)
    op.set_defaults(func=cmd_orbit)

    fx = sub.add_parser("fixtures", help="golden fixtures for the worked examples")
    fxsub = fx.add_subparsers(dest="fixtures_cmd", required=True)
    for name in ("regenerate", "check"):
        f = fxsub.add_parser(name)
        f.add_argument("--dir", default="tests/fixtures")
        common(f)
        f.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as e:
        print(str(e), file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())

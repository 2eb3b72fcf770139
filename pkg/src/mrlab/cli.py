"""Command-line front end.

Exit codes: 0 pass, 1 fail (a certificate is printed), 2 input error,
3 search budget exhausted.  Every certificate is re-checked before it is
printed.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from mrlab import __version__
from mrlab.codes import CodeError, LinearCode, NotFound
from mrlab.constructions import (
    ConstructionError,
    build_bipartite,
    build_tripartite,
    verify_bipartite,
    verify_tripartite,
)
from mrlab.field import FieldError, FieldSpec, make_prime_field, make_quadratic_extension, smallest_nonresidue
from mrlab.formats import (
    FormatError,
    format_code,
    format_grid,
    format_matrix,
    format_pattern,
    format_witness,
    parse_code,
    parse_field,
    parse_grid,
    parse_pattern,
)
from mrlab.hmds import MdsWitness, is_cycle_mds_ell, is_mds_ell, is_weak_mds_ell
from mrlab.linalg import generic_intersection_dim, intersection_dim, kernel, rank
from mrlab.regularity import hall_blocker_sizes, fast_check, is_regular_naive
from mrlab.tensor import (
    ErasurePattern,
    InconsistentData,
    TensorCode,
    UncorrectablePattern,
    build_tensor,
    decode_erasures,
    is_correctable,
    is_generically_correctable,
    search_mr_random,
    verify_mr,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NOT_FOUND = 0, 1, 2, 3


class InputError(Exception):
    pass


class CertificateError(RuntimeError):
    """A certificate failed its own re-check; never expected."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_code(path: str) -> LinearCode:
    return parse_code(_read(path))


def _load_tensor(col_path: str | None, row_path: str | None) -> TensorCode:
    if not (col_path and row_path):
        raise InputError("both --col-code and --row-code are required")
    col, row = _load_code(col_path), _load_code(row_path)
    if col.field != row.field:
        raise InputError("column and row codes are over different fields")
    return build_tensor(col, row)


def _one_based(xs) -> str:
    return " ".join(str(x + 1) for x in xs)


def _parse_q(text: str) -> FieldSpec:
    """A prime, a prime square (X^2 = smallest non-residue), or a field literal."""
    if "=" in text:
        return parse_field(text)
    try:
        q = int(text)
    except ValueError:
        raise InputError(f"bad field size {text!r}") from None
    r = math.isqrt(q)
    if r * r == q and q > 1:
        try:
            return make_quadratic_extension(r, smallest_nonresidue(r))
        except FieldError:
            pass
    return make_prime_field(q)


# ---------------------------------------------------------------------------
# check-pattern


def _check_naive(E: ErasurePattern, a: int, b: int) -> int:
    result = is_regular_naive(E, a, b)
    if result:
        print("regular")
        return EXIT_OK
    S, T = result.rows, result.cols
    count = sum(1 for i in S for j in T if (i, j) in E.cells)
    bound = len(S) * b + len(T) * a - a * b
    if not (len(S) >= a and len(T) >= b and count > bound):
        raise CertificateError("regularity violation does not re-check")
    print("not regular")
    print(f"S: {_one_based(S)}")
    print(f"T: {_one_based(T)}")
    print(f"erased={count} bound={bound}")
    return EXIT_FAIL


def _check_flow(E: ErasurePattern, a: int, b: int) -> int:
    result = fast_check(E, a, b)
    if result:
        print("excess-compatible")
        return EXIT_OK
    transposed = math.comb(E.m, a) <= math.comb(E.n, b)
    G, ga, gb = (E.transpose(), b, a) if transposed else (E, a, b)
    demand, supply = hall_blocker_sizes(G, ga, gb, result.blocker, result.columns)
    if not (len(result.columns) == G.n - gb and demand > supply):
        raise CertificateError("Hall-blocker does not re-check")
    lines, blockers = ("rows", "columns") if transposed else ("columns", "rows")
    print("not excess-compatible")
    print(f"V ({lines}): {_one_based(result.columns)}")
    print(f"U ({blockers}): {_one_based(result.blocker)}")
    print(f"demand={demand} supply={supply}")
    return EXIT_FAIL


def _check_rank(E: ErasurePattern, T: TensorCode) -> int:
    if (T.m, T.n) != (E.m, E.n):
        raise InputError(f"pattern is {E.m}x{E.n} but the code is {T.m}x{T.n}")
    if is_correctable(T, E):
        print("correctable")
        return EXIT_OK
    flat = E.flat()
    H = T.parity_check
    HE = H.columns(flat)
    x = kernel(HE).column(0)
    word = [0] * (T.m * T.n)
    for idx, val in zip(flat, x):
        word[idx] = val
    if not any(word) or any(H.apply(word)):
        raise CertificateError("kernel vector does not re-check")
    print("not correctable")
    print(f"rank={rank(HE)} erased={len(flat)}")
    print("codeword supported on the pattern:")
    grid = [word[i * T.n:(i + 1) * T.n] for i in range(T.m)]
    sys.stdout.write(format_grid(T.field, grid))
    return EXIT_FAIL


def _check_generic(E: ErasurePattern, a: int, b: int, seed: int) -> int:
    if is_generically_correctable(E, E.m, E.n, a, b, seed=seed):
        print("generically correctable")
        return EXIT_OK
    print("not generically correctable")
    print(f"generic rank < erased={len(E)}")
    return EXIT_FAIL


def cmd_check_pattern(args) -> int:
    E = parse_pattern(_read(args.pattern))
    for name, given, actual in (("m", args.m, E.m), ("n", args.n, E.n)):
        if given is not None and given != actual:
            raise InputError(f"--{name}={given} but the pattern file has {name}={actual}")
    a, b = args.a, args.b
    if not (1 <= a < E.m and 1 <= b < E.n):
        raise InputError(f"need 1 <= a < m and 1 <= b < n, got a={a} b={b} for a {E.m}x{E.n} grid")
    method = args.method or ("flow" if a == 1 else "generic")
    if method in ("naive", "flow") and min(a, b) > 1:
        print("note: with a, b > 1 regularity is necessary but not sufficient for correctability")
    if method == "generic" and a > 1:
        print("note: for a > 1 the generic check is randomized and has no combinatorial cross-check")
    if method == "naive":
        return _check_naive(E, a, b)
    if method == "flow":
        return _check_flow(E, a, b)
    if method == "rank":
        T = _load_tensor(args.col_code, args.row_code)
        if (T.a, T.b) != (a, b):
            raise InputError(f"the codes have a={T.a} b={T.b}, not a={a} b={b}")
        return _check_rank(E, T)
    return _check_generic(E, a, b, args.seed)


# ---------------------------------------------------------------------------
# verify


def _recheck_witness(code: LinearCode, w: MdsWitness, seed: int) -> None:
    V = code.generator
    actual = intersection_dim(V, w.family)
    generic = generic_intersection_dim(code.k, code.n, w.family, seed=seed)
    if actual != w.actual_dim or generic != w.generic_dim or actual == generic:
        raise CertificateError("witness family does not re-check")


def cmd_verify(args) -> int:
    code = _load_code(args.code)
    if args.mr:
        if not args.col_code:
            raise InputError("--mr needs --col-code")
        col = _load_code(args.col_code)
        if col.field != code.field:
            raise InputError("column and row codes are over different fields")
        T = build_tensor(col, code)
        result = verify_mr(T, seed=args.seed)
        if result:
            print(f"MR ({T.m},{T.n},{T.a},{T.b}) tensor code")
            return EXIT_OK
        E = result.pattern
        if is_correctable(T, E) or not is_generically_correctable(E, T.m, T.n, T.a, T.b, seed=args.seed):
            raise CertificateError("failing pattern does not re-check")
        print("not MR: this generically correctable pattern is not corrected")
        sys.stdout.write(format_pattern(E))
        return EXIT_FAIL
    ell = args.mds_ell
    if ell is None:
        raise InputError("give --mds-ell L or --mr")
    if ell < 2:
        raise InputError("--mds-ell must be at least 2")
    check = {"full": is_mds_ell, "cycle": is_cycle_mds_ell}.get(args.kind)
    if args.kind == "weak":
        result = is_weak_mds_ell(code, ell)
    else:
        result = check(code, ell, seed=args.seed)
    label = {"full": "MDS", "cycle": "cycle-MDS", "weak": "weak-MDS"}[args.kind]
    if result:
        print(f"{label}({ell})")
        return EXIT_OK
    _recheck_witness(code, result, args.seed)
    print(f"not {label}({ell})")
    sys.stdout.write(format_witness(result))
    return EXIT_FAIL


# ---------------------------------------------------------------------------
# decode


def cmd_decode(args) -> int:
    T = _load_tensor(args.col_code, args.row_code)
    grid = parse_grid(T.field, _read(args.grid))
    if len(grid) != T.m or len(grid[0]) != T.n:
        raise InputError(f"grid is {len(grid)}x{len(grid[0])} but the code is {T.m}x{T.n}")
    try:
        out = decode_erasures(T, grid)
    except UncorrectablePattern as exc:
        print(f"uncorrectable pattern: {exc}")
        return EXIT_FAIL
    except InconsistentData as exc:
        print(f"inconsistent data: {exc}")
        return EXIT_FAIL
    if not T.contains(out):
        raise CertificateError("decoded grid is not a codeword")
    sys.stdout.write(format_grid(T.field, out))
    return EXIT_OK


# ---------------------------------------------------------------------------
# search


def cmd_search(args) -> int:
    field = _parse_q(args.q)
    try:
        found = search_mr_random(args.m, args.n, args.a, args.b, field, args.max_attempts, seed=args.seed)
    except NotFound as exc:
        print(f"not found: {exc}")
        return EXIT_NOT_FOUND
    T = found.code
    if not verify_mr(T, seed=args.seed):
        print(f"candidate after {found.attempts} attempts failed full MR verification")
        return EXIT_FAIL
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "col.code").write_text(format_code(T.col_code))
    (out / "row.code").write_text(format_code(T.row_code))
    print(f"found MR ({T.m},{T.n},{T.a},{T.b}) tensor code over {field} after {found.attempts} attempts")
    print(f"wrote {out / 'col.code'} and {out / 'row.code'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# construct


def cmd_construct(args) -> int:
    if args.family == "bipartite":
        fam = build_bipartite(args.p)
        result = verify_bipartite(fam)
    else:
        fam = build_tripartite(args.p, strict=args.strict)
        result = verify_tripartite(fam)
    text = format_matrix(fam.matrix())
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.family == "bipartite":
        print(f"# u: columns 1..{fam.p}, v: columns {fam.p + 1}..{2 * fam.p}")
    else:
        nu, nv = len(fam.U), len(fam.V)
        print(f"# U: columns 1..{nu}, V: {nu + 1}..{nu + nv}, W: {nu + nv + 1}..{nu + nv + len(fam.W)}")
        if fam.coset != 1:
            print(f"# V uses the coset {fam.coset}*S since the cube subgroup contains zeta={fam.zeta}")
    if result:
        print("# verified")
        return EXIT_OK
    print(f"# verification failed: {result}")
    return EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrlab", description="MR tensor codes and higher-order MDS codes")
    parser.add_argument("--version", action="version", version=f"mrlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-pattern", help="regularity / correctability of an erasure pattern")
    p.add_argument("pattern")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--method", choices=["naive", "flow", "rank", "generic"],
                   help="default: flow when a = 1, generic otherwise")
    p.add_argument("--col-code")
    p.add_argument("--row-code", "--code", dest="row_code")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check_pattern)

    p = sub.add_parser("verify", help="MDS(l) of a code, or MR of a tensor code")
    p.add_argument("code", help="code file (the row code with --mr)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--mds-ell", type=int)
    mode.add_argument("--mr", action="store_true")
    p.add_argument("--kind", choices=["full", "cycle", "weak"], default="full")
    p.add_argument("--col-code")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decode", help="fill '?' cells of a tensor codeword grid")
    p.add_argument("grid")
    p.add_argument("--col-code", required=True)
    p.add_argument("--row-code", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("search", help="randomized search for an MR tensor code")
    for name in ("m", "n", "a", "b"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--q", required=True, help="prime, prime square, or field literal")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-attempts", type=int, default=10_000)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("construct", help="explicit near-MDS(3) families over F_{p^2}")
    p.add_argument("family", choices=["bipartite", "tripartite"])
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--strict", action="store_true", help="tripartite: fail instead of using a coset")
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError, FieldError, CodeError, ConstructionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

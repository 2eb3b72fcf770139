"""Text formats shared by the library and the command line.

Field literal     ``p=13`` or ``p=7;x2=3`` (F_7[X]/(X^2 - 3)); ``x2=r0+r1x`` is
                  also accepted for a general irreducible X^2 = r0 + r1*X.
Element literal   ``a0`` or ``a0+a1x``.
Matrix file       field literal, then ``rows cols``, then the entries row-major.
Code file         ``# code n=<n> k=<k>`` followed by a matrix file (the generator).
Pattern file      ``m n`` then one ``i j`` line per erased cell, 1-based.
Grid file         m lines of n element literals, ``?`` marking erasures.
Witness           ``A1: 1 2 3`` lines plus ``actual=<d> generic=<d>``.

Lines starting with ``#`` are comments everywhere except for the code header.
"""

from __future__ import annotations

import re
from collections.abc import Sequence

from mrlab.field import FieldError, FieldSpec, make_extension, make_prime_field

_TERM = re.compile(r"[+-]?[^+-]+")


class FormatError(ValueError):
    """Malformed input text."""


def _content_lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _ints(tokens: Sequence[str], what: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers in {what}, got {' '.join(tokens)!r}") from None


def _parse_poly(text: str, p: int) -> tuple[int, int]:
    """``r0+r1x`` -> (r0, r1) with both reduced mod p."""
    compact = text.replace(" ", "").lower()
    if not compact:
        raise FormatError(f"empty element literal {text!r}")
    r0 = r1 = 0
    pos = 0
    for term in _TERM.findall(compact):
        if compact.find(term, pos) != pos:
            raise FormatError(f"bad element literal {text!r}")
        pos += len(term)
        try:
            if term.endswith("x"):
                coef = term[:-1]
                r1 += int(coef + "1") if coef in ("", "+", "-") else int(coef)
            else:
                r0 += int(term)
        except ValueError:
            raise FormatError(f"bad element literal {text!r}") from None
    if pos != len(compact):
        raise FormatError(f"bad element literal {text!r}")
    return r0 % p, r1 % p


def parse_field(text: str) -> FieldSpec:
    parts = {}
    for chunk in text.strip().split(";"):
        key, sep, value = chunk.partition("=")
        if not sep:
            raise FormatError(f"bad field literal {text!r}")
        parts[key.strip().lower()] = value.strip()
    if "p" not in parts or set(parts) - {"p", "x2"}:
        raise FormatError(f"bad field literal {text!r}")
    p = _ints([parts["p"]], "field literal")[0]
    if "x2" not in parts:
        return make_prime_field(p)
    make_prime_field(p)
    r0, r1 = _parse_poly(parts["x2"], p)
    # X^2 = r0 + r1 X  <=>  X^2 - r1 X - r0 = 0
    return make_extension(p, -r0, -r1)


def format_field(field: FieldSpec) -> str:
    if field.modulus is None:
        return f"p={field.p}"
    c0, c1 = field.modulus
    r0, r1 = (-c0) % field.p, (-c1) % field.p
    return f"p={field.p};x2={r0}" + (f"+{r1}x" if r1 else "")


def parse_element(field: FieldSpec, text: str) -> int:
    """Element literal -> raw code."""
    if field.modulus is None:
        try:
            return int(text) % field.p
        except ValueError:
            raise FormatError(f"bad element literal {text!r} for F_{field.p}") from None
    a0, a1 = _parse_poly(text, field.p)
    return field.join(a0, a1)


def format_element(field: FieldSpec, code: int) -> str:
    a0, a1 = field.split(code)
    return f"{a0}+{a1}x" if a1 else str(a0)


def parse_matrix(text: str):
    from mrlab.linalg import Matrix

    lines = _content_lines(text)
    if len(lines) < 2:
        raise FormatError("matrix file needs a field line and a shape line")
    try:
        field = parse_field(lines[0])
    except FieldError as exc:
        raise FormatError(str(exc)) from None
    shape = _ints(lines[1].split(), "shape line")
    if len(shape) != 2 or min(shape) < 0:
        raise FormatError(f"bad shape line {lines[1]!r}")
    rows, cols = shape
    tokens = " ".join(lines[2:]).split()
    if len(tokens) != rows * cols:
        raise FormatError(f"expected {rows * cols} entries, found {len(tokens)}")
    raw = [parse_element(field, t) for t in tokens]
    return Matrix._wrap(field, [raw[r * cols:(r + 1) * cols] for r in range(rows)], cols)


def format_matrix(M) -> str:
    F = M.field
    lines = [format_field(F), f"{M.nrows} {M.ncols}"]
    lines += [" ".join(format_element(F, x) for x in row) for row in M.data]
    return "\n".join(lines) + "\n"


_CODE_HEADER = re.compile(r"^#\s*code\s+n=(\d+)\s+k=(\d+)\s*$")


def parse_code(text: str):
    from mrlab.codes import LinearCode

    header = None
    for ln in text.splitlines():
        m = _CODE_HEADER.match(ln.strip())
        if m:
            header = int(m.group(1)), int(m.group(2))
            break
    M = parse_matrix(text)
    if header is not None and header != (M.ncols, M.nrows):
        raise FormatError(f"code header says n={header[0]} k={header[1]} but the generator is {M.nrows}x{M.ncols}")
    return LinearCode(M)


def format_code(code) -> str:
    return f"# code n={code.n} k={code.k}\n" + format_matrix(code.generator)


def parse_pattern(text: str):
    from mrlab.tensor import ErasurePattern

    lines = _content_lines(text)
    if not lines:
        raise FormatError("pattern file is empty")
    dims = _ints(lines[0].split(), "pattern header")
    if len(dims) != 2 or min(dims) < 1:
        raise FormatError(f"bad pattern header {lines[0]!r}")
    m, n = dims
    cells = []
    for ln in lines[1:]:
        ij = _ints(ln.split(), "pattern cell")
        if len(ij) != 2:
            raise FormatError(f"bad pattern cell {ln!r}")
        i, j = ij
        if not (1 <= i <= m and 1 <= j <= n):
            raise FormatError(f"cell ({i},{j}) outside a {m}x{n} grid")
        cells.append((i - 1, j - 1))
    return ErasurePattern(m, n, frozenset(cells))


def format_pattern(pattern) -> str:
    lines = [f"{pattern.m} {pattern.n}"]
    lines += [f"{i + 1} {j + 1}" for i, j in sorted(pattern.cells)]
    return "\n".join(lines) + "\n"


def parse_grid(field: FieldSpec, text: str) -> list[list[int | None]]:
    rows = [ln.split() for ln in _content_lines(text)]
    if not rows:
        raise FormatError("grid file is empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise FormatError("grid rows have different lengths")
    return [[None if tok == "?" else parse_element(field, tok) for tok in r] for r in rows]


def format_grid(field: FieldSpec, grid: Sequence[Sequence[int | None]]) -> str:
    return "\n".join(" ".join("?" if x is None else format_element(field, x) for x in row) for row in grid) + "\n"


def format_witness(witness) -> str:
    lines = [f"A{i}: " + " ".join(str(j) for j in s) for i, s in enumerate(witness.family.one_based(), 1)]
    lines.append(f"actual={witness.actual_dim} generic={witness.generic_dim}")
    return "\n".join(lines) + "\n"


def parse_witness(text: str, n: int):
    from mrlab.hmds import MdsWitness
    from mrlab.linalg import SetFamily

    sets = []
    dims = {}
    for ln in _content_lines(text):
        head, sep, rest = ln.partition(":")
        if sep and re.fullmatch(r"A\d+", head.strip()):
            sets.append(_ints(rest.split(), "witness set"))
            continue
        for tok in ln.split():
            key, eq, val = tok.partition("=")
            if not eq or key not in ("actual", "generic"):
                raise FormatError(f"bad witness line {ln!r}")
            dims[key] = _ints([val], "witness dimension")[0]
    if not sets or set(dims) != {"actual", "generic"}:
        raise FormatError("witness needs set lines and an actual/generic line")
    return MdsWitness(SetFamily.from_one_based(n, sets), dims["actual"], dims["generic"])

"""Typed colourings of integer intervals and their canonical forms.

A typed colouring assigns to each element of {1, ..., N} a tuple of m
unbounded colour labels plus, optionally, one final label drawn from a
bounded palette {1, ..., n}.  Unbounded coordinates are considered up to
injective relabeling of their palettes; the bounded final coordinate is
always taken verbatim.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterator, Sequence


class ColouringFormatError(ValueError):
    """Raised for malformed colouring documents."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True)
class TypedColouring:
    """Colouring of {1, ..., N} with m unbounded coordinates and an optional
    bounded final coordinate.

    ``rows[t-1]`` holds the labels of element t: m non-negative ints, then
    the final label in 1..n when n is not None.
    """

    m: int
    n: int | None
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"m must be non-negative, got {self.m}")
        if self.n is not None and self.n < 1:
            raise ValueError(f"n must be positive when present, got {self.n}")
        width = self.m + (1 if self.n is not None else 0)
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        for t, row in enumerate(rows, start=1):
            if len(row) != width:
                raise ValueError(f"element {t} has {len(row)} labels, expected {width}")
            for lab in row[: self.m]:
                if not isinstance(lab, int) or isinstance(lab, bool) or lab < 0:
                    raise ValueError(f"element {t} has invalid label {lab!r}")
            if self.n is not None:
                fin = row[self.m]
                if not isinstance(fin, int) or isinstance(fin, bool) or not 1 <= fin <= self.n:
                    raise ValueError(f"element {t} final label {fin!r} outside 1..{self.n}")

    @property
    def length(self) -> int:
        return len(self.rows)

    def label(self, pos: int, coord: int) -> int:
        """Label of element pos in unbounded coordinate coord (both 1-based)."""
        return self.rows[pos - 1][coord - 1]

    def final_label(self, pos: int) -> int:
        if self.n is None:
            raise ValueError("colouring has no bounded final coordinate")
        return self.rows[pos - 1][self.m]

    def coordinate(self, coord: int) -> tuple[int, ...]:
        return tuple(r[coord - 1] for r in self.rows)

    def final_coordinate(self) -> tuple[int, ...]:
        if self.n is None:
            raise ValueError("colouring has no bounded final coordinate")
        return tuple(r[self.m] for r in self.rows)

    @classmethod
    def single(cls, labels: Sequence[int]) -> "TypedColouring":
        """Single unbounded coordinate, no bounded coordinate."""
        return cls(1, None, tuple((lab,) for lab in labels))


@dataclass(frozen=True)
class CanonicalForm:
    """Renaming-invariant normal form of a typed colouring.

    One restricted-growth string per unbounded coordinate; the bounded final
    coordinate, when present, is carried verbatim.
    """

    strings: tuple[tuple[int, ...], ...]
    final: tuple[int, ...] | None = None


@dataclass(frozen=True)
class EquivalenceFingerprint:
    """What survives of a block when palettes are renamed per coordinate:
    the verbatim final-coordinate tuple plus one restricted-growth string per
    unbounded coordinate."""

    final: tuple[int, ...]
    strings: tuple[tuple[int, ...], ...]


def restricted_growth(labels: Sequence[int]) -> tuple[int, ...]:
    """Relabel by first appearance: new classes get 0, 1, 2, ... in order."""
    seen: dict[int, int] = {}
    out = []
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(seen)
        out.append(seen[lab])
    return tuple(out)


def canonicalize(colouring: TypedColouring) -> CanonicalForm:
    """Canonical form under injective relabeling of each unbounded palette."""
    strings = tuple(
        restricted_growth(colouring.coordinate(k)) for k in range(1, colouring.m + 1)
    )
    final = colouring.final_coordinate() if colouring.n is not None else None
    return CanonicalForm(strings, final)


def extend(prefix: Sequence[int], max_classes: int | None = None) -> Iterator[tuple[int, ...]]:
    """Children of a restricted-growth prefix: each existing class plus, if
    the palette cap allows, one fresh class."""
    prefix = tuple(prefix)
    used = (max(prefix) + 1) if prefix else 0
    cap = used + 1 if (max_classes is None or used < max_classes) else used
    for v in range(cap):
        yield prefix + (v,)


def _rgs_strings(length: int, max_classes: int | None) -> Iterator[tuple[int, ...]]:
    # Lexicographic depth-first enumeration of restricted-growth strings.
    def rec(prefix: list[int], used: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        cap = used + 1 if (max_classes is None or used < max_classes) else used
        for v in range(cap):
            prefix.append(v)
            yield from rec(prefix, max(used, v + 1))
            prefix.pop()

    if length == 0:
        yield ()
        return
    yield from rec([], 0)


def enumerate_colourings(length: int, max_classes: int | None = None) -> Iterator[TypedColouring]:
    """All single-coordinate colourings of {1, ..., length}, one canonical
    representative per palette-renaming class, in lexicographic order.

    Without a palette cap there are Bell(length) of them.
    """
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")
    if max_classes is not None and max_classes < 1:
        raise ValueError(f"max_classes must be positive, got {max_classes}")
    for s in _rgs_strings(length, max_classes):
        yield TypedColouring.single(s)


def block_fingerprint(colouring: TypedColouring, block: int, block_len: int) -> EquivalenceFingerprint:
    """Fingerprint of the block of block_len consecutive elements starting at
    position (block-1)*block_len + 1.  Blocks are 1-based."""
    if block_len < 1:
        raise ValueError(f"block length must be positive, got {block_len}")
    if block < 1 or block * block_len > colouring.length:
        raise ValueError(f"block {block} of length {block_len} outside the interval")
    start = (block - 1) * block_len
    rows = colouring.rows[start : start + block_len]
    final = tuple(r[colouring.m] for r in rows) if colouring.n is not None else ()
    strings = tuple(
        restricted_growth([r[k] for r in rows]) for k in range(colouring.m)
    )
    return EquivalenceFingerprint(final, strings)


def interval_equivalent(colouring: TypedColouring, s: int, t: int, block_len: int) -> bool:
    """Whether blocks s and t look identical up to per-coordinate palette
    renaming, with final-coordinate labels matched verbatim."""
    return block_fingerprint(colouring, s, block_len) == block_fingerprint(colouring, t, block_len)


def block_coloring(colouring: TypedColouring, block_len: int, with_fingerprint: bool = False) -> TypedColouring:
    """Regroup a colouring into blocks of block_len consecutive elements.

    Block s becomes one element carrying the m*block_len concatenated
    unbounded labels (position-major).  With with_fingerprint, one bounded
    coordinate is appended holding the block's fingerprint, interned to
    dense labels 1, 2, ... in order of first appearance.
    """
    if block_len < 1:
        raise ValueError(f"block length must be positive, got {block_len}")
    if colouring.length % block_len != 0:
        raise ValueError(
            f"block length {block_len} does not divide interval length {colouring.length}"
        )
    nblocks = colouring.length // block_len
    interned: dict[EquivalenceFingerprint, int] = {}
    out_rows = []
    for s in range(1, nblocks + 1):
        start = (s - 1) * block_len
        concat: list[int] = []
        for r in colouring.rows[start : start + block_len]:
            concat.extend(r[: colouring.m])
        if with_fingerprint:
            fp = block_fingerprint(colouring, s, block_len)
            concat.append(interned.setdefault(fp, len(interned) + 1))
        out_rows.append(tuple(concat))
    out_n = len(interned) if with_fingerprint else None
    return TypedColouring(colouring.m * block_len, out_n, tuple(out_rows))


def bell_number(k: int) -> int:
    """Bell numbers by the triangle recurrence."""
    if k < 0:
        raise ValueError(f"Bell numbers need k >= 0, got {k}")
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def fingerprint_count_bound(m: int, n: int, block_len: int) -> int:
    """Upper bound n**block_len * Bell(block_len)**m on distinct block
    fingerprints of (m, n)-typed colourings."""
    if m < 0 or n < 1 or block_len < 0:
        raise ValueError(f"invalid arguments m={m} n={n} block_len={block_len}")
    return n**block_len * bell_number(block_len) ** m


def serialize(colouring: TypedColouring) -> str:
    """Canonical text form: a header line, then one line of labels per
    element.  Certificates digest exactly this form."""
    if colouring.n is None:
        head = f"m={colouring.m} N={colouring.length}"
    else:
        head = f"m={colouring.m} n={colouring.n} N={colouring.length}"
    lines = [head]
    for row in colouring.rows:
        lines.append(" ".join(str(lab) for lab in row))
    return "\n".join(lines) + "\n"


def colouring_digest(colouring: TypedColouring) -> str:
    """Hex sha-256 of the canonical serialization."""
    return hashlib.sha256(serialize(colouring).encode("utf-8")).hexdigest()


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ColouringFormatError(f"expected an integer, got {token!r}", lineno) from None


def parse_colouring(text: str) -> TypedColouring:
    """Parse a colouring document.

    With a header line "m=<m> [n=<n>] N=<N>", the next N lines each hold the
    labels of one element.  Without a header, a single line is read as a
    single-coordinate colouring and multiple lines as one element per line
    with m inferred from the first line.
    """
    numbered = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1)]
    numbered = [(i, ln) for i, ln in numbered if ln]
    if not numbered:
        raise ColouringFormatError("empty colouring document")

    first_no, first = numbered[0]
    if "=" in first:
        fields: dict[str, int] = {}
        for tok in first.split():
            key, eq, val = tok.partition("=")
            if not eq or key not in ("m", "n", "N") or key in fields:
                raise ColouringFormatError(f"bad header token {tok!r}", first_no)
            fields[key] = _parse_int(val, first_no)
        if "m" not in fields or "N" not in fields:
            raise ColouringFormatError("header must declare m= and N=", first_no)
        m, n, length = fields["m"], fields.get("n"), fields["N"]
        body = numbered[1:]
        if len(body) != length:
            raise ColouringFormatError(
                f"expected {length} element lines, found {len(body)}", first_no
            )
        width = m + (1 if n is not None else 0)
        rows = []
        for lineno, ln in body:
            toks = ln.split()
            if len(toks) != width:
                raise ColouringFormatError(
                    f"expected {width} labels, found {len(toks)}", lineno
                )
            vals = tuple(_parse_int(t, lineno) for t in toks)
            for lab in vals[:m]:
                if lab < 0:
                    raise ColouringFormatError(f"negative label {lab}", lineno)
            if n is not None and not 1 <= vals[m] <= n:
                raise ColouringFormatError(
                    f"final label {vals[m]} outside 1..{n}", lineno
                )
            rows.append(vals)
        try:
            return TypedColouring(m, n, tuple(rows))
        except ValueError as e:
            raise ColouringFormatError(str(e), first_no) from None

    if len(numbered) == 1:
        labels = [_parse_int(t, first_no) for t in first.split()]
        if any(lab < 0 for lab in labels):
            raise ColouringFormatError("negative label", first_no)
        return TypedColouring.single(labels)

    width = len(first.split())
    rows = []
    for lineno, ln in numbered:
        toks = ln.split()
        if len(toks) != width:
            raise ColouringFormatError(f"expected {width} labels, found {len(toks)}", lineno)
        vals = tuple(_parse_int(t, lineno) for t in toks)
        if any(lab < 0 for lab in vals):
            raise ColouringFormatError("negative label", lineno)
        rows.append(vals)
    try:
        return TypedColouring(width, None, tuple(rows))
    except ValueError as e:
        raise ColouringFormatError(str(e), first_no) from None


def load_colouring(path: str) -> TypedColouring:
    with open(path, encoding="utf-8") as fh:
        return parse_colouring(fh.read())

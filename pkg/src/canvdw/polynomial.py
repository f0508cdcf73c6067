"""Exact arithmetic for integer polynomials with zero constant term.

Everything in this module is exact: coefficients are Python ints and no
floating point is ever involved.  The class of polynomials handled here is
closed under the shift-difference p(x+h) - p(h), which is the operation the
witness machinery is built on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence


class FamilyFormatError(ValueError):
    """Raised for malformed polynomial family documents."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True)
class IntegralPolynomial:
    """Integer-coefficient polynomial with no constant term.

    ``coeffs[i]`` is the coefficient of x**(i+1).  Instances are kept in
    normal form: trailing zero coefficients are stripped, and the zero
    polynomial is the empty tuple.  The degree of the zero polynomial is 0
    and its leading coefficient is None.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        cs = tuple(self.coeffs)
        for c in cs:
            if not isinstance(c, int) or isinstance(c, bool):
                raise TypeError(f"coefficients must be ints, got {c!r}")
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def leading_coefficient(self) -> int | None:
        return self.coeffs[-1] if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, d: int) -> int:
        """Value at the integer d, computed exactly."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc + c) * d
        return acc

    def __sub__(self, other: "IntegralPolynomial") -> "IntegralPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntegralPolynomial(tuple(x - y for x, y in zip(a, b)))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs), 0, -1):
            c = self.coeffs[k - 1]
            if c == 0:
                continue
            var = "x" if k == 1 else f"x^{k}"
            if c == 1:
                term = var
            elif c == -1:
                term = "-" + var
            else:
                term = f"{c}{var}"
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += "-" + t[1:] if t.startswith("-") else "+" + t
        return out


ROLE_MONO = "mono"
ROLE_RAINBOW = "rainbow"


@dataclass(frozen=True)
class PolynomialFamily:
    """Finite ordered family of integral polynomials with a role tag.

    Role "mono" families may repeat members and may contain the zero
    polynomial.  Role "rainbow" families must be pairwise distinct and must
    not contain the zero polynomial.
    """

    polys: tuple[IntegralPolynomial, ...] = ()
    role: str = ROLE_MONO

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if self.role not in (ROLE_MONO, ROLE_RAINBOW):
            raise ValueError(f"unknown family role {self.role!r}")
        if self.role == ROLE_RAINBOW:
            if any(p.is_zero() for p in self.polys):
                raise ValueError("rainbow families must not contain the zero polynomial")
            if len(set(self.polys)) != len(self.polys):
                raise ValueError("rainbow families must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def nonzero_members(self) -> tuple[IntegralPolynomial, ...]:
        return tuple(p for p in self.polys if not p.is_zero())

    def max_degree(self) -> int:
        members = self.nonzero_members()
        if not members:
            raise ValueError("family has no nonzero members")
        return max(p.degree for p in members)

    def coeff_lists(self) -> list[list[int]]:
        return [list(p.coeffs) for p in self.polys]

    @classmethod
    def from_coeff_lists(cls, lists: Iterable[Sequence[int]], role: str = ROLE_MONO) -> "PolynomialFamily":
        return cls(tuple(IntegralPolynomial(tuple(cs)) for cs in lists), role)


@dataclass(frozen=True)
class WeightVector:
    """Per-degree counts of distinct leading coefficients of a family.

    ``counts[i]`` is the number of distinct leading coefficients among the
    degree-(i+1) members; the length equals the maximum degree present.
    """

    counts: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(self.counts))


def shift_difference(p: IntegralPolynomial, h: int) -> IntegralPolynomial:
    """The polynomial x -> p(x+h) - p(h).

    The constant term cancels, so the result stays in the zero-constant
    class with integer coefficients.
    """
    out = [0] * p.degree
    for k, a in enumerate(p.coeffs, start=1):
        if a == 0:
            continue
        for j in range(1, k + 1):
            out[j - 1] += a * comb(k, j) * h ** (k - j)
    return IntegralPolynomial(tuple(out))


def weight_vector(family: PolynomialFamily) -> WeightVector:
    """Weight of a family: distinct leading-coefficient counts by degree.

    Zero polynomials are ignored; a family with no nonzero member has no
    weight and raises ValueError.
    """
    members = family.nonzero_members()
    if not members:
        raise ValueError("weight vector undefined for a family with no nonzero members")
    top = max(p.degree for p in members)
    leads: list[set[int]] = [set() for _ in range(top)]
    for p in members:
        leads[p.degree - 1].add(p.leading_coefficient)
    return WeightVector(tuple(len(s) for s in leads))


def weight_less(w1: WeightVector, w2: WeightVector) -> bool:
    """Strict order on weight vectors, compared from the top degree down.

    w1 < w2 iff at the highest degree where the counts differ (after zero
    padding to a common length) w1 has the smaller count.
    """
    a, b = w1.counts, w2.counts
    size = max(len(a), len(b))
    a = a + (0,) * (size - len(a))
    b = b + (0,) * (size - len(b))
    for i in range(size - 1, -1, -1):
        if a[i] != b[i]:
            return a[i] < b[i]
    return False


def _shift_collision(q: IntegralPolynomial, target: IntegralPolynomial) -> int | None:
    # Unique h >= 1 with shift_difference(q, h) == target, if any.  Matching
    # leading terms forces the degree and leading coefficient to agree and
    # pins h through the next coefficient: n*q_n*h + q_{n-1} = t_{n-1}.
    n = q.degree
    if n != target.degree or q.leading_coefficient != target.leading_coefficient:
        return None
    if n <= 1:
        # Linear polynomials are shift-invariant: a collision would need
        # q == target, which callers exclude.
        return None
    num = target.coeffs[n - 2] - q.coeffs[n - 2]
    den = n * q.coeffs[n - 1]
    if num % den != 0:
        return None
    h = num // den
    if h < 1:
        return None
    return h if shift_difference(q, h) == target else None


def h_value(family: PolynomialFamily) -> int:
    """Shift-collision threshold of a family.

    Smallest h >= 0 such that for every h' > h no admissible ordered pair
    (p, q) of members satisfies p(x+h') - p(h') = q(x).  Admissible pairs are
    all ordered pairs of distinct members plus (p, p) for members of degree
    at least 2; the self-pair of a linear member is excluded because it would
    collide at every shift.
    """
    if not family.polys:
        raise ValueError("h_value undefined for an empty family")
    distinct: list[IntegralPolynomial] = []
    for p in family.polys:
        if p not in distinct:
            distinct.append(p)
    best = 0
    for q in distinct:
        for target in distinct:
            if q == target and q.degree < 2:
                continue
            sol = _shift_collision(q, target)
            if sol is not None and sol > best:
                best = sol
    return best


def bstar_family(family: PolynomialFamily, h: int, d_cap: int) -> PolynomialFamily:
    """Derived rainbow family of differences and shifted differences.

    For each member p and each d in {0} union (h, d_cap], the candidate is
    (p(x+d) - p(d)) - p1(x) where p1 is the first member.  Zero candidates
    are dropped and duplicates keep the first (d, member) occurrence.  The
    first member must have minimal degree and d_cap must exceed h.
    """
    if family.role != ROLE_RAINBOW:
        raise ValueError("bstar_family requires a rainbow family")
    if not family.polys:
        raise ValueError("bstar_family requires a nonempty family")
    if d_cap <= h:
        raise ValueError(f"d_cap must exceed h, got d_cap={d_cap} h={h}")
    base = family.polys[0]
    if base.degree != min(p.degree for p in family.polys):
        raise ValueError("first member must have minimal degree")
    out: list[IntegralPolynomial] = []
    seen: set[IntegralPolynomial] = set()
    for d in (0, *range(h + 1, d_cap + 1)):
        for p in family.polys:
            cand = shift_difference(p, d) - base
            if cand.is_zero() or cand in seen:
                continue
            seen.add(cand)
            out.append(cand)
    return PolynomialFamily(tuple(out), ROLE_RAINBOW)


def scale_family(family: PolynomialFamily, factor: int) -> PolynomialFamily:
    """Replace each member p(x) by p(factor*x)/factor, exactly.

    The coefficient at power i becomes a_i * factor**(i-1), so the result is
    again integral with zero constant term.  The role is preserved.
    """
    if factor < 1:
        raise ValueError(f"scale factor must be positive, got {factor}")
    scaled = tuple(
        IntegralPolynomial(tuple(a * factor**i for i, a in enumerate(p.coeffs)))
        for p in family.polys
    )
    return PolynomialFamily(scaled, family.role)


def d_max(family: PolynomialFamily, interval_len: int, h: int) -> int | None:
    """Largest step d > h whose value pattern fits inside [interval_len].

    A step d fits when some anchor a has a and a + p(d) inside
    {1, ..., interval_len} for every member p.  Returns None when no step
    fits.  Needs at least one nonzero member, otherwise every step fits and
    no largest one exists.
    """
    if interval_len < 1:
        raise ValueError(f"interval length must be positive, got {interval_len}")
    nonzero = family.nonzero_members()
    if not nonzero:
        raise ValueError("d_max undefined for a family with no nonzero members")
    # Beyond interval_len + min coefficient mass some member always
    # overshoots the window, so the scan below is exhaustive.
    bound = interval_len + min(sum(abs(c) for c in p.coeffs) for p in nonzero)
    best = None
    for d in range(h + 1, bound + 1):
        vals = [p.evaluate(d) for p in family.polys]
        lo = min(0, min(vals))
        hi = max(0, max(vals))
        if hi - lo <= interval_len - 1:
            best = d
    return best


def parse_family(text: str, default_role: str = ROLE_MONO) -> PolynomialFamily:
    """Parse a family document: JSON object with "polys" and optional "role".

    "polys" is a list of coefficient lists, ascending powers starting at
    power 1, e.g. [[1], [2], [0, 1]] for the family {x, 2x, x^2}.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FamilyFormatError(e.msg, e.lineno) from None
    if not isinstance(obj, dict):
        raise FamilyFormatError("expected a JSON object with a 'polys' field")
    if "polys" not in obj:
        raise FamilyFormatError("missing 'polys' field")
    polys = obj["polys"]
    if not isinstance(polys, list):
        raise FamilyFormatError("'polys' must be a list of coefficient lists")
    rows = []
    for i, cs in enumerate(polys):
        if not isinstance(cs, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in cs):
            raise FamilyFormatError(f"'polys' entry {i} is not a list of ints")
        rows.append(cs)
    role = obj.get("role", default_role)
    if role not in (ROLE_MONO, ROLE_RAINBOW):
        raise FamilyFormatError(f"unknown role {role!r}")
    try:
        return PolynomialFamily.from_coeff_lists(rows, role)
    except ValueError as e:
        raise FamilyFormatError(str(e)) from None


def dump_family(family: PolynomialFamily) -> str:
    return json.dumps({"polys": family.coeff_lists(), "role": family.role}, indent=2) + "\n"


def load_family(path: str, default_role: str = ROLE_MONO) -> PolynomialFamily:
    with open(path, encoding="utf-8") as fh:
        return parse_family(fh.read(), default_role)

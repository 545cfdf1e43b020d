"""(ell, p)-adic combinatorics: digit expansions, the family tree, supports,
admissible sets, reflections, stretches and chains.

The expansion writes n+1 in the mixed radix 1, ell, ell*p, ell*p^2, ...;
digit position 0 is bounded by ell and all higher positions by p.  These
digits drive everything downstream: supports enumerate sign flips of the
sub-leading digits, down/up-admissible index sets encode which flips are
realised by morphisms, and the reflections n[S], n(S) are the flipped
integers themselves.

Degenerate characteristics are supported: for ell = inf every enumeration
collapses to the empty set (semisimple case), and for p = 0 only digit 0 can
ever reflect, since position 2 does not exist in the radix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .ring import MixedChar


class NotAdmissible(ValueError):
    pass


class NotNested(ValueError):
    pass


class NoSuchAncestor(ValueError):
    pass


class Direction(Enum):
    DOWN = "down"
    UP = "up"


@dataclass(frozen=True)
class LpExpansion:
    """Digit vector of n+1, little-endian in ``digits`` (index = position)."""

    n: int
    ell: float
    p: int
    digits: tuple[int, ...]

    def digit(self, i: int) -> int:
        return self.digits[i] if 0 <= i < len(self.digits) else 0

    @property
    def top(self) -> int:
        return len(self.digits) - 1

    def __str__(self) -> str:
        return "[" + ",".join(str(d) for d in reversed(self.digits)) + "]"


def expand(n: int, chi: MixedChar) -> LpExpansion:
    """The (ell, p)-adic expansion of n (digits of n+1)."""
    if n < 0:
        raise ValueError("expansion needs n >= 0")
    if chi.ell == math.inf:
        return LpExpansion(n, chi.ell, chi.p, (n + 1,))
    ell, p = int(chi.ell), chi.p
    rest, first = divmod(n + 1, ell)
    out = [first]
    if p == 0:
        if rest:
            out.append(rest)
    else:
        while rest:
            rest, d = divmod(rest, p)
            out.append(d)
    return LpExpansion(n, chi.ell, chi.p, tuple(out))


def from_digits(digits: list[int], chi: MixedChar) -> int:
    """Inverse of ``expand``: the n with these digits of n+1 (little-endian)."""
    total = sum(d * chi.radix(i) for i, d in enumerate(digits))
    return total - 1


def mother(n: int, chi: MixedChar) -> int | None:
    """Zero the lowest nonzero digit of n+1 and subtract 1; None when Eve."""
    e = expand(n, chi)
    s = next(i for i, d in enumerate(e.digits) if d)
    if s == e.top:
        return None
    return n + 1 - e.digits[s] * chi.radix(s) - 1


def ancestors(n: int, chi: MixedChar) -> list[int]:
    """The strictly older family members, youngest first; last one is Eve."""
    out = []
    cur = mother(n, chi)
    while cur is not None:
        out.append(cur)
        cur = mother(cur, chi)
    return out


def is_eve(n: int, chi: MixedChar) -> bool:
    return mother(n, chi) is None


def youngest_ancestor_with_zero(n: int, s: int, chi: MixedChar) -> int:
    """a_{n,s}: youngest ancestor whose digits at positions <= s all vanish.

    Equivalently the truncation of n+1 above position s (the worked family
    tree fixes this reading: a_{685,2} = 674 even though 684 already has a
    zero digit at position 2).  The convention a_{n,-1} = 0 applies; no
    ancestor qualifies once s reaches the leading digit.
    """
    if s == -1:
        return 0
    for a in ancestors(n, chi):
        e = expand(a, chi)
        if all(e.digit(i) == 0 for i in range(s + 1)):
            return a
    raise NoSuchAncestor(f"no ancestor of {n} vanishes through position {s}")


def support(n: int, chi: MixedChar) -> set[int]:
    """All sign flips of the sub-leading digits of n+1, shifted back by 1."""
    e = expand(n, chi)
    vals = {e.digits[-1] * chi.radix(e.top)}
    for i in range(e.top - 1, -1, -1):
        term = e.digits[i] * chi.radix(i)
        vals = {v + term for v in vals} | {v - term for v in vals}
    return {v - 1 for v in vals}


# ---------------------------------------------------------------------------
# admissible sets and reflections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdmSet:
    """A validated admissible index set for a fixed base integer."""

    indices: frozenset[int]
    direction: Direction
    base: int

    def __post_init__(self):
        ok = (
            is_down_admissible(self.base, self.indices, self._chi)
            if self.direction is Direction.DOWN
            else is_up_admissible(self.base, self.indices, self._chi)
        )
        if not ok:
            raise NotAdmissible(f"{set(self.indices)} is not {self.direction.value}-admissible for {self.base}")

    # chi travels out of band to keep the dataclass hashable and compact
    _chi: MixedChar = None

    def __str__(self):
        return "{" + ",".join(map(str, sorted(self.indices))) + "}"


def stretches(s: frozenset[int] | set[int]) -> list[tuple[int, ...]]:
    """Maximal runs of consecutive integers, lowest first."""
    out, run = [], []
    for i in sorted(s):
        if run and i != run[-1] + 1:
            out.append(tuple(run))
            run = []
        run.append(i)
    if run:
        out.append(tuple(run))
    return out


def _positions_ok(s, chi: MixedChar) -> bool:
    if not s:
        return True
    if chi.ell == math.inf:
        return False
    if chi.p == 0:
        return set(s) <= {0}
    return min(s) >= 0


def is_down_admissible(n: int, s, chi: MixedChar) -> bool:
    s = set(s)
    if not s:
        return True
    if not _positions_ok(s, chi):
        return False
    e = expand(n, chi)
    for run in stretches(s):
        if e.digit(run[0]) == 0:
            return False
    return all(e.digit(i + 1) != 0 or (i + 1) in s for i in s)


def is_up_admissible(n: int, s, chi: MixedChar) -> bool:
    s = set(s)
    if not s:
        return True
    if not _positions_ok(s, chi):
        return False
    e = expand(n, chi)
    pm1 = chi.p - 1
    for run in stretches(s):
        if e.digit(run[0]) == 0:
            return False
    return all(e.digit(i + 1) != pm1 or (i + 1) in s for i in s)


def reflect_down(n: int, s, chi: MixedChar) -> int:
    """n[S]: negate the digits indexed by S."""
    s = set(s)
    if not is_down_admissible(n, s, chi):
        raise NotAdmissible(f"{s} is not down-admissible for {n}")
    e = expand(n, chi)
    return n - 2 * sum(e.digit(i) * chi.radix(i) for i in s)


def reflect_up(n: int, s, chi: MixedChar) -> int:
    """n(S): negate the digits indexed by S, adding 2 above each stretch."""
    s = set(s)
    if not is_up_admissible(n, s, chi):
        raise NotAdmissible(f"{s} is not up-admissible for {n}")
    e = expand(n, chi)
    out = n + 1 - 2 * sum(e.digit(i) * chi.radix(i) for i in s)
    for run in stretches(s):
        out += 2 * chi.radix(run[-1] + 1)
    return out - 1


def down_admissible_sets(n: int, chi: MixedChar) -> list[frozenset[int]]:
    """Every down-admissible set for n (the empty set included)."""
    if chi.ell == math.inf:
        return [frozenset()]
    top = expand(n, chi).top
    positions = range(min(top, 1) if chi.p == 0 else top)
    out = []
    for mask in _subsets(list(positions)):
        if is_down_admissible(n, mask, chi):
            out.append(frozenset(mask))
    return out


def up_admissible_sets(n: int, chi: MixedChar, bound: int) -> list[frozenset[int]]:
    """All up-admissible sets S for n with n(S) <= bound."""
    if chi.ell == math.inf:
        return [frozenset()] if n <= bound else []
    if bound < n:
        return []
    positions = []
    i = 0
    while chi.radix(i + 1) <= bound + 1:
        positions.append(i)
        i += 1
        if chi.p == 0 and i > 0:
            break
    out = []
    for mask in _subsets(positions):
        if is_up_admissible(n, mask, chi) and reflect_up(n, mask, chi) <= bound:
            out.append(frozenset(mask))
    return out


def _subsets(positions: list[int]):
    for bits in range(1 << len(positions)):
        yield {p for j, p in enumerate(positions) if bits >> j & 1}


def minimal_stretches(n: int, s, chi: MixedChar, direction: Direction) -> list[tuple[int, ...]]:
    """The unique finest partition of S into admissible stretches.

    Greedy from the bottom of each maximal run: a stretch absorbs the forced
    digits above its start (zeros for down, p-1 for up) and stops at the
    first free position.
    """
    s = set(s)
    check = is_down_admissible if direction is Direction.DOWN else is_up_admissible
    if not check(n, s, chi):
        raise NotAdmissible(f"{s} is not {direction.value}-admissible for {n}")
    e = expand(n, chi)
    forced = 0 if direction is Direction.DOWN else chi.p - 1
    out = []
    for run in stretches(s):
        piece = [run[0]]
        for i in run[1:]:
            if e.digit(i) == forced:
                piece.append(i)
            else:
                out.append(tuple(piece))
                piece = [i]
        out.append(tuple(piece))
    return out


def chain_between(s1, s2, n: int, chi: MixedChar) -> list[frozenset[int]]:
    """An increasing chain of up-admissible sets from S1 to S2, one new index
    per step, following the highest-stretch rule of the inductive argument."""
    s1, s2 = frozenset(s1), frozenset(s2)
    if not s1 <= s2:
        raise NotNested(f"{set(s1)} is not contained in {set(s2)}")
    for s in (s1, s2):
        if not is_up_admissible(n, s, chi):
            raise NotAdmissible(f"{set(s)} is not up-admissible for {n}")
    e = expand(n, chi)
    chain = [s1]
    cur = s1
    while cur != s2:
        t_last = stretches(s2 - cur)[-1]
        nonzero = [a for a in t_last if e.digit(a) != 0]
        alpha = max(nonzero) if nonzero else min(t_last)
        cur = cur | {alpha}
        if not is_up_admissible(n, cur, chi):
            raise NotAdmissible(f"intermediate set {set(cur)} fails admissibility")
        chain.append(cur)
    return chain

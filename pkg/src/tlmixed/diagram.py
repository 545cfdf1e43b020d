"""The Temperley-Lieb category: planar pairings and their linear combinations.

A diagram is a perfect non-crossing matching of m bottom and n top boundary
points, stored as an involution array over indices 0..m+n-1 (bottom points
first, left to right, then top points left to right).  The involution tuple
is the canonical form: equal diagrams are identical tuples.

Morphisms are finite linear combinations of diagrams over a coefficient
ring, generic through a tiny adapter (rational functions, the localisation,
or a residue field); composition multiplies by delta once per closed loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .ring import DELTA, IntPoly, RatFunc, _Field


class BoundaryMismatch(ValueError):
    pass


class NotPlanar(ValueError):
    pass


class ZeroMorphism(ValueError):
    pass


class BadStrandCount(ValueError):
    pass


# ---------------------------------------------------------------------------
# pairing-level kernels (tuples in, tuples out; the hot path)
# ---------------------------------------------------------------------------


def compose_pairings(fp: tuple, m: int, k: int, gp: tuple, n: int) -> tuple[tuple, int]:
    """Stack g on top of f (f: m->k, g: k->n); returns (pairing, loops)."""
    size = m + n
    out = [-1] * size
    seen = [False] * k
    for start in range(size):
        if out[start] >= 0:
            continue
        if start < m:
            in_f, pt = True, start
        else:
            in_f, pt = False, k + (start - m)
        while True:
            if in_f:
                q = fp[pt]
                if q < m:
                    end = q
                    break
                t = q - m
                seen[t] = True
                in_f, pt = False, t
            else:
                q = gp[pt]
                if q >= k:
                    end = m + (q - k)
                    break
                seen[q] = True
                in_f, pt = True, m + q
        out[start], out[end] = end, start
    loops = 0
    for t in range(k):
        if not seen[t]:
            u = t
            while not seen[u]:
                seen[u] = True
                v = fp[m + u] - m
                seen[v] = True
                u = gp[v]
            loops += 1
    return tuple(out), loops


def tensor_pairings(fp: tuple, a: int, b: int, gp: tuple, c: int, d: int) -> tuple:
    """Place g to the right of f (f: a->b, g: c->d)."""

    def f_map(i):
        return i if i < a else i + c

    def g_map(j):
        return a + j if j < c else a + b + j

    out = [0] * (a + b + c + d)
    for i in range(a + b):
        out[f_map(i)] = f_map(fp[i])
    for j in range(c + d):
        out[g_map(j)] = g_map(gp[j])
    return tuple(out)


def star_pairing(fp: tuple, m: int, n: int) -> tuple:
    """Vertical reflection: an (m, n)-pairing becomes an (n, m)-pairing."""
    # old bottom i -> new top n+i, old top m+j -> new bottom j
    inv = [i - m if i >= m else n + i for i in range(m + n)]
    out = [0] * (m + n)
    for i in range(m + n):
        out[inv[i]] = inv[fp[i]]
    return tuple(out)


def is_planar_pairing(p: tuple, m: int, n: int) -> bool:
    size = m + n
    if sorted(p) != list(range(size)) or any(p[p[i]] != i or p[i] == i for i in range(size)):
        return False
    # strip order: bottom left-to-right, then top right-to-left
    order = list(range(m)) + [m + n - 1 - j for j in range(n)]
    pos = {pt: i for i, pt in enumerate(order)}
    stack = []
    for pt in order:
        if stack and stack[-1] == p[pt]:
            stack.pop()
        elif pos[p[pt]] < pos[pt]:
            return False
        else:
            stack.append(pt)
    return not stack


def through_degree_pairing(p: tuple, m: int, n: int) -> int:
    return sum(1 for i in range(m) if p[i] >= m)


def identity_pairing(n: int) -> tuple:
    return tuple((i + n) % (2 * n) for i in range(2 * n))


def cap_pairing(n: int, i: int) -> tuple:
    """The cap generator n -> n-2 joining bottom points i, i+1."""
    out = [0] * (2 * n - 2)
    out[i], out[i + 1] = i + 1, i
    tops = iter(range(n, 2 * n - 2))
    for b in range(n):
        if b not in (i, i + 1):
            t = next(tops)
            out[b], out[t] = t, b
    return tuple(out)


def capnest_pairing(n: int, centre: int, k: int) -> tuple:
    """n -> n-2k: k nested arcs joining bottom centre-k..centre+k-1."""
    out = [0] * (2 * n - 2 * k)
    for t in range(k):
        a, b = centre - 1 - t, centre + t
        out[a], out[b] = b, a
    tops = iter(range(n, 2 * n - 2 * k))
    for i in range(n):
        if not (centre - k <= i < centre + k):
            t = next(tops)
            out[i], out[t] = t, i
    return tuple(out)


# ---------------------------------------------------------------------------
# diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Diagram:
    """A planar (bot, top)-pairing in canonical involution form."""

    bot: int
    top: int
    pairing: tuple[int, ...]

    def __post_init__(self):
        if (self.bot + self.top) % 2:
            raise BoundaryMismatch("bottom and top must have equal parity")
        if not is_planar_pairing(self.pairing, self.bot, self.top):
            raise NotPlanar(f"not a planar {self.bot}->{self.top} pairing: {self.pairing}")

    @staticmethod
    def identity(n: int) -> "Diagram":
        return Diagram(n, n, identity_pairing(n))

    @staticmethod
    def u(n: int, i: int) -> "Diagram":
        """The generator u_i of TL_n (1-based position, caps i-1, i)."""
        if not 1 <= i <= n - 1:
            raise ValueError(f"u_{i} does not live in TL_{n}")
        p = [0] * (2 * n)
        p[i - 1], p[i] = i, i - 1
        p[n + i - 1], p[n + i] = n + i, n + i - 1
        for j in range(n):
            if j not in (i - 1, i):
                p[j], p[n + j] = n + j, j
        return Diagram(n, n, tuple(p))

    @staticmethod
    def cap(n: int, i: int) -> "Diagram":
        return Diagram(n, n - 2, cap_pairing(n, i))

    @staticmethod
    def cup(n: int, i: int) -> "Diagram":
        return Diagram(n, n + 2, star_pairing(cap_pairing(n + 2, i), n + 2, n))

    def through_degree(self) -> int:
        return through_degree_pairing(self.pairing, self.bot, self.top)

    def star(self) -> "Diagram":
        return Diagram(self.top, self.bot, star_pairing(self.pairing, self.bot, self.top))

    def to_json(self) -> dict:
        return {"bot": self.bot, "top": self.top, "pairing": list(self.pairing)}

    def ascii(self) -> str:
        """A small text picture: top row, strands, bottom row."""
        m, n, p = self.bot, self.top, self.pairing
        width = 2 * max(m, n, 1)
        rows = [[" "] * width for _ in range(3)]
        for j in range(n):
            rows[0][2 * j] = "•"
        for i in range(m):
            rows[2][2 * i] = "•"
        marks = []
        for i in sorted(range(m + n), key=lambda x: (x >= m, x)):
            j = p[i]
            if i < j:
                a = 2 * i if i < m else 2 * (i - m)
                b = 2 * j if j < m else 2 * (j - m)
                kind = ("|" if a == b else "/") if (i < m) != (j < m) else ("-")
                marks.append((a, b, kind))
        for a, b, kind in marks:
            lo, hi = min(a, b), max(a, b)
            for x in range(lo, hi + 1):
                if rows[1][x] == " ":
                    rows[1][x] = kind if x in (lo, hi) or kind == "|" else "-"
        return "\n".join("".join(r) for r in rows)

    def __str__(self):
        pairs = sorted((i, j) for i, j in enumerate(self.pairing) if i < j)
        return f"D({self.bot}->{self.top}; " + " ".join(f"{i}-{j}" for i, j in pairs) + ")"


@lru_cache(maxsize=None)
def enumerate_pairings(m: int, n: int) -> tuple[tuple, ...]:
    """All planar (m, n)-pairings, deterministic order."""
    if (m + n) % 2:
        raise BoundaryMismatch("m and n must have equal parity")
    order = list(range(m)) + [m + n - 1 - j for j in range(n)]

    def match(points: tuple) -> list[list[tuple[int, int]]]:
        if not points:
            return [[]]
        out = []
        a = points[0]
        for idx in range(1, len(points), 2):
            b = points[idx]
            inner = match(points[1:idx])
            outer = match(points[idx + 1 :])
            for x in inner:
                for y in outer:
                    out.append([(a, b)] + x + y)
        return out

    results = []
    for matching in match(tuple(order)):
        p = [0] * (m + n)
        for a, b in matching:
            p[a], p[b] = b, a
        results.append(tuple(p))
    return tuple(sorted(results))


def enumerate_diagrams(m: int, n: int) -> list[Diagram]:
    return [Diagram(m, n, p) for p in enumerate_pairings(m, n)]


# ---------------------------------------------------------------------------
# coefficient-ring adapters
# ---------------------------------------------------------------------------


class QRing:
    """Coefficients in Q(d) (also serving the localisation Z[d]_m)."""

    zero = RatFunc(0)
    one = RatFunc(1)

    @staticmethod
    def coerce(x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, IntPoly)):
            return RatFunc(x)
        raise TypeError(f"cannot coerce {x!r} into Q(d)")

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    @lru_cache(maxsize=None)
    def delta_power(l: int) -> RatFunc:
        return RatFunc(DELTA**l)

    @staticmethod
    def is_zero(x) -> bool:
        return x.is_zero()


class KRing:
    """Coefficients in the residue field, encoded as small ints."""

    def __init__(self, field: _Field):
        self.field = field
        self.zero = 0
        self.one = 1
        self.add = field.add
        self.mul = field.mul
        self._dpow = {0: 1}

    def coerce(self, x):
        # ints always mean integers; already-encoded values travel as FieldElem
        if isinstance(x, IntPoly):
            return self.field.from_intpoly(x)
        if isinstance(x, int):
            return self.field.from_intpoly(IntPoly(x))
        from .ring import FieldElem

        if isinstance(x, FieldElem) and x.field is self.field:
            return x.value
        raise TypeError(f"cannot coerce {x!r} into {self.field}")

    def delta_power(self, l: int) -> int:
        out = self._dpow.get(l)
        if out is None:
            out = self._dpow[l] = self.field.pow(self.field.delta, l)
        return out

    @staticmethod
    def is_zero(x) -> bool:
        return x == 0


RATIONAL = QRing()


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------


@dataclass
class Morphism:
    """A finite linear combination of (source -> target)-diagrams."""

    source: int
    target: int
    terms: dict  # pairing tuple -> nonzero coefficient
    ring: object = field(default=RATIONAL)

    @staticmethod
    def from_diagram(d: Diagram, ring=RATIONAL, coeff=None) -> "Morphism":
        c = ring.one if coeff is None else ring.coerce(coeff)
        return Morphism(d.bot, d.top, {d.pairing: c} if not ring.is_zero(c) else {}, ring)

    @staticmethod
    def identity(n: int, ring=RATIONAL) -> "Morphism":
        return Morphism(n, n, {identity_pairing(n): ring.one}, ring)

    @staticmethod
    def zero(m: int, n: int, ring=RATIONAL) -> "Morphism":
        return Morphism(m, n, {}, ring)

    def diagrams(self):
        return [Diagram(self.source, self.target, p) for p in sorted(self.terms)]

    def coefficient(self, d: Diagram):
        return self.terms.get(d.pairing, self.ring.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Morphism") -> "Morphism":
        if (self.source, self.target) != (other.source, other.target):
            raise BoundaryMismatch("adding morphisms with different boundaries")
        radd, rzero = self.ring.add, self.ring.is_zero
        out = dict(self.terms)
        for p, c in other.terms.items():
            acc = out.get(p)
            acc = c if acc is None else radd(acc, c)
            if rzero(acc):
                out.pop(p, None)
            else:
                out[p] = acc
        return Morphism(self.source, self.target, out, self.ring)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + other.scale(-1)

    def scale(self, c) -> "Morphism":
        c = self.ring.coerce(c)
        if self.ring.is_zero(c):
            return Morphism.zero(self.source, self.target, self.ring)
        rmul = self.ring.mul
        return Morphism(self.source, self.target, {p: rmul(v, c) for p, v in self.terms.items()}, self.ring)

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other (other: m->k, self: k->n)."""
        if other.target != self.source:
            raise BoundaryMismatch(f"cannot compose {self.source}->{self.target} after {other.source}->{other.target}")
        m, k, n = other.source, other.target, self.target
        ring = self.ring
        out: dict = {}
        dp, radd, rmul, rzero = ring.delta_power, ring.add, ring.mul, ring.is_zero
        for gp, cg in self.terms.items():
            for fp, cf in other.terms.items():
                pairing, loops = compose_pairings(fp, m, k, gp, n)
                c = rmul(cf, cg) if not loops else rmul(rmul(cf, cg), dp(loops))
                acc = out.get(pairing)
                acc = c if acc is None else radd(acc, c)
                if rzero(acc):
                    out.pop(pairing, None)
                else:
                    out[pairing] = acc
        return Morphism(m, n, out, ring)

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return self.tensor(other)

    def tensor(self, other: "Morphism") -> "Morphism":
        a, b, c, d = self.source, self.target, other.source, other.target
        rmul = self.ring.mul
        out: dict = {}
        for fp, cf in self.terms.items():
            for gp, cg in other.terms.items():
                out[tensor_pairings(fp, a, b, gp, c, d)] = rmul(cf, cg)
        return Morphism(a + c, b + d, out, self.ring)

    def star(self) -> "Morphism":
        m, n = self.source, self.target
        return Morphism(n, m, {star_pairing(p, m, n): c for p, c in self.terms.items()}, self.ring)

    def through_degree(self) -> int:
        if not self.terms:
            raise ZeroMorphism("through degree of the zero morphism")
        m, n = self.source, self.target
        return max(through_degree_pairing(p, m, n) for p in self.terms)

    def td_filter(self, min_td: int) -> "Morphism":
        """Drop all terms of through degree below min_td (cell-module view)."""
        m, n = self.source, self.target
        kept = {p: c for p, c in self.terms.items() if through_degree_pairing(p, m, n) >= min_td}
        return Morphism(m, n, kept, self.ring)

    def partial_close(self, k: int) -> "Morphism":
        """Trace off the last k strands (right closure), n->n endomorphisms."""
        if self.source != self.target:
            raise BadStrandCount("partial closure needs an endomorphism")
        n = self.source
        if not 0 <= k <= n:
            raise BadStrandCount(f"cannot close {k} of {n} strands")
        ring = self.ring
        out: dict = {}
        for p, c in self.terms.items():
            q, loops = _close_pairing(p, n, k)
            c = ring.mul(c, ring.delta_power(loops)) if loops else c
            acc = out.get(q)
            acc = c if acc is None else ring.add(acc, c)
            if ring.is_zero(acc):
                out.pop(q, None)
            else:
                out[q] = acc
        return Morphism(n - k, n - k, out, ring)

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        if (self.source, self.target) != (other.source, other.target):
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[p] == other.terms[p] for p in self.terms)

    def __str__(self):
        if not self.terms:
            return f"0: {self.source}->{self.target}"
        bits = [f"({self.terms[p]}) * {Diagram(self.source, self.target, p)}" for p in sorted(self.terms)]
        return " + ".join(bits)


def _close_pairing(p: tuple, n: int, k: int) -> tuple[tuple, int]:
    """Connect top n-k..n-1 to bottom n-k..n-1 by nested arcs on the right."""
    keep = n - k
    # external identification: bottom keep+j <-> top n + keep+j
    ext = {}
    for j in range(k):
        ext[keep + j] = 2 * n - k + j
        ext[2 * n - k + j] = keep + j

    def new_index(i):
        return i if i < keep else keep + (i - n)

    out = [-1] * (2 * keep)
    seen = set()
    for start in list(range(keep)) + list(range(n, n + keep)):
        si = new_index(start)
        if out[si] >= 0:
            continue
        pt = start
        while True:
            q = p[pt]
            if q in ext:
                seen.add(q)
                pt = ext[q]
                seen.add(pt)
            else:
                break
        out[si], out[new_index(q)] = new_index(q), si
    loops = 0
    for j in list(ext):
        if j not in seen:
            pt = j
            while pt not in seen:
                seen.add(pt)
                q = p[pt]
                seen.add(q)
                pt = ext[q]
            loops += 1
    return tuple(out), loops

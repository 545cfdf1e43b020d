"""Cell modules W_n(m) of the Temperley-Lieb algebra.

The basis is the set of monic (m, n)-half-diagrams (through degree m), in
canonical bijection with standard Young tableaux of the two-row shape
((n+m)/2, (n-m)/2) and with +-1 ballot sequences; the action of TL_n is
composition followed by killing everything of lower through degree, and the
cellular bilinear form reads off the identity coefficient of star(x) y.

The light-ladder construction produces a basis of W_n(m) from any family of
endomorphisms congruent to the identity modulo lower through degree, and the
change of basis to the diagram basis is unitriangular for the reverse
lexicographic order on tableaux; both facts are exercised by the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import jw as jwmod
from .diagram import (
    RATIONAL,
    Diagram,
    KRing,
    Morphism,
    compose_pairings,
    identity_pairing,
    star_pairing,
    through_degree_pairing,
)
from .ring import MixedChar, RatFunc


class ParityMismatch(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class FamilyNotUnipotent(ValueError):
    pass


class NotInLambdaZero(ValueError):
    pass


def ballot(n: int, m: int) -> int:
    """dim W_n(m): standard tableaux of shape ((n+m)/2, (n-m)/2)."""
    if m < 0 or m > n or (n - m) % 2:
        return 0
    k = (n - m) // 2
    return math.comb(n, k) - (math.comb(n, k - 1) if k >= 1 else 0)


# ---------------------------------------------------------------------------
# indexings: ballot sequences <-> tableaux <-> monic half-diagrams
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def ballot_sequences(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    """All +-1 sequences of length n, partial sums >= 0, total m."""
    if (n - m) % 2 or m < 0 or m > n:
        return ()
    out = []

    def rec(prefix, total):
        i = len(prefix)
        if i == n:
            out.append(tuple(prefix))
            return
        rest = n - i
        for s in (1, -1):
            t = total + s
            if t < 0 or abs(m - t) > rest - 1:
                continue
            prefix.append(s)
            rec(prefix, t)
            prefix.pop()

    rec([], 0)
    return tuple(out)


def sequence_to_tableau(seq: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    row1 = tuple(i + 1 for i, s in enumerate(seq) if s == 1)
    row2 = tuple(i + 1 for i, s in enumerate(seq) if s == -1)
    return (row1, row2)


def tableau_to_sequence(t) -> tuple[int, ...]:
    row1, row2 = t
    n = len(row1) + len(row2)
    out = [0] * n
    for i in row1:
        out[i - 1] = 1
    for i in row2:
        out[i - 1] = -1
    if not all(out):
        raise ShapeMismatch("tableau entries must tile 1..n")
    return tuple(out)


def sequence_to_pairing(seq: tuple[int, ...], m: int) -> tuple[int, ...]:
    """The monic (m, n)-half-diagram: -1 closes a cup with the latest open +1."""
    n = len(seq)
    pair = [0] * (m + n)
    stack: list[int] = []
    through: list[int] = []
    for i, s in enumerate(seq):
        if s == 1:
            stack.append(i)
        else:
            j = stack.pop()
            pair[m + i], pair[m + j] = m + j, m + i
    for b, i in enumerate(stack):
        pair[b], pair[m + i] = m + i, b
        through.append(i)
    return tuple(pair)


def pairing_to_sequence(pairing: tuple[int, ...], m: int, n: int) -> tuple[int, ...]:
    out = []
    for i in range(n):
        j = pairing[m + i]
        out.append(-1 if (j >= m and j < m + i) else 1)
    return tuple(out)


def tableau_compare(s, t) -> int:
    """Reverse lexicographic order via truncated-shape dominance.

    Returns -1, 0, 1 for s before/equal/after t; for two-row shapes the
    truncated dominance comparison reduces to partial sums of the ballot
    sequences at the largest disagreeing position.
    """
    ss, ts = tableau_to_sequence(s), tableau_to_sequence(t)
    if len(ss) != len(ts) or sum(ss) != sum(ts):
        raise ShapeMismatch("comparing tableaux of different shapes")
    ps = pt = 0
    verdict = 0
    for a, b in zip(ss, ts):
        ps += a
        pt += b
        if ps != pt:
            verdict = -1 if ps < pt else 1
    return verdict


@dataclass(frozen=True)
class CellBasis:
    """The epic-diagram basis of W_n(m) with its three cross-indexings."""

    n: int
    m: int
    sequences: tuple[tuple[int, ...], ...]
    pairings: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.sequences)

    def tableaux(self):
        return [sequence_to_tableau(s) for s in self.sequences]

    def diagrams(self):
        return [Diagram(self.m, self.n, p) for p in self.pairings]

    def index_of(self, pairing) -> int:
        return self.pairings.index(tuple(pairing))


@lru_cache(maxsize=None)
def cell_basis(n: int, m: int) -> CellBasis:
    if (n - m) % 2 or not 0 <= m <= n:
        raise ParityMismatch(f"W_{n}({m}) is empty")
    seqs = ballot_sequences(n, m)
    pairings = tuple(sequence_to_pairing(s, m) for s in seqs)
    return CellBasis(n, m, seqs, pairings)


@lru_cache(maxsize=None)
def _basis_index(n: int, m: int) -> dict:
    return {p: i for i, p in enumerate(cell_basis(n, m).pairings)}


# ---------------------------------------------------------------------------
# vectors in cell modules
# ---------------------------------------------------------------------------


def act(u: Morphism, vec: dict, n: int, m: int) -> dict:
    """TL_n action on a vector of W_n(m): compose, kill lower through degree.

    Vectors are sparse dicts {basis index: coefficient} over the ring of u.
    """
    basis = cell_basis(n, m)
    idx = _basis_index(n, m)
    ring = u.ring
    out: dict = {}
    for i, c in vec.items():
        bp = basis.pairings[i]
        for p, cu in u.terms.items():
            comp, loops = compose_pairings(bp, m, n, p, n)
            if through_degree_pairing(comp, m, n) < m:
                continue
            j = idx[tuple(comp)]
            val = ring.mul(c, cu)
            if loops:
                val = ring.mul(val, ring.delta_power(loops))
            acc = out.get(j)
            acc = val if acc is None else ring.add(acc, val)
            if ring.is_zero(acc):
                out.pop(j, None)
            else:
                out[j] = acc
    return out


def class_vector(f: Morphism, n: int, m: int) -> dict:
    """The class of a Hom(m, n)-morphism in W_n(m) (drop lower td terms)."""
    idx = _basis_index(n, m)
    ring = f.ring
    out = {}
    for p, c in f.terms.items():
        j = idx.get(tuple(p))
        if j is not None:
            acc = out.get(j)
            acc = c if acc is None else ring.add(acc, c)
            if ring.is_zero(acc):
                out.pop(j, None)
            else:
                out[j] = acc
    return out


def bilinear(x: dict, y: dict, n: int, m: int, ring=RATIONAL):
    """The cellular form <x, y> = coefficient of id_m in star(x) y."""
    g = gram_data(n, m)
    total = ring.zero
    for i, ci in x.items():
        row = g[i]
        for j, cj in y.items():
            l = row[j]
            if l >= 0:
                total = ring.add(total, ring.mul(ring.mul(ci, cj), ring.delta_power(l)))
    return total


@lru_cache(maxsize=None)
def gram_data(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Loop counts of the form: entry (i, j) = l if <e_i, e_j> = delta^l,
    and -1 when the pairing vanishes (through degree drops)."""
    basis = cell_basis(n, m)
    idp = identity_pairing(m) if m else ()
    rows = []
    for bp in basis.pairings:
        sp = star_pairing(bp, m, n)
        row = []
        for bq in basis.pairings:
            comp, loops = compose_pairings(bq, m, n, sp, m)
            row.append(loops if tuple(comp) == tuple(idp) else -1)
        rows.append(tuple(row))
    return tuple(rows)


def gram(n: int, m: int, ring=RATIONAL):
    """The Gram matrix of W_n(m) over the requested coefficient ring."""
    g = gram_data(n, m)
    out = []
    for row in g:
        out.append([ring.zero if l < 0 else ring.delta_power(l) for l in row])
    return out


def gram_intpoly(n: int, m: int):
    """Gram matrix with IntPoly entries (exact, for Z[d]-level work)."""
    from .ring import DELTA, IntPoly

    g = gram_data(n, m)
    return [[IntPoly(0) if l < 0 else DELTA**l for l in row] for row in g]


# ---------------------------------------------------------------------------
# light leaves
# ---------------------------------------------------------------------------


def light_leaves_down(seq: tuple[int, ...], family, ring=RATIONAL) -> Morphism:
    """The down morphism of a ballot sequence for a family of idempotents.

    family(k) must return the TL_k idempotent as a Morphism over ``ring``
    (None meaning the identity); the ladder applies
    eps_{+1}(F) = G_{h+1} (F ox 1) and eps_{-1}(F) = G_{h-1} (1 ox cap) (F ox 1)
    one boundary point at a time.
    """
    cur = Morphism.identity(0, ring)
    height = 0
    for s in seq:
        cur = cur.tensor(Morphism.identity(1, ring))
        if s == 1:
            height += 1
        else:
            cap = Morphism.from_diagram(Diagram.cap(height + 1, height - 1), ring)
            cur = cap.compose(cur)
            height -= 1
        g = family(height)
        if g is not None:
            cur = g.compose(cur)
    return cur


def light_leaves_basis(n: int, m: int, family, ring=RATIONAL) -> list[Morphism]:
    """Up morphisms {v^G_t} for t in the cell poset index set of W_n(m).

    The family must satisfy G_k = id_k mod lower through degree; this is
    spot-checked here (identity coefficient 1) and the ladders are returned
    tableau by tableau in the enumeration order of ``cell_basis``.
    """
    for k in range(1, n + 1):
        g = family(k)
        if g is None:
            continue
        idc = g.coefficient(Diagram.identity(k))
        if not (idc == g.ring.one):
            raise FamilyNotUnipotent(f"family at size {k} is not id mod td(<{k})")
    out = []
    for seq in cell_basis(n, m).sequences:
        out.append(light_leaves_down(seq, family, ring).star())
    return out


def jw_family(cap: int = jwmod.DEFAULT_N_CAP):
    """The classical Jones-Wenzl family for the light-leaves constructor."""
    return lambda k: jwmod.jw(k, cap) if k >= 2 else None


def jwbar_family(chi: MixedChar, cap: int = jwmod.DEFAULT_N_CAP):
    ring = KRing(chi.field)

    def fam(k):
        if k < 2:
            return None
        return jwmod.specialized_jw(k, chi, cap)

    return fam


def identity_family():
    return lambda k: None


# ---------------------------------------------------------------------------
# composition factors
# ---------------------------------------------------------------------------


def composition_factors(n: int, m: int, chi: MixedChar) -> list[tuple[int, frozenset]]:
    """The factor indices m(S) with their up-admissible sets, for W_n(m)."""
    from . import digits as dg

    out = []
    for s in dg.up_admissible_sets(m, chi, n):
        out.append((dg.reflect_up(m, s, chi), s))
    out.sort(key=lambda x: (x[0], sorted(x[1])))
    return out

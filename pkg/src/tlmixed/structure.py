"""Submodule structure of cell modules: truncation elements, the
homomorphism criterion, canonical generators, and Alperin diagrams.

The lattice itself is produced combinatorially: nodes are the up-admissible
sets S for m with m(S) <= n, ordered by reverse inclusion, with covering
edges exactly the one-element extensions.  The linear algebra that audits
this picture at desk scale lives in ``oracle``; here we also build the
explicit generators v_{m(S)} = y JWbar_{m(S)} Ubar_S as vectors of W_n(m)
over the residue field, by pushing td-filtered class vectors through the
ladder stages (a full morphism product is never formed).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import cellmod as cm
from . import digits as dg
from . import jw as jwmod
from .diagram import (
    Diagram,
    Morphism,
    compose_pairings,
    cap_pairing,
    capnest_pairing,
    identity_pairing,
    star_pairing,
    tensor_pairings,
    through_degree_pairing,
)
from .ring import MixedChar, RatFunc


class OutOfRange(ValueError):
    pass


# ---------------------------------------------------------------------------
# the truncation elements y_m, z_m, e_{n,m}
# ---------------------------------------------------------------------------


def y_pairing(n: int, m: int) -> tuple:
    """y_m in Hom(m, n): cups on the left of the top, strands to the right."""
    k = (n - m) // 2
    p = [0] * (m + n)
    for i in range(k):
        a, b = m + 2 * i, m + 2 * i + 1
        p[a], p[b] = b, a
    for j in range(m):
        t = m + 2 * k + j
        p[j], p[t] = t, j
    return tuple(p)


def z_pairing(n: int, m: int) -> tuple:
    """z_m in Hom(m, n): first strand through, then the nested cups."""
    if m == 0:
        return y_pairing(n, 0)
    k = (n - m) // 2
    p = [0] * (m + n)
    p[0], p[m] = m, 0
    for i in range(k):
        a, b = m + 1 + 2 * i, m + 2 + 2 * i
        p[a], p[b] = b, a
    for j in range(1, m):
        t = m + 2 * k + j
        p[j], p[t] = t, j
    return tuple(p)


def y_morphism(n: int, m: int, ring) -> Morphism:
    return Morphism(m, n, {y_pairing(n, m): ring.one}, ring)


def z_morphism(n: int, m: int, ring) -> Morphism:
    return Morphism(m, n, {z_pairing(n, m): ring.one}, ring)


def e_idempotent(n: int, m: int, ring) -> Morphism:
    """e_{n,m} = y_m (z_m)*; for m = 0 the delta-normalised y_0 (y_0)*."""
    if m == 0:
        y0 = y_morphism(n, 0, ring)
        dinv = _delta_inverse(ring)
        if dinv is None:
            raise cm.NotInLambdaZero("delta is not invertible: 0 is outside Lambda_0")
        out = y0.compose(y0.star())
        for _ in range(n // 2):
            out = out.scale(dinv)
        return out
    y = y_morphism(n, m, ring)
    z = z_morphism(n, m, ring)
    return y.compose(z.star())


def _delta_inverse(ring):
    from .diagram import KRing, QRing

    if isinstance(ring, KRing):
        d = ring.field.delta
        if d == 0:
            return None
        from .ring import FieldElem

        return FieldElem(ring.field, ring.field.inv(d))
    return RatFunc(1, [0, 1])


# ---------------------------------------------------------------------------
# the combinatorial lattice
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubmoduleLattice:
    """Nodes (factor, set) and covering edges of the submodule lattice.

    Nodes are ordered by reverse inclusion of the up-admissible sets: the
    head of the cell module is S = {} and each edge joins S to a one-element
    extension (node indices into ``nodes``).
    """

    n: int
    m: int
    nodes: tuple[tuple[int, frozenset], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def factors(self) -> list[int]:
        return [f for f, _ in self.nodes]

    def edge_factors(self) -> set[tuple[int, int]]:
        return {(self.nodes[i][0], self.nodes[j][0]) for i, j in self.edges}


def submodule_lattice(n: int, m: int, chi: MixedChar) -> SubmoduleLattice:
    sets = sorted(dg.up_admissible_sets(m, chi, n), key=lambda s: (len(s), sorted(s)))
    nodes = tuple((dg.reflect_up(m, s, chi), s) for s in sets)
    index = {s: i for i, (_, s) in enumerate(nodes)}
    edges = []
    for i, (_, s1) in enumerate(nodes):
        for x in range(0, _max_index(nodes)):
            if x in s1:
                continue
            s2 = s1 | {x}
            j = index.get(s2)
            if j is not None:
                edges.append((i, j))
    return SubmoduleLattice(n, m, nodes, tuple(sorted(edges)))


def _max_index(nodes) -> int:
    top = 0
    for _, s in nodes:
        if s:
            top = max(top, max(s) + 1)
    return top + 1


def truncate_lattice(lat: SubmoduleLattice, new_n: int) -> SubmoduleLattice:
    """The lattice of W_new_n(m): drop factors above new_n, keep the rest."""
    if (lat.n - new_n) % 2:
        raise cm.ParityMismatch("truncation must preserve parity")
    keep = [i for i, (f, _) in enumerate(lat.nodes) if f <= new_n]
    remap = {i: k for k, i in enumerate(keep)}
    nodes = tuple(lat.nodes[i] for i in keep)
    edges = tuple((remap[i], remap[j]) for i, j in lat.edges if i in remap and j in remap)
    return SubmoduleLattice(new_n, lat.m, nodes, edges)


def alperin_dot(lat: SubmoduleLattice) -> str:
    """Deterministic DOT rendering, ranked by the size of the admissible set."""
    lines = [
        "digraph alperin {",
        "  rankdir=TB;",
        '  node [shape=plaintext, fontsize=12];',
    ]
    by_rank: dict[int, list[int]] = {}
    for i, (_, s) in enumerate(lat.nodes):
        by_rank.setdefault(len(s), []).append(i)
    for r in sorted(by_rank):
        ids = " ".join(f"n{i}" for i in by_rank[r])
        lines.append(f"  {{ rank=same; {ids} }}")
    for i, (f, s) in enumerate(lat.nodes):
        label = f"{f}"
        lines.append(f'  n{i} [label="{label}"];')
    for i, j in lat.edges:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_json(lat: SubmoduleLattice) -> dict:
    return {
        "schema": "tlmixed.alperin.v1",
        "n": lat.n,
        "m": lat.m,
        "nodes": [{"factor": f, "set": sorted(s)} for f, s in lat.nodes],
        "edges": [list(e) for e in lat.edges],
    }


# ---------------------------------------------------------------------------
# td-filtered vector pipeline (class vectors pushed through ladder stages)
# ---------------------------------------------------------------------------


def apply_fast_vec(fdict: dict, src: int, tgt: int, vec: dict, m: int) -> dict:
    """Push a class vector of W_src(m) through a fast-dict Hom(src, tgt).

    Intermediate terms of through degree below m are dropped: composition
    never raises through degree, so they cannot contribute to the class.
    """
    basis = cm.cell_basis(src, m)
    idx = cm._basis_index(tgt, m)
    out: dict = {}
    for i, ci in vec.items():
        bp = basis.pairings[i]
        for p, cf in fdict.items():
            comp, loops = compose_pairings(bp, m, src, p, tgt)
            j = idx.get(tuple(comp))
            if j is None:
                continue
            c = jwmod.qi_mul(ci, cf)
            if loops:
                c = jwmod.qi_scale(c, (2,) * loops, ())
            old = out.get(j)
            if old is None:
                out[j] = c
            else:
                s = jwmod.qi_add(old, c)
                if s:
                    out[j] = s
                else:
                    del out[j]
    return out


def apply_single_vec(pairing: tuple, src: int, tgt: int, vec: dict, m: int) -> dict:
    return apply_fast_vec({bytes(pairing): jwmod.QI_ONE}, src, tgt, vec, m)


def mixed_jw_vec(k: int, chi: MixedChar, vec: dict, m: int, cap: int = jwmod.DEFAULT_N_CAP) -> dict:
    """Apply JW_k to a class vector of W_k(m), stage by stage."""
    out = apply_fast_vec(jwmod.jw_fast(k, cap), k, k, vec, m)
    for s in dg.down_admissible_sets(k, chi):
        if not s:
            continue
        lam = jwmod._qi_from_ratio(*jwmod._lambda_args(k, s, chi))
        ks = dg.reflect_down(k, s, chi)
        if ks < m:
            continue
        w = _down_ladder_vec(k, s, chi, vec, m, cap)
        if ks >= 1:
            w = apply_fast_vec(jwmod.jw_fast(ks, cap), ks, ks, w, m)
        w = _up_ladder_vec(k, s, chi, w, m, cap)
        for j, c in w.items():
            c = jwmod.qi_mul(lam, c)
            old = out.get(j)
            if old is None:
                out[j] = c
            else:
                t = jwmod.qi_add(old, c)
                if t:
                    out[j] = t
                else:
                    del out[j]
    return out


def _down_ladder_vec(k: int, s, chi: MixedChar, vec: dict, m: int, cap: int) -> dict:
    """Apply d_S (classical family): W_k(m) -> W_{k[S]}(m) class vectors."""
    for cur, x, arcs in jwmod._ladder_steps(k, s, chi):
        if x >= 2:
            vec = apply_fast_vec(jwmod.fast_tensor_id(jwmod.jw_fast(x, cap), x, x, cur - x), cur, cur, vec, m)
        vec = apply_single_vec(capnest_pairing(cur, x, arcs), cur, cur - 2 * arcs, vec, m)
    return vec


def _up_ladder_vec(k: int, s, chi: MixedChar, vec: dict, m: int, cap: int) -> dict:
    """Apply u_S = (d_S)*: W_{k[S]}(m) -> W_k(m), stages in reverse."""
    steps = jwmod._ladder_steps(k, s, chi)
    for cur, x, arcs in reversed(steps):
        cupn = star_pairing(capnest_pairing(cur, x, arcs), cur, cur - 2 * arcs)
        vec = apply_single_vec(cupn, cur - 2 * arcs, cur, vec, m)
        if x >= 2:
            vec = apply_fast_vec(jwmod.fast_tensor_id(jwmod.jw_fast(x, cap), x, x, cur - x), cur, cur, vec, m)
    return vec


def mixed_up_ladder_vec(m_base: int, s, chi: MixedChar, vec: dict, cap: int = jwmod.DEFAULT_N_CAP) -> dict:
    """Apply the JW-family up ladder U_S: W_{m}(m)-type vectors upward.

    The stages are the stars of the single-cap steps of D_S for the mixed
    family, each (JW_x ox id) applied through ``mixed_jw_vec`` recursively.
    """
    ms = dg.reflect_up(m_base, s, chi)
    steps = jwmod._ladder_steps(ms, s, chi)
    cur_sizes = []
    c = ms
    for cur, x, arcs in steps:
        cur_sizes.append((cur, x, arcs))
        c = cur - 2 * arcs
    out = vec
    for cur, x, arcs in reversed(cur_sizes):
        cupn = star_pairing(capnest_pairing(cur, x, arcs), cur, cur - 2 * arcs)
        out = apply_single_vec(cupn, cur - 2 * arcs, cur, out, m_base)
        if x >= 2:
            out = _apply_jw_tensor_vec(x, cur - x, chi, out, m_base, cap)
    return out


def _apply_jw_tensor_vec(x: int, extra: int, chi: MixedChar, vec: dict, m: int, cap: int) -> dict:
    """Apply JW_x ox id_extra to class vectors of W_{x+extra}(m)."""
    total = x + extra
    out = apply_fast_vec(jwmod.fast_tensor_id(jwmod.jw_fast(x, cap), x, x, extra), total, total, vec, m)
    for s in dg.down_admissible_sets(x, chi):
        if not s:
            continue
        lam = jwmod._qi_from_ratio(*jwmod._lambda_args(x, s, chi))
        xs = dg.reflect_down(x, s, chi)
        w = dict(vec)
        for cur, xx, arcs in jwmod._ladder_steps(x, s, chi):
            if xx >= 2:
                w = apply_fast_vec(
                    jwmod.fast_tensor_id(jwmod.jw_fast(xx, cap), xx, xx, cur - xx + extra),
                    cur + extra, cur + extra, w, m)
            w = apply_single_vec(
                tensor_pairings(capnest_pairing(cur, xx, arcs), cur, cur - 2 * arcs,
                                identity_pairing(extra), extra, extra),
                cur + extra, cur - 2 * arcs + extra, w, m)
        if xs >= 1:
            w = apply_fast_vec(jwmod.fast_tensor_id(jwmod.jw_fast(xs, cap), xs, xs, extra),
                               xs + extra, xs + extra, w, m)
        steps = jwmod._ladder_steps(x, s, chi)
        for cur, xx, arcs in reversed(steps):
            w = apply_single_vec(
                tensor_pairings(star_pairing(capnest_pairing(cur, xx, arcs), cur, cur - 2 * arcs),
                                cur - 2 * arcs, cur, identity_pairing(extra), extra, extra),
                cur - 2 * arcs + extra, cur + extra, w, m)
            if xx >= 2:
                w = apply_fast_vec(
                    jwmod.fast_tensor_id(jwmod.jw_fast(xx, cap), xx, xx, cur - xx + extra),
                    cur + extra, cur + extra, w, m)
        for j, c in w.items():
            c = jwmod.qi_mul(lam, c)
            old = out.get(j)
            if old is None:
                out[j] = c
            else:
                t = jwmod.qi_add(old, c)
                if t:
                    out[j] = t
                else:
                    del out[j]
    return out


def v_generator(m: int, s, n: int, chi: MixedChar, cap: int = jwmod.DEFAULT_N_CAP) -> dict:
    """The generator v_{m(S)} as a class vector of W_n(m) over the field.

    v = y_{m(S)} JWbar_{m(S)} Ubar_S JWbar_m; the trailing JWbar_m acts as
    the identity on the class and is dropped, the rest is pushed through the
    stages over Q(d) and specialised entrywise at the end (all entries are
    guaranteed local).
    """
    if not dg.is_up_admissible(m, s, chi):
        raise dg.NotAdmissible(f"{set(s)} is not up-admissible for {m}")
    ms = dg.reflect_up(m, s, chi)
    if ms > n:
        raise OutOfRange(f"factor {ms} exceeds n = {n}")
    vec = {0: jwmod.QI_ONE}  # the class of id_m in W_m(m)
    vec = mixed_up_ladder_vec(m, s, chi, vec, cap)
    vec = mixed_jw_vec(ms, chi, vec, m, cap)
    # y_{m(S)}: Hom(m(S), n) maps classes W_{m(S)}(m) -> W_n(m)
    vec = apply_single_vec(y_pairing(n, ms), ms, n, vec, m)
    F = chi.field
    out = {}
    for j, c in vec.items():
        val = jwmod.qc_specialize(jwmod.qi_value(c), chi)
        if val:
            out[j] = val
    return out


def hom_criterion_space(model, m: int) -> list:
    """Basis of {v in M : td(<m) v = 0 and e_m v = v} over the field.

    ``model`` is an oracle.MatrixModel; the dimension of the returned basis
    is dim Hom(W(m), M).
    """
    from . import oracle

    return oracle.hom_criterion_space(model, m)

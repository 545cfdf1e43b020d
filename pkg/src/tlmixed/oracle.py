"""Independent brute-force verifiers over the residue field.

Matrix models realise cell modules concretely: basis vectors are the monic
half-diagrams, generators act by direct diagram composition, and everything
downstream is plain linear algebra over a small finite field.  These models
audit the closed-form results (factor counts, submodule lattices, hom
spaces) at desk scale; disagreement is a build failure, not a warning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import cellmod as cm
from . import digits as dg
from . import structure as st
from .diagram import Diagram, KRing, Morphism
from .ring import MixedChar

DEFAULT_SCALE_CAP = 12


class ScaleLimit(ValueError):
    pass


# ---------------------------------------------------------------------------
# linear algebra over the field (vectors = lists of encoded elements)
# ---------------------------------------------------------------------------


class FieldOps:
    def __init__(self, F):
        self.F = F

    def rref(self, rows: list[list[int]]) -> list[list[int]]:
        """Reduced row echelon basis of the row space."""
        F = self.F
        basis: list[list[int]] = []
        pivots: list[int] = []
        for row in rows:
            row = list(row)
            for b, p in zip(basis, pivots):
                if row[p]:
                    c = row[p]
                    row = [F.sub(x, F.mul(c, y)) for x, y in zip(row, b)]
            lead = next((i for i, x in enumerate(row) if x), None)
            if lead is None:
                continue
            inv = F.inv(row[lead])
            row = [F.mul(inv, x) for x in row]
            for b, p in zip(basis, pivots):
                if b[lead]:
                    c = b[lead]
                    b[:] = [F.sub(x, F.mul(c, y)) for x, y in zip(b, row)]
            basis.append(row)
            pivots.append(lead)
        order = sorted(range(len(basis)), key=lambda i: pivots[i])
        return [basis[i] for i in order]

    def rank(self, rows) -> int:
        return len(self.rref(rows))

    def nullspace(self, rows: list[list[int]], ncols: int) -> list[list[int]]:
        F = self.F
        basis = self.rref(rows)
        pivots = [next(i for i, x in enumerate(b) if x) for b in basis]
        free = [j for j in range(ncols) if j not in pivots]
        out = []
        for j in free:
            v = [0] * ncols
            v[j] = 1
            for b, p in zip(basis, pivots):
                v[p] = F.neg(b[j])
            out.append(v)
        return out

    def in_span(self, basis_rref: list[list[int]], v: list[int]) -> bool:
        F = self.F
        v = list(v)
        for b in basis_rref:
            p = next(i for i, x in enumerate(b) if x)
            if v[p]:
                c = v[p]
                v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, b)]
        return not any(v)

    def spans_contained(self, a: list[list[int]], b: list[list[int]]) -> bool:
        return all(self.in_span(b, row) for row in a)


# ---------------------------------------------------------------------------
# matrix models of cell modules
# ---------------------------------------------------------------------------


@dataclass
class MatrixModel:
    """W_n(m) over the residue field with generator matrices."""

    n: int
    m: int
    chi: MixedChar
    ring: KRing = field(init=False)
    dim: int = field(init=False)
    gens: dict = field(init=False)

    def __post_init__(self):
        self.ring = KRing(self.chi.field)
        basis = cm.cell_basis(self.n, self.m)
        self.dim = basis.dim
        self.gens = {}
        for i in range(1, self.n):
            u = Morphism.from_diagram(Diagram.u(self.n, i), self.ring)
            self.gens[i] = self._matrix(u)

    def _matrix(self, f: Morphism) -> list[list[int]]:
        """Column-stochastic layout: column j = image of basis vector j."""
        cols = []
        for j in range(self.dim):
            img = cm.act(f, {j: 1}, self.n, self.m)
            col = [0] * self.dim
            for i, c in img.items():
                col[i] = c
            cols.append(col)
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def matrix_of(self, f: Morphism) -> list[list[int]]:
        return self._matrix(f)

    def apply(self, mat: list[list[int]], vec: list[int]) -> list[int]:
        F = self.chi.field
        out = [0] * self.dim
        for i, row in enumerate(mat):
            acc = 0
            for a, b in zip(row, vec):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            out[i] = acc
        return out

    def apply_gen(self, i: int, vec: list[int]) -> list[int]:
        return self.apply(self.gens[i], vec)

    def check_relations(self) -> bool:
        """u_i^2 = delta u_i, braid-type and far commutation as matrices."""
        F = self.chi.field
        d = F.delta

        def matmul(a, b):
            return [[_dot(F, row, [b[k][j] for k in range(len(b))]) for j in range(len(b[0]))] for row in a]

        for i, ui in self.gens.items():
            if matmul(ui, ui) != [[F.mul(d, x) for x in row] for row in ui]:
                return False
            for j, uj in self.gens.items():
                if abs(i - j) >= 2 and matmul(ui, uj) != matmul(uj, ui):
                    return False
                if abs(i - j) == 1:
                    if matmul(matmul(ui, uj), ui) != ui:
                        return False
        return True


def _dot(F, row, col):
    acc = 0
    for a, b in zip(row, col):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def build_matrix_model(n: int, m: int, chi: MixedChar, scale_cap: int = DEFAULT_SCALE_CAP) -> MatrixModel:
    if n > scale_cap:
        raise ScaleLimit(f"matrix model at n={n} exceeds the scale cap {scale_cap}")
    model = MatrixModel(n, m, chi)
    assert model.check_relations(), "generator matrices violate the TL relations"
    return model


# ---------------------------------------------------------------------------
# cyclic submodules and the containment poset
# ---------------------------------------------------------------------------


def cyclic_submodule(model: MatrixModel, v: list[int]) -> list[list[int]]:
    """Echelon basis of the smallest generator-stable subspace containing v."""
    ops = FieldOps(model.chi.field)
    basis = ops.rref([v])
    queue = list(basis)
    while queue:
        w = queue.pop()
        for i in model.gens:
            img = model.apply_gen(i, w)
            if any(img) and not ops.in_span(basis, img):
                basis = ops.rref(basis + [img])
                queue.append(img)
    return basis


def generator_vector(model: MatrixModel, s) -> list[int]:
    vec = st.v_generator(model.m, s, model.n, model.chi)
    out = [0] * model.dim
    for i, c in vec.items():
        out[i] = c
    return out


def poset_of_cyclic_submodules(n: int, m: int, chi: MixedChar, scale_cap: int = DEFAULT_SCALE_CAP):
    """Containment data of the cyclic modules on the canonical generators.

    Returns (lattice, spans, containment) where containment[(i, j)] is True
    when the cyclic module of node j contains the one of node i.
    """
    if n > scale_cap:
        raise ScaleLimit(f"poset at n={n} exceeds the scale cap {scale_cap}")
    lat = st.submodule_lattice(n, m, chi)
    model = build_matrix_model(n, m, chi, scale_cap)
    ops = FieldOps(chi.field)
    spans = []
    for f, s in lat.nodes:
        v = generator_vector(model, s)
        assert any(v), f"v_{f} vanished in W_{n}({m})"
        spans.append(cyclic_submodule(model, v))
    containment = {}
    for i in range(len(spans)):
        for j in range(len(spans)):
            containment[(i, j)] = ops.spans_contained(spans[i], spans[j])
    return lat, spans, containment


def poset_matches_lattice(n: int, m: int, chi: MixedChar, scale_cap: int = DEFAULT_SCALE_CAP) -> bool:
    """The audit: cyclic-module containment must mirror reverse inclusion."""
    lat, spans, cont = poset_of_cyclic_submodules(n, m, chi, scale_cap)
    for i, (_, si) in enumerate(lat.nodes):
        for j, (_, sj) in enumerate(lat.nodes):
            if cont[(i, j)] != (sj <= si):
                return False
    return True


# ---------------------------------------------------------------------------
# hom spaces via the diagrammatic criterion
# ---------------------------------------------------------------------------


def _ideal_annihilator(model: MatrixModel, m: int) -> list[list[int]]:
    """Basis of {v : td(<m) v = 0}.

    The ideal of lower through degree is generated by the single element
    e_{n, m-2} (every lower diagram factors through it), so the annihilator
    is the largest generator-stable subspace of its kernel.
    """
    ops = FieldOps(model.chi.field)
    if m - 2 < 0:
        return ops.rref([[1 if i == j else 0 for j in range(model.dim)] for i in range(model.dim)])
    t = m - 2
    try:
        e = st.e_idempotent(model.n, t, model.ring)
    except cm.NotInLambdaZero:
        # delta = 0 with t = 0: the unnormalised y_0 (y_0)* spans the same ideal
        y0 = st.y_morphism(model.n, 0, model.ring)
        e = y0.compose(y0.star())
    ker = ops.nullspace(model.matrix_of(e), model.dim)
    return _stable_subspace(model, ops, ker)


def _stable_subspace(model: MatrixModel, ops: FieldOps, space: list[list[int]]) -> list[list[int]]:
    """Largest subspace of span(space) stable under all generators."""
    F = model.chi.field
    basis = ops.rref(space)
    while True:
        if not basis:
            return []
        k = len(basis)
        constraints = []
        for i in model.gens:
            imgs = [model.apply_gen(i, b) for b in basis]
            # residues of images modulo the span, as linear maps on coords
            for comp in _complement_functionals(ops, basis, model.dim):
                row = [_dot(F, comp, img) for img in imgs]
                if any(row):
                    constraints.append(row)
        if not constraints:
            return basis
        sols = ops.nullspace(constraints, k)
        if len(sols) == k:
            return basis
        new_basis = []
        for sol in sols:
            vec = [0] * model.dim
            for c, b in zip(sol, basis):
                if c:
                    vec = [F.add(x, F.mul(c, y)) for x, y in zip(vec, b)]
            if any(vec):
                new_basis.append(vec)
        basis = ops.rref(new_basis)


def _complement_functionals(ops: FieldOps, basis: list[list[int]], dim: int) -> list[list[int]]:
    """Coordinate functionals vanishing on span(basis): rows of a check map."""
    pivots = [next(i for i, x in enumerate(b) if x) for b in basis]
    out = []
    for j in range(dim):
        if j in pivots:
            continue
        # functional: value at position j minus the basis-correction
        f = [0] * dim
        f[j] = 1
        for b, p in zip(basis, pivots):
            f[p] = ops.F.neg(b[j])
        out.append(f)
    return out


def hom_criterion_space(model: MatrixModel, m: int) -> list[list[int]]:
    """Basis of {v : td(<m) v = 0 and e_m v = v} = Hom(W(m), M)."""
    ops = FieldOps(model.chi.field)
    ann = _ideal_annihilator(model, m)
    if not ann:
        return []
    e = st.e_idempotent(model.n, m, model.ring)
    emat = model.matrix_of(e)
    F = model.chi.field
    imgs = [model.apply(emat, b) for b in ann]
    rows = [[F.sub(img[j], b[j]) for img, b in zip(imgs, ann)] for j in range(model.dim)]
    sols = ops.nullspace(rows, len(ann))
    out = []
    for sol in sols:
        vec = [0] * model.dim
        for c, b in zip(sol, ann):
            if c:
                vec = [F.add(x, F.mul(c, y)) for x, y in zip(vec, b)]
        if any(vec):
            out.append(vec)
    return ops.rref(out)


def hom_dim(n: int, r_source: int, m_target: int, chi: MixedChar, scale_cap: int = DEFAULT_SCALE_CAP) -> int:
    """dim Hom(W_n(r_source), W_n(m_target)) over the residue field."""
    model = build_matrix_model(n, m_target, chi, scale_cap)
    return len(hom_criterion_space(model, r_source))


# ---------------------------------------------------------------------------
# dimension bookkeeping
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def simple_dimension(n: int, r: int, chi: MixedChar) -> int:
    """dim L_n(r) as the rank of the specialised Gram matrix."""
    ops = FieldOps(chi.field)
    ring = KRing(chi.field)
    g = cm.gram(n, r, ring)
    return ops.rank(g)


def factor_dimensions_consistent(n: int, m: int, chi: MixedChar) -> bool:
    """Sum of dim L over predicted factors equals dim W (multiplicity one)."""
    total = sum(simple_dimension(n, f, chi) for f, _ in cm.composition_factors(n, m, chi))
    return total == cm.ballot(n, m)

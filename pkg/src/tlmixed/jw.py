"""Jones-Wenzl idempotents: the classical family jw_n over Q(d), the mixed
family JW_n over the localisation, and the specialised family JWbar_n over
the residue field, together with the ladder morphisms d_S, u_S (and their
JW-family versions) and the intermediate idempotents x_n^S.

jw_n is built by a single-clasp expansion,

    jw_n = sum_k (-1)^(n-k) ([k]/[n]) (jw_{n-1} ox id) u_{n-1} u_{n-2} ... u_k,

which costs one diagram composition per (term of jw_{n-1}, hook) pair
instead of the quadratic blow-up of squaring the two-sided recursion; the
two constructions are compared term by term in the tests.  Coefficients
inside this module are kept in a factored form

    residual polynomial * prod [a_i] / prod [b_j]

so that multiplying by quantum-number ratios is multiset bookkeeping and
membership in Z[d]_m is a divisibility check against the finitely many bad
psi factors.  Everything is expanded to RatFunc at the public boundary.
"""

from __future__ import annotations

from functools import lru_cache

from . import digits as dg
from . import qnum
from .diagram import (
    RATIONAL,
    Diagram,
    KRing,
    Morphism,
    capnest_pairing,
    compose_pairings,
    identity_pairing,
    star_pairing,
    tensor_pairings,
)
from .ring import IntPoly, MixedChar, RatFunc

DEFAULT_N_CAP = 16  # Catalan growth: ~2.7M diagrams at n=14, ~9.7M at n=16


class JwCapExceeded(ValueError):
    pass


class CoefficientNotLocal(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# factored coefficients: (num_indices, den_indices, residual poly tuple)
# ---------------------------------------------------------------------------

QC_ONE = ((), (), (1,))


@lru_cache(maxsize=None)
def _qtuple(n: int) -> tuple[int, ...]:
    return qnum.quantum(n).coeffs


def _pmul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _padd(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _pdiv_exact(a: tuple, b: tuple) -> tuple | None:
    """Quotient by a monic b when division is exact over Z, else None."""
    if len(b) > len(a):
        return None
    r = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
    if any(r[:db]):
        return None
    return tuple(q)


def _merge_cancel(num: list[int], den: list[int]) -> tuple[tuple, tuple]:
    num.sort()
    den.sort()
    out_n, out_d = [], []
    i = j = 0
    while i < len(num) and j < len(den):
        if num[i] == den[j]:
            i += 1
            j += 1
        elif num[i] < den[j]:
            out_n.append(num[i])
            i += 1
        else:
            out_d.append(den[j])
            j += 1
    out_n.extend(num[i:])
    out_d.extend(den[j:])
    return tuple(out_n), tuple(out_d)


def qc_mul(a, b):
    na, da, ra = a
    nb, db, rb = b
    n, d = _merge_cancel(list(na) + list(nb), list(da) + list(db))
    return (n, d, _pmul(ra, rb))


def qc_scale(a, nums: tuple, dens: tuple, sign: int = 1):
    na, da, ra = a
    n, d = _merge_cancel(list(na) + list(nums), list(da) + list(dens))
    return (n, d, tuple(-v for v in ra) if sign < 0 else ra)


@lru_cache(maxsize=None)
def _qval3(j: int) -> int:
    v = 0
    for c in reversed(_qtuple(j)):
        v = v * 3 + c
    return v


def _refactor(resid: tuple, den: tuple) -> tuple:
    """Pull quantum-number factors back out of an expanded residual.

    [j](2) = j and [j](3) grows fast, so [j] can divide the residual only
    when j divides its value at 2 and [j](3) divides its value at 3; the
    double filter makes nearly every attempted division succeed.  This is a
    representation change only, value preserving either way.
    """
    if len(resid) <= 1:
        return ((), den, resid) if resid else None
    nums = []
    val2 = val3 = 0
    for c in reversed(resid):
        val2 = val2 * 2 + c
        val3 = val3 * 3 + c
    while val2 and val3 and len(resid) > 1:
        hit = False
        for j in range(len(resid), 1, -1):
            if val2 % j == 0 and val3 % _qval3(j) == 0:
                q = _pdiv_exact(resid, _qtuple(j))
                if q is not None:
                    nums.append(j)
                    resid = q
                    val2 //= j
                    val3 //= _qval3(j)
                    hit = True
                    break
        if not hit:
            break
    if not resid:
        return None
    n, d = _merge_cancel(nums, list(den))
    return (n, d, resid)


def _msub(big: list, small: tuple) -> tuple[list, list]:
    """Multiset difference big - small and the shared part."""
    rest, shared = list(big), []
    for x in small:
        try:
            rest.remove(x)
            shared.append(x)
        except ValueError:
            pass
    return rest, shared


def qc_add(a, b):
    """Sum of two factored coefficients, None when it vanishes.

    Shared numerator factors stay factored; only the differences are
    expanded into the residual, which is re-factored lazily (``qc_finalize``)
    rather than on every accumulation.
    """
    na, da, ra = a
    nb, db, rb = b
    if na == nb and da == db:
        r = _padd(ra, rb)
        return None if not r else (na, da, r)
    ea, common = _msub(list(na), nb)  # na - nb and the shared part
    eb, _ = _msub(list(nb), na)
    defa, _ = _msub(list(db), da)  # joint - da
    defb, _ = _msub(list(da), db)  # joint - db
    joint = tuple(sorted(list(da) + defa))
    pa = ra
    for x in ea:
        pa = _pmul(pa, _qtuple(x))
    for x in defa:
        pa = _pmul(pa, _qtuple(x))
    pb = rb
    for x in eb:
        pb = _pmul(pb, _qtuple(x))
    for x in defb:
        pb = _pmul(pb, _qtuple(x))
    s = _padd(pa, pb)
    if not s:
        return None
    return (tuple(sorted(common)), joint, s)


def qc_finalize(c):
    """Compact a coefficient by factoring its residual."""
    n, d, r = c
    if len(r) <= 1:
        return c
    n2, d2, r2 = _refactor(r, d)
    n3, d3 = _merge_cancel(list(n2) + list(n), list(d2))
    return (n3, d3, r2)


# ---------------------------------------------------------------------------
# interning: fast dictionaries store small indices into a value table, and
# the arithmetic on indices is memoised (coefficient values repeat heavily
# across the Catalan-many diagrams)
# ---------------------------------------------------------------------------

_VALS: list = [None, QC_ONE]  # index 0 is the absent/zero sentinel
_VIDX: dict = {QC_ONE: 1}
QI_ONE = 1
_ADD_MEMO: dict = {}
_MUL_MEMO: dict = {}
_SCALE_MEMO: dict = {}
_FIN_MEMO: dict = {}


def intern(c) -> int:
    i = _VIDX.get(c)
    if i is None:
        _VALS.append(c)
        i = len(_VALS) - 1
        _VIDX[c] = i
    return i


def qi_value(i: int):
    return _VALS[i]


def qi_add(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    key = (i, j)
    out = _ADD_MEMO.get(key)
    if out is None:
        s = qc_add(_VALS[i], _VALS[j])
        out = 0 if s is None else intern(qc_finalize(s))
        _ADD_MEMO[key] = out
    return out


def qi_mul(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    key = (i, j)
    out = _MUL_MEMO.get(key)
    if out is None:
        out = intern(qc_mul(_VALS[i], _VALS[j]))
        _MUL_MEMO[key] = out
    return out


def qi_scale(i: int, nums: tuple, dens: tuple, sign: int = 1) -> int:
    key = (i, nums, dens, sign)
    out = _SCALE_MEMO.get(key)
    if out is None:
        out = intern(qc_scale(_VALS[i], nums, dens, sign))
        _SCALE_MEMO[key] = out
    return out


def qi_finalize(i: int) -> int:
    out = _FIN_MEMO.get(i)
    if out is None:
        out = intern(qc_finalize(_VALS[i]))
        _FIN_MEMO[i] = out
    return out


def qi_neg(i: int) -> int:
    n, d, r = _VALS[i]
    return intern((n, d, tuple(-x for x in r)))


def fast_equal(f: dict, g: dict) -> bool:
    """Value-level equality of fast dictionaries.

    Factored coefficients are not unique representations, so equality is
    decided by subtraction (the add path expands both sides).
    """
    if set(f) != set(g):
        return False
    return all(f[p] == g[p] or qi_add(f[p], qi_neg(g[p])) == 0 for p in f)


def qc_to_ratfunc(c) -> RatFunc:
    n, d, r = c
    out = RatFunc.from_quantum_ratio(list(n), list(d))
    return out * RatFunc(IntPoly(r))


def qc_num_den(c) -> tuple[IntPoly, dict[int, int]]:
    """Numerator polynomial and denominator as a psi-index multiset."""
    n, d, r = c
    num = IntPoly(r)
    for x in n:
        num = num * qnum.quantum(x)
    dpsi: dict[int, int] = {}
    for x in d:
        for k in qnum.psi_indices(x):
            dpsi[k] = dpsi.get(k, 0) + 1
    return num, dpsi


@lru_cache(maxsize=None)
def _bad_cache(k: int, chi: MixedChar) -> bool:
    """Whether psi_k lies in (p, m_delta); these are the only denominator
    factors that can obstruct membership in the localisation."""
    from .ring import in_maximal_ideal

    return in_maximal_ideal(qnum.psi(k), chi)


def qc_local_parts(c, chi: MixedChar):
    """Split after clearing: returns (numerator, unit denominator psi-multiset)
    or None when the coefficient is not in Z[d]_m."""
    num, dpsi = qc_num_den(c)
    unit = {}
    for k, e in dpsi.items():
        if _bad_cache(k, chi):
            pk = qnum.psi(k)
            for _ in range(e):
                q = num.try_exact_div(pk)
                if q is None:
                    return None
                num = q
        else:
            unit[k] = e
    return num, unit


def qc_specialize(c, chi: MixedChar) -> int:
    """Image in the residue field (encoded int); raises if not local."""
    parts = qc_local_parts(c, chi)
    if parts is None:
        raise CoefficientNotLocal(f"coefficient {qc_to_ratfunc(c)} is not in Z[d]_m")
    num, unit = parts
    F = chi.field
    out = F.from_intpoly(num)
    for k, e in unit.items():
        v = F.from_intpoly(qnum.psi(k))
        out = F.mul(out, F.pow(F.inv(v), e))
    return out


# ---------------------------------------------------------------------------
# fast morphism dictionaries: pairing bytes -> factored coefficient
# ---------------------------------------------------------------------------


def _acc(out: dict, key: bytes, ci: int) -> None:
    old = out.get(key)
    if old is None:
        out[key] = ci
    else:
        s = qi_add(old, ci)
        if s:
            out[key] = s
        else:
            del out[key]


def fast_compose(f: dict, m: int, k: int, g: dict, n: int) -> dict:
    """g after f on fast dictionaries; delta^loops folds into [2]-factors."""
    out: dict = {}
    for gp, cg in g.items():
        for fp, cf in f.items():
            pairing, loops = compose_pairings(fp, m, k, gp, n)
            c = qi_mul(cf, cg)
            if loops:
                c = qi_scale(c, (2,) * loops, ())
            _acc(out, bytes(pairing), c)
    return out


def fast_star(f: dict, m: int, n: int) -> dict:
    return {bytes(star_pairing(p, m, n)): c for p, c in f.items()}


def fast_tensor_id(f: dict, m: int, n: int, extra: int) -> dict:
    idp = identity_pairing(extra)
    return {bytes(tensor_pairings(p, m, n, idp, extra, extra)): c for p, c in f.items()}


def fast_scale(f: dict, ci: int) -> dict:
    out = {}
    for p, c in f.items():
        v = qi_mul(c, ci)
        if v:
            out[p] = v
    return out


def fast_to_morphism(f: dict, m: int, n: int) -> Morphism:
    return Morphism(m, n, {tuple(p): qc_to_ratfunc(_VALS[c]) for p, c in f.items()})


def fast_specialize(f: dict, m: int, n: int, chi: MixedChar) -> Morphism:
    ring = KRing(chi.field)
    terms = {}
    for p, c in f.items():
        v = qc_specialize(_VALS[c], chi)
        if v:
            terms[tuple(p)] = v
    return Morphism(m, n, terms, ring)


# ---------------------------------------------------------------------------
# the classical family
#
# Levels are built in the uniformly scaled representation P_n = [n]! jw_n,
# whose coefficients are plain integer polynomials: the single-clasp step
# P_n = sum_k (-1)^(n-k) [k] (P_{n-1} ox id) tau_k involves only polynomial
# multiplication by [k] (memoised per distinct value) and addition, both on
# interned values.  The factored Q(d)-form is recovered once per level by
# dividing the [n]! scale back out.
# ---------------------------------------------------------------------------

_jw_fast_cache: dict[int, dict] = {}
_jwP_cache: dict[int, dict] = {}
_PV: list = [None, (1,)]  # interned scaled numerators; 0 is the zero sentinel
_PVIDX: dict = {(1,): 1}
_P_ONE = 1
_P_ADD: dict = {}
_P_SCALE: dict = {}


def _pintern(t: tuple) -> int:
    i = _PVIDX.get(t)
    if i is None:
        _PV.append(t)
        i = len(_PV) - 1
        _PVIDX[t] = i
    return i


def _pi_scale(i: int, k: int, loops: int, sign: int) -> int:
    key = (i, k, loops, sign)
    out = _P_SCALE.get(key)
    if out is None:
        v = _PV[i]
        if k > 1:
            v = _pmul(v, _qtuple(k))
        for _ in range(loops):
            v = _pmul(v, (0, 1))
        if sign < 0:
            v = tuple(-x for x in v)
        out = _pintern(v)
        _P_SCALE[key] = out
    return out


def _pi_add(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    key = (i, j)
    out = _P_ADD.get(key)
    if out is None:
        s = _padd(_PV[i], _PV[j])
        out = 0 if not s else _pintern(s)
        _P_ADD[key] = out
    return out


def _jw_scaled(n: int, cap: int) -> dict:
    """[n]! jw_n with interned integer-polynomial coefficients."""
    if n in _jwP_cache:
        return _jwP_cache[n]
    if n > cap:
        raise JwCapExceeded(f"jw_{n} exceeds the term-explosion cap (n={cap}); raise the cap explicitly")
    if n <= 1:
        out = {bytes(identity_pairing(max(n, 0))): _P_ONE}
        _jwP_cache[n] = out
        return out
    prev = _jw_scaled(n - 1, cap)
    ext = {}
    idp1 = identity_pairing(1)
    for p, c in prev.items():
        ext[bytes(tensor_pairings(p, n - 1, n - 1, idp1, 1, 1))] = c
    taus = {n: bytes(identity_pairing(n))}
    cur = None
    for k in range(n - 1, 0, -1):
        uk = Diagram.u(n, k).pairing
        cur = bytes(uk) if cur is None else bytes(compose_pairings(uk, n, n, cur, n)[0])
        taus[k] = cur
    out: dict = {}
    get = out.get
    compose, add, scale = compose_pairings, _pi_add, _pi_scale
    for k in range(n, 0, -1):
        tk = taus[k]
        sign = 1 if (n - k) % 2 == 0 else -1
        for p, c in ext.items():
            pairing, loops = compose(tk, n, n, p, n)
            cc = scale(c, k, loops, sign)
            key = bytes(pairing)
            old = get(key)
            if old is None:
                out[key] = cc
            else:
                s = add(old, cc)
                if s:
                    out[key] = s
                else:
                    del out[key]
    _jwP_cache[n] = out
    return out


def jw_fast(n: int, cap: int = DEFAULT_N_CAP) -> dict:
    """jw_n as a fast dictionary of factored coefficients (cached)."""
    if n < 1:
        return {bytes(identity_pairing(max(n, 0))): QI_ONE}
    if n in _jw_fast_cache:
        return _jw_fast_cache[n]
    scaled = _jw_scaled(n, cap)
    dn = tuple(range(2, n + 1))
    conv: dict[int, int] = {}
    out = {}
    for p, i in scaled.items():
        j = conv.get(i)
        if j is None:
            got = _refactor(_PV[i], dn)
            j = conv[i] = intern(got)
        out[p] = j
    _jw_fast_cache[n] = out
    return out


def jw_fast_forget(n: int) -> None:
    """Drop cached expansions at and above n (memory control)."""
    for k in [k for k in _jw_fast_cache if k >= n]:
        del _jw_fast_cache[k]
    for k in [k for k in _jwP_cache if k >= n]:
        del _jwP_cache[k]


def release_scaled_workspace() -> None:
    """Free the scaled-level caches and memo tables.

    The factored expansions in ``_jw_fast_cache`` stay valid; only the
    [n]!-scaled build workspace is dropped, which is the bulk of the memory
    after large levels have been converted.
    """
    _jwP_cache.clear()
    _P_ADD.clear()
    _P_SCALE.clear()
    del _PV[2:]
    _PVIDX.clear()
    _PVIDX[(1,)] = 1


def jw(n: int, cap: int = DEFAULT_N_CAP) -> Morphism:
    """The classical Jones-Wenzl idempotent jw_n over Q(d)."""
    return fast_to_morphism(jw_fast(n, cap), n, n)


def jw_two_sided(n: int) -> Morphism:
    """Reference construction by the textbook recursion (test oracle)."""
    if n < 2:
        return Morphism.identity(n)
    out = Morphism.identity(1)
    for m in range(2, n + 1):
        prev = out.tensor(Morphism.identity(1))
        um = Morphism.from_diagram(Diagram.u(m, m - 1))
        ratio = RatFunc.from_quantum_ratio([m - 1], [m])
        out = prev - prev.compose(um).compose(prev).scale(ratio)
    return out


# ---------------------------------------------------------------------------
# ladder morphisms
# ---------------------------------------------------------------------------


def _ladder_steps(n: int, s, chi: MixedChar) -> list[tuple[int, int, int]]:
    """Per-stretch data for d_S, lowest stretch first: (current, x, arcs)."""
    runs = dg.stretches(s)
    cur = n
    out = []
    for run in runs:
        e = dg.expand(cur, chi)
        arcs = sum(e.digit(i) * chi.radix(i) for i in run)
        x = sum(e.digit(i) * chi.radix(i) for i in range(run[-1] + 1, e.top + 1)) - 1
        out.append((cur, x, arcs))
        cur -= 2 * arcs
    return out


def down_ladder_fast(n: int, s, chi: MixedChar, family, cap: int = DEFAULT_N_CAP) -> dict:
    """d_S (or D_S): n -> n[S] as a fast dictionary.

    ``family`` maps a size to the fast dictionary of its idempotent; the
    single-cap-per-stretch form is valid because all three families are
    left aligned.
    """
    if not dg.is_down_admissible(n, s, chi):
        raise dg.NotAdmissible(f"{set(s)} is not down-admissible for {n}")
    morph = None
    src = n
    for cur, x, arcs in _ladder_steps(n, s, chi):
        gx = family(x) if x > 1 else {bytes(identity_pairing(max(x, 0))): QI_ONE}
        step: dict = {}
        capn = capnest_pairing(cur, x, arcs)
        tgt = cur - 2 * arcs
        for p, c in fast_tensor_id(gx, x, x, cur - x).items():
            pairing, loops = compose_pairings(p, cur, cur, capn, tgt)
            cc = qi_scale(c, (2,) * loops, ()) if loops else c
            _acc(step, bytes(pairing), cc)
        morph = step if morph is None else fast_compose(morph, src, cur, step, tgt)
    if morph is None:
        morph = {bytes(identity_pairing(n)): QI_ONE}
    return morph


def up_ladder_fast(n: int, s, chi: MixedChar, family, cap: int = DEFAULT_N_CAP) -> dict:
    """u_S (or U_S): n[S] -> n, the star of the down ladder."""
    ns = dg.reflect_down(n, s, chi)
    return fast_star(down_ladder_fast(n, s, chi, family, cap), n, ns)


def lambda_coeff(n: int, s, chi: MixedChar) -> RatFunc:
    """The multiplier of x_n^S inside JW_n, as a reduced rational function."""
    if not dg.is_down_admissible(n, s, chi):
        raise dg.NotAdmissible(f"{set(s)} is not down-admissible for {n}")
    nums, dens = [], []
    for g_s, g_prev in reflection_quantum_pairs(n, s, chi):
        nums.append(g_prev)
        dens.append(g_s)
    return RatFunc.from_quantum_ratio(nums, dens)


def reflection_quantum_pairs(m_top: int, s, chi: MixedChar) -> list[tuple[int, int]]:
    """The quantum arguments (g(s), g(s-1)) for each s in S.

    With A the digits of m_top + 1, g(s) truncates below position s+1 and
    negates the digits of S above s; g(-1) is the full downward reflection.
    Consecutive stretch members telescope, so the product of [g(s)]/[g(s-1)]
    over a stretch collapses to its boundary values.
    """
    e = dg.expand(m_top, chi)
    sset = set(s)
    total = m_top + 1

    def g(pos: int) -> int:
        out = total - sum(e.digit(i) * chi.radix(i) for i in range(pos + 1))
        out -= 2 * sum(e.digit(i) * chi.radix(i) for i in sset if i > pos)
        return out

    return [(g(i), g(i - 1)) for i in sorted(sset)]


def x_idem(n: int, s, chi: MixedChar, cap: int = DEFAULT_N_CAP) -> Morphism:
    """x_n^S = u_S jw_{n[S]} d_S over Q(d)."""
    ns = dg.reflect_down(n, s, chi)
    down = down_ladder_fast(n, s, chi, lambda x: jw_fast(x, cap), cap)
    mid = fast_compose(down, n, ns, jw_fast(ns, cap), ns) if ns >= 1 else down
    up = fast_star(down, n, ns)
    return fast_to_morphism(fast_compose(mid, n, ns, up, n), n, n)


# ---------------------------------------------------------------------------
# the mixed family and its specialisation
# ---------------------------------------------------------------------------

_mixed_cache: dict[tuple, dict] = {}


def mixed_jw_fast(n: int, chi: MixedChar, cap: int = DEFAULT_N_CAP, check_local: bool = False) -> dict:
    """JW_n = sum over the support of lambda_n^S u_S jw_{n[S]} d_S."""
    key = (n, chi)
    if key in _mixed_cache:
        return _mixed_cache[key]
    out = dict(jw_fast(n, cap))
    for s in dg.down_admissible_sets(n, chi):
        if not s:
            continue
        ns = dg.reflect_down(n, s, chi)
        lam_nums, lam_dens = [], []
        for g_s, g_prev in reflection_quantum_pairs(n, s, chi):
            lam_nums.append(g_prev)
            lam_dens.append(g_s)
        lam = _qi_from_ratio(lam_nums, lam_dens)
        down = down_ladder_fast(n, s, chi, lambda x: jw_fast(x, cap), cap)
        mid = fast_compose(down, n, ns, jw_fast(ns, cap), ns) if ns >= 1 else down
        term = fast_compose(mid, n, ns, fast_star(down, n, ns), n)
        for p, c in term.items():
            _acc(out, p, qi_mul(lam, c))
    if check_local:
        for p, c in out.items():
            if qc_local_parts(_VALS[c], chi) is None:
                raise CoefficientNotLocal(f"JW_{n} coefficient {qc_to_ratfunc(_VALS[c])} not in Z[d]_m at {chi}")
    _mixed_cache[key] = out
    return out


def _qi_from_ratio(nums, dens) -> int:
    pos_n = tuple(sorted(abs(x) for x in nums if abs(x) > 1))
    pos_d = tuple(sorted(abs(x) for x in dens if abs(x) > 1))
    sign = 1
    for x in list(nums) + list(dens):
        if x == 0:
            raise ZeroDivisionError("quantum ratio with [0]")
        if x < 0:
            sign = -sign
    return qi_scale(QI_ONE, pos_n, pos_d, sign)


def mixed_jw(n: int, chi: MixedChar, cap: int = DEFAULT_N_CAP) -> Morphism:
    """JW_n over Z[d]_m (coefficients exposed as rational functions)."""
    return fast_to_morphism(mixed_jw_fast(n, chi, cap, check_local=True), n, n)


def specialized_jw(n: int, chi: MixedChar, cap: int = DEFAULT_N_CAP) -> Morphism:
    """JWbar_n over the residue field."""
    return fast_specialize(mixed_jw_fast(n, chi, cap), n, n, chi)


def specialized_jw_fast(n: int, chi: MixedChar, cap: int = DEFAULT_N_CAP) -> dict:
    """JWbar_n as {pairing bytes: encoded field element}."""
    out = {}
    for p, c in mixed_jw_fast(n, chi, cap).items():
        v = qc_specialize(_VALS[c], chi)
        if v:
            out[p] = v
    return out


def mixed_jw_via_mother_fast(n: int, chi: MixedChar, cap: int = DEFAULT_N_CAP) -> dict:
    """The mother-sum expansion of JW_n (independent re-derivation).

    JW_n = sum over the support of mo(n), through the jw-family ladders of
    the mother (trapezoids carry an implicit jw_mo at the source), of the
    plain term plus a traced companion weighted by a quantum ratio; used as
    a consistency oracle against ``mixed_jw``.
    """
    mo = dg.mother(n, chi)
    if mo is None:
        return jw_fast(n, cap)
    e = dg.expand(n, chi)
    t = next(i for i, d in enumerate(e.digits) if d)
    c_strands = e.digits[t] * chi.radix(t)
    total: dict = {}
    for s in dg.down_admissible_sets(mo, chi):
        m_val = dg.reflect_down(mo, s, chi)
        lam = _qi_from_ratio(*_lambda_args(mo, s, chi))
        dfast = fast_compose(jw_fast(mo, cap), mo, mo, down_ladder_fast(mo, s, chi, jw_fast, cap), m_val)
        dext = fast_tensor_id(dfast, mo, m_val, c_strands)
        n_s = m_val + c_strands  # = n[S']
        uext = fast_star(dext, n, n_s)
        mid = jw_fast(n_s, cap)
        inner = n_s - 2 * c_strands
        if inner >= 0:
            capn = {bytes(capnest_pairing(n_s, m_val, c_strands)): QI_ONE}
            mid2 = fast_compose(capn, n_s, inner, jw_fast(inner, cap), inner)
            mid2 = fast_compose(mid2, n_s, inner, fast_star(capn, n_s, inner), n_s)
            ratio = _qi_from_ratio([inner + 1], [m_val + 1])
            mid = dict(mid)
            for p, c in mid2.items():
                _acc(mid, p, qi_mul(ratio, c))
        term = fast_compose(fast_compose(dext, n, n_s, mid, n_s), n, n_s, uext, n)
        for p, c in term.items():
            _acc(total, p, qi_mul(lam, c))
    return total


def _lambda_args(n: int, s, chi: MixedChar):
    nums, dens = [], []
    for g_s, g_prev in reflection_quantum_pairs(n, s, chi):
        nums.append(g_prev)
        dens.append(g_s)
    return nums, dens


def mixed_jw_via_mother(n: int, chi: MixedChar, cap: int = DEFAULT_N_CAP) -> Morphism:
    return fast_to_morphism(mixed_jw_via_mother_fast(n, chi, cap), n, n)

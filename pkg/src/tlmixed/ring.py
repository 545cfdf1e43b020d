"""Exact scalar arithmetic for every coefficient ring used by the library.

Four rings appear throughout:

* ``IntPoly``    -- Z[d], integer polynomials in the loop parameter d.
* ``RatFunc``    -- Q(d), reduced fractions of integer polynomials.
* ``LocalFrac``  -- Z[d] localised at the maximal ideal m = (p, m_d); a
  fraction whose denominator stays invertible after reduction mod (p, m_d).
* ``FieldElem``  -- the residue field k = F_p[d]/(m_d), elements stored as
  coefficient vectors of length deg(m_d).

Fractions keep their denominators factored over the irreducible polynomials
``psi_k`` whenever they arise from quantum-number arithmetic (they virtually
always do).  That makes reduction a handful of exact trial divisions instead
of a general polynomial gcd, and it makes membership in the localisation a
divisibility check against the finitely many "bad" psi factors lying in m.
A subresultant-gcd fallback covers fractions of unknown provenance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

Coeffs = tuple[int, ...]

# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------


def _trim(c: list[int]) -> Coeffs:
    end = len(c)
    while end and c[end - 1] == 0:
        end -= 1
    return tuple(c[:end])


class IntPoly:
    """Immutable dense polynomial over Z, little-endian coefficient tuple."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, IntPoly):
            self.coeffs = coeffs.coeffs
        elif isinstance(coeffs, int):
            self.coeffs = (coeffs,) if coeffs else ()
        else:
            self.coeffs = _trim(list(coeffs))

    # -- basic structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == IntPoly(other).coeffs
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a, b = self.coeffs, IntPoly(other).coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return IntPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly([-v for v in self.coeffs])

    def __sub__(self, other):
        return self + (-IntPoly(other))

    def __rsub__(self, other):
        return IntPoly(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly([other * v for v in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out, base = IntPoly(1), self
        while e:
            if e & 1:
                out = out * base
            base, e = base * base, e >> 1
        return out

    def divmod_monic(self, d: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Division with remainder by a monic divisor; exact over Z."""
        assert d.is_monic()
        r = list(self.coeffs)
        dd, q = d.degree, {}
        for i in range(len(r) - 1, dd - 1, -1):
            c = r[i]
            if c:
                q[i - dd] = c
                for j, v in enumerate(d.coeffs):
                    r[i - dd + j] -= c * v
        qc = [0] * (max(q) + 1 if q else 0)
        for k, v in q.items():
            qc[k] = v
        return IntPoly(qc), IntPoly(r[:dd])

    def try_exact_div(self, d: "IntPoly") -> "IntPoly | None":
        """Quotient by a monic divisor if the division is exact, else None."""
        if d.degree > self.degree:
            return None
        q, r = self.divmod_monic(d)
        return q if r.is_zero() else None

    def compose(self, inner: "IntPoly") -> "IntPoly":
        out = IntPoly()
        for c in reversed(self.coeffs):
            out = out * inner + IntPoly(c)
        return out

    def negate_var(self) -> "IntPoly":
        """Substitute d -> -d."""
        return IntPoly([v if i % 2 == 0 else -v for i, v in enumerate(self.coeffs)])

    def evaluate(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def reduce_mod(self, m: int) -> Coeffs:
        return _trim([v % m for v in self.coeffs])

    # -- text form (CLI round-trip format) -----------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                var = "d" if i == 1 else f"d^{i}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"IntPoly('{self}')"

    @classmethod
    def parse(cls, text: str) -> "IntPoly":
        """Parse the textual format produced by ``str``; exact round trip."""
        text = text.replace("-", "+-").replace(" ", "")
        coeffs: dict[int, int] = {}
        for term in text.split("+"):
            if not term:
                continue
            sign = -1 if term.startswith("-") else 1
            term = term.lstrip("-")
            if "d" in term:
                head, _, tail = term.partition("d")
                c = int(head.rstrip("*")) if head.rstrip("*") else 1
                e = int(tail[1:]) if tail.startswith("^") else 1
            else:
                c, e = int(term), 0
            coeffs[e] = coeffs.get(e, 0) + sign * c
        out = [0] * (max(coeffs, default=0) + 1)
        for e, c in coeffs.items():
            out[e] = c
        return cls(out)


ZERO = IntPoly()
ONE = IntPoly(1)
DELTA = IntPoly((0, 1))


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive gcd over Z[d] via rational remainders; result is primitive
    with positive leading coefficient."""
    fa = [Fraction(c) for c in a.coeffs]
    fb = [Fraction(c) for c in b.coeffs]

    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    fa, fb = trim(fa), trim(fb)
    while fb:
        # remainder of fa by fb over Q
        while len(fa) >= len(fb):
            c = fa[-1] / fb[-1]
            off = len(fa) - len(fb)
            for i, v in enumerate(fb):
                fa[off + i] -= c * v
            fa = trim(fa[:-1])
            if not fa:
                break
        fa, fb = fb, fa
    if not fa:
        return ZERO
    den = reduce(math.lcm, (f.denominator for f in fa), 1)
    ints = [int(f * den) for f in fa]
    g = reduce(math.gcd, ints, 0)
    ints = [v // g for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    return IntPoly(ints)


# ---------------------------------------------------------------------------
# rational functions with psi-factored denominators
# ---------------------------------------------------------------------------


def _psi(k: int) -> IntPoly:
    from . import qnum  # lazy; qnum imports this module at load time

    return qnum.psi(k)


def _reduce_psi(num: IntPoly, dpsi: dict[int, int]) -> tuple[IntPoly, dict[int, int]]:
    out = {}
    for k in sorted(dpsi, reverse=True):
        e = dpsi[k]
        pk = _psi(k)
        while e and not num.is_zero():
            q = num.try_exact_div(pk)
            if q is None:
                break
            num, e = q, e - 1
        if e:
            out[k] = e
    return num, out


def _expand_psi(dpsi: dict[int, int]) -> IntPoly:
    out = ONE
    for k, e in sorted(dpsi.items()):
        out = out * _psi(k) ** e
    return out


class RatFunc:
    """Element of Q(d).

    ``num``/``den`` are coprime integer polynomials with ``den`` of positive
    leading coefficient.  When the denominator is known as a product of psi
    factors the factorisation is carried along (``_dpsi``), keeping reduction
    cheap; fractions built from quantum numbers never leave that fast path.
    """

    __slots__ = ("num", "_dpsi", "_den")

    def __init__(self, num, den=None, _dpsi=None):
        num = num if isinstance(num, IntPoly) else IntPoly(num)
        if den is None and _dpsi is not None:
            num, _dpsi = _reduce_psi(num, _dpsi)
            self.num, self._dpsi, self._den = num, _dpsi, None
            return
        den = ONE if den is None else (den if isinstance(den, IntPoly) else IntPoly(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if den == ONE:
            self.num, self._dpsi, self._den = num, {}, None
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.try_exact_div(g) if g.is_monic() else _exact_div_general(num, g)
            den = den.try_exact_div(g) if g.is_monic() else _exact_div_general(den, g)
        cn, cd = num.content() or 1, den.content() or 1
        g = math.gcd(cn, cd)
        num = IntPoly([v // g for v in num.coeffs])
        den = IntPoly([v // g for v in den.coeffs])
        if den.leading() < 0:
            num, den = -num, -den
        self.num, self._dpsi, self._den = num, None, den

    @classmethod
    def from_quantum_ratio(cls, nums: list[int], dens: list[int]) -> "RatFunc":
        """Exact [a1][a2].../[b1][b2]... with denominators factored over psi."""
        from . import qnum

        dpsi: dict[int, int] = {}
        num = ONE
        for b in dens:
            neg = b < 0
            for k in qnum.psi_indices(abs(b)):
                dpsi[k] = dpsi.get(k, 0) + 1
            if neg:
                num = -num
        for a in nums:
            num = num * qnum.quantum(a)
        return cls(num, _dpsi=dpsi)

    @property
    def den(self) -> IntPoly:
        if self._den is None:
            self._den = _expand_psi(self._dpsi)
        return self._den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def _parts(self):
        return self.num, (self._dpsi if self._dpsi is not None else None)

    def __add__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        a, da = self._parts()
        b, db = other._parts()
        if da is not None and db is not None:
            joint = {k: max(da.get(k, 0), db.get(k, 0)) for k in set(da) | set(db)}
            na = a * _expand_psi({k: e - da.get(k, 0) for k, e in joint.items() if e > da.get(k, 0)})
            nb = b * _expand_psi({k: e - db.get(k, 0) for k, e in joint.items() if e > db.get(k, 0)})
            return RatFunc(na + nb, _dpsi=joint)
        return RatFunc(a * other.den + b * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(RatFunc)
        out.num, out._dpsi, out._den = -self.num, self._dpsi, self._den
        return out

    def __sub__(self, other):
        other = _coerce_rat(other)
        return self + (-other)

    def __rsub__(self, other):
        return _coerce_rat(other) + (-self)

    def __mul__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        a, da = self._parts()
        b, db = other._parts()
        if da is not None and db is not None:
            joint = dict(da)
            for k, e in db.items():
                joint[k] = joint.get(k, 0) + e
            return RatFunc(a * b, _dpsi=joint)
        return RatFunc(a * b, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * _coerce_rat(other).inverse()

    def __rtruediv__(self, other):
        return _coerce_rat(other) * self.inverse()

    def __eq__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    __repr__ = __str__


def _exact_div_general(a: IntPoly, b: IntPoly) -> IntPoly:
    # exact division by a possibly non-monic divisor, done over Q
    fa = [Fraction(c) for c in a.coeffs]
    out = [Fraction(0)] * (len(fa) - b.degree)
    bb = b.coeffs
    for i in range(len(fa) - 1, b.degree - 1, -1):
        c = fa[i] / bb[-1]
        out[i - b.degree] = c
        for j, v in enumerate(bb):
            fa[i - b.degree + j] -= c * v
    assert all(f == 0 for f in fa[: b.degree]) and all(f.denominator == 1 for f in out)
    return IntPoly([int(f) for f in out])


def _coerce_rat(x) -> "RatFunc":
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, IntPoly)):
        return RatFunc(x)
    return NotImplemented


RAT_ZERO = RatFunc(0)
RAT_ONE = RatFunc(1)


# ---------------------------------------------------------------------------
# mixed characteristic and the residue field
# ---------------------------------------------------------------------------


class InvalidMixedChar(ValueError):
    pass


class DenominatorInMaximalIdeal(ZeroDivisionError):
    pass


class ZeroInput(ValueError):
    pass


@dataclass(frozen=True)
class MixedChar:
    """A valid mixed characteristic (ell, p) together with its data.

    ``ell`` is the quantum characteristic (``math.inf`` for the semisimple
    case), ``p`` the field characteristic (0 allowed only with ell = inf
    here), ``m_delta`` the chosen monic irreducible factor of [ell] and
    ``mbar`` its reduction mod p.  ``sign`` picks between psi_ell(d) and
    psi_ell(-d) when ell is odd.
    """

    ell: float
    p: int
    sign: int = 1
    m_delta: IntPoly = None
    mbar: Coeffs = None

    def __post_init__(self):
        from . import qnum

        if self.ell != math.inf:
            ell = int(self.ell)
            if ell < 2:
                raise InvalidMixedChar(f"ell = {ell} < 2")
            if not qnum.is_valid_mixed_char(ell, self.p):
                raise InvalidMixedChar(f"(ell, p) = ({ell}, {self.p}) is not valid")
            md = self.m_delta or qnum.minimal_poly(ell, self.p, self.sign)
            if not md.is_monic():
                raise InvalidMixedChar("m_delta must be monic")
            if qnum.quantum(ell).try_exact_div(md) is None:
                raise InvalidMixedChar("m_delta does not divide [ell]")
            for n in range(1, ell):
                if qnum.quantum(n).try_exact_div(md) is not None:
                    raise InvalidMixedChar(f"m_delta divides [{n}] with {n} < ell")
            object.__setattr__(self, "m_delta", md)
            object.__setattr__(self, "mbar", md.reduce_mod(self.p) if self.p else md.coeffs)
            if self.p and len(self.mbar) - 1 != md.degree and not (self.p == 2):
                raise InvalidMixedChar("m_delta degenerates mod p")
        else:
            if self.p not in (0,):
                # finite field with no vanishing quantum number would force ell <= p^deg + 1
                raise InvalidMixedChar("ell = inf requires characteristic 0 here")
            object.__setattr__(self, "m_delta", None)
            object.__setattr__(self, "mbar", None)

    # digit radix p^(i): 1, ell, ell*p, ell*p^2, ...
    def radix(self, i: int) -> int:
        if i == 0:
            return 1
        return int(self.ell) * self.p ** (i - 1)

    def digit_bound(self, i: int) -> float:
        if i == 0:
            return self.ell
        return self.p if self.p else math.inf

    @property
    def field(self) -> "ResidueField":
        return ResidueField(self.p, self.mbar)

    def __str__(self):
        ell = "inf" if self.ell == math.inf else int(self.ell)
        return f"(ell={ell}, p={self.p}, m_delta={self.m_delta})"


@lru_cache(maxsize=None)
def ResidueField(p: int, mbar: Coeffs) -> "_Field":
    return _Field(p, mbar)


class _Field:
    """k = F_p[d]/(mbar), elements encoded as ints in [0, p^deg)."""

    def __init__(self, p: int, mbar: Coeffs):
        if p < 2:
            raise InvalidMixedChar("residue field needs p >= 2")
        self.p = p
        self.mbar = mbar
        self.deg = len(mbar) - 1
        self.order = p**self.deg
        self.zero, self.one = 0, 1
        self.delta = p if self.deg > 1 else (-mbar[0]) % p

    def encode(self, coeffs) -> int:
        out = 0
        for c in reversed(list(coeffs)):
            out = out * self.p + (c % self.p)
        return out

    def decode(self, x: int) -> Coeffs:
        out = []
        for _ in range(self.deg):
            out.append(x % self.p)
            x //= self.p
        return tuple(out)

    def add(self, a: int, b: int) -> int:
        p = self.p
        out, mult = 0, 1
        for _ in range(self.deg):
            out += ((a + b) % p) * mult
            a, b, mult = a // p, b // p, mult * p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out, mult = 0, 1
        for _ in range(self.deg):
            out += (-a % p) * mult
            a, mult = a // p, mult * p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p, deg, mbar = self.p, self.deg, self.mbar
        va, vb = self.decode(a), self.decode(b)
        prod = [0] * (2 * deg - 1 if deg else 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for i in range(len(prod) - 1, deg - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(deg):
                    prod[i - deg + j] = (prod[i - deg + j] - c * mbar[j]) % p
        return self.encode(prod[:deg])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverting zero field element")
        # Fermat in the multiplicative group
        return self.pow(a, self.order - 2)

    def pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a, e = self.mul(a, a), e >> 1
        return out

    def from_intpoly(self, f: IntPoly) -> int:
        p, deg, mbar = self.p, self.deg, self.mbar
        r = [v % p for v in f.coeffs]
        for i in range(len(r) - 1, deg - 1, -1):
            c = r[i]
            if c:
                r[i] = 0
                for j in range(deg):
                    r[i - deg + j] = (r[i - deg + j] - c * mbar[j]) % p
        return self.encode((r + [0] * deg)[:deg])

    def elements(self):
        return range(self.order)

    def __repr__(self):
        return f"F_{self.p}^{self.deg}"


@dataclass(frozen=True)
class FieldElem:
    """An element of the residue field of a mixed characteristic."""

    field: _Field
    value: int

    @property
    def coeffs(self) -> Coeffs:
        return self.field.decode(self.value)

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.value, _fval(other, self.field)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.value, _fval(other, self.field)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub(_fval(other, self.field), self.value))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.value, _fval(other, self.field)))

    __rmul__ = __mul__

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        o = _fval(other, self.field)
        return FieldElem(self.field, self.field.mul(self.value, self.field.inv(o)))

    def is_zero(self):
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return str(IntPoly(self.coeffs)) if self.field.deg > 1 else str(self.value)

    __repr__ = __str__


def _fval(x, field: _Field) -> int:
    if isinstance(x, FieldElem):
        return x.value
    if isinstance(x, int):
        return x % field.p if field.deg == 1 else field.from_intpoly(IntPoly(x))
    raise TypeError(f"cannot coerce {x!r} into {field}")


# ---------------------------------------------------------------------------
# localisation at m = (p, m_delta) and the xi valuations
# ---------------------------------------------------------------------------


def in_maximal_ideal(f: IntPoly, chi: MixedChar) -> bool:
    """Whether f lies in (p, m_delta)."""
    p = chi.p
    rp = IntPoly(f.reduce_mod(p))
    if rp.is_zero():
        return True
    q, r = rp.divmod_monic(IntPoly(chi.mbar))
    return IntPoly(r.reduce_mod(p)).is_zero()


def is_local(x: RatFunc, chi: MixedChar) -> bool:
    """Whether a reduced fraction lies in Z[d] localised at (p, m_delta)."""
    return not in_maximal_ideal(x.den, chi)


def specialize(x: RatFunc, chi: MixedChar) -> FieldElem:
    """Canonical specialisation Z[d]_m -> k, d |-> class of d."""
    F = chi.field
    den = F.from_intpoly(x.den)
    if den == 0:
        raise DenominatorInMaximalIdeal(f"denominator {x.den} lies in (p, m_delta)")
    return FieldElem(F, F.mul(F.from_intpoly(x.num), F.inv(den)))


def xi(i: int, f, chi: MixedChar) -> int:
    """Largest j with f in (p^i, m_delta^j), for f in Z[d]_m, f != 0.

    Computed by repeated division by the monic m_delta over Z/p^i[d]; a
    denominator is only allowed when it is a unit of the localisation.
    """
    if isinstance(f, RatFunc):
        if f.is_zero():
            raise ZeroInput("xi of zero is undefined")
        if in_maximal_ideal(f.den, chi):
            raise DenominatorInMaximalIdeal("xi needs a unit denominator")
        f = f.num
    if isinstance(f, int):
        f = IntPoly(f)
    if f.is_zero():
        raise ZeroInput("xi of zero is undefined")
    mod = chi.p**i
    md = chi.m_delta  # the integer lift: (p^i, m_delta^j) is an ideal of Z[d]
    cur = IntPoly(f.reduce_mod(mod))
    j = 0
    while not cur.is_zero():
        q, r = cur.divmod_monic(md)
        if not IntPoly(r.reduce_mod(mod)).is_zero():
            return j
        cur = IntPoly(q.reduce_mod(mod))
        j += 1
    # f vanished mod p^i entirely: every power of m_delta divides it there
    raise ZeroInput(f"xi_{i} is infinite: argument vanishes mod p^{i}")


# ---------------------------------------------------------------------------
# linear algebra over Z/p^i[d]/(m_delta^j)
# ---------------------------------------------------------------------------


def kernel_mod_prime_power(B: list[list[int]], p: int, e: int) -> list[list[int]]:
    """Generators of {y : B y = 0} over the chain ring Z/p^e.

    Howell-style elimination on the augmented transpose [B^T | I]: pivots
    keep the entry of least p-valuation, and for every torsion pivot the
    annihilating multiple p^(e-v) * row is fed back, which is what makes the
    collected zero-head rows generate the whole kernel.
    """
    mod = p**e
    neq = len(B)
    nvar = len(B[0]) if neq else 0
    if nvar == 0:
        return []

    def val(x: int) -> int:
        v = 0
        while v < e and x % p == 0:
            x //= p
            v += 1
        return v

    stack = [
        [B[r][i] % mod for r in range(neq)] + [1 if k == i else 0 for k in range(nvar)]
        for i in range(nvar)
    ]
    pivots: dict[int, list[int]] = {}
    kernel: list[list[int]] = []
    while stack:
        row = stack.pop()
        c = 0
        while c < neq:
            if row[c] % mod:
                if c not in pivots:
                    pivots[c] = row
                    v = val(row[c])
                    if v:
                        ann = p ** (e - v)
                        stack.append([(ann * x) % mod for x in row])
                    row = None
                    break
                piv = pivots[c]
                if val(row[c]) < val(piv[c]):
                    pivots[c], row = row, piv
                    piv = pivots[c]
                v = val(piv[c])
                factor = (row[c] // p**v) * pow(piv[c] // p**v, -1, mod) % mod
                row = [(x - factor * y) % mod for x, y in zip(row, piv)]
            c += 1
        if row is not None:
            tail = [x % mod for x in row[neq:]]
            if any(tail):
                kernel.append(tail)
    return kernel


def quotient_ring_solve(matrix, chi: MixedChar, i: int, j: int):
    """Generators of {x : A x = 0} over R = Z/p^i[d]/(m_delta^j).

    Entries of ``matrix`` are IntPoly (or int).  Each R-unknown expands into
    deg(m_delta)*j unknowns over Z/p^i and the kernel of the expanded system
    is computed by chain-ring elimination.  A Z/p^i-generating set of the
    solution module is returned as vectors of IntPoly representatives (it
    generates over R a fortiori); the empty list means only the zero
    solution exists.
    """
    mod = chi.p**i
    md = chi.m_delta**j
    dim = md.degree
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    if ncols == 0:
        return []

    def red(f: IntPoly) -> list[int]:
        _, r = f.divmod_monic(md)
        c = [v % mod for v in r.coeffs]
        return c + [0] * (dim - len(c))

    # scalar unknown (c, t) is the coefficient of d^t inside R-unknown x_c
    B: list[list[int]] = [[0] * (ncols * dim) for _ in range(nrows * dim)]
    for r in range(nrows):
        for c in range(ncols):
            a = matrix[r][c]
            a = a if isinstance(a, IntPoly) else IntPoly(a)
            for t in range(dim):
                col = red(a * IntPoly([0] * t + [1]))
                for s in range(dim):
                    B[r * dim + s][c * dim + t] = col[s]
    out = []
    for comb in kernel_mod_prime_power(B, chi.p, i):
        vec = [IntPoly(comb[c * dim : (c + 1) * dim]) for c in range(ncols)]
        if any(not f.is_zero() for f in vec):
            out.append(vec)
    return out

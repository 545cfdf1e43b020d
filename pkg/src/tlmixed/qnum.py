"""Quantum numbers [n], their irreducible factors psi_k, and the data of a
mixed characteristic.

[n] is defined by the Chebyshev-like recurrence d*[n] = [n-1] + [n+1] with
[0] = 0, [1] = 1, and factors as [n] = prod_{k | 2n, k >= 3} psi_k(d) with
psi_k irreducible over Q of degree phi(k)/2.

psi_k for even k is obtained by exact division of [k/2] by the previously
known factors.  For odd k that recipe cannot work: psi_k and psi_{2k} divide
exactly the same quantum numbers (k odd and k | 2n force 2k | 2n), so no
chain of divisibility separates them; they are swapped by d -> -d.  Odd
psi_k is therefore assembled directly from the symmetric coefficients of the
k-th cyclotomic polynomial, and the even-index division chain doubles as a
cross-check through the product identity.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .ring import DELTA, ONE, IntPoly


@lru_cache(maxsize=None)
def quantum(n: int) -> IntPoly:
    """The quantum number [n] as an integer polynomial in d; [-n] = -[n]."""
    if n < 0:
        return -quantum(-n)
    if n == 0:
        return IntPoly()
    if n == 1:
        return ONE
    return DELTA * quantum(n - 1) - quantum(n - 2)


def quantum_evaluated_at(n: int, point: IntPoly) -> IntPoly:
    """[n] with the substituted value of d, e.g. d -> [l+1]-[l-1]."""
    return quantum(n).compose(point)


def divisors(n: int) -> list[int]:
    out = [d for d in range(1, int(math.isqrt(n)) + 1) if n % d == 0]
    out += [n // d for d in reversed(out) if d * d != n]
    return out


def psi_indices(n: int) -> list[int]:
    """The factor indices of [n]: divisors k >= 3 of 2n."""
    return [k for k in divisors(2 * n) if k >= 3]


@lru_cache(maxsize=None)
def _cyclotomic(k: int) -> IntPoly:
    # Phi_k(q) = (q^k - 1) / prod_{d | k, d < k} Phi_d(q), exact over Z
    num = IntPoly([-1] + [0] * (k - 1) + [1])
    for d in divisors(k):
        if d < k:
            num = num.try_exact_div(_cyclotomic(d))
    return num


@lru_cache(maxsize=None)
def _chebyshev_w(j: int) -> IntPoly:
    # W_j(d) = q^j + q^-j as a polynomial in d = q + q^-1
    if j == 0:
        return IntPoly(2)
    if j == 1:
        return DELTA
    return DELTA * _chebyshev_w(j - 1) - _chebyshev_w(j - 2)


@lru_cache(maxsize=None)
def psi(k: int) -> IntPoly:
    """The monic irreducible factor psi_k of quantum numbers, k >= 3."""
    if k < 3:
        raise ValueError("psi_k needs k >= 3")
    if k % 2 == 0:
        # divide [k/2] by all previously known factors
        out = quantum(k // 2)
        for j in psi_indices(k // 2):
            if j < k:
                out = out.try_exact_div(psi(j))
        return out
    # odd k: rewrite the symmetric Laurent polynomial q^(-e) Phi_k(q) in the
    # basis q^j + q^-j; its coefficients are those of Phi_k above the middle
    phi = _cyclotomic(k).coeffs
    e = (len(phi) - 1) // 2
    out = IntPoly(phi[e])
    for j in range(1, e + 1):
        out = out + phi[e + j] * _chebyshev_w(j)
    return out


def is_valid_mixed_char(ell, p: int) -> bool:
    """Whether (ell, p) can occur: p = 0, p = ell, or p does not divide ell."""
    if ell == math.inf:
        return p == 0
    return p == 0 or p == ell or ell % p != 0


def minimal_poly(ell: int, p: int, sign: int = 1) -> IntPoly:
    """The monic irreducible factor of [ell] dividing no smaller [n].

    Even ell forces psi_{2 ell}; odd ell leaves the sign choice psi_ell(d)
    versus its mirror psi_ell(-d) made monic, which is psi_{2 ell}.
    """
    if not is_valid_mixed_char(ell, p):
        from .ring import InvalidMixedChar

        raise InvalidMixedChar(f"(ell, p) = ({ell}, {p})")
    if ell % 2 == 0 or sign < 0:
        return psi(2 * ell)
    return psi(ell)


def ell_of(p: int, mbar: IntPoly):
    """Least n >= 1 with [n] = 0 in F_p[d]/(mbar), or inf if none exists.

    The search stops at p^deg(mbar) + 1: quantum values live in a finite
    field, where a vanishing [n] must divide the order of a root of unity.
    """
    from .ring import ResidueField

    field = ResidueField(p, tuple(mbar.reduce_mod(p)))
    bound = field.order + 1
    prev, cur = field.zero, field.one  # [0], [1]
    for n in range(2, bound + 1):
        prev, cur = cur, field.sub(field.mul(field.delta, cur), prev)
        if cur == 0:
            return n
    return math.inf

"""Exact scalar towers and Laurent rational functions.

Scalars live in Q, in a cyclotomic field Q(zeta_N), or in the quadratic
tower Q(i, sqrtD).  Every scalar additionally carries two formal grades:
a q-grade h (a formal factor q^(h/2)) and a pi-grade k (a formal factor
pi^k).  Multiplication adds grades; addition insists on equal grades,
except that an exact zero is grade-polymorphic.

Laurent rational functions in X (= q^(-s)) over these scalars carry the
local L/epsilon/gamma factors and zeta integrals built on top.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

Q0 = Fraction(0)
Q1 = Fraction(1)


# ----------------------------------------------------------------------
# integer/rational polynomial helpers (dense lists, index = degree)
# ----------------------------------------------------------------------

def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a, b):
    """Exact-friendly division of dense Fraction polynomials."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    assert _poly_trim(list(b)), "division by zero polynomial"
    q = [Q0] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    r = a
    while len(_poly_trim(list(r))) >= len(b):
        r = _poly_trim(r)
        d = len(r) - len(b)
        c = r[-1] / lead
        q[d] = c
        for i, y in enumerate(b):
            r[i + d] -= c * y
        r = _poly_trim(r)
    return _poly_trim(q), _poly_trim(r)


@functools.lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    assert n >= 1
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            out *= p - 1
            m //= p
            while m % p == 0:
                out *= p
                m //= p
        p += 1
    if m > 1:
        out *= m - 1
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n: int):
    """Coefficients (degree-ascending, integers) of the n-th cyclotomic polynomial."""
    assert n >= 1
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul(den, list(cyclotomic_poly(d)))
    q, r = _poly_divmod(num, den)
    assert not r
    assert all(x.denominator == 1 for x in q)
    return tuple(int(x) for x in q)


class GradeError(ArithmeticError):
    """Raised when adding scalars whose formal grades disagree."""


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


class ExactScalar:
    """Immutable element of Q, Q(zeta_N) or Q(i, sqrtD) with formal grades."""

    __slots__ = ("kind", "N", "D", "coeffs", "qgrade", "pigrade")

    def __init__(self, kind, coeffs, N=None, D=None, qgrade=0, pigrade=0):
        coeffs = tuple(c if type(c) is Fraction else _as_fraction(c)
                       for c in coeffs)
        if kind == "rat":
            assert len(coeffs) == 1
        elif kind == "cyc":
            assert N is not None and N >= 1
            assert len(coeffs) == euler_phi(N)
        elif kind == "quad":
            assert D is not None and D > 1
            assert _squarefree(D), f"D={D} not squarefree"
            assert len(coeffs) == 4
        else:
            raise ValueError(kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "qgrade", int(qgrade))
        object.__setattr__(self, "pigrade", int(pigrade))

    def __setattr__(self, *a):
        raise AttributeError("ExactScalar is immutable")

    # -- constructors --------------------------------------------------

    @staticmethod
    def rational(x, qgrade=0, pigrade=0):
        return ExactScalar("rat", (Fraction(x),), qgrade=qgrade, pigrade=pigrade)

    @staticmethod
    def zeta(N, k=1):
        """The root of unity zeta_N^k."""
        assert N >= 1
        k %= N
        deg = euler_phi(N)
        mono = [Q0] * (N + 1)
        mono[k] = Q1
        coeffs = _cyc_reduce(mono, N)
        coeffs += [Q0] * (deg - len(coeffs))
        return ExactScalar("cyc", coeffs, N=N)._demote()

    @staticmethod
    def i_unit():
        return ExactScalar.zeta(4)

    @staticmethod
    def sqrtD(D):
        return ExactScalar("quad", (0, 0, 1, 0), D=D)

    @staticmethod
    def i_sqrtD(D):
        return ExactScalar("quad", (0, 0, 0, 1), D=D)

    @staticmethod
    def quad(D, a=0, b=0, c=0, d=0, qgrade=0, pigrade=0):
        """a + b i + c sqrtD + d i sqrtD."""
        return ExactScalar("quad", (a, b, c, d), D=D, qgrade=qgrade, pigrade=pigrade)

    @staticmethod
    def zero():
        return ExactScalar.rational(0)

    @staticmethod
    def one():
        return ExactScalar.rational(1)

    # -- basic predicates ----------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return self._demote().kind == "rat"

    def as_fraction(self):
        d = self._demote()
        assert d.kind == "rat", f"not rational: {self}"
        assert d.qgrade == 0 and d.pigrade == 0, f"graded scalar: {self}"
        return d.coeffs[0]

    # -- canonicalization ----------------------------------------------

    def _demote(self):
        """Drop to kind 'rat' when the element is a plain rational."""
        if self.kind == "rat":
            return self
        if all(c == 0 for c in self.coeffs[1:]):
            return ExactScalar("rat", (self.coeffs[0],),
                               qgrade=self.qgrade, pigrade=self.pigrade)
        return self

    def with_grades(self, qgrade=None, pigrade=None):
        return ExactScalar(self.kind, self.coeffs, N=self.N, D=self.D,
                           qgrade=self.qgrade if qgrade is None else qgrade,
                           pigrade=self.pigrade if pigrade is None else pigrade)

    # -- promotion -----------------------------------------------------

    def _to_cyc(self, N):
        """Embed into Q(zeta_N); requires self rational or cyclotomic with self.N | N."""
        if self.kind == "rat":
            deg = euler_phi(N)
            return ExactScalar("cyc", (self.coeffs[0],) + (Q0,) * (deg - 1), N=N,
                               qgrade=self.qgrade, pigrade=self.pigrade)
        assert self.kind == "cyc" and N % self.N == 0
        if N == self.N:
            return self
        step = N // self.N
        acc = [Q0] * (N + 1)
        for k, c in enumerate(self.coeffs):
            if c:
                acc[k * step] += c
        coeffs = _cyc_reduce(acc, N)
        coeffs += [Q0] * (euler_phi(N) - len(coeffs))
        return ExactScalar("cyc", coeffs, N=N, qgrade=self.qgrade, pigrade=self.pigrade)

    def _to_quad(self, D):
        if self.kind == "rat":
            return ExactScalar("quad", (self.coeffs[0], 0, 0, 0), D=D,
                               qgrade=self.qgrade, pigrade=self.pigrade)
        if self.kind == "cyc":
            # only Gaussian rationals embed: N | 4
            s = self._demote()
            if s.kind == "rat":
                return s._to_quad(D)
            assert s.kind == "cyc" and s.N in (4,), \
                f"cannot embed Q(zeta_{s.N}) into the quadratic tower"
            a, b = s.coeffs[0], s.coeffs[1]
            return ExactScalar("quad", (a, b, 0, 0), D=D,
                               qgrade=self.qgrade, pigrade=self.pigrade)
        assert self.kind == "quad" and self.D == D, \
            f"incompatible quadratic towers D={self.D} vs D={D}"
        return self

    @staticmethod
    def _promote_pair(a, b):
        if a.kind == "rat" and b.kind == "rat":
            return a, b
        if a.kind == "quad" or b.kind == "quad":
            D = a.D if a.kind == "quad" else b.D
            return a._to_quad(D), b._to_quad(D)
        Na = a.N if a.kind == "cyc" else 1
        Nb = b.N if b.kind == "cyc" else 1
        N = Na * Nb // math.gcd(Na, Nb)
        return a._to_cyc(N), b._to_cyc(N)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if (self.qgrade, self.pigrade) != (other.qgrade, other.pigrade):
            raise GradeError(
                f"grade mismatch in addition: (q:{self.qgrade},pi:{self.pigrade})"
                f" vs (q:{other.qgrade},pi:{other.pigrade})")
        a, b = ExactScalar._promote_pair(self, other)
        coeffs = tuple(x + y for x, y in zip(a.coeffs, b.coeffs))
        return ExactScalar(a.kind, coeffs, N=a.N, D=a.D,
                           qgrade=a.qgrade, pigrade=a.pigrade)._demote()

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(self.kind, tuple(-c for c in self.coeffs), N=self.N,
                           D=self.D, qgrade=self.qgrade, pigrade=self.pigrade)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        a, b = ExactScalar._promote_pair(self, other)
        qg, pg = a.qgrade + b.qgrade, a.pigrade + b.pigrade
        if a.kind == "rat":
            coeffs = (a.coeffs[0] * b.coeffs[0],)
        elif a.kind == "cyc":
            nza = [(i, x) for i, x in enumerate(a.coeffs) if x]
            nzb = [(j, y) for j, y in enumerate(b.coeffs) if y]
            acc = [Q0] * (2 * len(a.coeffs) - 1)
            for i, x in nza:
                for j, y in nzb:
                    acc[i + j] += x * y
            coeffs = _cyc_reduce(acc, a.N)
            coeffs += [Q0] * (len(a.coeffs) - len(coeffs))
        else:
            coeffs = _quad_mul(a.coeffs, b.coeffs, a.D)
        return ExactScalar(a.kind, coeffs, N=a.N, D=a.D,
                           qgrade=qg, pigrade=pg)._demote()

    __rmul__ = __mul__

    def inverse(self):
        assert not self.is_zero(), "division by zero"
        qg, pg = -self.qgrade, -self.pigrade
        if self.kind == "rat":
            return ExactScalar.rational(1 / self.coeffs[0], qg, pg)
        if self.kind == "cyc":
            inv = _cyc_inverse(list(self.coeffs), self.N)
            return ExactScalar("cyc", inv, N=self.N, qgrade=qg, pigrade=pg)._demote()
        inv = _quad_inverse(self.coeffs, self.D)
        return ExactScalar("quad", inv, D=self.D, qgrade=qg, pigrade=pg)._demote()

    def __truediv__(self, other):
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = ExactScalar.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        if (self.qgrade, self.pigrade) != (other.qgrade, other.pigrade):
            return False
        try:
            a, b = ExactScalar._promote_pair(self, other)
        except AssertionError:
            return False
        return a.coeffs == b.coeffs

    def __hash__(self):
        d = self._demote()
        return hash((d.kind, d.N, d.D, d.coeffs, d.qgrade, d.pigrade))

    # -- Galois --------------------------------------------------------

    def galois(self, m):
        """The automorphism zeta_N -> zeta_N^m (gcd(m, N) = 1); identity on Q."""
        if self.kind == "rat":
            return self
        assert self.kind == "cyc"
        N = self.N
        assert math.gcd(m, N) == 1
        acc = [Q0] * (N + 1)
        for k, c in enumerate(self.coeffs):
            if c:
                acc[(k * m) % N] += c
        coeffs = _cyc_reduce(acc, N)
        coeffs += [Q0] * (euler_phi(N) - len(coeffs))
        return ExactScalar("cyc", coeffs, N=N,
                           qgrade=self.qgrade, pigrade=self.pigrade)._demote()

    def conjugate(self):
        """Complex conjugation: zeta_N -> zeta_N^(-1), i -> -i, sqrtD -> sqrtD."""
        if self.kind == "rat":
            return self
        if self.kind == "cyc":
            return self.galois(self.N - 1)
        a, b, c, d = self.coeffs
        return ExactScalar("quad", (a, -b, c, -d), D=self.D,
                           qgrade=self.qgrade, pigrade=self.pigrade)

    # -- serialization --------------------------------------------------

    def serialize(self):
        d = self._demote()
        if d.kind == "rat":
            body = str(d.coeffs[0])
        elif d.kind == "cyc":
            terms = []
            for k, c in enumerate(d.coeffs):
                if c == 0:
                    continue
                if k == 0:
                    terms.append(str(c))
                else:
                    terms.append(f"{c}*z{d.N}^{k}")
            body = "+".join(terms) if terms else "0"
            body = body.replace("+-", "-")
        else:
            names = (None, "i", f"sqrt{d.D}", f"i*sqrt{d.D}")
            den = 1
            for c in d.coeffs:
                den = den * c.denominator // math.gcd(den, c.denominator)
            terms = []
            for c, name in zip(d.coeffs, names):
                cc = c * den
                if cc == 0:
                    continue
                if name is None:
                    terms.append(str(cc))
                elif cc == 1:
                    terms.append(name)
                elif cc == -1:
                    terms.append(f"-{name}")
                else:
                    terms.append(f"{cc}*{name}")
            num = "+".join(terms) if terms else "0"
            num = num.replace("+-", "-")
            body = f"({num})/{den}" if den != 1 else (
                f"({num})" if len(terms) > 1 else num)
        if d.qgrade:
            body += f" @q:{d.qgrade}"
        if d.pigrade:
            body += f" @pi:{d.pigrade}"
        return body

    @staticmethod
    def parse(s):
        return _parse_scalar(s)

    def __repr__(self):
        return f"ExactScalar({self.serialize()!r})"


def _coerce(x):
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactScalar.rational(x)
    raise TypeError(f"cannot coerce {x!r} to ExactScalar")


def _squarefree(D):
    d, p = D, 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        if d % p == 0:
            d //= p
        p += 1
    return True


def _cyc_reduce(acc, N):
    """Reduce a dense Fraction coefficient list modulo Phi_N."""
    mod = cyclotomic_poly(N)
    deg = len(mod) - 1
    acc = [c if isinstance(c, Fraction) else Fraction(c) for c in acc]
    for k in range(len(acc) - 1, deg - 1, -1):
        c = acc[k]
        if c:
            for j, m in enumerate(mod):
                if m:
                    acc[k - deg + j] -= c * m
    return _poly_trim(acc[:deg]) + []


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Q0] * (n - len(a))
    b = list(b) + [Q0] * (n - len(b))
    return _poly_trim([x - y for x, y in zip(a, b)])


def _cyc_inverse(coeffs, N):
    """Inverse modulo Phi_N by the extended Euclidean algorithm over Q."""
    mod = [Fraction(x) for x in cyclotomic_poly(N)]
    deg = len(mod) - 1
    r0, r1 = mod, _poly_trim([Fraction(c) for c in coeffs])
    s0, s1 = [], [Q1]
    while r1:
        q, r = _poly_divmod(r0, r1)
        s = _poly_sub(s0, _poly_mul(q, s1))
        r0, r1, s0, s1 = r1, r, s1, s
    assert len(r0) == 1, "element not invertible (should be impossible in a field)"
    c = r0[0]
    inv = [x / c for x in s0]
    inv = _cyc_reduce(inv, N)
    return inv + [Q0] * (deg - len(inv))


_QUAD_TABLE = {
    # (e_i, e_j) -> list of (index, sign-or-D-marker); basis 1, i, s, is
    (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
    (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
    (2, 0): (2, 1), (2, 1): (3, 1), (2, 2): (0, "D"), (2, 3): (1, "D"),
    (3, 0): (3, 1), (3, 1): (2, -1), (3, 2): (1, "D"), (3, 3): (0, "-D"),
}


def _quad_mul(a, b, D):
    out = [Q0, Q0, Q0, Q0]
    for i in range(4):
        if a[i] == 0:
            continue
        for j in range(4):
            if b[j] == 0:
                continue
            idx, sgn = _QUAD_TABLE[(i, j)]
            if sgn == "D":
                out[idx] += a[i] * b[j] * D
            elif sgn == "-D":
                out[idx] -= a[i] * b[j] * D
            else:
                out[idx] += sgn * a[i] * b[j]
    return tuple(out)


def _quad_inverse(coeffs, D):
    # solve x * y = 1 as a 4x4 rational linear system
    cols = []
    for j in range(4):
        e = [Q0] * 4
        e[j] = Q1
        cols.append(_quad_mul(coeffs, e, D))
    mat = [[cols[j][i] for j in range(4)] for i in range(4)]
    rhs = [Q1, Q0, Q0, Q0]
    sol = solve_linear(mat, rhs)
    assert sol is not None, "non-invertible quadratic-tower element"
    return tuple(sol)


def solve_linear(mat, rhs):
    """Gaussian elimination over Fraction; returns a solution or None."""
    n = len(mat)
    m = len(mat[0]) if n else 0
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    piv_cols = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if a[i][m] != 0:
            return None
    sol = [Q0] * m
    for i, c in enumerate(piv_cols):
        sol[c] = a[i][m]
    return sol


# ----------------------------------------------------------------------
# exact square roots of small primes inside cyclotomic fields
# ----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def sqrt_prime(p: int) -> ExactScalar:
    """An exact cyclotomic element whose square is p (p prime)."""
    if p == 2:
        s = ExactScalar.zeta(8) + ExactScalar.zeta(8, 7)
    else:
        g0 = ExactScalar.zero()
        for a in range(1, p):
            leg = pow(a, (p - 1) // 2, p)
            sgn = 1 if leg == 1 else -1
            g0 = g0 + sgn * ExactScalar.zeta(p, a)
        if p % 4 == 1:
            s = g0
        else:
            s = -ExactScalar.i_unit() * g0
    assert s * s == ExactScalar.rational(p)
    return s


# ----------------------------------------------------------------------
# scalar parsing
# ----------------------------------------------------------------------

def _parse_scalar(s: str) -> ExactScalar:
    s = s.strip()
    qg = pg = 0
    while "@" in s:
        s, _, tail = s.rpartition("@")
        tail = tail.strip()
        if tail.startswith("q:"):
            qg = int(tail[2:])
        elif tail.startswith("pi:"):
            pg = int(tail[3:])
        else:
            raise ValueError(f"bad grade annotation: @{tail}")
        s = s.strip()
    den = 1
    if s.startswith("(") and ")/" in s:
        body, _, d = s.rpartition(")/")
        s = body[1:]
        den = int(d)
    elif s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    val = _parse_sum(s)
    out = val / ExactScalar.rational(den)
    return out.with_grades(qgrade=qg, pigrade=pg)


def _split_top(s, seps):
    parts, depth, cur = [], 0, ""
    for idx, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in seps and cur.strip() and idx > 0 \
                and s[idx - 1] not in "*/^(+-":
            parts.append(cur)
            parts.append(ch)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


def _parse_sum(s):
    parts = _split_top(s, "+-")
    total = ExactScalar.zero()
    sign = 1
    for part in parts:
        if part == "+":
            sign = 1
        elif part == "-":
            sign = -1
        else:
            total = total + sign * _parse_term(part.strip())
    return total


def _parse_term(s):
    if not s:
        raise ValueError("empty term")
    neg = False
    while s.startswith("-"):
        neg = not neg
        s = s[1:].strip()
    out = ExactScalar.one()
    for fac in s.split("*"):
        fac = fac.strip()
        if not fac:
            raise ValueError(f"bad term: {s!r}")
        out = out * _parse_factor(fac)
    return -out if neg else out


def _parse_factor(f):
    if f == "i":
        return ExactScalar.i_unit()
    if f.startswith("sqrt"):
        return ExactScalar.sqrtD(int(f[4:]))
    if f.startswith("z"):
        body = f[1:]
        if "^" in body:
            n, _, k = body.partition("^")
            return ExactScalar.zeta(int(n), int(k))
        return ExactScalar.zeta(int(body))
    return ExactScalar.rational(Fraction(f))


# ----------------------------------------------------------------------
# Laurent rational functions in X with ExactScalar coefficients
# ----------------------------------------------------------------------

def _lp_clean(d):
    return {e: c for e, c in d.items() if not _coerce(c).is_zero()}


def _lp_add(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out[e] + c if e in out else c
    return _lp_clean(out)


def _lp_neg(a):
    return {e: -c for e, c in a.items()}


def _lp_mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            t = c1 * c2
            out[e] = out[e] + t if e in out else t
    return _lp_clean(out)


def _lp_scale(a, c):
    return _lp_clean({e: x * c for e, x in a.items()})


def _lp_to_poly(a):
    """Return (offset, dense list) with list[0] the X^offset coefficient."""
    if not a:
        return 0, []
    lo, hi = min(a), max(a)
    return lo, [a.get(e, ExactScalar.zero()) for e in range(lo, hi + 1)]


def _poly_to_lp(offset, lst):
    return _lp_clean({offset + i: c for i, c in enumerate(lst)})


def _spoly_divmod(a, b):
    """divmod of dense ExactScalar polynomial lists."""
    a = list(a)
    b = list(b)
    while b and _coerce(b[-1]).is_zero():
        b.pop()
    assert b, "polynomial division by zero"
    q = [ExactScalar.zero()] * max(0, len(a) - len(b) + 1)
    while True:
        while a and _coerce(a[-1]).is_zero():
            a.pop()
        if len(a) < len(b):
            break
        d = len(a) - len(b)
        c = _coerce(a[-1]) / _coerce(b[-1])
        q[d] = q[d] + c
        for i, y in enumerate(b):
            a[i + d] = _coerce(a[i + d]) - c * y
    return q, a


def _spoly_gcd(a, b):
    a, b = list(a), list(b)
    while True:
        while b and _coerce(b[-1]).is_zero():
            b.pop()
        if not b:
            break
        _, r = _spoly_divmod(a, b)
        a, b = b, r
    while a and _coerce(a[-1]).is_zero():
        a.pop()
    if a:
        lead = _coerce(a[-1])
        a = [_coerce(x) / lead for x in a]
    return a


class LaurentRF:
    """Laurent rational function num/den in X over ExactScalar."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, normalize=True):
        if den is None:
            den = {0: ExactScalar.one()}
        num = _lp_clean({int(e): _coerce(c) for e, c in num.items()})
        den = _lp_clean({int(e): _coerce(c) for e, c in den.items()})
        assert den, "zero denominator"
        if normalize:
            num, den = _laurent_canonical(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("LaurentRF is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def const(c):
        c = _coerce(c)
        return LaurentRF({0: c}) if not c.is_zero() else LaurentRF({})

    @staticmethod
    def X(e=1):
        return LaurentRF({e: ExactScalar.one()})

    @staticmethod
    def monomial(c, e):
        return LaurentRF({e: _coerce(c)})

    @staticmethod
    def zero():
        return LaurentRF({})

    @staticmethod
    def one():
        return LaurentRF({0: ExactScalar.one()})

    def is_zero(self):
        return not self.num

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _coerce_rf(other)
        num = _lp_add(_lp_mul(self.num, other.den), _lp_mul(other.num, self.den))
        return LaurentRF(num, _lp_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return LaurentRF(_lp_neg(self.num), self.den, normalize=False)

    def __sub__(self, other):
        return self + (-_coerce_rf(other))

    def __rsub__(self, other):
        return _coerce_rf(other) + (-self)

    def __mul__(self, other):
        other = _coerce_rf(other)
        return LaurentRF(_lp_mul(self.num, other.num), _lp_mul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        assert self.num, "division by zero rational function"
        return LaurentRF(self.den, self.num)

    def __truediv__(self, other):
        return self * _coerce_rf(other).inverse()

    def __rtruediv__(self, other):
        return _coerce_rf(other) * self.inverse()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = LaurentRF.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            other = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        lhs = _lp_mul(self.num, other.den)
        rhs = _lp_mul(other.num, self.den)
        diff = _lp_add(lhs, _lp_neg(rhs))
        return not diff

    def __hash__(self):
        return hash(self.serialize())

    # -- substitution / evaluation ---------------------------------------

    def evaluate(self, x):
        """Evaluate at X = x (an ExactScalar or rational)."""
        x = _coerce(x)
        num = ExactScalar.zero()
        for e, c in self.num.items():
            num = num + c * x ** e
        den = ExactScalar.zero()
        for e, c in self.den.items():
            den = den + c * x ** e
        assert not den.is_zero(), "evaluation at a pole"
        return num / den

    def subst_X(self, scale, power=1):
        """Substitute X -> scale * X^power (power = +-1)."""
        assert power in (1, -1)
        scale = _coerce(scale)
        num = {power * e: c * scale ** e for e, c in self.num.items()}
        den = {power * e: c * scale ** e for e, c in self.den.items()}
        return LaurentRF(_lp_clean(num), _lp_clean(den))

    # -- serialization -----------------------------------------------------

    def serialize(self):
        return f"({_lp_serialize(self.num)})/({_lp_serialize(self.den)})"

    def __repr__(self):
        return f"LaurentRF({self.serialize()})"


def _lp_serialize(d):
    if not d:
        return "0"
    terms = []
    for e in sorted(d):
        c = d[e].serialize()
        if e == 0:
            terms.append(f"[{c}]")
        else:
            terms.append(f"[{c}]*X^{e}")
    return " + ".join(terms)


def _coerce_rf(x):
    if isinstance(x, LaurentRF):
        return x
    if isinstance(x, (int, Fraction, ExactScalar)):
        return LaurentRF.const(x)
    raise TypeError(f"cannot coerce {x!r} to LaurentRF")


def _laurent_canonical(num, den):
    """gcd-reduced form with den a polynomial of constant term 1."""
    if not num:
        return {}, {0: ExactScalar.one()}
    off_n, pn = _lp_to_poly(num)
    off_d, pd = _lp_to_poly(den)
    g = _spoly_gcd(pn, pd)
    if len(g) > 1:
        pn, rn = _spoly_divmod(pn, g)
        pd, rd = _spoly_divmod(pd, g)
        assert not any(not _coerce(x).is_zero() for x in rn)
        assert not any(not _coerce(x).is_zero() for x in rd)
    # strip trailing/leading zeros of den, make constant term 1
    lead_shift = 0
    while pd and _coerce(pd[0]).is_zero():
        pd.pop(0)
        lead_shift += 1
    c0 = _coerce(pd[0])
    pd = [_coerce(x) / c0 for x in pd]
    pn = [_coerce(x) / c0 for x in pn]
    num = _poly_to_lp(off_n - off_d - lead_shift, pn)
    den = _poly_to_lp(0, pd)
    return num, den


# ----------------------------------------------------------------------
# named operation wrappers
# ----------------------------------------------------------------------

def cyclo_arith(a: ExactScalar, b: ExactScalar, op: str) -> ExactScalar:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def conjugate(a: ExactScalar) -> ExactScalar:
    return a.conjugate()


def laurent_normalize(f: LaurentRF) -> LaurentRF:
    return LaurentRF(f.num, f.den)

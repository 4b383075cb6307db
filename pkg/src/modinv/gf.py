"""Arithmetic in GF(p^s) for small p and s.

Elements are encoded as integers ``c_0 + c_1 p + ... + c_{s-1} p^{s-1}``
where ``c_i`` are the power-basis coefficients with respect to the
field modulus.  All vectorized operations act on numpy integer arrays of
such codes; :class:`FieldElem` is a thin value wrapper for the public API.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NonPrime, RangeExceeded

__all__ = ["FieldCtx", "FieldElem", "field_create", "elem_pow", "is_prime"]

MAX_P = 13
MAX_S = 4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n ** 0.5) + 1))


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m (coefficients low to high)."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    r = a[:dm]
    while r and r[-1] == 0:
        r.pop()
    return r


def _monic_polys(p: int, deg: int):
    for low in itertools.product(range(p), repeat=deg):
        yield list(low) + [1]


def _is_irreducible(m: list[int], p: int) -> bool:
    s = len(m) - 1
    for d in range(1, s // 2 + 1):
        for f in _monic_polys(p, d):
            if not _polymod(m, f, p):
                return False
    return True


@lru_cache(maxsize=None)
def _smallest_irreducible(p: int, s: int) -> tuple[int, ...]:
    if s == 1:
        return (0, 1)
    for m in _monic_polys(p, s):
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def _exact_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Integer matrix product of residues in [0, p), via BLAS when exact."""
    inner = a.shape[-1] if a.ndim else 1
    if inner * (p - 1) ** 2 < 2 ** 52 and a.size and b.size:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    return a @ b


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """The field GF(p^s) with a fixed monic irreducible modulus."""

    p: int
    s: int
    modulus: tuple[int, ...]
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p ** self.s)
        self._build_tables()

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.s, self.modulus) == (
            other.p, other.s, other.modulus)

    def __hash__(self):
        return hash((self.p, self.s, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.s})" if self.s > 1 else f"GF({self.p})"

    # -- table construction -------------------------------------------------
    def _build_tables(self):
        p, s, q = self.p, self.s, self.p ** self.s
        codes = np.arange(q, dtype=np.int64)
        digits = np.stack([(codes // p ** i) % p for i in range(s)], axis=1)
        pw = p ** np.arange(s, dtype=np.int64)
        # X^k reduced modulo the modulus, for k < 2s - 1 (used by matmul)
        red = []
        for k in range(2 * s - 1):
            r = _polymod([0] * k + [1], list(self.modulus), p) if s > 1 else [1]
            red.append(sum(c * p ** i for i, c in enumerate(r)))
        log = np.full(q, -1, dtype=np.int64)
        exp = np.zeros(q - 1, dtype=np.int64)
        if s == 1:
            gen = next(g for g in range(1, p) if self._order_mod_p(g) == p - 1)
            x = 1
            for i in range(p - 1):
                exp[i] = x
                log[x] = i
                x = x * gen % p
        else:
            for gen in range(2, q):
                x, seen = 1, []
                g_poly = [int(d) for d in digits[gen]]
                for _ in range(q - 1):
                    seen.append(x)
                    xp = [int(d) for d in digits[x]]
                    prod = [0] * (2 * s - 1)
                    for i, a in enumerate(xp):
                        if a:
                            for j, b in enumerate(g_poly):
                                prod[i + j] += a * b
                    r = _polymod(prod, list(self.modulus), p)
                    x = sum(c * p ** i for i, c in enumerate(r))
                    if x == 1:
                        break
                if len(seen) == q - 1:
                    exp[:] = seen
                    log[exp] = np.arange(q - 1)
                    break
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "pw", pw)
        object.__setattr__(self, "xpow", np.array(red, dtype=np.int64))
        object.__setattr__(self, "log", log)
        object.__setattr__(self, "exp", exp)
        neg = self.encode((-digits) % p)
        object.__setattr__(self, "_neg", neg)
        inv = np.zeros(q, dtype=np.int64)
        inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]
        object.__setattr__(self, "_inv", inv)

    def _order_mod_p(self, g: int) -> int:
        k, x = 1, g % self.p
        while x != 1:
            x = x * g % self.p
            k += 1
        return k

    # -- vectorized arithmetic on codes --------------------------------------
    def encode(self, digits: np.ndarray) -> np.ndarray:
        if self.s == 1:
            return np.asarray(digits)[..., 0].astype(np.int64)
        return np.asarray(digits, dtype=np.int64) @ self.pw

    def add(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self.s == 1:
            return (a + b) % self.p
        return self.encode((self.digits[a] + self.digits[b]) % self.p)

    def sub(self, a, b):
        return self.add(a, self._neg[np.asarray(b)])

    def neg(self, a):
        return self._neg[np.asarray(a)]

    def mul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self.s == 1:
            return (a * b) % self.p
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, k: int):
        """Elementwise a**k with 0**0 = 1."""
        a = np.asarray(a)
        if k == 0:
            return np.ones_like(a)
        out = self.exp[(self.log[a] * k) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def sum(self, a, axis=None):
        a = np.asarray(a)
        if self.s == 1:
            return a.sum(axis=axis) % self.p
        d = self.digits[a]
        if axis is None:
            return self.encode(d.reshape(-1, self.s).sum(axis=0) % self.p)
        return self.encode(d.sum(axis=axis if axis >= 0 else axis - 1) % self.p)

    def matmul(self, a, b):
        """Matrix product of code arrays (stacks are broadcast as in numpy)."""
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.s == 1:
            return _exact_matmul(a, b, self.p) % self.p
        p, s = self.p, self.s
        da = [(a // p ** i) % p for i in range(s)]
        db = [(b // p ** i) % p for i in range(s)]
        acc = [None] * (2 * s - 1)
        for i in range(s):
            for j in range(s):
                t = _exact_matmul(da[i], db[j], p)
                acc[i + j] = t if acc[i + j] is None else acc[i + j] + t
        out = None
        for k, term in enumerate(acc):
            term = self.mul(term % p, self.xpow[k])
            out = term if out is None else self.add(out, term)
        return out

    def is_subfield_elem(self, a, r: int):
        """True where a lies in the subfield GF(p^r)."""
        return self.power(a, self.p ** r) == np.asarray(a)

    # -- scalar conveniences --------------------------------------------------
    def elem(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            return value
        if isinstance(value, (list, tuple)):
            return FieldElem(self, tuple(int(c) % self.p for c in value))
        return FieldElem.from_code(self, int(value))

    def code(self, value) -> int:
        """Element code from an int (s = 1), a coefficient list, or a FieldElem."""
        if isinstance(value, FieldElem):
            return value.code
        if isinstance(value, (list, tuple)):
            if len(value) > self.s:
                raise ValueError(f"coefficient list longer than s={self.s}")
            return int(sum((int(c) % self.p) * self.p ** i for i, c in enumerate(value)))
        v = int(value)
        if self.s == 1:
            return v % self.p
        if not 0 <= v < self.q:
            raise ValueError(f"element code {v} out of range for {self!r}")
        return v

    def serialize_elem(self, code: int):
        return int(code) if self.s == 1 else [int(d) for d in self.digits[int(code)]]

    def to_json(self) -> dict:
        return {"p": self.p, "s": self.s, "modulus": list(self.modulus)}

    @property
    def primitive(self) -> int:
        return int(self.exp[1 % (self.q - 1)]) if self.q > 2 else 1


@dataclass(frozen=True)
class FieldElem:
    """An element of GF(p^s), stored by its power-basis coefficients."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.ctx.s:
            object.__setattr__(self, "coeffs",
                               tuple(self.coeffs) + (0,) * (self.ctx.s - len(self.coeffs)))
        if any(not 0 <= c < self.ctx.p for c in self.coeffs):
            raise ValueError("coefficient out of range")

    @classmethod
    def from_code(cls, ctx: FieldCtx, code: int) -> "FieldElem":
        return cls(ctx, tuple(int(d) for d in ctx.digits[code % ctx.q]))

    @property
    def code(self) -> int:
        return int(sum(c * self.ctx.p ** i for i, c in enumerate(self.coeffs)))

    def _wrap(self, code) -> "FieldElem":
        return FieldElem.from_code(self.ctx, int(code))

    def _other(self, o) -> int:
        return o.code if isinstance(o, FieldElem) else self.ctx.code(o)

    def __add__(self, o):
        return self._wrap(self.ctx.add(self.code, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.ctx.sub(self.code, self._other(o)))

    def __rsub__(self, o):
        return self._wrap(self.ctx.sub(self._other(o), self.code))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.code))

    def __mul__(self, o):
        return self._wrap(self.ctx.mul(self.code, self._other(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self._wrap(self.ctx.div(self.code, self._other(o)))

    def __pow__(self, k: int):
        return elem_pow(self.ctx, self, k)

    def inverse(self) -> "FieldElem":
        return self._wrap(self.ctx.inv(self.code))

    def __bool__(self):
        return any(self.coeffs)

    def __int__(self):
        return self.code

    def __repr__(self):
        if self.ctx.s == 1:
            return str(self.coeffs[0])
        return f"{list(self.coeffs)}"


def field_create(p: int, s: int = 1) -> FieldCtx:
    """GF(p^s) with the lexicographically smallest monic irreducible modulus.

    Coefficients of candidate moduli are compared constant term first.
    """
    if not (isinstance(p, int) and isinstance(s, int)):
        raise TypeError("p and s must be integers")
    if p < 2 or p > MAX_P or s < 1 or s > MAX_S:
        if p >= 2 and not is_prime(p) and p <= MAX_P:
            raise NonPrime(f"{p} is not prime")
        raise RangeExceeded(f"supported range is p <= {MAX_P}, 1 <= s <= {MAX_S}")
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    return _field_cached(p, s)


@lru_cache(maxsize=None)
def _field_cached(p: int, s: int) -> FieldCtx:
    return FieldCtx(p, s, _smallest_irreducible(p, s))


def field_from_modulus(p: int, s: int, modulus) -> FieldCtx:
    """Field with an explicitly given modulus (validated for irreducibility)."""
    base = field_create(p, s)
    m = tuple(int(c) % p for c in modulus)
    if s == 1 or m == base.modulus:
        return base
    if len(m) != s + 1 or m[-1] != 1 or not _is_irreducible(list(m), p):
        raise ValueError(f"modulus {list(m)} is not monic irreducible of degree {s}")
    return FieldCtx(p, s, m)


def elem_pow(ctx: FieldCtx, a, k: int) -> FieldElem:
    """a**k by square-and-multiply; 0**0 is 1 by convention."""
    if k < 0:
        raise ValueError("negative exponent")
    base = ctx.code(a)
    result = 1
    while k:
        if k & 1:
            result = int(ctx.mul(result, base))
        base = int(ctx.mul(base, base))
        k >>= 1
    return FieldElem.from_code(ctx, result)

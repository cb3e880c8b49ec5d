"""Ordinals in Cantor normal form, with opaque symbols for big fixed points.

Values below epsilon_0 are written hereditarily as ``w^e1*c1 + ... + w^ek*ck``
with strictly decreasing exponents.  Uncountable cardinals ``Card(i)`` and the
class of all ordinals ``On`` are carried as symbolic heads: they absorb any
notation value to their left and satisfy ``w^w * S = S``.  A head may be
followed by a notation tail, so ``Card(1)+5`` is a legal value.

The semantics of a tail after ``On`` (``On+5``) is mechanical only: ``On`` is
treated as if it were the largest limit ordinal, and nothing more is claimed.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import NamedTuple, Optional, Tuple

__all__ = [
    "Ordinal", "Symbol", "CongruenceWitness", "OrdinalSyntaxError",
    "UnsupportedOperand", "ZERO", "ONE", "OMEGA", "OMEGA_OMEGA", "ON",
    "nat", "card", "omega_power", "parse_ordinal", "compare", "add", "mul",
    "decompose_mod_omega_omega", "congruent_mod_omega_omega",
    "elementarily_equivalent", "is_canonical",
]


class OrdinalSyntaxError(ValueError):
    """Malformed ordinal text.  ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


class UnsupportedOperand(ArithmeticError):
    """The result of an operation is not representable in the notation."""


class Symbol:
    """An opaque fixed point: ``Card(i)`` (i >= 1) or ``On``."""

    __slots__ = ("kind", "index")

    def __init__(self, kind: str, index: int = 0):
        if kind == "card" and index < 1:
            raise ValueError("Card index must be >= 1")
        if kind not in ("card", "on"):
            raise ValueError(f"unknown symbol kind {kind!r}")
        self.kind = kind
        self.index = index if kind == "card" else 0

    def key(self) -> Tuple[bool, int]:
        return (self.kind == "on", self.index)

    def __eq__(self, other):
        if not isinstance(other, Symbol):
            return NotImplemented
        return self.kind == other.kind and self.index == other.index

    def __hash__(self):
        return hash((self.kind, self.index))

    def __str__(self):
        return "On" if self.kind == "on" else f"Card({self.index})"

    __repr__ = __str__


Term = Tuple["Ordinal", int]


class Ordinal:
    """Immutable ordinal value.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs, exponents
    strictly decreasing and themselves head-free.  ``head`` is ``None`` or a
    :class:`Symbol` standing before the terms.
    """

    __slots__ = ("terms", "head", "_hash", "_split")

    def __init__(self, terms: Tuple[Term, ...] = (), head: Optional[Symbol] = None):
        self.terms = tuple(terms)
        self.head = head
        self._hash = None
        self._split = None

    # -- predicates -------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.head is None and not self.terms

    @property
    def is_symbolic(self) -> bool:
        return self.head is not None

    @property
    def is_finite(self) -> bool:
        return self.head is None and (not self.terms or self.terms[0][0].is_zero)

    def __int__(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0

    def __bool__(self) -> bool:
        return not self.is_zero

    # -- equality, order, hashing ----------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, int):
            return self.is_finite and int(self) == other
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.head == other.head and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            # finite values compare equal to ints, so they must hash alike
            h = hash(int(self)) if self.is_finite else hash((self.terms, self.head))
            self._hash = h
        return h

    def __lt__(self, other):
        return compare(self, _coerce(other)) < 0

    def __le__(self, other):
        return compare(self, _coerce(other)) <= 0

    def __gt__(self, other):
        return compare(self, _coerce(other)) > 0

    def __ge__(self, other):
        return compare(self, _coerce(other)) >= 0

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Ordinal('{to_text(self)}')"


def _coerce(value) -> Ordinal:
    if isinstance(value, Ordinal):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return nat(value)
    raise TypeError(f"cannot use {value!r} as an ordinal")


ZERO = Ordinal()


@lru_cache(maxsize=1 << 16)
def nat(n: int) -> Ordinal:
    """The finite ordinal ``n``."""
    if n < 0:
        raise ValueError("ordinals are non-negative")
    return ZERO if n == 0 else Ordinal(((ZERO, n),))


ONE = nat(1)


def omega_power(exponent: Ordinal, coefficient: int = 1) -> Ordinal:
    """``w^exponent * coefficient``."""
    if exponent.head is not None:
        raise UnsupportedOperand("symbolic values cannot be exponents")
    if coefficient < 0:
        raise ValueError("coefficient must be non-negative")
    return ZERO if coefficient == 0 else Ordinal(((exponent, coefficient),))


OMEGA = omega_power(ONE)
OMEGA_OMEGA = omega_power(OMEGA)
ON = Ordinal(head=Symbol("on"))


def card(i: int) -> Ordinal:
    """The i-th uncountable cardinal as an opaque symbol."""
    return Ordinal(head=Symbol("card", i))


# -- comparison ----------------------------------------------------------

def _cmp_terms(s: Tuple[Term, ...], t: Tuple[Term, ...]) -> int:
    for (e1, c1), (e2, c2) in zip(s, t):
        if e1 is not e2:
            k = _cmp_terms(e1.terms, e2.terms)
            if k:
                return k
        if c1 != c2:
            return -1 if c1 < c2 else 1
    return (len(s) > len(t)) - (len(s) < len(t))


def compare(a: Ordinal, b: Ordinal) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or above ``b``."""
    if a.head is b.head:
        return _cmp_terms(a.terms, b.terms)
    if a.head != b.head:
        if a.head is None:
            return -1
        if b.head is None:
            return 1
        return -1 if a.head.key() < b.head.key() else 1
    return _cmp_terms(a.terms, b.terms)


# -- arithmetic ----------------------------------------------------------

def _add_terms(s: Tuple[Term, ...], t: Tuple[Term, ...]) -> Tuple[Term, ...]:
    if not t:
        return s
    if not s:
        return t
    lead, coef = t[0]
    out = []
    for e, c in s:
        k = _cmp_terms(e.terms, lead.terms) if e is not lead else 0
        if k > 0:
            out.append((e, c))
        elif k == 0:
            out.append((e, c + coef))
            return tuple(out) + t[1:]
        else:
            break
    return tuple(out) + t


def _mul_terms(s: Tuple[Term, ...], t: Tuple[Term, ...]) -> Tuple[Term, ...]:
    if not s or not t:
        return ()
    lead, coef = s[0]
    result: Tuple[Term, ...] = ()
    for e, k in t:
        if e.is_zero:
            piece = ((lead, coef * k),) + s[1:]
        else:
            piece = ((Ordinal(_add_terms(lead.terms, e.terms)), k),)
        result = _add_terms(result, piece)
    return result


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal sum ``a + b``."""
    if b.head is None:
        if not b.terms:
            return a
        if a.head is None and b.terms[0][0] is ZERO and a.terms and a.terms[-1][0] is ZERO:
            # both end in a finite part: only the last coefficient changes
            if len(a.terms) == 1:
                return nat(a.terms[0][1] + b.terms[0][1])
            return Ordinal(a.terms[:-1] + ((ZERO, a.terms[-1][1] + b.terms[0][1]),))
        return Ordinal(_add_terms(a.terms, b.terms), a.head)
    if a.head is None or a.head.key() < b.head.key():
        return b
    raise UnsupportedOperand(f"{a} + {b} is not representable")


def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal product ``a * b`` (right factor is the multiplier)."""
    if a.is_zero or b.is_zero:
        return ZERO
    if a.head is not None:
        if b == ONE:
            return a
        raise UnsupportedOperand(f"{a} * {b}: symbolic left factor")
    if (b.head is None and len(a.terms) == 1 and len(b.terms) == 1
            and a.terms[0][0] is ZERO and b.terms[0][0] is ZERO):
        return nat(a.terms[0][1] * b.terms[0][1])
    if b.head is not None:
        # a < S and S = w^S, so a * S = S.
        return Ordinal(_mul_terms(a.terms, b.terms), b.head)
    return Ordinal(_mul_terms(a.terms, b.terms))


# -- reduction modulo w^w ------------------------------------------------

def _minus_omega(e: Ordinal) -> Ordinal:
    # the unique d with w + d = e, for e >= w
    lead, coef = e.terms[0]
    if compare(lead, ONE) > 0:
        return e
    if coef == 1:
        return Ordinal(e.terms[1:])
    return Ordinal(((lead, coef - 1),) + e.terms[1:])


def decompose_mod_omega_omega(a: Ordinal) -> Tuple[Ordinal, Ordinal]:
    """Split ``a`` as ``w^w * quotient + remainder`` with remainder < w^w."""
    split = a._split
    if split is None:
        q, r = [], []
        for e, c in a.terms:
            if e.is_finite:
                r.append((e, c))
            else:
                q.append((_minus_omega(e), c))
        split = a._split = (Ordinal(tuple(q), a.head), Ordinal(tuple(r)))
    return split


class CongruenceWitness(NamedTuple):
    xi: Ordinal
    eta: Ordinal
    delta: Ordinal


def congruent_mod_omega_omega(a: Ordinal, b: Ordinal) -> Optional[CongruenceWitness]:
    """Witness of congruence modulo ``w^w``, or ``None``.

    ``a = w^w*xi + delta`` and ``b = w^w*eta + delta`` with the same
    ``delta < w^w``, and ``xi``, ``eta`` both zero or both non-zero.
    """
    xi, d1 = decompose_mod_omega_omega(a)
    eta, d2 = decompose_mod_omega_omega(b)
    if d1.terms != d2.terms:
        return None
    if xi.is_zero != eta.is_zero:
        return None
    return CongruenceWitness(xi, eta, d1)


def elementarily_equivalent(a: Ordinal, b: Ordinal) -> bool:
    """Whether the well-orders of type ``a`` and ``b`` satisfy the same
    first-order sentences of the order language."""
    return congruent_mod_omega_omega(a, b) is not None


def is_canonical(a: Ordinal) -> bool:
    """Structural check of the normal-form invariants."""
    if not isinstance(a, Ordinal):
        return False
    prev = None
    for e, c in a.terms:
        if not isinstance(c, int) or c < 1:
            return False
        if e.head is not None or not is_canonical(e):
            return False
        if prev is not None and compare(prev, e) <= 0:
            return False
        prev = e
    return True


# -- text ----------------------------------------------------------------

def _term_text(e: Ordinal, c: int) -> str:
    if e.is_zero:
        return str(c)
    if e == ONE:
        base = "w"
    elif e.is_finite:
        base = f"w^{int(e)}"
    elif e == OMEGA:
        base = "w^w"
    else:
        base = f"w^({to_text(e)})"
    return base if c == 1 else f"{base}*{c}"


def to_text(a: Ordinal) -> str:
    parts = [] if a.head is None else [str(a.head)]
    parts.extend(_term_text(e, c) for e, c in a.terms)
    return "+".join(parts) if parts else "0"


_TOKEN = re.compile(r"\s*(?:(\d+)|(Card)|(On)|(w|ω)|([\^*+()]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if m is None:
                pos += len(text[pos:]) - len(text[pos:].lstrip())
                raise OrdinalSyntaxError(f"unexpected character {text[pos]!r}", pos)
            start = m.start(m.lastindex)
            kind = ("nat", "card", "on", "w", "op")[m.lastindex - 1]
            self.tokens.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self, kind, value=None):
        k, v, p = self.peek()
        if k != kind or (value is not None and v != value):
            want = value or kind
            raise OrdinalSyntaxError(f"expected {want!r}", p)
        self.i += 1
        return v, p

    def nat(self) -> int:
        v, _ = self.take("nat")
        return int(v)

    def ordinal(self) -> Ordinal:
        value = self.summand()
        while self.peek()[:2] == ("op", "+"):
            _, _, p = self.peek()
            self.i += 1
            rhs = self.summand()
            try:
                value = add(value, rhs)
            except UnsupportedOperand as exc:
                raise OrdinalSyntaxError(str(exc), p) from None
        return value

    def summand(self) -> Ordinal:
        kind, _, pos = self.peek()
        if kind == "card":
            self.i += 1
            self.take("op", "(")
            _, p = self.take("nat")
            index = int(self.tokens[self.i - 1][1])
            if index < 1:
                raise OrdinalSyntaxError("Card index must be >= 1", p)
            self.take("op", ")")
            return card(index)
        if kind == "on":
            self.i += 1
            return ON
        if kind == "nat":
            return nat(self.nat())
        if kind == "w":
            self.i += 1
            exponent = ONE
            if self.peek()[:2] == ("op", "^"):
                self.i += 1
                exponent = self.atom()
            coefficient = 1
            if self.peek()[:2] == ("op", "*"):
                self.i += 1
                coefficient = self.nat()
            return omega_power(exponent, coefficient)
        raise OrdinalSyntaxError("expected a term", pos)

    def atom(self) -> Ordinal:
        kind, value, pos = self.peek()
        if kind == "nat":
            return nat(self.nat())
        if kind == "w":
            self.i += 1
            return OMEGA
        if (kind, value) == ("op", "("):
            self.i += 1
            inner = self.ordinal()
            self.take("op", ")")
            if inner.head is not None:
                raise OrdinalSyntaxError("symbolic values cannot be exponents", pos)
            return inner
        raise OrdinalSyntaxError("expected exponent", pos)


def parse_ordinal(text: str) -> Ordinal:
    """Parse ordinal text such as ``"w^w*2+5"`` or ``"Card(1)+3"``.

    Non-canonical input (``"1+w"``, ``"w*0+3"``) is normalized.
    """
    p = _Parser(text)
    if not p.tokens:
        raise OrdinalSyntaxError("empty input", 0)
    value = p.ordinal()
    kind, v, pos = p.peek()
    if kind is not None:
        raise OrdinalSyntaxError(f"unexpected {v!r}", pos)
    return value

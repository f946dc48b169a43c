"""Fixed-precision real and complex scalars with explicit rounding.

Every value carries its own precision in bits (``bits >= 64``) and every
arithmetic operation rounds to nearest at an explicit precision, with no
global precision state anywhere.  Binary operations between operands of
different stated precisions round the result to the larger of the two.

The arithmetic engine is mpmath's low-level ``libmp`` layer, which
operates on immutable normalized mantissa/exponent tuples.  Wrapping it
(rather than mpmath's context objects) keeps rounding explicit per
operation and makes values safe to share across threads.

Infinities and NaNs are rejected at construction and whenever an
operation would produce one; see :class:`gausdisk.errors.NonFiniteError`.

Serialization uses an exact decimal tag ``<sign><digits>e<exp10>@<bits>``.
The digit string is the full decimal expansion of the binary value (every
finite binary float has one), so parsing recovers the value bit for bit.
"""

from __future__ import annotations

import math
import re

from mpmath.libmp import (
    from_float,
    from_int,
    from_str,
    fzero,
    mpc_abs,
    mpc_add,
    mpc_div,
    mpc_exp,
    mpc_mul,
    mpc_neg,
    mpc_pow_int,
    mpc_sqrt,
    mpc_sub,
    mpf_abs,
    mpf_add,
    mpf_cmp,
    mpf_cos_sin,
    mpf_div,
    mpf_exp,
    mpf_log,
    mpf_mul,
    mpf_neg,
    mpf_pi,
    mpf_pos,
    mpf_pow,
    mpf_pow_int,
    mpf_sqrt,
    mpf_sub,
    round_nearest,
    to_float,
    to_str,
)

from .errors import ConfigError, NonFiniteError

__all__ = [
    "MIN_BITS",
    "PReal",
    "PComplex",
    "exp",
    "log",
    "sqrt",
    "pi_value",
    "cos_sin",
    "double_factorial",
    "working_bits",
]

MIN_BITS = 64

_RND = round_nearest

_LOG10_2 = math.log10(2.0)

_TAG_RE = re.compile(r"(-?)([0-9]+)e(-?[0-9]+)@([0-9]+)\Z")


def _check_bits(bits: int) -> int:
    if not isinstance(bits, int) or isinstance(bits, bool):
        raise ConfigError(f"precision must be an integer, got {bits!r}")
    if bits < MIN_BITS:
        raise ConfigError(f"precision must be at least {MIN_BITS} bits, got {bits}")
    return bits


def _raw_is_finite(raw) -> bool:
    # Normalized mpf tuples use a zero mantissa only for 0 and the three
    # special values, which are distinguished by the exponent slot.
    return raw[1] != 0 or raw == fzero


def _checked(raw, what: str = "operation"):
    if not _raw_is_finite(raw):
        raise NonFiniteError(f"{what} produced a non-finite value")
    return raw


class PReal:
    """An immutable real number with a stated precision in bits."""

    __slots__ = ("_raw", "_bits")

    def __init__(self, value, bits: int | None = None):
        if isinstance(value, PReal):
            raw = value._raw
            if bits is None:
                bits = value._bits
            else:
                _check_bits(bits)
                raw = mpf_pos(raw, bits, _RND)
        elif isinstance(value, bool):
            raise ConfigError("cannot build a PReal from a bool")
        elif isinstance(value, int):
            if bits is None:
                bits = max(MIN_BITS, value.bit_length())
                raw = from_int(value)
            else:
                _check_bits(bits)
                raw = from_int(value, bits, _RND)
        elif isinstance(value, float):
            if not math.isfinite(value):
                raise NonFiniteError(f"cannot build a PReal from {value!r}")
            if bits is None:
                bits = MIN_BITS
            else:
                _check_bits(bits)
            raw = mpf_pos(from_float(value), bits, _RND)
        elif isinstance(value, str):
            if bits is None:
                raise ConfigError("building a PReal from a string requires explicit bits")
            _check_bits(bits)
            try:
                raw = from_str(value, bits, _RND)
            except ValueError as exc:
                raise ConfigError(f"cannot parse {value!r} as a real number") from exc
        else:
            raise ConfigError(f"cannot build a PReal from {type(value).__name__}")
        self._raw = _checked(raw, "construction")
        self._bits = bits

    @classmethod
    def _wrap(cls, raw, bits: int) -> "PReal":
        out = object.__new__(cls)
        out._raw = _checked(raw)
        out._bits = bits
        return out

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def raw(self):
        """The underlying normalized libmp tuple (sign, man, exp, bc)."""
        return self._raw

    def round_to(self, bits: int) -> "PReal":
        """Return this value rounded to nearest at a new stated precision."""
        _check_bits(bits)
        return PReal._wrap(mpf_pos(self._raw, bits, _RND), bits)

    def is_zero(self) -> bool:
        return self._raw == fzero

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PReal):
            return other._raw, other._bits
        if isinstance(other, bool):
            return None
        if isinstance(other, int):
            return from_int(other), self._bits
        if isinstance(other, float):
            if not math.isfinite(other):
                raise NonFiniteError(f"non-finite operand {other!r}")
            return from_float(other), self._bits
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        raw, obits = pair
        bits = max(self._bits, obits)
        return PReal._wrap(mpf_add(self._raw, raw, bits, _RND), bits)

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        raw, obits = pair
        bits = max(self._bits, obits)
        return PReal._wrap(mpf_sub(self._raw, raw, bits, _RND), bits)

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        raw, obits = pair
        bits = max(self._bits, obits)
        return PReal._wrap(mpf_sub(raw, self._raw, bits, _RND), bits)

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        raw, obits = pair
        bits = max(self._bits, obits)
        return PReal._wrap(mpf_mul(self._raw, raw, bits, _RND), bits)

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        raw, obits = pair
        bits = max(self._bits, obits)
        return PReal._wrap(mpf_div(self._raw, raw, bits, _RND), bits)

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        raw, obits = pair
        bits = max(self._bits, obits)
        return PReal._wrap(mpf_div(raw, self._raw, bits, _RND), bits)

    def __pow__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return PReal._wrap(mpf_pow_int(self._raw, other, self._bits, _RND), self._bits)
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        raw, obits = pair
        bits = max(self._bits, obits)
        return PReal._wrap(mpf_pow(self._raw, raw, bits, _RND), bits)

    def __neg__(self):
        return PReal._wrap(mpf_neg(self._raw), self._bits)

    def __pos__(self):
        return self

    def __abs__(self):
        return PReal._wrap(mpf_abs(self._raw), self._bits)

    # -- comparisons ---------------------------------------------------

    def _cmp(self, other):
        pair = self._coerce(other)
        if pair is None:
            return None
        return mpf_cmp(self._raw, pair[0])

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        # Normalized tuples are canonical, so equal values hash equally.
        return hash(self._raw)

    # -- conversions ---------------------------------------------------

    def __float__(self) -> float:
        return to_float(self._raw, rnd=_RND)

    def str_digits(self, digits: int) -> str:
        return to_str(self._raw, digits)

    def full_digits(self) -> int:
        """Number of decimal digits carrying information at this precision."""
        return int(self._bits * _LOG10_2) + 2

    def __str__(self) -> str:
        return to_str(self._raw, self.full_digits())

    def __repr__(self) -> str:
        return f"PReal({to_str(self._raw, 24)}, bits={self._bits})"

    # -- serialization -------------------------------------------------

    def serialize(self) -> str:
        """Exact decimal tag; parses back to the identical value."""
        sign, man, exp, _bc = self._raw
        if man == 0:
            return f"0e0@{self._bits}"
        if exp >= 0:
            digits = man << exp
            exp10 = 0
        else:
            digits = man * 5 ** (-exp)
            exp10 = exp
        while digits % 10 == 0:
            digits //= 10
            exp10 += 1
        return f"{'-' if sign else ''}{digits}e{exp10}@{self._bits}"

    @classmethod
    def parse(cls, tag: str) -> "PReal":
        m = _TAG_RE.match(tag.strip())
        if m is None:
            raise ConfigError(f"malformed precision tag {tag!r}")
        neg, digits_s, exp10_s, bits_s = m.groups()
        bits = _check_bits(int(bits_s))
        digits = int(digits_s)
        exp10 = int(exp10_s)
        if digits == 0:
            raw = fzero
        elif exp10 >= 0:
            raw = from_int(digits * 10**exp10, bits, _RND)
        else:
            raw = mpf_div(from_int(digits), from_int(10**-exp10), bits, _RND)
        if neg:
            raw = mpf_neg(raw)
        return cls._wrap(raw, bits)


class PComplex:
    """An immutable complex number; both parts share one stated precision."""

    __slots__ = ("_re", "_im", "_bits")

    def __init__(self, real, imag=None, bits: int | None = None):
        if isinstance(real, PComplex) and imag is None:
            if bits is None:
                self._re, self._im, self._bits = real._re, real._im, real._bits
            else:
                _check_bits(bits)
                self._re = mpf_pos(real._re, bits, _RND)
                self._im = mpf_pos(real._im, bits, _RND)
                self._bits = bits
            return
        if isinstance(real, complex):
            if imag is not None:
                raise ConfigError("pass either a complex value or two real parts")
            real, imag = real.real, real.imag
        if imag is None:
            imag = 0
        re_part = real if isinstance(real, PReal) else PReal(real, bits)
        im_part = imag if isinstance(imag, PReal) else PReal(imag, bits)
        if bits is None:
            bits = max(re_part.bits, im_part.bits)
        else:
            _check_bits(bits)
        self._re = mpf_pos(re_part._raw, bits, _RND)
        self._im = mpf_pos(im_part._raw, bits, _RND)
        self._bits = bits

    @classmethod
    def _wrap(cls, re_raw, im_raw, bits: int) -> "PComplex":
        out = object.__new__(cls)
        out._re = _checked(re_raw)
        out._im = _checked(im_raw)
        out._bits = bits
        return out

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def real(self) -> PReal:
        return PReal._wrap(self._re, self._bits)

    @property
    def imag(self) -> PReal:
        return PReal._wrap(self._im, self._bits)

    @property
    def raw(self):
        """The underlying pair of libmp tuples (re, im)."""
        return (self._re, self._im)

    def round_to(self, bits: int) -> "PComplex":
        _check_bits(bits)
        return PComplex._wrap(
            mpf_pos(self._re, bits, _RND), mpf_pos(self._im, bits, _RND), bits
        )

    def conjugate(self) -> "PComplex":
        return PComplex._wrap(self._re, mpf_neg(self._im), self._bits)

    def is_zero(self) -> bool:
        return self._re == fzero and self._im == fzero

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PComplex):
            return (other._re, other._im), other._bits
        if isinstance(other, PReal):
            return (other._raw, fzero), other._bits
        if isinstance(other, bool):
            return None
        if isinstance(other, int):
            return (from_int(other), fzero), self._bits
        if isinstance(other, float):
            if not math.isfinite(other):
                raise NonFiniteError(f"non-finite operand {other!r}")
            return (from_float(other), fzero), self._bits
        if isinstance(other, complex):
            if not (math.isfinite(other.real) and math.isfinite(other.imag)):
                raise NonFiniteError(f"non-finite operand {other!r}")
            return (from_float(other.real), from_float(other.imag)), self._bits
        return None

    def _binop(self, other, op, reverse=False):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        z, obits = pair
        bits = max(self._bits, obits)
        a, b = (z, (self._re, self._im)) if reverse else ((self._re, self._im), z)
        re_raw, im_raw = op(a, b, bits, _RND)
        return PComplex._wrap(re_raw, im_raw, bits)

    def __add__(self, other):
        return self._binop(other, mpc_add)

    def __radd__(self, other):
        return self._binop(other, mpc_add, reverse=True)

    def __sub__(self, other):
        return self._binop(other, mpc_sub)

    def __rsub__(self, other):
        return self._binop(other, mpc_sub, reverse=True)

    def __mul__(self, other):
        return self._binop(other, mpc_mul)

    def __rmul__(self, other):
        return self._binop(other, mpc_mul, reverse=True)

    def __truediv__(self, other):
        return self._binop(other, mpc_div)

    def __rtruediv__(self, other):
        return self._binop(other, mpc_div, reverse=True)

    def __pow__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            re_raw, im_raw = mpc_pow_int(
                (self._re, self._im), other, self._bits, _RND
            )
            return PComplex._wrap(re_raw, im_raw, self._bits)
        return NotImplemented

    def __neg__(self):
        re_raw, im_raw = mpc_neg((self._re, self._im))
        return PComplex._wrap(re_raw, im_raw, self._bits)

    def __abs__(self) -> PReal:
        return PReal._wrap(mpc_abs((self._re, self._im), self._bits, _RND), self._bits)

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        (re_raw, im_raw), _ = pair
        return mpf_cmp(self._re, re_raw) == 0 and mpf_cmp(self._im, im_raw) == 0

    def __hash__(self):
        return hash((self._re, self._im))

    def __complex__(self) -> complex:
        return complex(to_float(self._re, rnd=_RND), to_float(self._im, rnd=_RND))

    def serialize(self) -> str:
        """Two real tags separated by one space, real part first."""
        return f"{self.real.serialize()} {self.imag.serialize()}"

    @classmethod
    def parse(cls, text: str) -> "PComplex":
        parts = text.split()
        if len(parts) != 2:
            raise ConfigError(f"malformed complex tag pair {text!r}")
        re_part = PReal.parse(parts[0])
        im_part = PReal.parse(parts[1])
        if re_part.bits != im_part.bits:
            raise ConfigError(
                f"complex tag parts disagree on precision: {text!r}"
            )
        return cls._wrap(re_part._raw, im_part._raw, re_part.bits)

    def __str__(self) -> str:
        return f"({self.real} {'+' if self._im[0] == 0 else '-'} {abs(self.imag)}j)"

    def __repr__(self) -> str:
        return (
            f"PComplex({to_str(self._re, 24)}, {to_str(self._im, 24)}, "
            f"bits={self._bits})"
        )


# -- elementary functions ---------------------------------------------


def exp(x, bits: int | None = None):
    """e**x for PReal or PComplex, rounded at the result precision."""
    if isinstance(x, PReal):
        b = x.bits if bits is None else _check_bits(bits)
        return PReal._wrap(mpf_exp(x._raw, b, _RND), b)
    if isinstance(x, PComplex):
        b = x.bits if bits is None else _check_bits(bits)
        re_raw, im_raw = mpc_exp(x.raw, b, _RND)
        return PComplex._wrap(re_raw, im_raw, b)
    raise ConfigError(f"exp expects PReal or PComplex, got {type(x).__name__}")


def log(x: PReal, bits: int | None = None) -> PReal:
    """Natural logarithm of a positive PReal."""
    if not isinstance(x, PReal):
        raise ConfigError(f"log expects PReal, got {type(x).__name__}")
    if x._raw[0] or x.is_zero():
        raise ConfigError("log requires a positive argument")
    b = x.bits if bits is None else _check_bits(bits)
    return PReal._wrap(mpf_log(x._raw, b, _RND), b)


def sqrt(x, bits: int | None = None):
    """Square root of a nonnegative PReal or of a PComplex."""
    if isinstance(x, PReal):
        if x._raw[0]:
            raise ConfigError("sqrt of a negative PReal; use PComplex")
        b = x.bits if bits is None else _check_bits(bits)
        return PReal._wrap(mpf_sqrt(x._raw, b, _RND), b)
    if isinstance(x, PComplex):
        b = x.bits if bits is None else _check_bits(bits)
        re_raw, im_raw = mpc_sqrt(x.raw, b, _RND)
        return PComplex._wrap(re_raw, im_raw, b)
    raise ConfigError(f"sqrt expects PReal or PComplex, got {type(x).__name__}")


def pi_value(bits: int) -> PReal:
    _check_bits(bits)
    return PReal._wrap(mpf_pi(bits, _RND), bits)


def cos_sin(x: PReal, bits: int | None = None) -> tuple[PReal, PReal]:
    """(cos x, sin x) computed together."""
    if not isinstance(x, PReal):
        raise ConfigError(f"cos_sin expects PReal, got {type(x).__name__}")
    b = x.bits if bits is None else _check_bits(bits)
    c_raw, s_raw = mpf_cos_sin(x._raw, b, _RND)
    return PReal._wrap(c_raw, b), PReal._wrap(s_raw, b)


def double_factorial(n: int, bits: int | None = None) -> PReal:
    """n!! as an exact integer value (n >= -1); -1!! = 0!! = 1.

    With bits=None the stated precision is just large enough to hold the
    product exactly.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < -1:
        raise ConfigError(f"double_factorial expects an integer n >= -1, got {n!r}")
    value = 1
    for factor in range(n, 1, -2):
        value *= factor
    return PReal(value, bits)


def working_bits(a: float, radius: float = 1.0) -> int:
    """Precision policy for computations tied to support half-width ``a``
    and evaluation radius ``radius``.

    Budgets three effects: the interior cancellation of the error
    functional (which scales like a**2 * log a bits), the size of
    exp(z**2/2) out to the largest point touched ((a+radius)**2 / ln 2
    bits), and a fixed guard.  Never returns less than 128.
    """
    a = float(a)
    radius = float(radius)
    if not (math.isfinite(a) and math.isfinite(radius)):
        raise NonFiniteError("working_bits got a non-finite input")
    if a <= 0 or radius < 0:
        raise ConfigError("working_bits expects a > 0 and radius >= 0")
    interior = math.ceil(3.0 * a * a * math.log2(max(a, 2.0)))
    magnitude = math.ceil((a + radius) ** 2 / math.log(2.0))
    return max(128, interior + magnitude + 64)

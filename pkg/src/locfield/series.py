"""Laurent series over F_q at explicit absolute precision.

A `TruncatedSeries` is either exactly zero, an exact Laurent polynomial
(`prec is None`), or a series known modulo O(T^prec).  Nonzero values carry a
certified valuation: coeffs[0] != 0.  The one deliberately reachable
uncertified state is "zero modulo T^prec" (empty coefficient list, finite
prec), which arises from cancellation between inexact operands; it can be
added and multiplied, but asking for its valuation, inverting it, or printing
it as a certified value raises InsufficientPrecision.  Public constructors
and the parser refuse to build it directly.

Precision propagation: add/sub min(Ma, Mb); mul min(Ma + vb, Mb + va);
div/inv keep the minimum relative precision.  Exact op exact stays exact
(division only when it terminates or a target precision is supplied).
"""

from __future__ import annotations

from .errors import DivisionByZero, InputError, InsufficientPrecision
from .gf import GF

DEFAULT_PRECISION = 32


class SeriesField:
    """The field F_q((T)) as a context: residue field plus a default precision."""

    __slots__ = ("kappa", "default_prec")

    def __init__(self, kappa, default_prec=DEFAULT_PRECISION):
        self.kappa = kappa
        self.default_prec = default_prec

    @property
    def p(self):
        return self.kappa.p

    @property
    def q(self):
        return self.kappa.q

    def zero(self):
        return TruncatedSeries(self, 0, (), None)

    def one(self):
        return TruncatedSeries(self, 0, (1,), None)

    def from_int(self, n, shift=0):
        """n * T^shift with n read in the prime subfield."""
        c = self.kappa.from_int(n)
        if c == 0:
            return self.zero()
        return TruncatedSeries(self, shift, (c,), None)

    def from_code(self, code, shift=0):
        if code == 0:
            return self.zero()
        return TruncatedSeries(self, shift, (code,), None)

    def T(self, k=1):
        return TruncatedSeries(self, k, (1,), None)

    def monomial(self, code, k):
        return self.from_code(code, k)

    def from_codes(self, v, codes, prec=None):
        """Normalizing constructor; raises if the value cannot be certified."""
        return make_series(self, v, codes, prec, allow_lazy=False)

    def __eq__(self, other):
        return isinstance(other, SeriesField) and self.kappa == other.kappa

    def __hash__(self):
        return hash(("SeriesField", self.kappa))

    def __repr__(self):
        return f"SeriesField({self.kappa!r})"


_FQT_CACHE = {}


def FqT(p, r=1, default_prec=DEFAULT_PRECISION, modulus=None):
    """F_q((T)) with q = p^r."""
    kappa = GF(p, r, modulus)
    key = (kappa, default_prec)
    fld = _FQT_CACHE.get(key)
    if fld is None:
        fld = SeriesField(kappa, default_prec)
        _FQT_CACHE[key] = fld
    return fld


def make_series(field, v, codes, prec, allow_lazy=True):
    """Normalize raw data into a TruncatedSeries.

    Strips leading zeros; an all-zero inexact result becomes the lazy
    "zero mod T^prec" state when allowed, otherwise raises.
    """
    codes = list(codes)
    if prec is not None and v + len(codes) > prec:
        if prec <= v:
            codes = []
        else:
            del codes[prec - v:]
    i = 0
    while i < len(codes) and codes[i] == 0:
        i += 1
    v += i
    codes = codes[i:]
    if not codes:
        if prec is None:
            return TruncatedSeries(field, 0, (), None)
        if allow_lazy:
            return TruncatedSeries(field, prec, (), prec)
        raise InsufficientPrecision(
            f"value indistinguishable from zero at precision O(T^{prec})")
    if prec is None:
        while codes and codes[-1] == 0:
            codes.pop()
    return TruncatedSeries(field, v, tuple(codes), prec)


class TruncatedSeries:
    """Element of F_q((T)) known to absolute precision O(T^prec).

    Immutable.  `v` is the valuation; for the exact zero, v = 0 and codes are
    empty; for a lazy zero (see module docstring) v equals prec.
    """

    __slots__ = ("field", "v", "codes", "prec")

    def __init__(self, field, v, codes, prec):
        self.field = field
        self.v = v
        self.codes = codes
        self.prec = prec

    # -- state predicates -------------------------------------------------

    def is_exact_zero(self):
        return not self.codes and self.prec is None

    def is_lazy_zero(self):
        return not self.codes and self.prec is not None

    def is_exact(self):
        return self.prec is None

    def known_zero_at_precision(self):
        """True when every known coefficient vanishes."""
        return not self.codes

    def valuation(self):
        """Certified valuation; +inf only for the exact zero."""
        if self.codes:
            return self.v
        if self.prec is None:
            return None  # exact zero: valuation +infinity
        raise InsufficientPrecision(
            f"valuation undetermined: zero modulo O(T^{self.prec})")

    def relative_prec(self):
        if self.prec is None:
            return None
        return self.prec - self.v

    def coeff(self, k):
        """Coefficient code of T^k; raises if k is beyond known precision."""
        if self.prec is not None and k >= self.prec:
            raise InsufficientPrecision(f"coefficient of T^{k} beyond O(T^{self.prec})")
        if not self.codes:
            return 0
        if k < self.v or k >= self.v + len(self.codes):
            return 0
        return self.codes[k - self.v]

    # -- arithmetic --------------------------------------------------------

    def _check_field(self, other):
        if self.field != other.field:
            raise InputError("series from different fields")

    def __add__(self, other):
        self._check_field(other)
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        pa, pb = self.prec, other.prec
        if pa is None:
            prec = pb
        elif pb is None:
            prec = pa
        else:
            prec = min(pa, pb)
        va = self.v if self.codes else (self.prec if self.prec is not None else 0)
        vb = other.v if other.codes else (other.prec if other.prec is not None else 0)
        v = min(va, vb)
        hi_a = self.v + len(self.codes)
        hi_b = other.v + len(other.codes)
        hi = max(hi_a, hi_b)
        if prec is not None:
            hi = min(hi, prec)
        add = self.field.kappa.add
        out = [0] * max(0, hi - v)
        for i, c in enumerate(self.codes):
            k = self.v + i - v
            if 0 <= k < len(out):
                out[k] = c
        for i, c in enumerate(other.codes):
            k = other.v + i - v
            if 0 <= k < len(out):
                out[k] = add(out[k], c)
        return make_series(self.field, v, out, prec)

    def __neg__(self):
        neg = self.field.kappa.neg
        return TruncatedSeries(self.field, self.v,
                               tuple(neg(c) for c in self.codes), self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check_field(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return self.field.zero()
        # lazy zeros: product is zero to the best provable precision
        if not self.codes or not other.codes:
            pa = self.prec if not self.codes else None
            pb = other.prec if not other.codes else None
            if pa is not None and pb is not None:
                prec = pa + pb
            elif pa is not None:
                prec = pa + other.v
            else:
                prec = pb + self.v
            return TruncatedSeries(self.field, prec, (), prec)
        va, vb = self.v, other.v
        if self.prec is None and other.prec is None:
            prec = None
        elif self.prec is None:
            prec = other.prec + va
        elif other.prec is None:
            prec = self.prec + vb
        else:
            prec = min(self.prec + vb, other.prec + va)
        v = va + vb
        if prec is not None:
            length = prec - v
            if length <= 0:
                return TruncatedSeries(self.field, prec, (), prec)
        else:
            length = len(self.codes) + len(other.codes) - 1
        out = _convolve(self.field.kappa, self.codes, other.codes, length)
        return make_series(self.field, v, out, prec)

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        acc = self.field.one()
        base = self
        while e:
            if e & 1:
                acc = acc * base
            e >>= 1
            if e:
                base = base * base
        return acc

    def inv(self, prec=None):
        """Multiplicative inverse.

        For an exact operand the expansion usually does not terminate, so the
        relative precision falls back to `prec` or the field default.
        """
        if self.is_exact_zero():
            raise DivisionByZero("inverse of exact zero")
        if not self.codes:
            raise InsufficientPrecision(
                f"divisor is zero modulo O(T^{self.prec}): valuation undetermined")
        kappa = self.field.kappa
        rel = self.relative_prec()
        if rel is None:
            rel = prec if prec is not None else self.field.default_prec
        elif prec is not None:
            rel = min(rel, prec)
        # exact monomial: exact inverse
        if self.prec is None and len(self.codes) == 1:
            return TruncatedSeries(self.field, -self.v, (kappa.inv(self.codes[0]),), None)
        a = self.codes
        n = rel
        lead_inv = kappa.inv(a[0])
        out = [0] * n
        out[0] = lead_inv
        mul, add, neg = kappa.mul, kappa.add, kappa.neg
        for k in range(1, n):
            s = 0
            top = min(k, len(a) - 1)
            for j in range(1, top + 1):
                c = a[j]
                if c:
                    s = add(s, mul(c, out[k - j]))
            out[k] = neg(mul(lead_inv, s))
        return make_series(self.field, -self.v, out, -self.v + rel)

    def __truediv__(self, other):
        return self * other.inv()

    def div(self, other, prec=None):
        return self * other.inv(prec=prec)

    def shift(self, k):
        """Multiply by T^k."""
        if not self.codes and self.prec is None:
            return self
        prec = None if self.prec is None else self.prec + k
        return TruncatedSeries(self.field, self.v + k, self.codes, prec)

    def truncate(self, prec):
        """Weaken to absolute precision O(T^prec); exact zero stays exact."""
        if self.is_exact_zero():
            return self
        if self.prec is not None and self.prec <= prec:
            return self
        return make_series(self.field, self.v if self.codes else prec,
                           self.codes, prec)

    def residue(self):
        """Coefficient code of T^0 for an integral element (the image in kappa)."""
        if self.codes and self.v < 0:
            raise InputError("residue of a non-integral series")
        return self.coeff(0)

    def map_coeffs(self, fn, new_field=None):
        """Apply a code map coefficientwise (e.g. a residue-field embedding)."""
        field = new_field if new_field is not None else self.field
        return make_series(field, self.v, [fn(c) for c in self.codes], self.prec)

    # -- comparisons & hashing ----------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries)
                and self.field == other.field
                and self.v == other.v
                and self.codes == other.codes
                and self.prec == other.prec)

    def __hash__(self):
        return hash((self.v, self.codes, self.prec))

    def same_value(self, other, prec=None):
        """Equality of the underlying value to the joint known precision."""
        d = self - other
        if d.is_exact_zero():
            return True
        if d.known_zero_at_precision():
            return prec is None or d.prec >= prec
        return False

    def __repr__(self):
        return f"<{format_series(self)}>"


def _convolve(kappa, a, b, length):
    """First `length` coefficients of the product of code tuples a, b."""
    if length <= 0:
        return []
    mul, add = kappa.mul, kappa.add
    out = [0] * min(length, len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai and i < length:
            top = min(len(b), length - i)
            for j in range(top):
                bj = b[j]
                if bj:
                    out[i + j] = add(out[i + j], mul(ai, bj))
    if len(out) < length:
        out.extend([0] * (length - len(out)))
    return out


# -- text syntax ------------------------------------------------------------
#
# Terms are `c`, `c*T^k`, `T^k`, `T`, joined by ` + `; c is an integer residue
# for prime fields and a bracketed coordinate vector `[c0,c1,...]` otherwise.
# An inexact value ends with ` + O(T^M)`.  The printer emits ascending powers
# and the parser round-trips its output bit-exactly.

def format_series(s):
    if s.is_exact_zero():
        return "0"
    if s.is_lazy_zero():
        return f"O(T^{s.prec})"
    kappa = s.field.kappa
    terms = []
    for i, c in enumerate(s.codes):
        if c == 0:
            continue
        k = s.v + i
        if kappa.r == 1:
            cs = str(c)
            plain_one = (c == 1)
        else:
            cs = "[" + ",".join(str(d) for d in kappa.coords(c)) + "]"
            plain_one = (c == 1)
        if k == 0:
            terms.append(cs)
        else:
            tpow = "T" if k == 1 else f"T^{k}"
            terms.append(tpow if plain_one else f"{cs}*{tpow}")
    if not terms:
        terms.append("0")  # unreachable for normalized values
    out = " + ".join(terms)
    if s.prec is not None:
        out += f" + O(T^{s.prec})"
    return out


def parse_series(field, text):
    """Parse the series syntax; inverse of `format_series` on its output."""
    text = text.strip()
    if not text:
        raise InputError("empty series literal")
    kappa = field.kappa
    # split into signed terms at top-level binary +/-
    tokens = []
    depth = 0
    cur = ""
    prev_nonspace = ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if (depth == 0 and ch in "+-"
                and prev_nonspace not in ("", "+", "-", "*", "^")):
            tokens.append(cur)
            cur = "-" if ch == "-" else ""
            prev_nonspace = ch
            continue
        cur += ch
        if not ch.isspace():
            prev_nonspace = ch
    tokens.append(cur)

    coeffs = {}
    prec = None
    for raw in tokens:
        term = raw.strip()
        if not term:
            continue
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:].strip()
        if not term:
            raise InputError(f"dangling sign in series literal: {text!r}")
        if term.startswith("O(") or term.startswith("O ("):
            inner = term[term.index("(") + 1:term.rindex(")")].strip()
            k = _parse_tpow(inner)
            prec = k if prec is None else min(prec, k)
            continue
        code, k = _parse_term(kappa, term)
        if sign < 0:
            code = kappa.neg(code)
        if code:
            coeffs[k] = kappa.add(coeffs.get(k, 0), code)
    if not coeffs:
        if prec is not None:
            raise InsufficientPrecision(
                f"value indistinguishable from zero at precision O(T^{prec})")
        return field.zero()
    v = min(coeffs)
    hi = max(coeffs) + 1
    if prec is not None and v >= prec:
        raise InsufficientPrecision(
            f"value indistinguishable from zero at precision O(T^{prec})")
    codes = [coeffs.get(k, 0) for k in range(v, hi)]
    return make_series(field, v, codes, prec, allow_lazy=False)


def _parse_tpow(text):
    text = text.strip()
    if text == "T":
        return 1
    if text.startswith("T^"):
        return int(text[2:])
    raise InputError(f"bad T-power: {text!r}")


def _parse_coeff(kappa, text):
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise InputError(f"unterminated coefficient vector: {text!r}")
        parts = [t.strip() for t in text[1:-1].split(",")]
        return kappa.from_coords(tuple(int(t) % kappa.p for t in parts))
    return kappa.from_int(int(text))


def _parse_term(kappa, term):
    if "*" in term:
        cpart, tpart = term.split("*", 1)
        return _parse_coeff(kappa, cpart), _parse_tpow(tpart)
    if term == "T" or term.startswith("T^"):
        return 1, _parse_tpow(term)
    return _parse_coeff(kappa, term), 0


def series_arith(a, b, op):
    """Binary/unary arithmetic dispatch used by the CLI: add, mul, div, inv."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        if b is not None and b.is_exact_zero():
            raise DivisionByZero("division by exact zero")
        return a / b
    if op == "inv":
        if a.is_exact_zero():
            raise DivisionByZero("inverse of exact zero")
        return a.inv()
    raise InputError(f"unknown series operation {op!r}")

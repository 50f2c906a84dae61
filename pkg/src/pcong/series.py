"""Truncated q-expansions over F_ell in the fractional q^(n/24) grading.

Every series is supported on a single residue class n = offset (mod 24),
where n is the exponent of q^(n/24).  Integral-weight expansions use
offset 0 with q^m stored at n = 24m.  Internally coefficients live in a
dense numpy array indexed by j with n = offset + 24*j, which keeps the
hot convolutions dense while not wasting 24x the memory on off-class
zeros.

The `prec` attribute is an exclusive bound: coefficients are known
exactly for every exponent n < prec (off-class exponents are exact
zeros).  All operations propagate the largest window they can certify.
"""

from __future__ import annotations

import numpy as np
from scipy import fft as _fft

from .errors import (
    DivisionError,
    ModulusMismatch,
    OffsetError,
    PcongError,
    PrecisionError,
    PreconditionError,
)

__all__ = [
    "FpSeries",
    "series_mul",
    "series_div",
    "eta_power",
    "u_operator",
    "v_operator",
    "theta_operator",
    "pr_series",
    "pr_table",
    "eta_multiplier",
    "kronecker",
]

# np.convolve is cheaper than FFT below roughly this many multiply-adds
_DIRECT_CONV_LIMIT = 1 << 20


def _jlen(offset: int, prec: int) -> int:
    """Number of stored slots for exponents offset + 24j < prec."""
    return max(0, (prec - offset + 23) // 24)


def _conv_mod(a: np.ndarray, b: np.ndarray, ell: int, out_len: int) -> np.ndarray:
    """Convolution of int64 arrays reduced mod ell, truncated to out_len."""
    a = a[:out_len]
    b = b[:out_len]
    if len(a) == 0 or len(b) == 0 or out_len == 0:
        return np.zeros(out_len, dtype=np.int64)
    if len(a) * len(b) <= _DIRECT_CONV_LIMIT:
        c = np.convolve(a, b)[:out_len]
    else:
        n = len(a) + len(b) - 1
        # float64 FFT is exact here: products are bounded by
        # min(len) * (ell-1)^2 << 2^52 for every modulus this engine meets
        if min(len(a), len(b)) * (ell - 1) ** 2 >= (1 << 52):
            raise PcongError("convolution too large for exact float64 FFT")
        size = _fft.next_fast_len(n, real=True)
        fa = _fft.rfft(a.astype(np.float64), size)
        fb = _fft.rfft(b.astype(np.float64), size)
        c = np.rint(_fft.irfft(fa * fb, size)[:min(n, out_len)]).astype(np.int64)
    c %= ell
    if len(c) < out_len:
        c = np.pad(c, (0, out_len - len(c)))
    return c


def _inv_unit(u: np.ndarray, ell: int, length: int) -> np.ndarray:
    """Newton inverse of a unit power series in the plain j-grading."""
    if length <= 0:
        return np.zeros(0, dtype=np.int64)
    u0 = int(u[0]) % ell
    if u0 == 0:
        raise DivisionError("leading coefficient is not invertible")
    b = np.array([pow(u0, -1, ell)], dtype=np.int64)
    m = 1
    while m < length:
        m = min(2 * m, length)
        w = _conv_mod(u[:m], b, ell, m)
        w = (-w) % ell
        w[0] = (w[0] + 2) % ell
        b = _conv_mod(b, w, ell, m)
    return b


class FpSeries:
    """Immutable truncated series over F_ell supported on one class mod 24."""

    __slots__ = ("ell", "offset", "prec", "data")

    def __init__(self, ell: int, offset: int, prec: int, data) -> None:
        if ell < 5 or ell % 2 == 0:
            raise PreconditionError(f"modulus must be an odd prime >= 5, got {ell}")
        if not 0 <= offset < 24:
            raise OffsetError(f"offset must lie in [0, 24), got {offset}")
        if prec < 0:
            raise PrecisionError(f"precision must be nonnegative, got {prec}")
        arr = np.asarray(data, dtype=np.int64) % ell
        want = _jlen(offset, prec)
        if len(arr) < want:
            arr = np.pad(arr, (0, want - len(arr)))
        elif len(arr) > want:
            arr = arr[:want]
        arr.flags.writeable = False
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FpSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ell: int, offset: int = 0, prec: int = 1) -> "FpSeries":
        return cls(ell, offset, prec, np.zeros(0, dtype=np.int64))

    @classmethod
    def one(cls, ell: int, prec: int = 1) -> "FpSeries":
        return cls(ell, 0, prec, np.array([1], dtype=np.int64))

    @classmethod
    def from_integral(cls, ell: int, coeffs, prec: int | None = None) -> "FpSeries":
        """Integral-grading series: coeffs[m] is the coefficient of q^m."""
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if prec is None:
            prec = 24 * (len(coeffs) - 1) + 1 if len(coeffs) else 0
        return cls(ell, 0, prec, coeffs)

    @classmethod
    def from_terms(cls, ell: int, offset: int, prec: int, terms) -> "FpSeries":
        """Series from {n: coefficient} with every n = offset (mod 24)."""
        data = np.zeros(_jlen(offset, prec), dtype=np.int64)
        for n, c in dict(terms).items():
            if n % 24 != offset:
                raise OffsetError(f"exponent {n} is not in class {offset} mod 24")
            if not 0 <= n < prec:
                raise PrecisionError(f"exponent {n} outside [0, {prec})")
            data[(n - offset) // 24] = c
        return cls(ell, offset, prec, data)

    # -- coefficient access ------------------------------------------------

    def coeff(self, n: int) -> int:
        """Coefficient at exponent n (of q^(n/24)); exact zeros off-class."""
        if n >= self.prec:
            raise PrecisionError(f"exponent {n} is beyond precision {self.prec}")
        if n < 0 or n % 24 != self.offset:
            return 0
        return int(self.data[(n - self.offset) // 24])

    def dense(self, bound: int | None = None) -> np.ndarray:
        """Coefficients indexed by n for n < bound (default: full window)."""
        if bound is None:
            bound = self.prec
        if bound > self.prec:
            raise PrecisionError(f"requested {bound} coefficients, know {self.prec}")
        out = np.zeros(bound, dtype=np.int64)
        j = _jlen(self.offset, bound)
        out[self.offset:self.offset + 24 * j:24] = self.data[:j]
        return out

    def val(self) -> int | None:
        """Leading exponent, or None for a series zero to its precision."""
        nz = np.nonzero(self.data)[0]
        if len(nz) == 0:
            return None
        return self.offset + 24 * int(nz[0])

    def is_zero(self, bound: int | None = None) -> bool:
        if bound is None:
            bound = self.prec
        if bound > self.prec:
            raise PrecisionError(f"zero test to {bound} exceeds precision {self.prec}")
        return not self.data[:_jlen(self.offset, bound)].any()

    def equal_upto(self, other: "FpSeries", bound: int) -> bool:
        """Coefficientwise agreement for every exponent n < bound."""
        if self.ell != other.ell:
            raise ModulusMismatch(f"moduli differ: {self.ell} vs {other.ell}")
        if bound > min(self.prec, other.prec):
            raise PrecisionError("comparison bound exceeds a precision window")
        if self.offset == other.offset:
            j = _jlen(self.offset, bound)
            return bool(np.array_equal(self.data[:j], other.data[:j]))
        return bool(np.array_equal(self.dense(bound), other.dense(bound)))

    # -- structural helpers --------------------------------------------------

    def truncate(self, prec: int) -> "FpSeries":
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {prec}")
        return FpSeries(self.ell, self.offset, prec, self.data)

    def scale(self, c: int) -> "FpSeries":
        return FpSeries(self.ell, self.offset, self.prec, (self.data * (c % self.ell)))

    def __neg__(self) -> "FpSeries":
        return self.scale(-1)

    def _check_binop(self, other: "FpSeries") -> None:
        if not isinstance(other, FpSeries):
            raise TypeError(f"expected FpSeries, got {type(other).__name__}")
        if self.ell != other.ell:
            raise ModulusMismatch(f"moduli differ: {self.ell} vs {other.ell}")

    def __add__(self, other: "FpSeries") -> "FpSeries":
        self._check_binop(other)
        if self.offset != other.offset:
            raise OffsetError(
                f"cannot add classes {self.offset} and {other.offset} mod 24")
        prec = min(self.prec, other.prec)
        j = _jlen(self.offset, prec)
        return FpSeries(self.ell, self.offset, prec,
                        self.data[:j] + other.data[:j])

    def __sub__(self, other: "FpSeries") -> "FpSeries":
        return self.__add__(-other)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "FpSeries":
        if e < 0:
            raise PreconditionError("negative series powers are not defined")
        result = FpSeries.one(self.ell, self.prec + 24 * e)  # trimmed by muls
        base = self
        while e:
            if e & 1:
                result = series_mul(result, base)
            e >>= 1
            if e:
                base = series_mul(base, base)
        return result

    def __repr__(self) -> str:
        nz = np.nonzero(self.data)[0][:4]
        terms = ", ".join(
            f"{int(self.data[j])}*q^({self.offset + 24 * int(j)}/24)" for j in nz)
        if not terms:
            terms = "0"
        return (f"FpSeries(ell={self.ell}, offset={self.offset}, "
                f"prec={self.prec}: {terms}, ...)")


def _effective_val(f: FpSeries) -> int:
    """Leading exponent, with prec as the conservative bound for zeros."""
    v = f.val()
    return f.prec if v is None else v


def series_mul(a: FpSeries, b: FpSeries) -> FpSeries:
    """Product; offsets add mod 24, precision is the certified window."""
    a._check_binop(b)
    raw = a.offset + b.offset
    offset = raw % 24
    carry = raw // 24
    prec = min(a.prec + _effective_val(b), b.prec + _effective_val(a))
    out_len = _jlen(offset, prec)
    conv = _conv_mod(a.data, b.data, a.ell, max(out_len - carry, 0))
    if carry:
        conv = np.concatenate([np.zeros(carry, dtype=np.int64), conv])
    return FpSeries(a.ell, offset, prec, conv)


def series_div(a: FpSeries, b: FpSeries) -> FpSeries:
    """Quotient c with a = b*c, for b with invertible leading coefficient."""
    a._check_binop(b)
    bv = b.val()
    if bv is None:
        raise DivisionError("division by a series that is zero to its precision")
    av = a.val()
    if av is not None and av < bv:
        raise DivisionError(
            f"quotient would have a pole: leading exponents {av} < {bv}")
    offset = (a.offset - b.offset) % 24
    vb_j = (bv - b.offset) // 24
    unit = b.data[vb_j:]
    prec = min(a.prec, (b.prec - bv) + _effective_val(a)) - bv
    prec = max(prec, 0)
    out_len = _jlen(offset, prec)
    # base <= 0 aligns the plain-convolution index with the output j-grid
    base = (a.offset - b.offset - 24 * vb_j - offset) // 24
    need = out_len - base
    inv = _inv_unit(unit, a.ell, min(need, len(unit) + need))
    p = _conv_mod(a.data, inv, a.ell, need)
    return FpSeries(a.ell, offset, prec, p[-base:] if base else p)


# -- eta powers and the pentagonal factor ----------------------------------


def _pentagonal(length: int) -> np.ndarray:
    """Euler factor prod(1-q^n) as a dense j-array (pentagonal numbers)."""
    e = np.zeros(length, dtype=np.int64)
    if length > 0:
        e[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= length and g2 >= length:
            break
        s = -1 if k % 2 else 1
        if g1 < length:
            e[g1] = s
        if g2 < length:
            e[g2] = s
        k += 1
    return e


def _euler_power_small(e: int, ell: int, length: int) -> np.ndarray:
    """prod(1-q^n)^e mod ell by binary powering, for small e >= 0."""
    result = np.zeros(length, dtype=np.int64)
    if length > 0:
        result[0] = 1
    base = _pentagonal(length) % ell
    while e:
        if e & 1:
            result = _conv_mod(result, base, ell, length)
        e >>= 1
        if e:
            base = _conv_mod(base, base, ell, length)
    return result


def _dilate(arr: np.ndarray, m: int, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=np.int64)
    take = min(len(arr), (length + m - 1) // m)
    out[:take * m:m] = arr[:take]
    return out


def _euler_power(e: int, ell: int, length: int) -> np.ndarray:
    """prod(1-q^n)^e mod ell via the base-ell Frobenius decomposition.

    Writing e = sum d_i ell^i, each factor prod(1-q^n)^(d_i ell^i) is the
    ell^i-fold dilation of the small power, since ell-th powers dilate
    exponents coefficientwise in characteristic ell.
    """
    if length <= 0:
        return np.zeros(0, dtype=np.int64)
    pieces = []
    scale = 1
    while e:
        d = e % ell
        if d:
            small = _euler_power_small(d, ell, (length + scale - 1) // scale)
            pieces.append(_dilate(small, scale, length) if scale > 1 else small)
        e //= ell
        scale *= ell
    if not pieces:
        out = np.zeros(length, dtype=np.int64)
        out[0] = 1
        return out
    result = pieces[0]
    for p in pieces[1:]:
        result = _conv_mod(result, p, ell, length)
    return result


def eta_power(e: int, ell: int, prec: int) -> FpSeries:
    """q-expansion of eta^e mod ell to exponent bound prec (n/24 grading)."""
    if e < 1:
        raise PreconditionError(f"eta exponent must be positive, got {e}")
    offset = e % 24
    length = _jlen(offset, prec)
    # eta^e = q^(e/24) * prod(1-q^n)^e, so slot j holds exponent e + 24j
    # only when e < 24; larger e shifts the Euler power down the j-grid
    shift = (e - offset) // 24
    euler = _euler_power(e, ell, max(length - shift, 0))
    data = np.concatenate([np.zeros(shift, dtype=np.int64), euler])
    return FpSeries(ell, offset, prec, data)


# -- U, V, Theta ------------------------------------------------------------


def u_operator(f: FpSeries, m: int) -> FpSeries:
    """Coefficient extraction: picks a(m*n) into exponent n."""
    if m < 1:
        raise PreconditionError(f"U_m needs m >= 1, got {m}")
    if m == 1:
        return f
    prec = -(-f.prec // m)
    g = np.gcd(m, 24)
    if g == 1:
        offset = (pow(m, -1, 24) * f.offset) % 24
        base = (m * offset - f.offset) // 24
        out_len = _jlen(offset, prec)
        idx = base + m * np.arange(out_len)
        out = np.where(idx < len(f.data), f.data[np.minimum(idx, len(f.data) - 1)], 0)
        return FpSeries(f.ell, offset, prec, out)
    # class not invertible mod 24: gather by exponent and read the class off
    # the surviving support
    dense = f.dense(min(f.prec, m * prec))
    picked = dense[::m][:prec]
    support = np.nonzero(picked)[0]
    classes = set(int(n) % 24 for n in support)
    if len(classes) > 1:
        raise OffsetError(f"U_{m} image spans classes {sorted(classes)} mod 24")
    if classes:
        offset = classes.pop()
    else:
        offset = next((s for s in range(24) if (m * s - f.offset) % g == 0
                       and (m * s) % 24 == f.offset % 24), 0)
    data = picked[offset::24]
    return FpSeries(f.ell, offset, prec, data)


def v_operator(f: FpSeries, m: int) -> FpSeries:
    """Exponent dilation: sends q^(n/24) to q^(mn/24)."""
    if m < 1:
        raise PreconditionError(f"V_m needs m >= 1, got {m}")
    if m == 1:
        return f
    offset = (m * f.offset) % 24
    prec = m * f.prec
    base = (m * f.offset - offset) // 24
    out = np.zeros(_jlen(offset, prec), dtype=np.int64)
    idx = base + m * np.arange(len(f.data))
    keep = idx < len(out)
    out[idx[keep]] = f.data[keep]
    return FpSeries(f.ell, offset, prec, out)


def theta_operator(f: FpSeries) -> FpSeries:
    """q d/dq on integral expansions: multiplies a(m) by m at n = 24m."""
    if f.offset != 0:
        raise OffsetError(
            f"theta acts on integral expansions; got class {f.offset} mod 24")
    mult = np.arange(len(f.data), dtype=np.int64) % f.ell
    return FpSeries(f.ell, 0, f.prec, f.data * mult)


# -- colored partition tables ------------------------------------------------


def pr_table(r: int, ell: int, n_max: int) -> np.ndarray:
    """p_r(n) mod ell for 0 <= n <= n_max, as a dense int64 array.

    The generating function prod(1-q^n)^(-r) is evaluated by one Newton
    inversion of the sparse pentagonal factor followed by binary powering,
    so the cost is O(n log n) rather than the quadratic direct recurrence.
    """
    if r < 1:
        raise PreconditionError(f"color count must be positive, got {r}")
    if n_max < 0:
        raise PreconditionError("n_max must be nonnegative")
    length = n_max + 1
    inv = _inv_unit(_pentagonal(length) % ell, ell, length)
    # p_r = inv^r; peel base-ell digits so huge r costs log, not linear
    result = None
    scale = 1
    e = r
    while e:
        d = e % ell
        if d:
            need = (length + scale - 1) // scale
            piece = np.zeros(need, dtype=np.int64)
            piece[0] = 1
            b = inv[:need]
            while d:
                if d & 1:
                    piece = _conv_mod(piece, b, ell, need)
                d >>= 1
                if d:
                    b = _conv_mod(b, b, ell, need)
            piece = _dilate(piece, scale, length) if scale > 1 else piece
            result = piece if result is None else _conv_mod(result, piece, ell, length)
        e //= ell
        scale *= ell
    return result


def pr_series(r: int, ell: int, n_bound: int) -> FpSeries:
    """The r-colored partition generating function mod ell, p_r(n) for n < n_bound."""
    table = pr_table(r, ell, n_bound - 1)
    return FpSeries.from_integral(ell, table)


# -- Kronecker symbol and the eta multiplier ---------------------------------


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), extended to all integer arguments."""
    a = int(a)
    n = int(n)
    if n == 0:
        return 1 if a in (1, -1) else 0
    res = 1
    if n < 0:
        n = -n
        if a < 0:
            res = -1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            res = -res
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                res = -res
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            res = -res
        a %= n
    return res if n == 1 else 0


def eta_multiplier(gamma) -> int:
    """Exponent t in Z/24 with nu_eta(gamma) = e(t/24), gamma in SL2(Z).

    The two-case closed formula applies for c > 0; c <= 0 reduces to it
    through nu_eta(-gamma) = i * nu_eta(gamma) (principal branch), which
    shifts t by -6.  A Jacobi-symbol value of -1 is absorbed as a shift
    by 12.
    """
    m = np.asarray(gamma, dtype=object).reshape(2, 2)
    a, b, c, d = int(m[0, 0]), int(m[0, 1]), int(m[1, 0]), int(m[1, 1])
    if a * d - b * c != 1:
        raise PreconditionError(f"matrix {[[a, b], [c, d]]} is not in SL2(Z)")
    if c == 0:
        if d > 0:
            return b % 24
        return (-b - 6) % 24
    if c < 0:
        return (eta_multiplier([[-a, -b], [-c, -d]]) - 6) % 24
    if c % 2:
        jac = kronecker(d, c)
        x = (a + d) * c - b * d * (c * c - 1) - 3 * c
    else:
        jac = kronecker(c, d)
        x = (a + d) * c - b * d * (c * c - 1) + 3 * d - 3 - 3 * c * d
    return (x + (12 if jac == -1 else 0)) % 24

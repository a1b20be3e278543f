"""Kronecker substitution for large Laurent polynomial products and quotients.

A polynomial with exponents in a box ``lo <= e < lo + shape`` is packed into a
single integer by substituting ``x_i -> 256**(w * stride_i)`` where ``w`` is a
slot width in bytes and ``stride`` is the C-order stride of ``shape``.  This is
a ring homomorphism, so products and exact quotients of packed integers are
packed products and quotients.  Big-integer work is done by GMP through gmpy2.

Everything here is an accelerator.  Functions return ``None`` when the box is
too large to be worth packing, and :func:`divide` only returns a quotient
once ``q * den == num`` is certain.
"""
from __future__ import annotations

from functools import lru_cache
from math import prod

import gmpy2
import numpy as np
from gmpy2 import mpz

from .errors import NonExactDivision

# packed operands above this many bytes are left to the dictionary code
MAX_BYTES = 1 << 27

_TOP = np.uint64(1 << 63)


def _width(bound: int) -> int:
    """Slot width in bytes holding signed values of absolute value < bound."""
    return int(bound).bit_length() // 8 + 1


def _box(terms: dict):
    """Exponent array, its per-variable minimum and maximum, and the gcd of
    the exponent offsets in each variable (1 for a constant variable)."""
    e = np.array(list(terms), dtype=np.int64)
    if e.ndim == 1:
        e = e.reshape(len(terms), -1)
    lo = e.min(axis=0)
    g = np.gcd.reduce(e - lo, axis=0)
    g[g == 0] = 1
    return e, lo, e.max(axis=0), g


def _strides(shape) -> np.ndarray:
    out = np.ones(len(shape), dtype=np.int64)
    for i in range(len(shape) - 2, -1, -1):
        out[i] = out[i + 1] * int(shape[i + 1])
    return out


def _fits(shape, width: int) -> bool:
    return prod(int(s) for s in shape) * width <= MAX_BYTES


def _pack_unsigned(slots: np.ndarray, values: list, nslots: int, width: int) -> mpz:
    if width == 8:
        buf = np.zeros(nslots, dtype=np.uint64)
        buf[slots] = np.array(values, dtype=np.uint64)
        return gmpy2.from_binary(b"\x01\x01" + buf.tobytes())
    buf = bytearray(2 + nslots * width)
    buf[0:2] = b"\x01\x01"
    for k, v in zip(slots.tolist(), values):
        start = 2 + k * width
        buf[start:start + width] = v.to_bytes(width, "little")
    return gmpy2.from_binary(bytes(buf))


def pack(exps: np.ndarray, coeffs: list, lo, strides, nslots: int, width: int,
         step=1) -> mpz:
    slots = ((exps - lo) // step) @ strides
    pos = [i for i, c in enumerate(coeffs) if c > 0]
    neg = [i for i, c in enumerate(coeffs) if c < 0]
    out = mpz(0)
    if pos:
        out += _pack_unsigned(slots[pos], [coeffs[i] for i in pos], nslots, width)
    if neg:
        out -= _pack_unsigned(slots[neg], [-coeffs[i] for i in neg], nslots, width)
    return out


@lru_cache(maxsize=16)
def _offset(nslots: int, width: int) -> mpz:
    # every slot holds 2**(8 * width - 1)
    return gmpy2.from_binary(b"\x01\x01" + (b"\x00" * (width - 1) + b"\x80") * nslots)


def unpack(value: mpz, lo, shape, width: int, step=1) -> dict | None:
    """Inverse of :func:`pack`; ``None`` if ``value`` is out of range.

    Terms come out in descending lexicographic order of exponents.
    """
    nslots = prod(int(s) for s in shape)
    nbytes = nslots * width
    v = value + _offset(nslots, width)
    if v < 0 or v.bit_length() > nbytes * 8:
        return None
    raw = gmpy2.to_binary(v)[2:]
    raw = raw + b"\x00" * (nbytes - len(raw))
    if width == 8:
        top = (np.frombuffer(raw, dtype=np.uint64) ^ _TOP).view(np.int64)
        idx = np.flatnonzero(top)[::-1]
        coeffs = top[idx].tolist()
    else:
        arr = np.frombuffer(raw, dtype=np.uint8).reshape(nslots, width)
        nz = (arr[:, width - 1] != 0x80) | arr[:, :width - 1].any(axis=1)
        idx = np.flatnonzero(nz)[::-1]
        half = 1 << (8 * width - 1)
        frm = int.from_bytes
        coeffs = [frm(raw[k * width:(k + 1) * width], "little") - half for k in idx.tolist()]
    exps = np.stack(np.unravel_index(idx, tuple(int(s) for s in shape)), axis=1) * step + lo
    return dict(zip(map(tuple, exps.tolist()), coeffs))


def _maxabs(terms: dict) -> int:
    vals = terms.values()
    return max(max(vals), -min(vals))


def multiply(a: dict, b: dict) -> dict | None:
    """Product of two nonzero term maps, or ``None`` if packing is not worthwhile."""
    ea, loa, hia, ga = _box(a)
    eb, lob, hib, gb = _box(b)
    step = np.gcd(ga, gb)
    shape = ((hia - loa) + (hib - lob)) // step + 1
    width = _width(_maxabs(a) * _maxabs(b) * min(len(a), len(b)))
    if not _fits(shape, width):
        return None
    st = _strides(shape)
    n = prod(int(s) for s in shape)
    pa = pack(ea, list(a.values()), loa, st, n, width, step)
    pb = pack(eb, list(b.values()), lob, st, n, width, step)
    return unpack(pa * pb, loa + lob, shape, width, step)


def power(a: dict, k: int) -> dict | None:
    ea, lo, hi, step = _box(a)
    shape = k * ((hi - lo) // step) + 1
    width = _width(_maxabs(a) ** k * len(a) ** (k - 1))
    if not _fits(shape, width):
        return None
    st = _strides(shape)
    n = prod(int(s) for s in shape)
    packed = pack(ea, list(a.values()), lo, st, n, width, step)
    return unpack(packed ** k, k * lo, shape, width, step)


def divide(num: dict, den: dict, max_width: int = 1 << 13) -> dict | None:
    """Exact quotient ``num / den`` of Laurent term maps.

    Raises :class:`NonExactDivision` when the packed remainder is nonzero or
    the exponent ranges are incompatible (both are proofs of non-divisibility
    because packing is a ring homomorphism).  Returns ``None`` when undecided.

    A decoded candidate ``q`` satisfies ``pack(q) * pack(den) == pack(num)``
    by construction.  It is accepted only when ``q * den`` provably fits the
    packing box and slot width, because packing is injective there and so
    ``q * den == num`` follows.
    """
    en, lon, hin, gn = _box(num)
    ed, lod, hid, gd = _box(den)
    span = (hin - lon) - (hid - lod)
    if (span < 0).any():
        raise NonExactDivision("exponent range of the divisor exceeds that of the dividend")
    # the quotient lives on the common sublattice of dividend and divisor
    step = np.gcd(gn, gd)
    shape = (hin - lon) // step + 1
    dmax = _maxabs(den)
    width = _width(max(_maxabs(num), dmax) << 32)
    while width <= max_width:
        if not _fits(shape, width):
            return None
        st = _strides(shape)
        n = prod(int(s) for s in shape)
        pn = pack(en, list(num.values()), lon, st, n, width, step)
        pd = pack(ed, list(den.values()), lod, st, n, width, step)
        q, r = gmpy2.t_divmod(pn, pd)
        if r:
            raise NonExactDivision("packed remainder is nonzero")
        qlo = lon - lod
        cand = unpack(q, qlo, shape, width, step)
        if cand:
            eq = np.array(list(cand), dtype=np.int64).reshape(len(cand), -1)
            in_box = (eq.min(axis=0) >= qlo).all() and (eq.max(axis=0) <= qlo + span).all()
            bound = _maxabs(cand) * dmax * min(len(cand), len(den))
            if in_box and bound.bit_length() < 8 * width - 1:
                return cand
        width *= 2
    return None


def _product_box(factors):
    """Box data of a product of powers ``[(terms, k), ...]`` (empty = 1)."""
    m = None
    lo = hi = None
    step = None
    bound = 1
    lens = []
    packs = []
    for terms, k in factors:
        e, flo, fhi, g = _box(terms)
        packs.append((e, list(terms.values()), flo, k))
        lo = k * flo if lo is None else lo + k * flo
        hi = k * fhi if hi is None else hi + k * fhi
        step = g if step is None else np.gcd(step, g)
        bound *= _maxabs(terms) ** k
        lens += [len(terms)] * k
    if lens:
        lens.remove(max(lens))
        bound *= prod(lens)
    return lo, hi, step, bound, packs


def exchange(plus: list, minus: list, den: dict, nvars: int,
             max_width: int = 1 << 13) -> dict | None:
    """``(prod plus + prod minus) / den`` without expanding the numerator.

    ``plus`` and ``minus`` are lists of ``(terms, exponent)``.  The two
    products are formed and added in packed form; the division and its
    certificate are as in :func:`divide`.
    """
    zero = np.zeros(nvars, dtype=np.int64)
    sides = []
    for factors in (plus, minus):
        lo, hi, step, bound, packs = _product_box(factors)
        if lo is None:
            lo, hi, step = zero, zero, np.zeros(nvars, dtype=np.int64)
        sides.append((lo, hi, step, bound, packs))
    ed, lod, hid, gd = _box(den)
    lon = np.minimum(sides[0][0], sides[1][0])
    hin = np.maximum(sides[0][1], sides[1][1])
    span = (hin - lon) - (hid - lod)
    if (span < 0).any():
        raise NonExactDivision("exponent range of the divisor exceeds that of the dividend")
    step = np.gcd.reduce([sides[0][2], sides[1][2], gd, np.abs(sides[0][0] - sides[1][0])])
    step[step == 0] = 1
    shape = (hin - lon) // step + 1
    dmax = _maxabs(den)
    width = _width(max(sides[0][3] + sides[1][3], dmax) << 32)
    while width <= max_width:
        if not _fits(shape, width):
            return None
        st = _strides(shape)
        n = prod(int(s) for s in shape)
        pn = mpz(0)
        for lo, _, _, _, packs in sides:
            side = mpz(1)
            for e, coeffs, flo, k in packs:
                side *= pack(e, coeffs, flo, st, n, width, step) ** k
            shift = int(((lo - lon) // step) @ st)
            pn += side << (8 * width * shift)
        pd = pack(ed, list(den.values()), lod, st, n, width, step)
        q, r = gmpy2.t_divmod(pn, pd)
        if r:
            raise NonExactDivision("packed remainder is nonzero")
        qlo = lon - lod
        cand = unpack(q, qlo, shape, width, step)
        if cand:
            eq = np.array(list(cand), dtype=np.int64).reshape(len(cand), -1)
            in_box = (eq.min(axis=0) >= qlo).all() and (eq.max(axis=0) <= qlo + span).all()
            bound = _maxabs(cand) * dmax * min(len(cand), len(den))
            if in_box and bound.bit_length() < 8 * width - 1:
                return cand
        width *= 2
    return None

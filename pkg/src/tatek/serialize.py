"""JSON encodings of rings, scalars, series, Laurent polynomials and matrices.

Scalar payloads accepted on input:

* an int, or a decimal string such as ``"50"`` (``"1/5"`` over Z_p);
* ``{"digits": [d0, d1, ...], "shift": k}``: little-endian pi-adic digits of
  the unit part, the element being ``sum d_i pi^i * pi^(-k)``.

Matrix entries may also be Laurent payloads ``{"laurent": [{"exp": e, "coeff": c}, ...]}``.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .errors import InvalidInput
from .linalg import Mat
from .padic_core import AdicScalar, RingDescriptor, TateScalar
from .tate_series import LaurentElement, TateSeries


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def input_hash(*payloads) -> str:
    """SHA-256 over the canonical JSON of all inputs."""
    h = hashlib.sha256()
    for p in payloads:
        h.update(canonical_json(p).encode())
        h.update(b"\x00")
    return h.hexdigest()


def scalar_to_json(x):
    if isinstance(x, (AdicScalar, TateScalar)):
        return x.to_json()
    if isinstance(x, LaurentElement):
        return x.to_json()
    raise InvalidInput(f"cannot serialize {type(x).__name__}")


def scalar_from_json(ring: RingDescriptor, obj, integral: bool | None = None):
    """Parse a scalar payload; integral=None picks A0 for Z/p^k, A otherwise."""
    if integral is None:
        integral = not ring.is_tate
    if isinstance(obj, bool):
        raise InvalidInput("booleans are not scalars")
    if isinstance(obj, str):
        try:
            val = Fraction(obj.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"cannot parse scalar {obj!r}") from None
        if val.denominator == 1:
            obj = val.numerator
        else:
            if integral:
                raise InvalidInput("fractions are not elements of A0")
            return ring.tate(val)
    if isinstance(obj, int):
        return ring.scalar(obj) if integral else ring.tate(obj)
    if isinstance(obj, dict) and "digits" in obj:
        digits = obj["digits"]
        shift = int(obj.get("shift", 0))
        if not isinstance(digits, list) or not all(isinstance(d, int) for d in digits):
            raise InvalidInput("digits must be a list of ints")
        if len(digits) > ring.precision:
            raise InvalidInput(f"more than {ring.precision} digits")
        base = ring.scalar(digits) if digits else ring.zero()
        if "precision" in obj and digits:
            base = base.with_precision(int(obj["precision"]))
        if integral:
            if shift > 0:
                raise InvalidInput("negative pi-powers are not elements of A0")
            return base.times_pi(-shift)
        return ring.tate(base, shift)
    raise InvalidInput(f"cannot parse scalar payload {obj!r}")


def laurent_from_json(ring: RingDescriptor, obj, window: int = 8,
                      integral: bool = True) -> LaurentElement:
    if isinstance(obj, dict) and "laurent" in obj:
        terms = obj["laurent"]
        coeffs: dict = {}
        for t in terms:
            try:
                e = int(t["exp"])
            except (KeyError, TypeError, ValueError):
                raise InvalidInput("Laurent term needs an integer 'exp'") from None
            c = scalar_from_json(ring, t.get("coeff", 1), integral)
            coeffs[e] = coeffs[e] + c if e in coeffs else c
        return LaurentElement(ring, coeffs, window, integral)
    return LaurentElement(ring, {0: scalar_from_json(ring, obj, integral)}, window, integral)


def series_from_json(obj) -> TateSeries:
    try:
        ring = RingDescriptor.from_json(obj["ring"])
        j = int(obj.get("radius", 0))
        d = int(obj.get("degreeBound", 8))
        terms = obj["terms"]
        nvars = int(obj.get("nvars", len(terms[0]["index"]) if terms else 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed series file: {exc}") from None
    integral = not ring.is_tate
    coeffs: dict = {}
    for t in terms:
        idx = tuple(t["index"])
        coeffs[idx] = scalar_from_json(ring, t["coeff"], integral)
    return TateSeries(ring, nvars, coeffs, j, d, integral=integral)


def matrix_from_json(obj, ring: RingDescriptor | None = None, laurent: bool = False,
                     window: int = 8, integral: bool | None = None) -> Mat:
    """Parse ``{"n", "ring", "entries"}`` (entries row-major)."""
    if not isinstance(obj, dict):
        raise InvalidInput("matrix file must be a JSON object")
    try:
        n = int(obj["n"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed matrix file: {exc}") from None
    if "ring" in obj:
        ring = RingDescriptor.from_json(obj["ring"])
    if ring is None:
        raise InvalidInput("matrix needs a ring descriptor")
    if len(entries) == n and all(isinstance(r, list) for r in entries):
        flat = [x for r in entries for x in r]
    else:
        flat = entries
    if len(flat) != n * n:
        raise InvalidInput(f"expected {n * n} entries, got {len(flat)}")
    if laurent:
        parsed = [laurent_from_json(ring, x, window, True if integral is None else integral)
                  for x in flat]
    else:
        parsed = [scalar_from_json(ring, x, integral) for x in flat]
    return Mat([parsed[i * n:(i + 1) * n] for i in range(n)])


def matrix_to_json(m: Mat) -> dict:
    ring = m[0, 0].ring
    return {"n": m.nrows, "ring": ring.to_json(),
            "entries": [scalar_to_json(x) for x in m.entries()]}


__all__ = [
    "canonical_json", "input_hash", "scalar_to_json", "scalar_from_json",
    "laurent_from_json", "series_from_json", "matrix_from_json", "matrix_to_json",
]

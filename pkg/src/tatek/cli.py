"""``tatek`` command line: JSON in, JSON out.

Exit status: 0 success, 1 verification failure (or a computation that could
not be certified at the working precision), 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .bass import bass_r, laurent_unit_split
from .errors import InvalidInput, TatekError
from .kgroups import k0_an_pi0, k1cont_level, tame_symbol
from .matgroup import glrho_certificate
from .padic_core import RingDescriptor, TateScalar
from .serialize import (canonical_json, input_hash, laurent_from_json, matrix_from_json,
                        scalar_from_json)
from .suites import DEFAULT_SIZE, SUITES, run_suite
from .witt import (DEFAULT_LENGTH, WittVector, pi_ideal_membership, teichmuller_pi, witt_add,
                   witt_mul)

DEFAULT_PRECISION = 8
# ring used by ``witt`` when --ring is omitted (the witt suite ring)
DEFAULT_WITT_RING = "zmod19683"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input helpers


def _load_json(text: str):
    """Inline JSON, or the contents of a file when ``text`` names one."""
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            try:
                return json.load(fh)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{text}: invalid JSON ({exc})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"{text!r} is neither a file nor valid JSON") from None


_SHORT = re.compile(r"^(zp|qp|zmod|fq)(\d+)$")


def parse_ring(text: str | None, precision: int | None) -> RingDescriptor:
    """Ring from a descriptor file, inline JSON or a short name (zp5, qp5, zmod243, fq9)."""
    if text is None:
        raise UsageError("--ring is required")
    m = _SHORT.match(text.strip().lower())
    if m and not os.path.isfile(text):
        kind, num = m.group(1), int(m.group(2))
        prec = precision or DEFAULT_PRECISION
        if kind in ("zp", "qp"):
            return RingDescriptor.zp(num, prec)
        if kind == "fq":
            return RingDescriptor.fq_powerseries(num, prec)
        ring = RingDescriptor.zmod(num)
    else:
        ring = RingDescriptor.from_json(_load_json(text))
    if precision is not None:
        if ring.exact:
            raise UsageError("--precision does not apply to Z/m (its precision is the exponent of m)")
        ring = ring.with_precision(precision)
    return ring


def _scalar_arg(text: str):
    """Scalar payload from the command line: int, fraction string or JSON object."""
    t = text.strip()
    if t.startswith("{") or t.startswith("["):
        return _load_json(t)
    if re.fullmatch(r"[+-]?\d+", t):
        return int(t)
    return t


def _tate(ring: RingDescriptor, payload) -> TateScalar:
    if not ring.is_tate:
        raise InvalidInput("this command needs a Tate ring (zp or fq_powerseries)")
    return scalar_from_json(ring, payload, integral=False)


def _witt_arg(ring: RingDescriptor, text: str) -> WittVector:
    data = _load_json(text)
    if isinstance(data, dict):
        data = data.get("coefficients")
    if not isinstance(data, list) or not data:
        raise UsageError("a Witt vector is a non-empty JSON list of coefficients a_1..a_L")
    return WittVector(ring, tuple(scalar_from_json(ring, c, integral=True) for c in data))


# ---------------------------------------------------------------------------
# commands; each returns (payload, exit_status)


def cmd_norm(args):
    ring = parse_ring(args.ring, args.precision)
    payload = _scalar_arg(args.elem)
    x = scalar_from_json(ring, payload)
    out = x.val().to_json()
    return out, 0, {"ring": ring.to_json(), "elem": payload}


def cmd_glrho(args):
    obj = _load_json(args.matrix)
    ring = parse_ring(args.ring, args.precision) if args.ring else None
    m = matrix_from_json(obj, ring)
    cert = glrho_certificate(m, args.j, args.max_exponent)
    out = cert.to_json() if cert else {"certified": False, "j": args.j,
                                       "note": "not certified; this is no proof of non-membership"}
    return out, 0, {"matrix": obj, "j": args.j, "max_exponent": args.max_exponent,
                    "env_max_exponent": os.environ.get("TATEK_MAX_EXPONENT")}


def cmd_k1cont(args):
    ring = parse_ring(args.ring, args.precision)
    lvl = k1cont_level(ring, args.level)
    out = {**lvl.group.to_json(), "level": args.level}
    return out, 0, {"ring": ring.to_json(), "level": args.level}


def cmd_tame(args):
    ring = parse_ring(args.ring, args.precision)
    pa, pb = _scalar_arg(args.a), _scalar_arg(args.b)
    a, b = _tate(ring, pa), _tate(ring, pb)
    out = {"symbol": tame_symbol(a, b), "residue_field_order": ring.q,
           "v_a": a.valuation(), "v_b": b.valuation()}
    return out, 0, {"ring": ring.to_json(), "a": pa, "b": pb}


def cmd_witt(args):
    ring = parse_ring(args.ring or DEFAULT_WITT_RING, args.precision)
    op = args.op
    inputs = {"ring": ring.to_json(), "op": op}
    if op == "teichmuller-pi":
        out = teichmuller_pi(ring, args.L).to_json()
        inputs["L"] = args.L
    elif op in ("add", "mul"):
        if args.f is None or args.g is None:
            raise UsageError(f"witt {op} needs --f and --g")
        f, g = _witt_arg(ring, args.f), _witt_arg(ring, args.g)
        if f.length != g.length:
            raise UsageError("Witt vectors must have equal length")
        out = (witt_add(f, g) if op == "add" else witt_mul(f, g)).to_json()
        inputs.update(f=_load_json(args.f), g=_load_json(args.g))
    else:
        if args.f is None:
            raise UsageError("witt ideal-member needs --f")
        f = _witt_arg(ring, args.f)
        out = pi_ideal_membership(f, args.n).to_json()
        inputs.update(f=_load_json(args.f), n=args.n)
    return out, 0, inputs


def cmd_bass(args):
    obj = _load_json(args.matrix)
    ring = parse_ring(args.ring, args.precision) if args.ring else None
    m = matrix_from_json(obj, ring, laurent=True, window=args.window)
    out = bass_r(m).to_json()
    return out, 0, {"matrix": obj, "window": args.window}


def cmd_split(args):
    ring = parse_ring(args.ring, args.precision)
    obj = _load_json(args.x)
    x = laurent_from_json(ring, obj, args.window, True)
    res = laurent_unit_split(x, args.n, args.levels)
    out = {"f": res.f.to_json(), "g": res.g.to_json(), "level": res.level,
           "iterations": res.iterations,
           "check": {"congruent": (res.f * res.g - x).valuation() >= res.level,
                     "f_support": res.f.support(), "g_support": res.g.support()}}
    return out, 0, {"ring": ring.to_json(), "x": obj, "n": args.n, "levels": args.levels,
                    "window": args.window}


def cmd_k0an(args):
    ring = parse_ring(args.ring, args.precision)
    levels = {str(j): k0_an_pi0(ring, j).to_json() for j in range(args.j + 1)}
    out = {"levels": levels, "constant": len({canonical_json(v) for v in levels.values()}) == 1}
    return out, 0, {"ring": ring.to_json(), "j": args.j}


def cmd_verify(args):
    fixture = _load_json(args.fixture) if args.fixture else None
    if fixture is not None and args.suite not in ("bass", "all"):
        raise UsageError("--fixture applies to the bass suite")
    report = run_suite(args.suite, args.seed, args.size, fixture)
    return (report.to_json(timing=args.timing), 0 if report.ok else 1,
            {"suite": args.suite, "seed": args.seed, "size": args.size, "fixture": fixture})


# ---------------------------------------------------------------------------


def _common_flags(suppress: bool) -> argparse.ArgumentParser:
    # the subcommand copy suppresses defaults so flags given before the
    # subcommand are not overwritten
    def d(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default=d(None),
                        help="ring descriptor: JSON file, inline JSON or zp5/qp5/zmod243/fq9")
    common.add_argument("--seed", type=int, default=d(0))
    common.add_argument("--size", type=int, default=d(DEFAULT_SIZE))
    common.add_argument("--precision", type=int, default=d(None))
    common.add_argument("--out", default=d(None),
                        help="write the JSON result to this file instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags(suppress=True)
    p = argparse.ArgumentParser(prog="tatek", description=__doc__.splitlines()[0],
                                parents=[_common_flags(suppress=False)])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("norm", parents=[common], help="gauge-norm exponent of a scalar")
    s.add_argument("--elem", required=True)
    s.set_defaults(fn=cmd_norm)

    s = sub.add_parser("glrho-cert", parents=[common], help="unipotence certificate at radius j")
    s.add_argument("--matrix", required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--max-exponent", type=int, default=None)
    s.set_defaults(fn=cmd_glrho)

    s = sub.add_parser("k1cont", parents=[common], help="level n of continuous K1")
    s.add_argument("--level", type=int, required=True)
    s.set_defaults(fn=cmd_k1cont)

    s = sub.add_parser("tame-symbol", parents=[common], help="tame symbol of two scalars")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.set_defaults(fn=cmd_tame)

    s = sub.add_parser("witt", parents=[common], help="big Witt vector operations")
    s.add_argument("op", choices=["add", "mul", "teichmuller-pi", "ideal-member"])
    s.add_argument("--f")
    s.add_argument("--g")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--L", type=int, default=DEFAULT_LENGTH)
    s.set_defaults(fn=cmd_witt)

    s = sub.add_parser("bass-retract", parents=[common], help="retraction r of a Laurent matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--window", type=int, default=8)
    s.set_defaults(fn=cmd_bass)

    s = sub.add_parser("laurent-split", parents=[common], help="split x = f g")
    s.add_argument("--x", required=True)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--levels", type=int, default=4)
    s.add_argument("--window", type=int, default=8)
    s.set_defaults(fn=cmd_split)

    s = sub.add_parser("k0an-pi0", parents=[common], help="pi_0 of analytic K0 for j = 0..J")
    s.add_argument("--j", type=int, default=4)
    s.set_defaults(fn=cmd_k0an)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", help="|".join(list(SUITES) + ["all"]))
    s.add_argument("--fixture", help="extra bass fixture {matrix, expected_r}")
    s.add_argument("--timing", action="store_true", help="include wall time (not reproducible)")
    s.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.suite not in SUITES and args.suite != "all":
        print(f"tatek: unknown suite {args.suite!r}", file=sys.stderr)
        return 2
    if args.size < 0:
        print("tatek: --size must be >= 0", file=sys.stderr)
        return 2
    try:
        out, status, inputs = args.fn(args)
    except (UsageError, InvalidInput, KeyError) as exc:
        print(f"tatek: {exc}", file=sys.stderr)
        return 2
    except (TatekError, ArithmeticError) as exc:
        out = {"error": type(exc).__name__, "message": str(exc)}
        status, inputs = 1, {"argv": list(argv if argv is not None else sys.argv[1:])}
    out = {**out, "input_hash": input_hash(args.command, inputs)}
    text = canonical_json(out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

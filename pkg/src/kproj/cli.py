"""``kproj`` command line: generate, analyze, decompose, check and expand spec documents.

Exit codes: 0 success, 1 when a checked mathematical hypothesis fails, 2 for
usage or schema errors.  Output files are written atomically, so a failing
command never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from typing import Sequence

from . import pade
from .analysis import (FractalMismatch, check_complexity_bound, complexity, detect_periodicity,
                       fractal_copy_census, fractal_decompose, long_repetitions, as_word)
from .builtins import resolve_spec
from .errors import HypothesisError, KprojError, SpecError, TruncationError
from .generators import InfiniteProduct
from .mahler import (cartier_to_product, chain_solve, max_coeffs, product_coeffs,
                     verify_cartier)
from .scalar import Scalar
from .sequences import gen_series, prefix
from .serialize import (CoefficientCache, SpecDocument, decode_cache, encode_cache,
                        scalar_to_json)

__all__ = ["main", "build_parser", "expand_digits", "UsageError"]


class UsageError(KprojError):
    """Bad flag combination; exits with status 2."""


class CheckFailed(KprojError):
    """A verification ran to completion and found a counterexample (exit 1)."""

    def __init__(self, payload: str):
        super().__init__("check failed")
        self.payload = payload


# --- output helpers -------------------------------------------------------------

def _write_atomic(path: str, data: bytes) -> None:
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".kproj-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        _write_atomic(out, text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _check_n(n: int, what: str = "--N") -> int:
    if n < 0:
        raise UsageError(f"{what} must be nonnegative")
    cap = max_coeffs()
    if n > cap:
        raise UsageError(f"{what}={n} exceeds the cap {cap} (set KPROJ_MAX_COEFFS to raise it)")
    return n


# --- gen ------------------------------------------------------------------------------

def listing(doc: SpecDocument, values: Sequence[Scalar], fmt: str) -> str:
    if fmt == "json":
        return _json({"name": doc.name, "radix": doc.radix, "field_order": doc.field_order,
                      "N": len(values), "values": [scalar_to_json(v) for v in values]})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "value"])
    for i, v in enumerate(values):
        w.writerow([i, str(v)])
    return buf.getvalue()


def cmd_gen(args, doc: SpecDocument) -> int:
    if args.from_cache:
        with open(args.from_cache, "rb") as fh:
            cache = decode_cache(fh.read())
        if not cache.matches(doc):
            raise SpecError(f"cache {args.from_cache} was generated from a different spec")
        values = list(cache.values)
        if args.N is not None and args.N != len(values):
            raise UsageError(f"cache holds {len(values)} values, --N asked for {args.N}")
    else:
        values = prefix(doc.view(), _check_n(args.N if args.N is not None else 64))
    text = listing(doc, values, args.format)
    blob = None
    if args.cache:
        blob = encode_cache(CoefficientCache(doc.digest, doc.radix, doc.dimension,
                                             doc.field_order, tuple(values)))
    if blob is not None:
        _write_atomic(args.cache, blob)
    _emit(text, args.out)
    return 0


# --- analyze ----------------------------------------------------------------------------

def cmd_analyze(args, doc: SpecDocument) -> int:
    if args.bound and args.d is None:
        raise UsageError("--bound needs --d (the system dimension)")
    window = _check_n(args.W, "--W")
    word = as_word(doc.view(), window)
    m_max = min(args.m_max, window)
    rep = complexity(word, window, m_max)
    report: dict = {"name": doc.name, "radix": doc.radix, "complexity": None}
    if args.bound:
        b = args.b if args.b is not None else rep.alphabet
        k = args.k if args.k is not None else doc.radix
        check_complexity_bound(rep, b, args.d, k)
    report["complexity"] = rep.to_dict()
    l_max, n_max = args.l_max, args.n_max
    if window > n_max + 2 * l_max:
        report["periodicity"] = detect_periodicity(word, window, l_max, n_max).to_dict()
    else:
        report["periodicity"] = None
    if args.repetitions:
        found = long_repetitions(word, window)
        report["repetitions"] = [{"V_length": v, "decomposition": dec.to_dict() if dec else None}
                                 for v, dec in found]
    ok = rep.bound["ok"] if rep.bound else True
    report["ok"] = ok
    _emit(_json(report), args.out)
    return 0 if ok else 1


# --- fractal -----------------------------------------------------------------------------

def _parse_corrupt(text: str) -> tuple[int, int, int, int, Fraction]:
    parts = text.split(":")
    if len(parts) != 5:
        raise UsageError("--corrupt expects DIGIT:LEVEL:ROW:COL:VALUE")
    try:
        j, lv, r, c = (int(p) for p in parts[:4])
        return j, lv, r, c, Fraction(parts[4])
    except ValueError:
        raise UsageError(f"bad --corrupt value {text!r}") from None


def cmd_fractal(args, doc: SpecDocument) -> int:
    sys_ = reference = doc.cartier_system()
    if args.corrupt:
        j, lv, r, c, v = _parse_corrupt(args.corrupt)
        if not (0 <= j < sys_.radix and 0 <= lv < len(sys_.matrices.entries)
                and 0 <= r < sys_.dim and 0 <= c < sys_.dim):
            raise UsageError(f"--corrupt entry outside the {sys_.dim}x{sys_.dim} tables")
        sys_ = sys_.with_entry(j, lv, r, c, v)
    target = doc.reference()
    report: dict = {"name": doc.name, "level": args.y, "n_max": args.n_max}
    try:
        dec = fractal_decompose(sys_, args.y, args.n_max, target, reference)
    except FractalMismatch as exc:
        report.update(ok=False, error=str(exc),
                      location={"n": exc.location[0], "j": exc.location[1], "level": exc.level})
        raise CheckFailed(_json(report)) from None
    report["ok"] = True
    report["decomposition"] = dec.to_dict()
    report["census"] = fractal_copy_census(dec)
    _emit(_json(report), args.out)
    return 0


# --- dn ------------------------------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _params_for(levels: list[int], c1, c2, r: int) -> pade.DNParams:
    steps = [b - a for a, b in zip(levels, levels[1:])] or [1]
    if any(s < 1 for s in steps):
        raise UsageError("--levels must be strictly increasing")
    return pade.DNParams(Fraction(c1), Fraction(c2), max(steps), r, tuple(levels), steps[-1])


def cmd_dn(args, doc: SpecDocument) -> int:
    report: dict = {"name": doc.name, "mode": args.mode}
    if args.mode == "solve":
        if args.deg_q is None or args.deg_p is None or args.order is None:
            raise UsageError("solve mode needs --deg-q, --deg-p and --order")
        n = _check_n(args.N if args.N is not None else args.order)
        f = gen_series(doc.view(), n)
        pair = pade.pade_solve(f, args.deg_q, args.deg_p, args.order)
        report["pair"] = pair.to_dict() if pair else None
        report["ok"] = pair is not None
        if pair is None:
            raise CheckFailed(_json(report))
        _emit(_json(report), args.out)
        return 0
    product = doc.sequence
    if not isinstance(product, InfiniteProduct):
        raise SpecError(f"{args.mode} mode needs a document whose sequence is an infinite product")
    if args.mode == "block":
        k = product.radix
        s = args.s if args.s is not None else 1
        t = args.t if args.t is not None else k - 1
        levels = _int_list(args.levels) if args.levels else list(range(6))
        pairs = [pade.block_pair(product, y, s, t) for y in levels]
        params = _params_for(levels, args.c1 or t, args.c2 or t + 1, k)
        trunc = max(p.truncation for p in pairs)
    else:
        levels = _int_list(args.levels) if args.levels else [0, 2, 4, 6]
        pairs = [pade.quadratic_pair(product, n) for n in levels]
        params = _params_for(levels, args.c1 or 3, args.c2 or 4, 2)
        trunc = max(p.truncation for p in pairs)
        report["key_inequality"] = {str(n): pade.quadratic_key_inequality(product, n)
                                    for n in levels}
    f = gen_series(product, trunc)
    result = pade.dn_check(f, pairs, params)
    report.update(result)
    report["pairs"] = [p.to_dict() for p in pairs]
    report["params"] = {"c1": str(params.c1), "c2": str(params.c2), "c3": params.c3,
                        "r": params.r, "m": [params.m(i) for i in range(len(pairs))]}
    if not result["ok"]:
        raise CheckFailed(_json(report))
    _emit(_json(report), args.out)
    return 0


# --- expand ------------------------------------------------------------------------------------

def expand_digits(values: Sequence[Scalar], base: int) -> str:
    """First ``len(values)`` base-``b`` digits of ``sum a(n) / b^(n+1)``.

    When every ``a(n)`` lies in ``0..b-1`` these digits are the values
    themselves; the exact partial sum is expanded independently and compared.
    """
    if base < 2:
        raise UsageError("base must be at least 2")
    digits = []
    for i, v in enumerate(values):
        if not v.is_rational() or v.to_fraction().denominator != 1:
            raise HypothesisError(f"a({i}) = {v} is not an integer digit")
        d = int(v.to_fraction())
        if not 0 <= d < base:
            raise HypothesisError(f"a({i}) = {d} is outside the digit range 0..{base - 1}")
        digits.append(d)
    total = sum(Fraction(d, base ** (i + 1)) for i, d in enumerate(digits))
    check = []
    for _ in digits:
        total *= base
        whole = int(total)
        check.append(whole)
        total -= whole
    assert check == digits, "digit expansion disagrees with the prefix"
    alphabet = "0123456789abcdefghijklmnopqrstuvwxyz"
    if base <= len(alphabet):
        return "".join(alphabet[d] for d in digits)
    return ",".join(str(d) for d in digits)


def cmd_expand(args, doc: SpecDocument) -> int:
    n = _check_n(args.digits, "--digits")
    text = expand_digits(prefix(doc.view(), n), args.base)
    _emit(text + "\n", args.out)
    return 0


# --- verify --------------------------------------------------------------------------------------

def cmd_verify(args, doc: SpecDocument) -> int:
    n = _check_n(args.N if args.N is not None else 256)
    checks = []
    ref = doc.reference()
    if doc.system is not None and ref is not None:
        rep = verify_cartier(doc.system, ref, args.levels, max(1, n // doc.radix ** args.levels))
        checks.append({"check": "cartier_vs_sequence", **rep.to_dict()})
    if doc.system is not None and ref is not None:
        got = product_coeffs(cartier_to_product(doc.system), n)
        want = prefix(ref, n)
        bad = next((i for i in range(n) if got[i] != want[i]), None)
        checks.append({"check": "matrix_bridge_vs_sequence", "ok": bad is None, "N": n,
                       "first_mismatch": bad})
    if doc.product is not None and ref is not None:
        got = product_coeffs(doc.product, n)
        want = prefix(ref, n)
        bad = next((i for i in range(n) if got[i] != want[i]), None)
        checks.append({"check": "product_vs_sequence", "ok": bad is None, "N": n,
                       "first_mismatch": bad})
    if doc.chain is not None and doc.product is not None:
        got = chain_solve(doc.chain, n)
        want = product_coeffs(doc.product, n)
        bad = next((i for i in range(n) if got[i] != want[i]), None)
        checks.append({"check": "chain_vs_product", "ok": bad is None, "N": n,
                       "first_mismatch": bad})
    report = {"name": doc.name, "checks": checks, "ok": all(c["ok"] for c in checks)}
    if not checks:
        report["note"] = "document has a single form; nothing to compare"
    if not report["ok"]:
        raise CheckFailed(_json(report))
    _emit(_json(report), args.out)
    return 0


# --- entry point ------------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kproj", description="Exact workbench for k-projective sequences.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, n_default_help="number of coefficients"):
        sp.add_argument("--spec", required=True, help="JSON document path or builtin:NAME")
        sp.add_argument("--out", help="write the result here instead of stdout")
        sp.add_argument("--N", type=int, help=n_default_help)
        sp.add_argument("--format", choices=("csv", "json"), default="json")

    g = sub.add_parser("gen", help="list the first N coefficients")
    common(g)
    g.set_defaults(format="csv")
    g.add_argument("--cache", help="also write a binary coefficient cache")
    g.add_argument("--from-cache", help="emit the listing stored in a cache file")

    a = sub.add_parser("analyze", help="complexity, periodicity and repetition report")
    common(a)
    a.add_argument("--W", type=int, default=1024, help="window length")
    a.add_argument("--m-max", type=int, default=32)
    a.add_argument("--bound", action="store_true", help="check p(m) <= b^(2d) k m")
    a.add_argument("--b", type=int, help="alphabet size (default: observed)")
    a.add_argument("--d", type=int, help="system dimension, required with --bound")
    a.add_argument("--k", type=int, help="radix (default: the document's)")
    a.add_argument("--l-max", type=int, default=16)
    a.add_argument("--n-max", type=int, default=64)
    a.add_argument("--repetitions", action="store_true", help="search for U V W V prefixes")

    f = sub.add_parser("fractal", help="verify the level-y block decomposition")
    common(f)
    f.add_argument("--y", type=int, default=2)
    f.add_argument("--n-max", type=int, default=64)
    f.add_argument("--corrupt", help="replace one table entry: DIGIT:LEVEL:ROW:COL:VALUE")

    d = sub.add_parser("dn", help="approximation pairs and growth-condition checks")
    common(d)
    d.add_argument("--mode", choices=("block", "deg2", "solve"), required=True)
    d.add_argument("--levels", help="comma-separated levels (block, deg2)")
    d.add_argument("--s", type=int)
    d.add_argument("--t", type=int)
    d.add_argument("--c1", type=Fraction)
    d.add_argument("--c2", type=Fraction)
    d.add_argument("--deg-q", type=int)
    d.add_argument("--deg-p", type=int)
    d.add_argument("--order", type=int)

    e = sub.add_parser("expand", help="digits of sum a(n) / b^(n+1)")
    common(e)
    e.add_argument("--base", type=int, default=2)
    e.add_argument("--digits", type=int, default=32)

    v = sub.add_parser("verify", help="cross-check the forms a document provides")
    common(v)
    v.add_argument("--levels", type=int, default=3, help="kernel depth for the Cartier check")
    return p


_COMMANDS = {"gen": cmd_gen, "analyze": cmd_analyze, "fractal": cmd_fractal, "dn": cmd_dn,
             "expand": cmd_expand, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        doc = resolve_spec(args.spec)
        return _COMMANDS[args.command](args, doc)
    except CheckFailed as exc:
        out = getattr(args, "out", None)
        _emit(exc.payload, out)
        return 1
    except (UsageError, SpecError, TruncationError) as exc:
        print(f"kproj: error: {exc}", file=sys.stderr)
        return 2
    except HypothesisError as exc:
        print(f"kproj: hypothesis failed: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"kproj: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

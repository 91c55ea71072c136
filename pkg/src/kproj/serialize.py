"""JSON spec documents (format version 1) and the binary coefficient cache.

A document looks like::

    {"format": "kproj-spec", "version": 1,
     "name": "...", "description": "...",
     "field": {"cyclotomic_order": 1}, "radix": 2,
     "sequence": {...}, "system": {...}, "product": {...}, "chain": {...},
     "target": {...}}

At least one of ``sequence``, ``system``, ``product`` or ``chain`` must be
present.  When several are given they describe the same object in different
forms (the ``verify`` command checks that they agree).  ``target`` is an
optional independent reference sequence.

Scalars are strings (``"3"``, ``"-1/2"``), or for ``L > 1`` a list of
coordinate strings in the power basis, or ``{"zeta": e}``.  Polynomials are
lists of scalars, lowest degree first.  Level tables are
``{"levels": [...], "tail": "repeat_last" | {"cycle": p}}``.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import SpecError
from .generators import (DigitPattern, DigitPatternSpec, InfiniteProduct, InfiniteSum, Ooto,
                         RecursiveWord, RecursiveWordSpec, product_cartier,
                         quadratic_product_cartier, recursive_word_to_cartier)
from .levels import LevelTable
from .mahler import (CartierSequence, CartierSystem, ChainLevel, ChainMahlerSpec, ChainSequence,
                     MatrixProductSequence, MatrixProductSpec, product_to_cartier)
from .poly import Poly, PolyMatrix
from .scalar import Scalar, euler_phi
from .sequences import (Add, ArithSubseq, BarTransform, Cauchy, ExplicitPrefix, PointwiseMul,
                        ScalarMul, SequenceSpec)

__all__ = ["SchemaError", "SpecDocument", "FORMAT", "VERSION", "loads", "load", "dumps",
           "document_dict", "sequence_to_json", "system_to_json", "product_to_json",
           "chain_to_json", "scalar_to_json", "CoefficientCache", "encode_cache",
           "decode_cache"]

FORMAT = "kproj-spec"
VERSION = 1
CACHE_MAGIC = b"KPRJ"
CACHE_VERSION = 1


class SchemaError(SpecError):
    """Invalid document; ``path`` locates the offending node (``$.sequence.values[3]``)."""

    def __init__(self, message: str, path: str = "$", line: int | None = None,
                 column: int | None = None):
        where = path if line is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.path, self.line, self.column = path, line, column


# --- reading -------------------------------------------------------------------

class _Reader:
    def __init__(self, order: int, radix: int):
        self.order = order
        self.radix = radix

    def obj(self, x, path: str, required: tuple[str, ...] = ()) -> dict:
        if not isinstance(x, dict):
            raise SchemaError("expected an object", path)
        for key in required:
            if key not in x:
                raise SchemaError(f"missing required key {key!r}", path)
        return x

    def list(self, x, path: str, length: int | None = None) -> list:
        if not isinstance(x, list):
            raise SchemaError("expected a list", path)
        if length is not None and len(x) != length:
            raise SchemaError(f"expected {length} entries, got {len(x)}", path)
        return x

    def int(self, x, path: str, minimum: int | None = None) -> int:
        if isinstance(x, bool) or not isinstance(x, int):
            raise SchemaError("expected an integer", path)
        if minimum is not None and x < minimum:
            raise SchemaError(f"must be at least {minimum}", path)
        return x

    def scalar(self, x, path: str) -> Scalar:
        try:
            if isinstance(x, bool):
                raise ValueError("booleans are not scalars")
            if isinstance(x, (int, str)):
                return Scalar(x, self.order)
            if isinstance(x, dict) and set(x) == {"zeta"}:
                return Scalar.zeta(self.order, self.int(x["zeta"], path + ".zeta"))
            if isinstance(x, list):
                if len(x) != euler_phi(self.order):
                    raise ValueError(f"expected {euler_phi(self.order)} coordinates")
                return Scalar([_coord(c) for c in x], self.order)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad scalar {x!r}: {exc}", path) from None
        raise SchemaError(f"bad scalar {x!r}", path)

    def poly(self, x, path: str) -> Poly:
        return Poly(self.scalar(c, f"{path}[{i}]") for i, c in enumerate(self.list(x, path)))

    def ratfn(self, x, path: str):
        if isinstance(x, dict):
            self.obj(x, path, ("num", "den"))
            num, den = self.poly(x["num"], path + ".num"), self.poly(x["den"], path + ".den")
            if not den:
                raise SchemaError("zero denominator", path + ".den")
            return num, den
        return self.poly(x, path), Poly([1])

    def table(self, x, path: str, item: Callable[[Any, str], Any]) -> LevelTable:
        self.obj(x, path, ("levels",))
        levels = self.list(x["levels"], path + ".levels")
        if not levels:
            raise SchemaError("a level table needs at least one entry", path + ".levels")
        tail = x.get("tail", "repeat_last")
        if tail == "repeat_last":
            period = 1
        elif isinstance(tail, dict) and set(tail) == {"cycle"}:
            period = self.int(tail["cycle"], path + ".tail.cycle", 1)
            if period > len(levels):
                raise SchemaError(f"cycle {period} longer than the {len(levels)} listed levels",
                                  path + ".tail")
        else:
            raise SchemaError(f"unknown tail rule {tail!r}", path + ".tail")
        items = [item(v, f"{path}.levels[{i}]") for i, v in enumerate(levels)]
        return LevelTable(items, period)

    def matrix(self, x, path: str, d: int) -> tuple:
        rows = self.list(x, path, d)
        return tuple(tuple(self.scalar(c, f"{path}[{i}][{j}]")
                           for j, c in enumerate(self.list(r, f"{path}[{i}]", d)))
                     for i, r in enumerate(rows))

    def vector(self, x, path: str, d: int) -> tuple:
        return tuple(self.scalar(c, f"{path}[{i}]") for i, c in enumerate(self.list(x, path, d)))

    # -- composite objects

    def system(self, x, path: str) -> CartierSystem:
        self.obj(x, path, ("dimension", "matrices", "seeds"))
        d = self.int(x["dimension"], path + ".dimension", 1)
        k = self.radix

        def level(v, p):
            return tuple(self.matrix(m, f"{p}[{j}]", d)
                         for j, m in enumerate(self.list(v, p, k)))

        mats = self.table(x["matrices"], path + ".matrices", level)
        seeds = self.table(x["seeds"], path + ".seeds", lambda v, p: self.vector(v, p, d))
        return _wrap(path, lambda: CartierSystem(k, mats, seeds, self.order, x.get("name", "")))

    def product(self, x, path: str) -> MatrixProductSpec:
        self.obj(x, path, ("dimension", "matrices", "seeds"))
        d = self.int(x["dimension"], path + ".dimension", 1)
        k = self.radix

        def level(v, p):
            rows = self.list(v, p, d)
            grid = [[self.poly(c, f"{p}[{i}][{j}]") for j, c in enumerate(self.list(r, f"{p}[{i}]", d))]
                    for i, r in enumerate(rows)]
            return _wrap(p, lambda: PolyMatrix(grid, degree_bound=k - 1))

        mats = self.table(x["matrices"], path + ".matrices", level)
        seeds = self.table(x["seeds"], path + ".seeds", lambda v, p: self.vector(v, p, d))
        row = self.int(x.get("output_row", 0), path + ".output_row", 0)
        return _wrap(path, lambda: MatrixProductSpec(k, mats, seeds, row, self.order,
                                                     x.get("name", "")))

    def chain(self, x, path: str) -> ChainMahlerSpec:
        self.obj(x, path, ("depth", "levels"))
        depth = self.int(x["depth"], path + ".depth", 1)

        def level(v, p):
            self.obj(v, p, ("coefficients", "f0"))
            cs = self.list(v["coefficients"], p + ".coefficients", depth + 1)
            coeffs = [self.ratfn(c, f"{p}.coefficients[{i}]") for i, c in enumerate(cs)]
            rhs = self.ratfn(v.get("rhs", []), p + ".rhs")
            return ChainLevel(tuple(coeffs), rhs, self.scalar(v["f0"], p + ".f0"))

        levels = self.table(x["levels"], path + ".levels", level)
        return _wrap(path, lambda: ChainMahlerSpec(self.radix, levels, x.get("name", "")))

    def sequence(self, x, path: str) -> SequenceSpec:
        self.obj(x, path, ("kind",))
        kind = x["kind"]
        handler = _NODE_READERS.get(kind)
        if handler is None:
            raise SchemaError(f"unknown sequence kind {kind!r}", path + ".kind")
        return _wrap(path, lambda: handler(self, x, path))


def _coord(c):
    if isinstance(c, bool) or not isinstance(c, (int, str)):
        raise ValueError("coordinates must be strings or integers")
    return c if isinstance(c, int) else c.strip()


def _wrap(path: str, build: Callable[[], Any]):
    try:
        return build()
    except SchemaError:
        raise
    except (SpecError, ValueError) as exc:
        raise SchemaError(str(exc), path) from None


def _read_explicit(r: _Reader, x, path):
    vals = [r.scalar(v, f"{path}.values[{i}]") for i, v in enumerate(r.list(x.get("values", []), path + ".values"))]
    return ExplicitPrefix(vals, r.scalar(x.get("pad", "0"), path + ".pad"), r.radix, r.order)


def _read_recursive(r: _Reader, x, path):
    r.obj(x, path, ("seeds", "rules"))
    seeds = [r.scalar(v, f"{path}.seeds[{i}]") for i, v in enumerate(r.list(x["seeds"], path + ".seeds"))]
    d, k = len(seeds), r.radix

    def level(v, p):
        slots = r.list(v, p, d)
        out = []
        for s, blocks in enumerate(slots):
            row = []
            for b, pair in enumerate(r.list(blocks, f"{p}[{s}]", k)):
                q = f"{p}[{s}][{b}]"
                src, mult = r.list(pair, q, 2)
                row.append((r.int(src, q + "[0]", 0), r.scalar(mult, q + "[1]")))
            out.append(tuple(row))
        return tuple(out)

    rules = r.table(x["rules"], path + ".rules", level)
    return RecursiveWord(RecursiveWordSpec(k, seeds, rules, r.order, x.get("name", "")))


def _read_digit_pattern(r: _Reader, x, path):
    r.obj(x, path, ("patterns",))
    pats = []
    for i, p in enumerate(r.list(x["patterns"], path + ".patterns")):
        q = f"{path}.patterns[{i}]"
        r.obj(p, q, ("digits", "weights"))
        ds = tuple(r.int(v, f"{q}.digits[{j}]", 0) for j, v in enumerate(r.list(p["digits"], q + ".digits")))
        pats.append((ds, r.table(p["weights"], q + ".weights", r.scalar)))
    modulus = x.get("modulus")
    if modulus is not None:
        modulus = r.int(modulus, path + ".modulus", 1)
    spec = DigitPatternSpec(r.radix, tuple(pats), x.get("mode", "additive"), modulus,
                            x.get("name", ""))
    return DigitPattern(spec)


def _read_lacunary(cls):
    def read(r: _Reader, x, path):
        r.obj(x, path, ("degree", "coefficients"))
        deg = r.int(x["degree"], path + ".degree", 1)
        table = r.table(x["coefficients"], path + ".coefficients",
                        lambda v, p: tuple(r.scalar(c, f"{p}[{i}]")
                                           for i, c in enumerate(r.list(v, p, deg))))
        return cls(r.radix, deg, table, x.get("name", ""))
    return read


def _read_ooto(r: _Reader, x, path):
    if r.radix != 2:
        raise SchemaError("this sequence is defined for radix 2 only", path)
    return Ooto()


def _binary(cls):
    def read(r: _Reader, x, path):
        r.obj(x, path, ("args",))
        a, b = r.list(x["args"], path + ".args", 2)
        return cls(r.sequence(a, path + ".args[0]"), r.sequence(b, path + ".args[1]"))
    return read


def _read_scalar_mul(r: _Reader, x, path):
    r.obj(x, path, ("scalar", "arg"))
    return ScalarMul(r.scalar(x["scalar"], path + ".scalar"), r.sequence(x["arg"], path + ".arg"))


def _read_subseq(r: _Reader, x, path):
    r.obj(x, path, ("offset", "step", "arg"))
    return ArithSubseq(r.sequence(x["arg"], path + ".arg"), r.int(x["offset"], path + ".offset", 0),
                       r.int(x["step"], path + ".step", 1))


def _read_cartier_digit(r: _Reader, x, path):
    r.obj(x, path, ("digit", "arg"))
    j = r.int(x["digit"], path + ".digit", 0)
    if j >= r.radix:
        raise SchemaError(f"digit must lie in 0..{r.radix - 1}", path + ".digit")
    return ArithSubseq(r.sequence(x["arg"], path + ".arg"), j, r.radix)


def _read_bar(r: _Reader, x, path):
    r.obj(x, path, ("modulus", "arg"))
    inner = _Reader(1, r.radix)
    return BarTransform(inner.sequence(x["arg"], path + ".arg"),
                        r.int(x["modulus"], path + ".modulus", 1))


_NODE_READERS: dict[str, Callable] = {
    "explicit_prefix": _read_explicit,
    "recursive_word": _read_recursive,
    "digit_pattern": _read_digit_pattern,
    "infinite_product": _read_lacunary(InfiniteProduct),
    "infinite_sum": _read_lacunary(InfiniteSum),
    "ooto": _read_ooto,
    "cartier_system": lambda r, x, p: CartierSequence(r.system(r.obj(x, p, ("system",))["system"], p + ".system")),
    "matrix_product": lambda r, x, p: MatrixProductSequence(r.product(r.obj(x, p, ("product",))["product"], p + ".product")),
    "chain": lambda r, x, p: ChainSequence(r.chain(r.obj(x, p, ("chain",))["chain"], p + ".chain")),
    "add": _binary(Add),
    "pointwise_mul": _binary(PointwiseMul),
    "cauchy": _binary(Cauchy),
    "scalar_mul": _read_scalar_mul,
    "arith_subseq": _read_subseq,
    "cartier": _read_cartier_digit,
    "bar_transform": _read_bar,
}


@dataclass
class SpecDocument:
    name: str
    description: str
    field_order: int
    radix: int
    sequence: SequenceSpec | None = None
    system: CartierSystem | None = None
    product: MatrixProductSpec | None = None
    chain: ChainMahlerSpec | None = None
    target: SequenceSpec | None = None
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def digest(self) -> bytes:
        """SHA-256 of the canonical JSON text of the document."""
        text = json.dumps(self.raw, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
        return hashlib.sha256(text.encode()).digest()

    @property
    def dimension(self) -> int:
        for obj in (self.system, self.product):
            if obj is not None:
                return obj.dim
        if self.chain is not None:
            return self.chain.depth
        return 1

    def view(self) -> SequenceSpec:
        """The sequence the document describes, preferring the most direct form."""
        if self.sequence is not None:
            return self.sequence
        if self.system is not None:
            return CartierSequence(self.system)
        if self.product is not None:
            return MatrixProductSequence(self.product)
        return ChainSequence(self.chain)

    def cartier_system(self) -> CartierSystem:
        """An explicit system, or one derived from the sequence when a conversion exists."""
        if self.system is not None:
            return self.system
        seq = self.sequence
        if isinstance(seq, RecursiveWord):
            return recursive_word_to_cartier(seq.spec)
        if isinstance(seq, InfiniteProduct):
            if seq.degree <= seq.radix - 1:
                table = seq.table.map(lambda row: row + (Scalar(0),) * (seq.radix - 1 - len(row)))
                return product_cartier(seq.radix, table, self.name)
            if seq.radix == 2 and seq.degree == 2:
                return quadratic_product_cartier(seq.table, self.name)
        if self.product is not None:
            return product_to_cartier(self.product)
        raise SpecError(f"document {self.name!r} has no Cartier system form")

    def reference(self) -> SequenceSpec | None:
        """An independently evaluated sequence for cross-checks, if any."""
        return self.target if self.target is not None else self.sequence


def document_from_dict(doc: Any) -> SpecDocument:
    r0 = _Reader(1, 2)
    r0.obj(doc, "$", ("format", "version", "radix"))
    if doc["format"] != FORMAT:
        raise SchemaError(f"unknown format {doc['format']!r}; expected {FORMAT!r}", "$.format")
    if doc["version"] != VERSION:
        raise SchemaError(f"unsupported version {doc['version']!r}; this reader knows {VERSION}",
                          "$.version")
    k = r0.int(doc["radix"], "$.radix", 2)
    fld = r0.obj(doc.get("field", {"cyclotomic_order": 1}), "$.field")
    order = r0.int(fld.get("cyclotomic_order", 1), "$.field.cyclotomic_order", 1)
    r = _Reader(order, k)
    parts = {}
    readers = {"sequence": r.sequence, "system": r.system, "product": r.product,
               "chain": r.chain, "target": r.sequence}
    for key, read in readers.items():
        if key in doc:
            parts[key] = read(doc[key], "$." + key)
    if not any(key in parts for key in ("sequence", "system", "product", "chain")):
        raise SchemaError("document needs one of sequence, system, product or chain", "$")
    for key, obj in parts.items():
        if getattr(obj, "radix", k) != k:
            raise SchemaError(f"radix {obj.radix} disagrees with document radix {k}", "$." + key)
    name = doc.get("name", "")
    desc = doc.get("description", "")
    if not isinstance(name, str) or not isinstance(desc, str):
        raise SchemaError("name and description must be strings", "$")
    return SpecDocument(name, desc, order, k, raw=doc, **parts)


def loads(text: str) -> SpecDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    return document_from_dict(doc)


def load(path) -> SpecDocument:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# --- writing -------------------------------------------------------------------

def scalar_to_json(s) -> str | list[str]:
    s = s if isinstance(s, Scalar) else Scalar(s)
    if s.is_rational():
        return str(s.coords[0])
    return [str(c) for c in s.coords]


def _poly(p: Poly) -> list:
    return [scalar_to_json(c) for c in p.coeffs]


def _table(t: LevelTable, item: Callable) -> dict:
    tail: Any = "repeat_last" if t.period == 1 else {"cycle": t.period}
    return {"levels": [item(e) for e in t.entries], "tail": tail}


def _vec(v) -> list:
    return [scalar_to_json(c) for c in v]


def system_to_json(sys: CartierSystem) -> dict:
    return {"dimension": sys.dim,
            "matrices": _table(sys.matrices, lambda ms: [[_vec(r) for r in m] for m in ms]),
            "seeds": _table(sys.seeds, _vec)}


def product_to_json(spec: MatrixProductSpec) -> dict:
    def mat(m: PolyMatrix):
        return [[_poly(p) for p in row] for row in m.entries]
    return {"dimension": spec.dim, "matrices": _table(spec.matrices, mat),
            "seeds": _table(spec.seeds, _vec), "output_row": spec.output_row}


def _ratfn(rf) -> Any:
    num, den = rf
    if den == Poly([1]):
        return _poly(num)
    return {"num": _poly(num), "den": _poly(den)}


def chain_to_json(chain: ChainMahlerSpec) -> dict:
    def level(lv: ChainLevel):
        out = {"coefficients": [_ratfn(c) for c in lv.coeffs], "f0": scalar_to_json(lv.f0)}
        if lv.rhs[0]:
            out["rhs"] = _ratfn(lv.rhs)
        return out
    return {"depth": chain.depth, "levels": _table(chain.levels, level)}


def sequence_to_json(seq: SequenceSpec) -> dict:
    if isinstance(seq, ExplicitPrefix):
        return {"kind": "explicit_prefix", "values": _vec(seq.values), "pad": scalar_to_json(seq.pad)}
    if isinstance(seq, RecursiveWord):
        rules = _table(seq.spec.rules, lambda lv: [[[src, scalar_to_json(m)] for src, m in slot]
                                                   for slot in lv])
        return {"kind": "recursive_word", "seeds": _vec(seq.spec.seeds), "rules": rules}
    if isinstance(seq, DigitPattern):
        sp = seq.spec
        out = {"kind": "digit_pattern", "mode": sp.mode,
               "patterns": [{"digits": list(ds), "weights": _table(w, scalar_to_json)}
                            for ds, w in sp.patterns]}
        if sp.modulus is not None:
            out["modulus"] = sp.modulus
        return out
    if isinstance(seq, (InfiniteProduct, InfiniteSum)):
        kind = "infinite_product" if isinstance(seq, InfiniteProduct) else "infinite_sum"
        return {"kind": kind, "degree": seq.degree, "coefficients": _table(seq.table, _vec)}
    if isinstance(seq, Ooto):
        return {"kind": "ooto"}
    if isinstance(seq, CartierSequence):
        return {"kind": "cartier_system", "system": system_to_json(seq.system)}
    if isinstance(seq, MatrixProductSequence):
        return {"kind": "matrix_product", "product": product_to_json(seq.spec)}
    if isinstance(seq, ChainSequence):
        return {"kind": "chain", "chain": chain_to_json(seq.chain)}
    if isinstance(seq, (Add, PointwiseMul, Cauchy)):
        kind = {Add: "add", PointwiseMul: "pointwise_mul", Cauchy: "cauchy"}[type(seq)]
        return {"kind": kind, "args": [sequence_to_json(seq.a), sequence_to_json(seq.b)]}
    if isinstance(seq, ScalarMul):
        return {"kind": "scalar_mul", "scalar": scalar_to_json(seq.c), "arg": sequence_to_json(seq.a)}
    if isinstance(seq, ArithSubseq):
        return {"kind": "arith_subseq", "offset": seq.offset, "step": seq.step,
                "arg": sequence_to_json(seq.a)}
    if isinstance(seq, BarTransform):
        return {"kind": "bar_transform", "modulus": seq.modulus, "arg": sequence_to_json(seq.a)}
    raise SpecError(f"no JSON form for {type(seq).__name__}")


def document_dict(*, radix: int, name: str = "", description: str = "", field_order: int = 1,
                  sequence: SequenceSpec | None = None, system: CartierSystem | None = None,
                  product: MatrixProductSpec | None = None, chain: ChainMahlerSpec | None = None,
                  target: SequenceSpec | None = None) -> dict:
    doc: dict[str, Any] = {"format": FORMAT, "version": VERSION, "name": name,
                           "description": description,
                           "field": {"cyclotomic_order": field_order}, "radix": radix}
    if sequence is not None:
        doc["sequence"] = sequence_to_json(sequence)
    if system is not None:
        doc["system"] = system_to_json(system)
    if product is not None:
        doc["product"] = product_to_json(product)
    if chain is not None:
        doc["chain"] = chain_to_json(chain)
    if target is not None:
        doc["target"] = sequence_to_json(target)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


# --- coefficient cache -----------------------------------------------------------
#
# header: b"KPRJ" | u16 version | 32-byte sha256 of the spec document | u32 k | u32 d | u32 L | u64 N
# body:   N records of phi(L) coordinates; each coordinate is a numerator then a
#         positive denominator, each written as u32 byte length + signed little-endian bytes.

_HEADER = struct.Struct("<4sH32sIIIQ")


@dataclass(frozen=True)
class CoefficientCache:
    digest: bytes
    radix: int
    dimension: int
    field_order: int
    values: tuple[Scalar, ...]

    def matches(self, doc: SpecDocument) -> bool:
        return self.digest == doc.digest


def _int_bytes(v: int) -> bytes:
    n = max(1, (v.bit_length() + 8) // 8)
    return struct.pack("<I", n) + v.to_bytes(n, "little", signed=True)


def encode_cache(cache: CoefficientCache) -> bytes:
    out = [_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, cache.digest, cache.radix, cache.dimension,
                        cache.field_order, len(cache.values))]
    for s in cache.values:
        for c in s.embed(cache.field_order).coords:
            out.append(_int_bytes(c.numerator))
            out.append(_int_bytes(c.denominator))
    return b"".join(out)


def decode_cache(data: bytes) -> CoefficientCache:
    from fractions import Fraction

    if len(data) < _HEADER.size:
        raise SpecError("cache file is truncated (header)")
    magic, version, digest, k, d, order, n = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC:
        raise SpecError("not a coefficient cache (bad magic)")
    if version != CACHE_VERSION:
        raise SpecError(f"unsupported cache version {version}")
    pos = _HEADER.size
    phi = euler_phi(order)

    def read_int() -> int:
        nonlocal pos
        if pos + 4 > len(data):
            raise SpecError("cache file is truncated")
        (size,) = struct.unpack_from("<I", data, pos)
        pos += 4
        if pos + size > len(data):
            raise SpecError("cache file is truncated")
        v = int.from_bytes(data[pos:pos + size], "little", signed=True)
        pos += size
        return v

    values = []
    for _ in range(n):
        coords = []
        for _ in range(phi):
            num, den = read_int(), read_int()
            if den <= 0:
                raise SpecError("cache record has a nonpositive denominator")
            coords.append(Fraction(num, den))
        values.append(Scalar._raw(tuple(coords), order))
    if pos != len(data):
        raise SpecError("trailing bytes after the last cache record")
    return CoefficientCache(digest, k, d, order, tuple(values))

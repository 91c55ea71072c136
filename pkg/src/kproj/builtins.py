"""Shipped spec documents, addressable as ``builtin:NAME`` on the command line.

The JSON files under ``data/`` are generated from :func:`build_documents`
(``python3 -m kproj.builtins``); a test keeps the two in sync.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import SpecError
from .generators import (DigitPattern, DigitPatternSpec, InfiniteProduct, InfiniteSum, Ooto,
                         RecursiveWord, product_cartier, quadratic_product_cartier,
                         signed_word_spec, sum_product_spec, thue_morse_spec)
from .levels import LevelTable
from .mahler import CartierSystem
from .serialize import SpecDocument, document_dict, document_from_dict, dumps, load
from .switching import switching_chain, switching_product

__all__ = ["BUILTINS", "ALIASES", "builtin_names", "canonical_name", "load_builtin",
           "resolve_spec", "build_documents", "rudin_shapiro_system"]

# canonical name -> short description
BUILTINS: dict[str, str] = {
    "thue-morse": "Thue-Morse word with values +1/-1",
    "signed-word": "two-slot recursive word A -> AB, B -> B(-A)",
    "stern": "Stern-type product prod (1 + z^(2^y) + z^(2^(y+1)))",
    "lacunary-sum": "sum over y of z^(2^y) + z^(2^(y+1))",
    "ooto": "1 at n = 2^e when the 2-adic valuation of e is even, else 0",
    "rudin-shapiro-type": "number of '11' windows in binary, mod 2",
    "switching-chain": "two-matrix switching product with choices cycling 1, 2, 2",
    "deg2-dn-family": "quadratic-factor product with coefficient rows cycling (2,1), (1,1)",
    "ternary-product": "radix-3 product prod (1 + z^(3^y) + 2 z^(2*3^y))",
}

ALIASES: dict[str, str] = {
    "tm": "thue-morse",
    "rs11": "rudin-shapiro-type",
}


def builtin_names() -> list[str]:
    return list(BUILTINS)


def canonical_name(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in BUILTINS:
        known = ", ".join(list(BUILTINS) + list(ALIASES))
        raise SpecError(f"unknown builtin {name!r}; known: {known}")
    return name


def rudin_shapiro_system() -> CartierSystem:
    """State ``(a(n), a(2n+1), 1)`` for the '11'-window parity."""
    c0 = ((1, 0, 0), (1, 0, 0), (0, 0, 1))
    c1 = ((0, 1, 0), (0, -1, 1), (0, 0, 1))
    return CartierSystem(2, LevelTable.constant((c0, c1)), LevelTable.constant((0, 0, 1)),
                         name="rudin-shapiro-type")


def build_documents() -> dict[str, dict]:
    ones2 = LevelTable.constant((1, 1))
    deg2 = LevelTable.cycle([(2, 1), (1, 1)])
    ternary = LevelTable.constant((1, 2))
    choices = LevelTable.cycle([1, 2, 2])
    rs = DigitPattern(DigitPatternSpec(2, (((1, 1), LevelTable.constant(1)),), "modular", 2))
    d = BUILTINS
    docs = {
        "thue-morse": document_dict(radix=2, sequence=RecursiveWord(thue_morse_spec())),
        "signed-word": document_dict(
            radix=2, sequence=RecursiveWord(signed_word_spec(LevelTable.constant(-1)))),
        "stern": document_dict(radix=2, sequence=InfiniteProduct(2, 2, ones2),
                               system=quadratic_product_cartier(ones2)),
        "lacunary-sum": document_dict(radix=2, sequence=InfiniteSum(2, 2, ones2),
                                      product=sum_product_spec(2, 2, ones2)),
        "ooto": document_dict(radix=2, sequence=Ooto()),
        "rudin-shapiro-type": document_dict(radix=2, sequence=rs, system=rudin_shapiro_system()),
        "switching-chain": document_dict(radix=2, product=switching_product(choices),
                                         chain=switching_chain(choices)),
        "deg2-dn-family": document_dict(radix=2, sequence=InfiniteProduct(2, 2, deg2),
                                        system=quadratic_product_cartier(deg2)),
        "ternary-product": document_dict(radix=3, sequence=InfiniteProduct(3, 2, ternary),
                                         system=product_cartier(3, ternary)),
    }
    for name, doc in docs.items():
        doc["name"] = name
        doc["description"] = d[name]
    return docs


def load_builtin(name: str) -> SpecDocument:
    name = canonical_name(name)
    text = resources.files("kproj").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return document_from_dict(json.loads(text))


def resolve_spec(arg: str) -> SpecDocument:
    """``builtin:NAME`` or a path to a JSON document."""
    if arg.startswith("builtin:"):
        return load_builtin(arg[len("builtin:"):])
    return load(arg)


def _write_data(target: Path) -> None:
    target.mkdir(parents=True, exist_ok=True)
    for name, doc in build_documents().items():
        (target / f"{name}.json").write_text(dumps(doc), encoding="utf-8")


if __name__ == "__main__":
    _write_data(Path(__file__).parent / "data")

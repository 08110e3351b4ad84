"""Structure/map/cochain file schema (version "1") and deterministic round trips.

Rationals are "num/den" strings with den > 0 (plain integers allowed); no
floats are accepted anywhere.  Serialization sorts every key and term so that
serialize(parse(serialize(x))) is byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .hopf import HElem, InputError, LieAlgebra
from .ptensor import FreeModule, MElem, PTElem
from .cochains import Cochain, MixedMap
from .structures import QuasiTwilled
from .deformation import HModuleMap

SCHEMA_VERSION = "1"


class ParseError(ValueError):
    """Malformed file contents (exit code 2 territory)."""


def parse_rat(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ParseError(f"rational must be a string, got {type(s).__name__}")
    txt = s.strip()
    if "/" in txt:
        num, den = txt.split("/", 1)
        try:
            n, d = int(num), int(den)
        except ValueError as exc:
            raise ParseError(f"bad rational {s!r}") from exc
        if d <= 0:
            raise ParseError(f"rational denominator must be positive in {s!r}")
        return Fraction(n, d)
    try:
        return Fraction(int(txt))
    except ValueError as exc:
        raise ParseError(f"bad rational {s!r}") from exc


def fmt_rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _mi(v, dim) -> tuple:
    if not isinstance(v, list) or len(v) != dim or not all(
        isinstance(x, int) and x >= 0 for x in v
    ):
        raise ParseError(f"bad multi-index {v!r} (dim {dim})")
    return tuple(v)


# -- Hopf base -------------------------------------------------------------------


def hopf_to_json(alg: LieAlgebra) -> dict:
    brackets = []
    for (i, j), row in sorted(alg._brackets.items()):
        coeffs = [[str(k), fmt_rat(c)] for k, c in sorted(row.items())]
        brackets.append({"i": i, "j": j, "coeffs": coeffs})
    return {"generators": list(alg.names), "brackets": brackets}


def hopf_from_json(data) -> LieAlgebra:
    if not isinstance(data, dict) or "generators" not in data:
        raise ParseError("hopf section must define generators")
    gens = data["generators"]
    brackets = {}
    for ent in data.get("brackets", []):
        i, j = ent.get("i"), ent.get("j")
        if not isinstance(i, int) or not isinstance(j, int):
            raise ParseError("bracket entries need integer i, j")
        row = {}
        for pair in ent.get("coeffs", []):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError("bracket coeffs must be [index, rational] pairs")
            k = int(pair[0])
            row[k] = parse_rat(pair[1])
        brackets[(i, j)] = row
    try:
        return LieAlgebra(gens, brackets)
    except InputError as exc:
        raise ParseError(str(exc)) from exc


# -- values ----------------------------------------------------------------------


def ptelem_to_json(v: PTElem) -> list:
    out = []
    for (slots, K, k), c in sorted(v.terms.items()):
        out.append(
            {
                "slots": [list(s) for s in slots],
                "coeff": list(K),
                "basis": k,
                "q": fmt_rat(c),
            }
        )
    return out


def ptelem_from_json(terms, module: FreeModule, arity: int) -> PTElem:
    dim = module.alg.dim
    acc = {}
    for t in terms:
        slots = t.get("slots", [])
        if len(slots) != arity - 1:
            raise ParseError(f"term needs {arity - 1} slots, got {len(slots)}")
        key = (
            tuple(_mi(s, dim) for s in slots),
            _mi(t.get("coeff"), dim),
            t.get("basis"),
        )
        if not isinstance(key[2], int) or not 0 <= key[2] < module.rank:
            raise ParseError(f"bad basis index {key[2]!r}")
        acc[key] = acc.get(key, Fraction(0)) + parse_rat(t.get("q"))
    return PTElem(module, arity, acc)


def helem_to_json(h: HElem) -> list:
    return [
        {"exp": list(K), "q": fmt_rat(c)} for K, c in sorted(h.terms.items())
    ]


def helem_from_json(terms, alg: LieAlgebra) -> HElem:
    acc = {}
    for t in terms:
        K = _mi(t.get("exp"), alg.dim)
        acc[K] = acc.get(K, Fraction(0)) + parse_rat(t.get("q"))
    return HElem(alg, acc)


# -- structures ------------------------------------------------------------------


def _component_entries(f) -> list:
    if isinstance(f, Cochain):
        items = sorted(f.table.items())
    else:
        items = sorted(f.table.items())
    return [
        {"args": list(args), "terms": ptelem_to_json(v)} for args, v in items
    ]


def structure_to_json(Q: QuasiTwilled, meta=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "hopf": hopf_to_json(Q.g.alg),
        "modules": {
            "g": {"basis": list(Q.g.basis)},
            "h": {"basis": list(Q.h.basis)},
        },
        "maps": {
            "pi": _component_entries(Q.pi),
            "rho": _component_entries(Q.rho),
            "mu": _component_entries(Q.mu),
            "eta": _component_entries(Q.eta),
            "theta": _component_entries(Q.theta),
        },
        "meta": dict(meta or {}),
    }


def structure_from_json(data) -> QuasiTwilled:
    if not isinstance(data, dict):
        raise ParseError("structure file must be a JSON object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {data.get('schema_version')!r}")
    alg = hopf_from_json(data.get("hopf"))
    modules = data.get("modules")
    if not isinstance(modules, dict) or "g" not in modules or "h" not in modules:
        raise ParseError("modules section must define g and h")
    g = FreeModule("g", modules["g"].get("basis", []), alg)
    h = FreeModule("h", modules["h"].get("basis", []), alg)
    maps = data.get("maps", {})
    unknown = set(maps) - {"pi", "rho", "mu", "eta", "theta"}
    if unknown:
        raise ParseError(f"unknown map sections {sorted(unknown)}")

    def load_pairs(name, src_ranks, module, arity=2):
        table = {}
        for ent in maps.get(name, []):
            args = ent.get("args")
            if (
                not isinstance(args, list)
                or len(args) != 2
                or not all(isinstance(a, int) for a in args)
            ):
                raise ParseError(f"{name}: bad args {args!r}")
            for a, r in zip(args, src_ranks):
                if not 0 <= a < r:
                    raise ParseError(f"{name}: args {args} out of range")
            key = tuple(args)
            v = ptelem_from_json(ent.get("terms", []), module, arity)
            if key in table:
                table[key] = table[key] + v
            else:
                table[key] = v
        return table

    def as_cochain(name, src, tgt):
        table = load_pairs(name, (src.rank, src.rank), tgt)
        for args in table:
            if list(args) != sorted(args):
                raise ParseError(f"{name}: args must be non-decreasing, got {args}")
        return Cochain(2, src, tgt, table)

    pi = as_cochain("pi", g, g)
    theta = as_cochain("theta", g, h)
    mu = as_cochain("mu", h, h)
    rho = MixedMap(g, h, h, load_pairs("rho", (g.rank, h.rank), h))
    eta = MixedMap(g, h, g, load_pairs("eta", (g.rank, h.rank), g))
    try:
        return QuasiTwilled(g, h, pi=pi, rho=rho, mu=mu, eta=eta, theta=theta)
    except InputError as exc:
        raise ParseError(str(exc)) from exc


def map_to_json(m: HModuleMap, from_name="g", to_name="h") -> dict:
    matrix = []
    for i in range(m.src.rank):
        row = []
        img = m.apply_basis(i)
        for j in range(m.dst.rank):
            h = img.coords.get(j)
            row.append(helem_to_json(h) if h is not None else [])
        matrix.append(row)
    return {
        "schema_version": SCHEMA_VERSION,
        "from": from_name,
        "to": to_name,
        "matrix": matrix,
    }


def map_from_json(data, src: FreeModule, dst: FreeModule) -> HModuleMap:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {data.get('schema_version')!r}")
    matrix = data.get("matrix")
    if not isinstance(matrix, list) or len(matrix) != src.rank:
        raise ParseError(f"matrix must have {src.rank} rows")
    rows = {}
    for i, row in enumerate(matrix):
        if not isinstance(row, list) or len(row) != dst.rank:
            raise ParseError(f"matrix row {i} must have {dst.rank} entries")
        coords = {}
        for j, terms in enumerate(row):
            h = helem_from_json(terms, src.alg)
            if h:
                coords[j] = h
        if coords:
            rows[i] = MElem(dst, coords)
    return HModuleMap(src, dst, rows)


def map_orientation_of(data) -> tuple:
    return data.get("from"), data.get("to")


def cochain_to_json(f: Cochain) -> dict:
    """Self-contained cochain file: carries the Hopf base and both modules."""
    modules = {f.source.name: {"basis": list(f.source.basis)}}
    modules.setdefault(f.target.name, {"basis": list(f.target.basis)})
    return {
        "schema_version": SCHEMA_VERSION,
        "hopf": hopf_to_json(f.source.alg),
        "modules": modules,
        "source": f.source.name,
        "target": f.target.name,
        "arity": f.arity,
        "table": [
            {"args": list(t), "terms": ptelem_to_json(v)}
            for t, v in sorted(f.table.items())
        ],
    }


def cochain_from_json(data, modules: dict | None = None) -> Cochain:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {data.get('schema_version')!r}")
    if modules is None:
        alg = hopf_from_json(data.get("hopf"))
        modules = {
            name: FreeModule(name, spec.get("basis", []), alg)
            for name, spec in (data.get("modules") or {}).items()
        }
    try:
        src = modules[data.get("source")]
        tgt = modules[data.get("target")]
    except KeyError as exc:
        raise ParseError(f"unknown module name {exc}") from exc
    arity = data.get("arity")
    if not isinstance(arity, int) or arity < 1:
        raise ParseError(f"bad arity {arity!r}")
    table = {}
    for ent in data.get("table", []):
        args = tuple(ent.get("args", ()))
        if len(args) != arity or list(args) != sorted(args):
            raise ParseError(f"bad cochain args {args!r}")
        table[args] = ptelem_from_json(ent.get("terms", []), tgt, arity)
    return Cochain(arity, src, tgt, table)


def dumps(data) -> str:
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc

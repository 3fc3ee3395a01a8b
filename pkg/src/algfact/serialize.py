"""JSON encoding of scalars, algebras, twists and deformations, and the
validation of input documents against the bundled schema."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from . import corpus
from .algebra import BasedAlgebra, basis_tuples, family_commutative_poly, family_q_plane, family_table
from .complex import Cochain
from .deformation import DeformationData
from .lincomb import sort_key
from .scalar import QPoly, QRational, TSeries, parse_rational
from .twist import TwistMap, extend_from_generators


class InputError(ValueError):
    """The document is malformed or describes an invalid object."""


@lru_cache(maxsize=None)
def schema() -> dict:
    return json.loads(resources.files("algfact").joinpath("schema.json").read_text())


def validate(doc) -> None:
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"schema violation at {where}: {exc.message}") from None


# ---------------------------------------------------------------- scalars

def _poly_to_json(p: QPoly) -> dict:
    return {str(e): str(c) for e, c in sorted(p.coefficients().items())}


def _poly_from_json(d: dict) -> QPoly:
    return QPoly({int(e): parse_rational(c) for e, c in d.items()})


def encode_scalar(c):
    if isinstance(c, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(c, (int, Fraction)):
        return str(Fraction(c))
    if isinstance(c, QRational):
        if c.den.is_one() and c.num.is_constant():
            return str(c.num.coeff(0))
        out = {"q_num": _poly_to_json(c.num)}
        if not c.den.is_one():
            out["q_den"] = _poly_to_json(c.den)
        return out
    if isinstance(c, TSeries):
        return {"t": [encode_scalar(x) for x in c.coeffs]}
    raise TypeError(f"cannot encode scalar of type {type(c).__name__}")


def decode_scalar(x):
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return parse_rational(x)
    if isinstance(x, dict):
        if "t" in x:
            return TSeries([decode_scalar(c) for c in x["t"]])
        num = _poly_from_json(x["q_num"])
        den = _poly_from_json(x["q_den"]) if "q_den" in x else None
        return QRational(num, den) if den is not None else QRational.from_poly(num)
    raise InputError(f"not a scalar: {x!r}")


def scalar_text(c) -> str:
    return str(c)


# ---------------------------------------------------------------- keys and vectors

def encode_key(k):
    if isinstance(k, tuple) and k and isinstance(k[0], tuple):
        return [list(m) for m in k]
    return list(k)


def decode_key(k):
    if k and isinstance(k[0], list):
        return tuple(tuple(m) for m in k)
    return tuple(k)


def encode_vector(v: dict) -> list:
    return [{"key": encode_key(k), "c": encode_scalar(v[k])} for k in sorted(v, key=sort_key)]


def decode_vector(items) -> dict:
    out = {}
    for it in items:
        out[decode_key(it["key"])] = decode_scalar(it["c"])
    return out


def encode_args(args) -> list:
    return [list(m) for m in args]


# ---------------------------------------------------------------- algebras

def encode_algebra(alg: BasedAlgebra) -> dict:
    fam = alg.family
    if fam is None:
        raise TypeError(f"{alg.name} has no family descriptor")
    out = {"family": fam["family"], "name": alg.name}
    if fam["family"] == "commutative_poly":
        out["generators"] = list(fam["generators"])
    elif fam["family"] == "q_plane":
        out["generators"] = list(fam["generators"])
        out["q"] = fam["q"] if fam["q"] == "formal" else encode_scalar(fam["q"])
    elif fam["family"] == "table":
        out["basis"] = list(fam["basis"])
        out["unit"] = fam["unit"]
        out["table"] = [
            [{str(k): encode_scalar(c) for k, c in sorted(entry.items())} for entry in row]
            for row in fam["table"]
        ]
    return out


def decode_q(x):
    if x is None or x == "formal":
        return None
    return parse_rational(x)


def decode_algebra(d: dict) -> BasedAlgebra:
    fam = d["family"]
    name = d.get("name")
    try:
        if fam == "commutative_poly":
            return family_commutative_poly(d["generators"], name)
        if fam == "q_plane":
            return family_q_plane(decode_q(d["q"]), tuple(d.get("generators", ("a", "abar"))), name)
        if fam == "table":
            table = [[{int(k): parse_rational(c) for k, c in entry.items()} for entry in row] for row in d["table"]]
            return family_table(d["basis"], table, unit=d.get("unit"), name=name)
    except (ValueError, KeyError, IndexError) as exc:
        raise InputError(f"bad algebra description: {exc}") from None
    raise InputError(f"unknown algebra family {fam!r}")


# ---------------------------------------------------------------- twists

def encode_twist(psi: TwistMap) -> dict:
    """Generator rules read off the map itself."""
    A, B = psi.A, psi.B
    rules = []
    for ga in A.generators:
        for gb in B.generators:
            v = psi(A.generator_monos[ga], B.generator_monos[gb])
            rules.append({"a": ga, "b": gb, "value": encode_vector(v)})
    return {"name": psi.name, "generator_rules": rules}


def decode_twist(d: dict, A: BasedAlgebra, B: BasedAlgebra) -> TwistMap:
    rules = {}
    for r in d["generator_rules"]:
        if r["a"] not in A.generator_monos:
            raise InputError(f"unknown A generator {r['a']!r}")
        if r["b"] not in B.generator_monos:
            raise InputError(f"unknown B generator {r['b']!r}")
        val = decode_vector(r["value"])
        for k in val:
            if len(k) != 2:
                raise InputError(f"twist value key {k} must be a pair [b, a]")
        rules[r["a"], r["b"]] = val
    try:
        return extend_from_generators(A, B, rules, verify_degree=None, name=d.get("name", "psi"))
    except ValueError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------- deformations

_SLOTS = (("mu_A", (2, 0)), ("psi", (1, 1)), ("mu_B", (0, 2)))


def encode_cochain(f: Cochain | None, signature, degree: int | None):
    if f is None:
        return None
    rows = []
    for args in basis_tuples(signature, degree):
        v = f.value(args)
        if v:
            rows.append({"args": encode_args(args), "value": encode_vector(v)})
    return rows


def decode_cochain(rows, m: int, n: int, name: str) -> Cochain | None:
    if rows is None:
        return None
    table = {}
    for r in rows:
        args = tuple(tuple(a) for a in r["args"])
        if len(args) != m + n:
            raise InputError(f"{name}: argument tuple {r['args']} should have {m + n} entries")
        table[args] = decode_vector(r["value"])
    return Cochain.from_table(m, n, table, name)


def encode_deformation(data: DeformationData, table_degree: int | None) -> dict:
    A, B = data.A, data.B
    sigs = {"mu_A": [A, A], "psi": [A, B], "mu_B": [B, B]}
    out = {"name": data.name, "order": data.order, "table_degree": table_degree}
    for slot, _ in _SLOTS:
        series = {"mu_A": data.mu_a, "psi": data.psi_series, "mu_B": data.mu_b}[slot]
        if all(f is None for f in series):
            continue
        out[slot] = [encode_cochain(f, sigs[slot], table_degree) for f in series]
    return out


def decode_deformation(d: dict, psi: TwistMap) -> DeformationData:
    N = d["order"]
    series = {}
    for slot, (m, n) in _SLOTS:
        items = d.get(slot, [])
        if len(items) > N:
            raise InputError(f"{slot} has {len(items)} terms but order is {N}")
        series[slot] = [decode_cochain(rows, m, n, f"{slot}^({i})") for i, rows in enumerate(items, start=1)]
    return DeformationData(psi, N, series["mu_A"], series["psi"], series["mu_B"], d.get("name", ""))


# ---------------------------------------------------------------- documents

def load_document(doc: dict, q_override=None):
    """Validate and build ``(psi, data, entry)`` from an input document.

    ``entry`` is the corpus entry for ``{"corpus": ...}`` documents, else None.
    ``data`` is None when the document has no deformation.
    """
    validate(doc)
    try:
        return _build(doc, q_override)
    except InputError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"invalid document: {exc}") from None


def _build(doc: dict, q_override):
    if "corpus" in doc:
        try:
            entry = corpus.get(doc["corpus"])
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
        params = dict(doc.get("corpus_params", {}))
        if "c" in params:
            params["c"] = parse_rational(params["c"])
        q = q_override if q_override is not None else params.get("q", doc.get("task", {}).get("q"))
        if "q" in entry.defaults:
            params["q"] = decode_q(q)
        elif q is not None and q_override is not None:
            raise InputError(f"corpus entry {entry.id!r} has no q parameter")
        else:
            params.pop("q", None)
        try:
            psi, data = entry(**params)
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad corpus parameters: {exc}") from None
        return psi, data, entry
    if q_override is not None:
        doc = _specialize_document(doc, q_override)
    algs = doc["algebras"]
    A = decode_algebra(algs["A"])
    B = decode_algebra(algs["B"])
    psi = decode_twist(doc["twist"], A, B)
    data = decode_deformation(doc["deformation"], psi) if "deformation" in doc else None
    return psi, data, None


def _specialize_document(doc: dict, q_value) -> dict:
    """Put ``q = q_value`` into the q-plane algebras and every q-dependent
    scalar of an explicit document."""
    qv = decode_q(q_value)
    formal_doc = any(
        v["family"] == "q_plane" and v["q"] == "formal" for v in doc["algebras"].values()
    )
    if qv is None:
        if not formal_doc and any(v["family"] == "q_plane" for v in doc["algebras"].values()):
            raise InputError("cannot make q formal in a document with a specialised q")
        return doc

    def walk(x):
        if isinstance(x, dict):
            if "q_num" in x:
                return encode_scalar(decode_scalar(x).specialize(qv))
            return {k: walk(v) for k, v in x.items()}
        if isinstance(x, list):
            return [walk(v) for v in x]
        return x

    out = walk(doc)
    out["algebras"] = {
        k: (dict(v, q=encode_scalar(qv)) if v["family"] == "q_plane" else v)
        for k, v in out["algebras"].items()
    }
    return out


def export_entry(entry_id: str, degree_cap: int | None = None, **params) -> dict:
    """Explicit document for a corpus entry: algebras, generator rules and
    deformation tables.  Tables reach ``degree_cap + N`` so that twist chains
    started inside the cap stay inside the table."""
    entry = corpus.get(entry_id)
    psi, data = entry(**params)
    cap = entry.degree_cap if degree_cap is None else degree_cap
    fin = psi.A.is_finite and psi.B.is_finite
    table_degree = None if fin else cap + data.order
    doc = {
        "format_version": 1,
        "algebras": {"A": encode_algebra(psi.A), "B": encode_algebra(psi.B)},
        "twist": encode_twist(psi),
        "deformation": encode_deformation(data, table_degree),
        "task": {"degree_cap": None if fin else cap, "order": data.order},
    }
    validate(doc)
    return doc

"""Command-line interface.

Every command reads one JSON document (``--input FILE`` or ``--corpus ID``)
and prints a report.  Exit codes: 0 pass/computed, 1 fail with witness,
2 inconclusive or missing caps, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import corpus
from .cohomology import CapsRequired, cohomology_dim, kernel_dimension
from .complex import CochainComplex
from .deformation import (
    Inconclusive,
    NonRemovable,
    PathMismatch,
    PreconditionError,
    check_order,
    extend_order,
    infinitesimal_cocycle_check,
    obstruction,
    obstruction_is_cocycle,
)
from .scalar import parse_rational
from .serialize import (
    InputError,
    encode_args,
    encode_scalar,
    encode_vector,
    export_entry,
    load_document,
)
from .twist import NonTerminating, check_axioms

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


class CapsMissing(Exception):
    pass


def _witness(w):
    if w is None:
        return None
    return {
        "identity": w.axiom,
        "args": encode_args(w.args) if w.args and isinstance(w.args[0], tuple) else list(w.args),
        "lhs": encode_vector(w.lhs),
        "rhs": encode_vector(w.rhs),
        "order": w.order,
    }


def _report(task, verdict, exit_code, parameters, results=None, witness=None, message=None):
    rep = {"task": task, "verdict": verdict, "exit_code": exit_code, "parameters": parameters}
    rep["results"] = results or {}
    if witness is not None:
        rep["witness"] = witness
    if message:
        rep["message"] = message
    return rep


def _table(cochain, cx: CochainComplex, degree_cap):
    rows = []
    for args in cx.tuples(cochain.m, cochain.n, degree_cap):
        v = cochain.value(args)
        if v:
            rows.append({"args": encode_args(args), "value": encode_vector(v)})
    return rows


# ---------------------------------------------------------------- document plumbing

def _read_doc(args):
    if getattr(args, "corpus_id", None):
        return {"corpus": args.corpus_id}
    if not args.input:
        raise InputError("one of --input FILE or --corpus ID is required")
    try:
        if args.input == "-":
            return json.load(sys.stdin)
        with open(args.input, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.input} is not valid JSON: {exc}") from None


def _setup(args):
    doc = _read_doc(args)
    psi, data, entry = load_document(doc, args.q)
    task = doc.get("task", {})
    fin = psi.A.is_finite and psi.B.is_finite
    if args.degree_cap is not None:
        cap = args.degree_cap
    elif task.get("degree_cap") is not None:
        cap = task["degree_cap"]
    elif entry is not None:
        cap = entry.degree_cap
    else:
        cap = None
    if fin:
        cap = None
    elif cap is None:
        raise CapsMissing(
            f"{psi.A.name} (x) {psi.B.name} is infinite-dimensional: pass --degree-cap "
            "or set task.degree_cap"
        )
    return doc, psi, data, cap, task


def _order(args, task, data, default=None):
    if args.order is not None:
        return args.order
    if task.get("order") is not None:
        return task["order"]
    if default is not None:
        return default
    return data.order if data is not None else 1


def _need_data(data):
    if data is None:
        raise InputError("the document has no deformation section")
    return data


# ---------------------------------------------------------------- commands

def cmd_check_twist(args):
    doc, psi, data, cap, task = _setup(args)
    rep = check_axioms(psi, cap)
    params = {"degree_cap": cap}
    res = {"checked": rep.details.get("checked")}
    if rep.ok:
        return _report("check-twist", "PASS", EXIT_OK, params, res)
    return _report("check-twist", "FAIL", EXIT_FAIL, params, res, _witness(rep.witness))


def cmd_check_deformation(args):
    doc, psi, data, cap, task = _setup(args)
    data = _need_data(data)
    n = _order(args, task, data)
    params = {"degree_cap": cap, "order": n}
    if n > data.order:
        raise InputError(f"order {n} exceeds the deformation order {data.order}")
    rep = check_order(data, n, cap)
    res = {"check_order": rep.verdict, "checked": rep.details.get("checked")}
    if data.order >= 1:
        inf = infinitesimal_cocycle_check(data, cap)
        res["infinitesimal_cocycle"] = inf.verdict
    if rep.ok:
        return _report("check-deformation", "PASS", EXIT_OK, params, res)
    res["first_failing_order"] = rep.details.get("first_failing_order")
    return _report("check-deformation", "FAIL", EXIT_FAIL, params, res, _witness(rep.witness))


def cmd_obstruction(args):
    doc, psi, data, cap, task = _setup(args)
    data = _need_data(data)
    n = _order(args, task, data, default=2)
    params = {"degree_cap": cap, "order": n, "extend": bool(args.extend)}
    try:
        obs = obstruction(data, n, cap)
    except PreconditionError as exc:
        return _report("obstruction", "FAIL", EXIT_FAIL, params, message=f"precondition: {exc}")
    cx = data.complex
    closed = obstruction_is_cocycle(cx, obs, cap)
    res = {
        "paths_agree": obs.agreement.ok,
        "cocycle": closed.verdict,
        "zero": cx.vanishes(obs.total, cap).ok,
        "components": {name: _table(f, cx, cap) for name, f in obs.components().items()},
    }
    if not closed.ok:
        return _report("obstruction", "FAIL", EXIT_FAIL, params, res, _witness(closed.witness))
    if args.extend:
        try:
            ext = extend_order(data, n, cap)
        except NonRemovable as exc:
            res["extension"] = {"status": "non-removable", "row": _row_label(exc.result)}
            return _report("obstruction", "FAIL", EXIT_FAIL, params, res)
        except Inconclusive as exc:
            res["extension"] = {"status": "inconclusive", "detail": str(exc)}
            return _report("obstruction", "INCONCLUSIVE", EXIT_INCONCLUSIVE, params, res)
        sol = ext.solution
        free = kernel_dimension(psi, 2, cap, ext.result.space.shifts)
        res["extension"] = {
            "status": "solved",
            "free_parameters": free,
            "check_order": check_order(ext.data, n, cap).verdict,
            "solution": {
                name: _table(sol[bd], cx, cap)
                for name, bd in (("mu_A", (2, 0)), ("psi", (1, 1)), ("mu_B", (0, 2)))
            },
        }
    return _report("obstruction", "COMPUTED", EXIT_OK, params, res)


def _row_label(result):
    lab = result.witness
    if lab is None:
        return None
    return {
        "bidegree": list(lab.bidegree),
        "args": encode_args(lab.args),
        "output": encode_vector({lab.output: 1})[0]["key"],
        "rhs": encode_scalar(result.witness_value),
    }


def cmd_cohomology(args):
    doc, psi, data, cap, task = _setup(args)
    k = args.k if args.k is not None else task.get("k", args.order if args.order is not None else 2)
    res = cohomology_dim(psi, k, cap)
    params = {"degree_cap": cap, "k": k}
    return _report("cohomology", "COMPUTED", EXIT_OK, params, res.to_json())


def cmd_corpus(args):
    if args.action == "list":
        items = [{"id": e.id, "description": e.description, "degree_cap": e.degree_cap} for e in corpus.ENTRIES.values()]
        return _report("corpus list", "COMPUTED", EXIT_OK, {}, {"entries": items})
    if args.action == "export":
        if not args.entry:
            raise InputError("corpus export needs an entry id")
        params = {}
        if args.q is not None:
            params["q"] = None if args.q == "formal" else _rational(args.q)
        try:
            doc = export_entry(args.entry, args.degree_cap, **params)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
        text = json.dumps(doc, indent=2) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
            return _report("corpus export", "COMPUTED", EXIT_OK, {"entry": args.entry}, {"written": args.output})
        return {"__raw__": text}
    # run-all
    results = {}
    worst = EXIT_OK
    for eid, entry in corpus.ENTRIES.items():
        psi, data = entry()
        cap = entry.degree_cap
        row = {
            "check_twist": check_axioms(psi, cap).verdict,
            "check_order": check_order(data, data.order, cap).verdict,
        }
        if data.order >= 2:
            bound = min(cap, 4) if cap else None
            obs = obstruction(data, 2, bound)
            row["obstruction_2_cocycle"] = obstruction_is_cocycle(data, obs, bound).verdict
        if any(v != "PASS" for v in row.values()):
            worst = EXIT_FAIL
        results[eid] = row
    verdict = "PASS" if worst == EXIT_OK else "FAIL"
    return _report("corpus run-all", verdict, worst, {}, {"entries": results})


def _rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {text!r}") from None


# ---------------------------------------------------------------- output

def _human(rep: dict) -> str:
    lines = [f"{rep['task']}: {rep['verdict']}"]
    for k, v in rep.get("parameters", {}).items():
        lines.append(f"  {k} = {v}")
    if rep.get("message"):
        lines.append(f"  {rep['message']}")
    for k, v in rep.get("results", {}).items():
        if isinstance(v, list) and len(v) > 8:
            lines.append(f"  {k}: {len(v)} entries")
        elif isinstance(v, dict) and any(isinstance(x, list) for x in v.values()):
            lines.append(f"  {k}:")
            for kk, vv in v.items():
                if isinstance(vv, list) and vv and all(isinstance(x, int) for x in vv):
                    lines.append(f"    {kk}: {' x '.join(map(str, vv))}")
                elif isinstance(vv, list):
                    lines.append(f"    {kk}: {len(vv)} nonzero rows")
                else:
                    lines.append(f"    {kk}: {json.dumps(vv)}")
        else:
            lines.append(f"  {k}: {json.dumps(v)}")
    w = rep.get("witness")
    if w:
        lines.append(f"  witness: {w['identity']} at {w['args']}" + (f" (order t^{w['order']})" if w.get("order") is not None else ""))
        lines.append(f"    lhs = {json.dumps(w['lhs'])}")
        lines.append(f"    rhs = {json.dumps(w['rhs'])}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="algfact", description="Exact checks for algebra factorisations and their deformations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, corpus_flag=True):
        sp.add_argument("--input", metavar="FILE", help="input JSON document ('-' for stdin)")
        if corpus_flag:
            sp.add_argument("--corpus", dest="corpus_id", metavar="ID", help="use a corpus entry as the input")
        sp.add_argument("--order", type=int, metavar="N")
        sp.add_argument("--degree-cap", type=int, metavar="D")
        sp.add_argument("--q", metavar="VALUE|formal", help="specialise q, or keep it formal")
        sp.add_argument("--format", choices=["human", "json"], default="human")
        sp.add_argument("--timing", action="store_true", help="append wall-clock time (not part of the report)")

    for name, fn in (
        ("check-twist", cmd_check_twist),
        ("check-deformation", cmd_check_deformation),
        ("obstruction", cmd_obstruction),
        ("cohomology", cmd_cohomology),
    ):
        sp = sub.add_parser(name)
        common(sp)
        sp.set_defaults(func=fn)
        if name == "obstruction":
            sp.add_argument("--extend", action="store_true", help="also solve for the order-n maps")
        if name == "cohomology":
            sp.add_argument("--k", type=int, metavar="K", help="cochain degree (default 2)")

    sp = sub.add_parser("corpus")
    sp.add_argument("action", choices=["list", "export", "run-all"])
    sp.add_argument("entry", nargs="?")
    sp.add_argument("--output", metavar="FILE")
    sp.add_argument("--degree-cap", type=int, metavar="D")
    sp.add_argument("--q", metavar="VALUE|formal")
    sp.add_argument("--format", choices=["human", "json"], default="human")
    sp.add_argument("--timing", action="store_true")
    sp.set_defaults(func=cmd_corpus)
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors (exit 3), not argparse's default 2
        raise InputError(f"{self.prog}: {message}")


def run(argv=None):
    """Parse ``argv``, run the command and return ``(report, exit_code, args)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InputError as exc:
        return _report("usage", "ERROR", EXIT_INPUT, {}, message=str(exc)), EXIT_INPUT, None
    task = args.command if args.command != "corpus" else f"corpus {args.action}"
    try:
        if getattr(args, "q", None) not in (None, "formal"):
            _rational(args.q)
        rep = args.func(args)
    except (CapsMissing, CapsRequired) as exc:
        rep = _report(task, "INCONCLUSIVE", EXIT_INCONCLUSIVE, {}, message=str(exc))
    except (InputError, NonTerminating) as exc:
        rep = _report(task, "ERROR", EXIT_INPUT, {}, message=str(exc))
    except PathMismatch as exc:
        rep = _report(task, "FAIL", EXIT_FAIL, {}, message=str(exc))
    return rep, rep.get("exit_code", EXIT_OK), args


def main(argv=None) -> int:
    start = time.perf_counter()
    rep, code, args = run(argv)
    fmt = args.format if args is not None else "human"
    if "__raw__" in rep:
        sys.stdout.write(rep["__raw__"])
    elif fmt == "json":
        sys.stdout.write(json.dumps(rep, indent=2) + "\n")
    else:
        sys.stdout.write(_human(rep))
    if args is not None and args.timing:
        sys.stderr.write(f"elapsed: {time.perf_counter() - start:.3f}s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

"""JSON (de)serialization for graphs and expressions.

Graph format: ``{"v": [g0, g1, ...], "e": [[i, j], ...], "legs":
{"a": 0, ...}}`` with loops repeating the vertex index.  Expression
format: an object with the ambient space and a term list; each term
carries the display-unit coefficient, the graph, and psi/kappa maps
(psi keys are leg labels or ``e<index>.<side>`` for edge branches).
A term may instead name a class: ``{"coeff": "1/2", "cls": "d_F"}``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .graphs import StableGraph, edge_half, leg_half
from .expressions import (Space, TautExpression, TautMonomial, make_class,
                          monomial_name, name_unit_factor)


def graph_to_json(gr):
    return {"v": list(gr.genera),
            "e": [[u, v] for u, v in gr.edges],
            "legs": {l: v for l, v in gr.legs}}


def graph_from_json(obj):
    return StableGraph(obj.get("v", []),
                       [tuple(e) for e in obj.get("e", [])],
                       list(obj.get("legs", {}).items()))


def _half_key(h):
    if h[0] == "l":
        return h[1]
    return "e%d.%d" % (h[1], h[2])


def _half_from_key(k):
    if k.startswith("e") and "." in k:
        i, s = k[1:].split(".")
        return edge_half(int(i), int(s))
    return leg_half(k)


def expr_to_json(expr):
    terms = []
    for m, c in expr.items_sorted():
        display = c / name_unit_factor(m)
        entry = {"coeff": str(display),
                 "graph": graph_to_json(m.graph),
                 "psi": {_half_key(h): e for h, e in sorted(
                     m.psi.items(), key=repr)},
                 "kappa": {str(v): {str(a): p for a, p in sorted(d.items())}
                           for v, d in sorted(m.kappa.items())}}
        try:
            entry["name"] = monomial_name(m)
        except ValueError:
            pass
        terms.append(entry)
    return {"ambient": {"g": expr.space.g,
                        "markings": list(expr.space.markings)},
            "terms": terms}


def expr_from_json(obj, space=None):
    if space is None:
        amb = obj["ambient"]
        space = Space(amb["g"], amb.get("markings", []))
    total = TautExpression(space, {})
    for entry in obj.get("terms", []):
        c = Fraction(entry["coeff"])
        if "cls" in entry:
            total = total + c * make_class(entry["cls"], space)
            continue
        gr = graph_from_json(entry["graph"])
        psi = {_half_from_key(k): e for k, e in entry.get("psi", {}).items()}
        kappa = {int(v): {int(a): p for a, p in d.items()}
                 for v, d in entry.get("kappa", {}).items()}
        m = TautMonomial(gr, psi, kappa)
        total = total + TautExpression(space,
                                       {m: c * name_unit_factor(m)})
    return total


def load_expression(path):
    with open(path, "r", encoding="utf-8") as fh:
        return expr_from_json(json.load(fh))


def dump_expression(expr, fh=None):
    obj = expr_to_json(expr)
    text = json.dumps(obj, indent=2, sort_keys=True)
    if fh is not None:
        fh.write(text + "\n")
    return text

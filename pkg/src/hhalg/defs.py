"""Definition files: a strict JSON format for bases, algebras, and modules.

A definition document has top-level keys `base`, `algebras`, `modules`,
`tasks`.  Relation strings use a small noncommutative-polynomial grammar:

    expr    = [ "-" ] term { ("+" | "-") term } ;
    term    = factor { "*" factor } ;
    factor  = atom [ "^" [ "-" ] integer ] ;
    atom    = integer | identifier | "(" expr ")" ;

Identifiers are generator names or the Laurent generator; negative powers
are allowed on the Laurent generator only.  Every relation must be
homogeneous; violations report both offending degrees.  parse/emit are
mutually inverse on the canonical form, so emit(parse(text)) re-parses to
an equal definition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import AlgebraPresentation, GradedAlgebra, realize
from .base import BaseRing, HomogeneousMap, LaurentGenerator
from .dg import QuotientDGA, make_quotient_dga
from .ground import GroundRing
from .morita import ModuleOverAlgebra


class DefinitionError(Exception):
    def __init__(self, message, line=None, col=None):
        self.line, self.col = line, col
        if line is not None:
            message = f"line {line}, column {col}: {message}"
        elif col is not None:
            message = f"column {col}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# relation expressions


def _tokenize(text):
    toks, i = [], 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "+-*^()":
            toks.append((c, c, i))
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("ident", text[i:j], i))
            i = j
        else:
            raise DefinitionError(f"unexpected character {c!r}", col=i)
    toks.append(("end", None, len(text)))
    return toks


class _RelParser:
    """Recursive descent over the relation grammar; values are polynomials
    {(word, vexp): int} with words as tuples of generator names."""

    def __init__(self, text, gen_names, laurent):
        self.toks = _tokenize(text)
        self.pos = 0
        self.gens = set(gen_names)
        self.laurent = laurent

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        k, v, c = self.toks[self.pos]
        if kind is not None and k != kind:
            raise DefinitionError(f"expected {kind}, found {k!r}", col=c)
        self.pos += 1
        return k, v, c

    def parse(self):
        p = self.expr()
        k, _, c = self.peek()
        if k != "end":
            raise DefinitionError(f"trailing input at {k!r}", col=c)
        return p

    def expr(self):
        neg = False
        if self.peek()[0] == "-":
            self.take()
            neg = True
        p = self.term()
        if neg:
            p = _pneg(p)
        while self.peek()[0] in ("+", "-"):
            op, _, _ = self.take()
            q = self.term()
            p = _padd(p, q if op == "+" else _pneg(q))
        return p

    def term(self):
        p = self.factor()
        while self.peek()[0] == "*":
            self.take()
            p = _pmul(p, self.factor())
        return p

    def factor(self):
        p, col = self.atom()
        if self.peek()[0] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            _, e, ecol = self.take("int")
            p = _ppow(p, sign * e, col if sign < 0 else ecol)
        return p

    def atom(self):
        k, v, c = self.peek()
        if k == "int":
            self.take()
            return {((), 0): v}, c
        if k == "ident":
            self.take()
            if self.laurent and v == self.laurent:
                return {((), 1): 1}, c
            if v not in self.gens:
                raise DefinitionError(f"unknown symbol {v!r}", col=c)
            return {((v,), 0): 1}, c
        if k == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p, c
        raise DefinitionError(f"expected a term, found {k!r}", col=c)


def _padd(p, q):
    out = dict(p)
    for k, c in q.items():
        out[k] = out.get(k, 0) + c
        if out[k] == 0:
            del out[k]
    return out


def _pneg(p):
    return {k: -c for k, c in p.items()}


def _pmul(p, q):
    out = {}
    for (w1, v1), c1 in p.items():
        for (w2, v2), c2 in q.items():
            k = (w1 + w2, v1 + v2)
            out[k] = out.get(k, 0) + c1 * c2
            if out[k] == 0:
                del out[k]
    return out


def _ppow(p, e, col):
    if e >= 0:
        out = {((), 0): 1}
        for _ in range(e):
            out = _pmul(out, p)
        return out
    if len(p) == 1:
        ((w, v), c), = p.items()
        if not w and c in (1, -1):
            return {((), v * e): c ** (e % 2 or 2) if c == -1 else 1}
    raise DefinitionError(
        "negative powers are only allowed on the Laurent generator", col=col
    )


def parse_relation(text, gen_names, laurent=None):
    """Canonical term list ((coeff, word, vexp), ...) of a relation string."""
    poly = _RelParser(text, gen_names, laurent).parse()
    return tuple(sorted(
        (c, w, v) for (w, v), c in poly.items()
    ))


def render_relation(terms, laurent=None) -> str:
    """The canonical string form; parse_relation inverts it."""
    if not terms:
        return "0"
    parts = []
    for c, word, vexp in terms:
        pieces = []
        if abs(c) != 1 or (not word and not vexp):
            pieces.append(str(abs(c)))
        if vexp:
            pieces.append(laurent if vexp == 1 else f"{laurent}^{vexp}")
        pieces.extend(word)
        body = "*".join(pieces)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# definition documents


@dataclass
class DefinitionFile:
    base: tuple
    algebras: tuple  # of (name, spec) pairs, specs as canonical tuples
    modules: tuple
    tasks: tuple

    def emit(self) -> str:
        """Canonical JSON text; parse_definition(emit()) equals self."""
        doc = {"base": _base_doc(self.base), "algebras": {}, "modules": {},
               "tasks": [dict(t) for t in self.tasks]}
        for name, spec in self.algebras:
            s = dict(spec)
            a = {}
            if "dg" in s:
                a["dg"] = dict(s["dg"])
            else:
                a["generators"] = [list(gd) for gd in s["generators"]]
                laurent = _spec_laurent(s.get("base", self.base))
                a["relations"] = [render_relation(r, laurent)
                                  for r in s["relations"]]
                if s.get("truncation") is not None:
                    a["truncation"] = s["truncation"]
            if "base" in s:
                a["base"] = _base_doc(s["base"])
            doc["algebras"][name] = a
        for name, spec in self.modules:
            s = dict(spec)
            doc["modules"][name] = {
                "over": s["over"],
                "side": s["side"],
                "generators": [list(gd) for gd in s["generators"]],
                "action": {
                    gen: [list(e) for e in entries]
                    for gen, entries in s["action"]
                },
            }
        if not doc["modules"]:
            del doc["modules"]
        if not doc["tasks"]:
            del doc["tasks"]
        return json.dumps(doc, indent=2, sort_keys=True)


def _base_doc(base_spec):
    ground, laurent = base_spec
    doc = {"ground": ground}
    if laurent:
        doc["laurent"] = {"name": laurent[0], "degree": laurent[1]}
    return doc


def _spec_laurent(base_spec):
    return base_spec[1][0] if base_spec[1] else None


def _parse_base(doc, where):
    if not isinstance(doc, dict) or "ground" not in doc:
        raise DefinitionError(f"{where}: base needs a 'ground' key")
    ground = doc["ground"]
    if ground not in ("Z", "Q") and not (
        ground.startswith("F") and ground[1:].isdigit()
    ):
        raise DefinitionError(f"{where}: unknown ground ring {ground!r}")
    laurent = None
    if "laurent" in doc:
        l = doc["laurent"]
        if not isinstance(l, dict) or "name" not in l or "degree" not in l:
            raise DefinitionError(f"{where}: laurent needs 'name' and 'degree'")
        if not isinstance(l["degree"], int) or l["degree"] <= 0 or l["degree"] % 2:
            raise DefinitionError(
                f"{where}: laurent degree must be a positive even integer"
            )
        laurent = (str(l["name"]), l["degree"])
    extra = set(doc) - {"ground", "laurent"}
    if extra:
        raise DefinitionError(f"{where}: unknown base keys {sorted(extra)}")
    return (ground, laurent)


def _parse_generators(doc, where):
    gens = []
    for gd in doc:
        if (not isinstance(gd, (list, tuple)) or len(gd) != 2
                or not isinstance(gd[1], int)):
            raise DefinitionError(f"{where}: generators are [name, degree] pairs")
        gens.append((str(gd[0]), gd[1]))
    names = [n for n, _ in gens]
    if len(set(names)) != len(names):
        raise DefinitionError(f"{where}: duplicate generator names")
    return tuple(gens)


def _check_homogeneous(terms, degs, laurent_deg, where):
    rel_deg = None
    for _, word, vexp in terms:
        d = sum(degs[n] for n in word) + vexp * (laurent_deg or 0)
        if vexp and not laurent_deg:
            raise DefinitionError(f"{where}: Laurent power over a plain base")
        if rel_deg is None:
            rel_deg = d
        elif d != rel_deg:
            raise DefinitionError(
                f"{where}: relation not homogeneous -- "
                f"term of degree {d} vs term of degree {rel_deg}"
            )


def parse_definition(text: str) -> DefinitionFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DefinitionError(e.msg, line=e.lineno, col=e.colno) from None
    if not isinstance(doc, dict):
        raise DefinitionError("definition must be a JSON object")
    extra = set(doc) - {"base", "algebras", "modules", "tasks"}
    if extra:
        raise DefinitionError(f"unknown top-level keys {sorted(extra)}")
    if "base" not in doc or "algebras" not in doc:
        raise DefinitionError("definition needs 'base' and 'algebras'")
    base = _parse_base(doc["base"], "base")

    algebras = []
    for name, a in doc["algebras"].items():
        where = f"algebra {name!r}"
        if not isinstance(a, dict):
            raise DefinitionError(f"{where}: must be an object")
        abase = _parse_base(a["base"], where) if "base" in a else base
        spec = {}
        if "base" in a:
            spec["base"] = abase
        if "dg" in a:
            dg = a["dg"]
            extra = set(a) - {"dg", "base"}
            if extra:
                raise DefinitionError(f"{where}: unknown keys {sorted(extra)}")
            if (not isinstance(dg, dict)
                    or not {"x", "w"} <= set(dg)
                    or set(dg) - {"x", "w", "x_degree"}):
                raise DefinitionError(f"{where}: dg needs keys x, w [, x_degree]")
            spec["dg"] = {"x": dg["x"], "w": dg["w"],
                          "x_degree": dg.get("x_degree", 0)}
        else:
            extra = set(a) - {"generators", "relations", "truncation", "base"}
            if extra:
                raise DefinitionError(f"{where}: unknown keys {sorted(extra)}")
            gens = _parse_generators(a.get("generators", []), where)
            degs = dict(gens)
            laurent = abase[1]
            rels = []
            for i, r in enumerate(a.get("relations", [])):
                rwhere = f"{where}, relation {i}"
                try:
                    terms = parse_relation(str(r), degs,
                                           laurent[0] if laurent else None)
                except DefinitionError as e:
                    raise DefinitionError(f"{rwhere}: {e}") from None
                _check_homogeneous(terms, degs,
                                   laurent[1] if laurent else 0, rwhere)
                rels.append(terms)
            trunc = a.get("truncation")
            if trunc is not None and (not isinstance(trunc, int) or trunc <= 0):
                raise DefinitionError(f"{where}: truncation must be a positive integer")
            if gens and not rels and trunc is None:
                raise DefinitionError(
                    f"{where}: a free algebra requires a 'truncation' field"
                )
            spec.update({"generators": gens, "relations": tuple(rels),
                         "truncation": trunc})
        algebras.append((name, spec))
    if len({n for n, _ in algebras}) != len(algebras):
        raise DefinitionError("duplicate algebra names")

    alg_names = {n for n, _ in algebras}
    modules = []
    for name, m in (doc.get("modules") or {}).items():
        where = f"module {name!r}"
        if not isinstance(m, dict) or "over" not in m:
            raise DefinitionError(f"{where}: needs an 'over' key")
        if m["over"] not in alg_names:
            raise DefinitionError(f"{where}: unknown algebra {m['over']!r}")
        extra = set(m) - {"over", "side", "generators", "action"}
        if extra:
            raise DefinitionError(f"{where}: unknown keys {sorted(extra)}")
        side = m.get("side", "left")
        if side not in ("left", "right"):
            raise DefinitionError(f"{where}: side must be 'left' or 'right'")
        gens = _parse_generators(m.get("generators", []), where)
        action = []
        for gname, entries in sorted((m.get("action") or {}).items()):
            rows = []
            for e in entries:
                if (not isinstance(e, (list, tuple)) or len(e) != 3
                        or not all(isinstance(x, int) for x in e)):
                    raise DefinitionError(
                        f"{where}: action entries are [target, source, coeff]"
                    )
                rows.append(tuple(e))
            action.append((str(gname), tuple(sorted(rows))))
        modules.append((name, {"over": m["over"], "side": side,
                               "generators": gens, "action": tuple(action)}))

    tasks = []
    for i, t in enumerate(doc.get("tasks") or []):
        if not isinstance(t, dict) or "command" not in t:
            raise DefinitionError(f"task {i}: needs a 'command' key")
        for key, val in t.items():
            if key != "command" and key in ("R", "A", "E_R", "E_A", "algebra",
                                            "module"):
                pool = alg_names if key in ("R", "A", "algebra") else {
                    n for n, _ in modules}
                if val not in pool:
                    raise DefinitionError(f"task {i}: unknown name {val!r}")
        tasks.append(tuple(sorted(t.items())))

    # canonical order, so parse and emit are mutually inverse
    algebras.sort(key=lambda kv: kv[0])
    modules.sort(key=lambda kv: kv[0])
    return DefinitionFile(base, tuple(algebras), tuple(modules), tuple(tasks))


# ---------------------------------------------------------------------------
# realization


def build_base(base_spec) -> BaseRing:
    ground, laurent = base_spec
    try:
        if ground == "Z":
            g = GroundRing.integers()
        elif ground == "Q":
            g = GroundRing.rationals()
        else:
            g = GroundRing.prime_field(int(ground[1:]))
    except ValueError as e:
        raise DefinitionError(str(e)) from None
    l = LaurentGenerator(laurent[0], laurent[1]) if laurent else None
    return BaseRing(g, l)


def build_algebra(df: DefinitionFile, name: str):
    """Realize one algebra entry: a GradedAlgebra, or a QuotientDGA for dg.

    An entry with generators but no relations is the free algebra truncated
    at the mandatory `truncation` bound (internal degrees past it vanish).
    """
    spec = dict(df.algebras)[name]
    base = build_base(spec.get("base", df.base))
    if "dg" in spec:
        dg = spec["dg"]
        return make_quotient_dga(base, dg["x"], dg["w"], dg["x_degree"])
    pres = AlgebraPresentation(base, spec["generators"], spec["relations"],
                               spec["truncation"])
    return realize(pres)


def build_module(df: DefinitionFile, name: str, built: dict) -> ModuleOverAlgebra:
    """Realize a module entry over an already-built algebra.

    The action is given on generators; actions of longer monomials are
    composed along their words (left to right for left modules).
    """
    spec = dict(df.modules)[name]
    A = built[spec["over"]]
    if isinstance(A, QuotientDGA):
        raise DefinitionError(f"module {name!r}: modules over dg entries "
                              "are not supported")
    from .base import GradedFreeModule
    M = GradedFreeModule(A.base, spec["generators"])
    g = A.base.ground
    gen_maps = {}
    degs = dict(spec["generators"])
    alg_degs = {n: d for n, d in A.monomials}
    for gname, rows in spec["action"]:
        if gname not in alg_degs:
            raise DefinitionError(
                f"module {name!r}: unknown algebra monomial {gname!r}")
        entries = {(i, j): g.normalize(c) for i, j, c in rows}
        gen_maps[gname] = HomogeneousMap(M, M, alg_degs[gname], entries)
    action = {}
    for idx, (mname, mdeg) in enumerate(A.monomials):
        if mname == "1":
            action[idx] = HomogeneousMap.identity(M)
            continue
        word = mname.split("*")
        hm = HomogeneousMap.identity(M)
        seq = word if spec["side"] == "right" else reversed(word)
        for w in seq:
            if w not in gen_maps:
                hm = None
                break
            hm = gen_maps[w].compose(hm)
        if hm is None or hm.is_zero():
            continue
        if hm.degree != mdeg:
            hm = HomogeneousMap(M, M, mdeg, hm.entries)
        action[idx] = hm
    return ModuleOverAlgebra(A, M, action, spec["side"])

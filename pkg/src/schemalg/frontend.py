"""From JSON Schema documents to algebra environments.

Two steps: :func:`normalize_refs` rewrites a document so that every
``$ref`` is either ``#`` or ``#/definitions/<name>``, copying any other
referenced subschema into the root ``definitions``; :func:`translate` then
maps the normalized document keyword by keyword.
"""

from __future__ import annotations

import copy
import re
import warnings
from fractions import Fraction
from urllib.parse import unquote, urldefrag, urljoin

from . import regex as rx
from .algebra import (
    FALSE,
    INF,
    TRUE,
    And,
    Betw,
    Contains,
    Environment,
    IsBoolValue,
    Ite,
    MulOf,
    Not,
    Or,
    PattReq,
    PatternAssert,
    Pro,
    Prop,
    Ref,
    SchemaError,
    TypeAssert,
    UniqueItems,
    XBetw,
    check_env,
    conj,
    disj,
    implies_type,
    name_pattern,
    not_type,
)
from .ir import EXTENSION_KEYWORDS, translate_extension
from .json_model import Kind, kind_of, to_fraction

ROOT_VAR = "xroot"


class UnsupportedKeyword(SchemaError):
    pass


class UnresolvedRef(SchemaError):
    pass


class UnknownKeywordWarning(UserWarning):
    pass


# keywords whose values are schemas, by shape
SINGLE = ("additionalItems", "additionalProperties", "contains", "propertyNames", "not", "if", "then", "else")
MAPS = ("properties", "patternProperties", "definitions")
LISTS = ("allOf", "anyOf", "oneOf")

ANNOTATIONS = {
    "$schema", "$id", "id", "title", "description", "default", "examples", "$comment",
    "readOnly", "writeOnly", "format", "contentMediaType", "contentEncoding",
    "definitions", "deprecated",
}
STRUCTURAL_UNSUPPORTED = {
    "$dynamicRef", "$dynamicAnchor", "$recursiveRef", "$recursiveAnchor",
    "unevaluatedProperties", "unevaluatedItems", "dependentSchemas",
    "dependentRequired", "prefixItems", "$defs",
}


def subschemas(node, path=()):
    """(path, subschema) for each immediate subschema position of node."""
    if not isinstance(node, dict) or "$ref" in node:
        return
    for key in SINGLE:
        if key in node:
            yield path + (key,), node[key]
    for key in MAPS:
        if isinstance(node.get(key), dict):
            for k, v in node[key].items():
                yield path + (key, k), v
    for key in LISTS:
        if isinstance(node.get(key), list):
            for i, v in enumerate(node[key]):
                yield path + (key, i), v
    items = node.get("items")
    if isinstance(items, list):
        for i, v in enumerate(items):
            yield path + ("items", i), v
    elif items is not None:
        yield path + ("items",), items
    deps = node.get("dependencies")
    if isinstance(deps, dict):
        for k, v in deps.items():
            if not isinstance(v, list):
                yield path + ("dependencies", k), v


def _resolve_uri(base: str, ref: str) -> str:
    if ref.startswith("#"):
        return urldefrag(base)[0] + ref
    if re.match(r"^[A-Za-z][A-Za-z0-9+.-]*:", ref):
        return ref
    return urljoin(base, ref)


def _unescape(token: str) -> str:
    return unquote(token).replace("~1", "/").replace("~0", "~")


def _escape(token: str) -> str:
    return token.replace("~", "~0").replace("/", "~1")


class _Resolver:
    def __init__(self, root, documents):
        self.docs = {"": root}
        self.ids = {}
        self.bases = {}
        self.external = dict(documents or {})
        self._index("", root, "", ())

    def _index(self, doc_key, node, base, path):
        if isinstance(node, dict) and "$ref" not in node and isinstance(node.get("$id"), str):
            base = _resolve_uri(base, node["$id"])
            uri, frag = urldefrag(base)
            if frag:
                self.ids.setdefault(base, (doc_key, path))
            else:
                self.ids.setdefault(uri, (doc_key, path))
        if not path and doc_key == "":
            self.ids.setdefault(urldefrag(base)[0], (doc_key, path))
            self.ids.setdefault("", (doc_key, path))
        self.bases[(doc_key, path)] = base
        for sub_path, sub in subschemas(node, path):
            self._index(doc_key, sub, base, sub_path)

    def node(self, loc):
        doc_key, path = loc
        node = self.docs[doc_key]
        for p in path:
            node = node[p]
        return node

    def resolve(self, loc, ref: str):
        full = _resolve_uri(self.bases.get(loc, ""), ref)
        uri, frag = urldefrag(full)
        if frag and not frag.startswith("/"):
            target = self.ids.get(full)
            if target is None:
                raise UnresolvedRef(f"cannot resolve $ref {ref!r}")
            return target
        start = self.ids.get(uri)
        if start is None:
            if uri in self.external:
                self.docs[uri] = self.external.pop(uri)
                self.ids[uri] = (uri, ())
                self._index(uri, self.docs[uri], uri, ())
                start = (uri, ())
            else:
                raise UnresolvedRef(f"cannot resolve $ref {ref!r} (no document {uri!r})")
        doc_key, path = start
        node = self.node(start)
        path = list(path)
        if frag:
            for token in frag.split("/")[1:]:
                token = _unescape(token)
                if isinstance(node, list):
                    try:
                        token = int(token)
                        node = node[token]
                    except (ValueError, IndexError):
                        raise UnresolvedRef(f"cannot resolve $ref {ref!r}") from None
                elif isinstance(node, dict) and token in node:
                    node = node[token]
                else:
                    raise UnresolvedRef(f"cannot resolve $ref {ref!r}")
                path.append(token)
        if not isinstance(node, (dict, bool)):
            raise UnresolvedRef(f"$ref {ref!r} does not point to a schema")
        loc = (doc_key, tuple(path))
        if loc not in self.bases:
            self._index(doc_key, node, self.bases.get(start, uri), loc[1])
        return loc


def normalize_refs(doc, documents=None):
    """Rewrite references so each is ``#`` or ``#/definitions/<name>``.

    ``documents`` maps URIs to further documents that references may reach.
    Referenced locations other than the root and root definitions are copied
    into the root definitions under fresh names.  Only schema positions are
    traversed, so a property literally named ``$ref`` is left alone.
    """
    if not isinstance(doc, dict):
        return doc
    res = _Resolver(doc, documents)
    root_defs = doc.get("definitions") if isinstance(doc.get("definitions"), dict) else {}
    names = {}
    taken = set(root_defs)
    pending = []

    def name_for(loc):
        doc_key, path = loc
        if doc_key == "" and not path:
            return None
        if doc_key == "" and len(path) == 2 and path[0] == "definitions":
            return path[1]
        if loc not in names:
            base = "/".join(str(p) for p in path) or "root"
            if doc_key:
                base = f"{doc_key}#{base}"
            name = base
            i = 1
            while name in taken:
                i += 1
                name = f"{base}~{i}"
            taken.add(name)
            names[loc] = name
            pending.append(loc)
        return names[loc]

    def rewrite(loc):
        node = res.node(loc)
        if not isinstance(node, dict):
            return node
        if "$ref" in node and isinstance(node["$ref"], str):
            name = name_for(res.resolve(loc, node["$ref"]))
            return {"$ref": "#" if name is None else "#/definitions/" + _escape(name)}
        out = {}
        for key, value in node.items():
            if key == "$id":
                continue
            out[key] = copy.deepcopy(value)
        for sub_path, _ in subschemas(node, ()):
            target = out
            for p in sub_path[:-1]:
                target = target[p]
            target[sub_path[-1]] = rewrite((loc[0], loc[1] + sub_path))
        return out

    out = rewrite(("", ()))
    defs = dict(out.get("definitions", {})) if isinstance(out.get("definitions"), dict) else {}
    if "$ref" in doc:
        # a root $ref hides its siblings, but root definitions stay addressable
        for key in root_defs:
            defs[key] = rewrite(("", ("definitions", key)))
    done = set()
    while pending:
        loc = pending.pop(0)
        if loc in done:
            continue
        done.add(loc)
        defs[names[loc]] = rewrite(loc)
    if defs:
        out["definitions"] = defs
    return out


# translation

def _number(v, keyword):
    if isinstance(v, bool) or kind_of(v) is not Kind.NUM:
        raise SchemaError(f"{keyword} must be a number")
    return to_fraction(v)


def _count(v, keyword):
    q = _number(v, keyword)
    if q < 0 or q.denominator != 1:
        raise SchemaError(f"{keyword} must be a non-negative integer")
    return int(q)


def const_schema(v):
    """The schema satisfied exactly by the JSON value v."""
    k = kind_of(v)
    if k is Kind.NULL:
        return TypeAssert(Kind.NULL)
    if k is Kind.BOOL:
        return And((TypeAssert(Kind.BOOL), IsBoolValue(bool(v))))
    if k is Kind.NUM:
        q = to_fraction(v)
        return And((TypeAssert(Kind.NUM), Betw(q, q)))
    if k is Kind.STR:
        return And((TypeAssert(Kind.STR), PatternAssert(rx.literal(v))))
    if k is Kind.ARR:
        n = len(v)
        return And((TypeAssert(Kind.ARR), Contains(n, n, TRUE), Ite(tuple(const_schema(x) for x in v), FALSE)))
    n = len(v)
    parts = [TypeAssert(Kind.OBJ), Pro(n, n)]
    parts += [PattReq(name_pattern(key), const_schema(x)) for key, x in v.items()]
    return And(tuple(parts))


_TYPE_NAMES = {
    "null": Kind.NULL,
    "boolean": Kind.BOOL,
    "number": Kind.NUM,
    "string": Kind.STR,
    "object": Kind.OBJ,
    "array": Kind.ARR,
}


def _type_schema(name):
    if name == "integer":
        return And((TypeAssert(Kind.NUM), MulOf(Fraction(1))))
    if name not in _TYPE_NAMES:
        raise SchemaError(f"unknown type {name!r}")
    return TypeAssert(_TYPE_NAMES[name])


class _Translator:
    def __init__(self, doc):
        self.doc = doc
        defs = doc.get("definitions", {}) if isinstance(doc, dict) else {}
        self.var = {}
        used = {ROOT_VAR}
        for k in defs:
            name = k
            while name in used:
                name = name + "'"
            used.add(name)
            self.var[k] = name

    def ref(self, target):
        if target == "#":
            return Ref(ROOT_VAR)
        if target.startswith("#/definitions/"):
            key = _unescape(target[len("#/definitions/"):])
            if key in self.var:
                return Ref(self.var[key])
        raise UnresolvedRef(f"$ref {target!r} is not normalized; run normalize_refs first")

    def tr(self, node):
        if node is True:
            return TRUE
        if node is False:
            return FALSE
        if not isinstance(node, dict):
            raise SchemaError(f"not a schema: {node!r}")
        if "$ref" in node:
            return self.ref(node["$ref"])
        parts = []
        for key, value in node.items():
            if key in STRUCTURAL_UNSUPPORTED:
                raise UnsupportedKeyword(f"keyword {key!r} is not supported")
            if key in EXTENSION_KEYWORDS:
                parts.append(translate_extension(key, value, self.tr))
                continue
            handler = getattr(self, "kw_" + key.lstrip("$"), None) if key in KEYWORDS else None
            if handler is not None:
                parts.append(handler(value, node))
            elif key not in ANNOTATIONS and key not in COMPANIONS:
                warnings.warn(f"ignoring unknown keyword {key!r}", UnknownKeywordWarning, stacklevel=2)
        return conj(*parts) if parts else TRUE

    def kw_type(self, value, node):
        names = value if isinstance(value, list) else [value]
        return disj(*(_type_schema(n) for n in names)) if names else FALSE

    def kw_enum(self, value, node):
        if not isinstance(value, list):
            raise SchemaError("enum must be an array")
        return disj(*(const_schema(v) for v in value))

    def kw_const(self, value, node):
        return const_schema(value)

    def kw_multipleOf(self, value, node):
        n = _number(value, "multipleOf")
        if n <= 0:
            raise SchemaError("multipleOf must be positive")
        return MulOf(n)

    def kw_maximum(self, value, node):
        if node.get("exclusiveMaximum") is True:
            return XBetw(-INF, _number(value, "maximum"))
        return Betw(-INF, _number(value, "maximum"))

    def kw_minimum(self, value, node):
        if node.get("exclusiveMinimum") is True:
            return XBetw(_number(value, "minimum"), INF)
        return Betw(_number(value, "minimum"), INF)

    def kw_exclusiveMaximum(self, value, node):
        if isinstance(value, bool):
            return TRUE
        return XBetw(-INF, _number(value, "exclusiveMaximum"))

    def kw_exclusiveMinimum(self, value, node):
        if isinstance(value, bool):
            return TRUE
        return XBetw(_number(value, "exclusiveMinimum"), INF)

    def kw_maxLength(self, value, node):
        return PatternAssert(rx.length_between(0, _count(value, "maxLength")))

    def kw_minLength(self, value, node):
        return PatternAssert(rx.length_between(_count(value, "minLength"), None))

    def kw_pattern(self, value, node):
        return PatternAssert(rx.parse_pattern(value))

    def kw_items(self, value, node):
        if isinstance(value, list):
            tail = self.tr(node["additionalItems"]) if "additionalItems" in node else TRUE
            return Ite(tuple(self.tr(v) for v in value), tail)
        return Ite((), self.tr(value))

    def kw_additionalItems(self, value, node):
        return TRUE  # handled with items

    def kw_maxItems(self, value, node):
        return Contains(0, _count(value, "maxItems"), TRUE)

    def kw_minItems(self, value, node):
        return Contains(_count(value, "minItems"), INF, TRUE)

    def kw_uniqueItems(self, value, node):
        return UniqueItems() if value is True else TRUE

    def kw_contains(self, value, node):
        lo = _count(node.get("minContains", 1), "minContains")
        hi = _count(node["maxContains"], "maxContains") if "maxContains" in node else INF
        return Contains(lo, hi, self.tr(value))

    def kw_maxProperties(self, value, node):
        return Pro(0, _count(value, "maxProperties"))

    def kw_minProperties(self, value, node):
        return Pro(_count(value, "minProperties"), INF)

    def kw_required(self, value, node):
        if not isinstance(value, list):
            raise SchemaError("required must be an array")
        if not value:
            return TRUE
        return implies_type(Kind.OBJ, conj(*(Not(Prop(name_pattern(k), FALSE)) for k in value)))

    def kw_properties(self, value, node):
        return conj(*(Prop(name_pattern(k), self.tr(s)) for k, s in value.items()))

    def kw_patternProperties(self, value, node):
        return conj(*(Prop(rx.parse_pattern(r), self.tr(s)) for r, s in value.items()))

    def kw_additionalProperties(self, value, node):
        covered = [name_pattern(k) for k in node.get("properties", {})]
        covered += [rx.parse_pattern(r) for r in node.get("patternProperties", {})]
        return Prop(rx.compl(rx.union(*covered)), self.tr(value))

    def kw_dependencies(self, value, node):
        parts = []
        for k, dep in value.items():
            absent = Prop(name_pattern(k), FALSE)
            if isinstance(dep, list):
                then = self.kw_required(dep, node)
            else:
                then = self.tr(dep)
            parts.append(disj(absent, then))
        return conj(*parts)

    def kw_propertyNames(self, value, node):
        names = string_language(value, self.doc)
        return Prop(rx.compl(names), FALSE)

    def kw_if(self, value, node):
        cond = self.tr(value)
        then = self.tr(node["then"]) if "then" in node else TRUE
        other = self.tr(node["else"]) if "else" in node else TRUE
        return disj(conj(cond, then), conj(Not(cond), other))

    def kw_then(self, value, node):
        return TRUE

    kw_else = kw_then

    def kw_allOf(self, value, node):
        return conj(*(self.tr(s) for s in value))

    def kw_anyOf(self, value, node):
        return disj(*(self.tr(s) for s in value))

    def kw_oneOf(self, value, node):
        subs = [self.tr(s) for s in value]
        return disj(*(
            conj(s, *(Not(t) for j, t in enumerate(subs) if j != i)) for i, s in enumerate(subs)
        ))

    def kw_not(self, value, node):
        return Not(self.tr(value))


KEYWORDS = {
    "type", "enum", "const", "multipleOf", "maximum", "minimum", "exclusiveMaximum",
    "exclusiveMinimum", "maxLength", "minLength", "pattern", "items", "additionalItems",
    "maxItems", "minItems", "uniqueItems", "contains", "maxProperties", "minProperties",
    "required", "properties", "patternProperties", "additionalProperties", "dependencies",
    "propertyNames", "if", "then", "else", "allOf", "anyOf", "oneOf", "not",
}
# read by another keyword's handler
COMPANIONS = {"minContains", "maxContains"}


def translate(doc, documents=None) -> Environment:
    """Translate a JSON Schema document to an environment rooted at ``xroot``.

    References are normalized first, so ``doc`` may use any reference form
    that :func:`normalize_refs` resolves.
    """
    doc = normalize_refs(doc, documents)
    t = _Translator(doc)
    defs = {ROOT_VAR: t.tr(doc)}
    if isinstance(doc, dict):
        for k, s in doc.get("definitions", {}).items():
            defs[t.var[k]] = t.tr(s)
    env = Environment(defs, ROOT_VAR)
    check_env(env)
    return env


def string_language(node, doc, seen=()) -> rx.Regex:
    """The set of strings satisfying a schema, as a regular language.

    Raises UnsupportedKeyword when the answer depends on something that is
    not regular, such as a recursive reference.
    """
    if node is True:
        return rx.UNIVERSAL
    if node is False:
        return rx.EMPTY
    if "$ref" in node:
        target = node["$ref"]
        if target in seen:
            raise UnsupportedKeyword("recursive propertyNames schema")
        if target == "#":
            sub = doc
        else:
            sub = doc["definitions"][_unescape(target[len("#/definitions/"):])]
        return string_language(sub, doc, seen + (target,))
    parts = [rx.UNIVERSAL]
    for key, value in node.items():
        if key == "type":
            names = value if isinstance(value, list) else [value]
            parts.append(rx.UNIVERSAL if "string" in names else rx.EMPTY)
        elif key == "pattern":
            parts.append(rx.parse_pattern(value))
        elif key == "minLength":
            parts.append(rx.length_between(_count(value, key), None))
        elif key == "maxLength":
            parts.append(rx.length_between(0, _count(value, key)))
        elif key in ("const", "enum"):
            values = [value] if key == "const" else value
            parts.append(rx.union(*(rx.literal(v) for v in values if isinstance(v, str))))
        elif key == "allOf":
            parts.extend(string_language(s, doc, seen) for s in value)
        elif key == "anyOf":
            parts.append(rx.union(*(string_language(s, doc, seen) for s in value)))
        elif key == "oneOf":
            langs = [string_language(s, doc, seen) for s in value]
            parts.append(rx.union(*(
                rx.inter(a, *(rx.compl(b) for j, b in enumerate(langs) if j != i))
                for i, a in enumerate(langs)
            )))
        elif key == "not":
            parts.append(rx.compl(string_language(value, doc, seen)))
        elif key == "if":
            c = string_language(value, doc, seen)
            then = string_language(node.get("then", True), doc, seen)
            other = string_language(node.get("else", True), doc, seen)
            parts.append(rx.union(rx.inter(c, then), rx.inter(rx.compl(c), other)))
        elif key in STRUCTURAL_UNSUPPORTED:
            raise UnsupportedKeyword(f"keyword {key!r} is not supported")
    return rx.inter(*parts)


def load_schema(doc, documents=None) -> Environment:
    """Alias of :func:`translate`."""
    return translate(doc, documents)

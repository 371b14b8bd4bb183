"""Minimal RDF graph model with a deterministic Turtle writer and reader.

The graph keeps triples in insertion order with set semantics; blank
nodes are labelled b0, b1, ... in creation order. The Turtle writer is
canonical (subjects sorted, blank nodes nested at first use, collections
in list syntax), so serialize-parse-serialize is a byte-level fixpoint
and canonical text equality decides graph isomorphism for the tree-shaped
graphs this tool emits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from types import SimpleNamespace


class CyclicBlankNodes(ValueError):
    """Blank-node structure is not a tree, so it cannot be nested."""


class TurtleSyntaxError(SyntaxError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True, order=True)
class IRI:
    value: str

    def __repr__(self):
        return f"IRI({self.value!r})"


@dataclass(frozen=True, order=True)
class BlankNode:
    label: str

    def __repr__(self):
        return f"BlankNode({self.label!r})"


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    datatype: IRI | None = None

    def __repr__(self):
        return f"Literal({self.lexical!r})"


Term = IRI | BlankNode | Literal


@dataclass(frozen=True)
class Triple:
    subject: IRI | BlankNode
    predicate: IRI
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise ValueError("triple subject cannot be a literal")
        if not isinstance(self.predicate, IRI):
            raise ValueError("triple predicate must be an IRI")


RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

RDF = SimpleNamespace(
    type=IRI(RDF_NS + "type"),
    first=IRI(RDF_NS + "first"),
    rest=IRI(RDF_NS + "rest"),
    nil=IRI(RDF_NS + "nil"),
)
RDFS = SimpleNamespace(subClassOf=IRI(RDFS_NS + "subClassOf"))
OWL = SimpleNamespace(
    Class=IRI(OWL_NS + "Class"),
    Restriction=IRI(OWL_NS + "Restriction"),
    onProperty=IRI(OWL_NS + "onProperty"),
    someValuesFrom=IRI(OWL_NS + "someValuesFrom"),
    intersectionOf=IRI(OWL_NS + "intersectionOf"),
    equivalentClass=IRI(OWL_NS + "equivalentClass"),
)

_PREFIXES = [("owl", OWL_NS), ("rdf", RDF_NS), ("rdfs", RDFS_NS), ("xsd", XSD_NS)]
_LOCAL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*$")


class RdfGraph:
    def __init__(self, namespace: str = "http://nas.onto/"):
        self.namespace = namespace
        self._triples: list[Triple] = []
        self._seen: set[Triple] = set()
        self._bnode_counter = 0

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self):
        return iter(self._triples)

    def __contains__(self, triple) -> bool:
        return self._as_triple(triple) in self._seen

    @staticmethod
    def _as_triple(triple) -> Triple:
        if isinstance(triple, Triple):
            return triple
        s, p, o = triple
        return Triple(s, p, o)

    def add(self, triple) -> None:
        t = self._as_triple(triple)
        if t not in self._seen:
            self._seen.add(t)
            self._triples.append(t)

    def bnode(self) -> BlankNode:
        node = BlankNode(f"b{self._bnode_counter}")
        self._bnode_counter += 1
        return node

    def triples(self, s=None, p=None, o=None):
        for t in self._triples:
            if s is not None and t.subject != s:
                continue
            if p is not None and t.predicate != p:
                continue
            if o is not None and t.object != o:
                continue
            yield t

    def objects(self, s, p) -> list[Term]:
        return [t.object for t in self.triples(s=s, p=p)]

    def subjects(self, p=None, o=None) -> list:
        return [t.subject for t in self.triples(p=p, o=o)]

    def make_list(self, members: list[Term]) -> Term:
        """Encode an RDF collection; returns rdf:nil for an empty list."""
        if not members:
            return RDF.nil
        cells = [self.bnode() for _ in members]
        for cell, member, nxt in zip(cells, members, cells[1:] + [RDF.nil]):
            self.add((cell, RDF.first, member))
            self.add((cell, RDF.rest, nxt))
        return cells[0]

    def list_members(self, head: Term) -> list[Term]:
        """Walk an RDF collection from its head to rdf:nil."""
        members = []
        seen = set()
        node = head
        while node != RDF.nil:
            if not isinstance(node, (IRI, BlankNode)) or node in seen:
                raise ValueError(f"malformed RDF collection at {node!r}")
            seen.add(node)
            firsts = self.objects(node, RDF.first)
            rests = self.objects(node, RDF.rest)
            if len(firsts) != 1 or len(rests) != 1:
                raise ValueError(f"malformed RDF collection at {node!r}")
            members.append(firsts[0])
            node = rests[0]
        return members

    def isomorphic(self, other: "RdfGraph") -> bool:
        """Isomorphism up to blank-node renaming via canonical text."""
        return serialize_turtle(self) == serialize_turtle(other)


def _pname(iri: IRI) -> str:
    for prefix, ns in _PREFIXES:
        if iri.value.startswith(ns):
            local = iri.value[len(ns):]
            if _LOCAL_RE.match(local):
                return f"{prefix}:{local}"
    return f"<{iri.value}>"


def _escape(text: str) -> str:
    return (text.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t"))


_INDENT = "    "


class _Writer:
    def __init__(self, graph: RdfGraph):
        self.g = graph
        self.spo: dict = {}
        for t in graph:
            self.spo.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)

        self.obj_refs: dict[BlankNode, int] = {}
        for t in graph:
            if isinstance(t.object, BlankNode):
                self.obj_refs[t.object] = self.obj_refs.get(t.object, 0) + 1
        for b, n in self.obj_refs.items():
            if n > 1:
                raise CyclicBlankNodes(
                    f"blank node {b.label} referenced {n} times; not a tree")

    def is_list_node(self, node) -> bool:
        preds = self.spo.get(node, {})
        return set(preds) == {RDF.first, RDF.rest} and \
            len(preds[RDF.first]) == 1 and len(preds[RDF.rest]) == 1

    def render_object(self, o: Term, indent: int, stack: tuple) -> str:
        if isinstance(o, IRI):
            return _pname(o)
        if isinstance(o, Literal):
            s = f'"{_escape(o.lexical)}"'
            if o.datatype:
                s += f"^^{_pname(o.datatype)}"
            return s
        if o in stack:
            raise CyclicBlankNodes(f"blank node cycle through {o.label}")
        if self.is_list_node(o):
            return self.render_collection(o, indent, stack + (o,))
        return self.render_bracket(o, indent, stack + (o,))

    def render_collection(self, head, indent: int, stack: tuple) -> str:
        members = self.g.list_members(head)
        rendered = [self.render_object(m, indent + 1, stack) for m in members]
        if all(isinstance(m, (IRI, Literal)) for m in members):
            return "( " + " ".join(rendered) + " )"
        inner = ("\n" + _INDENT * (indent + 1)).join(rendered)
        return "(\n" + _INDENT * (indent + 1) + inner + " )"

    def render_bracket(self, node, indent: int, stack: tuple) -> str:
        body = self.render_predicates(node, indent + 1, stack)
        if not body:
            return "[]"
        return "[ " + body + " ]"

    def render_predicates(self, subject, indent: int, stack: tuple) -> str:
        preds = self.spo.get(subject, {})
        ordered = sorted(preds, key=lambda p: (p != RDF.type, p.value))
        parts = []
        for p in ordered:
            objs = [self.render_object(o, indent, stack) for o in preds[p]]
            objs.sort()
            label = "a" if p == RDF.type else _pname(p)
            parts.append(f"{label} {' , '.join(objs)}")
        sep = " ;\n" + _INDENT * indent
        return sep.join(parts)

    def serialize(self) -> str:
        lines = []
        used_xsd = any(
            isinstance(t.object, Literal) and t.object.datatype
            and t.object.datatype.value.startswith(XSD_NS)
            for t in self.g
        )
        for prefix, ns in _PREFIXES:
            if prefix == "xsd" and not used_xsd:
                continue
            lines.append(f"@prefix {prefix}: <{ns}> .")
        lines.append("")

        iri_subjects = sorted(
            (s for s in self.spo if isinstance(s, IRI)), key=lambda s: s.value)
        blank_roots = [
            s for s in self.spo
            if isinstance(s, BlankNode) and s not in self.obj_refs
        ]
        blank_blocks = sorted(
            self.render_predicates(b, 1, (b,)) for b in blank_roots
        )

        for s in iri_subjects:
            body = self.render_predicates(s, 1, ())
            lines.append(f"{_pname(s)} {body} .")
            lines.append("")
        for body in blank_blocks:
            lines.append(f"[ {body} ] .")
            lines.append("")
        while lines and lines[-1] == "":
            lines.pop()
        return "\n".join(lines) + "\n"


def serialize_turtle(graph: RdfGraph) -> str:
    """Canonical Turtle: prefixes, sorted subjects, nested blank nodes."""
    return _Writer(graph).serialize()


_TOKEN_SPEC = [
    ("WS", re.compile(r"[ \t\r\n]+")),
    ("COMMENT", re.compile(r"#[^\n]*")),
    ("PREFIX_KW", re.compile(r"@prefix\b")),
    ("IRIREF", re.compile(r"<([^<>\"{}|^`\\\x00-\x20]*)>")),
    ("DTYPE", re.compile(r"\^\^")),
    ("STRING", re.compile(r'"((?:[^"\\\n]|\\.)*)"')),
    ("PNAME", re.compile(r"(?:[A-Za-z_][A-Za-z0-9_-]*)?:(?:[A-Za-z_][A-Za-z0-9_.-]*)?")),
    ("A_KW", re.compile(r"a(?![A-Za-z0-9_:])")),
    ("LBRACKET", re.compile(r"\[")),
    ("RBRACKET", re.compile(r"\]")),
    ("LPAREN", re.compile(r"\(")),
    ("RPAREN", re.compile(r"\)")),
    ("SEMI", re.compile(r";")),
    ("COMMA", re.compile(r",")),
    ("DOT", re.compile(r"\.")),
]


@dataclass
class _Tok:
    kind: str
    value: str
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    pos, line, col = 0, 1, 1
    n = len(text)
    while pos < n:
        for kind, rx in _TOKEN_SPEC:
            m = rx.match(text, pos)
            if not m:
                continue
            raw = m.group(0)
            if kind not in ("WS", "COMMENT"):
                value = m.group(1) if kind in ("IRIREF", "STRING") else raw
                toks.append(_Tok(kind, value, line, col))
            nl = raw.count("\n")
            if nl:
                line += nl
                col = len(raw) - raw.rfind("\n")
            else:
                col += len(raw)
            pos = m.end()
            break
        else:
            raise TurtleSyntaxError(
                f"unexpected character {text[pos]!r}", line, col)
    toks.append(_Tok("EOF", "", line, col))
    return toks


def _unescape(text: str) -> str:
    return (text.replace("\\t", "\t").replace("\\r", "\r")
            .replace("\\n", "\n").replace('\\"', '"').replace("\\\\", "\\"))


class _Parser:
    def __init__(self, text: str, namespace: str):
        self.toks = _lex(text)
        self.i = 0
        self.prefixes: dict[str, str] = {}
        self.graph = RdfGraph(namespace)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Tok:
        tok = self.next()
        if tok.kind != kind:
            raise TurtleSyntaxError(
                f"expected {kind}, got {tok.kind} {tok.value!r}",
                tok.line, tok.col)
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise TurtleSyntaxError(message, tok.line, tok.col)

    def parse(self) -> RdfGraph:
        while self.peek().kind != "EOF":
            if self.peek().kind == "PREFIX_KW":
                self.next()
                pname = self.expect("PNAME")
                if not pname.value.endswith(":"):
                    raise TurtleSyntaxError(
                        "prefix declaration must end with ':'",
                        pname.line, pname.col)
                iri = self.expect("IRIREF")
                self.expect("DOT")
                self.prefixes[pname.value[:-1]] = iri.value
            else:
                self.parse_triples()
        return self.graph

    def resolve_pname(self, tok: _Tok) -> IRI:
        prefix, _, local = tok.value.partition(":")
        if prefix not in self.prefixes:
            raise TurtleSyntaxError(
                f"undeclared prefix {prefix!r}", tok.line, tok.col)
        return IRI(self.prefixes[prefix] + local)

    def parse_iri(self) -> IRI:
        tok = self.next()
        if tok.kind == "IRIREF":
            return IRI(tok.value)
        if tok.kind == "PNAME":
            return self.resolve_pname(tok)
        raise TurtleSyntaxError(
            f"expected IRI, got {tok.kind} {tok.value!r}", tok.line, tok.col)

    def parse_triples(self) -> None:
        tok = self.peek()
        if tok.kind == "LBRACKET":
            self.next()
            subject = self.graph.bnode()
            if self.peek().kind != "RBRACKET":
                self.parse_predicate_objects(subject)
            self.expect("RBRACKET")
            if self.peek().kind != "DOT":
                self.parse_predicate_objects(subject)
        else:
            subject = self.parse_iri()
            self.parse_predicate_objects(subject)
        self.expect("DOT")

    def parse_predicate_objects(self, subject) -> None:
        while True:
            tok = self.peek()
            if tok.kind == "A_KW":
                self.next()
                predicate = RDF.type
            else:
                predicate = self.parse_iri()
            while True:
                obj = self.parse_object()
                self.graph.add((subject, predicate, obj))
                if self.peek().kind == "COMMA":
                    self.next()
                    continue
                break
            if self.peek().kind == "SEMI":
                self.next()
                if self.peek().kind in ("DOT", "RBRACKET"):
                    break
                continue
            break

    def parse_object(self) -> Term:
        tok = self.peek()
        if tok.kind in ("IRIREF", "PNAME"):
            return self.parse_iri()
        if tok.kind == "STRING":
            self.next()
            datatype = None
            if self.peek().kind == "DTYPE":
                self.next()
                datatype = self.parse_iri()
            return Literal(_unescape(tok.value), datatype)
        if tok.kind == "LBRACKET":
            self.next()
            node = self.graph.bnode()
            if self.peek().kind != "RBRACKET":
                self.parse_predicate_objects(node)
            self.expect("RBRACKET")
            return node
        if tok.kind == "LPAREN":
            self.next()
            members = []
            while self.peek().kind != "RPAREN":
                if self.peek().kind == "EOF":
                    self.fail("unterminated collection")
                members.append(self.parse_object())
            self.next()
            return self.graph.make_list(members)
        self.fail(f"expected an object term, got {tok.kind} {tok.value!r}")


def parse_turtle(text: str, namespace: str = "http://nas.onto/") -> RdfGraph:
    """Parse the Turtle subset this tool emits back into a graph."""
    return _Parser(text, namespace).parse()

"""Conjunction-based compliance checking over generated article modules.

An individual satisfies an article class when every existential
restriction behind its equivalence chain is witnessed by a property
assertion whose target is asserted of the filler class. Class membership
of fillers is checked by direct assertion only: the emitted fragment has
no class hierarchy, so asserted typing is complete for it.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .ontology import ExistentialRestriction
from .rdf import OWL, RDF, RDFS, BlankNode, IRI, RdfGraph


class UnknownClass(KeyError):
    """The article class does not occur in the ontology."""


class UnknownIndividual(KeyError):
    """The individual does not occur in the loaded ABox."""


@dataclass(frozen=True)
class Individual:
    iri: str
    class_assertions: frozenset[str] = frozenset()
    property_assertions: frozenset[tuple[str, str]] = frozenset()

    def to_dict(self) -> dict:
        return {
            "iri": self.iri,
            "types": sorted(self.class_assertions),
            "assertions": [
                {"property": p, "target": t}
                for p, t in sorted(self.property_assertions)
            ],
        }


@dataclass
class ComplianceReport:
    individual: str
    article_class: str
    compliant: bool
    satisfied: list[ExistentialRestriction] = field(default_factory=list)
    missing: list[ExistentialRestriction] = field(default_factory=list)
    mode: str = "equivalence"

    def to_dict(self) -> dict:
        def enc(rs):
            return [{"property": r.property.value, "filler": r.filler.value}
                    for r in rs]
        return {
            "individual": self.individual,
            "article_class": self.article_class,
            "mode": self.mode,
            "compliant": self.compliant,
            "satisfied": enc(self.satisfied),
            "missing": enc(self.missing),
        }

    def summary(self) -> str:
        lines = [
            f"individual:    {self.individual}",
            f"article class: {self.article_class} (mode: {self.mode})",
            f"compliant:     {'yes' if self.compliant else 'no'}",
        ]
        for r in self.satisfied:
            lines.append(f"  [ok]      {r.property.value} some {r.filler.value}")
        for r in self.missing:
            lines.append(f"  [missing] {r.property.value} some {r.filler.value}")
        return "\n".join(lines)


def load_abox(source) -> list[Individual]:
    """Read individuals from a JSON list (path, file object or data).

    Schema: [{"iri": ..., "types": [...],
              "assertions": [{"property": ..., "target": ...}, ...]}]
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as fh:
            data = json.load(fh)
    elif hasattr(source, "read"):
        data = json.load(source)
    else:
        data = source
    if not isinstance(data, list):
        raise ValueError("ABox JSON must be a list of individuals")
    out = []
    for rec in data:
        if "iri" not in rec:
            raise ValueError(f"individual record without 'iri': {rec!r}")
        out.append(Individual(
            iri=rec["iri"],
            class_assertions=frozenset(rec.get("types", [])),
            property_assertions=frozenset(
                (a["property"], a["target"])
                for a in rec.get("assertions", [])
            ),
        ))
    return out


def _is_restriction(g: RdfGraph, node) -> bool:
    return (node, RDF.type, OWL.Restriction) in g


def _restriction_of(g: RdfGraph, node) -> ExistentialRestriction:
    props = g.objects(node, OWL.onProperty)
    fillers = g.objects(node, OWL.someValuesFrom)
    if len(props) != 1 or len(fillers) != 1:
        raise ValueError(f"malformed restriction node {node!r}")
    return ExistentialRestriction(property=props[0], filler=fillers[0])


def resolve_restrictions(g: RdfGraph, article_class: IRI) -> list[ExistentialRestriction]:
    """Unfold the class's equivalence chain down to its restrictions."""
    if not any(True for _ in g.triples(s=article_class)):
        raise UnknownClass(f"class {article_class.value} not in ontology")
    restrictions: list[ExistentialRestriction] = []
    visited: set = set()
    frontier: list = [article_class]
    while frontier:
        node = frontier.pop(0)
        if node in visited:
            continue
        visited.add(node)
        for o in g.objects(node, OWL.equivalentClass):
            if _is_restriction(g, o):
                restrictions.append(_restriction_of(g, o))
            elif isinstance(o, (BlankNode, IRI)):
                colls = g.objects(o, OWL.intersectionOf)
                if colls:
                    for member in g.list_members(colls[0]):
                        if not _is_restriction(g, member):
                            raise ValueError(
                                f"intersection member {member!r} is not a "
                                f"restriction")
                        restrictions.append(_restriction_of(g, member))
                else:
                    frontier.append(o)
    return restrictions


def _link_mode(g: RdfGraph, article_class: IRI) -> str:
    if g.subjects(p=RDFS.subClassOf, o=article_class):
        return "subclass"
    return "equivalence"


def check(
    ontology: RdfGraph,
    abox: list[Individual],
    individual: str,
    article_class: str | IRI,
) -> ComplianceReport:
    """Conjunction semantics: compliant iff every restriction is witnessed."""
    cls = article_class if isinstance(article_class, IRI) else IRI(article_class)
    by_iri = {ind.iri: ind for ind in abox}
    if individual not in by_iri:
        raise UnknownIndividual(f"individual {individual} not in ABox")
    subject = by_iri[individual]
    restrictions = resolve_restrictions(ontology, cls)

    satisfied, missing = [], []
    for r in restrictions:
        ok = any(
            prop == r.property.value
            and r.filler.value in by_iri.get(target, Individual(target)).class_assertions
            for prop, target in subject.property_assertions
        )
        (satisfied if ok else missing).append(r)

    return ComplianceReport(
        individual=individual,
        article_class=cls.value,
        compliant=not missing,
        satisfied=satisfied,
        missing=missing,
        mode=_link_mode(ontology, cls),
    )


_COMPLIANT_RE = re.compile(r"Article-\d+-[A-Za-z0-9]+-Compliant$")


def list_article_classes(ontology: RdfGraph) -> list[IRI]:
    """Every compliant class declared in the ontology, sorted by IRI."""
    out = {
        s for s in ontology.subjects(p=RDF.type, o=OWL.Class)
        if isinstance(s, IRI) and _COMPLIANT_RE.search(s.value)
    }
    return sorted(out, key=lambda i: i.value)


def satisfying_abox(
    ontology: RdfGraph,
    article_class: str | IRI,
    individual: str,
) -> list[Individual]:
    """Mechanically build an ABox that satisfies every restriction.

    Useful for demos and as a test oracle: the returned individuals give
    ``individual`` one assertion per restriction, each pointing at a
    fresh target typed with the restriction's filler.
    """
    cls = article_class if isinstance(article_class, IRI) else IRI(article_class)
    restrictions = resolve_restrictions(ontology, cls)
    assertions = set()
    targets = []
    for k, r in enumerate(restrictions):
        target = f"{individual}-witness-{k}"
        assertions.add((r.property.value, target))
        targets.append(Individual(
            iri=target, class_assertions=frozenset([r.filler.value])))
    return [Individual(iri=individual,
                       property_assertions=frozenset(assertions))] + targets

"""OWL axiom construction for (article, entity) measure groups.

Each measure becomes an existential restriction; a group's restrictions
are conjoined through an anonymous intersection class which the named
compliant class (`Article-{N}-{Entity}-Compliant`) is equivalent to; the
entity class is in turn tied to the compliant class, by equivalence by
default or by subsumption in subclass mode.
"""

from __future__ import annotations

from dataclasses import dataclass

from .mapping import DataDictionary, EntityName, MeasureSpec
from .rdf import OWL, RDF, RDFS, BlankNode, IRI, RdfGraph


class EmptyMeasures(ValueError):
    """An article module needs at least one measure."""


@dataclass(frozen=True)
class ExistentialRestriction:
    property: IRI
    filler: IRI


def add_restriction(g: RdfGraph, r: ExistentialRestriction) -> BlankNode:
    """Three triples: a fresh blank node typed owl:Restriction with its
    owl:onProperty and owl:someValuesFrom."""
    node = g.bnode()
    g.add((node, RDF.type, OWL.Restriction))
    g.add((node, OWL.onProperty, r.property))
    g.add((node, OWL.someValuesFrom, r.filler))
    return node


def compliant_class_iri(namespace: str, article: int, entity: EntityName) -> IRI:
    return IRI(f"{namespace}Article-{article}-{entity.canonical}-Compliant")


def measures_class_iri(namespace: str, article: int, entity: EntityName) -> IRI:
    return IRI(f"{namespace}Article-{article}-{entity.canonical}-Measures")


def build_article_module(
    g: RdfGraph,
    article: int,
    entity: EntityName,
    measures: list[MeasureSpec],
    named_measures: bool = False,
    subclass_mode: bool = False,
) -> IRI:
    """Materialize one (article, entity) group; returns the compliant class.

    With two or more measures the restrictions are linked into an RDF
    collection under owl:intersectionOf; a single measure equates the
    compliant class directly to its restriction node. ``named_measures``
    names the intersection class instead of leaving it anonymous;
    ``subclass_mode`` ties the entity to the compliant class with
    rdfs:subClassOf instead of owl:equivalentClass.
    """
    if not measures:
        raise EmptyMeasures(f"no measures for Article {article} / "
                            f"{entity.canonical}")
    for m in measures:
        if m.article != article or m.entity.canonical != entity.canonical:
            raise ValueError(
                f"measure {m.source_row!r} does not belong to "
                f"(Article {article}, {entity.canonical})")

    ns = g.namespace
    nodes = [
        add_restriction(g, ExistentialRestriction(
            property=IRI(ns + m.predicate),
            filler=IRI(ns + m.object_class),
        ))
        for m in measures
    ]

    if len(nodes) == 1:
        body = nodes[0]
    else:
        coll = g.make_list(nodes)
        if named_measures:
            body = measures_class_iri(ns, article, entity)
        else:
            body = g.bnode()
        g.add((body, OWL.intersectionOf, coll))
        g.add((body, RDF.type, OWL.Class))

    compliant = compliant_class_iri(ns, article, entity)
    g.add((compliant, OWL.equivalentClass, body))
    g.add((compliant, RDF.type, OWL.Class))

    entity_class = IRI(ns + entity.canonical)
    link = RDFS.subClassOf if subclass_mode else OWL.equivalentClass
    g.add((entity_class, link, compliant))
    g.add((entity_class, RDF.type, OWL.Class))
    return compliant


def _sorted_groups(dictionary: DataDictionary):
    return sorted(dictionary.groups.items(), key=lambda kv: kv[0])


def build_graph(
    dictionary: DataDictionary,
    namespace: str = "http://nas.onto/",
    named_measures: bool = False,
    subclass_mode: bool = False,
) -> RdfGraph:
    """One merged graph over every (article, entity) group, in sorted order."""
    g = RdfGraph(namespace)
    for (article, _), measures in _sorted_groups(dictionary):
        build_article_module(
            g, article, measures[0].entity, measures,
            named_measures=named_measures, subclass_mode=subclass_mode)
    return g


def build_article_graphs(
    dictionary: DataDictionary,
    namespace: str = "http://nas.onto/",
    named_measures: bool = False,
    subclass_mode: bool = False,
) -> dict[int, RdfGraph]:
    """One graph per article, each holding all of that article's groups."""
    out: dict[int, RdfGraph] = {}
    for (article, _), measures in _sorted_groups(dictionary):
        g = out.setdefault(article, RdfGraph(namespace))
        build_article_module(
            g, article, measures[0].entity, measures,
            named_measures=named_measures, subclass_mode=subclass_mode)
    return out

"""dironto: compile security-directive prose into an OWL ontology.

The pipeline parses directive plaintext into articles and sentences,
extracts clause-level parts of speech with a deterministic rule-based
tagger, tabulates extractions against gold annotations, maps the rows
onto (entity, predicate, object) measures, and materializes each
(article, entity) group as OWL restrictions serialized to Turtle, with a
conjunction-based compliance checker over the result.
"""

__version__ = "0.1.0"

from .clauses import Clause, EmptyTail, Unextractable, extract_clauses, fallback_object
from .compliance import (
    ComplianceReport,
    Individual,
    UnknownClass,
    UnknownIndividual,
    check,
    list_article_classes,
    load_abox,
    satisfying_abox,
)
from .document import (
    Article,
    DirectiveDocument,
    Item,
    MalformedHeading,
    NoArticlesFound,
    Sentence,
    expand_items,
    parse_directive,
    segment_sentences,
)
from .mapping import (
    DataDictionary,
    EmptyObjectName,
    EmptyPredicate,
    EntityName,
    MeasureSpec,
    UnknownEntity,
    build_dictionary,
    name_object,
    name_predicate,
    normalize_entity,
)
from .ontology import (
    EmptyMeasures,
    ExistentialRestriction,
    add_restriction,
    build_article_module,
    build_graph,
)
from .pipeline import Pipeline, PipelineConfig, StageInputMissing
from .rdf import (
    OWL,
    RDF,
    RDFS,
    BlankNode,
    CyclicBlankNodes,
    IRI,
    Literal,
    RdfGraph,
    Triple,
    TurtleSyntaxError,
    parse_turtle,
    serialize_turtle,
)
from .tables import (
    DuplicateRow,
    GoldAnnotation,
    HitMark,
    PosRow,
    load_gold_csv,
    score,
    summarize,
    tabulate,
)
from .tagging import (
    Gazetteer,
    Lexicon,
    NoVerbFound,
    PosTag,
    Token,
    VerbGroup,
    find_verb_groups,
    tag,
    tokenize,
)

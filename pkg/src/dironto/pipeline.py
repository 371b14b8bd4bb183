"""Staged pipeline with inspectable on-disk artifacts.

Stages: ingest -> extract -> tabulate -> map -> build (-> check). Each
stage reads the previous stage's artifact, writes its own plus a manifest
entry with input hashes, and is skipped when nothing it depends on has
changed. All artifacts are byte-deterministic for identical inputs, which
keeps the edit-gold-and-rerun correction loop honest.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .clauses import Unextractable, extract_clauses
from .compliance import check, list_article_classes, load_abox
from .document import DirectiveDocument, parse_directive
from .mapping import (
    DataDictionary,
    build_dictionary,
    read_dictionary_json,
    write_dictionary_json,
    write_review_csv,
)
from .ontology import build_article_graphs, build_graph
from .rdf import serialize_turtle
from .tables import (
    ExtractedRow,
    GoldAnnotation,
    extracted_row_from_clause,
    load_gold_csv,
    read_pos_rows,
    summarize,
    tabulate,
    write_article_tables,
    write_pos_rows,
    write_summary_csv,
)
from .tagging import Gazetteer, Lexicon, default_gazetteer, default_lexicon

logger = logging.getLogger(__name__)

STAGES = ("ingest", "extract", "tabulate", "map", "build", "check")


class StageInputMissing(RuntimeError):
    """A stage was invoked before the artifact it depends on exists."""


@dataclass
class PipelineConfig:
    input: Path | None = None
    articles: tuple[int, int] = (7, 37)
    gold: Path | None = None
    lexicon: Path | None = None
    gazetteer: Path | None = None
    namespace: str = "http://nas.onto/"
    out_dir: Path = Path("out")
    prefer_gold: bool = True
    named_measures: bool = False
    subclass_mode: bool = False
    max_object_len: int = 80
    abox: Path | None = None
    individual: str | None = None
    article_class: str | None = None

    def load_lexicon(self) -> Lexicon:
        return Lexicon.from_file(self.lexicon) if self.lexicon else default_lexicon()

    def load_gazetteer(self) -> Gazetteer:
        return Gazetteer.from_file(self.gazetteer) if self.gazetteer else default_gazetteer()


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _sha256_file(path: Path) -> str:
    return _sha256_bytes(Path(path).read_bytes())


def _write_json(path: Path, data) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


class Manifest:
    """Records input hashes and per-stage artifact hashes (no timestamps)."""

    def __init__(self, out_dir: Path):
        self.path = Path(out_dir) / "manifest.json"
        if self.path.exists():
            self.data = json.loads(self.path.read_text(encoding="utf-8"))
        else:
            self.data = {"version": __version__, "inputs": {}, "stages": {}}
        self.data["version"] = __version__

    def record_input(self, name: str, path: Path | None) -> str:
        if path is None:
            self.data["inputs"].pop(name, None)
            return ""
        digest = _sha256_file(path)
        self.data["inputs"][name] = {"path": str(path), "sha256": digest}
        return digest

    def stage_fingerprint(self, stage: str) -> str | None:
        return self.data["stages"].get(stage, {}).get("fingerprint")

    def stage_up_to_date(self, stage: str, fingerprint: str, out_dir: Path) -> bool:
        entry = self.data["stages"].get(stage)
        if not entry or entry.get("fingerprint") != fingerprint:
            return False
        for rel, digest in entry.get("artifacts", {}).items():
            p = Path(out_dir) / rel
            if not p.exists() or _sha256_file(p) != digest:
                return False
        return True

    def record_stage(self, stage: str, fingerprint: str, out_dir: Path,
                     artifacts: list[Path]) -> None:
        self.data["stages"][stage] = {
            "fingerprint": fingerprint,
            "artifacts": {
                str(Path(p).relative_to(out_dir)): _sha256_file(p)
                for p in sorted(artifacts)
            },
        }

    def save(self) -> None:
        _write_json(self.path, self.data)


def _fingerprint(*parts: str) -> str:
    return _sha256_bytes("\n".join(parts).encode("utf-8"))


class Pipeline:
    def __init__(self, config: PipelineConfig):
        self.cfg = config
        self.out = Path(config.out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.manifest = Manifest(self.out)

    # artifact paths
    @property
    def document_path(self) -> Path:
        return self.out / "document.json"

    @property
    def clauses_path(self) -> Path:
        return self.out / "clauses.jsonl"

    @property
    def tables_dir(self) -> Path:
        return self.out / "tables"

    @property
    def pos_rows_path(self) -> Path:
        return self.tables_dir / "pos_rows.csv"

    @property
    def figure_path(self) -> Path:
        return self.out / "figures" / "hit_marks.png"

    @property
    def dictionary_path(self) -> Path:
        return self.out / "dictionary.json"

    @property
    def review_path(self) -> Path:
        return self.out / "review.csv"

    @property
    def ttl_dir(self) -> Path:
        return self.out / "ttl"

    @property
    def directive_ttl_path(self) -> Path:
        return self.out / "directive.ttl"

    @property
    def report_path(self) -> Path:
        return self.out / "compliance_report.json"

    def _require(self, path: Path, produced_by: str) -> Path:
        if not path.exists():
            raise StageInputMissing(
                f"{path} is missing; run the '{produced_by}' stage first")
        return path

    def _data_fingerprints(self) -> list[str]:
        parts = []
        for name, attr in (("lexicon", "lexicon"), ("gazetteer", "gazetteer")):
            p = getattr(self.cfg, attr)
            if p is not None:
                parts.append(f"{name}:{self.manifest.record_input(name, p)}")
            else:
                from importlib import resources
                ref = resources.files("dironto").joinpath(f"data/{name}.json")
                digest = _sha256_bytes(ref.read_bytes())
                self.manifest.data["inputs"][name] = {
                    "path": f"<builtin>/{name}.json", "sha256": digest}
                parts.append(f"{name}:{digest}")
        return parts

    # stages -----------------------------------------------------------
    def run_ingest(self) -> bool:
        if self.cfg.input is None:
            raise StageInputMissing("no --input file configured")
        self._require(Path(self.cfg.input), "n/a (input file)")
        digest = self.manifest.record_input("input", Path(self.cfg.input))
        fp = _fingerprint("ingest", digest, str(self.cfg.articles))
        if self.manifest.stage_up_to_date("ingest", fp, self.out):
            logger.info("ingest: up to date, skipping")
            return False
        source = Path(self.cfg.input).read_text(encoding="utf-8")
        doc = parse_directive(source, self.cfg.articles,
                              source_name=Path(self.cfg.input).name)
        _write_json(self.document_path, doc.to_dict())
        self.manifest.record_stage("ingest", fp, self.out, [self.document_path])
        logger.info("ingest: %d articles -> %s",
                    len(doc.articles), self.document_path)
        return True

    def _load_document(self) -> DirectiveDocument:
        self._require(self.document_path, "ingest")
        return DirectiveDocument.from_dict(
            json.loads(self.document_path.read_text(encoding="utf-8")))

    def run_extract(self) -> bool:
        self._require(self.document_path, "ingest")
        fp = _fingerprint("extract", _sha256_file(self.document_path),
                          *self._data_fingerprints())
        if self.manifest.stage_up_to_date("extract", fp, self.out):
            logger.info("extract: up to date, skipping")
            return False
        doc = self._load_document()
        lexicon = self.cfg.load_lexicon()
        gazetteer = self.cfg.load_gazetteer()

        records = []
        for article in doc.articles:
            for item in article.items:
                n_sentences = len(item.sentences)
                for sent in item.sentences:
                    row_id = (item.label if n_sentences == 1
                              else f"{item.label}.{sent.index_in_item}")
                    base = {
                        "article": article.number,
                        "item": item.label,
                        "sentence_index": sent.index_in_item,
                        "row_id": row_id,
                        "span": list(sent.span),
                        "synthesized": sent.synthesized,
                    }
                    try:
                        clauses = extract_clauses(sent, lexicon, gazetteer)
                    except Unextractable:
                        records.append({**base, "unextractable": True,
                                        "clause_index": 0, "main": False})
                        continue
                    for k, clause in enumerate(clauses):
                        records.append({
                            **base,
                            "unextractable": False,
                            "clause_index": k,
                            "main": k == 0,
                            **clause.to_dict(),
                        })
        with open(self.clauses_path, "w", encoding="utf-8") as fh:
            for rec in records:
                rec.pop("nested", None)  # flat list already carries them
                fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False))
                fh.write("\n")
        self.manifest.record_stage("extract", fp, self.out, [self.clauses_path])
        logger.info("extract: %d clause records -> %s",
                    len(records), self.clauses_path)
        return True

    def _load_clause_records(self) -> list[dict]:
        self._require(self.clauses_path, "extract")
        with open(self.clauses_path, encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]

    def _extracted_rows(self) -> list[ExtractedRow]:
        gazetteer = self.cfg.load_gazetteer()
        out = []
        for rec in self._load_clause_records():
            if not rec.get("main"):
                continue
            from .tables import acronymize
            subject = rec.get("subject") or ""
            out.append(ExtractedRow(
                article=rec["article"],
                row_id=rec["row_id"],
                subject=acronymize(subject, gazetteer) if subject else "",
                verb=rec.get("verb_head", "") and (
                    f"P - {rec['verb_head']}" if rec.get("is_passive")
                    else rec["verb_head"]),
                object=rec.get("complement") or rec.get("object") or "",
                passive=bool(rec.get("is_passive")),
            ))
        return out

    def run_tabulate(self) -> bool:
        if self.cfg.gold is None:
            raise StageInputMissing("the tabulate stage needs --gold")
        self._require(Path(self.cfg.gold), "n/a (gold file)")
        self._require(self.clauses_path, "extract")
        gold_digest = self.manifest.record_input("gold", Path(self.cfg.gold))
        fp = _fingerprint("tabulate", gold_digest,
                          _sha256_file(self.clauses_path))
        if self.manifest.stage_up_to_date("tabulate", fp, self.out):
            logger.info("tabulate: up to date, skipping")
            return False
        gold = load_gold_csv(self.cfg.gold)
        rows = tabulate(gold, self._extracted_rows(), self.cfg.load_lexicon())

        self.tables_dir.mkdir(parents=True, exist_ok=True)
        artifacts = [self.pos_rows_path, self.tables_dir / "summary.csv"]
        write_pos_rows(rows, self.pos_rows_path)
        summary = summarize(rows)
        write_summary_csv(summary, self.tables_dir / "summary.csv")
        artifacts += write_article_tables(rows, self.tables_dir)

        from .report import render_hit_summary
        artifacts.append(render_hit_summary(summary, self.figure_path))

        self.manifest.record_stage("tabulate", fp, self.out, artifacts)
        logger.info("tabulate: %d rows -> %s", len(rows), self.tables_dir)
        return True

    def run_map(self) -> bool:
        sources = []
        if self.pos_rows_path.exists():
            sources.append(_sha256_file(self.pos_rows_path))
            mode = "tables"
        else:
            self._require(self.clauses_path, "extract")
            sources.append(_sha256_file(self.clauses_path))
            mode = "clauses"
        fp = _fingerprint("map", mode, str(self.cfg.prefer_gold),
                          str(self.cfg.max_object_len), *sources,
                          *self._data_fingerprints())
        if self.manifest.stage_up_to_date("map", fp, self.out):
            logger.info("map: up to date, skipping")
            return False

        if mode == "tables":
            rows = read_pos_rows(self.pos_rows_path)
        else:
            # no gold available: tabulate the extraction against itself-empty
            # gold rows so each row carries only extracted values
            extracted = self._extracted_rows()
            gold = [GoldAnnotation(e.article, e.row_id, "", "", "",
                                   passive=e.passive) for e in extracted]
            rows = tabulate(gold, extracted, self.cfg.load_lexicon())

        dd = build_dictionary(
            rows,
            prefer_gold=self.cfg.prefer_gold,
            max_len=self.cfg.max_object_len,
            gazetteer=self.cfg.load_gazetteer(),
            lexicon=self.cfg.load_lexicon(),
        )
        write_dictionary_json(dd, self.dictionary_path)
        write_review_csv(dd, self.review_path)
        self.manifest.record_stage("map", fp, self.out,
                                   [self.dictionary_path, self.review_path])
        logger.info("map: %d groups, %d review rows -> %s",
                    len(dd.groups), len(dd.review), self.dictionary_path)
        return True

    def run_build(self) -> bool:
        self._require(self.dictionary_path, "map")
        fp = _fingerprint("build", _sha256_file(self.dictionary_path),
                          self.cfg.namespace, str(self.cfg.named_measures),
                          str(self.cfg.subclass_mode))
        if self.manifest.stage_up_to_date("build", fp, self.out):
            logger.info("build: up to date, skipping")
            return False
        dd = read_dictionary_json(self.dictionary_path)
        kwargs = dict(namespace=self.cfg.namespace,
                      named_measures=self.cfg.named_measures,
                      subclass_mode=self.cfg.subclass_mode)

        self.ttl_dir.mkdir(parents=True, exist_ok=True)
        artifacts = []
        for article, g in sorted(build_article_graphs(dd, **kwargs).items()):
            path = self.ttl_dir / f"article_{article:02d}.ttl"
            path.write_text(serialize_turtle(g), encoding="utf-8")
            artifacts.append(path)
        merged = build_graph(dd, **kwargs)
        self.directive_ttl_path.write_text(
            serialize_turtle(merged), encoding="utf-8")
        artifacts.append(self.directive_ttl_path)

        self.manifest.record_stage("build", fp, self.out, artifacts)
        logger.info("build: %d triples -> %s", len(merged),
                    self.directive_ttl_path)
        return True

    def run_check(self):
        from .rdf import parse_turtle
        self._require(self.directive_ttl_path, "build")
        if self.cfg.abox is None or self.cfg.individual is None:
            raise StageInputMissing(
                "the check stage needs --abox and --individual")
        ontology = parse_turtle(
            self.directive_ttl_path.read_text(encoding="utf-8"),
            namespace=self.cfg.namespace)
        abox = load_abox(self.cfg.abox)
        article_class = self.cfg.article_class
        if article_class is None:
            classes = list_article_classes(ontology)
            if len(classes) != 1:
                raise StageInputMissing(
                    "--article is required when the ontology declares "
                    f"{len(classes)} compliant classes")
            article_class = classes[0].value
        report = check(ontology, abox, self.cfg.individual, article_class)
        _write_json(self.report_path, report.to_dict())
        logger.info("check: %s -> %s",
                    "compliant" if report.compliant else "not compliant",
                    self.report_path)
        return report

    def run(self, stage: str) -> int:
        """Run one stage (or 'all'); returns a process exit status."""
        if stage not in STAGES + ("all",):
            raise ValueError(f"unknown stage {stage!r}")
        if stage == "all":
            self.run_ingest()
            self.run_extract()
            if self.cfg.gold is not None:
                self.run_tabulate()
            self.run_map()
            self.run_build()
            status = 0
            if self.cfg.abox is not None and self.cfg.individual is not None:
                report = self.run_check()
                print(report.summary())
                status = 0 if report.compliant else 1
            self.manifest.save()
            return status
        if stage == "check":
            report = self.run_check()
            self.manifest.save()
            print(report.summary())
            return 0 if report.compliant else 1
        getattr(self, f"run_{stage}")()
        self.manifest.save()
        return 0

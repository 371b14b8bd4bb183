"""Command-line entry point: one subcommand per pipeline stage."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .pipeline import STAGES, Pipeline, PipelineConfig, StageInputMissing


def _parse_articles(spec: str) -> tuple[int, int]:
    try:
        low_s, high_s = spec.split("..", 1)
        low, high = int(low_s), int(high_s)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected LOW..HIGH (e.g. 7..37), got {spec!r}")
    if low <= 0 or high <= 0 or low > high:
        raise argparse.ArgumentTypeError(f"invalid article range {spec!r}")
    return low, high


def _read_config_file(path: Path) -> dict[str, str]:
    """key=value lines; '#' starts a comment; blank lines ignored."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip().strip('"')
    return values


_BOOL_KEYS = {"prefer_extracted", "named_measures", "subclass_mode"}


def _apply_config_file(args: argparse.Namespace, values: dict[str, str]) -> None:
    for key, value in values.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ValueError(f"unknown config key {key!r}")
        if getattr(args, attr) not in (None, False):
            continue  # explicit CLI flags win
        if attr in _BOOL_KEYS:
            setattr(args, attr, value.lower() in ("true", "1", "yes"))
        elif attr == "articles":
            setattr(args, attr, _parse_articles(value))
        else:
            setattr(args, attr, value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dironto",
        description="Compile a security directive into an OWL ontology "
                    "through staged, inspectable artifacts.",
    )
    parser.add_argument("--verbose", "-v", action="store_true",
                        help="debug logging")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="directive plaintext file")
    common.add_argument("--gold", type=Path,
                        help="gold annotation CSV (article,row_id,subject,verb,object,passive)")
    common.add_argument("--articles", type=_parse_articles, default=None,
                        metavar="LOW..HIGH", help="article range (default 7..37)")
    common.add_argument("--namespace", default=None,
                        help="ontology namespace (default http://nas.onto/)")
    common.add_argument("--out-dir", type=Path, default=None,
                        help="artifact directory (default ./out)")
    common.add_argument("--lexicon", type=Path, help="override lexicon JSON")
    common.add_argument("--gazetteer", type=Path, help="override gazetteer JSON")
    common.add_argument("--prefer-extracted", action="store_true",
                        help="keep extracted values even when they scored wrong")
    common.add_argument("--named-measures", action="store_true",
                        help="name the intersection class instead of leaving it anonymous")
    common.add_argument("--subclass-mode", action="store_true",
                        help="tie entity to compliant class with rdfs:subClassOf")
    common.add_argument("--config", type=Path,
                        help="key=value config file (CLI flags win)")

    sub = parser.add_subparsers(dest="stage", required=True)
    for stage in STAGES + ("all",):
        sp = sub.add_parser(stage, parents=[common],
                            help=f"run the {stage} stage")
        if stage in ("check", "all"):
            sp.add_argument("--ontology", type=Path,
                            help="Turtle file to check against "
                                 "(default: the build stage's directive.ttl)")
            sp.add_argument("--abox", type=Path, help="ABox JSON file")
            sp.add_argument("--individual", help="IRI of the individual to check")
            sp.add_argument("--article", dest="article_class",
                            help="IRI of the compliant class to check against")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.config:
        try:
            _apply_config_file(args, _read_config_file(args.config))
        except ValueError as exc:
            parser.error(str(exc))

    cfg = PipelineConfig(
        input=args.input,
        articles=args.articles or (7, 37),
        gold=args.gold,
        lexicon=args.lexicon,
        gazetteer=args.gazetteer,
        namespace=args.namespace or "http://nas.onto/",
        out_dir=args.out_dir or Path("out"),
        prefer_gold=not args.prefer_extracted,
        named_measures=args.named_measures,
        subclass_mode=args.subclass_mode,
        abox=getattr(args, "abox", None),
        individual=getattr(args, "individual", None),
        article_class=getattr(args, "article_class", None),
    )
    pipeline = Pipeline(cfg)
    if getattr(args, "ontology", None):
        # checking a standalone Turtle file: point the pipeline at it
        pipeline.out.mkdir(parents=True, exist_ok=True)
        cfg_ontology = Path(args.ontology)
        if not cfg_ontology.exists():
            print(f"error: ontology file {cfg_ontology} not found",
                  file=sys.stderr)
            return 2
        text = cfg_ontology.read_text(encoding="utf-8")
        pipeline.directive_ttl_path.parent.mkdir(parents=True, exist_ok=True)
        pipeline.directive_ttl_path.write_text(text, encoding="utf-8")

    try:
        return pipeline.run(args.stage)
    except StageInputMissing as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

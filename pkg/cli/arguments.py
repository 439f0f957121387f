"""Command-line parsing into a Command with a fully resolved PipelineConfig"""
import argparse
import types
import typing
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

from config.pipeline_config import load_pipeline_config
from constants.cli_constants import CliActions, CliDescriptions, CliFlags, CliVerbs
from core.config import PipelineConfig
from core.errors import ConfigValidationError


@dataclass(frozen=True)
class Command:
    """One parsed invocation

    Attributes:
        verb: The top-level verb
        action: Sub-action for verbs that have one (index build, task import-bigbench)
        args: Verb-specific options, without the PipelineConfig flags
        config: PipelineConfig after defaults < config file < environment < flags
    """
    verb: CliVerbs
    args: argparse.Namespace
    config: PipelineConfig
    action: Optional[str] = None


def _flag_name(field: str) -> str:
    return "--" + field.replace("_", "-")


def _unwrap(annotation: Any) -> Any:
    if typing.get_origin(annotation) in (typing.Union, types.UnionType):
        options = [arg for arg in typing.get_args(annotation) if arg is not type(None)]
        return options[0]
    return annotation


def add_config_flags(parser: argparse.ArgumentParser) -> None:
    """One --field-name flag per PipelineConfig field, all defaulting to None so unset flags fall through"""
    group = parser.add_argument_group("pipeline config")
    group.add_argument(CliFlags.CONFIG, type=Path, default=None, help="JSON config file")
    for field, info in PipelineConfig.model_fields.items():
        annotation = _unwrap(info.annotation)
        names = [_flag_name(field)]
        if field == "target_example_count":
            names.append(CliFlags.TARGET_COUNT_ALIAS)
        if annotation is bool:
            group.add_argument(*names, dest=field, action=argparse.BooleanOptionalAction, default=None)
        elif isinstance(annotation, type) and issubclass(annotation, Enum):
            group.add_argument(*names, dest=field, choices=[e.value for e in annotation], default=None)
        else:
            group.add_argument(*names, dest=field, type=annotation, default=None,
                               metavar=field.upper())


def _add_corpus_flags(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--corpus", type=Path, help="Local corpus directory (one sub-directory per dataset)")
    source.add_argument("--hub", action="store_true", help="Use the remote hub (HUB_BASE_URL, HUB_TOKEN)")
    parser.add_argument("--index", type=Path, help="Saved embedding index; built from the corpus when omitted")


def _add_gateway_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(CliFlags.MOCK_TRANSCRIPT, type=Path, dest="mock_transcript",
                        help="Answer LLM calls from a transcript file instead of the network")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=CliDescriptions.PROG, description=CliDescriptions.MAIN)
    parser.add_argument("--log-level", default=None, help="Overrides LOG_LEVEL")
    verbs = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    index = verbs.add_parser(CliVerbs.INDEX, help=CliDescriptions.INDEX)
    index_actions = index.add_subparsers(dest="action", required=True)
    build = index_actions.add_parser(CliActions.BUILD, help=CliDescriptions.INDEX)
    _add_corpus_flags(build)
    build.add_argument("--out", type=Path, required=True, help="Index file to write")
    build.add_argument("--limit", type=int, default=None, help="Index at most this many datasets")
    add_config_flags(build)

    retrieve = verbs.add_parser(CliVerbs.RETRIEVE, help=CliDescriptions.RETRIEVE)
    retrieve.add_argument("--task", type=Path, required=True)
    _add_corpus_flags(retrieve)
    _add_gateway_flags(retrieve)
    retrieve.add_argument("--no-rerank", action="store_true", help="Only print the embedding top-k")
    add_config_flags(retrieve)

    run = verbs.add_parser(CliVerbs.RUN, help=CliDescriptions.RUN)
    run.add_argument("--task", type=Path, required=True)
    _add_corpus_flags(run)
    _add_gateway_flags(run)
    run.add_argument("--out", type=Path, required=True, help="Output directory")
    run.add_argument("--resume", action="store_true", help="Continue from <out>/checkpoint.json")
    add_config_flags(run)

    transform = verbs.add_parser(CliVerbs.TRANSFORM, help=CliDescriptions.TRANSFORM)
    transform.add_argument("--task", type=Path, required=True)
    transform.add_argument("--dataset", required=True, help="name or name:config")
    _add_corpus_flags(transform)
    _add_gateway_flags(transform)
    transform.add_argument("--out", type=Path, required=True)
    add_config_flags(transform)

    analyze = verbs.add_parser(CliVerbs.ANALYZE, help=CliDescriptions.ANALYZE)
    analyze.add_argument("--data", type=Path, required=True)
    analyze.add_argument("--threshold", type=float, default=None,
                         help="ROUGE-L threshold; defaults by --task tags, else rouge_threshold")
    analyze.add_argument("--task", type=Path, default=None, help="Task file whose tags pick the threshold")
    analyze.add_argument("--out", type=Path, default=None, help="Defaults to quality.json next to --data")
    analyze.add_argument("--judge", action="store_true", help="Also rate difficulty with the judge model")
    analyze.add_argument("--judge-prompt", type=Path, default=None, help="Replacement difficulty prompt file")
    analyze.add_argument("--export-inputs", type=Path, default=None, help="Write one input per line here")
    _add_gateway_flags(analyze)
    add_config_flags(analyze)

    dedup = verbs.add_parser(CliVerbs.DEDUP, help=CliDescriptions.DEDUP)
    dedup.add_argument("--data", type=Path, required=True)
    dedup.add_argument("--threshold", type=float, default=None)
    dedup.add_argument("--out", type=Path, default=None, help="Defaults to rewriting --data")
    add_config_flags(dedup)

    report = verbs.add_parser(CliVerbs.REPORT, help=CliDescriptions.REPORT)
    report.add_argument("--report", type=Path, required=True)
    add_config_flags(report)

    task = verbs.add_parser(CliVerbs.TASK, help=CliDescriptions.TASK)
    task_actions = task.add_subparsers(dest="action", required=True)
    bigbench = task_actions.add_parser(CliActions.IMPORT_BIGBENCH, help=CliDescriptions.IMPORT_BIGBENCH)
    bigbench.add_argument("--input", type=Path, required=True)
    bigbench.add_argument("--out", type=Path, required=True)
    bigbench.add_argument("--task-id", default=None, help="Defaults to the input file stem")
    bigbench.add_argument("--max-examples", type=int, default=None)
    add_config_flags(bigbench)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None, environ: Optional[Mapping[str, str]] = None,
               cache_dir: Optional[Path] = None) -> Command:
    """Parse argv into a Command

    Raises:
        SystemExit: Code 2 with usage text on a parse error, 0 for --help
        ConfigValidationError: The resolved config breaks an invariant
    """
    namespace = build_parser().parse_args(argv)
    overrides = {field: getattr(namespace, field, None) for field in PipelineConfig.model_fields}
    config = load_pipeline_config(namespace.config, overrides, environ, cache_dir)
    threshold = getattr(namespace, "threshold", None)
    if threshold is not None and not 0 < threshold <= 1:
        raise ConfigValidationError("threshold", f"threshold must be in (0, 1], got {threshold}")
    for field in PipelineConfig.model_fields:
        delattr(namespace, field)
    return Command(verb=CliVerbs(namespace.verb), args=namespace, config=config,
                   action=getattr(namespace, "action", None))

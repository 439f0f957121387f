"""Command-line entry point: one verb per invocation"""
import asyncio
import json
import logging
import sys
from contextlib import AsyncExitStack
from typing import Optional, Sequence

from cli.arguments import Command, parse_args
from cli.tasks import import_bigbench, load_task, write_task
from cli.wiring import build_embedder, build_hub, build_llm_gateway, close_embedder, resolve_index
from config.settings import get_settings
from constants.cli_constants import CliActions, CliDescriptions, CliMessages, CliVerbs
from constants.pipeline_constants import OutputFiles
from constants.prompt_constants import PromptName
from core.errors import PipelineError
from core.io import read_examples, read_json, write_examples
from core.report import RunReport
from llm_gateway.templates import template_from_file
from orchestrator.pipeline import Pipeline, load_candidates
from quality.dedup import dedup_filter
from quality.reports import analyze_examples, export_inputs, render_quality_table, write_quality
from quality.thresholds import threshold_for
from retrieval.index import build_index, retrieve_top_k, save_index
from retrieval.rerank import rerank_with_self_consistency
from utils.command_registry import CommandRegistry, command_handler
from utils.logging_config import setup_logging
from utils.response_builder import ResponseBuilder

logger = logging.getLogger(__name__)


class PipelineCli:
    """Verb handlers; each takes a parsed Command and returns an exit code"""

    def __init__(self):
        self.settings = get_settings()
        self.command_registry = CommandRegistry()
        self.command_registry.auto_register_from_instance(self)

    async def dispatch(self, command: Command) -> int:
        handler = self.command_registry.get_handler(command.verb)
        if handler is None:
            print(ResponseBuilder.error(self.command_registry.generate_help_text()), file=sys.stderr)
            return 2
        return await handler(command)

    @command_handler(CliVerbs.INDEX, description=CliDescriptions.INDEX)
    async def cmd_index(self, command: Command) -> int:
        args, config = command.args, command.config
        async with AsyncExitStack() as stack:
            hub = build_hub(args, self.settings, config)
            stack.push_async_callback(hub.aclose)
            embedder = build_embedder(config, self.settings)
            stack.push_async_callback(close_embedder, embedder)
            index = await build_index(await hub.list_cards(args.limit), embedder)
        save_index(index, args.out)
        print(ResponseBuilder.success(CliMessages.WROTE_INDEX.format(count=len(index), path=args.out)))
        return 0

    @command_handler(CliVerbs.RETRIEVE, description=CliDescriptions.RETRIEVE)
    async def cmd_retrieve(self, command: Command) -> int:
        args, config = command.args, command.config
        task = load_task(args.task)
        async with AsyncExitStack() as stack:
            hub = build_hub(args, self.settings, config)
            stack.push_async_callback(hub.aclose)
            embedder = build_embedder(config, self.settings)
            stack.push_async_callback(close_embedder, embedder)
            index = await resolve_index(args, hub, embedder)
            names = await retrieve_top_k(index, task, config.retrieval_k, embedder)
            print(ResponseBuilder.table(("rank", "dataset"), list(enumerate(names, start=1))))
            if args.no_rerank:
                return 0
            gateway = build_llm_gateway(args, self.settings, config)
            stack.push_async_callback(gateway.aclose)
            candidates = await load_candidates(names, hub, config)
            result = await rerank_with_self_consistency(task, candidates, config.self_consistency_votes,
                                                        gateway, config)
        print(ResponseBuilder.table(("answer", "votes"), list(result.vote_counts.items())))
        if result.winner is None:
            print(ResponseBuilder.warning(CliMessages.RERANK_NONE))
        else:
            print(ResponseBuilder.success(CliMessages.RERANK_WINNER.format(winner=result.winner.key)))
        return 0

    async def _pipeline(self, command: Command, stack: AsyncExitStack) -> Pipeline:
        args, config = command.args, command.config
        hub = build_hub(args, self.settings, config)
        stack.push_async_callback(hub.aclose)
        embedder = build_embedder(config, self.settings)
        stack.push_async_callback(close_embedder, embedder)
        gateway = build_llm_gateway(args, self.settings, config)
        stack.push_async_callback(gateway.aclose)
        index = await resolve_index(args, hub, embedder) if args.index is not None else None
        return Pipeline(config, hub, gateway, embedder, index)

    def _report_outcome(self, produced: int, command: Command) -> None:
        target = command.config.target_example_count
        if produced < target:
            print(ResponseBuilder.warning(CliMessages.PARTIAL_RUN.format(produced=produced, target=target)))
        print(ResponseBuilder.success(CliMessages.RUN_DONE.format(produced=produced,
                                                                  path=command.args.out / OutputFiles.DATA)))

    @command_handler(CliVerbs.RUN, description=CliDescriptions.RUN)
    async def cmd_run(self, command: Command) -> int:
        task = load_task(command.args.task)
        async with AsyncExitStack() as stack:
            pipeline = await self._pipeline(command, stack)
            examples, _ = await pipeline.run(task, command.args.out, resume=command.args.resume)
        self._report_outcome(len(examples), command)
        return 0

    @command_handler(CliVerbs.TRANSFORM, description=CliDescriptions.TRANSFORM)
    async def cmd_transform(self, command: Command) -> int:
        task = load_task(command.args.task)
        async with AsyncExitStack() as stack:
            pipeline = await self._pipeline(command, stack)
            examples, _ = await pipeline.transform_single(task, command.args.dataset, command.args.out)
        self._report_outcome(len(examples), command)
        return 0

    @command_handler(CliVerbs.ANALYZE, description=CliDescriptions.ANALYZE)
    async def cmd_analyze(self, command: Command) -> int:
        args, config = command.args, command.config
        examples = read_examples(args.data)
        tags = load_task(args.task).tags if args.task is not None else None
        if args.threshold is not None:
            threshold = args.threshold
        elif tags is not None:
            threshold = threshold_for(tags)
        else:
            threshold = config.rouge_threshold

        async with AsyncExitStack() as stack:
            gateway = None
            if args.judge:
                gateway = build_llm_gateway(args, self.settings, config)
                stack.push_async_callback(gateway.aclose)
            template = template_from_file(PromptName.DIFFICULTY, args.judge_prompt) if args.judge_prompt else None
            report = await analyze_examples(examples, threshold, config, gateway, template)

        out = args.out or args.data.with_name(OutputFiles.QUALITY)
        write_quality(out, report)
        print(render_quality_table(report))
        if args.export_inputs is not None:
            count = export_inputs(args.export_inputs, examples)
            print(ResponseBuilder.info(CliMessages.EXPORTED.format(count=count, path=args.export_inputs)))
        print(ResponseBuilder.success(CliMessages.ANALYZE_DONE.format(path=out)))
        return 0

    @command_handler(CliVerbs.DEDUP, description=CliDescriptions.DEDUP)
    async def cmd_dedup(self, command: Command) -> int:
        args = command.args
        examples = read_examples(args.data)
        threshold = args.threshold if args.threshold is not None else command.config.rouge_threshold
        kept = dedup_filter(examples, threshold)
        out = args.out or args.data
        write_examples(out, kept)
        print(ResponseBuilder.success(CliMessages.DEDUP_DONE.format(kept=len(kept), total=len(examples), path=out)))
        return 0

    @command_handler(CliVerbs.REPORT, description=CliDescriptions.REPORT)
    async def cmd_report(self, command: Command) -> int:
        report = RunReport.model_validate(read_json(command.args.report))
        rows = [
            (key, c.status, c.rows_attempted, c.rows_succeeded, c.rows_null, c.rows_malformed, c.rows_discarded,
             c.produced)
            for key, c in report.datasets.items()
        ]
        print(ResponseBuilder.table(
            ("dataset", "status", "attempted", "succeeded", "null", "malformed", "discarded", "produced"), rows,
            title=f"task {report.task_id}",
        ))
        print(json.dumps(report.totals.model_dump(), indent=2))
        if report.flags:
            print(ResponseBuilder.info(", ".join(report.flags)))
        broken = [key for key, counters in report.datasets.items() if not counters.identity_holds()]
        for key in broken:
            print(ResponseBuilder.error(CliMessages.REPORT_BROKEN.format(key=key)), file=sys.stderr)
        if broken:
            return 1
        print(ResponseBuilder.success(CliMessages.REPORT_OK))
        return 0

    @command_handler(CliVerbs.TASK, description=CliDescriptions.TASK)
    async def cmd_task(self, command: Command) -> int:
        args = command.args
        if command.action == CliActions.IMPORT_BIGBENCH:
            task = import_bigbench(read_json(args.input), args.task_id or args.input.stem, args.max_examples)
            write_task(args.out, task)
            print(ResponseBuilder.success(CliMessages.TASK_WRITTEN.format(
                task_id=task.task_id, count=len(task.examples), path=args.out)))
        return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    setup_logging(log_level=settings.log_level, log_file=settings.log_file)
    try:
        command = parse_args(argv, cache_dir=settings.cache_dir)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except PipelineError as e:
        print(ResponseBuilder.error(str(e)), file=sys.stderr)
        return 1
    if command.args.log_level:
        setup_logging(log_level=command.args.log_level, log_file=settings.log_file)

    try:
        return asyncio.run(PipelineCli().dispatch(command))
    except PipelineError as e:
        logger.error(f"{type(e).__name__}: {e} {e.context or ''}".rstrip())
        print(ResponseBuilder.error(str(e)), file=sys.stderr)
        return 1
    except OSError as e:
        logger.error(f"File error: {e}")
        print(ResponseBuilder.error(str(e)), file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print(ResponseBuilder.error(CliMessages.INTERRUPTED), file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())

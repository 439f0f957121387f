# Command-line surface
from .arguments import Command, build_parser, parse_args
from .tasks import TaskFileError, import_bigbench, load_task

__all__ = ['Command', 'build_parser', 'parse_args', 'TaskFileError', 'import_bigbench', 'load_task']

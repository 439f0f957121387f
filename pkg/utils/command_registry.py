"""Verb registry: handlers mark themselves with @command_handler and get collected per instance"""
import logging
from dataclasses import dataclass
from typing import Awaitable, Callable, Optional

logger = logging.getLogger(__name__)

VerbHandler = Callable[..., Awaitable[int]]


@dataclass(frozen=True)
class RegisteredVerb:
    verb: str
    handler: VerbHandler
    description: str


def command_handler(verb: str, description: Optional[str] = None):
    """Mark an async method as the handler of a CLI verb

    Usage:
        @command_handler(CliVerbs.RUN, description=CliDescriptions.RUN)
        async def cmd_run(self, command) -> int:
            ...
    """
    def decorator(func: VerbHandler) -> VerbHandler:
        func._verb = str(verb)
        func._verb_description = description or f"Handle {verb}"
        return func
    return decorator


class CommandRegistry:
    """Maps verb names to bound handler methods"""

    def __init__(self):
        self.verbs: dict[str, RegisteredVerb] = {}

    def register(self, verb: str, handler: VerbHandler, description: str) -> None:
        if verb in self.verbs:
            raise ValueError(f"verb '{verb}' registered twice")
        self.verbs[verb] = RegisteredVerb(verb, handler, description)
        logger.debug(f"Registered verb: {verb}")

    def get_handler(self, verb: str) -> Optional[VerbHandler]:
        registered = self.verbs.get(verb)
        return registered.handler if registered else None

    def generate_help_text(self) -> str:
        if not self.verbs:
            return "No verbs available."
        width = max(len(verb) for verb in self.verbs)
        lines = ["Available verbs:"]
        lines.extend(f"  {v.verb.ljust(width)}  {v.description}" for v in sorted(self.verbs.values(),
                                                                               key=lambda v: v.verb))
        return "\n".join(lines)

    def auto_register_from_instance(self, instance: object) -> int:
        """Register every decorated method of `instance`

        Returns:
            Number of verbs registered
        """
        count = 0
        for attr_name in dir(instance):
            attr = getattr(instance, attr_name)
            if callable(attr) and hasattr(attr, "_verb"):
                self.register(attr._verb, attr, attr._verb_description)
                count += 1
        logger.debug(f"Auto-registered {count} verbs from {type(instance).__name__}")
        return count

"""Exact-key and regex dispatch table"""
import re
from typing import Any, Callable, Optional


class PatternRegistry:
    """Resolves a text to a handler: exact keys first, then regex patterns in registration order"""

    def __init__(self, flags: int = re.DOTALL):
        self.static_handlers: dict[str, Any] = {}
        self.pattern_handlers: list[tuple[re.Pattern, Any]] = []
        self.flags = flags

    def register(self, key: str, handler: Any = None):
        """Register a handler for an exact key; usable as a decorator when handler is omitted"""
        if handler is not None:
            self.static_handlers[key] = handler
            return handler

        def decorator(func: Callable):
            self.static_handlers[key] = func
            return func
        return decorator

    def register_pattern(self, pattern: str, handler: Any = None):
        compiled = re.compile(pattern, self.flags)
        if handler is not None:
            self.pattern_handlers.append((compiled, handler))
            return handler

        def decorator(func: Callable):
            self.pattern_handlers.append((compiled, func))
            return func
        return decorator

    def resolve(self, key: str, text: Optional[str] = None) -> tuple[Any, Optional[re.Match]]:
        """
        Returns (handler, match) or (None, None) if nothing fits.

        Args:
            key: Exact lookup key (e.g. a digest)
            text: Text searched by the patterns; defaults to key
        """
        # 1) Exact keys first
        if key in self.static_handlers:
            return self.static_handlers[key], None

        # 2) Patterns, first registered wins
        haystack = key if text is None else text
        for regex, handler in self.pattern_handlers:
            match = regex.search(haystack)
            if match:
                return handler, match

        return None, None

    def __len__(self) -> int:
        return len(self.static_handlers) + len(self.pattern_handlers)

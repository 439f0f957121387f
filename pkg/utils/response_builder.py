"""Response builder for consistent console output formatting"""
from typing import Any, Optional, Sequence

from constants.response_fields import ResponsePrefix, TableChars


class ResponseBuilder:
    """Builder for the one-line messages and tables the CLI prints"""

    @staticmethod
    def success(message: str) -> str:
        """Create a success line

        Args:
            message: The success message

        Returns:
            Prefixed message
        """
        return f"{ResponsePrefix.SUCCESS} {message}"

    @staticmethod
    def error(message: str) -> str:
        """Create an error line

        Args:
            message: The error message

        Returns:
            Prefixed message
        """
        return f"{ResponsePrefix.ERROR} {message}"

    @staticmethod
    def info(message: str) -> str:
        return f"{ResponsePrefix.INFO} {message}"

    @staticmethod
    def warning(message: str) -> str:
        return f"{ResponsePrefix.WARNING} {message}"

    @staticmethod
    def cell(value: Any) -> str:
        if value is None:
            return "-"
        if isinstance(value, float):
            return f"{value:.4f}"
        return str(value)

    @staticmethod
    def table(headers: Sequence[str], rows: Sequence[Sequence[Any]], title: Optional[str] = None) -> str:
        """Render a fixed-width text table

        Args:
            headers: Column titles
            rows: Row values; floats are shown with four decimals, None as '-'
            title: Optional line printed above the table

        Returns:
            The table text, without a trailing newline
        """
        cells = [[ResponseBuilder.cell(value) for value in row] for row in rows]
        widths = [max([len(header), *(len(row[i]) for row in cells)]) for i, header in enumerate(headers)]
        lines = [title] if title else []
        lines.append(TableChars.COLUMN_SEP.join(h.ljust(w) for h, w in zip(headers, widths)).rstrip())
        lines.append(TableChars.RULE * (sum(widths) + len(TableChars.COLUMN_SEP) * (len(widths) - 1)))
        for row in cells:
            lines.append(TableChars.COLUMN_SEP.join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        return "\n".join(lines)

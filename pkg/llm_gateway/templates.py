"""Prompt templates with {{name}} placeholders and their rendering"""
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from constants.gateway_constants import GatewayMessages
from constants.prompt_constants import IncontextFixtures, PromptName, PromptPlaceholders, PromptText
from core.errors import MissingBinding, TemplateError

logger = logging.getLogger(__name__)

PLACEHOLDER_RE = re.compile(r"\{\{(\w+)\}\}")
FIXTURES_DIR = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class PromptTemplate:
    """A named prompt with declared placeholders

    Attributes:
        name: Template name (one of PromptName)
        template_text: Text containing {{placeholder}} slots
        placeholders: Declared placeholder names; must equal the set found in template_text
    """
    name: str
    template_text: str
    placeholders: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        found = PLACEHOLDER_RE.findall(self.template_text)
        if set(found) != set(self.placeholders):
            raise TemplateError(
                GatewayMessages.PLACEHOLDER_MISMATCH.format(
                    name=self.name, declared=sorted(self.placeholders), found=sorted(set(found))
                ),
                template=self.name,
            )


def render_prompt(template: PromptTemplate, bindings: Mapping[str, str]) -> str:
    """Replace every placeholder of a template with its bound value

    Substitution is single-pass, so bound values that themselves contain {{...}} are left as-is.

    Args:
        template: The template to render
        bindings: Placeholder name -> text

    Returns:
        The rendered prompt

    Raises:
        MissingBinding: Naming the first declared placeholder without a binding
    """
    for name in template.placeholders:
        if name not in bindings:
            raise MissingBinding(name)
    unknown = sorted(set(bindings) - set(template.placeholders))
    if unknown:
        logger.warning(f"Unknown bindings for template '{template.name}': {unknown}")
    return PLACEHOLDER_RE.sub(lambda match: str(bindings[match.group(1)]), template.template_text)


def _build_builtin() -> dict[str, PromptTemplate]:
    return {
        name: PromptTemplate(name=name.value, template_text=PromptText[name.name].value,
                             placeholders=PromptPlaceholders.BY_NAME[name])
        for name in PromptName
    }


TEMPLATES: dict[str, PromptTemplate] = _build_builtin()


def get_template(name: str) -> PromptTemplate:
    try:
        return TEMPLATES[name]
    except KeyError:
        raise TemplateError(GatewayMessages.UNKNOWN_TEMPLATE.format(name=name), template=name) from None


def template_from_file(name: str, path: Path) -> PromptTemplate:
    """Load a replacement template (e.g. a task-specific difficulty judge prompt) from disk"""
    text = Path(path).read_text(encoding="utf-8")
    return PromptTemplate(name=name, template_text=text,
                          placeholders=tuple(dict.fromkeys(PLACEHOLDER_RE.findall(text))))


def load_incontext(fixture: IncontextFixtures, override_dir: Optional[Path] = None) -> str:
    """Read an in-context example fixture, preferring a same-named file in override_dir"""
    if override_dir is not None:
        candidate = Path(override_dir) / fixture.value
        if candidate.is_file():
            return candidate.read_text(encoding="utf-8").strip()
        logger.debug(f"No override for {fixture.value} in {override_dir}, using bundled fixture")
    return (FIXTURES_DIR / fixture.value).read_text(encoding="utf-8").strip()

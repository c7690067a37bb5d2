"""Render a saliency-annotated document as HTML, ANSI terminal text, or JSON.

Every format is faithful: stripping the styling artifacts recovers the source
text byte-exactly. Opacity is realized as a solid foreground color blended
toward the background, so printing and copying behave predictably.
"""

from __future__ import annotations

import html
import json
import re
from dataclasses import dataclass, field

from .saliency import SaliencyMap, WordSaliency
from .text_model import Document

_ANSI_RE = re.compile(r"\x1b\[[0-9;]*m")
_DOC_REGION_RE = re.compile(r'<div class="gptsm-doc">(.*?)</div>', re.DOTALL)
_TAG_RE = re.compile(r"<[^>]*>")


@dataclass(frozen=True)
class Theme:
    foreground: str = "#000000"
    background: str = "#ffffff"
    font_family: str | None = None
    ansi_depth: str = "24bit"  # 24bit | 256


@dataclass
class RenderPlan:
    doc: Document
    saliency: SaliencyMap
    theme: Theme = field(default_factory=Theme)

    def __post_init__(self) -> None:
        token_counts = [len(p.tokens) for p in self.doc.paragraphs]
        map_counts = [len(p) for p in self.saliency.paragraphs]
        if token_counts != map_counts:
            raise ValueError("saliency map is not parallel to document tokens")


def _parse_hex(color: str) -> tuple[int, int, int]:
    value = color.lstrip("#")
    if len(value) != 6:
        raise ValueError(f"expected #RRGGBB color, got {color!r}")
    return tuple(int(value[i:i + 2], 16) for i in (0, 2, 4))


def blend(foreground: str, background: str, opacity: float) -> tuple[int, int, int]:
    """Foreground at the given opacity over the background, as solid RGB."""
    fg = _parse_hex(foreground)
    bg = _parse_hex(background)
    return tuple(int(b + (f - b) * opacity + 0.5) for f, b in zip(fg, bg))


def _label_json(entry: WordSaliency) -> str | int:
    return "kept" if entry.round is None else entry.round


def render_html(plan: RenderPlan, title: str = "gptsm") -> str:
    body = _html_doc_region(plan)
    return _html_shell(plan.theme, title, body)


def render_compare_html(
    left: RenderPlan, right: RenderPlan, labels: tuple[str, str] = ("GP-TSM", "NGP-TSM")
) -> str:
    """One page, two columns, same source rendered under two methods."""
    columns = "".join(
        f"<section><h2>{html.escape(label)}</h2>{_html_doc_region(plan)}</section>"
        for plan, label in zip((left, right), labels)
    )
    body = f'<div class="gptsm-compare">{columns}</div>'
    return _html_shell(left.theme, " vs ".join(labels), body)


def _html_shell(theme: Theme, title: str, body: str) -> str:
    font_rule = f"font-family: {theme.font_family};" if theme.font_family else ""
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{html.escape(title)}</title>
<style>
body {{ background: {theme.background}; color: {theme.foreground}; margin: 2rem auto; max-width: 60rem; padding: 0 1rem; {font_rule} }}
.gptsm-doc p {{ white-space: pre-wrap; }}
.gptsm-compare {{ display: flex; gap: 2rem; align-items: flex-start; }}
.gptsm-compare section {{ flex: 1; min-width: 0; }}
#gptsm-toggle:checked ~ .gptsm-doc span,
#gptsm-toggle:checked ~ .gptsm-compare span {{ color: {theme.foreground} !important; }}
label[for="gptsm-toggle"] {{ user-select: none; }}
</style>
</head>
<body>
<input type="checkbox" id="gptsm-toggle"><label for="gptsm-toggle">Show all text in full color</label>
{body}
</body>
</html>
"""


def _html_doc_region(plan: RenderPlan) -> str:
    parts: list[str] = ['<div class="gptsm-doc">']
    for paragraph, entries in zip(plan.doc.paragraphs, plan.saliency.paragraphs):
        parts.append("<p>")
        parts.append(paragraph.leading_whitespace)
        for token, entry in zip(paragraph.tokens, entries):
            r, g, b = blend(plan.theme.foreground, plan.theme.background, entry.opacity)
            parts.append(
                f'<span style="color:rgb({r},{g},{b})">{html.escape(token.text, quote=False)}</span>'
            )
            parts.append(token.suffix)
        parts.append("</p>")
        parts.append(paragraph.trailing_separator)
    parts.append("</div>")
    return "".join(parts)


def extract_html_texts(rendered: str) -> list[str]:
    """Source text of each document region, styling stripped, entities decoded."""
    texts = []
    for region in _DOC_REGION_RE.findall(rendered):
        texts.append(html.unescape(_TAG_RE.sub("", region)))
    return texts


def _ansi_color(theme: Theme, opacity: float) -> str:
    r, g, b = blend(theme.foreground, theme.background, opacity)
    if theme.ansi_depth == "256":
        code = 16 + 36 * round(r / 51) + 6 * round(g / 51) + round(b / 51)
        return f"\x1b[38;5;{code}m"
    return f"\x1b[38;2;{r};{g};{b}m"


def render_ansi(plan: RenderPlan) -> str:
    parts: list[str] = []
    for paragraph, entries in zip(plan.doc.paragraphs, plan.saliency.paragraphs):
        parts.append(paragraph.leading_whitespace)
        for token, entry in zip(paragraph.tokens, entries):
            parts.append(_ansi_color(plan.theme, entry.opacity))
            parts.append(token.text)
            parts.append(token.suffix)
        if paragraph.tokens:
            parts.append("\x1b[0m")
        parts.append(paragraph.trailing_separator)
    return "".join(parts)


def strip_ansi(rendered: str) -> str:
    return _ANSI_RE.sub("", rendered)


def render_json(plan: RenderPlan) -> str:
    """List of paragraphs, each a list of {text, suffix, round_label, opacity}.

    The paragraph's trailing separator is folded into the last token's suffix
    and whitespace with no preceding token rides on an empty-text entry, so
    concatenating text+suffix over the whole payload reproduces the source.
    """
    paragraphs = []
    for paragraph, entries in zip(plan.doc.paragraphs, plan.saliency.paragraphs):
        items = []
        if paragraph.leading_whitespace:
            items.append(
                {"text": "", "suffix": paragraph.leading_whitespace,
                 "round_label": "kept", "opacity": 1.0}
            )
        for position, (token, entry) in enumerate(zip(paragraph.tokens, entries)):
            suffix = token.suffix
            if position == len(paragraph.tokens) - 1:
                suffix += paragraph.trailing_separator
            items.append(
                {"text": token.text, "suffix": suffix,
                 "round_label": _label_json(entry), "opacity": entry.opacity}
            )
        if not paragraph.tokens and paragraph.trailing_separator:
            items.append(
                {"text": "", "suffix": paragraph.trailing_separator,
                 "round_label": "kept", "opacity": 1.0}
            )
        paragraphs.append(items)
    return json.dumps(paragraphs, ensure_ascii=False)


def parse_render_json(rendered: str) -> list[list[dict]]:
    payload = json.loads(rendered)
    if not isinstance(payload, list):
        raise ValueError("expected a top-level list of paragraphs")
    return payload


def source_from_json(payload: list[list[dict]]) -> str:
    return "".join(
        item["text"] + item["suffix"] for paragraph in payload for item in paragraph
    )


def render(plan: RenderPlan, fmt: str) -> str:
    if fmt == "html":
        return render_html(plan)
    if fmt == "ansi":
        return render_ansi(plan)
    if fmt == "json":
        return render_json(plan)
    raise ValueError(f"unknown format {fmt!r}")

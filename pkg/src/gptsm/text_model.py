"""Lossless decomposition of plain text into paragraphs and word tokens.

A word is a maximal run of non-whitespace characters, punctuation attached
("nutrients." is one token). Paragraph boundaries are blank lines: whitespace
runs containing two or more newlines. Every byte of the input is stored
somewhere (token text, token suffix, paragraph leading whitespace, or the
paragraph's trailing separator), so reconstruction is byte-exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_RUN_RE = re.compile(r"\S+|\s+")


@dataclass(frozen=True)
class Token:
    """One word plus the exact whitespace that followed it."""

    text: str
    suffix: str = ""

    def __post_init__(self) -> None:
        if not self.text or any(c.isspace() for c in self.text):
            raise ValueError(f"token text must be non-empty and whitespace-free: {self.text!r}")
        if self.suffix.strip():
            raise ValueError(f"token suffix must be pure whitespace: {self.suffix!r}")


@dataclass
class Paragraph:
    """A run of tokens between blank-line separators.

    ``leading_whitespace`` holds whitespace before the first token (only ever
    non-empty for non-separator whitespace at document start).
    ``trailing_separator`` holds the blank-line run that followed the
    paragraph, empty for the last paragraph.
    """

    index: int
    tokens: list[Token] = field(default_factory=list)
    leading_whitespace: str = ""
    trailing_separator: str = ""

    @property
    def is_blank(self) -> bool:
        return not self.tokens

    def words(self) -> list[str]:
        return [t.text for t in self.tokens]

    def text(self) -> str:
        return self.leading_whitespace + "".join(t.text + t.suffix for t in self.tokens)


@dataclass
class Document:
    source_text: str
    paragraphs: list[Paragraph] = field(default_factory=list)


def _is_separator(ws: str) -> bool:
    return ws.count("\n") >= 2


def segment(source_text: str) -> Document:
    """Split text into paragraphs and tokens; ``reconstruct`` inverts this exactly."""
    doc = Document(source_text=source_text)
    if not source_text:
        return doc

    paragraph = Paragraph(index=0)
    runs = _RUN_RE.findall(source_text)
    for pos, run in enumerate(runs):
        if not run[0].isspace():
            paragraph.tokens.append(Token(text=run))
            continue
        if _is_separator(run):
            paragraph.trailing_separator = run
            doc.paragraphs.append(paragraph)
            paragraph = Paragraph(index=len(doc.paragraphs))
        elif paragraph.tokens:
            last = paragraph.tokens[-1]
            paragraph.tokens[-1] = Token(text=last.text, suffix=run)
        else:
            paragraph.leading_whitespace += run
    doc.paragraphs.append(paragraph)
    return doc


def reconstruct(doc: Document) -> str:
    return "".join(p.text() + p.trailing_separator for p in doc.paragraphs)


def word_core(word: str) -> str:
    """The word with leading/trailing non-alphanumeric characters stripped."""
    i, j = 0, len(word)
    while i < j and not word[i].isalnum():
        i += 1
    while j > i and not word[j - 1].isalnum():
        j -= 1
    return word[i:j]


def split_words(text: str) -> list[str]:
    """Tokenize free text with the same word rule used for paragraphs."""
    return text.split()

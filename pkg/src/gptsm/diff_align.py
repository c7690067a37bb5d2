"""Word-level sequence alignment, reversion of LLM edits, and level labeling.

Matching follows the Ratcliff-Obershelp longest-block recursion (difflib's
SequenceMatcher, autojunk disabled) over word tokens with exact case-sensitive
equality. Reversion restores original words for substituted spans and drops
inserted words, so the result is always a verbatim subsequence of the input.

Within a replace span, a second alignment pass on normalized word cores
separates true substitutions from deletions that merely moved punctuation:
when the model deletes the tail of a sentence, the last surviving word gains
the sentence's period ("nutrients" -> "nutrients.") and exact matching lumps
it together with the genuinely deleted words. The core-level pass restores
the surviving word to its original form and keeps its deleted neighbours
deleted, instead of undoing the whole cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from difflib import SequenceMatcher
from typing import NamedTuple

from .text_model import word_core


class NestingViolation(Exception):
    """A level is not a word subsequence of its predecessor."""


class Opcode(NamedTuple):
    kind: str  # equal | delete | insert | replace
    a_start: int
    a_end: int
    b_start: int
    b_end: int


@dataclass(frozen=True)
class OpcodeScript:
    ops: tuple[Opcode, ...]

    def replay(self, a: list[str], b: list[str]) -> list[str]:
        """Apply the script to ``a``: keep equals, drop deletes, splice from ``b``."""
        out: list[str] = []
        for op in self.ops:
            if op.kind == "equal":
                out.extend(a[op.a_start:op.a_end])
            elif op.kind in ("insert", "replace"):
                out.extend(b[op.b_start:op.b_end])
        return out


@dataclass(frozen=True)
class ReversionResult:
    reverted_words: list[str]
    paraphrase_count: int


def diff(a: list[str], b: list[str]) -> OpcodeScript:
    sm = SequenceMatcher(None, a, b, autojunk=False)
    ops = tuple(Opcode(tag, i1, i2, j1, j2) for tag, i1, i2, j1, j2 in sm.get_opcodes())
    return OpcodeScript(ops=ops)


def _match_key(word: str, side: str, position: int) -> str:
    # Pure-punctuation tokens get a unique key so they never pair across sides.
    core = word_core(word).casefold()
    return core if core else f"\x00{side}{position}"


def _revert_replace(a_span: list[str], b_span: list[str]) -> list[str]:
    keys_a = [_match_key(w, "a", i) for i, w in enumerate(a_span)]
    keys_b = [_match_key(w, "b", i) for i, w in enumerate(b_span)]
    if not set(keys_a) & set(keys_b):
        # No punctuation/case survivors: the whole span was substituted.
        return list(a_span)
    sm = SequenceMatcher(None, keys_a, keys_b, autojunk=False)
    kept: list[str] = []
    for tag, i1, i2, j1, j2 in sm.get_opcodes():
        if tag == "equal" or tag == "replace":
            kept.extend(a_span[i1:i2])
    return kept


def revert(
    original: list[str], response: list[str], script: OpcodeScript | None = None
) -> ReversionResult:
    """Undo insertions and substitutions so the result is a subsequence of ``original``."""
    if script is None:
        script = diff(original, response)
    reverted: list[str] = []
    paraphrase_count = 0
    for op in script.ops:
        if op.kind == "equal":
            reverted.extend(original[op.a_start:op.a_end])
        elif op.kind == "insert":
            paraphrase_count += op.b_end - op.b_start
        elif op.kind == "replace":
            paraphrase_count += op.b_end - op.b_start
            reverted.extend(
                _revert_replace(
                    original[op.a_start:op.a_end], response[op.b_start:op.b_end]
                )
            )
    return ReversionResult(reverted_words=reverted, paraphrase_count=paraphrase_count)


def _embed_positions(parent: list[str], child: list[str]) -> list[int]:
    """Map each child index to a parent index, preferring diff's own injection.

    The greedy longest-block recursion can miss a full embedding when words
    repeat, so fall back to the leftmost two-pointer embedding before
    concluding the child is not a subsequence.
    """
    positions: list[int] = []
    for op in diff(parent, child).ops:
        if op.kind == "equal":
            positions.extend(range(op.a_start, op.a_end))
    if len(positions) == len(child):
        return positions

    positions = []
    cursor = 0
    for word in child:
        while cursor < len(parent) and parent[cursor] != word:
            cursor += 1
        if cursor == len(parent):
            raise NestingViolation(
                f"level word {word!r} has no match in the preceding level"
            )
        positions.append(cursor)
        cursor += 1
    return positions


def align_levels(levels: list[list[str]]) -> list[int | None]:
    """Label each word of ``levels[0]`` with the round it was removed at.

    Returns one label per word of the original level: ``None`` for words that
    survive to the last level, otherwise the 1-based round whose compression
    first dropped them (under the composed per-level alignment).
    """
    if not levels:
        return []
    labels: list[int | None] = [None] * len(levels[0])
    surviving = list(range(len(levels[0])))  # original position of each current word
    for round_no in range(1, len(levels)):
        positions = _embed_positions(levels[round_no - 1], levels[round_no])
        kept = set(positions)
        for i, orig_pos in enumerate(surviving):
            if i not in kept:
                labels[orig_pos] = round_no
        surviving = [surviving[i] for i in positions]
    return labels

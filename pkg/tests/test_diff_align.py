from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from gptsm.diff_align import NestingViolation, Opcode, align_levels, diff, revert

from oracles import apply_script, check_tiling, is_subsequence, lcs_length

_words = st.lists(st.sampled_from(["a", "b", "c", "d"]), max_size=8)


def _ops(script):
    return [(op.kind, op.a_start, op.a_end, op.b_start, op.b_end) for op in script.ops]


def test_diff_identity():
    assert _ops(diff(["x"], ["x"])) == [("equal", 0, 1, 0, 1)]


def test_diff_pure_deletion():
    script = diff(["the", "quick", "brown", "fox"], ["the", "quick", "fox"])
    assert _ops(script) == [
        ("equal", 0, 2, 0, 2),
        ("delete", 2, 3, 2, 2),
        ("equal", 3, 4, 2, 3),
    ]


def test_diff_substitution():
    script = diff(
        ["forests", "play", "a", "critical", "role"],
        ["forests", "play", "an", "important", "role"],
    )
    assert _ops(script) == [
        ("equal", 0, 2, 0, 2),
        ("replace", 2, 4, 2, 4),
        ("equal", 4, 5, 4, 5),
    ]


def test_revert_identical_response():
    for words in (["x"], ["a", "b", "c"], []):
        result = revert(words, words)
        assert result.reverted_words == words
        assert result.paraphrase_count == 0


def test_revert_restores_substitutions():
    result = revert(
        ["forests", "play", "a", "critical", "role"],
        ["forests", "play", "an", "important", "role"],
    )
    assert result.reverted_words == ["forests", "play", "a", "critical", "role"]
    assert result.paraphrase_count == 2


def test_revert_drops_insertions():
    result = revert(["a", "b", "c"], ["a", "c", "d"])
    assert result.reverted_words == ["a", "c"]
    assert result.paraphrase_count == 1


def test_revert_keeps_cut_despite_moved_punctuation():
    # Deleting the end of a sentence moves the period onto the last survivor;
    # the cut must survive reversion with the original (period-free) word.
    result = revert(
        ["loss", "of", "nutrients", "into", "watercourses.", "It"],
        ["loss", "of", "nutrients.", "It"],
    )
    assert result.reverted_words == ["loss", "of", "nutrients", "It"]
    assert result.paraphrase_count == 1


def test_revert_restores_whole_span_when_no_core_matches():
    result = revert(["one", "two"], ["uno", "dos"])
    assert result.reverted_words == ["one", "two"]
    assert result.paraphrase_count == 2


def test_align_levels_no_deletion():
    assert align_levels([["a", "b"], ["a", "b"]]) == [None, None]


def test_align_levels_two_rounds():
    labels = align_levels([["a", "b", "c"], ["a", "c"], ["a"]])
    assert labels == [None, 1, 2]


def test_align_levels_repeated_words_fall_back_to_leftmost_embedding():
    # Greedy block matching misses this embedding; the fallback must find it.
    labels = align_levels([["a", "b", "a", "a"], ["a", "a", "a"]])
    assert labels.count(1) == 1
    assert labels.count(None) == 3


def test_align_levels_rejects_non_subsequence():
    with pytest.raises(NestingViolation):
        align_levels([["a", "b"], ["b", "a"]])


def test_align_levels_empty():
    assert align_levels([]) == []
    assert align_levels([["a"]]) == [None]


@given(_words, _words)
def test_opcode_replay_reproduces_b(a, b):
    script = diff(a, b)
    assert check_tiling(script.ops, len(a), len(b))
    assert apply_script(script.ops, a, b) == b
    assert script.replay(a, b) == b


@given(_words, _words)
def test_reverted_is_subsequence_and_paraphrase_sound(a, b):
    script = diff(a, b)
    result = revert(a, b, script)
    assert is_subsequence(result.reverted_words, a)
    has_edits = any(op.kind in ("insert", "replace") for op in script.ops)
    assert (result.paraphrase_count == 0) == (not has_edits)
    if result.paraphrase_count == 0:
        assert is_subsequence(b, a)


@given(_words, _words)
def test_matched_blocks_never_exceed_lcs(a, b):
    matched = sum(op.a_end - op.a_start for op in diff(a, b).ops if op.kind == "equal")
    assert matched <= lcs_length(a, b)


@given(st.lists(st.sampled_from(["a", "b", "c"]), max_size=7), st.data())
def test_monotone_labels_under_nested_levels(level0, data):
    levels = [level0]
    while levels[-1]:
        keep = data.draw(st.lists(st.booleans(), min_size=len(levels[-1]), max_size=len(levels[-1])))
        nxt = [w for w, k in zip(levels[-1], keep) if k]
        if len(nxt) == len(levels[-1]):
            break
        levels.append(nxt)
        if len(levels) > 4:
            break
    labels = align_levels(levels)
    total_rounds = len(levels) - 1
    kept_per_round = [
        {i for i, l in enumerate(labels) if l is None or l > r}
        for r in range(total_rounds + 1)
    ]
    for earlier, later in zip(kept_per_round, kept_per_round[1:]):
        assert later <= earlier
    for r in range(1, total_rounds + 1):
        assert sum(1 for l in labels if l is None or l > r) == len(levels[r])


def test_opcode_is_value_object():
    op = Opcode("equal", 0, 1, 0, 1)
    assert op == Opcode("equal", 0, 1, 0, 1)
    with pytest.raises(AttributeError):
        op.kind = "delete"

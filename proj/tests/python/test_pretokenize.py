"""Segmentation goldens plus a cross-check against the `regex` engine.

The C++ scanners are hand-rolled; here the exported pattern of each scheme is
run verbatim through the `regex` module (with \\s spelled as White_Space so
both sides use the same whitespace table) and assembled per the scheme's
declared match behavior.
"""

import json
import random
from pathlib import Path

import pytest
import regex

import tokeval

GOLDEN = Path(__file__).resolve().parent.parent / "data" / "pretokenize_golden.json"

# Old, stable codepoints only: the regex module and the bundled tables may
# ship different Unicode versions, and recently assigned codepoints would
# classify differently without either side being wrong.
STABLE_SPECIALS = [
    0x00A0, 0x1680, 0x2000, 0x2007, 0x200A, 0x2028, 0x2029, 0x202F, 0x3000,
    0x0966, 0x0660, 0x0E50, 0xFF10,
    0x00E9, 0x00DF, 0x0391, 0x03C9, 0x0416, 0x4E2D, 0x305F, 0xAC00, 0x017F,
    0x2019, 0x201C, 0x2014, 0x20AC, 0x1F600, 0x1F4A9,
]
ASCII_POOL = (
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    "'\"!?#$%&()*+,-./:;<=>@[]^_`{|}~ \t\n\r"
)


def random_text(rng: random.Random, max_len: int = 60) -> str:
    out = []
    for _ in range(rng.randrange(max_len + 1)):
        if rng.random() < 0.8:
            out.append(rng.choice(ASCII_POOL))
        else:
            out.append(chr(rng.choice(STABLE_SPECIALS)))
    return "".join(out)


def reference_segment(name: str, text: str) -> list[str]:
    behavior = tokeval.pretokenizer_behavior(name)
    if behavior == "whole-text":
        return [text]
    pattern = tokeval.pretokenizer_pattern(name)
    pattern = pattern.replace(r"\s", r"\p{White_Space}")
    pattern = pattern.replace(r"\S", r"\P{White_Space}")
    spans = [m.span() for m in regex.finditer(pattern, text)]

    out = []
    if behavior == "isolated-matches":
        pos = 0
        for begin, end in spans:
            if begin > pos:
                out.append(text[pos:begin])
            out.append(text[begin:end])
            pos = end
        if pos < len(text):
            out.append(text[pos:])
        return out

    assert behavior == "delimiter-merged-with-next"
    if not spans:
        return [text] if text else []
    if spans[0][0] > 0:
        out.append(text[: spans[0][0]])
    for i, (begin, _end) in enumerate(spans):
        until = spans[i + 1][0] if i + 1 < len(spans) else len(text)
        out.append(text[begin:until])
    return out


def golden_cases():
    with open(GOLDEN, encoding="utf-8") as fh:
        return json.load(fh)["cases"]


@pytest.mark.parametrize("case", golden_cases(), ids=lambda c: c["name"])
def test_golden_segmentations(case):
    got = tokeval.pretokenize(case["text"], case["pretokenizer"])
    assert got == case["expected"]


@pytest.mark.parametrize("case", golden_cases(), ids=lambda c: c["name"])
def test_goldens_agree_with_regex_reference(case):
    expected = reference_segment(case["pretokenizer"], case["text"])
    assert tokeval.pretokenize(case["text"], case["pretokenizer"]) == expected


@pytest.mark.parametrize("name", ["no", "ws", "_ws", "gpt2", "llama3"])
def test_fuzz_against_regex_reference(name):
    rng = random.Random(f"pretok-{name}")
    for _ in range(400):
        text = random_text(rng)
        got = tokeval.pretokenize(text, name)
        assert got == reference_segment(name, text), repr(text)
        assert "".join(got) == text  # pre-tokens tile the input


def test_empty_input():
    assert tokeval.pretokenize("", "no") == [""]
    for name in ["ws", "_ws", "gpt2", "llama3"]:
        assert tokeval.pretokenize("", name) == []


def test_unknown_name_rejected():
    with pytest.raises(tokeval.UsageError):
        tokeval.pretokenize("x", "whitespace")

#!/usr/bin/env python3
"""Regenerate src/unicode_tables.cpp.

Extracts codepoint ranges for the three character classes the pre-tokenizer
scanners need (letter = \\p{L}, number = \\p{N}, whitespace = \\s) from the
`regex` module, which bundles its own copy of the Unicode character database.
The python test suite checks the segmenters against the same module, so the
tables and the reference engine cannot drift apart.

Usage: python3 scripts/gen_unicode_tables.py > src/unicode_tables.cpp
"""

import sys

import regex


def ranges_for(pattern: str):
    matcher = regex.compile(pattern)
    ranges = []
    start = None
    # Lone surrogates are not scalar values; UTF-8 input never produces them.
    for cp in list(range(0x0000, 0xD800)) + list(range(0xE000, 0x110000)):
        if matcher.match(chr(cp)):
            if start is None:
                start = cp
            prev = cp
        else:
            if start is not None:
                ranges.append((start, prev))
                start = None
    if start is not None:
        ranges.append((start, prev))
    return ranges


def emit(name: str, ranges) -> None:
    print(f"const std::vector<CodepointRange> {name} = {{")
    for lo, hi in ranges:
        print(f"    {{0x{lo:05X}, 0x{hi:05X}}},")
    print("};")
    print()


def main() -> None:
    print("// Generated by scripts/gen_unicode_tables.py "
          f"(regex module {regex.__version__})")
    print("// Do not edit by hand.")
    print()
    print('#include "tokeval/unicode.hpp"')
    print()
    print("namespace tokeval {")
    print()
    emit("kLetterRanges", ranges_for(r"\p{L}"))
    emit("kNumberRanges", ranges_for(r"\p{N}"))
    emit("kWhitespaceRanges", ranges_for(r"\s"))
    print("}  // namespace tokeval")


if __name__ == "__main__":
    sys.exit(main())

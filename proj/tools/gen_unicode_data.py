#!/usr/bin/env python3
"""Regenerates src/unicode_data.inc from Python's unicodedata tables.

Covers the Latin letter blocks (Basic Latin, Latin-1 Supplement, Latin
Extended-A/B, Latin Extended Additional) plus the combining marks block
used by their canonical decompositions.  Run from the repository root:

    python3 tools/gen_unicode_data.py > src/unicode_data.inc
"""

import sys
import unicodedata

LETTER_RANGES = [
    (0x0041, 0x005A),
    (0x0061, 0x007A),
    (0x00C0, 0x024F),
    (0x1E00, 0x1EFF),
]

COMBINING_RANGE = (0x0300, 0x036F)


def letter_rows():
    for lo, hi in LETTER_RANGES:
        for cp in range(lo, hi + 1):
            c = chr(cp)
            name = unicodedata.name(c, "")
            if not name.startswith("LATIN "):
                continue
            if " LETTER " not in name and " LIGATURE " not in name:
                continue
            lower = c.lower()
            # Simple mapping: full lowercase of U+0130 is "i" + combining dot;
            # keep the single-character part.
            lower_cp = ord(lower[0]) if lower else cp
            decomp = unicodedata.decomposition(c)
            d1 = d2 = 0
            if decomp and not decomp.startswith("<"):
                parts = [int(x, 16) for x in decomp.split()]
                d1 = parts[0]
                d2 = parts[1] if len(parts) > 1 else 0
            yield cp, name, lower_cp, d1, d2


def combining_rows():
    lo, hi = COMBINING_RANGE
    for cp in range(lo, hi + 1):
        name = unicodedata.name(chr(cp), "")
        if name:
            yield cp, name


def main():
    out = sys.stdout
    out.write("// Generated by tools/gen_unicode_data.py (UCD %s). Do not edit.\n"
              % unicodedata.unidata_version)
    out.write("// Columns: codepoint, character name, simple lowercase, canonical\n")
    out.write("// decomposition pair (0 when absent).\n")
    rows = list(letter_rows())
    out.write("static const LetterData kLetterData[] = {\n")
    for cp, name, lower_cp, d1, d2 in rows:
        out.write('    {0x%04X, "%s", 0x%04X, 0x%04X, 0x%04X},\n'
                  % (cp, name, lower_cp, d1, d2))
    out.write("};\n\n")
    out.write("static const CombiningName kCombiningNames[] = {\n")
    for cp, name in combining_rows():
        out.write('    {0x%04X, "%s"},\n' % (cp, name))
    out.write("};\n")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Dump per-character boxes from a PDF as JSON lines.

Usage: pdf_chars.py <in.pdf> <out.jsonl>

Coordinates use a top-left origin in PDF points. Each page first emits
{"page", "width", "height"}, then one {"ch", "x0", "y0", "x1", "y1", "page",
"baseline"} line per glyph.
"""

import json
import sys

from pdfminer.high_level import extract_pages
from pdfminer.layout import LAParams, LTChar, LTContainer


def chars(layout):
    for obj in layout:
        if isinstance(obj, LTChar):
            yield obj
        elif isinstance(obj, LTContainer):
            yield from chars(obj)


def main(argv):
    if len(argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    src, dst = argv[1], argv[2]
    with open(dst, "w", encoding="utf-8") as out:
        for index, page in enumerate(extract_pages(src, laparams=LAParams())):
            height = page.height
            out.write(json.dumps({"page": index, "width": page.width, "height": height}) + "\n")
            for c in chars(page):
                text = c.get_text()
                if not text.strip():
                    continue
                baseline = height - c.matrix[5]
                for ch in text:
                    out.write(json.dumps({
                        "ch": ch,
                        "x0": round(c.x0, 3), "y0": round(height - c.y1, 3),
                        "x1": round(c.x1, 3), "y1": round(height - c.y0, 3),
                        "page": index, "baseline": round(baseline, 3),
                    }, ensure_ascii=False) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))

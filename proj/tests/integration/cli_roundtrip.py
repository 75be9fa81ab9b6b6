#!/usr/bin/env python3
"""CLI round trip: PDF ingest/ask and QASPER ingest/eval/pairs/weak.

Usage: cli_roundtrip.py <docqa binary> <repo root>
Exits 77 (skipped) when reportlab or pdfminer.six is unavailable.
"""

import json
import os
import subprocess
import sys
import tempfile

try:
    import pdfminer  # noqa: F401
    from reportlab.lib.pagesizes import letter
    from reportlab.pdfgen import canvas
except ImportError as e:
    print(f"skipping: {e}")
    sys.exit(77)

DOCQA, ROOT = sys.argv[1], sys.argv[2]


def run(*args, expect=0):
    p = subprocess.run([DOCQA, *args], capture_output=True, text=True)
    if p.returncode != expect:
        sys.exit(f"docqa {' '.join(args)} -> {p.returncode}\n{p.stdout}\n{p.stderr}")
    return p.stdout


def make_pdf(path):
    c = canvas.Canvas(path, pagesize=letter)
    c.setFont("Helvetica", 10)
    y = 700
    for para in [["The seed lexicon consists of positive and negative predi-",
                  "cates used to assign polarity scores."],
                 ["We trained the models on a large raw corpus of Japanese",
                  "web text using a BiGRU encoder."],
                 ["Table 3 reports accuracy of the polarity classifiers."]]:
        for line in para:
            c.drawString(72, y, line)
            y -= 14
        y -= 14
    c.drawString(300, 40, "3")
    c.save()


with tempfile.TemporaryDirectory() as tmp:
    pdf = os.path.join(tmp, "paper.pdf")
    make_pdf(pdf)
    cfg = os.path.join(tmp, "config.json")
    with open(cfg, "w") as f:
        json.dump({"char_extractor": f"{sys.executable} {ROOT}/tools/pdf_chars.py",
                   "data_dir": os.path.join(tmp, "store")}, f)

    out = run("--config", cfg, "ingest", "--pdf", pdf, "--fallback")
    doc_id = out.split("\t")[0]
    assert "4 passages" in out and "created" in out, out
    assert "already stored" in run("--config", cfg, "ingest", "--pdf", pdf, "--fallback")

    a = json.loads(run("--config", cfg, "ask", "--doc", doc_id, "-q", "What is the seed lexicon?",
                       "--no-timings"))
    assert a["evidence"][0]["text"].startswith(
        "The seed lexicon consists of positive and negative predicates"), a
    assert "timings_ms" not in a
    b = run("--config", cfg, "ask", "--doc", doc_id, "-q", "What is the seed lexicon?", "--no-timings")
    assert json.loads(b) == a
    run("--config", cfg, "ask", "--doc", "d-missing", "-q", "x", expect=3)

    # Sidecar regions keep only the first paragraph.
    chars = os.path.join(tmp, "chars.jsonl")
    subprocess.run([sys.executable, f"{ROOT}/tools/pdf_chars.py", pdf, chars], check=True)
    sidecar = os.path.join(tmp, "regions.json")
    with open(sidecar, "w") as f:
        json.dump([{"page": 0, "bbox": [70, 80, 400, 110], "category": "paragraph", "score": 0.9},
                   {"page": 0, "bbox": [290, 740, 320, 760], "category": "other", "score": 0.8}], f)
    doc = json.loads(run("extract", "--chars", chars, "--regions", sidecar))
    assert [p["text"] for p in doc["passages"]] == [
        "The seed lexicon consists of positive and negative predicates used to assign polarity scores."], doc

    qasper = f"{ROOT}/tests/fixtures/qasper_mini.json"
    split_dir = os.path.join(tmp, "validation")
    assert "2 documents, 2 questions, 1 warnings" in run("ingest", "--qasper", qasper, "--split",
                                                        "validation", "--out", split_dir)
    report_dir = os.path.join(tmp, "report")
    text = run("--config", cfg, "eval", "--split", f"validation={split_dir}",
               "--split", f"test={qasper}", "--out", report_dir)
    assert "Recall@K%" in text and "Answer-F1" in text, text
    report = json.load(open(os.path.join(report_dir, "report.json")))
    assert report["splits"] == ["validation", "test"], report

    pairs = run("pairs", "--split", split_dir)
    assert pairs.splitlines()[0].startswith("q1\t"), pairs
    weak = run("--seed", "5", "weak", "--split", split_dir, "--samples", "2")
    assert len(weak.splitlines()) == 4 and weak == run("--seed", "5", "weak", "--split", split_dir,
                                                       "--samples", "2")

print("cli round trip ok")

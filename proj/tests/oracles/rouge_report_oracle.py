#!/usr/bin/env python3
"""Runs `answersum evaluate` on a benchmark and recomputes every ROUGE figure
in its report from the written summaries with collections.Counter and a
textbook LCS table.

usage: rouge_report_oracle.py ANSWERSUM_BINARY BENCHMARK_JSON WORK_DIR
"""
import json
import os
import re
import subprocess
import sys
from collections import Counter

TOKEN = re.compile(r"[A-Za-z0-9\u0080-\U0010ffff]+")
ASCII_LOWER = str.maketrans("ABCDEFGHIJKLMNOPQRSTUVWXYZ", "abcdefghijklmnopqrstuvwxyz")
TOL = 1e-9


def tokens(sentences):
    return [t.translate(ASCII_LOWER) for s in sentences for t in TOKEN.findall(s)]


def f1(r, p):
    return 0.0 if r + p == 0 else 2 * r * p / (r + p)


def ngram_prf(cand, ref, n):
    c = Counter(tuple(cand[i:i + n]) for i in range(len(cand) - n + 1))
    r = Counter(tuple(ref[i:i + n]) for i in range(len(ref) - n + 1))
    overlap = sum((c & r).values())
    rec = overlap / sum(r.values()) if r else 0.0
    prec = overlap / sum(c.values()) if c else 0.0
    return rec, prec, f1(rec, prec)


def lcs(a, b):
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            table[i][j] = table[i - 1][j - 1] + 1 if a[i - 1] == b[j - 1] else max(table[i - 1][j], table[i][j - 1])
    return table[-1][-1]


def lcs_prf(cand, ref):
    l = lcs(cand, ref)
    rec = l / len(ref) if ref else 0.0
    prec = l / len(cand) if cand else 0.0
    return rec, prec, f1(rec, prec)


def mean_over(refs, fn):
    rows = [fn(ref) for ref in refs]
    return [sum(x[k] for x in rows) / len(rows) for k in range(3)]


def main():
    binary, benchmark, work = sys.argv[1:4]
    os.makedirs(work, exist_ok=True)
    report_path = os.path.join(work, "report.json")
    summaries_path = os.path.join(work, "summaries.json")
    failures = 0
    with open(benchmark, encoding="utf-8") as fh:
        entries = json.load(fh)
    entries = entries["entries"] if isinstance(entries, dict) else entries

    for mode in ("stage1", "stage12", "full"):
        subprocess.run([binary, "evaluate", "--benchmark", benchmark, "--ablation", mode, "--out", report_path,
                        "--summaries", summaries_path], check=True, stdout=subprocess.DEVNULL)
        with open(report_path, encoding="utf-8") as fh:
            report = json.load(fh)
        with open(summaries_path, encoding="utf-8") as fh:
            summaries = json.load(fh)

        totals = {m: [0.0, 0.0, 0.0] for m in ("rouge1", "rouge2", "rougeL")}
        for i, (entry, summary, row) in enumerate(zip(entries, summaries, report["per_query"])):
            cand = tokens(s["text"] for s in summary["sentences"])
            refs = [tokens(r) for r in entry["references"]]
            want = {
                "rouge1": mean_over(refs, lambda r: ngram_prf(cand, r, 1)),
                "rouge2": mean_over(refs, lambda r: ngram_prf(cand, r, 2)),
                "rougeL": mean_over(refs, lambda r: lcs_prf(cand, r)),
            }
            for metric, values in want.items():
                got = [row[metric][k] for k in ("recall", "precision", "f1")]
                for k in range(3):
                    totals[metric][k] += values[k] / len(entries)
                    if abs(got[k] - values[k]) > TOL:
                        print(f"{mode} entry {i} {metric}: report {got[k]!r}, oracle {values[k]!r}")
                        failures += 1
        for metric, values in totals.items():
            got = [report["aggregate"][metric][k] for k in ("recall", "precision", "f1")]
            for k in range(3):
                if abs(got[k] - values[k]) > TOL:
                    print(f"{mode} aggregate {metric}: report {got[k]!r}, oracle {values[k]!r}")
                    failures += 1
        print(f"{mode}: ROUGE-1/2/L F1 {totals['rouge1'][2]:.4f} {totals['rouge2'][2]:.4f} {totals['rougeL'][2]:.4f}")

    if failures:
        print(f"{failures} mismatches")
        return 1
    print("oracle agrees")
    return 0


if __name__ == "__main__":
    sys.exit(main())

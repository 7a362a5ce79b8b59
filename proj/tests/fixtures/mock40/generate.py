#!/usr/bin/env python3
# Copyright 2026 The TTH Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the 40-question scripted fixture and its golden metrics.

The golden metrics are computed here from the scripted design alone, without
running the C++ pipeline, so they serve as an independent oracle for the
end-to-end run. Re-running this script is deterministic.
"""

import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
TARGETS = ["Target Alpha", "Target Beta", "Target Gamma"]
JUDGES = {t: t.replace("Target", "Judge") for t in TARGETS}
STRATEGIES = [
    "base",
    "cot",
    "self_refine",
    "external_judge",
    "tth",
    "categorical_hint",
    "universal_taxonomy_hint",
]
WORDS = [
    "zebra", "tractor", "violin", "cactus", "lantern", "anchor", "pelican", "kettle",
    "saddle", "compass", "walrus", "trumpet", "igloo", "pretzel", "glacier", "harp",
    "toucan", "scooter", "mitten", "volcano", "beaver", "canoe", "teapot", "falcon",
    "ladder", "rhubarb", "sextant", "otter", "banjo", "cobra", "hammock", "lobster",
    "quilt", "rocket", "stapler", "tulip", "wombat", "yacht", "abacus", "bagpipe",
]
HINTS = [
    "Look closely at the marked region before reading the options.",
    "Compare the outline of the object with each candidate in turn.",
    "Notice the texture and material of the object in the marked region.",
]
REVISED_HINT = "Focus on the shape of the object rather than its surroundings."
MODES = ["counting", "recognition", "spatial relation", "OCR", "hallucination", "knowledge"]
R_MAX = 3

# Chance that a strategy's final answer is correct, given whether the base
# answer (trial 1) was correct.
P_CORRECT = {
    "cot": (0.30, 0.92),
    "self_refine": (0.25, 0.90),
    "external_judge": (0.40, 0.88),
    "tth": (0.65, 0.95),
    "categorical_hint": (0.35, 0.90),
    "universal_taxonomy_hint": (0.20, 0.85),
}


def wrong(gold, rng):
    return (gold + 1 + rng.randrange(3)) % 4


def answer_entry(model, qid, behavior, index):
    return {"model": model, "question_id": qid, "behavior": behavior, "answer_index": index,
            "reasoning": "scripted"}


def raw_entry(model, qid, behavior, raw):
    return {"model": model, "question_id": qid, "behavior": behavior, "raw": raw}


def tokens(text):
    out, cur = [], ""
    for ch in text.lower():
        if ch.isalnum():
            cur += ch
        elif cur:
            out.append(cur)
            cur = ""
    if cur:
        out.append(cur)
    return out


def leaks(hint_items, gold_text):
    gold = tokens(gold_text)
    for item in hint_items:
        t = tokens(item)
        for i in range(len(t) - len(gold) + 1):
            if t[i:i + len(gold)] == gold:
                return True
    return False


def main():
    rng = random.Random(2026)
    dataset, script = [], []
    # Final answers per (question, target, strategy) for the oracle.
    finals = {}

    for t in TARGETS:
        script.append(raw_entry(JUDGES[t], "*", "*",
                                "The response overlooks part of the image; re-check every option."))
    script.append(raw_entry("proposer", "*", "*", json.dumps({"hint": [HINTS[0]]})))
    script.append(raw_entry("editor", "*", "*", json.dumps({"verdict": "approve", "feedback": ""})))
    script.append(raw_entry("annotator", "*", "*", "other"))

    for i in range(40):
        qid = f"q{i + 1:02d}"
        options = rng.sample(WORDS, 4)
        gold = rng.randrange(4)
        dataset.append({
            "id": qid,
            "image_ref": f"images/{qid}.jpg",
            "question": f"Which object appears in the marked region of scene {i + 1}?",
            "options": options,
            "gold_index": gold,
            "rationale": f"The marked region shows a {options[gold]}.",
            "dataset": "Custom",
        })
        easy = i % 3 == 0
        for ti, t in enumerate(TARGETS):
            if easy:
                pattern = "bc"
            else:
                pattern = rng.choices(["bc", "bi_same", "bi_diff", "mixed", "unparse"],
                                      weights=[4 - ti, 3 + ti, 1, 1, 1])[0]
            if pattern == "bc":
                trials = [gold] * 3
            elif pattern == "bi_same":
                w = wrong(gold, rng)
                trials = [w] * 3
            elif pattern == "bi_diff":
                w1 = wrong(gold, rng)
                w2 = next(x for x in range(4) if x not in (gold, w1))
                trials = [w1, w2, w1]
            elif pattern == "mixed":
                trials = [gold, wrong(gold, rng), gold] if rng.random() < 0.5 else [wrong(gold, rng), gold, gold]
            else:
                trials = [gold, None, gold]
            for k, a in enumerate(trials, start=1):
                if a is None:
                    script.append(raw_entry(t, qid, f"base:trial-{k}", "cannot tell from the picture"))
                else:
                    script.append(answer_entry(t, qid, f"base:trial-{k}", a))

            if all(a == gold for a in trials):
                label = "base_correct"
            elif all(a is not None and a != gold for a in trials):
                label = "base_incorrect"
            else:
                label = "mixed"
            base_correct = trials[0] == gold

            # Agentic loop design: proposer validity, editor verdicts and the
            # first round in which the verifier answers correctly.
            first_correct = rng.choice([1, 2, 3, None] if label == "base_incorrect" else [1, 1, 2, None])
            burn_first = label != "mixed" and rng.random() < 0.15
            revise_round = rng.choice([None, None, 1, 2])
            leaky = label == "base_incorrect" and rng.random() < 0.12
            hint_items = {}
            for r in range(1, R_MAX + 1):
                if r == 1 and burn_first:
                    script.append(raw_entry("proposer", qid, f"propose:round-{r}:{t}", "no hint today"))
                    continue
                proposed = [HINTS[(i + r) % len(HINTS)]]
                if leaky:
                    proposed = [f"The answer is the {options[gold]}."]
                script.append(raw_entry("proposer", qid, f"propose:round-{r}:{t}", json.dumps({"hint": proposed})))
                if revise_round == r and not leaky:
                    script.append(raw_entry("editor", qid, f"edit:round-{r}:{t}", json.dumps(
                        {"verdict": "revise", "hint": [REVISED_HINT], "feedback": "be more specific"})))
                    hint_items[r] = [REVISED_HINT]
                else:
                    hint_items[r] = proposed
                correct = first_correct == r
                script.append(answer_entry(t, qid, f"hinted:round-{r}", gold if correct else wrong(gold, rng)))
            script.append(answer_entry(t, qid, "hinted:reward",
                                       gold if rng.random() < (0.7 if base_correct else 0.4) else wrong(gold, rng)))
            # The second reward template always works, so the toy policy has something to learn.
            script.append(answer_entry(t, qid, "hinted:reward:template-2", gold))

            # Hint-loop outcome, recomputed independently.
            selected, last, success = None, None, False
            if label != "mixed":
                for r in range(1, R_MAX + 1):
                    if r not in hint_items:
                        continue
                    last = hint_items[r]
                    if first_correct == r:
                        success = True
                        selected = last
                        break
                if not success and label == "base_incorrect" and last is not None:
                    selected = last
            has_hint = selected is not None and not leaks(selected, options[gold])

            if label == "base_incorrect":
                script.append(raw_entry("annotator", qid, f"annotate:{t}", rng.choice(MODES + ["miscounted objects"])))

            answers = {}
            for s, (p_wrong, p_right) in P_CORRECT.items():
                p = p_right if base_correct else p_wrong
                answers[s] = gold if rng.random() < p else wrong(gold, rng)
            for s in ["cot", "tth", "categorical_hint", "universal_taxonomy_hint"]:
                script.append(answer_entry(t, qid, s, answers[s]))
            script.append(answer_entry(t, qid, "self_refine:revise", answers["self_refine"]))
            script.append(answer_entry(t, qid, "external_judge:revise", answers["external_judge"]))

            finals[(qid, t)] = {
                "base_correct": base_correct,
                "base": trials[0] == gold,
                "cot": answers["cot"] == gold,
                "self_refine": answers["self_refine"] == gold,
                "external_judge": answers["external_judge"] == gold,
                "tth": (answers["tth"] if has_hint else trials[0]) == gold,
                "categorical_hint": (answers["categorical_hint"] if label == "base_incorrect"
                                     else answers["cot"]) == gold,
                "universal_taxonomy_hint": answers["universal_taxonomy_hint"] == gold,
            }

    with open(HERE / "dataset.jsonl", "w") as f:
        for row in dataset:
            f.write(json.dumps(row, sort_keys=True, separators=(",", ":")) + "\n")
    with open(HERE / "script.jsonl", "w") as f:
        for row in script:
            f.write(json.dumps(row, sort_keys=True, separators=(",", ":")) + "\n")

    golden = HERE / "golden"
    golden.mkdir(exist_ok=True)
    with open(golden / "metrics.jsonl", "w") as f:
        for t in sorted(TARGETS):
            for s in STRATEGIES:
                rows = [finals[(d["id"], t)] for d in dataset]
                n = len(rows)
                acc = sum(r[s] for r in rows) / n

                def rate(base_value, final_value):
                    cond = [r for r in rows if r["base_correct"] == base_value]
                    num = sum(1 for r in cond if r[s] == final_value)
                    return {"denominator": len(cond), "numerator": num,
                            "value": (num / len(cond)) if cond else None}

                row = {"accuracy": acc, "harm": rate(True, False), "model": t, "n": n,
                       "repair": rate(False, True), "strategy": s}
                f.write(json.dumps(row, sort_keys=True, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()

"""
Three-step walkthrough of "We choose to go"
===========================================

A streaming recognizer re-decodes all audio so far at every frame and
returns a growing hypothesis. Here three 0.5 s frames produce

    "We cho"  ->  "We choose"  ->  "We choose to go"

and we follow the text through each stage.
"""

from wordalign import DeltaSegment, align, compute_delta, split_linear, tokenize
from wordalign.pipeline import replay

hypotheses = ["We cho", "We choose", "We choose to go"]
frames = [(0.0, 0.5), (0.5, 1.0), (1.0, 1.5)]

# %%
# Step 1: per-frame deltas. Each frame owns whatever text its hypothesis
# added. "ose" is only part of a word; "to go" is two words.
prev = ""
deltas = []
for i, (text, (a, b)) in enumerate(zip(hypotheses, frames)):
    delta, revision = compute_delta(prev, text)
    deltas.append(DeltaSegment(i, a, b, delta, char_offset=len(prev)))
    print(f"frame {i} [{a:.2f}, {b:.2f}]  delta {delta!r}")
    prev = text

# %%
# Step 2: split each delta on spaces and give each of its k tokens an
# equal share of the frame.
fragments = [s for d in deltas for s in split_linear(d)]
for s in fragments:
    print(f"  {s.token:>4}  [{s.start_s:.3f}, {s.end_s:.3f}]")

# %%
# Step 3: group fragments so that each group spells one word of the newest
# hypothesis. "cho" + "ose" merge into "choose".
result = align(fragments, tokenize(hypotheses[-1]))
for w in result.words:
    print(f"  {w.word:>6}  [{w.start_s:.3f}, {w.end_s:.3f}]  from {len(w.fragments)} fragment(s)")
print("edit cost:", result.total_cost)

# %%
# The streaming session does the same incrementally and holds the last
# word back until the hypothesis moves past it.
events, _ = replay(hypotheses, frame_interval_s=0.5)
for e in events:
    print(f"  frame {e.frame}: {e.kind.value:<12} {e.word:<7} [{e.start_s:.2f}, {e.end_s:.2f}]")

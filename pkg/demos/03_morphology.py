"""Cleaning a binary detector output with 1-D morphology.

Opening with width k removes positive runs shorter than k (isolated false
blips); closing fills interior gaps shorter than k (mid-passage flickers).
The default post-filter is closing then opening, both width 3.
"""
import numpy as np

from vpd.morphology import MorphFilterSpec, closing, opening
from vpd.passage_metric import extract_intervals, pass_quality


def show(label, signal):
    print(f"{label:14s} {''.join(str(int(v)) for v in signal)}")


clean = np.zeros(60, dtype=np.uint8)
clean[10:30] = 1
clean[38:52] = 1

noisy = clean.copy()
noisy[16] = 0          # flicker inside the first passage
noisy[44:46] = 0       # flicker inside the second passage
noisy[3] = 1           # isolated false blip
noisy[55:57] = 1       # short false blip

show("reference", clean)
show("noisy", noisy)
show("closed (k=3)", closing(noisy, 3))
show("opened (k=3)", opening(noisy, 3))

filt = MorphFilterSpec(open_width=3, close_width=3, order="close-then-open")
filtered = filt(noisy)
show("close+open", filtered)

before = pass_quality(extract_intervals(clean), extract_intervals(noisy))
after = pass_quality(extract_intervals(clean), extract_intervals(filtered))
print(f"\nPQ before filtering: {before.pq:.3f}  (errors: {before.counts})")
print(f"PQ after filtering:  {after.pq:.3f}  (errors: {after.counts})")

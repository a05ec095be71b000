"""The Pass Quality (PQ) metric: interval matching and error costs.

PQ = R / (R + sum of error costs), computed over connected components of the
overlap graph between reference and detected passages.  A correct 1-1 match
costs 0; a miss or false detection costs 1; one detection covering L
references ("merged") costs L; K detections on one reference ("split") costs
K; an L-to-K tangle costs max(L, K).
"""
from vpd.passage_metric import Interval, match_passages, pass_quality

ref = [Interval(10, 40), Interval(60, 90), Interval(120, 150), Interval(200, 230)]

scenarios = {
    "perfect": list(ref),
    "one miss": ref[:3],
    "merged pair": [Interval(10, 95), Interval(120, 150), Interval(200, 230)],
    "split passage": [Interval(10, 40), Interval(60, 90),
                      Interval(120, 130), Interval(140, 150),
                      Interval(200, 230)],
    "extra false blip": list(ref) + [Interval(300, 302)],
}

for name, det in scenarios.items():
    report = pass_quality(ref, det)
    kinds = {c.kind for c in match_passages(ref, det) if c.kind != "correct"}
    print(f"{name:18s} R={report.r} sum_err={report.sum_err} "
          f"PQ={report.pq:.3f} errors={sorted(kinds) or ['-']}")

# touching intervals do not overlap: [0,5] and [6,9] share no frame
report = pass_quality([Interval(0, 5)], [Interval(6, 9)])
print(f"\ntouching != overlap: R={report.r} sum_err={report.sum_err} "
      f"(one miss + one false)")

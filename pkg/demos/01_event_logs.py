"""Event-driven checkpoint logs: parsing, densification, and round trips.

A checkpoint log is a CSV with header ``frame,shield,loop,cor,basic,ref``
where a row is recorded only when one of the three input sensor bits
(shield, loop, cor) changes.  Between records every channel holds its value
(zero-order hold).
"""
from vpd.event_log import densify, parse_log, sparsify, write_log
from vpd.passage_metric import extract_intervals

SAMPLE = """\
frame,shield,loop,cor,basic,ref
196,1,0,0,0,0
201,1,1,0,0,0
202,0,1,1,1,0
208,1,1,1,1,1
246,0,1,1,1,1
266,1,1,1,1,0
268,1,1,0,1,0
269,1,0,0,0,0
270,0,0,0,0,0
"""

log = parse_log(SAMPLE, source_id="sample")
print(f"parsed {len(log)} event records from {log.source_id!r}")

series = densify(log)
print(f"dense view: frames {series.first_frame}..{series.last_frame} "
      f"({len(series)} frames)")

ref = extract_intervals(series.channel("ref_pass"), series.first_frame)
print(f"reference passages: {[(iv.start, iv.end) for iv in ref]}")

# the sparse and dense representations are mutually inverse
assert sparsify(series, source_id=log.source_id).records == log.records
assert parse_log(write_log(log)).records == log.records
print("round trips OK: parse <-> write and densify <-> sparsify")

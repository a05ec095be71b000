import numpy as np
import pytest

from vpd.event_log import EventLog, EventRecord


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance check at the end of the run."""
    rows = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" in nodeid and getattr(rep, "when", "call") == "call":
                rows.append((nodeid, "PASS" if status == "passed" else "FAIL"))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for nodeid, verdict in sorted(rows):
        terminalreporter.write_line(f"{verdict}  {nodeid.split('::', 1)[1]}")

TABLE_ROWS = [
    (196, 1, 0, 0, 0, 0),
    (201, 1, 1, 0, 0, 0),
    (202, 0, 1, 1, 1, 0),
    (208, 1, 1, 1, 1, 1),
    (246, 0, 1, 1, 1, 1),
    (266, 1, 1, 1, 1, 0),
    (268, 1, 1, 0, 1, 0),
    (269, 1, 0, 0, 0, 0),
    (270, 0, 0, 0, 0, 0),
]


@pytest.fixture
def sample_log() -> EventLog:
    return EventLog(tuple(EventRecord(*row) for row in TABLE_ROWS), source_id="sample")


def random_event_log(rng: np.random.Generator, max_records: int = 30,
                     source_id: str = "rand") -> EventLog:
    """Random event-valid log: consecutive records always change an input bit."""
    n = int(rng.integers(1, max_records + 1))
    frame = int(rng.integers(0, 50))
    inputs = rng.integers(0, 2, 3)
    records = []
    for _ in range(n):
        basic, ref = rng.integers(0, 2, 2)
        records.append(EventRecord(frame, int(inputs[0]), int(inputs[1]),
                                   int(inputs[2]), int(basic), int(ref)))
        frame += int(rng.integers(1, 20))
        # flip at least one input channel so the next record is a real event
        flips = rng.random(3) < 0.4
        if not flips.any():
            flips[rng.integers(0, 3)] = True
        inputs = inputs ^ flips
    return EventLog(tuple(records), source_id=source_id)


def random_intervals(rng: np.random.Generator, max_count: int = 12,
                     span: int = 200) -> list:
    """Sorted disjoint interval list inside [0, span)."""
    from vpd.passage_metric import Interval
    out = []
    pos = int(rng.integers(0, 10))
    for _ in range(int(rng.integers(0, max_count + 1))):
        pos += int(rng.integers(1, 12))
        length = int(rng.integers(1, 15))
        if pos + length >= span:
            break
        out.append(Interval(pos, pos + length - 1))
        pos += length
    return out

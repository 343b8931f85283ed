import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tempcomm import (InvalidIntervalError, ParseError, Snapshot, TemporalEvent, TemporalGraph,
                      extract_snapshots, ingest_events, parse_duration, restrict_time)

from oracles import enumerate_windows


def graph(rows):
    return TemporalGraph.from_tuples(rows)


def test_ingest_sorts_by_time():
    g = ingest_events(io.BytesIO(b"a,b,5\nb,c,3"), delimiter=",", columns=(0, 1, 2))
    assert [(e.src, e.dst, e.time) for e in g.events] == [("b", "c", 3), ("a", "b", 5)]
    assert (g.t_min, g.t_max) == (3, 5)
    assert g.node_universe == {"a", "b", "c"}


def test_ingest_empty_file_fails():
    with pytest.raises(ParseError, match="zero parseable events"):
        ingest_events(io.BytesIO(b""))


def test_ingest_comments_only_fails():
    with pytest.raises(ParseError, match="zero parseable events"):
        ingest_events(io.BytesIO(b"# nothing\n\n"))


def test_ingest_bad_time_names_line():
    with pytest.raises(ParseError) as err:
        ingest_events(io.BytesIO(b"# header comment\na b 1\na b x\n"))
    assert err.value.line == 3
    assert "line 3" in str(err.value)


def test_ingest_counts_malformed_lines(caplog):
    data = b"a b 1\nlonely\nc d 2\n"
    g = ingest_events(io.BytesIO(data))
    assert len(g) == 2
    assert g.malformed_lines == (2,)
    assert "malformed" in caplog.text


def test_ingest_column_mapping_header_and_weight(tmp_path):
    path = tmp_path / "edges.tsv"
    path.write_text("time\tw\tsrc\tdst\n7\t2.5\tx\ty\n3\t1\ty\tz\n9\t-1\tx\tz\n")
    g = ingest_events(path, delimiter="\t", columns=(2, 3, 0, 1), header=True)
    assert [(e.src, e.dst, e.time, e.weight) for e in g.events] == [("y", "z", 3, 1.0), ("x", "y", 7, 2.5)]
    assert g.malformed_lines == (4,)  # negative weight


def test_ingest_whitespace_runs():
    g = ingest_events(io.StringIO("1  2\t10\n2 3 11\n"))
    assert len(g) == 2


def test_ingest_rejects_non_utf8():
    with pytest.raises(ParseError):
        ingest_events(io.BytesIO(b"\xff\xfe a b 1"))


def test_ingest_stable_on_ties():
    g = ingest_events(io.BytesIO(b"a b 1\nc d 0\ne f 1\ng h 1\n"))
    assert [e.src for e in g.events] == ["c", "a", "e", "g"]


def test_event_invariants():
    with pytest.raises(ValueError):
        TemporalEvent("", "b", 1)
    with pytest.raises(ValueError):
        TemporalEvent("a", "b", 2**63)


def test_restrict_half_open():
    g = graph([("a", "b", 1), ("b", "c", 5), ("c", "d", 9)])
    r = restrict_time(g, 0, 6)
    assert [e.time for e in r.events] == [1, 5]
    assert r.node_universe == {"a", "b", "c"}


def test_restrict_empty_range_is_valid():
    g = graph([("a", "b", 1), ("b", "c", 5)])
    r = restrict_time(g, 100, 200)
    assert len(r) == 0 and r.node_universe == frozenset()


def test_restrict_identity():
    g = graph([("a", "b", 1), ("b", "c", 5), ("c", "d", 9)])
    assert restrict_time(g, g.t_min, g.t_max + 1).events == g.events


def test_restrict_bad_interval():
    g = graph([("a", "b", 1)])
    with pytest.raises(InvalidIntervalError):
        restrict_time(g, 5, 5)


def test_sliding_windows_start_at_t_min():
    g = graph([(f"n{t}", f"n{t + 1}", t) for t in range(20)])
    snaps = extract_snapshots(g, 10, 1)
    assert snaps[0].window == (0, 10)
    assert snaps[1].window == (1, 11)
    assert len(snaps) == 20


def test_snapshot_collapses_multi_edges_and_loops():
    g = graph([("a", "b", 1), ("a", "b", 2), ("a", "a", 3), ("b", "a", 4)])
    (s,) = extract_snapshots(g, 10, 10)
    assert s.edges == (("a", "b"),)
    assert s.nodes == ("a", "b")


def test_self_loop_only_node_is_isolated():
    s = Snapshot.from_pairs([("a", "b"), ("c", "c")])
    assert s.nodes == ("a", "b", "c")
    assert s.edges == (("a", "b"),)


def test_event_on_window_end_goes_to_next_window():
    g = graph([("a", "b", 0), ("c", "d", 10)])
    snaps = extract_snapshots(g, 10, 5)
    assert [s.window for s in snaps] == [(0, 10), (5, 15), (10, 20)]
    assert snaps[0].edges == (("a", "b"),)
    assert snaps[1].edges == (("c", "d"),)
    assert snaps[2].edges == (("c", "d"),)


def test_empty_windows_are_emitted():
    g = graph([("a", "b", 0), ("c", "d", 30)])
    snaps = extract_snapshots(g, 10, 10)
    assert [s.is_empty for s in snaps] == [False, True, True, False]


def test_extract_rejects_bad_parameters():
    g = graph([("a", "b", 0)])
    for w, d in [(0, 1), (10, 0), (5, 6), (-1, -1)]:
        with pytest.raises(ValueError):
            extract_snapshots(g, w, d)


def test_weight_summing_is_opt_in():
    g = graph([("a", "b", 1, 2.0), ("b", "a", 2, 3.0)])
    (plain,) = extract_snapshots(g, 10, 10)
    (summed,) = extract_snapshots(g, 10, 10, sum_weights=True)
    assert plain.weights is None
    assert summed.weights == (5.0,)


@pytest.mark.parametrize("text, expected", [("10d", 864000), ("36h", 129600), ("90", 90),
                                            ("5m", 300), (7, 7), ("1w", 604800)])
def test_parse_duration(text, expected):
    assert parse_duration(text) == expected


@pytest.mark.parametrize("text", ["", "0", "-1d", "ten days", "1.5s"])
def test_parse_duration_rejects(text):
    with pytest.raises(ValueError):
        parse_duration(text)


events = st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 40)), min_size=1, max_size=60)


@settings(max_examples=150, deadline=None)
@given(events, st.integers(1, 12), st.data())
def test_windowing_matches_enumeration(rows, window, data):
    stride = data.draw(st.integers(1, window))
    g = graph(rows)
    snaps = extract_snapshots(g, window, stride)
    times = [e.time for e in g.events]
    starts, members = enumerate_windows(times, window, stride)
    assert [s.window_start for s in snaps] == starts
    for s, idx in zip(snaps, members):
        expect = {frozenset((g.events[i].src, g.events[i].dst)) for i in idx
                  if g.events[i].src != g.events[i].dst}
        assert {frozenset(e) for e in s.edges} == expect
        assert len(s.edges) <= len(idx)
        nodes = {g.events[i].src for i in idx} | {g.events[i].dst for i in idx}
        assert set(s.nodes) == nodes


@settings(max_examples=60, deadline=None)
@given(events, st.integers(1, 12))
def test_tiling_windows_cover_universe(rows, window):
    g = graph(rows)
    snaps = extract_snapshots(g, window, window)
    assert set().union(*(set(s.nodes) for s in snaps)) == g.node_universe


def test_extract_deterministic():
    rng = random.Random(3)
    rows = [(rng.randrange(30), rng.randrange(30), rng.randrange(500)) for _ in range(400)]
    assert extract_snapshots(graph(rows), 50, 7) == extract_snapshots(graph(rows), 50, 7)

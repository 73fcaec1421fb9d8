import pytest
from hypothesis import given, strategies as st

from layerws import GeneratorSpec, TraceOp, TraceError, generate, parse, serialize
from layerws.reference import WorkingSetTracker


def test_parse_basic():
    assert parse("I 5\nS 5\nD 5\n") == [TraceOp("I", 5), TraceOp("S", 5), TraceOp("D", 5)]


def test_parse_empty_and_comments():
    assert parse("") == []
    assert parse("# all quiet\n\n   \n") == []
    assert parse("S 3 # trailing note\n") == [TraceOp("S", 3)]


def test_parse_negative_keys():
    assert parse("I -7\n") == [TraceOp("I", -7)]


def test_parse_error_reports_position():
    with pytest.raises(TraceError) as err:
        parse("I 1\nX 2\n")
    assert err.value.line == 2
    with pytest.raises(TraceError) as err:
        parse("I 1\nI two\n")
    assert err.value.line == 2
    with pytest.raises(TraceError):
        parse("I\n")


trace_strategy = st.lists(
    st.builds(TraceOp,
              st.sampled_from("SID"),
              st.integers(min_value=-2**63, max_value=2**63 - 1)),
    max_size=60)


@given(trace_strategy)
def test_serialize_parse_roundtrip(trace):
    assert parse(serialize(trace)) == trace


def test_determinism():
    spec = GeneratorSpec("uniform", universe=10, ops=5, seed=7)
    assert generate(spec) == generate(spec)
    other = GeneratorSpec("uniform", universe=10, ops=5, seed=8)
    assert generate(spec) != generate(other) or len(generate(spec)) == 0


def test_sequential_scan_is_plain_search_ramp():
    spec = GeneratorSpec("sequential_scan", universe=4, ops=4, seed=0)
    assert generate(spec) == [TraceOp("S", 1), TraceOp("S", 2), TraceOp("S", 3), TraceOp("S", 4)]


def test_uniform_traces_are_valid():
    spec = GeneratorSpec("uniform", universe=50, ops=2000, seed=3)
    present = set()
    for op in generate(spec):
        if op.kind == "I":
            assert op.key not in present
            present.add(op.key)
        elif op.kind == "D":
            assert op.key in present
            present.discard(op.key)


def test_op_counts_respected():
    for family in ("uniform", "zipf_recency", "sequential_scan", "finger_walk", "repeat_block"):
        spec = GeneratorSpec(family, universe=30, ops=100, seed=1)
        assert len(generate(spec)) == 100


def test_access_families_insert_universe_first():
    for family in ("zipf_recency", "finger_walk", "repeat_block"):
        spec = GeneratorSpec(family, universe=20, ops=200, seed=5)
        trace = generate(spec)
        head = trace[:20]
        assert all(op.kind == "I" for op in head)
        assert sorted(op.key for op in head) == list(range(1, 21))
        assert all(op.kind == "S" and 1 <= op.key <= 20 for op in trace[20:])


def test_zipf_recency_stresses_recent_keys():
    spec = GeneratorSpec("zipf_recency", universe=100, ops=10_000, seed=11, theta=2.0)
    tracker = WorkingSetTracker()
    ws = []
    for op in generate(spec):
        if op.kind == "I":
            tracker.record_insert(op.key)
        else:
            ws.append(tracker.working_set_number(op.key))
            tracker.record_access(op.key)
    mean_w = sum(ws) / len(ws)
    assert mean_w < 20, mean_w  # heavily recency-biased


def test_finger_walk_steps_by_one_rank():
    spec = GeneratorSpec("finger_walk", universe=50, ops=500, seed=2)
    trace = generate(spec)
    searches = [op.key for op in trace if op.kind == "S"]
    assert all(abs(a - b) <= 1 for a, b in zip(searches, searches[1:]))


def test_generator_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec("nope", universe=10, ops=5)
    with pytest.raises(ValueError):
        GeneratorSpec("uniform", universe=0, ops=5)
    with pytest.raises(ValueError):
        GeneratorSpec("zipf_recency", universe=10, ops=5, theta=0.0)

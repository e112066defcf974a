import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankmerge import Dataset, ModelRun, QuestionRecord, ValidationError, dumps_dataset, load_dataset
from rankmerge.dataset import validate_run_against_dataset


def jsonl(*records):
    return io.BytesIO("".join(json.dumps(r) + "\n" for r in records).encode("utf-8"))


def test_minimal_record():
    ds = load_dataset(jsonl({"question_id": "q1", "candidate_count": 4, "gt_index": 2}))
    assert ds.d == 1
    assert ds["q1"].gt_index == 2
    assert ds["q1"].relevance is None


def test_gt_index_out_of_range():
    with pytest.raises(ValidationError, match="gt_index out of range"):
        load_dataset(jsonl({"question_id": "q1", "candidate_count": 100, "gt_index": 100}))


def test_duplicate_question_id_reports_line():
    rec = {"question_id": "q1", "candidate_count": 3, "gt_index": 0}
    with pytest.raises(ValidationError, match="duplicate question_id") as err:
        load_dataset(jsonl(rec, rec))
    assert err.value.line == 2


@pytest.mark.parametrize(
    "record, message",
    [
        ({"question_id": "q", "candidate_count": 3, "gt_index": 0, "relevance": [1, 0]}, "relevance length mismatch"),
        ({"question_id": "q", "candidate_count": 2, "gt_index": 0, "relevance": [1, 1.5]}, "outside \\[0,1\\]"),
        ({"question_id": "q", "candidate_count": 2, "gt_index": 0, "relevance": [1, -0.1]}, "outside \\[0,1\\]"),
        ({"question_id": "q", "candidate_count": 0, "gt_index": 0}, "candidate_count"),
        ({"question_id": "q", "gt_index": 0}, "missing candidate_count"),
        ({"question_id": 3, "candidate_count": 2, "gt_index": 0}, "question_id"),
        ({"question_id": "q", "candidate_count": 2, "gt_index": 0, "extra": 1}, "unknown keys"),
    ],
)
def test_invalid_records(record, message):
    with pytest.raises(ValidationError, match=message):
        load_dataset(jsonl(record))


def test_malformed_json_names_line():
    src = io.StringIO('{"question_id": "a", "candidate_count": 2, "gt_index": 0}\n{not json}\n')
    with pytest.raises(ValidationError, match="malformed record") as err:
        load_dataset(src)
    assert err.value.line == 2


def test_blank_lines_skipped_and_order_kept(tmp_path):
    path = tmp_path / "a.jsonl"
    path.write_text(
        '{"question_id": "b", "candidate_count": 2, "gt_index": 1}\n\n'
        '{"question_id": "a", "candidate_count": 3, "gt_index": 0, "candidates": ["x", "y", "z"]}\n',
        encoding="utf-8",
    )
    ds = load_dataset(path)
    assert ds.question_ids == ["b", "a"]
    assert ds["a"].label(2) == "z"
    assert ds["b"].label(1) == "#1"


def test_missing_file_names_path(tmp_path):
    with pytest.raises(ValidationError, match="nope.jsonl"):
        load_dataset(tmp_path / "nope.jsonl")


# -- round trip ------------------------------------------------------------------

relevance_values = st.sampled_from([0.0, 1 / 3, 2 / 3, 1.0]) | st.floats(0, 1)


@st.composite
def question_records(draw, qid):
    n = draw(st.integers(1, 12))
    gt = draw(st.integers(0, n - 1))
    rel = draw(st.none() | st.lists(relevance_values, min_size=n, max_size=n))
    cands = draw(st.none() | st.lists(st.text(max_size=5), min_size=n, max_size=n))
    return QuestionRecord(qid, n, gt, tuple(rel) if rel else None, tuple(cands) if cands else None)


@st.composite
def datasets(draw):
    d = draw(st.integers(0, 6))
    return Dataset(tuple(draw(question_records(f"q{i}")) for i in range(d)))


@settings(max_examples=200, deadline=None)
@given(datasets())
def test_round_trip(ds):
    again = load_dataset(io.StringIO(dumps_dataset(ds)))
    assert again == ds
    for q in again:
        assert 0 <= q.gt_index < q.candidate_count
        if q.relevance is not None:
            assert len(q.relevance) == q.candidate_count
            assert all(0 <= x <= 1 for x in q.relevance)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fixed_dictionaries({
    "question_id": st.sampled_from(["a", "b", "c", "d"]),
    "candidate_count": st.integers(-1, 5),
    "gt_index": st.integers(-1, 6),
}), max_size=4))
def test_accepted_datasets_satisfy_invariants(records):
    try:
        ds = load_dataset(jsonl(*records))
    except ValidationError:
        return
    assert len(set(ds.question_ids)) == ds.d == len(records)
    for q in ds:
        assert q.candidate_count >= 1
        assert 0 <= q.gt_index < q.candidate_count


# -- run coverage ------------------------------------------------------------------


@pytest.fixture
def small_ds():
    return Dataset(tuple(QuestionRecord(f"q{i}", 3, 0) for i in range(1, 8)))


def test_run_covering_dataset_ok(small_ds):
    run = ModelRun("m", "scores", {q.question_id: (0.1, 0.2, 0.3) for q in small_ds})
    validate_run_against_dataset(run, small_ds)


def test_run_missing_question(small_ds):
    run = ModelRun("m", "scores", {q.question_id: (0.1, 0.2, 0.3) for q in small_ds if q.question_id != "q7"})
    with pytest.raises(ValidationError, match="q7"):
        validate_run_against_dataset(run, small_ds)


def test_run_extra_question(small_ds):
    per_q = {q.question_id: (0.1, 0.2, 0.3) for q in small_ds}
    per_q["zz"] = (1.0, 2.0, 3.0)
    with pytest.raises(ValidationError, match="zz"):
        validate_run_against_dataset(ModelRun("m", "scores", per_q), small_ds)


def test_run_length_mismatch():
    ds = Dataset((QuestionRecord("q1", 100, 5),))
    run = ModelRun("m", "scores", {"q1": tuple(float(i) for i in range(99))})
    with pytest.raises(ValidationError, match="length mismatch.*q1|q1.*length mismatch"):
        validate_run_against_dataset(run, ds)

import json

import numpy as np
import pytest

from lipident import evalx, fusion
from lipident.errors import DataError
from oracles import confusion_brute


def test_accuracy_basics():
    assert evalx.accuracy(["a", "b"], ["a", "b"]) == 1.0
    assert evalx.accuracy(["a", "b"], ["b", "a"]) == 0.0
    assert evalx.accuracy(["a"] * 127 + ["x"] * 129, ["a"] * 256) == pytest.approx(127 / 256)
    # the two-decimal percent formatting used across reports
    assert evalx.format_percent(127 / 256) == "49.61%"
    assert evalx.format_percent(0.4960) == "49.60%"


def test_accuracy_errors():
    with pytest.raises(DataError):
        evalx.accuracy([], [])
    with pytest.raises(DataError):
        evalx.accuracy(["a"], ["a", "b"])


def test_confusion_perfect_diagonal():
    truth = ["a"] * 3 + ["b"] * 2
    m = evalx.confusion(truth, truth, ["a", "b"])
    assert np.array_equal(m.counts, np.array([[3, 0], [0, 2]]))
    assert m.total == 5


def test_confusion_single_probe():
    m = evalx.confusion(["japanese"], ["french"], ["french", "japanese"])
    assert m.counts[0, 1] == 1
    assert m.counts.sum() == 1


def test_confusion_matches_bruteforce():
    rng = np.random.default_rng(3)
    labels = ["x", "y", "z"]
    for _ in range(20):
        n = int(rng.integers(1, 60))
        truth = [labels[i] for i in rng.integers(0, 3, n)]
        pred = [labels[i] for i in rng.integers(0, 3, n)]
        m = evalx.confusion(pred, truth, labels)
        assert m.counts.tolist() == confusion_brute(pred, truth, labels)
        # trace identity against accuracy
        assert evalx.accuracy(pred, truth) == pytest.approx(np.trace(m.counts) / m.total)


def test_confusion_unknown_label():
    with pytest.raises(DataError, match="not in label set"):
        evalx.confusion(["a"], ["q"], ["a", "b"])
    with pytest.raises(DataError, match="not in label set"):
        evalx.confusion(["q"], ["a"], ["a", "b"])


def test_attribution_invariants():
    with pytest.raises(DataError, match="sum"):
        evalx.ErrorAttribution(total_errors=3, lang_correct_id_absent=1, lang_wrong=1, lang_correct_outranked=0)
    a = evalx.ErrorAttribution(2, 1, 1, 0)
    assert a.total_errors == 2


def make_eval_case():
    scores = fusion.ScoreMatrix(
        probe_ids=("p0", "p1", "p2"),
        class_labels=("A", "B", "C", "D"),
        scores=np.array(
            [
                [0.9, 0.8, 0.7, 0.1],
                [0.9, 0.8, 0.7, 0.1],
                [0.9, 0.8, 0.1, 0.05],
            ]
        ),
    )
    subject_language = {"A": "french", "B": "english", "C": "russian", "D": "german"}
    return scores, subject_language


def test_attribute_errors_all_correct():
    scores, subject_language = make_eval_case()
    pred = {"p0": "french", "p1": "english", "p2": "russian"}
    decisions = fusion.fuse(scores, pred, subject_language, k=3)
    rank_lists = {p: fusion.rank(scores, p) for p in scores.probe_ids}
    truth_ids = {"p0": "A", "p1": "B", "p2": "C"}
    truth_langs = {p: subject_language[truth_ids[p]] for p in truth_ids}
    att = evalx.attribute_errors(decisions, rank_lists, truth_ids, truth_langs, subject_language, 3)
    assert att.total_errors == 0
    assert (att.lang_wrong, att.lang_correct_id_absent, att.lang_correct_outranked) == (0, 0, 0)


def test_attribute_errors_lang_wrong_single():
    scores, subject_language = make_eval_case()
    # p0's language prediction is wrong -> it picks B (english), an error
    pred = {"p0": "english", "p1": "english", "p2": "russian"}
    decisions = fusion.fuse(scores, pred, subject_language, k=3)
    rank_lists = {p: fusion.rank(scores, p) for p in scores.probe_ids}
    truth_ids = {"p0": "A", "p1": "B", "p2": "C"}
    truth_langs = {p: subject_language[truth_ids[p]] for p in truth_ids}
    att = evalx.attribute_errors(decisions, rank_lists, truth_ids, truth_langs, subject_language, 3)
    assert att.total_errors == 1
    assert att.lang_wrong == 1


def test_attribute_errors_id_absent():
    scores, subject_language = make_eval_case()
    # p2's truth is D which sits at rank 4, outside k=3; language predicted right
    pred = {"p0": "french", "p1": "english", "p2": "german"}
    decisions = fusion.fuse(scores, pred, subject_language, k=3)
    rank_lists = {p: fusion.rank(scores, p) for p in scores.probe_ids}
    truth_ids = {"p0": "A", "p1": "B", "p2": "D"}
    truth_langs = {p: subject_language[truth_ids[p]] for p in truth_ids}
    att = evalx.attribute_errors(decisions, rank_lists, truth_ids, truth_langs, subject_language, 3)
    assert att.total_errors == 1
    assert att.lang_correct_id_absent == 1


def test_attribute_errors_outranked():
    scores = fusion.ScoreMatrix(
        probe_ids=("p0",),
        class_labels=("A", "B"),
        scores=np.array([[0.9, 0.8]]),
    )
    subject_language = {"A": "french", "B": "french"}
    decisions = fusion.fuse(scores, {"p0": "french"}, subject_language, k=2)
    rank_lists = {"p0": fusion.rank(scores, "p0")}
    att = evalx.attribute_errors(
        decisions, rank_lists, {"p0": "B"}, {"p0": "french"}, subject_language, 2
    )
    assert att.total_errors == 1
    assert att.lang_correct_outranked == 1


def test_attribute_errors_simulated_partition_vs_oracle():
    config = fusion.SimulationConfig(
        n_subjects=24, n_languages=4, n_probes=3000,
        top1_acc=0.45, topk_hit=0.75, k=6, lang_acc=0.8, seed=13,
    )
    sim = fusion.simulate_scores(config)
    decisions = fusion.fuse(sim.scores, sim.language_pred, sim.subject_language, k=6)
    rank_lists = {p: fusion.rank(sim.scores, p) for p in sim.scores.probe_ids}
    att = evalx.attribute_errors(
        decisions, rank_lists, sim.true_identity, sim.true_language, sim.subject_language, 6
    )
    # per-probe hand classification
    lw = ia = outr = errs = 0
    for d in decisions:
        pid = d.probe_id
        if d.predicted_identity == sim.true_identity[pid]:
            continue
        errs += 1
        if sim.language_pred[pid] != sim.true_language[pid]:
            lw += 1
        elif sim.true_identity[pid] not in [l for l, _ in rank_lists[pid].top(6)]:
            ia += 1
        else:
            outr += 1
    assert (att.total_errors, att.lang_wrong, att.lang_correct_id_absent, att.lang_correct_outranked) == (errs, lw, ia, outr)
    assert att.lang_wrong + att.lang_correct_id_absent + att.lang_correct_outranked == att.total_errors
    assert att.total_errors > 0


def test_attribute_errors_misalignment():
    scores, subject_language = make_eval_case()
    pred = {"p0": "french", "p1": "english", "p2": "russian"}
    decisions = fusion.fuse(scores, pred, subject_language, k=2)
    with pytest.raises(DataError, match="missing"):
        evalx.attribute_errors(decisions, {}, {"p0": "A"}, {"p0": "french"}, subject_language, 2)


def test_emit_report_empty(tmp_path):
    paths = evalx.emit_report(evalx.EvalReport(), tmp_path / "out")
    payload = json.loads(paths["json"].read_text())
    assert payload["schema_version"] == 1
    assert payload["accuracies"] == {}
    assert (tmp_path / "out" / "report.md").exists()


def test_emit_report_formatting(tmp_path):
    report = evalx.EvalReport(accuracies={"identification": 0.4960})
    paths = evalx.emit_report(report, tmp_path)
    md = paths["markdown"].read_text()
    assert "| identification | 49.60% |" in md


def test_emit_report_full_and_schema(tmp_path):
    import jsonschema

    matrix = evalx.confusion(["a", "b"], ["a", "a"], ["a", "b"])
    report = evalx.EvalReport(
        accuracies={"language": 0.5},
        confusions={"language": matrix},
        attributions={"fusion": evalx.ErrorAttribution(1, 1, 0, 0)},
        fusion_summary=[
            {"model": "svm", "vli_accuracy": 0.375, "identification_accuracy": 0.496, "fused_accuracy": 0.3203}
        ],
    )
    paths = evalx.emit_report(report, tmp_path / "r")
    payload = json.loads(paths["json"].read_text())
    jsonschema.validate(payload, evalx.REPORT_SCHEMA)
    md = paths["markdown"].read_text()
    assert "| svm | 37.50% | 49.60% | 32.03% |" in md
    csv_text = paths["confusion_language"].read_text()
    assert csv_text.splitlines()[0] == "truth\\prediction,a,b"

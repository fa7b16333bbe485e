import json
from pathlib import Path

import numpy as np
import pytest

from cacrad.config import RunConfig
from cacrad.errors import (
    ConfigError,
    LengthMismatch,
    SchemaMismatch,
    TooFewPairs,
    TooFewRows,
)
from cacrad.embeddings import write_embeddings
from cacrad.phantom import generate_cohort
from cacrad.pipeline import run_extract, run_stats, run_train_eval

SMALL_DIMS = (24, 24, 12)

SVM_ONLY = dict(
    models=("linear_svm",),
    grid_overrides=(("linear_svm", (("lam", (0.001,)), ("epochs", (10,)))),),
    kfold=2,
)


@pytest.fixture(scope="module")
def cohort(tmp_path_factory):
    root = tmp_path_factory.mktemp("cohort")
    manifest = generate_cohort(root, 12, 0.5, seed=21, dims=SMALL_DIMS)
    return root, manifest


@pytest.fixture(scope="module")
def extracted(cohort):
    root, manifest = cohort
    out = root / "run"
    cfg = RunConfig(manifest=str(manifest), out=str(out))
    report = run_extract(cfg)
    return root, manifest, out, report


def test_extract_writes_features_and_report(extracted):
    root, manifest, out, report = extracted
    assert report["n_subjects"] == 12
    assert report["n_extracted"] == 12
    assert report["n_features"] == 107
    assert report["excluded"] == []
    lines = (out / "features.csv").read_text().splitlines()
    assert len(lines) == 13
    assert lines[0].startswith("subject_id,firstorder_10Percentile,")
    assert json.loads((out / "extract_report.json").read_text())["command"] == "extract"


def test_extract_skips_bad_subject_and_logs(cohort, tmp_path):
    root, manifest = cohort
    # copy the manifest with absolute paths, pointing one subject at a
    # corrupt volume
    lines = Path(manifest).read_text().splitlines()
    bad = tmp_path / "bad.nii"
    bad.write_bytes(b"not a nifti header")
    for k in range(1, len(lines)):
        cells = lines[k].split(",")
        cells[1] = str(root / cells[1])
        cells[2] = str(root / cells[2])
        lines[k] = ",".join(cells)
    cells = lines[1].split(",")
    victim = cells[0]
    cells[1] = str(bad)
    lines[1] = ",".join(cells)
    m2 = tmp_path / "manifest.csv"
    m2.write_text("\n".join(lines) + "\n")

    report = run_extract(RunConfig(manifest=str(m2), out=str(tmp_path / "out")))
    assert report["n_extracted"] == 11
    assert len(report["excluded"]) == 1
    assert report["excluded"][0]["subject_id"] == victim
    assert report["excluded"][0]["error"] in ("BadMagic", "TruncatedFile")


def test_extract_all_failed_is_fatal(tmp_path):
    bad = tmp_path / "bad.nii"
    bad.write_bytes(b"junk")
    m = tmp_path / "manifest.csv"
    m.write_text("subject_id,volume,mask,contrast,cac_score\n"
                 f"s1,{bad},{bad},contrast,0\n")
    with pytest.raises(TooFewRows):
        run_extract(RunConfig(manifest=str(m), out=str(tmp_path / "out")))


def test_extract_requires_manifest(tmp_path):
    with pytest.raises(ConfigError):
        run_extract(RunConfig(out=str(tmp_path)))


def test_train_eval_report_and_metrics_csv(extracted):
    root, manifest, out, _ = extracted
    cfg = RunConfig(manifest=str(manifest), out=str(out), seed=3,
                    test_fraction=0.25, **SVM_ONLY)
    report = run_train_eval(cfg)
    assert report["command"] == "train-eval"
    assert report["seeds"] == [3]
    run = report["runs"][0]
    assert run["n_train"] + run["n_test"] == 12
    block = run["models"]["linear_svm"]
    assert set(block) == {"hyperparams", "cv_mean_scores", "confusion",
                          "metrics", "fingerprint"}
    assert len(block["fingerprint"]) == 64
    assert run["n_features_kept"] == len(run["kept_features"]) > 0
    # every kept feature exists in the catalog ordering
    assert all(k.split("_")[0] in
               ("firstorder", "shape", "glcm", "glrlm", "glszm", "gldm", "ngtdm")
               for k in run["kept_features"])

    lines = (out / "metrics.csv").read_text().splitlines()
    assert lines[0] == ("model,seed,accuracy,balanced_accuracy,sensitivity,"
                        "specificity,ppv,f1,npv")
    assert len(lines) == 2
    assert lines[1].startswith("linear_svm,3,")


def test_train_eval_multi_seed_rows(extracted, tmp_path):
    root, manifest, out, _ = extracted
    cfg = RunConfig(manifest=str(manifest), out=str(tmp_path / "ms"),
                    features_csv=str(out / "features.csv"),
                    seed=5, n_seeds=3, test_fraction=0.25, **SVM_ONLY)
    report = run_train_eval(cfg)
    assert len(report["seeds"]) == 3
    assert len(set(report["seeds"])) == 3
    lines = (tmp_path / "ms" / "metrics.csv").read_text().splitlines()
    assert len(lines) == 4


def test_train_eval_noncontrast_composition_drops_contrast_rows(extracted, tmp_path):
    root, manifest, out, _ = extracted
    base = dict(manifest=str(manifest), features_csv=str(out / "features.csv"),
                seed=2, test_fraction=0.25, **SVM_ONLY)
    mixed = run_train_eval(RunConfig(out=str(tmp_path / "mixed"), **base))
    nc = run_train_eval(RunConfig(out=str(tmp_path / "nc"),
                                  train_composition="noncontrast", **base))
    run_m, run_n = mixed["runs"][0], nc["runs"][0]
    # 6 of 12 subjects are contrast-tagged and leave the training pool
    assert run_n["n_train"] == run_m["n_train"] - 6
    # the held-out subjects are the same noncontrast draw in both arms
    assert run_m["test_subjects"] == run_n["test_subjects"]


def test_train_eval_label_shuffle_flag(extracted, tmp_path):
    root, manifest, out, _ = extracted
    base = dict(manifest=str(manifest), features_csv=str(out / "features.csv"),
                seed=4, n_seeds=4, test_fraction=0.5, **SVM_ONLY)
    real = run_train_eval(RunConfig(out=str(tmp_path / "real"), **base))
    null = run_train_eval(RunConfig(out=str(tmp_path / "null"),
                                    label_shuffle=True, **base))
    assert real["label_shuffle"] is False
    assert null["label_shuffle"] is True
    assert real["seeds"] == null["seeds"]
    fp_real = real["runs"][0]["models"]["linear_svm"]["fingerprint"]
    fp_null = null["runs"][0]["models"]["linear_svm"]["fingerprint"]
    assert fp_real != fp_null

    # the two arms feed straight into the paired test
    stats = run_stats(tmp_path / "real" / "run_report.json",
                      tmp_path / "null" / "run_report.json",
                      out_dir=tmp_path / "stats")
    block = stats["results"]["linear_svm"]
    assert set(block) == {"accuracy", "f1"}
    for metric in block.values():
        assert metric["n_pairs"] >= 2
        assert metric["df"] == metric["n_pairs"] - 1
        if not metric["zero_variance"]:
            assert 0.0 <= metric["p"] <= 1.0
    assert stats["lines"][0].startswith("linear_svm: accuracy: p")
    assert (tmp_path / "stats" / "stats.json").exists()


def test_stats_seed_mismatch(extracted, tmp_path):
    root, manifest, out, _ = extracted
    base = dict(manifest=str(manifest), features_csv=str(out / "features.csv"),
                test_fraction=0.25, n_seeds=2, **SVM_ONLY)
    run_train_eval(RunConfig(out=str(tmp_path / "a"), seed=1, **base))
    run_train_eval(RunConfig(out=str(tmp_path / "b"), seed=2, **base))
    with pytest.raises(LengthMismatch):
        run_stats(tmp_path / "a" / "run_report.json",
                  tmp_path / "b" / "run_report.json")


def test_stats_single_pair_rejected(extracted, tmp_path):
    root, manifest, out, _ = extracted
    base = dict(manifest=str(manifest), features_csv=str(out / "features.csv"),
                test_fraction=0.25, seed=6, **SVM_ONLY)
    run_train_eval(RunConfig(out=str(tmp_path / "a"), **base))
    run_train_eval(RunConfig(out=str(tmp_path / "b"), label_shuffle=True, **base))
    with pytest.raises(TooFewPairs):
        run_stats(tmp_path / "a" / "run_report.json",
                  tmp_path / "b" / "run_report.json")


def test_stats_schema_errors(extracted, tmp_path):
    root, manifest, out, _ = extracted
    with pytest.raises(SchemaMismatch):
        run_stats(tmp_path / "missing.json", tmp_path / "missing.json")

    notjson = tmp_path / "x.json"
    notjson.write_text("{broken")
    with pytest.raises(SchemaMismatch):
        run_stats(notjson, notjson)

    wrong = tmp_path / "w.json"
    wrong.write_text(json.dumps({"command": "extract"}))
    with pytest.raises(SchemaMismatch):
        run_stats(wrong, wrong)

    # two valid reports with disjoint model sets share nothing to compare
    base = dict(manifest=str(manifest), features_csv=str(out / "features.csv"),
                test_fraction=0.25, seed=8, n_seeds=2, **SVM_ONLY)
    run_train_eval(RunConfig(out=str(tmp_path / "a"), **base))
    doc = json.loads((tmp_path / "a" / "run_report.json").read_text())
    doc["models"] = ["mlp"]
    other = tmp_path / "other.json"
    other.write_text(json.dumps(doc))
    with pytest.raises(SchemaMismatch):
        run_stats(tmp_path / "a" / "run_report.json", other)


def test_embeddings_mode(cohort, tmp_path):
    root, manifest = cohort
    from cacrad.manifest import load_manifest

    ids = load_manifest(manifest).subject_ids()
    rng = np.random.default_rng(0)
    # informative coordinates plus a ghost row absent from the manifest
    from cacrad.manifest import CacLabel

    entries = load_manifest(manifest).entries
    y = np.array([1.0 if e.cac_label is CacLabel.NONZERO else 0.0 for e in entries])
    mat = rng.normal(size=(len(ids), 4))
    mat[:, 0] += 3.0 * y
    emb_path = tmp_path / "deep_pool.csv"
    write_embeddings(emb_path, list(ids) + ["ghost"],
                     np.vstack([mat, rng.normal(size=(1, 4))]))

    cfg = RunConfig(manifest=str(manifest), out=str(tmp_path / "emb_out"),
                    mode="embeddings", embeddings_csv=str(emb_path),
                    seed=1, test_fraction=0.25, **SVM_ONLY)
    report = run_train_eval(cfg)
    assert report["provenance"] == "deep_pool-4"
    assert report["coverage"]["n_used"] == 12
    assert report["coverage"]["n_embedding_rows"] == 13
    # default embeddings path keeps every dimension
    assert report["runs"][0]["kept_features"] == ["e0", "e1", "e2", "e3"]

    with pytest.raises(ConfigError):
        run_train_eval(RunConfig(manifest=str(manifest), mode="embeddings",
                                 out=str(tmp_path / "x"), **SVM_ONLY))

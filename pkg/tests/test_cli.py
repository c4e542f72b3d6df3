import csv
import json

import pytest

from distpart import io
from distpart.cli import main

KARATE_FACTIONS_Q = 0.3582347140039433


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def karate_files(tmp_path, capsys):
    assert run(capsys, "dataset", "export", "karate", "--output-dir", tmp_path)[0] == 0
    return tmp_path / "karate.edges", tmp_path / "karate.labels.csv"


@pytest.fixture
def bench_config(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({
        "region": [0, 0, 1, 1], "seed_mode": {"fixed": 3}, "sigma": 0.05,
        "n_points": 200, "beta": 30, "rng_seed": 42,
        "restrict_to_largest_component": False,
    }))
    return p


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_partition_karate(tmp_path, capsys):
    out = tmp_path / "labels.csv"
    code, stdout, _ = run(capsys, "partition", "--dataset", "karate", "--seeds", "top-degree:2",
                          "--method", "dv", "--metric", "topological", "-o", out)
    assert code == 0
    summary = json.loads(stdout)
    assert summary["community_count"] == 2 and summary["node_count"] == 34
    assert summary["seeds"] == ["0", "33"]
    rows = read_csv(out)
    assert rows[0] == ["id", "label"] and len(rows) == 35
    assert {r[1] for r in rows[1:]} == {"0", "1"}


def test_partition_from_exported_file(karate_files, tmp_path, capsys):
    edges, _ = karate_files
    out = tmp_path / "l.csv"
    code, stdout, _ = run(capsys, "partition", "--edges", edges, "--seeds", "top-degree:2",
                          "-o", out)
    assert code == 0
    labels = dict(read_csv(out)[1:])
    assert labels["0"] != labels["33"]
    assert labels["8"] == labels["33"]


def test_partition_path_with_seed_file(tmp_path, capsys):
    (tmp_path / "p.edges").write_text("n0 n1\nn1 n2\nn2 n3\nn3 n4\n")
    (tmp_path / "s.csv").write_text("id,alpha\nn0,1\nn4,1\n")
    out = tmp_path / "l.csv"
    code, _, _ = run(capsys, "partition", "--edges", tmp_path / "p.edges",
                     "--seeds", f"file:{tmp_path / 's.csv'}", "-o", out)
    assert code == 0
    assert read_csv(out)[1:] == [["n0", "0"], ["n1", "0"], ["n2", "0"], ["n3", "1"], ["n4", "1"]]


def test_partition_spatial_needs_coordinates(tmp_path, capsys):
    (tmp_path / "p.edges").write_text("a b\n")
    code, _, err = run(capsys, "partition", "--edges", tmp_path / "p.edges", "--seeds",
                       "top-degree:1", "--metric", "spatial", "-o", tmp_path / "l.csv")
    assert code == 2 and "coordinates" in err


def test_partition_proximity_spatial(tmp_path, capsys, bench_config):
    run(capsys, "generate", "--config", bench_config, "--output-dir", tmp_path / "b")
    out = tmp_path / "l.csv"
    code, stdout, _ = run(capsys, "partition", "--edges", tmp_path / "b/graph.edges",
                          "--coords", tmp_path / "b/graph.coords.csv",
                          "--seeds", f"proximity:{tmp_path / 'b/means.csv'}", "-o", out)
    assert code == 0
    assert json.loads(stdout)["metric"] == "spatial"


def test_partition_lp_logs_seed(tmp_path, capsys, caplog):
    caplog.set_level("INFO", logger="distpart")
    code, stdout, _ = run(capsys, "partition", "--dataset", "karate", "--method", "lp",
                            "-o", tmp_path / "l.csv")
    assert code == 0
    seed = json.loads(stdout)["rng_seed"]
    assert str(seed) in caplog.text
    a = run(capsys, "partition", "--dataset", "karate", "--method", "lp-seeded",
            "--seeds", "top-degree:2", "--rng-seed", 5, "-o", tmp_path / "a.csv")
    b = run(capsys, "partition", "--dataset", "karate", "--method", "lp-seeded",
            "--seeds", "top-degree:2", "--rng-seed", 5, "-o", tmp_path / "b.csv")
    assert a[0] == b[0] == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_usage_errors_exit_1(tmp_path, capsys):
    assert run(capsys, "partition", "--dataset", "karate", "-o", tmp_path / "l.csv")[0] == 1
    assert run(capsys, "partition", "--dataset", "karate", "--seeds", "best:3",
               "-o", tmp_path / "l.csv")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["partition", "--method", "walktrap", "-o", "x"])
    assert exc.value.code == 1


def test_generate(tmp_path, capsys, bench_config):
    code, stdout, _ = run(capsys, "generate", "--config", bench_config, "--output-dir", tmp_path / "a")
    assert code == 0
    gold = read_csv(tmp_path / "a/gold.csv")
    assert {r[1] for r in gold[1:]} == {"0", "1", "2"}
    assert read_csv(tmp_path / "a/means.csv")[0] == ["community", "x", "y"]
    assert json.loads((tmp_path / "a/config.json").read_text())["rng_seed"] == 42
    run(capsys, "generate", "--config", bench_config, "--output-dir", tmp_path / "b")
    for name in ("graph.edges", "graph.coords.csv", "gold.csv", "means.csv", "config.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_generate_rejects_bad_sigma(tmp_path, capsys):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"seed_mode": {"fixed": 3}, "sigma": 0, "n_points": 10, "beta": 1}))
    code, _, err = run(capsys, "generate", "--config", p, "--output-dir", tmp_path / "o")
    assert code == 2 and "sigma" in err


def test_generate_without_seed_records_it(tmp_path, capsys, caplog):
    caplog.set_level("INFO", logger="distpart")
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"seed_mode": {"fixed": 2}, "sigma": 0.1, "n_points": 50, "beta": 5}))
    code, stdout, _ = run(capsys, "generate", "--config", p, "--output-dir", tmp_path / "o")
    assert code == 0
    seed = json.loads(stdout)["rng_seed"]
    assert json.loads((tmp_path / "o/config.json").read_text())["rng_seed"] == seed
    assert str(seed) in caplog.text


def test_eval_karate(karate_files, capsys):
    edges, labels = karate_files
    code, stdout, _ = run(capsys, "eval", "--edges", edges, "--labels", labels)
    assert code == 0
    out = json.loads(stdout)
    assert out["Q"] == pytest.approx(KARATE_FACTIONS_Q, abs=1e-12)
    assert "nmi" not in out
    code, stdout, _ = run(capsys, "eval", "--edges", edges, "--labels", labels,
                          "--reference", labels)
    assert json.loads(stdout)["nmi"] == 1.0


def test_eval_missing_id(karate_files, tmp_path, capsys):
    edges, labels = karate_files
    short = tmp_path / "short.csv"
    short.write_text("\n".join(labels.read_text().splitlines()[:-1]) + "\n")
    code, _, err = run(capsys, "eval", "--edges", edges, "--labels", short)
    assert code == 2 and "'33'" in err


def test_sweep_rows(tmp_path, capsys, bench_config):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--config", bench_config, "--methods", "dv,lp",
                     "-R", 10, "-o", out)
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["method", "realization", "rng_seed", "Q", "nmi"]
    data = [r for r in rows[1:] if r[1] not in ("mean", "std")]
    summary = [r for r in rows[1:] if r[1] in ("mean", "std")]
    assert len(data) == 20 and len(summary) == 4
    assert [r[0] for r in data[:4]] == ["dv", "lp", "dv", "lp"]
    assert all(r[3] != "error" for r in data)


def test_sweep_external_isolated(tmp_path, capsys, bench_config):
    export = tmp_path / "exp"
    ext = tmp_path / "walktrap"
    ext.mkdir()
    run(capsys, "sweep", "--config", bench_config, "--methods", "dv", "-R", 2,
        "-o", tmp_path / "first.csv", "--export-dir", export)
    # realization 0: the gold standard itself; realization 1: wrong node count
    (ext / "0.csv").write_bytes((export / "0" / "gold.csv").read_bytes())
    (ext / "1.csv").write_text("id,label\n0,1\n1,1\n")
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--config", bench_config, "--methods",
                     f"dv,external:{ext}", "-R", 2, "-o", out)
    assert code == 0
    rows = {(r[0], r[1]): r for r in read_csv(out)[1:]}
    assert rows[(f"external:{ext}", "0")][4] == "1"
    assert rows[(f"external:{ext}", "1")][3:] == ["error", "error"]
    assert rows[("dv", "1")][3] != "error"
    assert rows[(f"external:{ext}", "mean")][4] == "1"


def test_sweep_jobs_match_serial(tmp_path, capsys, bench_config):
    for jobs in (1, 2):
        run(capsys, "sweep", "--config", bench_config, "--methods", "dv,lp,lp-seeded",
            "-R", 3, "-o", tmp_path / f"j{jobs}.csv", "--jobs", jobs)
    assert (tmp_path / "j1.csv").read_bytes() == (tmp_path / "j2.csv").read_bytes()


def test_sweep_bad_method(tmp_path, capsys, bench_config):
    assert run(capsys, "sweep", "--config", bench_config, "--methods", "infomap",
               "-o", tmp_path / "s.csv")[0] == 1


def test_dataset_export(karate_files):
    edges, labels = karate_files
    g = io.read_graph(edges)
    assert g.node_count == 34 and g.edge_count == 78
    assert io.read_labels(labels)["33"] == "1"

import json
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from heuforge.cli import main
from heuforge.problems import instances_from_json
from heuforge.service import create_app


@pytest.fixture()
def client(tmp_path):
    return TestClient(create_app(runs_root=tmp_path / "runs"))


def small_run_config(**extra):
    config = {
        "problem": {"kind": "tsp", "n": 8, "train_count": 4, "train_seed": 7},
        "islands": {"count": 2, "population": 3},
        "budget": {"generations": 2},
        "runtime": {"max_parallel": 1, "timeout_ms": 10000},
        "master_seed": 11,
    }
    config.update(extra)
    return config


def test_health_and_tsed_endpoints(client):
    assert client.get("/health").json()["status"] == "ok"
    score = client.post(
        "/tsed", json={"source_a": "def f(a): return a+1", "source_b": "def g(x): return x+2"}
    ).json()["score"]
    assert score == 1.0
    response = client.post("/tsed", json={"source_a": "def f(:", "source_b": "def g(): pass"})
    assert response.status_code == 400


def test_matrix_endpoint_symmetric(client):
    sources = ["def f(a): return a+1", "def f(a):\n    if a:\n        return 1\n    return 0"]
    matrix = client.post("/tsed/matrix", json={"sources": sources}).json()["matrix"]
    assert matrix[0][0] == matrix[1][1] == 1.0
    assert matrix[0][1] == matrix[1][0]


def test_generate_endpoint_roundtrips(client):
    doc = client.post(
        "/instances/generate", json={"problem": "kp", "n": 6, "capacity": 1.5, "count": 3, "seed": 2}
    ).json()
    problem, instances = instances_from_json(doc)
    assert problem == "kp" and len(instances) == 3
    assert doc["scale"] == {"n": 6, "capacity": 1.5}
    bad = client.post("/instances/generate", json={"problem": "tsp", "n": 0, "count": 1, "seed": 0})
    assert bad.status_code == 400


def test_run_endpoint_and_status_and_report(client):
    status = client.post("/runs", json={"config": small_run_config(), "wait": True}).json()
    assert status["state"] == "done"
    assert status["best_objective"] is not None
    assert status["evaluations"] > 0

    fetched = client.get(f"/runs/{status['run_id']}").json()
    assert fetched["state"] == "done"
    assert fetched["best_objective"] == status["best_objective"]

    report = client.get(f"/runs/{status['run_id']}/report").json()
    assert "convergence.csv" in report["files"]
    assert "arms.csv" in report["files"]
    header = report["files"]["convergence.csv"].splitlines()[0]
    assert header == "evaluations,best,tokens,tuned"


def test_report_accepts_run_directory_paths(client, tmp_path):
    out = str(tmp_path / "abs-run")
    client.post("/runs", json={"config": small_run_config(), "run_dir": out, "wait": True})
    doc = client.get(f"/runs/{out}/report").json()
    assert "convergence.csv" in doc["files"]
    assert doc["run_dir"] == out


def test_run_endpoint_rejects_bad_config(client):
    response = client.post("/runs", json={"config": {"problem": {"kind": "sudoku"}}})
    assert response.status_code == 400
    response = client.get("/runs/never-started")
    assert response.status_code == 404


def test_resume_endpoint_continues(client, tmp_path):
    started = client.post(
        "/runs", json={"config": small_run_config(), "run_dir": "resumable", "wait": True}
    ).json()
    resumed = client.post(
        "/runs/resume",
        json={"run_dir": "resumable", "overrides": ["budget.generations=3"], "wait": True},
    ).json()
    assert resumed["state"] == "done"
    assert resumed["generations"] == 3
    assert resumed["evaluations"] >= started["evaluations"]


def test_background_run_polls_to_done(client):
    status = client.post("/runs", json={"config": small_run_config(), "wait": False}).json()
    assert status["state"] in ("running", "done")
    import time

    deadline = time.time() + 120
    while time.time() < deadline:
        status = client.get(f"/runs/{status['run_id']}").json()
        if status["state"] != "running":
            break
        time.sleep(0.2)
    assert status["state"] == "done"


# -- CLI -----------------------------------------------------------------------


def test_cli_tsed_prints_six_digits(tmp_path, capsys):
    a = tmp_path / "a.py"
    b = tmp_path / "b.py"
    a.write_text("def f(a): return a+1\n")
    b.write_text("def f(a):\n    if a:\n        return 1\n    return 0\n")
    assert main(["tsed", str(a), str(b)]) == 0
    out = capsys.readouterr().out.strip()
    float(out)
    assert len(out.split(".")[1]) == 6


def test_cli_tsed_matrix_csv(tmp_path, capsys):
    for name, body in [("a.py", "def f(a): return a+1\n"), ("b.py", "def g(z): return z+9\n")]:
        (tmp_path / name).write_text(body)
    assert main(["tsed", "--matrix", str(tmp_path)]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows == ["1.000000,1.000000", "1.000000,1.000000"]


def test_cli_gen_writes_instance_file(tmp_path, capsys):
    out = tmp_path / "set.json"
    code = main(
        ["gen", "--problem", "tsp", "--n", "5", "--count", "4", "--seed", "7", "--out", str(out)]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "tsp" and doc["seed"] == 7
    problem, instances = instances_from_json(doc)
    assert len(instances) == 4 and instances[0].coords.shape == (5, 2)


def test_cli_gen_is_deterministic(tmp_path):
    out1, out2 = tmp_path / "s1.json", tmp_path / "s2.json"
    args = ["gen", "--problem", "kp", "--n", "6", "--count", "2", "--seed", "3"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_text() == out2.read_text()


def test_cli_baselines_table(capsys):
    assert main(["baselines", "--problem", "bpp_online", "--n", "50", "--count", "3", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "first_fit" in out and "best_fit" in out and "lower_bound" in out


def test_cli_run_report_and_exit_codes(tmp_path, capsys):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(
        "\n".join(
            [
                "[problem]",
                'kind = "tsp"',
                "n = 8",
                "train_count = 4",
                "[islands]",
                "count = 2",
                "population = 3",
                "[budget]",
                "generations = 2",
                "[runtime]",
                "max_parallel = 1",
            ]
        )
    )
    code = main(
        ["--runs-root", str(tmp_path / "runs"), "run", "--config", str(cfg), "--out", "first"]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "best objective" in out
    assert (tmp_path / "runs" / "first" / "manifest.json").exists()

    assert main(["--runs-root", str(tmp_path / "runs"), "report", "--run", "first"]) == 0
    assert (tmp_path / "runs" / "first" / "reports" / "convergence.csv").exists()

    # config errors exit 1
    bad = tmp_path / "bad.toml"
    bad.write_text('[problem]\nkind = "sudoku"\n')
    assert main(["run", "--config", str(bad)]) == 1
    assert main(["report", "--run", str(tmp_path / "nothing-here")]) == 2


def test_cli_run_missing_live_credential_fails_before_evaluating(tmp_path, monkeypatch):
    monkeypatch.delenv("LLM_API_KEY", raising=False)
    code = main(
        [
            "--runs-root",
            str(tmp_path / "runs"),
            "run",
            "--set",
            "llm.transport=live",
            "--set",
            "llm.endpoint=http://localhost:9",
            "--set",
            "llm.model=m",
        ]
    )
    assert code == 3


def test_cli_config_materializes_defaults(capsys):
    assert main(["config"]) == 0
    out = capsys.readouterr().out
    assert "[islands]" in out and "count = 6" in out and "population = 8" in out

import json

import pytest

from andortrees.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_count_csv(capsys):
    code, out, _ = run(capsys, "count", "--n", "1", "--max-size", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,a_hat,a_total"
    assert lines[1:] == ["1,2,2", "2,0,0", "3,4,8", "4,8,16"]


def test_count_json_embeds_config(capsys):
    code, out, _ = run(capsys, "count", "--n", "1", "--max-size", "3", "--format", "json")
    payload = json.loads(out)
    assert payload["config"]["n"] == 1
    assert payload["rows"][-1] == {"m": 3, "a_hat": 4, "a_total": 8}


def test_dist_csv(capsys):
    code, out, _ = run(capsys, "dist", "--n", "1", "--m", "3")
    rows = out.strip().splitlines()
    assert rows[0] == "truth_table_hex,count_and,count_or,probability"
    assert "3,0,2,1/4" in rows


def test_limit_json(capsys):
    code, out, _ = run(capsys, "limit", "--n", "1", "--f-hex", "3", "--m", "40")
    payload = json.loads(out)
    assert payload["converged"] is True
    assert 0.2 < payload["estimate"] < 0.4
    assert payload["f"] == "3"


def test_sample_report(capsys):
    code, out, _ = run(
        capsys,
        "sample", "--n", "1", "--m", "5", "--trials", "200", "--seed", "3",
        "--stats", "tautology_rate",
    )
    payload = json.loads(out)
    stat = payload["report"]["stats"]["tautology_rate"]
    assert 0 <= stat["estimate"] <= 1
    assert payload["config"]["seed"] == 3


def test_sample_emit_trees(capsys):
    code, out, _ = run(
        capsys, "sample", "--n", "2", "--m", "7", "--emit-trees", "4", "--seed", "1"
    )
    lines = out.strip().splitlines()
    assert len(lines) == 4
    assert all(line.startswith("(") for line in lines)
    code2, out2, _ = run(
        capsys, "sample", "--n", "2", "--m", "7", "--emit-trees", "4", "--seed", "1"
    )
    assert out2 == out  # bit-reproducible for a fixed seed


def test_analyze_exact_family(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "no_first_level_leaf", "--n", "2")
    payload = json.loads(out)
    assert payload["exact"] == "11/200"
    assert payload["float"] == pytest.approx(0.055)


def test_analyze_with_params(capsys):
    code, out, _ = run(
        capsys, "analyze", "--family", "nonleaf_subtrees", "--n", "2",
        "--params", "ell=1",
    )
    payload = json.loads(out)
    assert payload["float"] == pytest.approx(0.5)
    assert payload["asymptotic_reference"]["value"] == pytest.approx(0.25)


def test_analyze_unknown_family(capsys):
    with pytest.raises(SystemExit):
        main(["analyze", "--family", "nope", "--n", "2"])


def test_analyze_t_dependent_family_uses_default_env(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "simple_x", "--n", "2")
    payload = json.loads(out)
    assert code == 0
    assert payload["t_env"]["tau_prime"] > 0
    assert payload["float"] > 0


def test_analyze_tautology_bounds(capsys):
    code, out, _ = run(
        capsys, "analyze", "--family", "tautology_bounds", "--n", "10000"
    )
    payload = json.loads(out)
    assert set(payload["values"]) == {"lower", "E_ratio", "E1_bound", "E2_bound"}
    assert 0 < payload["values"]["lower"] < 0.5


def test_complexity_all_csv(capsys):
    code, out, _ = run(capsys, "complexity", "--n", "2", "--all")
    rows = out.strip().splitlines()
    assert rows[0] == "truth_table_hex,L,m_f"
    assert "6,7,16" in rows
    assert "0,0," in rows


def test_complexity_single(capsys):
    code, out, _ = run(capsys, "complexity", "--n", "2", "--f-hex", "8")
    payload = json.loads(out)
    assert payload["L"] == 3
    assert sorted(payload["witnesses"]) == ["(and x1 x2)", "(and x2 x1)"]


def test_reduce_stdin(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO("(and x1 x2 (or x3 ~x3))"))
    code, out, err = run(capsys, "reduce", "--n", "3")
    assert code == 0
    assert out.strip() == "(and x1 x2)"
    assert "removed: (or x3 ~x3)" in err


def test_missing_n_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["count"])
    assert err.value.code == 2


def test_bad_value_reports_error(capsys):
    code, _, err = run(capsys, "dist", "--n", "1", "--m", "2")
    assert code == 2
    assert "empty size class" in err


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 1\nmax-size = 3\n")
    code, out, _ = run(capsys, "count", "--config", str(cfg))
    assert out.strip().splitlines()[-1] == "3,4,8"
    # flags beat the file
    code, out, _ = run(capsys, "count", "--config", str(cfg), "--max-size", "4")
    assert out.strip().splitlines()[-1] == "4,8,16"


def test_out_file(tmp_path, capsys):
    target = tmp_path / "counts.csv"
    code, out, _ = run(
        capsys, "count", "--n", "1", "--max-size", "3", "--out", str(target)
    )
    assert code == 0
    assert out == ""
    assert target.read_text().strip().splitlines()[0] == "m,a_hat,a_total"


def test_cache_dir_round_trip(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ANDORTREES_CACHE_DIR", str(tmp_path))
    import andortrees.distribution as dist_mod

    monkeypatch.setattr(dist_mod, "_engines", {})
    code, out, _ = run(capsys, "dist", "--n", "1", "--m", "4")
    assert code == 0
    cached = list(tmp_path.glob("dist_n1_*.pkl"))
    assert cached
    # a fresh engine registry must reuse the on-disk tables
    monkeypatch.setattr(dist_mod, "_engines", {})
    code, out2, _ = run(capsys, "dist", "--n", "1", "--m", "4")
    assert out2 == out


def test_verify_unknown_suite():
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "bogus"])


def test_verify_exact_suite_passes(capsys):
    code, out, err = run(capsys, "verify", "--suite", "exact")
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    summary = lines[-1]
    assert summary["failed"] == 0
    assert summary["checks"] == len(lines) - 1
    assert all("[PASS]" in line for line in err.strip().splitlines())

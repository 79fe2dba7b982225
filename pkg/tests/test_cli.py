"""CLI behavior: exit codes, report shapes, determinism, error mapping."""

import json

import pytest

from semicover.cli import main
from semicover.fixtures import fixture, table_text

A_CONE = {"op": "pullback", "images": [[1], [0]], "region": "lex_nonneg"}
B_CONE = {"op": "complement",
          "arg": {"op": "pullback", "images": [[1], [0]], "region": "lex_pos"}}

KLEIN_FP = "gens: a b\nrel: baBa\n"


@pytest.fixture
def cover_files(tmp_path):
    a = tmp_path / "a.cone"
    b = tmp_path / "b.cone"
    a.write_text(json.dumps(A_CONE))
    b.write_text(json.dumps(B_CONE))
    return str(a), str(b)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_analyze_klein(tmp_path, capsys):
    fp = tmp_path / "klein.fp"
    fp.write_text(KLEIN_FP)
    code, out = run_cli(capsys, "analyze", "--presentation", str(fp), "--radius", "8")
    assert code == 0
    report = json.loads(out)
    assert report["abelianization"] == "Z + Z/2"
    verdicts = report["cover_certificate"]["verdicts"]
    assert all(v["status"] == "verified" for v in verdicts.values())
    assert report["cover_certificate"]["radius"] == 8


def test_analyze_quaternion_inconclusive(tmp_path, capsys):
    fp = tmp_path / "q8.fp"
    fp.write_text("gens: a b\nrel: a^4\nrel: a^2B^2\nrel: Baba\n")
    code, out = run_cli(capsys, "analyze", "--presentation", str(fp))
    assert code == 0
    report = json.loads(out)
    assert report["verdict"]["status"] == "inconclusive"
    assert "cover_certificate" not in report


def test_check_cover_overlapping_pair_fails_then_reduces(cover_files, capsys):
    a, b = cover_files
    code, out = run_cli(capsys, "check-cover", "--model", "z^1xC2",
                        "--A", a, "--B", b, "--radius", "8")
    assert code == 1
    report = json.loads(out)
    assert report["verdicts"]["trivial_intersection"]["status"] == "counterexample"
    assert report["verdicts"]["trivial_intersection"]["witness"] == ["(0,1)"]

    code, out = run_cli(capsys, "check-cover", "--model", "z^1xC2",
                        "--A", a, "--B", b, "--radius", "8", "--reduce")
    assert code == 0
    report = json.loads(out)
    assert all(v["status"] == "verified" for v in report["verdicts"].values())


def test_witness_subcommand(cover_files, capsys):
    a, b = cover_files
    code, out = run_cli(capsys, "witness", "--model", "z^1xC2",
                        "--A", a, "--B", b, "--radius", "8")
    assert code == 0
    report = json.loads(out)
    assert all(v["status"] == "verified" for v in report["verdicts"].values())
    # the emitted kernel cone replays to exactly {0} x C2 on the ball
    from semicover import GroupModel, cone_from_obj, contains

    m = GroupModel.zr(1, (2,))
    kernel = cone_from_obj(m, report["witness"]["kernel"])
    for x in m.ball(6):
        assert contains(m, kernel, x) == (x in ((0, 0), (0, 1)))


def test_reduce_subcommand(cover_files, capsys):
    a, b = cover_files
    code, out = run_cli(capsys, "reduce", "--model", "z^1xC2",
                        "--A", a, "--B", b, "--radius", "8")
    assert code == 0
    report = json.loads(out)
    assert all(v["status"] == "verified" for v in report["verdicts"].values())
    # the emitted cones replay: the normalized A side is strictly negative
    from semicover import GroupModel, cone_from_obj, contains

    m = GroupModel.zr(1, (2,))
    a_cone = cone_from_obj(m, report["A"])
    assert contains(m, a_cone, (-2, 1)) and contains(m, a_cone, (0, 0))
    assert not contains(m, a_cone, (1, 0)) and not contains(m, a_cone, (0, 1))


def test_descend_subcommand(cover_files, capsys):
    a, b = cover_files
    code, out = run_cli(capsys, "descend", "--model", "z^1xC2",
                        "--A", a, "--B", b, "--radius", "6")
    assert code == 0
    report = json.loads(out)
    assert report["outcome"] == "already_normal"
    assert report["history"] == []
    assert "normal_subgroup_cone" in report


def test_sigma_fixture(capsys):
    code, out = run_cli(capsys, "sigma", "--fixture", "V4", "--exhaustive")
    assert code == 0
    report = json.loads(out)
    assert report["sigma_g"] == 3 and report["sigma_s"] == 3
    assert report["census"]["all_are_subgroups"] is True
    assert report["two_cover_search"]["covers_found"] == []
    assert all(report["checks"].values())


def test_sigma_table_file(tmp_path, capsys):
    path = tmp_path / "s3.tbl"
    path.write_text(table_text(fixture("S3")))
    code, out = run_cli(capsys, "sigma", "--table", str(path))
    assert code == 0
    assert json.loads(out)["sigma_g"] == 4


def test_sigma_cap_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SEMICOVER_CAP", "4")
    code, out = run_cli(capsys, "sigma", "--fixture", "S3", "--exhaustive")
    assert code == 0
    report = json.loads(out)
    assert "census" not in report  # order 6 > capped 4, census skipped


def test_verify_suites(capsys):
    code, out = run_cli(capsys, "verify", "--suite", "finite")
    assert code == 0
    assert json.loads(out)["ok"] is True
    code, out = run_cli(capsys, "verify", "--suite", "roundtrip", "--radius", "4")
    assert code == 0
    code, out = run_cli(capsys, "verify", "--suite", "lemmas",
                        "--seed", "42", "--count", "8", "--radius", "4")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] == 8 and report["failed"] == 0


def test_reports_are_byte_identical(cover_files, capsys):
    a, b = cover_files
    _, out1 = run_cli(capsys, "check-cover", "--model", "z^1xC2",
                      "--A", a, "--B", b, "--radius", "6")
    _, out2 = run_cli(capsys, "check-cover", "--model", "z^1xC2",
                      "--A", a, "--B", b, "--radius", "6")
    assert out1 == out2
    _, s1 = run_cli(capsys, "verify", "--suite", "lemmas", "--seed", "9",
                    "--count", "4", "--radius", "4")
    _, s2 = run_cli(capsys, "verify", "--suite", "lemmas", "--seed", "9",
                    "--count", "4", "--radius", "4")
    assert s1 == s2


def test_text_format_marks_radius(cover_files, capsys):
    a, b = cover_files
    code, out = run_cli(capsys, "check-cover", "--model", "z^1xC2",
                        "--A", a, "--B", b, "--radius", "6", "--format", "text")
    assert code == 1
    assert "at radius 6" in out


def test_exit_two_on_missing_file(capsys):
    code = main(["analyze", "--presentation", "/nonexistent/x.fp"])
    assert code == 2


def test_exit_two_on_bad_fixture(capsys):
    code = main(["sigma", "--fixture", "NOPE"])
    assert code == 2


def test_exit_two_on_malformed_table(tmp_path, capsys):
    path = tmp_path / "bad.tbl"
    path.write_text("order: 2\n0 1\n")
    code = main(["sigma", "--table", str(path)])
    assert code == 2


def test_exit_two_on_unknown_flag(capsys):
    code = main(["sigma", "--fixture", "V4", "--bogus"])
    assert code == 2


def test_exit_two_on_bad_cone_json(tmp_path, capsys):
    a = tmp_path / "a.cone"
    a.write_text("{not json")
    b = tmp_path / "b.cone"
    b.write_text(json.dumps(B_CONE))
    code = main(["check-cover", "--model", "z^1xC2", "--A", str(a), "--B", str(b)])
    assert code == 2


def test_output_file(tmp_path, cover_files, capsys):
    a, b = cover_files
    out_path = tmp_path / "report.json"
    code = main(["check-cover", "--model", "z^1xC2", "--A", a, "--B", b,
                 "--radius", "6", "--output", str(out_path)])
    assert code == 1
    assert json.loads(out_path.read_text())["model"] == "z^1xC2"

import json

import pytest
from click.testing import CliRunner

from curvescore.cli import main
from curvescore.curves import serialize_canonical

from conftest import (
    completion_item,
    make_paper_shaped_dataset,
    mcq_item,
    write_fixture_tree,
    write_submission,
)


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(main, [str(a) for a in args])


class TestScoreCommand:
    def test_end_to_end(self, runner, tmp_path):
        paths = write_fixture_tree(tmp_path, ("alpha", "beta"))
        out = tmp_path / "reports"
        result = run(runner, "score", *paths, "--out", out, "--plots")
        assert result.exit_code == 0, result.output
        assert (out / "alpha.breakdown.json").exists()
        assert (out / "leaderboard.csv").exists()
        assert (out / "leaderboard.json").exists()
        assert (out / "leaderboard.md").exists()
        assert (out / "alpha.svg").exists()
        rows = (out / "leaderboard.csv").read_text().splitlines()
        assert rows[0] == "rank,benchmark,sq,rc,cs,total"
        assert len(rows) == 3

    def test_leaderboard_ordering_matches_totals(self, runner, tmp_path):
        paths = write_fixture_tree(tmp_path, ("alpha", "beta", "gamma"))
        out = tmp_path / "reports"
        result = run(runner, "score", *paths, "--out", out)
        assert result.exit_code == 0
        board = json.loads((out / "leaderboard.json").read_text())
        totals = [row["total"] for row in board]
        assert totals == sorted(totals, reverse=True)
        assert [row["rank"] for row in board] == [1, 2, 3]

    def test_no_input(self, runner):
        result = run(runner, "score")
        assert result.exit_code == 1
        assert "NoInput" in result.output

    def test_partial_without_flag_exits_2(self, runner, tmp_path):
        ds = make_paper_shaped_dataset("partial", include_webonly=False)
        path = tmp_path / "partial.json"
        path.write_bytes(serialize_canonical(ds))
        result = run(runner, "score", path, "--out", tmp_path / "r")
        assert result.exit_code == 2

    def test_allow_partial_marks_dash(self, runner, tmp_path):
        ds = make_paper_shaped_dataset("partial", include_webonly=False)
        path = tmp_path / "partial.json"
        path.write_bytes(serialize_canonical(ds))
        out = tmp_path / "r"
        result = run(runner, "score", path, "--allow-partial", "--out", out)
        assert result.exit_code == 0
        assert ",–," in (out / "leaderboard.csv").read_text()

    def test_malformed_file_exits_1(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        result = run(runner, "score", bad, "--out", tmp_path / "r")
        assert result.exit_code == 1

    def test_bad_format_flag(self, runner, tmp_path):
        paths = write_fixture_tree(tmp_path)
        result = run(runner, "score", *paths, "--format", "xml")
        assert result.exit_code == 1

    def test_csv_input_supported(self, runner, tmp_path):
        ds = make_paper_shaped_dataset("fromcsv")
        lines = ["benchmark,metric,size,arch,datamix,tokens_billions,score"]
        for mid, curve in ds.curves.items():
            for t, s in curve.points:
                lines.append(
                    f"fromcsv,acc_norm,{mid.size},{mid.arch},{mid.datamix},{t},{s}"
                )
        path = tmp_path / "fromcsv.csv"
        path.write_text("\n".join(lines) + "\n")
        result = run(runner, "score", path, "--out", tmp_path / "r")
        assert result.exit_code == 0

    def test_rerun_byte_identical(self, runner, tmp_path):
        paths = write_fixture_tree(tmp_path, ("alpha", "beta"))
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        for out in (out1, out2):
            result = run(runner, "score", *paths, "--out", out, "--plots")
            assert result.exit_code == 0
        for name in sorted(p.name for p in out1.iterdir()):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


class TestValidateCommand:
    def test_clean_submission(self, runner, tmp_path):
        path = write_submission(tmp_path, [mcq_item(i) for i in range(150)])
        result = run(runner, "validate", path)
        assert result.exit_code == 0

    def test_too_small_exits_2(self, runner, tmp_path):
        path = write_submission(tmp_path, [mcq_item(i) for i in range(99)])
        result = run(runner, "validate", path)
        assert result.exit_code == 2
        assert "SizeOutOfBounds" in result.output

    def test_leaks_warn_unless_strict(self, runner, tmp_path):
        items = [completion_item(i, leak=i < 10) for i in range(120)]
        path = write_submission(tmp_path, items)
        assert run(runner, "validate", path).exit_code == 0
        assert run(runner, "validate", path, "--strict").exit_code == 2


class TestLeakageCommand:
    def test_report_and_filter(self, runner, tmp_path):
        items = [completion_item(i, leak=i < 41) for i in range(50)]
        path = write_submission(tmp_path, items)
        filtered = tmp_path / "filtered.jsonl"
        report_path = tmp_path / "leakage.json"
        result = run(
            runner, "leakage", path, "--out", report_path, "--filter-out", filtered
        )
        assert result.exit_code == 0
        doc = json.loads(report_path.read_text())
        assert doc["rate"] == 0.82
        kept = [json.loads(l) for l in filtered.read_text().splitlines()]
        assert len(kept) == 9


class TestClassifyCommand:
    def write_stub(self, tmp_path, sub_items, n_accept):
        script = {
            item["id"]: ("Accept" if i < n_accept else "Reject")
            for i, item in enumerate(sub_items)
        }
        stub_path = tmp_path / "stub.json"
        stub_path.write_text(json.dumps({"responses": script}))
        return stub_path

    def test_all_accept_exit_0(self, runner, tmp_path):
        items = [mcq_item(i) for i in range(100)]
        path = write_submission(tmp_path, items)
        stub = self.write_stub(tmp_path, items, 100)
        out = tmp_path / "verdict.json"
        result = run(runner, "classify", path, "--stub", stub, "--out", out)
        assert result.exit_code == 0
        assert json.loads(out.read_text())["decision"] == "AutoCompliant"

    def test_half_accept_exit_3(self, runner, tmp_path):
        items = [mcq_item(i) for i in range(100)]
        path = write_submission(tmp_path, items)
        stub = self.write_stub(tmp_path, items, 50)
        result = run(runner, "classify", path, "--stub", stub,
                     "--out", tmp_path / "v.json")
        assert result.exit_code == 3

    def test_missing_credentials_exit_1(self, runner, tmp_path, monkeypatch):
        monkeypatch.delenv("CLASSIFIER_API_KEY", raising=False)
        items = [mcq_item(i) for i in range(100)]
        path = write_submission(tmp_path, items)
        result = run(runner, "classify", path, "--endpoint", "http://localhost:1")
        assert result.exit_code == 1


class TestReportCommand:
    def test_rerender_from_breakdowns(self, runner, tmp_path):
        paths = write_fixture_tree(tmp_path, ("alpha", "beta"))
        out = tmp_path / "r"
        assert run(runner, "score", *paths, "--out", out).exit_code == 0
        out2 = tmp_path / "r2"
        result = run(
            runner, "report",
            out / "alpha.breakdown.json", out / "beta.breakdown.json",
            "--out", out2,
        )
        assert result.exit_code == 0
        assert (out / "leaderboard.csv").read_bytes() == (out2 / "leaderboard.csv").read_bytes()

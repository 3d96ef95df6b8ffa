from __future__ import annotations

import json

import pytest

import helpers
from slimfork import GridSpec, canonical_key, grid, io
from slimfork.cli import main


def run(capsys, *argv) -> tuple[int, dict | None]:
    status = main(list(argv))
    out = capsys.readouterr().out.strip()
    payload = json.loads(out.splitlines()[-1]) if out else None
    return status, payload


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def s7_path(workdir, s7):
    path = workdir / "s7.json"
    io.save(s7, path)
    return path


class TestGridCommand:
    def test_writes_document(self, workdir, capsys):
        status, payload = run(capsys, "grid", "2", "2")
        assert status == 0
        assert payload == {"n": 4, "written": "grid-2x2.json"}
        loaded = io.load(workdir / "grid-2x2.json")
        assert loaded.upper == grid(GridSpec(2, 2)).upper

    def test_too_small_is_invalid_input(self, workdir, capsys):
        status, _ = run(capsys, "grid", "1", "5")
        assert status == 2


class TestForkCommand:
    def test_fork_grid(self, workdir, capsys):
        run(capsys, "grid", "2", "2")
        status, payload = run(capsys, "fork", "grid-2x2.json", "--cell", "0")
        assert status == 0
        assert payload["n"] == 7 and payload["m"] == 4
        loaded = io.load(workdir / payload["written"])
        assert canonical_key(loaded) == canonical_key(helpers.s7())

    def test_bad_cell(self, workdir, capsys):
        run(capsys, "grid", "2", "2")
        status, _ = run(capsys, "fork", "grid-2x2.json", "--cell", "3")
        assert status == 2


class TestScriptCommand:
    def test_runs_script(self, workdir, capsys):
        (workdir / "double.script.json").write_text('{"grid": [2, 2], "steps": [0, 0]}')
        status, payload = run(
            capsys, "script", "double.script.json", "--trace-dir", "stages"
        )
        assert status == 0
        assert payload["n"] == 10 and payload["stages"] == 3
        assert (workdir / "stages" / "stage-002.json").exists()

    def test_bad_step(self, workdir, capsys):
        (workdir / "bad.script.json").write_text('{"grid": [2, 2], "steps": [9]}')
        status, _ = run(capsys, "script", "bad.script.json")
        assert status == 2


class TestCheckCommand:
    def test_p2_on_s7(self, s7_path, capsys):
        status, payload = run(capsys, "check", str(s7_path), "--props", "p2")
        assert status == 0
        assert payload == {"p2": "holds", "dual_atoms": 2}

    def test_all_props_on_s7(self, s7_path, capsys):
        status, payload = run(capsys, "check", str(s7_path))
        assert status == 0
        assert payload["slim"] and payload["sm"] and payload["graded"]
        assert payload["rect"] and payload["p1"]
        assert payload["prime_ideals"] is True

    def test_failing_prop_exits_one(self, workdir, capsys):
        io.save(helpers.n5(), workdir / "n5.json")
        status, payload = run(capsys, "check", "n5.json", "--props", "sm,graded")
        assert status == 1
        assert payload == {"sm": False, "graded": False}

    def test_rect_failure(self, workdir, capsys):
        io.save(helpers.chain(3), workdir / "c3.json")
        status, payload = run(capsys, "check", "c3.json", "--props", "rect")
        assert status == 1
        assert payload["rect"] is False and "rect_reason" in payload

    def test_unknown_prop(self, s7_path, capsys):
        status, _ = run(capsys, "check", str(s7_path), "--props", "bogus")
        assert status == 2

    def test_p2_exempt_on_tiny_lattice(self, workdir, capsys):
        io.save(helpers.chain(2), workdir / "c2.json")
        status, payload = run(capsys, "check", "c2.json", "--props", "p2")
        assert status == 0
        assert payload == {"p2": "exempt"}

    @pytest.mark.parametrize(
        "content", ["{", "[1,2", '{"elements": 3}', "", '{"a": }']
    )
    def test_fuzzed_inputs_never_succeed(self, workdir, capsys, content):
        (workdir / "junk.json").write_text(content)
        for argv in (
            ["check", "junk.json", "--props", "p2"],
            ["con", "junk.json"],
            ["fork", "junk.json", "--cell", "0"],
            ["render", "junk.json", "--dot", "out.dot"],
            ["search", "junk.json"],
        ):
            status = main(argv)
            capsys.readouterr()
            assert status == 2


class TestConCommand:
    def test_full_lattice(self, s7_path, capsys):
        status, payload = run(capsys, "con", str(s7_path))
        assert status == 0
        assert payload["size"] == 5
        assert len(payload["congruences"]) == 5

    def test_ji(self, s7_path, capsys):
        status, payload = run(capsys, "con", str(s7_path), "--ji")
        assert status == 0
        assert payload["count"] == 3
        assert sorted(payload["covers"]) == [[0, 1], [0, 2]]

    def test_dual_atoms(self, s7_path, capsys):
        status, payload = run(capsys, "con", str(s7_path), "--dual-atoms")
        assert status == 0
        assert payload["dual_atoms"] == 2


class TestEnumerateCommand:
    def test_small_campaign(self, workdir, capsys):
        status, payload = run(
            capsys,
            "enumerate", "--pmax", "3", "--qmax", "3", "--max-forks", "1",
            "--out", "family",
        )
        assert status == 0
        assert payload["ok"] is True
        assert payload["family_size"] == len(
            json.loads((workdir / "family" / "index.json").read_text())["classes"]
        )
        assert (workdir / "family" / "report.json").exists()
        index = json.loads((workdir / "family" / "index.json").read_text())
        first = index["classes"][0]
        assert (workdir / "family" / first["file"]).exists()

    def test_deterministic_index(self, workdir, capsys):
        for name in ("a", "b"):
            status, _ = run(
                capsys,
                "enumerate", "--pmax", "2", "--qmax", "3", "--max-forks", "1",
                "--out", name,
            )
            assert status == 0
        assert (workdir / "a" / "index.json").read_bytes() == (
            workdir / "b" / "index.json"
        ).read_bytes()


class TestSearchCommand:
    def test_c3_note(self, workdir, capsys):
        io.save(helpers.chain(3), workdir / "c3.json")
        status, payload = run(
            capsys,
            "search", "c3.json", "--pmax", "4", "--qmax", "4", "--max-forks", "3",
        )
        assert status == 0
        assert payload["witnesses"] == []
        assert payload["note"] == "single dual atom"
        assert payload["scanned"] == 0

    def test_b2_witness(self, workdir, capsys):
        io.save(grid(GridSpec(2, 2)), workdir / "b2.json")
        status, payload = run(
            capsys,
            "search", "b2.json", "--pmax", "3", "--qmax", "3", "--max-forks", "0",
        )
        assert status == 0
        assert {"grid": [2, 2], "steps": []} in payload["witnesses"]

    def test_non_distributive_target(self, workdir, capsys):
        io.save(helpers.m3(), workdir / "m3.json")
        status, _ = run(capsys, "search", "m3.json", "--pmax", "2", "--qmax", "2")
        assert status == 2


class TestRenderCommand:
    def test_writes_dot(self, workdir, capsys, s7_path):
        status, payload = run(capsys, "render", str(s7_path), "--dot", "s7.dot")
        assert status == 0
        text = (workdir / "s7.dot").read_text()
        assert text.startswith('digraph "')
        assert text.count("->") == 9


class TestUsage:
    def test_no_arguments(self, capsys):
        assert main([]) == 2
        capsys.readouterr()

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 2
        capsys.readouterr()

    def test_version_exits_zero(self, capsys):
        assert main(["--version"]) == 0
        capsys.readouterr()

    def test_missing_file(self, workdir, capsys):
        assert main(["check", "nope.json"]) == 2
        capsys.readouterr()

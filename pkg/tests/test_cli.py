import io
import json
import subprocess
import sys

import pytest

from vdwkit.cli import run_command


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_compute_and_cache(store_dir):
    code, out, _ = run("compute", "w", "--k", "3", "--s", "4")
    assert code == 0 and out.strip() == "18"
    code, out, _ = run("compute", "w", "--lengths", "3,4", "--json")
    assert code == 0 and json.loads(out) == {"spec": "W_MIXED:3,4", "value": 18, "cached": True}
    certs = list((store_dir / "certs").iterdir())
    assert len(certs) == 1
    code, out, _ = run("verify", str(certs[0]))
    assert code == 0 and "CLEAN" in out and "ATTESTED" in out


def test_compute_families(store_dir):
    assert run("compute", "G", "--k", "3", "--s", "3")[1].strip() == "9"
    assert run("compute", "M", "--k", "3", "--s", "3", "--no-cache")[1].strip() == "11"
    assert run("compute", "mcol", "--s", "3")[1].strip() == "11"
    assert run("compute", "r", "--k", "3", "--n", "13")[1].strip() == "7"
    assert run("compute", "chi", "--k", "3", "--m", "9")[1].strip() == "3"


def test_budget_exit_code(store_dir):
    code, out, err = run("compute", "w", "--k", "3", "--s", "7", "--max-nodes", "500", "--threads", "2")
    assert code == 3 and out.startswith("≥") and "node limit" in err
    lower = int(out.strip()[1:])
    code, out, _ = run("table", "--functions", "w", "--s-max", "7")
    assert code == 0 and f"≥{lower}" in out


def test_usage_errors(store_dir):
    assert run()[0] == 2
    assert run("compute", "nope", "--k", "3", "--s", "3")[0] == 2
    assert run("compute", "w", "--k", "3")[0] == 2
    assert run("compute", "w", "--k", "3", "--s", "3", "--threads", "0")[0] == 2
    assert run("table", "--functions", "x")[0] == 2
    assert run("verify", "/nonexistent/file")[0] == 2
    assert run("lll", "--k", "2", "--m", "3", "--n", "5")[0] == 2


def test_verify_failures(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps({"spec": "W_MIXED:3,3", "n": 9, "claim": "GOOD_WITNESS", "witness": "001100110"}) + "\n")
    code, out, _ = run("verify", str(bad))
    assert code == 1 and "VIOLATION" in out and "terms=[1, 5, 9]" in out
    bad.write_text("not json\n")
    assert run("verify", str(bad))[0] == 1
    bad.write_text(json.dumps({"spec": "W_MIXED:3,3", "n": 5, "claim": "GOOD_WITNESS", "witness": "0011"}) + "\n")
    code, out, _ = run("verify", str(bad))
    assert code == 1 and "MALFORMED" in out


def test_table_reference_csv():
    code, out, _ = run("table", "--source", "reference", "--format", "csv", "--s-max", "5")
    assert code == 0
    assert out.splitlines()[0] == "k=3,2,3,4,5"
    assert "w,6,9,18,22" in out


def test_table_compute(store_dir):
    code, out, _ = run("table", "--functions", "G,M", "--s-max", "3", "--compute", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["rows"] == [{"function": "G", "cells": ["5", "9"]},
                                         {"function": "M", "cells": ["7", "11"]}]


def test_bounds():
    code, out, _ = run("bounds", "--k", "4", "--m", "4", "--format", "json")
    doc = json.loads(out)
    wkk = next(e for e in doc["entries"] if e["name"] == "WKK_LOWER")
    assert code == 0 and wkk["value"] == "24" and wkk["anchor"] == {"exact": 35, "consistent": True}
    assert run("bounds", "--k", "3", "--s", "3")[0] == 0


def test_relations():
    code, out, _ = run("relations", "--s-range", "2-8", "--block-check")
    assert code == 0 and "fails=0" in out and "residue criterion: agrees" in out


def test_lll():
    code, out, _ = run("lll", "--k", "6", "--m", "3", "--n", "25", "--seed", "1")
    assert code == 0 and out.startswith("success")
    assert run("lll", "--k", "6", "--m", "3", "--n", "40", "--max-rounds", "200")[0] == 3


def test_module_entry_point(store_dir):
    p = subprocess.run([sys.executable, "-m", "vdwkit", "compute", "w", "--k", "3", "--s", "2", "--no-cache"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip() == "6"


def test_empty_cache_table_is_unknown(store_dir):
    code, out, _ = run("table", "--format", "csv", "--s-max", "4")
    assert code == 0
    assert all(set(line.split(",")[1:]) == {"?"} for line in out.splitlines()[1:])


def test_deterministic_output_is_byte_identical(tmp_path):
    outputs = []
    for name in ("a", "b"):
        root = tmp_path / name
        code, out, _ = run("compute", "w", "--lengths", "3,3", "--store", str(root), "--deterministic")
        assert code == 0 and out == "9\n"
        files = {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}
        outputs.append((out, files))
    assert outputs[0] == outputs[1]
    assert "certs/W_MIXED_3_3.jsonl" in outputs[0][1]


def test_verify_accepts_single_json_object(tmp_path):
    p = tmp_path / "cert.json"
    p.write_text(json.dumps({"spec": "W_MIXED:3,3", "n": 8, "claim": "GOOD_WITNESS", "witness": "00110011"}, indent=2))
    code, out, _ = run("verify", str(p))
    assert code == 0 and "CLEAN" in out
    p.write_text(json.dumps({"spec": "W_MIXED:3,3", "n": 8, "claim": "GOOD_WITNESS", "witness": "00110111"}, indent=2))
    code, out, _ = run("verify", str(p))
    assert code == 1 and "VIOLATION" in out

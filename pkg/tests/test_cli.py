import json
import shutil

import pytest

from grpx.bundle import AssetError, Bundle, asset_dir, verify_entry
from grpx.cli import main
from grpx.reproduce import CLAIMS, Certificate, RunConfig, run_claim


@pytest.fixture
def corrupt_bundle(tmp_path, monkeypatch):
    root = tmp_path / "assets"
    shutil.copytree(asset_dir(), root)
    f = root / "a5.grp"
    f.write_text(f.read_text().replace("(2 3 4)", "(1 3 4)"))
    monkeypatch.setenv("GRPX_ASSET_DIR", str(root))
    return root


def test_manifest_hashes_clean():
    b = Bundle.open()
    assert b.hash_failures() == []
    assert {"psl2_17", "psp4_3", "psu3_3", "m8_psl2_17", "m6_psu3_3"} <= set(b.assets)


@pytest.mark.parametrize("name", ["a5", "sl2_5", "sp4_2", "o4p_2", "o4m_2", "psl2_17", "m8_psl2_17",
                                  "symtype_minus_2"])
def test_verify_entry(name):
    ok, msg = verify_entry(Bundle.open(), name)
    assert ok, msg


def test_corrupted_asset_is_rejected(corrupt_bundle, capsys):
    b = Bundle.open()
    assert b.root == corrupt_bundle
    with pytest.raises(AssetError):
        b.group("a5")
    assert main(["asset-verify"]) == 2
    assert "CORRUPT" in capsys.readouterr().out
    assert main(["reproduce-all"]) == 2


def test_missing_manifest(tmp_path, monkeypatch):
    monkeypatch.setenv("GRPX_ASSET_DIR", str(tmp_path))
    assert main(["asset-verify"]) == 2


def test_explain(capsys):
    assert main(["explain", "table.psl2_17"]) == 0
    assert "P(PSL2(17)) = 18" in capsys.readouterr().out
    assert main(["explain", "no.such.claim"]) == 2


def test_invariants_and_json(tmp_path, capsys):
    out = tmp_path / "p.json"
    assert main(["invariants", "--group", "a5", "--kind", "P", "--cap", "6", "--json", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["value"] == 5 and d["kind"] == "P"


def test_symtype_build_and_clifford(tmp_path, capsys):
    assert main(["symtype", "build", "--r", "2", "--n", "1", "--kind", "plus", "--field", "3",
                 "--out", str(tmp_path)]) == 0
    grp = tmp_path / "R_plus_2_1.grp"
    assert grp.exists() and (tmp_path / "R_plus_2_1.mod").exists()
    capsys.readouterr()
    assert main(["clifford", "--group", str(grp), "--normal", str(grp)]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["k"] == 1 and d["components"] == [[1, 2]]
    assert main(["symtype", "build", "--r", "3", "--n", "1", "--kind", "plus", "--field", "4"]) == 2


def test_subdirect_and_feit_tits(capsys):
    assert main(["subdirect", "--count", "5", "--seed", "3"]) == 0
    assert main(["feit-tits", "--builtin", "sp4_2"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_bad_inputs():
    assert main(["h2", "--group", "nosuch", "--module", "x"]) == 2
    assert main(["split"]) == 2
    assert main(["--budget-secs", "-1", "subdirect", "--count", "1"]) == 2
    with pytest.raises(SystemExit):
        main(["invariants", "--group", "a5", "--kind", "Q", "--cap", "3"])


def test_claim_determinism():
    cfg = RunConfig(seed=7)
    a = run_claim("oracle.orders", cfg)
    b = run_claim("oracle.orders", cfg)
    assert a.verdict == "PASS"
    assert a.determinism_hash() == b.determinism_hash()
    assert a.to_json() != "" and json.loads(a.to_json())["schema_version"] == 1


def test_certificate_hash_ignores_timing():
    c1 = Certificate("x", {}, {"v": 1, "inner": {"elapsed_ms": 5}}, "PASS", 0, 10)
    c2 = Certificate("x", {}, {"v": 1, "inner": {"elapsed_ms": 99}}, "PASS", 0, 20)
    c3 = Certificate("x", {}, {"v": 2}, "PASS", 0, 10)
    assert c1.determinism_hash() == c2.determinism_hash() != c3.determinism_hash()


def test_skipped_g2_row():
    cert = run_claim("table.g2_3", RunConfig(extended=True))
    assert cert.verdict == "SKIPPED"
    assert CLAIMS["table.g2_3"].extended


def test_budget_overrun_is_a_failure():
    cert = run_claim("oracle.orders", RunConfig(budget_secs=1e-6))
    assert cert.verdict == "FAIL" and "budget_secs" in cert.diff

import io
import json
import subprocess
import sys

import pytest

from qspacegroup.cli import SCHEMA, RunRecord, run
from qspacegroup.groupcore import get_group
from qspacegroup.homology import shipped_complex


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_list_groups():
    p = call_json("list-groups")
    assert p["schema"] == SCHEMA
    assert len(p["groups"]) == 17
    assert {g["name"] for g in p["groups"] if not g["symmorphic"]} == {"pg", "pmg", "pgg", "p4g"}


def test_classify_pg_z2():
    p = call_json("classify", "--group", "pg", "--coeff", "z2")
    assert p["dimension"] == 1
    code, text, _ = call("classify", "--group", "pg")
    assert code == 0 and text.strip() == "H^2(pg, Z2) = Z2"


def test_classify_u1_route():
    assert call_json("classify", "--group", "pm", "--coeff", "u1")["value"] == "Z2^2"
    assert call_json("classify", "--group", "p1", "--coeff", "u1")["value"] == "U(1)"


def test_classify_with_representatives():
    p = call_json("classify", "--group", "pg", "--representatives")
    assert len(p["representatives"]) == 2


def test_output_is_deterministic():
    a = call("classify", "--group", "pmg", "--json", "--representatives")[1]
    b = call("classify", "--group", "pmg", "--json", "--representatives")[1]
    assert a == b
    a = call("homology", "--group", "pg", "--json", "--show-matrices")[1]
    assert a == call("homology", "--group", "pg", "--json", "--show-matrices")[1]


def test_homology_pg():
    p = call_json("homology", "--group", "pg", "--max-degree", "3", "--coeff", "z2")
    assert p["ranks"] == [2, 6, 8, 8]
    assert p["homology"]["1"]["text"] == "Z + Z2"
    assert p["cohomology"]["2"]["text"] == "Z2"
    code, text, _ = call("homology", "--group", "pg", "--show-matrices")
    assert code == 0
    assert "Sm(d_2) = diag(1, 1, 1, 2, 0, 0)" in text


def test_export_matrices_pg_and_p1(tmp_path):
    p = json.loads(call_json("export", "--group", "pg", "--what", "matrices")["text"])
    assert p["boundaries"]["2"]["smith_diagonal"] == [1, 1, 1, 2, 0, 0]
    assert p["boundaries"]["2"]["matrix"][0] == [1, 1, 0, 0, 1, -1, 0, 0]
    p = json.loads(call_json("export", "--group", "p1", "--what", "matrices")["text"])
    for b in p["boundaries"].values():
        assert all(v == 0 for row in b["matrix"] for v in row)


def test_group_export_round_trip(tmp_path):
    f = tmp_path / "pgg.json"
    code, _, err = call("export", "--group", "pgg", "--out", str(f))
    assert code == 0, err
    a = call_json("classify", "--group-file", str(f))
    b = call_json("classify", "--group", "pgg")
    assert a["dimension"] == b["dimension"] == 2
    assert call_json("validate", str(f))["valid"]


def test_generated_complex_route(tmp_path):
    f = tmp_path / "p6m_complex.json"
    assert call("export", "--group", "p6m", "--what", "complex", "--generate", "--out", str(f))[0] == 0
    assert call_json("validate", str(f))["valid"]
    p = call_json("homology", "--group", "p6m", "--complex", str(f))
    assert p["homology"]["1"]["text"] == "Z2^2"


def test_complex_export_round_trip(tmp_path):
    f = tmp_path / "pg_complex.json"
    assert call("export", "--group", "pg", "--what", "complex", "--out", str(f))[0] == 0
    assert json.loads(f.read_text()) == shipped_complex(get_group("pg")).to_dict()


def test_factor_systems_values():
    p = call_json("factor-systems", "--group", "pg", "--pair", "0,0|M", "0,1|E", "--pair", "1,0|M", "1,0|M")
    trivial, nontrivial = p["representatives"]
    assert nontrivial["g"]["M"]["q"] == "01"
    assert [v["nu"] for v in trivial["values"]] == [1, 1]
    assert [v["nu"] for v in nontrivial["values"]] == [-1, 1]


def test_bands():
    p = call_json("bands", "--st", "1", "--sp", "1", "--qx", "1", "--qy", "1", "--winding", "--degeneracy",
                  "--algebra", "--grid", "64")
    assert p["signature"] == [0, 4] and p["irrep_dim"] == 4
    assert p["winding"] == {"x": 1, "y": 1}
    assert p["degeneracy"]["min_multiplicity"] == 4
    assert all(r["passed"] for r in p["algebra"].values())


def test_bands_signature_only_for_unshipped_case():
    p = call_json("bands", "--st", "-1", "--sp", "1", "--qx", "0", "--qy", "0")
    assert p["signature"] == [4, 0] and p["irrep_dim"] == 4


@pytest.mark.parametrize("argv", [
    ("classify", "--group", "p7"),
    ("homology", "--group", "p6m"),
    ("bands", "--st", "-1", "--sp", "1", "--qx", "0", "--qy", "0", "--winding"),
    ("bands", "--st", "2", "--sp", "1", "--qx", "0", "--qy", "0"),
    ("validate", "/nonexistent/file.json"),
    ("classify",),
])
def test_domain_errors_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1
    assert err.startswith("error:")


def test_bad_json_reports_line(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{\n "name": "x",\n oops\n}')
    code, _, err = call("validate", str(f))
    assert code == 1 and "line 3" in err


def test_invalid_complex_reported(tmp_path):
    doc = shipped_complex(get_group("pg")).to_dict()
    doc["degrees"][2]["boundary"] = [[1, 1], [-1, 1], [0, 0], [0, 0]]
    f = tmp_path / "broken.json"
    f.write_text(json.dumps(doc))
    p = call_json("validate", str(f))
    assert not p["valid"] and p["problems"]


def test_run_record(tmp_path):
    rec = tmp_path / "run.json"
    code, out, _ = call("classify", "--group", "p4g", "--json", "--record", str(rec))
    assert code == 0
    r = RunRecord.from_json(rec.read_text())
    assert r.subcommand == "classify" and r.payload == json.loads(out)
    assert r.payload["dimension"] == 3
    rec2 = tmp_path / "run2.json"
    call("classify", "--group", "p4g", "--json", "--record", str(rec2))
    assert RunRecord.from_json(rec2.read_text()).input_digest == r.input_digest


def test_table1_report():
    p = call_json("table1", "--coeff", "u1")
    assert p["summary"]["u1"]["matches"] == p["summary"]["u1"]["checked"] == 12


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qspacegroup", "classify", "--group", "p2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == "H^2(p2, Z2) = Z2^4"

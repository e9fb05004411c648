import json

import pytest

from parallelohedra import get
from parallelohedra.catalog import names
from parallelohedra.cli import main
from parallelohedra.harness import analyze, resolve_input
from parallelohedra.io import AnalysisReport, InputError, load_input, load_lattice


def _write(tmp_path, data, name="in.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return p


def test_load_string_entries(tmp_path):
    spec = load_lattice(_write(tmp_path, {"name": "Z3", "dim": 3,
                                          "gram": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}))
    assert spec == get("Z3")
    spec = load_lattice(_write(tmp_path, {"name": "A2", "gram": [[2, -1], [-1, 2]]}))
    assert len(spec.to_lattice().relevant) == 6


def test_load_rational_basis(tmp_path):
    spec = load_lattice(_write(tmp_path, {"basis": [["1/2", 0], [0, 1]]}))
    from fractions import Fraction

    assert spec.to_lattice().gram[0][0] == Fraction(1, 4)


def test_indefinite_rejected_with_minor(tmp_path):
    with pytest.raises(InputError, match="minor"):
        load_lattice(_write(tmp_path, {"gram": [[1, 2], [2, 1]]}))


def test_parse_errors(tmp_path):
    with pytest.raises(InputError, match="line 2 column"):
        load_input(_write(tmp_path, '{"gram":\n [[1,0],[0,1]],,}'))
    with pytest.raises(InputError, match="row 1 entry 0"):
        load_input(_write(tmp_path, {"gram": [[1, 0], [0.5, 1]]}))
    with pytest.raises(InputError, match="exactly one"):
        load_input(_write(tmp_path, {"gram": [[1]], "basis": [[1]]}))
    with pytest.raises(InputError, match="dim is 3"):
        load_input(_write(tmp_path, {"dim": 3, "gram": [[1, 0], [0, 1]]}))
    with pytest.raises(InputError, match="cannot parse"):
        load_input(_write(tmp_path, {"gram": [["x"]]}))
    with pytest.raises(InputError):
        load_input(tmp_path / "missing.json")


def test_halfspace_input_is_not_a_lattice(fixtures_dir):
    assert load_input(fixtures_dir / "octahedron.json").dim == 3
    with pytest.raises(InputError, match="halfspaces"):
        load_lattice(fixtures_dir / "octahedron.json")


def test_catalog_filters():
    d3 = names(3)
    assert {"Z3", "A3", "D3", "A3*", "A2+Z"} <= set(d3)
    assert {"D5", "A5*", "A2+Z3"} <= set(names(5))
    assert names(3) == d3
    assert len(names()) >= 19
    with pytest.raises(KeyError, match="Z3"):
        get("E8")


def test_resolve_input():
    assert resolve_input("catalog:D4") == get("D4")
    with pytest.raises(InputError):
        resolve_input("catalog:nope")


def test_unknown_check_rejected():
    with pytest.raises(InputError, match="bogus"):
        analyze(get("Z2"), "mv,bogus")


def test_analyze_z5(report):
    r = report("Z5")
    assert r.exit_code == 0
    d = r.to_dict()
    one = [["1" if i == j else "0" for j in range(5)] for i in range(5)]
    assert d["results"]["scaling"]["q"] == one
    assert d["results"]["audit5d"]["verdict"] == "Decomposed"


def test_analyze_d5(report):
    r = report("D5")
    assert r.exit_code == 0 and not r.failures
    assert r.to_dict()["results"]["relevant_vectors"] == 40


def test_octahedron_fails(fixtures_dir):
    r = analyze(load_input(fixtures_dir / "octahedron.json"))
    assert r.exit_code == 1
    mv = r.results["mv"]
    assert mv["passed"] is False and mv["witness"]["condition"] == 2
    assert set(r.results["skipped"]) == {"census", "lemmas", "free", "venkov",
                                         "scaling", "audit5d"}


def test_deterministic_and_round_trip():
    a = analyze(get("A3"), "mv,census,venkov,scaling")
    b = analyze(get("A3"), "mv,census,venkov,scaling")
    assert a.to_json(timings=False) == b.to_json(timings=False)
    assert "timings" not in json.loads(a.to_json(False))
    assert set(a.timings) == {"cell", "mv", "census", "venkov", "scaling", "total"}
    back = AnalysisReport.from_json(a.to_json())
    assert back.to_json() == a.to_json()


def test_cli_exit_codes(tmp_path, fixtures_dir, capsys):
    out = tmp_path / "r.json"
    assert main(["analyze", "catalog:A2", "--checks", "mv,scaling", "--out", str(out),
                 "--no-timings"]) == 0
    assert json.loads(out.read_text())["status"] == "ok"
    assert main(["analyze", str(fixtures_dir / "octahedron.json")]) == 1
    assert "condition 2" in capsys.readouterr().err
    bad = _write(tmp_path, {"gram": [[0]]})
    assert main(["analyze", str(bad)]) == 2
    assert capsys.readouterr().err.startswith("error:")
    assert main(["audit5d", "catalog:A2"]) == 0


def test_cli_catalog_and_oracles(capsys):
    assert main(["catalog", "--dim", "2"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert [r.split("\t")[0] for r in rows] == names(2)
    assert main(["catalog", "--json"]) == 0
    assert len(json.loads(capsys.readouterr().out)) == len(names())
    assert main(["oracle", "relevant-vectors", "catalog:A2"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 6
    assert main(["oracle", "vertices", "catalog:Z2"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 4
    assert main(["oracle", "dual-cells", "catalog:A2"]) == 0
    cells = json.loads(capsys.readouterr().out)["cells"]
    assert all(len(c["points"]) == 3 for c in cells)

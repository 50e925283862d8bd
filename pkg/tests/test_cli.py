from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from subdivkit import catalog as catalog_module
from subdivkit.catalog import Catalog, builtin_schemes
from subdivkit.cli import main
from subdivkit.refinement import Polygon, refine
from subdivkit.scheme import Mask, SubdivisionScheme, load_mask, save_mask
from subdivkit.svg import render, scene_for_polygons, scene_for_trace
from subdivkit.verify import run_verify

F = Fraction
SVG = "{http://www.w3.org/2000/svg}"
SQUARE_CSV = "closed\n0,0\n1,0\n1,1\n0,1\n"


@pytest.fixture
def square(tmp_path):
    path = tmp_path / "square.csv"
    path.write_text(SQUARE_CSV, encoding="utf-8")
    return path


def _polylines(path):
    root = ET.parse(path).getroot()
    assert root.tag == f"{SVG}svg" and root.get("version") == "1.1"
    return root.findall(f"{SVG}polyline")


def test_convert_both_methods_agree(capsys):
    assert main(["convert", "--scheme", "binary-chaikin-2pt", "--method", "both"]) == 0
    out = capsys.readouterr().out
    assert "g'[4phi-2] = 3/16 g[phi-1] + 3/4 g[phi] + 1/16 g[phi+1]" in out


def test_convert_json_and_out_file(tmp_path, capsys):
    out = tmp_path / "q.json"
    code = main(["convert", "--scheme", "binary-siddiqi-4pt", "--out", str(out), "--format", "json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rule_widths"] == [5, 5, 6, 6]
    assert load_mask(out).mask == catalog_module.catalog_get("quat-5pt").mask


def test_convert_from_file_round_trip(tmp_path):
    src, dst = tmp_path / "b.json", tmp_path / "q.json"
    save_mask(catalog_module.catalog_get("binary-siddiqi-6pt"), src)
    assert main(["convert", "--in", str(src), "--method", "theorem", "--out", str(dst)]) == 0
    assert load_mask(dst).mask == catalog_module.catalog_get("quat-8pt").mask


def test_convert_odd_width_is_parity_error(tmp_path, capsys):
    path = tmp_path / "odd.json"
    path.write_text(
        json.dumps({"name": "odd", "arity": 2, "first_index": -1, "coefficients": ["1/2", "1/1", "1/2"]}),
        encoding="utf-8",
    )
    assert main(["convert", "--in", str(path), "--method", "theorem"]) == 3
    assert "WrongParity" in capsys.readouterr().err
    # the symbol route accepts any binary mask
    assert main(["convert", "--in", str(path), "--method", "symbol"]) == 0


def test_convert_parse_error_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "x", "arity": 2, "first_index": 0, "coefficients": ["1/0"]}', encoding="utf-8")
    assert main(["convert", "--in", str(path)]) == 2
    assert main(["convert", "--in", str(tmp_path / "missing.json")]) == 2
    assert main(["convert", "--scheme", "no-such-scheme"]) == 2
    capsys.readouterr()


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["convert"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_convert_quaternary_is_arity_error(capsys):
    assert main(["convert", "--scheme", "quat-5pt"]) == 3
    assert "WrongArity" in capsys.readouterr().err


def test_refine_writes_csv(tmp_path, square, capsys):
    out = tmp_path / "out.csv"
    assert main(["refine", "--scheme", "binary-chaikin-2pt", "--in", str(square), "--steps", "2", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "closed" and len(lines) == 17
    assert "4 -> 16" in capsys.readouterr().out


def test_refine_json_levels(square, capsys):
    assert main(["refine", "--scheme", "quat-5pt", "--in", str(square), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [len(lvl["points"]) for lvl in doc["levels"]] == [4, 16]
    assert all("/" in x for pt in doc["levels"][1]["points"] for x in pt)


def test_refine_too_few_points(tmp_path, capsys):
    path = tmp_path / "short.csv"
    path.write_text("open\n0,0\n1,0\n2,1\n", encoding="utf-8")
    assert main(["refine", "--scheme", "binary-siddiqi-8pt", "--in", str(path)]) == 3
    assert "TooFewPoints" in capsys.readouterr().err


def test_refine_bad_polygon_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("closed\n0,0\n1,x\n2,2\n", encoding="utf-8")
    assert main(["refine", "--scheme", "binary-chaikin-2pt", "--in", str(path)]) == 2
    capsys.readouterr()


def test_plot_chaikin_square(tmp_path, square):
    out = tmp_path / "chaikin.svg"
    assert main(["plot", "--scheme", "binary-chaikin-2pt", "--in", str(square), "--steps", "2", "--out", str(out)]) == 0
    lines = _polylines(out)
    assert [int(pl.get("data-vertices")) for pl in lines] == [4, 8, 16]
    # closed polylines repeat their first vertex
    assert [len(pl.get("points").split()) for pl in lines] == [5, 9, 17]
    first = lines[0].get("points").split()
    assert first[0] == first[-1]


def test_plot_quat_five_point(tmp_path, square):
    out = tmp_path / "quat.svg"
    assert main(["plot", "--scheme", "quat-5pt", "--in", str(square), "--steps", "1", "--out", str(out)]) == 0
    assert [int(pl.get("data-vertices")) for pl in _polylines(out)] == [4, 16]


def test_plot_open_polyline_too_few_points(tmp_path, capsys):
    path = tmp_path / "short.csv"
    path.write_text("open\n0,0\n1,0\n2,1\n", encoding="utf-8")
    code = main(["plot", "--scheme", "binary-siddiqi-8pt", "--in", str(path), "--out", str(tmp_path / "x.svg")])
    assert code == 3
    assert "TooFewPoints" in capsys.readouterr().err
    assert not (tmp_path / "x.svg").exists()


@pytest.mark.parametrize("steps", [0, 1, 3])
def test_svg_has_one_polyline_per_level(steps):
    square = Polygon.from_points([(0, 0), (1, 0), (1, 1), (0, 1)])
    text = render(scene_for_trace(refine(square, catalog_module.catalog_get("binary-siddiqi-4pt"), steps)))
    root = ET.fromstring(text)
    assert len(root.findall(f"{SVG}polyline")) == steps + 1


def test_svg_open_polyline_and_view_box():
    line = Polygon.from_points([(0, 0), (10, 0), (10, 5)], closed=False)
    root = ET.fromstring(render(scene_for_polygons([line])))
    pl = root.find(f"{SVG}polyline")
    assert pl.get("data-vertices") == "3" and len(pl.get("points").split()) == 3
    x, y, w, h = map(float, root.get("viewBox").split())
    assert (x, w) == pytest.approx((-0.5, 11.0))
    assert "-0," not in pl.get("points")


def test_holder_and_precision_commands(capsys):
    assert main(["holder", "--scheme", "binary-siddiqi-4pt", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["smoothing_order"] == 5 and doc["xi_upper_exact"] == "11/6"
    assert main(["holder", "--scheme", "binary-chaikin-2pt", "--pair"]) == 0
    assert "delta r_mid +0" in capsys.readouterr().out
    assert main(["precision", "--scheme", "quat-14pt-binomial"]) == 0
    assert "degree of precision 9, degree of generation 10" in capsys.readouterr().out


def test_precision_not_convergent_exit_3(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps({"name": "half", "arity": 4, "first_index": 0, "coefficients": ["1/2", "1/2"]}), encoding="utf-8"
    )
    assert main(["precision", "--mask", str(path)]) == 3
    assert "NotConvergent" in capsys.readouterr().err


def test_catalog_command(capsys):
    assert main(["catalog", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)["schemes"]
    names = {r["name"]: r for r in rows}
    assert len(names) == 14
    assert names["binary-siddiqi-4pt"]["partner"] == "quat-5pt"


@pytest.mark.parametrize("group", ["convert", "precision"])
def test_verify_groups_that_match_exactly(group, capsys):
    assert main(["verify", "--only", group]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_verify_reports_corrupted_catalog_entry():
    entries = builtin_schemes()
    good = entries["quat-5pt"].mask
    coeffs = list(good.coefficients)
    coeffs[3] += F(1, 10**9)
    entries["quat-5pt"] = SubdivisionScheme(Mask(4, good.first_index, tuple(coeffs)), "quat-5pt")
    report = run_verify(["convert"], Catalog(entries))
    assert not report.passed
    (bad,) = report.failures()
    assert "quat-5pt" in bad.detail
    assert bad.data["theorem_mismatches"] == 1


def test_verify_missing_entry_is_reported():
    entries = builtin_schemes()
    del entries["quat-11pt"]
    failures = run_verify(["convert", "precision"], Catalog(entries)).failures()
    assert failures and all("quat-11pt" in c.detail for c in failures)


def test_verify_is_deterministic():
    a = run_verify(["convert", "precision"]).to_dict()
    b = run_verify(["convert", "precision"]).to_dict()
    assert a == b


def test_extra_catalog_dir_from_environment(tmp_path, monkeypatch, capsys):
    (tmp_path / "lin.json").write_text(
        json.dumps({"name": "my-linear", "arity": 2, "first_index": -1, "coefficients": ["1/2", "1/1", "1/2"]}),
        encoding="utf-8",
    )
    monkeypatch.setenv("SUBDIV_CATALOG_DIR", str(tmp_path))
    monkeypatch.setattr(catalog_module, "_default", None)
    assert main(["catalog"]) == 0
    assert "my-linear" in capsys.readouterr().out
    assert main(["precision", "--scheme", "my-linear"]) == 0
    assert "degree of precision 1" in capsys.readouterr().out

"""Model-spec files, JSON reports, SVG output, and the CLI surface."""

import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from normplane import cli, gallery, modelspec, models
from normplane.errors import BadParameter


def _roundtrip(model, tmp_path, probes):
    path = tmp_path / "m.model"
    modelspec.write_model_file(model, path)
    back = modelspec.read_model_file(path)
    for v in probes:
        assert back.gauge(v) == pytest.approx(model.gauge(v), rel=1e-12)
    return back


def test_model_file_roundtrips(tmp_path):
    probes = [(0.3, 1.7), (-2.0, 0.4), (1.0, 1.0)]
    cases = [
        models.make_lp(1.5),
        models.make_lp("inf"),
        models.make_polar(sin_terms={4: 1 / 17}),
        models.make_quadrant_mix(1.5, 4.0),
        models.make_l2_l1_hybrid(),
        models.make_polygon([(1, 0), (0, 1), (-1, 0), (0, -1)]),
        models.make_spliced_arcs(2.0, -math.pi / 4),
        models.make_ellipse_pair(np.diag([1.0, 0.25]), np.diag([0.25, 1.0])),
        models.make_blend(models.make_lp(4), 1.0),
        models.make_arc_chain([models.Arc(models.Vec2(0.0, 0.0), 1.5, 0.0, 2 * math.pi)]),
    ]
    for model in cases:
        _roundtrip(model, tmp_path, probes)


def test_model_file_comments_and_errors(tmp_path):
    path = tmp_path / "x.model"
    path.write_text("# a diamond\nfamily = lp\np = 1\n")
    assert modelspec.read_model_file(path).gauge((1, 1)) == 2.0
    path.write_text("family = nosuch\n")
    with pytest.raises(BadParameter):
        modelspec.read_model_file(path)
    path.write_text("p = 2\n")
    with pytest.raises(BadParameter):
        modelspec.read_model_file(path)


def test_dual_model_file(tmp_path):
    path = tmp_path / "d.model"
    path.write_text("family = dual\nbase.family = lp\nbase.p = 4\n")
    model = modelspec.read_model_file(path)
    assert model.gauge((1, 0)) == pytest.approx(1.0, rel=1e-9)
    assert model.p == pytest.approx(4 / 3)


def test_cli_classify_deterministic(tmp_path, capsys):
    path = tmp_path / "l4.model"
    path.write_text("family = lp\np = 4\n")
    assert cli.main(["classify", str(path)]) == 0
    first = capsys.readouterr().out
    assert cli.main(["classify", str(path)]) == 0
    second = capsys.readouterr().out

    def strip_timestamp(text):
        doc = json.loads(text)
        doc.pop("generated_at")
        return json.dumps(doc, sort_keys=True)

    assert strip_timestamp(first) == strip_timestamp(second)
    doc = json.loads(first)
    assert doc["verdict"]["st"]["kind"] == "no"
    assert doc["verdict"]["st"]["missing_side"] == "outer"
    assert doc["verdict"]["umst"]["kind"] == "no"


def test_cli_curvature_and_render(tmp_path, capsys):
    path = tmp_path / "e.model"
    path.write_text("family = lp\np = 2\n")
    assert cli.main(["curvature", str(path), "--out", str(tmp_path)]) == 0
    csv_text = (tmp_path / "e_curvature.csv").read_text()
    rows = csv_text.strip().splitlines()
    assert rows[0] == "theta,kappa"
    assert all(float(r.split(",")[1]) == pytest.approx(1.0) for r in rows[1:5])
    svg = (tmp_path / "e_sphere.svg").read_text()
    ET.fromstring(svg)  # valid XML
    # sphere polyline closes exactly
    first_poly = next(l for l in svg.splitlines() if "polyline" in l and "black" in l)
    pts = first_poly.split('points="')[1].split('"')[0].split()
    assert pts[0] == pts[-1]
    capsys.readouterr()
    assert cli.main(["render", str(path), "--overlay", "discs", "--out", str(tmp_path / "e.svg")]) == 0
    ET.fromstring((tmp_path / "e.svg").read_text())
    assert cli.main(["render", str(path), "--overlay", "ellipses", "--out", str(tmp_path / "e2.svg")]) == 0
    ET.fromstring((tmp_path / "e2.svg").read_text())


def test_tangency_report_json(euclid, capsys):
    from normplane import geometry, reports, tangency

    sp = geometry.sphere_point(euclid, 0.7)
    rep = tangency.tangency_report(euclid, sp)
    text = reports.report(euclid, {"tangency": reports.tangency_dict(rep)})
    doc = json.loads(text)
    assert doc["schema"] == "normplane-report/1"
    assert doc["tangency"]["inner_disc"]["radius"] == pytest.approx(1.0, abs=1e-6)
    assert doc["tangency"]["outer_ellipse"]["coeffs"]["A"] == pytest.approx(1.0, abs=1e-6)


def test_cli_classify_pilgrim(tmp_path, capsys):
    path = tmp_path / "e.model"
    path.write_text("family = lp\np = 2\n")
    assert cli.main(["classify", str(path), "--pilgrim-grid", "16"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"]["pilgrim_dense"] == "likely_yes"


def test_cli_moduli(tmp_path, capsys):
    path = tmp_path / "e.model"
    path.write_text("family = lp\np = 2\n")
    assert cli.main(["moduli", str(path), "--eps-grid", "1.0,2.0"]) == 0
    out = capsys.readouterr().out
    rows = out.strip().splitlines()
    assert rows[0] == "eps,delta"
    assert float(rows[1].split(",")[1]) == pytest.approx(1 - math.sqrt(0.75), abs=1e-4)
    assert float(rows[2].split(",")[1]) == pytest.approx(1.0, abs=1e-4)


def test_cli_orbit(tmp_path, capsys):
    path = tmp_path / "e.model"
    path.write_text("family = lp\np = 2\n")
    assert cli.main(["orbit", str(path), "--from", "0.0", "--to", "1.0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["orbit"]["is_contractive"]
    assert doc["orbit"]["op_norm"] <= 1 + 1e-7
    path.write_text("family = quadrant_mix\np = 1.5\nq = 4\n")
    assert cli.main(["orbit", str(path), "--from", "0.0", "--to", "0.8"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["orbit"] is None
    assert doc["obstruction"]["from_outer_disc"] is False


def test_cli_build_nobst(tmp_path, capsys):
    out = tmp_path / "nb.model"
    assert cli.main(["build-nobst", "--depth", "5", "--out", str(out)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["model"]["params"]["depth"] == 5
    model = modelspec.read_model_file(out)
    assert model.params["depth"] == 5


def test_cli_reproduce_exit_codes(capsys):
    assert cli.main(["reproduce", "figure1"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_cli_bad_usage():
    with pytest.raises(SystemExit) as exc:
        cli.main(["classify"])  # missing model file
    assert exc.value.code == 2


def test_gallery_names():
    assert len(gallery.names()) >= 10
    with pytest.raises(KeyError):
        gallery.get("nope")

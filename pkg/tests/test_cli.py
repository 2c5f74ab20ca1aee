import csv
import io
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from cycloidlab.cli import RunConfig, fmt, main
from cycloidlab.errors import DomainError
from cycloidlab.svg import Figure, PX_PER_METER

SVG_NS = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fit_text(capsys):
    code, out, _ = run(capsys, "fit", "3.14159265", "2")
    assert code == 0
    a = float(out.split("a = ")[1].split()[0])
    t_b = float(out.split("t_B = ")[1].split()[0])
    assert a == pytest.approx(1.0, abs=1e-8) and t_b == pytest.approx(math.pi, abs=1e-8)


def test_fit_full_arch(capsys):
    code, out, _ = run(capsys, "fit", "6.2831853", "0", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["a"] == pytest.approx(1.0, abs=1e-7) and data["t_B"] == pytest.approx(2 * math.pi)


def test_fit_negative_b1(capsys):
    code, _, err = run(capsys, "fit", "-1", "2")
    assert code == 2 and "b1 must be positive" in err


def test_fit_csv_and_svg(capsys):
    _, out, _ = run(capsys, "fit", "3.14159265", "2", "--format", "csv", "--samples", "11")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["param", "x", "y"] and len(rows) == 12
    _, out, _ = run(capsys, "fit", "3.14159265", "2", "--format", "svg")
    assert ET.fromstring(out).tag == SVG_NS + "svg"


def test_tautochrone_table(capsys):
    starts = [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, 0.99 * math.pi]
    code, out, _ = run(capsys, "tautochrone", *map(repr, starts))
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["start_param", "descent_time"]
    times = [float(r[1]) for r in rows[1:]]
    np.testing.assert_allclose(times, math.pi / math.sqrt(9.81), rtol=1e-9)


@pytest.mark.parametrize("argv", [("tautochrone",), ("tautochrone", repr(math.pi)), ("tautochrone", "4.0")])
def test_tautochrone_bad_starts(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_tautochrone_gravity(capsys):
    code, out, _ = run(capsys, "tautochrone", "0", "--g", "4", "--format", "json")
    assert code == 0
    assert json.loads(out)[0]["descent_time"] == pytest.approx(math.pi / 2, rel=1e-9)
    code, _, _ = run(capsys, "tautochrone", "0", "--g", "-1")
    assert code == 2


def test_bernoulli_csv(capsys):
    code, out, _ = run(capsys, "bernoulli", repr(math.pi), "2", "100", "200", "400")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["N", "sup_deviation"]
    devs = [float(r[1]) for r in rows[1:]]
    assert devs[0] > devs[1] > devs[2]


def test_bernoulli_single_chord(capsys, tmp_path):
    out_path = tmp_path / "ray.svg"
    code, _, _ = run(capsys, "bernoulli", repr(math.pi), "2", "1", "--format", "svg", "--out", str(out_path))
    assert code == 0
    root = ET.parse(out_path).getroot()
    ray = [p for p in root.iter(SVG_NS + "polyline") if p.findtext(SVG_NS + "title") == "ray N=1"][0]
    assert len(ray.get("points").split()) == 2


def test_bernoulli_non_monotone(capsys):
    code, _, err = run(capsys, "bernoulli", "3", "0.5")
    assert code == 2 and "b2" in err


def test_bernoulli_json(capsys):
    code, out, _ = run(capsys, "bernoulli", repr(math.pi), "2", "200", "400", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["a"] == pytest.approx(1.0) and len(data["report"]) == 2


def test_wavefront_circle_is_concentric(capsys):
    code, out, _ = run(capsys, "wavefront", "circle", "1", "--format", "csv", "--samples", "64")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "param", "x", "y"]
    pts = np.array([[float(r[2]), float(r[3])] for r in rows[1:] if float(r[0]) == 1.0])
    np.testing.assert_allclose(np.hypot(pts[:, 0], pts[:, 1]), 2.0, rtol=1e-14)


def test_wavefront_zero_time_reproduces_input(capsys):
    _, out, _ = run(capsys, "wavefront", "parabola", "0", "--format", "csv", "--samples", "21")
    rows = [r for r in csv.reader(io.StringIO(out))][1:]
    base = [r[1:] for r in rows[:21]]
    moved = [r[1:] for r in rows[21:]]
    assert base == moved


def test_wavefront_cusp(capsys):
    code, _, err = run(capsys, "wavefront", "cusp", "0.5")
    assert code == 2 and "regular" in err


def test_wavefront_caustic(capsys):
    code, out, _ = run(capsys, "wavefront", "circle", "1", "--format", "json", "--certificates", "3")
    assert code == 0 and not any(c["certified"] for c in json.loads(out)["certificates"])
    code, _, _ = run(capsys, "wavefront", "circle", "1", "--strict")
    assert code == 3


def test_wavefront_certificates_pass(capsys):
    code, out, _ = run(capsys, "wavefront", "parabola", "0.2", "-0.5", "--format", "json")
    certs = json.loads(out)["certificates"]
    assert code == 0 and len(certs) == 18 and all(c["certified"] for c in certs)


def test_wavefront_reads_csv_front(capsys, tmp_path):
    from cycloidlab.curves import circle_curve, write_csv

    path = tmp_path / "front.csv"
    write_csv(circle_curve(1.0, samples=400, clockwise=True), path)
    code, out, _ = run(capsys, "wavefront", str(path), "0.5", "--format", "csv")
    assert code == 0
    pts = np.array([[float(r[2]), float(r[3])] for r in csv.reader(io.StringIO(out)) if r[0] == "0.5"])
    np.testing.assert_allclose(np.hypot(pts[:, 0], pts[:, 1]), 1.5, atol=1e-3)


def test_wavefront_unknown_front(capsys):
    code, _, _ = run(capsys, "wavefront", "no-such-front.csv", "1")
    assert code == 2


def test_wavefront_svg(capsys):
    code, out, _ = run(capsys, "wavefront", "parabola", "0.2", "--certificates", "3")
    root = ET.fromstring(out)
    assert code == 0
    assert len(list(root.iter(SVG_NS + "polyline"))) == 2
    assert len(list(root.iter(SVG_NS + "circle"))) == 6


def test_optics_refract(capsys):
    code, out, _ = run(capsys, "optics", "refract", "30", "1", "1.5")
    assert code == 0 and json.loads(out)["alpha2_deg"] == pytest.approx(48.5904, abs=5e-5)


def test_optics_refract_tir(capsys):
    code, _, err = run(capsys, "optics", "refract", "30", "1", "3")
    assert code == 3 and "total internal reflection" in err


def test_optics_reflect_midpoint(capsys):
    code, out, _ = run(capsys, "optics", "reflect", "--", "-1", "1", "1", "1")
    data = json.loads(out)
    assert code == 0 and data["P"] == [0.0, 0.0]
    assert data["path_length"] == pytest.approx(data["unfolded_length"])


def test_optics_fermat(capsys):
    code, out, _ = run(capsys, "optics", "fermat", "0", "1", "1", "-1", "1", "2")
    data = json.loads(out)
    assert code == 0 and data["samples_checked"] == 1000 and data["max_violation"] < 0


def test_optics_huygens(capsys):
    _, out, _ = run(capsys, "optics", "huygens", "30", "1", "1.5")
    data = json.loads(out)
    assert data["huygens_deg"] == pytest.approx(data["snell_deg"], abs=1e-9)
    _, out, _ = run(capsys, "optics", "huygens-reflect", "25", "2")
    assert json.loads(out)["reflected_deg"] == pytest.approx(25.0)


def test_optics_rejects_svg(capsys):
    code, _, _ = run(capsys, "optics", "refract", "30", "1", "1.5", "--format", "svg")
    assert code == 2


def test_run_config_validation():
    with pytest.raises(DomainError):
        RunConfig(samples=1)
    with pytest.raises(DomainError):
        RunConfig(g=0.0)


def test_human_numbers_use_nine_digits():
    assert fmt(math.pi) == "3.14159265"
    assert fmt(1.0030333403553238) == "1.00303334"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cycloidlab", "fit", "--", "-1", "2"], capture_output=True, text=True)
    assert res.returncode == 2 and "b1 must be positive" in res.stderr


# --- svg ---------------------------------------------------------------------------------

def test_svg_scale_and_margin():
    fig = Figure(y_up=True)
    fig.polyline([[0.0, 0.0], [2.0, 1.0]])
    x, y, w, h = fig.viewbox()
    assert w == pytest.approx(2.0 * PX_PER_METER * 1.1)
    assert h == pytest.approx(1.0 * PX_PER_METER * 1.1)
    assert x == pytest.approx(-0.05 * 200) and y == pytest.approx(-100 - 0.05 * 100)
    root = ET.fromstring(fig.to_string())
    assert root.get("viewBox").split() == [fmt(v) for v in (x, y, w, h)]
    assert "href" not in fig.to_string()


def test_svg_circle_extent():
    fig = Figure(y_up=False)
    fig.circle((1.0, 1.0), 0.5)
    x, y, w, h = fig.viewbox()
    assert w == pytest.approx(110.0) and x == pytest.approx(50.0 - 5.0)

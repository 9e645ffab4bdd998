import io
import json
import math
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest
from hypothesis import given

from aconvex import cli, fileio
from aconvex.errors import InternalInconsistency, NotSimple, ParseError
from aconvex.geom_core import rot
from aconvex.render import render_svg
from conftest import polygons

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run_command([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines())


def test_parse_document_example():
    doc = fileio.parse_document('{"name": "tri", "vertices": [[0, 0], [1, 0], [0, 1]]}')
    assert doc.name == "tri"
    assert [v.as_tuple() for v in doc.polygon.vertices] == [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]


def test_parse_reverses_clockwise_and_drops_closing_vertex():
    k = fileio.parse_polygon('{"vertices": [[0, 0], [0, 1], [1, 1], [1, 0], [0, 0]]}')
    assert len(k) == 4
    assert rot(k.boundary) == pytest.approx(2 * math.pi)


def test_two_vertices_is_a_parse_error():
    with pytest.raises(ParseError) as info:
        fileio.parse_polygon('{\n  "vertices": [[0, 0], [1, 0]]\n}')
    assert (info.value.line, info.value.column) == (2, 3)


def test_json_syntax_error_has_position():
    with pytest.raises(ParseError) as info:
        fileio.parse_polygon('{"vertices": [[0, 0],\n [1, 0] [0, 1]]}')
    assert info.value.line == 2


@pytest.mark.parametrize("text", [
    '[1, 2, 3]',
    '{"name": 5, "vertices": [[0, 0], [1, 0], [0, 1]]}',
    '{"vertices": [[0, 0], [1, 0], [0, "a"]]}',
    '{"vertices": [[0, 0], [1, 0], [0, 1, 2]]}',
    '{"vertices": [[0, 0], [1, 0], [true, 1]]}',
    '{"name": "x"}',
])
def test_malformed_documents(text):
    with pytest.raises(ParseError):
        fileio.parse_polygon(text)


def test_self_intersecting_document_is_geometry_error():
    with pytest.raises(NotSimple):
        fileio.parse_polygon('{"vertices": [[0, 0], [1, 1], [1, 0], [0, 1]]}')


@given(polygons)
def test_serialize_round_trip(k):
    back = fileio.parse_document(fileio.serialize_polygon(k, "p"))
    assert back.name == "p"
    assert back.polygon.vertices == k.vertices


def test_load_defaults_name_to_stem(tmp_path):
    f = tmp_path / "thing.json"
    f.write_text('{"vertices": [[0, 0], [1, 0], [0, 1]]}')
    assert fileio.load(f).name == "thing"
    with pytest.raises(ParseError):
        fileio.load(tmp_path / "missing.json")


def test_cli_aco():
    code, out, _ = run("aco", DATA / "lshape.json")
    assert code == 0
    r = kv(out)
    assert r["name"] == "lshape" and r["convex"] == "false"
    assert float(r["aco"]) == pytest.approx(-math.pi / 2, abs=1e-11)
    assert (r["witness_start"], r["witness_end"]) == ("2", "3")


def test_cli_degrees():
    _, out, _ = run("--degrees", "aco", DATA / "lshape.json")
    assert kv(out)["aco"] == "-90"


def test_cli_batch(tmp_path):
    listing = tmp_path / "list.txt"
    listing.write_text("\n".join(str(DATA / f) for f in ("square.json", "lshape.json", "staircase.json")))
    code, out, _ = run("aco", "--batch", listing)
    assert code == 0
    assert [ln.split("=")[1] for ln in out.splitlines() if ln.startswith("name=")] == ["square", "lshape", "staircase"]


def test_cli_certify():
    code, out, _ = run("certify", DATA / "lshape.json", DATA / "square.json")
    assert code == 0
    r = kv(out)
    assert r["certified"] == "true"
    assert float(r["bound"]) == pytest.approx(-math.pi / 2, abs=1e-11)


def test_cli_sum_writes_polygon(tmp_path):
    dest = tmp_path / "s.json"
    code, out, _ = run("sum", DATA / "square.json", DATA / "square.json", "-o", dest)
    assert code == 0 and kv(out)["vertices"] == "4"
    doc = fileio.load(dest)
    assert doc.name == "square+square"
    assert sorted(v.as_tuple() for v in doc.polygon.vertices) == [(0, 0), (0, 2), (2, 0), (2, 2)]


def test_cli_sum_cycle_method():
    code, out, _ = run("sum", DATA / "lshape.json", DATA / "small_square.json", "--method", "cycle")
    assert code == 0
    r = kv(out)
    assert r["method"] == "cycle" and "loops_removed" in r


def test_cli_sum_rejects_uncertified():
    code, out, err = run("sum", DATA / "ushape.json", DATA / "square.json")
    assert code == 2 and out == ""
    assert err.startswith("error=AcoPreconditionViolated ") and err.count("\n") == 1


def test_cli_member():
    assert kv(run("member", DATA / "square.json", DATA / "square.json", 1.5, 1.5)[1])["member"] == "true"
    assert kv(run("member", DATA / "square.json", DATA / "square.json", 2.5, 0)[1])["member"] == "false"


def test_cli_separate():
    code, out, _ = run("separate", DATA / "square.json", 2, 2)
    assert code == 0
    r = kv(out)
    assert float(r["measure"]) == pytest.approx(math.pi)
    code, _, err = run("separate", DATA / "square.json", 0.5, 0.5)
    assert code == 2 and err.startswith("error=PointInsidePolygon")


def test_cli_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "vertices": [[0, 0], [1, 0]]\n}')
    code, _, err = run("aco", bad)
    assert code == 3
    assert err.startswith("error=ParseError line=2 column=3 message=")
    assert run("aco")[0] == 3
    assert run("frobnicate")[0] == 3
    assert run("member", DATA / "square.json", DATA / "square.json", "x", "1")[0] == 3


def test_cli_internal_errors_exit_4(monkeypatch):
    def broken(*_):
        raise InternalInconsistency("outer walk did not close")

    monkeypatch.setattr(cli, "minkowski_sum", broken)
    code, _, err = run("sum", DATA / "square.json", DATA / "square.json")
    assert code == 4 and err.startswith("error=InternalInconsistency")


def test_cli_seed_from_environment(monkeypatch):
    seen = []
    real = cli.cycle_sum

    def spy(k, l, seed=0):
        seen.append(seed)
        return real(k, l, seed=seed)

    monkeypatch.setattr(cli, "cycle_sum", spy)
    monkeypatch.setenv(cli.SEED_ENV, "17")
    run("sum", DATA / "square.json", DATA / "square.json", "--method", "cycle")
    run("--seed", "5", "sum", DATA / "square.json", DATA / "square.json", "--method", "cycle")
    assert seen == [17, 5]
    monkeypatch.setenv(cli.SEED_ENV, "abc")
    assert run("aco", DATA / "square.json")[0] == 3


def test_cli_output_is_deterministic():
    argv = ("sum", DATA / "lshape.json", DATA / "staircase.json")
    assert run(*argv) == run(*argv)


def test_cli_render_svg(tmp_path):
    dest = tmp_path / "fig.svg"
    code, out, _ = run("render", DATA / "lshape.json", DATA / "square.json", "-o", dest, "--point", 3, 3)
    assert code == 0 and kv(out)["written"] == str(dest)
    root = ET.fromstring(dest.read_text())
    assert root.tag.endswith("svg")
    assert len(root.findall(".//{http://www.w3.org/2000/svg}polygon")) >= 2
    code, _, _ = run("render", DATA / "square.json", "-o", tmp_path / "plain.svg", "--no-slopes")
    assert code == 0
    ET.fromstring((tmp_path / "plain.svg").read_text())


def test_render_without_regions_is_valid_xml():
    k = fileio.parse_polygon(json.dumps({"vertices": [[0, 0], [1, 0], [0, 1]]}))
    root = ET.fromstring(render_svg([("t", k)]))
    assert root.tag.endswith("svg")

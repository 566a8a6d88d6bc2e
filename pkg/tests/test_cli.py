import json

import pytest

from arrfan.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def a2_file(tmp_path, capsys):
    path = str(tmp_path / "a2.json")
    code, _ = run(capsys, "catalog", "A_2", "--out", path)
    assert code == 0
    return path


def test_verify_exit_codes(tmp_path, capsys, a2_file):
    code, out = run(capsys, "verify", a2_file)
    assert code == 0
    report = json.loads(out)
    assert report["verdicts"] == {"crystallographic": True, "simplicial": True}

    bad = write(tmp_path, "bad.json", {"rank": 2, "positive_covectors": [[1, 0], [0, 1], [2, 1]]})
    code, out = run(capsys, "verify", bad)
    assert code == 10
    report = json.loads(out)
    assert report["verdicts"]["crystallographic"] is False
    assert "1/2" in report["witnesses"]["coordinates"]

    nonsimp = write(
        tmp_path,
        "ns.json",
        {"rank": 3, "positive_covectors": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 2, 3]]},
    )
    code, out = run(capsys, "verify", nonsimp)
    assert code == 11

    broken = tmp_path / "broken.json"
    broken.write_text("{nope")
    code, _ = run(capsys, "verify", str(broken))
    assert code == 2


def test_fan_roots_pipe_closure(tmp_path, capsys, a2_file):
    fan_path = str(tmp_path / "fan.json")
    code, out = run(capsys, "fan", a2_file, "--out", fan_path)
    assert code == 0
    report = json.loads(out)
    assert report["verdicts"]["rays"] == 6
    assert report["verdicts"]["strongly_symmetric"] is True

    back_path = str(tmp_path / "back.json")
    code, _ = run(capsys, "roots", fan_path, "--out", back_path)
    assert code == 0
    with open(a2_file, "rb") as f1, open(back_path, "rb") as f2:
        assert f1.read() == f2.read()


def test_determinism(tmp_path, capsys, a2_file):
    fan_path = str(tmp_path / "fan.json")
    outs = []
    for _ in range(2):
        code, out = run(capsys, "fan", a2_file, "--out", fan_path)
        assert code == 0
        with open(fan_path) as fh:
            outs.append((out, fh.read()))
    assert outs[0] == outs[1]


def test_star_and_bad_cone(tmp_path, capsys, a2_file):
    fan_path = str(tmp_path / "fan.json")
    run(capsys, "fan", a2_file, "--out", fan_path)
    code, out = run(capsys, "star", fan_path, "--cone", "0")
    assert code == 0
    assert json.loads(out)["verdicts"]["rank"] == 1
    code, _ = run(capsys, "star", fan_path, "--cone", "0,5")
    assert code == 3


def test_surface_commands(tmp_path, capsys, a2_file):
    fan_path = str(tmp_path / "fan.json")
    run(capsys, "fan", a2_file, "--out", fan_path)

    code, out = run(capsys, "surface", "graph", fan_path)
    assert code == 0
    assert json.loads(out)["verdicts"]["weights"] == [-1] * 6

    code, out = run(capsys, "surface", "triangulations", "--count", "6")
    assert code == 0
    report = json.loads(out)
    assert report["verdicts"]["count"] == 14
    assert len(report["witnesses"]["items"]) == 14
    assert all("weights" in item and "diagonals" in item for item in report["witnesses"]["items"])

    code, out = run(capsys, "surface", "divisor", fan_path)
    assert code == 0
    verdict = json.loads(out)["verdicts"]
    assert verdict["formula"] == "Y1 ~ D2 + D3, Y1^2 = 0"

    code, out = run(capsys, "surface", "picard", fan_path)
    assert code == 0
    assert json.loads(out)["verdicts"] == {"picard_rank": 4, "verified": True}

    quad = write(tmp_path, "quad.json", {"weights": [0, 0, 0, 0]})
    code, _ = run(capsys, "surface", "divisor", quad)
    assert code == 10

    out_fan = str(tmp_path / "quadfan.json")
    code, _ = run(capsys, "surface", "from-weights", quad, "--out", out_fan)
    assert code == 0
    assert len(json.loads(open(out_fan).read())["rays"]) == 4

    sym_out = str(tmp_path / "sym.json")
    code, _ = run(capsys, "surface", "symmetrize", fan_path, "--out", sym_out)
    assert code == 0
    code, _ = run(capsys, "surface", "desingularize", sym_out, "--out", str(tmp_path / "d.json"))
    assert code == 0

    bad_weights = write(tmp_path, "badw.json", {"weights": [-1, -1, -1]})
    code, _ = run(capsys, "surface", "graph", bad_weights)
    assert code == 10

    rank3 = write(
        tmp_path, "c3.json", {"rank": 3, "positive_covectors": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}
    )
    code, _ = run(capsys, "surface", "graph", rank3)
    assert code == 4


def test_insert_and_embed(tmp_path, capsys, a2_file):
    out_path = str(tmp_path / "b2fan.json")
    code, out = run(capsys, "insert", a2_file, "--hyperplane", "1,2", "--out", out_path)
    assert code == 0
    report = json.loads(out)
    assert report["verdicts"]["splits"] == 2
    new_rays = {tuple(s["new_ray"]) for s in report["witnesses"]["splits"]}
    assert new_rays == {(2, -1), (-2, 1)}

    code, _ = run(capsys, "insert", a2_file, "--hyperplane", "1,1")
    assert code == 3

    b2 = write(
        tmp_path, "b2.json",
        {"rank": 2, "positive_covectors": [[0, 1], [1, 0], [1, 1], [1, 2]]},
    )
    code, out = run(capsys, "embed", b2)
    assert code == 0
    assert json.loads(out)["verdicts"]["invariant_factors"] == [1, 1]


def test_plot(tmp_path, capsys, a2_file):
    fan_path = str(tmp_path / "fan.json")
    run(capsys, "fan", a2_file, "--out", fan_path)
    svg_path = str(tmp_path / "a2.svg")
    code, _ = run(capsys, "plot", fan_path, "--out", svg_path)
    assert code == 0
    svg = open(svg_path).read()
    assert svg.count('class="ray"') == 6

    a3 = write(
        tmp_path, "a3.json", json.loads(open(a2_file).read()) | {}
    )
    code, _ = run(capsys, "catalog", "A_3", "--out", a3)
    svg3 = str(tmp_path / "a3.svg")
    code, _ = run(capsys, "plot", a3, "--out", svg3)
    assert code == 0
    assert open(svg3).read().count('class="hyperplane"') == 6

    a4 = str(tmp_path / "a4.json")
    run(capsys, "catalog", "A_4", "--out", a4)
    code, _ = run(capsys, "plot", a4)
    assert code == 4

    # byte-identical SVG across runs
    again = str(tmp_path / "again.svg")
    run(capsys, "plot", fan_path, "--out", again)
    assert open(again, "rb").read() == open(svg_path, "rb").read()


def test_polytope_poset_parabolic_autos_decompose(tmp_path, capsys, a2_file):
    code, out = run(capsys, "polytope", a2_file, "--out", str(tmp_path / "p.json"))
    assert code == 0
    assert json.loads(out)["verdicts"] == {"normal_fan_verified": True, "vertices": 6}

    code, out = run(capsys, "poset", a2_file)
    assert code == 0
    assert json.loads(out)["verdicts"] == {"covers": 6, "flats": 5}

    code, out = run(capsys, "parabolic", a2_file, "--cone", "0")
    assert code == 0
    assert json.loads(out)["verdicts"]["rank"] == 1

    fan_path = str(tmp_path / "fan.json")
    run(capsys, "fan", a2_file, "--out", fan_path)
    code, out = run(capsys, "autos", fan_path)
    assert code == 0
    assert json.loads(out)["verdicts"]["order"] == 12

    code, out = run(capsys, "decompose", a2_file)
    assert code == 0
    assert json.loads(out)["verdicts"]["factors"] == 1


def test_restrict_command(tmp_path, capsys):
    b2 = write(
        tmp_path, "b2.json",
        {"rank": 2, "positive_covectors": [[0, 1], [1, 0], [1, 1], [1, 2]]},
    )
    code, out = run(capsys, "restrict", b2, "--subspace", "[[1,0]]")
    assert code == 0
    assert json.loads(out)["verdicts"]["rank"] == 1
    code, _ = run(capsys, "restrict", b2, "--subspace", "[[1,3]]")
    assert code == 3


def test_catalog_sporadic_dir(tmp_path, capsys):
    # user-supplied arrangements resolve by file name after the built-ins
    custom = {"rank": 2, "positive_covectors": [[0, 1], [1, 0], [1, 1]]}
    (tmp_path / "myarr.json").write_text(json.dumps(custom))
    out_path = str(tmp_path / "out.json")
    code, _ = run(
        capsys, "catalog", "myarr", "--sporadic-dir", str(tmp_path), "--out", out_path
    )
    assert code == 0
    assert json.loads(open(out_path).read())["positive_covectors"] == [[0, 1], [1, 0], [1, 1]]
    code, _ = run(capsys, "catalog", "nothere", "--sporadic-dir", str(tmp_path))
    assert code == 3

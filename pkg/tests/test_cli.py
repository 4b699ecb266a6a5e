import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from isoperim.cli import main

RECT4 = {"name": "R4", "vertices": [[0, 0], [4, 0], [4, 2], [0, 2]]}
BOWTIE = {"vertices": [[0, 0], [1, 1], [1, 0], [0, 1]]}
DUMBBELL_ARGS = (2.0, 0.2, 0.5)


@pytest.fixture()
def rect_json(tmp_path):
    p = tmp_path / "rect4.json"
    p.write_text(json.dumps(RECT4))
    return str(p)


@pytest.fixture()
def dumbbell_json(tmp_path):
    from isoperim import shapes
    from isoperim.domain import domain_to_json

    p = tmp_path / "dumbbell.json"
    p.write_text(domain_to_json(shapes.make_dumbbell(*DUMBBELL_ARGS)))
    return str(p)


def test_validate(rect_json, tmp_path, capsys):
    dump = tmp_path / "field.isof"
    rc = main(["validate", rect_json, "--h", "0.02", "--dump-field", str(dump)])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["area"] == 8.0
    assert doc["perimeter"] == 12.0
    assert doc["inradius"] == pytest.approx(1.0, abs=0.02)
    assert dump.exists()
    from isoperim import read_isof

    grid, values = read_isof(dump)
    assert grid.nx * grid.ny == doc["cells"]


def test_validate_rejects_bowtie(tmp_path, capsys):
    p = tmp_path / "bowtie.json"
    p.write_text(json.dumps(BOWTIE))
    rc = main(["validate", str(p)])
    assert rc == 2
    err = capsys.readouterr().err
    assert "isoperim-error code=2 kind=invalid-input" in err
    assert err.count("\n") == 1


def test_validate_missing_file(capsys):
    assert main(["validate", "/nonexistent/file.json"]) == 2


def test_budget_exit_code(rect_json, capsys):
    rc = main(["validate", rect_json, "--h", "0.00001"])
    assert rc == 4
    assert "kind=budget-exceeded" in capsys.readouterr().err


def test_profile_csv_and_svg(rect_json, tmp_path):
    out = tmp_path / "prof.csv"
    svg = tmp_path / "prof.svg"
    rc = main(
        ["profile", rect_json, "--h", "0.02", "--kappa-samples", "32",
         "--v-samples", "64", "--out", str(out), "--svg", str(svg)]
    )
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "V,J,kappa,segment_kind"
    assert len(lines) in (64, 65)  # last rows beyond the covered range drop
    from isoperim import shapes

    last = lines[-1].split(",")
    ref = shapes.rectangle_profile(4.0, float(last[0]))
    assert float(last[1]) == pytest.approx(ref, rel=0.01)
    root = ET.fromstring(svg.read_text())
    assert root.tag.endswith("svg")


def test_profile_byte_determinism(rect_json, tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.csv"
        svg = tmp_path / f"{name}.svg"
        rc = main(
            ["profile", rect_json, "--h", "0.02", "--kappa-samples", "24",
             "--v-samples", "48", "--out", str(out), "--svg", str(svg)]
        )
        assert rc == 0
        outs.append((out.read_bytes(), svg.read_bytes()))
    assert outs[0] == outs[1]


def test_cheeger_command(rect_json, tmp_path, capsys):
    svg = tmp_path / "cheeger.svg"
    rc = main(
        ["cheeger", rect_json, "--h", "0.02", "--kappa-samples", "32",
         "--v-samples", "128", "--svg", str(svg)]
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    closed = 1.4246861060039412
    assert doc["h_by_inner_formula"] == pytest.approx(closed, rel=0.005)
    assert doc["h_by_profile"] == pytest.approx(closed, rel=0.005)
    assert doc["root_radius"] * doc["h_by_inner_formula"] == pytest.approx(1.0)
    assert svg.exists()
    assert doc["contour"]


@pytest.mark.parametrize("volume", [4.0, 5.5, 7.5])
def test_minimizer_volume_readback(rect_json, tmp_path, volume):
    out = tmp_path / "min.json"
    rc = main(
        ["minimizer", rect_json, "--h", "0.01", "--kappa-samples", "64",
         "--v-samples", "256", "--volume", str(volume), "--out", str(out)]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["volume"] == pytest.approx(volume, rel=0.01)
    assert doc["pass_rate"] >= 0.99


def test_minimizer_by_kappa(rect_json, tmp_path):
    out = tmp_path / "min.json"
    rc = main(
        ["minimizer", rect_json, "--h", "0.02", "--kappa-samples", "24",
         "--v-samples", "48", "--kappa", "2.0", "--out", str(out)]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["volume"] == pytest.approx(7.0 + math.pi / 4.0, rel=0.01)
    assert doc["contour"]


def test_minimizer_rejects_low_kappa(rect_json, capsys):
    rc = main(
        ["minimizer", rect_json, "--h", "0.02", "--kappa-samples", "24",
         "--v-samples", "48", "--kappa", "0.5"]
    )
    assert rc == 2


def test_minimizer_rejects_ball_volume(rect_json):
    rc = main(
        ["minimizer", rect_json, "--h", "0.02", "--kappa-samples", "24",
         "--v-samples", "48", "--volume", "1.0"]
    )
    assert rc == 2


def test_minimizer_neck_exit_code(dumbbell_json, capsys):
    rc = main(
        ["minimizer", dumbbell_json, "--h", "0.02", "--kappa-samples", "24",
         "--v-samples", "48", "--kappa", str(1.0 / 0.5)]
    )
    assert rc == 3
    assert "kind=neck-violation" in capsys.readouterr().err


def test_noneck_dumbbell(dumbbell_json, capsys):
    rc = main(["noneck", dumbbell_json, "--h", "0.02", "--kappa-samples", "24"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["any_disconnected"]
    assert max(row["components"] for row in doc["samples"]) == 2
    assert all(
        row["components"] == 1 for row in doc["samples"] if row["r"] < 0.09
    )


def test_noneck_rectangle_connected(rect_json, capsys):
    rc = main(["noneck", rect_json, "--h", "0.02", "--kappa-samples", "24"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert not doc["any_disconnected"]
    assert all(row["components"] == 1 for row in doc["samples"])


def test_reference_matches_oracle(capsys):
    rc = main(["reference", "--shape", "cross", "--L", "4", "--v-samples", "16"])
    assert rc == 0
    from isoperim import shapes

    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "V,J,kappa,segment_kind"
    for row in lines[1:]:
        v, j, k, kind = row.split(",")
        assert float(j) == pytest.approx(shapes.cross_profile(4.0, float(v)), abs=1e-12)


def test_profile_independent_of_thread_count(rect_json, tmp_path):
    pytest.importorskip("numba")
    import numba

    prev = numba.get_num_threads()
    outs = []
    try:
        for name, threads in (("t1", 1), ("t2", min(2, numba.config.NUMBA_NUM_THREADS))):
            numba.set_num_threads(threads)
            out = tmp_path / f"{name}.csv"
            rc = main(
                ["profile", rect_json, "--h", "0.02", "--kappa-samples", "24",
                 "--v-samples", "48", "--out", str(out)]
            )
            assert rc == 0
            outs.append(out.read_bytes())
    finally:
        numba.set_num_threads(prev)
    assert outs[0] == outs[1]


def test_numpy_backend_via_env(rect_json, tmp_path):
    import os
    import subprocess
    import sys

    out = tmp_path / "np.json"
    env = dict(os.environ, ISO_BACKEND="numpy")
    proc = subprocess.run(
        [sys.executable, "-m", "isoperim.cli", "validate", rect_json,
         "--h", "0.1", "--out", str(out)],
        env=env,
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(out.read_text())
    assert doc["area"] == 8.0
    assert doc["inradius"] == pytest.approx(1.0, abs=0.1)


def test_compare_rectangle(rect_json, capsys):
    rc = main(
        ["compare", rect_json, "--h", "0.02", "--kappa-samples", "48",
         "--v-samples", "128", "--oracle", "rectangle", "--L", "4"]
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["max_rel_err"] <= 0.01
    assert doc["mean_rel_err"] <= doc["max_rel_err"]

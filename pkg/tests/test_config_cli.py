import json
import math

import numpy as np
import pytest

from amalgam.cli import main
from amalgam.config import dump_config, flatten, parse_config_text, parse_value
from amalgam.grid import GridSpec
from amalgam.serialize import read_field, write_field


def test_parse_scalars():
    assert parse_value("3") == 3
    assert parse_value("0.5") == 0.5
    assert parse_value("inf") == math.inf
    assert parse_value("3/2") == 1.5
    assert parse_value("true") is True
    assert parse_value("hello") == "hello"
    assert parse_value("1,2,inf") == [1, 2, math.inf]


def test_parse_tree_and_dump_round_trip():
    text = """
    # a comment
    mode = picard
    solver.T = 0.25     # trailing comment
    solver.n_steps = 8
    grid.d = 3
    """
    tree = parse_config_text(text)
    assert tree["mode"] == "picard"
    assert tree["solver"]["T"] == 0.25
    assert tree["grid"]["d"] == 3
    again = parse_config_text(dump_config(tree))
    assert again == tree
    assert flatten(tree)["solver.n_steps"] == 8


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_config_text("just a line without equals")


def test_field_round_trip(tmp_path):
    spec = GridSpec((3, 2), 4, (-1, 0))
    rng = np.random.default_rng(1)
    from amalgam.grid import GridField

    f = GridField(spec, rng.standard_normal((2,) + spec.cells))
    path = tmp_path / "f.fld"
    write_field(path, f)
    g = read_field(path)
    assert g.spec == spec
    assert np.array_equal(g.samples, f.samples)


def test_field_format_rejects_garbage(tmp_path):
    path = tmp_path / "bad.fld"
    path.write_bytes(b"NOPE" + b"\x00" * 64)
    with pytest.raises(Exception):
        read_field(path)


def test_field_format_rejects_misaligned_spacing(tmp_path):
    import struct

    from amalgam.grid import AlignmentError

    path = tmp_path / "misaligned.fld"
    # well-formed header except h = 0.3, which is not 1/integer
    blob = struct.pack("<4sIII", b"AMLG", 1, 1, 1)
    blob += struct.pack("<I", 4) + struct.pack("<d", 0.3) + struct.pack("<q", 0)
    blob += np.zeros(4).tobytes()
    path.write_bytes(blob)
    with pytest.raises(AlignmentError):
        read_field(path)


def test_cli_norm_and_generate(tmp_path, capsys):
    out = tmp_path / "g.fld"
    assert main(["generate", "gaussian-bump", "--out", str(out), "--set", "sigma=0.3"]) == 0
    assert main(["norm", "--field", str(out), "--p", "2", "--q", "2"]) == 0
    text = capsys.readouterr().out
    assert "E^2_2" in text


def test_cli_evolve(tmp_path):
    fld = tmp_path / "g.fld"
    main(["generate", "gaussian-bump", "--out", str(fld)])
    rc = main(["evolve", "--field", str(fld), "--t", "0.01,0.04,0.16", "--out-dir", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "evolve_norms.csv").exists()
    assert (tmp_path / "evolve_norms.svg").exists()


def test_cli_verify_exit_codes(tmp_path):
    assert main(["verify", "switch-a", "--out-dir", str(tmp_path)]) == 0
    assert main(["verify", "region-three-jump", "--out-dir", str(tmp_path)]) == 2
    assert main(["verify", "no-such-scenario", "--out-dir", str(tmp_path)]) == 3
    assert (tmp_path / "switch-a.json").exists()


def test_cli_catalog(capsys):
    assert main(["catalog", "-v"]) == 0
    text = capsys.readouterr().out
    assert "decay-oseen-d3" in text
    assert "checks:" in text


def test_cli_solve(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "\n".join(
            [
                "mode = picard",
                "grid.d = 3",
                "grid.side = 2",
                "grid.per_unit = 8",
                "data.kind = divfree-random",
                "data.seed = 1",
                "data.amplitude = 0.05",
                "data.norm_p = 6",
                "data.norm_q = 2",
                "solver.regime = SUBCRITICAL",
                "solver.r = 6",
                "solver.q = 2",
                "solver.T = 0.25",
                "solver.n_steps = 6",
            ]
        )
    )
    rc = main(["solve", "--config", str(cfg), "--out-dir", str(tmp_path)])
    assert rc == 0
    with open(tmp_path / "solve_report.json") as fh:
        report = json.load(fh)
    assert report["trace"]["converged"] is True
    assert report["trace"]["final_residual"] < 1e-8

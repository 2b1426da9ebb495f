import numpy as np
import pytest

from anisoflow import ConvexityLost
from anisoflow.cli import main

WULFF_STATIONARY = """
[anisotropy]
a0 = 1.0
h2 = 0.2

[initial]
a0 = 1.0
h2 = 0.2

[flow]
n = 64
t_end = 1.0

[output]
figures = false
"""

SMALL_RUN = """
[anisotropy]
a0 = 1.0

[initial]
a0 = 1.0
h2 = 0.3

[flow]
n = 64
t_end = 0.05
record_every = 100

[output]
figures = false
"""


def write_cfg(tmp_path, text, extra=""):
    cfg = tmp_path / "run.ini"
    cfg.write_text(text + extra)
    return cfg


def test_run_stationary_wulff(tmp_path, capsys):
    cfg = write_cfg(tmp_path, WULFF_STATIONARY)
    code = main(["run", str(cfg), "--override", f"output.dir={tmp_path / 'out'}"])
    out = capsys.readouterr().out
    assert code == 0
    assert "k_dev=" in out
    assert "deficit=" in out
    assert "elapsed" in out
    assert (tmp_path / "out" / "timeseries.csv").exists()
    svgs = list((tmp_path / "out").glob("snapshot_*.svg"))
    assert svgs


def test_run_writes_figures(tmp_path):
    cfg = write_cfg(tmp_path, WULFF_STATIONARY)
    code = main(["run", str(cfg),
                 "--override", f"output.dir={tmp_path / 'fig'}",
                 "--override", "output.figures=true"])
    assert code == 0
    for name in ("shapes.png", "deficit.png", "conservation.png", "curvature.png"):
        f = tmp_path / "fig" / name
        assert f.exists()
        assert f.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_run_asymmetric_exits_1(tmp_path, capsys):
    cfg = write_cfg(tmp_path, WULFF_STATIONARY.replace("h2 = 0.2", "h1 = 0.1", 1))
    code = main(["run", str(cfg)])
    err = capsys.readouterr().err
    assert code == 1
    assert "AsymmetricAnisotropy" in err


def test_run_nonconvex_initial_exits_1(tmp_path, capsys):
    cfg = write_cfg(tmp_path, SMALL_RUN.replace("h2 = 0.3", "h4 = 0.1"))
    code = main(["run", str(cfg)])
    err = capsys.readouterr().err
    assert code == 1
    assert "ConvexityLost" in err


def test_run_missing_config_exits_1(tmp_path, capsys):
    code = main(["run", str(tmp_path / "nope.ini")])
    assert code == 1
    assert "ParseError" in capsys.readouterr().err


def test_runtime_failure_exits_2(tmp_path, capsys, monkeypatch):
    import anisoflow.cli as cli_mod

    def boom(*args, **kwargs):
        raise ConvexityLost("min(p + p'') = -1 at t = 0.5")

    monkeypatch.setattr(cli_mod, "run_flow", boom)
    cfg = write_cfg(tmp_path, SMALL_RUN)
    code = main(["run", str(cfg), "--override", f"output.dir={tmp_path / 'o'}"])
    assert code == 2
    assert "ConvexityLost" in capsys.readouterr().err


def test_determinism_byte_identical_csv(tmp_path):
    cfg = write_cfg(tmp_path, SMALL_RUN)
    for d in ("a", "b"):
        assert main(["run", str(cfg),
                     "--override", f"output.dir={tmp_path / d}"]) == 0
    a = (tmp_path / "a" / "timeseries.csv").read_bytes()
    b = (tmp_path / "b" / "timeseries.csv").read_bytes()
    assert a == b


def test_wulff_command(tmp_path, capsys):
    cfg = write_cfg(tmp_path, WULFF_STATIONARY)
    code = main(["wulff", str(cfg), "--override", f"output.dir={tmp_path / 'w'}"])
    out = capsys.readouterr().out
    assert code == 0
    assert "area=" in out
    csv = (tmp_path / "w" / "wulff.csv").read_text().strip().split("\n")
    assert csv[0] == "theta,x,y,ptilde,phi"
    assert len(csv) == 65
    assert (tmp_path / "w" / "wulff.svg").exists()


def test_check_command(tmp_path, capsys):
    cfg = write_cfg(tmp_path, WULFF_STATIONARY)
    code = main(["check", str(cfg), "--trials", "50", "--seed", "7"])
    out = capsys.readouterr().out
    assert code == 0
    assert "violations: minkowski=0 wulff_gage=0 identity=0 bonnesen=0" in out


def test_check_seed_reproducible(tmp_path, capsys):
    cfg = write_cfg(tmp_path, WULFF_STATIONARY)
    main(["check", str(cfg), "--trials", "20", "--seed", "3"])
    first = capsys.readouterr().out
    main(["check", str(cfg), "--trials", "20", "--seed", "3"])
    second = capsys.readouterr().out
    assert first == second


def test_sweep_sequential(tmp_path, capsys):
    cfg = write_cfg(tmp_path, SMALL_RUN)
    code = main(["sweep", str(cfg),
                 "--override", f"output.dir={tmp_path / 's'}",
                 "--param", "flow.t_end", "--values", "0.01, 0.02"])
    out = capsys.readouterr().out
    assert code == 0
    assert (tmp_path / "s" / "t_end=0.01" / "timeseries.csv").exists()
    assert (tmp_path / "s" / "t_end=0.02" / "timeseries.csv").exists()
    assert "sweep flow.t_end=0.01: exit 0" in out


def test_sweep_parallel(tmp_path):
    cfg = write_cfg(tmp_path, SMALL_RUN)
    code = main(["sweep", str(cfg),
                 "--override", f"output.dir={tmp_path / 'p'}",
                 "--param", "flow.record_every", "--values", "50,100",
                 "--parallel"])
    assert code == 0
    assert (tmp_path / "p" / "record_every=50" / "timeseries.csv").exists()
    assert (tmp_path / "p" / "record_every=100" / "timeseries.csv").exists()


def test_sweep_bad_param(tmp_path, capsys):
    cfg = write_cfg(tmp_path, SMALL_RUN)
    assert main(["sweep", str(cfg), "--param", "nodots", "--values", "1"]) == 1
    assert "ValidationError" in capsys.readouterr().err


def test_override_validation(tmp_path, capsys):
    cfg = write_cfg(tmp_path, SMALL_RUN)
    assert main(["run", str(cfg), "--override", "bogus.key=1"]) == 1
    assert "unknown section" in capsys.readouterr().err

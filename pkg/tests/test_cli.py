import math

import pytest

from crackwake.cli import main

SYM_PAIR_CFG = """
bimaterial { mu_plus = 1, mu_minus = 1 }
loading {
  force { face = "+", x1 = -1, p = -1 }
  force { face = "-", x1 = -1, p = -1 }
}
defect { kind = microcrack, d = 1, phi = 22.5 deg, alpha = 0, la = 0.1 }
"""


@pytest.fixture
def cfg(tmp_path):
    def write(text, name="scenario.cfg"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_sif_prints_nine_digits(cfg, capsys):
    assert main(["sif", "--config", cfg(SYM_PAIR_CFG)]) == 0
    out = capsys.readouterr().out
    assert "K0 = 0.797884561" in out
    assert "A0 = -0.797884561" in out


def test_dipole_output(cfg, capsys):
    assert main(["dipole", "--config", cfg(SYM_PAIR_CFG)]) == 0
    out = capsys.readouterr().out
    assert "defect 1: microcrack" in out
    assert "M22 = -0.0314159265" in out


def test_perturb_zero_contrast_inclusion(cfg, capsys):
    text = SYM_PAIR_CFG.replace(
        "defect { kind = microcrack, d = 1, phi = 22.5 deg, alpha = 0, la = 0.1 }",
        "defect { kind = elastic_ellipse, d = 1, phi = 0.3, alpha = 0, la = 0.1, lb = 0.05, mu_star = 1 }",
    )
    assert main(["perturb", "--config", cfg(text)]) == 0
    out = capsys.readouterr().out
    assert "dK = 0 (closed)" in out
    assert "dK_total = 0" in out
    assert "phi = 0" in out


def test_perturb_shows_both_paths(cfg, capsys):
    assert main(["perturb", "--config", cfg(SYM_PAIR_CFG)]) == 0
    out = capsys.readouterr().out
    assert out.count("(closed)") == 1
    assert out.count("(quadrature)") == 1
    assert "phi = " in out


def test_map_cell_count_and_pgm(cfg, tmp_path, capsys):
    out_csv = tmp_path / "map.csv"
    code = main(["map", "--config", cfg(SYM_PAIR_CFG), "--grid", "8x4",
                 "--out", str(out_csv), "--pgm"])
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert len(lines) == 1 + 8 * 4
    pgm = (tmp_path / "map.pgm").read_text().splitlines()
    assert pgm[0] == "P2" and pgm[1] == "8 4"


def test_map_pgm_requires_out(cfg, capsys):
    assert main(["map", "--config", cfg(SYM_PAIR_CFG), "--grid", "4x4", "--pgm"]) == 1
    assert "needs --out" in capsys.readouterr().err


def test_map_to_stdout(cfg, capsys):
    assert main(["map", "--config", cfg(SYM_PAIR_CFG), "--grid", "4x4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "phi1,alpha1,ratio,region"
    assert len(lines) == 17


def test_propagate_writes_trace(cfg, tmp_path):
    out = tmp_path / "trace.csv"
    code = main(["propagate", "--config", cfg(SYM_PAIR_CFG), "--max-iter", "10", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "iter,phi,x,dK_total,K0,A0,verdict_flag"
    assert len(lines) == 11


def test_neutral_prints_companion(cfg, capsys):
    assert main(["neutral", "--config", cfg(SYM_PAIR_CFG), "--pair", "a"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("defect { kind = rigid_line")
    assert "d = 2" in out and "la = 0.2" in out


def test_neutral_requires_microcrack(cfg, capsys):
    text = SYM_PAIR_CFG.replace("kind = microcrack", "kind = rigid_line")
    assert main(["neutral", "--config", cfg(text)]) == 1


def test_dump_config_round_trip(cfg, capsys):
    path = cfg(SYM_PAIR_CFG)
    assert main(["sif", "--config", path, "--dump-config"]) == 0
    dumped = capsys.readouterr().out
    path2 = cfg(dumped, name="dumped.cfg")
    assert main(["sif", "--config", path2, "--dump-config"]) == 0
    assert capsys.readouterr().out == dumped


def test_bad_config_exits_1(cfg, capsys):
    assert main(["sif", "--config", cfg("bimaterial { mu_plus = 1 }")]) == 1
    assert "error" in capsys.readouterr().err
    assert main(["sif", "--config", "/nonexistent/file.cfg"]) == 1


def test_numerical_failure_exits_2(cfg, capsys):
    # A0 cancels exactly: the advance increment is undefined
    text = """
bimaterial { mu_plus = 1, mu_minus = 1 }
loading {
  force { face = "+", x1 = -1, p = 1 }
  force { face = "-", x1 = -1, p = 1 }
  force { face = "+", x1 = -4, p = -8 }
  force { face = "-", x1 = -4, p = -8 }
}
defect { kind = microcrack, d = 1, phi = 0.3, alpha = 0.2, la = 0.1 }
"""
    assert main(["perturb", "--config", cfg(text)]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_map_outputs_reproducible(cfg, tmp_path):
    path = cfg(SYM_PAIR_CFG)
    out1, out2 = tmp_path / "m1.csv", tmp_path / "m2.csv"
    assert main(["map", "--config", path, "--grid", "8x4", "--out", str(out1)]) == 0
    assert main(["map", "--config", path, "--grid", "8x4", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()

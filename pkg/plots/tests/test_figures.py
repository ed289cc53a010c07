import os
import shutil

import numpy as np
import pytest

from kfsplots import SchemaError, load_field, load_sweep, plot_heatmap, plot_lines, plot_wigner_panels
from kfsplots.cli import main

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")
FOCK1 = os.path.join(FIXTURES, "fock1_field.csv")
VACUUM = os.path.join(FIXTURES, "vacuum_field.csv")
MAP = os.path.join(FIXTURES, "map_lambda_theta.csv")
ETA = os.path.join(FIXTURES, "eta_threshold.csv")


def test_load_field_grid_shape():
    x, p, w = load_field(FOCK1)
    assert x.size == 96 and p.size == 96
    # single-photon state: negative core at the origin
    i = np.argmin(np.abs(x))
    j = np.argmin(np.abs(p))
    assert w[i, j] < -0.6
    # normalized on its grid
    cell = (x[1] - x[0]) * (p[1] - p[0])
    assert w.sum() * cell == pytest.approx(1.0, abs=1e-3)


def test_load_field_schema_error_names_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,p,value\n0,0,1\n")
    with pytest.raises(SchemaError, match="'w'"):
        load_field(str(bad))


def test_load_field_rejects_ragged_grid(tmp_path):
    bad = tmp_path / "ragged.csv"
    bad.write_text("x,p,w\n0,0,1\n0,1,1\n1,0,1\n")
    with pytest.raises(SchemaError, match="grid"):
        load_field(str(bad))


def test_load_sweep_missing_metric():
    with pytest.raises(SchemaError, match="'banana'"):
        load_sweep(MAP, ("lam", "banana"))


def test_panels_negative_core_and_symmetric_scale(tmp_path):
    out = tmp_path / "panels.png"
    info = plot_wigner_panels([VACUUM, FOCK1], str(out), titles=["vacuum", "one photon"])
    assert out.exists() and info["panels"] == 2
    # color limits symmetric about zero, range covers the negative core
    assert info["vmin"] == -info["vmax"]
    assert info["min_w"] < -0.6


def test_heatmap_zero_feedback_column(tmp_path):
    out = tmp_path / "map.svg"
    info = plot_heatmap(MAP, "lam", "theta", "negativity", str(out))
    assert out.exists()
    assert info["shape"] == (4, 3)
    # the lam = 0 column is identically zero; the map is not
    assert info["column_max"][0.0] == 0.0
    assert max(info["column_max"].values()) > 1e-2


def test_lines_threshold_shape(tmp_path):
    out = tmp_path / "eta.png"
    info = plot_lines(ETA, "eta", "negativity", str(out))
    assert out.exists() and info["n_lines"] == 1
    data = load_sweep(ETA, ("eta", "negativity"))
    order = np.argsort(data["eta"])
    neg = data["negativity"][order]
    # threshold shape: flat (essentially zero) below, rising at the top end
    assert np.all(neg[:4] < 1e-6)
    assert neg[-1] > 1e-2
    assert np.all(np.diff(neg[-3:]) > 0)


@pytest.mark.parametrize("suffix", ["png", "svg"])
def test_renders_are_byte_stable(tmp_path, suffix):
    a = tmp_path / f"a.{suffix}"
    b = tmp_path / f"b.{suffix}"
    plot_wigner_panels([FOCK1], str(a))
    plot_wigner_panels([FOCK1], str(b))
    assert a.read_bytes() == b.read_bytes()
    ha = tmp_path / f"ha.{suffix}"
    hb = tmp_path / f"hb.{suffix}"
    plot_heatmap(MAP, "lam", "theta", "negativity", str(ha))
    plot_heatmap(MAP, "lam", "theta", "negativity", str(hb))
    assert ha.read_bytes() == hb.read_bytes()


def test_inputs_never_mutated(tmp_path):
    copy = tmp_path / "field.csv"
    shutil.copy(FOCK1, copy)
    before = copy.read_bytes()
    plot_wigner_panels([str(copy)], str(tmp_path / "x.png"))
    assert copy.read_bytes() == before


def test_cli_commands(tmp_path, capsys):
    assert main(["panels", FOCK1, "--out", str(tmp_path / "p.png")]) == 0
    assert main(["heatmap", MAP, "--x", "lam", "--y", "theta",
                 "--out", str(tmp_path / "h.png")]) == 0
    assert main(["lines", ETA, "--x", "eta", "--out", str(tmp_path / "l.svg")]) == 0
    assert main(["heatmap", MAP, "--x", "nope", "--y", "theta",
                 "--out", str(tmp_path / "n.png")]) == 2
    err = capsys.readouterr().err
    assert "nope" in err


def test_unsupported_format_rejected(tmp_path):
    with pytest.raises(SchemaError, match="format"):
        plot_wigner_panels([FOCK1], str(tmp_path / "x.pdf"))

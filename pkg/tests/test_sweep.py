import numpy as np
import pytest

from kfs import ModelParams
from kfs.errors import ResourceGuardError, ValidationError
from kfs.io import read_sweep_rows
from kfs.sweep import ConvergenceScan, SweepSpec, convergence_scan, run_sweep


def _small_base(**kw):
    defaults = dict(u=0.3, amp=1.2, theta=0.0, lam=0.4, eta=1.0, n_cut=24)
    defaults.update(kw)
    return ModelParams(**defaults)


def test_spec_validation():
    base = _small_base()
    with pytest.raises(ValidationError):
        SweepSpec(base=base, axes=(("bogus", (1.0,)),))
    with pytest.raises(ValidationError):
        SweepSpec(base=base, axes=(("lam", ()),))
    with pytest.raises(ValidationError):
        SweepSpec(base=base, axes=(("lam", (0.1,)),), solver="magic")
    with pytest.raises(ResourceGuardError):
        SweepSpec(base=base, axes=(("lam", tuple(np.linspace(0, 1, 60))),), budget=10)


def test_no_feedback_column_is_negativity_free(tmp_path):
    # lam = 0 with a strong Kerr term: every point positive-Wigner
    spec = SweepSpec(
        base=_small_base(u=0.3, amp=3.0, n_cut=60),
        axes=(("lam", (0.0,)), ("theta", (0.0, 30.0, 60.0))),
        resolution=128,
        output_path=str(tmp_path / "null.csv"),
    )
    result = run_sweep(spec, worker_count=1)
    assert all(row.error == "" for row in result.rows)
    assert all(row.negativity < 1e-4 for row in result.rows)


def test_rows_ordered_and_deterministic_across_workers(tmp_path):
    spec1 = SweepSpec(
        base=_small_base(),
        axes=(("lam", (0.0, 0.3)), ("theta", (0.0, 20.0))),
        resolution=96,
        output_path=str(tmp_path / "one.csv"),
    )
    spec4 = SweepSpec(
        base=_small_base(),
        axes=(("lam", (0.0, 0.3)), ("theta", (0.0, 20.0))),
        resolution=96,
        output_path=str(tmp_path / "four.csv"),
    )
    r1 = run_sweep(spec1, worker_count=1)
    r4 = run_sweep(spec4, worker_count=4)
    assert [r.values for r in r1.rows] == [r.values for r in r4.rows]
    one = (tmp_path / "one.csv").read_bytes()
    four = (tmp_path / "four.csv").read_bytes()
    assert one == four


def test_restart_reuses_completed_rows(tmp_path):
    out = tmp_path / "restart.csv"
    spec = SweepSpec(
        base=_small_base(),
        axes=(("lam", (0.0, 0.2, 0.4)),),
        resolution=96,
        output_path=str(out),
    )
    full = run_sweep(spec, worker_count=1)
    reference = out.read_bytes()

    # drop the middle row and rerun: only that row is recomputed
    lines = out.read_text().splitlines(keepends=True)
    out.write_text("".join(lines[:2] + lines[3:]))
    rerun = run_sweep(spec, worker_count=1)
    assert out.read_bytes() == reference
    # reused rows carry no fresh wall time
    assert rerun.rows[0].wall_time == full.rows[0].wall_time or rerun.rows[0].wall_time == 0.0


def test_individual_point_failure_is_recorded(tmp_path):
    # second point pumps a 12-level ladder far past its top: cutoff error
    spec = SweepSpec(
        base=_small_base(n_cut=12),
        axes=(("amp", (0.2, 3.0)),),
        resolution=96,
        output_path=str(tmp_path / "partial.csv"),
    )
    result = run_sweep(spec, worker_count=1)
    assert result.rows[0].error == "" and result.rows[0].negativity is not None
    assert result.rows[1].error != "" and result.rows[1].negativity is None
    rows = read_sweep_rows(str(tmp_path / "partial.csv"), ("amp",))
    assert rows[1].error == result.rows[1].error


def test_theta_axis_values_are_degrees(tmp_path):
    # a 90 degree pump phase turns <a> from 2i to -2
    spec = SweepSpec(
        base=_small_base(u=0.0, lam=0.0, amp=1.0, n_cut=30),
        axes=(("theta", (90.0,)),),
        resolution=96,
    )
    result = run_sweep(spec, worker_count=1)
    assert result.rows[0].mean_n == pytest.approx(4.0, abs=1e-6)
    assert result.rows[0].negativity < 1e-8


def test_convergence_scan_linear_case():
    import math

    scan = convergence_scan(ModelParams(amp=1.0, n_cut=30), [10, 15, 20, 25], resolution=96)
    assert isinstance(scan, ConvergenceScan)
    # tail masses follow the cumulative Poisson distribution with mean 4
    for row in scan.rows[1:]:
        k = max(1, row.n_cut // 10)
        oracle = sum(
            math.exp(-4.0) * 4.0**n / math.factorial(n)
            for n in range(row.n_cut - k, row.n_cut)
        )
        assert row.tail_mass == pytest.approx(oracle, rel=0.5)  # boundary distorts the top level
    # by n_cut = 20 the tail bound and the negativity floor are both met...
    by_cut = {row.n_cut: row for row in scan.rows}
    assert by_cut[20].tail_mass < 1e-6 and by_cut[15].tail_mass > 1e-6
    assert by_cut[20].negativity < 1e-4
    # ...and the successive-difference flag trips one step later at most
    assert scan.converged_at in (20, 25)
    assert not scan.rows[0].converged and not scan.rows[1].converged


def test_convergence_scan_vacuum():
    scan = convergence_scan(ModelParams(amp=0.0, u=0.2, n_cut=30), [4, 8], resolution=96)
    assert scan.converged_at == 8  # second point: nothing changed, tail empty
    assert scan.rows[0].negativity == 0.0
    with pytest.raises(ValidationError):
        convergence_scan(ModelParams(amp=0.0, n_cut=30), [8, 4])

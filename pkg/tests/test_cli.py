import os
import subprocess
import sys

import numpy as np
import pytest

from skeweuler import ConfigError
from skeweuler.cli import (
    EXIT_DIVERGENCE,
    EXIT_OK,
    EXIT_VALIDATION,
    build_initial,
    build_scheme,
    density_bump,
    main,
    parse_config_text,
)
from skeweuler.state import Grid2D
from skeweuler.verification import SUITE_NAMES

MINIMAL = """
[grid]
nx = 16
ny = 16

[gas]
gamma = 1.4
"""


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "skeweuler.cli", *args],
        capture_output=True, text=True,
    )


def test_minimal_config_defaults_applied():
    cfg = parse_config_text(MINIMAL)
    assert cfg.get("gas", "alpha2") == 1.0
    assert cfg.get("scheme", "order") == 4
    assert cfg.get("scheme", "cfl") == 0.5
    assert cfg.get("initial", "kind") == "constant"
    dump = cfg.dump()
    assert "alpha2 = 1.0" in dump and "order = 4" in dump and "cfl = 0.5" in dump


def test_config_round_trip():
    cfg = parse_config_text(MINIMAL)
    again = parse_config_text(cfg.dump())
    assert again.values == cfg.values
    assert again.dump() == cfg.dump()


def test_unknown_key_reports_line():
    bad = MINIMAL + "\n[scheme]\nbogus = 3\n"
    with pytest.raises(ConfigError, match=r"line 10.*bogus"):
        parse_config_text(bad)


def test_unknown_section_rejected():
    with pytest.raises(ConfigError, match=r"unknown section"):
        parse_config_text(MINIMAL + "\n[wings]\nspan = 2\n")


def test_type_mismatch_reports_line():
    bad = MINIMAL.replace("nx = 16", "nx = sixteen")
    with pytest.raises(ConfigError, match=r"line 3.*sixteen"):
        parse_config_text(bad)


def test_missing_mandatory_key():
    with pytest.raises(ConfigError, match=r"gas.gamma"):
        parse_config_text("[grid]\nnx = 16\nny = 16\n")


def test_gamma_one_rejected():
    with pytest.raises(Exception, match="gamma"):
        parse_config_text(MINIMAL.replace("gamma = 1.4", "gamma = 1.0"))


def test_bad_topology_and_kind():
    with pytest.raises(ConfigError):
        parse_config_text(MINIMAL + "\n[grid]\ntopology_x = moebius\n")
    with pytest.raises(ConfigError):
        parse_config_text(MINIMAL + "\n[initial]\nkind = vortex\n")
    with pytest.raises(ConfigError, match="path"):
        parse_config_text(MINIMAL + "\n[initial]\nkind = file\n")


def test_density_bump_is_periodic_compatible():
    grid = Grid2D(16, 16, topology_x="periodic", topology_y="periodic")
    f = density_bump(grid)
    assert f.data[0].min() >= 1.0
    assert np.abs(f.data[1:3]).max() == 0.0


def test_build_initial_kinds(tmp_path):
    cfg = parse_config_text(MINIMAL)
    scheme = build_scheme(cfg)
    f = build_initial(cfg, scheme)
    assert np.all(f.data[0] == 1.0)
    cfg2 = parse_config_text(MINIMAL + "\n[initial]\nkind = density-bump\n")
    f2 = build_initial(cfg2, build_scheme(cfg2))
    assert f2.data[0].max() > 1.0
    # file round trip
    path = tmp_path / "snap.csv"
    with open(path, "w") as fh:
        f2.write_csv(fh)
    cfg3 = parse_config_text(
        MINIMAL + f"\n[initial]\nkind = file\npath = {path}\n"
    )
    f3 = build_initial(cfg3, build_scheme(cfg3))
    np.testing.assert_array_equal(f3.data, f2.data)


def test_verify_deterministic_and_green():
    a = run_cli("verify", "--seed", "7")
    b = run_cli("verify", "--seed", "7")
    assert a.returncode == EXIT_OK
    assert a.stdout == b.stdout
    for name in SUITE_NAMES:
        assert f"[PASS] {name}" in a.stdout


def test_verify_manifest_complete():
    # every identity family from the formulation must have a suite
    expected = {
        "eq10_skew_identity_x",
        "eq10_skew_identity_y",
        "prop1_general_skew",
        "eq20_free_param_null",
        "eq22_rotation_equivalence",
        "eq23_eigenvalues",
        "eq24_contraction",
        "sbp_constraint",
        "eq32_sbp_duality",
        "tensor_kron_equivalence",
        "eq35_energy_rate",
    }
    assert set(SUITE_NAMES) == expected


def test_run_command_artifacts(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    outdir = tmp_path / "out"
    cfgfile.write_text(
        f"""
[grid]
nx = 16
ny = 16
topology_x = periodic
topology_y = periodic

[gas]
gamma = 1.4

[scheme]
order = 4
dt = 0.005
t_end = 0.02

[initial]
kind = density-bump

[output]
directory = {outdir}
snapshot_times = 0.0, 0.02
"""
    )
    assert main(["run", "--config", str(cfgfile)]) == EXIT_OK
    record = (outdir / "record.csv").read_text().splitlines()
    assert record[0] == "t,energy,boundary_flux,rate_residual,pressure_work,min_phi1,min_phi4"
    assert len(record) >= 3
    snaps = sorted(os.listdir(outdir))
    assert "snapshot_t0.000000.csv" in snaps and "snapshot_t0.020000.csv" in snaps


def test_run_command_validation_exit(tmp_path):
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text("[grid]\nnx = 16\nny = 16\n[gas]\ngamma = 1.0\n")
    assert main(["run", "--config", str(cfgfile)]) == EXIT_VALIDATION
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == EXIT_VALIDATION


def test_run_command_divergence_exit(tmp_path):
    # unstable dt: CFL guard trips -> validation; blown-up run -> divergence.
    cfgfile = tmp_path / "div.cfg"
    cfgfile.write_text(
        """
[grid]
nx = 16
ny = 16
topology_x = periodic
topology_y = periodic

[gas]
gamma = 1.4

[scheme]
dt = 0.15
cfl = 100.0
t_end = 10.0

[initial]
kind = density-bump
amplitude = 0.9
"""
        + f"\n[output]\ndirectory = {tmp_path / 'o'}\n"
    )
    assert main(["run", "--config", str(cfgfile)]) == EXIT_DIVERGENCE


def test_sweep_command_counts_transition(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main([
        "sweep", "--gamma", "1.4", "--mn-min", "0.9", "--mn-max", "1.05",
        "--steps", "31", "--out", str(out),
    ])
    assert rc == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "Mn,lambda1,lambda2,re_lambda3,im_lambda3,re_lambda4,im_lambda4,neg_count"
    rows = [line.split(",") for line in lines[1:]]
    counts = [int(r[-1]) for r in rows]
    mns = [float(r[0]) for r in rows]
    assert counts[0] == 1 and counts[-1] == 0
    flip = next(i for i in range(1, len(counts)) if counts[i] != counts[i - 1])
    assert abs(mns[flip] - 0.9759) < 0.01


def test_sweep_gamma_sqrt2_transition_at_one():
    from skeweuler import GasModel
    from skeweuler.boundary import locate_sign_transition

    loc = locate_sign_transition(GasModel(np.sqrt(2.0)), 0.9, 1.05)
    assert abs(loc - 1.0) <= 1e-6


def test_converge_command(tmp_path):
    cfgfile = tmp_path / "mms.cfg"
    cfgfile.write_text(
        """
[grid]
nx = 13
ny = 13

[gas]
gamma = 1.4

[scheme]
order = 2
t_end = 0.1
cfl = 0.3

[initial]
kind = manufactured
"""
    )
    out = tmp_path / "conv.csv"
    rc = main(["converge", "--config", str(cfgfile), "--levels", "3", "--out", str(out)])
    assert rc == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "level,nx,ny,h,l2_error,observed_order"
    assert len(lines) == 4
    last_order = float(lines[-1].split(",")[-1])
    assert last_order > 1.5

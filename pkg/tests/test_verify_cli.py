import csv
import io
import json

import numpy as np
import pytest

from twoparam import modes as md
from twoparam.cli import main
from twoparam.errors import InvalidInputError
from twoparam.export import export_grid, write_csv
from twoparam.verify import RunConfig, load_config, parse, render, run_verify


@pytest.fixture(scope="module")
def report():
    return run_verify(RunConfig())


def test_default_run_has_no_failures(report):
    assert report.ok
    counts = report.counts()
    assert counts["fail"] == 0
    assert counts["pass"] > 0


def test_check_ids_are_unique_and_well_formed(report):
    ids = [c.id for c in report.checks]
    assert len(ids) == len(set(ids))
    for cid in ids:
        module, op, prop = cid.split(".")
        assert module in ("geometry", "dynamics", "group", "lie", "modes") and op and prop


def test_flagged_only_where_discrepancies_are_recorded(report):
    flagged = {c.id for c in report.checks if c.status == "flagged"}
    assert "modes.fourier_oracle.zero_frequency" in flagged
    assert "lie.generator.printed_matrices" in flagged
    assert "lie.invariant_space.convention" in flagged
    assert "geometry.inverse_B.numerical_inverse" not in flagged


def test_geometry_suite_passes_without_flags_on_computed_quantities():
    rep = run_verify(RunConfig(), ["geometry"])
    for c in rep.checks:
        if "printed" not in c.id:
            assert c.status == "pass", c.id


def test_render_is_deterministic_and_round_trips(report):
    text = render(report)
    assert text == render(run_verify(RunConfig(), workers=4))
    back = parse(text)
    assert back == report
    assert render(back) == text
    assert "runtime_s" not in text
    assert "runtime_s" in render(report, metadata=True)


def test_seed_changes_the_samples():
    a = run_verify(RunConfig(seed=1), ["group"])
    b = run_verify(RunConfig(seed=2), ["group"])
    assert [c.residual for c in a.checks] != [c.residual for c in b.checks]


def test_unknown_suite_is_a_usage_error():
    with pytest.raises(InvalidInputError):
        run_verify(RunConfig(), ["bogus"])


@pytest.mark.parametrize("kwargs,field", [({"grid_nodes": 5}, "grid_nodes"),
                                          ({"tol_modes": 0.0}, "tol_modes"),
                                          ({"branch": "flat"}, "geometry"),
                                          ({"output_format": "xml"}, "output_format")])
def test_config_errors_name_the_field(kwargs, field):
    with pytest.raises(InvalidInputError, match=f"^{field}"):
        RunConfig(**kwargs)


def test_load_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\na = 2\nb = 3  # inline\nseed = 7\nbranch = dS\n")
    cfg = load_config(path)
    assert (cfg.a, cfg.b, cfg.seed, cfg.branch) == (2.0, 3.0, 7, "dS")
    path.write_text("colour = blue\n")
    with pytest.raises(InvalidInputError, match="^colour"):
        load_config(path)


def test_non_default_geometry_still_passes():
    rep = run_verify(RunConfig(a=2.0, b=3.0, l1=2.0), ["geometry", "dynamics", "group"])
    assert rep.ok


# --------------------------------------------------------------------------- export


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


def test_amplitude_export_matches_closed_form():
    text = export_grid(RunConfig(), "amplitude", "-", de_values=[0.0, 5.0, 10.0], kk_values=[2.0])
    header, *rows = rows_of(text)
    assert header == ["delta_e", "kk", "amplitude"]
    for de, kk, amp in rows:
        assert float(amp) == pytest.approx(float(md.unruh_amplitude(float(de), float(kk))), rel=1e-15)


def test_trajectory_export_is_straight():
    header, *rows = rows_of(export_grid(RunConfig(), "trajectory", "-"))
    col = header.index("straightness_error")
    assert rows and max(float(r[col]) for r in rows) < 1e-6


@pytest.mark.parametrize("quantity", ["modes", "wkb", "density"])
def test_empty_grid_gives_header_only(quantity):
    opts = {"points": np.zeros((0, 4))} if quantity == "density" else {"grid": []}
    text = export_grid(RunConfig(), quantity, "-", **opts)
    assert len(text.splitlines()) == 1


def test_export_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    export_grid(RunConfig(), "modes", a)
    export_grid(RunConfig(), "modes", b)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "s,re_chi,im_chi,abs_chi,w"


def test_unwritable_path():
    with pytest.raises(InvalidInputError):
        write_csv("/nonexistent/dir/out.csv", ["a"], [[1.0]])


# --------------------------------------------------------------------------- CLI


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_verify_json(capsys):
    code, out, _ = run(["verify", "--suite", "lie", "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["summary"]["fail"] == 0
    assert all(c["id"].startswith("lie.") for c in data["checks"])


def test_cli_verify_text_and_config(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("samples = 200\ngroup_samples = 10\n")
    code, out, _ = run(["verify", "--suite", "geometry,group", "--config", str(cfg)], capsys)
    assert code == 0
    assert "failed" in out.splitlines()[-1]


def test_cli_usage_errors(capsys):
    assert run(["verify", "--suite", "bogus"], capsys)[0] == 2
    assert run(["export", "--quantity", "amplitude", "--out", "/nonexistent/x.csv"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["nosuchverb"])
    assert exc.value.code == 2


def test_cli_domain_errors(capsys):
    assert run(["unruh", "--de", "1", "--kk", "0.5"], capsys)[0] == 3
    assert run(["wkb", "--m2", "0.1", "--kk", "0.5"], capsys)[0] == 3


def test_cli_geodesic(capsys):
    code, out, _ = run(["geodesic", "--x0", "0", "0.1", "0", "0", "--v", "0.1", "0", "0"], capsys)
    assert code == 0
    assert json.loads(out)["max_straightness_error"] < 1e-10


def test_cli_modes_and_unruh(capsys):
    code, out, _ = run(["modes", "--kk", "2"], capsys)
    assert code == 0 and json.loads(out)["ode_vs_exact_max"] < 1e-6
    code, out, _ = run(["unruh", "--de", "3", "--kk", "2"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["fourier_oracle"]["real"] == pytest.approx(data["fourier_oracle"]["closed_form"], abs=1e-8)


def test_cli_invariants(capsys):
    code, out, _ = run(["invariants", "--spec", "H1", "--species", "antisymmetric2"], capsys)
    assert code == 0 and json.loads(out)["dimension"] == 3


def test_cli_transform(capsys):
    code, out, _ = run(["transform", "--seed", "3"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["invariance_residual"] < 1e-10 and data["projective_agreement"] < 1e-12


def test_cli_export_stdout(capsys):
    code, out, _ = run(["export", "--quantity", "wkb", "--out", "-", "--m2", "1", "--kk", "10"], capsys)
    assert code == 0 and out.startswith("s,w1")


def test_cli_exit_code_on_failed_check(tmp_path, capsys):
    cfg = tmp_path / "strict.cfg"
    cfg.write_text("tol_modes = 1e-30\n")
    assert run(["verify", "--suite", "modes", "--config", str(cfg)], capsys)[0] == 1

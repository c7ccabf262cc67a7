import csv
import io
import json

import numpy as np
import pytest

from oddsw.cli import (EXIT_NOT_SA, EXIT_OK, EXIT_PARSE, EXIT_VERIFY, Axis, ChartRequest, ParseError,
                       boundary_of, cmd_chart, fmt, load_config, main, parse_config, phys_of)
from oddsw.boundary import Family, classify, is_self_adjoint
from oddsw.bulk import PhysParams


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


@pytest.fixture
def cfgdir(tmp_path):
    files = {
        "dd.cfg": "family = DD\nphys.f = 1\nphys.nu = 0.2\n",
        "no_flux.cfg": "family = NOFLUX   # v = 0 and ux + 4 vy = 0\nnoflux.a = 4\n",
        "nd.cfg": "family = ND\nnd.m = -1\nnd.q = 1\n",
        "bad.cfg": "family = DD\nphys.nuu = 0.2\n",
        "raw.cfg": "family = RAW\nraw.a1 = 1,0,0,0\nraw.a1p = 0,0,0,0\nraw.a2p = 0,0,0,0\n"
                   "raw.a2 = 0,0,0,0\nraw.b1 = 0,0,1,0\nraw.b2 = 0,0,0,1\n",
    }
    for name, text in files.items():
        (tmp_path / name).write_text(text)
    return tmp_path


def test_parse_config():
    cfg = parse_config("# comment\nfamily = nd\nnd.lambda = 0.5\n\ndd.b1 = 1,0,0,-1\n")
    assert cfg == {"family": "ND", "nd.lambda": 0.5, "dd.b1": (1 + 0j, -1j)}
    for bad in ("nope", "family = XX", "phys.f = abc", "dd.b1 = 1,2,3", "foo.bar = 1"):
        with pytest.raises(ParseError):
            parse_config(bad)
    with pytest.raises(ParseError):
        load_config("/nonexistent/file.cfg")


def test_config_builds_expected_boundary():
    p = PhysParams()
    assert classify(boundary_of({"family": "DD"}, p)) is Family.DD
    assert classify(boundary_of({"family": "NOFLUX", "noflux.a": 4.0}, p)) is Family.DN
    bd = boundary_of({"family": "NN", "nn.mu_im": 0.5, "nn.l1": 1, "nn.l2": 1}, p)
    assert is_self_adjoint(bd) and classify(bd) is Family.NN
    assert phys_of({"phys.nu": 0.1}).nu == 0.1
    with pytest.raises(ParseError):
        phys_of({"phys.nu": 0.3})          # 4νf ≥ 1 closes the gap


def test_fmt_round_trips():
    for x in (0.1, np.pi, -1e-300, 1 / 3):
        assert float(fmt(x)) == x
    assert fmt(None) == "" and fmt(3) == "3" and fmt(True) == "1"


def test_classify(capsys, cfgdir):
    assert run(capsys, "classify", "--config", str(cfgdir / "dd.cfg"))[:2] == (0, "DD, PHS=yes, failures=[]")
    code, out, _ = run(capsys, "classify", "--config", str(cfgdir / "no_flux.cfg"))
    assert code == 0 and out.startswith("DN, ")
    code, _, err = run(capsys, "classify", "--config", str(cfgdir / "bad.cfg"))
    assert code == EXIT_PARSE and "phys.nuu" in err


def test_not_self_adjoint_exit(capsys, cfgdir):
    # b1 = (0, 1) and b2 = (0, i) break the Hermiticity constraint
    assert run(capsys, "classify", "--config", str(cfgdir / "raw.cfg"))[0] == EXIT_NOT_SA
    assert run(capsys, "indices", "--config", str(cfgdir / "raw.cfg"))[0] == EXIT_NOT_SA
    assert run(capsys, "indices", "--family", "ND", "--nd.lambda", "1")[0] == EXIT_OK


def test_indices(capsys, cfgdir):
    assert run(capsys, "indices", "--config", str(cfgdir / "dd.cfg"))[1] == "P=2 I=0 E=-1 B=0 M=2 BEC=holds"
    code, out, _ = run(capsys, "indices", "--config", str(cfgdir / "nd.cfg"))
    assert out.endswith("M=3 BEC=violated")
    # override flags beat the file
    _, out, _ = run(capsys, "indices", "--config", str(cfgdir / "nd.cfg"), "--nd.q", str(np.sqrt(2)))
    assert out.endswith("BEC=on_boundary")


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_chart_nd(tmp_path, capsys):
    out = tmp_path / "nd.csv"
    code = main(["chart", "--family", "ND", "--x", "m:-4:0:9", "--y", "q:-3:3:7", "--out", str(out)])
    assert code == 0
    rows = _rows(out.read_text())
    assert len(rows) == 63
    assert [r["m"] for r in rows[:7]] == ["-4"] * 7       # row-major, x outer
    for r in rows:
        m, q = float(r["m"]), float(r["q"])
        if r["on_boundary"] == "0":
            assert (r["verdict"] == "holds") == (abs(q) < abs(m + 1))


def test_chart_nn_phs_region(capsys):
    p = PhysParams()
    text = cmd_chart(ChartRequest("NN", Axis.parse("sigma:-1.5:1.5:13"), Axis.parse("delta2:0:2:9"),
                                  {"nn.mu_im": 0.5}, p))
    for r in _rows(text):
        if r["on_boundary"] == "1":
            continue
        s, d2 = float(r["sigma"]), float(r["delta2"])
        assert (r["verdict"] == "holds") == (d2 > s * s - 0.25 - p.nu ** 2)


def test_chart_single_point_matches_indices(capsys):
    p = PhysParams()
    text = cmd_chart(ChartRequest("ND", Axis.parse("m:-1:-1:1"), Axis.parse("q:1:1:1"), {}, p))
    (r,) = _rows(text)
    assert (r["P"], r["I"], r["E"], r["B"], r["M"], r["verdict"]) == ("2", "1", "-1", "1", "3", "violated")


def test_chart_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["chart", "--family", "NN", "--x", "sigma:-1:1:11", "--y", "mu_im:-1:1:11"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("x,y", [("m:-4:1:5", "q:-1:1:5"), ("m:-4:0:5", "m:-1:0:5"),
                                 ("sigma:0:1:3", "q:0:1:3"), ("m:-4:0", "q:0:1:3"),
                                 ("m:-4:0:5", "alpha:0:1:3")])
def test_chart_rejects_bad_axes(capsys, x, y):
    assert main(["chart", "--family", "ND", "--x", x, "--y", y]) == EXIT_PARSE


def test_verify(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "phs", "--samples", "50", "--seed", "3", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert {"suite", "seed", "cases", "failures", "max_dev", "records"} <= set(rep)
    assert rep["suite"] == "phs" and rep["seed"] == 3 and rep["cases"] == 50 and rep["failures"] == 0
    code, _, err = run(capsys, "verify", "--suite", "nosuch")
    assert code == EXIT_PARSE and "winding" in err and "becregions" in err


def test_verify_failure_exit(monkeypatch, capsys):
    import oddsw.suites as suites

    def broken(rep, rng, n, p):
        rep.add(0, False)

    monkeypatch.setitem(suites.SUITES, "phs", broken)
    assert main(["verify", "--suite", "phs"]) == EXIT_VERIFY


def test_trace(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code = main(["trace", "--family", "DD", "--kx-min", "1", "--kx-max", "-1", "--out", str(out)])
    assert code == 0 and out.read_text() == "branch_id,kx,omega,annotation\n"
    code = main(["trace", "--family", "DD", "--kx-min", "-3", "--kx-max", "-0.2", "--nkx", "41",
                 "--grid", "300", "--out", str(out)])
    rows = _rows(out.read_text())
    assert code == 0 and {r["branch_id"] for r in rows} == {"0"}
    assert rows[0]["annotation"].startswith("start=band")
    for r in rows:
        assert float(r["omega"]) == pytest.approx(-float(r["kx"]), rel=1e-6)


def test_chern(capsys):
    code, out, _ = run(capsys, "chern", "--grid", "64")
    assert code == 0 and float(out) == pytest.approx(2, abs=1e-3)
    assert float(run(capsys, "chern", "--grid", "64", "--band", "minus")[1]) == pytest.approx(-2, abs=1e-3)

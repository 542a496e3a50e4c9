import csv
import json
import math
import subprocess
import sys

import pytest

from spectral_strings import analytic, cli
from spectral_strings.quadrature import QuadratureConfig

PI = math.pi

DIAG23 = {"K": [[1, 0], [0, 1]], "L": [[2, 0], [0, 3]], "phi": [1, 0], "kappa": 1}
EQUAL = {"K": [[1, 0], [0, 1]], "L": [[1, 0], [0, 1]], "phi": [0, 0], "kappa": 1}
FLIP = {"K": [[1, 0], [0, 1]], "L": [[1, 0], [0, -1]], "phi": [1, 0], "kappa": 1}


def write(tmp_path, doc, name="model.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_terms_json(tmp_path, capsys):
    code, out, _ = run(capsys, "terms", write(tmp_path, DIAG23), "--json")
    assert code == 0
    rec = json.loads(out)
    assert rec["v_int"] == pytest.approx(-8 * PI / 5, rel=1e-14)
    assert rec["v1"] == pytest.approx(11 * PI / 15, rel=1e-14)
    assert rec["det_X"] == pytest.approx(6.0)
    assert rec["det_sign"] == 1

    code, out, _ = run(capsys, "terms", write(tmp_path, EQUAL), "--json")
    rec = json.loads(out)
    assert rec["cosmological"] == pytest.approx(4 * PI, rel=1e-15)
    assert rec["mass_correction"] == 0 and rec["v1"] == 0 and rec["v_int"] == 0

    code, out, _ = run(capsys, "terms", write(tmp_path, FLIP), "--json")
    rec = json.loads(out)
    assert rec["v_int"] == 0.0 and rec["det_sign"] == -1


def test_terms_text_matches_json(tmp_path, capsys):
    path = write(tmp_path, {"K": [[1.3, 0.2], [-0.4, 0.9]], "L": [[0.5, 1.0], [0.7, 2.2]],
                            "phi": [0.3, -1.1], "kappa": -1})
    _, text, _ = run(capsys, "terms", path)
    _, js, _ = run(capsys, "terms", path, "--json")
    rec = json.loads(js)
    values = {line.split()[0]: line.split()[1] for line in text.splitlines() if not line.startswith("note")}
    for key in ("cosmological", "mass_correction", "v1", "v_int", "det_X"):
        assert float(values[key]) == rec[key]
    assert "not self-adjoint" in text
    assert rec["self_adjoint"] is False


def test_terms_is_repeatable(tmp_path, capsys):
    path = write(tmp_path, DIAG23)
    outs = {run(capsys, "terms", path, "--json")[1] for _ in range(3)}
    assert len(outs) == 1


def test_parse_errors(tmp_path, capsys):
    code, _, err = run(capsys, "terms", write(tmp_path, '{"K": [[1, 0],\n [0, 1]], "L": oops}'))
    assert code == 2 and ":2:" in err
    bad = dict(DIAG23, L=[[1, 2, 3], [0, 1]])
    code, _, err = run(capsys, "terms", write(tmp_path, bad))
    assert code == 2 and "field L" in err
    code, _, err = run(capsys, "terms", write(tmp_path, dict(DIAG23, kappa=0)))
    assert code == 2 and "kappa" in err
    code, _, err = run(capsys, "terms", write(tmp_path, {"K": DIAG23["K"]}))
    assert code == 2 and "missing field" in err


def test_singular_and_strict(tmp_path, capsys):
    code, _, err = run(capsys, "terms", write(tmp_path, dict(DIAG23, L=[[1, 2], [2, 4]])))
    assert code == 3 and "singular" in err
    code, _, err = run(capsys, "terms", write(tmp_path, FLIP), "--paper-strict")
    assert code == 3 and "paper-strict" in err
    code, out, _ = run(capsys, "terms", write(tmp_path, DIAG23), "--paper-strict", "--json")
    assert code == 0 and json.loads(out)["v_int"] == pytest.approx(-8 * PI / 5, rel=1e-14)


@pytest.mark.parametrize("model", [DIAG23, EQUAL, FLIP])
def test_verify_passes(tmp_path, capsys, model):
    code, out, _ = run(capsys, "verify", write(tmp_path, model))
    assert code == 0, out
    assert out.count("pass") == 3


def test_verify_negative_control(tmp_path, capsys, monkeypatch):
    corrupted = dict(cli.CLOSED_FORMS)
    corrupted["v1"] = lambda g: 1.001 * analytic.v1_invariant(g.K, g.L, g.phi, g.kappa)
    monkeypatch.setattr(cli, "CLOSED_FORMS", corrupted)
    code, out, err = run(capsys, "verify", write(tmp_path, DIAG23))
    assert code == 1
    assert "FAIL" in out and "worst term v1" in err


def test_verify_non_convergence(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(cli, "QuadratureConfig",
                        lambda rel_tol: QuadratureConfig(rel_tol=1e-15, max_subdivisions=1))
    code, _, err = run(capsys, "verify", write(tmp_path, DIAG23))
    assert code == 4 and "converge" in err


def sweep_doc(**over):
    doc = {"base": {"K": [[1, 0], [0, 1]], "L": [[2, 0], [0, 1]], "phi": [1, 0], "kappa": 1},
           "parameter": "L.1.1", "range": [1, 3], "steps": 3, "outputs": ["v_int"]}
    doc.update(over)
    return doc


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_sweep_example(tmp_path, capsys):
    out = tmp_path / "out.csv"
    code, _, _ = run(capsys, "sweep", write(tmp_path, sweep_doc(), "s.json"), "-o", str(out))
    assert code == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    # -8 pi / (b2 + 2) for b2 = 1, 2, 3
    expected = "param,v_int\n" + "".join(
        f"{b!r},{-8 * PI / (b + 2)!r}\n" for b in (1.0, 2.0, 3.0))
    assert raw.decode() == expected


def test_sweep_degenerate_range(tmp_path, capsys):
    out = tmp_path / "out.csv"
    doc = sweep_doc(range=[1, 1], steps=2, outputs=["v1", "v_int"])
    assert run(capsys, "sweep", write(tmp_path, doc, "s.json"), "-o", str(out))[0] == 0
    rows = read_csv(out)
    assert rows[0] == ["param", "v1", "v_int"]
    assert len(rows) == 3 and rows[1] == rows[2]


def test_sweep_sign_flip(tmp_path, capsys):
    out = tmp_path / "out.csv"
    doc = sweep_doc(range=[-1.5, 1.5], steps=4, outputs=["det_X", "v_int"])
    assert run(capsys, "sweep", write(tmp_path, doc, "s.json"), "-o", str(out))[0] == 0
    rows = [[float(x) for x in r] for r in read_csv(out)[1:]]
    for param, det_x, v in rows:
        if det_x < 0:
            assert v == 0.0
        else:
            assert v < 0
    assert [r[2] == 0.0 for r in rows] == [True, True, False, False]


def test_sweep_singular_row_is_nan(tmp_path, capsys):
    out = tmp_path / "out.csv"
    doc = sweep_doc(range=[-1, 1], steps=3)
    assert run(capsys, "sweep", write(tmp_path, doc, "s.json"), "-o", str(out))[0] == 0
    assert read_csv(out)[2] == ["0.0", "nan"]


def test_sweep_errors(tmp_path, capsys):
    bad_path = write(tmp_path, sweep_doc(parameter="L.5.0"), "s.json")
    assert run(capsys, "sweep", bad_path, "-o", str(tmp_path / "o.csv"))[0] == 2
    assert run(capsys, "sweep", write(tmp_path, sweep_doc(steps=1), "s.json"),
               "-o", str(tmp_path / "o.csv"))[0] == 2
    assert run(capsys, "sweep", write(tmp_path, sweep_doc(parameter="kappa"), "s.json"),
               "-o", str(tmp_path / "o.csv"))[0] == 2
    good = write(tmp_path, sweep_doc(), "s.json")
    code, _, err = run(capsys, "sweep", good, "-o", str(tmp_path / "missing" / "o.csv"))
    assert code == 5 and "cannot write" in err


def test_entry_point(tmp_path):
    path = write(tmp_path, DIAG23)
    res = subprocess.run([sys.executable, "-m", "spectral_strings", "terms", path, "--json"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["v_int"] == pytest.approx(-8 * PI / 5, rel=1e-14)

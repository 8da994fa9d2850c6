import csv
import io
import json
import os
from fractions import Fraction

import pytest

from orderdensity import cli, empirical


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def exact(doc):
    return Fraction(doc["exact"])


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "q=3", "a=T", "d=2")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1
    assert (doc["h"], doc["f"], doc["f_bar"], doc["P"]) == (1, 1, 1, True)
    assert doc["assumption"]["proof_level"] == "theorem"


def test_spectrum_characteristic_divides_d(capsys):
    code, _, err = run(capsys, "spectrum", "q=3", "a=T", "d=3")
    assert code == 2 and "characteristic" in err


def test_spectrum_constant_a(capsys):
    code, out, _ = run(capsys, "spectrum", "q=2", "a=1", "d=2")
    doc = json.loads(out)
    assert code == 0 and doc["special_case"] == "constant" and exact(doc["density"]) == 0


def test_extension_field_spec(capsys):
    code, out, _ = run(capsys, "spectrum", "q=2^2,modulus=x^2+x+1", "a=g*T+1", "d=3")
    doc = json.loads(out)
    assert code == 0 and doc["field"]["q"] == 4 and doc["a"] == "g*T+1"


@pytest.mark.parametrize("argv, value", [
    (("density", "closed", "q=3", "a=T", "d=2"), Fraction(17, 24)),
    (("density", "closed", "q=5", "a=T", "d=2"), Fraction(5, 6)),
    (("density", "closed", "q=2", "a=T", "d=3"), Fraction(3, 8)),
    (("density", "proportion", "q=3", "a=T", "d=2", "--N", "2"), Fraction(7, 8)),
])
def test_density_exact(capsys, argv, value):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and exact(json.loads(out)["density"]) == value


def test_density_series(capsys):
    code, out, _ = run(capsys, "density", "series", "q=2", "a=T", "d=3", "--eps", "1e-9")
    dens = json.loads(out)["density"]
    assert code == 0 and dens["kind"] == "series_truncated"
    assert Fraction(dens["tail_bound"]["exact"]) <= Fraction(1, 10**9)
    assert abs(exact(dens) - Fraction(3, 8)) <= Fraction(1, 10**9)


def test_density_assumption_exit(capsys):
    code, out, err = run(capsys, "density", "closed", "q=5", "a=2*T^2", "d=2")
    doc = json.loads(out)
    assert code == 3 and doc["assumption"]["proof_level"] == "bounded"
    assert "AssumptionNotVerified" in err


@pytest.mark.parametrize("argv", [
    ("spectrum", "q=6", "a=T", "d=2"),
    ("spectrum", "q=3", "a=T+", "d=2"),
    ("spectrum", "q=3", "a=T", "d=x"),
    ("spectrum", "q=3", "a=T"),
    ("spectrum", "q=3", "b=T", "d=2"),
    ("density", "series", "q=3", "a=T", "d=2", "--eps", "0"),
    ("density", "proportion", "q=3", "a=T", "d=2"),
    ("nonsense",),
])
def test_parse_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "q=3", "a=T", "d=2", "--Nmax", "10")
    doc = json.loads(out)
    assert code == 0 and doc["summary"]["all_pass"]
    assert [r["N"] for r in doc["rows"]] == list(range(1, 11))
    assert doc["rows"][1]["R"] == 3


def test_verify_csv_odd_rows_zero(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "verify", "q=2", "a=T", "d=3", "--Nmax", "16", "--format", "csv",
                       "--output", str(path))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert list(rows[0])[:7] == ["N", "I_N", "R", "delta_N_num", "delta_N_den", "cesaro",
                                 "normalized_error"]
    assert all(r["R"] == "0" for r in rows if int(r["N"]) % 2)
    assert all(r["identity_pass"] == "true" for r in rows)
    assert [f for f in os.listdir(tmp_path)] == ["out.csv"]


def test_verify_budget_exit(capsys):
    code, _, err = run(capsys, "verify", "q=3", "a=T", "d=2", "--Nmax", "12", "--budget", "1000")
    assert code == 2 and "BudgetExceeded" in err


def test_verify_budget_from_env(capsys, monkeypatch):
    monkeypatch.setenv("ORDERDENSITY_BUDGET", "100")
    code, _, _ = run(capsys, "verify", "q=3", "a=T", "d=2", "--Nmax", "5")
    assert code == 2


def test_verify_identity_failure_exit(capsys, monkeypatch):
    real = empirical.count_record

    def broken(profile, N, **opts):
        rec = real(profile, N, **opts)
        rec.identity_pass = N != 3
        return rec

    monkeypatch.setattr(empirical, "count_record", broken)
    code, out, err = run(capsys, "verify", "q=3", "a=T", "d=2", "--Nmax", "4")
    assert code == 4 and json.loads(out)["summary"]["failures"] == [3]


def test_verify_special_case(capsys):
    code, out, _ = run(capsys, "verify", "q=3", "a=T^2/(T+1)", "d=1", "--Nmax", "4")
    assert code == 0 and json.loads(out)["summary"]["all_pass"]


def test_probe_d1(capsys):
    code, out, _ = run(capsys, "probe-d1", "q=2", "a=T", "d=3", "--steps", "3")
    doc = json.loads(out)
    assert code == 0
    assert all(exact(p["ratio"]) == 0 for p in doc["zero_sequence"])
    assert exact(doc["y_delta_constant"]) == Fraction(2, 3)


def test_probe_d1_f_too_small(capsys):
    code, _, err = run(capsys, "probe-d1", "q=3", "a=T", "d=2")
    assert code == 2 and "f >= 2" in err


def test_deterministic_output(capsys):
    _, first, _ = run(capsys, "verify", "q=5", "a=T+1", "d=4", "--Nmax", "6")
    empirical.clear_cache()
    _, second, _ = run(capsys, "verify", "q=5", "a=T+1", "d=4", "--Nmax", "6", "--workers", "3")
    assert first == second


def test_rationals_round_trip(capsys):
    _, out, _ = run(capsys, "verify", "q=3", "a=T", "d=2", "--Nmax", "6")
    doc = json.loads(out)
    for row in doc["rows"]:
        for key in ("delta_N", "cesaro", "normalized_error"):
            text = row[key]["exact"]
            assert cli.fraction_text(Fraction(text)) == text


def test_atomic_write_leaves_nothing_on_interrupt(tmp_path, monkeypatch):
    target = tmp_path / "x.json"

    class Boom(KeyboardInterrupt):
        pass

    def explode(*a, **k):
        raise Boom()

    monkeypatch.setattr(cli.os, "replace", explode)
    with pytest.raises(Boom):
        cli.write_atomic(str(target), "{}")
    assert list(tmp_path.iterdir()) == []

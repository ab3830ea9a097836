import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracgreen.cli import OutputSpec, Table, format_csv, main, parse_csv, parse_range
from fracgreen.errors import DomainError


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    t = parse_csv(text)
    return t.columns, t.rows


def test_ml_cosine(capsys):
    code, out, _ = run(["ml", "--alpha", "2", "--beta", "1", "--x", "-9"], capsys)
    cols, r = rows(out)
    assert code == 0 and cols == ["x", "argument", "value", "method"]
    assert r[0][2] == pytest.approx(math.cos(3), abs=1e-11) and r[0][3] == "ClosedForm"


def test_ml_zero(capsys):
    _, out, _ = run(["ml", "--alpha", "1.5", "--beta", "1", "--x", "0"], capsys)
    assert rows(out)[1][0][2] == 1.0


def test_ml_range_monotone(capsys):
    _, out, _ = run(["ml", "--alpha", "0.5", "--x-range", "0:50:101"], capsys)
    v = np.array([r[2] for r in rows(out)[1]])
    assert len(v) == 101 and np.all(v > 0) and np.all(np.diff(v) < 0)


def test_ml_neg_power(capsys):
    _, out, _ = run(["ml", "--alpha", "2", "--x", "3", "--neg-power"], capsys)
    assert rows(out)[1][0][2] == pytest.approx(math.cos(3), abs=1e-11)


def test_ml_domain_error(capsys):
    code, out, err = run(["ml", "--alpha", "-1", "--x", "0"], capsys)
    assert code == 2 and out == "" and len(err.strip().splitlines()) == 1


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as e:
        main(["ml", "--alpha"])
    assert e.value.code == 2


def profile_values(args, capsys):
    code, out, _ = run(["profile"] + args, capsys)
    assert code == 0
    return np.array([np.nan if r[1] is None else r[1] for r in rows(out)[1]])


def test_profile_positive(capsys):
    g = profile_values(["--c", "2", "--alpha", "2.5", "--n", "401"], capsys)
    assert np.all(g > 0)
    half = g[200:]
    assert np.all(np.diff(half) < 0)


def test_profile_sign_changes(capsys):
    g = profile_values(["--c", "10", "--alpha", "2.5", "--n", "401"], capsys)
    assert np.any(g < 0)


def test_profile_two_pairs_of_zeros(capsys):
    g = profile_values(["--c", "60", "--alpha", "3.5", "--n", "801"], capsys)
    assert np.count_nonzero(np.diff(np.sign(g)) != 0) == 4


def test_profile_closed_refused(capsys):
    code, _, err = run(["profile", "--c", "2", "--alpha", "2.5", "--method", "closed"], capsys)
    assert code == 2 and "closed form" in err


def test_profile_singular_empty_field(capsys):
    code, out, _ = run(["profile", "--c", "1", "--alpha", "0.5", "--n", "3"], capsys)
    assert out.splitlines()[2].split(",")[1] == ""


def test_pi_error(capsys):
    code, out, _ = run(["pi-error", "--alpha", "2.5", "--c-range", "0.5:17.5:18"], capsys)
    r = rows(out)[1]
    assert code == 0 and all(row[4] == 1 and row[3] <= 1e-7 for row in r)
    _, out, _ = run(["pi-error", "--alpha", "3.5", "--c-range", "0.25:5:20"], capsys)
    assert all(row[3] <= 1e-7 for row in rows(out)[1])


def test_pi_error_flags_invalid_rows(capsys):
    _, out, _ = run(["pi-error", "--alpha", "2.5", "--c-range", "10:30:3"], capsys)
    r = rows(out)[1]
    assert [row[4] for row in r] == [1, 0, 0] and r[1][2] is None


def test_zeros_alpha4_check(capsys):
    code, out, _ = run(["zeros", "--alpha", "4", "--alpha4-check"], capsys)
    cols, r = rows(out)
    assert code == 0 and len(r) == 5 and cols[-1] == "abs_diff"
    assert r[0][-1] <= 1e-8 and r[4][-1] <= 2e-2


def test_zeros_single(capsys):
    _, out, _ = run(["zeros", "--alpha", "2.5"], capsys)
    assert rows(out)[1][0][2] == pytest.approx(2.507, abs=0.01)


def test_zeros_range(capsys, monkeypatch):
    monkeypatch.setenv("FRACGREEN_THREADS", "2")
    _, out, _ = run(["zeros", "--alpha-range", "3.6:4:3", "--k-max", "3"], capsys)
    cols, r = rows(out)
    assert cols == ["alpha", "c1", "c2", "c3"] and len(r) == 3
    assert all(row[1] is not None for row in r)


@pytest.mark.parametrize("args", [["zeros", "--alpha", "1.5"],
                                  ["zeros", "--alpha-range", "4:3:5"],
                                  ["zeros", "--alpha", "3", "--alpha4-check"]])
def test_zeros_invalid(args, capsys):
    assert run(args, capsys)[0] == 2


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("FRACGREEN_THREADS", "0")
    assert run(["profile", "--c", "1", "--alpha", "1.5", "--n", "3"], capsys)[0] == 2


def test_json_and_file_output(tmp_path, capsys):
    f = tmp_path / "o.json"
    prov = tmp_path / "p.json"
    code, out, _ = run(["profile", "--c", "1", "--alpha", "0.5", "--n", "3", "--format", "json",
                        "--output", str(f), "--provenance", str(prov)], capsys)
    assert code == 0 and out == ""
    data = json.loads(f.read_text())
    assert data[1]["G"] is None and data[0]["method"] == "Fourier"
    meta = json.loads(prov.read_text())
    assert meta["settings"]["quad"]["abs_tol"] == 1e-10 and meta["output"]["precision"] == 12


def test_precision(capsys):
    _, out, _ = run(["ml", "--alpha", "1", "--x", "-1", "--precision", "3"], capsys)
    assert out.splitlines()[1].split(",")[2] == "3.679e-01"
    assert run(["ml", "--alpha", "1", "--x", "-1", "--precision", "18"], capsys)[0] == 2


def test_verify_suite(capsys):
    code, out, _ = run(["verify", "asymptotics"], capsys)
    assert code == 0 and out.count("PASS") == 4


def test_deterministic(capsys):
    args = ["profile", "--c", "3", "--alpha", "1.7", "--n", "33", "--method", "integral"]
    assert run(args, capsys)[1] == run(args, capsys)[1]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "fracgreen.cli", "ml", "--alpha", "1", "--x", "0"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("x,argument,value,method")


def test_parse_range():
    assert list(parse_range("0:1:3")) == [0.0, 0.5, 1.0]
    for bad in ("0:1", "1:0:3", "a:1:2", "0:1:0"):
        with pytest.raises(DomainError):
            parse_range(bad)


def test_output_spec():
    with pytest.raises(DomainError):
        OutputSpec(precision=0)
    with pytest.raises(DomainError):
        OutputSpec(format="xml")


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(data=st.lists(st.tuples(finite, st.one_of(st.none(), finite), st.integers(-5, 5),
                                st.sampled_from(["Series", "BranchCut"])), max_size=8),
       precision=st.integers(1, 17))
def test_csv_round_trip(data, precision):
    t = Table(["x", "g", "k", "method"], [list(r) for r in data])
    text = format_csv(t, precision)
    assert format_csv(parse_csv(text), precision) == text

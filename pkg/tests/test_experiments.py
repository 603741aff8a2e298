import csv

from resetwords.cli import EXIT_OK, main
from resetwords.experiments import CSV_HEADER, bounds_rows, max_avoiding_length, write_rows
from resetwords.generators import cerny


def read(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def experiment(tmp_path, name, *argv):
    path = tmp_path / name
    assert main(["experiment", *argv, "--out", str(path)], open("/dev/null", "w")) == EXIT_OK
    return path


def test_avoiding_sweep_is_reproducible(tmp_path):
    args = ("avoiding", "--n-min", "4", "--n-max", "6", "--samples", "5", "--seed", "7", "--cerny")
    a = experiment(tmp_path, "a.csv", *args)
    b = experiment(tmp_path, "b.csv", *args)
    assert a.read_bytes() == b.read_bytes()
    rows = read(a)
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == 1 + 3 * 6
    cerny_rows = [r for r in rows[1:] if r[0] == "cerny"]
    assert [r[6] for r in cerny_rows] == ["4", "5", "6"]
    assert all(r[8] == "true" for r in rows[1:])
    c = experiment(tmp_path, "c.csv", *args, "--jobs", "2")
    assert c.read_bytes() == a.read_bytes()


def test_cerny_max_avoiding():
    assert max_avoiding_length(cerny(4)) == 4


def test_pair_sweep(tmp_path):
    path = experiment(tmp_path, "p.csv", "pair", "--n-min", "3", "--n-max", "5", "--samples", "4")
    rows = read(path)[1:]
    assert len(rows) == 12
    for r in rows:
        n = int(r[1])
        assert r[5] == "max_pair_with_state" and int(r[6]) <= n * (n - 1) // 2 == int(r[7])


def test_empty_range_is_header_only(tmp_path):
    path = experiment(tmp_path, "e.csv", "avoiding", "--n-min", "6", "--n-max", "5")
    assert path.read_text() == ",".join(CSV_HEADER) + "\n"


def test_resume_completes_partial_file(tmp_path):
    args = ("avoiding", "--n-min", "4", "--n-max", "5", "--samples", "4")
    full = experiment(tmp_path, "full.csv", *args)
    data = full.read_bytes()
    partial = tmp_path / "partial.csv"
    # keep a few complete rows plus half of the next one
    lines = data.split(b"\n")
    partial.write_bytes(b"\n".join(lines[:4]) + b"\n" + lines[4][:5])
    assert main(["experiment", *args, "--out", str(partial), "--resume"],
                open("/dev/null", "w")) == EXIT_OK
    assert partial.read_bytes() == data
    # resuming a finished file writes nothing
    assert write_rows(lambda done: iter(()), str(partial), resume=True) == 0
    assert partial.read_bytes() == data


def test_bounds_sweep(tmp_path):
    path = experiment(tmp_path, "bounds.csv", "bounds", "--n-max", "1000")
    rows = read(path)[1:]
    last = rows[-1]
    assert last[5] == "first_improving_n" and last[6] == "724"
    k44 = [r for r in rows if r[1] == "44" and r[5] == "k_choice"]
    assert k44[0][6] == "5"
    flags = {int(r[1]): r[8] for r in rows if r[5] == "new_bound"}
    assert flags[723] == "false" and flags[724] == "true"
    decimals = [r for r in rows if r[1] == "10" and r[5] == "new_bound_decimal"]
    assert decimals[0][6] == "187.8595980465815"


def test_bounds_single_n():
    rows = list(bounds_rows(1))
    assert {r[1] for r in rows} == {1}
    assert rows[-1][5] == "first_improving_n" and rows[-1][6] == ""

import pytest

from planforge.errors import ParseError, ValidationError
from planforge.sweep import SWEEP_HEADER, load_sweep_spec, mean_iterations, read_sweep_csv, run_sweep, write_sweep_csv

ONE_CELL = """\
algorithms: [tlbo]
k_values: [5]
qc_thresholds: [0.5]
instances: [[6, 3, 3]]
seeds: [0]
max_iterations: 10
"""


def test_single_cell():
    rows = run_sweep(load_sweep_spec(ONE_CELL), threads=0)
    assert len(rows) == 1
    text = write_sweep_csv(rows)
    assert text.splitlines()[0] == ",".join(SWEEP_HEADER)
    assert read_sweep_csv(text) == rows


def test_json_spec_and_cartesian_count():
    spec = load_sweep_spec(
        '{"algorithms": ["tlbo", "vega", "agga"], "k_values": [5, 10, 20],'
        ' "qc_thresholds": [0.2, 0.3, 0.4, 0.5, 0.6, 0.7], "instances": [[6, 3]],'
        ' "seeds": [0, 1], "replication_degree": 2, "max_iterations": 5}'
    )
    assert spec.instances == ((6, 3, 2),)
    rows = run_sweep(spec, threads=0)
    assert len(rows) == spec.n_cells == 3 * 3 * 6 * 2
    keys = [(r["algo"], r["mode"], r["N_s"], r["N_r"], r["K"], r["qc"], r["seed"]) for r in rows]
    assert keys == sorted(keys)


def test_parallel_matches_sequential():
    text = ONE_CELL.replace("[tlbo]", "[tlbo, agga]").replace("[0]", "[0, 1, 2]")
    spec = load_sweep_spec(text)
    assert run_sweep(spec, threads=2) == run_sweep(spec, threads=0)


def test_threads_env(monkeypatch):
    monkeypatch.setenv("PLANFORGE_THREADS", "lots")
    with pytest.raises(ValidationError):
        run_sweep(load_sweep_spec(ONE_CELL))
    monkeypatch.setenv("PLANFORGE_THREADS", "0")
    assert len(run_sweep(load_sweep_spec(ONE_CELL))) == 1


def test_unreached_cells_are_empty():
    text = ONE_CELL.replace("[0.5]", "[0.0001]").replace("[5]", "[50]")
    rows = run_sweep(load_sweep_spec(text), threads=0)
    assert rows[0]["iterations_to_topk"] is None
    assert write_sweep_csv(rows).splitlines()[1].split(",")[7] == ""
    assert mean_iterations(rows, 10)[("tlbo", 6, 3, 50, 0.0001)] == 11


@pytest.mark.parametrize(
    "text, exc",
    [
        ("algorithms: [tlbo\n", ParseError),
        ("[1, 2]\n", ValidationError),
        (ONE_CELL.replace("[tlbo]", "[]"), ValidationError),
        (ONE_CELL.replace("[tlbo]", "[sa]"), ValidationError),
        (ONE_CELL.replace("[0.5]", "[-0.5]"), ValidationError),
        (ONE_CELL.replace("seeds: [0]\n", ""), ValidationError),
        (ONE_CELL + "color: red\n", ValidationError),
        (ONE_CELL + "overrides: {agga: {mode: faithful}}\n", ValidationError),
        (ONE_CELL + "overrides: {tlbo: {bogus: 1}}\n", ValidationError),
    ],
)
def test_bad_specs(text, exc):
    with pytest.raises(exc):
        load_sweep_spec(text)


def test_bad_csv_header():
    with pytest.raises(ParseError):
        read_sweep_csv("a,b\n1,2\n")

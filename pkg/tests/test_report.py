import os

from sirsbif.report import displacement_svg, phase_portrait_svg, write_csv, write_json
from sirsbif.dynamics import LimitCycleRecord, Trajectory
from sirsbif import validate_params


def test_write_csv_round_trip_floats(tmp_path):
    path = tmp_path / "t.csv"
    value = 0.1 + 0.2
    write_csv(str(path), ["a", "b", "c"], [(value, None, True)])
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "a,b,c"
    field = lines[1].split(",")[0]
    assert float(field) == value          # shortest round-trip representation
    assert lines[1].split(",")[1] == ""
    assert lines[1].split(",")[2] == "true"


def test_write_csv_leaves_no_temp_files(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(str(path), ["x"], [(1.5,)])
    leftovers = [f for f in os.listdir(tmp_path) if f.startswith(".tmp-")]
    assert leftovers == []


def test_write_json_sorted_and_terminated(tmp_path):
    path = tmp_path / "r.json"
    write_json(str(path), {"b": 1, "a": 2})
    text = path.read_text()
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")


def test_displacement_svg_handles_truncated_and_empty(tmp_path):
    rec = LimitCycleRecord(anchor=(1.0, 1.0), ray=(0.8, 0.6), radius=0.02,
                           period=5.0, amplitude_x=0.01, stability="repelling",
                           residual=1e-12)
    full = tmp_path / "full.svg"
    displacement_svg(str(full), [(0.01, -1e-6), (0.02, 0.0), (0.04, None)], [rec])
    assert full.stat().st_size > 0
    empty = tmp_path / "empty.svg"
    displacement_svg(str(empty), [(0.01, None)], [])
    assert empty.stat().st_size > 0


def test_phase_portrait_svg_smoke(tmp_path):
    params = validate_params(1, 2, 1.5, 1, 2)
    traj = Trajectory(times=[0.0, 1.0], states=[(0.5, 0.5), (0.52, 0.49)])
    path = tmp_path / "p.svg"
    phase_portrait_svg(str(path), params, [traj], equilibria=[], cycles=None)
    assert path.stat().st_size > 0

import pytest

from srlmp.schedule import ReliabilitySchedule


def test_tail_repeats():
    s = ReliabilitySchedule(3.0, [1.0, 2.0], [0.5], d2=[0.1, 0.2, 0.3])
    assert s.at(1) == (1.0, 0.1, 0.5)
    assert s.at(2) == (2.0, 0.2, 0.5)
    assert s.at(50) == (2.0, 0.3, 0.5)
    assert s.gamma == 2
    with pytest.raises(ValueError):
        s.at(0)


def test_list_size_one():
    s = ReliabilitySchedule.constant(2.0, 1.5, 1.0)
    assert s.gamma == 1
    assert s.at(7) == (1.5, 0.0, 1.0)


def test_json_round_trip(tmp_path):
    s = ReliabilitySchedule(2.9444389791664403, [1.1, 1.2], [1.0, 1.0], d2=[0.4, 0.5], meta={"q": 4})
    path = tmp_path / "s.json"
    s.save(path)
    t = ReliabilitySchedule.load(path)
    assert t == s
    assert ReliabilitySchedule.from_dict(s.to_dict()) == s
    assert "d2" not in ReliabilitySchedule.constant(1.0, 1.0, 1.0).to_dict()


def test_validation():
    with pytest.raises(ValueError):
        ReliabilitySchedule(-1.0, [1.0], [1.0])
    with pytest.raises(ValueError):
        ReliabilitySchedule(1.0, [], [1.0])
    with pytest.raises(ValueError):
        ReliabilitySchedule.from_dict({"d_ch": 1.0, "d1": [1.0]})

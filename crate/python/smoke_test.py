"""Smoke test for the gpmult extension.

Build and install it first:

    pip install -e crates/py --no-build-isolation
"""

import json
import pathlib
import sys

import gpmult

SCENARIOS = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "scenarios"


def main() -> int:
    d = gpmult.Scenario.from_file(str(SCENARIOS / "d_path_mixed.json"))
    assert d.vertices == [0, 1, 2], d.vertices
    assert d.setup_ok()
    assert d.normalize([(0, 1), (1, 1)]) == d.normalize([(1, 1), (0, 1)])
    assert d.normalize([(0, 1), (0, 2)]) == []
    assert d.eval([]) == [1, 1, 1]
    assert abs(d.eval([(2, 4)])[0] - 0.5) < 1e-12

    report = d.verify("main")
    assert report["passed"], report
    assert report["config"]["name"] == d.name

    bad = gpmult.Scenario.from_file(str(SCENARIOS / "sabotage_not_pd.json"))
    assert not bad.verify("main")["passed"]
    assert any(not ok for ok, _ in bad.vertex_positivity())

    text = json.loads((SCENARIOS / "a_edgeless_z2.json").read_text())
    text["graph"]["edges"] = [[1, 1]]
    try:
        gpmult.Scenario.from_json(json.dumps(text))
    except gpmult.ConfigError as e:
        assert str(e).startswith("LoopEdge at /graph/edges/0"), e
    else:
        raise AssertionError("loop edge accepted")

    try:
        d.normalize([(1, 5)])
    except ValueError as e:
        assert str(e).startswith("ElementOutOfRange"), e
    else:
        raise AssertionError("out-of-range element accepted")

    print("smoke test ok:", d)
    return 0


if __name__ == "__main__":
    sys.exit(main())

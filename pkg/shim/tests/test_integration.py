"""End to end: the evolution loop executing bare pack functions via the shim."""

import json

from conftest import REFERENCE_PACK, run_packbench

ONE_PER_BIN = """\
def pack(items, capacity):
    return [[(i, 0, 0)] for i in range(len(items))]
"""


def test_evolve_with_shim_launch_template(tmp_path):
    dataset_path = tmp_path / "ds.json"
    r = run_packbench("gen", "--seed", "50", "--count", "3", "--items", "10",
                      "--out", str(dataset_path))
    assert r.returncode == 0, r.stderr

    pool = tmp_path / "pool"
    pool.mkdir()
    # bare pack functions, no main guard: only runnable through the shim
    for name, source in (("a-ref", REFERENCE_PACK), ("b-naive", ONE_PER_BIN)):
        (pool / f"{name}.md").write_text(
            f"My approach:\n\n```python\n{source}```\n", encoding="utf-8")

    config = {
        "provider": "mock",
        "fixture_dir": str(pool),
        "fixture_cycle": True,
        "seed": 3,
        "population": 2,
        "generations": 2,
        "dataset": str(dataset_path),
        "jobs": 2,
        "launch": ["{python}", "-m", "packshim", "{source}"],
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))

    run_dir = tmp_path / "run"
    r = run_packbench("evolve", "--config", str(config_path),
                      "--out", str(run_dir))
    assert r.returncode == 0, r.stderr

    state = json.loads((run_dir / "run.json").read_text())
    assert state["best_so_far"] is not None
    candidates = state["generations"][0]["candidates"]
    assert all(c["score"] is not None for c in candidates), candidates

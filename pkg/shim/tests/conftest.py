import json
import subprocess
import sys

import pytest

PACKBENCH = [sys.executable, "-m", "packbench"]
PACKSHIM = [sys.executable, "-m", "packshim"]

# Reference pack function: first-fit decreasing-height strips of the full
# bin width, stacked into bins first-fit by height. Mirrors the hybrid
# first-fit baseline exposed by `packbench solve --algo hff`.
REFERENCE_PACK = """\
def pack(items, capacity):
    W, H = capacity
    order = sorted(range(len(items)),
                   key=lambda i: (-items[i][1], -items[i][0], i))
    strips = []  # [height, used_width, [(item, x)]]
    for i in order:
        w, h = items[i]
        for strip in strips:
            if strip[1] + w <= W:
                strip[2].append((i, strip[1]))
                strip[1] += w
                break
        else:
            strips.append([h, w, [(i, 0)]])
    bins = []
    used = []
    for height, _, members in strips:
        for b in range(len(bins)):
            if used[b] + height <= H:
                base = used[b]
                used[b] += height
                bins[b].extend((i, x, base) for (i, x) in members)
                break
        else:
            bins.append([(i, x, 0) for (i, x) in members])
            used.append(height)
    return bins
"""


def run_shim(source_path, instance_text):
    return subprocess.run(PACKSHIM + [str(source_path)], input=instance_text,
                          capture_output=True, text=True)


def run_packbench(*args):
    return subprocess.run(PACKBENCH + list(args), capture_output=True,
                          text=True)


@pytest.fixture(scope="session")
def seeded_suite(tmp_path_factory):
    """20-instance dataset plus native hff solutions, via the packbench CLI."""
    root = tmp_path_factory.mktemp("suite")
    dataset_path = root / "dataset.json"
    r = run_packbench("gen", "--seed", "404", "--count", "20", "--items", "50",
                      "--out", str(dataset_path))
    assert r.returncode == 0, r.stderr
    solutions_dir = root / "native"
    r = run_packbench("solve", "--algo", "hff", "--dataset", str(dataset_path),
                      "--out", str(solutions_dir))
    assert r.returncode == 0, r.stderr

    dataset = json.loads(dataset_path.read_text())
    instances = [json.dumps(obj) for obj in dataset["instances"]]
    native_bins = []
    for i in range(len(instances)):
        sol = json.loads((solutions_dir / f"solution-{i:03d}.json").read_text())
        native_bins.append(sum(1 for b in sol["bins"] if b["placements"]))
    return root, instances, native_bins

"""Shim acceptance: fidelity against the native baseline on 20 seeded instances."""

import json

from conftest import REFERENCE_PACK, run_packbench, run_shim


def test_criterion_8_shim_fidelity(seeded_suite, tmp_path):
    root, instances, native_bins = seeded_suite
    src = tmp_path / "reference.py"
    src.write_text(REFERENCE_PACK, encoding="utf-8")

    shim_bins = []
    for i, instance_text in enumerate(instances):
        r = run_shim(src, instance_text)
        assert r.returncode == 0, r.stderr

        inst_path = tmp_path / "instance.json"
        inst_path.write_text(instance_text)
        sol_path = tmp_path / "solution.json"
        sol_path.write_text(r.stdout)
        check = run_packbench("validate", "--instance", str(inst_path),
                              "--solution", str(sol_path))
        assert check.returncode == 0, f"instance {i}: {check.stdout}"

        solution = json.loads(r.stdout)
        shim_bins.append(sum(1 for b in solution["bins"] if b["placements"]))

    identical = shim_bins == native_bins

    # malformed sources produce the documented nonzero-exit diagnostics
    bad = tmp_path / "bad.py"
    bad.write_text("def build(items):\n    return []\n", encoding="utf-8")
    missing = run_shim(bad, instances[0])
    bad2 = tmp_path / "bad2.py"
    bad2.write_text("def pack(items, capacity):\n    return 3\n",
                    encoding="utf-8")
    badshape = run_shim(bad2, instances[0])
    diagnostics_ok = (missing.returncode != 0 and "MissingFunction" in missing.stderr
                      and badshape.returncode != 0
                      and "BadReturnShape" in badshape.stderr)

    ok = identical and diagnostics_ok
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE 8 [shim fidelity]: {status} "
          f"(20/20 instances, bins {'identical' if identical else shim_bins})")
    assert identical, (shim_bins, native_bins)
    assert diagnostics_ok

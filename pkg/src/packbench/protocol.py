"""Subprocess harness for untrusted candidate heuristics.

A candidate is any program that reads one instance object on stdin and
writes one solution object on stdout (wire formats in model.py). The
harness never trusts candidate output: everything is re-validated here,
and a Valid verdict is only issued when the validator returns no
violations. Exit status is irrelevant when the output parses; a crash
only matters when the candidate failed to produce a solution.

Candidates run in their own session so that a timeout can kill the whole
process group, leaving no orphans behind.
"""

from __future__ import annotations

import concurrent.futures
import os
import signal
import subprocess
import time
from dataclasses import dataclass, field

from .errors import MalformedOutput
from .metrics import Score, bins_used, total_utilization
from .model import Dataset, Instance, Solution, decode_solution, encode_instance
from .validate import Violation, validate

VALID = "valid"
INVALID = "invalid"
CRASHED = "crashed"
TIMED_OUT = "timed_out"
MALFORMED = "malformed"

DEFAULT_TIMEOUT_S = 10.0


@dataclass(frozen=True)
class CandidateSpec:
    id: str
    launch: tuple[str, ...]
    timeout_seconds: float = DEFAULT_TIMEOUT_S
    workdir: str | None = None


@dataclass
class EvalOutcome:
    candidate: str
    instance_index: int
    verdict: str
    wall_time_seconds: float
    score: Score | None = None
    violations: list[Violation] = field(default_factory=list)
    detail: str = ""
    solution: Solution | None = None  # kept in memory only, never persisted

    def to_obj(self) -> dict:
        obj = {
            "candidate": self.candidate,
            "instance": self.instance_index,
            "verdict": self.verdict,
            "wall_time_seconds": self.wall_time_seconds,
        }
        if self.score is not None:
            obj["score"] = {
                "bins_used": self.score.bins_used,
                "utilization": self.score.utilization,
                "runtime_seconds": self.score.runtime_seconds,
            }
        if self.violations:
            obj["violations"] = [v.to_obj() for v in self.violations]
        if self.detail:
            obj["detail"] = self.detail
        return obj


def run_candidate(spec: CandidateSpec, instance: Instance,
                  instance_index: int = 0) -> EvalOutcome:
    """Execute one candidate on one instance and judge the result.

    Verdict mapping: unkillable-slow -> timed_out; stdout that parses and
    decodes -> valid/invalid by the validator (even on nonzero exit, the
    output is the contract); undecodable stdout -> crashed when the exit
    status is nonzero, else malformed.
    """
    if spec.timeout_seconds <= 0:
        raise ValueError("timeout must be positive")
    request = encode_instance(instance)
    start = time.perf_counter()
    try:
        proc = subprocess.Popen(
            spec.launch, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
            stderr=subprocess.PIPE, cwd=spec.workdir, text=True,
            start_new_session=True)
    except OSError as e:
        wall = time.perf_counter() - start
        return EvalOutcome(spec.id, instance_index, CRASHED, wall,
                           detail=f"launch failed: {e}")
    try:
        stdout, stderr = proc.communicate(request, timeout=spec.timeout_seconds)
    except subprocess.TimeoutExpired:
        _kill_group(proc)
        stdout, stderr = proc.communicate()
        wall = time.perf_counter() - start
        return EvalOutcome(spec.id, instance_index, TIMED_OUT, wall,
                           detail=f"killed after {spec.timeout_seconds}s")
    wall = time.perf_counter() - start

    try:
        solution = decode_solution(stdout, instance)
    except MalformedOutput as e:
        if proc.returncode != 0:
            return EvalOutcome(spec.id, instance_index, CRASHED, wall,
                               detail=f"exit {proc.returncode}: {_excerpt(stderr)}")
        return EvalOutcome(spec.id, instance_index, MALFORMED, wall, detail=str(e))

    violations = validate(instance, solution)
    if violations:
        return EvalOutcome(spec.id, instance_index, INVALID, wall,
                           violations=violations, solution=solution)
    score = Score(bins_used=bins_used(solution),
                  utilization=total_utilization(instance, solution),
                  runtime_seconds=wall)
    return EvalOutcome(spec.id, instance_index, VALID, wall, score=score,
                       solution=solution)


def _kill_group(proc: subprocess.Popen) -> None:
    try:
        os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        proc.kill()


def _excerpt(text: str, limit: int = 300) -> str:
    text = (text or "").strip()
    return text[:limit]


@dataclass
class DatasetEvaluation:
    """Outcome of running one candidate over a whole dataset.

    A single non-valid instance disqualifies the candidate; otherwise the
    aggregate score is the arithmetic mean of per-instance scores.
    """
    candidate: str
    outcomes: list[EvalOutcome]
    score: Score | None
    disqualified: bool
    reasons: list[str] = field(default_factory=list)


def evaluate_on_dataset(spec: CandidateSpec, dataset: Dataset,
                        jobs: int = 1) -> DatasetEvaluation:
    instances = list(enumerate(dataset.instances))
    if jobs > 1 and len(instances) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(
                lambda pair: run_candidate(spec, pair[1], pair[0]), instances))
    else:
        outcomes = [run_candidate(spec, inst, i) for i, inst in instances]
    outcomes.sort(key=lambda o: o.instance_index)

    reasons = []
    for o in outcomes:
        if o.verdict != VALID:
            summary = o.detail
            if o.verdict == INVALID:
                kinds = sorted({v.kind for v in o.violations})
                summary = ",".join(kinds)
            reasons.append(f"instance {o.instance_index}: {o.verdict}"
                           + (f" ({summary})" if summary else ""))
    if reasons:
        return DatasetEvaluation(spec.id, outcomes, None, True, reasons)

    count = len(outcomes)
    if count == 0:
        return DatasetEvaluation(spec.id, outcomes, None, True,
                                 ["dataset has no instances"])
    score = Score(
        bins_used=sum(o.score.bins_used for o in outcomes) / count,
        utilization=sum(o.score.utilization for o in outcomes) / count,
        runtime_seconds=sum(o.score.runtime_seconds for o in outcomes) / count,
    )
    return DatasetEvaluation(spec.id, outcomes, score, False)

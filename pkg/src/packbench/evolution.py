"""Island-based evolutionary search over LLM-generated packing heuristics.

Each generation asks the provider for `population` candidate sources
(initial prompt first, then refinement prompts carrying the latest
exemplars), runs every candidate through the subprocess harness on the
whole dataset, clusters the survivors into islands keyed by their average
bin count, and picks one member from each of the three best islands as
the next round's exemplars. The best candidate ever seen is retained
across generations (elitism), compared on bins then utilization only so
that reruns with the same seed reproduce the same persisted state; wall
times are recorded but never steer the search.

Run directory layout:

  run.json                     full state, rewritten after each generation
  gen-<k>/candidate-<i>.src    extracted candidate source (verbatim)
  gen-<k>/candidate-<i>.raw    raw response when no code could be extracted
  gen-<k>/outcomes.json        per-instance verdicts for every candidate
  report.csv / report.txt / trend.csv / profile.csv (+ .png figures)
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import NoCodeFound, NoIslands, ProviderError
from .llm import (Exemplar, GenerationRequest, PackingRules, WIRE_SCHEMA,
                  build_initial_prompt, build_refinement_prompt, extract_code,
                  generate_batch, make_provider)
from .metrics import Score
from .model import Dataset
from .protocol import CandidateSpec, evaluate_on_dataset
from .rng import MASK64, SplitMix64

DEFAULT_POPULATION = 20
DEFAULT_GENERATIONS = 6
TOP_ISLANDS = 3

_GAMMA = 0x9E3779B97F4A7C15


def _default_jobs() -> int:
    return os.cpu_count() or 1


@dataclass
class EvolutionConfig:
    seed: int = 0
    population: int = DEFAULT_POPULATION
    generations: int = DEFAULT_GENERATIONS
    dataset: str = ""
    provider: str = "mock"
    fixture_dir: str = ""
    fixture_cycle: bool = False
    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-4o"
    temperature: float = 1.0
    max_tokens: int = 2048
    parallelism: int = 1
    jobs: int = field(default_factory=_default_jobs)
    timeout_seconds: float = 10.0
    launch: tuple[str, ...] = ("{python}", "{source}")

    @classmethod
    def from_file(cls, path: str, **overrides) -> "EvolutionConfig":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        raw.update({k: v for k, v in overrides.items() if v is not None})
        known = {f_.name for f_ in cls.__dataclass_fields__.values()}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "launch" in raw:
            raw["launch"] = tuple(raw["launch"])
        return cls(**raw)

    def to_obj(self) -> dict:
        return {
            "seed": self.seed, "population": self.population,
            "generations": self.generations, "dataset": self.dataset,
            "provider": self.provider, "fixture_dir": self.fixture_dir,
            "fixture_cycle": self.fixture_cycle, "base_url": self.base_url,
            "model": self.model, "temperature": self.temperature,
            "max_tokens": self.max_tokens, "parallelism": self.parallelism,
            "jobs": self.jobs, "timeout_seconds": self.timeout_seconds,
            "launch": list(self.launch),
        }

    def provider_config(self) -> dict:
        return {"provider": self.provider, "fixture_dir": self.fixture_dir,
                "fixture_cycle": self.fixture_cycle, "seed": self.seed,
                "base_url": self.base_url, "model": self.model}

    def launch_command(self, source_path: str) -> tuple[str, ...]:
        return tuple(
            part.replace("{python}", sys.executable).replace("{source}", source_path)
            for part in self.launch)


@dataclass
class CandidateRecord:
    id: str
    generation: int
    source: str | None
    source_file: str
    provider: str
    prompt_hash: str
    score: Score | None = None
    disqualified: bool = False
    reasons: list[str] = field(default_factory=list)

    def to_obj(self) -> dict:
        obj = {
            "id": self.id, "generation": self.generation,
            "source_file": self.source_file, "provider": self.provider,
            "prompt_hash": self.prompt_hash, "disqualified": self.disqualified,
            "reasons": self.reasons,
            "score": None,
        }
        if self.score is not None:
            obj["score"] = {"bins_used": self.score.bins_used,
                            "utilization": self.score.utilization,
                            "runtime_seconds": self.score.runtime_seconds}
        return obj


@dataclass
class Island:
    key: str  # average bins_used, 2 decimals
    members: list[str]  # candidate ids, best first

    def to_obj(self) -> dict:
        return {"key": self.key, "members": self.members}


@dataclass
class RunState:
    seed: int
    config: EvolutionConfig
    run_dir: Path
    generations: list[dict] = field(default_factory=list)
    best_so_far: CandidateRecord | None = None
    records: dict[str, CandidateRecord] = field(default_factory=dict)

    def snapshot(self) -> dict:
        best = None
        if self.best_so_far is not None:
            best = self.best_so_far.to_obj()
        return {"seed": self.seed, "config": self.config.to_obj(),
                "generations": self.generations, "best_so_far": best}


def record_from_obj(obj: dict) -> CandidateRecord:
    score = None
    if obj.get("score"):
        score = Score(**obj["score"])
    return CandidateRecord(
        id=obj["id"], generation=obj["generation"], source=None,
        source_file=obj["source_file"], provider=obj["provider"],
        prompt_hash=obj["prompt_hash"], score=score,
        disqualified=obj.get("disqualified", False),
        reasons=list(obj.get("reasons", [])))


def load_run_state(run_dir) -> RunState:
    """Reconstruct a RunState from a persisted run directory."""
    run_dir = Path(run_dir).resolve()
    snap = json.loads((run_dir / "run.json").read_text(encoding="utf-8"))
    cfg = dict(snap["config"])
    cfg["launch"] = tuple(cfg["launch"])
    config = EvolutionConfig(**cfg)
    state = RunState(seed=snap["seed"], config=config, run_dir=run_dir,
                     generations=snap["generations"])
    for gen in state.generations:
        for cobj in gen["candidates"]:
            state.records[cobj["id"]] = record_from_obj(cobj)
    if snap["best_so_far"] is not None:
        state.best_so_far = record_from_obj(snap["best_so_far"])
    return state


# Config keys that change results and therefore pin a run directory to its
# original configuration; budget and parallelism knobs may vary on resume.
_IDENTITY_EXCLUDED = {"generations", "jobs", "parallelism"}


def _identity(config_obj: dict) -> dict:
    return {k: v for k, v in config_obj.items() if k not in _IDENTITY_EXCLUDED}


def _better(a: Score, b: Score) -> bool:
    """Deterministic improvement test: bins, then utilization; never runtime."""
    if a.bins_used != b.bins_used:
        return a.bins_used < b.bins_used
    return a.utilization > b.utilization


def _candidate_order_key(record: CandidateRecord):
    return (record.score.bins_used, -record.score.utilization,
            record.generation, record.id)


def build_islands(records: list[CandidateRecord]) -> list[Island]:
    """Group valid candidates by average bins rounded to 2 decimals."""
    groups: dict[str, list[CandidateRecord]] = {}
    for r in records:
        if r.score is None:
            continue
        key = f"{r.score.bins_used:.2f}"
        groups.setdefault(key, []).append(r)
    islands = []
    for key in sorted(groups, key=float):
        members = sorted(groups[key], key=_candidate_order_key)
        islands.append(Island(key=key, members=[m.id for m in members]))
    return islands


def select_exemplars(islands: list[Island], seed: int) -> list[str]:
    """One member id from each of the (up to) three best-keyed islands."""
    if not islands:
        raise NoIslands("no islands to select exemplars from")
    rng = SplitMix64(seed)
    chosen = []
    for island in islands[:TOP_ISLANDS]:
        chosen.append(island.members[rng.below(len(island.members))])
    return chosen


def _exemplar_seed(run_seed: int, generation: int) -> int:
    return (run_seed + (generation + 1) * _GAMMA) & MASK64


class EvolutionRun:
    """Drives one evolution run over a dataset; resumable from run.json."""

    def __init__(self, config: EvolutionConfig, dataset: Dataset, run_dir: str):
        self.config = config
        self.dataset = dataset
        # absolute: candidate launch paths must survive the subprocess cwd
        self.run_dir = Path(run_dir).resolve()
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self.state = RunState(seed=config.seed, config=config,
                              run_dir=self.run_dir)
        self.provider = make_provider(config.provider_config())
        self.rules = PackingRules(dataset.instances[0].bin.width,
                                  dataset.instances[0].bin.height)

    # --- persistence ---

    def _state_path(self) -> Path:
        return self.run_dir / "run.json"

    def persist(self) -> None:
        tmp = self._state_path().with_suffix(".json.tmp")
        tmp.write_text(json.dumps(self.state.snapshot(), indent=2),
                       encoding="utf-8")
        os.replace(tmp, self._state_path())

    def load_existing(self) -> int:
        """Resume from run.json if present; returns generations completed."""
        path = self._state_path()
        if not path.exists():
            return 0
        snap = json.loads(path.read_text(encoding="utf-8"))
        if snap["seed"] != self.config.seed or \
                _identity(snap["config"]) != _identity(self.config.to_obj()):
            raise ValueError(
                f"run directory {self.run_dir} was created with a different "
                "seed or config; refusing to resume")
        self.state.generations = snap["generations"]
        for gen in self.state.generations:
            for cobj in gen["candidates"]:
                self.state.records[cobj["id"]] = record_from_obj(cobj)
        if snap["best_so_far"] is not None:
            self.state.best_so_far = record_from_obj(snap["best_so_far"])
        done = len(self.state.generations)
        self.provider.fast_forward(done * self.config.population)
        return done

    def _source_of(self, record: CandidateRecord) -> str:
        if record.source is None:
            record.source = (self.run_dir / record.source_file).read_text(
                encoding="utf-8")
        return record.source

    # --- prompts ---

    def _current_prompt(self) -> str:
        exemplar_ids: list[str] = []
        for gen in reversed(self.state.generations):
            if gen["exemplars"]:
                exemplar_ids = gen["exemplars"]
                break
        if not exemplar_ids:
            return build_initial_prompt(WIRE_SCHEMA, self.rules)
        exemplars = []
        for cid in exemplar_ids:
            record = self.state.records[cid]
            exemplars.append(Exemplar(source=self._source_of(record),
                                      score=record.score))
        return build_refinement_prompt(exemplars, WIRE_SCHEMA, self.rules)

    # --- the generation step ---

    def run_generation(self) -> None:
        g = len(self.state.generations)
        gen_dir = self.run_dir / f"gen-{g}"
        gen_dir.mkdir(exist_ok=True)
        prompt = self._current_prompt()
        prompt_hash = hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:16]
        request = GenerationRequest(prompt=prompt,
                                    temperature=self.config.temperature,
                                    max_tokens=self.config.max_tokens,
                                    model=self.config.model)

        responses: list[str] = []
        chunk = max(1, self.config.parallelism)
        try:
            while len(responses) < self.config.population:
                want = min(chunk, self.config.population - len(responses))
                responses.extend(generate_batch(
                    self.provider, [request] * want, self.config.parallelism))
        except ProviderError:
            # keep what the provider returned so far for forensics
            for i, resp in enumerate(responses):
                (gen_dir / f"candidate-{i}.raw").write_text(resp, encoding="utf-8")
            raise

        records: list[CandidateRecord] = []
        outcomes_obj: list[dict] = []
        for i, response in enumerate(responses):
            cid = f"g{g}c{i}"
            src_rel = f"gen-{g}/candidate-{i}.src"
            try:
                source = extract_code(response)
            except NoCodeFound as e:
                (gen_dir / f"candidate-{i}.raw").write_text(response,
                                                            encoding="utf-8")
                records.append(CandidateRecord(
                    id=cid, generation=g, source=None, source_file=src_rel,
                    provider=self.provider.id, prompt_hash=prompt_hash,
                    disqualified=True, reasons=[f"no code extracted: {e}"]))
                continue
            src_path = self.run_dir / src_rel
            src_path.write_text(source, encoding="utf-8")
            spec = CandidateSpec(
                id=cid, launch=self.config.launch_command(str(src_path)),
                timeout_seconds=self.config.timeout_seconds,
                workdir=str(gen_dir))
            evaluation = evaluate_on_dataset(spec, self.dataset,
                                             jobs=self.config.jobs)
            outcomes_obj.extend(o.to_obj() for o in evaluation.outcomes)
            records.append(CandidateRecord(
                id=cid, generation=g, source=source, source_file=src_rel,
                provider=self.provider.id, prompt_hash=prompt_hash,
                score=evaluation.score, disqualified=evaluation.disqualified,
                reasons=evaluation.reasons))

        (gen_dir / "outcomes.json").write_text(
            json.dumps(outcomes_obj, indent=2), encoding="utf-8")

        for r in records:
            self.state.records[r.id] = r
        islands = build_islands(records)
        exemplars: list[str] = []
        if islands:
            exemplars = select_exemplars(
                islands, _exemplar_seed(self.config.seed, g))

        gen_best = None
        for r in records:
            if r.score is None:
                continue
            if self.state.best_so_far is None or \
                    _better(r.score, self.state.best_so_far.score):
                self.state.best_so_far = r
            if gen_best is None or _better(r.score, gen_best):
                gen_best = r.score

        self.state.generations.append({
            "index": g,
            "prompt_hash": prompt_hash,
            "candidates": [r.to_obj() for r in records],
            "islands": [isl.to_obj() for isl in islands],
            "best": None if gen_best is None else {
                "bins_used": gen_best.bins_used,
                "utilization": gen_best.utilization,
                "runtime_seconds": gen_best.runtime_seconds},
            "best_so_far_bins": (None if self.state.best_so_far is None
                                 else self.state.best_so_far.score.bins_used),
            "exemplars": exemplars,
        })
        self.persist()

    def run(self) -> RunState:
        done = self.load_existing()
        for _ in range(done, self.config.generations):
            self.run_generation()
        return self.state


def run_evolution(config: EvolutionConfig, dataset: Dataset,
                  run_dir: str) -> RunState:
    """Execute (or resume) a full run and leave report files in run_dir."""
    from . import report  # local import: report pulls in matplotlib
    run = EvolutionRun(config, dataset, run_dir)
    state = run.run()
    report.emit_report(state, dataset, run_dir=run.run_dir)
    return state

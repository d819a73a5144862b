"""Text-generation providers and prompt construction.

Two providers speak one interface: an HTTP client for chat-completion
style endpoints (credential read from the PACKBENCH_API_KEY environment
variable, never from config files) and a deterministic mock that replays
fixture files in an order fixed by a seed. Prompt builders are pure
functions of their inputs so identical runs produce identical prompts.
"""

from __future__ import annotations

import os
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import (CredentialMissing, FixtureExhausted, HttpProviderError,
                     NoCodeFound, NoExemplars, ProviderError)
from .metrics import Score
from .rng import SplitMix64

API_KEY_ENV = "PACKBENCH_API_KEY"

# Wire contract shown to the model; matches model.py exactly.
WIRE_SCHEMA = """\
input (stdin):  {"capacity": [W, H], "items": [[w0, h0], [w1, h1], ...]}
  - W, H: bin width and height; every bin has this same size
  - items[i]: width and height of item i (the index i is the item's identity)
output (stdout): {"bins": [{"placements": [{"item": i, "x": x, "y": y}, ...]}, ...]}
  - one entry per used bin; (x, y) is the lower-left corner of the item
"""

# Canonical skeleton for generated heuristics.
PACK_TEMPLATE = """\
def pack(items, capacity):
    \"\"\"Pack rectangles into the fewest fixed-size bins.

    items: list of (width, height) pairs; item i is identified by its index.
    capacity: (bin_width, bin_height) shared by all bins.
    Returns a list of bins, each a list of (item_index, x, y) placements
    with (x, y) the lower-left corner of the item inside its bin.
    \"\"\"
    # your heuristic here
"""

HARD_RULES = """\
1. Every item must be placed exactly once: no item may appear in more than
   one bin and none may be left out.
2. No item may overlap another item in the same bin (touching edges is fine).
3. Every item must lie entirely within the bin boundaries.
"""


@dataclass(frozen=True)
class PackingRules:
    """Problem parameters surfaced in prompts."""
    bin_width: int
    bin_height: int


@dataclass(frozen=True)
class GenerationRequest:
    prompt: str
    temperature: float = 1.0
    max_tokens: int = 2048
    model: str = ""

    def __post_init__(self):
        if not self.prompt:
            raise ValueError("prompt must be nonempty")


@dataclass(frozen=True)
class Exemplar:
    source: str
    score: Score


def build_initial_prompt(instance_schema: str, rules: PackingRules) -> str:
    return f"""\
You are designing a packing heuristic for the two-dimensional bin packing
problem: place rectangular items into the minimum number of identical bins
of {rules.bin_width}x{rules.bin_height} units (width x height). Items must
not be rotated.

Hard rules your packing must satisfy:
{HARD_RULES}
Objective, in priority order: first minimize the number of bins used; among
packings with equal bin counts, prefer higher total space utilization.

Write a single self-contained Python function following this template,
keeping the name and signature exactly as given:

```python
{PACK_TEMPLATE}```

Your function is executed by a harness that handles all I/O using this wire
contract (you do not read or write anything yourself):

{instance_schema}
Respond with the complete function in one fenced code block.
"""


def build_refinement_prompt(exemplars: list[Exemplar], instance_schema: str,
                            rules: PackingRules) -> str:
    """Initial prompt plus prior best sources to improve on ("best shot").

    Expects up to three exemplars, best score first; fewer are allowed when
    fewer islands exist.
    """
    if not exemplars:
        raise NoExemplars("refinement prompt needs at least one exemplar")
    parts = [build_initial_prompt(instance_schema, rules)]
    parts.append(
        "\nBelow are the best previously generated heuristics, one per "
        "performance island, best first. Study what makes them effective "
        "and write a NEW heuristic that improves on all of them.\n")
    if len(exemplars) < 3:
        parts.append(
            f"(Only {len(exemplars)} island(s) formed this round, so strategy "
            "diversity is reduced; compensate by trying a distinct approach.)\n")
    for rank, ex in enumerate(exemplars, 1):
        parts.append(
            f"\nExample {rank} (average bins {ex.score.bins_used:.2f}, "
            f"utilization {ex.score.utilization:.2f}):\n"
            f"```python\n{ex.source.rstrip()}\n```\n")
    parts.append("\nRespond with the complete improved function in one "
                 "fenced code block.\n")
    return "".join(parts)


class MockProvider:
    """Replays fixture files in a seeded order; fully deterministic.

    Fixtures are the files of one directory sorted by name, visited in a
    SplitMix64-shuffled order. The call counter can be fast-forwarded to
    resume an interrupted run. By default the sequence ends with
    FixtureExhausted; with cycle=True it wraps around instead.
    """

    kind = "mock"

    def __init__(self, fixture_dir: str, seed: int, cycle: bool = False):
        self.fixture_dir = str(fixture_dir)
        self.seed = seed
        self.cycle = cycle
        files = sorted(p for p in Path(fixture_dir).iterdir() if p.is_file())
        if not files:
            raise ProviderError(f"no fixtures in {fixture_dir}")
        order = list(range(len(files)))
        SplitMix64(seed).shuffle(order)
        self._files = files
        self._order = order
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def id(self) -> str:
        return f"mock:{Path(self.fixture_dir).name}:{self.seed}"

    def fast_forward(self, calls: int) -> None:
        self._calls = calls

    def generate(self, request: GenerationRequest) -> str:
        with self._lock:
            idx = self._calls
            self._calls += 1
        if idx >= len(self._files) and not self.cycle:
            raise FixtureExhausted(
                f"{len(self._files)} fixtures, call {idx + 1} requested")
        return self._files[self._order[idx % len(self._files)]].read_text()


class HttpProvider:
    """Client for a chat-completion style endpoint with configurable base URL."""

    kind = "http"

    def __init__(self, base_url: str, model: str, timeout_seconds: float = 120.0):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.timeout_seconds = timeout_seconds

    @property
    def id(self) -> str:
        return f"http:{self.base_url}:{self.model}"

    def fast_forward(self, calls: int) -> None:
        pass  # stateless

    def generate(self, request: GenerationRequest) -> str:
        key = os.environ.get(API_KEY_ENV)
        if not key:
            raise CredentialMissing(f"set {API_KEY_ENV} to use the http provider")
        payload = {
            "model": request.model or self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        try:
            resp = requests.post(f"{self.base_url}/chat/completions",
                                 json=payload,
                                 headers={"Authorization": f"Bearer {key}"},
                                 timeout=self.timeout_seconds)
        except requests.RequestException as e:
            raise ProviderError(f"request failed: {e}") from None
        if resp.status_code != 200:
            raise HttpProviderError(resp.status_code, resp.text[:200])
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise HttpProviderError(resp.status_code,
                                    f"unexpected response shape: {e}")


def default_fixture_dir() -> str:
    """Mock response pool shipped with the package."""
    return str(Path(__file__).parent / "fixtures")


def make_provider(config: dict):
    kind = config.get("provider", "mock")
    if kind == "mock":
        fixture_dir = config.get("fixture_dir") or default_fixture_dir()
        return MockProvider(fixture_dir=fixture_dir,
                            seed=config.get("seed", 0),
                            cycle=config.get("fixture_cycle", False))
    if kind == "http":
        return HttpProvider(base_url=config.get("base_url",
                                                "https://api.openai.com/v1"),
                            model=config.get("model", "gpt-4o"))
    raise ProviderError(f"unknown provider kind {kind!r}")


def generate(provider, request: GenerationRequest) -> str:
    return provider.generate(request)


def generate_batch(provider, requests_: list[GenerationRequest],
                   parallelism: int = 1) -> list[str]:
    """Issue several generation calls, preserving request order.

    The mock provider is serialized so its fixture sequence stays
    deterministic; http calls may overlap up to the configured parallelism.
    """
    if provider.kind == "mock" or parallelism <= 1 or len(requests_) <= 1:
        return [provider.generate(r) for r in requests_]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(provider.generate, requests_))


_FENCE_RE = re.compile(r"```[ \t]*[\w+-]*[ \t]*\r?\n(.*?)```", re.DOTALL)


def extract_code(response: str) -> str:
    """Source text of the first fenced code block in a model response.

    A response with no fence is accepted whole only when its first
    non-blank line starts like Python source (def/import/from); markdown
    prose, including headings, is rejected.
    """
    match = _FENCE_RE.search(response)
    if match:
        code = match.group(1)
        if code.strip():
            return code
        raise NoCodeFound("fenced block is empty")
    for line in response.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith(("def ", "import ", "from ")):
            return response.strip() + "\n"
        break
    raise NoCodeFound("no fenced code block and response does not look like source")

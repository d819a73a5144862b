from pathlib import Path

import pytest

from packbench.errors import (CredentialMissing, FixtureExhausted, NoCodeFound,
                              NoExemplars)
from packbench.llm import (API_KEY_ENV, Exemplar, GenerationRequest,
                           HttpProvider, MockProvider, PackingRules,
                           WIRE_SCHEMA, build_initial_prompt,
                           build_refinement_prompt, extract_code, generate,
                           generate_batch)
from packbench.metrics import Score

GOLDEN = Path(__file__).parent / "golden"
RULES = PackingRules(200, 100)

EXEMPLARS = [
    Exemplar(source="def pack(items, capacity):\n    return [[(i, 0, 0)] for i in range(len(items))]\n",
             score=Score(15.0, 0.83, 0.5)),
    Exemplar(source="def pack(items, capacity):\n    bins = []\n    # shelf logic\n    return bins\n",
             score=Score(16.0, 0.78, 0.1)),
    Exemplar(source="def pack(items, capacity):\n    return []\n",
             score=Score(16.05, 0.76, 0.2)),
]


def test_initial_prompt_contents():
    prompt = build_initial_prompt(WIRE_SCHEMA, RULES)
    assert "no item may overlap" in prompt.lower()
    assert '"capacity": [W, H]' in prompt
    assert "def pack(items, capacity):" in prompt
    assert "200x100" in prompt


def test_initial_prompt_uses_given_capacity():
    prompt = build_initial_prompt(WIRE_SCHEMA, PackingRules(60, 40))
    assert "60x40" in prompt


def test_initial_prompt_golden():
    assert build_initial_prompt(WIRE_SCHEMA, RULES) == \
        (GOLDEN / "initial_prompt.txt").read_text(encoding="utf-8")


def test_refinement_prompt_golden():
    assert build_refinement_prompt(EXEMPLARS, WIRE_SCHEMA, RULES) == \
        (GOLDEN / "refinement_prompt.txt").read_text(encoding="utf-8")


def test_refinement_prompt_embeds_sources_in_score_order():
    prompt = build_refinement_prompt(EXEMPLARS, WIRE_SCHEMA, RULES)
    first = prompt.index("average bins 15.00")
    second = prompt.index("average bins 16.00")
    third = prompt.index("average bins 16.05")
    assert first < second < third
    for ex in EXEMPLARS:
        assert ex.source.rstrip() in prompt


def test_refinement_prompt_single_island_notes_reduced_diversity():
    prompt = build_refinement_prompt(EXEMPLARS[:1], WIRE_SCHEMA, RULES)
    assert "diversity is reduced" in prompt
    assert "Example 1" in prompt


def test_refinement_prompt_requires_exemplars():
    with pytest.raises(NoExemplars):
        build_refinement_prompt([], WIRE_SCHEMA, RULES)


def test_prompts_are_pure():
    assert build_initial_prompt(WIRE_SCHEMA, RULES) == \
        build_initial_prompt(WIRE_SCHEMA, RULES)


def test_request_requires_prompt():
    with pytest.raises(ValueError):
        GenerationRequest(prompt="")


# --- mock provider ---

def make_pool(tmp_path, n=20):
    pool = tmp_path / "pool"
    pool.mkdir()
    for i in range(n):
        (pool / f"fix-{i:02d}.md").write_text(f"fixture {i}", encoding="utf-8")
    return pool


def test_mock_returns_each_fixture_once(tmp_path):
    pool = make_pool(tmp_path, 20)
    provider = MockProvider(str(pool), seed=5)
    req = GenerationRequest(prompt="p")
    seen = [generate(provider, req) for _ in range(20)]
    assert sorted(seen) == sorted(f"fixture {i}" for i in range(20))
    assert seen != sorted(seen)  # seeded order, not file order


def test_mock_exhaustion(tmp_path):
    pool = make_pool(tmp_path, 3)
    provider = MockProvider(str(pool), seed=5)
    req = GenerationRequest(prompt="p")
    for _ in range(3):
        generate(provider, req)
    with pytest.raises(FixtureExhausted):
        generate(provider, req)


def test_mock_cycle(tmp_path):
    pool = make_pool(tmp_path, 3)
    provider = MockProvider(str(pool), seed=5, cycle=True)
    req = GenerationRequest(prompt="p")
    first_pass = [generate(provider, req) for _ in range(3)]
    second_pass = [generate(provider, req) for _ in range(3)]
    assert first_pass == second_pass


def test_mock_determinism_and_fast_forward(tmp_path):
    pool = make_pool(tmp_path, 8)
    req = GenerationRequest(prompt="p")
    a = MockProvider(str(pool), seed=9)
    sequence = [generate(a, req) for _ in range(8)]
    b = MockProvider(str(pool), seed=9)
    b.fast_forward(3)
    assert [generate(b, req) for _ in range(5)] == sequence[3:]


def test_generate_batch_preserves_order(tmp_path):
    pool = make_pool(tmp_path, 6)
    provider = MockProvider(str(pool), seed=1)
    reqs = [GenerationRequest(prompt="p") for _ in range(6)]
    batch = generate_batch(provider, reqs, parallelism=4)
    again = MockProvider(str(pool), seed=1)
    assert batch == [generate(again, r) for r in reqs]


# --- http provider ---

def test_http_credential_checked_before_any_network_call(monkeypatch):
    monkeypatch.delenv(API_KEY_ENV, raising=False)
    provider = HttpProvider(base_url="http://127.0.0.1:1", model="m")
    with pytest.raises(CredentialMissing):
        generate(provider, GenerationRequest(prompt="p"))


# --- code extraction ---

def test_extract_first_fenced_block():
    response = "Sure!\n```python\ndef pack(items, capacity):\n    return []\n```\nDone."
    assert extract_code(response) == "def pack(items, capacity):\n    return []\n"


def test_extract_takes_first_of_two_blocks():
    response = ("```python\nfirst = 1\n```\nand also\n```python\nsecond = 2\n```")
    assert extract_code(response) == "first = 1\n"


def test_extract_plain_prose_fails():
    with pytest.raises(NoCodeFound):
        extract_code("I would sort the items by height and go from there.")


def test_extract_markdown_heading_is_not_code():
    with pytest.raises(NoCodeFound):
        extract_code("# My approach\nSort by height.")


def test_extract_bare_function_accepted():
    source = "def pack(items, capacity):\n    return []"
    assert extract_code(source) == source + "\n"


def test_extract_unfenced_import_accepted():
    source = "import json\ndef pack(items, capacity):\n    return []"
    assert extract_code(source).startswith("import json")

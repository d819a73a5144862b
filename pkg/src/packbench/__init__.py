"""packbench: a workbench for 2D bin-packing heuristics.

Provides reference level-based heuristics (FFF, HFF), an independent
solution validator and scorer, a seeded square-item instance generator,
an exact solver for tiny instances, a subprocess harness for running
untrusted candidate heuristics over a stdin/stdout wire protocol, and an
island-based evolutionary loop that asks an LLM provider (or a
deterministic mock) for new candidates each generation.
"""

__version__ = "0.1.0"

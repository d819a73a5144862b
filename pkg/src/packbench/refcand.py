"""Reference wire-protocol candidate wrapping the native baselines.

Run as `python -m packbench.refcand fff|hff`: reads an instance object on
stdin, packs it with the named built-in heuristic, writes the solution
object on stdout. Used to check that the subprocess harness reproduces
native scores exactly, and handy as a known-good candidate elsewhere.
"""

import sys

from .baselines import ALGORITHMS
from .model import decode_instance, encode_solution


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1 or argv[0] not in ALGORITHMS:
        print("usage: python -m packbench.refcand fff|hff", file=sys.stderr)
        return 2
    instance = decode_instance(sys.stdin.read())
    solution = ALGORITHMS[argv[0]](instance)
    sys.stdout.write(encode_solution(solution))
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Run a generated `pack` function as a wire-protocol candidate process.

Usage: packshim <source-file>

The source file must define

    def pack(items, capacity): ...

taking a list of (width, height) pairs and a (bin_width, bin_height)
pair. The shim owns all I/O: it reads one instance object from stdin
({"capacity": [W, H], "items": [[w, h], ...]}), calls pack, and writes
one solution object to stdout ({"bins": [{"placements": [{"item": i,
"x": x, "y": y}, ...]}, ...]}). Each returned bin may be a sequence of
(item, x, y) triples or a mapping {item: (x, y)}. The conversion is
transparent: every placement pack returns appears in the output exactly
once, and nothing is added, dropped, or repaired.

Exit status: 0 after writing a solution, 1 for any candidate failure
(missing pack, bad return shape, exception inside pack, unreadable
input), 2 for usage errors. Diagnostics go to stderr.
"""

import json
import sys
import traceback


class ShimError(Exception):
    pass


class MissingFunction(ShimError):
    pass


class BadReturnShape(ShimError):
    pass


def load_pack(source_path: str):
    """Execute the candidate source and return its pack function."""
    with open(source_path, encoding="utf-8") as f:
        source = f.read()
    namespace = {"__name__": "candidate"}
    exec(compile(source, source_path, "exec"), namespace)
    pack = namespace.get("pack")
    if not callable(pack):
        raise MissingFunction(
            f"MissingFunction: {source_path} does not define a callable "
            "function named 'pack'")
    return pack


def _as_placement(entry, bin_index):
    if isinstance(entry, (tuple, list)) and len(entry) == 3:
        item, x, y = entry
    else:
        raise BadReturnShape(
            f"BadReturnShape: bin {bin_index} holds {entry!r}, expected an "
            "(item, x, y) triple")
    if isinstance(item, bool) or not isinstance(item, int):
        raise BadReturnShape(
            f"BadReturnShape: item index {item!r} in bin {bin_index} is not "
            "an integer")
    for coord in (x, y):
        if isinstance(coord, bool) or not isinstance(coord, (int, float)):
            raise BadReturnShape(
                f"BadReturnShape: coordinate {coord!r} for item {item} is "
                "not a number")
    return {"item": item, "x": x, "y": y}


def to_wire(result) -> dict:
    """Convert pack's return value into the solution wire object."""
    if isinstance(result, (str, bytes)) or not hasattr(result, "__iter__"):
        raise BadReturnShape(
            f"BadReturnShape: pack returned {type(result).__name__}, "
            "expected a list of bins")
    bins = []
    for bin_index, bin_content in enumerate(result):
        placements = []
        if isinstance(bin_content, dict):
            for item, coords in bin_content.items():
                if not isinstance(coords, (tuple, list)) or len(coords) != 2:
                    raise BadReturnShape(
                        f"BadReturnShape: bin {bin_index} maps {item!r} to "
                        f"{coords!r}, expected an (x, y) pair")
                placements.append(_as_placement((item, coords[0], coords[1]),
                                                bin_index))
        elif hasattr(bin_content, "__iter__"):
            for entry in bin_content:
                placements.append(_as_placement(entry, bin_index))
        else:
            raise BadReturnShape(
                f"BadReturnShape: bin {bin_index} is "
                f"{type(bin_content).__name__}, expected placements")
        bins.append({"placements": placements})
    return {"bins": bins}


def run(source_path: str, stdin=None, stdout=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    pack = load_pack(source_path)
    try:
        request = json.load(stdin)
        items = [tuple(pair) for pair in request["items"]]
        capacity = tuple(request["capacity"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise ShimError(f"unreadable instance on stdin: {e}") from None
    result = pack(items, capacity)
    json.dump(to_wire(result), stdout)
    stdout.flush()
    return 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: packshim <source-file>", file=sys.stderr)
        return 2
    try:
        return run(argv[0])
    except ShimError as e:
        print(e, file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 1

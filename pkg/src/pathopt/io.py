"""Text formats for graphs, partitions, ng-profiles and benchmark suites (all ``# format v1``)."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from .generators import GenSpec
from .graph import Graph, Partition

FORMAT_LINE = "# format v1"


class FormatError(ValueError):
    def __init__(self, path, lineno: int | None, msg: str):
        where = f"{path}:{lineno}" if lineno is not None else str(path)
        super().__init__(f"{where}: {msg}")
        self.path = path
        self.lineno = lineno


def _content_lines(text: str):
    """(lineno, stripped line) for every non-blank, non-comment line."""
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield i, line


def format_graph(g: Graph, header: Iterable[str] = ()) -> str:
    out = [FORMAT_LINE]
    spec = g.meta.get("genspec")
    if spec is not None:
        out.append(spec.format())
    out.extend(header)
    out.append(f"p {g.n} {g.m}")
    if g.coords is not None:
        out.append("geom")
        out.extend(f"c {x!r} {y!r}" for x, y in g.coords.tolist())
    out.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def parse_graph(text: str, path="<string>") -> Graph:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError(path, None, "empty graph file")
    lineno, first = lines[0]
    tok = first.split()
    if len(tok) != 3 or tok[0] != "p":
        raise FormatError(path, lineno, "expected 'p <n> <m>'")
    try:
        n, m = int(tok[1]), int(tok[2])
    except ValueError:
        raise FormatError(path, lineno, "non-integer vertex/edge count") from None
    pos = 1
    coords = None
    if pos < len(lines) and lines[pos][1] == "geom":
        pos += 1
        coords = np.empty((n, 2))
        for k in range(n):
            if pos >= len(lines):
                raise FormatError(path, None, f"expected {n} coordinate lines")
            lineno, line = lines[pos]
            tok = line.split()
            if len(tok) != 3 or tok[0] != "c":
                raise FormatError(path, lineno, "expected 'c <x> <y>'")
            try:
                coords[k] = float(tok[1]), float(tok[2])
            except ValueError:
                raise FormatError(path, lineno, "bad coordinate") from None
            pos += 1
    edges = []
    for lineno, line in lines[pos:]:
        tok = line.split()
        if len(tok) != 3 or tok[0] != "e":
            raise FormatError(path, lineno, "expected 'e <u> <v>'")
        try:
            u, v = int(tok[1]), int(tok[2])
        except ValueError:
            raise FormatError(path, lineno, "non-integer vertex id") from None
        if not (0 <= u < v < n):
            raise FormatError(path, lineno, f"edge ({u}, {v}) must satisfy 0 <= u < v < n")
        edges.append((u, v))
    if len(edges) != m:
        raise FormatError(path, None, f"header announces {m} edges, found {len(edges)}")
    try:
        g = Graph.from_edges(n, edges, coords=coords)
    except ValueError as e:
        raise FormatError(path, None, str(e)) from None
    for line in text.splitlines():
        if line.startswith("# genspec"):
            g.meta["genspec"] = GenSpec.parse(line)
            break
    return g


def write_graph(g: Graph, path, header: Iterable[str] = ()) -> None:
    Path(path).write_text(format_graph(g, header))


def read_graph(path) -> Graph:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise FormatError(path, None, f"cannot read graph: {e.strerror}") from None
    return parse_graph(text, path)


def format_partition(p: Partition, header: Iterable[str] = ()) -> str:
    out = [FORMAT_LINE, *header]
    out.extend(str(s) for s in p.side)
    return "\n".join(out) + "\n"


def write_partition(p: Partition, path, header: Iterable[str] = ()) -> None:
    Path(path).write_text(format_partition(p, header))


def read_partition(path, g: Graph) -> Partition:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(path, None, f"cannot read partition: {e.strerror}") from None
    side = []
    for lineno, line in _content_lines(text):
        if line not in ("0", "1"):
            raise FormatError(path, lineno, f"expected 0 or 1, got {line!r}")
        side.append(int(line))
    if len(side) != g.n:
        raise FormatError(path, None, f"partition has {len(side)} entries, graph has {g.n} vertices")
    return Partition.from_sides(g, side)


def write_profile(profile, path) -> None:
    lines = [
        FORMAT_LINE,
        f"# ensemble_size {profile.ensemble_size}",
        "# a b r2 stderr n",
        f"{profile.a!r} {profile.b!r} {profile.r_squared!r} {profile.stderr!r} {profile.n}",
    ]
    lines.extend(repr(float(x)) for x in profile.raw)
    Path(path).write_text("\n".join(lines) + "\n")


def read_profile(path):
    from .neargreedy import NgProfile, percentile_bins

    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(path, None, f"cannot read profile: {e.strerror}") from None
    ensemble = 0
    for line in text.splitlines():
        if line.startswith("# ensemble_size"):
            ensemble = int(line.split()[-1])
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError(path, None, "empty profile")
    lineno, head = lines[0]
    tok = head.split()
    if len(tok) != 5:
        raise FormatError(path, lineno, "expected 'a b r2 stderr n'")
    try:
        a, b, r2, se = (float(t) for t in tok[:4])
        n = int(tok[4])
        raw = np.array([float(l) for _, l in lines[1:]])
    except ValueError as e:
        raise FormatError(path, lineno, f"bad number: {e}") from None
    if len(raw) != n:
        raise FormatError(path, None, f"header announces {n} values, found {len(raw)}")
    return NgProfile(raw, percentile_bins(raw) if n else np.zeros(100), a, b, r2, se, ensemble)


def read_suite(path) -> list[GenSpec]:
    """One GenSpec per line (``# genspec kind=... n=... seed=...`` or without the ``#``)."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(path, None, f"cannot read suite: {e.strerror}") from None
    specs = []
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        body = line.lstrip("#").strip()
        if not body.startswith("genspec"):
            if line.startswith("#"):
                continue
            raise FormatError(path, i, "expected a genspec line")
        try:
            specs.append(GenSpec.parse(line))
        except (ValueError, TypeError) as e:
            raise FormatError(path, i, str(e)) from None
    if not specs:
        raise FormatError(path, None, "suite contains no genspec lines")
    return specs


def write_suite(specs: Iterable[GenSpec], path) -> None:
    Path(path).write_text("\n".join([FORMAT_LINE, *(s.format() for s in specs)]) + "\n")

"""Parses the golden DOT files with pydot and checks node and edge counts."""
import pathlib
import sys

import pydot

golden = pathlib.Path(sys.argv[1])
files = sorted(golden.glob("P*.dot"))
if len(files) != 12:
    sys.exit(f"expected 12 golden files, found {len(files)}")
for path in files:
    graphs = pydot.graph_from_dot_file(str(path))
    if not graphs or len(graphs) != 1:
        sys.exit(f"{path.name}: did not parse")
    g = graphs[0]
    nodes = [n for n in g.get_nodes() if n.get_name() not in ("node", "edge", "graph")]
    edges = g.get_edges()
    if g.get_name().strip('"') != path.stem:
        sys.exit(f"{path.name}: graph name {g.get_name()}")
    if not nodes or not edges:
        sys.exit(f"{path.name}: {len(nodes)} nodes, {len(edges)} edges")
    for e in edges:
        if not e.get_label():
            sys.exit(f"{path.name}: edge without label")
    print(f"{path.name}: {len(nodes)} nodes, {len(edges)} edges")

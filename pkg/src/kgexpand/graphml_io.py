"""GraphML reading/writing and iteration-indexed snapshot storage.

Nodes are keyed by identity key and carry the display spelling in a ``label``
attribute; edges carry their relation tag in a ``relation`` attribute. Output
is deterministic (sorted nodes and edges), so writing the same graph twice is
byte-stable.
"""

from __future__ import annotations

import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from .core import KnowledgeGraph, Snapshot, SnapshotSeries
from .errors import GraphMLError

log = logging.getLogger(__name__)

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
SNAPSHOT_PATTERN = re.compile(r"graph_iteration_(\d+)\.graphml$")


def snapshot_filename(iteration: int) -> str:
    return f"graph_iteration_{iteration}.graphml"


def _attr_type(values) -> str:
    return "long" if all(isinstance(v, int) for v in values) else "double"


def write_graphml(g: KnowledgeGraph, path: str | Path,
                  node_attrs: dict[str, dict[str, float]] | None = None) -> None:
    """Write a graph as directed GraphML; optional extra numeric node attributes."""
    root = ET.Element("graphml", xmlns=GRAPHML_NS)
    ET.SubElement(root, "key", id="d0", attrib={
        "for": "node", "attr.name": "label", "attr.type": "string"})
    ET.SubElement(root, "key", id="d1", attrib={
        "for": "edge", "attr.name": "relation", "attr.type": "string"})
    extra_ids: dict[str, str] = {}
    for i, name in enumerate(sorted(node_attrs or {})):
        key_id = f"d{i + 2}"
        extra_ids[name] = key_id
        ET.SubElement(root, "key", id=key_id, attrib={
            "for": "node", "attr.name": name,
            "attr.type": _attr_type(node_attrs[name].values())})
    graph_el = ET.SubElement(root, "graph", edgedefault="directed")
    for key in sorted(g.node_keys):
        node_el = ET.SubElement(graph_el, "node", id=key)
        label_el = ET.SubElement(node_el, "data", key="d0")
        label_el.text = g.display(key)
        for name, key_id in extra_ids.items():
            if key in node_attrs[name]:
                value = node_attrs[name][key]
                data_el = ET.SubElement(node_el, "data", key=key_id)
                data_el.text = repr(value if isinstance(value, int) else float(value))
    for i, (src, kind, tgt) in enumerate(g.triples()):
        edge_el = ET.SubElement(graph_el, "edge", id=f"e{i}", source=src, target=tgt)
        rel_el = ET.SubElement(edge_el, "data", key="d1")
        rel_el.text = kind
    tree = ET.ElementTree(root)
    ET.indent(tree, space="  ")
    tree.write(path, encoding="utf-8", xml_declaration=True)


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def read_graphml(path: str | Path) -> KnowledgeGraph:
    """Read a GraphML file into a KnowledgeGraph; labels are re-normalized.

    Unknown attributes are ignored; an edge without a relation attribute gets
    RELATES-TO and a warning. Malformed XML raises GraphMLError with the line.
    """
    try:
        tree = ET.parse(path)
    except ET.ParseError as exc:
        line, col = exc.position
        raise GraphMLError(f"{path}: malformed XML at line {line}, column {col}: "
                           f"{exc}") from exc
    root = tree.getroot()
    label_key = relation_key = None
    for el in root.iter():
        if _local(el.tag) == "key":
            if el.get("attr.name") == "label" and el.get("for") == "node":
                label_key = el.get("id")
            if el.get("attr.name") == "relation" and el.get("for") == "edge":
                relation_key = el.get("id")
    g = KnowledgeGraph()
    displays: dict[str, str] = {}
    defaulted = 0
    for el in root.iter():
        tag = _local(el.tag)
        if tag == "node":
            node_id = el.get("id")
            label = node_id
            for data in el:
                if _local(data.tag) == "data" and data.get("key") == label_key:
                    label = data.text or node_id
            displays[node_id] = label
            g.add_node(label)
        elif tag == "edge":
            src_id, tgt_id = el.get("source"), el.get("target")
            relation = None
            for data in el:
                if _local(data.tag) == "data" and data.get("key") == relation_key:
                    relation = data.text
            if not relation:
                relation = "RELATES-TO"
                defaulted += 1
            g.add_edge(displays.get(src_id, src_id), relation,
                       displays.get(tgt_id, tgt_id))
    if defaulted:
        log.warning("%s: %d edge(s) had no relation attribute; defaulted to RELATES-TO",
                    path, defaulted)
    return g


@dataclass
class SnapshotStore:
    """Directory of per-iteration GraphML files, sorted by parsed iteration."""

    directory: Path
    pattern: re.Pattern = SNAPSHOT_PATTERN

    def __init__(self, directory: str | Path,
                 pattern: re.Pattern | str = SNAPSHOT_PATTERN) -> None:
        self.directory = Path(directory)
        self.pattern = re.compile(pattern) if isinstance(pattern, str) else pattern

    def write(self, snapshot: Snapshot) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / snapshot_filename(snapshot.iteration)
        write_graphml(snapshot.graph, path)
        return path

    def iteration_paths(self) -> list[tuple[int, Path]]:
        found = []
        for path in self.directory.iterdir():
            m = self.pattern.search(path.name)
            if m:
                found.append((int(m.group(1)), path))
        return sorted(found)

    def load(self) -> SnapshotSeries:
        series = SnapshotSeries()
        for iteration, path in self.iteration_paths():
            series.append(Snapshot(iteration, read_graphml(path)))
        return series

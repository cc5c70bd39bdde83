"""Graph file export for network analysis tools (GEXF 1.3, GraphML)."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

from ..errors import EmptyGraph, UnsupportedFormat
from ..model.store import GraphStore
from .view import GraphView

GEXF_NS = "http://gexf.net/1.3"
GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

FORMATS = ("gexf", "graphml")

_NODE_ATTRS = ("name", "kind", "jurisdiction")
_EDGE_ATTRS = ("kind", "status")


def _view_payload(store: GraphStore, view: GraphView):
    nodes = []
    for nid in view.nodes:
        ent = store.get_entity(nid)
        nodes.append(
            {
                "id": nid,
                "name": ent.canonical_name,
                "kind": ent.kind.value,
                "jurisdiction": ent.jurisdiction or "",
            }
        )
    edges = []
    # the view's edge tuples lack ids and status; pull them from the store
    by_key = {(r.kind.value, r.source, r.target): r for r in store.live_relations()}
    for i, (kind, src, tgt) in enumerate(view.edges):
        rel = by_key.get((kind, src, tgt))
        edges.append(
            {
                "id": rel.id if rel else f"x{i}",
                "source": src,
                "target": tgt,
                "kind": kind,
                "status": rel.status.value if rel else "",
            }
        )
    return nodes, edges


def _indent(elem: ET.Element) -> None:
    ET.indent(elem, space="  ")


def _write_gexf(nodes, edges, path: Path, written_at: str) -> None:
    ET.register_namespace("", GEXF_NS)
    root = ET.Element(f"{{{GEXF_NS}}}gexf", {"version": "1.3"})
    meta = ET.SubElement(root, f"{{{GEXF_NS}}}meta", {"lastmodifieddate": written_at[:10]})
    ET.SubElement(meta, f"{{{GEXF_NS}}}creator").text = "chainmine"
    graph = ET.SubElement(root, f"{{{GEXF_NS}}}graph", {"defaultedgetype": "directed"})

    node_attrs = ET.SubElement(graph, f"{{{GEXF_NS}}}attributes", {"class": "node"})
    for i, title in enumerate(_NODE_ATTRS):
        ET.SubElement(
            node_attrs,
            f"{{{GEXF_NS}}}attribute",
            {"id": str(i), "title": title, "type": "string"},
        )
    edge_attrs = ET.SubElement(graph, f"{{{GEXF_NS}}}attributes", {"class": "edge"})
    for i, title in enumerate(_EDGE_ATTRS):
        ET.SubElement(
            edge_attrs,
            f"{{{GEXF_NS}}}attribute",
            {"id": str(i), "title": title, "type": "string"},
        )

    nodes_el = ET.SubElement(graph, f"{{{GEXF_NS}}}nodes")
    for node in nodes:
        el = ET.SubElement(
            nodes_el, f"{{{GEXF_NS}}}node", {"id": node["id"], "label": node["name"]}
        )
        values = ET.SubElement(el, f"{{{GEXF_NS}}}attvalues")
        for i, title in enumerate(_NODE_ATTRS):
            ET.SubElement(
                values,
                f"{{{GEXF_NS}}}attvalue",
                {"for": str(i), "value": node[title]},
            )
    edges_el = ET.SubElement(graph, f"{{{GEXF_NS}}}edges")
    for edge in edges:
        el = ET.SubElement(
            edges_el,
            f"{{{GEXF_NS}}}edge",
            {"id": edge["id"], "source": edge["source"], "target": edge["target"]},
        )
        values = ET.SubElement(el, f"{{{GEXF_NS}}}attvalues")
        for i, title in enumerate(_EDGE_ATTRS):
            ET.SubElement(
                values,
                f"{{{GEXF_NS}}}attvalue",
                {"for": str(i), "value": edge[title]},
            )

    _indent(root)
    ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)


def _write_graphml(nodes, edges, path: Path) -> None:
    ET.register_namespace("", GRAPHML_NS)
    root = ET.Element(f"{{{GRAPHML_NS}}}graphml")
    key_ids: dict[tuple[str, str], str] = {}
    for i, title in enumerate(_NODE_ATTRS):
        kid = f"d{i}"
        key_ids[("node", title)] = kid
        ET.SubElement(
            root,
            f"{{{GRAPHML_NS}}}key",
            {"id": kid, "for": "node", "attr.name": title, "attr.type": "string"},
        )
    for i, title in enumerate(_EDGE_ATTRS):
        kid = f"d{len(_NODE_ATTRS) + i}"
        key_ids[("edge", title)] = kid
        ET.SubElement(
            root,
            f"{{{GRAPHML_NS}}}key",
            {"id": kid, "for": "edge", "attr.name": title, "attr.type": "string"},
        )
    graph = ET.SubElement(
        root, f"{{{GRAPHML_NS}}}graph", {"id": "G", "edgedefault": "directed"}
    )
    for node in nodes:
        el = ET.SubElement(graph, f"{{{GRAPHML_NS}}}node", {"id": node["id"]})
        for title in _NODE_ATTRS:
            data = ET.SubElement(
                el, f"{{{GRAPHML_NS}}}data", {"key": key_ids[("node", title)]}
            )
            data.text = node[title]
    for edge in edges:
        el = ET.SubElement(
            graph,
            f"{{{GRAPHML_NS}}}edge",
            {"id": edge["id"], "source": edge["source"], "target": edge["target"]},
        )
        for title in _EDGE_ATTRS:
            data = ET.SubElement(
                el, f"{{{GRAPHML_NS}}}data", {"key": key_ids[("edge", title)]}
            )
            data.text = edge[title]

    _indent(root)
    ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)


def export_graph(
    store: GraphStore,
    view: GraphView,
    fmt: str,
    path: str | Path,
    allow_empty: bool = False,
    written_at: str = "1970-01-01T00:00:00Z",
) -> dict[str, int]:
    fmt = fmt.lower()
    if fmt not in FORMATS:
        raise UnsupportedFormat(f"format must be one of {FORMATS}, got {fmt!r}")
    if view.n == 0 and not allow_empty:
        raise EmptyGraph("refusing to export an empty view (pass allow_empty)")
    nodes, edges = _view_payload(store, view)
    path = Path(path)
    if fmt == "gexf":
        _write_gexf(nodes, edges, path, written_at)
    else:
        _write_graphml(nodes, edges, path)
    return {"nodes": len(nodes), "edges": len(edges)}

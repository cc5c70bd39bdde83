"""Graph views, descriptive stats, exports, precision audits, overlap."""

import csv
import xml.etree.ElementTree as ET

import networkx as nx
import pytest

from chainmine.analytics import (
    SHEET_HEADER,
    build_view,
    compare_datasets,
    compute_stats,
    degree_stats,
    evaluate_precision,
    export_graph,
    export_labeling_sheet,
    graph_summary,
    modularity,
    modularity_of,
    precision,
    read_labeled_sheet,
    sample_relations,
    score_sheet,
)
from chainmine.analytics.view import GraphView, scope_metrics
from chainmine.clock import LogicalClock
from chainmine.errors import DivisionUndefined, EmptyGraph, UnsupportedFormat
from chainmine.model import GraphStore
from chainmine.model.types import (
    EntityKind,
    Evidence,
    Relation,
    RelationKind,
    RelationStatus,
)

GEXF_NS = {"g": "http://gexf.net/1.3"}


def ev(doc="doc-1", quote="q", offset=0):
    return Evidence(document_id=doc, quote=quote, char_offset=offset)


def add_verified(store, kind, src, tgt, quote="q"):
    rel, _ = store.upsert_relation(kind, src, tgt, [ev(quote=quote)])
    store.set_relation_status(
        rel.id, RelationStatus.VERIFIED, expected=RelationStatus.EXTRACTED
    )
    return rel


@pytest.fixture
def supply_store():
    """Mixed-kind store: three linked companies, one isolated, one product.

    Relations in id order: r1 Supply a->b Verified, r2 Supply b->c Verified,
    r3 Supply c->a Extracted, r4 Partner a->b Verified, r5 Produce a->p
    Verified.
    """
    store = GraphStore(clock=LogicalClock())
    a, _ = store.upsert_entity(EntityKind.COMPANY, "Alpha Ltd", jurisdiction="CN")
    b, _ = store.upsert_entity(EntityKind.COMPANY, "Beta Inc", jurisdiction="CN")
    c, _ = store.upsert_entity(EntityKind.COMPANY, "Gamma KK", jurisdiction="JP")
    d, _ = store.upsert_entity(EntityKind.COMPANY, "Delta LLC", jurisdiction="CN")
    p, _ = store.upsert_entity(EntityKind.PRODUCT, "Kirin 9000")
    add_verified(store, RelationKind.SUPPLY, a.id, b.id)
    add_verified(store, RelationKind.SUPPLY, b.id, c.id)
    store.upsert_relation(RelationKind.SUPPLY, c.id, a.id, [ev()])
    add_verified(store, RelationKind.PARTNER, a.id, b.id)
    add_verified(store, RelationKind.PRODUCE, a.id, p.id)
    return store


def two_triangles():
    """Six companies wired as two disjoint directed 3-cycles, all Verified."""
    store = GraphStore(clock=LogicalClock())
    ids = {}
    for name in ["A1", "A2", "A3", "B1", "B2", "B3"]:
        juris = "CN" if name.startswith("A") else "US"
        ent, _ = store.upsert_entity(EntityKind.COMPANY, name, jurisdiction=juris)
        ids[name] = ent.id
    for s, t in [
        ("A1", "A2"), ("A2", "A3"), ("A3", "A1"),
        ("B1", "B2"), ("B2", "B3"), ("B3", "B1"),
    ]:
        add_verified(store, RelationKind.SUPPLY, ids[s], ids[t])
    return store, ids


# --- degree and modularity -------------------------------------------------


def test_degree_stats_small_graph():
    out = degree_stats(5, 4)
    assert out == {"avg_degree": 1.6, "density": 0.4, "directed_density": 0.2}


def test_degree_stats_rejects_degenerate_inputs():
    with pytest.raises(EmptyGraph):
        degree_stats(0, 0)
    with pytest.raises(ValueError):
        degree_stats(3, -1)
    with pytest.raises(DivisionUndefined):
        degree_stats(1, 2)
    # a lone node without edges is fine, densities zero by convention
    assert degree_stats(1, 0) == {
        "avg_degree": 0.0,
        "density": 0.0,
        "directed_density": 0.0,
    }


TRIANGLE_A = [("a1", "a2"), ("a2", "a3"), ("a3", "a1")]
TRIANGLE_B = [("b1", "b2"), ("b2", "b3"), ("b3", "b1")]


def test_modularity_two_triangles_split_by_component():
    # per community: 3 internal edges of 6, degree sum 6 of 12
    # Q = 2 * (3/6 - (6/12)^2) = 0.5
    assignment = {"a1": 0, "a2": 0, "a3": 0, "b1": 1, "b2": 1, "b3": 1}
    q = modularity(TRIANGLE_A + TRIANGLE_B, assignment)
    assert q == pytest.approx(0.5, abs=1e-12)


def test_modularity_singletons_on_two_triangles():
    # six singletons, each with degree 2 of 2m = 12 and nothing internal:
    # Q = -6 * (2/12)^2 = -1/6
    assignment = {n: i for i, n in enumerate("a1 a2 a3 b1 b2 b3".split())}
    q = modularity(TRIANGLE_A + TRIANGLE_B, assignment)
    assert q == pytest.approx(-1.0 / 6.0, abs=1e-12)


def test_modularity_single_community_is_zero():
    assignment = {n: 0 for n in "a1 a2 a3 b1 b2 b3".split()}
    q = modularity(TRIANGLE_A + TRIANGLE_B, assignment)
    assert q == pytest.approx(0.0, abs=1e-12)


def test_modularity_self_edge_counts_twice_toward_degree():
    # m=2; community 0 holds the self-edge: internal 1, degree 2*1+1=3
    # Q = (1/2 - (3/4)^2) + (0 - (1/4)^2) = -0.125
    q = modularity([("a", "a"), ("a", "b")], {"a": 0, "b": 1})
    assert q == pytest.approx(-0.125, abs=1e-12)


def test_modularity_weighted():
    # m=4, internal(0)=3, degree sums 7 and 1:
    # Q = 3/4 - (7/8)^2 - (1/8)^2 = -0.03125
    q = modularity(
        [("a", "b"), ("b", "c")],
        {"a": 0, "b": 0, "c": 1},
        weights=[3.0, 1.0],
    )
    assert q == pytest.approx(-0.03125, abs=1e-12)


def test_modularity_input_validation():
    with pytest.raises(ValueError, match="length"):
        modularity([("a", "b")], {"a": 0, "b": 0}, weights=[1.0, 2.0])
    with pytest.raises(DivisionUndefined):
        modularity([("a", "b")], {"a": 0, "b": 0}, weights=[0.0])


def test_graph_summary_counts_by_kind_and_status(supply_store):
    summary = graph_summary(supply_store)
    assert summary["entities"] == 5
    assert summary["relations"] == 5
    assert summary["entity_kinds"] == {"Company": 4, "Product": 1}
    assert summary["relation_kinds"] == {"Partner": 1, "Produce": 1, "Supply": 3}
    assert summary["relation_status"] == {"Extracted": 1, "Verified": 4}
    assert summary["jurisdictions"] == {"CN": 3, "JP": 1}
    assert summary["avg_degree"] == pytest.approx(2.0)
    assert summary["density"] == pytest.approx(0.5)
    assert summary["directed_density"] == pytest.approx(0.25)


# --- views -------------------------------------------------------------------


def test_build_view_defaults_keep_verified_supply_between_companies(supply_store):
    view = build_view(supply_store)
    assert view.scope == "All"
    assert view.nodes == ("e1", "e2", "e3")
    assert view.edges == (("Supply", "e1", "e2"), ("Supply", "e2", "e3"))


def test_build_view_jurisdiction_needs_both_endpoints(supply_store):
    view = build_view(supply_store, jurisdiction="CN")
    assert view.scope == "CN"
    # b->c crosses into JP so only a->b survives; isolated d is dropped
    assert view.nodes == ("e1", "e2")
    assert view.edges == (("Supply", "e1", "e2"),)


def test_build_view_include_isolated(supply_store):
    view = build_view(supply_store, jurisdiction="CN", include_isolated=True)
    assert view.nodes == ("e1", "e2", "e4")


def test_build_view_none_filters_disable_filtering(supply_store):
    view = build_view(
        supply_store, relation_kinds=None, entity_kinds=None, statuses=None
    )
    assert view.nodes == ("e1", "e2", "e3", "e5")
    assert view.edges == (
        ("Supply", "e1", "e2"),
        ("Supply", "e2", "e3"),
        ("Supply", "e3", "e1"),
        ("Partner", "e1", "e2"),
        ("Produce", "e1", "e5"),
    )


def test_undirected_pairs_collapse_duplicates_reverses_and_self_loops():
    view = GraphView(
        scope="x",
        nodes=("e1", "e2", "e3"),
        edges=(
            ("Supply", "e1", "e2"),
            ("Partner", "e2", "e1"),
            ("Supply", "e1", "e2"),
            ("Supply", "e3", "e3"),
        ),
    )
    assert view.undirected_pairs() == [("e1", "e2")]


def test_compute_stats_on_path(supply_store):
    stats = compute_stats(build_view(supply_store))
    assert (stats.n, stats.r) == (3, 2)
    assert stats.average_degree == pytest.approx(4.0 / 3.0)
    assert stats.density == pytest.approx(2.0 / 3.0)
    assert stats.directed_density == pytest.approx(1.0 / 3.0)
    assert not stats.flagged
    d = stats.to_dict()
    assert d["N"] == 3 and d["R"] == 2 and d["scope"] == "All"


def test_compute_stats_empty_and_single_node():
    with pytest.raises(EmptyGraph):
        compute_stats(GraphView(scope="none", nodes=(), edges=()))
    stats = compute_stats(GraphView(scope="one", nodes=("e1",), edges=()))
    assert stats.flagged
    assert stats.density == 0.0 and stats.directed_density == 0.0


def test_modularity_of_view():
    nodes = tuple(n for n, _ in sorted({n: 0 for e in TRIANGLE_A + TRIANGLE_B for n in e}.items()))
    edges = tuple(("Supply", a, b) for a, b in TRIANGLE_A + TRIANGLE_B)
    view = GraphView(scope="x", nodes=nodes, edges=edges)
    assignment = {"a1": 0, "a2": 0, "a3": 0, "b1": 1, "b2": 1, "b3": 1}
    assert modularity_of(view, assignment) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(EmptyGraph):
        modularity_of(GraphView(scope="x", nodes=("e1",), edges=()), {"e1": 0})


def test_scope_metrics_all_scope_finds_both_components():
    store, _ = two_triangles()
    payload = scope_metrics(store)
    assert payload["stats"] == {
        "scope": "All",
        "N": 6,
        "R": 6,
        "average_degree": 2.0,
        "density": 0.4,
        "directed_density": 0.2,
        "flagged": False,
    }
    comms = payload["communities"]
    assert comms["count"] == 2
    assert comms["sizes"] == [3, 3]
    assert comms["modularity"] == pytest.approx(0.5, abs=1e-9)
    assert comms["kernel"] in ("python", "cython")


def test_scope_metrics_jurisdiction_scope():
    store, _ = two_triangles()
    payload = scope_metrics(store, "CN")
    assert payload["stats"]["N"] == 3
    assert payload["stats"]["density"] == pytest.approx(1.0)
    # one triangle is a single community and scores zero
    assert payload["communities"]["count"] == 1
    assert payload["communities"]["modularity"] == pytest.approx(0.0, abs=1e-12)


def test_scope_metrics_unknown_jurisdiction_raises():
    store, _ = two_triangles()
    with pytest.raises(EmptyGraph):
        scope_metrics(store, "XX")


# --- file export -------------------------------------------------------------


def test_export_gexf_is_valid_and_carries_attributes(supply_store, tmp_path):
    view = build_view(supply_store)
    path = tmp_path / "graph.gexf"
    counts = export_graph(
        supply_store, view, "gexf", path, written_at="2024-03-01T12:00:00Z"
    )
    assert counts == {"nodes": 3, "edges": 2}

    root = ET.parse(path).getroot()
    assert root.tag == "{http://gexf.net/1.3}gexf"
    assert root.get("version") == "1.3"
    meta = root.find("g:meta", GEXF_NS)
    assert meta.get("lastmodifieddate") == "2024-03-01"
    graph = root.find("g:graph", GEXF_NS)
    assert graph.get("defaultedgetype") == "directed"

    nodes = graph.findall("g:nodes/g:node", GEXF_NS)
    assert [(n.get("id"), n.get("label")) for n in nodes] == [
        ("e1", "Alpha Ltd"),
        ("e2", "Beta Inc"),
        ("e3", "Gamma KK"),
    ]
    # attribute id 2 is jurisdiction per the declared node attributes
    declared = graph.findall("g:attributes[@class='node']/g:attribute", GEXF_NS)
    assert [a.get("title") for a in declared] == ["name", "kind", "jurisdiction"]
    first = nodes[0].findall("g:attvalues/g:attvalue", GEXF_NS)
    assert {a.get("for"): a.get("value") for a in first} == {
        "0": "Alpha Ltd",
        "1": "Company",
        "2": "CN",
    }

    edges = graph.findall("g:edges/g:edge", GEXF_NS)
    assert [(e.get("id"), e.get("source"), e.get("target")) for e in edges] == [
        ("r1", "e1", "e2"),
        ("r2", "e2", "e3"),
    ]
    statuses = {
        e.get("id"): {a.get("for"): a.get("value") for a in e.findall("g:attvalues/g:attvalue", GEXF_NS)}
        for e in edges
    }
    assert statuses["r1"] == {"0": "Supply", "1": "Verified"}


def test_export_graphml_round_trips_through_networkx(supply_store, tmp_path):
    view = build_view(supply_store)
    path = tmp_path / "graph.graphml"
    counts = export_graph(supply_store, view, "graphml", path)
    assert counts == {"nodes": 3, "edges": 2}

    g = nx.read_graphml(path)
    assert g.is_directed()
    assert set(g.nodes) == {"e1", "e2", "e3"}
    assert g.nodes["e1"] == {"name": "Alpha Ltd", "kind": "Company", "jurisdiction": "CN"}
    assert g.nodes["e3"]["jurisdiction"] == "JP"
    assert g.edges["e1", "e2"] == {"kind": "Supply", "status": "Verified", "id": "r1"}
    assert g.edges["e2", "e3"]["id"] == "r2"


def test_export_rejects_unknown_format(supply_store, tmp_path):
    view = build_view(supply_store)
    with pytest.raises(UnsupportedFormat, match="csv"):
        export_graph(supply_store, view, "csv", tmp_path / "graph.csv")


def test_export_empty_view_needs_opt_in(supply_store, tmp_path):
    empty = GraphView(scope="none", nodes=(), edges=())
    with pytest.raises(EmptyGraph):
        export_graph(supply_store, empty, "gexf", tmp_path / "empty.gexf")
    counts = export_graph(
        supply_store, empty, "gexf", tmp_path / "empty.gexf", allow_empty=True
    )
    assert counts == {"nodes": 0, "edges": 0}
    root = ET.parse(tmp_path / "empty.gexf").getroot()
    assert root.findall(".//g:node", GEXF_NS) == []


# --- precision audits --------------------------------------------------------


def make_relations(n):
    return [
        Relation(
            id=f"r{i}",
            kind=RelationKind.SUPPLY,
            source="e1",
            target="e2",
            evidence=[ev()],
        )
        for i in range(1, n + 1)
    ]


def test_precision_ratio_and_undefined():
    assert precision(3, 1) == 0.75
    with pytest.raises(DivisionUndefined):
        precision(0, 0)


def test_sample_relations_is_seeded_and_order_independent():
    rels = make_relations(10)
    first = [r.id for r in sample_relations(rels, 4, seed=7)]
    again = [r.id for r in sample_relations(rels, 4, seed=7)]
    shuffled = [r.id for r in sample_relations(list(reversed(rels)), 4, seed=7)]
    assert first == again == shuffled
    assert len(set(first)) == 4


def test_sample_relations_bounds():
    rels = make_relations(3)
    assert sample_relations(rels, 0, seed=1) == []
    with pytest.raises(ValueError):
        sample_relations(rels, -1, seed=1)
    with pytest.raises(ValueError, match="exceeds population"):
        sample_relations(rels, 4, seed=1)


def test_evaluate_precision_over_labeled_population():
    rels = make_relations(10)
    # r1..r8 labeled, True on even indices: 4 TP / 4 FP over the full sample
    labels = {f"r{i}": (i % 2 == 0) for i in range(1, 9)}
    out = evaluate_precision(rels, labels, sample_size=8, seed=3)
    assert out["TP"] == 4 and out["FP"] == 4
    assert out["precision"] == 0.5
    assert sorted(out["relation_ids"]) == sorted(labels)
    with pytest.raises(ValueError, match="labeled population"):
        evaluate_precision(rels, labels, sample_size=9, seed=3)


def fill_sheet(path, label_by_id):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=SHEET_HEADER)
        writer.writeheader()
        for row in rows:
            row["label"] = label_by_id.get(row["relation_id"], "")
            writer.writerow(row)
    return [row["relation_id"] for row in rows]


def test_labeling_sheet_round_trip(supply_store, tmp_path):
    rels = [r for r in supply_store.live_relations() if r.kind is RelationKind.SUPPLY]
    sheet = tmp_path / "sheet.csv"
    urls = {"doc-1": "corpus://alpha.html"}
    written = export_labeling_sheet(
        supply_store, rels, sample_size=3, seed=1, path=sheet, url_of=urls.get
    )
    assert written == 3

    with open(sheet, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    assert header == SHEET_HEADER
    assert len(rows) == 3
    assert all(row[5] == "corpus://alpha.html" for row in rows)
    assert all(row[6] == "" for row in rows)

    ids = [row[0] for row in rows]
    # first relation marked good, second bad, third left blank
    fill_sheet(sheet, {ids[0]: "TRUE", ids[1]: "n"})
    labels = read_labeled_sheet(sheet)
    assert labels == {ids[0]: True, ids[1]: False}
    assert score_sheet(sheet) == {"TP": 1, "FP": 1, "precision": 0.5, "labeled": 2}


def test_read_labeled_sheet_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("relation_id,label\nr1,1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="header"):
        read_labeled_sheet(path)


def test_read_labeled_sheet_rejects_unknown_label(tmp_path):
    path = tmp_path / "odd.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SHEET_HEADER)
        writer.writerow(["r1", "A", "Supply", "B", "q", "", "maybe"])
    with pytest.raises(ValueError, match="line 2"):
        read_labeled_sheet(path)


def test_score_sheet_all_blank_is_undefined(supply_store, tmp_path):
    rels = [r for r in supply_store.live_relations() if r.kind is RelationKind.SUPPLY]
    sheet = tmp_path / "blank.csv"
    export_labeling_sheet(supply_store, rels, sample_size=2, seed=1, path=sheet)
    with pytest.raises(DivisionUndefined):
        score_sheet(sheet)


# --- dataset overlap ---------------------------------------------------------


def store_with_edge(source_name, target_name, aliases=()):
    store = GraphStore(clock=LogicalClock())
    a, _ = store.upsert_entity(EntityKind.COMPANY, source_name, aliases=list(aliases))
    b, _ = store.upsert_entity(EntityKind.COMPANY, target_name)
    store.upsert_relation(RelationKind.SUPPLY, a.id, b.id, [ev()])
    return store


def test_compare_datasets_identity(supply_store):
    report = compare_datasets(supply_store, supply_store)
    # products never participate in the node comparison
    assert report.nodes_a == report.nodes_b == 4
    assert report.node_overlap == 4
    assert report.edges_a == report.edges_b == 3
    assert report.edge_overlap == 3
    assert report.unmatched_nodes_a == [] and report.unmatched_nodes_b == []
    d = report.to_dict()
    assert d["nodes"] == {"a": 4, "b": 4, "overlap": 4}
    assert d["edges"] == {"a": 3, "b": 3, "overlap": 3}


def test_compare_datasets_disjoint():
    a = store_with_edge("Alpha Ltd", "Beta Inc")
    b = store_with_edge("Gamma KK", "Delta LLC")
    report = compare_datasets(a, b)
    assert report.node_overlap == 0 and report.edge_overlap == 0
    assert report.unmatched_nodes_a == ["Alpha Ltd", "Beta Inc"]
    assert report.unmatched_nodes_b == ["Delta LLC", "Gamma KK"]


def test_compare_datasets_alias_aware_vs_exact():
    a = store_with_edge("Huawei", "SMIC", aliases=["Huawei Technologies"])
    b = store_with_edge("Huawei Technologies", "SMIC")

    aware = compare_datasets(a, b, policy="alias-aware")
    assert aware.node_overlap == 2
    assert aware.edge_overlap == 1

    exact = compare_datasets(a, b, policy="exact-normalized-name")
    assert exact.node_overlap == 1
    assert exact.edge_overlap == 0
    assert exact.unmatched_nodes_a == ["Huawei"]


def test_compare_datasets_edge_direction_must_agree():
    a = store_with_edge("Huawei", "SMIC")
    b = store_with_edge("SMIC", "Huawei")
    report = compare_datasets(a, b)
    assert report.node_overlap == 2
    assert report.edge_overlap == 0


def test_compare_datasets_rejects_unknown_policy(supply_store):
    with pytest.raises(ValueError, match="policy"):
        compare_datasets(supply_store, supply_store, policy="fuzzy")

from .evaluation import (
    SHEET_HEADER,
    evaluate_precision,
    export_labeling_sheet,
    precision,
    read_labeled_sheet,
    sample_relations,
    score_sheet,
)
from .export import FORMATS, export_graph
from .louvain import KERNEL_NAME, CommunityResult, detect_communities
from .overlap import POLICIES, OverlapReport, compare_datasets
from .stats import degree_stats, graph_summary, modularity
from .view import (
    GraphStats,
    GraphView,
    build_view,
    compute_stats,
    modularity_of,
)

__all__ = [
    "SHEET_HEADER",
    "evaluate_precision",
    "export_labeling_sheet",
    "precision",
    "read_labeled_sheet",
    "sample_relations",
    "score_sheet",
    "FORMATS",
    "export_graph",
    "KERNEL_NAME",
    "CommunityResult",
    "detect_communities",
    "POLICIES",
    "OverlapReport",
    "compare_datasets",
    "degree_stats",
    "graph_summary",
    "modularity",
    "GraphStats",
    "GraphView",
    "build_view",
    "compute_stats",
    "modularity_of",
]

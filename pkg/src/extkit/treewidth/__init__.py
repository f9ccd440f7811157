"""Tree decompositions and bag-state dynamic programs."""

from .decomposition import (
    NiceNode,
    NiceTreeDecomposition,
    NodeKind,
    TreeDecomposition,
    compute_tree_decomposition,
    parse_td,
    serialize_td,
    to_nice,
)
from .dp import (
    DpStats,
    ext_ds_treewidth,
    ext_ec_treewidth,
    ext_eds_treewidth,
    ext_em_treewidth,
    ext_vc_treewidth,
)

__all__ = [
    "DpStats",
    "NiceNode",
    "NiceTreeDecomposition",
    "NodeKind",
    "TreeDecomposition",
    "compute_tree_decomposition",
    "ext_ds_treewidth",
    "ext_ec_treewidth",
    "ext_eds_treewidth",
    "ext_em_treewidth",
    "ext_vc_treewidth",
    "parse_td",
    "serialize_td",
    "to_nice",
]

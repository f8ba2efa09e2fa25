"""Strongly connected dominating-absorbent sets (virtual backbones) in disk graphs."""

from .approx import (approx_scdas, build_connector_graph, cds_dgb, connector_degree_cap, dedupe,
                     deduped_connector_graph)
from .baselines import OracleConfig, brute_force_opt, dast, gcma
from .distsim import round_bound_report, simulate_approx, simulate_ldhd
from .graph import (Digraph, DiskGraph, DiskNode, Solution, Verdict, bidirectional_subgraph,
                    build_disk_graph, diameter, is_dominating_absorbent, is_independent_maximal,
                    is_strongly_connected, read_instance, strongly_connected_components,
                    validate_scdas, write_instance)
from .instances import GenConfig, fixture, generate_instance
from .ldhd import ldhd
from .mis import greedy_mis, luby_mis

__version__ = "0.1.0"

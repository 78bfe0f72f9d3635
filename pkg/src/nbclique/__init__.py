"""Clique and quasi-clique mining from dense vertex neighborhoods."""
from .graph import (
    DegreeStats,
    EdgeListError,
    Graph,
    IngestSummary,
    degree_stats,
    from_edges,
    induced_subgraph,
    parse_edge_list,
    read_edge_list,
    write_edge_list,
)
from .kernels import BACKEND
from .metrics import (
    count_triangles,
    edge_density,
    find_ego_cliques,
    is_clique,
    is_maximal_clique,
    ndp,
    triangle_density,
    vertex_metrics,
)
from .miner import (
    EdgeSurplusParams,
    MiningPlan,
    SeedSet,
    SubgraphReport,
    edge_surplus,
    greedy_oqc,
    kcore_decomposition,
    local_search_oqc,
    mine,
    seed_avg_degree,
    seeds_s1,
    seeds_s2,
)
from .theory import (
    BoundDomainError,
    PowerLawModel,
    beta_max,
    eta,
    lower_tail_bound,
    markov_upper_bound,
    neighborhood_guarantee,
    variance_bound,
)

__version__ = "0.1.0"

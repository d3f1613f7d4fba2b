"""Account-to-shard allocation for sharded ledgers."""

from ._core import (
    AlloParams,
    Allocation,
    DataError,
    EpochReport,
    GTxAlloResult,
    ParameterError,
    ShardReport,
    StaleAllocation,
    SyntheticSpec,
    SystemReport,
    Transaction,
    TransactionGraph,
    TxalloError,
    UnmappedAccount,
    __version__,
    a_txallo,
    allocation_from_dict,
    balance,
    build_graph,
    gamma_exact,
    gamma_graph,
    g_txallo,
    generate_synthetic,
    hash_allocate,
    hash_shard,
    louvain,
    merge_graph,
    modularity,
    mu,
    pair_count,
    replay,
    shard_latency,
    system_report,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]

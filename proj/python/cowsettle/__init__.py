"""Python bindings for the cowsettle batch-matching engine.

Quantities, prices and USD values are passed as decimal strings.
"""

from ._cowsettle import (
    CowSettleError,
    PriceTable,
    SwapOrder,
    check_cycle,
    close_chain,
    dollar_matrix,
    enumerate_cycles,
    imbalance,
    ingest_csv,
    run_batch,
    run_cli,
    transfer_matrix,
)

__all__ = [
    "CowSettleError",
    "PriceTable",
    "SwapOrder",
    "check_cycle",
    "close_chain",
    "dollar_matrix",
    "enumerate_cycles",
    "imbalance",
    "ingest_csv",
    "run_batch",
    "run_cli",
    "transfer_matrix",
]

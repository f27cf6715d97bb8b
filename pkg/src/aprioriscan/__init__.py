"""Level-wise frequent itemset mining with transaction-scan accounting."""
from .candidates import JoinKind, JoinStrategy, DEFAULT_STRATEGY, join
from .dataset import (
    TransactionDatabase,
    generate_synthetic,
    load,
    load_table1,
    parse_basket_csv,
    parse_dat,
)
from .metrics import ScanLedger, compare, render_report
from .miners import (
    Algorithm,
    SupportThreshold,
    mine,
    mine_classic,
    mine_filtered,
    mine_intersect,
    mine_oracle,
)

__version__ = "0.1.0"

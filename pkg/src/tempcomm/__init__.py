"""Community-structure similarity for temporal networks whose node set changes."""

__version__ = "0.1.0"

from .community import (Partition, SnapshotStats, edge_node_ratio, lcc_proportion, louvain,
                        modularity, snapshot_stats)
from .errors import (CannotRewireError, EmptyIntersectionError, EmptySnapshotError,
                     IncompletePartitionError, InvalidConfigError, InvalidIntervalError,
                     NodeSetMismatchError, ParseError, TempCommError, UndefinedModularityError)
from .nullmodel import ZScoreReport, degree_preserving_rewire, modularity_zscore
from .similarity import (AugmentedPair, ContingencyTable, SimilarityMatrix, VirtualLabel,
                         augment_union, inmi, nmi, pairwise_matrix, unmi)
from .synthetic import SynthConfig, SynthState, synth_init, synth_run, synth_step
from .temporal import (Snapshot, TemporalEvent, TemporalGraph, extract_snapshots, ingest_events,
                       parse_duration, restrict_time)

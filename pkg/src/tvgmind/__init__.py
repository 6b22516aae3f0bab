"""Time-varying graphs, epistemic mind graphs and bounded-confidence dynamics."""

__version__ = "0.1.0"

from .intervals import INF, IntervalSet, TimeInterval
from .tvg import (
    StaticGraph,
    TemporalEdge,
    TimeVaryingGraph,
    TVGError,
    UnavailableEdgeError,
    UnknownEdgeError,
    UnknownNodeError,
    available_dates,
    edge_characteristic_dates,
    footprint,
    graph_characteristic_dates,
    latency,
    snapshots,
)
from .journeys import (
    Hop,
    Journey,
    earliest_arrival_times,
    foremost_journey,
    is_journey,
    is_temporally_connected,
    mutual_reachability_matrix,
    reachability_set,
)
from .epistemic import (
    EpistemicRep,
    ExternalEvent,
    Kind,
    KindSet,
    MindGraph,
    Proposition,
    activate,
    classify,
    confidence_update,
    resistance,
    tolerance_of,
)
from .dynamics import (
    Agent,
    ConfigError,
    EventRecord,
    SimConfig,
    Society,
    Trajectory,
    contact_schedule,
    generate_society,
    interact,
    run,
)
from .metrics import ClusterReport, clusters, converged, spread

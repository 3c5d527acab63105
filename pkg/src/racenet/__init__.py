"""racenet: evolutionary dynamics of a development race on networks.

Firms in a race toward a valuable technology repeatedly choose whether to
comply with safety precautions; strategies spread by payoff-biased imitation
on an interaction network.  The package provides the closed-form game layer,
network generators, exact-replay stochastic dynamics, experiment drivers with
CSV output, and a command-line interface (``racenet``).
"""

__version__ = "0.1.0"

from .dynamics import (DynamicsConfig, PopulationState, Strategy, UpdateRule,
                       async_step, fermi_probability, fitness, init_population,
                       set_zealots, sync_generation)
from .errors import (ConfigError, ParseError, SingularBoundaryError,
                     ValidationError)
from .experiments import (CellAggregate, InterferenceMode, NetworkSpec,
                          ReplicateResult, RunProtocol, ZealotOrder,
                          ZealotSpec, aggregate, degree_class_timeseries,
                          desk_protocol, full_scale_protocol, resolve_bonus,
                          resolve_zealots, run_replicate, sweep,
                          zealot_progression)
from .game import (Dominance, PayoffMatrix2, Preference, RaceParameters,
                   Regime, Region, classify_region, collective_preference,
                   early_region_boundaries, late_risk_dominance_boundary,
                   late_welfare_boundary, race_payoff_matrix, risk_dominance,
                   stage_payoff_matrix)
from .networks import (DegreeClass, Graph, GraphMetrics, Provenance,
                       barabasi_albert, check_hub_classes, complete,
                       degree_class, degree_classes, dms, graph_metrics,
                       lattice, load_edge_list, nominal_connectivity,
                       rank_by_degree, save_edge_list)
from .rng import SplitMix64, derive_seed, mix64

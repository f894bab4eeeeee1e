# treembed, probabilistic tree embeddings and distance oracles
# Copyright (C) 2026  treembed authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

from .exceptions import (TreembedError, ArgumentError, StorageError, FormatError, GraphFormatError, PairFormatError,
                         OracleFormatError, OracleVersionError, StructuralError, ContractViolation)
from .graph import (Graph, Permutation, ExactDistances, parse_graph, write_graph, gen_grid, gen_power_law,
                    gen_slim, gen_random, suite_graph, random_permutation, dijkstra_exact, exact_distances_many)
from .bucket import BucketTree, bucket_tree_new, approx_sssp, refine_gabow
from .domseq import (DominanceSequence, PriorityUnionFind, brute_force_domseq, build_domseq_exact,
                     build_domseq_approx, build_domseq, build_priority_union_find, component_of)
from .frt import Cps, FrtTree, domseq_to_cps, build_frt_tree, tree_distance, expanded_tree_distance
from .oracle import DistanceOracle, StretchReport, build_oracle, query, eval_stretch, serialize, deserialize
from .ramsey import MetricView, estimate_padding, simulate_bucket_lemma, simulate_range_lemma
from .storage import Storage, GCStorage, LocalStorage, open_storage

from ._version import __version__

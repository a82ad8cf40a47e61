"""Zero-sum cycles in group-labelled complete digraphs."""
from .abelian import (FiniteGroup, GroupElem, GroupError, GroupSpec, QuotientMap, Subgroup, cyclic_subgroup,
                      enumerate_subgroups, generated_subgroup, parse_group_spec, quotient)
from .chains import (Complete, K4Chain, Stalled, SubgroupConcentration, TriangleChain, ZeroSumFound,
                     build_k4_chain, build_triangle_chain, k3_extract)
from .labelling import (ArcLabelling, EdgeLabelling, FormatError, Switching, apply_switching,
                        apply_switching_sequence, b_factor, canonicalize, labelling_from_json,
                        labelling_to_json, load_labelling, lower_bound_labelling, random_edge_labelling,
                        random_labelling, switching_equivalent)
from .minors import HostGraph, MinorModel, auxiliary_labelling, extract_divisible_cycle, validate_minor_model
from .oracle import (DiCycle, DiPath, find_zero_sum_cycle_exhaustive, is_zero_sum_free, path_sum_set,
                     verify_cycle, verify_path)
from .ramsey import compute_nA, exists_zero_sum_free, sat_export, sat_import_verify
from .solver import NoWitnessError, SolveReport, solve, solve_general, solve_prime, solve_undirected

__version__ = '0.1.0'

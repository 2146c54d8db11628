"""Graph Ramsey numbers: exact search, constructions, extraction and spectra."""
from .colouring import BLUE, GREEN, RED, EdgeColouring, colour_class, parse_colouring, random_colouring, write_colouring
from .constructions import (
    OracleInsufficient,
    OutOfRegime,
    RamseyOracle,
    biclique_path_graph,
    build_G,
    clique_path_graph,
    clique_plus_isolated,
    double_star,
    multipartite_path_graph,
    select_t_case1,
    select_t_case2,
)
from .engine import ARROWS, UNKNOWN, WITNESS, RamseyResult, SearchBudget, arrows, find_mono_copy, ramsey_number
from .extraction import (
    CliquePath,
    MonoEmbedding,
    StepFailure,
    cover_by_clique_paths,
    extract_case1,
    extract_case2,
    find_long_mono_path,
    greedy_mono_tiling,
    stitch_case1,
)
from .graph import (
    Embedding,
    Graph,
    canonical_form,
    chromatic_number,
    enumerate_graphs,
    find_embedding,
    parse_graph6,
    write_graph6,
)
from .lower_bounds import blocked_3colouring, r3_lower_bound, random_biclique_witness, verify_no_mono
from .spectrum import SpectrumReport, check_burr_erdos_floor, check_interval_inclusion, find_c_gaps, spectrum

__version__ = "0.1.0"

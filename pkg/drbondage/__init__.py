"""drbondage: exact double Roman domination and double Roman bondage numbers.

Modules:
    graph_core     bitset graphs, graph6/edge-list I/O, family generators, enumerators
    drdf_core      labelings, the validity predicate, no-ones normalization
    exact_solver   brute-force oracle, branch-and-bound, small-value classifier
    bondage        exact bondage search, bound catalog, certificates, closed forms
    reduction      3-SAT gadget graph and its claim checks
    audit          invariant suites behind `drbondage verify-paper`
    cli            command-line front end
"""

__version__ = "0.1.0"

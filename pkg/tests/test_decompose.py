import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from graphs import barbell, clique, clique_edges, cycle, grid, make_graph, path, random_graph, star
from mdlsumm.decompose import (
    ConvergenceError,
    DecomposerConfig,
    Method,
    Partition,
    core_numbers,
    cut_size,
    decompose,
    ingest_partition_file,
    kcbc_decompose,
    louvain_cluster,
    louvain_levels,
    modularity,
    multilevel_partition,
    partition_to_candidates,
    slashburn_decompose,
    spectral_cluster,
)
from mdlsumm.decompose.louvain import local_move_gains
from mdlsumm.graph import Graph, ParseError

SOLVERS = ["dense", "lanczos", "orthogonal"]


def node_sets(cands):
    return [set(c.nodes) for c in cands]


def parts(p: Partition):
    return {frozenset(c.tolist()) for c in p.communities()}


def assert_valid_partition(p: Partition, n: int):
    a = p.assignment
    assert len(a) == n
    if n:
        assert sorted(set(a.tolist())) == list(range(p.community_count))
    assert sum(len(c) for c in p.communities()) == n


def two_cliques_sharing_a_node():
    # nodes 0..4 and 4..8, node 4 shared
    return make_graph(9, clique_edges(range(5)) + clique_edges(range(4, 9)))


# ---------------------------------------------------------------- config


def test_config_validation():
    with pytest.raises(ValueError):
        DecomposerConfig(resolution=0)
    with pytest.raises(ValueError):
        DecomposerConfig(method="spectral", cluster_count=1)
    with pytest.raises(ValueError):
        DecomposerConfig(hub_fraction=1.5)
    with pytest.raises(ValueError):
        DecomposerConfig(method="nope")
    cfg = DecomposerConfig()
    assert cfg.clusters_for(10) == 2 and cfg.clusters_for(2900) == 29 and cfg.clusters_for(10**6) == 500


# ---------------------------------------------------------------- slashburn


def test_slashburn_star():
    cands = slashburn_decompose(star(10), DecomposerConfig(method="slashburn", hub_fraction=0.01))
    assert node_sets(cands) == [set(range(11))]


def test_slashburn_two_cliques_sharing_a_node():
    cands = slashburn_decompose(two_cliques_sharing_a_node(), DecomposerConfig(method="slashburn"))
    sets = node_sets(cands)
    assert sets[0] == set(range(9))
    assert {0, 1, 2, 3} in sets and {5, 6, 7, 8} in sets
    assert cands[0].source_iteration == 0


def test_slashburn_empty_graph():
    assert slashburn_decompose(Graph.from_edges(0, [])) == []
    assert slashburn_decompose(Graph.from_edges(5, [])) == []


def test_slashburn_respects_max_iterations():
    g = random_graph(np.random.default_rng(1), 80, 0.1)
    cands = slashburn_decompose(g, DecomposerConfig(method="slashburn", max_iterations=1))
    assert {c.source_iteration for c in cands} == {0}


def test_slashburn_candidates_are_at_least_three_nodes(rng):
    for _ in range(10):
        g = random_graph(rng, 60, 0.06)
        for c in slashburn_decompose(g, DecomposerConfig(method="slashburn", hub_fraction=0.05)):
            assert len(c) >= 3
            assert all(0 <= v < g.n for v in c.nodes)


# ---------------------------------------------------------------- cores


def test_core_number_examples():
    assert core_numbers(clique(5)) == [4] * 5
    assert core_numbers(star(10)) == [1] * 11
    assert core_numbers(Graph.from_edges(3, [])) == [0, 0, 0]


@pytest.mark.parametrize("seed", range(100))
def test_core_numbers_match_peeling_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 51))
    g = random_graph(rng, n, float(rng.uniform(0.02, 0.5)))
    assert core_numbers(g) == oracles.naive_core_numbers(n, g.edge_array.tolist())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31))
def test_core_numbers_monotone_under_edge_addition(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 30))
    g = random_graph(rng, n, float(rng.uniform(0.05, 0.5)))
    u, v = sorted(rng.choice(n, 2, replace=False).tolist())
    h = make_graph(n, g.edge_array.tolist() + [(u, v)])
    before, after = core_numbers(g), core_numbers(h)
    assert all(b <= a for b, a in zip(before, after))
    assert after == oracles.naive_core_numbers(n, h.edge_array.tolist())


# ---------------------------------------------------------------- kcbc


def test_kcbc_two_cliques_and_a_path():
    edges = clique_edges(range(5)) + clique_edges(range(5, 10)) + [(10, 11), (11, 12)]
    cands = kcbc_decompose(make_graph(13, edges))
    assert node_sets(cands) == [set(range(5)), set(range(5, 10))]
    assert [c.source_iteration for c in cands] == [0, 0]


def test_kcbc_cycle_and_tree():
    assert node_sets(kcbc_decompose(cycle(6))) == [set(range(6))]
    assert kcbc_decompose(path(10)) == []
    assert kcbc_decompose(star(6)) == []


def test_kcbc_max_iterations():
    g = random_graph(np.random.default_rng(2), 60, 0.2)
    assert {c.source_iteration for c in kcbc_decompose(g, max_iterations=1)} == {0}


def _induced_edges(g, nodes):
    s = set(nodes)
    return {(u, v) for u, v in g.edge_array.tolist() if u in s and v in s}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31))
def test_kcbc_emitted_edges_are_disjoint(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(5, 50)), float(rng.uniform(0.05, 0.5)))
    seen = set()
    for c in kcbc_decompose(g):
        assert c.edges <= _induced_edges(g, c.nodes)
        assert not (c.edges & seen)
        seen |= c.edges


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31))
def test_kcbc_induced_edges_are_disjoint(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(5, 50)), float(rng.uniform(0.05, 0.5)))
    cands = kcbc_decompose(g)
    induced = [_induced_edges(g, c.nodes) for c in cands]
    for i in range(len(induced)):
        for j in range(i):
            assert not (induced[i] & induced[j])


# ---------------------------------------------------------------- louvain


def test_louvain_barbell_matches_exhaustive_optimum():
    g = barbell(5)
    p = louvain_cluster(g, DecomposerConfig(method="louvain", resolution=1.0))
    assert parts(p) == {frozenset(range(5)), frozenset(range(5, 10))}
    best = oracles.best_bipartition_modularity(10, g.edge_array.tolist())
    assert modularity(g, p, 1.0) == pytest.approx(best, abs=1e-12)


def test_louvain_disjoint_triangles():
    g = make_graph(9, clique_edges([0, 1, 2]) + clique_edges([3, 4, 5]) + clique_edges([6, 7, 8]))
    p = louvain_cluster(g, DecomposerConfig(method="louvain", resolution=1.0))
    assert parts(p) == {frozenset({0, 1, 2}), frozenset({3, 4, 5}), frozenset({6, 7, 8})}
    best = oracles.best_partition_modularity(9, g.edge_array.tolist())
    assert modularity(g, p, 1.0) == pytest.approx(best, abs=1e-12)


def test_modularity_matches_oracle(rng):
    g = random_graph(rng, 30, 0.2)
    a = rng.integers(0, 4, g.n)
    p = Partition.from_labels(a)
    for tau in (1.0, 0.5, 1e-4):
        assert modularity(g, p, tau) == pytest.approx(
            oracles.modularity(g.n, g.edge_array.tolist(), p.assignment.tolist(), tau)
        )


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([1.0, 0.3, 1e-4]))
def test_louvain_fixed_point_and_monotone(seed, tau):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(5, 60)), float(rng.uniform(0.03, 0.3)))
    cfg = DecomposerConfig(method="louvain", resolution=tau, seed=seed)
    partitions, scores = louvain_levels(g, cfg)
    assert all(b >= a - 1e-12 for a, b in zip(scores, scores[1:]))
    final = partitions[-1]
    assert_valid_partition(final, g.n)
    assert max(local_move_gains(g, final, tau), default=0.0) <= 1e-9
    assert scores[-1] == pytest.approx(modularity(g, final, tau), abs=1e-9)


def test_louvain_is_seed_deterministic(rng):
    g = random_graph(rng, 80, 0.08)
    cfg = DecomposerConfig(method="louvain", resolution=1.0, seed=5)
    assert louvain_cluster(g, cfg).assignment.tolist() == louvain_cluster(g, cfg).assignment.tolist()


# ---------------------------------------------------------------- spectral


@pytest.mark.parametrize("solver", SOLVERS)
def test_spectral_two_disjoint_cliques(solver):
    g = make_graph(8, clique_edges(range(4)) + clique_edges(range(4, 8)))
    p = spectral_cluster(g, DecomposerConfig(method="spectral", cluster_count=2, eigensolver=solver))
    assert parts(p) == {frozenset(range(4)), frozenset(range(4, 8))}


@pytest.mark.parametrize("solver", SOLVERS)
def test_spectral_barbell_is_min_normalized_cut(solver):
    g = barbell(6)
    p = spectral_cluster(g, DecomposerConfig(method="spectral", cluster_count=2, eigensolver=solver))
    _, left = oracles.min_normalized_cut(12, g.edge_array.tolist())
    assert parts(p) == {left, frozenset(range(12)) - left}
    assert parts(p) == {frozenset(range(6)), frozenset(range(6, 12))}


@pytest.mark.parametrize("solver", SOLVERS)
def test_spectral_single_clique_is_valid(solver):
    p = spectral_cluster(clique(7), DecomposerConfig(method="spectral", cluster_count=2, eigensolver=solver))
    assert_valid_partition(p, 7)


def test_spectral_reports_non_convergence():
    g = random_graph(np.random.default_rng(9), 300, 0.03)
    cfg = DecomposerConfig(method="spectral", cluster_count=6, eigensolver="orthogonal", eig_max_sweeps=2)
    with pytest.raises(ConvergenceError) as info:
        spectral_cluster(g, cfg)
    assert info.value.residual > cfg.eig_tol


def test_spectral_solvers_agree_on_planted_communities(rng):
    blocks = [range(i, i + 15) for i in range(0, 60, 15)]
    edges = [e for b in blocks for e in clique_edges(b)] + [(14, 15), (29, 30), (44, 45)]
    g = make_graph(60, edges)
    expect = {frozenset(b) for b in blocks}
    for solver in SOLVERS:
        p = spectral_cluster(g, DecomposerConfig(method="spectral", cluster_count=4, eigensolver=solver))
        assert parts(p) == expect


# ---------------------------------------------------------------- multilevel


def test_multilevel_barbell():
    g = barbell(6)
    p = multilevel_partition(g, DecomposerConfig(method="multilevel", cluster_count=2))
    assert cut_size(g, p) == 1 == oracles.min_balanced_cut(12, g.edge_array.tolist())
    assert parts(p) == {frozenset(range(6)), frozenset(range(6, 12))}


def test_multilevel_grid():
    g = grid(4, 4)
    p = multilevel_partition(g, DecomposerConfig(method="multilevel", cluster_count=2))
    assert cut_size(g, p) == 4 == oracles.min_balanced_cut(16, g.edge_array.tolist())
    assert sorted(len(c) for c in p.communities()) == [8, 8]


def test_multilevel_k_equals_n_and_too_many_parts():
    g = cycle(5)
    p = multilevel_partition(g, DecomposerConfig(method="multilevel", cluster_count=5))
    assert sorted(len(c) for c in p.communities()) == [1] * 5
    with pytest.raises(ValueError):
        multilevel_partition(g, DecomposerConfig(method="multilevel", cluster_count=6))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 8))
def test_multilevel_balance(seed, k):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(k, 400))
    g = random_graph(rng, n, 4.0 / n)
    p = multilevel_partition(g, DecomposerConfig(method="multilevel", cluster_count=k, seed=seed))
    assert_valid_partition(p, n)
    cap = max(-(-n // k), int(1.05 * -(-n // k)))
    assert max(len(c) for c in p.communities()) <= cap


# ---------------------------------------------------------------- partitions


def test_partition_to_candidates_examples():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    cands = partition_to_candidates(Partition.from_labels([0, 0, 0, 1, 1]), g)
    assert node_sets(cands) == [{0, 1, 2}]
    assert partition_to_candidates(Partition.from_labels(range(5)), g) == []
    with pytest.raises(ValueError):
        partition_to_candidates(Partition.from_labels([0, 0]), g)


def test_louvain_barbell_gives_two_candidates():
    cands = decompose(barbell(5), DecomposerConfig(method="louvain", resolution=1.0))
    assert node_sets(cands) == [set(range(5)), set(range(5, 10))]


def test_partition_file_examples():
    g = path(3)
    assert parts(ingest_partition_file(b"0\n0\n1\n", g)) == {frozenset({0, 1}), frozenset({2})}
    assert ingest_partition_file(b"0\n0\n0\n", g).community_count == 1
    assert ingest_partition_file(b"0\n5\n5\n", g).assignment.tolist() == [0, 1, 1]
    with pytest.raises(ParseError):
        ingest_partition_file(b"0\n1\n", g)
    with pytest.raises(ParseError):
        ingest_partition_file(b"0\nx\n1\n", g)


def test_partition_rejects_sparse_ids():
    with pytest.raises(ValueError):
        Partition(np.array([0, 2, 2]))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([Method.LOUVAIN, Method.SPECTRAL, Method.MULTILEVEL]))
def test_partitioners_produce_valid_non_overlapping_candidates(seed, method):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(6, 120))
    g = random_graph(rng, n, float(rng.uniform(0.02, 0.3)))
    cfg = DecomposerConfig(method=method, cluster_count=min(4, n), seed=seed)
    cands = decompose(g, cfg)
    seen = set()
    for c in cands:
        assert len(c) >= 3 and not (set(c.nodes) & seen)
        seen |= set(c.nodes)


@pytest.mark.parametrize("method", list(Method))
def test_decomposers_are_deterministic(method):
    g = random_graph(np.random.default_rng(11), 150, 0.05)
    cfg = DecomposerConfig(method=method, seed=3, cluster_count=5, hub_fraction=0.02)
    a = decompose(g, cfg)
    b = decompose(g, cfg)
    assert [c.nodes for c in a] == [c.nodes for c in b]

import pytest

from wraplay.corpus import (
    CorpusSpec,
    LEGACY_CLASSES,
    SIZE_CLASSES,
    generate_legacy_graph,
    generate_partition_graph,
)
from wraplay.graphs import (
    density,
    graph_to_json,
    is_connected,
    modularity,
    per_cluster_modularity,
)


def test_small_class_bands_at_target_04():
    g, c = generate_partition_graph(CorpusSpec("small", 0.40, seed=1))
    assert 68 <= g.node_count <= 80
    assert 710 <= g.edge_count <= 925
    assert abs(density(g) - 0.3) <= 0.01
    assert 0.38 <= modularity(g, c) <= 0.42
    assert 3 <= c.cluster_count <= 8
    assert is_connected(g)


def test_determinism_same_spec_identical_output():
    spec = CorpusSpec("small", 0.40, seed=1)
    g1, c1 = generate_partition_graph(spec)
    g2, c2 = generate_partition_graph(spec)
    assert g1.edges == g2.edges
    assert c1.assignment == c2.assignment
    assert graph_to_json(g1, c1) == graph_to_json(g2, c2)


def test_different_seeds_differ():
    g1, _ = generate_partition_graph(CorpusSpec("small", 0.40, seed=1))
    g2, _ = generate_partition_graph(CorpusSpec("small", 0.40, seed=2))
    assert g1.edges != g2.edges


def test_per_cluster_modularity_floor():
    g, c = generate_partition_graph(CorpusSpec("small", 0.30, seed=7))
    contributions = per_cluster_modularity(g, c)
    assert min(contributions) > 0.23


@pytest.mark.parametrize("target", [0.25, 0.30, 0.35, 0.40, 0.45])
def test_all_modularity_levels_small(target):
    g, c = generate_partition_graph(CorpusSpec("small", target, seed=3))
    assert abs(modularity(g, c) - target) <= 0.02
    assert abs(density(g) - 0.3) <= 0.01


def test_large_class_bands():
    g, c = generate_partition_graph(CorpusSpec("large", 0.30, seed=2))
    assert 126 <= g.node_count <= 134
    assert 2310 <= g.edge_count <= 2590
    assert abs(density(g) - 0.3) <= 0.01
    assert abs(modularity(g, c) - 0.30) <= 0.02


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        CorpusSpec("tiny", 0.4, seed=1)
    with pytest.raises(ValueError):
        CorpusSpec("small", 1.5, seed=1)


def test_size_class_tables_consistent():
    for cls in SIZE_CLASSES.values():
        lo, hi = cls["nodes"]
        assert lo <= hi


@pytest.mark.parametrize("size_class", list(LEGACY_CLASSES))
@pytest.mark.parametrize("model", ["smallworld", "scalefree", "binomial"])
def test_legacy_graphs_in_band(size_class, model):
    g = generate_legacy_graph(size_class, model, seed=4)
    assert g.node_count == LEGACY_CLASSES[size_class]["nodes"]
    lo, hi = LEGACY_CLASSES[size_class]["links"]
    assert lo <= g.edge_count <= hi
    assert is_connected(g)


def test_legacy_determinism():
    a = generate_legacy_graph("legacy-small", "binomial", seed=9)
    b = generate_legacy_graph("legacy-small", "binomial", seed=9)
    assert a.edges == b.edges

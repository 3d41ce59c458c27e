import pytest

from labelspace.label_graph import LabelGraph

import oracles

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


def graph(n, edges, weights=None):
    return LabelGraph(oracles.adjacency(n, edges, weights))


@pytest.fixture
def two_triangles():
    return graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


@pytest.fixture
def barbell():
    return graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


@pytest.fixture
def k4():
    return graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def cliques():
    return graph(*oracles.clique_pair(4))


def disjoint_pairs_dataset(n_rows=24, seed=0):
    """Labels {0,1} or {2,3} only, so the co-occurrence graph is two separate edges."""
    import numpy as np

    from labelspace.dataset import MultiLabelDataset

    rng = np.random.default_rng(seed)
    kind = np.arange(n_rows) % 2
    Y = np.zeros((n_rows, 4), dtype=bool)
    Y[kind == 0, :2] = True
    Y[kind == 1, 2:] = True
    X = np.column_stack([kind * 5.0, np.zeros(n_rows)]) + rng.normal(0, 1, size=(n_rows, 2))
    return MultiLabelDataset("pairs", X, Y)


@pytest.fixture
def pairs_arff(tmp_path):
    from labelspace.dataset import write_arff

    path = tmp_path / "pairs.arff"
    write_arff(disjoint_pairs_dataset(), path)
    return path

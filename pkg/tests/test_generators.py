import numpy as np
import pytest

from pcon.generators import GenSpec, generate, make_rng, planted_partition
from pcon.graph import largest_connected_component
from pcon.peel import conductance


def edge_set(g):
    return {tuple(e) for e in g.edges().tolist()}


def test_er_p1_is_complete():
    g, truth = generate(GenSpec("ER", 4, {"p": 1.0}, seed=9))
    assert g.m == 6 and truth is None


def test_ws_beta0_is_cycle():
    g, _ = generate(GenSpec("WS", 6, {"k": 2, "beta": 0.0}, seed=1))
    assert edge_set(g) == {(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)}


@pytest.mark.parametrize("text", ["er:n=300,p=0.02", "ba:n=300,k=3", "ws:n=300,k=4,beta=0.2",
                                  "plc:n=300,k=3,pt=0.5", "planted:n=300,c=3,k_in=6,mu=0.2"])
def test_deterministic_per_seed(text):
    a, _ = generate(GenSpec.parse(text, seed=5))
    b, _ = generate(GenSpec.parse(text, seed=5))
    c, _ = generate(GenSpec.parse(text, seed=6))
    assert edge_set(a) == edge_set(b)
    assert edge_set(a) != edge_set(c)
    assert a.degrees.sum() == 2 * a.m


def test_er_edge_count_near_expectation():
    n, p = 2000, 0.005
    counts = [generate(GenSpec("ER", n, {"p": p}, seed=s))[0].m for s in range(5)]
    assert np.mean(counts) == pytest.approx(p * n * (n - 1) / 2, rel=0.05)


def test_ba_edge_count():
    g, _ = generate(GenSpec("BA", 500, {"k": 3}, seed=2))
    assert g.m == 3 * (500 - 3)


def test_plc_edge_count():
    # a triad edge can coincide with a later preferential target
    g, _ = generate(GenSpec("PLC", 500, {"k": 3, "pt": 0.8}, seed=2))
    assert 0.98 * 3 * (500 - 3) <= g.m <= 3 * (500 - 3)


def test_planted_cut_fraction_tracks_mu():
    fracs = []
    for s in range(20):
        g, labels = planted_partition(100, 2, 8, 0.1, make_rng(42 + s))
        e = g.edges()
        fracs.append(np.mean(labels[e[:, 0]] != labels[e[:, 1]]))
    assert np.mean(fracs) == pytest.approx(0.1, rel=0.3)


def test_planted_community_conductance_trend():
    means = []
    for mu in (0.1, 0.3, 0.5):
        vals = []
        for s in range(3):
            g, labels = planted_partition(2000, 10, 10, mu, make_rng(s))
            vals.append(float(conductance(g, np.flatnonzero(labels == 0))))
        means.append(np.mean(vals))
        assert means[-1] == pytest.approx(mu, abs=0.05)
    assert means[0] < means[1] < means[2]


def test_planted_labels_dense():
    g, labels = generate(GenSpec.parse("planted:n=103,c=4,k_in=5,mu=0.3", seed=1))
    assert set(labels.tolist()) == {0, 1, 2, 3}
    lcc, rm = largest_connected_component(g)
    assert lcc.n <= g.n


@pytest.mark.parametrize("text", ["ba:n=5,k=5", "ws:n=10,k=3", "ws:n=10,k=4,beta=2",
                                  "plc:n=10,k=3,pt=1.5", "er:n=10,p=1.5", "planted:n=10,c=2,mu=1.0",
                                  "planted:n=10,c=6", "er:n=10"])
def test_infeasible_params(text):
    with pytest.raises(ValueError):
        generate(GenSpec.parse(text))


def test_spec_parse_and_str():
    spec = GenSpec.parse("er:n=1000,p=0.01", seed=3)
    assert (spec.model, spec.n, spec.params, spec.seed) == ("ER", 1000, {"p": 0.01}, 3)
    assert GenSpec.parse(str(spec), seed=3) == spec
    with pytest.raises(ValueError):
        GenSpec.parse("lfr:n=10")
    with pytest.raises(ValueError):
        GenSpec.parse("er:p=0.1")

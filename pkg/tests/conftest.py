"""
Shared pytest fixtures for unit tests.
"""
import os

import pytest


# Set required environment variables for tests before any imports
@pytest.fixture(scope='session', autouse=True)
def setup_test_env():
    """Setup test environment variables before any tests run."""
    os.environ.setdefault('APP_ENV', 'test')
    os.environ.setdefault('SWEEP_WORKERS', '1')
    yield


def small_scenario(seed=3, horizon=10, **sections):
    """A dense field where every node hears every other node."""
    from common.services.scenario import build_config

    data = {
        'seed': seed,
        'horizon': horizon,
        'field': {
            'width': 20.0, 'height': 20.0, 'sink_position': (10.0, 10.0),
            'leader_count': 2, 'follower_count': 10, 'sink_energy': 1000.0,
        },
    }
    for key, value in sections.items():
        if isinstance(value, dict) and isinstance(data.get(key), dict):
            data[key] = {**data[key], **value}
        else:
            data[key] = value
    return build_config(data)


@pytest.fixture
def scenario():
    """Attack-free small scenario."""
    return small_scenario()


@pytest.fixture
def minimal_scenario():
    """One cluster and one sector: SC, FSH and two leaves, the CC doubling as monitor."""
    return small_scenario(
        horizon=10,
        field={'leader_count': 1, 'follower_count': 4},
    )


@pytest.fixture
def deployed_state(scenario):
    """A network state after deployment and neighbour discovery, before any election."""
    from common.models import NetworkState
    from common.repositories.factory import RepositoryFactory
    from common.services.simulation import spawn_generators
    from common.services.topology import TopologyService

    rngs = spawn_generators(scenario.seed)
    state = NetworkState(scenario=scenario, repositories=RepositoryFactory(scenario).get_all())
    service = TopologyService(scenario)
    nodes = service.deploy_nodes(rngs['topology'])
    state.nodes = {node.uid: node for node in nodes}
    state.neighbor_map = service.neighbor_discovery(nodes)
    return state


@pytest.fixture
def formed_state(scenario, deployed_state):
    """A network state with clusters and sectors formed."""
    import numpy as np
    from common.services.hierarchy import HierarchyService

    hierarchy = HierarchyService(scenario, np.random.default_rng(0))
    hierarchy.form_clusters(deployed_state)
    hierarchy.form_sectors(deployed_state)
    return deployed_state

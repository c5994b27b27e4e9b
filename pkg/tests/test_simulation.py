"""
Unit tests for common/services/simulation.py
"""
import pytest

from common.helpers.exceptions import PhaseError, SimulationError
from common.models import EventType, LogType, Phase, ReconfigTrigger, SimEvent
from common.services.simulation import EventQueue, SimulationService, spawn_generators
from common.services.topology import SINK_ID
from tests.conftest import small_scenario

ATTACKS = [
    pytest.param({'archetype': 'Flooder', 'intensity': 8.0}, id='flooder'),
    pytest.param({'archetype': 'Flooder', 'intensity': 3.0}, id='flooder-just-above-nominal'),
    pytest.param({'archetype': 'UnslottedSender', 'intensity': 2.0}, id='unslotted'),
    pytest.param({'archetype': 'WakeInjector'}, id='wake'),
    pytest.param({'archetype': 'EnergySpoofer', 'intensity': 3.0}, id='spoofer'),
]


def _run(scenario):
    return SimulationService(scenario).run()


class TestEventQueue:
    """Tests for EventQueue."""

    def test_equal_times_pop_in_insertion_order(self):
        """Test that ties on time are broken by insertion sequence."""
        queue = EventQueue()
        queue.push(1.0, EventType.EPOCH_END, payload={'tag': 'a'})
        queue.push(0.5, EventType.TRANSMIT, payload={'tag': 'b'})
        queue.push(1.0, EventType.EPOCH_START, payload={'tag': 'c'})
        queue.push(1.0, EventType.TRANSMIT, payload={'tag': 'd'})

        order = [queue.pop().payload['tag'] for _ in range(len(queue))]

        assert order == ['b', 'a', 'c', 'd']


class TestSpawnGenerators:
    """Tests for spawn_generators."""

    def test_streams_are_independent_and_replayable(self):
        """Test that each named stream replays and differs from its siblings."""
        first, second = spawn_generators(9), spawn_generators(9)

        assert first['traffic'].random() == second['traffic'].random()
        assert first['topology'].random() != first['attack'].random()


class TestDispatchEvent:
    """Tests for SimulationService.dispatch_event and phase guards."""

    def test_event_older_than_clock(self, scenario):
        """Test that an event in the past is a simulation error."""
        service = SimulationService(scenario)
        service.state.clock = 5.0

        with pytest.raises(SimulationError) as exc_info:
            service.dispatch_event(SimEvent(time=1.0, seq=0, kind=EventType.EPOCH_END), service.state)

        assert "older than the clock" in str(exc_info.value)

    def test_data_before_activation(self, scenario):
        """Test that an epoch cannot start before the IDS is active."""
        service = SimulationService(scenario)
        service.initialize()
        service.form_hierarchy()

        with pytest.raises(PhaseError) as exc_info:
            service.dispatch_event(SimEvent(time=0.0, seq=0, kind=EventType.EPOCH_START, payload={'epoch': 0}),
                                   service.state)

        assert "data transfer requested during SectorFormation" in str(exc_info.value)

    def test_illegal_transition(self, scenario):
        """Test that skipping formation phases is refused."""
        service = SimulationService(scenario)

        with pytest.raises(PhaseError):
            service.state.phase.advance(Phase.DATA_TRANSFER)

    def test_dead_subject_is_dropped(self, scenario):
        """Test that events for a dead node schedule nothing."""
        service = SimulationService(scenario)
        service.initialize()
        service.state.nodes[5].ledger.residual_energy = 0.0
        event = SimEvent(time=0.1, seq=0, kind=EventType.TRANSMIT, subject=5,
                         payload={'slot': 0, 'kind': None, 'target': None})

        assert service.dispatch_event(event, service.state) == []
        assert service.state.generated == 0


class TestRun:
    """End-to-end runs."""

    def test_minimal_network_delivers_everything(self, minimal_scenario):
        """Test that an attack-free network delivers every generated packet and isolates nobody."""
        result = _run(minimal_scenario)
        summary = result.summary

        assert summary['generated_packets'] > 0
        assert summary['delivered_packets'] == summary['generated_packets']
        assert summary['quarantined'] == []
        assert summary['phantomdetect'] == 0
        assert summary['accuracy'] == 1.0
        assert len(result.metrics) == minimal_scenario.horizon + 1

    def test_phases_are_logged_in_order(self, minimal_scenario):
        """Test the setup phase sequence."""
        result = _run(minimal_scenario)
        phases = [e.subject for e in result.events if e.type is LogType.PHASE][:5]

        assert phases == [p.value for p in (Phase.INITIALIZATION, Phase.CLUSTER_FORMATION,
                                            Phase.SECTOR_FORMATION, Phase.IDS_ACTIVATION, Phase.DATA_TRANSFER)]

    def test_delivered_packets_follow_the_hierarchy(self, minimal_scenario):
        """Test that every delivered packet went leaf, coordinators, then sink."""
        result = _run(minimal_scenario)
        state = result.state
        coordinator = state.clusters[0].coordinator

        for packet in state.delivered:
            assert packet.hops[0] == packet.origin
            assert packet.hops[-1] == SINK_ID
            assert packet.hops[-2] == coordinator
            assert len(packet.hops) == len(set(packet.hops))

    def test_deterministic(self, scenario):
        """Test that equal seeds give identical logs and metrics."""
        first, second = _run(scenario), _run(small_scenario())

        assert first.events == second.events
        assert first.metrics == second.metrics

    def test_seed_changes_run(self):
        """Test that a different seed gives different traffic."""
        first, second = _run(small_scenario(seed=1)), _run(small_scenario(seed=2))

        assert [p.created_at for p in first.state.delivered] != [p.created_at for p in second.state.delivered]

    def test_energy_is_conserved(self, scenario):
        """Test that booked consumption equals the drop in residual energy."""
        result = _run(scenario)
        nodes = result.state.nodes.values()

        drop = sum(n.ledger.initial_power - n.ledger.residual_energy for n in nodes)

        assert result.metrics[-1].total_energy_consumed == pytest.approx(drop, rel=1e-9)

    def test_metrics_are_monotone(self, scenario):
        """Test that consumption and packet counters never decrease and nodes never revive."""
        frames = _run(scenario).metrics

        for before, after in zip(frames, frames[1:]):
            assert after.total_energy_consumed >= before.total_energy_consumed
            assert after.alive_count <= before.alive_count
            assert after.data_packets >= before.data_packets
            assert after.time > before.time

    def test_dying_network(self):
        """Test that starved followers die, are logged and trigger re-elections."""
        scenario = small_scenario(horizon=30, field={'follower_energy': 0.3})

        result = _run(scenario)

        deaths = [e for e in result.events if e.type is LogType.DEATH]
        assert deaths
        assert result.metrics[-1].alive_count < result.metrics[0].alive_count
        assert any(e.type is LogType.RECONFIGURE for e in result.events)


class TestAttackIsolation:
    """Each archetype is caught and cut off."""

    @pytest.mark.parametrize('attacker', ATTACKS)
    def test_attacker_is_quarantined(self, attacker):
        """Test that the attacker is isolated and nothing it sends afterwards reaches the sink."""
        scenario = small_scenario(horizon=8, attackers=[attacker])

        result = _run(scenario)
        state = result.state
        (node,) = state.attackers

        assert node in result.summary['quarantined']
        assert result.summary['truedetect'] >= 1
        cutoff = (state.quarantined_at[node] + 1) * scenario.duty.epoch_length
        assert all(p.created_at < cutoff for p in state.delivered if p.origin == node)
        assert state.nodes[node].quarantined
        assert not any(node in s.members for s in state.sectors.values())

    def test_wake_victims_are_cleared(self):
        """Test that leaves kept awake by an injector are cleared by the monitor's re-check."""
        scenario = small_scenario(horizon=8, attackers=[{'archetype': 'WakeInjector'}])

        result = _run(scenario)

        assert result.summary['quarantined'] == sorted(result.state.attackers)
        assert result.summary['phantomdetect'] == 0
        assert any(e.type is LogType.RULING and e.detail.startswith('Cleared') for e in result.events)

    def test_sector_only_mode_convicts_victims(self):
        """Test that without the monitor's re-check wake-up victims are convicted too."""
        scenario = small_scenario(horizon=8, ids_mode='sids_only', attackers=[{'archetype': 'WakeInjector'}])

        result = _run(scenario)

        assert result.summary['phantomdetect'] > 0
        assert result.summary['accuracy'] < 1.0

    def test_disabled_ids_never_quarantines(self):
        """Test that with detection off attackers stay in the network."""
        scenario = small_scenario(horizon=8, ids_mode='disabled', attackers=[{'archetype': 'WakeInjector'}])

        result = _run(scenario)

        assert result.summary['quarantined'] == []
        assert not any(e.type is LogType.VERDICT for e in result.events)

    def test_exhausted_cluster_coordinator_hands_over(self):
        """Test that a flat cluster re-elects its coordinator when it runs out of detection power."""
        scenario = small_scenario(
            horizon=12, mode='non-sectorized',
            budget={'initial_dp': 3.5, 'dp_min': 1.0},
            attackers=[
                {'archetype': 'Flooder', 'intensity': 8.0},
                {'archetype': 'Flooder', 'intensity': 8.0, 'start_epoch': 6},
            ],
        )

        result = _run(scenario)

        handovers = [
            e for e in result.events
            if e.type is LogType.RECONFIGURE and e.detail == ReconfigTrigger.DETECTION_POWER_EXHAUSTED.value
        ]
        assert handovers
        assert result.summary['quarantined'] == sorted(result.state.attackers)
        (cluster,) = result.state.clusters.values()
        assert result.state.nodes[cluster.coordinator].is_leader

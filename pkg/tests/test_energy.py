"""
Unit tests for common/services/energy.py
"""
import math

import pytest

from common.models import (
    DetectionBudget,
    EnergyLedger,
    EnergyMode,
    EnergyProfile,
    Node,
    NodeId,
    NodeKind,
    Position,
)
from common.services.energy import (
    EnergyService,
    accrue,
    calculated_remaining_lifetime,
    nominal_mode_durations,
    threshold_energy_consumption,
)


def _follower(uid=5, energy=25.0):
    return Node(node_id=NodeId(uid, Position(0.0, 0.0)), kind=NodeKind.FOLLOWER,
                ledger=EnergyLedger.full(energy), budget=DetectionBudget.none())


@pytest.fixture
def energy(scenario):
    return EnergyService(scenario)


class TestAccrue:
    """Tests for accrue."""

    def test_books_duration_and_cost(self):
        """Test that an affordable activity drains power times duration."""
        ledger = EnergyLedger.full(10.0)

        accrue(ledger, EnergyMode.TRANSMIT, 2.0, EnergyProfile())

        assert ledger.residual_energy == pytest.approx(10.0 - 0.12)
        assert ledger.consumed == pytest.approx(0.12)
        assert ledger.mode_durations[EnergyMode.TRANSMIT] == 2.0

    def test_partial_accrual_kills(self):
        """Test that only the affordable fraction is booked when energy runs out."""
        ledger = EnergyLedger.full(0.01)

        accrue(ledger, EnergyMode.TRANSMIT, 1.0, EnergyProfile())

        assert ledger.residual_energy == 0.0
        assert not ledger.alive
        assert ledger.consumed == pytest.approx(0.01)
        assert ledger.mode_durations[EnergyMode.TRANSMIT] == pytest.approx(0.01 / 0.06)

    def test_dead_ledger_is_untouched(self):
        """Test that accrual on a dead node books nothing."""
        ledger = EnergyLedger.full(1.0)
        ledger.residual_energy = 0.0

        accrue(ledger, EnergyMode.IDLE, 5.0, EnergyProfile())

        assert ledger.consumed == 0.0
        assert ledger.mode_durations[EnergyMode.IDLE] == 0.0

    def test_negative_duration(self):
        """Test that a negative duration raises ValueError."""
        with pytest.raises(ValueError) as exc_info:
            accrue(EnergyLedger.full(1.0), EnergyMode.IDLE, -1.0, EnergyProfile())

        assert "duration must be >= 0" in str(exc_info.value)


class TestNominalConsumption:
    """Tests for NEC and TNEC."""

    def test_nominal_durations_fill_the_epoch(self, scenario):
        """Test that the nominal mode split covers exactly one epoch."""
        durations = nominal_mode_durations(scenario.duty, 2, scenario.traffic)

        assert sum(durations.values()) == pytest.approx(scenario.duty.epoch_length)
        assert durations[EnergyMode.SLEEP] == pytest.approx(8.9)
        assert durations[EnergyMode.IDLE] == pytest.approx(0.05)

    def test_normal_profile(self, energy):
        """Test NEC and TNEC of a follower at the nominal rate."""
        profile = energy.normal_profile(5, NodeKind.FOLLOWER, 2)

        assert profile.nec == pytest.approx(0.02384)
        assert profile.tnec == pytest.approx(0.02384 * 1.2)
        assert profile.nominal_sleep == pytest.approx(8.9)
        assert profile.nominal_awake == pytest.approx(1.1)

    def test_threshold_is_scaled(self):
        """Test that TNEC is NEC grown by the tolerance."""
        assert threshold_energy_consumption(2.0, 0.25) == 2.5


class TestRemainingLifetime:
    """Tests for calculated_remaining_lifetime."""

    def test_zero_rate_is_infinite(self):
        """Test that a node consuming nothing never runs out."""
        assert calculated_remaining_lifetime(EnergyLedger.full(10.0), 0.0) == math.inf

    def test_finite_rate(self):
        """Test residual energy over the observed rate."""
        assert calculated_remaining_lifetime(EnergyLedger.full(10.0), 2.0) == 5.0


class TestEnergyService:
    """Tests for EnergyService."""

    def test_spend_tracks_activity(self, energy):
        """Test that non-sleep activity is collected for settlement."""
        node = _follower()

        energy.spend(node, EnergyMode.TRANSMIT, 0.01)
        energy.spend(node, EnergyMode.SLEEP, 1.0)

        assert node.ledger.activity == pytest.approx(0.01)

    def test_spend_reports_death(self, energy):
        """Test that spend returns True only for the accrual that killed the node."""
        node = _follower(energy=0.001)

        assert energy.spend(node, EnergyMode.TRANSMIT, 1.0)
        assert not energy.spend(node, EnergyMode.TRANSMIT, 1.0)

    def test_settle_quiet_epoch(self, energy):
        """Test that an idle leaf wakes, sleeps the full window and idles the rest."""
        node = _follower()

        usage = energy.settle(node)

        assert usage.sleep == pytest.approx(8.9)
        assert usage.awake == pytest.approx(1.1)
        assert usage.induced == 0.0
        assert node.ledger.consumed == pytest.approx(0.02 + 8.9 * 0.0001 + 0.1 * 0.02)
        assert node.ledger.last_usage is usage

    def test_settle_forced_awake(self, energy):
        """Test that a node held awake loses its sleep and books it as induced time."""
        node = _follower()
        node.ledger.forced_awake = True

        usage = energy.settle(node)

        assert usage.sleep == 0.0
        assert usage.induced == pytest.approx(8.9)
        assert usage.awake == pytest.approx(10.0)
        assert node.ledger.consumed == pytest.approx(0.2)
        assert not node.ledger.forced_awake
        assert node.ledger.activity == 0.0

    def test_induced_energy(self, energy):
        """Test the cost of sleep lost to forced wake-ups."""
        assert energy.induced_energy(_follower(), 8.9) == pytest.approx(8.9 * (0.02 - 0.0001))

    def test_record_epoch_keeps_window(self, energy):
        """Test that LRE is snapshotted and consumption history is trimmed to the window."""
        node = _follower(energy=100.0)
        energy.record_epoch(node)
        assert node.ledger.consumption_history == []

        for _ in range(7):
            node.ledger.residual_energy -= 1.0
            energy.record_epoch(node)

        assert node.ledger.last_recorded_energy == pytest.approx(93.0)
        assert node.ledger.consumption_history == pytest.approx([1.0] * 5)

    def test_observed_rate_includes_current(self, energy):
        """Test that the rate averages the trailing window and the current epoch."""
        ledger = EnergyLedger.full(10.0)
        ledger.consumption_history = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]

        assert energy.observed_rate(ledger, 7.0) == pytest.approx(5.0)

"""
Unit tests for common/services/report.py
"""
import csv

import pytest

from common.models import LogEntry, LogType, MetricsFrame
from common.services.report import METRICS_HEADER, ReportService, event_line, metrics_row, write_series
from common.services.simulation import SimulationService
from tests.conftest import small_scenario


def _frame(**overrides):
    values = dict(time=10.0, alive_count=12, total_energy_consumed=0.25, truedetect=1, phantomdetect=0,
                  accuracy=1.0, data_packets=40, control_packets=10, overhead_ratio=0.2, quarantined_count=1)
    values.update(overrides)
    return MetricsFrame(**values)


class TestFormatting:
    """Tests for metrics_row and event_line."""

    def test_metrics_row(self):
        """Test the fixed precision of every metrics column."""
        assert metrics_row(_frame()) == [
            '10.000', '12', '0.250000000', '1', '0', '1.000000', '40', '10', '0.200000', '1']
        assert len(METRICS_HEADER) == 10

    def test_event_line_is_tab_separated(self):
        """Test that events are one tab-separated line, with stray tabs flattened."""
        entry = LogEntry(time=1.5, type=LogType.REJECT, subject='7', detail='reason=Duplicate\tpacket=3')

        assert event_line(entry) == "1.500000\tREJECT\t7\treason=Duplicate packet=3"

    def test_write_series(self, tmp_path):
        """Test that preset series keep strings and render numbers at the requested precision."""
        path = tmp_path / 'series.csv'

        write_series(str(path), ['time_s', 'value'], [['0.000', 0.5], ['10.000', 2]], places=3)

        assert path.read_text() == "time_s,value\n0.000,0.500\n10.000,2\n"


class TestReportService:
    """Tests for ReportService."""

    @pytest.fixture
    def finished(self):
        scenario = small_scenario(horizon=5, attackers=[{'archetype': 'EnergySpoofer', 'intensity': 3.0}])
        return scenario, SimulationService(scenario).run()

    def test_write_all(self, tmp_path, finished):
        """Test that every run file is written and the metrics parse back."""
        scenario, result = finished

        written = ReportService(str(tmp_path)).write_all(scenario, result)

        assert len(written) == 5
        with open(tmp_path / 'metrics.csv', newline='') as f:
            rows = list(csv.reader(f))
        assert tuple(rows[0]) == METRICS_HEADER
        assert len(rows) == scenario.horizon + 2
        assert len((tmp_path / 'events.log').read_text().splitlines()) == len(result.events)

    def test_quarantine_report(self, tmp_path, finished):
        """Test that the report lists the isolated attacker and the detection totals."""
        _, result = finished
        (attacker,) = result.state.attackers

        path = ReportService(str(tmp_path)).write_quarantine_report(result.state, result.summary)

        text = open(path).read()
        assert f"node {attacker} (attacker)" in text
        assert "  malicious: True" in text
        assert f"truedetect: {result.summary['truedetect']}" in text
        assert f"latency node {attacker}: 1 epochs" in text

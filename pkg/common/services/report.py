import csv
import json
import os

from common.app_config import config
from common.app_logger import get_logger
from common.helpers.number_utils import format_fixed, force_number_str
from common.repositories.factory import RepoType
from common.services.scenario import dump_config

logger = get_logger(__name__)

METRICS_FILE = 'metrics.csv'
EVENTS_FILE = 'events.log'
QUARANTINE_FILE = 'quarantine_report.txt'
CONFIG_FILE = 'config_resolved.json'
SUMMARY_FILE = 'summary.json'
MANIFEST_FILE = 'manifest.json'

RUN_FILES = (METRICS_FILE, EVENTS_FILE, QUARANTINE_FILE, CONFIG_FILE, SUMMARY_FILE)

METRICS_HEADER = (
    'time_s', 'alive_count', 'energy_consumed_j', 'truedetect', 'phantomdetect', 'accuracy',
    'data_packets', 'control_packets', 'overhead_ratio', 'quarantined_count',
)


def metrics_row(frame) -> list:
    return [
        format_fixed(frame.time, 3),
        format_fixed(frame.alive_count, 0),
        format_fixed(frame.total_energy_consumed, 9),
        format_fixed(frame.truedetect, 0),
        format_fixed(frame.phantomdetect, 0),
        format_fixed(frame.accuracy, 6),
        format_fixed(frame.data_packets, 0),
        format_fixed(frame.control_packets, 0),
        format_fixed(frame.overhead_ratio, 6),
        format_fixed(frame.quarantined_count, 0),
    ]


def event_line(entry) -> str:
    detail = entry.detail.replace('\t', ' ').replace('\n', ' ')
    return f"{format_fixed(entry.time, 6)}\t{entry.type.value}\t{entry.subject}\t{detail}"


def _open(path: str):
    return open(path, 'w', encoding=config.OUTPUT_ENCODING, newline='')


class ReportService:
    """Serializes one finished run into its output directory."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def write_all(self, scenario, result) -> list:
        written = [
            self.write_metrics(result.metrics),
            self.write_events(result.events),
            self.write_quarantine_report(result.state, result.summary),
            self.write_config(scenario),
            self.write_summary(result.summary),
        ]
        logger.info(f"Wrote {len(written)} run files to {self.out_dir}")
        return written

    def write_metrics(self, frames) -> str:
        path = self.path(METRICS_FILE)
        with _open(path) as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(METRICS_HEADER)
            writer.writerows(metrics_row(frame) for frame in frames)
        return path

    def write_events(self, entries) -> str:
        path = self.path(EVENTS_FILE)
        with _open(path) as f:
            for entry in entries:
                f.write(event_line(entry) + '\n')
        return path

    def write_quarantine_report(self, state, summary: dict) -> str:
        path = self.path(QUARANTINE_FILE)
        entries = state.repo(RepoType.QUARANTINE).get_many()
        with _open(path) as f:
            f.write(f"quarantined nodes: {len(entries)}\n\n")
            for entry in entries:
                role = 'attacker' if entry.node_id in state.attackers else 'benign'
                f.write(f"node {entry.node_id} ({role})\n")
                f.write(f"  member_id: {entry.member_id}\n")
                f.write(f"  na: {entry.na}\n")
                f.write(f"  monitor: {entry.monitor}\n")
                f.write(f"  compromised: {entry.compromised}\n")
                f.write(f"  trust: {format_fixed(entry.trust, 6)}\n")
                f.write(f"  scout: {entry.scout}\n")
                f.write(f"  malicious: {entry.malicious}\n")
                f.write(f"  since_epoch: {entry.since}\n\n")
            f.write(f"truedetect: {summary['truedetect']}\n")
            f.write(f"phantomdetect: {summary['phantomdetect']}\n")
            f.write(f"accuracy: {format_fixed(summary['accuracy'], 6)}\n")
            f.write(f"recall: {format_fixed(summary['recall'], 6)}\n")
            for node, latency in sorted(summary['detection_latency_epochs'].items(), key=lambda kv: int(kv[0])):
                f.write(f"latency node {node}: {latency} epochs\n")
        return path

    def write_config(self, scenario) -> str:
        path = self.path(CONFIG_FILE)
        with _open(path) as f:
            f.write(dump_config(scenario) + '\n')
        return path

    def write_summary(self, summary: dict) -> str:
        path = self.path(SUMMARY_FILE)
        write_json(path, summary)
        return path


def write_json(path: str, data: dict):
    with _open(path) as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write('\n')


def write_series(path: str, columns, rows, places: int = 6) -> str:
    """Preset series: first column is written as-is, numbers at fixed precision."""
    with _open(path) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([force_number_str(cell, places) for cell in row])
    return path

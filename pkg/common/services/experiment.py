import os
from dataclasses import dataclass
from typing import Optional

from common.app_logger import get_logger, set_run_context
from common.helpers.number_utils import format_fixed
from common.models import Archetype, IdsMode, RunResult, ScenarioConfig, SimulationMode
from common.services.report import MANIFEST_FILE, RUN_FILES, ReportService, write_json, write_series
from common.services.scenario import build_config
from common.services.simulation import SimulationService
from common.tasks.sweep import SweepRunner
from common.utils.version import get_build_info

logger = get_logger(__name__)

DEFAULT_PRESET_SEED = 7
SHAPE_NOTE = "Series reproduce qualitative shapes only; absolute values are not comparable to any published figure."


@dataclass(frozen=True)
class Arm:
    name: str
    scenario: ScenarioConfig

    def out_dir(self, root: str) -> str:
        return os.path.join(root, self.name)


def _discard_outputs(out_dir: str, created: bool):
    for name in RUN_FILES:
        path = os.path.join(out_dir, name)
        if os.path.isfile(path):
            os.remove(path)
    if created and os.path.isdir(out_dir) and not os.listdir(out_dir):
        os.rmdir(out_dir)


def run_scenario(scenario: ScenarioConfig, out_dir: str) -> RunResult:
    """Simulate and write every run file. On an I/O failure no partial file is left behind."""
    set_run_context(seed=scenario.seed, mode=scenario.mode.value, out_dir=out_dir)
    result = SimulationService(scenario).run()

    created = not os.path.isdir(out_dir)
    try:
        os.makedirs(out_dir, exist_ok=True)
        ReportService(out_dir).write_all(scenario, result)
    except OSError:
        logger.error(f"Could not write run outputs to {out_dir}; removing partial files")
        _discard_outputs(out_dir, created)
        raise
    return result


def execute_arm(scenario: ScenarioConfig, out_dir: str) -> tuple:
    """Sweep job: runs in a worker process, so only plain values travel back."""
    result = run_scenario(scenario, out_dir)
    return result.metrics, result.summary


def _scenario(seed: int, horizon: int, **sections) -> ScenarioConfig:
    return build_config({'seed': seed, 'horizon': horizon, **sections})


def _time(frame) -> str:
    return format_fixed(frame.time, 3)


class ExperimentService:
    """Reproducible presets. Each one builds its arms, fans them out and writes a series plus a manifest."""

    PRESETS = {
        'fig4_alive': 'alive_preset',
        'fig5_accuracy': 'accuracy_preset',
        'fig6_sectorization': 'sectorization_preset',
        'fig7_overhead': 'overhead_preset',
    }

    def __init__(self, sweep_runner: Optional[SweepRunner] = None):
        self.sweep_runner = sweep_runner or SweepRunner()

    @classmethod
    def preset_names(cls) -> list:
        return sorted(cls.PRESETS)

    def run_preset(self, name: str, out_dir: str, seed: Optional[int] = None,
                   horizon: Optional[int] = None) -> dict:
        method = self.PRESETS.get(name)
        if method is None:
            raise ValueError(f"No preset found with the name '{name}'. Valid presets: {', '.join(self.preset_names())}")
        seed = DEFAULT_PRESET_SEED if seed is None else seed
        os.makedirs(out_dir, exist_ok=True)
        logger.info(f"Running preset {name} (seed={seed}) into {out_dir}")
        manifest = getattr(self, method)(out_dir, seed, horizon)
        manifest.update({'preset': name, 'seed': seed, 'note': SHAPE_NOTE, 'build': get_build_info()})
        write_json(os.path.join(out_dir, MANIFEST_FILE), manifest)
        return manifest

    def _run_arms(self, arms: list, out_dir: str) -> list:
        return self.sweep_runner.run(execute_arm, [(arm.scenario, arm.out_dir(out_dir)) for arm in arms])

    def alive_preset(self, out_dir: str, seed: int, horizon: Optional[int]) -> dict:
        horizon = horizon or 200
        field = {'width': 80.0, 'height': 80.0, 'sink_position': (40.0, 40.0),
                 'leader_count': 6, 'follower_count': 60}
        injectors = [{'archetype': Archetype.WAKE_INJECTOR.value, 'intensity': 1.0}] * 2
        arms = [
            Arm('attack_free', _scenario(seed, horizon, field=field)),
            Arm('undefended', _scenario(seed, horizon, field=field, attackers=injectors,
                                        ids_mode=IdsMode.DISABLED.value)),
            Arm('defended', _scenario(seed, horizon, field=field, attackers=injectors)),
        ]
        results = self._run_arms(arms, out_dir)
        columns = ['time_s'] + [arm.name for arm in arms]
        series = [arm_metrics for arm_metrics, _ in results]
        rows = [
            [_time(frames[0])] + [frame.alive_count for frame in frames]
            for frames in zip(*series)
        ]
        write_series(os.path.join(out_dir, 'alive_series.csv'), columns, rows)
        return {'series': {'alive_series.csv': columns}, 'arms': [arm.name for arm in arms], 'horizon': horizon}

    def accuracy_preset(self, out_dir: str, seed: int, horizon: Optional[int]) -> dict:
        horizon = horizon or 100
        modes = (IdsMode.FULL, IdsMode.SIDS_ONLY)
        arms = []
        for count in range(1, 6):
            attackers = [{'archetype': Archetype.WAKE_INJECTOR.value}] * count
            for mode in modes:
                arms.append(Arm(f"attackers_{count}_{mode.value}",
                                _scenario(seed, horizon, attackers=attackers, ids_mode=mode.value)))
        results = self._run_arms(arms, out_dir)

        columns = ['attackers']
        for mode in modes:
            columns += [f"{mode.value}_accuracy", f"{mode.value}_truedetect", f"{mode.value}_phantomdetect"]
        rows = []
        for count in range(1, 6):
            row = [count]
            for offset in range(len(modes)):
                _, summary = results[(count - 1) * len(modes) + offset]
                row += [summary['accuracy'], summary['truedetect'], summary['phantomdetect']]
            rows.append(row)
        write_series(os.path.join(out_dir, 'accuracy_series.csv'), columns, rows)
        return {'series': {'accuracy_series.csv': columns}, 'arms': [arm.name for arm in arms], 'horizon': horizon}

    def sectorization_preset(self, out_dir: str, seed: int, horizon: Optional[int]) -> dict:
        horizon = horizon or 100
        densities = (50, 100, 150, 200)
        modes = (SimulationMode.SECTORIZED, SimulationMode.NON_SECTORIZED)
        arms = []
        for total in densities:
            leaders = max(2, total // 10)
            field = {'leader_count': leaders, 'follower_count': total - leaders - 1}
            for mode in modes:
                arms.append(Arm(f"nodes_{total}_{mode.value}",
                                _scenario(seed, horizon, field=field, mode=mode.value,
                                          slots={'frame_length': 256})))
        results = self._run_arms(arms, out_dir)

        columns = ['nodes', 'sectorized_energy_j', 'non_sectorized_energy_j']
        rows = []
        for index, total in enumerate(densities):
            sectorized, flat = results[2 * index][1], results[2 * index + 1][1]
            rows.append([total, sectorized['energy_consumed_j'], flat['energy_consumed_j']])
        write_series(os.path.join(out_dir, 'energy_series.csv'), columns, rows, places=9)
        return {'series': {'energy_series.csv': columns}, 'arms': [arm.name for arm in arms], 'horizon': horizon}

    def overhead_preset(self, out_dir: str, seed: int, horizon: Optional[int]) -> dict:
        horizon = horizon or 100
        attackers = [
            {'archetype': Archetype.FLOODER.value, 'intensity': 8.0},
            {'archetype': Archetype.UNSLOTTED_SENDER.value, 'intensity': 2.0},
        ]
        arm = Arm('attacked', _scenario(seed, horizon, attackers=attackers))
        (frames, _), = self._run_arms([arm], out_dir)

        columns = ['time_s', 'data_packets', 'control_packets', 'total_packets', 'overhead_ratio']
        rows = [
            [_time(frame), frame.data_packets, frame.control_packets,
             frame.data_packets + frame.control_packets, frame.overhead_ratio]
            for frame in frames
        ]
        write_series(os.path.join(out_dir, 'overhead_series.csv'), columns, rows)
        return {'series': {'overhead_series.csv': columns}, 'arms': [arm.name], 'horizon': horizon}

"""Multi-run executions: the same scenario under consecutive seeds."""

import concurrent.futures
import copy
import logging
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from ..config.settings import SimConfig
from ..core.simulation import SimulationResult, run_simulation
from ..llm.base import LLMBackend


@dataclass
class BatchProgress:
    """Progress tracking for a batch of runs."""
    total_runs: int
    completed_runs: int = 0
    failed_runs: int = 0
    start_time: datetime = field(default_factory=datetime.now)
    current_seed: Optional[int] = None
    estimated_completion: Optional[datetime] = None

    @property
    def completion_percentage(self) -> float:
        if self.total_runs == 0:
            return 100.0
        return ((self.completed_runs + self.failed_runs) / self.total_runs) * 100

    @property
    def elapsed_time(self) -> float:
        return (datetime.now() - self.start_time).total_seconds()

    def estimate_completion_time(self) -> None:
        """Estimate completion time based on current progress."""
        done = self.completed_runs + self.failed_runs
        if done > 0:
            remaining_seconds = self.elapsed_time / done * (self.total_runs - done)
            self.estimated_completion = datetime.now() + timedelta(seconds=remaining_seconds)


@dataclass
class BatchResults:
    """Results of a batch, successful runs sorted by seed."""
    batch_id: str
    total_runs: int
    successful_results: List[SimulationResult] = field(default_factory=list)
    failed_runs: List[Dict[str, Any]] = field(default_factory=list)
    processing_time: float = 0.0

    @property
    def success_rate(self) -> float:
        if self.total_runs == 0:
            return 100.0
        return (len(self.successful_results) / self.total_runs) * 100


class BatchRunner:
    """Runs one configuration under seeds ``seed .. seed + runs - 1``.

    Each run writes into ``<output_dir>/run_<seed>``. The seed selects the script variant
    of a scripted backend; with a live backend repeated runs differ on their own.
    """

    def __init__(
        self,
        max_workers: int = 1,
        backend_factory: Optional[Callable[[SimConfig], Optional[LLMBackend]]] = None,
    ):
        """Initialize the runner.

        Args:
            max_workers: Runs executed concurrently
            backend_factory: Optional callable building a backend per run (tests)
        """
        self.max_workers = max_workers
        self.backend_factory = backend_factory
        self.logger = logging.getLogger(__name__)
        self.progress_callback: Optional[Callable[[BatchProgress], None]] = None

    def set_progress_callback(self, callback: Callable[[BatchProgress], None]) -> None:
        self.progress_callback = callback

    def plan(self, config: SimConfig, runs: int) -> List[SimConfig]:
        """Per-run configurations with their own seed and output directory."""
        if runs < 1:
            raise ValueError("runs must be at least 1")
        base_dir = Path(config.output_dir)
        planned = []
        for seed in range(config.seed, config.seed + runs):
            run_config = copy.deepcopy(config)
            run_config.seed = seed
            run_config.output_dir = str(base_dir / f"run_{seed}")
            planned.append(run_config)
        return planned

    def run_many(self, config: SimConfig, runs: int) -> BatchResults:
        """Execute ``runs`` simulations of ``config``.

        Args:
            config: Validated base configuration
            runs: Number of runs

        Returns:
            BatchResults; failed runs are recorded, not raised
        """
        planned = self.plan(config, runs)
        batch_id = f"batch_{config.run_id()}_{config.seed}x{runs}"
        progress = BatchProgress(total_runs=len(planned))
        results = BatchResults(batch_id=batch_id, total_runs=len(planned))
        start = time.time()
        completed: Dict[int, SimulationResult] = {}

        self.logger.info(f"Starting batch {batch_id} with {len(planned)} runs")

        with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_config = {
                executor.submit(self._run_single, run_config): run_config
                for run_config in planned
            }
            for future in concurrent.futures.as_completed(future_to_config):
                run_config = future_to_config[future]
                progress.current_seed = run_config.seed
                try:
                    completed[run_config.seed] = future.result()
                    progress.completed_runs += 1
                except Exception as e:
                    results.failed_runs.append({
                        "seed": run_config.seed,
                        "error": str(e),
                        "error_type": type(e).__name__,
                    })
                    progress.failed_runs += 1
                    self.logger.error(f"Run with seed {run_config.seed} failed: {e}")

                progress.estimate_completion_time()
                if self.progress_callback:
                    self.progress_callback(progress)

        results.successful_results = [completed[seed] for seed in sorted(completed)]
        results.failed_runs.sort(key=lambda f: f["seed"])
        results.processing_time = time.time() - start

        self.logger.info(
            f"Batch {batch_id} completed. Success: {len(results.successful_results)}, "
            f"Failed: {len(results.failed_runs)}, Time: {results.processing_time:.2f}s"
        )
        return results

    def _run_single(self, run_config: SimConfig) -> SimulationResult:
        backend = self.backend_factory(run_config) if self.backend_factory else None
        return run_simulation(run_config, backend=backend)

    def create_progress_monitor(self) -> Callable[[BatchProgress], None]:
        """Progress callback printing a one-line status to stderr."""

        def monitor(progress: BatchProgress) -> None:
            print(
                f"\rRuns: {progress.completed_runs + progress.failed_runs}/{progress.total_runs} "
                f"({progress.completion_percentage:.0f}%), failed: {progress.failed_runs}",
                end="",
                file=sys.stderr,
            )
            if progress.completed_runs + progress.failed_runs == progress.total_runs:
                print(file=sys.stderr)

        return monitor

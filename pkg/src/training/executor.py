"""Runs independent training seeds, optionally on a thread pool."""

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, Generic, List, Optional, Sequence, TypeVar

from src.config.settings import settings
from src.utils.logger import LoggerMixin

ResultT = TypeVar("ResultT")


class SeedExecutor(LoggerMixin, Generic[ResultT]):
    """Executor for per-seed jobs; results come back in seed order."""

    def __init__(self, max_workers: Optional[int] = None):
        """
        Initialize seed executor.

        Args:
            max_workers: Concurrent seeds (defaults to ``settings.seed_workers``)
        """
        self.max_workers = max_workers or settings.seed_workers
        self.completed: Dict[int, ResultT] = {}

    def run(self, seeds: Sequence[int], job: Callable[[int], ResultT]) -> List[ResultT]:
        """
        Run ``job`` for every seed.

        Args:
            seeds: Seeds to run
            job: Callable producing the result of one seed

        Returns:
            Results ordered like ``seeds``
        """
        self.completed = {}
        if self.max_workers == 1 or len(seeds) <= 1:
            for seed in seeds:
                self.completed[seed] = job(seed)
            return [self.completed[s] for s in seeds]

        self.logger.info(f"Running {len(seeds)} seeds on {self.max_workers} workers")
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            futures = {pool.submit(job, seed): seed for seed in seeds}
            for future in as_completed(futures):
                seed = futures[future]
                try:
                    self.completed[seed] = future.result()
                except Exception as e:
                    self.logger.error(f"Seed {seed} failed: {e}")
                    raise
        return [self.completed[s] for s in seeds]

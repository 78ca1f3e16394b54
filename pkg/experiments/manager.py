import time
import asyncio
import numpy as np
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Hashable
from config.settings import EXPERIMENT_WORKERS
from utils.logger import Logger

logger = Logger.get_logger()


def summarize(values: list[float]) -> tuple[float | None, float | None]:
    """
    Mean and sample standard deviation; SD is 0 for a single value and both are
    None when nothing was solved.
    """
    if not values:
        return None, None
    data = np.asarray(values, dtype=np.float64)
    sd = float(data.std(ddof=1)) if len(data) > 1 else 0.0
    return float(data.mean()), sd


class ExperimentManager:
    """
    Runs keyed experiment tasks from a queue, inline or on a process pool, and
    hands results back ordered by key so reports do not depend on scheduling.
    """

    def __init__(self, workers: int = EXPERIMENT_WORKERS):
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}")
        self.workers = workers
        self.executor: ProcessPoolExecutor | None = None
        self.task_queue: asyncio.Queue = asyncio.Queue()
        self.results: dict[Hashable, Any] = {}
        self.errors: dict[Hashable, BaseException] = {}

    async def __aenter__(self) -> "ExperimentManager":
        if self.workers > 1:
            self.executor = ProcessPoolExecutor(max_workers=self.workers)
            logger.info(f"Process pool started with {self.workers} workers")
        return self

    async def __aexit__(self, *exc_info) -> None:
        await self.stop()

    async def stop(self) -> None:
        if self.executor is not None:
            self.executor.shutdown(wait=True, cancel_futures=True)
            self.executor = None
            logger.info("Process pool is terminated")

    async def deploy_task(
        self, key: Hashable, func: Callable[..., Any], *args: Any
    ) -> None:
        """
        Enqueues a module-level function; it must be picklable for the pool.
        """
        if asyncio.iscoroutinefunction(func):
            raise TypeError(f"Expected a plain function, got coroutine {func.__name__}")
        await self.task_queue.put((key, func, args))

    async def task_worker(self, worker_id: int) -> None:
        loop = asyncio.get_running_loop()
        while not self.task_queue.empty():
            key, func, args = self.task_queue.get_nowait()
            start_time = time.time()
            try:
                if self.executor is None:
                    result = func(*args)
                    # Let the other workers and the event loop breathe
                    await asyncio.sleep(0)
                else:
                    result = await loop.run_in_executor(self.executor, func, *args)
                self.results[key] = result
            except Exception as e:
                logger.error(f"Task {key} failed: {e}")
                self.errors[key] = e
            finally:
                self.task_queue.task_done()

            logger.debug(
                "Worker %d finished %s in %.2f seconds, %d task(s) left",
                worker_id,
                key,
                time.time() - start_time,
                self.task_queue.qsize(),
            )

    async def run(self) -> dict[Hashable, Any]:
        """
        Drains the queue and returns results sorted by key. Any failed task
        raises after the remaining tasks have finished.
        """
        total = self.task_queue.qsize()
        logger.info(f"Running {total} task(s) on {self.workers} worker(s)")
        await asyncio.gather(
            *(self.task_worker(i) for i in range(min(self.workers, max(total, 1))))
        )

        if self.errors:
            key = sorted(self.errors, key=repr)[0]
            raise RuntimeError(
                f"{len(self.errors)} experiment task(s) failed, first {key}: {self.errors[key]}"
            ) from self.errors[key]

        results = {key: self.results[key] for key in sorted(self.results)}
        self.results = {}
        return results

"""Work-stealing queue over independent sweep grid points"""
import asyncio
import logging
import threading
from collections import defaultdict
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

logger = logging.getLogger(__name__)


@dataclass
class GridPoint:
    key: Tuple
    args: Tuple = ()
    result: Any = None
    error: Optional[str] = None
    worker_id: Optional[str] = None
    done: bool = False


@dataclass
class QueueStats:
    submitted: int = 0
    completed: int = 0
    failed: int = 0
    by_worker: Dict[str, int] = field(default_factory=lambda: defaultdict(int))


class SweepQueue:
    """Runs `task(*point.args)` for every submitted point

    With one worker the task runs inline; otherwise each worker hands its
    point to a shared process pool. Results come back sorted by key, so the
    output never depends on scheduling.
    """

    def __init__(self, task: Callable[..., Any], num_workers: int = 1):
        self.task = task
        self.num_workers = num_workers
        self.points: Dict[Tuple, GridPoint] = {}
        self.pending: List[Tuple] = []
        self.queue_lock = threading.Lock()
        self.workers: List["QueueWorker"] = []
        self.executor: Optional[Executor] = None
        self.running = False
        self.stats = QueueStats()

    def submit(self, key: Tuple, *args) -> Tuple:
        with self.queue_lock:
            if key in self.points:
                raise ValueError(f"Grid point {key} submitted twice")
            self.points[key] = GridPoint(key=key, args=args)
            self.pending.append(key)
            self.stats.submitted += 1
        return key

    def get_next_point(self) -> Optional[GridPoint]:
        with self.queue_lock:
            if not self.pending:
                return None
            return self.points[self.pending.pop(0)]

    async def execute_point(self, point: GridPoint, worker_id: str) -> None:
        point.worker_id = worker_id
        try:
            if self.executor is None:
                point.result = self.task(*point.args)
            else:
                loop = asyncio.get_running_loop()
                point.result = await loop.run_in_executor(
                    self.executor, self.task, *point.args
                )
            self.stats.completed += 1
            self.stats.by_worker[worker_id] += 1
        except Exception as e:
            logger.error(f"Grid point {point.key} failed on {worker_id}: {e}")
            point.error = f"{type(e).__name__}: {e}"
            self.stats.failed += 1
        point.done = True

    async def run(self) -> List[GridPoint]:
        """Drain the queue and return every point sorted by key"""
        if self.running:
            raise RuntimeError("Sweep queue already running")
        self.running = True
        if self.num_workers > 1:
            self.executor = ProcessPoolExecutor(max_workers=self.num_workers)
        logger.info(
            f"Running {len(self.pending)} grid points on {self.num_workers} worker(s)"
        )
        try:
            self.workers = [
                QueueWorker(f"worker-{i}", self) for i in range(self.num_workers)
            ]
            await asyncio.gather(*(worker.run() for worker in self.workers))
        finally:
            self.running = False
            if self.executor is not None:
                self.executor.shutdown(wait=True)
                self.executor = None
        return [self.points[key] for key in sorted(self.points)]

    def get_statistics(self) -> Dict[str, Any]:
        with self.queue_lock:
            pending = len(self.pending)
        return {
            "pending": pending,
            "workers": {
                "total": len(self.workers),
                "active": len([w for w in self.workers if w.current_point]),
            },
            "totals": {
                "submitted": self.stats.submitted,
                "completed": self.stats.completed,
                "failed": self.stats.failed,
            },
            "by_worker": dict(self.stats.by_worker),
        }


class QueueWorker:
    """Pulls grid points until the queue is empty"""

    def __init__(self, worker_id: str, queue: SweepQueue):
        self.worker_id = worker_id
        self.queue = queue
        self.current_point: Optional[Tuple] = None

    async def run(self):
        logger.debug(f"Worker {self.worker_id} started")
        while self.queue.running:
            point = self.queue.get_next_point()
            if point is None:
                break
            self.current_point = point.key
            await self.queue.execute_point(point, self.worker_id)
            self.current_point = None
            # let sibling workers pick up work when the task ran inline
            await asyncio.sleep(0)
        logger.debug(f"Worker {self.worker_id} stopped")


def run_sweep(task: Callable[..., Any], jobs: List[Tuple[Tuple, Tuple]], workers: int = 1):
    """Blocking helper: evaluate every (key, args) job, sorted by key"""
    queue = SweepQueue(task, num_workers=workers)
    for key, args in jobs:
        queue.submit(key, *args)
    return asyncio.run(queue.run())

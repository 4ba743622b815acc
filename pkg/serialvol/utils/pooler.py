from concurrent import futures
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar('T')
R = TypeVar('R')


class ThreadPooler:
    pool: futures.ThreadPoolExecutor = None
    pool_size: int = None

    @classmethod
    def get_pool(cls, workers: Optional[int] = None) -> futures.ThreadPoolExecutor:
        if workers is None:
            from serialvol.utils.configs import get_serialvol_settings
            workers = get_serialvol_settings().num_workers
        if cls.pool is None or cls.pool_size != workers:
            if cls.pool is not None: cls.pool.shutdown(wait = True)
            cls.pool = futures.ThreadPoolExecutor(max_workers = workers, thread_name_prefix = 'serialvol')
            cls.pool_size = workers
        return cls.pool

    @classmethod
    def map(
        cls,
        func: Callable[..., R],
        items: Iterable[T],
        *args,
        workers: Optional[int] = None,
        **kwargs,
    ) -> List[R]:
        """
        Applies `func` to every item and returns results in input order.

        Runs serially when `workers` is 1 (or the input is tiny); otherwise fans out
        over the shared thread pool. numpy/LAPACK release the GIL, so windows and
        days overlap in practice. The first exception raised by any item propagates.
        """
        items = list(items)
        partial_f = (lambda item: func(item, *args, **kwargs)) if (args or kwargs) else func
        if workers is None:
            from serialvol.utils.configs import get_serialvol_settings
            workers = get_serialvol_settings().num_workers
        if workers <= 1 or len(items) < 2:
            return [partial_f(item) for item in items]
        pool = cls.get_pool(workers)
        return list(pool.map(partial_f, items))

    @classmethod
    def shutdown(cls):
        if cls.pool is not None:
            cls.pool.shutdown(wait = True)
            cls.pool = None
            cls.pool_size = None

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count():
    """Worker cap from ``EBERLEIN_THREADS``; 0 or unset means one per CPU."""
    try:
        n = int(os.environ.get("EBERLEIN_THREADS", "0"))
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def pmap(fn, items):
    """Ordered map; results come back in input order regardless of scheduling."""
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))

"""Wall-time benchmark for the three correlation samplers.

Timing covers sampler work only: no validation, no I/O, no report
assembly inside the timed region.  Each (dimension, method) cell is
warmed up, then timed ``repetitions`` times, and the median wall time
is reported.  BLAS pools are pinned to one thread for the duration so
the numbers reflect single-threaded cost.

Absolute seconds are hardware- and runtime-bound and are NOT comparable
across machines.  The report therefore carries, next to each measured
row, the ratio of its wall time to the onion method's wall time at the
same dimension, plus the corresponding ratio computed from a fixed
baseline (an R implementation timed on a Haswell E5-2680v3 server);
only those ratios are meaningful across environments.
"""

import platform
import time
from dataclasses import asdict, dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import DomainError
from .samplers import sample_correlation
from .specfun import eta_to_dof
from .streams import DEFAULT_SEED, RandomStream

METHOD_ORDER = ("onion", "rw", "riw")

# Baseline wall seconds for 5000 draws per dimension (R implementation,
# Haswell E5-2680v3).  Used only to derive reference ratios.
BASELINE_SECONDS = {
    20: {"onion": 1.53, "rw": 0.70, "riw": 0.80},
    40: {"onion": 3.37, "rw": 1.46, "riw": 1.44},
    80: {"onion": 8.44, "rw": 5.03, "riw": 5.06},
    120: {"onion": 16.90, "rw": 12.26, "riw": 9.85},
    200: {"onion": 34.40, "rw": 28.78, "riw": 29.08},
    240: {"onion": 47.39, "rw": 44.12, "riw": 42.90},
    280: {"onion": 66.37, "rw": 62.59, "riw": 58.85},
}


def reference_ratio(dim, method):
    """Baseline method-to-onion wall-time ratio at ``dim``, if tabulated."""
    row = BASELINE_SECONDS.get(dim)
    if row is None:
        return None
    return row[method] / row["onion"]


@dataclass
class BenchRow:
    dim: int
    method: str
    n: int
    wall_seconds: float
    seconds_per_matrix: float
    ratio_to_onion: float | None
    reference_ratio: float | None


@dataclass
class BenchReport:
    environment: str
    seed: int
    rows: list

    def to_dict(self):
        return {
            "environment": self.environment,
            "seed": self.seed,
            "rows": [asdict(r) for r in self.rows],
        }

    def lines(self):
        out = [
            f"environment: {self.environment}",
            f"seed: {self.seed}",
            "absolute seconds are machine-specific; compare ratios only",
            f"{'dim':>5} {'method':>7} {'n':>6} {'seconds':>10} {'per-matrix':>11} "
            f"{'vs onion':>9} {'baseline':>9}",
        ]
        for r in self.rows:
            ratio = "-" if r.ratio_to_onion is None else f"{r.ratio_to_onion:.3f}"
            ref = "-" if r.reference_ratio is None else f"{r.reference_ratio:.3f}"
            out.append(
                f"{r.dim:>5} {r.method:>7} {r.n:>6} {r.wall_seconds:>10.4f} "
                f"{r.seconds_per_matrix:>11.3e} {ratio:>9} {ref:>9}"
            )
        return out


def environment_descriptor():
    return (
        f"{platform.platform()}; python {platform.python_version()}; "
        f"numpy {np.__version__}; single-threaded BLAS"
    )


def _time_cell(method, dim, param, n, warmup, repetitions, stream):
    for _ in range(warmup):
        sample_correlation(method, dim, param, stream)
    walls = []
    for _ in range(repetitions):
        start = time.perf_counter()
        for _ in range(n):
            sample_correlation(method, dim, param, stream)
        walls.append(time.perf_counter() - start)
    return float(np.median(walls))


def run_benchmark(dims, n=5000, methods=METHOD_ORDER, seed=DEFAULT_SEED, repetitions=3,
                  eta=1.0):
    """Median sampler wall time per (dimension, method) cell.

    The degrees of freedom track the dimension as m = 2*eta + T - 1;
    the default eta = 1 keeps m = T + 1, the uniform-density setting
    the baseline table was measured at.
    """
    dims = sorted(set(int(d) for d in dims))
    if not dims:
        raise DomainError("dims must be nonempty")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if repetitions < 1:
        raise DomainError(f"repetitions must be >= 1, got {repetitions}")
    methods = tuple(m for m in METHOD_ORDER if m in methods)
    if not methods:
        raise DomainError("methods must include at least one of onion, rw, riw")
    warmup = min(50, n // 10)
    streams = RandomStream(seed).split(len(dims) * len(methods))
    times = {}
    with threadpool_limits(limits=1):
        for c, (dim, method) in enumerate((d, m) for d in dims for m in methods):
            param = eta if method == "onion" else eta_to_dof(dim, eta)
            times[(dim, method)] = _time_cell(
                method, dim, param, n, warmup, repetitions, streams[c]
            )
    rows = []
    for dim in dims:
        onion_time = times.get((dim, "onion"))
        for method in methods:
            wall = times[(dim, method)]
            rows.append(
                BenchRow(
                    dim=dim,
                    method=method,
                    n=n,
                    wall_seconds=wall,
                    seconds_per_matrix=wall / n,
                    ratio_to_onion=None if onion_time is None else wall / onion_time,
                    reference_ratio=reference_ratio(dim, method),
                )
            )
    return BenchReport(environment=environment_descriptor(), seed=int(seed), rows=rows)

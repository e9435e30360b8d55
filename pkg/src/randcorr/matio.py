"""Reading and writing correlation-matrix samples.

CSV layout: header ``sample_id,rho_2_1,rho_3_1,rho_3_2,...`` with the
lower-triangle off-diagonals in row-major order, one sample per line.
The diagonal and upper triangle are redundant and never stored.  Floats
are serialized with ``repr``, which is the shortest representation that
round-trips bit-exactly, so write-then-read is the identity.
"""

import json
from contextlib import contextmanager

import numpy as np

from .errors import DomainError
from .linalg import corr_from_offdiag, dim_from_npairs, offdiag_lower


def csv_header(dim):
    rows, cols = np.tril_indices(dim, -1)
    return ["sample_id"] + [f"rho_{i + 1}_{j + 1}" for i, j in zip(rows, cols)]


@contextmanager
def _open_for(target, mode):
    if hasattr(target, "write") or hasattr(target, "read"):
        yield target
    else:
        with open(target, mode, encoding="utf-8", newline="") as handle:
            yield handle


def _format_row(sample_id, values):
    return ",".join([str(sample_id)] + [repr(float(v)) for v in values])


def write_matrices_csv(target, batch):
    """Write a sample batch in the packed CSV layout."""
    with _open_for(target, "w") as out:
        out.write(",".join(csv_header(batch.dim)) + "\n")
        for i in range(batch.count):
            out.write(_format_row(i + 1, offdiag_lower(batch.matrices[i])) + "\n")


def write_matrices_json(target, batch):
    """JSON equivalent of the CSV layout, with the batch metadata inline."""
    payload = {
        "method": batch.method,
        "dim": batch.dim,
        "param": batch.param,
        "n": batch.count,
        "seed": batch.seed,
        "retries": batch.retries,
        "columns": csv_header(batch.dim)[1:],
        "samples": [
            [float(v) for v in offdiag_lower(batch.matrices[i])] for i in range(batch.count)
        ],
    }
    with _open_for(target, "w") as out:
        json.dump(payload, out, indent=2)
        out.write("\n")


def read_matrices_csv(source):
    """Read matrices back from the packed CSV layout.

    Returns ``(matrices, dim)`` with matrices of shape (n, dim, dim).
    Parse failures report the 1-based line and column.
    """
    with _open_for(source, "r") as handle:
        lines = handle.read().splitlines()
    if not lines:
        raise DomainError("empty file: missing header")
    header = lines[0].split(",")
    if header[0] != "sample_id":
        raise DomainError("line 1: header must start with 'sample_id'")
    npairs = len(header) - 1
    dim = dim_from_npairs(npairs)
    expected = csv_header(dim)
    if header != expected:
        for col, (got, want) in enumerate(zip(header, expected), start=1):
            if got != want:
                raise DomainError(f"line 1, column {col}: expected header {want!r}, got {got!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != npairs + 1:
            raise DomainError(
                f"line {lineno}: expected {npairs + 1} fields for dim {dim}, got {len(fields)}"
            )
        values = []
        for col, field in enumerate(fields[1:], start=2):
            try:
                values.append(float(field))
            except ValueError:
                raise DomainError(
                    f"line {lineno}, column {col}: cannot parse {field!r} as a float"
                ) from None
        rows.append(values)
    matrices = np.stack([corr_from_offdiag(v, dim) for v in rows]) if rows else np.empty((0, dim, dim))
    return matrices, dim


def write_bench_csv(target, report):
    """Delimited form of a benchmark report (rows only; metadata lives in JSON)."""
    with _open_for(target, "w") as out:
        out.write("dim,method,n,wall_seconds,seconds_per_matrix,ratio_to_onion,reference_ratio\n")
        for row in report.rows:
            out.write(
                ",".join(
                    [
                        str(row.dim),
                        row.method,
                        str(row.n),
                        repr(float(row.wall_seconds)),
                        repr(float(row.seconds_per_matrix)),
                        "" if row.ratio_to_onion is None else repr(float(row.ratio_to_onion)),
                        "" if row.reference_ratio is None else repr(float(row.reference_ratio)),
                    ]
                )
                + "\n"
            )


def write_json(target, payload):
    with _open_for(target, "w") as out:
        json.dump(payload, out, indent=2)
        out.write("\n")

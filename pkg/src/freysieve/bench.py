"""Benchmark the hot point-count kernel: compiled extension vs numpy fallback.

The workload mirrors the heaviest sieve step (trace batches over the
quadratic extension of F_q); both backends must agree bit-for-bit.
"""

from __future__ import annotations

import time

import numpy as np

from . import kernels


def _workload(q, pairs):
    rng = np.random.default_rng(20240131)
    mk = lambda: rng.integers(0, q, size=pairs, dtype=np.int64)  # noqa: E731
    return mk(), mk(), mk(), mk(), mk(), mk()


def run(q=83, pairs=512, repeats=3):
    """Returns report lines [(key, value), ...] comparing available backends."""
    alpha, beta = 1, 3  # the quadratic subfield model t^2 = t + 3
    b2u, b2v, b4u, b4v, b6u, b6v = _workload(q, pairs)
    lines = [("bench", f"traces_deg2 q={q} pairs={pairs} field-elements={q * q}")]
    results = {}
    for name in ("python", "compiled"):
        try:
            backend = kernels.get_backend(name)
        except RuntimeError:
            lines.append((name, "unavailable"))
            continue
        table = backend.legendre_table(q)
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            out = backend.traces_deg2(q, alpha, beta, b2u, b2v, b4u, b4v, b6u, b6v, table)
            best = min(best, time.perf_counter() - t0)
        results[name] = (best, out)
        rate = pairs * q * q / best / 1e6
        lines.append((name, f"{best:.3f}s  ({rate:.1f}M field-points/s)"))
    if len(results) == 2:
        same = bool(np.array_equal(results["python"][1], results["compiled"][1]))
        lines.append(("outputs-identical", "yes" if same else "NO"))
        lines.append(("speedup", f"{results['python'][0] / results['compiled'][0]:.1f}x"))
    return lines


if __name__ == "__main__":
    for k, v in run():
        print(f"{k}: {v}")

"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Times COMP candidate enumeration, batch answering and DD's unique-cover
pass on Bernoulli designs at theorem budgets, checking that both backends
return identical arrays.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hyperlearn import kernels
from hyperlearn.design import BernoulliDesignSpec, bernoulli_parameter, make_bernoulli_batch, theorem_budget
from hyperlearn.kernels import pack_columns
from hyperlearn.model import ModelParams, sample_hypergraph

CASES = [(100, 2, 0.5), (300, 2, 0.5), (60, 3, 0.5), (120, 3, 0.6)]


def _best(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run_case(n: int, k: int, theta: float, repeat: int) -> list[tuple[str, dict[str, float]]]:
    rng = np.random.default_rng(0)
    params = ModelParams.from_theta(n, k, theta)
    g = sample_hypergraph(params, rng)
    t = theorem_budget("comp", params)
    rows = make_bernoulli_batch(params, BernoulliDesignSpec(t, bernoulli_parameter(params)), rng).dense()
    cols = pack_columns(rows)
    edges = g.edge_array
    bits = np.zeros(t, dtype=bool)
    results: dict[str, dict[str, float]] = {}
    outputs: dict[str, list] = {}
    for backend in ("cython", "python"):
        try:
            kernels.use_backend(backend)
        except ImportError:
            continue
        timings, outs = {}, []
        timings["answer"], ans = _best(lambda: kernels.answer_packed(cols, edges, k), repeat)
        bits = kernels.unpack_words(ans, t)
        neg = pack_columns(rows[~bits])
        timings["comp"], pe = _best(lambda: kernels.comp_survivors(neg, k), repeat)
        pos_rows = rows[bits]
        pos = pack_columns(pos_rows)
        timings["unique"], own = _best(lambda: kernels.unique_cover(pos, pe, k, pos_rows.shape[0]), repeat)
        outs = [ans, pe, own]
        results[backend] = timings
        outputs[backend] = outs
    if len(outputs) == 2:
        for a, b in zip(outputs["cython"], outputs["python"]):
            assert np.array_equal(a, b), "backends disagree"
    return list(results.items())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    before = kernels.BACKEND
    print(f"{'case':<18}{'kernel':<8}{'cython ms':>11}{'python ms':>11}{'speedup':>9}")
    try:
        for n, k, theta in CASES:
            res = dict(run_case(n, k, theta, args.repeat))
            for name in ("answer", "comp", "unique"):
                cy = res.get("cython", {}).get(name)
                py = res["python"][name]
                label = f"n={n} k={k} θ={theta}"
                cy_txt = f"{cy * 1e3:11.2f}" if cy is not None else f"{'n/a':>11}"
                sp = f"{py / cy:8.1f}x" if cy else f"{'':>9}"
                print(f"{label:<18}{name:<8}{cy_txt}{py * 1e3:11.2f}{sp}")
    finally:
        kernels.use_backend(before)


if __name__ == "__main__":
    main()

"""Compare the compiled and interpreted term cores.

Kernels are timed in-process on both modules; the end-to-end workload runs
in a subprocess per core because ``ssclab.core`` binds one at import.

    python3 benchmarks/bench_core.py [--repeat N] [--size N]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit


def random_term(mod, size, rng):
    """Closed random term with roughly ``size`` nodes, built bottom-up."""
    pool = []
    names = ["x%d" % i for i in range(8)]
    for _ in range(size):
        r = rng.random()
        if r < 0.3 or len(pool) < 2:
            pool.append(mod.Var(rng.choice(names)))
        elif r < 0.55:
            pool.append(mod.Lam(rng.choice(names), pool.pop(rng.randrange(len(pool)))))
        elif r < 0.85:
            a = pool.pop(rng.randrange(len(pool)))
            b = pool.pop(rng.randrange(len(pool)))
            pool.append(mod.App(a, b))
        else:
            a = pool.pop(rng.randrange(len(pool)))
            b = pool.pop(rng.randrange(len(pool)))
            pool.append(mod.Sub(a, rng.choice(names), b))
    t = pool.pop()
    while pool:
        t = mod.App(t, pool.pop())
    return t


def rebuild(mod, t):
    """Copy with empty caches, so cached kernels do real work every time."""
    stack = [(t, False)]
    out = []
    while stack:
        s, done = stack.pop()
        tag = s.tag
        if not done:
            stack.append((s, True))
            if tag == mod.LAM:
                stack.append((s.body, False))
            elif tag == mod.APP:
                stack.append((s.arg, False))
                stack.append((s.fun, False))
            elif tag == mod.SUB:
                stack.append((s.arg, False))
                stack.append((s.body, False))
            continue
        if tag == mod.VAR:
            out.append(mod.Var(s.name))
        elif tag == mod.LAM:
            out.append(mod.Lam(s.var, out.pop()))
        else:
            b = out.pop()
            a = out.pop()
            out.append(mod.App(a, b) if tag == mod.APP else mod.Sub(a, s.var, b))
    return out[0]


def bench_kernels(mod, size, repeat):
    rng = random.Random(1)
    t = random_term(mod, size, rng)
    u = rebuild(mod, t)
    res = {}
    res["alpha_key"] = min(timeit.repeat(lambda: mod.alpha_key(t), number=1, repeat=repeat))
    res["free_vars"] = min(timeit.repeat(lambda: mod.free_vars(rebuild(mod, t)), number=1, repeat=repeat))
    res["term_size"] = min(timeit.repeat(lambda: mod.term_size(rebuild(mod, t)), number=1, repeat=repeat))
    res["rebuild"] = min(timeit.repeat(lambda: rebuild(mod, t), number=1, repeat=repeat))
    res["equal"] = min(timeit.repeat(lambda: mod.term_equal(rebuild(mod, t), u), number=1, repeat=repeat))
    # the cache-defeating copy is charged to every kernel but alpha_key
    for k in ("free_vars", "term_size", "equal"):
        res[k] = max(res[k] - res["rebuild"], 0.0)
    return res


WORKLOAD = r"""
import json, time, ssclab
from ssclab.harness import run_suite
start = time.perf_counter()
run_suite("tight-correctness", 8)
mid = time.perf_counter()
run_suite("confluence", 8)
end = time.perf_counter()
print(json.dumps({"impl": ssclab.IMPLEMENTATION, "tight8": mid - start, "confluence8": end - mid}))
"""


def bench_workload(pure):
    env = dict(os.environ, SSCLAB_PURE="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, check=True,
                         capture_output=True, text=True).stdout
    return json.loads(out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=200000)
    ap.add_argument("--no-workload", action="store_true")
    args = ap.parse_args(argv)

    from ssclab import _pycore
    try:
        from ssclab import _ccore
    except ImportError:
        print("compiled core not built; only the pure-Python core is available")
        _ccore = None

    py = bench_kernels(_pycore, args.size, args.repeat)
    rows = [("kernel", "python s", "cython s", "speedup")]
    cy = bench_kernels(_ccore, args.size, args.repeat) if _ccore else {}
    for k in ("alpha_key", "free_vars", "term_size", "equal"):
        c = cy.get(k)
        rows.append((k, "%.4f" % py[k], "-" if c is None else "%.4f" % c,
                     "-" if not c else "%.1fx" % (py[k] / c)))
    if not args.no_workload:
        wp = bench_workload(True)
        wc = bench_workload(False) if _ccore else None
        for k in ("tight8", "confluence8"):
            rows.append(("workload " + k, "%.3f" % wp[k], "-" if not wc else "%.3f" % wc[k],
                         "-" if not wc else "%.1fx" % (wp[k] / wc[k])))
    width = [max(len(r[i]) for r in rows) for i in range(4)]
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, width)))


if __name__ == "__main__":
    main()

"""Time anisotropic_part on random diagonal forms.

    python scripts/benchmark.py --fields "Q" "Q(sqrt(-7))" --count 50 --max-dim 8
"""

import argparse
import random
import statistics
import time
from dataclasses import dataclass, field

from qfwitt import DiagonalForm, make_field
from qfwitt.aniso import anisotropic_part


@dataclass
class BenchConfig:
    fields: list = field(default_factory=lambda: ["Q", "Q(sqrt(-7))", "Q(sqrt(2))", "Q(sqrt(-5))"])
    count: int = 100
    min_dim: int = 1
    max_dim: int = 8
    height: int = 30
    seed: int = 7
    verify: bool = False


def random_form(K, rng, dim, height):
    coeffs = []
    while len(coeffs) < dim:
        c = [rng.randint(-height, height) for _ in range(K.degree)]
        x = K(*c)
        if not x.is_zero():
            coeffs.append(x)
    return DiagonalForm(K, tuple(coeffs))


def run(cfg: BenchConfig):
    rng = random.Random(cfg.seed)
    for spec in cfg.fields:
        K = make_field(spec)
        times, adims = [], {}
        worst = (0.0, None)
        for _ in range(cfg.count):
            q = random_form(K, rng, rng.randint(cfg.min_dim, cfg.max_dim), cfg.height)
            t0 = time.perf_counter()
            qa, _, _ = anisotropic_part(q, verify=cfg.verify)
            dt = time.perf_counter() - t0
            times.append(dt)
            adims[qa.dim] = adims.get(qa.dim, 0) + 1
            if dt > worst[0]:
                worst = (dt, q)
        print(f"{spec:14s} n={cfg.count}  total {sum(times):7.1f}s  median {statistics.median(times):.3f}s  "
              f"max {worst[0]:.2f}s  adim histogram {dict(sorted(adims.items()))}")
        print(f"{'':14s} slowest: {worst[1]}")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    d = BenchConfig()
    ap.add_argument("--fields", nargs="+", default=d.fields)
    ap.add_argument("--count", type=int, default=d.count)
    ap.add_argument("--min-dim", type=int, default=d.min_dim)
    ap.add_argument("--max-dim", type=int, default=d.max_dim)
    ap.add_argument("--height", type=int, default=d.height)
    ap.add_argument("--seed", type=int, default=d.seed)
    ap.add_argument("--verify", action="store_true")
    a = ap.parse_args()
    run(BenchConfig(a.fields, a.count, a.min_dim, a.max_dim, a.height, a.seed, a.verify))


if __name__ == "__main__":
    main()

"""
Comparison detectors
====================

The four reference methods each return exactly ``k`` periods inside
``[10, 350]``. On a low-jitter Clock series they are compared with GMPDA.
"""

from gmpda import GMPDAConfig, GenerativeSpec, detect, generate, run_baseline
from gmpda.baselines import BASELINES

spec = GenerativeSpec("clock", (47,), (1.0,), n=100, beta=0.2, seed=8)
series = generate(spec)
print("truth:", spec.periods)
for method in BASELINES:
    res = run_baseline(method, series, 2)
    print(f"{method:13s}", tuple(round(p, 1) for p in res.periods))
print(f"{'gmpda':13s}", detect(series, GMPDAConfig.benchmark(1, model="clock")).periods)

"""
Is it periodic at all?
======================

A detection always returns some period, so its loss is compared with losses
on pure noise of similar size. A loss below a low quantile of the noise
losses is unlikely to come from noise.
"""

import math

import numpy as np

from gmpda import GMPDAConfig, GenerativeSpec, calibrate_reference_loss, detect, generate
from gmpda.bench import noise_series

cfg = GMPDAConfig.benchmark(1)
ref = calibrate_reference_loss([100, 300], [5000, 20000], reps=10, quantile=0.05,
                               seed=0, config=cfg)
print(f"reference loss (5% of noise runs score lower): {ref.value:.3f}")

periodic = generate(GenerativeSpec("rw", (70,), (math.log(70),), n=300, seed=2))
res = detect(periodic, cfg, reference_loss=ref.value)
print("periodic:", res.periods, f"loss {res.loss:.3f}", "low confidence:", res.low_confidence)

noise = noise_series(300, periodic.length, np.random.default_rng(5))
res = detect(noise, cfg, reference_loss=ref.value)
print("noise   :", res.periods, f"loss {res.loss:.3f}", "low confidence:", res.low_confidence)

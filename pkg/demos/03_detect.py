"""
Detecting prime periods
=======================

Two interleaved Random Walk trains (periods 35 and 90) plus noise. The
detector scores candidate periods on the denoised histogram, searches
combinations of them, and fits the spreads. Multiples such as 70 are not
reported because the mixture curve of 35 already explains them.
"""

import math

from gmpda import GMPDAConfig, GenerativeSpec, detect, generate
from gmpda.candidates import extract_candidates
from gmpda.intervals import denoised_histogram, estimate_z_hat, interval_histogram

spec = GenerativeSpec("rw", (35, 90), (math.log(35), math.log(90)), n=150, beta=0.3, seed=11)
series = generate(spec)
cfg = GMPDAConfig.benchmark(2)

hist = interval_histogram(series, cfg.loss_length)
ledger = extract_candidates(denoised_histogram(hist, estimate_z_hat(hist, 5)),
                            series.length, cfg)
for it in range(1, cfg.max_iterations + 1):
    top = [c.period for c in ledger.iteration(it)[:5]]
    if top:
        print(f"iteration {it}: top candidates {top}")

result = detect(series, cfg)
print("periods:", result.periods)
print("sigmas :", tuple(round(s, 2) for s in result.sigmas))
print(f"loss   : {result.loss:.3f}  (noise model alone scores 1)")
print("best combinations:")
for row in sorted(result.combinations, key=lambda r: r["loss"])[:4]:
    print(f"  {row['periods']}  {row['loss']:.3f}")

# same series without the spread fit, initial sigma = log(mu)
plain = detect(series, cfg.replace(curve_fit=False))
print("without fit:", plain.periods, f"{plain.loss:.3f}")

"""Writes monthly_synthetic.csv: a made-up industrial-production-like index, 2000-01 to 2019-12."""
import numpy as np

rng = np.random.default_rng(20190901)
n = 240
t = np.arange(n)
trend = 100 + 0.08 * t + 4 * np.sin(2 * np.pi * t / 300)
cycle = 2.5 * np.sin(2 * np.pi * t / 54 + 0.4)
seasonal = 3.0 * np.cos(2 * np.pi * t / 12) + 1.2 * np.sin(2 * np.pi * t / 6) + 0.5 * np.cos(2 * np.pi * t / 4)
noise = rng.normal(0, 0.6, n)
x = trend + cycle + seasonal + noise

with open("monthly_synthetic.csv", "w") as f:
    f.write("date,index\n")
    for i, v in enumerate(x):
        f.write(f"{2000 + i // 12}-{i % 12 + 1:02d},{v:.4f}\n")

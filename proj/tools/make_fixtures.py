#!/usr/bin/env python3
"""Generates the bundled sample inputs under data/.

Synthetic but realistic: prices follow a stochastic-volatility random walk
(log variance mean-reverting AR(1)), sentiment is a bounded random walk
loosely coupled to recent price momentum. Fixed seed, so the files are
reproducible byte for byte.
"""
import json
import os
from datetime import date, timedelta

import numpy as np

OUT = os.path.join(os.path.dirname(__file__), "..", "data")
N_DAYS = 810
START = date(2020, 1, 6)
EPOCH = date(1970, 1, 1)

rng = np.random.default_rng(20200106)

# --- prices ---------------------------------------------------------------
mu_h, phi, sigma_eta = -6.8, 0.97, 0.25
h = np.empty(N_DAYS)
h[0] = mu_h
for t in range(1, N_DAYS):
    h[t] = mu_h + phi * (h[t - 1] - mu_h) + sigma_eta * rng.standard_normal()
ret = np.exp(h / 2.0) * rng.standard_normal(N_DAYS) + 0.0005

log_price = np.log(7200.0) + np.cumsum(ret)
close = np.exp(log_price)
open_ = close * np.exp(-ret / 2.0)
spread = np.abs(rng.standard_normal(N_DAYS)) * 0.01 + 0.002
high = np.maximum(open_, close) * (1.0 + spread)
low = np.minimum(open_, close) * (1.0 - spread)
volume = (rng.lognormal(10.0, 0.5, N_DAYS) * 1e3).astype(np.int64)

with open(os.path.join(OUT, "btc_sample.csv"), "w", newline="\n") as f:
    f.write("Date,Open,High,Low,Close,Adj Close,Volume\n")
    for t in range(N_DAYS):
        d = START + timedelta(days=t)
        f.write(
            f"{d.isoformat()},{open_[t]:.6f},{high[t]:.6f},{low[t]:.6f},"
            f"{close[t]:.6f},{close[t]:.6f},{volume[t]}\n"
        )

# --- sentiment ------------------------------------------------------------
def label(v: int) -> str:
    if v <= 24:
        return "Extreme Fear"
    if v <= 44:
        return "Fear"
    if v <= 54:
        return "Neutral"
    if v <= 74:
        return "Greed"
    return "Extreme Greed"

momentum = np.convolve(ret, np.ones(7) / 7.0, mode="same")
sent = np.empty(N_DAYS)
sent[0] = 50.0
for t in range(1, N_DAYS):
    pull = 420.0 * momentum[t]  # greed follows recent momentum
    sent[t] = 0.9 * sent[t - 1] + 0.1 * (50.0 + pull * 50.0) + 6.0 * rng.standard_normal()
values = np.clip(np.round(sent), 0, 100).astype(int)

records = []
for t in range(N_DAYS):
    d = START + timedelta(days=t)
    ts = int((d - EPOCH).days) * 86400
    records.append(
        {
            "value": str(values[t]),
            "value_classification": label(values[t]),
            "timestamp": str(ts),
        }
    )
# the public API serves newest first; the loader must sort
records.reverse()

with open(os.path.join(OUT, "fng_sample.json"), "w", newline="\n") as f:
    json.dump({"name": "Fear and Greed Index", "data": records}, f, indent=1)
    f.write("\n")

print(f"wrote {N_DAYS} days to {os.path.abspath(OUT)}")

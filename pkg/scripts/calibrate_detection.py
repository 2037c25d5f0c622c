#!/usr/bin/env python3
"""Monte Carlo check of the detection model: empirical observation
frequency vs the closed form clamp(base * f(intensity) * g(monitor)) for
all nine intensity/monitor pairs.

Usage: python3 scripts/calibrate_detection.py [--base 0.4] [--ticks 10000]
"""

import argparse
import math
import random

from redblue.campaign.model import (
    AssetFunction,
    CyberAsset,
    ObservationChannel,
    Side,
    SideTruth,
    WorldTruth,
)
from redblue.campaign.observation import (
    DetectionConfig,
    INTENSITY_FACTOR,
    generate_observations,
)
from redblue.playbook.model import Intensity


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--base", type=float, default=0.4)
    parser.add_argument("--ticks", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    cfg = DetectionConfig(base_probability={c: args.base for c in ObservationChannel})
    print(f"{'actor':>8} {'monitor':>8} {'p':>8} {'freq':>8} {'sigmas':>8}")
    for actor in Intensity:
        for monitor in Intensity:
            red = SideTruth(side=Side.RED)
            red.assets["r1"] = CyberAsset(
                id="r1",
                owner=Side.RED,
                function=AssetFunction.INTEL_GATHERING,
                advertised_function=AssetFunction.INTEL_GATHERING,
                monitor_level=actor,
            )
            blue = SideTruth(side=Side.BLUE, monitor_level=monitor)
            truth = WorldTruth(sides={Side.RED: red, Side.BLUE: blue})
            rng = random.Random(args.seed + actor.value * 10 + monitor.value)
            hits = sum(
                len(generate_observations(truth, Side.BLUE, cfg, rng, t))
                for t in range(args.ticks)
            )
            p = min(1.0, args.base * INTENSITY_FACTOR[actor] * INTENSITY_FACTOR[monitor])
            freq = hits / args.ticks
            sigma = math.sqrt(p * (1 - p) / args.ticks) if 0 < p < 1 else float("nan")
            sigmas = abs(freq - p) / sigma if sigma == sigma else 0.0
            print(
                f"{actor.label:>8} {monitor.label:>8} {p:8.4f} {freq:8.4f} {sigmas:8.2f}"
            )


if __name__ == "__main__":
    main()

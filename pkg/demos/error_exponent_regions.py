#!/usr/bin/env python3
"""Reliability of the wideband non-coherent channel, block by block.

Prints the rate landmarks that carve the random-coding exponent into its
regions, samples the exponent curve across them, and closes with the outage
heuristic and the low-SNR diversity order, including the empirical slope
check against the closed form.
"""

import numpy as np

from widemimo import (
    ChannelDims,
    block_error_bound,
    diversity_low_snr,
    exponent_curve,
    outage_probability,
    rate_landmarks,
)

DIMS = ChannelDims(1, 1, 2500)  # nu = 1 at snr = 0.01
SNR = 0.01


def main():
    lm = rate_landmarks(DIMS, SNR)
    print(f"t={DIMS.t}, r={DIMS.r}, l={DIMS.l}, snr={SNR}")
    print(
        f"landmarks (nats/block): critical={lm.r_critical:.3f}  "
        f"cutoff={lm.r_cutoff:.3f}  training-capacity lb={lm.c_block_training_lb:.3f}  "
        f"capacity={lm.c_block:.3f}"
    )
    print(
        "the critical and cut-off rates sit far below block capacity: almost "
        "the whole rate range is outage-dominated region B\n"
    )

    rates = np.concatenate([[0.0, 0.25, 0.46], np.linspace(1, 28, 10)])
    curve = exponent_curve(DIMS, SNR, rates)
    print(f"{'R':>7} {'E_r(R)':>10} {'rho*':>8} {'region':>14} {'P_err bound':>12}")
    for point in curve.samples:
        bound = block_error_bound(DIMS, SNR, point.rate)
        print(
            f"{point.rate:>7.2f} {point.value:>10.5f} {point.rho:>8.4f} "
            f"{point.region:>14} {bound:>12.4e}"
        )

    print("\noutage vs the block error bound at a region-B rate:")
    rate = 5.0
    outage = outage_probability(DIMS, SNR, rate)
    print(
        f"R={rate}: P_outage={outage.probability:.4e}, "
        f"duty-weighted={outage.error_weighted:.4e}, "
        f"block bound={block_error_bound(DIMS, SNR, rate):.4e}"
    )

    print("\nlow-SNR diversity for R = l r snr^kappa, kappa=1.5, nu=1:")
    est = diversity_low_snr(DIMS, 1.0, 1.5, snr_grid=[1e-2, 10**-2.5, 1e-3])
    print(
        f"closed form d_L={est.order:.2f}; empirical slopes: "
        f"error bound {est.bound_fit.slope:.3f}, outage {est.outage_fit.slope:.3f} "
        "(both converge to d_L as snr drops further)"
    )


if __name__ == "__main__":
    main()

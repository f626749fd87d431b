//! Fixtures shared by the benchmarks.

use ic_outage::{DecoderMode, DiscreteIC, GaussianIC, SchemeParams};

/// Gaussian channel with 30 dBW powers and crossover gains 0.8 and 1.5.
pub fn gaussian() -> GaussianIC {
    GaussianIC::from_dbw(30.0, 30.0, 0.8, 1.5).expect("valid channel")
}

/// Binary-input channel with five outputs and identical kernels.
pub fn discrete() -> DiscreteIC {
    let rows = vec![
        vec![0.3266, 0.1314, 0.1674, 0.3588, 0.0158],
        vec![0.3148, 0.0612, 0.2158, 0.1898, 0.2184],
        vec![0.1905, 0.3272, 0.4279, 0.0102, 0.0442],
        vec![0.4091, 0.2734, 0.0970, 0.1693, 0.0512],
    ];
    DiscreteIC::symmetric(2, 2, rows, 0, 0).expect("valid channel")
}

pub fn scheme(n_packets: usize) -> SchemeParams {
    SchemeParams::new(1.0, 1.3, n_packets, 5.0, DecoderMode::Tin).expect("valid scheme")
}

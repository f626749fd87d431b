#![allow(dead_code)]

use ic_outage::{DiscreteIC, GaussianIC, InfoQuantities, InputDistribution};

pub const KERNEL: [[f64; 5]; 4] = [
    [0.3266, 0.1314, 0.1674, 0.3588, 0.0158],
    [0.3148, 0.0612, 0.2158, 0.1898, 0.2184],
    [0.1905, 0.3272, 0.4279, 0.0102, 0.0442],
    [0.4091, 0.2734, 0.0970, 0.1693, 0.0512],
];

/// Binary inputs, five outputs, the same kernel at both receivers.
pub fn binary_channel() -> DiscreteIC {
    let rows = KERNEL.iter().map(|r| r.to_vec()).collect();
    DiscreteIC::symmetric(2, 2, rows, 0, 0).unwrap()
}

pub fn binary_info() -> InfoQuantities {
    let pi = InputDistribution::bernoulli(0.2).unwrap();
    binary_channel().info_quantities(&pi, &pi).unwrap()
}

/// 30 dBW powers, crossover gains 0.8 and 1.5.
pub fn gaussian() -> GaussianIC {
    GaussianIC::from_dbw(30.0, 30.0, 0.8, 1.5).unwrap()
}

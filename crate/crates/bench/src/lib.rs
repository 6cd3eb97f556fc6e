//! Workloads shared by the criterion benches and the scaling check.

use std::time::{Duration, Instant};

use swapreach::{gen_instance, GenSpec, Instance, Shape};

/// The suite in `suites/scaling.suite`.
pub const SCALING_SUITE: &str = include_str!("../suites/scaling.suite");

/// Agent count of the large tree workloads.
pub const LARGE: usize = 10_000;

pub fn instance(shape: Shape, agents: usize, density: f64, seed: u64) -> Instance {
    gen_instance(&GenSpec::new(shape, agents, density, seed)).expect("valid generator spec")
}

/// Wall time of one call.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

//! Initialization time and speed along Ω/Γ at fixed Γ, and where the
//! threshold stops being reachable.
//!
//! ```text
//! cargo run --release --example init_time -- [gamma-ghz]
//! ```

use std::error::Error;

use spin_init::dynamics::{initialization, reachability_boundary, InitTimeOptions, InitTimeResult};
use spin_init::model::RateSet;

/// Returns the Ω/Γ ratio at which steady-state fidelity falls to the threshold.
pub fn run_example(gamma: f64, ratios: &[f64]) -> Result<Option<f64>, Box<dyn Error>> {
    let opts = InitTimeOptions::default();
    println!("Γ/2π = {gamma} GHz, threshold {:.4}", opts.threshold);
    println!("{:>8} {:>10} {:>12} {:>10}", "Ω/Γ", "fidelity", "t_init (ns)", "speed");
    for &ratio in ratios {
        let init = initialization(&RateSet::new(ratio * gamma, gamma), &opts)?;
        match init.time {
            InitTimeResult::Reached { t_init } => println!(
                "{ratio:>8.3} {:>10.5} {t_init:>12.4} {:>6.3} GHz",
                init.fidelity,
                init.time.speed_ghz().unwrap_or(f64::INFINITY)
            ),
            InitTimeResult::Unreachable { .. } => println!("{ratio:>8.3} {:>10.5} {:>12}", init.fidelity, "unreachable"),
        }
    }
    let boundary = reachability_boundary(&RateSet::new(0.0, gamma), opts.threshold, 0.01, 1.0)?;
    match boundary {
        Some(b) => println!("reachable below Ω/Γ ≈ {b:.4}"),
        None => println!("no boundary in 0.01 ≤ Ω/Γ ≤ 1"),
    }
    Ok(boundary)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let gamma = std::env::args().nth(1).map_or(Ok(10.0), |s| s.parse())?;
    run_example(gamma, &[0.005, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.5])?;
    Ok(())
}

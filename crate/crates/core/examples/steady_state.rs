//! Stationary state of the driven dot and the resulting fidelity.
//!
//! ```text
//! cargo run --example steady_state -- [omega-ghz] [gamma-ghz]
//! ```

use std::error::Error;

use spin_init::dynamics::{stationary_residual, steady_state};
use spin_init::model::{build_liouvillian, Level, RateSet};

pub fn run_example(rates: &RateSet) -> Result<f64, Box<dyn Error>> {
    let l = build_liouvillian(rates)?;
    let rho = steady_state(&l)?;
    println!("Ω/2π = {} GHz, Γ/2π = {} GHz", rates.omega, rates.gamma15);
    for level in Level::ALL {
        println!("  ρ{0}{0} = {1:.6e}", level.label(), rho.population(level));
    }
    let residual = stationary_residual(&l, rho.matrix()) / l.matrix().frobenius_norm();
    let f = rho.population(Level::SpinUp);
    println!("fidelity {f:.5}, relative residual {residual:.1e}");
    Ok(f)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let arg = |i: usize, default: f64| std::env::args().nth(i).map_or(Ok(default), |s| s.parse());
    run_example(&RateSet::new(arg(1, 0.5)?, arg(2, 10.0)?))?;
    Ok(())
}

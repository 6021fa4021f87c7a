//! Re-sweeps the (Ω, Γ) plane at several spin-flip rates: the best fidelity
//! drops with γ₁₂ while the fastest initialization barely moves.
//!
//! ```text
//! cargo run --release --example spin_flip_sensitivity
//! ```

use std::error::Error;

use spin_init::model::RateSet;
use spin_init::sweep::{find_extrema, run_sweep, MinTime, SweepGrid};

/// `(γ₁₂ in GHz, max fidelity, min t_init in ns)`
pub type Row = (f64, f64, Option<f64>);

pub fn run_example(grid: &SweepGrid, gamma12_khz: &[f64]) -> Result<Vec<Row>, Box<dyn Error>> {
    println!("{:>10} {:>12} {:>22} {:>12}", "γ₁₂ (kHz)", "max fidelity", "at Ω/2π, Γ/2π (GHz)", "min t (ps)");
    let mut rows = Vec::new();
    for &khz in gamma12_khz {
        let g12 = khz * 1e-6;
        let grid = grid.clone().with_fixed_rates(grid.fixed_rates.with_gamma12(g12));
        let e = find_extrema(&run_sweep(&grid)?)?;
        let t = match e.min_time {
            MinTime::Found(r) => r.t_init_ns,
            MinTime::NoReachablePoint => None,
        };
        let best = e.max_fidelity;
        println!(
            "{khz:>10} {:>12.5} {:>13.3}, {:>6.2} {:>12}",
            best.fidelity,
            best.omega_ghz,
            best.gamma_ghz,
            t.map_or("-".into(), |t| format!("{:.2}", t * 1e3))
        );
        rows.push((g12, best.fidelity, t));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&SweepGrid::standard().with_fixed_rates(RateSet::default()), &[10.0, 100.0, 1000.0])?;
    Ok(())
}

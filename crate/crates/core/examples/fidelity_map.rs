//! Sweeps the default (Ω/2π, Γ/2π) plane, writes the records as CSV plus
//! fidelity and initialization-time heat maps, and prints the extrema.
//!
//! ```text
//! cargo run --release --example fidelity_map -- [output-dir]
//! ```

use std::error::Error;
use std::path::{Path, PathBuf};

use spin_init::sweep::heatmap::{self, Metric};
use spin_init::sweep::{csv, find_extrema, run_sweep, MinTime, SweepGrid};

pub fn run_example(dir: &Path) -> Result<(), Box<dyn Error>> {
    let grid = SweepGrid::standard();
    let records = run_sweep(&grid)?;

    std::fs::create_dir_all(dir)?;
    let bytes = csv::write_csv_file(&records, &dir.join("sweep.csv"))?;
    heatmap::write_heatmap(&records, Metric::Fidelity, &dir.join("fidelity.svg"))?;
    heatmap::write_heatmap(&records, Metric::InitTime, &dir.join("t_init.svg"))?;
    println!("{} points, {bytes} bytes of CSV in {}", records.len(), dir.display());

    let extrema = find_extrema(&records)?;
    let best = extrema.max_fidelity;
    println!(
        "max fidelity {:.4} at Ω/2π = {:.3} GHz, Γ/2π = {:.1} GHz",
        best.fidelity, best.omega_ghz, best.gamma_ghz
    );
    match extrema.min_time {
        MinTime::Found(r) => println!(
            "min t_init {:.1} ps (speed {:.2} GHz) at Ω/2π = {:.3} GHz, Γ/2π = {:.1} GHz, fidelity {:.3}",
            r.t_init_ns.unwrap() * 1e3,
            r.speed_ghz.unwrap(),
            r.omega_ghz,
            r.gamma_ghz,
            r.fidelity
        ),
        MinTime::NoReachablePoint => println!("no reachable point"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("target/fidelity_map"));
    run_example(&dir)
}

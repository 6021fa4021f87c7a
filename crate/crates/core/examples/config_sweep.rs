//! Drives the command-line front end from a config file: a small sweep with
//! flags overriding file values, written to CSV and an SVG speed map.
//!
//! ```text
//! cargo run --example config_sweep -- [output-dir]
//! ```

use std::error::Error;
use std::path::{Path, PathBuf};

use spin_init::sweep::cli::{cli_main, EXIT_OK};

const CONFIG: &str = "\
# coarse sweep at a raised spin-flip rate
grid = omega:0.02:2:8:log,gamma:5:20:4:lin
gamma12-khz = 100
metric = speed
threads = 1
";

pub fn run_example(dir: &Path) -> Result<String, Box<dyn Error>> {
    std::fs::create_dir_all(dir)?;
    let config = dir.join("sweep.conf");
    std::fs::write(&config, CONFIG)?;
    let (csv, svg) = (dir.join("sweep.csv"), dir.join("speed.svg"));

    let args = [
        "spin-init",
        "--config",
        config.to_str().ok_or("non-UTF-8 path")?,
        "sweep",
        // overrides the file's γ₁₂
        "--gamma12-khz",
        "10",
        "--out",
        csv.to_str().ok_or("non-UTF-8 path")?,
        "--svg",
        svg.to_str().ok_or("non-UTF-8 path")?,
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli_main(args, &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    if code != EXIT_OK {
        return Err(format!("spin-init exited with {code}").into());
    }
    Ok(std::fs::read_to_string(csv)?)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("target/config_sweep"));
    let csv = run_example(&dir)?;
    println!("{} rows written to {}", csv.lines().count() - 1, dir.display());
    Ok(())
}

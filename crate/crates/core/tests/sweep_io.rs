use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spin_init::model::RateSet;
use spin_init::sweep::cli::{cli_main, EXIT_OK, EXIT_USAGE};
use spin_init::sweep::csv::{parse_csv, to_csv_string};
use spin_init::sweep::heatmap::{render_heatmap, Metric, Rgb};
use spin_init::sweep::{run_sweep_with_threads, Axis, Spacing, SweepGrid, SweepRecord};

fn random_record(rng: &mut ChaCha8Rng, omega: f64, gamma: f64) -> SweepRecord {
    let reachable = rng.gen_bool(0.7);
    let t = reachable.then(|| 10f64.powf(rng.gen_range(-2.0..2.0)));
    SweepRecord {
        omega_ghz: omega,
        gamma_ghz: gamma,
        fidelity: rng.gen_range(0.3..1.0),
        t_init_ns: t,
        speed_ghz: t.map(|t| 1.0 / (TAU * t)),
        reachable,
    }
}

fn small_grid() -> SweepGrid {
    SweepGrid::new(
        Axis::new(0.05, 3.0, 5, Spacing::Log).unwrap(),
        Axis::new(5.0, 20.0, 4, Spacing::Linear).unwrap(),
        RateSet::default(),
    )
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("spin-init").chain(args.iter().copied());
    let code = cli_main(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn csv_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let records: Vec<SweepRecord> =
        (0..100).map(|k| random_record(&mut rng, 0.01 * (k + 1) as f64, 5.0 + 0.1 * k as f64)).collect();
    let parsed = parse_csv(&to_csv_string(&records)).unwrap();
    assert_eq!(parsed.len(), records.len());
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-8 * a.abs().max(b.abs());
    for (a, b) in records.iter().zip(&parsed) {
        assert!(close(a.omega_ghz, b.omega_ghz) && close(a.gamma_ghz, b.gamma_ghz) && close(a.fidelity, b.fidelity));
        assert_eq!(a.reachable, b.reachable);
        assert_eq!(a.t_init_ns.is_some(), b.t_init_ns.is_some());
        if let (Some(x), Some(y)) = (a.t_init_ns, b.t_init_ns) {
            assert!(close(x, y));
        }
        if let (Some(x), Some(y)) = (a.speed_ghz, b.speed_ghz) {
            assert!(close(x, y));
        }
    }
}

fn cell_fills(svg: &str) -> Vec<&str> {
    svg.lines()
        .filter(|l| l.contains(r#"class="cell""#))
        .map(|l| l.split(r#"fill=""#).nth(1).unwrap().split('"').next().unwrap())
        .collect()
}

fn parse_hex(h: &str) -> Rgb {
    let c = |i: usize| u8::from_str_radix(&h[i..i + 2], 16).unwrap();
    Rgb(c(1), c(3), c(5))
}

#[test]
fn heatmap_colors_follow_metric_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..10 {
        let mut records = Vec::new();
        for g in [5.0, 10.0] {
            for w in [0.1, 0.2, 0.3, 0.4, 0.5] {
                let mut r = random_record(&mut rng, w, g);
                r.fidelity = rng.gen_range(0.0..1.0);
                records.push(r);
            }
        }
        let svg = render_heatmap(&records, Metric::Fidelity).unwrap();
        let fills = cell_fills(&svg);
        assert_eq!(fills.len(), records.len());
        let lum: Vec<f64> = fills.iter().map(|f| parse_hex(f).luminance()).collect();
        for a in 0..records.len() {
            for b in 0..records.len() {
                if records[a].fidelity < records[b].fidelity {
                    assert!(lum[a] <= lum[b] + 1e-12);
                }
            }
        }

        // unreachable points are hatched on the time map
        let svg = render_heatmap(&records, Metric::InitTime).unwrap();
        for (r, fill) in records.iter().zip(cell_fills(&svg)) {
            assert_eq!(fill == "url(#hatch)", !r.reachable);
        }
    }
}

#[test]
fn sweep_is_complete_ordered_and_thread_independent() {
    let grid = small_grid();
    let one = run_sweep_with_threads(&grid, 1).unwrap();
    let four = run_sweep_with_threads(&grid, 4).unwrap();
    assert_eq!(one.len(), 5 * 4);
    assert_eq!(to_csv_string(&one), to_csv_string(&four));

    // Γ outer, Ω inner
    let points = grid.points();
    for (r, (w, g)) in one.iter().zip(points) {
        assert_eq!((r.omega_ghz, r.gamma_ghz), (w, g));
    }
    assert!(one[0].gamma_ghz == one[4].gamma_ghz && one[0].omega_ghz < one[1].omega_ghz);

    for r in &one {
        assert_eq!(r.reachable, r.t_init_ns.is_some());
        if let (Some(t), Some(s)) = (r.t_init_ns, r.speed_ghz) {
            assert!((s * TAU * t - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn cli_reports_unreachable_without_error() {
    let (code, out, _) = run_cli(&["init-time", "--omega-ghz", "3", "--gamma-ghz", "10"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("UNREACHABLE"), "{out}");
}

#[test]
fn cli_steady_prints_fidelity() {
    let (code, out, _) = run_cli(&["steady", "--omega-ghz", "0.5", "--gamma-ghz", "10"]);
    assert_eq!(code, EXIT_OK);
    let line = out.lines().find(|l| l.starts_with("fidelity = ")).unwrap();
    let f: f64 = line.trim_start_matches("fidelity = ").parse().unwrap();
    assert!((f - 0.973).abs() < 0.003, "{f}");
}

#[test]
fn cli_rejects_inverted_grid() {
    let (code, _, err) = run_cli(&["sweep", "--grid", "omega:1:0.1:3:lin,gamma:5:6:2:lin"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn cli_sweep_writes_csv_to_stdout() {
    let (code, out, err) = run_cli(&["sweep", "--grid", "omega:0.1:1:3:log,gamma:5:10:2:lin", "--threads", "1"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let records = parse_csv(&out).unwrap();
    assert_eq!(records.len(), 6);
    assert!(err.contains("max fidelity"), "{err}");
}

#[test]
fn cli_flags_override_config() {
    let path = std::env::temp_dir().join(format!("spin-init-precedence-{}.conf", std::process::id()));
    std::fs::write(&path, "omega-ghz = 3\ngamma-ghz = 10\n").unwrap();
    let p = path.to_str().unwrap();

    let (_, from_config, _) = run_cli(&["--config", p, "init-time"]);
    assert!(from_config.starts_with("UNREACHABLE"), "{from_config}");

    let (code, overridden, _) = run_cli(&["--config", p, "init-time", "--omega-ghz", "0.5"]);
    assert_eq!(code, EXIT_OK);
    assert!(overridden.starts_with("t_init_ns = "), "{overridden}");

    std::fs::write(&path, "omega-gz = 3\n").unwrap();
    let (code, _, err) = run_cli(&["--config", p, "steady"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("omega-gz"), "{err}");
    std::fs::remove_file(&path).unwrap();
}

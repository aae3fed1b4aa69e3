//! Batch execution and CLI dispatch.
//!
//! Scenario jobs run in a small worker pool (capped by the config and the
//! MOCLAB_THREADS environment variable); each job owns its own output
//! directory, and the summary is printed in config order after all jobs
//! join. Exit codes: 0 all scenarios pass, 1 any bound violated or
//! hypothesis not met, 2 configuration error, 3 runtime or I/O error.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::config::{parse_config, RunConfig};
use crate::error::{Error, Result};
use crate::plot::emit_scenario_plots;
use crate::scenarios::registry_table;
use crate::verifier::{verify, ScenarioSpec, VerificationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG_ERROR: i32 = 2;
pub const EXIT_RUNTIME_ERROR: i32 = 3;

/// Full-precision decimal float for CSV cells: 17 significant digits,
/// enough to round-trip any f64 exactly.
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Worker count: the smaller of the configured request (defaulting to the
/// host parallelism) and the MOCLAB_THREADS cap, never more than jobs.
fn effective_workers(
    requested: Option<usize>,
    env_cap: Option<usize>,
    jobs: usize,
    host: usize,
) -> usize {
    let mut n = requested.unwrap_or(host).max(1);
    if let Some(cap) = env_cap {
        n = n.min(cap.max(1));
    }
    n.min(jobs).max(1)
}

fn env_thread_cap() -> Option<usize> {
    std::env::var("MOCLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path.display().to_string(), e))
}

fn modulus_csv(report: &VerificationReport) -> String {
    let mut out = String::from("t,s,w_raw,w_envelope\n");
    for snap in &report.artifacts {
        for j in 0..snap.bin_centers.len() {
            if snap.raw_nonempty[j] {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    csv_float(snap.time),
                    csv_float(snap.bin_centers[j]),
                    csv_float(snap.w_raw[j]),
                    csv_float(snap.w_envelope[j]),
                ));
            }
        }
    }
    out
}

fn comparison_csv(report: &VerificationReport) -> String {
    let mut out = String::from("t,s,phi,w_envelope,margin\n");
    for snap in &report.artifacts {
        for j in 0..snap.bin_centers.len() {
            if snap.env_nonempty[j] {
                let margin = snap.w_envelope[j] - snap.phi[j];
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_float(snap.time),
                    csv_float(snap.bin_centers[j]),
                    csv_float(snap.phi[j]),
                    csv_float(snap.w_envelope[j]),
                    csv_float(margin),
                ));
            }
        }
    }
    out
}

/// Write report.json, modulus.csv, and comparison.csv for one report.
pub fn write_artifacts(dir: &Path, report: &VerificationReport) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Scenario(format!("report serialization failed: {e}")))?;
    write_file(&dir.join("report.json"), &(json + "\n"))?;
    write_file(&dir.join("modulus.csv"), &modulus_csv(report))?;
    write_file(&dir.join("comparison.csv"), &comparison_csv(report))?;
    Ok(())
}

/// Verify one scenario and persist its artifacts under `out_root/<id>/`.
pub fn run_scenario(
    sc: &ScenarioSpec,
    out_root: &Path,
    emit_plots: bool,
) -> Result<VerificationReport> {
    let report = verify(sc)?;
    let dir = out_root.join(&sc.id);
    write_artifacts(&dir, &report)?;
    if emit_plots && !report.artifacts.is_empty() {
        emit_scenario_plots(&dir)?;
    }
    Ok(report)
}

pub struct ScenarioOutcome {
    pub id: String,
    pub result: Result<VerificationReport>,
}

/// Run every scenario in the config through the worker pool; outcomes come
/// back in config order regardless of completion order.
pub fn run_all(config: &RunConfig) -> Vec<ScenarioOutcome> {
    let jobs = config.scenarios.len();
    if jobs == 0 {
        return Vec::new();
    }
    let env_cap = env_thread_cap();
    if let Some(cap) = env_cap {
        // Also cap the data-parallel pool used inside the modulus extractor.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cap).build_global();
    }
    let host = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(4);
    let workers = effective_workers(config.threads, env_cap, jobs, host);

    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<ScenarioOutcome>>> =
        (0..jobs).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= jobs {
                    break;
                }
                let sc = &config.scenarios[i];
                let result = run_scenario(sc, &config.output_dir, config.emit_plots);
                *slots[i].lock().unwrap() = Some(ScenarioOutcome {
                    id: sc.id.clone(),
                    result,
                });
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every job ran"))
        .collect()
}

/// Exit code as a pure function of the outcome set.
pub fn exit_code(outcomes: &[ScenarioOutcome]) -> i32 {
    if outcomes.iter().any(|o| o.result.is_err()) {
        EXIT_RUNTIME_ERROR
    } else if outcomes
        .iter()
        .any(|o| !o.result.as_ref().map(|r| r.pass).unwrap_or(false))
    {
        EXIT_VIOLATION
    } else {
        EXIT_PASS
    }
}

fn print_summary(outcomes: &[ScenarioOutcome]) {
    for o in outcomes {
        match &o.result {
            Ok(r) if r.pass => println!(
                "pass  {:<22} max_violation = {:>13.6e}  budget = {:.6e}",
                o.id, r.max_violation, r.tolerance_budget
            ),
            Ok(r) => println!(
                "FAIL  {:<22} {:?}: max_violation = {:>13.6e}  budget = {:.6e}",
                o.id, r.outcome, r.max_violation, r.tolerance_budget
            ),
            Err(e) => println!("ERROR {:<22} {e}", o.id),
        }
    }
    let passed = outcomes
        .iter()
        .filter(|o| o.result.as_ref().map(|r| r.pass).unwrap_or(false))
        .count();
    println!("{passed}/{} scenarios passed", outcomes.len());
}

/// Run a parsed config end to end and report the exit code.
pub fn run(config: &RunConfig) -> i32 {
    let outcomes = run_all(config);
    print_summary(&outcomes);
    exit_code(&outcomes)
}

const USAGE: &str = "usage:\n  moclab run <config-path>\n  moclab list\n  moclab plot <scenario-dir>";

/// Top-level CLI dispatch; returns the process exit code.
pub fn cli_main(args: &[String]) -> i32 {
    match args.first().map(String::as_str) {
        Some("run") => {
            let Some(path) = args.get(1) else {
                eprintln!("run needs a config path\n{USAGE}");
                return EXIT_CONFIG_ERROR;
            };
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read config {path}: {e}");
                    return EXIT_CONFIG_ERROR;
                }
            };
            match parse_config(&text) {
                Ok(cfg) => run(&cfg),
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_CONFIG_ERROR
                }
            }
        }
        Some("list") => match registry_table() {
            Ok(table) => {
                print!("{table}");
                EXIT_PASS
            }
            Err(e) => {
                eprintln!("{e}");
                EXIT_RUNTIME_ERROR
            }
        },
        Some("plot") => {
            let Some(dir) = args.get(1) else {
                eprintln!("plot needs a scenario directory\n{USAGE}");
                return EXIT_CONFIG_ERROR;
            };
            match emit_scenario_plots(Path::new(dir)) {
                Ok(files) => {
                    for f in &files {
                        println!("wrote {}", f.display());
                    }
                    EXIT_PASS
                }
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_RUNTIME_ERROR
                }
            }
        }
        _ => {
            eprintln!("{USAGE}");
            EXIT_CONFIG_ERROR
        }
    }
}

/// Convenience for tests and examples: run one scenario into a directory.
pub fn run_one(sc: &ScenarioSpec, out_root: impl Into<PathBuf>) -> Result<VerificationReport> {
    run_scenario(sc, &out_root.into(), true)
}

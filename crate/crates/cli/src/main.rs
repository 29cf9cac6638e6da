use clap::{Parser, Subcommand};
use patchlab_cli::acceptance::{self, CRITERIA};
use patchlab_cli::report::RunReport;
use patchlab_cli::runner::{self, RunError, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_PASS};
use patchlab_cli::scenario::{parse_scenario, Kind, Scenario};
use patchlab_cli::{parallel_map, regress};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "patchlab", version, about = "Vortex-patch corner experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run scenario files and/or built-in acceptance criteria.
    Run {
        scenarios: Vec<PathBuf>,
        /// Root output directory; each scenario writes to DIR/<name>.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write SVG figures.
        #[arg(long)]
        plot: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Run all thirteen acceptance criteria.
        #[arg(long)]
        all_acceptance: bool,
        /// Run one acceptance criterion by number or name (repeatable).
        #[arg(long, value_name = "ID")]
        acceptance: Vec<String>,
    },
    /// List scenario kinds and acceptance criteria.
    List,
    /// Re-run the scenarios of a golden directory and compare CSV output.
    Regress {
        golden: PathBuf,
        /// Scratch directory for fresh runs.
        #[arg(long, default_value = "out/regress")]
        work: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

enum Job {
    File(Scenario),
    Acceptance(&'static acceptance::Criterion),
}

fn print_report(r: &RunReport) {
    println!("{} {} ({:.2} s)", if r.pass { "PASS" } else { "FAIL" }, r.scenario, r.wall_time_s);
    for c in &r.checks {
        println!("    {}", c.describe());
    }
}

fn run_job(j: &Job, root: &Path, plot: bool) -> Result<RunReport, RunError> {
    match j {
        Job::File(s) => {
            let mut s = s.clone();
            s.plot |= plot;
            runner::run(&s, Some(&root.join(&s.name)))
        }
        Job::Acceptance(c) => {
            let r = c.run();
            let dir = root.join(c.scenario_name());
            std::fs::create_dir_all(&dir)?;
            std::fs::write(dir.join("report.json"), r.to_json())?;
            Ok(r)
        }
    }
}

fn worse(a: i32, b: i32) -> i32 {
    let rank = |c| [EXIT_PASS, EXIT_CHECK_FAILED, EXIT_NUMERICAL, EXIT_CONFIG].iter().position(|&x| x == c).unwrap_or(0);
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn cmd_run(files: &[PathBuf], out: &Path, plot: bool, jobs: usize, all: bool, picks: &[String]) -> i32 {
    let mut list = Vec::new();
    for f in files {
        match parse_scenario(f) {
            Ok(s) => list.push(Job::File(s)),
            Err(e) => {
                eprintln!("{}", e.to_json());
                return EXIT_CONFIG;
            }
        }
    }
    if all {
        list.extend(CRITERIA.iter().map(Job::Acceptance));
    }
    for p in picks {
        match acceptance::find(p) {
            Some(c) => list.push(Job::Acceptance(c)),
            None => {
                let e = serde_json::json!({"error": "config", "path": "--acceptance", "message": format!("no acceptance criterion '{p}'")});
                eprintln!("{e}");
                return EXIT_CONFIG;
            }
        }
    }
    if list.is_empty() {
        eprintln!("{}", serde_json::json!({"error": "config", "path": "", "message": "nothing to run"}));
        return EXIT_CONFIG;
    }
    let results = parallel_map(&list, jobs, |j| run_job(j, out, plot));
    let mut code = EXIT_PASS;
    for r in &results {
        match r {
            Ok(rep) => {
                print_report(rep);
                if !rep.pass {
                    code = worse(code, EXIT_CHECK_FAILED);
                }
            }
            Err(e) => {
                eprintln!("{e}");
                if let RunError::Config(c) = e {
                    eprintln!("{}", c.to_json());
                }
                code = worse(code, e.exit_code());
            }
        }
    }
    let passed = results.iter().filter(|r| matches!(r, Ok(x) if x.pass)).count();
    println!("{passed}/{} passed", results.len());
    code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Run { scenarios, out, plot, jobs, all_acceptance, acceptance } => {
            cmd_run(&scenarios, &out, plot, jobs, all_acceptance, &acceptance)
        }
        Cmd::List => {
            println!("scenario kinds:");
            for k in Kind::ALL {
                println!("  {:<17} {}", k.name(), k.summary());
            }
            println!("acceptance criteria:");
            for c in &CRITERIA {
                println!("  {:>2} {:<22} {}", c.id, c.name, c.title);
            }
            EXIT_PASS
        }
        Cmd::Regress { golden, work, jobs } => match regress::regress(&golden, &work, jobs) {
            Ok(s) => {
                print!("{}", s.table());
                s.exit_code()
            }
            Err(e) => {
                eprintln!("{}", serde_json::json!({"error": "io", "path": golden.display().to_string(), "message": e.to_string()}));
                EXIT_CONFIG
            }
        },
    };
    ExitCode::from(code as u8)
}

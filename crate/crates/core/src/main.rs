use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use fairdiv::algorithms::{solve, Algorithm, SolveOptions};
use fairdiv::bench::{bench, table};
use fairdiv::error::{Error, Result};
use fairdiv::fairness::FairnessReport;
use fairdiv::generate::Setting;
use fairdiv::io::{emit_allocation, emit_instance, read_allocation, read_instance};
use fairdiv::oracle::{fixtures, Notion, Oracle, BOUND_ENV};
use fairdiv::report::{fairness_text, format_allocation, Format, RunReport};
use fairdiv::value::{format_product, format_value};

#[derive(Parser)]
#[command(name = "fairdiv", version, about = "Fair allocation of indivisible goods under matroid constraints")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "text")]
    format: FormatArg,
    /// Cap on n^m assignments for exhaustive searches.
    #[arg(long, global = true)]
    bound: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Question {
    Count,
    ExistsFef1,
    ExistsEf1,
    ExistsEfx,
    ExistsWeakFef1,
    Mnw,
    Swm,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and report the allocation and its fairness.
    Solve {
        instance: PathBuf,
        /// Force an algorithm instead of dispatching.
        #[arg(long)]
        algorithm: Option<String>,
        /// Agent order, comma separated.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Check mid-run invariants.
        #[arg(long)]
        verify: bool,
        /// Also decide Pareto efficiency.
        #[arg(long)]
        pareto: bool,
        /// Record wall time (makes output run-dependent).
        #[arg(long)]
        timing: bool,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an allocation file against an instance.
    Verify {
        instance: PathBuf,
        allocation: PathBuf,
        /// Notions that must hold for exit code 0.
        #[arg(long, value_delimiter = ',', default_value = "f-ef1")]
        require: Vec<String>,
        #[arg(long)]
        pareto: bool,
    },
    /// Exhaustive ground truth for small instances.
    Oracle {
        instance: PathBuf,
        #[arg(value_enum)]
        question: Question,
    },
    /// Re-derive every worked example and counterexample.
    Demo,
    /// Solve seeded random instances per setting and tabulate the results.
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Settings to run, comma separated (default: all).
        #[arg(long, value_delimiter = ',')]
        setting: Option<Vec<String>>,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Write the example instances and highlighted allocations as JSON files.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(b) = cli.bound {
        std::env::set_var(BOUND_ENV, b.to_string());
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("fairdiv: {e}");
            ExitCode::from(2)
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output always serializes");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// `Ok(true)` when every requested check passes.
fn run(cli: Cli) -> Result<bool> {
    let format: Format = cli.format.into();
    match cli.command {
        Command::Solve { instance, algorithm, order, verify, pareto, timing, out } => {
            let inst = read_instance(&instance)?;
            let algorithm = algorithm.map(|a| a.parse::<Algorithm>()).transpose()?;
            let opts = SolveOptions { order, verify };
            let start = Instant::now();
            let solution = solve(&inst, algorithm, &opts)?;
            let elapsed = start.elapsed();
            let name = inst.name().map_or_else(|| stem(&instance), str::to_string);
            let mut report = RunReport::new(&name, &inst, &solution, pareto)?;
            if timing {
                report.wall_time_ms = Some(elapsed.as_secs_f64() * 1e3);
            }
            let text = report.render(format);
            print!("{text}");
            if let Some(out) = out {
                write_file(&out, &text)?;
            }
            Ok(report.guarantee_holds())
        }
        Command::Verify { instance, allocation, require, pareto } => {
            let inst = read_instance(&instance)?;
            let x = read_allocation(&allocation)?;
            let notions = require
                .iter()
                .map(|s| Notion::parse(s).ok_or_else(|| Error::Input(format!("unknown notion {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let feasibility = fairdiv::model::check_feasible(&x, &inst);
            if !feasibility.is_feasible() {
                match format {
                    Format::Text => println!("feasible: {}", feasibility.describe()),
                    Format::Json => print!("{}", json(&feasibility)),
                }
                return Ok(false);
            }
            let report = FairnessReport::new(&x, &inst, pareto)?;
            match format {
                Format::Text => print!("{}", fairness_text(&report)),
                Format::Json => print!("{}", json(&report)),
            }
            let mut ok = true;
            for n in notions {
                ok &= n.holds(&x, &inst)?;
            }
            Ok(ok)
        }
        Command::Oracle { instance, question } => {
            let inst = read_instance(&instance)?;
            oracle(&inst, question, format)
        }
        Command::Demo => {
            let outcomes = fixtures::sweep(&Oracle::default());
            let passed = outcomes.iter().filter(|o| o.passed()).count();
            match format {
                Format::Json => print!("{}", json(&outcomes)),
                Format::Text => {
                    for o in &outcomes {
                        println!("{} {}", if o.passed() { "PASS" } else { "FAIL" }, o.id);
                        for c in &o.claims {
                            let mark = if c.pass { "ok" } else { "MISMATCH" };
                            println!("  {mark}: {} = {} (expected {})", c.claim, c.observed, c.expected);
                        }
                    }
                    println!("{passed}/{} fixtures pass", outcomes.len());
                }
            }
            Ok(passed == outcomes.len())
        }
        Command::Bench { seed, count, setting, verify, timing } => {
            let settings = match setting {
                None => Setting::ALL.to_vec(),
                Some(list) => list.iter().map(|s| s.parse()).collect::<Result<_>>()?,
            };
            let rows = bench(&settings, seed, count, verify, timing);
            match format {
                Format::Text => print!("{}", table(&rows)),
                Format::Json => print!("{}", json(&rows)),
            }
            Ok(rows.iter().all(|r| r.all_pass()))
        }
        Command::Fixtures { dir } => {
            for fx in fixtures::all() {
                write_file(&dir.join(format!("{}.json", fx.id)), &emit_instance(&fx.instance)?)?;
                if let Some(x) = &fx.highlighted {
                    write_file(&dir.join(format!("{}.allocation.json", fx.id)), &emit_allocation(x))?;
                }
                println!("{}", fx.id);
            }
            Ok(true)
        }
    }
}

fn oracle(inst: &fairdiv::Instance, question: Question, format: Format) -> Result<bool> {
    let o = Oracle::default();
    let (answer, ok): (serde_json::Value, bool) = match question {
        Question::Count => {
            let c = o.count_feasible(inst)?;
            (serde_json::json!({ "feasible_allocations": c }), true)
        }
        Question::ExistsFef1 | Question::ExistsEf1 | Question::ExistsEfx | Question::ExistsWeakFef1 => {
            let notion = match question {
                Question::ExistsFef1 => Notion::Fef1,
                Question::ExistsEf1 => Notion::Ef1,
                Question::ExistsEfx => Notion::Efx,
                _ => Notion::WeakFef1,
            };
            let w = o.exists_fair(inst, notion)?;
            let found = w.is_some();
            (
                serde_json::json!({
                    "notion": notion.name(),
                    "exists": found,
                    "witness": w.map(|x| format_allocation(&x)),
                }),
                found,
            )
        }
        Question::Mnw => {
            let r = o.mnw(inst)?;
            (
                serde_json::json!({
                    "positive_agents": r.positive_agents,
                    "nash_product": format_product(&r.product),
                    "allocations": r.allocations.iter().map(format_allocation).collect::<Vec<_>>(),
                }),
                true,
            )
        }
        Question::Swm => {
            let (w, x) = o.swm(inst)?;
            (serde_json::json!({ "welfare": format_value(&w), "allocation": format_allocation(&x) }), true)
        }
    };
    match format {
        Format::Json => print!("{}", json(&answer)),
        Format::Text => {
            for (k, v) in answer.as_object().expect("answers are objects") {
                match v {
                    serde_json::Value::String(s) => println!("{k}: {s}"),
                    serde_json::Value::Array(a) => {
                        for item in a {
                            println!("{k}: {}", item.as_str().map_or_else(|| item.to_string(), str::to_string));
                        }
                    }
                    other => println!("{k}: {other}"),
                }
            }
        }
    }
    Ok(ok)
}

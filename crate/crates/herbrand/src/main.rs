use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use herbrand::report::{interp_sexpr, render_normal, report_json, report_lines};
use herbrand::script::{parse_script, write_script};
use herbrand::structure::parse_structure;
use herbrand_core::herbrand::{run_pipeline, PipelineOptions, DEFAULT_CAP};
use herbrand_core::interp::{extract_existential_witness, extract_witnesses, interpret_with, InterpOptions};
use herbrand_core::proof::{check_proof, CheckedProof};
use herbrand_core::rewrite::{Budget, Engine};
use herbrand_core::script::{expand, Script};
use herbrand_core::semantics::Structure;

/// Proof mining by the Shoenfield interpretation into infinitary ω-terms.
#[derive(Parser)]
#[command(name = "herbrand", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand and check a proof script.
    Check {
        proof: PathBuf,
        /// Print the expanded primitive proof as a script.
        #[arg(long)]
        primitive: bool,
    },
    /// Print the interpretation of the goal, or of the step with the given label.
    Interpret {
        proof: PathBuf,
        #[arg(long)]
        step: Option<u64>,
        /// Read ¬¬ψ as ψ.
        #[arg(long)]
        collapse: bool,
    },
    /// Normalize the extracted witness of an existential goal.
    Normalize {
        proof: PathBuf,
        /// Emit `STEP <n> <rule> <position>` lines.
        #[arg(long)]
        trace: bool,
        /// Branches shown per sequence.
        #[arg(long, default_value_t = 3)]
        shown: u64,
        /// Nesting depth of shown sequences.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Extract the Herbrand terms of an existential goal in a structure.
    Extract {
        proof: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Bound on the size of the Herbrand set.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Γ is sampled on all arguments up to this bound.
        #[arg(long, default_value_t = 4)]
        gamma_bound: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = Budget::default().max_steps)]
    max_steps: u64,
    #[arg(long, default_value_t = Budget::default().max_demand)]
    max_demand: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget { max_steps: self.max_steps, max_demand: self.max_demand }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<(Script, CheckedProof)> {
    let script = parse_script(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let e = expand(&script).map_err(|e| anyhow!("{}", e))?;
    let checked = check_proof(e.proof).map_err(|e| anyhow!("{}", e))?;
    Ok((script, checked))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Check { proof, primitive } => {
            let (script, checked) = load(&proof)?;
            if primitive {
                print!("{}", write_script(&Script::from_proof(checked.proof())));
            }
            println!("OK {} script steps, {} primitive steps", script.steps.len(), checked.proof().steps.len());
            println!("GOAL {}", checked.goal());
        }
        Command::Interpret { proof, step, collapse } => {
            let (script, checked) = load(&proof)?;
            let phi = match step {
                None => checked.goal().clone(),
                Some(l) => {
                    let e = expand(&script).map_err(|e| anyhow!("{}", e))?;
                    let (_, idx) = e.labels.iter().find(|(x, _)| *x == l).ok_or_else(|| anyhow!("no step {}", l))?;
                    e.proof.steps[*idx].conclusion.clone()
                }
            };
            let opts = InterpOptions { collapse_double_negation: collapse };
            let i = interpret_with(&checked.proof().signature, &phi, opts).map_err(|e| anyhow!("{}", e))?;
            println!("{}", interp_sexpr(&i));
        }
        Command::Normalize { proof, trace, shown, depth, budget } => {
            let (_, checked) = load(&proof)?;
            let wp = extract_witnesses(&checked).map_err(|e| anyhow!("{}", e))?;
            let w = extract_existential_witness(&wp).map_err(|e| anyhow!("{}", e))?;
            let mut engine = if trace { Engine::with_trace(budget.budget()) } else { Engine::new(budget.budget()) };
            let nf = engine.normalize(&w).map_err(|e| anyhow!("{}", e))?;
            let shown = render_normal(&mut engine, &nf, shown, depth).map_err(|e| anyhow!("{}", e))?;
            for s in engine.trace() {
                println!("{}", s);
            }
            println!("NORMAL {}", shown);
            println!("STEPS {}", engine.steps());
        }
        Command::Extract { proof, model, budget, cap, gamma_bound, json } => {
            let (_, checked) = load(&proof)?;
            let spec = parse_structure(&read(&model)?).with_context(|| format!("parsing {}", model.display()))?;
            let m = Structure::new(&checked.proof().signature, &spec).map_err(|e| anyhow!("{}", e))?;
            let opts = PipelineOptions { budget: budget.budget(), cap, gamma_bound };
            let r = run_pipeline(&checked, &m, &opts).map_err(|e| anyhow!("{}", e))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report_json(&r))?);
            } else {
                for l in report_lines(&r) {
                    println!("{}", l);
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // deep recursion over large witness terms
    let worker = std::thread::Builder::new().stack_size(512 << 20).spawn(move || run(cli));
    match worker.map(|h| h.join()) {
        Ok(Ok(Ok(()))) => ExitCode::SUCCESS,
        Ok(Ok(Err(e))) => {
            eprintln!("error: {:#}", e);
            ExitCode::FAILURE
        }
        _ => {
            eprintln!("error: worker thread failed");
            ExitCode::FAILURE
        }
    }
}

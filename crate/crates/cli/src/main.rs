use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use genlab_core::adversaries::{
    breadth_lb_adversary, exhaustive_lb_adversary, existence_violation_adversary, run_mq, FinderMode, LbConfig,
    Schedule,
};
use genlab_core::collections::build_collection;
use genlab_core::dimensions::{
    closure_witness, gf_witness, gnf_witness, nonuniform_complexity, GameBudget, WitnessKind, WitnessReport,
};
use genlab_core::generators::{build_generator, ClosureStyle, FirstYesProber, GeneratorSpec, MqGenerator, ScriptedMq};
use genlab_core::harness::{
    check_breadth, check_exhaustive, check_nonuniform, run_transcript, verify_violation, Claim, Mode,
};
use genlab_core::{Collection, RunConfig};

#[derive(Parser)]
#[command(
    name = "genlab",
    version,
    about = "Language generation in the limit, on exact symbolic sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a plain (or exhaustive-mode) transcript from a TOML config.
    Run(RunArgs),
    /// Run a feedback transcript from a TOML config.
    RunFeedback(RunArgs),
    /// Check a generator against one of the generation notions.
    Check {
        #[command(subcommand)]
        which: CheckCmd,
    },
    /// Run one of the staged adversaries and verify its claim.
    Adversary {
        #[command(subcommand)]
        which: AdversaryCmd,
    },
    /// Search for dimension witnesses.
    Dimension(DimensionArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    collection: String,
    #[arg(long)]
    generator: String,
    #[arg(long, default_value_t = 200)]
    horizon: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Greedy-style bound check over canonical, permuted and scripted schedules.
    Nonuniform {
        #[command(flatten)]
        t: Target,
        /// Check targets `1..=targets`.
        #[arg(long, default_value_t = 8)]
        targets: usize,
        #[arg(long, default_value_t = 100)]
        permutations: usize,
    },
    Exhaustive {
        #[command(flatten)]
        t: Target,
        #[arg(long)]
        target: usize,
        /// Use a block-permuted schedule seeded by `--seed`.
        #[arg(long)]
        permuted: bool,
    },
    Breadth {
        #[command(flatten)]
        t: Target,
        #[arg(long)]
        target: usize,
        #[arg(long)]
        permuted: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MqKind {
    ClosureStyle,
    FirstYes,
    Scripted,
}

#[derive(Args)]
struct Lb {
    #[arg(long)]
    generator: String,
    #[arg(long, default_value_t = 4)]
    phases: usize,
    #[arg(long, default_value_t = 500)]
    rounds: usize,
}

#[derive(Subcommand)]
enum AdversaryCmd {
    Mq {
        #[arg(long, value_enum)]
        generator: MqKind,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, default_value_t = 512)]
        query_budget: usize,
        /// Outputs for the scripted generator.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        script: Vec<i64>,
    },
    /// Against `tails`.
    ExhaustiveLb(Lb),
    /// Against `cofinite1`.
    BreadthLb(Lb),
    ExistenceViolation {
        #[command(flatten)]
        lb: Lb,
        #[arg(long)]
        collection: String,
        /// 1-based index of the language to attack.
        #[arg(long, default_value_t = 1)]
        language: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Finder,
        #[arg(long, default_value_t = 64)]
        finder_budget: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Finder {
    Exhaustive,
    Breadth,
}

#[derive(Clone, Copy, ValueEnum)]
enum DimensionKind {
    Closure,
    Nonuniform,
    Gnf,
    Gf,
}

#[derive(Args)]
struct DimensionArgs {
    #[arg(value_enum)]
    kind: DimensionKind,
    #[arg(long)]
    collection: String,
    /// Witness size; for `nonuniform`, the largest index reported.
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 8)]
    window: i64,
    #[arg(long, default_value_t = 8)]
    rounds: usize,
}

fn collection(name: &str) -> Result<Collection> {
    Ok(build_collection(name, None)?)
}

fn schedule(permuted: bool, seed: u64) -> Schedule {
    if permuted {
        Schedule::Permuted(seed)
    } else {
        Schedule::Canonical
    }
}

fn lb_config(lb: &Lb) -> LbConfig {
    LbConfig {
        max_phases: lb.phases,
        max_rounds: lb.rounds,
        ..LbConfig::default()
    }
}

fn run(args: &RunArgs, feedback: bool) -> Result<String> {
    let mut cfg = RunConfig::load(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(h) = args.horizon {
        cfg.horizon = h;
    }
    if feedback {
        cfg.mode = Mode::Feedback;
    } else if cfg.mode == Mode::Feedback {
        bail!("config asks for feedback mode; use run-feedback");
    }
    Ok(run_transcript(&cfg)?.to_jsonl())
}

fn check(which: &CheckCmd) -> Result<String> {
    let report = match which {
        CheckCmd::Nonuniform {
            t,
            targets,
            permutations,
        } => {
            let c = collection(&t.collection)?;
            let g = build_generator(&GeneratorSpec::named(&t.generator))?;
            let targets: Vec<usize> = (1..=*targets).collect();
            let r = check_nonuniform(&c, g.as_ref(), &targets, *permutations, t.seed, t.horizon)?;
            json!({ "violations": r.violations(), "report": r })
        }
        CheckCmd::Exhaustive { t, target, permuted } => {
            let c = collection(&t.collection)?;
            let g = build_generator(&GeneratorSpec::named(&t.generator))?;
            serde_json::to_value(check_exhaustive(
                &c,
                g.as_ref(),
                *target,
                schedule(*permuted, t.seed),
                t.horizon,
            )?)?
        }
        CheckCmd::Breadth { t, target, permuted } => {
            let c = collection(&t.collection)?;
            let g = build_generator(&GeneratorSpec::named(&t.generator))?;
            serde_json::to_value(check_breadth(
                &c,
                g.as_ref(),
                *target,
                schedule(*permuted, t.seed),
                t.horizon,
            )?)?
        }
    };
    Ok(report.to_string())
}

fn adversary(which: &AdversaryCmd) -> Result<String> {
    let report = match which {
        AdversaryCmd::Mq {
            generator,
            bound,
            query_budget,
            script,
        } => {
            let g: Box<dyn MqGenerator> = match generator {
                MqKind::ClosureStyle => Box::new(ClosureStyle {
                    bound: *bound,
                    search_cap: 64,
                }),
                MqKind::FirstYes => Box::new(FirstYesProber {
                    bound: *bound,
                    search_cap: 64,
                }),
                MqKind::Scripted => Box::new(ScriptedMq {
                    bound: *bound,
                    script: script.clone(),
                }),
            };
            let r = run_mq(g.as_ref(), *query_budget)?;
            let verdict = verify_violation(&Claim::Mq {
                generator: g.as_ref(),
                report: &r,
            });
            json!({ "report": r, "verification": verdict })
        }
        AdversaryCmd::ExhaustiveLb(lb) | AdversaryCmd::BreadthLb(lb) => {
            let exhaustive = matches!(which, AdversaryCmd::ExhaustiveLb(_));
            let c = collection(if exhaustive { "tails" } else { "cofinite1" })?;
            let g = build_generator(&GeneratorSpec::named(&lb.generator))?;
            let cfg = lb_config(lb);
            let r = if exhaustive {
                exhaustive_lb_adversary(&c, g.as_ref(), &cfg)?
            } else {
                breadth_lb_adversary(&c, g.as_ref(), &cfg)?
            };
            let verdict = verify_violation(&Claim::Lb {
                collection: &c,
                generator: g.as_ref(),
                report: &r,
            });
            json!({ "report": r, "verification": verdict })
        }
        AdversaryCmd::ExistenceViolation {
            lb,
            collection: name,
            language,
            mode,
            finder_budget,
        } => {
            let c = collection(name)?;
            let g = build_generator(&GeneratorSpec::named(&lb.generator))?;
            let mode = match mode {
                Finder::Exhaustive => FinderMode::Exhaustive,
                Finder::Breadth => FinderMode::Breadth,
            };
            let r = existence_violation_adversary(&c, *language, g.as_ref(), mode, *finder_budget, &lb_config(lb))?;
            json!({ "report": r })
        }
    };
    Ok(report.to_string())
}

fn dimension(a: &DimensionArgs) -> Result<String> {
    let c = collection(&a.collection)?;
    let budget = GameBudget::new(a.rounds, a.window);
    let report = match a.kind {
        DimensionKind::Nonuniform => {
            let values = (1..=a.d)
                .map(|i| nonuniform_complexity(&c, i).map(|m| json!({ "index": i, "m": m })))
                .collect::<Result<Vec<_>, _>>()?;
            json!({ "kind": "nonuniform", "collection": c.name(), "values": values })
        }
        DimensionKind::Closure => {
            let w = closure_witness(&c, a.d, a.window, Some(a.rounds));
            serde_json::to_value(WitnessReport::new(&c, WitnessKind::Closure, a.d, w.as_ref()))?
        }
        DimensionKind::Gnf => {
            let w = gnf_witness(&c, a.d, budget);
            serde_json::to_value(WitnessReport::new(&c, WitnessKind::Gnf, a.d, w.as_ref()))?
        }
        DimensionKind::Gf => {
            let w = gf_witness(&c, a.d, budget);
            serde_json::to_value(WitnessReport::new(&c, WitnessKind::Gf, a.d, w.as_ref()))?
        }
    };
    Ok(report.to_string())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut text = match &cli.command {
        Command::Run(a) => run(a, false)?,
        Command::RunFeedback(a) => run(a, true)?,
        Command::Check { which } => check(which)?,
        Command::Adversary { which } => adversary(which)?,
        Command::Dimension(a) => dimension(a)?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

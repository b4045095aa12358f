use clap::{Args, Parser, Subcommand, ValueEnum};
use netrace::analytic::{cached_download_delay, web_download_delay};
use netrace::des::{simulate_chain, simulate_web};
use netrace::presets::{default_rach, preset, PRESET_NAMES};
use netrace::random_access::{coordinated_rounds, expected_rounds_exact, simulate_rach};
use netrace::report::{compare_races, field_plan, render_timeline, PlanInput, RenderFormat};
use netrace::scenario::{
    ArrivalConvention, BarringPolicy, RachScenario, Strategy, Switching, Validate,
};
use netrace::timeline::EventKind;
use netrace::{format_seconds, sdn_race, Exact, ScenarioFile, Timeline};
use num_traits::ToPrimitive;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "netrace",
    version,
    about = "Simulate, calculate and plan classroom networking races"
)]
struct Cli {
    /// Scenario file (JSON; one top-level key per scenario kind)
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Built-in scenario preset
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,

    /// Override the arrival convention of chain and routing scenarios
    #[arg(long, global = true, value_enum)]
    convention: Option<ConventionArg>,

    /// Write the main output document to a file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Full,
    Physical,
}

impl From<ConventionArg> for ArrivalConvention {
    fn from(v: ConventionArg) -> Self {
        match v {
            ConventionArg::Full => ArrivalConvention::Full,
            ConventionArg::Physical => ArrivalConvention::Physical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderArg {
    Text,
    Svg,
    Events,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ip,
    Sdn,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Uncoordinated,
    Coordinated,
    Barring,
}

#[derive(Subcommand)]
enum Cmd {
    /// Race message switching against packet switching on the chain
    Linear(RenderOpts),
    /// Web page download delay
    Http {
        /// Fetch cached objects from the cache instead of the server
        #[arg(long)]
        cache: bool,
        #[command(flatten)]
        render: RenderOpts,
    },
    /// Slotted random-access connection establishment
    Rach {
        #[arg(long)]
        contenders: Option<u64>,
        #[arg(long)]
        slots: Option<u64>,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Contenders admitted to the first round (barring strategy)
        #[arg(long)]
        barred_admit: Option<u64>,
        /// Admit this many barred contenders per round instead of
        /// waiting for the admitted batch to drain
        #[arg(long)]
        admit_per_round: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Also compute the exact expected rounds (small games only)
        #[arg(long)]
        exact: bool,
        /// Print the per-round trace of the first trial
        #[arg(long)]
        trace: bool,
    },
    /// Routing race: destination-based versus controller-optimized
    Sdn {
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// Sweep flow sizes 1..=F_MAX and report the break-even size
        #[arg(long, value_name = "F_MAX")]
        sweep: Option<u64>,
        #[command(flatten)]
        render: RenderOpts,
    },
    /// Produce a field plan for a class
    Plan {
        #[arg(long)]
        class_size: u64,
    },
    /// Check a scenario file against the invariants
    Validate {
        /// Scenario file (defaults to --config)
        file: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RenderOpts {
    /// Also emit the timeline as a diagram or log
    #[arg(long, value_enum)]
    render: Option<RenderArg>,
}

enum AppError {
    /// Bad invocation: exit 2.
    Usage(String),
    /// Validation or runtime failure: exit 1.
    Failure(String),
}

impl AppError {
    fn failure(err: impl std::fmt::Display) -> Self {
        AppError::Failure(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_scenarios(cli: &Cli) -> Result<Option<ScenarioFile>, AppError> {
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(AppError::failure)?;
        let mut file = ScenarioFile::parse_str(&text).map_err(AppError::failure)?;
        apply_convention(cli, &mut file);
        return Ok(Some(file));
    }
    if let Some(name) = &cli.preset {
        let mut file = preset(name).ok_or_else(|| {
            AppError::Usage(format!(
                "unknown preset `{name}`; available: {}",
                PRESET_NAMES.join(", ")
            ))
        })?;
        apply_convention(cli, &mut file);
        return Ok(Some(file));
    }
    Ok(None)
}

fn apply_convention(cli: &Cli, file: &mut ScenarioFile) {
    let Some(conv) = cli.convention else { return };
    let conv: ArrivalConvention = conv.into();
    if let Some(chain) = &mut file.chain {
        chain.convention = conv;
    }
    if let Some(sdn) = &mut file.sdn {
        if let Switching::StoreAndForward { convention } = &mut sdn.switching {
            *convention = conv;
        }
    }
}

fn require_valid<S: Validate>(sc: &S, kind: &str) -> Result<(), AppError> {
    let violations = sc.validate();
    if violations.is_empty() {
        return Ok(());
    }
    let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    Err(AppError::Failure(format!(
        "invalid {kind} scenario:\n  {}",
        list.join("\n  ")
    )))
}

/// Write the main document to --out when given, else to stdout.
fn emit(cli: &Cli, content: &str) -> Result<(), AppError> {
    match &cli.out {
        Some(path) => std::fs::write(path, content).map_err(AppError::failure),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn render_document(tl: &Timeline, arg: RenderArg) -> Result<String, AppError> {
    Ok(match arg {
        RenderArg::Text => render_timeline(tl, RenderFormat::Text).map_err(AppError::failure)?,
        RenderArg::Svg => render_timeline(tl, RenderFormat::Svg).map_err(AppError::failure)?,
        RenderArg::Events => tl.to_tsv(),
        RenderArg::Json => tl.to_json(),
    })
}

fn run(cli: Cli) -> Result<(), AppError> {
    let scenarios = load_scenarios(&cli)?;
    match &cli.cmd {
        Cmd::Linear(render) => {
            let sc = scenarios
                .as_ref()
                .and_then(|f| f.chain.clone())
                .ok_or_else(|| {
                    AppError::Usage("linear needs a chain scenario (--config or --preset)".into())
                })?;
            require_valid(&sc, "chain")?;
            let message = simulate_chain(&sc.as_message_switching());
            let packet = simulate_chain(&sc);
            let report = compare_races(&message, &packet, "message switching", "packet switching");
            print!("{}", report.to_table());
            if let Some(arg) = render.render {
                let merged = Timeline::merge_labeled(&[("message", &message), ("packet", &packet)]);
                emit(&cli, &render_document(&merged, arg)?)?;
            }
            Ok(())
        }
        Cmd::Http { cache, render } => {
            let mut sc = scenarios
                .as_ref()
                .and_then(|f| f.web.clone())
                .ok_or_else(|| {
                    AppError::Usage("http needs a web scenario (--config or --preset)".into())
                })?;
            require_valid(&sc, "web")?;
            let delay = if *cache {
                if sc.cache.is_none() {
                    return Err(AppError::Failure(
                        "--cache requires a cache in the scenario".into(),
                    ));
                }
                cached_download_delay(&sc)
            } else {
                sc.cache = None;
                web_download_delay(&sc)
            };
            let tl = simulate_web(&sc);
            let connections = tl
                .events
                .iter()
                .filter(|e| {
                    e.kind == EventKind::QueryDispatch && e.detail.starts_with("tcp-connect")
                })
                .count();
            println!("web page download: {} s", format_seconds(&delay));
            println!("connection establishments: {connections}");
            if let Some(arg) = render.render {
                emit(&cli, &render_document(&tl, arg)?)?;
            }
            Ok(())
        }
        Cmd::Rach {
            contenders,
            slots,
            strategy,
            barred_admit,
            admit_per_round,
            trials,
            seed,
            exact,
            trace,
        } => {
            let base = scenarios.as_ref().and_then(|f| f.rach.clone());
            let sc = build_rach(
                base,
                *contenders,
                *slots,
                *strategy,
                *barred_admit,
                *admit_per_round,
                *seed,
            )?;
            require_valid(&sc, "rach")?;
            run_rach(&sc, *trials, *exact, *trace)
        }
        Cmd::Sdn {
            mode,
            sweep,
            render,
        } => {
            let sc = scenarios
                .as_ref()
                .and_then(|f| f.sdn.clone())
                .ok_or_else(|| {
                    AppError::Usage("sdn needs an sdn scenario (--config or --preset)".into())
                })?;
            require_valid(&sc, "sdn")?;
            if let Some(f_max) = sweep {
                let rows = sdn_race::sweep(&sc, *f_max).map_err(AppError::failure)?;
                let mut csv = String::from("F,ip_seconds,sdn_seconds,winner\n");
                for row in &rows {
                    let winner = match row.sdn_seconds.cmp(&row.ip_seconds) {
                        std::cmp::Ordering::Less => "sdn",
                        std::cmp::Ordering::Greater => "ip",
                        std::cmp::Ordering::Equal => "tie",
                    };
                    let _ = writeln!(
                        csv,
                        "{},{},{},{winner}",
                        row.flow_size,
                        format_seconds(&row.ip_seconds),
                        format_seconds(&row.sdn_seconds),
                    );
                }
                emit(&cli, &csv)?;
                match rows.iter().find(|r| r.sdn_seconds < r.ip_seconds) {
                    Some(row) => println!("break-even flow size: {}", row.flow_size),
                    None => println!("break-even flow size: none within {f_max}"),
                }
                return Ok(());
            }
            let run = sdn_race::run_race(&sc).map_err(AppError::failure)?;
            match mode {
                ModeArg::Ip => println!(
                    "{}: {} s",
                    sdn_race::LABEL_IP,
                    format_seconds(&run.ip.completion_time)
                ),
                ModeArg::Sdn => println!(
                    "{}: {} s",
                    sdn_race::LABEL_SDN,
                    format_seconds(&run.sdn.completion_time)
                ),
                ModeArg::Both => print!("{}", run.report.to_table()),
            }
            if let Some(arg) = render.render {
                let merged = match mode {
                    ModeArg::Ip => run.ip.clone(),
                    ModeArg::Sdn => run.sdn.clone(),
                    ModeArg::Both => Timeline::merge_labeled(&[("ip", &run.ip), ("sdn", &run.sdn)]),
                };
                emit(&cli, &render_document(&merged, arg)?)?;
            }
            Ok(())
        }
        Cmd::Plan { class_size } => {
            let file = scenarios.ok_or_else(|| {
                AppError::Usage("plan needs a scenario (--config or --preset)".into())
            })?;
            let mut out = String::new();
            let mut planned = false;
            if let Some(sc) = &file.chain {
                require_valid(sc, "chain")?;
                let plan =
                    field_plan(PlanInput::Chain(sc), *class_size).map_err(AppError::failure)?;
                out.push_str(&plan.to_text());
                planned = true;
            }
            if let Some(sc) = &file.web {
                require_valid(sc, "web")?;
                let plan =
                    field_plan(PlanInput::Web(sc), *class_size).map_err(AppError::failure)?;
                out.push_str(&plan.to_text());
                planned = true;
            }
            if let Some(sc) = &file.rach {
                require_valid(sc, "rach")?;
                let plan = field_plan::<Exact>(PlanInput::Rach(sc), *class_size)
                    .map_err(AppError::failure)?;
                out.push_str(&plan.to_text());
                planned = true;
            }
            if let Some(sc) = &file.sdn {
                require_valid(sc, "sdn")?;
                let plan =
                    field_plan(PlanInput::Sdn(sc), *class_size).map_err(AppError::failure)?;
                out.push_str(&plan.to_text());
                planned = true;
            }
            if !planned {
                return Err(AppError::Failure("scenario file is empty".into()));
            }
            emit(&cli, &out)
        }
        Cmd::Validate { file } => {
            let path = file
                .clone()
                .or_else(|| cli.config.clone())
                .ok_or_else(|| AppError::Usage("validate needs a file argument".into()))?;
            let text = std::fs::read_to_string(&path).map_err(AppError::failure)?;
            let parsed = ScenarioFile::parse_str(&text).map_err(AppError::failure)?;
            let violations = parsed.validate_all();
            if violations.is_empty() {
                println!("ok");
                Ok(())
            } else {
                for v in &violations {
                    println!("{v}");
                }
                Err(AppError::Failure(format!(
                    "{} violation(s) found",
                    violations.len()
                )))
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build_rach(
    base: Option<RachScenario>,
    contenders: Option<u64>,
    slots: Option<u64>,
    strategy: Option<StrategyArg>,
    barred_admit: Option<u64>,
    admit_per_round: Option<u64>,
    seed: Option<u64>,
) -> Result<RachScenario, AppError> {
    let strategy_value = |contenders: u64| -> Result<Option<Strategy>, AppError> {
        Ok(match strategy {
            None => None,
            Some(StrategyArg::Uncoordinated) => Some(Strategy::Uncoordinated),
            Some(StrategyArg::Coordinated) => Some(Strategy::Coordinated),
            Some(StrategyArg::Barring) => {
                let admitted = barred_admit.unwrap_or_else(|| contenders.div_ceil(2));
                let policy = match admit_per_round {
                    Some(k) => BarringPolicy::AdmitPerRound { k },
                    None => BarringPolicy::BatchAfterDrain,
                };
                Some(Strategy::Barring {
                    initially_admitted: admitted,
                    policy,
                })
            }
        })
    };
    match base {
        Some(mut sc) => {
            if let Some(v) = contenders {
                sc.contenders = v;
            }
            if let Some(v) = slots {
                sc.slots = v;
            }
            if let Some(s) = strategy_value(sc.contenders)? {
                sc.strategy = s;
            }
            if let Some(v) = seed {
                sc.seed = v;
            }
            Ok(sc)
        }
        None => {
            let (Some(contenders), Some(slots)) = (contenders, slots) else {
                return Err(AppError::Usage(
                    "rach needs --contenders and --slots (or a scenario file)".into(),
                ));
            };
            let mut sc = default_rach(Strategy::Uncoordinated, seed.unwrap_or(0));
            sc.contenders = contenders;
            sc.slots = slots;
            if let Some(s) = strategy_value(contenders)? {
                sc.strategy = s;
            }
            Ok(sc)
        }
    }
}

fn run_rach(sc: &RachScenario, trials: u64, exact: bool, trace: bool) -> Result<(), AppError> {
    if matches!(sc.strategy, Strategy::Coordinated) {
        println!(
            "coordinated: {} rounds",
            coordinated_rounds(sc.contenders, sc.slots)
        );
        return Ok(());
    }
    let label = match &sc.strategy {
        Strategy::Uncoordinated => "uncoordinated".to_owned(),
        Strategy::Coordinated => unreachable!(),
        Strategy::Barring {
            initially_admitted,
            policy,
        } => match policy {
            BarringPolicy::BatchAfterDrain => {
                format!("barring (admit {initially_admitted}, batch after drain)")
            }
            BarringPolicy::AdmitPerRound { k } => {
                format!("barring (admit {initially_admitted}, +{k} per round)")
            }
        },
    };
    let result = simulate_rach(sc, trials);
    println!("strategy: {label}");
    println!(
        "contenders: {}  slots: {}  trials: {trials}  seed: {}",
        sc.contenders, sc.slots, sc.seed
    );
    if result.rounds_per_trial.is_empty() {
        println!("no trial finished within {} rounds", sc.max_rounds);
    } else {
        println!("mean rounds: {:.4}", result.mean);
        println!("std error: {:.4}", result.std_error);
        println!(
            "min/max rounds: {}/{}",
            result.rounds_per_trial.iter().min().unwrap(),
            result.rounds_per_trial.iter().max().unwrap()
        );
    }
    if result.overflowed_trials > 0 {
        println!(
            "flagged trials (hit {} rounds): {}",
            sc.max_rounds, result.overflowed_trials
        );
    }
    if exact {
        let e = expected_rounds_exact(sc.contenders, sc.slots).map_err(AppError::failure)?;
        println!(
            "exact expected rounds: {:.6}",
            e.to_f64().unwrap_or(f64::NAN)
        );
    }
    if trace {
        for (i, n) in result.connected_trace.iter().enumerate() {
            println!("round {}: {} connected", i + 1, n);
        }
    }
    Ok(())
}

use std::fs;
use std::path::Path;

use rhg_core::overhead::{
    apply_config, evaluate, log_space, optimize, sweep as run_sweep, sweep_csv, BudgetTable, CostParams,
    DistillationSchedule, Gate, OverheadError, OverheadResult, SearchBounds,
};
use rhg_core::pattern::{catalog_entry, catalog_names, catalog_source, parse_circuit};
use rhg_core::{verify as run_verify, ChainComplex, LatticeShape};

use crate::{BoundsArgs, Format, ModelArgs, OverheadArgs, SweepArgs, VerifyArgs};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<OverheadError> for Failure {
    fn from(e: OverheadError) -> Self {
        let code = if matches!(e, OverheadError::Infeasible(_)) { 1 } else { 2 };
        Self { code, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

/// Sizes the global worker pool from `RHG_THREADS` (0 or unset = automatic).
pub fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("RHG_THREADS") else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| Failure::input(format!("RHG_THREADS must be a count, got `{raw}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::input(format!("cannot size the thread pool: {e}")))?;
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn lattice_info(shape: &[usize]) -> Outcome {
    let shape = LatticeShape::new(shape[0], shape[1], shape[2]).map_err(|e| Failure::input(e.to_string()))?;
    let c = ChainComplex::build(shape);
    println!("shape {shape}");
    println!("m0={} m1={} m2={} m3={}", c.count(0), c.count(1), c.count(2), c.count(3));
    for n in 1..=3 {
        let d = c.boundary_matrix(n).expect("1..=3 are valid dimensions");
        println!("d{n} {}x{}", d.rows(), d.cols());
    }
    Ok(0)
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let mut spec = match (&args.file, &args.catalog) {
        (_, Some(name)) => catalog_entry(name).ok_or_else(|| {
            Failure::input(format!("no catalog entry `{name}` (known: {})", catalog_names().join(", ")))
        })?,
        (Some(path), None) => {
            parse_circuit(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(Failure::input("give a circuit file or --catalog")),
    };
    if let Some(n) = args.corrupt {
        spec.pattern = spec.pattern.without_measured(n).ok_or_else(|| {
            Failure::input(format!("--corrupt {n}: the pattern has {} measured cells", spec.pattern.measured_count()))
        })?;
    }
    let complex = ChainComplex::build(spec.pattern.shape());
    let report = run_verify(&complex, &spec, args.witness).map_err(|e| Failure::input(e.to_string()))?;
    match args.format {
        Format::Text => print!("{}", report.render_text(Some(&complex))),
        Format::Machine => print!("{}", report.render_machine()),
    }
    Ok(u8::from(!report.accepted()))
}

pub fn catalog_list() -> Outcome {
    for name in catalog_names() {
        let spec = catalog_entry(name).expect("listed entries parse");
        println!("{name:<16} {:<10} {} targets", spec.pattern.shape().to_string(), spec.targets.len());
    }
    Ok(0)
}

pub fn catalog_export(name: &str) -> Outcome {
    let source = catalog_source(name).ok_or_else(|| Failure::input(format!("no catalog entry `{name}`")))?;
    print!("{source}");
    Ok(0)
}

fn model(args: &ModelArgs) -> Result<CostParams, Failure> {
    let mut params = CostParams::default();
    if let Some(path) = &args.config {
        let mut scratch = BudgetTable::naive();
        apply_config(&read(path)?, &mut params, &mut scratch)?;
    }
    Ok(params)
}

fn budget_table(spec: &str, params: &mut CostParams) -> Result<BudgetTable, Failure> {
    match spec {
        "naive" => Ok(BudgetTable::naive()),
        "compact" => Ok(BudgetTable::compact()),
        path => {
            let mut table = BudgetTable::naive();
            apply_config(&read(Path::new(path))?, params, &mut table)?;
            Ok(table)
        }
    }
}

fn gate(name: &str, rebit: bool) -> Result<Gate, Failure> {
    let gate = Gate::parse(name).ok_or_else(|| {
        let known: Vec<&str> = Gate::ALL.iter().map(|g| g.name()).collect();
        Failure::input(format!("unknown gate `{name}` (known: {})", known.join(", ")))
    })?;
    match (gate, rebit) {
        (Gate::T, true) => Ok(Gate::TRebit),
        (_, true) if gate != Gate::TRebit => Err(Failure::input("--rebit applies to the T gate only")),
        _ => Ok(gate),
    }
}

fn bounds(b: BoundsArgs) -> SearchBounds {
    SearchBounds { lambda_max: b.lambda_max, d_max: b.d_max, l_max: b.l_max }
}

fn parse_schedule(text: &str) -> Result<DistillationSchedule, Failure> {
    let levels = text
        .split(',')
        .map(|pair| {
            let (l, d) = pair.trim().split_once(':').ok_or_else(|| Failure::input(format!("bad level `{pair}`, want λ:d")))?;
            let num = |s: &str| s.trim().parse::<u32>().map_err(|_| Failure::input(format!("bad level `{pair}`, want λ:d")));
            Ok((num(l)?, num(d)?))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(DistillationSchedule::new(levels)?)
}

pub fn overhead(args: &OverheadArgs) -> Outcome {
    let mut params = model(&args.model)?;
    let table = budget_table(&args.budgets, &mut params)?;
    let gate = gate(&args.gate, args.model.rebit)?;
    let result = match &args.schedule {
        Some(s) => evaluate(gate, &parse_schedule(s)?, &table, args.omega, &params)?,
        None => optimize(gate, args.omega, &table, &params, bounds(args.model.bounds))?,
    };
    if !result.overhead.is_finite() {
        return Err(Failure { code: 1, message: format!("overhead of {} overflows at this schedule", gate.name()) });
    }
    print!("{}", result.render());
    Ok(0)
}

pub fn sweep(args: &SweepArgs) -> Outcome {
    let mut params = model(&args.model)?;
    let gate = gate(&args.gate, args.model.rebit)?;
    let omegas = log_space(args.omega_min, args.omega_max, args.points)?;
    let sets: Vec<(&str, BudgetTable)> = if args.budgets == "both" {
        vec![("naive", BudgetTable::naive()), ("compact", BudgetTable::compact())]
    } else {
        vec![(args.budgets.as_str(), budget_table(&args.budgets, &mut params)?)]
    };
    let mut groups: Vec<(&str, Vec<OverheadResult>)> = Vec::new();
    for (name, table) in &sets {
        groups.push((*name, run_sweep(gate, &omegas, table, &params, bounds(args.model.bounds))?));
    }
    let csv = sweep_csv(&omegas, &groups);
    let summary: Vec<String> = groups
        .iter()
        .map(|(name, rs)| {
            let (lo, hi) = rs.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.overhead), hi.max(r.overhead)));
            format!("{name}: overhead {lo:.4e} .. {hi:.4e}")
        })
        .collect();
    let line = format!("sweep {} over {} points; {}", gate.name(), omegas.len(), summary.join("; "));
    match &args.out {
        Some(path) => {
            fs::write(path, csv).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            println!("{line}");
        }
        None => {
            print!("{csv}");
            eprintln!("{line}");
        }
    }
    Ok(0)
}

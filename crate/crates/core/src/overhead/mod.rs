//! Fault-tolerance cost model.
//!
//! A gate occupying `V` unit cells with `L` cells of defect line costs
//! `ops_per_cell · λ³ · V` operations and fails with probability
//! `ε_topo(L, λ, d)`. Magic states are distilled recursively: |A⟩ with the
//! 15-to-1 protocol and |Y⟩ with the 7-to-1 protocol, each level running on
//! the lattice scale of the level below.

mod config;
mod optimize;

use std::fmt;

use thiserror::Error;

pub use config::{apply_config, parse_config};
pub use optimize::{csv_header, evaluate, log_space, optimize, sweep, sweep_csv, Gate, Optimum, SearchBounds};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OverheadError {
    #[error("invalid parameter: {0}")]
    Domain(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
}

/// Unit-cell volume and Z-line length of a gate layout.
#[derive(Debug, Clone, PartialEq)]
pub struct GateBudget {
    pub name: String,
    pub volume: f64,
    pub length: f64,
}

impl GateBudget {
    pub fn new(name: impl Into<String>, volume: f64, length: f64) -> Result<Self, OverheadError> {
        let name = name.into();
        if !(volume >= 1.0 && length >= 1.0 && volume.is_finite() && length.is_finite()) {
            return Err(OverheadError::Domain(format!("budget {name}: V and L must be finite and at least 1")));
        }
        Ok(Self { name, volume, length })
    }

    fn fixed(name: &str, volume: f64, length: f64) -> Self {
        Self { name: name.to_string(), volume, length }
    }
}

/// Budgets of the two distillation circuits.
#[derive(Debug, Clone, PartialEq)]
pub struct DistillationBudgets {
    pub a: GateBudget,
    pub y: GateBudget,
}

impl DistillationBudgets {
    #[must_use]
    pub fn naive() -> Self {
        Self { a: GateBudget::fixed("A", 336.0, 362.0), y: GateBudget::fixed("Y", 120.0, 120.0) }
    }

    #[must_use]
    pub fn compact() -> Self {
        Self { a: GateBudget::fixed("A", 192.0, 288.0), y: GateBudget::fixed("Y", 70.0, 105.0) }
    }
}

/// Every budget the model consults.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetTable {
    pub cnot: GateBudget,
    pub h: GateBudget,
    /// S in the rebit encoding; needs no distillation.
    pub s: GateBudget,
    pub t: GateBudget,
    pub t_rebit: GateBudget,
    /// Injection circuit of the magic-state S baseline. This is an assumed
    /// layout (the T circuit's), not a measured one.
    pub s_magic: GateBudget,
    pub distill: DistillationBudgets,
}

impl BudgetTable {
    #[must_use]
    pub fn with_distillation(distill: DistillationBudgets) -> Self {
        Self {
            cnot: GateBudget::fixed("CNOT", 12.0, 22.0),
            h: GateBudget::fixed("H", 6.0, 6.0),
            s: GateBudget::fixed("S", 48.0, 48.0),
            t: GateBudget::fixed("T", 2.0, 3.0),
            t_rebit: GateBudget::fixed("T_RE", 89.0, 89.0),
            s_magic: GateBudget::fixed("S_MAGIC", 2.0, 3.0),
            distill,
        }
    }

    #[must_use]
    pub fn naive() -> Self {
        Self::with_distillation(DistillationBudgets::naive())
    }

    #[must_use]
    pub fn compact() -> Self {
        Self::with_distillation(DistillationBudgets::compact())
    }
}

/// Which Z-line length enters the topological error of an |A⟩ level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AErrorLength {
    /// `ε_topo(L_Y, ·)`, the form used with the |Y⟩-consuming sub-circuit.
    LY,
    /// `ε_topo(L_A, ·)`, matching the cost denominator.
    LA,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostParams {
    pub kappa: f64,
    pub ops_per_cell: f64,
    pub eps0_a: f64,
    pub eps0_y: f64,
    /// Unit cells of a raw state injection (level-0 cost).
    pub injection_volume: f64,
    /// Coefficient of `λ³ V_T` in the plain T overhead.
    pub t_plain_coeff: f64,
    pub a_error_length: AErrorLength,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            kappa: 0.93,
            ops_per_cell: 24.0,
            eps0_a: 0.0134,
            eps0_y: 0.0134,
            injection_volume: 1.0,
            t_plain_coeff: 36.0,
            a_error_length: AErrorLength::LY,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<(), OverheadError> {
        if self.kappa.is_nan() || self.kappa <= 0.0 {
            return Err(OverheadError::Domain(format!("kappa must be positive, got {}", self.kappa)));
        }
        for (name, e) in [("eps0_A", self.eps0_a), ("eps0_Y", self.eps0_y)] {
            if !(0.0..1.0).contains(&e) {
                return Err(OverheadError::Domain(format!("{name} must lie in [0, 1), got {e}")));
            }
        }
        if !(self.ops_per_cell > 0.0 && self.injection_volume > 0.0 && self.t_plain_coeff > 0.0) {
            return Err(OverheadError::Domain("ops_per_cell, injection_volume and t_plain_coeff must be positive".into()));
        }
        Ok(())
    }

    /// Human-readable list of modelling assumptions in force.
    #[must_use]
    pub fn assumptions(&self) -> Vec<String> {
        let mut out = vec![
            format!("kappa = {}", self.kappa),
            format!("level-0 states cost {} · λ0³ · {} (raw injection)", self.ops_per_cell, self.injection_volume),
            format!("eps0_A = {}, eps0_Y = {}", self.eps0_a, self.eps0_y),
        ];
        if self.eps0_y == self.eps0_a {
            out.push("eps0_Y is assumed equal to eps0_A".into());
        }
        out.push(match self.a_error_length {
            AErrorLength::LY => "A-level error uses eps_topo(L_Y); its cost denominator uses eps_topo(L_A)".into(),
            AErrorLength::LA => "A-level error and cost denominator both use eps_topo(L_A)".into(),
        });
        out.push(format!("plain T circuit term uses coefficient {} on λ³ V_T", self.t_plain_coeff));
        out
    }
}

/// Probability that a gate of defect length `length` suffers a logical error.
///
/// `λ · L · [exp(−4κ(d+1)) + 2(d+1) · exp(−κ(λ−d))]`
pub fn epsilon_topo(length: f64, lambda: u32, d: u32, kappa: f64) -> Result<f64, OverheadError> {
    if d < 1 || lambda <= d {
        return Err(OverheadError::Domain(format!("need λ > d ≥ 1, got λ = {lambda}, d = {d}")));
    }
    if length.is_nan() || length < 1.0 {
        return Err(OverheadError::Domain(format!("need L ≥ 1, got {length}")));
    }
    if kappa.is_nan() || kappa <= 0.0 {
        return Err(OverheadError::Domain(format!("kappa must be positive, got {kappa}")));
    }
    Ok(f64::from(lambda) * length * suppression(lambda, d, kappa))
}

/// The bracket of [`epsilon_topo`]; the only place `d` enters the model.
pub(crate) fn suppression(lambda: u32, d: u32, kappa: f64) -> f64 {
    let d1 = f64::from(d) + 1.0;
    (-4.0 * kappa * d1).exp() + 2.0 * d1 * (-kappa * f64::from(lambda - d)).exp()
}

/// Expected number of attempts of an operation that fails with probability `eps`.
pub fn mean_retries(eps: f64) -> Result<f64, OverheadError> {
    if !(0.0..1.0).contains(&eps) {
        return Err(OverheadError::Domain(format!("failure probability must lie in [0, 1), got {eps}")));
    }
    Ok(1.0 / (1.0 - eps))
}

/// Per-level lattice parameters `(λ_l, d_l)` for `l = 0..=l_max`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistillationSchedule {
    levels: Vec<(u32, u32)>,
}

impl DistillationSchedule {
    pub fn new(levels: Vec<(u32, u32)>) -> Result<Self, OverheadError> {
        if levels.is_empty() {
            return Err(OverheadError::Domain("a schedule needs at least one level".into()));
        }
        if let Some(&(l, d)) = levels.iter().find(|&&(l, d)| d < 1 || l <= d) {
            return Err(OverheadError::Domain(format!("need λ > d ≥ 1 at every level, got λ = {l}, d = {d}")));
        }
        Ok(Self { levels })
    }

    #[must_use]
    pub fn single(lambda: u32, d: u32) -> Option<Self> {
        Self::new(vec![(lambda, d)]).ok()
    }

    #[must_use]
    pub fn l_max(&self) -> usize {
        self.levels.len() - 1
    }

    #[must_use]
    pub fn levels(&self) -> &[(u32, u32)] {
        &self.levels
    }

    #[must_use]
    pub fn top(&self) -> (u32, u32) {
        *self.levels.last().expect("schedules are non-empty")
    }

    #[must_use]
    pub fn lambdas(&self) -> Vec<u32> {
        self.levels.iter().map(|p| p.0).collect()
    }

    #[must_use]
    pub fn ds(&self) -> Vec<u32> {
        self.levels.iter().map(|p| p.1).collect()
    }
}

impl fmt::Display for DistillationSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(|(l, d)| format!("{l}:{d}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Error rates and expected costs of both magic-state species at one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelState {
    pub eps_a: f64,
    pub eps_y: f64,
    pub cost_a: f64,
    pub cost_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    A,
    Y,
}

pub(crate) fn initial_state(lambda: u32, params: &CostParams) -> LevelState {
    let inject = params.ops_per_cell * f64::from(lambda).powi(3) * params.injection_volume;
    LevelState { eps_a: params.eps0_a, eps_y: params.eps0_y, cost_a: inject, cost_y: inject }
}

/// One distillation round run at lattice parameters `(λ, d)` of the level below.
/// The |A⟩ round is `None` when its success probability is not positive; the
/// |Y⟩ round alone may still be usable, so it is reported separately.
pub(crate) fn next_state(
    prev: &LevelState,
    lambda: u32,
    supp: f64,
    budgets: &DistillationBudgets,
    params: &CostParams,
) -> (Option<f64>, Option<f64>, f64, f64) {
    let lam = f64::from(lambda);
    let cells = params.ops_per_cell * lam * lam * lam;
    let topo = |len: f64| lam * len * supp;
    let (t_y, t_a) = (topo(budgets.y.length), topo(budgets.a.length));
    let eps_y = 7.0 * prev.eps_y.powi(3) + t_y;
    let den_y = 1.0 - 7.0 * prev.eps_y - t_y;
    let cost_y = (den_y > 0.0).then(|| (7.0 * prev.cost_y + cells * budgets.y.volume) / den_y);
    let eps_a = 35.0 * prev.eps_a.powi(3)
        + match params.a_error_length {
            AErrorLength::LY => t_y,
            AErrorLength::LA => t_a,
        };
    let den_a = 1.0 - 15.0 * prev.eps_a - t_a;
    let cost_a = (den_a > 0.0)
        .then(|| (15.0 * prev.cost_a + 1705.0 / 512.0 * prev.cost_y + cells * budgets.a.volume) / den_a);
    (cost_a, cost_y, eps_a, eps_y)
}

/// Runs the recursion for both species. Entry `l` holds the states available
/// at level `l`; level `l` is produced with the parameters of level `l − 1`.
pub fn distill_levels(
    schedule: &DistillationSchedule,
    budgets: &DistillationBudgets,
    params: &CostParams,
) -> Result<Vec<LevelState>, OverheadError> {
    params.validate()?;
    let levels = schedule.levels();
    let mut out = vec![initial_state(levels[0].0, params)];
    for (l, &(lambda, d)) in levels[..levels.len() - 1].iter().enumerate() {
        let prev = out[l];
        let (cost_a, cost_y, eps_a, eps_y) = next_state(&prev, lambda, suppression(lambda, d, params.kappa), budgets, params);
        let (Some(cost_a), Some(cost_y)) = (cost_a, cost_y) else {
            return Err(OverheadError::Infeasible(format!(
                "distillation round {} at λ = {lambda}, d = {d} fails with probability ≥ 1",
                l + 1
            )));
        };
        out.push(LevelState { eps_a, eps_y, cost_a, cost_y });
    }
    Ok(out)
}

/// Per-level `(ε_l, O_l)` of one species.
pub fn distill(
    species: Species,
    schedule: &DistillationSchedule,
    budgets: &DistillationBudgets,
    params: &CostParams,
) -> Result<Vec<(f64, f64)>, OverheadError> {
    if species == Species::Y {
        return distill_y(schedule, budgets, params);
    }
    Ok(distill_levels(schedule, budgets, params)?.into_iter().map(|s| (s.eps_a, s.cost_a)).collect())
}

fn distill_y(
    schedule: &DistillationSchedule,
    budgets: &DistillationBudgets,
    params: &CostParams,
) -> Result<Vec<(f64, f64)>, OverheadError> {
    params.validate()?;
    let levels = schedule.levels();
    let s0 = initial_state(levels[0].0, params);
    let mut out = vec![(s0.eps_y, s0.cost_y)];
    let mut prev = s0;
    for (l, &(lambda, d)) in levels[..levels.len() - 1].iter().enumerate() {
        let (_, cost_y, eps_a, eps_y) = next_state(&prev, lambda, suppression(lambda, d, params.kappa), budgets, params);
        let cost_y = cost_y.ok_or_else(|| {
            OverheadError::Infeasible(format!("|Y> round {} at λ = {lambda}, d = {d} fails with probability ≥ 1", l + 1))
        })?;
        prev = LevelState { eps_a, eps_y, cost_a: f64::NAN, cost_y };
        out.push((eps_y, cost_y));
    }
    Ok(out)
}

/// A priced gate with its cost breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct OverheadResult {
    pub gate: String,
    pub omega: f64,
    pub schedule: DistillationSchedule,
    pub eps_a: Option<f64>,
    pub eps_y: Option<f64>,
    pub eps_topo: f64,
    /// Operations per attempt before the retry factor.
    pub prefactor: f64,
    /// Argument of the retry factor `exp(exponent)`.
    pub exponent: f64,
    pub overhead: f64,
    pub breakdown: Vec<(String, f64)>,
    pub assumptions: Vec<String>,
}

impl OverheadResult {
    #[must_use]
    pub fn render(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "gate       {}", self.gate);
        let _ = writeln!(out, "omega      {:e}", self.omega);
        let _ = writeln!(out, "l_max      {}", self.schedule.l_max());
        let _ = writeln!(out, "schedule   {} (λ:d per level)", self.schedule);
        let _ = writeln!(out, "overhead   {:.6e}", self.overhead);
        for (k, v) in &self.breakdown {
            let _ = writeln!(out, "  {k:<28} {v:.6e}");
        }
        out.push_str("assumptions\n");
        for a in &self.assumptions {
            let _ = writeln!(out, "  - {a}");
        }
        out
    }
}

fn check_omega(omega: f64) -> Result<(), OverheadError> {
    if !(omega >= 1.0 && omega.is_finite()) {
        return Err(OverheadError::Domain(format!("omega must be finite and at least 1, got {omega}")));
    }
    Ok(())
}

/// `ops_per_cell · λ³ · V · exp(ε_topo · Ω)` for a gate without magic states.
pub fn overhead_clifford(
    budget: &GateBudget,
    lambda: u32,
    d: u32,
    omega: f64,
    params: &CostParams,
) -> Result<OverheadResult, OverheadError> {
    check_omega(omega)?;
    params.validate()?;
    let eps = epsilon_topo(budget.length, lambda, d, params.kappa)?;
    let prefactor = params.ops_per_cell * f64::from(lambda).powi(3) * budget.volume;
    let exponent = eps * omega;
    Ok(OverheadResult {
        gate: budget.name.clone(),
        omega,
        schedule: DistillationSchedule::new(vec![(lambda, d)])?,
        eps_a: None,
        eps_y: None,
        eps_topo: eps,
        prefactor,
        exponent,
        overhead: prefactor * exponent.exp(),
        breakdown: vec![
            ("cells x ops (24 λ³ V)".into(), prefactor),
            ("eps_topo".into(), eps),
            ("retry factor".into(), exponent.exp()),
        ],
        assumptions: vec![format!("kappa = {}", params.kappa)],
    })
}

/// The T gate fed by distilled states at the schedule's top level.
///
/// Plain: `(O^A + ½O^Y + c·λ³V_T) · exp[(ε^A + ε^Y + ε_topo(L_T))Ω]`.
/// Rebit: `(2O^A + 1.5O^Y + 24λ³V_{T,RE}) · exp[(2ε^A + 1.5ε^Y + ε_topo(L_{T,RE}))Ω]`.
pub fn overhead_t(
    schedule: &DistillationSchedule,
    budgets: &BudgetTable,
    omega: f64,
    params: &CostParams,
    rebit: bool,
) -> Result<OverheadResult, OverheadError> {
    check_omega(omega)?;
    let top = *distill_levels(schedule, &budgets.distill, params)?.last().expect("non-empty");
    let (lambda, d) = schedule.top();
    let (budget, na, ny, coeff) = if rebit {
        (&budgets.t_rebit, 2.0, 1.5, params.ops_per_cell)
    } else {
        (&budgets.t, 1.0, 0.5, params.t_plain_coeff)
    };
    let eps = epsilon_topo(budget.length, lambda, d, params.kappa)?;
    let circuit = coeff * f64::from(lambda).powi(3) * budget.volume;
    let prefactor = na * top.cost_a + ny * top.cost_y + circuit;
    let exponent = (na * top.eps_a + ny * top.eps_y + eps) * omega;
    Ok(OverheadResult {
        gate: budget.name.clone(),
        omega,
        schedule: schedule.clone(),
        eps_a: Some(top.eps_a),
        eps_y: Some(top.eps_y),
        eps_topo: eps,
        prefactor,
        exponent,
        overhead: prefactor * exponent.exp(),
        breakdown: vec![
            (format!("{na} x O^A"), na * top.cost_a),
            (format!("{ny} x O^Y"), ny * top.cost_y),
            ("T circuit cells x ops".into(), circuit),
            ("eps_A (top level)".into(), top.eps_a),
            ("eps_Y (top level)".into(), top.eps_y),
            ("eps_topo (T circuit)".into(), eps),
            ("retry factor".into(), exponent.exp()),
        ],
        assumptions: params.assumptions(),
    })
}

/// Magic-state S baseline: one distilled |Y⟩ consumed by an injection circuit
/// whose budget is an assumption (the T circuit's layout).
pub fn overhead_s_magic(
    schedule: &DistillationSchedule,
    budgets: &BudgetTable,
    omega: f64,
    params: &CostParams,
) -> Result<OverheadResult, OverheadError> {
    check_omega(omega)?;
    let (eps_y, cost_y) = *distill(Species::Y, schedule, &budgets.distill, params)?.last().expect("non-empty");
    let (lambda, d) = schedule.top();
    let budget = &budgets.s_magic;
    let eps = epsilon_topo(budget.length, lambda, d, params.kappa)?;
    let circuit = params.ops_per_cell * f64::from(lambda).powi(3) * budget.volume;
    let prefactor = cost_y + circuit;
    let exponent = (eps_y + eps) * omega;
    let mut assumptions = params.assumptions();
    assumptions.push(format!(
        "EXTRAPOLATION: injection circuit budget V = {}, L = {} is assumed, not derived",
        budget.volume, budget.length
    ));
    Ok(OverheadResult {
        gate: budget.name.clone(),
        omega,
        schedule: schedule.clone(),
        eps_a: None,
        eps_y: Some(eps_y),
        eps_topo: eps,
        prefactor,
        exponent,
        overhead: prefactor * exponent.exp(),
        breakdown: vec![
            ("O^Y".into(), cost_y),
            ("injection circuit cells x ops".into(), circuit),
            ("eps_Y (top level)".into(), eps_y),
            ("eps_topo (injection)".into(), eps),
            ("retry factor".into(), exponent.exp()),
        ],
        assumptions,
    })
}

//! Minimum-overhead parameter search.
//!
//! `d` enters the model only through [`suppression`], and every cost is
//! nondecreasing in it, so each `λ` is paired with the `d` that minimises it.
//! The remaining search over `λ` vectors is a depth-first walk over
//! distillation prefixes, cut off once the magic-state cost alone reaches the
//! best total found.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use super::{
    initial_state, next_state, overhead_clifford, overhead_s_magic, overhead_t, suppression, BudgetTable, CostParams,
    DistillationSchedule, GateBudget, LevelState, OverheadError, OverheadResult,
};

/// Gates the model can price.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Cnot,
    H,
    /// S in the rebit encoding.
    S,
    T,
    /// T in the rebit encoding.
    TRebit,
    /// S by magic-state injection of a distilled |Y⟩.
    SMagic,
}

impl Gate {
    pub const ALL: [Gate; 6] = [Gate::Cnot, Gate::H, Gate::S, Gate::T, Gate::TRebit, Gate::SMagic];

    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Gate::Cnot => "cnot",
            Gate::H => "h",
            Gate::S => "s",
            Gate::T => "t",
            Gate::TRebit => "t-rebit",
            Gate::SMagic => "s-magic",
        }
    }

    #[must_use]
    pub fn parse(name: &str) -> Option<Gate> {
        Self::ALL.into_iter().find(|g| g.name().eq_ignore_ascii_case(name))
    }

    #[must_use]
    pub fn needs_distillation(self) -> bool {
        matches!(self, Gate::T | Gate::TRebit | Gate::SMagic)
    }

    fn clifford_budget(self, budgets: &BudgetTable) -> Option<&GateBudget> {
        match self {
            Gate::Cnot => Some(&budgets.cnot),
            Gate::H => Some(&budgets.h),
            Gate::S => Some(&budgets.s),
            _ => None,
        }
    }
}

/// Prices `gate` under a fixed schedule. Clifford gates use the top level only.
pub fn evaluate(
    gate: Gate,
    schedule: &DistillationSchedule,
    budgets: &BudgetTable,
    omega: f64,
    params: &CostParams,
) -> Result<OverheadResult, OverheadError> {
    match gate {
        Gate::T => overhead_t(schedule, budgets, omega, params, false),
        Gate::TRebit => overhead_t(schedule, budgets, omega, params, true),
        Gate::SMagic => overhead_s_magic(schedule, budgets, omega, params),
        _ => {
            let (lambda, d) = schedule.top();
            let budget = gate.clifford_budget(budgets).expect("clifford gate");
            overhead_clifford(budget, lambda, d, omega, params)
        }
    }
}

/// Inclusive upper limits of the search grid. `λ` starts at 2 and `d` at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub lambda_max: u32,
    pub d_max: u32,
    pub l_max: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self { lambda_max: 60, d_max: 15, l_max: 3 }
    }
}

/// Optimal schedule and its priced result.
pub type Optimum = OverheadResult;

/// A candidate in the deterministic total order used to break ties:
/// overhead, then `l_max`, then `Σλ`, then the `λ` and `d` vectors.
#[derive(Debug, Clone)]
struct Candidate {
    overhead: f64,
    levels: Vec<(u32, u32)>,
}

impl Candidate {
    fn key_cmp(&self, other: &Self) -> Ordering {
        let sum = |c: &Self| c.levels.iter().map(|p| u64::from(p.0)).sum::<u64>();
        self.overhead
            .total_cmp(&other.overhead)
            .then(self.levels.len().cmp(&other.levels.len()))
            .then(sum(self).cmp(&sum(other)))
            .then_with(|| self.levels.cmp(&other.levels))
    }
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.key_cmp(&a) == Ordering::Less { b } else { a }),
        (a, b) => a.or(b),
    }
}

struct Search<'a> {
    budgets: &'a BudgetTable,
    params: &'a CostParams,
    omega: f64,
    /// `(λ, d*, suppression(λ, d*))` for every admissible `λ`.
    grid: Vec<(u32, u32, f64)>,
    l_cap: usize,
    /// Weights of `O^A` and `O^Y` in the gate cost.
    na: f64,
    ny: f64,
    circuit: &'a GateBudget,
    coeff: f64,
    needs_a: bool,
    /// Smallest overhead seen by any worker, as `f64` bits.
    bound: &'a AtomicU64,
}

impl Search<'_> {
    fn bound(&self) -> f64 {
        f64::from_bits(self.bound.load(AtomicOrdering::Relaxed))
    }

    fn offer(&self, x: f64) {
        // Non-negative floats order like their bit patterns.
        self.bound.fetch_min(x.to_bits(), AtomicOrdering::Relaxed);
    }

    fn top_cost(&self, s: &LevelState, lambda: u32, supp: f64) -> f64 {
        let lam = f64::from(lambda);
        let pre = self.na * s.cost_a + self.ny * s.cost_y + self.coeff * lam * lam * lam * self.circuit.volume;
        let eps = self.na * s.eps_a + self.ny * s.eps_y + lam * self.circuit.length * supp;
        pre * (eps * self.omega).exp()
    }

    fn walk(&self, prefix: &mut Vec<(u32, u32)>, state: &LevelState) -> Option<Candidate> {
        // Deeper levels cost at least as much magic-state input as this one.
        if self.na * state.cost_a + self.ny * state.cost_y >= self.bound() {
            return None;
        }
        let mut best: Option<Candidate> = None;
        for &(lambda, d, supp) in &self.grid {
            let x = self.top_cost(state, lambda, supp);
            if x.is_finite() && x <= self.bound() {
                self.offer(x);
                let mut levels = prefix.clone();
                levels.push((lambda, d));
                best = better(best, Some(Candidate { overhead: x, levels }));
            }
        }
        if prefix.len() < self.l_cap {
            for &(lambda, d, supp) in &self.grid {
                let (cost_a, cost_y, eps_a, eps_y) = next_state(state, lambda, supp, &self.budgets.distill, self.params);
                let Some(cost_y) = cost_y else { continue };
                let cost_a = match cost_a {
                    Some(c) => c,
                    None if self.needs_a => continue,
                    None => 0.0,
                };
                let next = LevelState { eps_a, eps_y, cost_a, cost_y };
                prefix.push((lambda, d));
                best = better(best, self.walk(prefix, &next));
                prefix.pop();
            }
        }
        best
    }
}

fn best_d(lambda: u32, d_max: u32, kappa: f64) -> (u32, f64) {
    let mut best = (1, suppression(lambda, 1, kappa));
    for d in 2..=d_max.min(lambda - 1) {
        let s = suppression(lambda, d, kappa);
        if s < best.1 {
            best = (d, s);
        }
    }
    best
}

/// Finds the schedule of minimum overhead for `gate` at circuit size `omega`.
///
/// Ties are broken towards smaller `l_max`, then smaller `Σλ`, then
/// lexicographically smaller `λ` and `d` vectors, so the result does not
/// depend on the thread count.
pub fn optimize(
    gate: Gate,
    omega: f64,
    budgets: &BudgetTable,
    params: &CostParams,
    bounds: SearchBounds,
) -> Result<Optimum, OverheadError> {
    params.validate()?;
    if !(omega >= 1.0 && omega.is_finite()) {
        return Err(OverheadError::Domain(format!("omega must be finite and at least 1, got {omega}")));
    }
    if bounds.lambda_max < 2 || bounds.d_max < 1 {
        return Err(OverheadError::Domain("search bounds need lambda_max ≥ 2 and d_max ≥ 1".into()));
    }
    let grid: Vec<(u32, u32, f64)> = (2..=bounds.lambda_max)
        .map(|lambda| {
            let (d, s) = best_d(lambda, bounds.d_max, params.kappa);
            (lambda, d, s)
        })
        .collect();

    let best = if let Some(budget) = gate.clifford_budget(budgets) {
        grid.iter()
            .map(|&(lambda, d, supp)| {
                let lam = f64::from(lambda);
                let x = params.ops_per_cell * lam * lam * lam * budget.volume
                    * (lam * budget.length * supp * omega).exp();
                Candidate { overhead: x, levels: vec![(lambda, d)] }
            })
            .filter(|c| c.overhead.is_finite())
            .fold(None, |acc, c| better(acc, Some(c)))
    } else {
        let (na, ny, circuit, coeff) = match gate {
            Gate::T => (1.0, 0.5, &budgets.t, params.t_plain_coeff),
            Gate::TRebit => (2.0, 1.5, &budgets.t_rebit, params.ops_per_cell),
            _ => (0.0, 1.0, &budgets.s_magic, params.ops_per_cell),
        };
        let bound = AtomicU64::new(f64::INFINITY.to_bits());
        let search = Search {
            budgets,
            params,
            omega,
            grid: grid.clone(),
            l_cap: bounds.l_max,
            na,
            ny,
            circuit,
            coeff,
            needs_a: na > 0.0,
            bound: &bound,
        };
        // Each root is a choice of λ0, which fixes the level-0 state.
        grid.par_iter()
            .map(|&(lambda, d, supp)| {
                let s0 = initial_state(lambda, params);
                let mut best: Option<Candidate> = None;
                let x = search.top_cost(&s0, lambda, supp);
                if x.is_finite() {
                    search.offer(x);
                    best = Some(Candidate { overhead: x, levels: vec![(lambda, d)] });
                }
                if bounds.l_max > 0 {
                    let (cost_a, cost_y, eps_a, eps_y) = next_state(&s0, lambda, supp, &budgets.distill, params);
                    let cost_a = cost_a.or(if search.needs_a { None } else { Some(0.0) });
                    if let (Some(cost_a), Some(cost_y)) = (cost_a, cost_y) {
                        let mut prefix = vec![(lambda, d)];
                        best = better(best, search.walk(&mut prefix, &LevelState { eps_a, eps_y, cost_a, cost_y }));
                    }
                }
                best
            })
            .reduce(|| None, better)
    };

    let best = best.ok_or_else(|| {
        OverheadError::Infeasible(format!("no schedule within the search bounds prices {} at omega = {omega}", gate.name()))
    })?;
    evaluate(gate, &DistillationSchedule::new(best.levels)?, budgets, omega, params)
}

/// `points` values spaced evenly in `log Ω` from `min` to `max` inclusive.
pub fn log_space(min: f64, max: f64, points: usize) -> Result<Vec<f64>, OverheadError> {
    if !(min >= 1.0 && max >= min && max.is_finite()) || points == 0 {
        return Err(OverheadError::Domain(format!("need 1 ≤ min ≤ max and points ≥ 1, got {min}, {max}, {points}")));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let (a, b) = (min.ln(), max.ln());
    let step = (b - a) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => min,
            _ if i + 1 == points => max,
            _ => (a + step * i as f64).exp(),
        })
        .collect())
}

/// Optimal results at each `omega`.
pub fn sweep(
    gate: Gate,
    omegas: &[f64],
    budgets: &BudgetTable,
    params: &CostParams,
    bounds: SearchBounds,
) -> Result<Vec<OverheadResult>, OverheadError> {
    omegas.iter().map(|&w| optimize(gate, w, budgets, params, bounds)).collect()
}

const COLUMNS: [&str; 6] = ["overhead", "l_max", "lambdas", "ds", "eps_A", "eps_Y"];

/// CSV header; with more than one budget set every column group is prefixed
/// with `<set>.`.
#[must_use]
pub fn csv_header(groups: &[&str]) -> String {
    let mut out = String::from("omega");
    for g in groups {
        for c in COLUMNS {
            out.push(',');
            if groups.len() > 1 {
                let _ = write!(out, "{g}.");
            }
            out.push_str(c);
        }
    }
    out
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(";")
}

/// Sweep results rendered as CSV, one row per `omega`. Each group holds one
/// result per entry of `omegas`.
///
/// # Panics
/// Panics if a group's length differs from `omegas.len()`.
#[must_use]
pub fn sweep_csv(omegas: &[f64], groups: &[(&str, Vec<OverheadResult>)]) -> String {
    let names: Vec<&str> = groups.iter().map(|g| g.0).collect();
    let mut out = csv_header(&names);
    out.push('\n');
    for (i, w) in omegas.iter().enumerate() {
        let _ = write!(out, "{w}");
        for (_, results) in groups {
            assert_eq!(results.len(), omegas.len(), "one result per omega");
            let r = &results[i];
            let opt = |x: Option<f64>| x.map_or_else(String::new, |v| v.to_string());
            let _ = write!(
                out,
                ",{},{},{},{},{},{}",
                r.overhead,
                r.schedule.l_max(),
                join(&r.schedule.lambdas()),
                join(&r.schedule.ds()),
                opt(r.eps_a),
                opt(r.eps_y)
            );
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SearchBounds {
        SearchBounds { lambda_max: 24, d_max: 8, l_max: 2 }
    }

    #[test]
    fn gate_names_round_trip() {
        for g in Gate::ALL {
            assert_eq!(Gate::parse(g.name()), Some(g));
        }
        assert_eq!(Gate::parse("CNOT"), Some(Gate::Cnot));
        assert_eq!(Gate::parse("x"), None);
    }

    #[test]
    fn clifford_matches_grid_scan() {
        let p = CostParams::default();
        let b = BudgetTable::naive();
        let opt = optimize(Gate::Cnot, 1e6, &b, &p, small()).unwrap();
        for lambda in 2..=24 {
            for d in 1..lambda.min(9) {
                let r = overhead_clifford(&b.cnot, lambda, d, 1e6, &p).unwrap();
                assert!(opt.overhead <= r.overhead);
            }
        }
    }

    #[test]
    fn t_matches_exhaustive_search() {
        let p = CostParams::default();
        let b = BudgetTable::compact();
        let bounds = SearchBounds { lambda_max: 14, d_max: 6, l_max: 1 };
        let opt = optimize(Gate::T, 1e4, &b, &p, bounds).unwrap();
        let mut best = f64::INFINITY;
        for l0 in 2..=14u32 {
            for d0 in 1..l0.min(7) {
                for top in [None].into_iter().chain((2..=14u32).flat_map(|l| (1..l.min(7)).map(move |d| Some((l, d))))) {
                    let mut levels = vec![(l0, d0)];
                    levels.extend(top);
                    let s = DistillationSchedule::new(levels).unwrap();
                    if let Ok(r) = overhead_t(&s, &b, 1e4, &p, false) {
                        best = best.min(r.overhead);
                    }
                }
            }
        }
        assert!((opt.overhead - best).abs() <= 1e-12 * best, "{} vs {best}", opt.overhead);
    }

    #[test]
    fn no_errors_gives_smallest_lattice() {
        let p = CostParams { kappa: f64::INFINITY, eps0_a: 0.0, eps0_y: 0.0, ..CostParams::default() };
        let r = optimize(Gate::T, 1e9, &BudgetTable::naive(), &p, small()).unwrap();
        assert_eq!(r.schedule.levels(), &[(2, 1)]);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let p = CostParams::default();
        let b = BudgetTable::naive();
        let run = |n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| optimize(Gate::TRebit, 1e4, &b, &p, small()).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn log_space_endpoints() {
        let v = log_space(10.0, 1e4, 4).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], 10.0);
        assert_eq!(v[3], 1e4);
        assert!((v[1] - 100.0).abs() < 1e-9);
        assert!(log_space(0.5, 10.0, 3).is_err());
    }

    #[test]
    fn csv_groups_are_prefixed() {
        assert_eq!(csv_header(&["naive"]), "omega,overhead,l_max,lambdas,ds,eps_A,eps_Y");
        assert!(csv_header(&["naive", "compact"]).contains(",compact.eps_Y"));
        let p = CostParams::default();
        let (n, c) = (BudgetTable::naive(), BudgetTable::compact());
        let omegas = [10.0, 100.0];
        let groups = [
            ("naive", sweep(Gate::H, &omegas, &n, &p, small()).unwrap()),
            ("compact", sweep(Gate::H, &omegas, &c, &p, small()).unwrap()),
        ];
        let text = sweep_csv(&omegas, &groups);
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().nth(1).unwrap().split(',').count(), 13);
    }
}

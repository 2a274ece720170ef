//! `key = value` overrides for cost parameters and gate budgets.
//!
//! Blank lines and `#` comments are ignored. Budget keys are `V_<GATE>` and
//! `L_<GATE>` for the gates `CNOT`, `H`, `S`, `T`, `T_RE`, `S_MAGIC`, `A` and `Y`.

use super::{AErrorLength, BudgetTable, CostParams, GateBudget, OverheadError};

/// Parses a config file into `(key, value, line)` triples without applying it.
pub fn parse_config(text: &str) -> Result<Vec<(String, String, usize)>, OverheadError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| OverheadError::Config {
            line: n + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(OverheadError::Config { line: n + 1, message: "empty key or value".into() });
        }
        out.push((k.to_string(), v.to_string(), n + 1));
    }
    Ok(out)
}

fn budget_mut<'a>(table: &'a mut BudgetTable, gate: &str) -> Option<&'a mut GateBudget> {
    Some(match gate {
        "CNOT" => &mut table.cnot,
        "H" => &mut table.h,
        "S" => &mut table.s,
        "T" => &mut table.t,
        "T_RE" => &mut table.t_rebit,
        "S_MAGIC" => &mut table.s_magic,
        "A" => &mut table.distill.a,
        "Y" => &mut table.distill.y,
        _ => return None,
    })
}

/// Applies a config file on top of `params` and `budgets`.
pub fn apply_config(text: &str, params: &mut CostParams, budgets: &mut BudgetTable) -> Result<(), OverheadError> {
    for (key, value, line) in parse_config(text)? {
        let err = |message: String| OverheadError::Config { line, message };
        let num = || value.parse::<f64>().map_err(|_| err(format!("`{key}` expects a number, got `{value}`")));
        match key.as_str() {
            "kappa" => params.kappa = num()?,
            "ops_per_cell" => params.ops_per_cell = num()?,
            "eps0_A" => params.eps0_a = num()?,
            "eps0_Y" => params.eps0_y = num()?,
            "injection_volume" => params.injection_volume = num()?,
            "t_plain_coeff" => params.t_plain_coeff = num()?,
            "a_error_length" => {
                params.a_error_length = match value.as_str() {
                    "L_Y" => AErrorLength::LY,
                    "L_A" => AErrorLength::LA,
                    _ => return Err(err(format!("`a_error_length` is `L_Y` or `L_A`, got `{value}`"))),
                }
            }
            _ => {
                let (field, gate) = key
                    .split_once('_')
                    .filter(|(f, _)| *f == "V" || *f == "L")
                    .ok_or_else(|| err(format!("unknown key `{key}`")))?;
                let x = num()?;
                let budget = budget_mut(budgets, gate).ok_or_else(|| err(format!("unknown gate in `{key}`")))?;
                let (v, l) = if field == "V" { (x, budget.length) } else { (budget.volume, x) };
                *budget = GateBudget::new(budget.name.clone(), v, l).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    params.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply() {
        let mut p = CostParams::default();
        let mut b = BudgetTable::naive();
        let text = "# tuned\nkappa = 1.1\nV_A = 200  # smaller layout\nL_T_RE=90\na_error_length = L_A\n";
        apply_config(text, &mut p, &mut b).unwrap();
        assert_eq!(p.kappa, 1.1);
        assert_eq!(p.a_error_length, AErrorLength::LA);
        assert_eq!((b.distill.a.volume, b.distill.a.length), (200.0, 362.0));
        assert_eq!(b.t_rebit.length, 90.0);
    }

    #[test]
    fn bad_lines_name_their_line() {
        let mut p = CostParams::default();
        let mut b = BudgetTable::naive();
        for (text, line) in [("kappa 1", 1), ("\nfoo = 2", 2), ("V_Q = 3", 1), ("V_H = 0.5", 1), ("kappa = x", 1)] {
            match apply_config(text, &mut p, &mut b) {
                Err(OverheadError::Config { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(apply_config("kappa = -1", &mut p, &mut b), Err(OverheadError::Domain(_))));
    }
}

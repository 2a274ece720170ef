use std::fmt::Write as _;
use std::time::Duration;

use crate::complex::{ChainComplex, LatticeShape};
use crate::gf2::BitVector;
use crate::pattern::TargetKind;

use super::chain_cells;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetVerdict {
    pub id: String,
    pub kind: TargetKind,
    pub accepted: bool,
    pub rank: usize,
    pub aug_rank: usize,
    pub witness: Option<BitVector>,
    pub warnings: Vec<String>,
}

/// Per-target verdicts for one circuit, in target order.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub circuit: String,
    pub shape: LatticeShape,
    pub targets: Vec<TargetVerdict>,
    pub warnings: Vec<String>,
    pub elapsed: Duration,
}

fn verdict_word(accepted: bool) -> &'static str {
    if accepted {
        "accepted"
    } else {
        "rejected"
    }
}

impl VerificationReport {
    #[must_use]
    pub fn accepted(&self) -> bool {
        self.targets.iter().all(|t| t.accepted)
    }

    /// 0 when every target is accepted, 1 otherwise.
    #[must_use]
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.accepted())
    }

    #[must_use]
    pub fn render_text(&self, complex: Option<&ChainComplex>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "circuit {} on lattice {}", self.circuit, self.shape);
        for w in &self.warnings {
            let _ = writeln!(out, "  warning: {w}");
        }
        let width = self.targets.iter().map(|t| t.id.len()).max().unwrap_or(0);
        for t in &self.targets {
            let _ = write!(
                out,
                "  {:<width$}  {:<6}  {}  rank {} / augmented {}",
                t.id,
                t.kind.to_string(),
                verdict_word(t.accepted),
                t.rank,
                t.aug_rank
            );
            if let Some(w) = &t.witness {
                let _ = write!(out, "  witness {} cells", w.count_ones());
            }
            out.push('\n');
            for w in &t.warnings {
                let _ = writeln!(out, "    warning: {w}");
            }
            if let (Some(c), Some(w)) = (complex, &t.witness) {
                for cell in chain_cells(c, t.kind, w) {
                    let _ = writeln!(out, "    {cell}");
                }
            }
        }
        let n_ok = self.targets.iter().filter(|t| t.accepted).count();
        let _ = writeln!(
            out,
            "result: {} ({n_ok}/{} targets) in {:.1} ms",
            verdict_word(self.accepted()),
            self.targets.len(),
            self.elapsed.as_secs_f64() * 1e3
        );
        out
    }

    /// Line-oriented key/value records; deterministic (no timing).
    #[must_use]
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        let [a, b, c] = self.shape.extents();
        let _ = writeln!(out, "circuit={}", self.circuit);
        let _ = writeln!(out, "shape={a},{b},{c}");
        for w in &self.warnings {
            let _ = writeln!(out, "warning={w}");
        }
        for t in &self.targets {
            let size = t.witness.as_ref().map_or_else(|| "-".to_string(), |w| w.count_ones().to_string());
            let _ = writeln!(
                out,
                "target id={} kind={} verdict={} rank={} aug_rank={} witness_size={size}",
                t.id,
                t.kind,
                verdict_word(t.accepted),
                t.rank,
                t.aug_rank
            );
        }
        let _ = writeln!(out, "overall={}", verdict_word(self.accepted()));
        out
    }
}

/// The verdict-bearing content of a machine-format report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineSummary {
    pub verdicts: Vec<(String, bool)>,
    pub overall: bool,
}

impl MachineSummary {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut verdicts = Vec::new();
        let mut overall = None;
        for (n, line) in text.lines().enumerate() {
            if let Some(rest) = line.strip_prefix("target ") {
                let field = |key: &str| {
                    rest.split_whitespace()
                        .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
                        .ok_or_else(|| format!("line {}: missing `{key}`", n + 1))
                };
                let id = field("id")?.to_string();
                let accepted = match field("verdict")? {
                    "accepted" => true,
                    "rejected" => false,
                    other => return Err(format!("line {}: unknown verdict `{other}`", n + 1)),
                };
                verdicts.push((id, accepted));
            } else if let Some(v) = line.strip_prefix("overall=") {
                overall = Some(match v {
                    "accepted" => true,
                    "rejected" => false,
                    other => return Err(format!("line {}: unknown overall verdict `{other}`", n + 1)),
                });
            }
        }
        let overall = overall.ok_or("missing `overall` record")?;
        if overall != verdicts.iter().all(|(_, a)| *a) {
            return Err("overall verdict disagrees with the target records".to_string());
        }
        Ok(Self { verdicts, overall })
    }

    #[must_use]
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.overall)
    }
}

/// Recomputes the command exit code from a machine-format report.
pub fn exit_code_from_machine(text: &str) -> Result<i32, String> {
    MachineSummary::parse(text).map(|s| s.exit_code())
}

//! JSON job specifications and output records. Complex numbers are `[re, im]`.

use serde::{Deserialize, Serialize};

use crate::braid::{solve_colorings, BraidWord, ColorTuple, ColoringSolution};
use crate::error::{Error, Result};
use crate::qnum::{RootContext, C64, DEFAULT_TOL};
use crate::semicyclic::{HolonomyOperator, SemicyclicParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonMode {
    Zero,
    Solve,
}

/// `"zero"`, `"solve"` or an explicit per-position list.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum EpsilonSpec {
    Mode(EpsilonMode),
    Explicit(Vec<C64>),
}

impl Default for EpsilonSpec {
    fn default() -> Self {
        EpsilonSpec::Mode(EpsilonMode::Zero)
    }
}

/// One computation request.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(rename = "N", alias = "n")]
    pub order: u32,
    #[serde(default)]
    pub braid: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strands: Option<usize>,
    pub kappa_by_component: Vec<C64>,
    #[serde(default)]
    pub epsilon: EpsilonSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_by_component: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalings: Option<Vec<C64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_index: Option<usize>,
}

impl JobSpec {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// The braid, with `strands_override` taking precedence over the spec's
    /// own `strands` field.
    pub fn braid_word(&self, strands_override: Option<usize>) -> Result<BraidWord> {
        match strands_override.or(self.strands) {
            Some(n) => BraidWord::new(n, self.braid.clone()),
            None => BraidWord::from_letters(self.braid.clone()),
        }
    }

    pub fn context(&self, tol_override: Option<f64>) -> Result<RootContext> {
        RootContext::new(self.order, tol_override.or(self.tolerance).unwrap_or(DEFAULT_TOL))
    }

    /// Branches per component; all zero when omitted.
    pub fn branches(&self, b: &BraidWord) -> Vec<i64> {
        self.branch_by_component
            .clone()
            .unwrap_or_else(|| vec![0; b.components().count()])
    }

    pub fn basis_index(&self) -> usize {
        self.basis_index.unwrap_or(0)
    }

    /// The coloring the job asks for. For `"solve"`, the selected basis vector
    /// (unit norm) times the first scaling, if any.
    pub fn coloring(&self, b: &BraidWord, ctx: &RootContext) -> Result<ColorTuple> {
        let branches = self.branches(b);
        match &self.epsilon {
            EpsilonSpec::Mode(EpsilonMode::Zero) => {
                crate::invariant::zero_coloring(b, &self.kappa_by_component, &branches)
            }
            EpsilonSpec::Explicit(eps) => ColorTuple::from_components(b, &self.kappa_by_component, eps, &branches),
            EpsilonSpec::Mode(EpsilonMode::Solve) => {
                let sol = solve_colorings(b, &self.kappa_by_component, &branches, ctx.tol())?;
                let idx = self.basis_index();
                let v = sol.basis.get(idx).ok_or_else(|| {
                    Error::Dimension(format!("basis index {idx} out of range (solution dimension {})", sol.basis.len()))
                })?;
                let scale = self.scalings.as_ref().and_then(|s| s.first().copied()).unwrap_or(C64::new(1.0, 0.0));
                Ok(sol.coloring(v, scale))
            }
        }
    }

    pub fn scalings_or_default(&self) -> Vec<C64> {
        self.scalings
            .clone()
            .unwrap_or_else(|| vec![C64::new(1.0, 0.0), C64::new(2.0, 1.0), C64::new(0.1, 0.0)])
    }
}

/// Output of `solve`.
#[derive(Debug, Clone, Serialize)]
pub struct SolveOutput {
    pub strands: usize,
    pub kappa_by_position: Vec<C64>,
    pub branches: Vec<i64>,
    /// Rank of `M - Id`.
    pub rank: usize,
    /// Dimension of the solution space (always includes the conjugation direction).
    pub nullity: usize,
    pub nonabelian_dim: usize,
    pub singular_values: Vec<f64>,
    pub cutoff: f64,
    /// Unit-norm basis, non-abelian directions first.
    pub basis: Vec<Vec<C64>>,
    pub conjugation_direction: Vec<C64>,
    pub conjugation_residual: f64,
}

impl From<&ColoringSolution> for SolveOutput {
    fn from(s: &ColoringSolution) -> Self {
        SolveOutput {
            strands: s.kappa_by_position.len(),
            kappa_by_position: s.kappa_by_position.clone(),
            branches: s.branches.clone(),
            rank: s.kappa_by_position.len() - s.nullity,
            nullity: s.nullity,
            nonabelian_dim: s.nonabelian_dim,
            singular_values: s.singular_values.clone(),
            cutoff: s.cutoff,
            basis: s.basis.iter().map(|v| v.iter().copied().collect()).collect(),
            conjugation_direction: s.conjugation.iter().copied().collect(),
            conjugation_residual: s.conjugation_residual,
        }
    }
}

/// Module parameters with their degree.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsOutput {
    pub kappa: C64,
    pub epsilon: C64,
    pub branch: i64,
    pub alpha: C64,
    pub t: C64,
}

impl From<&SemicyclicParams> for ParamsOutput {
    fn from(p: &SemicyclicParams) -> Self {
        let d = p.degree();
        ParamsOutput { kappa: d.kappa, epsilon: d.epsilon, branch: p.branch, alpha: p.alpha, t: p.t }
    }
}

/// Output of `rmatrix`: row-major entries.
#[derive(Debug, Clone, Serialize)]
pub struct RMatrixOutput {
    pub order: u32,
    pub flipped: bool,
    pub dimension: usize,
    pub matrix: Vec<Vec<C64>>,
    pub source: [ParamsOutput; 2],
    pub target: [ParamsOutput; 2],
    pub condition: f64,
    pub warnings: Vec<String>,
}

impl From<&HolonomyOperator> for RMatrixOutput {
    fn from(op: &HolonomyOperator) -> Self {
        let m = &op.matrix;
        let mut warnings = Vec::new();
        if op.is_ill_conditioned() {
            warnings.push(format!("condition number {:e} exceeds {:e}", op.condition, crate::semicyclic::CONDITION_WARNING));
        }
        RMatrixOutput {
            order: op.source[0].ctx.order(),
            flipped: op.flipped,
            dimension: m.nrows(),
            matrix: (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect(),
            source: [(&op.source[0]).into(), (&op.source[1]).into()],
            target: [(&op.target[0]).into(), (&op.target[1]).into()],
            condition: op.condition,
            warnings,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output records serialize");
    s.push('\n');
    s
}

//! Braid operators, the modified Markov trace and the resulting invariant.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::braid::{fixed_point_residual, solve_colorings, BraidWord, ColorTuple, ColoringSolution};
use crate::error::{Error, Result};
use crate::group::GStarColor;
use crate::qnum::{RootContext, C64};
use crate::semicyclic::{holonomy_inverse, holonomy_matrix, SemicyclicParams, CONDITION_WARNING};

/// Largest number of matrix entries (`r^{2n}`) a braid operator may have.
pub const MAX_OPERATOR_ENTRIES: usize = 1 << 22;

/// Relative tolerance of the conjecture comparison.
pub const CONJECTURE_TOL: f64 = 1e-6;

/// Left-multiplies `state` (rows indexed by `r^n` tensor indices, slot 0 most
/// significant) by `block` acting on slots `slot, slot + 1`.
pub fn apply_two_slot(state: &mut DMatrix<C64>, block: &DMatrix<C64>, slot: usize, r: usize, n: usize) {
    let inner = r.pow((n - slot - 2) as u32);
    let outer = r.pow(slot as u32);
    let rr = r * r;
    let cols = state.ncols();
    let mut rows = vec![0usize; rr];
    let mut buf = vec![C64::new(0.0, 0.0); rr];
    for a in 0..outer {
        for c in 0..inner {
            for (xy, row) in rows.iter_mut().enumerate() {
                *row = (a * rr + xy) * inner + c;
            }
            for col in 0..cols {
                for (out, brow) in buf.iter_mut().zip(0..rr) {
                    *out = (0..rr).map(|k| block[(brow, k)] * state[(rows[k], col)]).sum();
                }
                for (k, &v) in buf.iter().enumerate() {
                    state[(rows[k], col)] = v;
                }
            }
        }
    }
}

/// Per-position module parameters of a coloring.
pub fn params_of_coloring(y: &ColorTuple, ctx: RootContext) -> Result<Vec<SemicyclicParams>> {
    y.colors
        .iter()
        .zip(&y.branches)
        .map(|(c, &m)| SemicyclicParams::from_color(c, m, ctx))
        .collect()
}

/// A composite braid operator with its parameter bookkeeping.
#[derive(Debug, Clone)]
pub struct BraidOperator {
    pub matrix: DMatrix<C64>,
    pub initial: Vec<SemicyclicParams>,
    pub last: Vec<SemicyclicParams>,
    pub max_condition: f64,
}

impl BraidOperator {
    /// Colors at the top of the braid.
    pub fn final_colors(&self) -> ColorTuple {
        ColorTuple {
            colors: self.last.iter().map(|p| p.degree()).collect(),
            branches: self.last.iter().map(|p| p.branch).collect(),
        }
    }

    /// Max parameter distance between the top and bottom of the braid.
    pub fn closure_residual(&self) -> f64 {
        self.initial
            .iter()
            .zip(&self.last)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

/// `f = C_m^{+-1} ... C_1^{+-1}` for the letters read bottom to top, each
/// holonomy braiding embedded with identities on the other strands.
pub fn braid_operator_from_params(b: &BraidWord, params: &[SemicyclicParams]) -> Result<BraidOperator> {
    let n = b.strands();
    if params.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: params.len() });
    }
    let ctx = params[0].ctx;
    if params.iter().any(|p| p.ctx.order() != ctx.order()) {
        return Err(Error::Dimension("parameters live at different roots of unity".into()));
    }
    let r = ctx.r();
    let dim = r.checked_pow(n as u32).filter(|d| d.checked_mul(*d).is_some_and(|e| e <= MAX_OPERATOR_ENTRIES));
    let Some(dim) = dim else {
        return Err(Error::TooLarge { strands: n, dim: r.saturating_pow(n as u32) });
    };

    let mut matrix = DMatrix::<C64>::identity(dim, dim);
    let mut cur = params.to_vec();
    let mut max_condition: f64 = 1.0;
    for &k in b.letters() {
        let i = k.unsigned_abs() as usize - 1;
        let (u, v) = (cur[i], cur[i + 1]);
        let op = if k > 0 {
            holonomy_matrix(&u, &v, true)?
        } else {
            // Source of the positive braiding whose target is (u, v).
            let (ku, kv) = (u.kappa(), v.kappa());
            let t1 = v.t * ku;
            let t2 = kv * (u.t - (C64::new(1.0, 0.0) - kv.powi(-2)) * t1);
            holonomy_inverse(&holonomy_matrix(&v.with_t(t1), &u.with_t(t2), true)?)?
        };
        max_condition = max_condition.max(op.condition);
        apply_two_slot(&mut matrix, &op.matrix, i, r, n);
        cur[i] = op.target[0];
        cur[i + 1] = op.target[1];
    }
    Ok(BraidOperator { matrix, initial: params.to_vec(), last: cur, max_condition })
}

pub fn braid_operator(b: &BraidWord, y: &ColorTuple, ctx: RootContext) -> Result<BraidOperator> {
    y.validate_for(b, ctx.tol())?;
    braid_operator_from_params(b, &params_of_coloring(y, ctx)?)
}

/// `([alpha_1]/[r alpha_1]) tr((Id (x) K_2^{1-r} (x) ... (x) K_n^{1-r}) f)`.
pub fn markov_trace(f: &DMatrix<C64>, params: &[SemicyclicParams]) -> Result<C64> {
    let Some(first) = params.first() else {
        return Err(Error::Dimension("a Markov trace needs at least one strand".into()));
    };
    let r = first.r();
    let n = params.len();
    let dim = r.pow(n as u32);
    if f.nrows() != dim || f.ncols() != dim {
        return Err(Error::Dimension(format!(
            "expected a {dim}x{dim} matrix for {n} strands, got {}x{}",
            f.nrows(),
            f.ncols()
        )));
    }
    let pref = first.trace_prefactor()?;
    // Weight of each basis index, built slot by slot.
    let mut weights = DVector::<C64>::from_element(1, C64::new(1.0, 0.0));
    for (j, p) in params.iter().enumerate() {
        let diag = if j == 0 { vec![C64::new(1.0, 0.0); r] } else { p.k_power_diag(1.0 - r as f64) };
        weights = DVector::from_iterator(weights.len() * r, weights.iter().flat_map(|&w| diag.iter().map(move |&d| w * d)));
    }
    let tr: C64 = (0..dim).map(|i| weights[i] * f[(i, i)]).sum();
    Ok(pref * tr)
}

/// Raw and writhe-normalized invariant of a colored braid closure.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantResult {
    pub raw: C64,
    pub normalized: C64,
    pub colors: Vec<GStarColor>,
    pub branches: Vec<i64>,
    pub alphas: Vec<C64>,
    pub ts: Vec<C64>,
    pub writhe_by_component: Vec<i64>,
    pub twists: Vec<C64>,
    pub fixed_point_residual: f64,
    pub closure_residual: f64,
    pub max_condition: f64,
    pub warnings: Vec<String>,
}

fn relative_fixed_point_residual(b: &BraidWord, y: &ColorTuple) -> f64 {
    let scale = y.colors.iter().map(|c| c.epsilon.norm()).fold(1.0, f64::max);
    fixed_point_residual(b, y) / scale
}

/// `raw = markov_trace(f)` and `normalized = raw * prod_c theta_c^{-w_c}`.
pub fn invariant(b: &BraidWord, y: &ColorTuple, ctx: RootContext) -> Result<InvariantResult> {
    let comps = y.validate_for(b, ctx.tol())?;
    let residual = relative_fixed_point_residual(b, y);
    if !(residual <= ctx.tol().max(1e-12)) {
        return Err(Error::NotFixedPoint(residual));
    }
    let params = params_of_coloring(y, ctx)?;
    let op = braid_operator_from_params(b, &params)?;
    let raw = markov_trace(&op.matrix, &params)?;

    let writhe = b.writhe_by_component();
    let twists: Vec<C64> = comps.cycles.iter().map(|c| params[c[0]].twist()).collect();
    let factor: C64 = twists.iter().zip(&writhe).map(|(th, &w)| th.powi(-(w as i32))).product();

    let mut warnings = Vec::new();
    if op.max_condition > CONDITION_WARNING {
        warnings.push(format!("holonomy operator condition number {:e} exceeds {:e}", op.max_condition, CONDITION_WARNING));
    }
    let closure_residual = op.closure_residual();
    if closure_residual > ctx.tol().sqrt() {
        warnings.push(format!("top and bottom parameters differ by {closure_residual:e}"));
    }
    Ok(InvariantResult {
        raw,
        normalized: raw * factor,
        colors: y.colors.clone(),
        branches: y.branches.clone(),
        alphas: params.iter().map(|p| p.alpha).collect(),
        ts: params.iter().map(|p| p.t).collect(),
        writhe_by_component: writhe,
        twists,
        fixed_point_residual: residual,
        closure_residual,
        max_condition: op.max_condition,
        warnings,
    })
}

/// The coloring with every `epsilon = 0`, always a fixed point.
pub fn zero_coloring(b: &BraidWord, kappa_by_component: &[C64], branch_by_component: &[i64]) -> Result<ColorTuple> {
    let zeros = vec![C64::new(0.0, 0.0); b.strands()];
    ColorTuple::from_components(b, kappa_by_component, &zeros, branch_by_component)
}

/// The nilpotent (ADO) specialization: [`invariant`] at `epsilon = 0`.
pub fn ado_invariant(
    b: &BraidWord,
    kappa_by_component: &[C64],
    branch_by_component: &[i64],
    ctx: RootContext,
) -> Result<InvariantResult> {
    invariant(b, &zero_coloring(b, kappa_by_component, branch_by_component)?, ctx)
}

/// One scaled coloring in a conjecture comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ScaledValue {
    pub scaling: C64,
    pub normalized: C64,
    pub raw: C64,
    /// Largest `|t|` over the strands, zero only for the nilpotent coloring.
    pub max_t: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub order: u32,
    pub nullity: usize,
    pub nonabelian_dim: usize,
    pub basis_index: usize,
    pub basis_vector: Vec<C64>,
    pub ado: C64,
    pub values: Vec<ScaledValue>,
    /// Largest relative difference between any two of the values (ADO included).
    pub max_pairwise_rel_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

fn rel_diff(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// Compares the invariant of `lambda * v` (with `v` a solved `epsilon`
/// vector) against the `epsilon = 0` invariant for each scaling.
pub fn conjecture_compare(
    b: &BraidWord,
    kappa_by_component: &[C64],
    branch_by_component: &[i64],
    scalings: &[C64],
    basis_index: usize,
    ctx: RootContext,
) -> Result<ConjectureReport> {
    let sol = solve_colorings(b, kappa_by_component, branch_by_component, ctx.tol())?;
    let ado = ado_invariant(b, kappa_by_component, branch_by_component, ctx)?.normalized;
    let mut report = ConjectureReport {
        order: ctx.order(),
        nullity: sol.nullity,
        nonabelian_dim: sol.nonabelian_dim,
        basis_index,
        basis_vector: Vec::new(),
        ado,
        values: Vec::new(),
        max_pairwise_rel_diff: 0.0,
        tolerance: CONJECTURE_TOL,
        pass: false,
        note: None,
    };
    if !sol.has_nonabelian() {
        report.note = Some("no non-abelian epsilon coloring exists at this kappa".into());
    }
    let Some(v) = sol.basis.get(basis_index) else {
        if report.note.is_none() {
            report.note = Some(format!("basis index {basis_index} out of range (dimension {})", sol.basis.len()));
        }
        return Ok(report);
    };
    report.basis_vector = v.iter().copied().collect();
    report.values = scaled_values(b, &sol, v, scalings, ado, ctx)?;
    let all: Vec<C64> = std::iter::once(ado).chain(report.values.iter().map(|s| s.normalized)).collect();
    report.max_pairwise_rel_diff = all
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| all[i + 1..].iter().map(move |&c| rel_diff(a, c)))
        .fold(0.0, f64::max);
    report.pass = sol.has_nonabelian() && basis_index < sol.nonabelian_dim && report.values.iter().all(|s| s.pass);
    if sol.has_nonabelian() && basis_index >= sol.nonabelian_dim {
        report.note = Some("selected basis vector is the abelian conjugation direction".into());
    }
    Ok(report)
}

fn scaled_values(
    b: &BraidWord,
    sol: &ColoringSolution,
    v: &DVector<C64>,
    scalings: &[C64],
    ado: C64,
    ctx: RootContext,
) -> Result<Vec<ScaledValue>> {
    scalings
        .iter()
        .map(|&lambda| {
            let res = invariant(b, &sol.coloring(v, lambda), ctx)?;
            let rel = rel_diff(res.normalized, ado);
            Ok(ScaledValue {
                scaling: lambda,
                normalized: res.normalized,
                raw: res.raw,
                max_t: res.ts.iter().map(|t| t.norm()).fold(0.0, f64::max),
                abs_diff: (res.normalized - ado).norm(),
                rel_diff: rel,
                pass: rel < CONJECTURE_TOL,
            })
        })
        .collect()
}

//! Semi-cyclic modules `V_alpha^t` as explicit `r x r` matrices and the
//! holonomy R-matrix between them.
//!
//! Basis `v_0 .. v_{r-1}` with `v_0` of highest weight: `H v_i =
//! (alpha + r - 1 - 2i) v_i`, `F v_i = v_{i+1}`. On the twisted module the
//! generator `E` acts by `Ad_t(E) = exp(t f) E exp(-t f)`, which differs from
//! the untwisted `E` only in the corner entry `v_0 -> v_{r-1}`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::group::GStarColor;
use crate::qnum::{branch_log, RootContext, C64};

/// Condition number above which holonomy operators are flagged.
pub const CONDITION_WARNING: f64 = 1e8;

/// Parameters `(alpha, t, branch)` of a module `V_alpha^t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemicyclicParams {
    pub alpha: C64,
    pub t: C64,
    pub branch: i64,
    pub ctx: RootContext,
}

/// Action matrices of `E` (twisted), `F`, `K` and the `H` weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrices {
    pub e_t: DMatrix<C64>,
    pub f: DMatrix<C64>,
    pub k: DMatrix<C64>,
    pub h: Vec<C64>,
}

impl SemicyclicParams {
    /// Validated constructor. Rejects `alpha` near an integer and
    /// `|[r alpha]| <= tol`.
    pub fn new(alpha: C64, t: C64, branch: i64, ctx: RootContext) -> Result<Self> {
        let p = SemicyclicParams { alpha, t, branch, ctx };
        p.validate()?;
        Ok(p)
    }

    /// Parameters for a given `alpha`, with the branch index it implies.
    pub fn from_alpha(alpha: C64, t: C64, ctx: RootContext) -> Result<Self> {
        let kappa = kappa_of_alpha(alpha, &ctx);
        let log = branch_log(kappa * ctx.sigma_squared(), 0)?;
        // alpha = N (Log + 2 pi i m) / (2 pi i r)
        let m = alpha * ctx.r() as f64 / ctx.order() as f64 - log / C64::new(0.0, 2.0 * PI);
        Self::new(alpha, t, m.re.round() as i64, ctx)
    }

    /// `alpha = N j(sigma^2 kappa) / (2 pi i r)` and
    /// `t = -eps / (sigma (kappa - 1/kappa))`, with `j` the branch of the
    /// logarithm selected by `branch`.
    pub fn from_color(y: &GStarColor, branch: i64, ctx: RootContext) -> Result<Self> {
        y.ensure_admissible(ctx.tol())?;
        let sigma = ctx.sigma();
        let log = branch_log(y.kappa * ctx.sigma_squared(), branch)?;
        let alpha = log * ctx.order() as f64 / (C64::new(0.0, 2.0 * PI) * ctx.r() as f64);
        let t = -y.epsilon / (sigma * (y.kappa - y.kappa.inv()));
        Self::new(alpha, t, branch, ctx)
    }

    fn validate(&self) -> Result<()> {
        let nearest = self.alpha.re.round();
        if (self.alpha - nearest).norm() <= self.ctx.tol() {
            return Err(Error::IntegralAlpha { re: self.alpha.re, im: self.alpha.im });
        }
        if self.qnum_r_alpha().norm() <= self.ctx.tol() {
            let k = self.kappa();
            return Err(Error::NotAdmissible { re: k.re, im: k.im });
        }
        Ok(())
    }

    pub fn with_t(&self, t: C64) -> Self {
        SemicyclicParams { t, ..*self }
    }

    pub fn r(&self) -> usize {
        self.ctx.r()
    }

    fn qnum_r_alpha(&self) -> C64 {
        self.ctx.qnum(self.alpha * self.r() as f64)
    }

    /// `K^r` eigenvalue `sigma^2 xi^{r alpha}`.
    pub fn kappa(&self) -> C64 {
        kappa_of_alpha(self.alpha, &self.ctx)
    }

    /// The `G*` degree `(sigma^2 xi^{r alpha}, -sigma^{-1} t [r alpha])`.
    pub fn degree(&self) -> GStarColor {
        let eps = -self.t * self.qnum_r_alpha() / self.ctx.sigma();
        GStarColor::new_unchecked(self.kappa(), eps)
    }

    /// `H` weights `alpha + r - 1 - 2i`.
    pub fn h_weights(&self) -> Vec<C64> {
        let r = self.r() as f64;
        (0..self.r()).map(|i| self.alpha + (r - 1.0 - 2.0 * i as f64)).collect()
    }

    /// Diagonal of `K^e`, i.e. `xi^{e * h_i}`.
    pub fn k_power_diag(&self, e: f64) -> Vec<C64> {
        self.h_weights().into_iter().map(|h| self.ctx.xi_pow(h * e)).collect()
    }

    /// Coefficient `c` with `Ad_t(E) - E = -t c (v_0 -> v_{r-1})`:
    /// `c = [1]^{2(r-1)} [alpha] / [r-1]!`.
    pub fn corner_coefficient(&self) -> C64 {
        let r = self.r();
        let ctx = &self.ctx;
        let fact = ctx.qfact(r as u32 - 1).expect("r - 1 < r");
        ctx.qnum_real(1.0).powi(2 * (r as i32 - 1)) * ctx.qnum(self.alpha) / fact
    }

    pub fn rep_matrices(&self) -> RepMatrices {
        let r = self.r();
        let ctx = &self.ctx;
        let q1 = ctx.qnum_real(1.0);
        let mut e = DMatrix::<C64>::zeros(r, r);
        let mut f = DMatrix::<C64>::zeros(r, r);
        for i in 1..r {
            // E v_i = [i][alpha + r - i] / [1]^2 v_{i-1}
            e[(i - 1, i)] = ctx.qnum_real(i as f64) * ctx.qnum(self.alpha + (r - i) as f64) / (q1 * q1);
        }
        for i in 0..r - 1 {
            f[(i + 1, i)] = C64::new(1.0, 0.0);
        }
        e[(r - 1, 0)] -= self.t * self.corner_coefficient();
        let h = self.h_weights();
        let k = DMatrix::from_diagonal(&DVector::from_iterator(r, h.iter().map(|&x| ctx.xi_pow(x))));
        RepMatrices { e_t: e, f, k, h }
    }

    /// Twist `xi^{(alpha^2 - (r-1)^2) / 2}`.
    pub fn twist(&self) -> C64 {
        let rm1 = self.r() as f64 - 1.0;
        self.ctx.xi_pow((self.alpha * self.alpha - rm1 * rm1) / 2.0)
    }

    /// Modified dimension `r [alpha] / [r alpha]`.
    pub fn mod_dim(&self) -> Result<C64> {
        let den = self.qnum_r_alpha();
        if den.norm() <= self.ctx.tol() {
            let k = self.kappa();
            return Err(Error::NotAdmissible { re: k.re, im: k.im });
        }
        Ok(self.ctx.qnum(self.alpha) * self.r() as f64 / den)
    }

    /// The trace prefactor `[alpha] / [r alpha]`.
    pub fn trace_prefactor(&self) -> Result<C64> {
        Ok(self.mod_dim()? / self.r() as f64)
    }

    /// Max deviation of parameters (alpha and t) and exact branch equality.
    pub fn distance(&self, other: &SemicyclicParams) -> f64 {
        if self.branch != other.branch || self.ctx.order() != other.ctx.order() {
            return f64::INFINITY;
        }
        (self.alpha - other.alpha).norm().max((self.t - other.t).norm())
    }
}

fn kappa_of_alpha(alpha: C64, ctx: &RootContext) -> C64 {
    ctx.xi_pow(alpha * ctx.r() as f64) * ctx.sigma_squared()
}

/// A holonomy R-matrix (or its inverse) with the parameters of the source and
/// target tensor factors, listed in tensor order.
#[derive(Debug, Clone)]
pub struct HolonomyOperator {
    pub matrix: DMatrix<C64>,
    pub source: [SemicyclicParams; 2],
    pub target: [SemicyclicParams; 2],
    pub flipped: bool,
    pub inverted: bool,
    pub condition: f64,
}

impl HolonomyOperator {
    pub fn source_degrees(&self) -> [GStarColor; 2] {
        [self.source[0].degree(), self.source[1].degree()]
    }

    pub fn target_degrees(&self) -> [GStarColor; 2] {
        [self.target[0].degree(), self.target[1].degree()]
    }

    pub fn is_ill_conditioned(&self) -> bool {
        self.condition > CONDITION_WARNING
    }
}

/// `sigma_max / sigma_min` from the singular values.
pub fn condition_number(m: &DMatrix<C64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Tensor-factor exchange on `C^a (x) C^b`: `v_i (x) w_j -> w_j (x) v_i`.
pub fn flip_rows(m: &DMatrix<C64>, a: usize, b: usize) -> DMatrix<C64> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for i in 0..a {
        for j in 0..b {
            out.row_mut(j * a + i).copy_from(&m.row(i * b + j));
        }
    }
    out
}

fn ensure_same_root(p1: &SemicyclicParams, p2: &SemicyclicParams) -> Result<()> {
    if p1.ctx.order() != p2.ctx.order() {
        return Err(Error::Dimension(format!(
            "parameters live at different roots of unity (N={} and N={})",
            p1.ctx.order(),
            p2.ctx.order()
        )));
    }
    Ok(())
}

/// Holonomy R-matrix `V_1^{t1} (x) V_2^{t2} -> V_1^{t1'} (x) V_2^{t2'}`:
///
/// `D_H * sum_n [1]^{2n} xi^{n(n-1)/2} / [n]! (E_{t1})^n (x) F^n`
///
/// with `D_H = xi^{H (x) H / 2}`, `t1' = t1 / kappa_2` and
/// `t2' = (1 - kappa_1^{-2}) t1 + t2 / kappa_1`. With `flipped` the factors
/// of the target are exchanged, giving the braiding `C = tau . R`.
pub fn holonomy_matrix(p1: &SemicyclicParams, p2: &SemicyclicParams, flipped: bool) -> Result<HolonomyOperator> {
    ensure_same_root(p1, p2)?;
    p1.validate()?;
    p2.validate()?;
    let ctx = p1.ctx;
    let r = ctx.r();
    let rep1 = p1.rep_matrices();
    let rep2 = p2.rep_matrices();

    let q1 = ctx.qnum_real(1.0);
    let mut sum = DMatrix::<C64>::zeros(r * r, r * r);
    let mut e_pow = DMatrix::<C64>::identity(r, r);
    let mut f_pow = DMatrix::<C64>::identity(r, r);
    for n in 0..r {
        let coeff = q1.powi(2 * n as i32) * ctx.xi_pow_real((n * n.saturating_sub(1)) as f64 / 2.0)
            / ctx.qfact(n as u32)?;
        sum += e_pow.kronecker(&f_pow) * coeff;
        e_pow = &rep1.e_t * e_pow;
        f_pow = &rep2.f * f_pow;
    }
    for (i, &l) in rep1.h.iter().enumerate() {
        for (j, &m) in rep2.h.iter().enumerate() {
            let d = ctx.xi_pow(l * m / 2.0);
            for c in 0..r * r {
                sum[(i * r + j, c)] *= d;
            }
        }
    }

    let (k1, k2) = (p1.kappa(), p2.kappa());
    let t1p = p1.t / k2;
    let t2p = (C64::new(1.0, 0.0) - k1.powi(-2)) * p1.t + p2.t / k1;
    let (q1p, q2p) = (p1.with_t(t1p), p2.with_t(t2p));

    let condition = condition_number(&sum);
    let (matrix, target) = if flipped {
        (flip_rows(&sum, r, r), [q2p, q1p])
    } else {
        (sum, [q1p, q2p])
    };
    Ok(HolonomyOperator { matrix, source: [*p1, *p2], target, flipped, inverted: false, condition })
}

/// Numerical inverse; source and target are exchanged.
pub fn holonomy_inverse(op: &HolonomyOperator) -> Result<HolonomyOperator> {
    let inv = op.matrix.clone().try_inverse().ok_or(Error::Singular)?;
    Ok(HolonomyOperator {
        matrix: inv,
        source: op.target,
        target: op.source,
        flipped: op.flipped,
        inverted: !op.inverted,
        condition: op.condition,
    })
}

/// Right partial trace over the `W` factor of `(Id_V (x) K_W^{1-r}) f`.
///
/// `f` acts on `C^{v_dim} (x) W` with `W` the module of `p_w`.
pub fn partial_trace_right(f: &DMatrix<C64>, v_dim: usize, p_w: &SemicyclicParams) -> Result<DMatrix<C64>> {
    let w = p_w.r();
    if f.nrows() != v_dim * w || f.ncols() != v_dim * w {
        return Err(Error::Dimension(format!(
            "expected a {0}x{0} matrix, got {1}x{2}",
            v_dim * w,
            f.nrows(),
            f.ncols()
        )));
    }
    let weights = p_w.k_power_diag(1.0 - w as f64);
    let mut out = DMatrix::zeros(v_dim, v_dim);
    for i in 0..v_dim {
        for ip in 0..v_dim {
            out[(i, ip)] = weights
                .iter()
                .enumerate()
                .map(|(j, &k)| k * f[(i * w + j, ip * w + j)])
                .sum();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{rmap, smap};
    use crate::qnum::c64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(n: u32) -> RootContext {
        RootContext::with_default_tol(n).unwrap()
    }

    fn rand_alpha(rng: &mut ChaCha8Rng) -> C64 {
        loop {
            let a = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
            if (a - a.re.round()).norm() > 0.05 {
                return a;
            }
        }
    }

    fn max_abs(m: &DMatrix<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn n4_module_matrices() {
        let c = ctx(4);
        let i = c64(0.0, 1.0);
        let alpha = c64(0.37, -0.21);
        let t = c64(0.8, 0.3);
        let rep = SemicyclicParams::from_alpha(alpha, t, c).unwrap().rep_matrices();
        let half = alpha * (PI / 2.0);
        let expected_e = [[c64(0.0, 0.0), half.cos()], [t * half.sin() * 4.0, c64(0.0, 0.0)]];
        for a in 0..2 {
            for b in 0..2 {
                assert!((rep.e_t[(a, b)] - expected_e[a][b]).norm() < 1e-12);
            }
        }
        assert!((rep.k[(0, 0)] - i.powc(alpha + 1.0)).norm() < 1e-12);
        assert!((rep.k[(1, 1)] - i.powc(alpha - 1.0)).norm() < 1e-12);
        assert_eq!(rep.f[(1, 0)], c64(1.0, 0.0));
        assert_eq!(rep.f[(0, 1)], c64(0.0, 0.0));
    }

    #[test]
    fn untwisted_relations_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [3, 4, 5, 6, 8] {
            let c = ctx(n);
            let p = SemicyclicParams::from_alpha(rand_alpha(&mut rng), c64(0.0, 0.0), c).unwrap();
            let m = p.rep_matrices();
            let kinv = m.k.clone().try_inverse().unwrap();
            let xi = c.xi();
            assert!(max_abs(&(&m.k * &m.e_t * &kinv - &m.e_t * (xi * xi))) < 1e-10);
            assert!(max_abs(&(&m.k * &m.f * &kinv - &m.f / (xi * xi))) < 1e-10);
            let comm = &m.e_t * &m.f - &m.f * &m.e_t;
            let rhs = (&m.k - &kinv) / (xi - xi.inv());
            assert!(max_abs(&(comm - rhs)) < 1e-10, "N={n}");
        }
    }

    #[test]
    fn twist_only_touches_corner() {
        let c = ctx(6);
        let p = SemicyclicParams::from_alpha(c64(0.4, 0.2), c64(1.5, -0.5), c).unwrap();
        let diff = p.rep_matrices().e_t - p.with_t(c64(0.0, 0.0)).rep_matrices().e_t;
        for a in 0..3 {
            for b in 0..3 {
                if (a, b) != (2, 0) {
                    assert_eq!(diff[(a, b)], c64(0.0, 0.0));
                }
            }
        }
        assert!(diff[(2, 0)].norm() > 1e-6);
    }

    #[test]
    fn e_power_r_is_scalar() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [3, 4, 5, 6, 8] {
            let c = ctx(n);
            for _ in 0..10 {
                let t = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let p = SemicyclicParams::from_alpha(rand_alpha(&mut rng), t, c).unwrap();
                let e = p.rep_matrices().e_t;
                let mut pow = DMatrix::<C64>::identity(c.r(), c.r());
                for _ in 0..c.r() {
                    pow = &e * pow;
                }
                let eps = p.degree().epsilon;
                let dev = max_abs(&(pow - DMatrix::<C64>::identity(c.r(), c.r()) * eps));
                assert!(dev < 1e-9 * (1.0 + eps.norm()), "N={n} dev={dev}");
            }
        }
    }

    #[test]
    fn params_from_color_examples() {
        let c = ctx(4);
        let y = GStarColor::new_unchecked(c64(2.0, 0.5), c64(0.0, 0.0));
        for m in -2..3 {
            assert_eq!(SemicyclicParams::from_color(&y, m, c).unwrap().t, c64(0.0, 0.0));
        }
        // N = 4: kappa = -i^{2 alpha}, eps = 2 t sin(pi alpha)
        let alpha = c64(0.3, 0.1);
        let t = c64(-0.7, 0.2);
        let p = SemicyclicParams::from_alpha(alpha, t, c).unwrap();
        let d = p.degree();
        assert!((d.kappa + c64(0.0, 1.0).powc(alpha * 2.0)).norm() < 1e-12);
        assert!((d.epsilon - t * (alpha * PI).sin() * 2.0).norm() < 1e-12);
        let back = SemicyclicParams::from_color(&d, p.branch, c).unwrap();
        assert!(back.distance(&p) < 1e-10);
    }

    #[test]
    fn degree_roundtrip_all_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [3, 4, 5, 6] {
            let c = ctx(n);
            for m in -2..=2 {
                let y = GStarColor::new_unchecked(
                    C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-3.0..3.0)),
                    c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
                let p = SemicyclicParams::from_color(&y, m, c).unwrap();
                assert!(p.degree().distance(&y) < 1e-10);
                let q = SemicyclicParams::from_alpha(p.alpha, p.t, c).unwrap();
                assert_eq!(q.branch, m);
                // two t formulas agree: -eps/(sigma(k - 1/k)) = -sigma eps / [r alpha]
                let alt = -c.sigma() * y.epsilon / c.qnum(p.alpha * c.r() as f64);
                assert!((alt - p.t).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn params_reject_bad_inputs() {
        let c = ctx(4);
        assert!(SemicyclicParams::from_color(&GStarColor::new_unchecked(c64(1.0, 0.0), c64(0.0, 0.0)), 0, c).is_err());
        assert!(matches!(
            SemicyclicParams::new(c64(1.0, 0.0), c64(0.0, 0.0), 0, c),
            Err(Error::IntegralAlpha { .. })
        ));
    }

    #[test]
    fn golden_rp_matrix() {
        let c = ctx(4);
        let i = c64(0.0, 1.0);
        let (alpha, beta, t1) = (c64(0.3, 0.4), c64(-1.2, 0.1), c64(0.5, -0.9));
        let p1 = SemicyclicParams::from_alpha(alpha, t1, c).unwrap();
        let p2 = SemicyclicParams::from_alpha(beta, c64(2.0, 1.0), c).unwrap();
        let op = holonomy_matrix(&p1, &p2, false).unwrap();
        let (a, b) = (i.powc(alpha), i.powc(beta));
        let z = c64(0.0, 0.0);
        let rp = DMatrix::from_row_slice(4, 4, &[
            i * a * b, z, z, z,
            z, b, i * b * (a + a.inv()), z,
            z, z, a, z,
            i * t1 * (a - a.inv()) * 4.0, z, z, i,
        ]);
        let pref = i.powc((alpha * beta - 1.0) / 2.0) * i.powc(-(alpha + beta) / 2.0);
        assert!(max_abs(&(&op.matrix - rp * pref)) < 1e-10);

        // corner entry (v1 w1 <- v0 w0)
        let corner = i * t1 * (alpha * PI / 2.0).sin() * 8.0 * i.powc((alpha - 1.0) * (beta - 1.0) / 2.0);
        assert!((op.matrix[(3, 0)] - corner).norm() < 1e-10);
    }

    #[test]
    fn nilpotent_case_fixes_parameters() {
        let c = ctx(6);
        let p1 = SemicyclicParams::from_alpha(c64(0.3, 0.1), c64(0.0, 0.0), c).unwrap();
        let p2 = SemicyclicParams::from_alpha(c64(-0.6, 0.2), c64(0.0, 0.0), c).unwrap();
        let op = holonomy_matrix(&p1, &p2, false).unwrap();
        assert_eq!(op.target, op.source);
    }

    #[test]
    fn holonomy_transports_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [4, 5, 6] {
            let c = ctx(n);
            for _ in 0..10 {
                let p1 = SemicyclicParams::from_alpha(rand_alpha(&mut rng), c64(rng.gen_range(-1.0..1.0), 0.3), c).unwrap();
                let p2 = SemicyclicParams::from_alpha(rand_alpha(&mut rng), c64(0.2, rng.gen_range(-1.0..1.0)), c).unwrap();
                let op = holonomy_matrix(&p1, &p2, true).unwrap();
                let (xl, xr) = rmap(&p1.degree(), &p2.degree());
                let [d_right, d_left] = op.target_degrees();
                assert_eq!(d_left.kappa, xl.kappa);
                let rel = |a: &GStarColor, b: &GStarColor| a.distance(b) / (1.0 + b.epsilon.norm());
                assert!(rel(&d_left, &xl) < 1e-9 && rel(&d_right, &xr) < 1e-9);
            }
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let c = ctx(6);
        let p1 = SemicyclicParams::from_alpha(c64(0.3, 0.1), c64(0.4, 0.0), c).unwrap();
        let p2 = SemicyclicParams::from_alpha(c64(1.6, -0.2), c64(0.1, 0.7), c).unwrap();
        let op = holonomy_matrix(&p1, &p2, true).unwrap();
        let inv = holonomy_inverse(&op).unwrap();
        let id = DMatrix::<C64>::identity(9, 9);
        assert!(max_abs(&(&op.matrix * &inv.matrix - &id)) < 1e-10);
        assert_eq!(inv.target, op.source);
        assert!(!op.is_ill_conditioned());
    }

    #[test]
    fn twist_examples() {
        let c = ctx(4);
        let alpha = c64(0.45, 0.3);
        let p = SemicyclicParams::from_alpha(alpha, c64(0.0, 0.0), c).unwrap();
        let i = c64(0.0, 1.0);
        assert!((p.twist() - i.powc((alpha * alpha - 1.0) / 2.0)).norm() < 1e-12);
        // exponent vanishes at alpha = r - 1 (formula only; such alpha is not a valid module)
        let q = SemicyclicParams { alpha: c64(1.0, 0.0), ..p };
        assert!((q.twist() - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn twist_is_partial_trace_of_self_braiding() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [4, 5, 6] {
            let c = ctx(n);
            for _ in 0..5 {
                let y = GStarColor::new_unchecked(
                    C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-3.0..3.0)),
                    c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
                let m = rng.gen_range(-1..=1);
                let p = SemicyclicParams::from_color(&y, m, c).unwrap();
                let ps = SemicyclicParams::from_color(&smap(&y), m, c).unwrap();
                let op = holonomy_matrix(&p, &ps, true).unwrap();
                let tr = partial_trace_right(&op.matrix, c.r(), &ps).unwrap();
                let id = DMatrix::<C64>::identity(c.r(), c.r());
                assert!(max_abs(&(&tr - &id * p.twist())) < 1e-9);
                let inv = holonomy_inverse(&op).unwrap();
                let tr = partial_trace_right(&inv.matrix, c.r(), &ps).unwrap();
                assert!(max_abs(&(&tr - &id / p.twist())) < 1e-9);
                // independent of eps
                let y0 = GStarColor::new_unchecked(y.kappa, c64(3.0, -1.0));
                let p0 = SemicyclicParams::from_color(&y0, m, c).unwrap();
                assert!((p0.twist() - p.twist()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mod_dim_examples() {
        let c = ctx(4);
        let alpha = c64(0.6, -0.2);
        let p = SemicyclicParams::from_alpha(alpha, c64(0.0, 0.0), c).unwrap();
        let expected = (alpha * PI / 2.0).cos().inv();
        assert!((p.mod_dim().unwrap() - expected).norm() < 1e-12);
        let pt = p.with_t(c64(5.0, 2.0));
        assert_eq!(pt.mod_dim().unwrap(), p.mod_dim().unwrap());
    }

    #[test]
    fn partial_trace_identity_vanishes_and_factorizes() {
        let c = ctx(6);
        let pw = SemicyclicParams::from_alpha(c64(0.35, 0.15), c64(0.0, 0.0), c).unwrap();
        let id = DMatrix::<C64>::identity(9, 9);
        let tr = partial_trace_right(&id, 3, &pw).unwrap();
        assert!(max_abs(&tr) < 1e-12);

        let a = DMatrix::from_fn(3, 3, |i, j| c64(i as f64 + 0.5, j as f64 - 1.0));
        let b = DMatrix::from_fn(3, 3, |i, j| c64((i * j) as f64, 1.0 / (1.0 + i as f64 + j as f64)));
        let kw = pw.k_power_diag(1.0 - 3.0);
        let trb: C64 = (0..3).map(|j| kw[j] * b[(j, j)]).sum();
        let tr = partial_trace_right(&a.kronecker(&b), 3, &pw).unwrap();
        assert!(max_abs(&(tr - &a * trb)) < 1e-12);
        assert!(partial_trace_right(&a, 3, &pw).is_err());
    }
}

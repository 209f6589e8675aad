//! Seeded verification suites for the identities the invariant rests on.
//!
//! Every check draws from its own ChaCha stream, keyed by the user seed and a
//! fixed per-check stream id, so a check's output does not depend on which
//! other checks run.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braid::{
    act, destabilize, markov_rotate, solve_colorings, stabilize, BraidWord, ColorTuple,
};
use crate::error::Result;
use crate::group::{borel_of_color, rmap, rmap_inv, smap, GStarColor};
use crate::invariant::{
    braid_operator_from_params, conjecture_compare, invariant, markov_trace, params_of_coloring,
    zero_coloring,
};
use crate::qnum::{c64, RootContext, C64};
use crate::semicyclic::{holonomy_inverse, holonomy_matrix, partial_trace_right, SemicyclicParams};

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub tol: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `value < tol` (NaN fails).
    pub fn measured(suite: &'static str, name: impl Into<String>, value: f64, tol: f64, detail: impl Into<String>) -> Self {
        Check { suite, name: name.into(), pass: value < tol, value, tol, detail: detail.into() }
    }

    fn failed(suite: &'static str, name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { suite, name: name.into(), pass: false, value: f64::NAN, tol: 0.0, detail: detail.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status} {}/{} dev={:.3e} tol={:.0e}", self.suite, self.name, self.value, self.tol)?;
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        Ok(())
    }
}

/// Collected checks of one run.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    /// One line per check followed by a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out.push_str(&format!("SUMMARY passed={} failed={} total={}\n", self.passed(), self.failed(), self.checks.len()));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ybe,
    Braid,
    Markov,
    Golden4,
    Twist,
    Conjecture,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["ybe", "braid", "markov", "golden4", "twist", "conjecture", "all"];
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "ybe" => Suite::Ybe,
            "braid" => Suite::Braid,
            "markov" => Suite::Markov,
            "golden4" => Suite::Golden4,
            "twist" => Suite::Twist,
            "conjecture" => Suite::Conjecture,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite '{s}' (expected one of {})", Suite::NAMES.join(", "))),
        })
    }
}

/// Suite selection, optional root-of-unity restriction and seed.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub order: Option<u32>,
    pub seed: u64,
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { order: None, seed: 7, tol: crate::qnum::DEFAULT_TOL }
    }
}

impl VerifyConfig {
    fn orders(&self, defaults: &[u32]) -> Vec<u32> {
        match self.order {
            Some(n) => vec![n],
            None => defaults.to_vec(),
        }
    }
}

/// Stream for check `stream` under user seed `seed`.
pub fn check_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn uniform_c(rng: &mut ChaCha8Rng, half_width: f64) -> C64 {
    c64(rng.gen_range(-half_width..half_width), rng.gen_range(-half_width..half_width))
}

/// A color with `|kappa|` in `[1/2, 2]` staying `guard` away from `0, +-1`.
pub fn random_color(rng: &mut ChaCha8Rng, guard: f64) -> GStarColor {
    loop {
        let kappa = C64::from_polar(rng.gen_range(-0.69..0.69f64).exp(), rng.gen_range(-PI..PI));
        let y = GStarColor::new_unchecked(kappa, uniform_c(rng, 1.0));
        if y.is_admissible(guard) {
            return y;
        }
    }
}

pub fn random_branch(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-1..=1)
}

/// `alpha` in the box `|Re|, |Im| <= 2`, at least `guard` from the integers
/// and with `|[r alpha]| >= guard`.
pub fn random_alpha(rng: &mut ChaCha8Rng, ctx: &RootContext, guard: f64) -> C64 {
    loop {
        let a = uniform_c(rng, 2.0);
        if (a - a.re.round()).norm() >= guard && ctx.qnum(a * ctx.r() as f64).norm() >= guard {
            return a;
        }
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

fn color_dev(a: &GStarColor, b: &GStarColor) -> f64 {
    a.distance(b) / (1.0 + b.epsilon.norm())
}

fn guarded(suite: &'static str, name: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::failed(suite, name, format!("error: {e}")))
}

/// Trace `kappa` for which `kappa^2 + kappa^{-2} = trace`.
pub fn alexander_kappa(trace: f64) -> C64 {
    let x = (c64(trace, 0.0) + c64(trace * trace - 4.0, 0.0).sqrt()) / 2.0;
    x.sqrt()
}

/// Trefoil and figure-eight words with the trace of their Alexander roots.
pub fn test_knots() -> [(&'static str, BraidWord, f64); 2] {
    [
        ("trefoil", BraidWord::new(2, vec![1, 1, 1]).expect("valid word"), 1.0),
        ("figure-eight", BraidWord::new(3, vec![-2, 1, -2, 1]).expect("valid word"), 3.0),
    ]
}

// ----------------------------------------------------------------- golden4

/// The displayed `N = 4` matrix `RP(a, b, t)` in lexicographic basis order.
pub fn rp_matrix(a: C64, b: C64, t: C64) -> DMatrix<C64> {
    let i = c64(0.0, 1.0);
    let z = c64(0.0, 0.0);
    DMatrix::from_row_slice(
        4,
        4,
        &[
            i * a * b, z, z, z,
            z, b, i * b * (a + a.inv()), z,
            z, z, a, z,
            i * t * (a - a.inv()) * 4.0, z, z, i,
        ],
    )
}

/// Closed-form inverse of [`rp_matrix`].
pub fn rp_inverse(a: C64, b: C64, t: C64) -> DMatrix<C64> {
    let i = c64(0.0, 1.0);
    let z = c64(0.0, 0.0);
    DMatrix::from_row_slice(
        4,
        4,
        &[
            -i / (a * b), z, z, z,
            z, b.inv(), -i * (a + a.inv()) / a, z,
            z, z, a.inv(), z,
            i * t * (a - a.inv()) * 4.0 / (a * b), z, z, -i,
        ],
    )
}

fn golden_prefactor(alpha: C64, beta: C64) -> C64 {
    let i = c64(0.0, 1.0);
    i.powc((alpha * beta - 1.0) / 2.0) * i.powc(-(alpha + beta) / 2.0)
}

/// Un-flipped holonomy matrix at `N = 4` against the displayed closed form.
pub fn golden_rmatrix(samples: usize, seed: u64) -> Check {
    guarded("golden4", "rmatrix", || {
        let ctx = RootContext::with_default_tol(4)?;
        let mut rng = check_rng(seed, 101);
        let i = c64(0.0, 1.0);
        let mut dev: f64 = 0.0;
        for _ in 0..samples {
            let alpha = random_alpha(&mut rng, &ctx, 0.05);
            let beta = random_alpha(&mut rng, &ctx, 0.05);
            let t1 = uniform_c(&mut rng, 2.0);
            let p1 = SemicyclicParams::new(alpha, t1, 0, ctx)?;
            let p2 = SemicyclicParams::new(beta, uniform_c(&mut rng, 2.0), 0, ctx)?;
            let op = holonomy_matrix(&p1, &p2, false)?;
            let expected = rp_matrix(i.powc(alpha), i.powc(beta), t1) * golden_prefactor(alpha, beta);
            dev = dev.max(max_abs(&(&op.matrix - expected)));
        }
        Ok(Check::measured("golden4", "rmatrix", dev, 1e-10, format!("samples={samples}")))
    })
}

/// `rep_matrices` at `r = 2` against the displayed `K`, `F`, `E_t`.
pub fn golden_module(samples: usize, seed: u64) -> Check {
    guarded("golden4", "module-matrices", || {
        let ctx = RootContext::with_default_tol(4)?;
        let mut rng = check_rng(seed, 102);
        let i = c64(0.0, 1.0);
        let z = c64(0.0, 0.0);
        let mut dev: f64 = 0.0;
        for _ in 0..samples {
            let alpha = random_alpha(&mut rng, &ctx, 0.05);
            let t = uniform_c(&mut rng, 2.0);
            let m = SemicyclicParams::new(alpha, t, 0, ctx)?.rep_matrices();
            let half = alpha * (PI / 2.0);
            let k = DMatrix::from_row_slice(2, 2, &[i.powc(alpha + 1.0), z, z, i.powc(alpha - 1.0)]);
            let f = DMatrix::from_row_slice(2, 2, &[z, z, c64(1.0, 0.0), z]);
            let e = DMatrix::from_row_slice(2, 2, &[z, half.cos(), t * half.sin() * 4.0, z]);
            dev = dev.max(max_abs(&(m.k - k))).max(max_abs(&(m.f - f))).max(max_abs(&(m.e_t - e)));
        }
        Ok(Check::measured("golden4", "module-matrices", dev, 1e-12, format!("samples={samples}")))
    })
}

/// Numerical inverse against the closed-form inverse of `RP`.
pub fn golden_inverse(samples: usize, seed: u64) -> Check {
    guarded("golden4", "inverse", || {
        let ctx = RootContext::with_default_tol(4)?;
        let mut rng = check_rng(seed, 103);
        let i = c64(0.0, 1.0);
        let mut dev: f64 = 0.0;
        for _ in 0..samples {
            let alpha = random_alpha(&mut rng, &ctx, 0.05);
            let beta = random_alpha(&mut rng, &ctx, 0.05);
            let t1 = uniform_c(&mut rng, 2.0);
            let p1 = SemicyclicParams::new(alpha, t1, 0, ctx)?;
            let p2 = SemicyclicParams::new(beta, uniform_c(&mut rng, 2.0), 0, ctx)?;
            let inv = holonomy_inverse(&holonomy_matrix(&p1, &p2, false)?)?;
            let expected = rp_inverse(i.powc(alpha), i.powc(beta), t1) / golden_prefactor(alpha, beta);
            let scale = max_abs(&expected).max(1.0);
            dev = dev.max(max_abs(&(&inv.matrix - &expected)) / scale);
        }
        Ok(Check::measured("golden4", "inverse", dev, 1e-9, format!("samples={samples} relative")))
    })
}

/// Parameter transport against the displayed map
/// `((a,t1),(b,t2)) -> ((a,-t1/b^2),(b,(1-1/a^4)t1-t2/a^2))`.
pub fn golden_set_map(samples: usize, seed: u64) -> Check {
    guarded("golden4", "set-map", || {
        let ctx = RootContext::with_default_tol(4)?;
        let mut rng = check_rng(seed, 104);
        let i = c64(0.0, 1.0);
        let mut dev: f64 = 0.0;
        for _ in 0..samples {
            let (alpha, beta) = (random_alpha(&mut rng, &ctx, 0.05), random_alpha(&mut rng, &ctx, 0.05));
            let (t1, t2) = (uniform_c(&mut rng, 2.0), uniform_c(&mut rng, 2.0));
            let op = holonomy_matrix(&SemicyclicParams::new(alpha, t1, 0, ctx)?, &SemicyclicParams::new(beta, t2, 0, ctx)?, false)?;
            let (a, b) = (i.powc(alpha), i.powc(beta));
            let t1p = -t1 / (b * b);
            let t2p = (c64(1.0, 0.0) - a.powi(-4)) * t1 - t2 / (a * a);
            let d = (op.target[0].t - t1p).norm() / (1.0 + t1p.norm());
            let d2 = (op.target[1].t - t2p).norm() / (1.0 + t2p.norm());
            dev = dev.max(d).max(d2);
        }
        Ok(Check::measured("golden4", "set-map", dev, 1e-10, format!("samples={samples} relative")))
    })
}

// --------------------------------------------------------------------- ybe

/// `R23 R13 R12 = R12 R13 R23` on random admissible triples.
pub fn set_yang_baxter(samples: usize, seed: u64) -> Check {
    let mut rng = check_rng(seed, 201);
    let mut dev: f64 = 0.0;
    for _ in 0..samples {
        let (x, y, z) = (random_color(&mut rng, 0.1), random_color(&mut rng, 0.1), random_color(&mut rng, 0.1));
        let lhs = {
            let (a, b) = rmap(&x, &y);
            let (a, c) = rmap(&a, &z);
            let (b, c) = rmap(&b, &c);
            [a, b, c]
        };
        let rhs = {
            let (b, c) = rmap(&y, &z);
            let (a, c) = rmap(&x, &c);
            let (a, b) = rmap(&a, &b);
            [a, b, c]
        };
        for (p, q) in lhs.iter().zip(&rhs) {
            dev = dev.max(p.distance(q));
        }
    }
    Check::measured("ybe", "set-yang-baxter", dev, 1e-9, format!("samples={samples}"))
}

/// `rmap` is a bijection that preserves `kappa` and the trace of `psi`.
pub fn rmap_properties(samples: usize, seed: u64) -> Check {
    let mut rng = check_rng(seed, 202);
    let mut dev: f64 = 0.0;
    let tr = |c: &GStarColor| borel_of_color(c).trace();
    for _ in 0..samples {
        let (x, y) = (random_color(&mut rng, 0.1), random_color(&mut rng, 0.1));
        let (l, r) = rmap(&x, &y);
        let (x2, y2) = rmap_inv(&l, &r);
        dev = dev.max(x2.distance(&x)).max(y2.distance(&y));
        dev = dev.max((l.kappa - x.kappa).norm()).max((r.kappa - y.kappa).norm());
        dev = dev.max((tr(&l) - tr(&x)).norm()).max((tr(&r) - tr(&y)).norm());
        let (l, r) = rmap(&y, &smap(&y));
        dev = dev.max(l.distance(&smap(&y))).max(r.distance(&y));
    }
    Check::measured("ybe", "rmap-bijective-conjugacy", dev, 1e-9, format!("samples={samples}"))
}

/// `m` acting on tensor slots `i < j` of three qubits.
fn embed3(m: &DMatrix<C64>, i: usize, j: usize) -> DMatrix<C64> {
    let k = 3 - i - j;
    let bit = |x: usize, s: usize| (x >> (2 - s)) & 1;
    DMatrix::from_fn(8, 8, |x, y| {
        if bit(x, k) != bit(y, k) {
            c64(0.0, 0.0)
        } else {
            m[(bit(x, i) * 2 + bit(x, j), bit(y, i) * 2 + bit(y, j))]
        }
    })
}

/// The displayed lifted relation
/// `RP12(a,b,-t1/c^2) RP13(a,c,t1) RP23(b,c,t2) = RP23(b,c,(t1(a^4-1)-t2 a^2)/a^4) RP13(a,c,-t1/b^2) RP12(a,b,t1)`.
pub fn lifted_rp_yang_baxter(samples: usize, seed: u64) -> Check {
    let mut rng = check_rng(seed, 203);
    let mut dev: f64 = 0.0;
    let nonzero = |rng: &mut ChaCha8Rng| loop {
        let z = C64::from_polar(rng.gen_range(-0.69..0.69f64).exp(), rng.gen_range(-PI..PI));
        if (z * z - 1.0).norm() > 0.1 && (z * z + 1.0).norm() > 0.1 {
            return z;
        }
    };
    for _ in 0..samples {
        let (a, b, c) = (nonzero(&mut rng), nonzero(&mut rng), nonzero(&mut rng));
        let (t1, t2) = (uniform_c(&mut rng, 1.0), uniform_c(&mut rng, 1.0));
        let lhs = embed3(&rp_matrix(a, b, -t1 / (c * c)), 0, 1)
            * embed3(&rp_matrix(a, c, t1), 0, 2)
            * embed3(&rp_matrix(b, c, t2), 1, 2);
        let t2p = (t1 * (a.powi(4) - 1.0) - t2 * a * a) / a.powi(4);
        let rhs = embed3(&rp_matrix(b, c, t2p), 1, 2)
            * embed3(&rp_matrix(a, c, -t1 / (b * b)), 0, 2)
            * embed3(&rp_matrix(a, b, t1), 0, 1);
        dev = dev.max(max_abs(&(&lhs - &rhs)) / max_abs(&lhs).max(1.0));
    }
    Check::measured("ybe", "lifted-rp-yang-baxter", dev, 1e-9, format!("samples={samples} relative"))
}

// ------------------------------------------------------------------- braid

/// Colored braid relation for the holonomy braiding on three strands, for
/// the words `(1 2 1, 2 1 2)`, their inverses and a mixed pair; checks the
/// `r^3 x r^3` matrices and the parameter bookkeeping.
pub fn holonomy_braid_relation(order: u32, samples: usize, seed: u64, tol: f64) -> Vec<Check> {
    let name = format!("holonomy-braid-relation N={order}");
    let mut rng = check_rng(seed, 300 + order as u64);
    let run = |rng: &mut ChaCha8Rng| -> Result<(f64, f64)> {
        let ctx = RootContext::new(order, tol)?;
        let pairs: [(&[i32], &[i32]); 3] = [(&[1, 2, 1], &[2, 1, 2]), (&[-1, -2, -1], &[-2, -1, -2]), (&[1, 2, -1], &[-2, 1, 2])];
        let (mut mdev, mut cdev): (f64, f64) = (0.0, 0.0);
        for _ in 0..samples {
            let y = ColorTuple {
                colors: (0..3).map(|_| random_color(rng, 0.1)).collect(),
                branches: (0..3).map(|_| random_branch(rng)).collect(),
            };
            let params = params_of_coloring(&y, ctx)?;
            for (l, r) in pairs {
                let (bl, br) = (BraidWord::new(3, l.to_vec())?, BraidWord::new(3, r.to_vec())?);
                let (ol, or) = (braid_operator_from_params(&bl, &params)?, braid_operator_from_params(&br, &params)?);
                mdev = mdev.max(max_abs(&(&ol.matrix - &or.matrix)) / max_abs(&ol.matrix).max(1.0));
                let expected = act(&bl, &y);
                if expected.branches != ol.final_colors().branches || expected.branches != or.final_colors().branches {
                    cdev = f64::INFINITY;
                }
                for ((a, b), e) in ol.final_colors().colors.iter().zip(&or.final_colors().colors).zip(&expected.colors) {
                    if a.kappa != e.kappa || b.kappa != e.kappa {
                        cdev = cdev.max((a.kappa - e.kappa).norm().max((b.kappa - e.kappa).norm()).max(1e-300));
                    }
                    cdev = cdev.max(color_dev(a, e)).max(color_dev(b, e));
                }
            }
        }
        Ok((mdev, cdev))
    };
    match run(&mut rng) {
        Ok((m, c)) => vec![
            Check::measured("braid", name.clone(), m, 1e-8, format!("samples={samples} matrix")),
            Check::measured("braid", format!("{name} bookkeeping"), c, 1e-9, format!("samples={samples} colors")),
        ],
        Err(e) => vec![Check::failed("braid", name, format!("error: {e}"))],
    }
}

/// Target degrees of the holonomy braiding are `rmap` of the source degrees,
/// exactly in `kappa`.
pub fn degree_transport(order: u32, samples: usize, seed: u64, tol: f64) -> Check {
    let name = format!("degree-transport N={order}");
    guarded("braid", &name.clone(), || {
        let ctx = RootContext::new(order, tol)?;
        let mut rng = check_rng(seed, 320 + order as u64);
        let mut dev: f64 = 0.0;
        for _ in 0..samples {
            let (x, y) = (random_color(&mut rng, 0.1), random_color(&mut rng, 0.1));
            let (mx, my) = (random_branch(&mut rng), random_branch(&mut rng));
            let px = SemicyclicParams::from_color(&x, mx, ctx)?;
            let py = SemicyclicParams::from_color(&y, my, ctx)?;
            let op = holonomy_matrix(&px, &py, true)?;
            let (xl, xr) = rmap(&px.degree(), &py.degree());
            let [d_right, d_left] = op.target_degrees();
            if d_left.kappa != xl.kappa || d_right.kappa != xr.kappa {
                dev = f64::INFINITY;
            }
            dev = dev.max(color_dev(&d_left, &xl)).max(color_dev(&d_right, &xr));
            dev = dev.max(color_dev(&px.degree(), &x)).max(color_dev(&py.degree(), &y));
        }
        Ok(Check::measured("braid", name, dev, 1e-9, format!("samples={samples}")))
    })
}

/// `C C^{-1} = Id` as operators on two strands, both letter orders.
pub fn inverse_pairs(order: u32, samples: usize, seed: u64, tol: f64) -> Check {
    let name = format!("inverse-pairs N={order}");
    guarded("braid", &name.clone(), || {
        let ctx = RootContext::new(order, tol)?;
        let mut rng = check_rng(seed, 340 + order as u64);
        let mut dev: f64 = 0.0;
        let dim = ctx.r() * ctx.r();
        for _ in 0..samples {
            let y = ColorTuple {
                colors: vec![random_color(&mut rng, 0.1), random_color(&mut rng, 0.1)],
                branches: vec![random_branch(&mut rng), random_branch(&mut rng)],
            };
            let params = params_of_coloring(&y, ctx)?;
            for w in [[1, -1], [-1, 1]] {
                let op = braid_operator_from_params(&BraidWord::new(2, w.to_vec())?, &params)?;
                dev = dev.max(max_abs(&(&op.matrix - DMatrix::<C64>::identity(dim, dim))));
                dev = dev.max(op.closure_residual());
            }
        }
        Ok(Check::measured("braid", name, dev, 1e-9, format!("samples={samples}")))
    })
}

// ------------------------------------------------------------------- twist

/// `(E_t)^r = epsilon Id` with `epsilon` the degree's second entry.
pub fn semicyclic_power(order: u32, samples: usize, seed: u64, tol: f64) -> Check {
    let name = format!("semicyclic-power N={order}");
    guarded("twist", &name.clone(), || {
        let ctx = RootContext::new(order, tol)?;
        let mut rng = check_rng(seed, 400 + order as u64);
        let r = ctx.r();
        let mut dev: f64 = 0.0;
        for _ in 0..samples {
            let p = SemicyclicParams::from_alpha(random_alpha(&mut rng, &ctx, 0.05), uniform_c(&mut rng, 1.0), ctx)?;
            let e = p.rep_matrices().e_t;
            let mut pow = DMatrix::<C64>::identity(r, r);
            for _ in 0..r {
                pow = &e * pow;
            }
            let eps = p.degree().epsilon;
            dev = dev.max(max_abs(&(pow - DMatrix::<C64>::identity(r, r) * eps)) / (1.0 + eps.norm()));
        }
        Ok(Check::measured("twist", name, dev, 1e-9, format!("samples={samples} relative")))
    })
}

/// Defining relations of the small quantum group at `t = 0`, and `E_t - E_0`
/// supported on the corner entry.
pub fn untwisted_relations(order: u32, samples: usize, seed: u64, tol: f64) -> Check {
    let name = format!("quantum-group-relations N={order}");
    guarded("twist", &name.clone(), || {
        let ctx = RootContext::new(order, tol)?;
        let mut rng = check_rng(seed, 420 + order as u64);
        let r = ctx.r();
        let xi = ctx.xi();
        let mut dev: f64 = 0.0;
        for _ in 0..samples {
            let p = SemicyclicParams::from_alpha(random_alpha(&mut rng, &ctx, 0.05), c64(0.0, 0.0), ctx)?;
            let m = p.rep_matrices();
            let kinv = m.k.clone().try_inverse().ok_or(crate::error::Error::Singular)?;
            dev = dev.max(max_abs(&(&m.k * &m.e_t * &kinv - &m.e_t * (xi * xi))));
            dev = dev.max(max_abs(&(&m.k * &m.f * &kinv - &m.f / (xi * xi))));
            let comm = &m.e_t * &m.f - &m.f * &m.e_t;
            dev = dev.max(max_abs(&(comm - (&m.k - &kinv) / (xi - xi.inv()))));
            let mut fr = DMatrix::<C64>::identity(r, r);
            for _ in 0..r {
                fr = &m.f * fr;
            }
            dev = dev.max(max_abs(&fr));
            let twisted = p.with_t(uniform_c(&mut rng, 1.0)).rep_matrices().e_t;
            let mut diff = twisted - &m.e_t;
            diff[(r - 1, 0)] = c64(0.0, 0.0);
            dev = dev.max(max_abs(&diff));
        }
        Ok(Check::measured("twist", name, dev, 1e-10, format!("samples={samples}")))
    })
}

/// Right partial trace of `C_{y,s(y)}^{+-1}` is `theta^{+-1} Id`; `theta`
/// depends only on `kappa`.
pub fn twist_identity(order: u32, samples: usize, seed: u64, tol: f64) -> Check {
    let name = format!("twist-partial-trace N={order}");
    guarded("twist", &name.clone(), || {
        let ctx = RootContext::new(order, tol)?;
        let mut rng = check_rng(seed, 440 + order as u64);
        let r = ctx.r();
        let id = DMatrix::<C64>::identity(r, r);
        let mut dev: f64 = 0.0;
        for _ in 0..samples {
            let y = random_color(&mut rng, 0.1);
            let m = random_branch(&mut rng);
            let p = SemicyclicParams::from_color(&y, m, ctx)?;
            let ps = SemicyclicParams::from_color(&smap(&y), m, ctx)?;
            let op = holonomy_matrix(&p, &ps, true)?;
            let theta = p.twist();
            dev = dev.max(max_abs(&(partial_trace_right(&op.matrix, r, &ps)? - &id * theta)));
            let inv = holonomy_inverse(&op)?;
            dev = dev.max(max_abs(&(partial_trace_right(&inv.matrix, r, &ps)? - &id / theta)));
            let other = GStarColor::new_unchecked(y.kappa, uniform_c(&mut rng, 3.0));
            dev = dev.max((SemicyclicParams::from_color(&other, m, ctx)?.twist() - theta).norm());
        }
        Ok(Check::measured("twist", name, dev, 1e-9, format!("samples={samples}")))
    })
}

/// One-strand trace of the identity is the modified dimension; two-strand
/// identity traces vanish.
pub fn modified_dimension(order: u32, samples: usize, seed: u64, tol: f64) -> Vec<Check> {
    let name = format!("modified-dimension N={order}");
    let mut rng = check_rng(seed, 460 + order as u64);
    let run = |rng: &mut ChaCha8Rng| -> Result<(f64, f64)> {
        let ctx = RootContext::new(order, tol)?;
        let r = ctx.r();
        let (mut one, mut two): (f64, f64) = (0.0, 0.0);
        for _ in 0..samples {
            let p = SemicyclicParams::from_color(&random_color(rng, 0.1), random_branch(rng), ctx)?;
            let q = SemicyclicParams::from_color(&random_color(rng, 0.1), random_branch(rng), ctx)?;
            let md = p.mod_dim()?;
            one = one.max((markov_trace(&DMatrix::identity(r, r), &[p])? - md).norm() / md.norm().max(1.0));
            two = two.max(markov_trace(&DMatrix::identity(r * r, r * r), &[p, q])?.norm());
        }
        Ok((one, two))
    };
    match run(&mut rng) {
        Ok((one, two)) => vec![
            Check::measured("twist", name.clone(), one, 1e-12, format!("samples={samples} one strand")),
            Check::measured("twist", format!("{name} two strands"), two, 1e-10, format!("samples={samples}")),
        ],
        Err(e) => vec![Check::failed("twist", name, format!("error: {e}"))],
    }
}

// ------------------------------------------------------------------ markov

/// Starting colorings on the test knots at their Alexander roots: the zero
/// coloring and a scaled non-abelian solution.
fn markov_starts(ctx: RootContext, branch: i64, scale: C64) -> Result<Vec<(String, BraidWord, ColorTuple)>> {
    let mut out = Vec::new();
    for (name, b, trace) in test_knots() {
        let kappa = alexander_kappa(trace);
        out.push((format!("{name} eps=0"), b.clone(), zero_coloring(&b, &[kappa], &[branch])?));
        let sol = solve_colorings(&b, &[kappa], &[branch], ctx.tol())?;
        out.push((format!("{name} eps=solved"), b.clone(), sol.coloring(&sol.basis[0], scale)));
    }
    Ok(out)
}

/// Raw invariant equal under every rotation; stabilizations multiply it by
/// `theta^{+-1}` and leave the normalized value unchanged.
pub fn markov_single_moves(order: u32, seed: u64, tol: f64) -> Check {
    let name = format!("markov-single-moves N={order}");
    guarded("markov", &name.clone(), || {
        let ctx = RootContext::new(order, tol)?;
        let mut rng = check_rng(seed, 500 + order as u64);
        let mut dev: f64 = 0.0;
        for (_, b, y) in markov_starts(ctx, random_branch(&mut rng), uniform_c(&mut rng, 1.5))? {
            let base = invariant(&b, &y, ctx)?;
            for k in 1..b.len() as i64 {
                let (b2, y2) = markov_rotate(&b, &y, k, tol)?;
                dev = dev.max(rel(invariant(&b2, &y2, ctx)?.raw, base.raw));
            }
            let theta = SemicyclicParams::from_color(&y.colors[b.strands() - 1], y.branches[b.strands() - 1], ctx)?.twist();
            for sign in [1, -1] {
                let (b2, y2) = stabilize(&b, &y, sign, tol)?;
                let res = invariant(&b2, &y2, ctx)?;
                dev = dev.max(rel(res.raw, base.raw * theta.powi(sign)));
                dev = dev.max(rel(res.normalized, base.normalized));
            }
        }
        Ok(Check::measured("markov", name, dev, 1e-8, "rotations and stabilizations, relative"))
    })
}

/// `t(AB) = t'(BA)` with the permuted parameter lists, for each split of
/// the trefoil word.
pub fn trace_symmetry(order: u32, seed: u64, tol: f64) -> Check {
    let name = format!("trace-symmetry N={order}");
    guarded("markov", &name.clone(), || {
        let ctx = RootContext::new(order, tol)?;
        let mut rng = check_rng(seed, 520 + order as u64);
        let mut dev: f64 = 0.0;
        for (_, b, y) in markov_starts(ctx, random_branch(&mut rng), uniform_c(&mut rng, 1.5))? {
            let params = params_of_coloring(&y, ctx)?;
            for k in 1..b.len() {
                let first = b.prefix(k);
                let rest = BraidWord::new(b.strands(), b.letters()[k..].to_vec())?;
                let mid = params_of_coloring(&act(&first, &y), ctx)?;
                let a = braid_operator_from_params(&first, &params)?.matrix;
                let bm = braid_operator_from_params(&rest, &mid)?.matrix;
                let lhs = markov_trace(&(&bm * &a), &params)?;
                let rhs = markov_trace(&(&a * &bm), &mid)?;
                dev = dev.max(rel(lhs, rhs));
            }
        }
        Ok(Check::measured("markov", name, dev, 1e-8, "relative"))
    })
}

/// Outcome of random Markov move sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceStats {
    pub sequences: usize,
    pub moves: usize,
    pub normalized_dev: f64,
    pub raw_dev: f64,
}

/// Random sequences of at most `max_moves` rotations, stabilizations and
/// destabilizations, cycling through the starting colorings. Tracks the
/// expected product of `theta^{+-1}` for the raw trace.
pub fn markov_sequences(order: u32, sequences: usize, max_moves: usize, seed: u64, tol: f64) -> Result<SequenceStats> {
    let ctx = RootContext::new(order, tol)?;
    let mut rng = check_rng(seed, 540 + order as u64);
    let r = ctx.r();
    // keep r^n <= 256
    let max_strands = (256f64.ln() / (r as f64).ln()).floor() as usize;
    let mut stats = SequenceStats { sequences, moves: 0, normalized_dev: 0.0, raw_dev: 0.0 };
    for s in 0..sequences {
        let branch = random_branch(&mut rng);
        let scale = uniform_c(&mut rng, 1.5);
        let starts = markov_starts(ctx, branch, scale)?;
        let (_, mut b, mut y) = starts[s % starts.len()].clone();
        let base = invariant(&b, &y, ctx)?;
        let mut factor = c64(1.0, 0.0);
        let moves = rng.gen_range(1..=max_moves);
        for _ in 0..moves {
            match rng.gen_range(0..3) {
                0 => {
                    let k = rng.gen_range(0..b.len().max(1)) as i64;
                    (b, y) = markov_rotate(&b, &y, k, tol)?;
                }
                1 if b.strands() < max_strands => {
                    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                    let n = b.strands();
                    let theta = SemicyclicParams::from_color(&y.colors[n - 1], y.branches[n - 1], ctx)?.twist();
                    (b, y) = stabilize(&b, &y, sign, tol)?;
                    factor *= theta.powi(sign);
                }
                _ => {
                    let last = b.strands() as i32 - 1;
                    let hits: Vec<usize> = (0..b.len()).filter(|&i| b.letters()[i].abs() == last).collect();
                    if hits.len() != 1 {
                        continue;
                    }
                    let (b2, y2) = markov_rotate(&b, &y, hits[0] as i64, tol)?;
                    let sign = b2.letters()[0].signum();
                    let n = b2.strands();
                    let theta = SemicyclicParams::from_color(&y2.colors[n - 2], y2.branches[n - 2], ctx)?.twist();
                    (b, y) = destabilize(&b2, &y2, tol)?;
                    factor /= theta.powi(sign);
                }
            }
            stats.moves += 1;
        }
        let res = invariant(&b, &y, ctx)?;
        stats.normalized_dev = stats.normalized_dev.max(rel(res.normalized, base.normalized));
        stats.raw_dev = stats.raw_dev.max(rel(res.raw, base.raw * factor));
    }
    Ok(stats)
}

pub fn markov_sequence_checks(order: u32, sequences: usize, seed: u64, tol: f64) -> Vec<Check> {
    let name = format!("markov-sequences N={order}");
    match markov_sequences(order, sequences, 6, seed, tol) {
        Ok(s) => vec![
            Check::measured("markov", name.clone(), s.normalized_dev, 1e-6, format!("sequences={} moves={} normalized", s.sequences, s.moves)),
            Check::measured("markov", format!("{name} raw-factor"), s.raw_dev, 1e-8, format!("sequences={} raw vs theta product", s.sequences)),
        ],
        Err(e) => vec![Check::failed("markov", name, format!("error: {e}"))],
    }
}

// -------------------------------------------------------------- conjecture

/// Solved non-abelian invariant against the `epsilon = 0` value at the
/// Alexander roots of the test knots, for the scalings `1, 2+i, 0.1`.
pub fn conjecture_checks(order: u32, tol: f64) -> Vec<Check> {
    let scalings = [c64(1.0, 0.0), c64(2.0, 1.0), c64(0.1, 0.0)];
    let mut out = Vec::new();
    for (name, b, trace) in test_knots() {
        let label = format!("{name} N={order}");
        let res = RootContext::new(order, tol)
            .and_then(|ctx| conjecture_compare(&b, &[alexander_kappa(trace)], &[0], &scalings, 0, ctx));
        match res {
            Ok(rep) => {
                let values: Vec<String> = rep.values.iter().map(|v| format!("{:.10}", v.normalized)).collect();
                let max_t = rep.values.iter().map(|v| v.max_t).fold(0.0, f64::max);
                let dev = if rep.pass || !rep.values.is_empty() {
                    rep.values.iter().map(|v| v.rel_diff).fold(0.0, f64::max)
                } else {
                    f64::NAN
                };
                let mut check = Check::measured(
                    "conjecture",
                    label,
                    dev,
                    rep.tolerance,
                    format!("ado={:.10} solved=[{}] max|t|={:.3}", rep.ado, values.join(", "), max_t),
                );
                check.pass = rep.pass;
                out.push(check);
            }
            Err(e) => out.push(Check::failed("conjecture", label, format!("error: {e}"))),
        }
    }
    out
}

// --------------------------------------------------------------------- run

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Report {
    let mut checks = Vec::new();
    let seed = cfg.seed;
    let tol = cfg.tol;
    let all = suite == Suite::All;
    if all || suite == Suite::Golden4 {
        checks.push(golden_module(20, seed));
        checks.push(golden_rmatrix(20, seed));
        checks.push(golden_inverse(20, seed));
        checks.push(golden_set_map(20, seed));
    }
    if all || suite == Suite::Ybe {
        checks.push(set_yang_baxter(1000, seed));
        checks.push(rmap_properties(200, seed));
        checks.push(lifted_rp_yang_baxter(100, seed));
    }
    if all || suite == Suite::Braid {
        for n in cfg.orders(&[4, 6]) {
            checks.extend(holonomy_braid_relation(n, 50, seed, tol));
            checks.push(degree_transport(n, 50, seed, tol));
            checks.push(inverse_pairs(n, 20, seed, tol));
        }
    }
    if all || suite == Suite::Twist {
        for n in cfg.orders(&[3, 4, 5, 6, 8]) {
            checks.push(semicyclic_power(n, 20, seed, tol));
            checks.push(untwisted_relations(n, 20, seed, tol));
        }
        for n in cfg.orders(&[4, 6]) {
            checks.push(twist_identity(n, 20, seed, tol));
            checks.extend(modified_dimension(n, 20, seed, tol));
        }
    }
    if all || suite == Suite::Markov {
        for n in cfg.orders(&[4, 6]) {
            checks.push(markov_single_moves(n, seed, tol));
            checks.push(trace_symmetry(n, seed, tol));
            checks.extend(markov_sequence_checks(n, 40, seed, tol));
        }
    }
    if all || suite == Suite::Conjecture {
        for n in cfg.orders(&[4, 6]) {
            checks.extend(conjecture_checks(n, tol));
        }
    }
    Report { checks }
}

//! Arithmetic at a fixed root of unity `xi = exp(2 pi i / N)`.
//!
//! Quantum numbers are the antisymmetric kind, `[x] = xi^x - xi^{-x}`, and
//! complex powers are always taken through the exponential,
//! `xi^x = exp(2 pi i x / N)`.

use std::f64::consts::PI;

use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Default comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The root of unity together with the derived order `r` and sign `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootContext {
    order: u32,
    r: u32,
    xi: C64,
    sigma: C64,
    sigma_sq: f64,
    tol: f64,
}

impl RootContext {
    /// Builds the context for `xi = exp(2 pi i / order)`.
    ///
    /// `r` is `order / 2` for even orders and `order` for odd ones, and
    /// `sigma = xi^{-r(r-1)/2}`.
    pub fn new(order: u32, tol: f64) -> Result<Self> {
        if order < 3 {
            return Err(Error::OrderTooSmall(order));
        }
        let r = if order % 2 == 0 { order / 2 } else { order };
        let mut ctx = RootContext {
            order,
            r,
            xi: C64::new(0.0, 0.0),
            sigma: C64::new(0.0, 0.0),
            sigma_sq: 1.0,
            tol,
        };
        ctx.xi = ctx.xi_pow_real(1.0);
        let e = -((r as i64) * (r as i64 - 1) / 2);
        ctx.sigma = ctx.xi_pow_int(e);
        // xi^{-r(r-1)} = (xi^r)^{1-r}, and xi^r is -1 for even N and 1 for odd N.
        if order % 2 == 0 && r % 2 == 0 {
            ctx.sigma_sq = -1.0;
        }
        Ok(ctx)
    }

    pub fn with_default_tol(order: u32) -> Result<Self> {
        Self::new(order, DEFAULT_TOL)
    }

    /// The order `N` of `xi`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Module dimension `r`.
    pub fn r(&self) -> usize {
        self.r as usize
    }

    pub fn xi(&self) -> C64 {
        self.xi
    }

    pub fn sigma(&self) -> C64 {
        self.sigma
    }

    /// `sigma^2`, which is exactly `1` or `-1`.
    pub fn sigma_squared(&self) -> f64 {
        self.sigma_sq
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// `xi^x = exp(2 pi i x / N)`.
    ///
    /// The real part of `x` is first reduced modulo `N`, which leaves the value
    /// unchanged and keeps the phase accurate for large arguments.
    pub fn xi_pow(&self, x: C64) -> C64 {
        let n = self.order as f64;
        let re = x.re.rem_euclid(n);
        let arg = 2.0 * PI / n;
        // exp(i * arg * (re + i im)) = exp(-arg * im) * exp(i * arg * re)
        C64::from_polar((-arg * x.im).exp(), arg * re)
    }

    pub fn xi_pow_real(&self, x: f64) -> C64 {
        self.xi_pow(C64::new(x, 0.0))
    }

    /// Integer powers, reduced exactly modulo `N` before exponentiating.
    pub fn xi_pow_int(&self, k: i64) -> C64 {
        let m = k.rem_euclid(self.order as i64);
        self.xi_pow_real(m as f64)
    }

    /// Quantum number `[x] = xi^x - xi^{-x}`.
    pub fn qnum(&self, x: C64) -> C64 {
        self.xi_pow(x) - self.xi_pow(-x)
    }

    pub fn qnum_real(&self, x: f64) -> C64 {
        self.qnum(C64::new(x, 0.0))
    }

    /// `[n]! = [n][n-1]...[1]`, defined here only for `n < r`.
    pub fn qfact(&self, n: u32) -> Result<C64> {
        if n >= self.r {
            return Err(Error::VanishingFactorial { n, r: self.r });
        }
        Ok((1..=n).fold(C64::new(1.0, 0.0), |acc, k| {
            acc * self.qnum_real(k as f64)
        }))
    }
}

/// `Log(x) + 2 pi i m`, with the principal branch taking `Im` in `(-pi, pi]`.
pub fn branch_log(x: C64, m: i64) -> Result<C64> {
    if x.norm() == 0.0 {
        return Err(Error::LogOfZero);
    }
    let mut arg = x.arg();
    // atan2 returns -pi on the negative real axis with a negative-zero imaginary part.
    if arg <= -PI {
        arg = PI;
    }
    Ok(C64::new(x.norm().ln(), arg + 2.0 * PI * m as f64))
}

/// Max of `|a_i - b_i|` over paired values.
pub fn max_dev<'a>(a: impl IntoIterator<Item = &'a C64>, b: impl IntoIterator<Item = &'a C64>) -> f64 {
    a.into_iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn context_n4() {
        let ctx = RootContext::with_default_tol(4).unwrap();
        assert_eq!(ctx.r(), 2);
        assert!(close(ctx.xi(), c64(0.0, 1.0), 1e-15));
        assert!(close(ctx.sigma(), c64(0.0, -1.0), 1e-15));
    }

    #[test]
    fn context_n3_and_n6() {
        let ctx = RootContext::with_default_tol(3).unwrap();
        assert_eq!(ctx.r(), 3);
        assert!(close(ctx.sigma(), c64(1.0, 0.0), 1e-15));

        let ctx = RootContext::with_default_tol(6).unwrap();
        assert_eq!(ctx.r(), 3);
        // i^{1-3} = -1
        assert!(close(ctx.sigma(), c64(-1.0, 0.0), 1e-15));
        assert!(close(ctx.sigma().powi(4), c64(1.0, 0.0), 1e-14));
    }

    #[test]
    fn sigma_closed_form() {
        for n in 3..=16u32 {
            let ctx = RootContext::with_default_tol(n).unwrap();
            let expected = if n % 2 == 1 {
                c64(1.0, 0.0)
            } else {
                c64(0.0, 1.0).powi(1 - ctx.r() as i32)
            };
            assert!(close(ctx.sigma(), expected, 1e-13), "N={n}");
            assert!(close(ctx.sigma().powi(4), c64(1.0, 0.0), 1e-13));
            assert!(close(ctx.sigma().powi(2), ctx.sigma().powi(-2), 1e-13));
            assert!(close(ctx.sigma().powi(2), c64(ctx.sigma_squared(), 0.0), 1e-13));
            assert!(ctx.qnum_real(ctx.r() as f64).norm() < ctx.tol());
            for k in 1..ctx.r() {
                assert!(ctx.qnum_real(k as f64).norm() > 1e-3, "[{k}] vanishes for N={n}");
            }
        }
    }

    #[test]
    fn rejects_small_order() {
        assert_eq!(RootContext::new(2, 1e-9), Err(Error::OrderTooSmall(2)));
        assert!(RootContext::new(1, 1e-9).is_err());
    }

    #[test]
    fn xi_pow_examples() {
        let ctx = RootContext::with_default_tol(4).unwrap();
        assert!(close(ctx.xi_pow_real(2.0), c64(-1.0, 0.0), 1e-15));
        let h = std::f64::consts::FRAC_PI_4;
        assert!(close(ctx.xi_pow_real(0.5), c64(h.cos(), h.sin()), 1e-15));
        let ctx6 = RootContext::with_default_tol(6).unwrap();
        assert!(close(ctx6.xi_pow_real(3.0), c64(-1.0, 0.0), 1e-15));
        // integer powers agree with repeated multiplication
        let mut acc = c64(1.0, 0.0);
        for k in 0..20 {
            assert!(close(ctx6.xi_pow_int(k), acc, 1e-13));
            acc *= ctx6.xi();
        }
    }

    #[test]
    fn qnum_examples() {
        let ctx = RootContext::with_default_tol(4).unwrap();
        assert!(close(ctx.qnum_real(1.0), c64(0.0, 2.0), 1e-15));
        assert_eq!(ctx.qnum_real(0.0), c64(0.0, 0.0));
        for &a in &[0.3, -1.7, 2.25] {
            let expected = c64(0.0, 2.0 * (PI * a / 2.0).sin());
            assert!(close(ctx.qnum_real(a), expected, 1e-14));
        }
    }

    #[test]
    fn qfact_examples() {
        let ctx = RootContext::with_default_tol(4).unwrap();
        assert!(close(ctx.qfact(1).unwrap(), c64(0.0, 2.0), 1e-15));
        assert_eq!(ctx.qfact(0).unwrap(), c64(1.0, 0.0));
        assert!(ctx.qfact(2).is_err());

        let ctx = RootContext::with_default_tol(6).unwrap();
        let xi = ctx.xi();
        let expected = (xi.powi(2) - xi.powi(-2)) * (xi - xi.powi(-1));
        assert!(close(ctx.qfact(2).unwrap(), expected, 1e-14));
        assert_eq!(ctx.qfact(3), Err(Error::VanishingFactorial { n: 3, r: 3 }));
    }

    #[test]
    fn branch_log_examples() {
        assert_eq!(branch_log(c64(1.0, 0.0), 0).unwrap(), c64(0.0, 0.0));
        assert!(close(branch_log(c64(1.0, 0.0), 1).unwrap(), c64(0.0, 2.0 * PI), 1e-15));
        assert!(close(branch_log(c64(-1.0, 0.0), 0).unwrap(), c64(0.0, PI), 1e-15));
        assert!(close(branch_log(c64(-1.0, -0.0), 0).unwrap(), c64(0.0, PI), 1e-15));
        assert_eq!(branch_log(c64(0.0, 0.0), 0), Err(Error::LogOfZero));
    }

    proptest! {
        #[test]
        fn xi_pow_periodic(re in -50.0f64..50.0, im in -2.0f64..2.0, k in -20i64..20, n in 3u32..12) {
            let ctx = RootContext::with_default_tol(n).unwrap();
            let x = c64(re, im);
            let shifted = x + c64((k * n as i64) as f64, 0.0);
            let a = ctx.xi_pow(x);
            prop_assert!((ctx.xi_pow(shifted) - a).norm() <= 1e-12 * a.norm().max(1.0));
        }

        #[test]
        fn qnum_period_2r(re in -5.0f64..5.0, im in -1.0f64..1.0, n in 3u32..12) {
            let ctx = RootContext::with_default_tol(n).unwrap();
            let x = c64(re, im);
            let shifted = x + c64(2.0 * ctx.r() as f64, 0.0);
            prop_assert!((ctx.qnum(shifted) - ctx.qnum(x)).norm() < ctx.tol() * ctx.qnum(x).norm().max(1.0));
        }

        #[test]
        fn branch_log_inverts_exp(re in -5.0f64..5.0, im in -5.0f64..5.0, m in -3i64..=3) {
            let x = c64(re, im);
            prop_assume!(x.norm() > 1e-6);
            let l = branch_log(x, m).unwrap();
            prop_assert!((l.exp() - x).norm() < 1e-9 * x.norm().max(1.0));
            prop_assert!(l.im > -PI + 2.0 * PI * m as f64 - 1e-12);
            prop_assert!(l.im <= PI + 2.0 * PI * m as f64 + 1e-12);
        }
    }
}

//! The factorized Borel group of `SL2(C)` and its set-theoretic Yang-Baxter map.
//!
//! An element of `G*` is an upper-triangular matrix `(1 eps; 0 kappa)`, stored
//! as the pair `(kappa, eps)`.

use std::fmt;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnum::C64;

/// A `G*` element `(1 eps; 0 kappa)` attached to a braid strand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GStarColor {
    pub kappa: C64,
    pub epsilon: C64,
}

impl GStarColor {
    /// Checked constructor; rejects `|kappa| <= tol`.
    pub fn new(kappa: C64, epsilon: C64, tol: f64) -> Result<Self> {
        if kappa.norm() <= tol {
            return Err(Error::ZeroKappa(kappa.norm()));
        }
        Ok(GStarColor { kappa, epsilon })
    }

    /// Builds the pair without checking `kappa`.
    pub const fn new_unchecked(kappa: C64, epsilon: C64) -> Self {
        GStarColor { kappa, epsilon }
    }

    /// Membership in `Y*`: `kappa` avoids `0`, `1` and `-1` by more than `tol`.
    pub fn is_admissible(&self, tol: f64) -> bool {
        let k = self.kappa;
        (k - 1.0).norm() > tol && (k + 1.0).norm() > tol && k.norm() > tol
    }

    pub fn ensure_admissible(&self, tol: f64) -> Result<()> {
        if self.is_admissible(tol) {
            Ok(())
        } else {
            Err(Error::NotAdmissible {
                re: self.kappa.re,
                im: self.kappa.im,
            })
        }
    }

    /// Componentwise distance `max(|dkappa|, |deps|)`.
    pub fn distance(&self, other: &GStarColor) -> f64 {
        (self.kappa - other.kappa)
            .norm()
            .max((self.epsilon - other.epsilon).norm())
    }
}

impl fmt::Display for GStarColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(kappa={}, eps={})", self.kappa, self.epsilon)
    }
}

/// `psi(y) = (kappa, -eps; 0, kappa^{-1})`, the image of the color in the Borel
/// subgroup of `SL2`. Its trace is the conjugacy invariant `kappa + 1/kappa`.
pub fn borel_of_color(y: &GStarColor) -> Matrix2<C64> {
    let zero = C64::new(0.0, 0.0);
    Matrix2::new(y.kappa, -y.epsilon, zero, y.kappa.inv())
}

/// `R(x, y) = (x_L, x_R)`.
pub fn rmap(x: &GStarColor, y: &GStarColor) -> (GStarColor, GStarColor) {
    let (k1, e1) = (x.kappa, x.epsilon);
    let (k2, e2) = (y.kappa, y.epsilon);
    let left = GStarColor::new_unchecked(k1, e1 / k2);
    let right = GStarColor::new_unchecked(k2, (e2 + e1 * (k2 - k2.inv())) / k1);
    (left, right)
}

/// Inverse of [`rmap`]: `rmap(rmap_inv(a, b)) == (a, b)`.
pub fn rmap_inv(xl: &GStarColor, xr: &GStarColor) -> (GStarColor, GStarColor) {
    let (k1, e1) = (xl.kappa, xl.epsilon);
    let (k2, e2) = (xr.kappa, xr.epsilon);
    let x = GStarColor::new_unchecked(k1, e1 * k2);
    let y = GStarColor::new_unchecked(k2, e2 * k1 - e1 * k2 * (k2 - k2.inv()));
    (x, y)
}

/// Stabilization map `s(kappa, eps) = (kappa, eps / kappa)`; satisfies
/// `rmap(y, s(y)) == (s(y), y)`.
pub fn smap(y: &GStarColor) -> GStarColor {
    GStarColor::new_unchecked(y.kappa, y.epsilon / y.kappa)
}

pub fn smap_inv(y: &GStarColor) -> GStarColor {
    GStarColor::new_unchecked(y.kappa, y.epsilon * y.kappa)
}

/// `s` for `sign > 0`, `s^{-1}` otherwise.
pub fn smap_signed(y: &GStarColor, sign: i32) -> GStarColor {
    if sign > 0 {
        smap(y)
    } else {
        smap_inv(y)
    }
}

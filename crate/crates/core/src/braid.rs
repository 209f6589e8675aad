//! Braid words, their action on `G*`-colorings, closure combinatorics and the
//! colored Markov moves.
//!
//! Letters are read bottom to top: the first letter acts first. Letter `k > 0`
//! is the generator `sigma_k` acting by `tau . R` on slots `(k, k+1)` (1-based),
//! letter `-k` is its inverse.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::group::{rmap, rmap_inv, smap, GStarColor};
use crate::qnum::C64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidBraid("a braid needs at least one strand".into()));
        }
        for &k in &letters {
            if k == 0 || k.unsigned_abs() as usize >= strands {
                return Err(Error::InvalidBraid(format!(
                    "letter {k} is not a generator of B_{strands}"
                )));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Infers the strand count as `max |k| + 1` (at least one strand).
    pub fn from_letters(letters: Vec<i32>) -> Result<Self> {
        let strands = letters.iter().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0) + 1;
        Self::new(strands, letters)
    }

    /// Parses whitespace-separated signed integers, e.g. `"-2 1 -2 1"`.
    ///
    /// `strands` overrides the inferred strand count, which is needed for
    /// trailing strands no letter touches.
    pub fn parse(text: &str, strands: Option<usize>) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i32>()
                    .map_err(|_| Error::InvalidBraid(format!("cannot parse letter {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match strands {
            Some(n) => Self::new(n, letters),
            None => Self::from_letters(letters),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `perm[i]` is the top position reached by the strand starting at bottom
    /// position `i` (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        let at = self.strand_at_top();
        let mut perm = vec![0; self.strands];
        for (top, &bottom) in at.iter().enumerate() {
            perm[bottom] = top;
        }
        perm
    }

    /// For each top position, the bottom position its strand started from.
    fn strand_at_top(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &k in &self.letters {
            let i = k.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        at
    }

    /// Closure components: the cycles of [`permutation`](Self::permutation).
    pub fn components(&self) -> Components {
        let perm = self.permutation();
        let mut of_position = vec![usize::MAX; self.strands];
        let mut cycles = Vec::new();
        for start in 0..self.strands {
            if of_position[start] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cycle = Vec::new();
            let mut p = start;
            while of_position[p] == usize::MAX {
                of_position[p] = id;
                cycle.push(p);
                p = perm[p];
            }
            cycles.push(cycle);
        }
        Components { of_position, cycles }
    }

    /// Signed count of self-crossings of each closure component.
    pub fn writhe_by_component(&self) -> Vec<i64> {
        let comps = self.components();
        let mut writhe = vec![0i64; comps.count()];
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &k in &self.letters {
            let i = k.unsigned_abs() as usize - 1;
            let (a, b) = (comps.of_position[at[i]], comps.of_position[at[i + 1]]);
            if a == b {
                writhe[a] += k.signum() as i64;
            }
            at.swap(i, i + 1);
        }
        writhe
    }

    /// Total writhe (sum of all crossing signs).
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|k| k.signum() as i64).sum()
    }

    /// Word product; `self` acts first.
    pub fn then(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::InvalidBraid(format!(
                "cannot compose braids on {} and {} strands",
                self.strands, other.strands
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn prefix(&self, k: usize) -> BraidWord {
        BraidWord { strands: self.strands, letters: self.letters[..k].to_vec() }
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, None)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.letters.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", words.join(" "))
    }
}

/// Partition of the bottom positions into closure components.
///
/// Components are numbered by their smallest bottom position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub of_position: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    /// Spreads a per-component list over positions.
    pub fn spread<T: Clone>(&self, by_component: &[T]) -> Vec<T> {
        self.of_position.iter().map(|&c| by_component[c].clone()).collect()
    }
}

/// Bottom colors of a braid, left to right, with the branch index of each
/// strand's closure component.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorTuple {
    pub colors: Vec<GStarColor>,
    pub branches: Vec<i64>,
}

impl ColorTuple {
    pub fn new(colors: Vec<GStarColor>, branches: Vec<i64>) -> Result<Self> {
        if colors.len() != branches.len() {
            return Err(Error::LengthMismatch { expected: colors.len(), got: branches.len() });
        }
        Ok(ColorTuple { colors, branches })
    }

    /// Builds a coloring from per-component `kappa` and branch data and
    /// per-position `epsilon`.
    pub fn from_components(
        braid: &BraidWord,
        kappa_by_component: &[C64],
        epsilon: &[C64],
        branch_by_component: &[i64],
    ) -> Result<Self> {
        let comps = braid.components();
        check_component_count("kappa_by_component", &comps, kappa_by_component.len())?;
        check_component_count("branch_by_component", &comps, branch_by_component.len())?;
        if epsilon.len() != braid.strands() {
            return Err(Error::LengthMismatch { expected: braid.strands(), got: epsilon.len() });
        }
        let kappas = comps.spread(kappa_by_component);
        let colors = kappas
            .iter()
            .zip(epsilon)
            .map(|(&k, &e)| GStarColor::new_unchecked(k, e))
            .collect();
        Ok(ColorTuple { colors, branches: comps.spread(branch_by_component) })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn kappas(&self) -> Vec<C64> {
        self.colors.iter().map(|c| c.kappa).collect()
    }

    pub fn epsilons(&self) -> Vec<C64> {
        self.colors.iter().map(|c| c.epsilon).collect()
    }

    /// Max componentwise distance to another tuple of the same length.
    pub fn distance(&self, other: &ColorTuple) -> f64 {
        self.colors
            .iter()
            .zip(&other.colors)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    /// Checks length, admissibility, and that `kappa` and branches are constant
    /// on each closure component of `braid`.
    pub fn validate_for(&self, braid: &BraidWord, tol: f64) -> Result<Components> {
        if self.len() != braid.strands() {
            return Err(Error::LengthMismatch { expected: braid.strands(), got: self.len() });
        }
        for c in &self.colors {
            c.ensure_admissible(tol)?;
        }
        let comps = braid.components();
        for (id, cycle) in comps.cycles.iter().enumerate() {
            let first = cycle[0];
            for &p in &cycle[1..] {
                if (self.colors[p].kappa - self.colors[first].kappa).norm() > tol * (1.0 + self.colors[first].kappa.norm()) {
                    return Err(Error::KappaNotConstant(id));
                }
                if self.branches[p] != self.branches[first] {
                    return Err(Error::BranchNotConstant(id));
                }
            }
        }
        Ok(comps)
    }

    pub fn branch_by_component(&self, comps: &Components) -> Vec<i64> {
        comps.cycles.iter().map(|c| self.branches[c[0]]).collect()
    }

    pub fn kappa_by_component(&self, comps: &Components) -> Vec<C64> {
        comps.cycles.iter().map(|c| self.colors[c[0]].kappa).collect()
    }
}

fn check_component_count(what: &'static str, comps: &Components, got: usize) -> Result<()> {
    if comps.count() != got {
        return Err(Error::ComponentCount { what, expected: comps.count(), got });
    }
    Ok(())
}

/// Applies one letter to the colors at slots `(i, i+1)`.
fn act_letter(colors: &mut [GStarColor], branches: &mut [i64], k: i32) {
    let i = k.unsigned_abs() as usize - 1;
    let (a, b) = (colors[i], colors[i + 1]);
    if k > 0 {
        let (xl, xr) = rmap(&a, &b);
        colors[i] = xr;
        colors[i + 1] = xl;
    } else {
        let (x, y) = rmap_inv(&b, &a);
        colors[i] = x;
        colors[i + 1] = y;
    }
    branches.swap(i, i + 1);
}

/// The induced action `sigma_R` on bottom colorings; returns the top colors.
pub fn act(braid: &BraidWord, y: &ColorTuple) -> ColorTuple {
    let mut out = y.clone();
    for &k in braid.letters() {
        act_letter(&mut out.colors, &mut out.branches, k);
    }
    out
}

/// Distance between `y` and `act(braid, y)`, including the branch labels.
pub fn fixed_point_residual(braid: &BraidWord, y: &ColorTuple) -> f64 {
    let top = act(braid, y);
    if top.branches != y.branches {
        return f64::INFINITY;
    }
    top.distance(y)
}

pub fn is_fixed_point(braid: &BraidWord, y: &ColorTuple, tol: f64) -> bool {
    y.len() == braid.strands() && fixed_point_residual(braid, y) < tol
}

fn ensure_fixed_point(braid: &BraidWord, y: &ColorTuple, tol: f64) -> Result<()> {
    if y.len() != braid.strands() {
        return Err(Error::LengthMismatch { expected: braid.strands(), got: y.len() });
    }
    let res = fixed_point_residual(braid, y);
    if res < tol {
        Ok(())
    } else {
        Err(Error::NotFixedPoint(res))
    }
}

/// Matrix `M` with `act(braid, (kappa, eps)).epsilons() == M * eps`.
///
/// Built by composing the per-letter 2x2 blocks; `kappa_by_position` are the
/// bottom `kappa` values, tracked through the word.
pub fn epsilon_transfer_matrix(braid: &BraidWord, kappa_by_position: &[C64], tol: f64) -> Result<DMatrix<C64>> {
    let n = braid.strands();
    if kappa_by_position.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: kappa_by_position.len() });
    }
    if let Some(k) = kappa_by_position.iter().find(|k| k.norm() <= tol) {
        return Err(Error::ZeroKappa(k.norm()));
    }
    let one = C64::new(1.0, 0.0);
    let mut kappas = kappa_by_position.to_vec();
    let mut m = DMatrix::<C64>::identity(n, n);
    for &k in braid.letters() {
        let i = k.unsigned_abs() as usize - 1;
        let (u, v) = (kappas[i], kappas[i + 1]);
        let block = if k > 0 {
            // new eps_i = x_R, new eps_{i+1} = x_L
            [[(v - v.inv()) / u, u.inv()], [v.inv(), C64::new(0.0, 0.0)]]
        } else {
            [[C64::new(0.0, 0.0), u], [v, one - u * u]]
        };
        // Left-multiply rows i, i+1 of m by the block.
        for c in 0..n {
            let (a, b) = (m[(i, c)], m[(i + 1, c)]);
            m[(i, c)] = block[0][0] * a + block[0][1] * b;
            m[(i + 1, c)] = block[1][0] * a + block[1][1] * b;
        }
        kappas.swap(i, i + 1);
    }
    Ok(m)
}

/// `eps_j = (kappa_j - 1/kappa_j) * prod_{i<j} 1/kappa_i`.
///
/// Fixed by every generator whenever `kappa` is constant on components: it is
/// the conjugate of the diagonal representation by a unipotent matrix.
pub fn conjugation_direction(kappa_by_position: &[C64]) -> DVector<C64> {
    let mut prefix = C64::new(1.0, 0.0);
    DVector::from_iterator(
        kappa_by_position.len(),
        kappa_by_position.iter().map(|&k| {
            let e = (k - k.inv()) * prefix;
            prefix /= k;
            e
        }),
    )
}

/// Basis of fixed-point `epsilon` vectors for given `kappa` and branches.
#[derive(Debug, Clone)]
pub struct ColoringSolution {
    pub kappa_by_position: Vec<C64>,
    pub branches: Vec<i64>,
    /// Singular values of `M - Id`, descending.
    pub singular_values: Vec<f64>,
    pub cutoff: f64,
    /// Dimension of the full solution space.
    pub nullity: usize,
    /// Unit-norm basis, non-abelian directions first, then the conjugation
    /// direction (when it is a solution).
    pub basis: Vec<DVector<C64>>,
    /// Number of leading basis vectors not in the conjugation direction.
    pub nonabelian_dim: usize,
    pub conjugation: DVector<C64>,
    pub conjugation_residual: f64,
}

impl ColoringSolution {
    pub fn coloring(&self, eps: &DVector<C64>, scale: C64) -> ColorTuple {
        let colors = self
            .kappa_by_position
            .iter()
            .zip(eps.iter())
            .map(|(&k, &e)| GStarColor::new_unchecked(k, e * scale))
            .collect();
        ColorTuple { colors, branches: self.branches.clone() }
    }

    pub fn colorings(&self) -> Vec<ColorTuple> {
        self.basis.iter().map(|v| self.coloring(v, C64::new(1.0, 0.0))).collect()
    }

    pub fn has_nonabelian(&self) -> bool {
        self.nonabelian_dim > 0
    }
}

/// Unit norm, with the largest-modulus entry made real and positive.
fn canonical_phase(v: &DVector<C64>) -> DVector<C64> {
    let norm = v.norm();
    if norm == 0.0 {
        return v.clone();
    }
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() * (1.0 + 1e-9) {
            best = i;
        }
    }
    let phase = v[best] / v[best].norm();
    v.map(|z| z / phase / norm)
}

/// Sorted SVD: (singular values descending, right singular vectors as columns).
fn sorted_svd(a: &DMatrix<C64>) -> (Vec<f64>, Vec<DVector<C64>>, Vec<DVector<C64>>) {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("left vectors requested");
    let v = svd.v_t.expect("right vectors requested").adjoint();
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let vals = order.iter().map(|&i| svd.singular_values[i]).collect();
    let lefts = order.iter().map(|&i| u.column(i).into_owned()).collect();
    let rights = order.iter().map(|&i| v.column(i).into_owned()).collect();
    (vals, lefts, rights)
}

/// Solves `act(b, (kappa, eps)) = (kappa, eps)` for `eps`.
///
/// The nullspace of `M - Id` is found by SVD with cutoff
/// `tol * max(1, |M|_F)`, with `M` the transfer matrix; `M - Id` may vanish outright.
pub fn solve_colorings(
    braid: &BraidWord,
    kappa_by_component: &[C64],
    branch_by_component: &[i64],
    tol: f64,
) -> Result<ColoringSolution> {
    let comps = braid.components();
    check_component_count("kappa_by_component", &comps, kappa_by_component.len())?;
    check_component_count("branch_by_component", &comps, branch_by_component.len())?;
    for &k in kappa_by_component {
        GStarColor::new_unchecked(k, C64::new(0.0, 0.0)).ensure_admissible(tol)?;
    }
    let kappas = comps.spread(kappa_by_component);
    let branches = comps.spread(branch_by_component);
    let n = braid.strands();

    let transfer = epsilon_transfer_matrix(braid, &kappas, tol)?;
    let scale = transfer.norm().max(1.0);
    let m = transfer - DMatrix::<C64>::identity(n, n);
    let (values, _, rights) = sorted_svd(&m);
    let cutoff = tol * scale;
    let null: Vec<DVector<C64>> = values
        .iter()
        .zip(&rights)
        .filter(|(s, _)| **s <= cutoff)
        .map(|(_, v)| v.clone())
        .collect();
    let nullity = null.len();

    let conjugation = canonical_phase(&conjugation_direction(&kappas));
    let conjugation_residual = (&m * &conjugation).norm();
    let conj_in_null = nullity > 0 && conjugation_residual <= cutoff;

    let mut basis = Vec::with_capacity(nullity);
    let nonabelian_dim;
    if conj_in_null {
        // Orthogonal complement of the conjugation direction inside the nullspace.
        let q = DMatrix::from_columns(&null);
        let proj = &q - &conjugation * (conjugation.adjoint() * &q);
        let (pv, lefts, _) = sorted_svd(&proj);
        let complement: Vec<_> = pv
            .iter()
            .zip(lefts)
            .filter(|(s, _)| **s > 0.5)
            .map(|(_, u)| canonical_phase(&u))
            .collect();
        nonabelian_dim = complement.len();
        basis.extend(complement);
        basis.push(conjugation.clone());
    } else {
        nonabelian_dim = nullity;
        basis.extend(null.iter().map(canonical_phase));
    }

    Ok(ColoringSolution {
        kappa_by_position: kappas,
        branches,
        singular_values: values,
        cutoff,
        nullity,
        basis,
        nonabelian_dim,
        conjugation,
        conjugation_residual,
    })
}

/// Markov move I as rotation: `(p q, y) -> (q p, act(p, y))` with `p` the first
/// `k` letters. Negative `k` rotates the other way.
pub fn markov_rotate(braid: &BraidWord, y: &ColorTuple, k: i64, tol: f64) -> Result<(BraidWord, ColorTuple)> {
    ensure_fixed_point(braid, y, tol)?;
    if braid.is_empty() {
        return Ok((braid.clone(), y.clone()));
    }
    let k = k.rem_euclid(braid.len() as i64) as usize;
    let prefix = braid.prefix(k);
    let mut letters = braid.letters[k..].to_vec();
    letters.extend_from_slice(&braid.letters[..k]);
    Ok((BraidWord { strands: braid.strands, letters }, act(&prefix, y)))
}

/// Markov move II: adds strand `n+1` colored `s(y_n)` and prepends the letter
/// `+-n`, which acts first.
///
/// `sigma_n` and its inverse have the same fixed points, so the new strand is
/// colored `s(y_n)` for both signs.
pub fn stabilize(braid: &BraidWord, y: &ColorTuple, sign: i32, tol: f64) -> Result<(BraidWord, ColorTuple)> {
    ensure_fixed_point(braid, y, tol)?;
    let n = braid.strands();
    let sign = if sign >= 0 { 1 } else { -1 };
    let mut letters = Vec::with_capacity(braid.len() + 1);
    letters.push(sign * n as i32);
    letters.extend_from_slice(braid.letters());
    let mut out = y.clone();
    out.colors.push(smap(&y.colors[n - 1]));
    out.branches.push(y.branches[n - 1]);
    Ok((BraidWord { strands: n + 1, letters }, out))
}

/// Inverse of [`stabilize`]. Requires the first letter to be `+-(n-1)` and to
/// be the only letter touching the last strand.
pub fn destabilize(braid: &BraidWord, y: &ColorTuple, tol: f64) -> Result<(BraidWord, ColorTuple)> {
    let n = braid.strands();
    if n < 2 {
        return Err(Error::NotStabilized("a single strand cannot be destabilized".into()));
    }
    let last = (n - 1) as i32;
    match braid.letters.first() {
        Some(&k) if k.abs() == last => {}
        _ => {
            return Err(Error::NotStabilized(format!("first letter is not +-{last}")));
        }
    }
    if braid.letters[1..].iter().any(|k| k.abs() == last) {
        return Err(Error::NotStabilized(format!("letter +-{last} occurs more than once")));
    }
    ensure_fixed_point(braid, y, tol)?;
    let expected = smap(&y.colors[n - 2]);
    let dev = expected.distance(&y.colors[n - 1]);
    if dev > tol * (1.0 + expected.epsilon.norm()) || y.branches[n - 1] != y.branches[n - 2] {
        return Err(Error::NotStabilized("last strand is not colored by s(y_{n-1})".into()));
    }
    let word = BraidWord { strands: n - 1, letters: braid.letters[1..].to_vec() };
    let out = ColorTuple { colors: y.colors[..n - 1].to_vec(), branches: y.branches[..n - 1].to_vec() };
    Ok((word, out))
}

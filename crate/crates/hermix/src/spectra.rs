//! Numeric Hermitian matrices and their spectra.
//!
//! The eigensolver embeds an n-by-n Hermitian matrix `H = A + iB` in the
//! 2n-by-2n real symmetric matrix `[[A, -B], [B, A]]`, whose spectrum is that
//! of `H` with every eigenvalue doubled, and runs the one real-symmetric
//! kernel from [`crate::eigen`]. Pairs are de-duplicated by sorting and
//! taking every other value, with a pairing assertion. An independent
//! characteristic-polynomial oracle (Faddeev-LeVerrier) plus a bisection
//! root finder cross-checks the solver on small matrices.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::eigen::{self, ConvergenceError};
use crate::gain::{GainMatrix, RootParameter};
use crate::graph::MixedGraph;

/// Default tolerance for declaring two spectra equal.
pub const DEFAULT_COSPECTRAL_TOL: f64 = 1e-8;
/// Largest matrix the characteristic-polynomial oracle accepts by default.
pub const DEFAULT_ORACLE_CAP: usize = 10;
/// Embedded eigenvalues must pair up within this tolerance.
const PAIRING_TOL: f64 = 1e-7;
/// Residual bound factor: each eigenpair satisfies
/// `||H x - lambda x|| <= RESIDUAL_FACTOR * n * max|entry|`.
pub const RESIDUAL_FACTOR: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error(transparent)]
    Convergence(#[from] ConvergenceError),
    #[error("matrix of order {n} exceeds the oracle cap {cap}")]
    OracleCapExceeded { n: usize, cap: usize },
    #[error("characteristic-polynomial coefficient {index} has imaginary part {imaginary:e}; Hermitian invariant broken")]
    NonRealCoefficient { index: usize, imaginary: f64 },
}

/// Dense complex Hermitian matrix. Conjugate symmetry holds exactly by
/// construction: `entry(j, i)` is stored as the conjugate of `entry(i, j)`.
/// Graph-derived matrices have a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

/// Real eigenvalues sorted descending, plus the worst eigenpair residual
/// `max_i ||H x_i - lambda_i x_i||` achieved by the solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    values: Vec<f64>,
    residual: f64,
}

/// Verdict of a spectrum comparison. `max_gap` is `None` when the graphs
/// have different vertex counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CospectralityReport {
    pub cospectral: bool,
    pub max_gap: Option<f64>,
}

impl HermitianMatrix {
    /// Complex realization of a gain matrix: exponent `e` becomes
    /// `cos(2 pi e / k) + i sin(2 pi e / k)`, absent entries become 0.
    pub fn from_gain(m: &GainMatrix) -> Self {
        let n = m.n();
        let k = m.k();
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            // Fill the upper triangle and mirror the exact conjugate.
            for j in (i + 1)..n {
                if let Some(e) = m.entry(i, j) {
                    let z = k.unit(e as i64);
                    entries[i * n + j] = z;
                    entries[j * n + i] = z.conj();
                }
            }
        }
        HermitianMatrix { n, entries }
    }

    pub fn from_graph(g: &MixedGraph, k: RootParameter) -> Self {
        Self::from_gain(&GainMatrix::from_graph(g, k))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// All eigenvalues, descending, with the solver residual.
    pub fn eigenvalues(&self) -> Result<Spectrum, SpectraError> {
        Ok(self.solve()?.0)
    }

    /// The largest eigenvalue and a unit eigenvector for it.
    /// Requires `n >= 1`.
    pub fn leading_eigenpair(&self) -> Result<(f64, Vec<Complex64>), SpectraError> {
        assert!(self.n > 0, "leading eigenpair of an empty matrix");
        let (spectrum, vectors) = self.solve()?;
        Ok((spectrum.values[0], vectors.into_iter().next().unwrap()))
    }

    fn solve(&self) -> Result<(Spectrum, Vec<Vec<Complex64>>), SpectraError> {
        let n = self.n;
        if n == 0 {
            return Ok((
                Spectrum {
                    values: Vec::new(),
                    residual: 0.0,
                },
                Vec::new(),
            ));
        }
        // Real symmetric embedding [[A, -B], [B, A]].
        let m = 2 * n;
        let mut real = vec![0.0f64; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self.entries[i * n + j];
                real[i * m + j] = z.re;
                real[(i + n) * m + j + n] = z.re;
                real[i * m + j + n] = -z.im;
                real[(i + n) * m + j] = z.im;
            }
        }
        let eig = eigen::decompose_symmetric(&real, m)?;
        let d = eig.values();

        // Every eigenvalue of H appears exactly twice; take every other
        // value after sorting, asserting that consecutive values pair up.
        let mut values = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n);
        let mut residual = 0.0f64;
        for i in 0..n {
            let a = d[2 * i];
            let b = d[2 * i + 1];
            assert!(
                (a - b).abs() <= PAIRING_TOL * (1.0 + a.abs()),
                "embedded eigenvalues failed to pair: {a} vs {b}"
            );
            let lambda = a;
            let w = eig.vector(2 * i);
            let x: Vec<Complex64> = (0..n)
                .map(|c| Complex64::new(w[c], w[n + c]))
                .collect();
            residual = residual.max(self.eigenpair_residual(lambda, &x));
            values.push(lambda);
            vectors.push(x);
        }
        values.reverse();
        vectors.reverse();
        Ok((Spectrum { values, residual }, vectors))
    }

    fn eigenpair_residual(&self, lambda: f64, x: &[Complex64]) -> f64 {
        let n = self.n;
        (0..n)
            .map(|r| {
                let hx: Complex64 = (0..n).map(|c| self.entries[r * n + c] * x[c]).sum();
                (hx - lambda * x[r]).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Coefficients of `det(lambda I - H)`, constant term first, computed by
    /// the Faddeev-LeVerrier recurrence in complex arithmetic. Imaginary
    /// parts of the coefficients must vanish (the matrix is Hermitian); they
    /// are checked against 1e-9 and discarded.
    pub fn char_poly(&self, cap: usize) -> Result<Vec<f64>, SpectraError> {
        let n = self.n;
        if n > cap {
            return Err(SpectraError::OracleCapExceeded { n, cap });
        }
        let mut coeffs = vec![0.0f64; n + 1];
        coeffs[n] = 1.0;
        if n == 0 {
            return Ok(coeffs);
        }
        // B_1 = A, a_1 = -tr(B_1); B_m = A (B_{m-1} + a_{m-1} I),
        // a_m = -tr(B_m) / m.
        let mut b = self.entries.clone();
        let mut a_m = -trace(&b, n);
        self.store_coeff(&mut coeffs, n - 1, 1, a_m)?;
        for m in 2..=n {
            for i in 0..n {
                b[i * n + i] += a_m;
            }
            b = self.mul_left(&b);
            a_m = -trace(&b, n) / m as f64;
            self.store_coeff(&mut coeffs, n - m, m, a_m)?;
        }
        Ok(coeffs)
    }

    fn store_coeff(
        &self,
        coeffs: &mut [f64],
        slot: usize,
        index: usize,
        value: Complex64,
    ) -> Result<(), SpectraError> {
        if value.im.abs() > 1e-9 {
            return Err(SpectraError::NonRealCoefficient {
                index,
                imaginary: value.im,
            });
        }
        coeffs[slot] = value.re;
        Ok(())
    }

    fn mul_left(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for l in 0..n {
                let a_il = self.entries[i * n + l];
                if a_il == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a_il * b[l * n + j];
                }
            }
        }
        out
    }
}

fn trace(m: &[Complex64], n: usize) -> Complex64 {
    (0..n).map(|i| m[i * n + i]).sum()
}

impl Spectrum {
    /// Eigenvalues in descending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Largest eigenvalue, if any.
    pub fn leading(&self) -> Option<f64> {
        self.values.first().copied()
    }

    /// `max |lambda|`; 0 for the empty spectrum.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// True when some eigenvalue is within `tol` of `x`.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.values.iter().any(|v| (v - x).abs() <= tol)
    }

    /// Largest entrywise gap between two sorted spectra, or `None` when the
    /// lengths differ.
    pub fn max_gap(&self, other: &Spectrum) -> Option<f64> {
        if self.values.len() != other.values.len() {
            return None;
        }
        Some(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// `max |lambda|` over the spectrum of the graph's Hermitian matrix.
pub fn spectral_radius(g: &MixedGraph, k: RootParameter) -> Result<f64, SpectraError> {
    Ok(HermitianMatrix::from_graph(g, k).eigenvalues()?.spectral_radius())
}

/// Compares the spectra of two mixed graphs entrywise at tolerance `tol`.
/// Graphs of different order are never cospectral and report no gap.
pub fn cospectral(
    ga: &MixedGraph,
    gb: &MixedGraph,
    k: RootParameter,
    tol: f64,
) -> Result<CospectralityReport, SpectraError> {
    if ga.n() != gb.n() {
        return Ok(CospectralityReport {
            cospectral: false,
            max_gap: None,
        });
    }
    let sa = HermitianMatrix::from_graph(ga, k).eigenvalues()?;
    let sb = HermitianMatrix::from_graph(gb, k).eigenvalues()?;
    let gap = sa.max_gap(&sb).expect("equal order");
    Ok(CospectralityReport {
        cospectral: gap <= tol,
        max_gap: Some(gap),
    })
}

/// All real roots, ascending and with multiplicity, of a polynomial known to
/// have only real roots (coefficients ascending, constant term first).
///
/// Works down the derivative chain: the critical points of `p` split the
/// line into intervals where `p` is monotone, so every sign change is
/// bracketed and bisected, and a root at a critical point of multiplicity m
/// in `p'` is a root of multiplicity m + 1 in `p`. Intended for
/// characteristic polynomials of small Hermitian matrices; it is the
/// independent cross-check for the eigensolver.
pub fn real_rooted_roots(coeffs: &[f64]) -> Vec<f64> {
    let deg = effective_degree(coeffs);
    match deg {
        0 => Vec::new(),
        1 => vec![-coeffs[0] / coeffs[1]],
        _ => {
            let p = &coeffs[..=deg];
            let dp: Vec<f64> = (1..=deg).map(|i| i as f64 * p[i]).collect();
            let crit = real_rooted_roots(&dp);

            let bound = cauchy_bound(p);
            let merge_eps = 1e-9 * bound.max(1.0);
            let groups = group_close(&crit, merge_eps);

            let mut roots = Vec::with_capacity(deg);
            for &(c, mult) in &groups {
                if eval_poly(p, c).abs() <= zero_tolerance(p, c) {
                    roots.extend(std::iter::repeat(c).take(mult + 1));
                }
            }

            let mut breakpoints = vec![-bound];
            breakpoints.extend(groups.iter().map(|&(c, _)| c));
            breakpoints.push(bound);
            for w in breakpoints.windows(2) {
                let (a, b) = (w[0], w[1]);
                let step = (b - a) * 1e-6;
                let (aa, bb) = (a + step, b - step);
                if aa >= bb {
                    continue;
                }
                let fa = eval_poly(p, aa);
                let fb = eval_poly(p, bb);
                if fa * fb < 0.0 {
                    let r = bisect_root(p, aa, bb, fa);
                    // A root that coincides with a counted critical root was
                    // already collected with its multiplicity.
                    if !roots.iter().any(|&x| (x - r).abs() <= merge_eps) {
                        roots.push(r);
                    }
                }
            }
            roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

            // Census repair: a real-rooted polynomial of degree d has d real
            // roots, so any shortfall hides at the flattest critical point.
            while roots.len() < deg {
                let (c, _) = groups
                    .iter()
                    .copied()
                    .min_by(|x, y| {
                        eval_poly(p, x.0)
                            .abs()
                            .partial_cmp(&eval_poly(p, y.0).abs())
                            .unwrap()
                    })
                    .expect("degree >= 2 has critical points");
                let at = roots.partition_point(|&x| x < c);
                roots.insert(at, c);
            }
            while roots.len() > deg {
                // Only reachable through duplicated bisection hits; drop the
                // closer of the tightest adjacent pair.
                let (idx, _) = roots
                    .windows(2)
                    .enumerate()
                    .min_by(|a, b| {
                        (a.1[1] - a.1[0]).partial_cmp(&(b.1[1] - b.1[0])).unwrap()
                    })
                    .unwrap();
                roots.remove(idx + 1);
            }
            roots
        }
    }
}

fn effective_degree(coeffs: &[f64]) -> usize {
    coeffs
        .iter()
        .rposition(|&c| c != 0.0)
        .unwrap_or(0)
}

fn cauchy_bound(p: &[f64]) -> f64 {
    let deg = p.len() - 1;
    let lead = p[deg].abs();
    1.0 + p[..deg]
        .iter()
        .map(|c| c.abs() / lead)
        .fold(0.0, f64::max)
}

fn eval_poly(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn zero_tolerance(p: &[f64], x: f64) -> f64 {
    let scale: f64 = p
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs() * x.abs().max(1.0).powi(i as i32))
        .sum();
    1e-11 * scale.max(1.0)
}

fn bisect_root(p: &[f64], mut a: f64, mut b: f64, fa: f64) -> f64 {
    let mut sign_a = fa.signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = eval_poly(p, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == sign_a {
            a = mid;
            sign_a = fm.signum();
        } else {
            b = mid;
        }
        if (b - a).abs() <= 1e-14 * (a.abs() + b.abs()).max(1.0) {
            break;
        }
    }
    0.5 * (a + b)
}

fn group_close(sorted: &[f64], eps: f64) -> Vec<(f64, usize)> {
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for &x in sorted {
        match groups.last_mut() {
            Some((rep, count)) if (x - *rep).abs() <= eps => {
                // Running mean keeps the representative centered.
                *rep = (*rep * *count as f64 + x) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => groups.push((x, 1)),
        }
    }
    groups
}

//! Finite-size spectra of the loop Hamiltonian in fixed-defect sectors,
//! scaled-gap extrapolation to conformal weights, and the character
//! q-series the sector partition functions are built from.

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lapack;
use crate::link::{enumerate_sector, BoundaryCondition};
use crate::markov::build_intensity_matrix;

/// Sound velocity converting finite-size gaps to conformal data.
pub const SOUND_VELOCITY: f64 = 2.598076211353316; // 3*sqrt(3)/2

/// Sectors above this dimension are refused rather than solved densely.
pub const DENSE_BOUND: usize = 4096;

const IMAG_TOL: f64 = 1e-8;

/// Real spectrum of a sector block, sorted ascending. Eigenvalues with an
/// imaginary part above tolerance are reported separately, not dropped
/// silently.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub l: usize,
    pub bc: BoundaryCondition,
    pub defects: usize,
    pub eigenvalues: Vec<f64>,
    pub complex_outliers: Vec<(f64, f64)>,
}

pub fn sector_spectrum(l: usize, bc: BoundaryCondition, defects: usize) -> Result<Spectrum> {
    let basis = enumerate_sector(l, bc, defects)?;
    if basis.len() > DENSE_BOUND {
        return Err(Error::BoundExceeded(basis.len(), DENSE_BOUND));
    }
    let h = build_intensity_matrix(&basis)?;
    let dense = h.to_dense_f64();
    let (wr, wi) = lapack::eigenvalues(h.dim(), &dense)?;
    let mut eigenvalues = Vec::with_capacity(wr.len());
    let mut complex_outliers = Vec::new();
    for (re, im) in wr.into_iter().zip(wi) {
        if im.abs() > IMAG_TOL {
            complex_outliers.push((re, im));
        }
        eigenvalues.push(re);
    }
    eigenvalues.sort_by(f64::total_cmp);
    Ok(Spectrum {
        l,
        bc,
        defects,
        eigenvalues,
        complex_outliers,
    })
}

/// Conformal weight of the sector with 2s defects, s given as `s2` = 2s:
/// s(2s-1)/3, i.e. 0, 0, 1/3, 1, 2, ... for s2 = 0, 1, 2, 3, 4.
pub fn conformal_weight(s2: u64) -> Rational64 {
    Rational64::new(s2 as i64 * (s2 as i64 - 1), 6)
}

/// Scaling data for one defect sector across a sweep of sizes.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingEstimate {
    /// Twice the spin label s.
    pub s2: u64,
    pub sizes: Vec<usize>,
    /// L * E_0(L) / (pi v) per size.
    pub scaled_gaps: Vec<f64>,
    /// Extrapolated conformal weight.
    pub delta: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

/// Computes the lowest sector eigenvalue per size, rescales by L/(pi v) and
/// extrapolates with a two-term algebraic fit delta + a/L + b/L^2. Sizes
/// must be strictly increasing and of the parity matching the defect count;
/// at least three are required (four or more make the fit overdetermined).
pub fn scaled_gap_estimate(
    bc: BoundaryCondition,
    s2: u64,
    sizes: &[usize],
) -> Result<ScalingEstimate> {
    let m = s2 as usize;
    if sizes.len() < 3 {
        return Err(Error::Invalid("need at least three sizes".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("sizes must be strictly increasing".into()));
    }
    if sizes.iter().any(|&l| (l + m) % 2 != 0) {
        return Err(Error::ParityMismatch {
            l: *sizes.iter().find(|&&l| (l + m) % 2 != 0).unwrap(),
            defects: m,
            bc: bc.flag().into(),
        });
    }
    let scaled_gaps: Vec<f64> = sizes
        .par_iter()
        .map(|&l| {
            let spectrum = sector_spectrum(l, bc, m)?;
            let e0 = spectrum.eigenvalues[0];
            Ok(l as f64 * e0 / (std::f64::consts::PI * SOUND_VELOCITY))
        })
        .collect::<Result<_>>()?;
    let (delta, residual) = fit_inverse_powers(sizes, &scaled_gaps);
    Ok(ScalingEstimate {
        s2,
        sizes: sizes.to_vec(),
        scaled_gaps,
        delta,
        residual,
    })
}

/// Least squares for y = d + a/L + b/L^2; returns (d, rms residual).
fn fit_inverse_powers(sizes: &[usize], ys: &[f64]) -> (f64, f64) {
    let rows: Vec<[f64; 3]> = sizes
        .iter()
        .map(|&l| {
            let x = 1.0 / l as f64;
            [1.0, x, x * x]
        })
        .collect();
    // normal equations
    let mut ata = [[0.0f64; 3]; 3];
    let mut aty = [0.0f64; 3];
    for (row, &y) in rows.iter().zip(ys) {
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * y;
        }
    }
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d0 = det3(&ata);
    let mut coef = [0.0f64; 3];
    for k in 0..3 {
        let mut mk = ata;
        for i in 0..3 {
            mk[i][k] = aty[i];
        }
        coef[k] = det3(&mk) / d0;
    }
    let mut ss = 0.0;
    for (row, &y) in rows.iter().zip(ys) {
        let fit = coef[0] * row[0] + coef[1] * row[1] + coef[2] * row[2];
        ss += (y - fit) * (y - fit);
    }
    (coef[0], (ss / ys.len() as f64).sqrt())
}

/// Multiset inclusion of the identified-connectivity spectrum in the
/// distinct-connectivity one at the same even size.
#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub l: usize,
    pub tolerance: f64,
    pub missing: Vec<f64>,
    pub pass: bool,
}

pub fn spectrum_inclusion(l: usize, tolerance: f64) -> Result<InclusionReport> {
    let ic = sector_spectrum(l, BoundaryCondition::PeriodicIC, 0)?;
    let dc = sector_spectrum(l, BoundaryCondition::PeriodicDC, 0)?;
    let mut pool = dc.eigenvalues.clone();
    let mut missing = Vec::new();
    for &x in &ic.eigenvalues {
        // pool is sorted; take the closest unused value
        let pos = pool
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
            .map(|(i, _)| i);
        match pos {
            Some(i) if (pool[i] - x).abs() <= tolerance => {
                pool.remove(i);
            }
            _ => missing.push(x),
        }
    }
    Ok(InclusionReport {
        l,
        tolerance,
        pass: missing.is_empty(),
        missing,
    })
}

// ---------------------------------------------------------------------------
// q-series

/// Truncated formal power series in q^(1/3) with exact integer coefficients.
///
/// `coeffs[k]` is the coefficient of q^((offset_thirds + k) / 3); every
/// exponent this crate produces is a multiple of 1/3. Arithmetic keeps the
/// common truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub offset_thirds: i64,
    pub coeffs: Vec<BigInt>,
}

impl QSeries {
    /// Highest represented exponent, in thirds.
    fn top_thirds(&self) -> i64 {
        self.offset_thirds + self.coeffs.len() as i64 - 1
    }

    pub fn coefficient_at(&self, thirds: i64) -> BigInt {
        let k = thirds - self.offset_thirds;
        if k < 0 || k as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Coefficients at integer steps above the leading exponent, as used by
    /// the character tests.
    pub fn step_coefficients(&self) -> Vec<BigInt> {
        self.coeffs.iter().step_by(3).cloned().collect()
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let lo = self.offset_thirds.min(other.offset_thirds);
        let hi = self.top_thirds().min(other.top_thirds());
        let mut coeffs = Vec::new();
        for t in lo..=hi {
            coeffs.push(self.coefficient_at(t) - other.coefficient_at(t));
        }
        QSeries {
            offset_thirds: lo,
            coeffs,
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let lo = self.offset_thirds.min(other.offset_thirds);
        let hi = self.top_thirds().min(other.top_thirds());
        let mut coeffs = Vec::new();
        for t in lo..=hi {
            coeffs.push(self.coefficient_at(t) + other.coefficient_at(t));
        }
        QSeries {
            offset_thirds: lo,
            coeffs,
        }
    }
}

impl std::fmt::Display for QSeries {
    /// Prints like "q^{1/3}(1 + q + 2q^2 + ...)".
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let prefix = match self.offset_thirds {
            0 => String::new(),
            t if t % 3 == 0 => format!("q^{{{}}}", t / 3),
            t => format!("q^{{{t}/3}}"),
        };
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = k as i64;
            let power = match e {
                0 => String::new(),
                _ if e % 3 == 0 && e / 3 == 1 => "q".into(),
                _ if e % 3 == 0 => format!("q^{}", e / 3),
                _ => format!("q^{{{e}/3}}"),
            };
            let term = if power.is_empty() {
                c.to_string()
            } else if c.is_one() {
                power
            } else {
                format!("{c}{power}")
            };
            terms.push(term);
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        if prefix.is_empty() {
            write!(f, "{}", terms.join(" + "))
        } else {
            write!(f, "{prefix}({})", terms.join(" + "))
        }
    }
}

/// Unrestricted partition numbers p(0..=n) via the generating product
/// 1/prod(1-q^k), multiplying factor by factor as geometric series.
pub fn partition_series(n: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = BigInt::one();
    for k in 1..=n {
        // multiply by 1/(1-q^k): prefix-sum with stride k
        for i in k..=n {
            let add = coeffs[i - k].clone();
            coeffs[i] += add;
        }
    }
    coeffs
}

/// Character weight for an integer label n (possibly negative):
/// (n-1)(n-2)/6 in units of thirds, always an integer count of thirds.
fn weight_thirds(label: i64) -> i64 {
    let num = (label - 1) * (label - 2);
    debug_assert_eq!(num % 2, 0);
    num / 2
}

/// Character series for an integer label: q^weight / prod(1-q^n), carrying
/// the partition coefficients p(0..=cutoff) above the leading exponent.
pub fn virasoro_character(label: i64, cutoff: usize) -> QSeries {
    let offset_thirds = weight_thirds(label);
    let parts = partition_series(cutoff);
    let mut coeffs = vec![BigInt::zero(); 3 * cutoff + 1];
    for (k, p) in parts.into_iter().enumerate() {
        coeffs[3 * k] = p;
    }
    QSeries {
        offset_thirds,
        coeffs,
    }
}

/// Sector partition sum: the alternating character combination over
/// j = 0, 1, ..., s (integer s) or j = 1/2, 3/2, ..., s (half-odd s),
/// with s passed as s2 = 2s. Truncated at q^cutoff.
pub fn partition_function(s2: u64, cutoff: usize) -> QSeries {
    let mut total: Option<QSeries> = None;
    let mut j2 = if s2 % 2 == 0 { 0i64 } else { 1 };
    while j2 <= s2 as i64 {
        let label = j2 + 1;
        let term = virasoro_character(label, cutoff).sub(&virasoro_character(-label, cutoff));
        total = Some(match total {
            None => term,
            Some(acc) => acc.add(&term),
        });
        j2 += 2;
    }
    total.expect("at least one term")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    /// Independent partition-number oracle: dynamic programming on the
    /// "parts up to k" table.
    fn partition_oracle(n: usize) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); n + 1];
        acc[0] = BigInt::one();
        for part in 1..=n {
            for total in part..=n {
                let prev = acc[total - part].clone();
                acc[total] += prev;
            }
        }
        acc
    }

    #[test]
    fn partition_routes_agree() {
        assert_eq!(partition_series(40), partition_oracle(40));
        let p: Vec<i64> = partition_series(10)
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn conformal_weights_sequence() {
        let w: Vec<Rational64> = (0..4).map(conformal_weight).collect();
        assert_eq!(
            w,
            vec![
                Rational64::new(0, 1),
                Rational64::new(0, 1),
                Rational64::new(1, 3),
                Rational64::new(1, 1),
            ]
        );
    }

    #[test]
    fn character_examples() {
        let chi1 = virasoro_character(1, 5);
        assert_eq!(chi1.offset_thirds, 0);
        let steps: Vec<i64> = chi1
            .step_coefficients()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect();
        assert_eq!(steps, vec![1, 1, 2, 3, 5, 7]);

        let chi3 = virasoro_character(3, 3);
        assert_eq!(chi3.offset_thirds, 1); // weight 1/3
        let steps: Vec<i64> = chi3
            .step_coefficients()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect();
        assert_eq!(steps, vec![1, 1, 2, 3]);

        let chi_m1 = virasoro_character(-1, 2);
        assert_eq!(chi_m1.offset_thirds, 3); // weight 1
        let steps: Vec<i64> = chi_m1
            .step_coefficients()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect();
        assert_eq!(steps, vec![1, 1, 2]);
    }

    #[test]
    fn partition_function_z0() {
        let z0 = partition_function(0, 5);
        assert_eq!(z0.offset_thirds, 0);
        let steps: Vec<i64> = z0
            .step_coefficients()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect();
        assert_eq!(steps, vec![1, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn partition_function_nonnegative() {
        for s2 in 0..=6 {
            let z = partition_function(s2, 40);
            assert!(
                z.coeffs.iter().all(|c| !c.is_negative()),
                "negative coefficient in sector s2={s2}: {z}"
            );
        }
    }

    #[test]
    fn half_sector_single_term() {
        let z = partition_function(1, 3);
        let direct = virasoro_character(2, 3).sub(&virasoro_character(-2, 3));
        assert_eq!(z, direct);
    }

    #[test]
    fn display_format() {
        let chi3 = virasoro_character(3, 2);
        assert_eq!(chi3.to_string(), "q^{1/3}(1 + q + 2q^2)");
    }

    #[test]
    fn closed_l4_spectrum() {
        let s = sector_spectrum(4, BoundaryCondition::Closed, 0).unwrap();
        assert!(s.complex_outliers.is_empty());
        assert!((s.eigenvalues[0]).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_defect_l2_block() {
        let s = sector_spectrum(2, BoundaryCondition::Closed, 2).unwrap();
        // single state; its one generator annihilates the defects, leaving
        // the pure diagonal 1 - e_1 with e_1 acting as zero
        assert_eq!(s.eigenvalues.len(), 1);
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stationary_eigenvalue_is_zero() {
        for (l, bc, m) in [
            (8usize, BoundaryCondition::Closed, 0usize),
            (7, BoundaryCondition::Closed, 1),
            (6, BoundaryCondition::PeriodicDC, 0),
            (6, BoundaryCondition::PeriodicIC, 0),
            (5, BoundaryCondition::PeriodicOdd, 1),
        ] {
            let s = sector_spectrum(l, bc, m).unwrap();
            assert!(s.eigenvalues[0].abs() < 1e-9, "{bc:?} L={l}");
            assert!(s.eigenvalues.iter().all(|&e| e > -1e-9));
        }
    }

    #[test]
    fn inclusion_small() {
        for l in [4usize, 6] {
            let rep = spectrum_inclusion(l, 1e-9).unwrap();
            assert!(rep.pass, "L={l}: missing {:?}", rep.missing);
        }
    }
}

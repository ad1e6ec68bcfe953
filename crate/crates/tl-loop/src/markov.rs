//! Exact intensity matrix of the loop dynamics on a sector basis and its
//! integer stationary vector.
//!
//! Convention: the master equation reads dP_a/dt = -sum_b H_ab P_b, the rate
//! for b -> a is -H_ab >= 0, and probability conservation is the statement
//! that every COLUMN of H sums to zero (the all-ones row vector annihilates
//! H from the left). Columns are built generator by generator: a generator
//! that fixes a state contributes nothing; one that moves it adds 1 to the
//! diagonal and -1 to the target row. In sectors with two or more defects a
//! generator may annihilate a defect pair; such moves leave the sector and
//! contribute only to the diagonal, so those columns sum to a positive
//! number instead ("leaky" columns, used for spectra only).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::counts::BigCount;
use crate::error::{Error, Result};
use crate::link::{apply_generator_counted, BoundaryCondition, SectorBasis};

/// Sparse exact-integer intensity matrix on a sector basis.
#[derive(Clone, Debug)]
pub struct IntensityMatrix {
    pub l: usize,
    pub bc: BoundaryCondition,
    pub defects: usize,
    n: usize,
    /// Off-diagonal entries per column: row -> multiplicity m (entry is -m).
    cols: Vec<BTreeMap<usize, i64>>,
    diag: Vec<i64>,
    /// Per column, the number of generators whose image left the sector.
    leak: Vec<i64>,
}

impl IntensityMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self, col: usize) -> i64 {
        self.diag[col]
    }

    /// Moves out of `col`: (target row, multiplicity). Unit-rate moves, so
    /// the total exit rate of the column is its diagonal.
    pub fn moves(&self, col: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.cols[col].iter().map(|(&r, &m)| (r, m))
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        if row == col {
            self.diag[col]
        } else {
            -self.cols[col].get(&row).copied().unwrap_or(0)
        }
    }

    /// Whether some column has sector-leaving moves (defect annihilation).
    pub fn is_leaky(&self) -> bool {
        self.leak.iter().any(|&x| x > 0)
    }

    pub fn leak(&self, col: usize) -> i64 {
        self.leak[col]
    }

    /// Test aid: bump one entry to break the intensity structure.
    pub fn perturb(&mut self, row: usize, col: usize, delta: i64) {
        if row == col {
            self.diag[col] += delta;
        } else {
            let e = self.cols[col].entry(row).or_insert(0);
            *e -= delta;
            if *e == 0 {
                self.cols[col].remove(&row);
            }
        }
    }

    /// Dense row-major copy, mainly for eigensolvers.
    pub fn to_dense_f64(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        for col in 0..n {
            a[col * n + col] = self.diag[col] as f64;
            for (&row, &m) in &self.cols[col] {
                a[row * n + col] = -(m as f64);
            }
        }
        a
    }

    /// Exact matrix-vector product H v.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n];
        for col in 0..self.n {
            out[col] += BigInt::from(self.diag[col]) * &v[col];
            for (&row, &m) in &self.cols[col] {
                out[row] -= BigInt::from(m) * &v[col];
            }
        }
        out
    }
}

/// Builds H = sum_i (1 - e_i) on the given sector basis.
pub fn build_intensity_matrix(basis: &SectorBasis) -> Result<IntensityMatrix> {
    let n = basis.len();
    let gens = basis.bc.generator_count(basis.l);
    let mut cols = vec![BTreeMap::new(); n];
    let mut diag = vec![0i64; n];
    let mut leak = vec![0i64; n];
    for (b, state) in basis.states().iter().enumerate() {
        for i in 1..=gens {
            let (image, info) = apply_generator_counted(i, state)?;
            if info.annihilated {
                diag[b] += 1;
                leak[b] += 1;
                continue;
            }
            if image == *state {
                continue;
            }
            let a = basis
                .position(&image)
                .ok_or_else(|| Error::BasisNotClosed {
                    generator: i,
                    state: state.to_string(),
                })?;
            diag[b] += 1;
            *cols[b].entry(a).or_insert(0) += 1;
        }
    }
    Ok(IntensityMatrix {
        l: basis.l,
        bc: basis.bc,
        defects: basis.defects,
        n,
        cols,
        diag,
        leak,
    })
}

/// Structural check report for an intensity matrix.
#[derive(Clone, Debug, Serialize)]
pub struct IntensityReport {
    pub pass: bool,
    pub violations: Vec<String>,
}

/// Checks sign pattern, column sums and the diagonal formula. Columns with
/// sector-leaving moves are required to over-conserve (sum = leak count);
/// all others must sum to zero exactly.
pub fn verify_intensity(h: &IntensityMatrix) -> IntensityReport {
    let mut violations = Vec::new();
    for col in 0..h.n {
        if h.diag[col] < 0 {
            violations.push(format!("column {col}: negative diagonal {}", h.diag[col]));
        }
        let mut off_sum = 0i64;
        for (&row, &m) in &h.cols[col] {
            if m <= 0 {
                violations.push(format!(
                    "column {col}: off-diagonal entry at row {row} is {} (> 0)",
                    -m
                ));
            }
            off_sum += m;
        }
        let expected_diag = off_sum + h.leak[col];
        if h.diag[col] != expected_diag {
            violations.push(format!(
                "column {col}: diagonal {} but {} moving generators",
                h.diag[col], expected_diag
            ));
        }
        if violations.len() >= 8 {
            violations.push("...".into());
            break;
        }
    }
    IntensityReport {
        pass: violations.is_empty(),
        violations,
    }
}

/// Exact stationary vector: nonnegative coprime integers with H v = 0.
#[derive(Clone, Debug)]
pub struct StationaryVector {
    pub l: usize,
    pub bc: BoundaryCondition,
    pub defects: usize,
    pub entries: Vec<BigCount>,
    /// Normalization S = sum of entries.
    pub sum: BigCount,
}

impl StationaryVector {
    pub fn max_entry(&self) -> &BigCount {
        self.entries.iter().max().unwrap()
    }

    pub fn min_entry(&self) -> &BigCount {
        self.entries.iter().min().unwrap()
    }
}

/// Solves H v = 0 exactly. The kernel must be one-dimensional and
/// sign-definite; both conditions failing signals a sector construction bug
/// upstream.
pub fn stationary_vector(h: &IntensityMatrix) -> Result<StationaryVector> {
    if h.is_leaky() {
        return Err(Error::Invalid(
            "stationary vector requested for a leaky (annihilating) sector block".into(),
        ));
    }
    let n = h.dim();
    let entries = if n == 1 {
        vec![BigUint::one()]
    } else {
        integer_kernel(h)?
    };
    let sum = entries.iter().fold(BigUint::zero(), |a, b| a + b);
    // exact residual check
    let signed: Vec<BigInt> = entries
        .iter()
        .map(|e| BigInt::from_biguint(Sign::Plus, e.clone()))
        .collect();
    let resid = h.apply(&signed);
    if resid.iter().any(|r| !r.is_zero()) {
        return Err(Error::Invalid("stationary residual is nonzero".into()));
    }
    Ok(StationaryVector {
        l: h.l,
        bc: h.bc,
        defects: h.defects,
        entries,
        sum,
    })
}

/// Fraction-free Gaussian elimination over the integers with pivoting on the
/// smallest nonzero magnitude (keeps the cross-multipliers small), followed
/// by rational back-substitution, denominator clearing and gcd reduction.
fn integer_kernel(h: &IntensityMatrix) -> Result<Vec<BigCount>> {
    let n = h.dim();
    let mut mat: Vec<Vec<BigInt>> = (0..n)
        .map(|r| (0..n).map(|c| BigInt::from(h.entry(r, c))).collect())
        .collect();

    let mut pivot_col_of_row = Vec::new();
    let mut row_i = 0usize;
    for col in 0..n {
        // pick the nonzero pivot of least magnitude in this column
        let pivot_row = (row_i..n)
            .filter(|&r| !mat[r][col].is_zero())
            .min_by_key(|&r| mat[r][col].magnitude().clone());
        let Some(pr) = pivot_row else {
            continue; // free column
        };
        mat.swap(row_i, pr);
        let pivot = mat[row_i][col].clone();
        for r in row_i + 1..n {
            if mat[r][col].is_zero() {
                continue;
            }
            let g = pivot.gcd(&mat[r][col]);
            let pm = &pivot / &g;
            let cm = &mat[r][col] / &g;
            for c in col..n {
                let v = &mat[r][c] * &pm - &mat[row_i][c] * &cm;
                mat[r][c] = v;
            }
            // reduce the row by its content to keep growth in check
            let content = mat[r][col..]
                .iter()
                .fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if content.magnitude() > &BigUint::one() {
                for c in col..n {
                    mat[r][c] = &mat[r][c] / &content;
                }
            }
        }
        pivot_col_of_row.push(col);
        row_i += 1;
        if row_i == n {
            break;
        }
    }
    let rank = row_i;
    if rank != n - 1 {
        return Err(Error::KernelDimension(n - rank));
    }
    let free_col = (0..n)
        .find(|c| !pivot_col_of_row.contains(c))
        .expect("rank n-1 leaves one free column");

    // back-substitution over rationals with the free variable set to 1
    let mut x = vec![BigRational::zero(); n];
    x[free_col] = BigRational::one();
    for r in (0..rank).rev() {
        let pc = pivot_col_of_row[r];
        let mut acc = BigRational::zero();
        for c in pc + 1..n {
            if !mat[r][c].is_zero() {
                acc += BigRational::from_integer(mat[r][c].clone()) * &x[c];
            }
        }
        x[pc] = -acc / BigRational::from_integer(mat[r][pc].clone());
    }

    // clear denominators, reduce by gcd, fix the overall sign
    let denom_lcm = x
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut ints: Vec<BigInt> = x
        .iter()
        .map(|v| (v * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if content.is_zero() {
        return Err(Error::KernelDimension(0));
    }
    for v in &mut ints {
        *v = &*v / &content;
    }
    let pos = ints.iter().any(|v| v.is_positive());
    let neg = ints.iter().any(|v| v.is_negative());
    if pos && neg {
        return Err(Error::NonSignDefiniteKernel);
    }
    if neg {
        for v in &mut ints {
            *v = -&*v;
        }
    }
    Ok(ints.into_iter().map(|v| v.to_biguint().unwrap()).collect())
}

/// JSON export of a stationary vector alongside its basis.
#[derive(Serialize)]
pub struct StationaryExport {
    #[serde(rename = "L")]
    pub l: usize,
    pub bc: String,
    pub defects: usize,
    pub states: Vec<String>,
    pub stationary: Vec<String>,
    #[serde(rename = "S")]
    pub s: String,
}

pub fn stationary_export(basis: &SectorBasis, v: &StationaryVector) -> StationaryExport {
    StationaryExport {
        l: v.l,
        bc: v.bc.flag().to_string(),
        defects: v.defects,
        states: basis.serialized(),
        stationary: v.entries.iter().map(|e| e.to_string()).collect(),
        s: v.sum.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts;
    use crate::link::enumerate_sector;
    use BoundaryCondition::*;

    fn stationary(l: usize, bc: BoundaryCondition, m: usize) -> StationaryVector {
        let basis = enumerate_sector(l, bc, m).unwrap();
        let h = build_intensity_matrix(&basis).unwrap();
        stationary_vector(&h).unwrap()
    }

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn closed_l4_matrix_by_hand() {
        let basis = enumerate_sector(4, Closed, 0).unwrap();
        let h = build_intensity_matrix(&basis).unwrap();
        // basis order: a = (1 2)(3 4), b = (1 4)(2 3)
        assert_eq!(h.entry(0, 0), 1);
        assert_eq!(h.entry(1, 0), -1);
        assert_eq!(h.entry(1, 1), 2);
        assert_eq!(h.entry(0, 1), -2);
        let v = stationary_vector(&h).unwrap();
        assert_eq!(v.entries, vec![u(2), u(1)]);
        assert_eq!(v.sum, u(3));
    }

    #[test]
    fn single_state_sector() {
        let v = stationary(2, Closed, 0);
        assert_eq!(v.entries, vec![u(1)]);
        assert_eq!(v.sum, u(1));
    }

    #[test]
    fn column_sums_vanish() {
        for (l, bc, m) in [
            (8usize, Closed, 0usize),
            (7, Closed, 1),
            (6, PeriodicDC, 0),
            (6, PeriodicIC, 0),
            (5, PeriodicOdd, 1),
        ] {
            let basis = enumerate_sector(l, bc, m).unwrap();
            let h = build_intensity_matrix(&basis).unwrap();
            assert!(!h.is_leaky());
            for col in 0..h.dim() {
                let sum: i64 = (0..h.dim()).map(|r| h.entry(r, col)).sum();
                assert_eq!(sum, 0, "column {col} of {bc:?} L={l}");
            }
            assert!(verify_intensity(&h).pass);
        }
    }

    #[test]
    fn verify_catches_perturbation() {
        let basis = enumerate_sector(6, Closed, 0).unwrap();
        let mut h = build_intensity_matrix(&basis).unwrap();
        h.perturb(2, 0, 1);
        let report = verify_intensity(&h);
        assert!(!report.pass);
        assert!(report.violations[0].contains("column 0"));
    }

    #[test]
    fn closed_even_identities() {
        // S(L) = A_V(L+1), max entry = N_8(L)
        for l in [2usize, 4, 6, 8] {
            let v = stationary(l, Closed, 0);
            assert_eq!(v.sum, counts::asm_vertical(l as u64 + 1).unwrap(), "S({l})");
            assert_eq!(
                *v.max_entry(),
                counts::n8(l as u64).unwrap(),
                "max at L={l}"
            );
            assert_eq!(*v.min_entry(), u(1), "min at L={l}");
        }
        let v6 = stationary(6, Closed, 0);
        assert_eq!(v6.sum, u(26));
        assert_eq!(*v6.max_entry(), u(11));
        // the fully nested state carries a single configuration
        let basis = enumerate_sector(6, Closed, 0).unwrap();
        let nested = basis
            .states()
            .iter()
            .position(|s| s.to_string() == "(1 6)(2 5)(3 4)")
            .unwrap();
        assert_eq!(v6.entries[nested], u(1));
    }

    #[test]
    fn closed_odd_identities() {
        // S(L) = N_8(L+1), max entry = A_V(L)
        for l in [3usize, 5, 7] {
            let v = stationary(l, Closed, 1);
            assert_eq!(v.sum, counts::n8(l as u64 + 1).unwrap(), "S({l})");
            assert_eq!(
                *v.max_entry(),
                counts::asm_vertical(l as u64).unwrap(),
                "max at L={l}"
            );
        }
        // normalization at L equals the largest entry at L+1
        for l in [3usize, 5, 7] {
            let odd = stationary(l, Closed, 1);
            let even = stationary(l + 1, Closed, 0);
            assert_eq!(odd.sum, *even.max_entry());
        }
    }

    #[test]
    fn periodic_identities() {
        for l in [2usize, 4, 6] {
            let v = stationary(l, PeriodicDC, 0);
            assert_eq!(v.sum, counts::asm_half_turn(l as u64), "DC S({l})");
            assert_eq!(
                *v.max_entry(),
                counts::asm_half_turn(l as u64 - 1),
                "DC max at L={l}"
            );
        }
        for l in [2usize, 4, 6, 8] {
            let v = stationary(l, PeriodicIC, 0);
            assert_eq!(v.sum, counts::asm(l as u64 / 2), "IC S({l})");
        }
        for l in [3usize, 5] {
            let v = stationary(l, PeriodicOdd, 1);
            assert_eq!(v.sum, counts::asm_half_turn(l as u64), "podd S({l})");
            let a = counts::asm(l as u64 / 2);
            assert_eq!(*v.max_entry(), &a * &a, "podd max at L={l}");
        }
    }

    #[test]
    fn leaky_sector_block() {
        let basis = enumerate_sector(4, Closed, 2).unwrap();
        let h = build_intensity_matrix(&basis).unwrap();
        assert!(h.is_leaky());
        assert!(stationary_vector(&h).is_err());
        assert!(verify_intensity(&h).pass);
    }
}

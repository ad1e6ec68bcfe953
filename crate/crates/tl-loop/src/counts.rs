//! Product formulas for the counting sequences attached to the loop model:
//! Catalan numbers, alternating-sign-matrix counts and their symmetry
//! classes, and the number of link patterns with a given defect count.
//!
//! All products are accumulated as exact rationals and the final value is
//! asserted to be an integer, which catches transcription slips immediately.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn into_count(x: BigRational, what: &str) -> BigUint {
    assert!(x.is_integer(), "{what}: product is not an integer: {x}");
    assert!(!x.is_negative(), "{what}: product is negative: {x}");
    x.to_integer().to_biguint().unwrap()
}

/// n-th Catalan number C_n = binom(2n,n)/(n+1); 1, 1, 2, 5, 14, ...
pub fn catalan(n: u64) -> BigCount {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// Number of n x n alternating sign matrices, A(n) = prod_k (3k+1)!/(n+k)!;
/// 1, 2, 7, 42, 429, ...
pub fn asm(n: u64) -> BigCount {
    let mut acc = BigRational::one();
    for k in 0..n {
        acc *= ratio(factorial(3 * k + 1), factorial(n + k));
    }
    into_count(acc, "asm")
}

/// Number of vertically symmetric m x m ASMs for odd m = 2n+1;
/// 1, 1, 3, 26, 646, ... starting at m = 1.
pub fn asm_vertical(m: u64) -> Result<BigCount> {
    if m % 2 == 0 {
        return Err(Error::Invalid(format!(
            "asm_vertical takes an odd argument, got {m}"
        )));
    }
    let n = (m - 1) / 2;
    let mut acc = BigRational::one();
    for j in 0..n {
        acc *= BigRational::from_integer(BigUint::from(3 * j + 2).into());
        acc *= ratio(
            factorial(2 * j + 1) * factorial(6 * j + 3),
            factorial(4 * j + 2) * factorial(4 * j + 3),
        );
    }
    Ok(into_count(acc, "asm_vertical"))
}

/// Number of cyclically symmetric transpose complement plane partitions in a
/// 2n x 2n x 2n box, indexed by the even argument m = 2n; 1, 2, 11, 170, ...
pub fn n8(m: u64) -> Result<BigCount> {
    if m % 2 != 0 || m == 0 {
        return Err(Error::Invalid(format!(
            "n8 takes a positive even argument, got {m}"
        )));
    }
    let n = m / 2;
    let mut acc = BigRational::one();
    for j in 1..n {
        acc *= BigRational::from_integer(BigUint::from(3 * j + 1).into());
        acc *= ratio(
            factorial(2 * j) * factorial(6 * j),
            factorial(4 * j) * factorial(4 * j + 1),
        );
    }
    Ok(into_count(acc, "n8"))
}

/// Number of m x m half-turn symmetric ASMs.
///
/// Even m = 2n: prod_{k<n} (3k+2)/(3k+1) * ((3k+1)!/(n+k)!)^2 = 2, 10, 140, 5544, ...
/// Odd m = 2n-1: prod over k = 1..n-1 of 4/3 * ((3k)! k! / (2k)!^2)^2 = 1, 3, 25, 588, ...
/// (The odd product over k = 0..n-1 would carry a spurious 4/3 per term and
/// does not reproduce the sequence; the k = 0 factor is dropped.)
pub fn asm_half_turn(m: u64) -> BigCount {
    assert!(m >= 1, "asm_half_turn takes m >= 1");
    let mut acc = BigRational::one();
    if m % 2 == 0 {
        let n = m / 2;
        for k in 0..n {
            acc *= ratio(BigUint::from(3 * k + 2), BigUint::from(3 * k + 1));
            let f = ratio(factorial(3 * k + 1), factorial(n + k));
            acc *= f.clone() * f;
        }
    } else {
        let n = (m + 1) / 2;
        for k in 1..n {
            acc *= ratio(BigUint::from(4u32), BigUint::from(3u32));
            let f = ratio(
                factorial(3 * k) * factorial(k),
                factorial(2 * k) * factorial(2 * k),
            );
            acc *= f.clone() * f;
        }
    }
    into_count(acc, "asm_half_turn")
}

/// Number of link patterns on L sites with m defects:
/// binom(L, floor((L-m+1)/2)) - binom(L, floor((L-m-1)/2)).
pub fn count_states(l: u64, m: u64) -> Result<BigCount> {
    if m > l || (l - m) % 2 != 0 {
        return Err(Error::ParityMismatch {
            l: l as usize,
            defects: m as usize,
            bc: "closed".into(),
        });
    }
    let a = binomial(l, (l - m + 1) / 2);
    let b = if m + 1 > l {
        BigUint::zero()
    } else {
        binomial(l, (l - m - 1) / 2)
    };
    Ok(a - b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn catalan_prefix() {
        let got: Vec<_> = (0..=10).map(catalan).collect();
        let want = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
        for (g, w) in got.iter().zip(want) {
            assert_eq!(*g, u(w));
        }
    }

    #[test]
    fn asm_prefix() {
        let got: Vec<_> = (1..=6).map(asm).collect();
        assert_eq!(got, vec![u(1), u(2), u(7), u(42), u(429), u(7436)]);
    }

    #[test]
    fn asm_vertical_prefix() {
        assert_eq!(asm_vertical(1).unwrap(), u(1));
        assert_eq!(asm_vertical(3).unwrap(), u(1));
        assert_eq!(asm_vertical(5).unwrap(), u(3));
        assert_eq!(asm_vertical(7).unwrap(), u(26));
        assert_eq!(asm_vertical(9).unwrap(), u(646));
        assert!(asm_vertical(4).is_err());
    }

    #[test]
    fn n8_prefix() {
        assert_eq!(n8(2).unwrap(), u(1));
        assert_eq!(n8(4).unwrap(), u(2));
        assert_eq!(n8(6).unwrap(), u(11));
        assert_eq!(n8(8).unwrap(), u(170));
        assert!(n8(3).is_err());
        assert!(n8(0).is_err());
    }

    #[test]
    fn asm_half_turn_prefix() {
        // even arguments
        assert_eq!(asm_half_turn(2), u(2));
        assert_eq!(asm_half_turn(4), u(10));
        assert_eq!(asm_half_turn(6), u(140));
        assert_eq!(asm_half_turn(8), u(5544));
        // odd arguments
        assert_eq!(asm_half_turn(1), u(1));
        assert_eq!(asm_half_turn(3), u(3));
        assert_eq!(asm_half_turn(5), u(25));
        assert_eq!(asm_half_turn(7), u(588));
    }

    #[test]
    fn count_states_values() {
        assert_eq!(count_states(6, 0).unwrap(), u(5));
        assert_eq!(count_states(6, 2).unwrap(), u(9));
        assert_eq!(count_states(6, 6).unwrap(), u(1));
        assert_eq!(count_states(3, 1).unwrap(), u(2));
        assert!(count_states(6, 3).is_err());
    }

    #[test]
    fn defect_sum_identity() {
        // summing over all defect sectors recovers binom(L, floor(L/2))
        for l in 1..=30u64 {
            let mut total = BigUint::zero();
            let mut m = l % 2;
            while m <= l {
                total += count_states(l, m).unwrap();
                m += 2;
            }
            assert_eq!(total, binomial(l, l / 2), "L={l}");
        }
    }
}

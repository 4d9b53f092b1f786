//! Multisets of positive integers with a prescribed sum of reciprocals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

/// All `d₁ ≤ … ≤ d_m` with `Σ 1/dᵢ = q`.
pub fn diophantine_reciprocals(q: &BigRational, m: usize) -> Vec<Vec<u64>> {
    diophantine_reciprocals_bounded(q, m, None)
}

/// As [`diophantine_reciprocals`], keeping only solutions with every `dᵢ ≤ max`.
pub fn diophantine_reciprocals_bounded(q: &BigRational, m: usize, max: Option<u64>) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if m == 0 || !q.is_positive() {
        return out;
    }
    let mut current = Vec::with_capacity(m);
    descend(q, m, 1, max, &mut current, &mut out);
    out
}

fn descend(rem: &BigRational, left: usize, min_d: u64, max: Option<u64>, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if left == 1 {
        // The last term is forced: rem must be a unit fraction.
        if rem.numer().is_one() {
            if let Some(d) = rem.denom().to_u64() {
                if d >= min_d && max.is_none_or(|mx| d <= mx) {
                    current.push(d);
                    out.push(current.clone());
                    current.pop();
                }
            }
        }
        return;
    }
    // Smallest term first: 1/d ≤ rem and left/d ≥ rem.
    let lower = ceil_to_u64(&rem.recip()).max(min_d);
    let upper_q = BigRational::from_integer(BigInt::from(left as u64)) / rem;
    let mut upper = upper_q.floor().to_integer().to_u64().unwrap_or(u64::MAX);
    if let Some(mx) = max {
        upper = upper.min(mx);
    }
    let mut d = lower;
    while d <= upper {
        let next = rem - BigRational::new(BigInt::one(), BigInt::from(d));
        if next.is_positive() {
            current.push(d);
            descend(&next, left - 1, d, max, current, out);
            current.pop();
        }
        d += 1;
    }
}

fn ceil_to_u64(x: &BigRational) -> u64 {
    x.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};
    use num_traits::Zero;
    use proptest::prelude::*;

    /// Exhaustive search over `d ≤ 64` in integer arithmetic scaled by
    /// `lcm(1..=64)`, with only the obvious "sum too small" cut.
    fn brute(q: &BigRational, m: usize) -> Vec<Vec<u64>> {
        const MAX: u128 = 64;
        let l: u128 = (1..=MAX).fold(1u128, |a, b| a / gcd(a, b) * b);
        fn gcd(a: u128, b: u128) -> u128 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        let target = (q * BigRational::from_integer(BigInt::from(l))).to_integer().to_u128().unwrap();
        fn go(target: u128, l: u128, m: usize, min_d: u128, sum: u128, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if cur.len() == m {
                if sum == target {
                    out.push(cur.clone());
                }
                return;
            }
            let left = (m - cur.len()) as u128;
            for d in min_d..=MAX {
                if sum + left * (l / d) < target {
                    break;
                }
                cur.push(d as u64);
                go(target, l, m, d, sum + l / d, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(target, l, m, 1, 0, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn eleven_twelfths() {
        assert_eq!(
            diophantine_reciprocals(&ratio(11, 12), 3),
            vec![vec![2, 3, 12], vec![2, 4, 6], vec![3, 3, 4]]
        );
        assert_eq!(diophantine_reciprocals_bounded(&ratio(11, 12), 3, Some(4)), vec![vec![3, 3, 4]]);
    }

    #[test]
    fn small_cases() {
        assert_eq!(diophantine_reciprocals(&rat(1), 2), vec![vec![2, 2]]);
        assert_eq!(diophantine_reciprocals(&rat(2), 2), vec![vec![1, 1]]);
        assert!(diophantine_reciprocals(&rat(0), 2).is_empty());
        assert_eq!(diophantine_reciprocals(&rat(1), 3), vec![vec![2, 3, 6], vec![2, 4, 4], vec![3, 3, 3]]);
        assert_eq!(diophantine_reciprocals_bounded(&rat(1), 3, Some(4)), vec![vec![2, 4, 4], vec![3, 3, 3]]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn complete_against_brute_force(ds in prop::collection::vec(1u64..=12, 1..=4)) {
            let m = ds.len();
            let q: BigRational = ds.iter().map(|&d| ratio(1, d as i64)).fold(BigRational::zero(), |a, b| a + b);
            let fast = diophantine_reciprocals(&q, m);
            let slow = brute(&q, m);
            // Solutions with a term above 64 are invisible to the brute force.
            let fast_small: Vec<_> = fast.iter().filter(|s| s.iter().all(|&d| d <= 64)).cloned().collect();
            prop_assert_eq!(fast_small, slow);
            let mut sorted = ds.clone();
            sorted.sort_unstable();
            prop_assert!(fast.contains(&sorted));
        }
    }
}

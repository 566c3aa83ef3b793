//! Enumeration primitives: subsets, simplex compositions and permutations.

use crate::error::{Error, Result};

/// `C(n, k)` in 128-bit arithmetic, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// `n!` in 128-bit arithmetic, `None` on overflow.
pub fn factorial(n: u64) -> Option<u128> {
    (1..=u128::from(n)).try_fold(1u128, |acc, i| acc.checked_mul(i))
}

pub(crate) fn check_cap(count: Option<u128>, cap: u64, hint: &'static str) -> Result<usize> {
    match count {
        Some(c) if c <= u128::from(cap) => Ok(c as usize),
        Some(c) => Err(Error::EnumerationCap {
            count: c.to_string(),
            cap,
            hint,
        }),
        None => Err(Error::EnumerationCap {
            count: "more than 2^128".into(),
            cap,
            hint,
        }),
    }
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
pub fn unrank_combination(n: usize, k: usize, mut rank: u128, out: &mut Vec<usize>) {
    out.clear();
    let mut next = 0;
    for slot in 0..k {
        loop {
            // Subsets whose `slot`-th element is `next`.
            let block = binomial((n - next - 1) as u64, (k - slot - 1) as u64).unwrap_or(u128::MAX);
            if rank < block {
                break;
            }
            rank -= block;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
}

/// Lexicographic iterator over the `k`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Self { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.as_mut()?;
        let out = current.clone();
        let k = current.len();
        match (0..k).rev().find(|&i| current[i] < self.n - k + i) {
            Some(i) => {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
            }
            None => self.current = None,
        }
        Some(out)
    }
}

/// Every way of writing `total` as an ordered sum of `parts` non-negative
/// integers, starting at `(total, 0, ..., 0)` and ending at
/// `(0, ..., 0, total)` (descending lexicographic order).
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Compositions {
    pub fn new(total: u32, parts: usize) -> Self {
        let current = if parts == 0 {
            None
        } else {
            let mut v = vec![0; parts];
            v[0] = total;
            Some(v)
        };
        Self { current }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.current.as_mut()?;
        let out = current.clone();
        let parts = current.len();
        // Move one unit from the rightmost non-zero slot before the last to
        // its right neighbour, and sweep everything after it into that slot.
        match (0..parts.saturating_sub(1)).rev().find(|&i| current[i] > 0) {
            Some(i) => {
                let tail: u32 = current[i + 1..].iter().sum();
                current[i] -= 1;
                for slot in &mut current[i + 1..] {
                    *slot = 0;
                }
                current[i + 1] = tail + 1;
            }
            None => self.current = None,
        }
        Some(out)
    }
}

/// The `rank`-th permutation of `0..n` in lexicographic order.
pub fn unrank_permutation(n: usize, mut rank: u128, out: &mut Vec<usize>) {
    let mut pool: Vec<usize> = (0..n).collect();
    out.clear();
    for slot in 0..n {
        let block = factorial((n - slot - 1) as u64).expect("caller bounds n");
        let pick = (rank / block) as usize;
        rank %= block;
        out.push(pool.remove(pick));
    }
}

//! Slow reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use cfspectra::words::{RepetitionWitness, SharedBlockWitness};
use cfspectra::{BigInt, BigRational};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Maximal-`m` filter over `(anchor, m)` triples, then the detector thresholds.
fn keep_max(found: impl Iterator<Item = ((usize, usize), usize)>) -> BTreeMap<(usize, usize), usize> {
    let mut best = BTreeMap::new();
    for (key, m) in found {
        let e = best.entry(key).or_insert(0);
        *e = (*e).max(m);
    }
    best
}

fn ratio_ok(outer: usize, m: usize, l: &BigRational) -> bool {
    BigRational::new(outer.into(), m.into()) <= *l
}

/// Every factorization `A B A' B` of a prefix, checked letter by letter.
pub fn repetitions(w: &[u64], l: &BigRational, min_b: usize, gap: usize) -> Vec<RepetitionWitness> {
    let n = w.len();
    let mut found = Vec::new();
    for i in gap..n {
        for m in 1..=n {
            for ka in gap..=n {
                let j = i + m + ka;
                if j + m > n {
                    break;
                }
                if (0..m).all(|t| w[i + t] == w[j + t]) {
                    found.push(((i, j), m));
                }
            }
        }
    }
    keep_max(found.into_iter())
        .into_iter()
        .filter(|&((_, j), m)| m >= min_b && ratio_ok(j - m, m, l))
        .map(|((i, j), m)| RepetitionWitness { m, k_a: i, k_a_prime: j - i - m, mirror: false })
        .collect()
}

/// Every factorization `A B A' rev(B)` of a prefix.
pub fn mirror_repetitions(w: &[u64], l: &BigRational, min_b: usize, gap: usize) -> Vec<RepetitionWitness> {
    let n = w.len();
    let mut found = Vec::new();
    for i in gap..n {
        for m in 1..=n {
            for ka in gap..=n {
                let e = i + 2 * m + ka;
                if e > n {
                    break;
                }
                let j = e - m;
                if (0..m).all(|t| w[i + t] == w[j + m - 1 - t]) {
                    found.push(((i, e), m));
                }
            }
        }
    }
    keep_max(found.into_iter())
        .into_iter()
        .filter(|&((_, e), m)| m >= min_b && ratio_ok(e - 2 * m, m, l))
        .map(|((i, e), m)| RepetitionWitness { m, k_a: i, k_a_prime: e - i - 2 * m, mirror: true })
        .collect()
}

/// Every block `a[k..k+m]` equal to `a'[l..l+m]` (reversed when `mirror`).
pub fn shared_blocks(a: &[u64], ap: &[u64], lb: &BigRational, min_b: usize, mirror: bool) -> Vec<SharedBlockWitness> {
    let mut found = Vec::new();
    for k in 0..a.len() {
        for l in 0..ap.len() {
            for m in 1..=(a.len() - k).min(ap.len() - l) {
                let ok = if mirror {
                    (0..m).all(|t| a[k + t] == ap[l + m - 1 - t])
                } else {
                    (0..m).all(|t| a[k + t] == ap[l + t])
                };
                if ok {
                    let anchor = if mirror { (k, l + m) } else { (k, l) };
                    found.push((anchor, m));
                }
            }
        }
    }
    keep_max(found.into_iter())
        .into_iter()
        .map(|((k, x), m)| if mirror { (k, x - m, m) } else { (k, x, m) })
        .filter(|&(k, l, m)| m >= min_b.max(1) && ratio_ok(k + l, m, lb))
        .map(|(k, l, m)| SharedBlockWitness::new(k, l, m, mirror))
        .collect()
}

pub fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

/// Partial quotients of `k^{1/n}` by the Gauss map `x -> 1/(x - floor x)`
/// on fixed-point intervals with `bits` fractional bits. Each floor must be
/// unambiguous on the current interval, and the final word is certified by
/// exact sign tests of `x^n - k` at consecutive convergent brackets.
pub fn gauss_map_root(k: u64, n: u32, count: usize, bits: u64) -> Result<Vec<BigInt>, String> {
    let one: BigInt = BigInt::one() << bits;
    let m = (BigInt::from(k) << (bits * n as u64)).nth_root(n);
    let (mut lo, mut hi) = (m.clone(), m + 1u32);
    let mut out = Vec::with_capacity(count + 1);
    for idx in 0..=count {
        let a = lo.div_floor(&one);
        if hi.div_floor(&one) != a || (&a + 1u32) * &one == hi {
            return Err(format!("floor of quotient {idx} ambiguous at {bits} bits"));
        }
        out.push(a.clone());
        let (ylo, yhi) = (&lo - &a * &one, &hi - &a * &one);
        if !ylo.is_positive() {
            return Err(format!("interval reaches the pole at quotient {idx}"));
        }
        let num: BigInt = BigInt::one() << (2 * bits);
        lo = num.div_floor(&yhi);
        hi = num.div_ceil(&ylo);
    }
    certify_root_word(k, n, &out)?;
    Ok(out)
}

/// `[a0; ..., a_j]` and `[a0; ..., a_j + 1]` bracket the root for every `j`.
fn certify_root_word(k: u64, n: u32, word: &[BigInt]) -> Result<(), String> {
    let sign = |p: &BigInt, q: &BigInt| (p.pow(n) - BigInt::from(k) * q.pow(n)).signum();
    let (mut p1, mut q1, mut p2, mut q2) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for (j, a) in word.iter().enumerate() {
        let (p, q) = (a * &p1 + &p2, a * &q1 + &q2);
        let (pn, qn) = (&p + &p1, &q + &q1);
        let (s1, s2) = (sign(&p, &q), sign(&pn, &qn));
        if s1.is_zero() || s2.is_zero() || s1 == s2 {
            return Err(format!("quotient {j} not certified"));
        }
        (p2, q2, p1, q1) = (p1, q1, p, q);
    }
    Ok(())
}

//! Repetition, mirror and shared-block detectors on finite quotient words.
//!
//! All detectors enumerate anchor pairs and read the longest common
//! extension off a Z-array computed per start position: quadratic time,
//! linear memory. For each anchor only the maximal block length is kept.
//!
//! Anchors:
//! - repetitions `A B A' B`: start of the first `B` and start of the second;
//! - mirror repetitions `A B A' rev(B)`: start of `B` and end of `rev(B)`;
//! - shared blocks: offsets `(k, l)` of the block in each word;
//! - mirror shared blocks: offset `k` in the first word and the end `l + m`
//!   of the reversed block in the second.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Word = Vec<u64>;

/// Detector thresholds: ratio bound `L`, minimal block length, and whether
/// both `A` parts must be nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectorParams {
    pub l: BigRational,
    pub min_b: usize,
    pub require_nonempty_a: bool,
}

impl DetectorParams {
    pub fn new(l: BigRational, min_b: usize) -> Self {
        DetectorParams { l, min_b: min_b.max(1), require_nonempty_a: true }
    }

    pub fn allow_empty_a(mut self) -> Self {
        self.require_nonempty_a = false;
        self
    }

    /// `outer / m <= L`.
    fn ratio_ok(&self, outer: usize, m: usize) -> bool {
        BigInt::from(outer) * self.l.denom() <= self.l.numer() * BigInt::from(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepetitionWitness {
    pub m: usize,
    pub k_a: usize,
    pub k_a_prime: usize,
    pub mirror: bool,
}

impl RepetitionWitness {
    pub fn ratio(&self) -> BigRational {
        BigRational::new((self.k_a + self.k_a_prime).into(), self.m.into())
    }

    /// Re-checks the factorization against the word.
    pub fn validate(&self, w: &[u64]) -> bool {
        let (i, m) = (self.k_a, self.m);
        let j = i + m + self.k_a_prime;
        if m == 0 || j + m > w.len() {
            return false;
        }
        if self.mirror {
            w[i..i + m].iter().eq(w[j..j + m].iter().rev())
        } else {
            w[i..i + m] == w[j..j + m]
        }
    }
}

impl Serialize for RepetitionWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RepetitionWitness", 5)?;
        st.serialize_field("k", &self.k_a)?;
        st.serialize_field("l", &self.k_a_prime)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("ratio", &self.ratio().to_string())?;
        st.serialize_field("mirror", &self.mirror)?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SharedBlockWitness {
    pub m: usize,
    pub k: usize,
    pub l: usize,
    pub mirror: bool,
}

impl SharedBlockWitness {
    pub fn new(k: usize, l: usize, m: usize, mirror: bool) -> Self {
        SharedBlockWitness { m, k, l, mirror }
    }

    pub fn ratio(&self) -> BigRational {
        BigRational::new((self.k + self.l).into(), self.m.into())
    }

    pub fn validate(&self, a: &[u64], a_prime: &[u64]) -> bool {
        let (k, l, m) = (self.k, self.l, self.m);
        if m == 0 || k + m > a.len() || l + m > a_prime.len() {
            return false;
        }
        if self.mirror {
            a[k..k + m].iter().eq(a_prime[l..l + m].iter().rev())
        } else {
            a[k..k + m] == a_prime[l..l + m]
        }
    }
}

impl Serialize for SharedBlockWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SharedBlockWitness", 5)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("l", &self.l)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("ratio", &self.ratio().to_string())?;
        st.serialize_field("mirror", &self.mirror)?;
        st.end()
    }
}

/// `z[t]` = length of the longest common prefix of `s` and `s[t..]`.
pub fn z_array(s: &[u64]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for t in 1..n {
        let mut k = if t < r { z[t - l].min(r - t) } else { 0 };
        if t + k >= r {
            while t + k < n && s[k] == s[t + k] {
                k += 1;
            }
            if t + k > r {
                l = t;
                r = t + k;
            }
        }
        z[t] = k;
    }
    z
}

/// `ext[t]` = longest common prefix of `pattern` and `text[t..]`, given the
/// Z-array of `pattern`.
pub fn lcp_against(pattern: &[u64], z_pat: &[usize], text: &[u64]) -> Vec<usize> {
    let mut ext = vec![0; text.len()];
    let (mut l, mut r) = (0, 0);
    for t in 0..text.len() {
        let mut k = if t < r { z_pat[t - l].min(r - t) } else { 0 };
        if t + k >= r {
            while k < pattern.len() && t + k < text.len() && pattern[k] == text[t + k] {
                k += 1;
            }
            if t + k > r {
                l = t;
                r = t + k;
            }
        }
        ext[t] = k;
    }
    ext
}

/// Number of distinct factors of length `n`.
pub fn subword_complexity(w: &[u64], n: usize) -> Result<usize> {
    if n == 0 || n > w.len() {
        return Err(Error::InvalidArgument(format!("factor length {n} outside 1..={}", w.len())));
    }
    Ok(w.windows(n).collect::<HashSet<_>>().len())
}

/// All `A B A' B` prefixes of `w`, sorted by `|B|`.
pub fn find_repetitions(w: &[u64], params: &DetectorParams) -> Vec<RepetitionWitness> {
    let n = w.len();
    let gap = usize::from(params.require_nonempty_a);
    let mut out = Vec::new();
    for i in gap..n {
        let z = z_array(&w[i..]);
        for j in i + 1..n {
            let cap = (j - i).saturating_sub(gap);
            let m = z[j - i].min(cap);
            if m >= params.min_b && params.ratio_ok(j - m, m) {
                out.push(RepetitionWitness { m, k_a: i, k_a_prime: j - i - m, mirror: false });
            }
        }
    }
    out.sort();
    out
}

/// All `A B A' rev(B)` prefixes of `w`, sorted by `|B|`.
pub fn find_mirror_repetitions(w: &[u64], params: &DetectorParams) -> Vec<RepetitionWitness> {
    let n = w.len();
    let gap = usize::from(params.require_nonempty_a);
    let rev: Vec<u64> = w.iter().rev().copied().collect();
    let mut out = Vec::new();
    for i in gap..n {
        let pat = &w[i..];
        let ext = lcp_against(pat, &z_array(pat), &rev);
        for e in i + 2..=n {
            let cap = (e - i).saturating_sub(gap) / 2;
            let m = ext[n - e].min(cap);
            if m >= params.min_b && params.ratio_ok(e - 2 * m, m) {
                out.push(RepetitionWitness { m, k_a: i, k_a_prime: e - i - 2 * m, mirror: true });
            }
        }
    }
    out.sort();
    out
}

/// Blocks of `a` that reappear in `a_prime` (reversed when `mirror`).
pub fn find_shared_blocks(
    a: &[u64],
    a_prime: &[u64],
    l_bound: &BigRational,
    min_b: usize,
    mirror: bool,
) -> Vec<SharedBlockWitness> {
    let params = DetectorParams::new(l_bound.clone(), min_b);
    let np = a_prime.len();
    let text: Vec<u64> = if mirror { a_prime.iter().rev().copied().collect() } else { a_prime.to_vec() };
    let mut out = Vec::new();
    for k in 0..a.len() {
        let pat = &a[k..];
        let ext = lcp_against(pat, &z_array(pat), &text);
        if mirror {
            for e in 1..=np {
                let m = ext[np - e].min(e);
                if m >= params.min_b && params.ratio_ok(k + e - m, m) {
                    out.push(SharedBlockWitness::new(k, e - m, m, true));
                }
            }
        } else {
            for (l, &m) in ext.iter().enumerate() {
                if m >= params.min_b && params.ratio_ok(k + l, m) {
                    out.push(SharedBlockWitness::new(k, l, m, false));
                }
            }
        }
    }
    out.sort();
    out
}

/// One witness per distinct `|B|`, giving a strictly increasing sequence.
pub fn increasing_chain<W: Copy, F: Fn(&W) -> usize>(witnesses: &[W], block_len: F) -> Vec<W> {
    let mut out: Vec<W> = Vec::new();
    for w in witnesses {
        if out.last().is_none_or(|prev| block_len(prev) < block_len(w)) {
            out.push(*w);
        }
    }
    out
}

/// Smallest 1-based `i` with `rev(b)` equal to `a` rotated to start at `i`.
pub fn cycle_mirror_shift(a: &[u64], b: &[u64]) -> Result<Option<usize>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty words".into()));
    }
    let n = a.len();
    let rb: Vec<u64> = b.iter().rev().copied().collect();
    Ok((0..n).find(|&s| (0..n).all(|t| a[(s + t) % n] == rb[t])).map(|s| s + 1))
}

/// Lexicographically smallest 1-based `(i, j)` at which `a` and `a_prime`
/// agree to the end of the shorter remainder, over at least `min_tail`
/// letters. Finite-prefix evidence only.
pub fn same_tail_offset(a: &[u64], a_prime: &[u64], min_tail: usize) -> Option<(usize, usize)> {
    let min_tail = min_tail.max(1);
    for i in 0..a.len() {
        let pat = &a[i..];
        let ext = lcp_against(pat, &z_array(pat), a_prime);
        for (j, &len) in ext.iter().enumerate() {
            let avail = pat.len().min(a_prime.len() - j);
            if len == avail && avail >= min_tail {
                return Some((i + 1, j + 1));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedWitness {
    pub witness: SharedBlockWitness,
    pub steps: usize,
    /// Whether `min(k, l) >= 3` held before rewriting.
    pub threshold_met: bool,
}

/// Moves common last letters of the two `A` parts into `B` until they
/// differ or one part is empty.
pub fn normalize_witness(wt: &SharedBlockWitness, a: &[u64], a_prime: &[u64]) -> Result<NormalizedWitness> {
    if wt.mirror {
        return Err(Error::InvalidArgument("normalization applies to plain shared blocks".into()));
    }
    if !wt.validate(a, a_prime) {
        return Err(Error::InvalidArgument(format!("witness {wt:?} does not match the words")));
    }
    let threshold_met = wt.k.min(wt.l) >= 3;
    let mut w = *wt;
    let mut steps = 0;
    while w.k > 0 && w.l > 0 && a[w.k - 1] == a_prime[w.l - 1] {
        w.k -= 1;
        w.l -= 1;
        w.m += 1;
        steps += 1;
    }
    Ok(NormalizedWitness { witness: w, steps, threshold_met })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(l: i64, min_b: usize) -> DetectorParams {
        DetectorParams::new(BigRational::from_integer(l.into()), min_b)
    }

    #[test]
    fn z_and_lcp() {
        assert_eq!(z_array(&[1, 1, 2, 1, 1]), vec![5, 1, 0, 2, 1]);
        let p = [1, 2, 1];
        assert_eq!(lcp_against(&p, &z_array(&p), &[3, 1, 2, 1, 2]), vec![0, 3, 0, 2, 0]);
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(subword_complexity(&[2; 30], 7).unwrap(), 1);
        assert_eq!(subword_complexity(&[1, 2, 1, 2, 1], 2).unwrap(), 2);
        assert!(subword_complexity(&[1, 2], 3).is_err());
        assert!(subword_complexity(&[1, 2], 0).is_err());
    }

    #[test]
    fn square_with_and_without_nonempty_a() {
        let w = [1, 2, 3, 1, 2, 3];
        let loose = find_repetitions(&w, &params(1, 1).allow_empty_a());
        assert!(loose.contains(&RepetitionWitness { m: 3, k_a: 0, k_a_prime: 0, mirror: false }));
        assert!(find_repetitions(&w, &params(1, 1)).iter().all(|r| r.m < 3 && r.k_a > 0));
        let w = [5, 1, 2, 3, 7, 1, 2, 3];
        let found = find_repetitions(&w, &params(1, 3));
        assert_eq!(found, vec![RepetitionWitness { m: 3, k_a: 1, k_a_prime: 1, mirror: false }]);
        assert_eq!(found[0].ratio(), BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn injective_word_has_no_repetition() {
        let w: Vec<u64> = (1..40).collect();
        assert!(find_repetitions(&w, &params(100, 1)).is_empty());
        assert!(find_mirror_repetitions(&w, &params(100, 1)).is_empty());
    }

    #[test]
    fn mirror_example() {
        let w = [4, 1, 2, 3, 9, 3, 2, 1];
        let found = find_mirror_repetitions(&w, &params(2, 3));
        assert_eq!(found, vec![RepetitionWitness { m: 3, k_a: 1, k_a_prime: 1, mirror: true }]);
        assert!(found[0].validate(&w));
    }

    #[test]
    fn shared_block_examples() {
        let l4 = BigRational::from_integer(4.into());
        let found = find_shared_blocks(&[1, 2, 3, 4, 5], &[9, 9, 3, 4, 5], &l4, 2, false);
        assert!(found.contains(&SharedBlockWitness::new(2, 2, 3, false)));
        let a = [1, 2, 3, 4];
        let found = find_shared_blocks(&a, &a, &l4, 1, false);
        assert!(found.contains(&SharedBlockWitness::new(0, 0, 4, false)));
        let found = find_shared_blocks(&[7, 1, 2, 3, 6], &[8, 8, 3, 2, 1, 5], &l4, 3, true);
        assert_eq!(found, vec![SharedBlockWitness::new(1, 2, 3, true)]);
    }

    #[test]
    fn cycle_shift_examples() {
        assert_eq!(cycle_mirror_shift(&[1, 2, 1], &[2, 1, 1]).unwrap(), Some(3));
        assert_eq!(cycle_mirror_shift(&[1, 2, 1], &[1, 2, 1]).unwrap(), Some(1));
        assert_eq!(cycle_mirror_shift(&[1, 1], &[2, 2]).unwrap(), None);
        assert!(matches!(cycle_mirror_shift(&[1], &[1, 2]), Err(Error::LengthMismatch(1, 2))));
    }

    #[test]
    fn tail_examples() {
        assert_eq!(same_tail_offset(&[5, 1, 2, 1, 2, 1, 2], &[9, 9, 1, 2, 1, 2, 1, 2], 3), Some((2, 3)));
        assert_eq!(same_tail_offset(&[1, 2, 3], &[1, 2, 3], 1), Some((1, 1)));
        assert_eq!(same_tail_offset(&[1, 2, 1], &[3, 4, 3], 1), None);
    }

    #[test]
    fn normalization_examples() {
        let (a, b) = ([3, 7, 1, 2], [5, 7, 1, 2]);
        let n = normalize_witness(&SharedBlockWitness::new(2, 2, 2, false), &a, &b).unwrap();
        assert_eq!(n.witness, SharedBlockWitness::new(1, 1, 3, false));
        assert_eq!(n.steps, 1);
        assert!(!n.threshold_met);
        let fixed = SharedBlockWitness::new(1, 1, 3, false);
        assert_eq!(normalize_witness(&fixed, &a, &b).unwrap().witness, fixed);
        let (a, b) = ([1, 2, 5], [1, 2, 5]);
        let zero = SharedBlockWitness::new(0, 0, 3, false);
        assert_eq!(normalize_witness(&zero, &a, &b).unwrap().steps, 0);
    }

    #[test]
    fn chain_is_strictly_increasing() {
        let w: Vec<u64> = [1u64, 2].iter().copied().cycle().take(40).collect();
        let found = find_repetitions(&w, &params(2, 2));
        let chain = increasing_chain(&found, |r| r.m);
        assert!(chain.windows(2).all(|p| p[0].m < p[1].m));
        assert!(chain.len() > 3);
    }
}

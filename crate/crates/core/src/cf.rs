//! Continued-fraction expansions, convergents and the word matrix.
//!
//! Quotients of an algebraic number are extracted without any floating
//! point: the polynomial of the current complete quotient is carried along
//! exactly (`P_{n+1}(y) = y^d P_n(a_n + 1/y)`) together with a rational
//! isolating interval, and each floor is decided by exact sign tests.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebraic::AlgebraicNumber;
use crate::dyadic::{Dyadic, Interval};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::poly::IntPolynomial;

/// Effort limits for certifying a single partial quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandConfig {
    /// Initial bound on the bit length of a quotient search.
    pub bit_budget: u64,
    /// Budget doubles on exhaustion until it would pass this cap.
    pub hard_cap: u64,
}

impl Default for ExpandConfig {
    fn default() -> Self {
        ExpandConfig { bit_budget: 4096, hard_cap: 65536 }
    }
}

/// Convergents `p_n, q_n` for `n = -2 ..= N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergents {
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl Convergents {
    pub fn from_word(a0: &BigInt, quotients: &[BigInt]) -> Self {
        let mut p = vec![BigInt::zero(), BigInt::one()];
        let mut q = vec![BigInt::one(), BigInt::zero()];
        for a in std::iter::once(a0).chain(quotients) {
            let n = p.len();
            p.push(a * &p[n - 1] + &p[n - 2]);
            q.push(a * &q[n - 1] + &q[n - 2]);
        }
        Convergents { p, q }
    }

    /// Largest available index `N`.
    pub fn last_index(&self) -> i64 {
        self.p.len() as i64 - 3
    }

    fn slot(&self, n: i64) -> Result<usize> {
        if n < -2 || n > self.last_index() {
            return Err(Error::InsufficientDepth { needed: n, available: self.last_index() });
        }
        Ok((n + 2) as usize)
    }

    pub fn p(&self, n: i64) -> Result<&BigInt> {
        Ok(&self.p[self.slot(n)?])
    }

    pub fn q(&self, n: i64) -> Result<&BigInt> {
        Ok(&self.q[self.slot(n)?])
    }

    /// `[[p_n, p_{n-1}], [q_n, q_{n-1}]]`, defined for `n >= -1`.
    pub fn matrix(&self, n: i64) -> Result<Mat2> {
        Ok(Mat2::new(
            self.p(n)?.clone(),
            self.p(n - 1)?.clone(),
            self.q(n)?.clone(),
            self.q(n - 1)?.clone(),
        ))
    }

    /// Pairs `(p_n, q_n)` for `n = 0 ..= N`.
    pub fn pairs(&self) -> Vec<(BigInt, BigInt)> {
        self.p[2..].iter().cloned().zip(self.q[2..].iter().cloned()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct CfExpansion {
    a0: BigInt,
    quotients: Vec<BigInt>,
    terminated: bool,
    source: Option<AlgebraicNumber>,
    convergents: OnceLock<Convergents>,
}

impl PartialEq for CfExpansion {
    fn eq(&self, other: &Self) -> bool {
        self.a0 == other.a0 && self.quotients == other.quotients && self.terminated == other.terminated
    }
}

impl CfExpansion {
    /// An explicit word. `terminated` marks the exact value of a finite
    /// fraction rather than a prefix of a longer expansion.
    pub fn from_word(a0: BigInt, quotients: Vec<BigInt>, terminated: bool) -> Result<Self> {
        if let Some((i, a)) = quotients.iter().enumerate().find(|(_, a)| !a.is_positive()) {
            return Err(Error::InvalidArgument(format!("quotient a_{} = {a} is not positive", i + 1)));
        }
        Ok(CfExpansion { a0, quotients, terminated, source: None, convergents: OnceLock::new() })
    }

    /// Attaches `x` to a stored word after one exact check: an irrational `x`
    /// has this prefix iff it lies strictly between `p_N / q_N` and
    /// `(p_N + p_{N-1}) / (q_N + q_{N-1})`.
    pub fn certify_prefix(x: &AlgebraicNumber, a0: BigInt, quotients: Vec<BigInt>) -> Result<Self> {
        if x.is_rational() {
            return Err(Error::InvalidArgument("prefix certification needs an irrational number".into()));
        }
        let mut cf = CfExpansion::from_word(a0, quotients, false)?;
        let c = cf.convergents();
        let n = c.last_index();
        let (p, q) = (c.p(n)?, c.q(n)?);
        let near = BigRational::new(p.clone(), q.clone());
        let far = BigRational::new(p + c.p(n - 1)?, q + c.q(n - 1)?);
        let (lo, hi) = if near < far { (near, far) } else { (far, near) };
        if !(x.cmp_rational(&lo).is_gt() && x.cmp_rational(&hi).is_lt()) {
            return Err(Error::InvalidArgument("stored word is not a prefix of the number".into()));
        }
        cf.source = Some(x.clone());
        Ok(cf)
    }

    pub fn from_i64s(a0: i64, quotients: &[i64]) -> Result<Self> {
        CfExpansion::from_word(a0.into(), quotients.iter().map(|&a| a.into()).collect(), false)
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    /// `a_0, a_1, ..., a_N` as one sequence.
    pub fn full_word(&self) -> Vec<BigInt> {
        std::iter::once(self.a0.clone()).chain(self.quotients.iter().cloned()).collect()
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn terminated(&self) -> bool {
        self.terminated
    }

    pub fn source(&self) -> Option<&AlgebraicNumber> {
        self.source.as_ref()
    }

    pub fn convergents(&self) -> &Convergents {
        self.convergents.get_or_init(|| Convergents::from_word(&self.a0, &self.quotients))
    }

    /// Quotient `a_n` with `a_0` at index 0.
    pub fn quotient(&self, n: usize) -> Option<&BigInt> {
        if n == 0 {
            Some(&self.a0)
        } else {
            self.quotients.get(n - 1)
        }
    }

    /// Closed rational bounds on the value: exact for a terminated word,
    /// otherwise the last two convergents.
    pub fn value_bounds(&self) -> (BigRational, BigRational) {
        let c = self.convergents();
        let n = c.last_index();
        let last = BigRational::new(c.p(n).unwrap().clone(), c.q(n).unwrap().clone());
        if self.terminated {
            return (last.clone(), last);
        }
        if n == 0 {
            // Only a_0 known: the value lies in [a_0, a_0 + 1].
            let next = &last + BigRational::one();
            return (last, next);
        }
        let prev = BigRational::new(c.p(n - 1).unwrap().clone(), c.q(n - 1).unwrap().clone());
        if prev <= last {
            (prev, last)
        } else {
            (last, prev)
        }
    }

    pub fn value_enclosure(&self, prec: u64) -> Interval {
        let (lo, hi) = self.value_bounds();
        Interval::hull_of_rationals(&lo, &hi, prec)
    }

    /// Letters as machine integers for the word detectors.
    pub fn letters_u64(&self) -> Result<Vec<u64>> {
        self.quotients
            .iter()
            .map(|a| u64::try_from(a).map_err(|_| Error::LetterOverflow(a.to_string())))
            .collect()
    }
}

impl Serialize for CfExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            #[serde(serialize_with = "crate::json::ser_int")]
            a0: &'a BigInt,
            #[serde(serialize_with = "crate::json::ser_ints")]
            quotients: &'a [BigInt],
            terminated: bool,
        }
        Repr { a0: &self.a0, quotients: &self.quotients, terminated: self.terminated }.serialize(s)
    }
}

fn expand_rational(r: &BigRational, depth: usize) -> (BigInt, Vec<BigInt>, bool) {
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    let (a0, rem) = n.div_mod_floor(&d);
    let mut out = Vec::new();
    n = d;
    d = rem;
    while !d.is_zero() && out.len() < depth {
        let (a, rem) = n.div_mod_floor(&d);
        out.push(a);
        n = d;
        d = rem;
    }
    (a0, out, d.is_zero())
}

/// Root of `poly` known to be the unique one in `(lo, hi)`; `hi = None` is `+inf`.
struct CompleteQuotient {
    poly: IntPolynomial,
    lo: BigRational,
    hi: Option<BigRational>,
    sign_lo: i8,
}

impl CompleteQuotient {
    fn above(&self, k: &BigInt) -> bool {
        let kr = BigRational::from_integer(k.clone());
        if kr <= self.lo {
            return true;
        }
        if let Some(hi) = &self.hi {
            if &kr >= hi {
                return false;
            }
        }
        self.poly.sign_at_int(k) == self.sign_lo
    }

    fn floor(&self, cfg: &ExpandConfig) -> Result<BigInt> {
        let mut k_lo = self.lo.floor().to_integer();
        let mut k_hi = match &self.hi {
            Some(hi) => hi.ceil().to_integer(),
            None => {
                let mut budget = cfg.bit_budget;
                let mut step = BigInt::one();
                loop {
                    let cand = &k_lo + &step;
                    if !self.above(&cand) {
                        break cand;
                    }
                    k_lo = cand;
                    step <<= 1;
                    if step.bits() > budget {
                        budget = budget.saturating_mul(2);
                        if budget > cfg.hard_cap {
                            return Err(Error::PrecisionCap { bits: cfg.hard_cap });
                        }
                    }
                }
            }
        };
        while &k_hi - &k_lo > BigInt::one() {
            let mid = (&k_lo + &k_hi) >> 1;
            if self.above(&mid) {
                k_lo = mid;
            } else {
                k_hi = mid;
            }
        }
        Ok(k_lo)
    }

    /// Replaces `x` by `1 / (x - a)`.
    fn advance(&mut self, a: &BigInt) {
        let ar = BigRational::from_integer(a.clone());
        let a1 = &ar + BigRational::one();
        let top = match &self.hi {
            Some(hi) if hi < &a1 => hi.clone(),
            _ => a1,
        };
        let bottom = if self.lo > ar { Some(self.lo.clone()) } else { None };
        self.poly = self.poly.taylor_shift(a).reversed();
        self.lo = (top - &ar).recip();
        self.hi = bottom.map(|b| (b - &ar).recip());
        self.sign_lo = self.poly.sign_at_rational(&self.lo);
        debug_assert!(self.sign_lo != 0);
    }
}

pub fn expand(x: &AlgebraicNumber, depth: usize) -> Result<CfExpansion> {
    expand_with(x, depth, &ExpandConfig::default())
}

/// First `depth` partial quotients of `x` (plus `a_0`).
pub fn expand_with(x: &AlgebraicNumber, depth: usize, cfg: &ExpandConfig) -> Result<CfExpansion> {
    if let Some(r) = x.to_rational() {
        let (a0, quotients, terminated) = expand_rational(&r, depth);
        return Ok(CfExpansion {
            a0,
            quotients,
            terminated,
            source: Some(x.clone()),
            convergents: OnceLock::new(),
        });
    }
    let iv = x.interval();
    let mut cq = CompleteQuotient {
        poly: x.poly().clone(),
        lo: iv.lo().to_rational(),
        hi: Some(iv.hi().to_rational()),
        sign_lo: x.poly().sign_at_dyadic(iv.lo()),
    };
    let a0 = cq.floor(cfg)?;
    let mut quotients = Vec::with_capacity(depth);
    let mut a = a0.clone();
    for _ in 0..depth {
        cq.advance(&a);
        a = cq.floor(cfg)?;
        quotients.push(a.clone());
    }
    Ok(CfExpansion { a0, quotients, terminated: false, source: Some(x.clone()), convergents: OnceLock::new() })
}

/// Product of letter matrices `[[b, 1], [1, 0]]`; the empty word gives the identity.
pub fn word_matrix<T: Into<BigInt> + Clone>(word: &[T]) -> Mat2 {
    let mut m = Mat2::identity();
    for b in word {
        m.push_letter(&b.clone().into());
    }
    m
}

/// Value of the finite fraction `[w_0; w_1, ..., w_k]`.
pub fn finite_value(word: &[BigInt]) -> Option<BigRational> {
    let (last, rest) = word.split_last()?;
    let mut acc = BigRational::from_integer(last.clone());
    for a in rest.iter().rev() {
        if acc.is_zero() {
            return None;
        }
        acc = BigRational::from_integer(a.clone()) + acc.recip();
    }
    Some(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub n: i64,
    pub pass: bool,
}

/// Outcome of one growth-lemma row: `q_{m+n} >= 2^{(m-1)/2} q_n` for every
/// `m` up to `max_m` that fits in the expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthCheck {
    pub n: i64,
    pub max_m: i64,
    pub pass: bool,
    pub first_failure: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub depth: i64,
    pub determinant: Vec<IdentityCheck>,
    pub mirror_ratio: Vec<IdentityCheck>,
    pub word_matrix: Vec<IdentityCheck>,
    /// Present only when the expansion carries an algebraic source.
    pub approximation: Option<Vec<IdentityCheck>>,
    pub growth: Vec<GrowthCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.determinant.iter().all(|c| c.pass)
            && self.mirror_ratio.iter().all(|c| c.pass)
            && self.word_matrix.iter().all(|c| c.pass)
            && self.approximation.iter().flatten().all(|c| c.pass)
            && self.growth.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        let count = |v: &[IdentityCheck]| v.iter().filter(|c| !c.pass).count();
        count(&self.determinant)
            + count(&self.mirror_ratio)
            + count(&self.word_matrix)
            + self.approximation.as_deref().map_or(0, count)
            + self.growth.iter().filter(|c| !c.pass).count()
    }
}

pub const DEFAULT_GROWTH_SPAN: usize = 50;

pub fn verify_cf_identities(cf: &CfExpansion, depth: usize) -> IdentityReport {
    verify_cf_identities_with(cf, depth, DEFAULT_GROWTH_SPAN)
}

pub fn verify_cf_identities_with(cf: &CfExpansion, depth: usize, max_m: usize) -> IdentityReport {
    let c = cf.convergents();
    let top = (depth as i64).min(c.last_index());
    let word = cf.full_word();

    let determinant = (0..=top)
        .map(|n| {
            let lhs = c.p(n).unwrap() * c.q(n - 1).unwrap() - c.p(n - 1).unwrap() * c.q(n).unwrap();
            let expected = if n % 2 == 0 { -1 } else { 1 };
            IdentityCheck { n, pass: lhs == BigInt::from(expected) }
        })
        .collect();

    let mirror_ratio = (1..=top)
        .map(|n| {
            // [a_n; ..., a_1] as num / den, evaluated from a_1 outwards
            let (mut num, mut den) = (word[1].clone(), BigInt::one());
            for a in &word[2..=n as usize] {
                (num, den) = (a * &num + &den, num);
            }
            IdentityCheck { n, pass: &num * c.q(n - 1).unwrap() == &den * c.q(n).unwrap() }
        })
        .collect();

    let mut prefix = Mat2::identity();
    let word_matrix = (0..=top)
        .map(|n| {
            prefix = &prefix * &Mat2::letter(word[n as usize].clone());
            IdentityCheck { n, pass: Some(&prefix) == c.matrix(n).ok().as_ref() }
        })
        .collect();

    let approximation = cf.source().map(|x| {
        (0..top.min(c.last_index() - 1) + 1)
            .map(|n| {
                let (p, q) = (c.p(n).unwrap(), c.q(n).unwrap());
                let q1 = c.q(n + 1).unwrap();
                let center = BigRational::new(p.clone(), q.clone());
                let radius = BigRational::new(BigInt::one(), q * q1);
                let pass = if x.is_rational() {
                    let v = x.to_rational().unwrap();
                    (&v - &center).abs() < radius
                } else {
                    x.cmp_rational(&(&center - &radius)).is_gt() && x.cmp_rational(&(&center + &radius)).is_lt()
                };
                IdentityCheck { n, pass }
            })
            .collect()
    });

    let growth = (0..=top)
        .map(|n| {
            let qn2 = c.q(n).unwrap() * c.q(n).unwrap();
            let span = (max_m as i64).min(c.last_index() - n);
            // 2 q_{m+n}^2 >= 2^m q_n^2
            let first_failure = (0..=span).find(|&m| {
                let qm = c.q(n + m).unwrap();
                BigInt::from(2) * qm * qm < &qn2 << (m as u64)
            });
            GrowthCheck { n, max_m: span, pass: first_failure.is_none(), first_failure }
        })
        .collect();

    IdentityReport { depth: top, determinant, mirror_ratio, word_matrix, approximation, growth }
}

/// Eventually periodic expansion: `preperiod` (starting with `a_0`) then
/// `period` repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicForm {
    #[serde(serialize_with = "crate::json::ser_ints")]
    pub preperiod: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::ser_ints")]
    pub period: Vec<BigInt>,
}

impl PeriodicForm {
    /// The first `len` terms `a_0, a_1, ...`.
    pub fn unroll(&self, len: usize) -> Vec<BigInt> {
        self.preperiod.iter().chain(self.period.iter().cycle()).take(len).cloned().collect()
    }
}

fn minimal_period(cycle: &[BigInt]) -> usize {
    let n = cycle.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| cycle[i] == cycle[i - d]))
        .unwrap_or(n)
}

pub fn detect_period(x: &AlgebraicNumber) -> Result<PeriodicForm> {
    if x.degree() != 2 {
        return Err(Error::NotQuadratic(x.degree()));
    }
    let c = x.poly().coeffs();
    let (c0, b, a) = (&c[0], &c[1], &c[2]);
    let disc = b * b - BigInt::from(4) * a * c0;
    let s = disc.sqrt();
    // x = (P + sqrt D) / Q
    let vertex = BigRational::new(-b, BigInt::from(2) * a);
    let upper = x.cmp_rational(&vertex).is_gt() == a.is_positive();
    let (mut p, mut q) = if upper {
        (-b.clone(), BigInt::from(2) * a)
    } else {
        (b.clone(), BigInt::from(-2) * a)
    };
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut word: Vec<BigInt> = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let cycle = &word[start..];
            let d = minimal_period(cycle);
            return Ok(PeriodicForm { preperiod: word[..start].to_vec(), period: cycle[..d].to_vec() });
        }
        seen.insert((p.clone(), q.clone()), word.len());
        let digit = if q.is_positive() {
            (&p + &s).div_floor(&q)
        } else {
            (-&p - &s - 1u32).div_floor(&(-&q))
        };
        let p_next = &digit * &q - &p;
        let q_next = (&disc - &p_next * &p_next) / &q;
        word.push(digit);
        p = p_next;
        q = q_next;
    }
}

/// `(q_n q'_n)^{1/n}` enclosures and their running maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub roots: Vec<(usize, Interval)>,
    pub max: Option<Interval>,
}

pub const GROWTH_FRACTION_BITS: u64 = 64;

/// Enclosure of `v^{1/n}` with `GROWTH_FRACTION_BITS` fractional bits.
pub fn nth_root_enclosure(v: &BigInt, n: u32) -> Interval {
    let scaled = v << (GROWTH_FRACTION_BITS * n as u64);
    let r = scaled.nth_root(n);
    let e = -(GROWTH_FRACTION_BITS as i64);
    if r.pow(n) == scaled {
        Interval::point(Dyadic::new(r, e))
    } else {
        Interval::new(Dyadic::new(r.clone(), e), Dyadic::new(r + 1u32, e))
    }
}

pub fn growth_metrics(cf: &CfExpansion, other: Option<&CfExpansion>) -> GrowthReport {
    let c = cf.convergents();
    let top = match other {
        Some(o) => c.last_index().min(o.convergents().last_index()),
        None => c.last_index(),
    };
    let mut roots = Vec::new();
    let mut max: Option<Interval> = None;
    for n in 1..=top {
        let mut v = c.q(n).unwrap().clone();
        if let Some(o) = other {
            v *= o.convergents().q(n).unwrap();
        }
        let iv = nth_root_enclosure(&v, n as u32);
        max = Some(match max {
            None => iv.clone(),
            Some(m) => Interval::new(m.lo().clone().max(iv.lo().clone()), m.hi().clone().max(iv.hi().clone())),
        });
        roots.push((n as usize, iv));
    }
    GrowthReport { roots, max }
}

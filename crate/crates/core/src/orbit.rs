//! Orbits of a real number under PSL(2, Z): matrix norms, best-approximant
//! scans with empirical exponents, and the separation and growth-gap checks.
//!
//! Scans use an f64 prefilter and certify with dyadic intervals only the
//! elements that can change the output (records, threshold crossings and
//! near-coincidences with the target).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::AlgebraicNumber;
use crate::cf::CfExpansion;
use crate::dyadic::{Dyadic, Interval};
use crate::error::{Error, Result};
use crate::mat2::Mat2;

/// Sign-normalized representative of a projective class: `c > 0`, or
/// `c = 0` and `d > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UnimodularMatrix(Mat2);

impl UnimodularMatrix {
    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        psl2z_normalize(&Mat2::from_i64(a, b, c, d))
    }
}

pub fn psl2z_normalize(m: &Mat2) -> Result<UnimodularMatrix> {
    if !m.is_unimodular() {
        return Err(Error::NotUnimodular(m.det().to_string()));
    }
    let flip = m.c.is_negative() || (m.c.is_zero() && m.d.is_negative());
    Ok(UnimodularMatrix(if flip { m.neg() } else { m.clone() }))
}

/// `max(|c|, |d|)`.
pub fn norm_of(m: &UnimodularMatrix) -> BigInt {
    m.0.c.abs().max(m.0.d.abs())
}

/// `|(c a + d)(c a^s + d) / (a - a^s)|` for quadratic `a` with conjugate `a^s`.
pub fn quadratic_norm(m: &UnimodularMatrix, alpha: &AlgebraicNumber, bits: u64) -> Result<Interval> {
    let conj = alpha.quadratic_conjugate()?;
    let (c, d) = (&m.0.c, &m.0.d);
    let size = c.bits().max(d.bits()) + 8;
    let mut prec = bits.max(32) + 2 * size;
    loop {
        let x = alpha.enclosure(prec);
        let y = conj.enclosure(prec);
        let lin = |v: &Interval| &v.scale_int(c) + &Interval::from_int(d.clone());
        let num = &lin(&x) * &lin(&y);
        if let Some(q) = num.div(&(&x - &y), bits + size) {
            if !q.contains_zero() || prec > 16 * bits + 4 * size {
                return Ok(q.abs());
            }
        }
        prec *= 2;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMode {
    Classic,
    Quadratic,
}

/// The approximation target: an algebraic number or an explicit word.
#[derive(Clone, Debug)]
pub enum Xi {
    Algebraic(AlgebraicNumber),
    Word(CfExpansion),
}

impl Xi {
    fn enclosure(&self, prec: u64) -> Interval {
        match self {
            Xi::Algebraic(x) => x.enclosure(prec),
            Xi::Word(w) => w.value_enclosure(prec),
        }
    }

    fn approx(&self) -> f64 {
        self.enclosure(64).to_f64()
    }
}

/// The orbit base point; `Infinity` turns the scan into rational approximation.
#[derive(Clone, Debug)]
pub enum Alpha {
    Algebraic(AlgebraicNumber),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormValue {
    Classic(BigInt),
    Quadratic(Interval),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxRecord {
    pub matrix: UnimodularMatrix,
    pub norm: NormValue,
    pub distance: Interval,
    pub exponent: Interval,
    /// Certified `exponent > 1 + eps`.
    pub exceeds_one_plus_eps: bool,
    /// Certified `exponent > 2 + eps`.
    pub exceeds_two_plus_eps: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitConfig {
    pub height: u64,
    pub mode: NormMode,
    pub epsilon: BigRational,
    /// Translates `|t| <= window` of each completion are scanned; `None`
    /// means `height`.
    pub translate_window: Option<u64>,
    /// Classic-norm box bounding the quadratic-mode enumeration; `None`
    /// means `height`.
    pub box_height: Option<u64>,
    pub prec_cap: u64,
}

impl OrbitConfig {
    pub fn new(height: u64) -> Self {
        OrbitConfig {
            height,
            mode: NormMode::Classic,
            epsilon: BigRational::new(BigInt::one(), BigInt::from(10)),
            translate_window: None,
            box_height: None,
            prec_cap: 4096,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrbitScan {
    pub records: Vec<ApproxRecord>,
    /// Enumerated elements found equal to the target.
    pub xi_in_orbit: Vec<UnimodularMatrix>,
    /// Elements whose distance stayed unresolved at the precision cap.
    pub undecided: Vec<UnimodularMatrix>,
    /// Projective classes visited, counting every translate.
    pub classes: u64,
    /// Best translate per bottom row and sign with exponent above `1 + eps`.
    pub exceed_one_plus_eps: u64,
    /// Same, above `2 + eps`.
    pub exceed_two_plus_eps: u64,
}

impl OrbitScan {
    pub fn max_exponent(&self) -> Option<&Interval> {
        self.records.last().map(|r| &r.exponent)
    }
}

/// Distances below this are handed straight to the certified path.
const F64_FLOOR: f64 = 1e-9;
/// f64 exponents within this of a threshold are re-decided exactly.
const F64_SLACK: f64 = 1e-5;

#[derive(Clone, Copy, Debug)]
struct Candidate {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    norm: f64,
    dist: f64,
}

impl Candidate {
    fn exponent(&self) -> f64 {
        if self.norm <= 1.0 {
            f64::NEG_INFINITY
        } else {
            -self.dist.ln() / self.norm.ln()
        }
    }

    fn needs_certificate(&self) -> bool {
        !(self.dist >= F64_FLOOR)
    }

    fn matrix(&self) -> Mat2 {
        Mat2::from_i64(self.a, self.b, self.c, self.d)
    }
}

enum Certified {
    Distance(Interval),
    InOrbit,
    Undecided,
}

struct Scanner<'a> {
    xi: &'a Xi,
    alpha: &'a Alpha,
    cfg: &'a OrbitConfig,
    eps: f64,
    conj: Option<AlgebraicNumber>,
}

impl<'a> Scanner<'a> {
    /// Certified `|xi - M alpha|`.
    fn certify(&self, m: &Mat2) -> Certified {
        let size = m.max_abs_entry().bits() + 8;
        let mut prec = 128u64;
        loop {
            let x = self.xi.enclosure(prec + size);
            let diff = match self.alpha {
                Alpha::Infinity => {
                    let beta = BigRational::new(m.a.clone(), m.c.clone());
                    &x - &Interval::from_rational(&beta, prec + 2 * size)
                }
                Alpha::Algebraic(al) => {
                    let y = al.enclosure(prec + 2 * size);
                    let den = &y.scale_int(&m.c) + &Interval::from_int(m.d.clone());
                    let num = &(&x * &den) - &(&y.scale_int(&m.a) + &Interval::from_int(m.b.clone()));
                    match num.div(&den, prec + size) {
                        Some(v) => v,
                        None if prec >= self.cfg.prec_cap => return Certified::Undecided,
                        None => {
                            prec *= 2;
                            continue;
                        }
                    }
                }
            };
            let dist = diff.abs();
            if !dist.contains_zero() {
                let tight = &dist.width().shl(32) <= dist.lo();
                if tight || prec >= self.cfg.prec_cap {
                    return Certified::Distance(dist);
                }
            }
            if prec >= self.cfg.prec_cap {
                return if self.equals_exactly(m) { Certified::InOrbit } else { Certified::Undecided };
            }
            prec *= 2;
        }
    }

    fn equals_exactly(&self, m: &Mat2) -> bool {
        let word_value;
        let x = match self.xi {
            Xi::Algebraic(x) => x,
            Xi::Word(w) if w.terminated() => {
                word_value = AlgebraicNumber::from_rational(&w.value_bounds().0);
                &word_value
            }
            Xi::Word(_) => return false,
        };
        match self.alpha {
            Alpha::Infinity => x.to_rational() == Some(BigRational::new(m.a.clone(), m.c.clone())),
            Alpha::Algebraic(al) => al.moebius_apply(m).map(|b| b.equals(x)).unwrap_or(false),
        }
    }

    fn norm_value(&self, m: &Mat2) -> Result<(NormValue, Interval)> {
        let um = psl2z_normalize(m)?;
        match self.cfg.mode {
            NormMode::Classic => {
                let n = norm_of(&um);
                Ok((NormValue::Classic(n.clone()), Interval::from_int(n)))
            }
            NormMode::Quadratic => {
                let Alpha::Algebraic(al) = self.alpha else {
                    return Err(Error::InvalidArgument("quadratic norm needs an algebraic base point".into()));
                };
                let q = quadratic_norm(&um, al, 96)?;
                Ok((NormValue::Quadratic(q.clone()), q))
            }
        }
    }

    /// Exponent enclosure `-log(dist) / log(norm)`; `None` when the norm
    /// does not certifiably exceed 1.
    fn exponent(dist: &Interval, norm: &Interval) -> Option<Interval> {
        if norm.lo() <= &Dyadic::from_int(1) {
            return None;
        }
        let ln_norm = norm.ln(64).ok()?;
        let ln_dist = dist.ln(64).ok()?;
        (-&ln_dist).div(&ln_norm, 64)
    }

    fn record_for(&self, cand: &Candidate) -> Result<RecordOutcome> {
        let m = cand.matrix();
        match self.certify(&m) {
            Certified::InOrbit => Ok(RecordOutcome::InOrbit(psl2z_normalize(&m)?)),
            Certified::Undecided => Ok(RecordOutcome::Undecided(psl2z_normalize(&m)?)),
            Certified::Distance(distance) => {
                let (norm, norm_iv) = self.norm_value(&m)?;
                let Some(exponent) = Scanner::exponent(&distance, &norm_iv) else {
                    return Ok(RecordOutcome::NoExponent);
                };
                let one = Dyadic::floor_of_rational(&(BigRational::one() + &self.cfg.epsilon), 64);
                let two = Dyadic::floor_of_rational(&(BigRational::from_integer(2.into()) + &self.cfg.epsilon), 64);
                let record = ApproxRecord {
                    matrix: psl2z_normalize(&m)?,
                    norm,
                    distance,
                    exceeds_one_plus_eps: exponent.lo() > &one,
                    exceeds_two_plus_eps: exponent.lo() > &two,
                    exponent,
                };
                Ok(RecordOutcome::Record(record))
            }
        }
    }
}

enum RecordOutcome {
    Record(ApproxRecord),
    InOrbit(UnimodularMatrix),
    Undecided(UnimodularMatrix),
    NoExponent,
}

#[derive(Default)]
struct Shell {
    best: Option<Candidate>,
    /// Near-coincidences needing the certified path.
    close: Vec<Candidate>,
    /// Threshold decisions left to the certified path.
    borderline: Vec<Candidate>,
    /// Quadratic mode keeps every candidate inside the norm ball.
    all: Vec<Candidate>,
    exceed_one: u64,
    exceed_two: u64,
    classes: u64,
}

fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

/// `(a, b)` with `a d - b c = s` and `0 <= a < c` (or `a = s`, `b = 0` for `c = 0`).
fn complete(c: i64, d: i64, s: i64) -> (i64, i64) {
    if c == 0 {
        return (s * d, 0);
    }
    let g = d.extended_gcd(&c);
    debug_assert_eq!(g.gcd.abs(), 1);
    // x d + y c = g
    let (mut a, mut b) = (g.x * g.gcd * s, -g.y * g.gcd * s);
    let t = Integer::div_floor(&a, &c);
    a -= t * c;
    b -= t * d;
    (a, b)
}

impl<'a> Scanner<'a> {
    fn shell(&self, n: i64, alpha: f64, conj: f64, xi: f64) -> Shell {
        let mut sh = Shell::default();
        let window = self.cfg.translate_window.unwrap_or(self.cfg.height) as f64;
        let height = self.cfg.height as f64;
        let thresholds = [1.0 + self.eps, 2.0 + self.eps];
        let visit = |c: i64, d: i64, sh: &mut Shell| {
            if c.gcd(&d) != 1 {
                return;
            }
            let qnorm = if self.cfg.mode == NormMode::Quadratic {
                let v = ((c as f64 * alpha + d as f64) * (c as f64 * conj + d as f64) / (alpha - conj)).abs();
                if v > height {
                    return;
                }
                Some(v)
            } else {
                None
            };
            for s in [1i64, -1] {
                let (a, b) = complete(c, d, s);
                sh.classes += 2 * window as u64 + 1;
                let beta0 = (a as f64 * alpha + b as f64) / (c as f64 * alpha + d as f64);
                let t = round_half_up(xi - beta0).clamp(-window, window);
                let (a, b) = (a + t as i64 * c, b + t as i64 * d);
                let dist = (xi - beta0 - t).abs();
                let cand = Candidate { a, b, c, d, norm: qnorm.unwrap_or(n as f64), dist };
                if cand.needs_certificate() {
                    sh.close.push(cand);
                    continue;
                }
                let e = cand.exponent();
                for (i, thr) in thresholds.iter().enumerate() {
                    if (e - thr).abs() < F64_SLACK {
                        sh.borderline.push(cand);
                    } else if e > *thr {
                        if i == 0 {
                            sh.exceed_one += 1;
                        } else {
                            sh.exceed_two += 1;
                        }
                    }
                }
                if qnorm.is_some() {
                    sh.all.push(cand);
                } else if sh.best.is_none_or(|b| e > b.exponent()) {
                    sh.best = Some(cand);
                }
            }
        };
        if n == 1 {
            visit(0, 1, &mut sh);
        }
        for d in -n..=n {
            visit(n, d, &mut sh);
        }
        for c in 1..n {
            visit(c, n, &mut sh);
            visit(c, -n, &mut sh);
        }
        sh
    }

    /// Rationals `a / c` with `a` nearest to `xi c`.
    fn shell_at_infinity(&self, c: i64, xi: f64) -> Shell {
        let mut sh = Shell { classes: 1, ..Shell::default() };
        let a = round_half_up(xi * c as f64) as i64;
        if a.gcd(&c) != 1 {
            return sh;
        }
        // d = a^{-1} mod c, centred, so that max(c, |d|) = c
        let g = a.extended_gcd(&c);
        let mut d = g.x.rem_euclid(c.max(1));
        if 2 * d > c {
            d -= c;
        }
        let b = (a * d - 1) / c;
        let dist = (xi - a as f64 / c as f64).abs();
        let cand = Candidate { a, b, c, d, norm: c as f64, dist };
        if cand.needs_certificate() {
            sh.close.push(cand);
            return sh;
        }
        let e = cand.exponent();
        for (i, thr) in [1.0 + self.eps, 2.0 + self.eps].iter().enumerate() {
            if (e - thr).abs() < F64_SLACK {
                sh.borderline.push(cand);
            } else if e > *thr {
                if i == 0 {
                    sh.exceed_one += 1;
                } else {
                    sh.exceed_two += 1;
                }
            }
        }
        sh.best = Some(cand);
        sh
    }
}

pub fn orbit_best_approximations(xi: &Xi, alpha: &Alpha, cfg: &OrbitConfig) -> Result<OrbitScan> {
    if cfg.height == 0 {
        return Err(Error::InvalidArgument("height must be positive".into()));
    }
    if cfg.mode == NormMode::Quadratic {
        match alpha {
            Alpha::Algebraic(al) if al.degree() == 2 => {}
            Alpha::Algebraic(al) => return Err(Error::NotQuadratic(al.degree())),
            Alpha::Infinity => return Err(Error::InvalidArgument("quadratic norm needs an algebraic base point".into())),
        }
    }
    let conj = match (cfg.mode, alpha) {
        (NormMode::Quadratic, Alpha::Algebraic(al)) => Some(al.quadratic_conjugate()?),
        _ => None,
    };
    let scanner = Scanner { xi, alpha, cfg, eps: cfg.epsilon.to_f64().unwrap_or(0.0), conj };
    let xi_f = xi.approx();
    let alpha_f = match alpha {
        Alpha::Algebraic(al) => al.enclosure(64).to_f64(),
        Alpha::Infinity => f64::INFINITY,
    };
    let conj_f = scanner.conj.as_ref().map_or(0.0, |c| c.enclosure(64).to_f64());
    let top = match cfg.mode {
        NormMode::Classic => cfg.height,
        NormMode::Quadratic => cfg.box_height.unwrap_or(cfg.height),
    } as i64;

    let shells: Vec<Shell> = (1..=top)
        .into_par_iter()
        .map(|n| match alpha {
            Alpha::Infinity => scanner.shell_at_infinity(n, xi_f),
            Alpha::Algebraic(_) => scanner.shell(n, alpha_f, conj_f, xi_f),
        })
        .collect();

    let mut scan = OrbitScan::default();
    let mut ordered: Vec<Candidate> = Vec::new();
    let mut certify_first: Vec<Candidate> = Vec::new();
    let mut borderline: Vec<Candidate> = Vec::new();
    for sh in shells {
        scan.classes += sh.classes;
        scan.exceed_one_plus_eps += sh.exceed_one;
        scan.exceed_two_plus_eps += sh.exceed_two;
        certify_first.extend(sh.close);
        borderline.extend(sh.borderline);
        ordered.extend(sh.best);
        ordered.extend(sh.all);
    }

    // Near-coincidences: exact outcome decides their fate before the sweep.
    let mut certified_close: Vec<(f64, ApproxRecord)> = Vec::new();
    for cand in &certify_first {
        match scanner.record_for(cand)? {
            RecordOutcome::InOrbit(m) => scan.xi_in_orbit.push(m),
            RecordOutcome::Undecided(m) => scan.undecided.push(m),
            RecordOutcome::NoExponent => {}
            RecordOutcome::Record(r) => {
                scan.exceed_one_plus_eps += u64::from(r.exceeds_one_plus_eps);
                scan.exceed_two_plus_eps += u64::from(r.exceeds_two_plus_eps);
                certified_close.push((cand.norm, r));
            }
        }
    }
    for cand in &borderline {
        if let RecordOutcome::Record(r) = scanner.record_for(cand)? {
            scan.exceed_one_plus_eps += u64::from(r.exceeds_one_plus_eps && (cand.exponent() - 1.0 - scanner.eps).abs() < F64_SLACK);
            scan.exceed_two_plus_eps += u64::from(r.exceeds_two_plus_eps && (cand.exponent() - 2.0 - scanner.eps).abs() < F64_SLACK);
        }
    }

    // Sweep by norm; f64 screens, intervals decide.
    enum Item {
        Raw(Candidate),
        Done(ApproxRecord),
    }
    let mut items: Vec<(f64, Item)> = ordered.into_iter().map(|c| (c.norm, Item::Raw(c))).collect();
    items.extend(certified_close.into_iter().map(|(n, r)| (n, Item::Done(r))));
    items.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best_f = f64::NEG_INFINITY;
    for (_, item) in items {
        let rec = match item {
            Item::Raw(cand) => {
                if cand.exponent() <= best_f - F64_SLACK {
                    continue;
                }
                match scanner.record_for(&cand)? {
                    RecordOutcome::Record(r) => r,
                    RecordOutcome::Undecided(m) => {
                        scan.undecided.push(m);
                        continue;
                    }
                    RecordOutcome::InOrbit(m) => {
                        scan.xi_in_orbit.push(m);
                        continue;
                    }
                    RecordOutcome::NoExponent => continue,
                }
            }
            Item::Done(r) => r,
        };
        let e = rec.exponent.to_f64();
        if e > best_f {
            best_f = e;
            scan.records.push(rec);
        }
    }
    Ok(scan)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    /// First index (`a_0` is index 0) where the expansions differ.
    pub n: usize,
    /// `1 / (72 q_n^2 b_{n+1} b_{n+2})` with `q_n`, `b` from the second expansion.
    pub bound: BigRational,
    pub distance: Interval,
    /// Certified `distance >= bound`.
    pub holds: bool,
}

fn value_range(cf: &CfExpansion) -> (BigRational, BigRational) {
    if let Some(src) = cf.source() {
        if let Some(r) = src.to_rational() {
            return (r.clone(), r);
        }
        let iv = src.enclosure(64 + 4 * cf.convergents().q(cf.convergents().last_index()).unwrap().bits());
        return (iv.lo().to_rational(), iv.hi().to_rational());
    }
    cf.value_bounds()
}

pub fn separation_bound(alpha: &CfExpansion, beta: &CfExpansion) -> Result<SeparationReport> {
    let common = alpha.len().min(beta.len()) + 1;
    let n = (0..common)
        .find(|&i| alpha.quotient(i) != beta.quotient(i))
        .ok_or(Error::NoDivergence(common))?;
    let c = beta.convergents();
    let qn = c.q(n as i64)?;
    let need = |i: usize| {
        beta.quotient(i).ok_or(Error::InsufficientDepth { needed: i as i64, available: beta.len() as i64 })
    };
    let (b1, b2) = (need(n + 1)?, need(n + 2)?);
    let bound = BigRational::new(BigInt::one(), BigInt::from(72) * qn * qn * b1 * b2);
    let (alo, ahi) = value_range(alpha);
    let (blo, bhi) = value_range(beta);
    let gap = if ahi < blo {
        &blo - &ahi
    } else if bhi < alo {
        &alo - &bhi
    } else {
        BigRational::zero()
    };
    let span = (&ahi).max(&bhi) - (&alo).min(&blo);
    let prec = 64 + 2 * (qn.bits() + b1.bits() + b2.bits());
    let distance = Interval::new(Dyadic::floor_of_rational(&gap, prec), Dyadic::ceil_of_rational(&span, prec));
    let holds = gap >= bound;
    Ok(SeparationReport { n, bound, distance, holds })
}

/// Indices `n >= 1` with `q_{n+k} > q_n^{1+eps}`, compared in integers.
pub fn growth_gap_scan(cf: &CfExpansion, k: usize, eps: &BigRational) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::InvalidArgument("gap k must be at least 1".into()));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let exp = |n: &BigInt| u32::try_from(n).map_err(|_| Error::InvalidArgument(format!("exponent {n} too large")));
    let (u, v) = (exp(eps.numer())?, exp(eps.denom())?);
    let c = cf.convergents();
    let last = c.last_index();
    let mut out = Vec::new();
    for n in 1..=(last - k as i64) {
        if c.q(n + k as i64)?.pow(v) > c.q(n)?.pow(u + v) {
            out.push(n as usize);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct NormEquivalence {
    pub alpha_prime: AlgebraicNumber,
    /// Smallest observed `||b||_alpha / ||b||_alpha'`.
    pub c1: BigRational,
    /// Largest observed ratio.
    pub c2: BigRational,
    pub pairs: u64,
}

/// Empirical range of the classic-norm ratio between the matrices carrying
/// `alpha` and `alpha' = A0 alpha` to the same orbit element.
pub fn norm_equivalence_estimate(alpha: &AlgebraicNumber, a0: &Mat2, height: u64) -> Result<NormEquivalence> {
    let alpha_prime = alpha.moebius_apply(a0)?;
    let h = height as i64;
    let (a, b, c0, d0) = (&a0.a, &a0.b, &a0.c, &a0.d);
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    let mut pairs = 0u64;
    for c in 0..=h {
        for d in -h..=h {
            if c.gcd(&d) != 1 || (c == 0 && d != 1) {
                continue;
            }
            let (cb, db) = (BigInt::from(c), BigInt::from(d));
            // bottom row of (c, d) . adj(A0)
            let nc = &cb * d0 - &db * c0;
            let nd = &db * a - &cb * b;
            let den = nc.abs().max(nd.abs());
            let r = BigRational::new(cb.abs().max(db.abs()), den);
            pairs += 1;
            if lo.as_ref().is_none_or(|l| &r < l) {
                lo = Some(r.clone());
            }
            if hi.as_ref().is_none_or(|x| &r > x) {
                hi = Some(r);
            }
        }
    }
    Ok(NormEquivalence { alpha_prime, c1: lo.unwrap(), c2: hi.unwrap(), pairs })
}

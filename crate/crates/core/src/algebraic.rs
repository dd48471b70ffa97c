//! Real algebraic numbers: a squarefree integer polynomial plus an
//! isolating interval with dyadic endpoints.
//!
//! Irrational roots always sit strictly inside their interval and the
//! polynomial changes sign across it. Rational numbers are kept with a
//! linear polynomial; dyadic rationals get a degenerate interval.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{Dyadic, Interval};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::poly::IntPolynomial;

pub type DyadicInterval = Interval;

#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    poly: IntPolynomial,
    interval: Interval,
    sign_lo: i8,
}

fn is_power_of_two(n: &BigInt) -> bool {
    n.is_positive() && n.trailing_zeros() == Some(n.bits() - 1)
}

/// The fraction with least denominator in the closed interval `[lo, hi]`.
pub fn simplest_rational_in(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(lo <= hi);
    // Continued-fraction descent: collect the shared integer parts.
    let mut heads: Vec<BigInt> = Vec::new();
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let tail = loop {
        let fl = lo.floor();
        if fl == lo {
            break lo;
        }
        let c = lo.ceil();
        if c <= hi {
            break c;
        }
        let fl_i = fl.to_integer();
        let new_lo = (&hi - &fl).recip();
        let new_hi = (&lo - &fl).recip();
        heads.push(fl_i);
        lo = new_lo;
        hi = new_hi;
    };
    heads
        .into_iter()
        .rev()
        .fold(tail, |acc, h| BigRational::from_integer(h) + acc.recip())
}

/// All real roots of `p`, ascending, each with a disjoint isolating interval.
pub fn isolate_real_roots(p: &IntPolynomial) -> Result<Vec<AlgebraicNumber>> {
    if p.is_zero() {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let sf = p.squarefree_part();
    let bound = Dyadic::from_int(sf.root_bound() + 1u32);
    let mut pending = vec![(-&bound, bound)];
    let mut open: Vec<Interval> = Vec::new();
    let mut rational: Vec<BigRational> = Vec::new();
    while let Some((lo, hi)) = pending.pop() {
        match sf.descartes_bound(&lo.to_rational(), &hi.to_rational()) {
            0 => {}
            1 if sf.sign_at_dyadic(&lo) != 0 && sf.sign_at_dyadic(&hi) != 0 => {
                open.push(Interval::new(lo, hi))
            }
            _ => {
                let mid = Dyadic::midpoint(&lo, &hi);
                if sf.sign_at_dyadic(&mid) == 0 {
                    rational.push(mid.to_rational());
                }
                pending.push((lo, mid.clone()));
                pending.push((mid, hi));
            }
        }
    }

    // Rational roots have denominators dividing the leading coefficient, so
    // once an interval is narrower than 1/lc^2 the simplest fraction in it is
    // the only candidate.
    let lc = sf.leading();
    let lc2 = &lc * &lc;
    let mut irrational: Vec<Interval> = Vec::new();
    for iv in open {
        let mut x = AlgebraicNumber::from_parts(sf.clone(), iv);
        while &x.interval.width().to_rational() * BigRational::from_integer(&lc2 * 2) >= BigRational::one() {
            x.bisect();
        }
        if x.interval.lo() == x.interval.hi() {
            rational.push(x.interval.lo().to_rational());
            continue;
        }
        let s = simplest_rational_in(&x.interval.lo().to_rational(), &x.interval.hi().to_rational());
        if s.denom() <= &lc.abs() && sf.sign_at_rational(&s) == 0 {
            rational.push(s);
        } else {
            irrational.push(x.interval);
        }
    }

    let mut reduced = sf.clone();
    for r in &rational {
        let (q, rem) = reduced
            .div_rem_exact(&IntPolynomial::linear_with_root(r))
            .expect("rational root factor divides");
        debug_assert!(rem.is_zero());
        reduced = q;
    }
    let reduced = reduced.canonical();

    let mut roots: Vec<AlgebraicNumber> = rational.iter().map(AlgebraicNumber::from_rational).collect();
    roots.extend(irrational.into_iter().map(|iv| AlgebraicNumber::from_parts(reduced.clone(), iv)));
    roots.sort_by(|a, b| a.interval.lo().cmp(b.interval.lo()));
    Ok(roots)
}

impl AlgebraicNumber {
    fn from_parts(poly: IntPolynomial, interval: Interval) -> Self {
        let sign_lo = poly.sign_at_dyadic(interval.lo());
        AlgebraicNumber { poly, interval, sign_lo }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let poly = IntPolynomial::linear_with_root(r);
        let interval = if is_power_of_two(r.denom()) {
            let exp = -((r.denom().bits() - 1) as i64);
            Interval::point(Dyadic::new(r.numer().clone(), exp))
        } else {
            Interval::from_rational(r, r.denom().bits() + 2)
        };
        AlgebraicNumber::from_parts(poly, interval)
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        AlgebraicNumber::from_rational(&BigRational::from_integer(v.into()))
    }

    /// The `index`-th real root (ascending) of `p`.
    pub fn from_poly_root(p: &IntPolynomial, index: usize) -> Result<Self> {
        let roots = isolate_real_roots(p)?;
        let n = roots.len();
        roots
            .into_iter()
            .nth(index)
            .ok_or_else(|| Error::InvalidArgument(format!("root index {index} out of range ({n} real roots)")))
    }

    pub fn largest_real_root(p: &IntPolynomial) -> Result<Self> {
        isolate_real_roots(p)?
            .pop()
            .ok_or_else(|| Error::InvalidArgument(format!("polynomial {p} has no real roots")))
    }

    /// Positive real root of `x^k - n`.
    pub fn root_of_int(n: i64, k: usize) -> Result<Self> {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = BigInt::from(-n);
        c[k] = BigInt::one();
        AlgebraicNumber::largest_real_root(&IntPolynomial::new(c))
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn is_rational(&self) -> bool {
        self.poly.degree() == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            let c = self.poly.coeffs();
            Some(BigRational::new(-c[0].clone(), c[1].clone()))
        } else {
            None
        }
    }

    fn bisect(&mut self) {
        if self.interval.lo() == self.interval.hi() {
            return;
        }
        let mid = self.interval.mid();
        let s = self.poly.sign_at_dyadic(&mid);
        if s == 0 {
            self.interval = Interval::point(mid);
            self.sign_lo = 0;
        } else if s == self.sign_lo {
            self.interval = Interval::new(mid, self.interval.hi().clone());
        } else {
            self.interval = Interval::new(self.interval.lo().clone(), mid);
        }
    }

    /// Shrinks the stored interval to width at most `2^-bits` and returns it.
    pub fn refine_to(&mut self, bits: u64) -> &Interval {
        let target = Dyadic::new(BigInt::one(), -(bits as i64));
        while self.interval.width() > target {
            self.bisect();
        }
        &self.interval
    }

    /// A refined copy of the interval, leaving `self` untouched.
    pub fn enclosure(&self, bits: u64) -> Interval {
        let mut x = self.clone();
        x.refine_to(bits);
        x.interval
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        if let Some(v) = self.to_rational() {
            return v.cmp(r);
        }
        let lo = self.interval.lo().to_rational();
        let hi = self.interval.hi().to_rational();
        if r <= &lo {
            return Ordering::Greater;
        }
        if r >= &hi {
            return Ordering::Less;
        }
        let s = self.poly.sign_at_rational(r);
        if s == 0 {
            Ordering::Equal
        } else if s == self.sign_lo {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn cmp_int(&self, k: &BigInt) -> Ordering {
        self.cmp_rational(&BigRational::from_integer(k.clone()))
    }

    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.to_rational() {
            return r.floor().to_integer();
        }
        // lo < x < hi, so k_lo <= floor(x) < k_hi
        let mut k_lo = self.interval.lo().floor();
        let mut k_hi = self.interval.hi().ceil();
        while &k_hi - &k_lo > BigInt::one() {
            let mid = (&k_lo + &k_hi).div_floor(&BigInt::from(2));
            if self.cmp_int(&mid) == Ordering::Less {
                k_hi = mid;
            } else {
                k_lo = mid;
            }
        }
        k_lo
    }

    /// Exact equality of two real algebraic numbers.
    pub fn equals(&self, other: &AlgebraicNumber) -> bool {
        match (self.to_rational(), other.to_rational()) {
            (Some(a), Some(b)) => return a == b,
            (Some(_), None) | (None, Some(_)) => return false,
            (None, None) => {}
        }
        let g = self.poly.gcd(&other.poly);
        if g.degree() == 0 {
            return false;
        }
        let is_root_of_g = |x: &AlgebraicNumber| {
            g.sign_at_dyadic(x.interval.lo()) * g.sign_at_dyadic(x.interval.hi()) < 0
        };
        if !is_root_of_g(self) || !is_root_of_g(other) {
            return false;
        }
        let (mut x, mut y) = (self.clone(), other.clone());
        loop {
            if !x.interval.overlaps(&y.interval) {
                return false;
            }
            let hull = x.interval.hull(&y.interval);
            if g.descartes_bound(&hull.lo().to_rational(), &hull.hi().to_rational()) == 1 {
                return true;
            }
            x.bisect();
            y.bisect();
        }
    }

    /// `(a x + b) / (c x + d)` for a unimodular matrix.
    pub fn moebius_apply(&self, m: &Mat2) -> Result<AlgebraicNumber> {
        if !m.is_unimodular() {
            return Err(Error::NotUnimodular(m.det().to_string()));
        }
        let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
        if let Some(r) = self.to_rational() {
            let den = BigRational::from_integer(c.clone()) * &r + BigRational::from_integer(d.clone());
            if den.is_zero() {
                return Err(Error::Pole);
            }
            let num = BigRational::from_integer(a.clone()) * &r + BigRational::from_integer(b.clone());
            return Ok(AlgebraicNumber::from_rational(&(num / den)));
        }
        // x = (d y - b) / (-c y + a)
        let num = IntPolynomial::new(vec![-b.clone(), d.clone()]);
        let den = IntPolynomial::new(vec![a.clone(), -c.clone()]);
        let q = self.poly.homogeneous_substitute(&num, &den).canonical();
        let apply = |t: &BigRational| {
            let ca = BigRational::from_integer(c.clone());
            let n = BigRational::from_integer(a.clone()) * t + BigRational::from_integer(b.clone());
            n / (ca * t + BigRational::from_integer(d.clone()))
        };
        let extra = c.bits().max(d.bits()).max(a.bits()).max(b.bits());
        let mut x = self.clone();
        let mut bits = 16u64;
        loop {
            x.refine_to(bits);
            let lo = x.interval.lo().to_rational();
            let hi = x.interval.hi().to_rational();
            let den_lo = BigRational::from_integer(c.clone()) * &lo + BigRational::from_integer(d.clone());
            let den_hi = BigRational::from_integer(c.clone()) * &hi + BigRational::from_integer(d.clone());
            if den_lo.signum() * den_hi.signum() > BigRational::zero() {
                let (r1, r2) = {
                    let (u, v) = (apply(&lo), apply(&hi));
                    if u <= v { (u, v) } else { (v, u) }
                };
                let prec = 2 * bits + 2 * extra + 8;
                let nlo = Dyadic::floor_of_rational(&r1, prec);
                let nhi = Dyadic::ceil_of_rational(&r2, prec);
                let s_lo = q.sign_at_dyadic(&nlo);
                let s_hi = q.sign_at_dyadic(&nhi);
                if s_lo * s_hi < 0 && q.descartes_bound(&nlo.to_rational(), &nhi.to_rational()) == 1 {
                    return Ok(AlgebraicNumber::from_parts(q, Interval::new(nlo, nhi)));
                }
            }
            bits *= 2;
        }
    }

    /// The other root of a quadratic minimal polynomial.
    pub fn quadratic_conjugate(&self) -> Result<AlgebraicNumber> {
        if self.degree() != 2 {
            return Err(Error::NotQuadratic(self.degree()));
        }
        let mut roots = isolate_real_roots(&self.poly)?;
        if roots.len() != 2 {
            return Err(Error::NotQuadratic(self.degree()));
        }
        let sep = roots[0].interval.hi().to_rational();
        let second = roots.pop().unwrap();
        let first = roots.pop().unwrap();
        if self.cmp_rational(&sep) == Ordering::Less {
            Ok(second)
        } else {
            Ok(first)
        }
    }
}

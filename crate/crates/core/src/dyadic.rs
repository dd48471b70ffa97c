//! Exact dyadic rationals and closed intervals with dyadic endpoints.
//!
//! Ring operations on [`Dyadic`] are exact. Division and logarithms round
//! outward, so every [`Interval`] produced here encloses the true value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The number `mant * 2^exp`, kept with an odd mantissa (or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn half(&self) -> Dyadic {
        self.shl(-1)
    }

    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).half()
    }

    /// Numerator and denominator (a power of two) of the value.
    pub fn to_fraction(&self) -> (BigInt, BigInt) {
        if self.exp >= 0 {
            (&self.mant << self.exp as u64, BigInt::one())
        } else {
            (self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let (n, d) = self.to_fraction();
        BigRational::new(n, d)
    }

    pub fn floor(&self) -> BigInt {
        let (n, d) = self.to_fraction();
        n.div_floor(&d)
    }

    pub fn ceil(&self) -> BigInt {
        let (n, d) = self.to_fraction();
        -((-n).div_floor(&d))
    }

    /// Largest multiple of `2^-prec` not above `r`.
    pub fn floor_of_rational(r: &BigRational, prec: u64) -> Dyadic {
        let scaled = (r.numer() << prec).div_floor(r.denom());
        Dyadic::new(scaled, -(prec as i64))
    }

    /// Smallest multiple of `2^-prec` not below `r`.
    pub fn ceil_of_rational(r: &BigRational, prec: u64) -> Dyadic {
        let scaled = -((-(r.numer() << prec)).div_floor(r.denom()));
        Dyadic::new(scaled, -(prec as i64))
    }

    /// `floor(a / b * 2^prec) * 2^-prec`, or the ceiling when `up`.
    pub fn div_rounded(a: &Dyadic, b: &Dyadic, prec: u64, up: bool) -> Dyadic {
        assert!(!b.is_zero(), "division by zero dyadic");
        let shift = a.exp - b.exp + prec as i64;
        let (num, den) = if shift >= 0 {
            (&a.mant << shift as u64, b.mant.clone())
        } else {
            (a.mant.clone(), &b.mant << (-shift) as u64)
        };
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let q = if up { -((-num).div_floor(&den)) } else { num.div_floor(&den) };
        Dyadic::new(q, -(prec as i64))
    }

    /// Approximate value; only for diagnostics and prefilters.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (&self.mant >> s, self.exp + s as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        mf * 2f64.powi(e.clamp(-1100, 1100) as i32)
    }

    /// Base-2 logarithm estimate of `|self|` (exact up to < 1).
    pub fn log2_estimate(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let top = if bits > 60 { (&self.mant.abs() >> (bits - 60)).to_f64().unwrap() } else { self.mant.abs().to_f64().unwrap() };
        let shift = bits.saturating_sub(60);
        top.log2() + shift as f64 + self.exp as f64
    }

    /// Scientific decimal rendering with `digits` significant digits,
    /// rounded toward +inf when `up`, toward -inf otherwise.
    pub fn to_decimal(&self, digits: u32, up: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let r = self.to_rational();
        let mut k = (self.log2_estimate() * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            let shift = digits as i64 - 1 - k;
            let ten = BigInt::from(10u32);
            let scaled = if shift >= 0 {
                &r * BigRational::from_integer(ten.pow(shift as u32))
            } else {
                &r / BigRational::from_integer(ten.pow((-shift) as u32))
            };
            let n = if up { scaled.ceil().to_integer() } else { scaled.floor().to_integer() };
            let s = n.abs().to_string();
            if s.len() > digits as usize {
                k += 1;
                continue;
            }
            if s.len() < digits as usize {
                k -= 1;
                continue;
            }
            let sign = if n.is_negative() { "-" } else { "" };
            let (head, tail) = s.split_at(1);
            return if tail.is_empty() {
                format!("{sign}{head}e{k}")
            } else {
                format!("{sign}{head}.{tail}e{k}")
            };
        }
    }

    /// Natural logarithm enclosure of a positive dyadic, width about `2^-prec`.
    pub fn ln(&self, prec: u64) -> Result<Interval> {
        if self.signum() <= 0 {
            return Err(Error::InvalidArgument("logarithm of a nonpositive number".into()));
        }
        let bits = self.mant.bits();
        // self = y * 2^e with y = mant / 2^(bits-1) in [1, 2)
        let e = self.exp + bits as i64 - 1;
        let half_scale = pow2(bits - 1);
        let znum = &self.mant - &half_scale;
        let zden = &self.mant + &half_scale;
        let guard = 24 + 2 * (64 - (prec / 3 + 2).leading_zeros() as u64) + (64 - (e.unsigned_abs() + 1).leading_zeros() as u64);
        let p = prec + guard;
        let (ly, ly_err) = atanh_fixed(&znum, &zden, p);
        let (l2, l2_err) = atanh_fixed(&BigInt::one(), &BigInt::from(3), p);
        // ln x = 2 atanh(z) + e * 2 atanh(1/3)
        let value = (ly << 1u32) + (BigInt::from(e) * (l2 << 1u32));
        let err = (ly_err << 1u32) + (BigInt::from(e.unsigned_abs()) * (l2_err << 1u32));
        let lo = Dyadic::new(&value - &err, -(p as i64));
        let hi = Dyadic::new(&value + &err, -(p as i64));
        Ok(Interval::new(lo, hi))
    }
}

/// Fixed-point `atanh(num/den) * 2^p` with `0 <= num/den <= 1/3`.
/// Returns `(value, err)` with the true scaled value in `[value-err, value+err]`.
fn atanh_fixed(num: &BigInt, den: &BigInt, p: u64) -> (BigInt, BigInt) {
    let num2 = num * num;
    let den2 = den * den;
    let mut pw = (num << p).div_floor(den);
    let mut pw_err = BigInt::one();
    let mut sum = BigInt::zero();
    let mut err = BigInt::zero();
    let mut k: u64 = 0;
    while !pw.is_zero() {
        let d = BigInt::from(2 * k + 1);
        sum += pw.div_floor(&d);
        err += &pw_err + 1u32;
        pw = (&pw * &num2).div_floor(&den2);
        pw_err += 1u32;
        k += 1;
    }
    // remaining terms are bounded by pw_err * (1 + 1/9 + ...) < 2 * pw_err
    err += &pw_err << 1u32;
    (sum, err)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 {
            write!(f, "{}", &self.mant << self.exp as u64)
        } else {
            write!(f, "{}/2^{}", self.mant, -self.exp)
        }
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        Interval { lo: d.clone(), hi: d }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Interval::point(Dyadic::from_int(v))
    }

    /// Outward-rounded enclosure of a rational.
    pub fn from_rational(r: &BigRational, prec: u64) -> Self {
        Interval {
            lo: Dyadic::floor_of_rational(r, prec),
            hi: Dyadic::ceil_of_rational(r, prec),
        }
    }

    /// Hull of two rationals, outward-rounded.
    pub fn hull_of_rationals(a: &BigRational, b: &BigRational, prec: u64) -> Self {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval {
            lo: Dyadic::floor_of_rational(lo, prec),
            hi: Dyadic::ceil_of_rational(hi, prec),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            Interval { lo: Dyadic::zero(), hi: self.hi.clone().max(self.lo.abs()) }
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Interval {
        let k = Dyadic::from_int(k.clone());
        let a = &self.lo * &k;
        let b = &self.hi * &k;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Outward-rounded quotient; `None` if the divisor contains zero.
    pub fn div(&self, rhs: &Interval, prec: u64) -> Option<Interval> {
        if rhs.contains_zero() {
            return None;
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&rhs.lo, &rhs.hi] {
                let down = Dyadic::div_rounded(a, b, prec, false);
                let up = Dyadic::div_rounded(a, b, prec, true);
                lo = Some(match lo {
                    Some(l) => l.min(down),
                    None => down,
                });
                hi = Some(match hi {
                    Some(h) => h.max(up),
                    None => up,
                });
            }
        }
        Some(Interval { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    /// Natural logarithm enclosure; the interval must be positive.
    pub fn ln(&self, prec: u64) -> Result<Interval> {
        if !self.is_positive() {
            return Err(Error::InvalidArgument("logarithm of an interval reaching zero".into()));
        }
        let lo = self.lo.ln(prec)?;
        let hi = self.hi.ln(prec)?;
        Ok(Interval { lo: lo.lo, hi: hi.hi })
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// `[lo, hi]` as decimal strings rounded outward.
    pub fn to_decimal_pair(&self, digits: u32) -> (String, String) {
        (self.lo.to_decimal(digits, false), self.hi.to_decimal(digits, true))
    }
}

impl<'a> Add<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl<'a> Sub<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl<'a> Mul<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let products = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair(20);
        write!(f, "[{lo}, {hi}]")
    }
}

//! Dense univariate polynomials with big-integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Coefficients lowest degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

pub(crate) fn sign_of(v: &BigInt) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x - r` scaled to integers: `den*x - num`.
    pub fn linear_with_root(r: &BigRational) -> Self {
        IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]).canonical()
    }

    /// Parses `"-2,0,0,1"` (lowest degree first).
    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (i, tok) in text.split(',').enumerate() {
            let tok = tok.trim();
            let c: BigInt = tok
                .parse()
                .map_err(|_| Error::Parse(format!("coefficient {}: invalid integer '{}'", i + 1, tok)))?;
            coeffs.push(c);
        }
        Ok(IntPolynomial::new(coeffs))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> Self {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        IntPolynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = IntPolynomial::new(vec![BigInt::one()]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `p(x + a)`.
    pub fn taylor_shift(&self, a: &BigInt) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        if a.is_zero() || n < 2 {
            return self.clone();
        }
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                let t = a * &c[j + 1];
                c[j] += t;
            }
        }
        IntPolynomial::new(c)
    }

    /// `x^deg * p(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPolynomial::new(c)
    }

    /// `sum c_i num(x)^i den(x)^(d-i)`, the numerator of `p(num/den)`.
    pub fn homogeneous_substitute(&self, num: &IntPolynomial, den: &IntPolynomial) -> Self {
        let d = self.degree();
        let mut num_pows = vec![IntPolynomial::new(vec![BigInt::one()])];
        let mut den_pows = vec![IntPolynomial::new(vec![BigInt::one()])];
        for i in 0..d {
            num_pows.push(num_pows[i].mul(num));
            den_pows.push(den_pows[i].mul(den));
        }
        let mut acc = IntPolynomial::new(vec![]);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&num_pows[i].mul(&den_pows[d - i]).scale(c));
        }
        acc
    }

    /// Sign of `p(num/den)`, `den > 0`.
    pub fn sign_at_fraction(&self, num: &BigInt, den: &BigInt) -> i8 {
        debug_assert!(den.is_positive());
        let Some(last) = self.coeffs.last() else { return 0 };
        let mut acc = last.clone();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev().skip(1) {
            den_pow *= den;
            acc = acc * num + c * &den_pow;
        }
        sign_of(&acc)
    }

    pub fn sign_at_rational(&self, r: &BigRational) -> i8 {
        self.sign_at_fraction(r.numer(), r.denom())
    }

    pub fn sign_at_int(&self, x: &BigInt) -> i8 {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        sign_of(&acc)
    }

    /// Sign at a dyadic point; Horner with power-of-two denominators as shifts.
    pub fn sign_at_dyadic(&self, x: &Dyadic) -> i8 {
        let Some(last) = self.coeffs.last() else { return 0 };
        if x.exponent() >= 0 {
            return self.sign_at_int(&x.floor());
        }
        let m = x.mantissa();
        let e = (-x.exponent()) as u64;
        let mut acc = last.clone();
        for (k, c) in self.coeffs.iter().rev().skip(1).enumerate() {
            acc = acc * m + (c << (e * (k as u64 + 1)));
        }
        sign_of(&acc)
    }

    /// Sign as `x -> +inf`.
    pub fn sign_at_infinity(&self) -> i8 {
        sign_of(&self.leading())
    }

    pub fn eval_rational(&self, r: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Quotient and remainder for a divisor whose leading coefficient
    /// divides every step; `None` otherwise.
    pub fn div_rem_exact(&self, divisor: &Self) -> Option<(Self, Self)> {
        if divisor.is_zero() {
            return None;
        }
        let dd = divisor.degree();
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return Some((IntPolynomial::new(vec![]), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        Some((IntPolynomial::new(quot), IntPolynomial::new(rem)))
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree();
        let lc = b.leading();
        let mut r = self.clone();
        while !r.is_zero() && r.degree() >= db {
            let shift = r.degree() - db;
            let top = r.leading();
            let mut shifted = vec![BigInt::zero(); shift];
            shifted.extend(b.coeffs.iter().map(|c| c * &top));
            r = r.scale(&lc).add(&IntPolynomial::new(shifted).scale(&BigInt::from(-1)));
        }
        r
    }

    /// Canonical greatest common divisor (primitive PRS).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.canonical(), other.canonical())
        } else {
            (other.canonical(), self.canonical())
        };
        if a.is_zero() {
            return b;
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).canonical();
            a = b;
            b = r;
        }
        a.canonical()
    }

    /// Canonical squarefree part `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> Self {
        let p = self.canonical();
        if p.degree() < 2 {
            return p;
        }
        let g = p.gcd(&p.derivative());
        if g.degree() == 0 {
            return p;
        }
        let (q, r) = p.div_rem_exact(&g).expect("gcd divides polynomial");
        debug_assert!(r.is_zero());
        q.canonical()
    }

    /// Number of sign changes in the coefficient sequence.
    pub fn sign_variations(&self) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for c in &self.coeffs {
            let s = sign_of(c);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Descartes bound on the roots in the open interval `(lo, hi)`.
    /// Zero or one is exact; larger values are upper bounds of matching parity.
    pub fn descartes_bound(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let (u1, v1) = (lo.numer(), lo.denom());
        let (u2, v2) = (hi.numer(), hi.denom());
        // x = (lo + hi t) / (1 + t) maps t in (0, inf) onto (lo, hi)
        let num = IntPolynomial::new(vec![u1 * v2, u2 * v1]);
        let den = IntPolynomial::new(vec![v1 * v2, v1 * v2]);
        self.homogeneous_substitute(&num, &den).sign_variations()
    }

    /// An integer bound strictly above every root magnitude.
    pub fn root_bound(&self) -> BigInt {
        let lc = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        BigInt::one() + m.div_ceil(&lc)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::json::ser_ints(&self.coeffs, s)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

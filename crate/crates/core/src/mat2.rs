use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::json::JsonInt;

/// `[[a, b], [c, d]]` over the integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::new(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    /// The letter matrix `[[b, 1], [1, 0]]`.
    pub fn letter<T: Into<BigInt>>(b: T) -> Self {
        Mat2::new(b.into(), BigInt::one(), BigInt::one(), BigInt::zero())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    /// `[[d, -b], [-c, a]]`, so that `m * m.adjugate() = det(m) * I`.
    pub fn adjugate(&self) -> Self {
        Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn neg(&self) -> Self {
        Mat2::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Mat2::new(&self.a * k, &self.b * k, &self.c * k, &self.d * k)
    }

    /// Right-multiplication by the letter matrix of `b`, in place.
    pub fn push_letter(&mut self, b: &BigInt) {
        let na = &self.a * b + &self.b;
        let nc = &self.c * b + &self.d;
        self.b = std::mem::replace(&mut self.a, na);
        self.d = std::mem::replace(&mut self.c, nc);
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries().into_iter().map(|e| e.abs()).max().unwrap()
    }
}

impl<'a> Mul<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn mul(self, r: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &r.a + &self.b * &r.c,
            &self.a * &r.b + &self.b * &r.d,
            &self.c * &r.a + &self.d * &r.c,
            &self.c * &r.b + &self.d * &r.d,
        )
    }
}

/// Serialized as `[[a, b], [c, d]]`.
impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [[JsonInt(&self.a), JsonInt(&self.b)], [JsonInt(&self.c), JsonInt(&self.d)]].serialize(s)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_inverts_up_to_determinant() {
        let m = Mat2::from_i64(7, 2, 10, 3);
        let p = &m * &m.adjugate();
        assert_eq!(p, Mat2::identity().scale(&m.det()));
    }

    #[test]
    fn push_letter_matches_product() {
        let mut m = Mat2::from_i64(2, 1, 1, 0);
        m.push_letter(&BigInt::from(3));
        assert_eq!(m, &Mat2::letter(2) * &Mat2::letter(3));
    }
}

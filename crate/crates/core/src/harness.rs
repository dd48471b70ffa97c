//! Integer vectors built from two convergent sequences, the four linear
//! forms evaluated on them, and the smallness and growth inequalities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::algebraic::AlgebraicNumber;
use crate::cf::{expand, word_matrix, CfExpansion, Convergents};
use crate::dyadic::{Dyadic, Interval};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::words::SharedBlockWitness;

pub const START_BITS: u64 = 256;
pub const BITS_CAP: u64 = 65536;

#[derive(Clone, Debug)]
pub struct PairContext {
    pub alpha: AlgebraicNumber,
    pub alpha_prime: AlgebraicNumber,
    pub cf: CfExpansion,
    pub cf_prime: CfExpansion,
}

impl PairContext {
    pub fn new(alpha: AlgebraicNumber, alpha_prime: AlgebraicNumber, depth: usize) -> Result<Self> {
        let cf = expand(&alpha, depth)?;
        let cf_prime = expand(&alpha_prime, depth)?;
        Ok(PairContext { alpha, alpha_prime, cf, cf_prime })
    }

    pub fn conv(&self) -> &Convergents {
        self.cf.convergents()
    }

    pub fn conv_prime(&self) -> &Convergents {
        self.cf_prime.convergents()
    }

    /// Quotient words `a_1 a_2 ...` of both numbers.
    pub fn words(&self) -> Result<(Vec<u64>, Vec<u64>)> {
        Ok((self.cf.letters_u64()?, self.cf_prime.letters_u64()?))
    }
}

/// The four slots `(x1, x2, x3, x4)` fed to the linear forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiVector(#[serde(serialize_with = "crate::json::ser_ints")] pub [BigInt; 4]);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorQuadruple {
    #[serde(serialize_with = "crate::json::ser_int")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::json::ser_int")]
    pub b: BigInt,
    #[serde(serialize_with = "crate::json::ser_int")]
    pub c: BigInt,
    #[serde(serialize_with = "crate::json::ser_int")]
    pub d: BigInt,
}

impl MirrorQuadruple {
    pub fn max_abs(&self) -> BigInt {
        [&self.a, &self.b, &self.c, &self.d].iter().map(|v| v.abs()).max().unwrap()
    }

    /// `[[d, c], [b, a]]`.
    pub fn arrangement(&self) -> Mat2 {
        Mat2::new(self.d.clone(), self.c.clone(), self.b.clone(), self.a.clone())
    }

    pub fn as_slots(&self) -> [BigInt; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }
}

/// Minors of `M(A) adj M(A')`, i.e. the entries of
/// `[[p_k, p_{k-1}], [q_k, q_{k-1}]] [[q'_{l-1}, -p'_{l-1}], [-q'_l, p'_l]]`
/// listed as `(c, -d, a, -b)` of that product `[[a, b], [c, d]]`.
pub fn phi_vector(ctx: &PairContext, k: i64, l: i64) -> Result<PhiVector> {
    let (c, cp) = (ctx.conv(), ctx.conv_prime());
    let (pk, pk1, qk, qk1) = (c.p(k)?, c.p(k - 1)?, c.q(k)?, c.q(k - 1)?);
    let (pl, pl1, ql, ql1) = (cp.p(l)?, cp.p(l - 1)?, cp.q(l)?, cp.q(l - 1)?);
    Ok(PhiVector([
        qk * ql1 - qk1 * ql,
        qk * pl1 - qk1 * pl,
        pk * ql1 - pk1 * ql,
        pk * pl1 - pk1 * pl,
    ]))
}

pub fn mirror_quadruple(ctx: &PairContext, k: i64, l: i64, m: i64) -> Result<MirrorQuadruple> {
    let (c, cp) = (ctx.conv(), ctx.conv_prime());
    let big_l = l + m;
    let (pk, pk1, qk, qk1) = (c.p(k)?, c.p(k - 1)?, c.q(k)?, c.q(k - 1)?);
    let (pl, pl1, ql, ql1) = (cp.p(big_l)?, cp.p(big_l - 1)?, cp.q(big_l)?, cp.q(big_l - 1)?);
    Ok(MirrorQuadruple {
        a: qk * ql + qk1 * ql1,
        b: qk * pl + qk1 * pl1,
        c: pk * ql + pk1 * ql1,
        d: pk * pl + pk1 * pl1,
    })
}

fn concat<T: Clone>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().chain(b).cloned().collect()
}

/// Plain case: `M(A) adj M(A') = det M(B) * M(AB) adj M(A'B)`, where
/// `det M(B) = (-1)^{|B|}`.
/// Mirror case: `M(AB) M(A')^T = M(A) M(A' rev(B))^T`.
pub fn check_transport_identity(prefix_a: &[BigInt], prefix_a_prime: &[BigInt], b: &[BigInt], mirror: bool) -> bool {
    let ma = word_matrix(prefix_a);
    let mb = word_matrix(b);
    let mab = &ma * &mb;
    if mirror {
        let rev_b: Vec<BigInt> = b.iter().rev().cloned().collect();
        let lhs = &mab * &word_matrix(prefix_a_prime).transpose();
        let rhs = &ma * &word_matrix(&concat(prefix_a_prime, &rev_b)).transpose();
        lhs == rhs
    } else {
        let lhs = &ma * &word_matrix(prefix_a_prime).adjugate();
        let rhs = &mab * &word_matrix(&concat(prefix_a_prime, b)).adjugate();
        lhs == rhs.scale(&mb.det())
    }
}

/// Enclosures of `L1..L4` at `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormValues(pub [Interval; 4]);

/// `L1 = aa' x1 - a x2 - a' x3 + x4`, `L2 = a' x1 - x2`, `L3 = a x1 - x3`,
/// `L4 = x1`, with both numbers refined past the size of the slots.
pub fn eval_linear_forms(ctx: &PairContext, v: &[BigInt; 4], bits: u64) -> FormValues {
    let margin = v.iter().map(|x| x.bits()).max().unwrap_or(0) + 4;
    let a = ctx.alpha.enclosure(bits + margin);
    let ap = ctx.alpha_prime.enclosure(bits + margin);
    let x: Vec<Interval> = v.iter().map(|xi| Interval::from_int(xi.clone())).collect();
    let aap = &a * &ap;
    let l1 = &(&(&aap * &x[0]) - &(&a * &x[1])) - &(&(&ap * &x[2]) - &x[3]);
    let l2 = &(&ap * &x[0]) - &x[1];
    let l3 = &(&a * &x[0]) - &x[2];
    FormValues([l1, l2, l3, x[0].clone()])
}

/// The factored evaluation of `L1(phi(k, l))` through the convergents at
/// `K = k + m` and `L = l + m`, carrying the `(-1)^m` from the transport.
pub fn l1_product_form(ctx: &PairContext, k: i64, l: i64, m: i64, bits: u64) -> Result<Interval> {
    let (c, cp) = (ctx.conv(), ctx.conv_prime());
    let (big_k, big_l) = (k + m, l + m);
    let size = c.q(big_k)?.bits() + cp.q(big_l)?.bits() + 4;
    let a = ctx.alpha.enclosure(bits + size);
    let ap = ctx.alpha_prime.enclosure(bits + size);
    let err = |x: &Interval, q: &BigInt, p: &BigInt| &x.scale_int(q) - &Interval::from_int(p.clone());
    let e_k = err(&a, c.q(big_k)?, c.p(big_k)?);
    let e_k1 = err(&a, c.q(big_k - 1)?, c.p(big_k - 1)?);
    let f_l = err(&ap, cp.q(big_l)?, cp.p(big_l)?);
    let f_l1 = err(&ap, cp.q(big_l - 1)?, cp.p(big_l - 1)?);
    let v = &(&e_k * &f_l1) - &(&e_k1 * &f_l);
    Ok(if m % 2 == 0 { v } else { -&v })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Undecided { enclosure: Interval },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1Check {
    pub witness: SharedBlockWitness,
    /// Whether the block really is shared by the two quotient words.
    pub premise_holds: bool,
    pub verdict: Verdict,
    /// `2 / (q_{k+m} q'_{l+m})`.
    pub bound: BigRational,
    /// `|L1(phi)|` at the last precision tried.
    pub enclosure: Interval,
    pub bits: u64,
}

/// Is the certified `|L1(phi(k, l))|` below `2 / (q_{k+m} q'_{l+m})`?
/// Precision starts at `bits` and doubles up to `cap`.
pub fn check_l1_smallness(ctx: &PairContext, wt: &SharedBlockWitness, bits: u64, cap: u64) -> Result<L1Check> {
    if wt.mirror {
        return Err(Error::InvalidArgument("smallness check takes plain shared blocks".into()));
    }
    let (a, ap) = ctx.words()?;
    let premise_holds = wt.validate(&a, &ap);
    let (k, l, m) = (wt.k as i64, wt.l as i64, wt.m as i64);
    let phi = phi_vector(ctx, k, l)?;
    let den = ctx.conv().q(k + m)? * ctx.conv_prime().q(l + m)?;
    let bound = BigRational::new(BigInt::from(2), den);
    let mut bits = bits.max(32);
    loop {
        let enclosure = eval_linear_forms(ctx, &phi.0, bits).0[0].abs();
        let verdict = if enclosure.hi().to_rational() < bound {
            Some(Verdict::Holds)
        } else if enclosure.lo().to_rational() >= bound {
            Some(Verdict::Fails)
        } else {
            None
        };
        match verdict {
            Some(verdict) => return Ok(L1Check { witness: *wt, premise_holds, verdict, bound, enclosure, bits }),
            None if bits >= cap => {
                return Ok(L1Check {
                    witness: *wt,
                    premise_holds,
                    verdict: Verdict::Undecided { enclosure: enclosure.clone() },
                    bound,
                    enclosure,
                    bits,
                })
            }
            None => bits = (bits * 2).min(cap),
        }
    }
}

/// `(q_k q'_l)^{1+delta} < L q_{k+m} q'_{l+m}`, decided in integers: with
/// `delta = u/v` and `L = r/s`, `(q_k q'_l)^{u+v} s^v < r^v (q_{k+m} q'_{l+m})^v`.
pub fn check_growth_condition(
    ctx: &PairContext,
    wt: &SharedBlockWitness,
    delta: &BigRational,
    l_bound: &BigRational,
) -> Result<bool> {
    if delta.is_negative() || !l_bound.is_positive() {
        return Err(Error::InvalidArgument("delta must be >= 0 and L > 0".into()));
    }
    let (k, l, m) = (wt.k as i64, wt.l as i64, wt.m as i64);
    let left = ctx.conv().q(k)? * ctx.conv_prime().q(l)?;
    let right = ctx.conv().q(k + m)? * ctx.conv_prime().q(l + m)?;
    let exp = |n: &BigInt| u32::try_from(n).map_err(|_| Error::InvalidArgument(format!("exponent {n} too large")));
    let (u, v) = (exp(delta.numer())?, exp(delta.denom())?);
    let (r, s) = (l_bound.numer(), l_bound.denom());
    Ok(left.pow(u + v) * s.pow(v) < r.pow(v) * right.pow(v))
}

/// `log 2 / (2 L log M)`; needs `M > 1` certified.
pub fn delta_from_l(m: &Interval, l_bound: &BigRational, prec: u64) -> Result<Interval> {
    if m.lo() <= &Dyadic::from_int(1) {
        return Err(Error::InvalidArgument("M must exceed 1".into()));
    }
    if !l_bound.is_positive() {
        return Err(Error::InvalidArgument("L must be positive".into()));
    }
    let ln2 = Dyadic::from_int(2).ln(prec)?;
    let two_l = Interval::from_rational(&(l_bound * BigRational::from_integer(BigInt::from(2))), prec);
    let den = &m.ln(prec)? * &two_l;
    ln2.div(&den, prec)
        .ok_or_else(|| Error::InvalidArgument("denominator enclosure reaches zero".into()))
}

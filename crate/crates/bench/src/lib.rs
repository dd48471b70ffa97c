//! Shared fixtures for the benchmarks.

use cfspectra::{expand, AlgebraicNumber, CfExpansion};

/// The real root of `x^n - k`.
pub fn root(k: i64, n: u32) -> AlgebraicNumber {
    AlgebraicNumber::root_of_int(k, n as usize).expect("x^n - k has a real root")
}

/// Quotient letters `a_1 .. a_depth` of `k^(1/n)`.
pub fn letters(k: i64, n: u32, depth: usize) -> Vec<u64> {
    expansion(k, n, depth).letters_u64().expect("letters fit in u64")
}

pub fn expansion(k: i64, n: u32, depth: usize) -> CfExpansion {
    expand(&root(k, n), depth).expect("irrational roots expand")
}

/// Prefix of the Fibonacci word over {1, 2}.
pub fn fibonacci_word(len: usize) -> Vec<u64> {
    let (mut a, mut b) = (vec![1u64], vec![1u64, 2]);
    while b.len() < len {
        let next = [b.as_slice(), a.as_slice()].concat();
        a = std::mem::replace(&mut b, next);
    }
    b.truncate(len);
    b
}

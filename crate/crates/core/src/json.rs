//! Big integers as plain JSON numbers (never strings or digit arrays).

use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use serde_json::{Number, Value};

pub fn number(n: &BigInt) -> Number {
    n.to_string().parse().expect("integer literal is a JSON number")
}

pub fn int_value(n: &BigInt) -> Value {
    Value::Number(number(n))
}

/// Integer value of a JSON number, rejecting fractions and exponents.
pub fn to_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        _ => None,
    }
}

pub struct JsonInt<'a>(pub &'a BigInt);

impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        number(self.0).serialize(s)
    }
}

pub fn ser_int<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    JsonInt(n).serialize(s)
}

pub fn ser_ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(JsonInt))
}

//! Exact arithmetic in GF(2^m) and in odd prime fields.

mod binary;
mod linear;
mod moduli;
mod prime;

pub use binary::{BinaryField, TraceSphere};
pub use linear::F2LinearMap;
pub use prime::PrimeField;

/// A field element in integer encoding.
pub type Elem = u32;

/// gcd on small integers, used for the (k, m) coprimality conditions.
pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

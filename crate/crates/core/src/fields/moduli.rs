/// Lexicographically smallest irreducible polynomial over F_2 of each degree
/// 0..=32, bit i holding the coefficient of x^i. Entries 0 and 1 are unused.
pub(crate) const DEFAULT_MODULI: [u64; 33] = [
    0, 0, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b,
    0x4021, 0x8003, 0x1002b, 0x20009, 0x40009, 0x80027, 0x100009, 0x200005, 0x400003,
    0x800021, 0x100001b, 0x2000009, 0x400001b, 0x8000027, 0x10000003, 0x20000005,
    0x40000003, 0x80000009, 0x10000008d,
];

pub(crate) fn degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

/// Remainder of `a` modulo `b` as polynomials over F_2.
pub(crate) fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Smallest nontrivial factor of `p`, found by trial division by every
/// polynomial of degree 1..=deg(p)/2.
pub(crate) fn smallest_factor(p: u64) -> Option<u64> {
    let d = degree(p);
    let limit = 1u64 << (d / 2 + 1);
    (2..limit).find(|&g| poly_rem(p, g) == 0)
}

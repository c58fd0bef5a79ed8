use crate::error::{Error, Result};

/// One primitive polynomial per extension degree 1..=16, bit `i` holding the
/// coefficient of `x^i`.
const PRIMITIVE_POLYS: [u32; 17] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

/// The field GF(2^s) in polynomial basis modulo a primitive polynomial.
///
/// Elements are integers below `2^s`; the element `x` (integer 2, or 1 when
/// `s = 1`) generates the multiplicative group.
#[derive(Clone, Debug)]
pub struct Gf2sField {
    s: u32,
    modulus: u32,
    exp: Vec<u32>,
}

impl Gf2sField {
    /// The field with the built-in modulus for degree `s`.
    pub fn new(s: u32) -> Result<Self> {
        if !(1..=16).contains(&s) {
            return Err(Error::InvalidParameter(format!(
                "extension degree {s} outside 1..=16"
            )));
        }
        Self::with_modulus(s, PRIMITIVE_POLYS[s as usize])
    }

    /// Validates that `modulus` has degree `s` and that `x` has order `2^s − 1`.
    pub fn with_modulus(s: u32, modulus: u32) -> Result<Self> {
        if !(1..=16).contains(&s) || modulus >> s != 1 {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus:#x} is not of degree {s}"
            )));
        }
        let order = (1u32 << s) - 1;
        let generator = if s == 1 { 1 } else { 2 };
        let mut exp = Vec::with_capacity(order as usize);
        let mut acc = 1u32;
        for i in 0..order {
            if i > 0 && acc == 1 {
                return Err(Error::InvalidParameter(format!(
                    "modulus {modulus:#x} is not primitive: generator has order {i}"
                )));
            }
            exp.push(acc);
            acc = poly_mulmod(acc, generator, modulus, s);
        }
        if acc != 1 {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus:#x} is reducible"
            )));
        }
        Ok(Gf2sField { s, modulus, exp })
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of nonzero elements, `2^s − 1`.
    pub fn order(&self) -> u32 {
        (1u32 << self.s) - 1
    }

    /// Carry-less product reduced by the modulus.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a >> self.s == 0 && b >> self.s == 0);
        poly_mulmod(a, b, self.modulus, self.s)
    }

    /// `α^i` for the primitive element α.
    pub fn pow_generator(&self, i: u64) -> u32 {
        self.exp[(i % self.order() as u64) as usize]
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn poly_mulmod(a: u32, b: u32, modulus: u32, s: u32) -> u32 {
    let mut prod: u64 = 0;
    for i in 0..s {
        if (b >> i) & 1 == 1 {
            prod ^= (a as u64) << i;
        }
    }
    for bit in (s..2 * s).rev() {
        if (prod >> bit) & 1 == 1 {
            prod ^= (modulus as u64) << (bit - s);
        }
    }
    prod as u32
}

//! Exact arithmetic in the prime field `F_p`.
//!
//! Two layers live here. [`PrimeField`] is the ambient field descriptor: it is
//! `Copy`, carries only the modulus, and does arithmetic on raw `u32`
//! residues. Everything performance-sensitive (module actions, elimination)
//! works on raw residues through a `PrimeField`. [`Scalar`] is the checked
//! value type that remembers its modulus, so operations mixing two fields are
//! reported instead of silently producing garbage.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not a prime greater than 3")]
    InvalidModulus(u64),
    #[error("inverse of zero in F_{0}")]
    ZeroInverse(u32),
    #[error("modulus mismatch: F_{0} vs F_{1}")]
    ModulusMismatch(u32, u32),
}

/// Largest modulus accepted. Products of two residues must fit in a `u64`
/// after accumulation, and the algebra never needs more than this.
pub const MAX_MODULUS: u32 = 1 << 20;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field `F_p`, `p > 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p <= 3 || p > MAX_MODULUS as u64 || !is_prime(p) {
            return Err(FieldError::InvalidModulus(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Canonical residue of a signed integer.
    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a + b*c`, the elimination kernel.
    #[inline]
    pub fn mul_add(&self, a: u32, b: u32, c: u32) -> u32 {
        ((a as u64 + b as u64 * c as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a.is_multiple_of(self.p) {
            return Err(FieldError::ZeroInverse(self.p));
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    /// Halving; always defined because `p` is odd.
    #[inline]
    pub fn half(&self, a: u32) -> u32 {
        if a.is_multiple_of(2) {
            a / 2
        } else {
            (a + self.p) / 2
        }
    }

    /// Sign `(-1)^k` as a residue.
    #[inline]
    pub fn sign(&self, odd: bool) -> u32 {
        if odd {
            self.p - 1
        } else {
            1
        }
    }

    pub fn scalar(&self, x: i64) -> Scalar {
        Scalar { value: self.reduce(x), p: self.p }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.p
    }
}

/// A residue together with the modulus it lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u32,
    p: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    /// Integer exponent, not a residue: `a^p = a` must stay expressible.
    Pow(u64),
}

impl Scalar {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Scalar) -> Result<PrimeField, FieldError> {
        if self.p != other.p {
            return Err(FieldError::ModulusMismatch(self.p, other.p));
        }
        Ok(self.field())
    }

    pub fn try_add(self, other: Scalar) -> Result<Scalar, FieldError> {
        let f = self.same_field(&other)?;
        Ok(Scalar { value: f.add(self.value, other.value), p: self.p })
    }

    pub fn try_sub(self, other: Scalar) -> Result<Scalar, FieldError> {
        let f = self.same_field(&other)?;
        Ok(Scalar { value: f.sub(self.value, other.value), p: self.p })
    }

    pub fn try_mul(self, other: Scalar) -> Result<Scalar, FieldError> {
        let f = self.same_field(&other)?;
        Ok(Scalar { value: f.mul(self.value, other.value), p: self.p })
    }

    pub fn neg(self) -> Scalar {
        Scalar { value: self.field().neg(self.value), p: self.p }
    }

    pub fn inv(self) -> Result<Scalar, FieldError> {
        Ok(Scalar { value: self.field().inv(self.value)?, p: self.p })
    }

    pub fn pow(self, e: u64) -> Scalar {
        Scalar { value: self.field().pow(self.value, e), p: self.p }
    }
}

/// Single entry point for the field operations. Unary operations ignore `b`
/// except for the modulus check.
pub fn arith(a: Scalar, b: Scalar, op: ArithOp) -> Result<Scalar, FieldError> {
    a.same_field(&b)?;
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Neg => Ok(a.neg()),
        ArithOp::Inv => a.inv(),
        ArithOp::Pow(e) => Ok(a.pow(e)),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

//! Residue arithmetic modulo a word-size prime.
//!
//! Kernels work on raw canonical `u64` residues through [`PrimeField`];
//! [`Residue`] is the field-tagged value type used at API boundaries.

use std::fmt;

use crate::error::{Error, Result};

/// Witness bases that make Miller-Rabin deterministic below 2^64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// The field Z/pZ for a prime `p < 2^64`.
///
/// Residues are always stored in canonical form; Montgomery reduction is
/// only used internally to reduce double-width products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
    /// 2^128 mod p, i.e. R^2 for the Montgomery radix R = 2^64.
    two128: u64,
    /// -1/p mod 2^64 (unused when p = 2).
    pinv_neg: u64,
}

impl PrimeField {
    /// Creates the field of residues modulo `p`, rejecting composite moduli.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p as u128));
        }
        let two64 = ((1u128 << 64) % p as u128) as u64;
        let two128 = ((two64 as u128 * two64 as u128) % p as u128) as u64;
        // Newton iteration for 1/p mod 2^64; each step doubles the correct bits
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        Ok(Self {
            p,
            two128,
            pinv_neg: inv.wrapping_neg(),
        })
    }

    /// Like [`PrimeField::new`] but accepts a wider integer, as produced by parsers.
    pub fn from_u128(p: u128) -> Result<Self> {
        let p = u64::try_from(p).map_err(|_| Error::ModulusTooLarge(p))?;
        Self::new(p)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary `u64` into `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        if x >= self.p {
            x % self.p
        } else {
            x
        }
    }

    /// `y / 2^64 mod p` for `y < p * 2^64`.
    #[inline]
    fn redc(&self, y: u128) -> u64 {
        let m = (y as u64).wrapping_mul(self.pinv_neg);
        let (s, carry) = y.overflowing_add(m as u128 * self.p as u128);
        let t = (s >> 64) as u64;
        let (u, borrow) = t.overflowing_sub(self.p);
        select(carry | !borrow, u, t)
    }

    /// `x mod p` for `x < p * 2^64`.
    #[inline]
    fn reduce_narrow(&self, x: u128) -> u64 {
        if self.p == 2 {
            return (x & 1) as u64;
        }
        let t = self.redc(x);
        self.redc(t as u128 * self.two128 as u128)
    }

    #[inline]
    pub fn reduce_u128(&self, x: u128) -> u64 {
        let hi = (x >> 64) as u64;
        let hi = if self.p > 1 << 63 {
            let (u, borrow) = hi.overflowing_sub(self.p);
            select(!borrow, u, hi)
        } else if hi >= self.p {
            hi % self.p
        } else {
            hi
        };
        self.reduce_narrow(((hi as u128) << 64) | (x as u64 as u128))
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        let r = self.reduce(x.unsigned_abs());
        if x < 0 {
            self.neg(r)
        } else {
            r
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        // branch-free: operands are usually random
        let (s, carry) = a.overflowing_add(b);
        let (t, borrow) = s.overflowing_sub(self.p);
        select(carry | !borrow, t, s)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let (d, borrow) = a.overflowing_sub(b);
        d.wrapping_add(self.p & (borrow as u64).wrapping_neg())
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce_narrow(a as u128 * b as u128)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.reduce(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = self.reduce(a);
        if a == 0 {
            return Err(Error::NotInvertible);
        }
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(s0.rem_euclid(self.p as i128) as u64)
    }

    /// Inverse of a small integer `k`, e.g. the `1/k` of the Lagrange formula.
    pub fn inv_index(&self, k: usize) -> Result<u64> {
        self.inv(self.reduce(k as u64))
            .map_err(|_| Error::IndexNotInvertible(k))
    }

    /// Sum of pairwise products with a single final reduction.
    #[inline]
    pub fn dot<I>(&self, pairs: I) -> u64
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut acc = DotAcc::default();
        for (a, b) in pairs {
            acc.add_prod(a, b);
        }
        acc.finish(self)
    }

    pub fn residue(&self, x: u64) -> Residue {
        Residue {
            value: self.reduce(x),
            field: *self,
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// `if c { a } else { b }` without a data-dependent branch.
#[inline(always)]
fn select(c: bool, a: u64, b: u64) -> u64 {
    let mask = (c as u64).wrapping_neg();
    (a & mask) | (b & !mask)
}

/// Lazy accumulator for sums of products of canonical residues.
///
/// Products are added into a 128-bit sum and overflows are counted in
/// `top`, so a single reduction happens in [`DotAcc::finish`].
#[derive(Clone, Copy, Debug, Default)]
pub struct DotAcc {
    sum: u128,
    top: u64,
}

impl DotAcc {
    #[inline(always)]
    pub fn add_prod(&mut self, a: u64, b: u64) {
        let (s, carry) = self.sum.overflowing_add(a as u128 * b as u128);
        self.sum = s;
        self.top += carry as u64;
    }

    #[inline]
    pub fn finish(self, field: &PrimeField) -> u64 {
        // total = top 2^128 + sum
        let low = field.reduce_u128(self.sum);
        if self.top == 0 {
            low
        } else {
            field.add(low, field.mul(field.reduce(self.top), field.two128))
        }
    }
}

/// A residue tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    field: PrimeField,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    fn check(&self, other: &Residue) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(self.field.residue(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(self.field.residue(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(self.field.residue(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Residue {
        self.field.residue(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Residue> {
        Ok(self.field.residue(self.field.inv(self.value)?))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

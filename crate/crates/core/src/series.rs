//! Dense truncated power series over a prime field.

use crate::error::{Error, Result};
use crate::instrument::{Context, MulTag};
use crate::ring::{PrimeField, Residue};

/// A power series truncated to `len()` coefficients; `coeffs[i]` is `[x^i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Series {
    /// Builds a series, reducing every coefficient into `[0, p)`.
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::bad_input("a series needs at least one coefficient"));
        }
        for c in coeffs.iter_mut() {
            *c = field.reduce(*c);
        }
        Ok(Self { field, coeffs })
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Result<Self> {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Internal constructor for coefficient vectors already in canonical form.
    pub(crate) fn from_canonical(field: PrimeField, coeffs: Vec<u64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        debug_assert!(coeffs.iter().all(|&c| c < field.modulus()));
        Self { field, coeffs }
    }

    pub fn zero(field: PrimeField, len: usize) -> Self {
        Self::from_canonical(field, vec![0; len.max(1)])
    }

    pub fn one(field: PrimeField, len: usize) -> Self {
        let mut s = Self::zero(field, len);
        s.coeffs[0] = 1;
        s
    }

    /// The series `x` truncated to `len`; zero when `len == 1`.
    pub fn x(field: PrimeField, len: usize) -> Self {
        let mut s = Self::zero(field, len);
        if len > 1 {
            s.coeffs[1] = 1;
        }
        s
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    /// `[x^i]`, with zero outside `[0, len)`.
    #[inline]
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `[x^k]` for a signed index, zero when `k < 0` or `k >= len`.
    #[inline]
    pub fn coeff_signed(&self, k: isize) -> u64 {
        if k < 0 {
            0
        } else {
            self.coeff(k as usize)
        }
    }

    pub fn residue(&self, i: usize) -> Residue {
        self.field.residue(self.coeff(i))
    }

    /// Truncates or zero-extends to `len` coefficients.
    pub fn resized(&self, len: usize) -> Series {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len.max(1), 0);
        Self::from_canonical(self.field, coeffs)
    }

    fn check_field(&self, other: &Series) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Coefficientwise sum; the result has the longer of the two lengths.
    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_field(other)?;
        let n = self.len().max(other.len());
        let coeffs = (0..n)
            .map(|i| self.field.add(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Self::from_canonical(self.field, coeffs))
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_field(other)?;
        let n = self.len().max(other.len());
        let coeffs = (0..n)
            .map(|i| self.field.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Self::from_canonical(self.field, coeffs))
    }

    pub fn scale(&self, c: u64) -> Series {
        let c = self.field.reduce(c);
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Self::from_canonical(self.field, coeffs)
    }

    /// Divides by `x^k`, dropping the low `k` coefficients.
    pub fn shift_down(&self, k: usize) -> Series {
        let coeffs = self.coeffs.get(k..).map(<[u64]>::to_vec).unwrap_or_default();
        if coeffs.is_empty() {
            Self::zero(self.field, 1)
        } else {
            Self::from_canonical(self.field, coeffs)
        }
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }
}

/// `a * b mod x^n`, classical below the context's Karatsuba threshold.
pub fn mul_trunc(ctx: &Context, a: &Series, b: &Series, n: usize) -> Result<Series> {
    a.check_field(b)?;
    if n == 0 {
        return Err(Error::bad_input("truncation length must be at least 1"));
    }
    ctx.counter.record_poly_mul(n);
    let coeffs = mul_low(&a.field, a.coeffs(), b.coeffs(), n, ctx.karatsuba_threshold);
    Ok(Series::from_canonical(a.field, coeffs))
}

/// Low `n` coefficients of `a * b`, zero-padded to exactly `n`.
pub(crate) fn mul_low(f: &PrimeField, a: &[u64], b: &[u64], n: usize, threshold: usize) -> Vec<u64> {
    let a = &a[..a.len().min(n)];
    let b = &b[..b.len().min(n)];
    let mut out = if a.len().min(b.len()) < threshold.max(2) {
        schoolbook(f, a, b, n)
    } else {
        karatsuba(f, a, b, threshold)
    };
    out.resize(n, 0);
    out
}

/// Product coefficients `0..min(limit, la + lb - 1)`.
fn schoolbook(f: &PrimeField, a: &[u64], b: &[u64], limit: usize) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = (a.len() + b.len() - 1).min(limit);
    (0..len)
        .map(|k| {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            f.dot(
                a[lo..=hi]
                    .iter()
                    .copied()
                    .zip(b[k - hi..=k - lo].iter().rev().copied()),
            )
        })
        .collect()
}

fn add_into(f: &PrimeField, acc: &mut [u64], src: &[u64]) {
    for (a, &s) in acc.iter_mut().zip(src) {
        *a = f.add(*a, s);
    }
    debug_assert!(src.iter().skip(acc.len()).all(|&s| s == 0));
}

fn sum_halves(f: &PrimeField, lo: &[u64], hi: &[u64]) -> Vec<u64> {
    let mut s = lo.to_vec();
    add_into(f, &mut s, hi);
    s
}

/// Full product by Karatsuba recursion.
fn karatsuba(f: &PrimeField, a: &[u64], b: &[u64], threshold: usize) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    if a.len().min(b.len()) < threshold.max(2) {
        return schoolbook(f, a, b, out_len);
    }
    let half = a.len().max(b.len()).div_ceil(2);
    let mut out = vec![0u64; out_len];

    // one operand fits in a single half: split only the longer one
    if a.len() <= half || b.len() <= half {
        let (short, long) = if a.len() <= half { (a, b) } else { (b, a) };
        let (l0, l1) = long.split_at(half);
        add_into(f, &mut out, &karatsuba(f, short, l0, threshold));
        add_into(f, &mut out[half..], &karatsuba(f, short, l1, threshold));
        return out;
    }

    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);
    let z0 = karatsuba(f, a0, b0, threshold);
    let z2 = karatsuba(f, a1, b1, threshold);
    let mut z1 = karatsuba(f, &sum_halves(f, a0, a1), &sum_halves(f, b0, b1), threshold);
    for (i, &c) in z0.iter().enumerate() {
        z1[i] = f.sub(z1[i], c);
    }
    for (i, &c) in z2.iter().enumerate() {
        z1[i] = f.sub(z1[i], c);
    }
    add_into(f, &mut out, &z0);
    add_into(f, &mut out[half..], &z1);
    add_into(f, &mut out[2 * half..], &z2);
    out
}

/// `1 / f mod x^n` by precision-doubling Newton iteration `r <- r (2 - f r)`.
///
/// Internal multiplications are counted under [`MulTag::Reciprocal`].
pub fn reciprocal(ctx: &Context, f: &Series, n: usize) -> Result<Series> {
    if n == 0 {
        return Err(Error::bad_input("truncation length must be at least 1"));
    }
    let field = f.field;
    let r0 = field.inv(f.coeff(0))?;
    ctx.counter.with_tag(MulTag::Reciprocal, || {
        let mut r = Series::from_canonical(field, vec![r0]);
        let mut len = 1;
        while len < n {
            let next = (2 * len).min(n);
            // e = f r - 1 vanishes below x^len
            let mut e = mul_trunc(ctx, f, &r, next)?;
            e.coeffs[0] = field.sub(e.coeffs[0], 1);
            debug_assert!(e.coeffs[..len].iter().all(|&c| c == 0));
            let corr = mul_trunc(ctx, &r, &e, next)?;
            r = r.resized(next).sub(&corr)?;
            len = next;
        }
        Ok(r)
    })
}

/// Formal derivative; a length-`len` input yields length `max(len - 1, 1)`.
pub fn derivative(f: &Series) -> Series {
    if f.len() == 1 {
        return Series::zero(f.field, 1);
    }
    let field = f.field;
    let coeffs = (1..f.len())
        .map(|i| field.mul(field.reduce(i as u64), f.coeffs[i]))
        .collect();
    Series::from_canonical(field, coeffs)
}

/// `[x^k] (t * u)` in O(k) operations without forming the product.
pub fn cauchy_coefficient(t: &Series, u: &Series, k: usize) -> Result<Residue> {
    t.check_field(u)?;
    Ok(t.field.residue(cauchy_raw(&t.field, t.coeffs(), u.coeffs(), k)))
}

pub(crate) fn cauchy_raw(f: &PrimeField, t: &[u64], u: &[u64], k: usize) -> u64 {
    if t.is_empty() || u.is_empty() {
        return 0;
    }
    let lo = k.saturating_sub(u.len() - 1);
    let hi = k.min(t.len() - 1);
    if lo > hi {
        return 0;
    }
    f.dot(
        t[lo..=hi]
            .iter()
            .copied()
            .zip(u[k - hi..=k - lo].iter().rev().copied()),
    )
}

/// `f(g(x)) mod x^n` by Horner's rule; `n` multiplications of length `n`.
pub fn compose_horner(ctx: &Context, f: &Series, g: &Series, n: usize) -> Result<Series> {
    f.check_field(g)?;
    if g.coeff(0) != 0 {
        return Err(Error::NonzeroConstantTerm);
    }
    if n == 0 {
        return Err(Error::bad_input("truncation length must be at least 1"));
    }
    let field = f.field;
    let top = f.len().min(n) - 1;
    let mut acc = Series::zero(field, n);
    acc.coeffs[0] = f.coeff(top);
    for i in (0..top).rev() {
        acc = mul_trunc(ctx, &acc, g, n)?;
        acc.coeffs[0] = field.add(acc.coeffs[0], f.coeff(i));
    }
    Ok(acc)
}

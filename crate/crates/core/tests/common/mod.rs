#![allow(dead_code)]

use fastrev::series::{mul_trunc, reciprocal};
use fastrev::{Context, PrimeField, Series};

pub const P63: u64 = (1 << 63) + 29;

/// Admissible input built from raw words: `a0 = 0` and `a1` forced nonzero.
pub fn admissible(field: PrimeField, raw: &[u64], n: usize) -> Series {
    let p = field.modulus();
    let mut c: Vec<u64> = (0..n).map(|i| raw[i % raw.len()].wrapping_add(i as u64) % p).collect();
    c[0] = 0;
    if c[1] == 0 {
        c[1] = 1;
    }
    Series::new(field, c).unwrap()
}

/// `h = x / f` to length `len`.
pub fn lagrange_h(f: &Series, len: usize) -> Series {
    let ctx = Context::default();
    reciprocal(&ctx, &f.shift_down(1).resized(len), len).unwrap()
}

/// `h^k mod x^len` by repeated squaring.
pub fn pow_by_squaring(h: &Series, mut k: usize, len: usize) -> Series {
    let ctx = Context::new(usize::MAX, false);
    let mut acc = Series::one(h.field(), len);
    let mut base = h.resized(len);
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_trunc(&ctx, &acc, &base, len).unwrap();
        }
        base = mul_trunc(&ctx, &base, &base, len).unwrap();
        k >>= 1;
    }
    acc
}

/// Catalan numbers mod `p` from `C_{k+1} = sum C_i C_{k-i}`.
pub fn catalan(field: &PrimeField, count: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    while c.len() < count {
        let k = c.len() - 1;
        let next = (0..=k).fold(0, |s, i| field.add(s, field.mul(c[i], c[k - i])));
        c.push(next);
    }
    c
}

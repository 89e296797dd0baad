//! Named benchmark inputs, adapted to Z/pZ.

use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::instrument::Context;
use crate::ring::PrimeField;
use crate::series::{mul_trunc, reciprocal, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Uniform coefficients from a seeded SplitMix64 stream, with `a_1 = 1`.
    Random,
    /// `x - x^2`, whose reversion has the Catalan numbers as coefficients.
    Catalan,
    /// `(x + x^2) / (1 + x + x^2)`
    F3,
    /// `exp(x) - 1`
    F4,
    /// `x exp(x)`
    F5,
    /// `3x (1 - x^2) / (2 (1 - x + x^2)^2)`
    F6,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Random,
        Preset::Catalan,
        Preset::F3,
        Preset::F4,
        Preset::F5,
        Preset::F6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Random => "random",
            Preset::Catalan => "catalan",
            Preset::F3 => "f3",
            Preset::F4 => "f4",
            Preset::F5 => "f5",
            Preset::F6 => "f6",
        }
    }

    /// The series truncated to `n` terms over `field`. `seed` only affects `random`.
    pub fn generate(self, field: PrimeField, n: usize, seed: u64) -> Result<Series> {
        if n == 0 {
            return Err(Error::bad_input("preset length must be at least 1"));
        }
        let ctx = Context::default();
        let poly = |c: &[i64]| Series::from_i64(field, c).map(|s| s.resized(n));
        let s = match self {
            Preset::Random => random_series(field, n, seed),
            Preset::Catalan => poly(&[0, 1, -1])?,
            Preset::F3 => {
                let den = reciprocal(&ctx, &poly(&[1, 1, 1])?, n)?;
                mul_trunc(&ctx, &poly(&[0, 1, 1])?, &den, n)?
            }
            Preset::F4 => exp_series(field, n)?.sub(&Series::one(field, n))?,
            Preset::F5 => {
                let e = exp_series(field, n)?;
                mul_trunc(&ctx, &Series::x(field, n), &e, n)?
            }
            Preset::F6 => {
                let two = field.reduce(2);
                let den = poly(&[1, -2, 3, -2, 1])?.scale(two);
                let den = reciprocal(&ctx, &den, n).map_err(|_| {
                    Error::bad_input(format!("f6 is undefined modulo {}", field.modulus()))
                })?;
                mul_trunc(&ctx, &poly(&[0, 3, 0, -3])?, &den, n)?
            }
        };
        if s.coeff(0) != 0 || (n > 1 && s.coeff(1) == 0) {
            return Err(Error::bad_input(format!(
                "preset {} has no unit linear term modulo {}",
                self.name(),
                field.modulus()
            )));
        }
        Ok(s)
    }
}

fn random_series(field: PrimeField, n: usize, seed: u64) -> Series {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let coeffs = (0..n)
        .map(|i| match i {
            0 => 0,
            1 => 1,
            _ => field.reduce(rng.next_u64()),
        })
        .collect();
    Series::from_canonical(field, coeffs)
}

/// `sum x^k / k!`; needs `k!` invertible for every `k < n`.
fn exp_series(field: PrimeField, n: usize) -> Result<Series> {
    let mut coeffs = vec![0u64; n];
    coeffs[0] = 1;
    for k in 1..n {
        let ik = field.inv_index(k)?;
        coeffs[k] = field.mul(coeffs[k - 1], ik);
    }
    Ok(Series::from_canonical(field, coeffs))
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::bad_input(format!("unknown preset '{s}'")))
    }
}

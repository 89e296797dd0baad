//! Compositional inversion of truncated power series.
//!
//! Four routes produce the same output `g` with `f(g(x)) = g(f(x)) = x mod x^n`:
//!
//! * naive Lagrange inversion, one power of `h = x/f` per coefficient;
//! * fast Lagrange inversion, splitting exponents `k = i + j` into a giant
//!   step `i` (a multiple of `m`) and a baby step `j < m`, then reading one
//!   coefficient of `h^i h^j` as a single inner product;
//! * the matrix form of the same idea, which packs every inner product into
//!   one `(m x m^2) * (m^2 x m)` product;
//! * Newton iteration over Brent-Kung baby-step giant-step composition, the
//!   classical baseline.
//!
//! All Lagrange variants work at length `n - 1`: `h` and its powers never
//! need the coefficient of `x^{n-1}`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::instrument::{Context, MulTag, DEFAULT_KARATSUBA_THRESHOLD, DEFAULT_STRASSEN_THRESHOLD};
use crate::matrix::{self, DenseMatrix, MatrixStrategy};
use crate::ring::{PrimeField, Residue};
use crate::series::{self, cauchy_raw, derivative, mul_trunc, reciprocal, Series};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    LagrangeNaive,
    #[default]
    FastLagrange,
    FastLagrangeMatrix,
    NewtonBk21,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::LagrangeNaive,
        Algorithm::FastLagrange,
        Algorithm::FastLagrangeMatrix,
        Algorithm::NewtonBk21,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LagrangeNaive => "lagrange",
            Algorithm::FastLagrange => "fast-lagrange",
            Algorithm::FastLagrangeMatrix => "fast-lagrange-matrix",
            Algorithm::NewtonBk21 => "newton-bk21",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::bad_input(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversionConfig {
    pub algorithm: Algorithm,
    /// Baby-step count; defaults to `ceil(sqrt(n - 1))`. Must satisfy `m^2 >= n - 1`.
    pub m_override: Option<usize>,
    pub karatsuba_threshold: usize,
    pub matrix_strategy: MatrixStrategy,
    pub strassen_threshold: usize,
    pub instrument: bool,
}

impl Default for ReversionConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::default(),
            m_override: None,
            karatsuba_threshold: DEFAULT_KARATSUBA_THRESHOLD,
            matrix_strategy: MatrixStrategy::default(),
            strassen_threshold: DEFAULT_STRASSEN_THRESHOLD,
            instrument: false,
        }
    }
}

impl ReversionConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..Self::default()
        }
    }

    /// A fresh run context carrying this configuration's knobs.
    pub fn context(&self) -> Context {
        let mut ctx = Context::new(self.karatsuba_threshold, self.instrument);
        ctx.strassen_threshold = self.strassen_threshold;
        ctx
    }

    /// The baby-step count for length `n`, validating any override.
    pub fn baby_steps(&self, n: usize) -> Result<usize> {
        let m = self.m_override.unwrap_or_else(|| ceil_sqrt(n - 1));
        if m == 0 || m.saturating_mul(m) < n - 1 {
            return Err(Error::bad_input(format!(
                "m = {m} is not admissible for n = {n} (need m >= 1 and m^2 >= n - 1)"
            )));
        }
        Ok(m)
    }
}

/// Timing and operation counts for one reversion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub wall_ns: u64,
    /// Truncated multiplications outside reciprocal computations.
    pub poly_mul_count: u64,
    /// `(length, count)` breakdown of `poly_mul_count`.
    pub poly_muls_by_length: Vec<(usize, u64)>,
    pub reciprocal_mul_count: u64,
    /// Scalar products in matrix multiplications and single-coefficient inner products.
    pub scalar_mul_count: u64,
    pub matrix_ns: u64,
}

pub fn ceil_sqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r > x {
        r -= 1;
    }
    while r * r < x {
        r += 1;
    }
    r
}

/// Inverses of `1..n` (index 0 unused), failing at the first index divisible by p.
fn index_inverses(field: &PrimeField, n: usize) -> Result<Vec<u64>> {
    let p = field.modulus();
    let mut inv = vec![0u64; n.max(2)];
    for k in 1..n {
        if k as u64 >= p {
            return Err(Error::IndexNotInvertible(k));
        }
        inv[k] = if k == 1 {
            1
        } else {
            // p = q k + r  =>  1/k = -q / r
            field.mul(p - p / k as u64, inv[(p % k as u64) as usize])
        };
    }
    Ok(inv)
}

/// Checks the input and returns `h = x / f mod x^{n-1}`.
fn lagrange_base(ctx: &Context, f: &Series, n: usize) -> Result<Series> {
    validate(f, n)?;
    reciprocal(ctx, &f.shift_down(1).resized(n - 1), n - 1)
}

fn validate(f: &Series, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::bad_input(format!("reversion length must exceed 1, got {n}")));
    }
    if f.coeff(0) != 0 {
        return Err(Error::bad_input("series has a nonzero constant term"));
    }
    if f.coeff(1) == 0 {
        return Err(Error::bad_input("linear coefficient is not a unit"));
    }
    Ok(())
}

/// `(1/k) [x^{k-1}] h^k`, given `h_pow = h^k`.
pub fn lagrange_coefficient(h_pow: &Series, k: usize) -> Result<Residue> {
    if k == 0 {
        return Err(Error::IndexNotInvertible(0));
    }
    let field = h_pow.field();
    let ik = field.inv_index(k)?;
    Ok(field.residue(field.mul(ik, h_pow.coeff(k - 1))))
}

/// Runs the configured algorithm with a fresh context.
pub fn revert(f: &Series, n: usize, cfg: &ReversionConfig) -> Result<Series> {
    revert_with(&cfg.context(), f, n, cfg)
}

/// Runs the configured algorithm in an existing context.
pub fn revert_with(ctx: &Context, f: &Series, n: usize, cfg: &ReversionConfig) -> Result<Series> {
    match cfg.algorithm {
        Algorithm::LagrangeNaive => revert_lagrange_naive(ctx, f, n),
        Algorithm::FastLagrange => revert_fast_lagrange(ctx, f, n, cfg),
        Algorithm::FastLagrangeMatrix => revert_fast_lagrange_matrix(ctx, f, n, cfg),
        Algorithm::NewtonBk21 => revert_newton_bk21(ctx, f, n, cfg),
    }
}

/// Runs the configured algorithm with instrumentation forced on.
pub fn revert_instrumented(f: &Series, n: usize, cfg: &ReversionConfig) -> Result<(Series, BenchRecord)> {
    let mut ctx = cfg.context();
    ctx.counter = crate::instrument::OpCounter::new(true);
    let start = Instant::now();
    let g = revert_with(&ctx, f, n, cfg)?;
    let wall_ns = start.elapsed().as_nanos() as u64;
    let poly_muls_by_length = ctx
        .counter
        .poly_muls()
        .into_iter()
        .filter(|((tag, _), _)| *tag == MulTag::Main)
        .map(|((_, len), c)| (len, c))
        .collect();
    let record = BenchRecord {
        algorithm: cfg.algorithm,
        n,
        wall_ns,
        poly_mul_count: ctx.counter.poly_mul_count(MulTag::Main),
        poly_muls_by_length,
        reciprocal_mul_count: ctx.counter.poly_mul_count(MulTag::Reciprocal),
        scalar_mul_count: ctx.counter.scalar_mul_count(),
        matrix_ns: ctx.counter.matrix_ns(),
    };
    Ok((g, record))
}

/// Lagrange inversion computing every power `h, h^2, ..., h^{n-1}`.
pub fn revert_lagrange_naive(ctx: &Context, f: &Series, n: usize) -> Result<Series> {
    let h = lagrange_base(ctx, f, n)?;
    let field = f.field();
    let inv = index_inverses(&field, n)?;
    let len = n - 1;
    let mut out = vec![0u64; n];
    let mut pow = h.clone();
    for k in 1..n {
        out[k] = field.mul(inv[k], pow.coeff(k - 1));
        if k + 1 < n {
            pow = mul_trunc(ctx, &pow, &h, len)?;
        }
    }
    Ok(Series::from_canonical(field, out))
}

/// `[h, h^2, ..., h^m]` at length `len`; `m - 1` multiplications.
fn baby_powers(ctx: &Context, h: &Series, m: usize, len: usize) -> Result<Vec<Series>> {
    let mut pows = Vec::with_capacity(m);
    pows.push(h.clone());
    for i in 1..m {
        let next = mul_trunc(ctx, &pows[i - 1], h, len)?;
        pows.push(next);
    }
    Ok(pows)
}

/// Baby-step giant-step Lagrange inversion with one inner product per coefficient.
pub fn revert_fast_lagrange(ctx: &Context, f: &Series, n: usize, cfg: &ReversionConfig) -> Result<Series> {
    let h = lagrange_base(ctx, f, n)?;
    let m = cfg.baby_steps(n)?;
    let field = f.field();
    let inv = index_inverses(&field, n)?;
    let len = n - 1;
    let mut out = vec![0u64; n];

    // pows[j - 1] = h^j
    let pows = baby_powers(ctx, &h, m, len)?;
    for i in 1..m.min(n) {
        out[i] = field.mul(inv[i], pows[i - 1].coeff(i - 1));
    }

    let hm = &pows[m - 1];
    let mut t = hm.clone();
    let mut i = m;
    let mut scalar = 0u64;
    while i < n {
        out[i] = field.mul(inv[i], t.coeff(i - 1));
        for j in 1..m {
            let k = i + j;
            if k >= n {
                break;
            }
            let c = cauchy_raw(&field, t.coeffs(), pows[j - 1].coeffs(), k - 1);
            scalar += k as u64;
            out[k] = field.mul(inv[k], c);
        }
        t = mul_trunc(ctx, &t, hm, len)?;
        i += m;
    }
    ctx.counter.record_scalar_muls(scalar);
    Ok(Series::from_canonical(field, out))
}

/// Baby-step matrix: row `i` (1-indexed) holds `[x^{i+j-m-1}] h^i` in column `j`.
///
/// `h_powers` is `[h^1, ..., h^m]`; coefficients at or beyond `x^{n-1}` are zero.
pub fn assemble_baby_matrix(h_powers: &[Series], m: usize, n: usize) -> Result<DenseMatrix> {
    if h_powers.len() != m || m == 0 {
        return Err(Error::dims(format!(
            "expected {m} baby-step powers, got {}",
            h_powers.len()
        )));
    }
    let field = h_powers[0].field();
    let width = m * m;
    let limit = n as isize - 1;
    Ok(DenseMatrix::from_fn(field, m, width, |i, j| {
        // 0-indexed: exponent (i+1) + (j+1) - m - 1
        let k = i as isize + j as isize + 1 - m as isize;
        if k < limit {
            h_powers[i].coeff_signed(k)
        } else {
            0
        }
    }))
}

/// Giant-step matrix: row `i` (1-indexed) holds `[x^{im-j}] h^{(i-1)m}` in column `j`.
///
/// `h_giants` is `[h^0, h^m, h^{2m}, ...]` with at most `m` entries; missing
/// trailing rows are zero.
pub fn assemble_giant_matrix(h_giants: &[Series], m: usize, n: usize) -> Result<DenseMatrix> {
    if h_giants.is_empty() || h_giants.len() > m {
        return Err(Error::dims(format!(
            "expected 1..={m} giant-step powers, got {}",
            h_giants.len()
        )));
    }
    let field = h_giants[0].field();
    let width = m * m;
    let limit = n as isize - 1;
    Ok(DenseMatrix::from_fn(field, m, width, |i, j| {
        let Some(pow) = h_giants.get(i) else {
            return 0;
        };
        let k = ((i + 1) * m) as isize - j as isize - 1;
        if k < limit {
            pow.coeff_signed(k)
        } else {
            0
        }
    }))
}

/// The `m x m` product `C = A B^T` whose rowwise entry `C_k` is `[x^{k-1}] h^k`.
pub fn lagrange_product_matrix(
    ctx: &Context,
    f: &Series,
    n: usize,
    cfg: &ReversionConfig,
) -> Result<DenseMatrix> {
    let h = lagrange_base(ctx, f, n)?;
    let m = cfg.baby_steps(n)?;
    let field = f.field();
    let len = n - 1;

    let pows = baby_powers(ctx, &h, m, len)?;
    // only rows whose entries C_{(r-1)m+1..rm} are read
    let rows = (n - 1).div_ceil(m);
    let mut giants = Vec::with_capacity(rows);
    giants.push(Series::one(field, len));
    if rows > 1 {
        giants.push(pows[m - 1].clone());
    }
    while giants.len() < rows {
        let next = mul_trunc(ctx, giants.last().unwrap(), &pows[m - 1], len)?;
        giants.push(next);
    }

    let a = assemble_giant_matrix(&giants, m, n)?;
    let b = assemble_baby_matrix(&pows, m, n)?;
    ctx.counter
        .time_matrix(|| matrix::mul_transposed(ctx, cfg.matrix_strategy, &a, &b, m))
}

/// Fast Lagrange inversion with all inner products packed into `C = A B^T`.
pub fn revert_fast_lagrange_matrix(
    ctx: &Context,
    f: &Series,
    n: usize,
    cfg: &ReversionConfig,
) -> Result<Series> {
    let c = lagrange_product_matrix(ctx, f, n, cfg)?;
    let field = f.field();
    let inv = index_inverses(&field, n)?;
    let mut out = vec![0u64; n];
    for k in 1..n {
        out[k] = field.mul(inv[k], c.data()[k - 1]);
    }
    Ok(Series::from_canonical(field, out))
}

/// `f(g(x)) mod x^n` by Brent-Kung baby-step giant-step composition.
///
/// With `m = ceil(sqrt(n))`, the coefficients of `f` are cut into chunks of
/// `m`; one matrix product evaluates every chunk at `g` using `g^0..g^{m-1}`,
/// and Horner's rule in `g^m` combines the chunks.
pub fn compose_bk21(
    ctx: &Context,
    f: &Series,
    g: &Series,
    n: usize,
    cfg: &ReversionConfig,
) -> Result<Series> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch);
    }
    if g.coeff(0) != 0 {
        return Err(Error::NonzeroConstantTerm);
    }
    if n == 0 {
        return Err(Error::bad_input("truncation length must be at least 1"));
    }
    let field = f.field();
    let m = ceil_sqrt(n).max(1);
    let flen = f.len().min(n);
    let chunks = flen.div_ceil(m);

    let g = g.resized(n);
    let mut pows = Vec::with_capacity(m + 1);
    pows.push(Series::one(field, n));
    pows.push(g.clone());
    for _ in 2..=m {
        let next = mul_trunc(ctx, pows.last().unwrap(), &g, n)?;
        pows.push(next);
    }

    let fmat = DenseMatrix::from_fn(field, chunks, m, |c, j| f.coeff(c * m + j));
    let gmat = DenseMatrix::from_fn(field, m, n, |j, k| pows[j].coeff(k));
    let chunk_vals = ctx.counter.time_matrix(|| match cfg.matrix_strategy {
        MatrixStrategy::Strassen => matrix::mat_mul_strassen(ctx, &fmat, &gmat),
        _ => matrix::mat_mul_classical(ctx, &fmat, &gmat),
    })?;

    let chunk = |c: usize| Series::from_canonical(field, chunk_vals.row(c).to_vec());
    let gm = &pows[m];
    let mut acc = chunk(chunks - 1);
    for c in (0..chunks - 1).rev() {
        acc = mul_trunc(ctx, &acc, gm, n)?.add(&chunk(c))?;
    }
    Ok(acc)
}

/// Newton iteration `g <- g - (f(g) - x) / f'(g)` with Brent-Kung composition.
///
/// Lengths run `2, ..., ceil(n/4), ceil(n/2), n`. The derivative `f'(g)` is
/// recovered from the composition by the chain rule, `f'(g) = (f o g)' / g'`,
/// so each step costs one composition, one reciprocal and two products.
pub fn revert_newton_bk21(ctx: &Context, f: &Series, n: usize, cfg: &ReversionConfig) -> Result<Series> {
    validate(f, n)?;
    let field = f.field();
    let a1_inv = field.inv(f.coeff(1))?;
    let mut g = Series::from_canonical(field, vec![0, a1_inv]);

    let mut schedule = Vec::new();
    let mut len = n;
    while len > 2 {
        schedule.push(len);
        len = len.div_ceil(2);
    }

    for &len in schedule.iter().rev() {
        let g_ext = g.resized(len);
        let fg = compose_bk21(ctx, &f.resized(len), &g_ext, len, cfg)?;
        let residual = fg.sub(&Series::x(field, len))?;
        // g'/(f o g)' = 1/f'(g); exact below x^{len-1}, which suffices
        // because the residual vanishes at x^0
        let dfg_inv = reciprocal(ctx, &derivative(&fg), len - 1)?;
        let w = mul_trunc(ctx, &derivative(&g_ext), &dfg_inv, len)?;
        let step = mul_trunc(ctx, &residual, &w, len)?;
        g = g_ext.sub(&step)?;
    }
    Ok(g.resized(n))
}

/// Round-trip check: both `f(g)` and `g(f)` equal `x` modulo `x^n`.
pub fn check_inverse(ctx: &Context, f: &Series, g: &Series, n: usize) -> Result<(bool, bool)> {
    let x = Series::x(f.field(), n);
    let fg = series::compose_horner(ctx, &f.resized(n), g, n)?;
    let gf = series::compose_horner(ctx, &g.resized(n), f, n)?;
    Ok((fg == x, gf == x))
}

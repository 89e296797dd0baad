//! Dense matrices over a prime field and the products used by the
//! reversion and composition algorithms.

use crate::error::{Error, Result};
use crate::instrument::Context;
use crate::ring::{DotAcc, PrimeField};

/// Row-major `rows x cols` matrix of canonical residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major data, reducing entries mod p.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, mut data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for x in data.iter_mut() {
            *x = field.reduce(*x);
        }
        Ok(Self { field, rows, cols, data })
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut entry: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(field.reduce(entry(i, j)));
            }
        }
        Self { field, rows, cols, data }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.field.reduce(v);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }
}

/// Which kernel computes the Algorithm-2 style product `A * B^T`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MatrixStrategy {
    Classical,
    #[default]
    Structured,
    Strassen,
}

impl std::str::FromStr for MatrixStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Self::Classical),
            "structured" => Ok(Self::Structured),
            "strassen" => Ok(Self::Strassen),
            other => Err(Error::bad_input(format!("unknown matrix strategy '{other}'"))),
        }
    }
}

fn check_same_field(a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// `a * bt` by the triple loop; `a.cols` must equal `bt.rows`.
pub fn mat_mul_classical(ctx: &Context, a: &DenseMatrix, bt: &DenseMatrix) -> Result<DenseMatrix> {
    check_same_field(a, bt)?;
    if a.cols != bt.rows {
        return Err(Error::dims(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, bt.rows, bt.cols
        )));
    }
    let cols = bt.transpose();
    let f = a.field;
    let c = DenseMatrix::from_fn(f, a.rows, bt.cols, |i, j| {
        f.dot(a.row(i).iter().copied().zip(cols.row(j).iter().copied()))
    });
    ctx.counter
        .record_scalar_muls((a.rows * a.cols * bt.cols) as u64);
    Ok(c)
}

/// `a * b^T` for `m x m^2` operands carrying the giant-step zero pattern.
///
/// Block `k` (columns `k*m .. (k+1)*m`, 0-indexed) of `a` is zero in rows
/// `0..k`, so row `i` of the product only touches blocks `0..=i`. Inputs
/// without that pattern give a wrong answer; debug builds check it.
pub fn mat_mul_structured(
    ctx: &Context,
    a: &DenseMatrix,
    b: &DenseMatrix,
    m: usize,
) -> Result<DenseMatrix> {
    check_same_field(a, b)?;
    for (name, x) in [("A", a), ("B", b)] {
        if x.rows != m || x.cols != m * m {
            return Err(Error::dims(format!(
                "{name} is {}x{}, expected {m}x{}",
                x.rows,
                x.cols,
                m * m
            )));
        }
    }
    debug_assert!((0..m).all(|i| a.row(i)[(i + 1) * m..].iter().all(|&v| v == 0)));
    let f = a.field;
    let mut c = DenseMatrix::zeros(f, m, m);
    let mut muls = 0u64;
    for i in 0..m {
        let width = (i + 1) * m;
        let arow = &a.row(i)[..width];
        for l in 0..m {
            let brow = &b.row(l)[..width];
            let mut acc = DotAcc::default();
            for block in 0..=i {
                let cols = block * m..(block + 1) * m;
                for (&x, &y) in arow[cols.clone()].iter().zip(&brow[cols]) {
                    acc.add_prod(x, y);
                }
            }
            c.data[i * m + l] = acc.finish(&f);
        }
        muls += (width * m) as u64;
    }
    ctx.counter.record_scalar_muls(muls);
    Ok(c)
}

/// `a * bt` tiled into square blocks that are multiplied by Strassen's
/// recursion once they reach `ctx.strassen_threshold`.
pub fn mat_mul_strassen(ctx: &Context, a: &DenseMatrix, bt: &DenseMatrix) -> Result<DenseMatrix> {
    check_same_field(a, bt)?;
    if a.cols != bt.rows {
        return Err(Error::dims(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, bt.rows, bt.cols
        )));
    }
    let tile = a.rows.min(a.cols).min(bt.cols);
    let threshold = ctx.strassen_threshold.max(2);
    if tile < threshold {
        return mat_mul_classical(ctx, a, bt);
    }
    let f = a.field;
    let mut c = DenseMatrix::zeros(f, a.rows, bt.cols);
    let extract = |x: &DenseMatrix, r0: usize, c0: usize| -> Vec<u64> {
        let mut out = vec![0u64; tile * tile];
        for i in 0..tile.min(x.rows - r0) {
            for j in 0..tile.min(x.cols - c0) {
                out[i * tile + j] = x.get(r0 + i, c0 + j);
            }
        }
        out
    };
    for r0 in (0..a.rows).step_by(tile) {
        for c0 in (0..bt.cols).step_by(tile) {
            let mut acc = vec![0u64; tile * tile];
            for k0 in (0..a.cols).step_by(tile) {
                let prod = strassen_square(
                    ctx,
                    &f,
                    &extract(a, r0, k0),
                    &extract(bt, k0, c0),
                    tile,
                    threshold,
                );
                for (x, y) in acc.iter_mut().zip(prod) {
                    *x = f.add(*x, y);
                }
            }
            for i in 0..tile.min(a.rows - r0) {
                for j in 0..tile.min(bt.cols - c0) {
                    c.data[(r0 + i) * bt.cols + c0 + j] = acc[i * tile + j];
                }
            }
        }
    }
    Ok(c)
}

fn classical_square(ctx: &Context, f: &PrimeField, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = f.dot((0..n).map(|k| (a[i * n + k], b[k * n + j])));
        }
    }
    ctx.counter.record_scalar_muls((n * n * n) as u64);
    out
}

fn strassen_square(
    ctx: &Context,
    f: &PrimeField,
    a: &[u64],
    b: &[u64],
    n: usize,
    threshold: usize,
) -> Vec<u64> {
    if n < threshold {
        return classical_square(ctx, f, a, b, n);
    }
    let h = n.div_ceil(2);
    let quad = |x: &[u64], qi: usize, qj: usize| -> Vec<u64> {
        let mut out = vec![0u64; h * h];
        for i in 0..h {
            let r = qi * h + i;
            if r >= n {
                break;
            }
            for j in 0..h {
                let c = qj * h + j;
                if c < n {
                    out[i * h + j] = x[r * n + c];
                }
            }
        }
        out
    };
    let add = |x: &[u64], y: &[u64]| -> Vec<u64> { x.iter().zip(y).map(|(&p, &q)| f.add(p, q)).collect() };
    let sub = |x: &[u64], y: &[u64]| -> Vec<u64> { x.iter().zip(y).map(|(&p, &q)| f.sub(p, q)).collect() };
    let (a11, a12, a21, a22) = (quad(a, 0, 0), quad(a, 0, 1), quad(a, 1, 0), quad(a, 1, 1));
    let (b11, b12, b21, b22) = (quad(b, 0, 0), quad(b, 0, 1), quad(b, 1, 0), quad(b, 1, 1));
    let rec = |x: &[u64], y: &[u64]| strassen_square(ctx, f, x, y, h, threshold);

    let m1 = rec(&add(&a11, &a22), &add(&b11, &b22));
    let m2 = rec(&add(&a21, &a22), &b11);
    let m3 = rec(&a11, &sub(&b12, &b22));
    let m4 = rec(&a22, &sub(&b21, &b11));
    let m5 = rec(&add(&a11, &a12), &b22);
    let m6 = rec(&sub(&a21, &a11), &add(&b11, &b12));
    let m7 = rec(&sub(&a12, &a22), &add(&b21, &b22));

    let c11 = add(&sub(&add(&m1, &m4), &m5), &m7);
    let c12 = add(&m3, &m5);
    let c21 = add(&m2, &m4);
    let c22 = add(&add(&sub(&m1, &m2), &m3), &m6);

    let mut out = vec![0u64; n * n];
    for (q, (qi, qj)) in [(&c11, (0, 0)), (&c12, (0, 1)), (&c21, (1, 0)), (&c22, (1, 1))] {
        for i in 0..h {
            let r = qi * h + i;
            if r >= n {
                break;
            }
            for j in 0..h {
                let c = qj * h + j;
                if c < n {
                    out[r * n + c] = q[i * h + j];
                }
            }
        }
    }
    out
}

/// Computes `a * b^T` with the chosen kernel.
pub fn mul_transposed(
    ctx: &Context,
    strategy: MatrixStrategy,
    a: &DenseMatrix,
    b: &DenseMatrix,
    m: usize,
) -> Result<DenseMatrix> {
    match strategy {
        MatrixStrategy::Classical => mat_mul_classical(ctx, a, &b.transpose()),
        MatrixStrategy::Structured => mat_mul_structured(ctx, a, b, m),
        MatrixStrategy::Strassen => mat_mul_strassen(ctx, a, &b.transpose()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn naive(a: &DenseMatrix, bt: &DenseMatrix) -> DenseMatrix {
        let f = a.field();
        let mut c = DenseMatrix::zeros(f, a.rows(), bt.cols());
        for i in 0..a.rows() {
            for j in 0..bt.cols() {
                let mut s = 0;
                for k in 0..a.cols() {
                    s = f.add(s, f.mul(a.get(i, k), bt.get(k, j)));
                }
                c.set(i, j, s);
            }
        }
        c
    }

    fn lcg_matrix(f: PrimeField, rows: usize, cols: usize, seed: u64) -> DenseMatrix {
        let mut state = seed;
        DenseMatrix::from_fn(f, rows, cols, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 1
        })
    }

    #[test]
    fn identity_and_zero() {
        let f = gf(101);
        let ctx = Context::default();
        let m = lcg_matrix(f, 3, 3, 1);
        let id = DenseMatrix::identity(f, 3);
        assert_eq!(mat_mul_classical(&ctx, &id, &m).unwrap(), m);
        let z = DenseMatrix::zeros(f, 3, 3);
        assert_eq!(mat_mul_classical(&ctx, &z, &m).unwrap(), z);
    }

    #[test]
    fn rectangular_matches_triple_loop() {
        let f = gf((1 << 63) + 29);
        let ctx = Context::instrumented();
        let a = lcg_matrix(f, 2, 3, 7);
        let b = lcg_matrix(f, 3, 2, 8);
        assert_eq!(mat_mul_classical(&ctx, &a, &b).unwrap(), naive(&a, &b));
        assert_eq!(ctx.counter.scalar_mul_count(), 12);
    }

    #[test]
    fn dimension_mismatch() {
        let f = gf(101);
        let ctx = Context::default();
        let a = DenseMatrix::zeros(f, 2, 3);
        assert!(matches!(
            mat_mul_classical(&ctx, &a, &a),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            mat_mul_structured(&ctx, &a, &a, 2),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(DenseMatrix::from_vec(f, 2, 2, vec![1, 2, 3]).is_err());
    }

    #[test]
    fn structured_degenerate_scalar() {
        let f = gf(101);
        let ctx = Context::default();
        let a = DenseMatrix::from_vec(f, 1, 1, vec![7]).unwrap();
        let b = DenseMatrix::from_vec(f, 1, 1, vec![9]).unwrap();
        assert_eq!(mat_mul_structured(&ctx, &a, &b, 1).unwrap().get(0, 0), 63);
    }

    #[test]
    fn strassen_matches_classical() {
        let f = gf(1_000_000_007);
        for (rows, inner, cols) in [(4, 4, 4), (5, 7, 6), (9, 27, 9), (8, 8, 20)] {
            let a = lcg_matrix(f, rows, inner, rows as u64);
            let b = lcg_matrix(f, inner, cols, cols as u64 + 3);
            let ctx = Context { strassen_threshold: 2, ..Context::default() };
            assert_eq!(mat_mul_strassen(&ctx, &a, &b).unwrap(), naive(&a, &b));
        }
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("strassen".parse::<MatrixStrategy>().unwrap(), MatrixStrategy::Strassen);
        assert!("winograd".parse::<MatrixStrategy>().is_err());
    }
}

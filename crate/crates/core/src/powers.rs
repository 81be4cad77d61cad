//! Fixed-width matrix power kernel for small integer matrices.
//!
//! Entries of `A^k` are bounded by `R^k` where `R` is the largest absolute row sum of `A`,
//! and any trace or entry of `A^k` by `m·R^k`. When that bound fits the machine type the
//! kernel uses wrapping arithmetic, which then never actually wraps. Traces only need
//! powers up to `⌈k/2⌉`: `Tr(A^k) = Σ_{i,l} (A^s)_{il} (A^t)_{li}` with `s + t = k`.

use num_traits::{WrappingAdd, WrappingMul, WrappingNeg, WrappingSub, Zero};

use crate::graph::DenseMatrix;

const I64_LIMIT: f64 = 4.0e18;
const I128_LIMIT: f64 = 8.0e37;

pub(crate) const I64_SAFE: f64 = I64_LIMIT;
pub(crate) const I128_SAFE: f64 = I128_LIMIT;

/// Machine integer used with wrapping arithmetic once a result bound is known to fit.
pub(crate) trait Lane:
    Copy + Zero + WrappingAdd + WrappingSub + WrappingMul + WrappingNeg + From<i64> + Into<i128>
{
    /// Reduction modulo the lane width.
    fn wrap(x: i128) -> Self;
}
impl Lane for i64 {
    fn wrap(x: i128) -> Self {
        x as i64
    }
}
impl Lane for i128 {
    fn wrap(x: i128) -> Self {
        x
    }
}

/// What the kernel reads at each power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Read {
    Trace,
    Entry(usize, usize),
}

/// Reusable buffers; one per accumulator.
#[derive(Debug, Clone, Default)]
pub(crate) struct PowerKernel {
    a: Vec<i64>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    narrow: Vec<i64>,
    wide: Vec<i128>,
    out: Vec<i128>,
}

impl PowerKernel {
    /// Values for `k = k_lo..=k_hi`, or `None` when the magnitude bound exceeds `i128`.
    /// `dense` must hold integer values.
    pub(crate) fn run(
        &mut self,
        dense: &DenseMatrix<f64>,
        k_lo: usize,
        k_hi: usize,
        read: Read,
    ) -> Option<&[i128]> {
        let m = dense.dim();
        self.a.clear();
        self.a.extend(dense.as_slice().iter().map(|&x| x as i64));
        self.row_ptr.clear();
        self.cols.clear();
        let mut r = 1.0f64;
        for i in 0..m {
            self.row_ptr.push(self.cols.len());
            let row = &self.a[i * m..(i + 1) * m];
            let mut s = 0.0;
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    self.cols.push(j);
                    s += (x as f64).abs();
                }
            }
            r = r.max(s);
        }
        self.row_ptr.push(self.cols.len());
        let bound = m as f64 * r.powi(k_hi as i32);

        self.out.clear();
        if bound < I64_LIMIT {
            let mut buf = std::mem::take(&mut self.narrow);
            self.compute(&mut buf, m, k_lo, k_hi, read);
            self.narrow = buf;
        } else if bound < I128_LIMIT {
            let mut buf = std::mem::take(&mut self.wide);
            self.compute(&mut buf, m, k_lo, k_hi, read);
            self.wide = buf;
        } else {
            return None;
        }
        Some(&self.out)
    }

    fn compute<T: Lane>(
        &mut self,
        buf: &mut Vec<T>,
        m: usize,
        k_lo: usize,
        k_hi: usize,
        read: Read,
    ) {
        match read {
            Read::Trace => self.traces(buf, m, k_lo, k_hi),
            Read::Entry(p, q) => self.entries(buf, m, p, q, k_lo, k_hi),
        }
    }

    /// Row `p` of `A^k` by repeated vector-matrix products.
    fn entries<T: Lane>(
        &mut self,
        buf: &mut Vec<T>,
        m: usize,
        p: usize,
        q: usize,
        k_lo: usize,
        k_hi: usize,
    ) {
        buf.clear();
        buf.resize(2 * m, T::zero());
        let (cur, next) = buf.split_at_mut(m);
        for j in 0..m {
            cur[j] = T::from(self.a[p * m + j]);
        }
        for k in 1..=k_hi {
            if k > 1 {
                next.iter_mut().for_each(|x| *x = T::zero());
                for (l, &x) in cur.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for &j in &self.cols[self.row_ptr[l]..self.row_ptr[l + 1]] {
                        let y = T::from(self.a[l * m + j]);
                        next[j] = next[j].wrapping_add(&x.wrapping_mul(&y));
                    }
                }
                cur.copy_from_slice(next);
            }
            if k >= k_lo {
                self.out.push(cur[q].into());
            }
        }
    }

    /// `Tr(A^k)` from stored powers `A^0..A^h`, `h = ⌈k_hi/2⌉`.
    fn traces<T: Lane>(&mut self, buf: &mut Vec<T>, m: usize, k_lo: usize, k_hi: usize) {
        let h = k_hi.div_ceil(2);
        let mm = m * m;
        buf.clear();
        buf.resize((h + 1) * mm, T::zero());
        for i in 0..m {
            buf[i * m + i] = T::from(1);
        }
        for (x, &v) in buf[mm..2 * mm].iter_mut().zip(&self.a) {
            *x = T::from(v);
        }
        for r in 2..=h {
            let (done, rest) = buf.split_at_mut(r * mm);
            let prev = &done[(r - 1) * mm..];
            let cur = &mut rest[..mm];
            for i in 0..m {
                let row = &mut cur[i * m..(i + 1) * m];
                for l in 0..m {
                    let x = prev[i * m + l];
                    if x.is_zero() {
                        continue;
                    }
                    for &j in &self.cols[self.row_ptr[l]..self.row_ptr[l + 1]] {
                        let y = T::from(self.a[l * m + j]);
                        row[j] = row[j].wrapping_add(&x.wrapping_mul(&y));
                    }
                }
            }
        }
        for k in k_lo..=k_hi {
            let s = k / 2;
            let t = k - s;
            let ps = &buf[s * mm..(s + 1) * mm];
            let pt = &buf[t * mm..(t + 1) * mm];
            let mut acc = T::zero();
            for i in 0..m {
                for l in 0..m {
                    let x = ps[i * m + l];
                    if !x.is_zero() {
                        acc = acc.wrapping_add(&x.wrapping_mul(&pt[l * m + i]));
                    }
                }
            }
            self.out.push(acc.into());
        }
    }
}

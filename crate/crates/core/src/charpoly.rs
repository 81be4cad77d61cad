//! Characteristic polynomials of integer matrices grown one row and column at a time, and
//! power traces recovered from them.
//!
//! Coefficients are stored as `χ_0 = 1, χ_1, …, χ_m` with
//! `det(xI - A) = Σ_i χ_i x^(m-i)`. For the bordered matrix `A' = [[A, r], [cᵀ, a]]`,
//!
//! ```text
//!     det(xI - A') = (x - a)·det(xI - A) - cᵀ adj(xI - A) r
//! ```
//!
//! and the coefficient of `x^(m-1-k)` in `cᵀ adj(xI - A) r` is `Σ_{i<=k} χ_i · cᵀA^(k-i)r`.
//! All arithmetic is checked; `None` means an `i128` overflow.

use crate::graph::DenseMatrix;
use crate::powers::{Lane, I128_SAFE, I64_SAFE};

/// Scratch space for [`border`].
#[derive(Debug, Clone, Default)]
pub(crate) struct BorderScratch {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<i64>,
    v64: Vec<i64>,
    next64: Vec<i64>,
    v128: Vec<i128>,
    next128: Vec<i128>,
    w64: Vec<i64>,
    w128: Vec<i128>,
    powers64: Vec<i64>,
    powers128: Vec<i128>,
}

/// Largest absolute row sum, at least 1.
pub(crate) fn max_row_sum(a: &DenseMatrix<f64>) -> f64 {
    (0..a.dim())
        .map(|i| a.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(1.0, f64::max)
}

/// Characteristic polynomial of `[[A, r], [cᵀ, a]]` from that of `A` (`chi`, length
/// `m + 1`). `r[i] = A'[i][m]`, `c[i] = A'[m][i]`. Writes `m + 2` coefficients into `out`.
///
/// Every coefficient is a signed sum of `C(m+1, j)` principal minors, each bounded by
/// `R^j` for the largest absolute row sum `R`; when `(1 + R)^(m+1)` fits a machine word
/// the update runs in wrapping arithmetic of that width. `symmetric` promises `A = Aᵀ` and
/// `r = c`, which halves the number of matrix-vector products.
#[allow(clippy::too_many_arguments)]
pub(crate) fn border(
    chi: &[i128],
    a_mat: &DenseMatrix<f64>,
    r: &[i64],
    c: &[i64],
    a: i64,
    symmetric: bool,
    scratch: &mut BorderScratch,
    out: &mut Vec<i128>,
) -> Option<()> {
    let m = a_mat.dim();
    debug_assert_eq!(chi.len(), m + 1);
    scratch.row_ptr.clear();
    scratch.cols.clear();
    scratch.vals.clear();
    let mut big =
        (c.iter().map(|x| x.unsigned_abs() as f64).sum::<f64>() + a.unsigned_abs() as f64).max(1.0);
    for i in 0..m {
        scratch.row_ptr.push(scratch.cols.len());
        let mut s = r[i].unsigned_abs() as f64;
        for (j, &y) in a_mat.row(i).iter().enumerate() {
            if y != 0.0 {
                scratch.cols.push(j);
                scratch.vals.push(y as i64);
                s += y.abs();
            }
        }
        big = big.max(s);
    }
    scratch.row_ptr.push(scratch.cols.len());
    let bound = (1.0 + big).powi(m as i32 + 1);

    out.clear();
    if bound < I64_SAFE {
        let (mut v, mut next, mut w) = (
            std::mem::take(&mut scratch.v64),
            std::mem::take(&mut scratch.next64),
            std::mem::take(&mut scratch.w64),
        );
        if symmetric {
            let mut powers = std::mem::take(&mut scratch.powers64);
            symmetric_moments(r, scratch, &mut powers, &mut w);
            scratch.powers64 = powers;
        } else {
            moments(r, c, scratch, &mut v, &mut next, &mut w);
        }
        update(chi, a, &w, out);
        (scratch.v64, scratch.next64, scratch.w64) = (v, next, w);
        Some(())
    } else if bound < I128_SAFE {
        let (mut v, mut next, mut w) = (
            std::mem::take(&mut scratch.v128),
            std::mem::take(&mut scratch.next128),
            std::mem::take(&mut scratch.w128),
        );
        if symmetric {
            let mut powers = std::mem::take(&mut scratch.powers128);
            symmetric_moments(r, scratch, &mut powers, &mut w);
            scratch.powers128 = powers;
        } else {
            moments(r, c, scratch, &mut v, &mut next, &mut w);
        }
        update(chi, a, &w, out);
        (scratch.v128, scratch.next128, scratch.w128) = (v, next, w);
        Some(())
    } else {
        border_checked(chi, scratch, r, c, a, out)
    }
}

/// `w_j = cᵀ A^j r` for `j < m`.
fn moments<T: Lane>(
    r: &[i64],
    c: &[i64],
    sp: &BorderScratch,
    v: &mut Vec<T>,
    next: &mut Vec<T>,
    w: &mut Vec<T>,
) {
    let m = r.len();
    w.clear();
    v.clear();
    v.extend(r.iter().map(|&x| T::from(x)));
    next.clear();
    next.resize(m, T::zero());
    for j in 0..m {
        if j > 0 {
            sparse_apply(sp, v, next);
            std::mem::swap(v, next);
        }
        let mut s = T::zero();
        for (l, &x) in c.iter().enumerate() {
            if x != 0 {
                s = s.wrapping_add(&T::from(x).wrapping_mul(&v[l]));
            }
        }
        w.push(s);
    }
}

/// `w_j = rᵀ A^j r = (A^s r)·(A^t r)` with `s + t = j`, for symmetric `A`.
fn symmetric_moments<T: Lane>(r: &[i64], sp: &BorderScratch, powers: &mut Vec<T>, w: &mut Vec<T>) {
    let m = r.len();
    w.clear();
    if m == 0 {
        return;
    }
    let h = m / 2;
    powers.clear();
    powers.resize((h + 1) * m, T::zero());
    for (x, &y) in powers.iter_mut().zip(r) {
        *x = T::from(y);
    }
    for t in 1..=h {
        let (done, rest) = powers.split_at_mut(t * m);
        sparse_apply(sp, &done[(t - 1) * m..], &mut rest[..m]);
    }
    for j in 0..m {
        let (s, t) = (j / 2, j - j / 2);
        let (vs, vt) = (&powers[s * m..(s + 1) * m], &powers[t * m..(t + 1) * m]);
        let mut acc = T::zero();
        for (x, y) in vs.iter().zip(vt) {
            acc = acc.wrapping_add(&x.wrapping_mul(y));
        }
        w.push(acc);
    }
}

fn sparse_apply<T: Lane>(sp: &BorderScratch, v: &[T], out: &mut [T]) {
    for (i, slot) in out.iter_mut().enumerate() {
        let mut s = T::zero();
        for t in sp.row_ptr[i]..sp.row_ptr[i + 1] {
            s = s.wrapping_add(&T::from(sp.vals[t]).wrapping_mul(&v[sp.cols[t]]));
        }
        *slot = s;
    }
}

/// Coefficients of the bordered polynomial from `chi`, the corner `a` and the moments `w`.
fn update<T: Lane>(chi: &[i128], a: i64, w: &[T], out: &mut Vec<i128>) {
    let m = chi.len() - 1;
    out.push(1);
    let a = T::from(a);
    for j in 1..=m + 1 {
        let own = if j <= m { T::wrap(chi[j]) } else { T::zero() };
        let mut x = own.wrapping_sub(&a.wrapping_mul(&T::wrap(chi[j - 1])));
        if j >= 2 {
            let k = j - 2;
            for i in 0..=k {
                x = x.wrapping_sub(&T::wrap(chi[i]).wrapping_mul(&w[k - i]));
            }
        }
        out.push(x.into());
    }
}

fn border_checked(
    chi: &[i128],
    sp: &mut BorderScratch,
    r: &[i64],
    c: &[i64],
    a: i64,
    out: &mut Vec<i128>,
) -> Option<()> {
    let m = chi.len() - 1;
    let BorderScratch {
        row_ptr,
        cols,
        vals,
        v128: v,
        next128: next,
        w128: w,
        ..
    } = sp;
    w.clear();
    v.clear();
    v.extend(r.iter().map(|&x| i128::from(x)));
    next.clear();
    next.resize(m, 0);
    for j in 0..m {
        if j > 0 {
            for (i, slot) in next.iter_mut().enumerate() {
                let mut s: i128 = 0;
                for t in row_ptr[i]..row_ptr[i + 1] {
                    s = s.checked_add(i128::from(vals[t]).checked_mul(v[cols[t]])?)?;
                }
                *slot = s;
            }
            std::mem::swap(v, next);
        }
        let mut s: i128 = 0;
        for (l, &x) in c.iter().enumerate() {
            if x != 0 {
                s = s.checked_add(i128::from(x).checked_mul(v[l])?)?;
            }
        }
        w.push(s);
    }

    let a = i128::from(a);
    out.push(1);
    for j in 1..=m + 1 {
        let own = if j <= m { chi[j] } else { 0 };
        let mut x = own.checked_sub(a.checked_mul(chi[j - 1])?)?;
        if j >= 2 {
            let k = j - 2;
            for i in 0..=k {
                x = x.checked_sub(chi[i].checked_mul(w[k - i])?)?;
            }
        }
        out.push(x);
    }
    Some(())
}

/// `Tr(A^k)` for `k = 1..=k_max` by Newton's identities, written to `out[k - 1]`.
/// `row_sum` bounds the absolute row sums of `A`; every trace is then at most
/// `m·row_sum^k` and the recurrence runs in the narrowest word that holds that.
pub(crate) fn power_traces(
    chi: &[i128],
    k_max: usize,
    row_sum: f64,
    out: &mut Vec<i128>,
) -> Option<()> {
    let m = chi.len() - 1;
    let bound = m as f64 * row_sum.max(1.0).powi(k_max as i32);
    out.clear();
    if bound < I64_SAFE {
        newton_wrapping::<i64>(chi, k_max, out);
        Some(())
    } else if bound < I128_SAFE {
        newton_wrapping::<i128>(chi, k_max, out);
        Some(())
    } else {
        newton_checked(chi, k_max, out)
    }
}

fn newton_wrapping<T: Lane>(chi: &[i128], k_max: usize, out: &mut Vec<i128>) {
    let m = chi.len() - 1;
    for k in 1..=k_max {
        let mut s = if k <= m {
            T::from(k as i64).wrapping_mul(&T::wrap(chi[k]))
        } else {
            T::zero()
        };
        for i in 1..=m.min(k - 1) {
            s = s.wrapping_add(&T::wrap(chi[i]).wrapping_mul(&T::wrap(out[k - i - 1])));
        }
        out.push(s.wrapping_neg().into());
    }
}

fn newton_checked(chi: &[i128], k_max: usize, out: &mut Vec<i128>) -> Option<()> {
    let m = chi.len() - 1;
    for k in 1..=k_max {
        let mut s: i128 = if k <= m {
            (k as i128).checked_mul(chi[k])?
        } else {
            0
        };
        for i in 1..=m.min(k - 1) {
            s = s.checked_add(chi[i].checked_mul(out[k - i - 1])?)?;
        }
        out.push(s.checked_neg()?);
    }
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::trace_powers;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn grow(a: &DenseMatrix<f64>) -> Vec<i128> {
        try_grow(a, false).unwrap()
    }

    /// Builds the polynomial of a full matrix by bordering from the 1×1 leading block.
    fn try_grow(a: &DenseMatrix<f64>, symmetric: bool) -> Option<Vec<i128>> {
        let n = a.dim();
        let mut chi = vec![1, -(*a.get(0, 0) as i128)];
        let mut scratch = BorderScratch::default();
        for m in 1..n {
            let lead =
                DenseMatrix::from_rows(m, (0..m * m).map(|x| *a.get(x / m, x % m)).collect());
            let r: Vec<i64> = (0..m).map(|i| *a.get(i, m) as i64).collect();
            let c: Vec<i64> = (0..m).map(|i| *a.get(m, i) as i64).collect();
            let mut out = Vec::new();
            border(
                &chi,
                &lead,
                &r,
                &c,
                *a.get(m, m) as i64,
                symmetric,
                &mut scratch,
                &mut out,
            )?;
            chi = out;
        }
        Some(chi)
    }

    #[test]
    fn triangle() {
        let a = DenseMatrix::from_rows(3, vec![0., 1., 1., 1., 0., 1., 1., 1., 0.]);
        let chi = grow(&a);
        assert_eq!(chi, vec![1, 0, -3, -2]);
        let mut t = Vec::new();
        power_traces(&chi, 5, max_row_sum(&a), &mut t).unwrap();
        assert_eq!(t, vec![0, 6, 6, 18, 30]);
    }

    #[test]
    fn self_loop_and_arc() {
        // [[1, 1], [0, 0]]: eigenvalues 1 and 0
        let a = DenseMatrix::from_rows(2, vec![1., 1., 0., 0.]);
        let chi = grow(&a);
        assert_eq!(chi, vec![1, -1, 0]);
        let mut t = Vec::new();
        power_traces(&chi, 4, max_row_sum(&a), &mut t).unwrap();
        assert_eq!(t, vec![1, 1, 1, 1]);
    }

    proptest! {
        #[test]
        fn traces_match_matrix_powers(
            m in 1usize..8,
            seed in proptest::collection::vec(-2i64..=2, 64),
            k_max in 1usize..12,
        ) {
            let data: Vec<f64> = seed[..m * m].iter().map(|&x| x as f64).collect();
            let a = DenseMatrix::from_rows(m, data);
            let mut t = Vec::new();
            power_traces(&grow(&a), k_max, max_row_sum(&a), &mut t).unwrap();
            let expected = trace_powers(&a.map(|&x| x as i64), k_max);
            let got: Vec<BigInt> = t.into_iter().map(BigInt::from).collect();
            prop_assert_eq!(got, expected);
        }

        #[test]
        fn symmetric_shortcut_agrees(
            m in 1usize..9,
            seed in proptest::collection::vec(-3i64..=3, 81),
        ) {
            let data: Vec<f64> = (0..m * m)
                .map(|x| {
                    let (i, j) = (x / m, x % m);
                    seed[i.min(j) * 9 + i.max(j)] as f64
                })
                .collect();
            let a = DenseMatrix::from_rows(m, data);
            prop_assert_eq!(try_grow(&a, true), try_grow(&a, false));
        }

        #[test]
        fn wide_entries_are_exact_or_declined(
            m in 1usize..5,
            seed in proptest::collection::vec(-1_000_000_000i64..=1_000_000_000, 16),
            k_max in 1usize..6,
        ) {
            let data: Vec<f64> = seed[..m * m].iter().map(|&x| x as f64).collect();
            let a = DenseMatrix::from_rows(m, data);
            let Some(chi) = try_grow(&a, false) else { return Ok(()) };
            let mut t = Vec::new();
            if power_traces(&chi, k_max, max_row_sum(&a), &mut t).is_some() {
                let expected = trace_powers(&a.map(|&x| x as i64), k_max);
                let got: Vec<BigInt> = t.into_iter().map(BigInt::from).collect();
                prop_assert_eq!(got, expected);
            }
        }
    }
}

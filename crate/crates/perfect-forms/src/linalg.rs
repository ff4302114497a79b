//! Exact dense linear algebra over `Q` and over `F = Q(ω_D)`.
//!
//! Following the context-object pattern: every routine takes a field context
//! implementing [`FieldCtx`] so the same elimination code serves rational
//! and quadratic-field matrices. All pivoting decisions compare against
//! exact zero; there is no tolerance anywhere.

use alloc::{vec, vec::Vec};
use core::fmt::Debug;

use num_traits::{One, Zero};

use crate::field::{Disc, QuadElem, Rat};

pub trait FieldCtx {
    type El: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, x: &Self::El, y: &Self::El) -> Self::El;
    fn sub(&self, x: &Self::El, y: &Self::El) -> Self::El;
    fn mul(&self, x: &Self::El, y: &Self::El) -> Self::El;
    fn neg(&self, x: &Self::El) -> Self::El;
    /// `None` exactly on zero.
    fn inv(&self, x: &Self::El) -> Option<Self::El>;
    fn is_zero(&self, x: &Self::El) -> bool;
}

/// The rational field `Q`.
#[derive(Clone, Copy, Debug, Default)]
pub struct QField;

impl FieldCtx for QField {
    type El = Rat;
    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn add(&self, x: &Rat, y: &Rat) -> Rat {
        x + y
    }
    fn sub(&self, x: &Rat, y: &Rat) -> Rat {
        x - y
    }
    fn mul(&self, x: &Rat, y: &Rat) -> Rat {
        x * y
    }
    fn neg(&self, x: &Rat) -> Rat {
        -x
    }
    fn inv(&self, x: &Rat) -> Option<Rat> {
        if x.is_zero() {
            None
        } else {
            Some(x.recip())
        }
    }
    fn is_zero(&self, x: &Rat) -> bool {
        x.is_zero()
    }
}

/// The imaginary quadratic field `F = Q(ω_D)`.
#[derive(Clone, Copy, Debug)]
pub struct FField(pub Disc);

impl FieldCtx for FField {
    type El = QuadElem;
    fn zero(&self) -> QuadElem {
        QuadElem::zero()
    }
    fn one(&self) -> QuadElem {
        QuadElem::one()
    }
    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        x.add(y)
    }
    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        x.sub(y)
    }
    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        x.mul(y, self.0)
    }
    fn neg(&self, x: &QuadElem) -> QuadElem {
        x.neg()
    }
    fn inv(&self, x: &QuadElem) -> Option<QuadElem> {
        x.inv(self.0)
    }
    fn is_zero(&self, x: &QuadElem) -> bool {
        x.is_zero()
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Mat<T> {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        debug_assert!(rows.iter().all(|row| row.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn filled(rows: usize, cols: usize, v: T) -> Mat<T> {
        Mat {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat<T> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j).clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

pub fn identity<F: FieldCtx>(f: &F, n: usize) -> Mat<F::El> {
    let mut m = Mat::filled(n, n, f.zero());
    for i in 0..n {
        m.set(i, i, f.one());
    }
    m
}

pub fn mat_mul<F: FieldCtx>(f: &F, a: &Mat<F::El>, b: &Mat<F::El>) -> Mat<F::El> {
    debug_assert_eq!(a.cols, b.rows);
    let mut out = Mat::filled(a.rows, b.cols, f.zero());
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.at(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let t = f.mul(aik, b.at(k, j));
                let cur = f.add(out.at(i, j), &t);
                out.set(i, j, cur);
            }
        }
    }
    out
}

pub fn mat_vec<F: FieldCtx>(f: &F, a: &Mat<F::El>, x: &[F::El]) -> Vec<F::El> {
    debug_assert_eq!(a.cols, x.len());
    (0..a.rows)
        .map(|i| {
            let mut acc = f.zero();
            for j in 0..a.cols {
                acc = f.add(&acc, &f.mul(a.at(i, j), &x[j]));
            }
            acc
        })
        .collect()
}

/// In-place reduction to reduced row echelon form over the first `main_cols`
/// columns (trailing columns ride along as an augmented block).
/// Returns the pivot column indices.
fn rref<F: FieldCtx>(f: &F, m: &mut Mat<F::El>, main_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..main_cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.at(i, c))) else {
            continue;
        };
        if pr != r {
            for j in 0..m.cols {
                let a = m.at(pr, j).clone();
                let b = m.at(r, j).clone();
                m.set(pr, j, b);
                m.set(r, j, a);
            }
        }
        let inv = f.inv(m.at(r, c)).expect("pivot nonzero");
        for j in 0..m.cols {
            let v = f.mul(m.at(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i != r && !f.is_zero(m.at(i, c)) {
                let factor = m.at(i, c).clone();
                for j in 0..m.cols {
                    let v = f.sub(m.at(i, j), &f.mul(&factor, m.at(r, j)));
                    m.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: FieldCtx>(f: &F, m: &Mat<F::El>) -> usize {
    let mut work = m.clone();
    let c = work.cols;
    rref(f, &mut work, c).len()
}

/// Basis of the right nullspace `{x : m·x = 0}`.
pub fn nullspace<F: FieldCtx>(f: &F, m: &Mat<F::El>) -> Vec<Vec<F::El>> {
    let mut work = m.clone();
    let cols = work.cols;
    let pivots = rref(f, &mut work, cols);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(work.at(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Solve `A·X = B` for the augmented system; returns a particular solution
/// with free variables set to zero, or `None` when inconsistent.
pub fn solve<F: FieldCtx>(f: &F, a: &Mat<F::El>, b: &Mat<F::El>) -> Option<Mat<F::El>> {
    debug_assert_eq!(a.rows, b.rows);
    let mut work = Mat::filled(a.rows, a.cols + b.cols, f.zero());
    for i in 0..a.rows {
        for j in 0..a.cols {
            work.set(i, j, a.at(i, j).clone());
        }
        for j in 0..b.cols {
            work.set(i, a.cols + j, b.at(i, j).clone());
        }
    }
    let pivots = rref(f, &mut work, a.cols);
    // inconsistent iff a nonzero row remains in the augmented block only
    for i in pivots.len()..a.rows {
        if (0..b.cols).any(|j| !f.is_zero(work.at(i, a.cols + j))) {
            return None;
        }
    }
    let mut x = Mat::filled(a.cols, b.cols, f.zero());
    for (r, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(p, j, work.at(r, a.cols + j).clone());
        }
    }
    Some(x)
}

pub fn det<F: FieldCtx>(f: &F, m: &Mat<F::El>) -> F::El {
    debug_assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut work = m.clone();
    let mut result = f.one();
    let mut negate = false;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !f.is_zero(work.at(i, c))) else {
            return f.zero();
        };
        if pr != c {
            negate = !negate;
            for j in 0..n {
                let a = work.at(pr, j).clone();
                let b = work.at(c, j).clone();
                work.set(pr, j, b);
                work.set(c, j, a);
            }
        }
        let pivot = work.at(c, c).clone();
        result = f.mul(&result, &pivot);
        let inv = f.inv(&pivot).expect("pivot nonzero");
        for i in c + 1..n {
            if f.is_zero(work.at(i, c)) {
                continue;
            }
            let factor = f.mul(work.at(i, c), &inv);
            for j in c..n {
                let v = f.sub(work.at(i, j), &f.mul(&factor, work.at(c, j)));
                work.set(i, j, v);
            }
        }
    }
    if negate {
        f.neg(&result)
    } else {
        result
    }
}

pub fn inverse<F: FieldCtx>(f: &F, m: &Mat<F::El>) -> Option<Mat<F::El>> {
    debug_assert_eq!(m.rows, m.cols);
    let id = identity(f, m.rows);
    let x = solve(f, m, &id)?;
    // solve() returns Some for any consistent system; invertibility needs full rank
    if mat_mul(f, m, &x) == id {
        Some(x)
    } else {
        None
    }
}

/// Sparse integer matrix with explicit shape; zero entries are absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMat {
    pub rows: usize,
    pub cols: usize,
    pub entries: alloc::collections::BTreeMap<(usize, usize), crate::field::Int>,
}

impl SparseIntMat {
    pub fn zero(rows: usize, cols: usize) -> SparseIntMat {
        SparseIntMat {
            rows,
            cols,
            entries: alloc::collections::BTreeMap::new(),
        }
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: crate::field::Int) {
        debug_assert!(i < self.rows && j < self.cols);
        use num_traits::Zero as _;
        let cell = self.entries.entry((i, j)).or_insert_with(crate::field::Int::zero);
        *cell += v;
        if cell.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<crate::field::Int>> {
        use num_traits::Zero as _;
        let mut out = vec![vec![crate::field::Int::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            out[i][j] = v.clone();
        }
        out
    }

    /// Matrix product over `Z`, sparse times sparse.
    pub fn mul(&self, rhs: &SparseIntMat) -> SparseIntMat {
        debug_assert_eq!(self.cols, rhs.rows);
        let mut out = SparseIntMat::zero(self.rows, rhs.cols);
        for (&(i, k), a) in &self.entries {
            for (&(k2, j), b) in rhs.entries.range((k, 0)..=(k, usize::MAX)) {
                debug_assert_eq!(k, k2);
                out.add_entry(i, j, a * b);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Incremental rank tracking: feed rows one at a time, learn whether each
/// row enlarges the span. Used for greedy basis extraction.
pub struct SpanBuilder<F: FieldCtx> {
    f: F,
    cols: usize,
    // rows kept in echelon form, with pivot column of each
    echelon: Vec<(usize, Vec<F::El>)>,
}

impl<F: FieldCtx> SpanBuilder<F> {
    pub fn new(f: F, cols: usize) -> Self {
        SpanBuilder {
            f,
            cols,
            echelon: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    /// Returns true (and absorbs the row) iff `row` is independent of the
    /// rows added so far.
    pub fn try_add(&mut self, row: &[F::El]) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        let f = &self.f;
        let mut v: Vec<F::El> = row.to_vec();
        for (p, basis_row) in &self.echelon {
            if !f.is_zero(&v[*p]) {
                let factor = v[*p].clone();
                for j in 0..self.cols {
                    v[j] = f.sub(&v[j], &f.mul(&factor, &basis_row[j]));
                }
            }
        }
        let Some(p) = (0..self.cols).find(|&j| !f.is_zero(&v[j])) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("pivot nonzero");
        for j in 0..self.cols {
            v[j] = f.mul(&v[j], &inv);
        }
        self.echelon.push((p, v));
        true
    }

    /// True iff `row` lies in the current span (without absorbing it).
    pub fn contains(&self, row: &[F::El]) -> bool {
        let f = &self.f;
        let mut v: Vec<F::El> = row.to_vec();
        for (p, basis_row) in &self.echelon {
            if !f.is_zero(&v[*p]) {
                let factor = v[*p].clone();
                for j in 0..self.cols {
                    v[j] = f.sub(&v[j], &f.mul(&factor, &basis_row[j]));
                }
            }
        }
        v.iter().all(|x| f.is_zero(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_frac};

    fn qmat(rows: Vec<Vec<i64>>) -> Mat<Rat> {
        Mat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_nullspace() {
        let f = QField;
        let m = qmat(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank(&f, &m), 2);
        let ns = nullspace(&f, &m);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            let prod = mat_vec(&f, &m, v);
            assert!(prod.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let f = QField;
        let m = qmat(vec![vec![2, 1], vec![1, 1]]);
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mat_mul(&f, &m, &inv), identity(&f, 2));
        assert_eq!(det(&f, &m), rat(1));
        let singular = qmat(vec![vec![1, 2], vec![2, 4]]);
        assert!(inverse(&f, &singular).is_none());
        assert_eq!(det(&f, &singular), rat(0));
    }

    #[test]
    fn solve_overdetermined_consistent() {
        let f = QField;
        // 3x2 full column rank; b in column span
        let a = qmat(vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let b = qmat(vec![vec![3], vec![4], vec![7]]);
        let x = solve(&f, &a, &b).unwrap();
        assert_eq!(mat_mul(&f, &a, &x), b);
        let bad = qmat(vec![vec![3], vec![4], vec![8]]);
        assert!(solve(&f, &a, &bad).is_none());
    }

    #[test]
    fn quad_field_elimination() {
        let k = Disc::new(-4).unwrap();
        let f = FField(k);
        // [[1, ω], [−ω, 1]] over Q(i) has det 1 + ω·ω̄·... = 1 − (−1) = 2? det = 1·1 − ω·(−ω) = 1 + ω² = 0 for ω² = −1
        let w = QuadElem::new(rat(0), rat(1));
        let m = Mat::from_rows(vec![
            vec![QuadElem::one(), w.clone()],
            vec![w.neg(), QuadElem::one()],
        ]);
        assert_eq!(det(&f, &m), QuadElem::zero());
        assert_eq!(rank(&f, &m), 1);

        let m2 = Mat::from_rows(vec![
            vec![QuadElem::one(), w.clone()],
            vec![w.clone(), QuadElem::one()],
        ]);
        assert_eq!(det(&f, &m2), QuadElem::from_rat(rat(2)));
        let inv = inverse(&f, &m2).unwrap();
        assert_eq!(mat_mul(&f, &m2, &inv), identity(&f, 2));
    }

    #[test]
    fn span_builder_matches_rank() {
        let f = QField;
        let rows = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat_frac(1, 2)],
            vec![rat(1), rat(3), rat_frac(7, 2)],
        ];
        let mut sb = SpanBuilder::new(f, 3);
        let added: Vec<bool> = rows.iter().map(|r| sb.try_add(r)).collect();
        assert_eq!(added, vec![true, false, true, false]);
        assert_eq!(sb.rank(), 2);
        assert!(sb.contains(&[rat(3), rat(7), rat_frac(19, 2)]));
        assert!(!sb.contains(&[rat(3), rat(7), rat(10)]));
        assert!(!sb.contains(&[rat(0), rat(0), rat(1)]));
    }
}

//! Hermitian forms over `F`, their rational coordinates, the rank-one map
//! `q(v) = v·v*`, the trace pairing, realification to rank-`2N` rational
//! quadratic forms, and minimal-vector computation.
//!
//! A form of rank `N` is identified with its coordinate vector in `Q^{N²}`:
//! the diagonal entries first, then the pair `(b, c)` with `a_ij = b + c·ω`
//! for each `i < j` in row-major order. Minimal vectors are computed by an
//! exact lattice-point enumeration on the realified Gram matrix; every
//! interval bound in the traversal is decided in rational arithmetic, so the
//! returned set is complete by construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::{vec, vec::Vec};
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{rat, Disc, Int, QuadElem, QuadInt, Rat};
use crate::linalg::{FField, Mat};

/// A column vector in `O^N`. Ordering is lexicographic on the integer
/// coordinate tuple `(a_1, b_1, a_2, b_2, …)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OVec(pub Vec<QuadInt>);

impl fmt::Debug for OVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OVec{:?}", self.0)
    }
}

impl OVec {
    pub fn zero(n: usize) -> OVec {
        OVec(vec![QuadInt::zero(); n])
    }

    pub fn basis(n: usize, i: usize) -> OVec {
        let mut v = OVec::zero(n);
        v.0[i] = QuadInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scaled(&self, u: &QuadInt, k: Disc) -> OVec {
        OVec(self.0.iter().map(|c| c.mul(u, k)).collect())
    }

    /// All `|O*|` unit multiples, pairwise distinct for nonzero vectors.
    pub fn unit_multiples(&self, k: Disc) -> Vec<OVec> {
        k.units().iter().map(|u| self.scaled(u, k)).collect()
    }

    /// The canonical representative of the unit class: the lexicographically
    /// largest coordinate tuple among the unit multiples.
    pub fn canonical(&self, k: Disc) -> OVec {
        self.unit_multiples(k).into_iter().max().expect("nonempty units")
    }

    /// Integer coordinates on the `Z`-basis `{e_1, ωe_1, e_2, ωe_2, …}`.
    pub fn realify(&self) -> Vec<Int> {
        let mut out = Vec::with_capacity(2 * self.len());
        for c in &self.0 {
            out.push(c.a.clone());
            out.push(c.b.clone());
        }
        out
    }

    pub fn from_real(coords: &[Int]) -> OVec {
        debug_assert!(coords.len().is_multiple_of(2));
        OVec(
            coords
                .chunks_exact(2)
                .map(|ab| QuadInt::new(ab[0].clone(), ab[1].clone()))
                .collect(),
        )
    }
}

/// An `N×N` Hermitian matrix with entries in `F`, stored row-major.
/// The constructor enforces `A = A*` exactly.
#[derive(Clone, PartialEq)]
pub struct HermForm {
    n: usize,
    k: Disc,
    entries: Vec<QuadElem>,
}

impl fmt::Debug for HermForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermForm(n={}, {:?})", self.n, self.entries)
    }
}

impl HermForm {
    pub fn new(k: Disc, n: usize, entries: Vec<QuadElem>) -> Result<HermForm> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch);
        }
        let form = HermForm { n, k, entries };
        for i in 0..n {
            for j in 0..=i {
                if *form.entry(i, j) != form.entry(j, i).conj(k) {
                    return Err(Error::Internal(alloc::format!(
                        "matrix not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        Ok(form)
    }

    pub fn identity(k: Disc, n: usize) -> HermForm {
        let mut entries = vec![QuadElem::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = QuadElem::one();
        }
        HermForm { n, k, entries }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn disc(&self) -> Disc {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> &QuadElem {
        &self.entries[i * self.n + j]
    }

    /// `q(v) = v·v*`, positive semidefinite of rank one; unit-invariant.
    pub fn rank_one(k: Disc, v: &OVec) -> Result<HermForm> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let n = v.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(v.0[i].mul(&v.0[j].conj(k), k).to_elem());
            }
        }
        Ok(HermForm { n, k, entries })
    }

    /// Coordinates in `Q^{N²}`: diagonal, then `(b, c)` per `i < j`.
    pub fn coords(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            debug_assert!(self.entry(i, i).is_rational());
            out.push(self.entry(i, i).a.clone());
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(self.entry(i, j).a.clone());
                out.push(self.entry(i, j).b.clone());
            }
        }
        out
    }

    pub fn from_coords(k: Disc, n: usize, coords: &[Rat]) -> Result<HermForm> {
        if coords.len() != n * n {
            return Err(Error::DimensionMismatch);
        }
        let mut entries = vec![QuadElem::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = QuadElem::from_rat(coords[i].clone());
        }
        let mut p = n;
        for i in 0..n {
            for j in i + 1..n {
                let e = QuadElem::new(coords[p].clone(), coords[p + 1].clone());
                entries[i * n + j] = e.clone();
                entries[j * n + i] = e.conj(k);
                p += 2;
            }
        }
        Ok(HermForm { n, k, entries })
    }

    /// `A[v] = v* A v ∈ Q`, exact.
    pub fn evaluate(&self, v: &OVec) -> Result<Rat> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch);
        }
        self.sesquilinear(v, v)?.expect_rational()
    }

    /// `h_A(v, w) = v* A w ∈ F`.
    pub fn sesquilinear(&self, v: &OVec, w: &OVec) -> Result<QuadElem> {
        if v.len() != self.n || w.len() != self.n {
            return Err(Error::DimensionMismatch);
        }
        let k = self.k;
        let mut acc = QuadElem::zero();
        for i in 0..self.n {
            if v.0[i].is_zero() {
                continue;
            }
            let vi = v.0[i].conj(k).to_elem();
            for j in 0..self.n {
                if w.0[j].is_zero() {
                    continue;
                }
                let t = vi.mul(self.entry(i, j), k).mul(&w.0[j].to_elem(), k);
                acc = acc.add(&t);
            }
        }
        Ok(acc)
    }

    /// Trace pairing `⟨A, B⟩ = Tr(AB) ∈ Q` for Hermitian `A, B`.
    pub fn trace_pair(&self, other: &HermForm) -> Result<Rat> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch);
        }
        let k = self.k;
        let mut acc = QuadElem::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc = acc.add(&self.entry(i, j).mul(other.entry(j, i), k));
            }
        }
        acc.expect_rational()
    }

    pub fn scale(&self, r: &Rat) -> HermForm {
        HermForm {
            n: self.n,
            k: self.k,
            entries: self.entries.iter().map(|e| e.scale(r)).collect(),
        }
    }

    /// `A + ρ·H`.
    pub fn add_scaled(&self, h: &HermForm, rho: &Rat) -> HermForm {
        debug_assert_eq!(self.n, h.n);
        HermForm {
            n: self.n,
            k: self.k,
            entries: self
                .entries
                .iter()
                .zip(h.entries.iter())
                .map(|(a, b)| a.add(&b.scale(rho)))
                .collect(),
        }
    }

    pub fn sub(&self, h: &HermForm) -> HermForm {
        self.add_scaled(h, &-rat(1))
    }

    pub fn neg(&self) -> HermForm {
        self.scale(&-rat(1))
    }

    /// Congruence transform `g·A·g*` for an `F`-matrix `g`. This is the
    /// pushforward action matching `q(gv) = g·q(v)·g*`.
    pub fn transform(&self, g: &Mat<QuadElem>) -> HermForm {
        debug_assert_eq!(g.rows, self.n);
        debug_assert_eq!(g.cols, self.n);
        let k = self.k;
        let n = self.n;
        // t = g·A
        let mut t = vec![QuadElem::zero(); n * n];
        for i in 0..n {
            for l in 0..n {
                let gil = g.at(i, l);
                if gil.is_zero() {
                    continue;
                }
                for j in 0..n {
                    t[i * n + j] = t[i * n + j].add(&gil.mul(self.entry(l, j), k));
                }
            }
        }
        // out = t·g*
        let mut entries = vec![QuadElem::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = QuadElem::zero();
                for l in 0..n {
                    acc = acc.add(&t[i * n + l].mul(&g.at(j, l).conj(k), k));
                }
                entries[i * n + j] = acc;
            }
        }
        HermForm { n, k, entries }
    }

    /// Gram matrix of `x ↦ A[x]` on `O^N ≅ Z^{2N}` in the basis
    /// `{e_i, ωe_i}`: `G[p][q] = Re(f_p* A f_q)`, so `G[x̃] = A[x]` exactly.
    pub fn realify(&self) -> Mat<Rat> {
        let k = self.k;
        let n = self.n;
        let m = 2 * n;
        let omega = QuadElem::new(rat(0), rat(1));
        let omega_conj = omega.conj(k);
        let mut g = Mat::filled(m, m, rat(0));
        for i in 0..n {
            for j in 0..n {
                let a = self.entry(i, j);
                // (s, u) runs over basis factors (1, 1), (1, ω), (ω, 1), (ω, ω)
                g.set(2 * i, 2 * j, a.re(k));
                g.set(2 * i, 2 * j + 1, a.mul(&omega, k).re(k));
                g.set(2 * i + 1, 2 * j, omega_conj.mul(a, k).re(k));
                g.set(2 * i + 1, 2 * j + 1, omega_conj.mul(a, k).mul(&omega, k).re(k));
            }
        }
        g
    }

    /// Exact positive-definiteness via the signs of the elimination pivots,
    /// equivalently the leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        let k = self.k;
        let n = self.n;
        let mut w = self.entries.clone();
        for step in 0..n {
            let pivot = w[step * n + step].clone();
            if !pivot.is_rational() || !pivot.a.is_positive() {
                return false;
            }
            let pinv = pivot.inv(k).expect("nonzero pivot");
            for i in step + 1..n {
                let factor = w[i * n + step].mul(&pinv, k);
                if factor.is_zero() {
                    continue;
                }
                for j in step..n {
                    let t = factor.mul(&w[step * n + j], k);
                    w[i * n + j] = w[i * n + j].sub(&t);
                }
            }
        }
        true
    }

    /// Exact positive-semidefiniteness: all principal minors are ≥ 0.
    pub fn is_positive_semidefinite(&self) -> bool {
        let f = FField(self.k);
        let n = self.n;
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sub = Mat::from_rows(
                idx.iter()
                    .map(|&i| idx.iter().map(|&j| self.entry(i, j).clone()).collect())
                    .collect(),
            );
            let d = crate::linalg::det(&f, &sub);
            let d = match d.expect_rational() {
                Ok(r) => r,
                Err(_) => return false,
            };
            if d.is_negative() {
                return false;
            }
        }
        true
    }
}

/// Reconstructs the Hermitian matrix `H` representing a linear functional
/// `λ` on coordinates: `⟨H, X⟩ = λ·coords(X)` for all Hermitian `X`.
/// Inverts the block-diagonal Gram matrix of the trace pairing.
pub fn dual_to_form(k: Disc, n: usize, lambda: &[Rat]) -> Result<HermForm> {
    if lambda.len() != n * n {
        return Err(Error::DimensionMismatch);
    }
    let t = rat(k.omega_trace());
    let disc = rat(-k.d()); // 4n − t² = −D
    let mut coords = Vec::with_capacity(n * n);
    coords.extend_from_slice(&lambda[..n]);
    let two_n = rat(2 * k.omega_norm());
    let mut p = n;
    for _i in 0..n {
        for _j in 0..n {
            if _j <= _i {
                continue;
            }
            let lb = &lambda[p];
            let lc = &lambda[p + 1];
            let hb = (&two_n * lb - &t * lc) / &disc;
            let hc = (rat(2) * lc - &t * lb) / &disc;
            coords.push(hb);
            coords.push(hc);
            p += 2;
        }
    }
    HermForm::from_coords(k, n, &coords)
}

/// The set of minimal vectors of a positive definite form, canonicalized up
/// to unit scaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinVectors {
    /// Sorted canonical representatives, one per unit class.
    pub vectors: Vec<OVec>,
    /// The minimum `m(A)`.
    pub minimum: Rat,
    /// Count including unit multiples: `|vectors| · |O*|`.
    pub total_count: usize,
}

/// Exact `LDL^T` of a symmetric positive definite rational matrix; `None`
/// when a pivot fails to be positive (not PD).
fn ldlt(g: &Mat<Rat>) -> Option<(Mat<Rat>, Vec<Rat>)> {
    let n = g.rows;
    debug_assert_eq!(g.cols, n);
    let mut l = Mat::filled(n, n, rat(0));
    let mut d = vec![rat(0); n];
    for j in 0..n {
        let mut dj = g.at(j, j).clone();
        for k in 0..j {
            dj -= l.at(j, k) * l.at(j, k) * &d[k];
        }
        if !dj.is_positive() {
            return None;
        }
        l.set(j, j, rat(1));
        for i in j + 1..n {
            let mut v = g.at(i, j).clone();
            for k in 0..j {
                v -= l.at(i, k) * l.at(j, k) * &d[k];
            }
            l.set(i, j, v / &dj);
        }
        d[j] = dj;
    }
    Some((l, d))
}

/// Largest integer `x` with `x ≤ −c + √b` (requires `b ≥ 0`).
fn upper_bound(c: &Rat, b: &Rat) -> Int {
    let ok = |x: &Int| {
        let s = Rat::from_integer(x.clone()) + c;
        !s.is_positive() || &s * &s <= *b
    };
    let mut x = crate::field::rat_floor(&(-c)) + crate::field::rat_sqrt_floor(b);
    while !ok(&x) {
        x -= 1;
    }
    loop {
        let nx = &x + 1;
        if ok(&nx) {
            x = nx;
        } else {
            return x;
        }
    }
}

/// Smallest integer `x` with `x ≥ −c − √b` (requires `b ≥ 0`).
fn lower_bound(c: &Rat, b: &Rat) -> Int {
    let ok = |x: &Int| {
        let s = Rat::from_integer(x.clone()) + c;
        !s.is_negative() || &s * &s <= *b
    };
    let mut x = crate::field::rat_ceil(&(-c)) - crate::field::rat_sqrt_floor(b) - 1;
    while !ok(&x) {
        x += 1;
    }
    loop {
        let nx = &x - 1;
        if ok(&nx) {
            x = nx;
        } else {
            return x;
        }
    }
}

/// Depth-first traversal of `{x ∈ Z^m : G[x] ≤ bound}` with exact interval
/// bounds at each level. The visitor returns `false` to abandon the
/// traversal; the function reports whether it ran to completion.
fn enumerate_integer_vectors(
    l: &Mat<Rat>,
    d: &[Rat],
    bound: &Rat,
    mut visit: impl FnMut(&[Int], Rat) -> bool,
) -> bool {
    let m = d.len();
    fn descend(
        l: &Mat<Rat>,
        d: &[Rat],
        bound: &Rat,
        level: usize,
        xs: &mut [Int],
        used: &Rat,
        visit: &mut impl FnMut(&[Int], Rat) -> bool,
    ) -> bool {
        // c = Σ_{j>level} L[j][level]·x_j
        let mut c = rat(0);
        for j in level + 1..d.len() {
            if !xs[j].is_zero() {
                c += l.at(j, level) * Rat::from_integer(xs[j].clone());
            }
        }
        let budget = bound - used;
        debug_assert!(!budget.is_negative());
        let b = &budget / &d[level];
        let mut x = lower_bound(&c, &b);
        let hi = upper_bound(&c, &b);
        while x <= hi {
            xs[level] = x.clone();
            let z = Rat::from_integer(x.clone()) + &c;
            let new_used = used + &d[level] * &z * &z;
            if level == 0 {
                if !xs.iter().all(|v| v.is_zero()) && !visit(xs, new_used.clone()) {
                    return false;
                }
            } else if !descend(l, d, bound, level - 1, xs, &new_used, visit) {
                return false;
            }
            x += 1;
        }
        xs[level] = Int::zero();
        true
    }
    if m == 0 {
        return true;
    }
    let mut xs = vec![Int::zero(); m];
    descend(l, d, bound, m - 1, &mut xs, &rat(0), &mut visit)
}

/// All vectors `v ∈ O^N` with `A[v] ≤ bound`, canonical up to units, each
/// with its exact value. Complete by exact-arithmetic enumeration.
pub fn shortest_vectors_upto(a: &HermForm, bound: &Rat) -> Result<Vec<(OVec, Rat)>> {
    let (out, complete) = shortest_vectors_upto_limited(a, bound, usize::MAX)?;
    debug_assert!(complete);
    Ok(out)
}

/// As [`shortest_vectors_upto`], but abandons the traversal once more than
/// `limit` canonical classes have been collected. The boolean reports
/// whether the list is complete. Near-degenerate forms can have enormous
/// sublevel sets; callers that only need *some* short vectors (the blocking
/// search) stay fast this way.
pub fn shortest_vectors_upto_limited(
    a: &HermForm,
    bound: &Rat,
    limit: usize,
) -> Result<(Vec<(OVec, Rat)>, bool)> {
    if !bound.is_positive() {
        return Err(Error::Internal(alloc::string::String::from(
            "enumeration bound must be positive",
        )));
    }
    let g = a.realify();
    let (l, d) = ldlt(&g).ok_or(Error::NotPositiveDefinite)?;
    let k = a.disc();
    let mut found: BTreeMap<OVec, Rat> = BTreeMap::new();
    let complete = enumerate_integer_vectors(&l, &d, bound, |xs, val| {
        let v = OVec::from_real(xs).canonical(k);
        found.entry(v).or_insert(val);
        found.len() <= limit
    });
    #[cfg(debug_assertions)]
    for (v, val) in &found {
        debug_assert_eq!(a.evaluate(v).unwrap(), *val);
    }
    Ok((found.into_iter().collect(), complete))
}

/// The exact minimum `m(A)` and the complete set `M(A)`.
pub fn minimal_vectors(a: &HermForm) -> Result<MinVectors> {
    if !a.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    // upper bound: the smallest diagonal entry, attained by a basis vector
    let ub = (0..a.rank())
        .map(|i| a.evaluate(&OVec::basis(a.rank(), i)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .ok_or(Error::EmptyInput)?;
    let all = shortest_vectors_upto(a, &ub)?;
    let minimum = all
        .iter()
        .map(|(_, val)| val.clone())
        .min()
        .ok_or_else(|| Error::Internal(alloc::string::String::from("no vectors below bound")))?;
    let vectors: Vec<OVec> = all
        .into_iter()
        .filter(|(_, val)| *val == minimum)
        .map(|(v, _)| v)
        .collect();
    let total_count = vectors.len() * a.disc().unit_count();
    Ok(MinVectors {
        vectors,
        minimum,
        total_count,
    })
}

/// Set-valued view of a canonical vector list.
pub fn vector_set(vs: &[OVec]) -> BTreeSet<OVec> {
    vs.iter().cloned().collect()
}

/// Rank over `F` of the span of the given vectors in `F^N`. A set is
/// well-rounded exactly when this equals `N`.
pub fn f_span_rank(k: Disc, vs: &[OVec]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let f = FField(k);
    let mut sb = crate::linalg::SpanBuilder::new(f, vs[0].len());
    for v in vs {
        let row: Vec<QuadElem> = v.0.iter().map(|c| c.to_elem()).collect();
        sb.try_add(&row);
    }
    sb.rank()
}

impl HermForm {
    pub fn zero(k: Disc, n: usize) -> HermForm {
        HermForm {
            n,
            k,
            entries: vec![QuadElem::zero(); n * n],
        }
    }

    /// Entry matrix as a generic `F`-matrix.
    pub fn to_mat(&self) -> Mat<QuadElem> {
        Mat {
            rows: self.n,
            cols: self.n,
            data: self.entries.clone(),
        }
    }

    /// `Σ_{v ∈ vs} q(v)`; positive definite when `vs` is well-rounded.
    pub fn sum_rank_one(k: Disc, vs: &[OVec]) -> Result<HermForm> {
        let n = vs.first().ok_or(Error::EmptyInput)?.len();
        let mut acc = HermForm::zero(k, n);
        for v in vs {
            acc = acc.add_scaled(&HermForm::rank_one(k, v)?, &rat(1));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_frac as rf;

    fn d(dd: i64) -> Disc {
        Disc::new(dd).unwrap()
    }

    fn ovec(k: Disc, coords: &[(i64, i64)]) -> OVec {
        let _ = k;
        OVec(coords.iter().map(|&(a, b)| QuadInt::from_i64(a, b)).collect())
    }

    #[test]
    fn evaluate_identity_examples() {
        let k4 = d(-4);
        let a = HermForm::identity(k4, 2);
        assert_eq!(a.evaluate(&ovec(k4, &[(1, 0), (0, 0)])).unwrap(), rat(1));
        assert_eq!(a.evaluate(&ovec(k4, &[(1, 0), (0, 1)])).unwrap(), rat(2));
        let k3 = d(-3);
        let a3 = HermForm::identity(k3, 2);
        assert_eq!(a3.evaluate(&ovec(k3, &[(1, 0), (0, 1)])).unwrap(), rat(2));
    }

    #[test]
    fn rank_one_examples() {
        let k = d(-4);
        let e1 = OVec::basis(2, 0);
        let q = HermForm::rank_one(k, &e1).unwrap();
        assert_eq!(*q.entry(0, 0), QuadElem::one());
        assert!(q.entry(1, 1).is_zero() && q.entry(0, 1).is_zero());

        // unit invariance: q(i·v) = q(v)
        let v = ovec(k, &[(1, 0), (0, 1)]);
        let iv = v.scaled(&QuadInt::omega(), k);
        assert_eq!(
            HermForm::rank_one(k, &v).unwrap(),
            HermForm::rank_one(k, &iv).unwrap()
        );
        assert!(HermForm::rank_one(k, &OVec::zero(2)).is_err());
    }

    #[test]
    fn trace_pairing_examples() {
        let k = d(-4);
        let id = HermForm::identity(k, 2);
        assert_eq!(id.trace_pair(&id).unwrap(), rat(2));
        let v = ovec(k, &[(1, 0), (0, 1)]);
        let qv = HermForm::rank_one(k, &v).unwrap();
        assert_eq!(id.trace_pair(&qv).unwrap(), rat(2));
        assert_eq!(id.trace_pair(&qv).unwrap(), id.evaluate(&v).unwrap());
    }

    #[test]
    fn realify_rank_one_cases() {
        let g4 = HermForm::identity(d(-4), 1).realify();
        assert_eq!(g4, Mat::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]));
        let g3 = HermForm::identity(d(-3), 1).realify();
        assert_eq!(
            g3,
            Mat::from_rows(vec![vec![rat(1), rf(1, 2)], vec![rf(1, 2), rat(1)]])
        );
        let g8 = HermForm::identity(d(-8), 1).realify();
        assert_eq!(g8, Mat::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(2)]]));
    }

    #[test]
    fn realify_respects_evaluation() {
        // spot check on a non-trivial form and vectors, several discriminants
        for dd in [-3, -4, -7, -8, -11] {
            let k = d(dd);
            let a = HermForm::from_coords(
                k,
                2,
                &[rat(3), rat(5), rat(1), rf(1, 2)],
            )
            .unwrap();
            let g = a.realify();
            for &(p, q, r, s) in &[(1i64, 0i64, 0i64, 0i64), (2, -1, 3, 1), (0, 1, -1, 2), (5, 3, -2, -4)] {
                let v = ovec(k, &[(p, q), (r, s)]);
                let xt: Vec<Rat> = v.realify().into_iter().map(Rat::from_integer).collect();
                let mut gv = rat(0);
                for i in 0..4 {
                    for j in 0..4 {
                        gv += g.at(i, j) * &xt[i] * &xt[j];
                    }
                }
                assert_eq!(gv, a.evaluate(&v).unwrap());
            }
        }
    }

    #[test]
    fn coords_roundtrip() {
        let k = d(-7);
        let a = HermForm::from_coords(k, 3, &[
            rat(1), rat(2), rat(3),
            rf(1, 2), rat(-1), rat(0), rf(2, 3), rat(4), rf(-5, 7),
        ])
        .unwrap();
        let b = HermForm::from_coords(k, 3, &a.coords()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn minimal_vectors_identity() {
        let k = d(-4);
        let mv = minimal_vectors(&HermForm::identity(k, 2)).unwrap();
        assert_eq!(mv.minimum, rat(1));
        assert_eq!(mv.vectors.len(), 2);
        assert_eq!(mv.total_count, 8);

        let k3 = d(-3);
        let mv3 = minimal_vectors(&HermForm::identity(k3, 3)).unwrap();
        assert_eq!(mv3.minimum, rat(1));
        assert_eq!(mv3.vectors.len(), 3);
        assert_eq!(mv3.total_count, 18);
    }

    #[test]
    fn shortest_vectors_examples() {
        let k = d(-4);
        let id = HermForm::identity(k, 2);
        let up1 = shortest_vectors_upto(&id, &rat(1)).unwrap();
        assert_eq!(up1.len(), 2);
        let up2 = shortest_vectors_upto(&id, &rat(2)).unwrap();
        for target in [
            ovec(k, &[(1, 0), (1, 0)]),
            ovec(k, &[(1, 0), (0, 1)]),
            ovec(k, &[(1, 0), (-1, 0)]),
            ovec(k, &[(1, 0), (0, -1)]),
        ] {
            let c = target.canonical(k);
            assert!(up2.iter().any(|(v, _)| *v == c), "missing {:?}", c);
        }
        // cross-check: shortest_vectors_upto at m(A) equals minimal_vectors
        let mv = minimal_vectors(&id).unwrap();
        let at_min = shortest_vectors_upto(&id, &mv.minimum).unwrap();
        assert_eq!(
            at_min.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>(),
            mv.vectors
        );
    }

    #[test]
    fn positive_definite_checks() {
        let k = d(-4);
        assert!(HermForm::identity(k, 3).is_positive_definite());
        let not_pd =
            HermForm::from_coords(k, 2, &[rat(1), rat(1), rat(2), rat(0)]).unwrap();
        assert!(!not_pd.is_positive_definite());
        assert!(!not_pd.is_positive_semidefinite());
        assert!(minimal_vectors(&not_pd).is_err());
        // q(v) is PSD but not PD
        let qv = HermForm::rank_one(k, &ovec(k, &[(1, 0), (0, 1)])).unwrap();
        assert!(!qv.is_positive_definite());
        assert!(qv.is_positive_semidefinite());
    }

    #[test]
    fn canonical_injective_on_q_images() {
        let k = d(-3);
        let vs = [
            ovec(k, &[(1, 0), (0, 0)]),
            ovec(k, &[(1, 0), (1, 0)]),
            ovec(k, &[(1, 0), (0, 1)]),
            ovec(k, &[(2, 1), (-1, 3)]),
        ];
        for (i, v) in vs.iter().enumerate() {
            for (j, w) in vs.iter().enumerate() {
                let qv = HermForm::rank_one(k, v).unwrap();
                let qw = HermForm::rank_one(k, w).unwrap();
                if i != j {
                    assert_ne!(qv, qw);
                }
                // canonical classes are unit-stable
                assert_eq!(
                    HermForm::rank_one(k, &v.canonical(k)).unwrap(),
                    qv
                );
                let _ = qw;
            }
        }
    }

    #[test]
    fn dual_to_form_inverts_trace_pairing() {
        for dd in [-3, -4, -8] {
            let k = d(dd);
            let n = 2;
            // λ = coordinates of a functional; H must satisfy ⟨H, X⟩ = λ·coords(X)
            let lambda = vec![rat(3), rat(-2), rf(1, 2), rat(5)];
            let h = dual_to_form(k, n, &lambda).unwrap();
            for test_coords in [
                vec![rat(1), rat(0), rat(0), rat(0)],
                vec![rat(0), rat(1), rat(0), rat(0)],
                vec![rat(0), rat(0), rat(1), rat(0)],
                vec![rat(0), rat(0), rat(0), rat(1)],
                vec![rat(2), rat(7), rf(-3, 2), rf(5, 3)],
            ] {
                let x = HermForm::from_coords(k, n, &test_coords).unwrap();
                let expect: Rat = lambda
                    .iter()
                    .zip(test_coords.iter())
                    .map(|(l, c)| l * c)
                    .sum();
                assert_eq!(h.trace_pair(&x).unwrap(), expect);
            }
        }
    }
}

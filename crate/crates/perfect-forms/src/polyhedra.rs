//! Exact polyhedral computations in `Q^d`: facets of a pointed cone from its
//! generators (dual description), codimension-one face subsets, and span
//! ranks.
//!
//! The cone is first projected onto coordinates for its own linear span, so
//! the double description always runs on a full-dimensional pointed cone.
//! Internally rays and inequalities are scaled to primitive integer vectors;
//! all sign decisions are exact integer comparisons.

use alloc::collections::BTreeSet;
use alloc::{vec, vec::Vec};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Int, Rat};
use crate::linalg::{self, Mat, QField, SpanBuilder};

/// Exact rank over `Q` of the span of the given vectors.
pub fn span_rank(vectors: &[Vec<Rat>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut sb = SpanBuilder::new(QField, vectors[0].len());
    for v in vectors {
        sb.try_add(v);
    }
    sb.rank()
}

/// Scale a rational vector to a primitive integer vector (no sign change).
pub fn primitive(v: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::from(1);
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<Int> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let mut g = Int::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() && g != Int::from(1) {
        for x in &mut ints {
            *x /= &g;
        }
    }
    ints
}

fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn primitive_int(mut v: Vec<Int>) -> Vec<Int> {
    let mut g = Int::zero();
    for x in &v {
        g = g.gcd(x);
    }
    if !g.is_zero() && g != Int::from(1) {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

/// Bit set over processed-constraint indices.
#[derive(Clone, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(words: usize) -> ZeroSet {
        ZeroSet(vec![0; words])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a & b)
                .collect(),
        )
    }
    fn and_count(&self, other: &ZeroSet) -> u32 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }
    fn is_subset_of(&self, other: &ZeroSet) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    coords: Vec<Int>,
    zeros: ZeroSet,
}

/// The facet structure of a pointed cone given by generators.
#[derive(Clone, Debug)]
pub struct DualDescription {
    /// Facet normals in ambient coordinates, primitive integer entries,
    /// signed so that `⟨normal, g⟩ ≥ 0` for every generator `g`.
    pub normals: Vec<Vec<Rat>>,
    /// For each normal, the sorted indices of generators lying on the facet.
    pub facets: Vec<Vec<usize>>,
    /// Rank of the generator span; facets have rank one less.
    pub rank: usize,
}

/// Complete, irredundant facet description of the pointed cone spanned by
/// `gens` within its own linear span. Incremental double description with
/// exact integer arithmetic.
pub fn dual_description(gens: &[Vec<Rat>]) -> Result<DualDescription> {
    if gens.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ambient = gens[0].len();
    if gens.iter().any(|g| g.len() != ambient) {
        return Err(Error::DimensionMismatch);
    }

    // basis of the span, taken from the generators themselves
    let q = QField;
    let mut sb = SpanBuilder::new(q, ambient);
    let mut basis_idx = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if sb.try_add(g) {
            basis_idx.push(i);
        }
    }
    let r = basis_idx.len();
    if r == 0 {
        return Err(Error::ZeroVector);
    }
    let basis = Mat::from_rows(basis_idx.iter().map(|&i| gens[i].clone()).collect());
    let basis_t = basis.transpose(); // ambient × r

    // span coordinates of each generator, scaled to primitive integers
    let rhs = Mat::from_rows(gens.to_vec()).transpose(); // ambient × m
    let coords = linalg::solve(&q, &basis_t, &rhs)
        .ok_or_else(|| Error::Internal(alloc::string::String::from("generator outside span")))?;
    let m = gens.len();
    let ineqs: Vec<Vec<Int>> = (0..m).map(|i| primitive(&coords.col(i))).collect();

    // processing order: an independent r-subset first (simplicial start)
    let mut sb2 = SpanBuilder::new(q, r);
    let mut start = Vec::new();
    let mut rest = Vec::new();
    for (i, y) in ineqs.iter().enumerate() {
        let yq: Vec<Rat> = y.iter().map(|x| Rat::from_integer(x.clone())).collect();
        if start.len() < r && sb2.try_add(&yq) {
            start.push(i);
        } else {
            rest.push(i);
        }
    }
    debug_assert_eq!(start.len(), r);
    let order: Vec<usize> = start.iter().chain(rest.iter()).copied().collect();
    let words = m.div_ceil(64);

    // initial rays: columns of the inverse of the starting inequality matrix
    let y0 = Mat::from_rows(
        start
            .iter()
            .map(|&i| {
                ineqs[i]
                    .iter()
                    .map(|x| Rat::from_integer(x.clone()))
                    .collect()
            })
            .collect(),
    );
    let y0_inv = linalg::inverse(&q, &y0)
        .ok_or_else(|| Error::Internal(alloc::string::String::from("singular start block")))?;
    let mut rays: Vec<Ray> = (0..r)
        .map(|j| {
            let coords = primitive(&y0_inv.col(j));
            let mut zeros = ZeroSet::new(words);
            for pos in 0..r {
                if pos != j {
                    zeros.set(pos);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    // insert the remaining inequalities one at a time
    for (pos, &ci) in order.iter().enumerate().skip(r) {
        let y = &ineqs[ci];
        let vals: Vec<Int> = rays.iter().map(|ray| dot(y, &ray.coords)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for (ray, v) in rays.iter_mut().zip(vals.iter()) {
                if v.is_zero() {
                    ray.zeros.set(pos);
                }
            }
            continue;
        }
        let pos_idx: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg_idx: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();

        let mut new_rays: Vec<Ray> = Vec::new();
        let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
        for &p in &pos_idx {
            for &n in &neg_idx {
                // adjacency needs the common zero set to cut down to a
                // 2-face: fewer than r−2 common tight constraints cannot
                if rays[p].zeros.and_count(&rays[n].zeros) + 2 < r as u32 {
                    continue;
                }
                let common = rays[p].zeros.and(&rays[n].zeros);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, other)| i == p || i == n || !common.is_subset_of(&other.zeros));
                if !adjacent {
                    continue;
                }
                // s_p·r_n − s_n·r_p vanishes on the new constraint and stays
                // nonnegative on all previous ones
                let coords: Vec<Int> = rays[p]
                    .coords
                    .iter()
                    .zip(rays[n].coords.iter())
                    .map(|(rp, rn)| &vals[p] * rn - &vals[n] * rp)
                    .collect();
                let coords = primitive_int(coords);
                if !seen.insert(coords.clone()) {
                    continue;
                }
                let mut zeros = ZeroSet::new(words);
                for (prev_pos, &prev_ci) in order.iter().enumerate().take(pos + 1) {
                    if dot(&ineqs[prev_ci], &coords).is_zero() {
                        zeros.set(prev_pos);
                    }
                }
                new_rays.push(Ray { coords, zeros });
            }
        }

        let mut kept: Vec<Ray> = Vec::new();
        for (i, ray) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            let mut ray = ray;
            if vals[i].is_zero() {
                ray.zeros.set(pos);
            }
            kept.push(ray);
        }
        kept.extend(new_rays);
        rays = kept;
    }

    // the extreme rays of the dual cone are the facet normals
    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
    let mut normals = Vec::new();
    let mut facets = Vec::new();
    for ray in &rays {
        if !seen.insert(ray.coords.clone()) {
            continue;
        }
        let facet: Vec<usize> = (0..m)
            .filter(|&i| dot(&ineqs[i], &ray.coords).is_zero())
            .collect();
        // lift h to ambient coordinates: solve basisᵀ·λ = h
        let h = Mat::from_rows(
            ray.coords
                .iter()
                .map(|x| vec![Rat::from_integer(x.clone())])
                .collect(),
        );
        let lambda = linalg::solve(&q, &basis, &h)
            .ok_or_else(|| Error::Internal(alloc::string::String::from("normal lift failed")))?;
        let lam: Vec<Rat> = primitive(&lambda.col(0))
            .into_iter()
            .map(Rat::from_integer)
            .collect();
        #[cfg(debug_assertions)]
        {
            for (i, g) in gens.iter().enumerate() {
                let pairing: Rat = lam.iter().zip(g.iter()).map(|(a, b)| a * b).sum();
                debug_assert!(!pairing.is_negative());
                debug_assert_eq!(pairing.is_zero(), facet.contains(&i));
            }
            let on_facet: Vec<Vec<Rat>> = facet.iter().map(|&i| gens[i].clone()).collect();
            debug_assert_eq!(span_rank(&on_facet), r - 1);
        }
        normals.push(lam);
        facets.push(facet);
    }

    Ok(DualDescription {
        normals,
        facets,
        rank: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn qv(v: Vec<i64>) -> Vec<Rat> {
        v.into_iter().map(rat).collect()
    }

    #[test]
    fn coordinate_rays() {
        let dd = dual_description(&[qv(vec![1, 0]), qv(vec![0, 1])]).unwrap();
        assert_eq!(dd.rank, 2);
        let mut normals: Vec<Vec<Rat>> = dd.normals.clone();
        normals.sort();
        assert_eq!(normals, vec![qv(vec![0, 1]), qv(vec![1, 0])]);
        let mut facets = dd.facets.clone();
        facets.sort();
        assert_eq!(facets, vec![vec![0], vec![1]]);
    }

    #[test]
    fn simplex_cone_in_higher_dim() {
        // 3 independent rays inside Q^5: 3 facets, each dropping one generator
        let gens = vec![
            qv(vec![1, 0, 0, 1, 0]),
            qv(vec![0, 1, 0, 0, 2]),
            qv(vec![0, 0, 1, -1, 0]),
        ];
        let dd = dual_description(&gens).unwrap();
        assert_eq!(dd.rank, 3);
        assert_eq!(dd.normals.len(), 3);
        let mut facets = dd.facets.clone();
        facets.sort();
        assert_eq!(facets, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn square_cone() {
        // cone over a square in Q^3: 4 generators, 4 facets of 2 each
        let gens = vec![
            qv(vec![1, 1, 1]),
            qv(vec![-1, 1, 1]),
            qv(vec![-1, -1, 1]),
            qv(vec![1, -1, 1]),
        ];
        let dd = dual_description(&gens).unwrap();
        assert_eq!(dd.rank, 3);
        assert_eq!(dd.normals.len(), 4);
        for f in &dd.facets {
            assert_eq!(f.len(), 2);
        }
    }

    #[test]
    fn redundant_generator_is_no_facet_vertex() {
        // interior generator of the square cone adds nothing
        let gens = vec![
            qv(vec![1, 1, 1]),
            qv(vec![-1, 1, 1]),
            qv(vec![-1, -1, 1]),
            qv(vec![1, -1, 1]),
            qv(vec![0, 0, 1]),
        ];
        let dd = dual_description(&gens).unwrap();
        assert_eq!(dd.normals.len(), 4);
        for f in &dd.facets {
            assert!(!f.contains(&4));
        }
    }

    /// Brute-force facet search: for every subset of generators spanning a
    /// hyperplane of the cone's span, solve for the normal and keep it when
    /// it supports the cone. Independent of the incremental algorithm.
    fn facets_brute(gens: &[Vec<Rat>]) -> BTreeSet<Vec<usize>> {
        let q = QField;
        let r = span_rank(gens);
        let m = gens.len();
        let mut out = BTreeSet::new();
        for mask in 1u32..(1 << m) {
            let idx: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let sub: Vec<Vec<Rat>> = idx.iter().map(|&i| gens[i].clone()).collect();
            if span_rank(&sub) != r - 1 {
                continue;
            }
            // find normals within the span vanishing on the subset
            let mut sbase = SpanBuilder::new(q, gens[0].len());
            let mut basis = Vec::new();
            for g in gens {
                if sbase.try_add(g) {
                    basis.push(g.clone());
                }
            }
            let basis_t = Mat::from_rows(basis.clone()).transpose();
            let all = Mat::from_rows(gens.to_vec()).transpose();
            let coords = linalg::solve(&q, &basis_t, &all).unwrap();
            let rows: Vec<Vec<Rat>> = idx.iter().map(|&i| coords.col(i)).collect();
            let ns = linalg::nullspace(&q, &Mat::from_rows(rows));
            if ns.len() != 1 {
                continue;
            }
            let h = &ns[0];
            let vals: Vec<Rat> = (0..m)
                .map(|i| {
                    coords
                        .col(i)
                        .iter()
                        .zip(h.iter())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect();
            let sign = if vals.iter().all(|v| !v.is_negative()) {
                1
            } else if vals.iter().all(|v| !v.is_positive()) {
                -1
            } else {
                0
            };
            if sign == 0 {
                continue;
            }
            let zero: Vec<usize> = (0..m).filter(|&i| vals[i].is_zero()).collect();
            out.insert(zero);
        }
        out
    }

    #[test]
    fn brute_force_cross_check_perfect_cone() {
        // the perfect cone for N = 2, D = −4; generators are coords of q(v)
        // for v in {e1, e2, (1,−1), (1,−ω)} up to units
        use crate::field::Disc;
        use crate::field::QuadInt;
        use crate::hermitian::{HermForm, OVec};
        let k = Disc::new(-4).unwrap();
        let vs = [
            vec![QuadInt::from_i64(1, 0), QuadInt::from_i64(0, 0)],
            vec![QuadInt::from_i64(0, 0), QuadInt::from_i64(1, 0)],
            vec![QuadInt::from_i64(1, 0), QuadInt::from_i64(-1, 0)],
            vec![QuadInt::from_i64(1, 0), QuadInt::from_i64(0, -1)],
        ];
        let gens: Vec<Vec<Rat>> = vs
            .iter()
            .map(|v| HermForm::rank_one(k, &OVec(v.clone())).unwrap().coords())
            .collect();
        let dd = dual_description(&gens).unwrap();
        assert_eq!(dd.rank, 4);
        let got: BTreeSet<Vec<usize>> = dd.facets.iter().cloned().collect();
        assert_eq!(got, facets_brute(&gens));
    }

    #[test]
    fn dual_of_dual_recovers_extreme_rays() {
        let gens = vec![
            qv(vec![1, 1, 1]),
            qv(vec![-1, 1, 1]),
            qv(vec![-1, -1, 1]),
            qv(vec![1, -1, 1]),
        ];
        let dd = dual_description(&gens).unwrap();
        let back = dual_description(&dd.normals).unwrap();
        let mut recovered: Vec<Vec<Int>> = back.normals.iter().map(|n| primitive(n)).collect();
        recovered.sort();
        let mut original: Vec<Vec<Int>> = gens.iter().map(|g| primitive(g)).collect();
        original.sort();
        assert_eq!(recovered, original);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(dual_description(&[]).is_err());
    }
}

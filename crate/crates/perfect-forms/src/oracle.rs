//! Brute-force reference implementations, used as independent oracles by
//! test suites (feature `oracle`). Nothing here shares a code path with the
//! implementations it checks: minimal vectors are found by exhaustive box
//! search driven by `evaluate` alone, and elementary divisors come from a
//! plain textbook reduction or from determinantal divisors (gcds of
//! minors).

use alloc::collections::BTreeMap;
use alloc::{vec, vec::Vec};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{rat_sqrt_floor, Disc, Int, QuadInt, Rat};
use crate::hermitian::{HermForm, MinVectors, OVec};
use crate::linalg::{self, Mat, QField};

/// A provably sufficient coordinate box for `{x : G[x] ≤ c}`:
/// `x_i² ≤ c·(G⁻¹)_ii` by Cauchy-Schwarz in the `G` inner product.
fn search_box(g: &Mat<Rat>, c: &Rat) -> Result<Vec<Int>> {
    let q = QField;
    let inv = linalg::inverse(&q, g).ok_or(Error::NotPositiveDefinite)?;
    Ok((0..g.rows)
        .map(|i| rat_sqrt_floor(&(c * inv.at(i, i))))
        .collect())
}

/// Exhaustive enumeration of all `v ∈ O^N` with `A[v] ≤ bound`, canonical
/// up to units, by scanning the full integer box and evaluating the form
/// directly on each candidate.
pub fn box_shortest_upto(a: &HermForm, bound: &Rat) -> Result<Vec<(OVec, Rat)>> {
    let k = a.disc();
    let g = a.realify();
    let limits = search_box(&g, bound)?;
    let m = limits.len();
    let mut found: BTreeMap<OVec, Rat> = BTreeMap::new();
    let mut coords = vec![Int::zero(); m];
    fn scan(
        a: &HermForm,
        k: Disc,
        limits: &[Int],
        coords: &mut Vec<Int>,
        level: usize,
        bound: &Rat,
        found: &mut BTreeMap<OVec, Rat>,
    ) -> Result<()> {
        if level == limits.len() {
            if coords.iter().all(|c| c.is_zero()) {
                return Ok(());
            }
            let v = OVec(
                coords
                    .chunks_exact(2)
                    .map(|ab| QuadInt::new(ab[0].clone(), ab[1].clone()))
                    .collect(),
            );
            let val = a.evaluate(&v)?;
            if val <= *bound {
                found.entry(v.canonical(k)).or_insert(val);
            }
            return Ok(());
        }
        let lim = limits[level].clone();
        let mut x = -lim.clone();
        while x <= lim {
            coords[level] = x.clone();
            scan(a, k, limits, coords, level + 1, bound, found)?;
            x += 1;
        }
        coords[level] = Int::zero();
        Ok(())
    }
    scan(a, k, &limits, &mut coords, 0, bound, &mut found)?;
    Ok(found.into_iter().collect())
}

/// Minimal vectors by exhaustive box search.
pub fn box_minimal_vectors(a: &HermForm) -> Result<MinVectors> {
    if !a.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let ub = (0..a.rank())
        .map(|i| a.evaluate(&OVec::basis(a.rank(), i)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .ok_or(Error::EmptyInput)?;
    let all = box_shortest_upto(a, &ub)?;
    let minimum = all
        .iter()
        .map(|(_, val)| val.clone())
        .min()
        .ok_or(Error::EmptyInput)?;
    let vectors: Vec<OVec> = all
        .into_iter()
        .filter(|(_, v)| *v == minimum)
        .map(|(v, _)| v)
        .collect();
    let total_count = vectors.len() * a.disc().unit_count();
    Ok(MinVectors {
        vectors,
        minimum,
        total_count,
    })
}

/// Textbook Smith normal form of a dense integer matrix: gcd reduction to
/// the corner by repeated division steps, recursion on the submatrix, then
/// a divisibility-chain fixup over the diagonal. Returns the full diagonal.
pub fn naive_snf_diagonal(mut a: Vec<Vec<Int>>) -> Vec<Int> {
    fn reduce_block(a: &mut Vec<Vec<Int>>, t: usize) -> bool {
        let rows = a.len();
        let cols = a[0].len();
        // locate any nonzero entry
        let mut found = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() {
                    found = Some((i, j));
                    break;
                }
            }
            if found.is_some() {
                break;
            }
        }
        let Some((i, j)) = found else {
            return false;
        };
        a.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        loop {
            // plain floored-division elimination; repeats until the corner
            // divides its whole row and column
            let mut changed = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for col in t..cols {
                        let s = &a[t][col] * &q;
                        a[i][col] -= s;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                    }
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let s = &row[t] * &q;
                        row[j] -= s;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        true
    }

    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        if !reduce_block(&mut a, t) {
            break;
        }
        diag.push(a[t][t].abs());
    }
    // enforce d_1 | d_2 | … by pairwise gcd/lcm sweeps
    let mut settled = false;
    while !settled {
        settled = true;
        for i in 1..diag.len() {
            if !(&diag[i] % &diag[i - 1]).is_zero() {
                let g = diag[i].gcd(&diag[i - 1]);
                let l = diag[i].lcm(&diag[i - 1]);
                diag[i - 1] = g;
                diag[i] = l;
                settled = false;
            }
        }
    }
    diag.retain(|d| !d.is_zero());
    diag
}

/// Determinantal divisors: `Δ_k = gcd` of all `k×k` minors; the elementary
/// divisors are `Δ_k / Δ_{k−1}`. Only practical for tiny matrices; a fully
/// independent route to the same data.
pub fn determinantal_divisors(a: &[Vec<Int>]) -> Vec<Int> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let q = QField;
    let mut out = Vec::new();
    let mut prev = Int::one();
    for k in 1..=rows.min(cols) {
        let mut g = Int::zero();
        for rsel in subsets(rows, k) {
            for csel in subsets(cols, k) {
                let sub = Mat::from_rows(
                    rsel.iter()
                        .map(|&i| {
                            csel.iter()
                                .map(|&j| Rat::from_integer(a[i][j].clone()))
                                .collect()
                        })
                        .collect(),
                );
                let det = linalg::det(&q, &sub);
                debug_assert!(det.is_integer());
                g = g.gcd(&det.to_integer());
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat, rat_frac};
    use crate::hermitian::{minimal_vectors, shortest_vectors_upto};

    #[test]
    fn box_search_agrees_with_enumeration_on_identity() {
        for dd in [-3, -4, -8] {
            let k = Disc::new(dd).unwrap();
            let a = HermForm::identity(k, 2);
            let fast = minimal_vectors(&a).unwrap();
            let slow = box_minimal_vectors(&a).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn box_search_agrees_on_random_forms() {
        // deterministic pseudo-random positive definite forms at N = 1, 2
        let mut seed = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for dd in [-3, -4, -7, -11] {
            let k = Disc::new(dd).unwrap();
            for _ in 0..4 {
                let b = (next() % 5) as i64 - 2;
                let c = (next() % 5) as i64 - 2;
                let d1 = (next() % 3) as i64 + 3;
                let d2 = (next() % 3) as i64 + 4;
                let a = HermForm::from_coords(
                    k,
                    2,
                    &[rat(d1), rat(d2), rat_frac(b, 2), rat_frac(c, 2)],
                )
                .unwrap();
                if !a.is_positive_definite() {
                    continue;
                }
                assert_eq!(minimal_vectors(&a).unwrap(), box_minimal_vectors(&a).unwrap());
                let bound = rat(d1);
                let fast = shortest_vectors_upto(&a, &bound).unwrap();
                let slow = box_shortest_upto(&a, &bound).unwrap();
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn naive_snf_matches_examples() {
        let diag = naive_snf_diagonal(vec![
            vec![int(0), int(0)],
            vec![int(1920), int(-256)],
        ]);
        assert_eq!(diag, vec![int(128)]); // gcd(1920, 256) = 2⁷
        assert_eq!(
            determinantal_divisors(&[vec![int(0), int(0)], vec![int(1920), int(-256)]]),
            vec![int(128)]
        );
        let d2 = naive_snf_diagonal(vec![vec![int(2), int(0)], vec![int(0), int(3)]]);
        assert_eq!(d2, vec![int(1), int(6)]);
    }

    #[test]
    fn determinantal_divisors_match_naive() {
        let a = vec![
            vec![int(2), int(4), int(4)],
            vec![int(-6), int(6), int(12)],
            vec![int(10), int(4), int(16)],
        ];
        let dd = determinantal_divisors(&a);
        let naive = naive_snf_diagonal(a.clone());
        assert_eq!(dd, naive);
    }
}

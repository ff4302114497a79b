//! Exact Smith normal form of the differentials; homology ranks and torsion
//! per degree; the identification with group cohomology degrees.
//!
//! The SNF pipeline eliminates `±1` pivots on a sparse structure first (no
//! coefficient growth), then finishes with a classical reduction on the
//! dense residue, entirely over arbitrary-precision integers. No modular or
//! probabilistic shortcut decides any output.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::{vec, vec::Vec};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cell_complex::VoronoiComplex;
use crate::error::{Error, Result};
use crate::field::{Int, Rat};
use crate::isometry::torsion_prime_bound;
use crate::linalg::{self, Mat, QField, SparseIntMat};

/// Rank and nontrivial elementary divisors (with multiplicity, each
/// dividing the next) of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub rank: usize,
    /// divisors `> 1` in the divisibility chain, ascending, with multiplicity
    pub divisors: Vec<(Int, usize)>,
}

impl SnfResult {
    /// Full diagonal (including 1s) as a flat ascending list.
    pub fn diagonal(&self) -> Vec<Int> {
        let trivial = self.rank - self.divisors.iter().map(|(_, m)| m).sum::<usize>();
        let mut out = vec![Int::one(); trivial];
        for (d, m) in &self.divisors {
            for _ in 0..*m {
                out.push(d.clone());
            }
        }
        out
    }
}

/// Sparse phase: repeatedly eliminate a `±1` pivot (growth-free), dropping
/// its row and column. Returns the count of eliminated pivots and the dense
/// residue.
fn sparse_unit_elimination(m: &SparseIntMat) -> (usize, Vec<Vec<Int>>) {
    let mut rows: BTreeMap<usize, BTreeMap<usize, Int>> = BTreeMap::new();
    let mut col_rows: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (&(i, j), v) in &m.entries {
        rows.entry(i).or_default().insert(j, v.clone());
        col_rows.entry(j).or_default().insert(i);
    }
    let mut eliminated = 0usize;
    loop {
        // pick a ±1 entry with a light Markowitz cost
        let mut best: Option<(usize, usize, u64)> = None;
        for (&i, row) in &rows {
            for (&j, v) in row {
                if v.magnitude().is_one() {
                    let cost = (row.len() as u64 - 1)
                        * (col_rows.get(&j).map_or(1, |s| s.len() as u64) - 1);
                    if best.as_ref().is_none_or(|&(_, _, c)| cost < c) {
                        best = Some((i, j, cost));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else {
            break;
        };
        let pivot_row = rows.remove(&pi).expect("pivot row exists");
        let pivot_val = pivot_row.get(&pj).cloned().expect("pivot entry exists");
        for &j in pivot_row.keys() {
            if let Some(s) = col_rows.get_mut(&j) {
                s.remove(&pi);
            }
        }
        let touched: Vec<usize> = col_rows
            .get(&pj)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default();
        for i in touched {
            let row = rows.get_mut(&i).expect("row exists");
            let factor = row.remove(&pj).expect("column entry exists");
            if let Some(s) = col_rows.get_mut(&pj) {
                s.remove(&i);
            }
            // row ← row − (factor/pivot)·pivot_row; pivot is ±1 so the
            // quotient is factor·pivot
            let scale = &factor * &pivot_val;
            for (&j, pv) in &pivot_row {
                if j == pj {
                    continue;
                }
                let entry = row.entry(j).or_insert_with(Int::zero);
                *entry -= &scale * pv;
                if entry.is_zero() {
                    row.remove(&j);
                    if let Some(s) = col_rows.get_mut(&j) {
                        s.remove(&i);
                    }
                } else {
                    col_rows.entry(j).or_default().insert(i);
                }
            }
            if row.is_empty() {
                rows.remove(&i);
            }
        }
        col_rows.remove(&pj);
        eliminated += 1;
    }
    // densify the residue
    let live_rows: Vec<usize> = rows.keys().copied().collect();
    let live_cols: Vec<usize> = {
        let mut s = BTreeSet::new();
        for row in rows.values() {
            s.extend(row.keys().copied());
        }
        s.into_iter().collect()
    };
    let col_pos: BTreeMap<usize, usize> =
        live_cols.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let mut dense = vec![vec![Int::zero(); live_cols.len()]; live_rows.len()];
    for (ri, &i) in live_rows.iter().enumerate() {
        for (&j, v) in &rows[&i] {
            dense[ri][col_pos[&j]] = v.clone();
        }
    }
    (eliminated, dense)
}

/// Classical in-place SNF diagonalization of a dense integer matrix;
/// returns the diagonal entries (positive, divisibility-chained).
pub(crate) fn dense_snf_diagonal(mut a: Vec<Vec<Int>>) -> Vec<Int> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag: Vec<Int> = Vec::new();
    let mut t = 0usize;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| a[i][j].magnitude() < a[pi][pj].magnitude())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = false;
        while !clean {
            clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = div_round(&a[i][t], &a[t][t]);
                for j in t..cols {
                    let s = &a[t][j] * &q;
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    // remainder smaller in magnitude than the pivot
                    a.swap(t, i);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = div_round(&a[t][j], &a[t][t]);
                for row in a.iter_mut().take(rows).skip(t) {
                    let s = &row[t] * &q;
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide every remaining entry
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        for col in t..cols {
                            let add = a[i][col].clone();
                            a[t][col] += add;
                        }
                        clean = false;
                        break 'outer;
                    }
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Quotient with remainder of minimal magnitude.
fn div_round(num: &Int, den: &Int) -> Int {
    let (q, r) = num.div_rem(den);
    if r.abs() * Int::from(2) > den.abs() {
        if num.is_negative() != den.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Exact rank and elementary divisors of a sparse integer matrix. Invariant
/// under row/column permutations and sign flips of the input.
pub fn smith_normal_form(m: &SparseIntMat) -> SnfResult {
    let (unit_pivots, residue) = sparse_unit_elimination(m);
    let mut diag = dense_snf_diagonal(residue);
    diag.retain(|d| !d.is_zero());
    let rank = unit_pivots + diag.len();
    let mut divisors: BTreeMap<Int, usize> = BTreeMap::new();
    for d in diag {
        if !d.is_one() {
            *divisors.entry(d).or_insert(0) += 1;
        }
    }
    SnfResult {
        rank,
        divisors: divisors.into_iter().collect(),
    }
}

/// Rank over `Q` by plain Gaussian elimination; an independent cross-check
/// of the SNF rank.
pub fn rational_rank(m: &SparseIntMat) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut dense = Mat::filled(m.rows, m.cols, Rat::zero());
    for (&(i, j), v) in &m.entries {
        dense.set(i, j, Rat::from_integer(v.clone()));
    }
    linalg::rank(&QField, &dense)
}

/// Homology data of one degree of the Voronoi complex.
#[derive(Clone, Debug)]
pub struct DegreeHomology {
    pub dim: usize,
    /// rank of `d_dim`
    pub rank_d: usize,
    /// elementary divisors `> 1` of `d_dim`
    pub divisors_d: Vec<(Int, usize)>,
    /// free rank `|Σ_dim| − rank d_dim − rank d_{dim+1}`
    pub free_rank: usize,
    /// torsion of `H_dim`: divisors `> 1` of `d_{dim+1}`
    pub torsion: Vec<(Int, usize)>,
    /// the matching group-cohomology degree `N² − 1 − dim`
    pub cohomology_degree: usize,
}

impl DegreeHomology {
    /// `p`-Sylow content of `H_dim`: prime → multiset of prime-power orders
    /// `p^e`, one per torsion summand.
    pub fn sylow(&self) -> BTreeMap<u64, Vec<u32>> {
        let mut out: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for (d, mult) in &self.torsion {
            for (p, e) in factored_int(d) {
                for _ in 0..*mult {
                    out.entry(p).or_default().push(e);
                }
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Prime factorization of a (u64-sized) positive integer.
pub fn factored_int(v: &Int) -> Vec<(u64, u32)> {
    use num_traits::ToPrimitive;
    let mut m = v.to_u64().expect("elementary divisors fit in u64");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Homology of the whole complex: ranks and torsion per degree, labeled
/// with the matching cohomology degree and the torsion-prime caveat set.
#[derive(Clone, Debug)]
pub struct HomologyResult {
    pub degrees: Vec<DegreeHomology>,
    /// primes of the Serre class the identification is taken modulo
    pub serre_primes: Vec<u64>,
}

impl HomologyResult {
    pub fn at_dim(&self, dim: usize) -> Option<&DegreeHomology> {
        self.degrees.iter().find(|d| d.dim == dim)
    }
}

/// Computes homology from the differentials. The chain identity
/// `d_n·d_{n+1} = 0` is re-verified first and a violation aborts.
pub fn homology(complex: &VoronoiComplex) -> Result<HomologyResult> {
    let top = complex.top_dim();
    let bottom = complex.bottom_dim();
    for d in bottom + 1..=top {
        if !complex.differentials[d - 1]
            .mul(&complex.differentials[d])
            .is_zero()
        {
            return Err(Error::Internal(alloc::format!(
                "chain identity fails at degree {d}"
            )));
        }
    }
    let snf: BTreeMap<usize, SnfResult> = (bottom..=top)
        .map(|d| (d, smith_normal_form(&complex.differentials[d])))
        .collect();
    #[cfg(debug_assertions)]
    for d in bottom..=top {
        debug_assert_eq!(snf[&d].rank, rational_rank(&complex.differentials[d]));
    }
    let serre_primes: Vec<u64> = torsion_prime_bound(complex.n, complex.k)
        .into_iter()
        .collect();
    let degrees = (bottom..=top)
        .map(|d| {
            let rank_next = if d == top { 0 } else { snf[&(d + 1)].rank };
            let torsion = if d == top {
                Vec::new()
            } else {
                snf[&(d + 1)].divisors.clone()
            };
            DegreeHomology {
                dim: d,
                rank_d: snf[&d].rank,
                divisors_d: snf[&d].divisors.clone(),
                free_rank: complex.orientable[d].len() - snf[&d].rank - rank_next,
                torsion,
                cohomology_degree: complex.n * complex.n - 1 - d,
            }
        })
        .collect();
    Ok(HomologyResult {
        degrees,
        serre_primes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;

    fn sparse(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> SparseIntMat {
        let mut m = SparseIntMat::zero(rows, cols);
        for &(i, j, v) in entries {
            m.add_entry(i, j, int(v));
        }
        m
    }

    #[test]
    fn snf_of_top_differential_example() {
        // [[0, 0], [1920, −256]] → rank 1, one elementary divisor
        // gcd(1920, 256) = 2⁷ = 128
        let m = sparse(2, 2, &[(1, 0, 1920), (1, 1, -256)]);
        let r = smith_normal_form(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.divisors, vec![(int(128), 1)]);
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = sparse(3, 3, &[(0, 0, 1), (1, 1, 1), (2, 2, 1)]);
        let r = smith_normal_form(&id);
        assert_eq!(r.rank, 3);
        assert!(r.divisors.is_empty());
        let z = SparseIntMat::zero(4, 5);
        let rz = smith_normal_form(&z);
        assert_eq!(rz.rank, 0);
        assert!(rz.divisors.is_empty());
    }

    #[test]
    fn snf_divisibility_chain() {
        // diag(2, 3) ~ diag(1, 6)
        let m = sparse(2, 2, &[(0, 0, 2), (1, 1, 3)]);
        let r = smith_normal_form(&m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.divisors, vec![(int(6), 1)]);
        assert_eq!(r.diagonal(), vec![int(1), int(6)]);
    }

    #[test]
    fn snf_rank_matches_rational_rank() {
        let m = sparse(
            3,
            4,
            &[
                (0, 0, 2),
                (0, 2, 4),
                (1, 1, 6),
                (1, 3, 9),
                (2, 0, 2),
                (2, 2, 4),
            ],
        );
        assert_eq!(smith_normal_form(&m).rank, rational_rank(&m));
        assert_eq!(smith_normal_form(&m).rank, 2);
    }

    #[test]
    fn div_round_is_symmetric_remainder() {
        assert_eq!(div_round(&int(7), &int(2)), int(3));
        assert_eq!(div_round(&int(-7), &int(2)), int(-3));
        assert_eq!(div_round(&int(7), &int(-2)), int(-3));
        assert_eq!(div_round(&int(5), &int(5)), int(1));
        assert_eq!(div_round(&int(4), &int(3)), int(1));
    }

    #[test]
    fn sylow_reporting() {
        let h = DegreeHomology {
            dim: 5,
            rank_d: 0,
            divisors_d: Vec::new(),
            free_rank: 1,
            torsion: vec![(int(2), 1), (int(36), 1)],
            cohomology_degree: 3,
        };
        let syl = h.sylow();
        assert_eq!(syl[&2], vec![1, 2]); // Z₂ and Z₄
        assert_eq!(syl[&3], vec![2]); // Z₉
    }
}

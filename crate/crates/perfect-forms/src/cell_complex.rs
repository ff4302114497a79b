//! Orbit representatives of the cells of `X*_N` meeting `X_N`, by face
//! descent from the perfect cones; orientability; and the integer
//! differential matrices of the Voronoi complex.
//!
//! Descent runs top-down. Every representative's cone facets are computed
//! exactly; facets whose vector set fails to span `F^N` (not well-rounded)
//! are boundary cells and are dropped. Remaining facets are fused into
//! orbits with the backtrack equivalence, memoized on the exact canonical
//! vector set. Orientations are chosen deterministically: the basis of a
//! cell's span is the first maximal independent subset of `{coords(q(v))}`
//! in canonical vector order, and the induced boundary orientation puts an
//! outward vector first. Entry signs are convention-dependent; ranks,
//! elementary divisors and the two-entry structure of the top differential
//! are not.

use alloc::collections::BTreeMap;
use alloc::{vec, vec::Vec};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{int, Disc, Int, Rat};
use crate::hermitian::{f_span_rank, HermForm, OVec};
use crate::isometry::{cell_equivalent, stabilizer, GroupElt, Stabilizer, VecSetGeom};
use crate::linalg::{self, Mat, QField, SparseIntMat};
use crate::polyhedra::{dual_description, span_rank};
use crate::voronoi::Census;

/// An orbit representative of a cell of `X*_N` meeting `X_N`.
#[derive(Clone, Debug)]
pub struct Cell {
    /// Sorted canonical minimal vectors `M(σ)`.
    pub vectors: Vec<OVec>,
    /// Dimension in `X*_N`: rank of the `q`-span minus one.
    pub dim: usize,
    /// Coordinates of `q(v)`, aligned with `vectors`.
    pub qcoords: Vec<Vec<Rat>>,
    /// Equivariant pairing geometry (used for equivalence and stabilizers).
    pub geom: VecSetGeom,
    pub stabilizer: Stabilizer,
    pub orientable: bool,
    /// Orientation basis: indices into `vectors` whose `q`-coordinates form
    /// the first maximal independent subset in canonical order.
    pub basis: Vec<usize>,
    basis_mat: Mat<Rat>,
    /// Negated sum of all generators: an outward vector for every facet.
    outward: Vec<Rat>,
}

impl Cell {
    pub fn new(k: Disc, vectors: Vec<OVec>) -> Result<Cell> {
        let mut vectors = vectors;
        vectors.sort();
        let n = vectors.first().ok_or(Error::EmptyInput)?.len();
        if f_span_rank(k, &vectors) != n {
            return Err(Error::Internal(alloc::string::String::from(
                "cell vector set is not well-rounded",
            )));
        }
        let qcoords: Vec<Vec<Rat>> = vectors
            .iter()
            .map(|v| Ok(HermForm::rank_one(k, v)?.coords()))
            .collect::<Result<_>>()?;
        let rank = span_rank(&qcoords);
        debug_assert!(rank >= 1);
        let geom = VecSetGeom::for_cell(k, &vectors)?;
        let stab = stabilizer(&geom)?;
        // first maximal independent subset in canonical vector order
        let dim_ambient = n * n;
        let mut sb = linalg::SpanBuilder::new(QField, dim_ambient);
        let mut basis = Vec::new();
        for (i, qc) in qcoords.iter().enumerate() {
            if sb.try_add(qc) {
                basis.push(i);
                if basis.len() == rank {
                    break;
                }
            }
        }
        debug_assert_eq!(basis.len(), rank);
        let basis_mat = Mat::from_rows(
            (0..dim_ambient)
                .map(|r| basis.iter().map(|&b| qcoords[b][r].clone()).collect())
                .collect(),
        );
        let mut outward = vec![Rat::from_integer(int(0)); dim_ambient];
        for qc in &qcoords {
            for (o, c) in outward.iter_mut().zip(qc.iter()) {
                *o -= c;
            }
        }
        let mut cell = Cell {
            vectors,
            dim: rank - 1,
            qcoords,
            geom,
            stabilizer: stab,
            orientable: true,
            basis,
            basis_mat,
            outward,
        };
        let mut orientable = true;
        for g in cell.stabilizer.generators.clone() {
            if orientation_action(&cell, &g)? < 0 {
                orientable = false;
                break;
            }
        }
        cell.orientable = orientable;
        Ok(cell)
    }

    /// Express columns (ambient coordinate vectors inside this cell's span)
    /// in the orientation basis and return the determinant sign.
    fn det_sign_in_basis(&self, cols: Vec<Vec<Rat>>) -> Result<i8> {
        let d = self.basis_mat.rows;
        debug_assert!(cols.iter().all(|c| c.len() == d));
        let rhs = Mat::from_rows(
            (0..d)
                .map(|r| cols.iter().map(|c| c[r].clone()).collect())
                .collect(),
        );
        let z = linalg::solve(&QField, &self.basis_mat, &rhs).ok_or_else(|| {
            Error::Internal(alloc::string::String::from("vector outside cell span"))
        })?;
        // solve() leaves free rows zero only when consistent; verify exactly
        if linalg::mat_mul(&QField, &self.basis_mat, &z) != rhs {
            return Err(Error::Internal(alloc::string::String::from(
                "vector outside cell span",
            )));
        }
        let det = linalg::det(&QField, &z);
        Ok(if det.is_positive() {
            1
        } else if det.is_negative() {
            -1
        } else {
            0
        })
    }
}

/// Sign of the determinant of the linear map `X ↦ γXγ*` restricted to the
/// cell's span, in the cell's orientation basis. Errors when `γ` does not
/// preserve the span.
pub fn orientation_action(cell: &Cell, g: &GroupElt) -> Result<i8> {
    let k = cell.geom.k;
    let gmat = g.to_mat();
    let cols: Vec<Vec<Rat>> = cell
        .basis
        .iter()
        .map(|&b| {
            let x = HermForm::from_coords(k, g.n, &cell.qcoords[b])?;
            Ok(x.transform(&gmat).coords())
        })
        .collect::<Result<_>>()?;
    let s = cell.det_sign_in_basis(cols)?;
    if s == 0 {
        return Err(Error::Internal(alloc::string::String::from(
            "orientation action is singular",
        )));
    }
    Ok(s)
}

/// The per-dimension cell representatives and integer differentials of the
/// Voronoi complex for one `(N, D)`.
#[derive(Clone, Debug)]
pub struct VoronoiComplex {
    pub k: Disc,
    pub n: usize,
    /// `cells[d]` = orbit representatives of `d`-cells; empty below `N − 1`
    /// and above `N² − 1`.
    pub cells: Vec<Vec<Cell>>,
    /// Per dimension, indices of the orientable cells: the ordered basis of
    /// the chain group `V_d`.
    pub orientable: Vec<Vec<usize>>,
    /// `differentials[d]`: matrix of `d_d : V_d → V_{d−1}` with
    /// `|Σ_{d−1}|`-by-`|Σ_d|` orientable-orbit indexing.
    pub differentials: Vec<SparseIntMat>,
}

impl VoronoiComplex {
    pub fn top_dim(&self) -> usize {
        self.n * self.n - 1
    }

    pub fn bottom_dim(&self) -> usize {
        self.n - 1
    }

    /// Stabilizer orders of all `Σ*_d` representatives, per dimension.
    pub fn stab_orders_by_dim(&self) -> Vec<Vec<Int>> {
        self.cells
            .iter()
            .map(|cs| cs.iter().map(|c| c.stabilizer.order.clone()).collect())
            .collect()
    }
}

/// Contribution sign of one facet of `σ` fused to the representative `τ`
/// via `γ·M(facet) = M(τ)`: outward vector first, then `τ`'s orientation
/// basis pulled back through `γ⁻¹`, compared against `σ`'s basis.
fn boundary_sign(k: Disc, sigma: &Cell, tau: &Cell, witness: &GroupElt) -> Result<i8> {
    let g_inv = witness
        .inverse(k)
        .ok_or_else(|| Error::Internal(alloc::string::String::from("witness not invertible")))?;
    let g_inv_mat = g_inv.to_mat();
    let mut cols = Vec::with_capacity(tau.basis.len() + 1);
    cols.push(sigma.outward.clone());
    for &b in &tau.basis {
        let x = HermForm::from_coords(k, g_inv.n, &tau.qcoords[b])?;
        cols.push(x.transform(&g_inv_mat).coords());
    }
    let s = sigma.det_sign_in_basis(cols)?;
    if s == 0 {
        return Err(Error::Internal(alloc::string::String::from(
            "degenerate boundary frame",
        )));
    }
    Ok(s)
}

/// Builds all cell orbits meeting `X_N` (dimensions `N−1 … N²−1`) and the
/// differential matrices, by face descent from the perfect cones.
pub fn build_complex(census: &Census) -> Result<VoronoiComplex> {
    build_complex_down_to(census, census.n - 1)
}

/// Face descent stopped early: only dimensions `≥ stop_dim` are populated.
/// With `stop_dim = N² − 2` this yields the top slice (the perfect cones,
/// their codimension-one orbits, and the top differential) without the full
/// complex.
pub fn build_complex_down_to(census: &Census, stop_dim: usize) -> Result<VoronoiComplex> {
    let k = census.k;
    let n = census.n;
    let top = n * n - 1;
    let stop = stop_dim.max(n - 1);
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
    // triplets (lower cell id, upper cell id, sign sum) per dimension d
    let mut triplets: Vec<BTreeMap<(usize, usize), Int>> =
        vec![BTreeMap::new(); top + 1];

    for rec in &census.classes {
        cells[top].push(Cell::new(k, rec.minvec.vectors.clone())?);
    }

    for d in (stop + 1..=top).rev() {
        // memo: exact facet vector set → (representative id, witness)
        let mut memo: BTreeMap<Vec<OVec>, (usize, GroupElt)> = BTreeMap::new();
        let mut lower_keys: Vec<(usize, Vec<Rat>)> = Vec::new();
        let upper_count = cells[d].len();
        for ci in 0..upper_count {
            let dd = dual_description(&cells[d][ci].qcoords)?;
            debug_assert_eq!(dd.rank, d + 1);
            for facet in &dd.facets {
                let sub: Vec<OVec> = facet
                    .iter()
                    .map(|&i| cells[d][ci].vectors[i].clone())
                    .collect();
                if f_span_rank(k, &sub) != n {
                    continue; // boundary cell, not well-rounded
                }
                let (tid, witness) = match memo.get(&sub) {
                    Some(hit) => hit.clone(),
                    None => {
                        let geom = VecSetGeom::for_cell(k, &sub)?;
                        let key = geom.invariant_key();
                        let mut found: Option<(usize, GroupElt)> = None;
                        for (ti, tcell) in cells[d - 1].iter().enumerate() {
                            if lower_keys[ti] == key {
                                if let Some(g) = cell_equivalent(&geom, &tcell.geom)? {
                                    found = Some((ti, g));
                                    break;
                                }
                            }
                        }
                        let hit = match found {
                            Some(h) => h,
                            None => {
                                let cell = Cell::new(k, sub.clone())?;
                                debug_assert_eq!(cell.dim, d - 1);
                                cells[d - 1].push(cell);
                                lower_keys.push(key);
                                (cells[d - 1].len() - 1, GroupElt::identity(n))
                            }
                        };
                        memo.insert(sub.clone(), hit.clone());
                        hit
                    }
                };
                // chain contribution only between orientable orbits
                if cells[d][ci].orientable && cells[d - 1][tid].orientable {
                    let sign = boundary_sign(k, &cells[d][ci], &cells[d - 1][tid], &witness)?;
                    let e = triplets[d].entry((tid, ci)).or_insert_with(|| int(0));
                    *e += int(sign as i64);
                }
            }
        }
    }

    let orientable: Vec<Vec<usize>> = cells
        .iter()
        .map(|cs| {
            cs.iter()
                .enumerate()
                .filter(|(_, c)| c.orientable)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let mut differentials = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let rows = if d == 0 { 0 } else { orientable[d - 1].len() };
        let cols = orientable[d].len();
        let mut m = SparseIntMat::zero(rows, cols);
        if d > 0 {
            let row_pos: BTreeMap<usize, usize> = orientable[d - 1]
                .iter()
                .enumerate()
                .map(|(pos, &id)| (id, pos))
                .collect();
            let col_pos: BTreeMap<usize, usize> = orientable[d]
                .iter()
                .enumerate()
                .map(|(pos, &id)| (id, pos))
                .collect();
            for (&(tid, ci), v) in &triplets[d] {
                if v.is_zero() {
                    continue;
                }
                let (Some(&r), Some(&c)) = (row_pos.get(&tid), col_pos.get(&ci)) else {
                    continue;
                };
                m.add_entry(r, c, v.clone());
            }
        }
        differentials.push(m);
    }

    Ok(VoronoiComplex {
        k,
        n,
        cells,
        orientable,
        differentials,
    })
}

/// Per-degree census data in the shape of the result tables: orbit counts,
/// stabilizer orders with multiplicity, orientable counts, and nonzero
/// entries of the differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSummary {
    pub dim: usize,
    /// `|Σ*_dim|`
    pub orbit_count: usize,
    /// stabilizer order → multiplicity, ascending
    pub stab_orders: Vec<(Int, usize)>,
    /// `|Σ_dim|`
    pub orientable_count: usize,
    /// nonzero entries of `d_dim`
    pub nnz: usize,
}

pub fn summarize(complex: &VoronoiComplex) -> Vec<DegreeSummary> {
    (complex.bottom_dim()..=complex.top_dim())
        .map(|d| {
            let mut counts: BTreeMap<Int, usize> = BTreeMap::new();
            for c in &complex.cells[d] {
                *counts.entry(c.stabilizer.order.clone()).or_insert(0) += 1;
            }
            DegreeSummary {
                dim: d,
                orbit_count: complex.cells[d].len(),
                stab_orders: counts.into_iter().collect(),
                orientable_count: complex.orientable[d].len(),
                nnz: complex.differentials[d].nnz(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voronoi::{enumerate_perfect_forms, ExploreCaps};

    fn d(dd: i64) -> Disc {
        Disc::new(dd).unwrap()
    }

    fn small_complex(dd: i64, n: usize) -> VoronoiComplex {
        let census = enumerate_perfect_forms(d(dd), n, &ExploreCaps::default()).unwrap();
        build_complex(&census).unwrap()
    }

    #[test]
    fn rank_one_complex_is_a_point() {
        let c = small_complex(-4, 1);
        assert_eq!(c.cells[0].len(), 1);
        assert!(c.cells[0][0].orientable);
        assert_eq!(c.cells[0][0].stabilizer.order, int(4));
    }

    #[test]
    fn rank_two_gaussian_complex() {
        let c = small_complex(-4, 2);
        // top cells = perfect classes; dims run from N−1 = 1 to N²−1 = 3
        assert!(!c.cells[3].is_empty());
        assert!(c.cells[0].is_empty());
        // every top cell is orientable
        for cell in &c.cells[3] {
            assert!(cell.orientable);
        }
        // chain identity d∘d = 0
        for dd in 2..=3 {
            let prod = c.differentials[dd - 1].mul(&c.differentials[dd]);
            assert!(prod.is_zero(), "d∘d ≠ 0 at degree {dd}");
        }
        // identity acts with positive orientation everywhere
        for dim in 1..=3 {
            for cell in &c.cells[dim] {
                assert_eq!(orientation_action(cell, &GroupElt::identity(2)).unwrap(), 1);
            }
        }
        // unit scalars act trivially on forms
        let u = GroupElt::scalar(2, &crate::field::QuadInt::omega());
        for cell in &c.cells[3] {
            assert_eq!(orientation_action(cell, &u).unwrap(), 1);
        }
    }

    #[test]
    fn rank_two_eisenstein_complex() {
        let c = small_complex(-3, 2);
        for dd in 2..=3 {
            let prod = c.differentials[dd - 1].mul(&c.differentials[dd]);
            assert!(prod.is_zero());
        }
        // well-roundedness filter: every cell spans F^N
        for dim in 1..=3 {
            for cell in &c.cells[dim] {
                assert_eq!(f_span_rank(d(-3), &cell.vectors), 2);
            }
        }
    }

    #[test]
    fn summaries_have_consistent_counts() {
        let c = small_complex(-4, 2);
        let s = summarize(&c);
        for row in &s {
            assert!(row.orientable_count <= row.orbit_count);
            let mult_total: usize = row.stab_orders.iter().map(|(_, m)| m).sum();
            assert_eq!(mult_total, row.orbit_count);
        }
    }
}

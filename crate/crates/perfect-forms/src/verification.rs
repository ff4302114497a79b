//! The three executable consistency checks: chain identity, mass formula,
//! and the explicit top-degree cycle.
//!
//! The mass formula states that the alternating sum of reciprocal
//! stabilizer orders over all cell orbits vanishes (the equivariant Euler
//! characteristic equals `χ(GL_N(O)) = 0` for `N ≥ 2`). The explicit cycle
//! is `ξ = Σ_σ (1/|Stab(σ)|)[σ]` over the top cells; clearing denominators
//! gives an integer vector that the top differential must kill.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::cell_complex::VoronoiComplex;
use crate::error::{Error, Result};
use crate::field::{Int, Rat};
use crate::linalg::SparseIntMat;
use crate::polyhedra::primitive;

/// Per-dimension partial sums `Σ_σ 1/|Stab(σ)|` and the alternating total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassReport {
    /// `(dimension, Σ 1/|Stab|)` per dimension with at least one cell.
    pub per_dim: Vec<(usize, Rat)>,
    /// `Σ_k (−1)^k · per_dim[k]`, exactly zero for complete complexes.
    pub total: Rat,
}

impl MassReport {
    pub fn passes(&self) -> bool {
        self.total.is_zero()
    }

    /// The signed term for a dimension, as displayed in the tables.
    pub fn signed_term(&self, dim: usize) -> Option<Rat> {
        self.per_dim.iter().find(|(d, _)| *d == dim).map(|(d, s)| {
            if d % 2 == 0 {
                s.clone()
            } else {
                -s.clone()
            }
        })
    }
}

/// Mass formula over per-dimension stabilizer orders of all `Σ*` orbits.
pub fn mass_formula(orders_by_dim: &[Vec<Int>]) -> MassReport {
    let mut per_dim = Vec::new();
    let mut total = Rat::zero();
    for (dim, orders) in orders_by_dim.iter().enumerate() {
        if orders.is_empty() {
            continue;
        }
        let sum: Rat = orders
            .iter()
            .map(|o| Rat::new(Int::from(1), o.clone()))
            .sum();
        if dim % 2 == 0 {
            total += &sum;
        } else {
            total -= &sum;
        }
        per_dim.push((dim, sum));
    }
    MassReport { per_dim, total }
}

pub fn mass_formula_of(complex: &VoronoiComplex) -> MassReport {
    mass_formula(&complex.stab_orders_by_dim())
}

/// Exact verification of `d_{n−1}·d_n = 0` for all consecutive degrees;
/// returns the first failing degree if any.
pub fn chain_identity(differentials: &[SparseIntMat]) -> core::result::Result<(), usize> {
    for d in 1..differentials.len() {
        if differentials[d - 1].cols != differentials[d].rows {
            continue;
        }
        if !differentials[d - 1].mul(&differentials[d]).is_zero() {
            return Err(d);
        }
    }
    Ok(())
}

pub fn chain_identity_of(complex: &VoronoiComplex) -> core::result::Result<(), usize> {
    chain_identity(&complex.differentials)
}

/// Outcome of the top-cycle check.
#[derive(Clone, Debug)]
pub struct XiReport {
    /// The cleared-denominator `ξ` spans the kernel of the top differential.
    pub is_cycle: bool,
    /// Primitive integer generator of `ker d_top` (empty if the kernel is
    /// not one-dimensional). Entry signs depend on the orientation choices;
    /// absolute values do not.
    pub kernel: Vec<Int>,
    /// The cleared-denominator weights `lcm/|Stab(σ)|`, primitive.
    pub weights: Vec<Int>,
    /// Stabilizer orders of the top cells, in chain-basis order.
    pub stab_orders: Vec<Int>,
}

/// Verifies that `ξ = Σ_σ (1/|Stab(σ)|)[σ]` is a cycle for a suitable
/// choice of cell orientations: all top cells must be orientable, the
/// kernel of the top differential must be one-dimensional, and its
/// primitive generator must agree with the cleared-denominator weights
/// `lcm/|Stab(σ)|` up to entrywise sign. (Flipping a cell's orientation
/// negates the matching kernel entry, so the absolute values carry the
/// orientation-independent content.)
pub fn xi_cycle_check(complex: &VoronoiComplex) -> Result<XiReport> {
    let top = complex.top_dim();
    let top_cells = &complex.cells[top];
    if top_cells.iter().any(|c| !c.orientable) {
        return Err(Error::Internal(alloc::string::String::from(
            "non-orientable top cell",
        )));
    }
    let orders: Vec<Int> = complex.orientable[top]
        .iter()
        .map(|&i| top_cells[i].stabilizer.order.clone())
        .collect();
    xi_cycle_check_parts(&complex.differentials[top], &orders)
}

/// The top-cycle check on raw parts (used for checkpointed data): the top
/// differential and the stabilizer orders of the (orientable) top cells.
pub fn xi_cycle_check_parts(d_top: &SparseIntMat, orders: &[Int]) -> Result<XiReport> {
    let orders = orders.to_vec();
    if orders.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut lcm = Int::from(1);
    for o in &orders {
        lcm = lcm.lcm(o);
    }
    let weight_rats: Vec<Rat> = orders
        .iter()
        .map(|o| Rat::new(Int::from(1), o.clone()))
        .collect();
    let weights = primitive(&weight_rats);
    debug_assert_eq!(
        weights,
        orders.iter().map(|o| &lcm / o).collect::<Vec<_>>()
    );
    // kernel of d_top over Q
    let d = d_top;
    let mut dense = crate::linalg::Mat::filled(d.rows.max(1), d.cols, Rat::zero());
    for (&(i, j), v) in &d.entries {
        dense.set(i, j, Rat::from_integer(v.clone()));
    }
    let ns = crate::linalg::nullspace(&crate::linalg::QField, &dense);
    if ns.len() != 1 {
        return Ok(XiReport {
            is_cycle: false,
            kernel: Vec::new(),
            weights,
            stab_orders: orders,
        });
    }
    let kernel = primitive(&ns[0]);
    let matches = kernel
        .iter()
        .zip(weights.iter())
        .all(|(g, w)| g.abs() == *w);
    Ok(XiReport {
        is_cycle: matches,
        kernel,
        weights,
        stab_orders: orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell_complex::build_complex;
    use crate::field::{int, rat, rat_frac, Disc};
    use crate::voronoi::{enumerate_perfect_forms, ExploreCaps};

    #[test]
    fn toy_single_cell_mass_fails() {
        // one cell in even dimension with stabilizer order s: total 1/s ≠ 0
        let report = mass_formula(&[vec![], vec![], vec![int(6)]]);
        assert!(!report.passes());
        assert_eq!(report.total, rat_frac(1, 6));
    }

    #[test]
    fn balanced_toy_mass_passes() {
        let report = mass_formula(&[vec![], vec![int(2), int(2)], vec![int(1)]]);
        assert!(report.passes());
        assert_eq!(report.signed_term(1), Some(rat_frac(-1, 1)));
        assert_eq!(report.signed_term(2), Some(rat(1)));
    }

    #[test]
    fn toy_chain_identity_negative_control() {
        // d1: 1×1 [1], d2: 1×1 [1]: product [1] ≠ 0
        let mut d1 = SparseIntMat::zero(1, 1);
        d1.add_entry(0, 0, int(1));
        let d2 = d1.clone();
        assert_eq!(chain_identity(&[d1.clone(), d2]), Err(1));
        // zero maps pass vacuously
        let z1 = SparseIntMat::zero(1, 1);
        let z2 = SparseIntMat::zero(1, 1);
        assert_eq!(chain_identity(&[z1, z2]), Ok(()));
        assert_eq!(chain_identity(&[]), Ok(()));
    }

    #[test]
    fn rank_two_gaussian_all_checks() {
        let k = Disc::new(-4).unwrap();
        let census = enumerate_perfect_forms(k, 2, &ExploreCaps::default()).unwrap();
        let complex = build_complex(&census).unwrap();
        assert!(chain_identity_of(&complex).is_ok());
        let mass = mass_formula_of(&complex);
        assert!(mass.passes(), "mass total = {}", mass.total);
        let xi = xi_cycle_check(&complex).unwrap();
        assert!(xi.is_cycle);
    }

    #[test]
    fn rank_two_eisenstein_all_checks() {
        let k = Disc::new(-3).unwrap();
        let census = enumerate_perfect_forms(k, 2, &ExploreCaps::default()).unwrap();
        let complex = build_complex(&census).unwrap();
        assert!(chain_identity_of(&complex).is_ok());
        assert!(mass_formula_of(&complex).passes());
        assert!(xi_cycle_check(&complex).unwrap().is_cycle);
    }

    #[test]
    fn corrupted_stabilizer_breaks_mass() {
        let k = Disc::new(-4).unwrap();
        let census = enumerate_perfect_forms(k, 2, &ExploreCaps::default()).unwrap();
        let complex = build_complex(&census).unwrap();
        let mut orders = complex.stab_orders_by_dim();
        // bit-flip one stabilizer order
        let dim = complex.top_dim();
        orders[dim][0] += 1;
        assert!(!mass_formula(&orders).passes());
    }

    #[test]
    fn zero_top_differential_makes_xi_trivially_a_cycle() {
        let k = Disc::new(-4).unwrap();
        let census = enumerate_perfect_forms(k, 1, &ExploreCaps::default()).unwrap();
        let complex = build_complex(&census).unwrap();
        let xi = xi_cycle_check(&complex).unwrap();
        assert!(xi.is_cycle);
        assert_eq!(xi.kernel, vec![int(1)]);
    }
}

//! The Voronoi algorithm over imaginary quadratic fields: find an initial
//! perfect form, walk the neighbor graph across facets of the perfect cones,
//! and return all perfect forms up to `GL_N(O)`-equivalence, normalized to
//! minimum 1.
//!
//! Facet normals are stored inward (`⟨H, q(v)⟩ ≥ 0` on the cone's
//! generators); the flip moves along the inward normal, which pins the
//! facet's vectors at value 1, pushes the remaining minimal vectors up, and
//! stops at the exact smallest `ρ > 0` where a new vector reaches value 1.
//! A facet whose normal is positive semidefinite has no blocking vector:
//! such facets lie on the boundary of the cone of semidefinite forms and
//! are skipped by the walk.

use alloc::collections::VecDeque;
use alloc::{vec, vec::Vec};

use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{rat, Disc, Rat};
use crate::hermitian::{
    dual_to_form, minimal_vectors, shortest_vectors_upto, shortest_vectors_upto_limited,
    HermForm, MinVectors, OVec,
};
use crate::isometry::{form_equivalent, stabilizer, Stabilizer, VecSetGeom};
use crate::polyhedra::{dual_description, span_rank, DualDescription};

/// Iteration caps; all loops are theoretically finite, the caps turn a bug
/// into a diagnostic error instead of a hang.
#[derive(Clone, Copy, Debug)]
pub struct ExploreCaps {
    pub perfection_iters: usize,
    pub blocking_iters: usize,
    pub max_classes: usize,
}

impl Default for ExploreCaps {
    fn default() -> Self {
        ExploreCaps {
            perfection_iters: 512,
            blocking_iters: 4096,
            max_classes: 1 << 20,
        }
    }
}

/// A perfect form with its minimal vectors, perfect-cone facet structure,
/// neighbor links and stabilizer.
#[derive(Clone, Debug)]
pub struct PerfectForm {
    pub form: HermForm,
    pub minvec: MinVectors,
    /// Coordinates of `q(v)` per canonical minimal vector, aligned with
    /// `minvec.vectors`.
    pub qcoords: Vec<Vec<Rat>>,
    /// Minimal vectors with the form pairing, for equivalence tests.
    pub geom: VecSetGeom,
    /// Facets of the perfect cone (inward normals).
    pub facets: DualDescription,
    /// Per facet: the equivalence class reached across it, or `None` for a
    /// boundary facet (no neighbor).
    pub neighbors: Vec<(usize, Option<usize>)>,
    /// Stabilizer of the perfect cone in `GL_N(O)`.
    pub stabilizer: Stabilizer,
}

impl PerfectForm {
    /// Builds the full record for a perfect form with `m(A) = 1`; checks
    /// perfection (the `q(v)` span the whole space of Hermitian forms).
    pub fn from_form(form: HermForm) -> Result<PerfectForm> {
        let k = form.disc();
        let n = form.rank();
        let minvec = minimal_vectors(&form)?;
        if !minvec.minimum.is_one() {
            return Err(Error::Internal(alloc::string::String::from(
                "perfect form not normalized to minimum 1",
            )));
        }
        let qcoords: Vec<Vec<Rat>> = minvec
            .vectors
            .iter()
            .map(|v| Ok(HermForm::rank_one(k, v)?.coords()))
            .collect::<Result<_>>()?;
        if span_rank(&qcoords) != n * n {
            return Err(Error::Internal(alloc::string::String::from(
                "form is not perfect: q(M) does not span",
            )));
        }
        let geom = VecSetGeom::for_form(&form, &minvec.vectors)?;
        let mut facets = dual_description(&qcoords)?;
        // deterministic facet order
        let mut order: Vec<usize> = (0..facets.facets.len()).collect();
        order.sort_by(|&a, &b| facets.facets[a].cmp(&facets.facets[b]));
        facets.normals = order.iter().map(|&i| facets.normals[i].clone()).collect();
        facets.facets = order.iter().map(|&i| facets.facets[i].clone()).collect();
        let stab = stabilizer(&VecSetGeom::for_cell(k, &minvec.vectors)?)?;
        Ok(PerfectForm {
            form,
            minvec,
            qcoords,
            geom,
            facets,
            neighbors: Vec::new(),
            stabilizer: stab,
        })
    }
}

/// Result of a blocking search along `A + ρH`.
struct Blocking {
    #[allow(dead_code)]
    rho: Rat,
    form: HermForm,
}

/// Smallest exact `ρ > 0` such that `A + ρH` has minimum 1 attained by a
/// vector with `H[w] < 0`. Requires `H[v] ≥ 0` on the current minimal
/// vectors (pinned or increasing) and `H` not positive semidefinite.
///
/// Any vector seen with value below 1 yields an exact smaller candidate
/// `ρ' = (1 − A[w])/H[w] ≥ ρ*`, so the sublevel enumeration may be
/// abandoned early (`limit`); only the final certification at `ρ*` needs a
/// complete list. Near the boundary of the positive definite cone sublevel
/// sets are huge, which is exactly where the early-out matters.
fn first_blocking(a: &HermForm, h: &HermForm, limit: usize, caps: &ExploreCaps) -> Result<Blocking> {
    let one = rat(1);
    let two = rat(2);
    let mut lo = rat(0);
    let mut hi: Option<Rat> = None;
    let mut rho = rat(1);
    for _ in 0..caps.blocking_iters {
        let b = a.add_scaled(h, &rho);
        if !b.is_positive_definite() {
            hi = Some(rho.clone());
            rho = (&lo + hi.as_ref().unwrap()) / &two;
            continue;
        }
        let (mut short, mut complete) = shortest_vectors_upto_limited(&b, &one, limit)?;
        let mut proposal = propose_from(a, h, &one, &short)?;
        if proposal.is_none() && !complete {
            // limited scan saw only value-1 vectors; certify with a full one
            let full = shortest_vectors_upto(&b, &one)?;
            short = full;
            complete = true;
            proposal = propose_from(a, h, &one, &short)?;
        }
        match proposal {
            Some(p) => {
                debug_assert!(p < rho);
                rho = p;
            }
            None => {
                debug_assert!(complete);
                let mut has_new_negative = false;
                for (w, _) in &short {
                    if h.evaluate(w)? < rat(0) {
                        has_new_negative = true;
                        break;
                    }
                }
                if has_new_negative {
                    return Ok(Blocking { rho, form: b });
                }
                lo = rho.clone();
                rho = match &hi {
                    Some(h) => (&lo + h) / &two,
                    None => &rho * &two,
                };
            }
        }
    }
    Err(Error::IterationCap("blocking search"))
}

/// Exact candidate `ρ' = min_w (1 − A[w])/H[w]` over the vectors seen with
/// value strictly below 1.
fn propose_from(
    a: &HermForm,
    h: &HermForm,
    one: &Rat,
    short: &[(OVec, Rat)],
) -> Result<Option<Rat>> {
    let mut proposal: Option<Rat> = None;
    for (w, val) in short {
        if *val < *one {
            let aw = a.evaluate(w)?;
            let hw = h.evaluate(w)?;
            debug_assert!(hw < rat(0));
            let r = (one - &aw) / &hw;
            proposal = Some(match proposal {
                Some(p) if p <= r => p,
                _ => r,
            });
        }
    }
    Ok(proposal)
}

/// The perfection procedure: starting from the identity form (rescaled to
/// minimum 1), repeatedly pick an exact direction `H` orthogonal to all
/// `q(v)` under the trace pairing and move to the largest `ρ` keeping the
/// minimum; each step strictly grows the span of `q(M)`.
pub fn initial_perfect_form(k: Disc, n: usize, caps: &ExploreCaps) -> Result<HermForm> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut a = HermForm::identity(k, n);
    let mv0 = minimal_vectors(&a)?;
    if !mv0.minimum.is_one() {
        a = a.scale(&mv0.minimum.recip());
    }
    let dim = n * n;
    // basis Hermitian matrices for reading off ⟨·, q(v)⟩ as coordinates
    let basis: Vec<HermForm> = (0..dim)
        .map(|p| {
            let mut c = vec![rat(0); dim];
            c[p] = rat(1);
            HermForm::from_coords(k, n, &c)
        })
        .collect::<Result<_>>()?;
    for _ in 0..caps.perfection_iters {
        let mv = minimal_vectors(&a)?;
        debug_assert!(mv.minimum.is_one());
        let qcoords: Vec<Vec<Rat>> = mv
            .vectors
            .iter()
            .map(|v| Ok(HermForm::rank_one(k, v)?.coords()))
            .collect::<Result<_>>()?;
        if span_rank(&qcoords) == dim {
            return Ok(a);
        }
        // rows: coefficients of c(H) ↦ H[v] per minimal vector v
        let rows: Vec<Vec<Rat>> = mv
            .vectors
            .iter()
            .map(|v| {
                let qv = HermForm::rank_one(k, v)?;
                basis
                    .iter()
                    .map(|e| e.trace_pair(&qv))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let ns = crate::linalg::nullspace(
            &crate::linalg::QField,
            &crate::linalg::Mat::from_rows(rows),
        );
        let h_coords = ns.first().ok_or_else(|| {
            Error::Internal(alloc::string::String::from(
                "imperfect form with no orthogonal direction",
            ))
        })?;
        let mut h = HermForm::from_coords(k, n, h_coords)?;
        if h.is_positive_semidefinite() {
            h = h.neg();
        }
        let blocked = first_blocking(&a, &h, mv.vectors.len() + 64, caps)?;
        a = blocked.form;
    }
    Err(Error::IterationCap("perfection"))
}

/// The contiguous perfect form across a facet of a perfect cone, or `None`
/// when the facet lies on the boundary of the semidefinite cone (PSD
/// normal direction, no blocking vector).
pub fn neighbor(
    record: &PerfectForm,
    facet: usize,
    caps: &ExploreCaps,
) -> Result<Option<HermForm>> {
    let k = record.form.disc();
    let n = record.form.rank();
    let lambda = &record.facets.normals[facet];
    let h = dual_to_form(k, n, lambda)?;
    if h.is_positive_semidefinite() {
        return Ok(None);
    }
    let limit = record.minvec.vectors.len() + 64;
    let blocked = first_blocking(&record.form, &h, limit, caps)?;
    Ok(Some(blocked.form))
}

/// Breadth-first closure of the neighbor walk; resumable.
pub struct Explorer {
    k: Disc,
    n: usize,
    caps: ExploreCaps,
    classes: Vec<PerfectForm>,
    keys: Vec<(usize, Vec<Rat>)>,
    frontier: VecDeque<usize>,
    processed: usize,
}

impl Explorer {
    pub fn new(k: Disc, n: usize, caps: ExploreCaps) -> Result<Explorer> {
        let a = initial_perfect_form(k, n, &caps)?;
        Explorer::from_forms(k, n, caps, vec![a], 0)
    }

    /// Rebuilds exploration state from class representatives (checkpoint
    /// resume); the first `processed` classes are assumed fully expanded.
    pub fn from_forms(
        k: Disc,
        n: usize,
        caps: ExploreCaps,
        forms: Vec<HermForm>,
        processed: usize,
    ) -> Result<Explorer> {
        let mut classes = Vec::new();
        let mut keys = Vec::new();
        for f in forms {
            let rec = PerfectForm::from_form(f)?;
            keys.push(rec.geom.invariant_key());
            classes.push(rec);
        }
        let frontier: VecDeque<usize> = (processed..classes.len()).collect();
        Ok(Explorer {
            k,
            n,
            caps,
            classes,
            keys,
            frontier,
            processed,
        })
    }

    pub fn classes(&self) -> &[PerfectForm] {
        &self.classes
    }

    pub fn processed(&self) -> usize {
        self.processed
    }

    pub fn is_done(&self) -> bool {
        self.frontier.is_empty()
    }

    /// Expands one frontier class: computes all neighbors, fuses them into
    /// the class registry, records the links. Returns `false` when the walk
    /// is complete.
    pub fn step(&mut self) -> Result<bool> {
        let Some(ci) = self.frontier.pop_front() else {
            return Ok(false);
        };
        let facet_count = self.classes[ci].facets.facets.len();
        let mut links = Vec::with_capacity(facet_count);
        for fi in 0..facet_count {
            let status = match neighbor(&self.classes[ci], fi, &self.caps)? {
                None => None,
                Some(b) => Some(self.locate_or_insert(b)?),
            };
            links.push((fi, status));
        }
        self.classes[ci].neighbors = links;
        self.processed += 1;
        Ok(!self.frontier.is_empty())
    }

    fn locate_or_insert(&mut self, b: HermForm) -> Result<usize> {
        let bm = minimal_vectors(&b)?;
        let geom_b = VecSetGeom::for_form(&b, &bm.vectors)?;
        let key = geom_b.invariant_key();
        for (i, rec) in self.classes.iter().enumerate() {
            if self.keys[i] == key
                && form_equivalent(&rec.form, &rec.geom, &b, &geom_b)?.is_some()
            {
                return Ok(i);
            }
        }
        if self.classes.len() >= self.caps.max_classes {
            return Err(Error::IterationCap("class registry"));
        }
        let rec = PerfectForm::from_form(b)?;
        self.classes.push(rec);
        self.keys.push(key);
        self.frontier.push_back(self.classes.len() - 1);
        Ok(self.classes.len() - 1)
    }

    /// Finishes the walk and returns the census, sorted by a canonical key
    /// with neighbor links remapped accordingly.
    pub fn into_census(mut self) -> Result<Census> {
        while self.step()? {}
        let mut order: Vec<usize> = (0..self.classes.len()).collect();
        order.sort_by(|&i, &j| {
            let a = &self.classes[i];
            let b = &self.classes[j];
            (a.minvec.vectors.len(), &self.keys[i], a.form.coords()).cmp(&(
                b.minvec.vectors.len(),
                &self.keys[j],
                b.form.coords(),
            ))
        });
        let mut inverse = vec![0usize; order.len()];
        for (new_i, &old_i) in order.iter().enumerate() {
            inverse[old_i] = new_i;
        }
        let mut classes: Vec<PerfectForm> = Vec::with_capacity(order.len());
        for &old_i in &order {
            let mut rec = self.classes[old_i].clone();
            for link in &mut rec.neighbors {
                link.1 = link.1.map(|c| inverse[c]);
            }
            classes.push(rec);
        }
        Ok(Census {
            k: self.k,
            n: self.n,
            classes,
        })
    }
}

/// The complete perfect-form census for `(N, D)`.
#[derive(Clone, Debug)]
pub struct Census {
    pub k: Disc,
    pub n: usize,
    pub classes: Vec<PerfectForm>,
}

pub fn enumerate_perfect_forms(k: Disc, n: usize, caps: &ExploreCaps) -> Result<Census> {
    Explorer::new(k, n, *caps)?.into_census()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadInt;
    use crate::hermitian::OVec;

    fn d(dd: i64) -> Disc {
        Disc::new(dd).unwrap()
    }

    #[test]
    fn rank_one_case_is_trivially_perfect() {
        for dd in [-3, -4, -7] {
            let k = d(dd);
            let a = initial_perfect_form(k, 1, &ExploreCaps::default()).unwrap();
            assert_eq!(a, HermForm::identity(k, 1));
            let census = enumerate_perfect_forms(k, 1, &ExploreCaps::default()).unwrap();
            assert_eq!(census.classes.len(), 1);
            assert_eq!(
                census.classes[0].stabilizer.order,
                crate::field::int(k.unit_count() as i64)
            );
        }
    }

    #[test]
    fn identity_is_not_perfect_for_rank_two_gaussian() {
        // 8 unit multiples collapse to 2 classes, giving q-span rank 2 < 4
        let k = d(-4);
        let a = HermForm::identity(k, 2);
        let mv = minimal_vectors(&a).unwrap();
        let qc: Vec<Vec<Rat>> = mv
            .vectors
            .iter()
            .map(|v| HermForm::rank_one(k, v).unwrap().coords())
            .collect();
        assert!(span_rank(&qc) < 4);
        // perfection must strictly enlarge the minimal-vector set
        let p = initial_perfect_form(k, 2, &ExploreCaps::default()).unwrap();
        let pm = minimal_vectors(&p).unwrap();
        assert!(pm.total_count > 8);
        assert_eq!(pm.minimum, rat(1));
    }

    #[test]
    fn rank_two_census_invariants() {
        for dd in [-4, -3, -7] {
            let k = d(dd);
            let census = enumerate_perfect_forms(k, 2, &ExploreCaps::default()).unwrap();
            assert!(!census.classes.is_empty());
            for rec in &census.classes {
                assert_eq!(span_rank(&rec.qcoords), 4);
                assert_eq!(rec.minvec.minimum, rat(1));
                for (_, target) in &rec.neighbors {
                    if let Some(t) = target {
                        assert!(*t < census.classes.len());
                    }
                }
            }
        }
    }

    #[test]
    fn flip_returns_across_shared_facet() {
        let k = d(-4);
        let census = enumerate_perfect_forms(k, 2, &ExploreCaps::default()).unwrap();
        let rec = &census.classes[0];
        let (fi, _) = rec
            .neighbors
            .iter()
            .find(|(_, t)| t.is_some())
            .expect("interior facet exists");
        let b = neighbor(rec, *fi, &ExploreCaps::default()).unwrap().unwrap();
        let b_rec = PerfectForm::from_form(b.clone()).unwrap();
        // some facet of b flips back to a form equivalent to the original
        let mut returned = false;
        for fj in 0..b_rec.facets.facets.len() {
            if let Some(back) = neighbor(&b_rec, fj, &ExploreCaps::default()).unwrap() {
                let bm = minimal_vectors(&back).unwrap();
                let bg = VecSetGeom::for_form(&back, &bm.vectors).unwrap();
                if form_equivalent(&rec.form, &rec.geom, &back, &bg)
                    .unwrap()
                    .is_some()
                {
                    returned = true;
                    break;
                }
            }
        }
        assert!(returned);
    }

    #[test]
    fn q_is_equivariant_for_the_vector_action() {
        // q(γv) = γ·q(v)·γ*
        let k = d(-3);
        let gamma = crate::isometry::GroupElt {
            n: 2,
            entries: vec![
                QuadInt::from_i64(1, 0),
                QuadInt::from_i64(0, 1),
                QuadInt::from_i64(0, 0),
                QuadInt::from_i64(1, 0),
            ],
        };
        assert!(gamma.is_unimodular(k));
        let v = OVec(vec![QuadInt::from_i64(2, -1), QuadInt::from_i64(1, 1)]);
        let lhs = HermForm::rank_one(k, &gamma.act(&v, k)).unwrap();
        let rhs = HermForm::rank_one(k, &v).unwrap().transform(&gamma.to_mat());
        assert_eq!(lhs, rhs);
    }
}

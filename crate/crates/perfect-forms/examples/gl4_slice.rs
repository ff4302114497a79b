use perfect_forms::cell_complex::{build_complex_down_to, summarize};
use perfect_forms::field::Disc;
use perfect_forms::hermitian::minimal_vectors;
use perfect_forms::homology::smith_normal_form;
use perfect_forms::isometry::{form_equivalent, VecSetGeom};
use perfect_forms::verification::{mass_formula, xi_cycle_check_parts};
use perfect_forms::voronoi::{initial_perfect_form, neighbor, Census, ExploreCaps, PerfectForm};

fn main() {
    let k = Disc::new(-4).unwrap();
    let n = 4;
    let caps = ExploreCaps::default();
    let t0 = std::time::Instant::now();
    let a = initial_perfect_form(k, n, &caps).unwrap();
    let rec_a = PerfectForm::from_form(a).unwrap();
    println!("class 1: |M|={} stab={} facets={} ({:?})", rec_a.minvec.vectors.len(), rec_a.stabilizer.order, rec_a.facets.facets.len(), t0.elapsed());
    // discover an inequivalent class across some facet
    let t1 = std::time::Instant::now();
    let mut second = None;
    for fi in 0..rec_a.facets.facets.len() {
        if let Some(b) = neighbor(&rec_a, fi, &caps).unwrap() {
            let bm = minimal_vectors(&b).unwrap();
            let bg = VecSetGeom::for_form(&b, &bm.vectors).unwrap();
            if form_equivalent(&rec_a.form, &rec_a.geom, &b, &bg).unwrap().is_none() {
                second = Some(b);
                break;
            }
        }
    }
    let rec_b = PerfectForm::from_form(second.expect("second class")).unwrap();
    println!("class 2: |M|={} stab={} facets={} ({:?})", rec_b.minvec.vectors.len(), rec_b.stabilizer.order, rec_b.facets.facets.len(), t1.elapsed());
    let census = Census { k, n, classes: vec![rec_a, rec_b] };
    let t2 = std::time::Instant::now();
    let complex = build_complex_down_to(&census, n * n - 2).unwrap();
    println!("top slice in {:?}", t2.elapsed());
    for row in summarize(&complex) {
        if row.orbit_count > 0 {
            println!("  dim {}: |Σ*|={} orientable={} nnz={} stabs={:?}", row.dim, row.orbit_count, row.orientable_count, row.nnz,
                row.stab_orders.iter().map(|(o, m)| format!("{o}({m})")).collect::<Vec<_>>());
        }
    }
    let top = n * n - 1;
    let d15 = &complex.differentials[top];
    println!("d_15: {}x{} nnz={} entries={:?}", d15.rows, d15.cols, d15.nnz(), d15.entries);
    let snf = smith_normal_form(d15);
    println!("snf: rank={} divisors={:?}", snf.rank, snf.divisors);
    let orders: Vec<_> = complex.orientable[top].iter().map(|&i| complex.cells[top][i].stabilizer.order.clone()).collect();
    let xi = xi_cycle_check_parts(d15, &orders).unwrap();
    println!("xi: cycle={} kernel={:?} weights={:?}", xi.is_cycle, xi.kernel, xi.weights);
    let mass = mass_formula(&complex.stab_orders_by_dim());
    for (d, s) in &mass.per_dim {
        println!("mass dim {d}: {s}");
    }
    println!("total {:?}", t0.elapsed());
}

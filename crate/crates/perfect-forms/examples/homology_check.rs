use perfect_forms::cell_complex::{build_complex, summarize};
use perfect_forms::field::Disc;
use perfect_forms::homology::homology;
use perfect_forms::verification::{chain_identity_of, mass_formula_of, xi_cycle_check};
use perfect_forms::voronoi::{enumerate_perfect_forms, ExploreCaps};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let dd: i64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(-4);
    let n: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(3);
    let t = std::time::Instant::now();
    let k = Disc::new(dd).unwrap();
    let census = enumerate_perfect_forms(k, n, &ExploreCaps::default()).unwrap();
    println!("census: {} classes in {:?}", census.classes.len(), t.elapsed());
    let t2 = std::time::Instant::now();
    let complex = build_complex(&census).unwrap();
    println!("complex built in {:?}", t2.elapsed());
    for row in summarize(&complex) {
        println!(
            "  dim {:2}: |Σ*|={:3} orientable={:3} nnz(d)={:4} stabs={:?}",
            row.dim, row.orbit_count, row.orientable_count, row.nnz,
            row.stab_orders.iter().map(|(o, m)| format!("{o}({m})")).collect::<Vec<_>>()
        );
    }
    println!("chain identity: {:?}", chain_identity_of(&complex));
    let mass = mass_formula_of(&complex);
    println!("mass total: {} (passes: {})", mass.total, mass.passes());
    for (d, s) in &mass.per_dim {
        println!("  dim {d}: sum 1/|stab| = {s}");
    }
    let xi = xi_cycle_check(&complex).unwrap();
    println!("xi cycle: {} kernel {:?} orders {:?}", xi.is_cycle, xi.kernel, xi.stab_orders);
    let t3 = std::time::Instant::now();
    let h = homology(&complex).unwrap();
    println!("homology in {:?} (serre primes {:?})", t3.elapsed(), h.serre_primes);
    for deg in &h.degrees {
        println!(
            "  H_{} = Z^{} + torsion {:?}   (rank d = {}, divisors of d: {:?}, coh degree {})",
            deg.dim, deg.free_rank,
            deg.torsion.iter().map(|(d, m)| format!("{d}^{m}")).collect::<Vec<_>>(),
            deg.rank_d,
            deg.divisors_d.iter().map(|(d, m)| format!("{d}^{m}")).collect::<Vec<_>>(),
            deg.cohomology_degree
        );
    }
    println!("total {:?}", t.elapsed());
}

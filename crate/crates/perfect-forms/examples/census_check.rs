use perfect_forms::voronoi::{enumerate_perfect_forms, ExploreCaps};
use perfect_forms::field::Disc;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let dd: i64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(-11);
    let n: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(3);
    let t = std::time::Instant::now();
    let k = Disc::new(dd).unwrap();
    let census = enumerate_perfect_forms(k, n, &ExploreCaps::default()).unwrap();
    println!("D={dd} N={n}: {} classes in {:?}", census.classes.len(), t.elapsed());
    for c in &census.classes {
        println!("  |M|={} total={} stab={} facets={}", c.minvec.vectors.len(), c.minvec.total_count, c.stabilizer.order, c.facets.facets.len());
    }
}

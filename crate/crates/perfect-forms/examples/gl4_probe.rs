use perfect_forms::field::Disc;
use perfect_forms::hermitian::minimal_vectors;
use perfect_forms::isometry::{stabilizer, VecSetGeom};
use perfect_forms::polyhedra::{dual_description, span_rank};
use perfect_forms::voronoi::{initial_perfect_form, ExploreCaps};
use perfect_forms::hermitian::HermForm;

fn main() {
    let k = Disc::new(-4).unwrap();
    let t = std::time::Instant::now();
    let a = initial_perfect_form(k, 4, &ExploreCaps::default()).unwrap();
    println!("perfection: {:?}", t.elapsed());
    let t = std::time::Instant::now();
    let mv = minimal_vectors(&a).unwrap();
    println!("minvec: {:?} -> |M|={} total={}", t.elapsed(), mv.vectors.len(), mv.total_count);
    let qc: Vec<_> = mv.vectors.iter().map(|v| HermForm::rank_one(k, v).unwrap().coords()).collect();
    println!("q-span rank: {}", span_rank(&qc));
    let t = std::time::Instant::now();
    let geom = VecSetGeom::for_cell(k, &mv.vectors).unwrap();
    let st = stabilizer(&geom).unwrap();
    println!("stabilizer: {:?} -> order {}", t.elapsed(), st.order);
    let t = std::time::Instant::now();
    let dd = dual_description(&qc).unwrap();
    println!("facets: {:?} -> {} facets", t.elapsed(), dd.facets.len());
}

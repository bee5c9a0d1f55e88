//! Builds G x C_k for a generator and prints its size, components and edge
//! list.
//!
//! cargo run --example product -- petersen 4

use group_magic::GeneratorSpec;

fn main() {
    let mut args = std::env::args().skip(1);
    let spec: GeneratorSpec = args.next().as_deref().unwrap_or("cycle:3").parse().expect("generator");
    let k: usize = args.next().map_or(4, |s| s.parse().expect("cycle length"));
    let g = spec.generate();
    let h = g.direct_product_with_cycle(k).expect("k >= 3");
    println!(
        "{spec} x C{k}: {} vertices, {} edges, {} components, bipartite: {}",
        h.n(),
        h.edge_count(),
        h.components().len(),
        h.is_bipartite()
    );
    print!("{}", h.to_edge_list());
}

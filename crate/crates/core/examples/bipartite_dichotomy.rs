//! K_{m,n} x C4 with m odd and n even: groups with a Z2 x Z2 summand are
//! labeled explicitly, all others are ruled out by the involution sum, and
//! the exhaustive search confirms both sides on order 12.
//!
//! cargo run --release --example bipartite_dichotomy

use group_magic::constructions::c4_bipartite_z2z2;
use group_magic::feasibility::involution_obstruction_bipartite_c4;
use group_magic::search::{exists_labeling, SearchConfig};
use group_magic::{enumerate_groups, GeneratorSpec};

fn main() {
    for (m, n) in [(1, 2), (3, 2), (1, 4), (5, 6)] {
        for g in enumerate_groups(4 * (m + n) as u64) {
            let report = c4_bipartite_z2z2(m, n, &g).expect("valid instance");
            let obstruction = involution_obstruction_bipartite_c4(m, n, &g).expect("valid instance");
            let verdict = match (report.magic(), obstruction) {
                (Some(mu), _) => format!("labeled, mu = {mu}"),
                (None, Some(ob)) => format!("impossible: {}", ob.detail),
                (None, None) => "undecided".to_string(),
            };
            println!("K_({m},{n}) x C4 over {g:<10} {verdict}");
        }
    }

    let h = "bipartite:1,2".parse::<GeneratorSpec>().unwrap().generate().direct_product_with_cycle(4).unwrap();
    for g in enumerate_groups(12) {
        let outcome = exists_labeling(&h, &g, &SearchConfig::default(), false).unwrap();
        println!(
            "search on K_(1,2) x C4 over {g:<6} {:?} after {} nodes",
            outcome.status, outcome.nodes_explored
        );
    }
}

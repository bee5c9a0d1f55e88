//! Runs the G x C8 dispatcher over every group of order 8|V(G)|. The default
//! K_{2,18} shows the one group (32x5) no template reaches.
//!
//! cargo run --example construct_c8 -- bipartite:2,18

use group_magic::constructions::c8_dispatch;
use group_magic::{enumerate_groups, GeneratorSpec};

fn main() {
    let spec: GeneratorSpec = std::env::args()
        .nth(1)
        .as_deref()
        .unwrap_or("bipartite:2,18")
        .parse()
        .expect("generator");
    for g in enumerate_groups(8 * spec.vertex_count() as u64) {
        let report = c8_dispatch(spec.clone(), &g).expect("valid instance");
        match report.magic() {
            Some(mu) => println!("{g:<14} {:<8} mu = {mu}", report.construction.unwrap().id()),
            None => println!("{g:<14} {}: {}", report.outcome_name(), report.reason().unwrap_or("")),
        }
    }
}

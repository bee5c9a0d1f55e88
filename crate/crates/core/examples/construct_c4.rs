//! Labels G x C4 by every Abelian group of order 4|V(G)| and checks each
//! result with the verifier.
//!
//! cargo run --example construct_c4 -- bipartite:1,9

use group_magic::constructions::c4_dispatch;
use group_magic::{enumerate_groups, GeneratorSpec};

fn main() {
    let spec: GeneratorSpec = std::env::args()
        .nth(1)
        .as_deref()
        .unwrap_or("petersen")
        .parse()
        .expect("generator");
    for g in enumerate_groups(4 * spec.vertex_count() as u64) {
        let report = c4_dispatch(spec.clone(), &g).expect("valid instance");
        match report.labeling() {
            Some(labeling) => {
                let verdict = labeling.verify().expect("well-formed labeling");
                println!(
                    "{g:<12} {:<8} labels in {:<10} mu = {}  verified: {}",
                    report.construction.map_or("-", |c| c.id()),
                    labeling.group(),
                    report.magic().unwrap(),
                    verdict.is_magic()
                );
            }
            None => println!("{g:<12} {}: {}", report.outcome_name(), report.reason().unwrap_or("")),
        }
    }
}

//! Exhaustive search on a small product: decides existence and collects
//! every reachable magic constant.
//!
//! cargo run --release --example search_oracle -- cycle:3 4 2x2x3

use group_magic::search::{all_magic_constants, exists_labeling, SearchConfig};
use group_magic::{GeneratorSpec, GroupSpec};

fn main() {
    let mut args = std::env::args().skip(1);
    let spec: GeneratorSpec = args.next().as_deref().unwrap_or("cycle:3").parse().expect("generator");
    let k: usize = args.next().map_or(4, |s| s.parse().expect("cycle length"));
    let group: GroupSpec = args.next().as_deref().unwrap_or("2x2x3").parse().expect("group");
    let h = spec.generate().direct_product_with_cycle(k).expect("k >= 3");
    let config = SearchConfig::default();

    let outcome = exists_labeling(&h, &group, &config, false).expect("searchable instance");
    println!("{spec} x C{k} over {group}: {:?} ({} nodes)", outcome.status, outcome.nodes_explored);
    if let Some(solution) = outcome.solutions.first() {
        let labeling = solution.to_labeling(spec.clone().into(), k, &group).unwrap();
        println!("{}", labeling.to_json_string());
    }
    let constants = all_magic_constants(&h, &group, &config).expect("searchable instance");
    let listed: Vec<String> = constants.constants.iter().map(ToString::to_string).collect();
    println!("magic constants: {}", listed.join(" "));
}

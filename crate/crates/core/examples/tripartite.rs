//! Complete tripartite graphs with odd parts: the Z4 groups get magic
//! constant (0,2), groups with Z2 x Z2 fall back to the general template.
//!
//! cargo run --example tripartite

use group_magic::constructions::c4_tripartite;
use group_magic::enumerate_groups;

fn main() {
    for (p, q, t) in [(1, 1, 3), (1, 3, 3), (3, 5, 7)] {
        for g in enumerate_groups(4 * (p + q + t) as u64) {
            let report = c4_tripartite(p, q, t, &g).expect("valid instance");
            println!(
                "K_({p},{q},{t}) x C4 over {g:<10} {:<8} mu = {}{}",
                report.construction.map_or("-", |c| c.id()),
                report.magic().map_or("none".to_string(), ToString::to_string),
                report.element_order.as_deref().map_or(String::new(), |o| format!("  [{o}]"))
            );
        }
    }
}

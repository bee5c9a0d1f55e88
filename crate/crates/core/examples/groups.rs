//! Lists the Abelian groups of a given order with their involutions and
//! the sum of all elements.
//!
//! cargo run --example groups -- 48

use group_magic::enumerate_groups;

fn main() {
    let order: u64 = std::env::args().nth(1).map_or(48, |s| s.parse().expect("order"));
    for g in enumerate_groups(order) {
        let involutions = g.involutions();
        println!(
            "{g:<14} rank {}  involutions {:<3} sum of elements {}",
            g.rank(),
            involutions.len(),
            g.sum_all()
        );
    }
}

//! Necessary conditions and obstructions: regular magic constants, the
//! integer-valued bipartite bounds for C4 and C8, and the involution sum.
//!
//! cargo run --example feasibility

use group_magic::feasibility::{acg_condition, c8_condition, involution_obstruction_bipartite_c4, regular_magic_constant};
use group_magic::GroupSpec;

fn main() {
    for (r, n) in [(2, 5), (3, 4), (3, 10), (4, 6)] {
        let mu = regular_magic_constant(r, n);
        println!("{r}-regular on {n} vertices: mu = {mu}, feasible: {}", mu.feasible);
    }
    for alpha in 0..4 {
        let b = acg_condition(1, 1 + 8 * alpha);
        println!("K_(1,{}) x C4: {} >= {} ? {}", 1 + 8 * alpha, b.lhs, b.rhs, b.holds());
    }
    for alpha in 0..3 {
        let b = c8_condition(2, 2 + 16 * alpha);
        println!("K_(2,{}) x C8: {} >= {} ? {}", 2 + 16 * alpha, b.lhs, b.rhs, b.holds());
    }
    for g in ["12", "2x2x3", "8x5", "4x2x5"] {
        let g: GroupSpec = g.parse().unwrap();
        let m = 1;
        let n = (g.order() / 4 - 1) as usize;
        match involution_obstruction_bipartite_c4(m, n, &g).unwrap() {
            Some(ob) => println!("K_({m},{n}) x C4 over {g}: {}", ob.detail),
            None => println!("K_({m},{n}) x C4 over {g}: no obstruction"),
        }
    }
}

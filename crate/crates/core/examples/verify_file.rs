//! Writes a constructed labeling to JSON, reads it back, verifies it, then
//! swaps two labels and shows the verifier's offending vertices.
//!
//! cargo run --example verify_file

use group_magic::constructions::c4_dispatch;
use group_magic::{GeneratorSpec, GroupSpec, Labeling};

fn main() {
    let spec: GeneratorSpec = "cycle:5".parse().unwrap();
    let group: GroupSpec = "20".parse().unwrap();
    let report = c4_dispatch(spec, &group).unwrap();
    let text = report.labeling().unwrap().to_json_string();
    println!("{text}");

    let loaded = Labeling::from_json_str(&text).unwrap();
    println!("reloaded: {:?}", loaded.verify().unwrap());

    let mut labels = loaded.labels().to_vec();
    labels.swap(0, 5);
    let broken = Labeling::new(loaded.source().clone(), loaded.cycle_len(), loaded.group().clone(), labels).unwrap();
    println!("after swapping two labels: {:?}", broken.verify().unwrap());
}

//! Counter-based streams: the same `(seed, stream)` pair always yields
//! the same numbers, whatever was drawn before.

use cdpanel::random::{normal, rademacher, RngStream};

fn main() {
    let s = RngStream::new(42, 7);
    println!("normal(42, 7):  {:?}", normal(&s, 3));
    println!("again:          {:?}", normal(&s, 3));
    println!("stream 8:       {:?}", normal(&RngStream::new(42, 8), 3));
    let child = s.derive(6);
    println!(
        "child 6 key {:#018x}, weights {:?}",
        child.master_seed,
        rademacher(&child, 8).values()
    );
}

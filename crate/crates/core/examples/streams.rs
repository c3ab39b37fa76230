//! Seeded substreams: the same path always yields the same draws, and sibling
//! paths are independent.

use rand::Rng;
use rarelogit::rng::{stream, stream_id};

fn main() {
    let draw = |path: &[u64]| -> Vec<u32> {
        let mut rng = stream(42, path);
        (0..4).map(|_| rng.random()).collect()
    };
    println!("replication 0, data   : {:?}", draw(&[0, 0]));
    println!("replication 0, data   : {:?}", draw(&[0, 0]));
    println!("replication 0, design : {:?}", draw(&[0, 1]));
    println!("replication 1, data   : {:?}", draw(&[1, 0]));
    println!("stream id of [1, 0]: {:#018x}", stream_id(&[1, 0]));
}

//! Named graph families and seeded random 2-edge-connected graphs.
//!
//! Vertex numbering and edge order are part of each family's contract:
//!
//! | family      | vertices                         | edge order |
//! |-------------|----------------------------------|------------|
//! | `cycle`     | `0..n`                           | `(i, i+1 mod n)` for `i` ascending |
//! | `complete`  | `0..n`                           | `(i, j)`, `i < j`, lexicographic |
//! | `wheel`     | hub `0`, rim `1..=rim`           | spokes `(0, i)`, then rim `(i, i mod rim + 1)` |
//! | `hypercube` | `0..2^d`                         | `(v, v ^ 2^b)` with `v < v ^ 2^b`, by `v` then `b` |
//! | `theta`     | ends `0`, `1`; path `p` internals `2 + p(len-1) ..` | path by path, from `0` to `1` |
//!
//! `random-2ec` shuffles `0..n` with Fisher-Yates, closes the shuffled order
//! into a Hamiltonian cycle, then adds chords with independent uniform
//! endpoints. All randomness comes from SplitMix64 seeded with the given
//! seed; bounded draws use rejection sampling on `next_u64`
//! (`r < 2^64 - 2^64 mod bound`, then `r mod bound`). Fisher-Yates runs
//! `i = n-1 down to 1`, swapping `i` with a draw in `0..=i`; a chord draws
//! `u` in `0..n`, then `w` in `0..n-1` and uses `w + (w >= u)`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `n >= 3`, or `n == 2` for a pair of parallel edges.
    Cycle {
        n: usize,
    },
    Complete {
        n: usize,
    },
    Wheel {
        rim: usize,
    },
    Hypercube {
        dim: u32,
    },
    /// `paths >= 2` internally disjoint paths of `len >= 1` edges between 0 and 1.
    Theta {
        paths: usize,
        len: usize,
    },
    Random2ec {
        n: usize,
        extra: usize,
        seed: u64,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid parameters for {family}: {reason}")]
pub struct GenError {
    pub family: &'static str,
    pub reason: String,
}

fn invalid(family: &'static str, reason: &str) -> GenError {
    GenError {
        family,
        reason: reason.to_string(),
    }
}

pub fn gen_family(family: &Family) -> Result<Graph, GenError> {
    let (n, edges) = match *family {
        Family::Cycle { n } => {
            if n < 2 {
                return Err(invalid("cycle", "n must be at least 2"));
            }
            (n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        Family::Complete { n } => {
            if n < 3 {
                return Err(invalid("complete", "n must be at least 3"));
            }
            let edges = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            (n, edges)
        }
        Family::Wheel { rim } => {
            if rim < 3 {
                return Err(invalid("wheel", "rim must be at least 3"));
            }
            let spokes = (1..=rim).map(|i| (0, i));
            let rim_edges = (1..=rim).map(|i| (i, i % rim + 1));
            (rim + 1, spokes.chain(rim_edges).collect())
        }
        Family::Hypercube { dim } => {
            if !(2..=24).contains(&dim) {
                return Err(invalid("hypercube", "dimension must be in 2..=24"));
            }
            let n = 1usize << dim;
            let edges = (0..n)
                .flat_map(|v| (0..dim).map(move |b| (v, v ^ (1 << b))))
                .filter(|&(v, w)| v < w)
                .collect();
            (n, edges)
        }
        Family::Theta { paths, len } => {
            if paths < 2 || len < 1 {
                return Err(invalid("theta", "need at least 2 paths of at least 1 edge"));
            }
            let n = 2 + paths * (len - 1);
            let mut edges = Vec::with_capacity(paths * len);
            for p in 0..paths {
                let inner: Vec<VertexId> = (0..len - 1).map(|i| 2 + p * (len - 1) + i).collect();
                let mut prev = 0;
                for &v in &inner {
                    edges.push((prev, v));
                    prev = v;
                }
                edges.push((prev, 1));
            }
            (n, edges)
        }
        Family::Random2ec { n, extra, seed } => return gen_random_2ec(n, extra, seed),
    };
    Ok(Graph::from_edges(n, edges).expect("family constructions are loop-free"))
}

/// Uniform draw in `0..bound` by rejection.
fn below(rng: &mut SplitMix64, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let limit = u64::MAX - u64::MAX % bound;
    loop {
        let r = rng.next_u64();
        if r < limit {
            return r % bound;
        }
    }
}

/// Hamiltonian cycle on a seeded permutation plus `extra` random chords.
/// Chords may duplicate existing edges (parallel edges are allowed).
pub fn gen_random_2ec(n: usize, extra: usize, seed: u64) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(invalid("random-2ec", "n must be at least 3"));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut order: Vec<VertexId> = (0..n).collect();
    for i in (1..n).rev() {
        let j = below(&mut rng, i as u64 + 1) as usize;
        order.swap(i, j);
    }
    let mut edges = Vec::with_capacity(n + extra);
    edges.extend((0..n).map(|i| (order[i], order[(i + 1) % n])));
    for _ in 0..extra {
        let u = below(&mut rng, n as u64) as usize;
        let w = below(&mut rng, n as u64 - 1) as usize;
        edges.push((u, if w >= u { w + 1 } else { w }));
    }
    Ok(Graph::from_edges(n, edges).expect("chords avoid self-loops"))
}

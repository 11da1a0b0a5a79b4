//! The fixed verification grid for the matrix-group oracle.

use serde::Serialize;

use crate::arith::is_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridCase {
    pub d: u32,
    pub p: u64,
    pub r: u64,
}

const GL2_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
const GL3_PRIMES: [u64; 2] = [2, 3];

/// Every `(d, p, r)` the oracle is checked on. `heavy` adds `GL(3, 5)`.
pub fn gl_grid(heavy: bool) -> Vec<GridCase> {
    let small: Vec<u64> = (2..=13).filter(|&q| is_prime(q)).collect();
    let mut cases = Vec::new();
    for p in GL2_PRIMES {
        let mut rs: Vec<u64> = small.iter().copied().filter(|&q| q != p).collect();
        rs.extend([2u64, 3, 5].into_iter().filter(|&q| q != p).map(|q| q * q));
        for q in (2..=35).filter(|&q| is_prime(q) && q != p) {
            for s in (q + 1..=35 / q).filter(|&s| is_prime(s) && s != p) {
                rs.push(q * s);
            }
        }
        rs.sort_unstable();
        cases.extend(rs.into_iter().map(|r| GridCase { d: 2, p, r }));
    }
    let gl3: &[u64] = if heavy { &[2, 3, 5] } else { &GL3_PRIMES };
    for &p in gl3 {
        for &q in small.iter().filter(|&&q| q != p) {
            cases.push(GridCase { d: 3, p, r: q });
        }
    }
    cases
}

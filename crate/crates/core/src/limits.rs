//! Feasibility caps for the brute-force oracles.

/// Environment variable that raises the heavy-run cap on `|GL(d, p)|`.
pub const HEAVY_LIMIT_ENV: &str = "CENSUS_HEAVY_LIMIT";

const DEFAULT_GL_ORDER: u64 = 30_000;
const HEAVY_GL_ORDER: u64 = 1_500_000;
const DEFAULT_CAYLEY_ORDER: u32 = 15;
const HEAVY_CAYLEY_ORDER: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest matrix group the oracle will enumerate.
    pub max_gl_order: u64,
    /// Largest order the Cayley-table search will attempt.
    pub max_cayley_order: u32,
}

impl Default for Limits {
    /// Covers `GL(2, p)` for `p <= 13`, `GL(3, p)` for `p <= 3` and Cayley
    /// orders up to 15.
    fn default() -> Self {
        Limits {
            max_gl_order: DEFAULT_GL_ORDER,
            max_cayley_order: DEFAULT_CAYLEY_ORDER,
        }
    }
}

impl Limits {
    /// Opt-in caps: admits `GL(3, 5)` and Cayley orders up to 20.
    pub fn heavy() -> Self {
        Limits {
            max_gl_order: HEAVY_GL_ORDER,
            max_cayley_order: HEAVY_CAYLEY_ORDER,
        }
    }

    /// [`Limits::heavy`] with the matrix-group cap taken from
    /// `CENSUS_HEAVY_LIMIT` when it is set to a positive integer.
    pub fn heavy_from_env() -> Self {
        let mut limits = Self::heavy();
        if let Some(cap) = std::env::var(HEAVY_LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
        {
            limits.max_gl_order = cap;
        }
        limits
    }
}

//! Integer utilities shared by the formulas and the oracles: factorisation,
//! order-shape classification, the divisibility indicator and a couple of
//! small counting helpers.

use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::CensusError;

const TRIAL_BOUND: u64 = 1_000_000;

/// Prime factorisation of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Number of distinct prime factors.
    pub fn distinct(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Exponents sorted in decreasing order.
    pub fn exponent_multiset(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self.factors.iter().map(|&(_, e)| e).collect();
        e.sort_unstable_by(|a, b| b.cmp(a));
        e
    }

    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_BOUND as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are a certificate
/// for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho. `n` must be odd and composite.
fn rho_split(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = y;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho_split(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Prime factorisation by trial division up to 10^6, then Miller-Rabin and
/// Pollard rho for whatever cofactor is left.
pub fn factorize(n: u64) -> Result<Factorization, CensusError> {
    if n == 0 {
        return Err(CensusError::ZeroOrder);
    }
    if n > i64::MAX as u64 {
        return Err(CensusError::precondition(format!(
            "{n} exceeds the supported range 1..=2^63-1"
        )));
    }
    let mut rest = n;
    let mut primes = Vec::new();
    let trial = if rest > TRIAL_BOUND && is_prime(rest) {
        &[][..]
    } else {
        small_primes()
    };
    for &p in trial {
        let p = p as u64;
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                primes.push(p);
                rest /= p;
            }
            if rest > 1 && is_prime(rest) {
                break;
            }
        }
    }
    if rest > 1 {
        split_large(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

/// The order shapes that have a closed formula, with the primes bound to the
/// roles they play in the matching formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderShape {
    Trivial,
    P {
        p: u64,
    },
    P2 {
        p: u64,
    },
    /// `p < q`.
    PQ {
        p: u64,
        q: u64,
    },
    P3 {
        p: u64,
    },
    /// `p` is the squared prime.
    P2Q {
        p: u64,
        q: u64,
    },
    /// `p < q < r`.
    PQR {
        p: u64,
        q: u64,
        r: u64,
    },
    P4 {
        p: u64,
    },
    /// `p` is the cubed prime.
    P3Q {
        p: u64,
        q: u64,
    },
    /// `p < q`.
    P2Q2 {
        p: u64,
        q: u64,
    },
    /// `p` squared, `q < r`.
    P2QR {
        p: u64,
        q: u64,
        r: u64,
    },
    /// `p < q < r < s`.
    PQRS {
        p: u64,
        q: u64,
        r: u64,
        s: u64,
    },
    PrimePower5 {
        p: u64,
    },
    /// Exponent multiset, largest first.
    Unsupported {
        exponents: Vec<u32>,
    },
}

impl OrderShape {
    pub fn tag(&self) -> &'static str {
        match self {
            OrderShape::Trivial => "1",
            OrderShape::P { .. } => "p",
            OrderShape::P2 { .. } => "p^2",
            OrderShape::PQ { .. } => "pq",
            OrderShape::P3 { .. } => "p^3",
            OrderShape::P2Q { .. } => "p^2q",
            OrderShape::PQR { .. } => "pqr",
            OrderShape::P4 { .. } => "p^4",
            OrderShape::P3Q { .. } => "p^3q",
            OrderShape::P2Q2 { .. } => "p^2q^2",
            OrderShape::P2QR { .. } => "p^2qr",
            OrderShape::PQRS { .. } => "pqrs",
            OrderShape::PrimePower5 { .. } => "p^5",
            OrderShape::Unsupported { .. } => "unsupported",
        }
    }

    pub fn is_supported(&self) -> bool {
        !matches!(self, OrderShape::Unsupported { .. })
    }
}

impl fmt::Display for OrderShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderShape::Trivial => write!(f, "1"),
            OrderShape::P { p }
            | OrderShape::P2 { p }
            | OrderShape::P3 { p }
            | OrderShape::P4 { p }
            | OrderShape::PrimePower5 { p } => write!(f, "{} (p={p})", self.tag()),
            OrderShape::PQ { p, q } | OrderShape::P2Q { p, q } | OrderShape::P3Q { p, q } => {
                write!(f, "{} (p={p}, q={q})", self.tag())
            }
            OrderShape::P2Q2 { p, q } => write!(f, "p^2q^2 (p={p}, q={q})"),
            OrderShape::PQR { p, q, r } | OrderShape::P2QR { p, q, r } => {
                write!(f, "{} (p={p}, q={q}, r={r})", self.tag())
            }
            OrderShape::PQRS { p, q, r, s } => write!(f, "pqrs (p={p}, q={q}, r={r}, s={s})"),
            OrderShape::Unsupported { exponents } => write!(f, "unsupported {exponents:?}"),
        }
    }
}

/// Classifies a factorisation by its exponent multiset.
pub fn classify_shape(f: &Factorization) -> OrderShape {
    let fs = f.factors();
    // Primes arrive in increasing order, so only the exponent pattern decides
    // which prime goes where.
    match fs {
        [] => OrderShape::Trivial,
        [(p, 1)] => OrderShape::P { p: *p },
        [(p, 2)] => OrderShape::P2 { p: *p },
        [(p, 3)] => OrderShape::P3 { p: *p },
        [(p, 4)] => OrderShape::P4 { p: *p },
        [(p, 5)] => OrderShape::PrimePower5 { p: *p },
        [(p, 1), (q, 1)] => OrderShape::PQ { p: *p, q: *q },
        [(a, 2), (b, 1)] => OrderShape::P2Q { p: *a, q: *b },
        [(a, 1), (b, 2)] => OrderShape::P2Q { p: *b, q: *a },
        [(a, 3), (b, 1)] => OrderShape::P3Q { p: *a, q: *b },
        [(a, 1), (b, 3)] => OrderShape::P3Q { p: *b, q: *a },
        [(p, 2), (q, 2)] => OrderShape::P2Q2 { p: *p, q: *q },
        [(p, 1), (q, 1), (r, 1)] => OrderShape::PQR {
            p: *p,
            q: *q,
            r: *r,
        },
        [(a, 2), (b, 1), (c, 1)] => OrderShape::P2QR {
            p: *a,
            q: *b,
            r: *c,
        },
        [(a, 1), (b, 2), (c, 1)] => OrderShape::P2QR {
            p: *b,
            q: *a,
            r: *c,
        },
        [(a, 1), (b, 1), (c, 2)] => OrderShape::P2QR {
            p: *c,
            q: *a,
            r: *b,
        },
        [(p, 1), (q, 1), (r, 1), (s, 1)] => OrderShape::PQRS {
            p: *p,
            q: *q,
            r: *r,
            s: *s,
        },
        _ => OrderShape::Unsupported {
            exponents: f.exponent_multiset(),
        },
    }
}

/// Divisibility indicator: 1 when `s` divides `r`, else 0. Every `s`
/// divides 0, so `w(0, s) = 1`.
pub fn w(r: u128, s: u128) -> u8 {
    debug_assert!(s >= 1, "indicator needs s >= 1");
    u8::from(r.is_multiple_of(s))
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Evaluates `prod_{d | s, d != s} (gcd(r,s) - d) / (s - d)` exactly and
/// reports whether it agrees with [`w`].
pub fn w_identity_check(r: u64, s: u64) -> bool {
    assert!(r >= 1 && s >= 1);
    let g = gcd(r as u128, s as u128) as i128;
    let s_i = s as i128;
    let mut acc = Ratio::from_integer(1i128);
    for d in (1..s).filter(|d| s.is_multiple_of(*d)) {
        let d = d as i128;
        acc *= Ratio::new(g - d, s_i - d);
    }
    acc == Ratio::from_integer(w(r as u128, s as u128) as i128)
}

/// Number of partitions of `k`.
pub fn partitions(k: u32) -> u64 {
    let k = k as usize;
    let mut ways = vec![0u64; k + 1];
    ways[0] = 1;
    for part in 1..=k {
        for total in part..=k {
            ways[total] += ways[total - part];
        }
    }
    ways[k]
}

/// Number of abelian groups of order `f.n()`.
pub fn abelian_count(f: &Factorization) -> u64 {
    f.factors().iter().map(|&(_, e)| partitions(e)).product()
}

/// Smallest prime that is at least `n`.
pub fn next_prime(mut n: u64) -> u64 {
    if n <= 2 {
        return 2;
    }
    if n.is_multiple_of(2) {
        n += 1;
    }
    while !is_prime(n) {
        n += 2;
    }
    n
}

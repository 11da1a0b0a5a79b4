//! Verification suites that compare the formulas against stated values and
//! against the two brute-force oracles.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, partitions, w, w_identity_check, Factorization};
use crate::cayley::enumerate_groups;
use crate::error::CensusError;
use crate::formulas::{
    count_groups, count_p2q, count_p2q2, count_p2qr, count_p3q, count_prime_power,
    count_squarefree, p2q2_formula, p2qr_formula, p3q_formula, GroupCount,
};
use crate::gl::closed_form::formula_s;
use crate::gl::grid::gl_grid;
use crate::gl::subgroups::{count_norm_twist, count_subgroup_classes};
use crate::gl::{enumerate_gl, MatrixGroup};
use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    PaperValues,
    GlGrid,
    Cayley,
    Identity,
    Integrality,
    Squarefree,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `All` runs them.
    pub const CONCRETE: [Suite; 6] = [
        Suite::PaperValues,
        Suite::GlGrid,
        Suite::Cayley,
        Suite::Identity,
        Suite::Integrality,
        Suite::Squarefree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PaperValues => "paper-values",
            Suite::GlGrid => "gl-grid",
            Suite::Cayley => "cayley",
            Suite::Identity => "identity",
            Suite::Integrality => "integrality",
            Suite::Squarefree => "squarefree",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::CONCRETE
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub input: String,
    pub expected: u128,
    pub actual: u128,
    pub pass: bool,
}

impl Case {
    pub fn new(input: impl Into<String>, expected: u128, actual: u128) -> Self {
        Case {
            input: input.into(),
            expected,
            actual,
            pass: expected == actual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub duration_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl VerificationReport {
    fn new(suite: Suite, cases: Vec<Case>, started: Instant) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        VerificationReport {
            suite: suite.name().to_string(),
            summary: Summary {
                total: cases.len(),
                passed,
                failed: cases.len() - passed,
                duration_ms: started.elapsed().as_millis() as u64,
            },
            cases,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.summary;
        write!(
            f,
            "{}: {}/{} passed in {} ms",
            self.suite, s.passed, s.total, s.duration_ms
        )?;
        for c in self.failures() {
            write!(
                f,
                "\n  FAIL {}: expected {}, got {}",
                c.input, c.expected, c.actual
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Adds GL(3, 5) to the grid and Cayley orders 16..=20.
    pub heavy: bool,
    pub limits: Limits,
    pub seed: u64,
    /// Random prime tuples per shape in the integrality suite.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            heavy: false,
            limits: Limits::default(),
            seed: 0x5eed,
            samples: 1000,
        }
    }
}

impl VerifyOptions {
    pub fn heavy() -> Self {
        VerifyOptions {
            heavy: true,
            limits: Limits::heavy_from_env(),
            ..Self::default()
        }
    }
}

/// Runs one suite, or every suite in order for `Suite::All`.
pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<Vec<VerificationReport>, CensusError> {
    match suite {
        Suite::All => Suite::CONCRETE
            .into_iter()
            .map(|s| run_suite(s, opts))
            .collect(),
        s => Ok(vec![run_suite(s, opts)?]),
    }
}

/// Runs one concrete suite. Oracle errors, including resource caps, are
/// returned rather than recorded as failing cases.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<VerificationReport, CensusError> {
    let started = Instant::now();
    let cases = match suite {
        Suite::PaperValues => paper_values()?,
        Suite::GlGrid => gl_grid_cases(opts)?,
        Suite::Cayley => cayley_cases(opts)?,
        Suite::Identity => identity_cases(),
        Suite::Integrality => integrality_cases(opts),
        Suite::Squarefree => squarefree_cases(opts)?,
        Suite::All => {
            return Err(CensusError::Precondition(
                "`all` is not a single suite".into(),
            ))
        }
    };
    Ok(VerificationReport::new(suite, cases, started))
}

fn count(n: u64) -> Result<u128, CensusError> {
    Ok(count_groups(n)?.count)
}

fn paper_values() -> Result<Vec<Case>, CensusError> {
    let mut stated: Vec<(u64, u128)> = vec![
        (16, 14),
        (81, 15),
        (32, 51),
        (243, 71),
        (24, 15),
        (56, 13),
        (36, 14),
        (60, 13),
    ];
    stated.extend([3u64, 5, 7, 11, 13].map(|p| (2 * p * p, 5)));
    // constant branches of the prime-power and p^3 q formulas
    stated.extend(
        [2u64, 3, 5, 7]
            .iter()
            .flat_map(|&p| [(p, 1), (p * p, 2), (p.pow(3), 5)]),
    );
    stated.extend([3u64, 5, 7, 11].map(|p| (2 * p.pow(3), 15)));
    stated
        .into_iter()
        .map(|(n, expected)| Ok(Case::new(format!("N({n})"), expected, count(n)?)))
        .collect()
}

fn gl_grid_cases(opts: &VerifyOptions) -> Result<Vec<Case>, CensusError> {
    let mut by_group: BTreeMap<(u32, u64), Vec<u64>> = BTreeMap::new();
    for c in gl_grid(opts.heavy) {
        by_group.entry((c.d, c.p)).or_default().push(c.r);
    }
    let mut cases = Vec::new();
    for ((d, p), orders) in by_group {
        let g = enumerate_gl(d, p, &opts.limits)?;
        let group_cases: Result<Vec<Case>, CensusError> = orders
            .par_iter()
            .map(|&r| {
                let brute = count_subgroup_classes(&g, r)?.classes as u128;
                Ok(Case::new(
                    format!("s_{r}(GL({d},{p}))"),
                    formula_s(d, p, r)? as u128,
                    brute,
                ))
            })
            .collect();
        cases.extend(group_cases?);
        if d == 2 {
            cases.extend(norm_twist_cases(&g)?);
        }
    }
    Ok(cases)
}

fn norm_twist_cases(g: &MatrixGroup) -> Result<Vec<Case>, CensusError> {
    let p = g.modulus() as u64;
    [2u64, 3, 5, 7, 11, 13]
        .into_iter()
        .filter(|&q| q != p)
        .map(|q| {
            let expected = if q == 2 {
                0
            } else {
                (w((p - 1) as u128, q as u128) + w((p + 1) as u128, q as u128)) as u128
            };
            let actual = count_norm_twist(g, q)?.count as u128;
            Ok(Case::new(format!("twist_{q}(GL(2,{p}))"), expected, actual))
        })
        .collect()
}

fn cayley_cases(opts: &VerifyOptions) -> Result<Vec<Case>, CensusError> {
    let top = if opts.heavy { 20 } else { 15 };
    (1..=top)
        .map(|n| {
            let found = enumerate_groups(n, &opts.limits)? as u128;
            Ok(Case::new(format!("cayley({n})"), count(n as u64)?, found))
        })
        .collect()
}

const IDENTITY_BOUND: u64 = 300;

/// One case per `s`: how many `r` in range satisfy the identity.
fn identity_cases() -> Vec<Case> {
    (1..=IDENTITY_BOUND)
        .into_par_iter()
        .map(|s| {
            let holds = (1..=IDENTITY_BOUND)
                .filter(|&r| w_identity_check(r, s))
                .count();
            Case::new(
                format!("identity(r<=300, s={s})"),
                IDENTITY_BOUND as u128,
                holds as u128,
            )
        })
        .collect()
}

const MAX_SAMPLE_PRIME: u64 = 1_000_000;

fn sieve(limit: u64) -> Vec<u64> {
    let mut composite = vec![false; limit as usize + 1];
    let mut primes = Vec::new();
    for i in 2..=limit as usize {
        if !composite[i] {
            primes.push(i as u64);
            for j in (i * i..=limit as usize).step_by(i) {
                composite[j] = true;
            }
        }
    }
    primes
}

/// Draws `k` distinct primes. Half the draws come from primes below 50 so
/// that the small-prime branches are exercised.
fn draw_primes(rng: &mut ChaCha8Rng, primes: &[u64], k: usize) -> Vec<u64> {
    let small = primes.partition_point(|&p| p < 50);
    let mut out: Vec<u64> = Vec::with_capacity(k);
    while out.len() < k {
        let pool = if rng.gen_bool(0.5) {
            &primes[..small]
        } else {
            primes
        };
        let p = *pool.choose(rng).expect("pool is nonempty");
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn abelian_for(exponents: &[u32]) -> u128 {
    exponents.iter().map(|&e| partitions(e) as u128).product()
}

struct Sampler {
    label: &'static str,
    primes: usize,
    exponents: &'static [u32],
    eval: fn(&[u64]) -> Result<GroupCount, CensusError>,
}

fn squarefree_of(ps: &[u64]) -> Result<GroupCount, CensusError> {
    let n = ps
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p))
        .filter(|&n| n <= i64::MAX as u64)
        .ok_or_else(|| CensusError::Overflow(format!("product of {ps:?}")))?;
    count_squarefree(&factorize(n)?)
}

const SAMPLERS: [Sampler; 9] = [
    Sampler {
        label: "p^4",
        primes: 1,
        exponents: &[4],
        eval: |ps| count_prime_power(ps[0], 4),
    },
    Sampler {
        label: "p^5",
        primes: 1,
        exponents: &[5],
        eval: |ps| count_prime_power(ps[0], 5),
    },
    Sampler {
        label: "pq",
        primes: 2,
        exponents: &[1, 1],
        eval: squarefree_of,
    },
    Sampler {
        label: "pqr",
        primes: 3,
        exponents: &[1, 1, 1],
        eval: squarefree_of,
    },
    Sampler {
        label: "pqrs",
        primes: 4,
        exponents: &[1, 1, 1, 1],
        eval: squarefree_of,
    },
    Sampler {
        label: "p^2q",
        primes: 2,
        exponents: &[2, 1],
        eval: |ps| count_p2q(ps[0], ps[1]),
    },
    Sampler {
        label: "p^3q",
        primes: 2,
        exponents: &[3, 1],
        eval: |ps| count_p3q(ps[0], ps[1]),
    },
    Sampler {
        label: "p^2q^2",
        primes: 2,
        exponents: &[2, 2],
        eval: |ps| count_p2q2(ps[0], ps[1]),
    },
    Sampler {
        label: "p^2qr",
        primes: 3,
        exponents: &[2, 1, 1],
        eval: |ps| count_p2qr(ps[0], ps[1], ps[2]),
    },
];

/// Per shape, the number of sampled tuples whose count is an exact integer
/// at least the abelian count. Square-free tuples whose product leaves the
/// supported range are redrawn.
fn integrality_cases(opts: &VerifyOptions) -> Vec<Case> {
    let primes = sieve(MAX_SAMPLE_PRIME);
    let mut cases: Vec<Case> = SAMPLERS
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
            let abelian = abelian_for(s.exponents);
            let mut good = 0usize;
            let mut drawn = 0usize;
            while drawn < opts.samples {
                let ps = draw_primes(&mut rng, &primes, s.primes);
                if s.exponents.iter().all(|&e| e == 1)
                    && ps
                        .iter()
                        .try_fold(1u64, |a, &p| a.checked_mul(p))
                        .is_none_or(|n| n > i64::MAX as u64)
                {
                    continue;
                }
                drawn += 1;
                if let Ok(gc) = (s.eval)(&ps) {
                    let sum = gc.term_sum();
                    if sum.is_integer()
                        && sum.to_integer() >= 0
                        && sum.to_integer() as u128 == gc.count
                        && gc.count >= abelian
                    {
                        good += 1;
                    }
                }
            }
            Case::new(
                format!(
                    "{}: {} tuples integral and >= {abelian}",
                    s.label, opts.samples
                ),
                opts.samples as u128,
                good as u128,
            )
        })
        .collect();
    cases.extend(override_cases());
    cases
}

type Eval = fn() -> Result<GroupCount, CensusError>;

/// Each stated special value next to the general branch at the same input,
/// which must disagree.
fn override_cases() -> Vec<Case> {
    let rows: [(&str, Eval, Eval, u128); 4] = [
        ("p^3q(2,3)", || count_p3q(2, 3), || p3q_formula(2, 3), 15),
        ("p^3q(2,7)", || count_p3q(2, 7), || p3q_formula(2, 7), 13),
        (
            "p^2q^2(2,3)",
            || count_p2q2(2, 3),
            || p2q2_formula(2, 3),
            14,
        ),
        (
            "p^2qr(2,3,5)",
            || count_p2qr(2, 3, 5),
            || p2qr_formula(2, 3, 5),
            13,
        ),
    ];
    let mut cases = Vec::new();
    for (label, special, branch, stated) in rows {
        let special = special().map(|g| g.count).unwrap_or(u128::MAX);
        let branch = branch().map(|g| g.count).unwrap_or(u128::MAX);
        cases.push(Case::new(format!("override {label}"), stated, special));
        cases.push(Case::new(format!("branch {label}"), 12, branch));
        cases.push(Case::new(
            format!("override {label} differs from branch"),
            1,
            (special != branch) as u128,
        ));
    }
    cases
}

fn squarefree_cases(opts: &VerifyOptions) -> Result<Vec<Case>, CensusError> {
    let divisor_sum = |n: u64| -> Result<u128, CensusError> {
        let f: Factorization = factorize(n)?;
        Ok(count_squarefree(&f)?.count)
    };
    let mut cases = vec![
        Case::new("N(30)", 4, divisor_sum(30)?),
        Case::new("N(210)", 12, divisor_sum(210)?),
    ];
    for (n, stated) in [(6u32, 2u128), (10, 2), (15, 1)] {
        let sum = divisor_sum(n as u64)?;
        cases.push(Case::new(format!("N({n})"), stated, sum));
        cases.push(Case::new(
            format!("cayley({n})"),
            sum,
            enumerate_groups(n, &opts.limits)? as u128,
        ));
    }
    Ok(cases)
}

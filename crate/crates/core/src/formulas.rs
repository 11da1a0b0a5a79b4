//! Closed formulas for the number of groups of order `n`.
//!
//! Every summand is an exact rational; a few of them (for instance in the
//! `p^3 q` formula with both primes odd) only become integral once the whole
//! sum is taken, so the division is asserted after summation.

use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{abelian_count, classify_shape, factorize, is_prime, Factorization, OrderShape};
use crate::error::CensusError;

pub type Rational = Ratio<i128>;

/// Largest prime accepted by the mixed-shape formulas. Keeps every
/// intermediate product well inside `i128`.
pub const MAX_FORMULA_PRIME: u64 = (1 << 31) - 1;

/// One summand of an evaluated formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    #[serde(with = "rational_str")]
    pub value: Rational,
}

/// Result of evaluating the formula that applies to `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GroupCountRecord", try_from = "GroupCountRecord")]
pub struct GroupCount {
    /// Wider than the dispatcher input so the shape operations accept
    /// primes well beyond the 64-bit order range.
    pub n: u128,
    pub shape: OrderShape,
    pub count: u128,
    pub terms: Vec<Term>,
    pub special_case: bool,
}

impl GroupCount {
    /// Exact sum of the recorded summands.
    pub fn term_sum(&self) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, t| acc + t.value)
    }
}

impl fmt::Display for GroupCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N({}) = {}", self.n, self.count)
    }
}

/// Wire form of [`GroupCount`]: the shape travels as its tag and is
/// recovered from `n` on the way back in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupCountRecord {
    pub n: u128,
    pub shape: String,
    pub count: u128,
    pub special_case: bool,
    pub terms: Vec<Term>,
}

impl From<GroupCount> for GroupCountRecord {
    fn from(g: GroupCount) -> Self {
        GroupCountRecord {
            n: g.n,
            shape: g.shape.tag().to_string(),
            count: g.count,
            special_case: g.special_case,
            terms: g.terms,
        }
    }
}

impl TryFrom<GroupCountRecord> for GroupCount {
    type Error = String;

    fn try_from(r: GroupCountRecord) -> Result<Self, String> {
        let n =
            u64::try_from(r.n).map_err(|_| format!("cannot recover the shape of n = {}", r.n))?;
        let f = factorize(n).map_err(|e| e.to_string())?;
        let shape = classify_shape(&f);
        if shape.tag() != r.shape {
            return Err(format!(
                "shape tag {:?} does not match n = {} ({})",
                r.shape,
                r.n,
                shape.tag()
            ));
        }
        Ok(GroupCount {
            n: r.n,
            shape,
            count: r.count,
            terms: r.terms,
            special_case: r.special_case,
        })
    }
}

pub mod rational_str {
    //! Serialises rationals as `"a/b"` strings.

    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("{}/{}", v.numer(), v.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Rational>().map_err(D::Error::custom)
    }
}

/// `c_m(p)` for every prime `p` of `n / m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeContext {
    pub m: u64,
    pub c: Vec<(u64, u32)>,
}

impl SquarefreeContext {
    /// Builds the context for divisor `m` of the square-free number behind `f`.
    pub fn new(f: &Factorization, m: u64) -> Self {
        let (inside, outside): (Vec<u64>, Vec<u64>) =
            f.primes().partition(|p| m.is_multiple_of(*p));
        let c = outside
            .into_iter()
            .map(|p| {
                let hits = inside.iter().filter(|&&q| q % p == 1).count() as u32;
                (p, hits)
            })
            .collect();
        SquarefreeContext { m, c }
    }
}

fn wi(r: i128, s: i128) -> i128 {
    debug_assert!(r >= 0 && s >= 1);
    i128::from(r % s == 0)
}

fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

/// Accumulates labelled summands.
struct Terms(Vec<Term>);

impl Terms {
    fn new() -> Self {
        Terms(Vec::new())
    }

    fn add(&mut self, label: &str, value: Rational) -> &mut Self {
        self.0.push(Term {
            label: label.to_string(),
            value,
        });
        self
    }

    fn finish(
        self,
        n: u128,
        shape: OrderShape,
        special_case: bool,
    ) -> Result<GroupCount, CensusError> {
        let mut total = Rational::zero();
        for t in &self.0 {
            total = total
                .checked_add(&t.value)
                .ok_or_else(|| CensusError::Overflow(format!("summing terms for n = {n}")))?;
        }
        if !total.is_integer() || total < Rational::zero() {
            return Err(CensusError::precondition(format!(
                "formula for n = {n} evaluated to {total}, not a nonnegative integer"
            )));
        }
        Ok(GroupCount {
            n,
            shape,
            count: total.to_integer() as u128,
            terms: self.0,
            special_case,
        })
    }
}

fn require_prime(p: u64) -> Result<(), CensusError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CensusError::precondition(format!("{p} is not prime")))
    }
}

fn require_formula_primes(ps: &[u64]) -> Result<(), CensusError> {
    for &p in ps {
        require_prime(p)?;
        if p > MAX_FORMULA_PRIME {
            return Err(CensusError::Overflow(format!(
                "prime {p} exceeds the formula bound 2^31-1"
            )));
        }
    }
    for (i, a) in ps.iter().enumerate() {
        if ps[i + 1..].contains(a) {
            return Err(CensusError::precondition(format!(
                "primes must be pairwise distinct, got {ps:?}"
            )));
        }
    }
    Ok(())
}

fn order_of(parts: &[(u64, u32)]) -> Result<u128, CensusError> {
    parts
        .iter()
        .try_fold(1u128, |acc, &(p, e)| {
            (p as u128)
                .checked_pow(e)
                .and_then(|pe| acc.checked_mul(pe))
        })
        .ok_or_else(|| CensusError::Overflow(format!("order {parts:?} exceeds 128 bits")))
}

/// Number of groups of order `p^m`, `1 <= m <= 5`.
pub fn count_prime_power(p: u64, m: u32) -> Result<GroupCount, CensusError> {
    require_prime(p)?;
    if !(1..=5).contains(&m) {
        return Err(CensusError::Unsupported { exponents: vec![m] });
    }
    let n = order_of(&[(p, m)])?;
    let shape = match m {
        1 => OrderShape::P { p },
        2 => OrderShape::P2 { p },
        3 => OrderShape::P3 { p },
        4 => OrderShape::P4 { p },
        _ => OrderShape::PrimePower5 { p },
    };
    let pi = p as i128;
    let mut t = Terms::new();
    let special = match (m, p) {
        (1, _) => {
            t.add("1", int(1));
            false
        }
        (2, _) => {
            t.add("2", int(2));
            false
        }
        (3, _) => {
            t.add("5", int(5));
            false
        }
        (4, 2) => {
            t.add("N(2^4)", int(14));
            true
        }
        (4, _) => {
            t.add("15", int(15));
            false
        }
        (5, 2) => {
            t.add("N(2^5)", int(51));
            true
        }
        (5, 3) => {
            t.add("N(3^5)", int(71));
            true
        }
        _ => {
            t.add("2p", int(2 * pi))
                .add("61", int(61))
                .add(
                    "2 gcd(p-1,3)",
                    int(2 * crate::arith::gcd(p as u128 - 1, 3) as i128),
                )
                .add(
                    "gcd(p-1,4)",
                    int(crate::arith::gcd(p as u128 - 1, 4) as i128),
                );
            false
        }
    };
    t.finish(n, shape, special)
}

/// Divisor-sum count for square-free orders.
pub fn count_squarefree(f: &Factorization) -> Result<GroupCount, CensusError> {
    if !f.is_squarefree() {
        return Err(CensusError::precondition(format!(
            "{} is not square-free",
            f.n()
        )));
    }
    let primes: Vec<u64> = f.primes().collect();
    let overflow = || CensusError::Overflow(format!("square-free sum for n = {}", f.n()));
    let mut t = Terms::new();
    for mask in (0..1u32 << primes.len()).rev() {
        let m: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .product();
        let ctx = SquarefreeContext::new(f, m);
        let mut value: u128 = 1;
        for &(p, c) in &ctx.c {
            // (p^c - 1)/(p - 1) = 1 + p + ... + p^(c-1)
            let mut geom: u128 = 0;
            let mut pk: u128 = 1;
            for _ in 0..c {
                geom = geom.checked_add(pk).ok_or_else(overflow)?;
                pk = pk.checked_mul(p as u128).ok_or_else(overflow)?;
            }
            value = value.checked_mul(geom).ok_or_else(overflow)?;
        }
        let value = i128::try_from(value).map_err(|_| overflow())?;
        t.add(&format!("m={m}"), int(value));
    }
    t.finish(f.n() as u128, classify_shape(f), false)
}

/// Number of groups of order `p^2 q`.
pub fn count_p2q(p: u64, q: u64) -> Result<GroupCount, CensusError> {
    require_formula_primes(&[p, q])?;
    let n = order_of(&[(p, 2), (q, 1)])?;
    let shape = OrderShape::P2Q { p, q };
    let (p, q) = (p as i128, q as i128);
    let mut t = Terms::new();
    if q == 2 {
        t.add("5", int(5));
    } else {
        t.add("2", int(2))
            .add("(q+5)/2 w_{p-1}(q)", rat(q + 5, 2) * wi(p - 1, q))
            .add("w_{p+1}(q)", int(wi(p + 1, q)))
            .add("2 w_{q-1}(p)", int(2 * wi(q - 1, p)))
            .add("w_{q-1}(p^2)", int(wi(q - 1, p * p)));
    }
    t.finish(n, shape, false)
}

/// Number of groups of order `p^3 q`, including the two special orders 24 and 56.
pub fn count_p3q(p: u64, q: u64) -> Result<GroupCount, CensusError> {
    require_formula_primes(&[p, q])?;
    let special = match (p, q) {
        (2, 3) => Some(15),
        (2, 7) => Some(13),
        _ => None,
    };
    match special {
        Some(v) => {
            let mut t = Terms::new();
            t.add(&format!("N({} * 2^3)", q), int(v));
            t.finish(order_of(&[(p, 3), (q, 1)])?, OrderShape::P3Q { p, q }, true)
        }
        None => p3q_formula(p, q),
    }
}

/// The `p^3 q` formula with the special orders ignored.
pub fn p3q_formula(p: u64, q: u64) -> Result<GroupCount, CensusError> {
    require_formula_primes(&[p, q])?;
    let n = order_of(&[(p, 3), (q, 1)])?;
    let shape = OrderShape::P3Q { p, q };
    let (p, q) = (p as i128, q as i128);
    let mut t = Terms::new();
    if q == 2 {
        t.add("15", int(15));
    } else if p == 2 {
        t.add("12", int(12))
            .add("2 w_{q-1}(4)", int(2 * wi(q - 1, 4)))
            .add("w_{q-1}(8)", int(wi(q - 1, 8)));
    } else {
        let wpq = wi(p - 1, q);
        t.add("5", int(5))
            .add(
                "(q^2+13q+36)/6 w_{p-1}(q)",
                rat(q * q + 13 * q + 36, 6) * wpq,
            )
            .add("(p+5) w_{q-1}(p)", int((p + 5) * wi(q - 1, p)))
            .add(
                "2/3 w_{q-1}(3) w_{p-1}(q)",
                rat(2, 3) * (wi(q - 1, 3) * wpq),
            )
            .add(
                "w_{(p+1)(p^2+p+1)}(q) (1-w_{p-1}(q))",
                int(wi((p + 1) * (p * p + p + 1), q) * (1 - wpq)),
            )
            .add("w_{p+1}(q)", int(wi(p + 1, q)))
            .add("2 w_{q-1}(p^2)", int(2 * wi(q - 1, p * p)))
            .add("w_{q-1}(p^3)", int(wi(q - 1, p * p * p)));
    }
    t.finish(n, shape, false)
}

/// Number of groups of order `p^2 q^2`; the primes may be given in either order.
pub fn count_p2q2(p: u64, q: u64) -> Result<GroupCount, CensusError> {
    require_formula_primes(&[p, q])?;
    let (p, q) = (p.min(q), p.max(q));
    if (p, q) == (2, 3) {
        let mut t = Terms::new();
        t.add("N(2^2 * 3^2)", int(14));
        return t.finish(36, OrderShape::P2Q2 { p, q }, true);
    }
    p2q2_formula(p, q)
}

/// The `p^2 q^2` formula with the special order 36 ignored.
pub fn p2q2_formula(p: u64, q: u64) -> Result<GroupCount, CensusError> {
    require_formula_primes(&[p, q])?;
    let (p, q) = (p.min(q), p.max(q));
    let n = order_of(&[(p, 2), (q, 2)])?;
    let shape = OrderShape::P2Q2 { p, q };
    let (p, q) = (p as i128, q as i128);
    let mut t = Terms::new();
    if p == 2 {
        t.add("12", int(12))
            .add("4 w_{q-1}(4)", int(4 * wi(q - 1, 4)));
    } else {
        t.add("4", int(4))
            .add(
                "(p^2+p+4)/2 w_{q-1}(p^2)",
                rat(p * p + p + 4, 2) * wi(q - 1, p * p),
            )
            .add("(p+6) w_{q-1}(p)", int((p + 6) * wi(q - 1, p)))
            .add("2 w_{q+1}(p)", int(2 * wi(q + 1, p)))
            .add("w_{q+1}(p^2)", int(wi(q + 1, p * p)));
    }
    t.finish(n, shape, false)
}

/// Number of groups of order `p^2 q r`; `q` and `r` may be given in either order.
pub fn count_p2qr(p: u64, q: u64, r: u64) -> Result<GroupCount, CensusError> {
    require_formula_primes(&[p, q, r])?;
    let (q, r) = (q.min(r), q.max(r));
    if (p, q, r) == (2, 3, 5) {
        let mut t = Terms::new();
        t.add("N(2^2 * 3 * 5)", int(13));
        return t.finish(60, OrderShape::P2QR { p, q, r }, true);
    }
    p2qr_formula(p, q, r)
}

/// The `p^2 q r` formula with the special order 60 ignored.
pub fn p2qr_formula(p: u64, q: u64, r: u64) -> Result<GroupCount, CensusError> {
    require_formula_primes(&[p, q, r])?;
    let (q, r) = (q.min(r), q.max(r));
    let n = order_of(&[(p, 2), (q, 1), (r, 1)])?;
    let shape = OrderShape::P2QR { p, q, r };
    let (p, q, r) = (p as i128, q as i128, r as i128);
    let p2 = p * p;
    let mut t = Terms::new();
    if q == 2 {
        t.add("10", int(10))
            .add("(2r+7) w_{p-1}(r)", int((2 * r + 7) * wi(p - 1, r)))
            .add("3 w_{p+1}(r)", int(3 * wi(p + 1, r)))
            .add("6 w_{r-1}(p)", int(6 * wi(r - 1, p)))
            .add("2 w_{r-1}(p^2)", int(2 * wi(r - 1, p2)));
        return t.finish(n, shape, false);
    }
    let wq_p = wi(q - 1, p);
    let wq_p2 = wi(q - 1, p2);
    let wr_p = wi(r - 1, p);
    let wr_p2 = wi(r - 1, p2);
    let wp_q = wi(p - 1, q);
    let wp_r = wi(p - 1, r);
    let wp_qr = wi(p - 1, q * r);
    let wr_q = wi(r - 1, q);
    let wr_pq = wi(r - 1, p * q);
    let wpp_q = wi(p + 1, q);
    let wpp_r = wi(p + 1, r);

    t.add("2", int(2))
        .add(
            "(p^2-p) w_{q-1}(p^2) w_{r-1}(p^2)",
            int((p2 - p) * wq_p2 * wr_p2),
        )
        .add(
            "(p-1) (w_{q-1}(p^2) w_{r-1}(p) + w_{r-1}(p^2) w_{q-1}(p) + 2 w_{r-1}(p) w_{q-1}(p))",
            int((p - 1) * (wq_p2 * wr_p + wr_p2 * wq_p + 2 * wr_p * wq_p)),
        )
        .add(
            "(q-1)(q+4)/2 w_{p-1}(q) w_{r-1}(q)",
            rat((q - 1) * (q + 4), 2) * (wp_q * wr_q),
        )
        .add(
            "(q-1)/2 (w_{p+1}(q) w_{r-1}(q) + w_{p-1}(q) + w_{p-1}(qr) + 2 w_{r-1}(pq) w_{p-1}(q))",
            rat(q - 1, 2) * (wpp_q * wr_q + wp_q + wp_qr + 2 * wr_pq * wp_q),
        )
        .add("(qr+1)/2 w_{p-1}(qr)", rat(q * r + 1, 2) * wp_qr)
        .add(
            "(r+5)/2 w_{p-1}(r) (1 + w_{p-1}(q))",
            rat(r + 5, 2) * (wp_r * (1 + wp_q)),
        )
        .add("w_{p^2-1}(qr)", int(wi(p2 - 1, q * r)))
        .add("2 w_{r-1}(pq)", int(2 * wr_pq))
        .add("w_{r-1}(p) w_{p-1}(q)", int(wr_p * wp_q))
        .add("w_{r-1}(p^2 q)", int(wi(r - 1, p2 * q)))
        .add("w_{r-1}(p) w_{q-1}(p)", int(wr_p * wq_p))
        .add("2 w_{q-1}(p)", int(2 * wq_p))
        .add("3 w_{p-1}(q)", int(3 * wp_q))
        .add("2 w_{r-1}(p)", int(2 * wr_p))
        .add("2 w_{r-1}(q)", int(2 * wr_q))
        .add("w_{r-1}(p^2)", int(wr_p2))
        .add("w_{q-1}(p^2)", int(wq_p2))
        .add("w_{p+1}(r)", int(wpp_r))
        .add("w_{p+1}(q)", int(wpp_q));
    t.finish(n, shape, false)
}

/// Number of groups of order `n`, dispatched on the shape of `n`.
pub fn count_groups(n: u64) -> Result<GroupCount, CensusError> {
    let f = factorize(n)?;
    let shape = classify_shape(&f);
    let result = match shape {
        OrderShape::Trivial => {
            let mut t = Terms::new();
            t.add("1", int(1));
            t.finish(1, OrderShape::Trivial, false)
        }
        OrderShape::P { p } => count_prime_power(p, 1),
        OrderShape::P2 { p } => count_prime_power(p, 2),
        OrderShape::P3 { p } => count_prime_power(p, 3),
        OrderShape::P4 { p } => count_prime_power(p, 4),
        OrderShape::PrimePower5 { p } => count_prime_power(p, 5),
        OrderShape::PQ { .. } | OrderShape::PQR { .. } | OrderShape::PQRS { .. } => {
            count_squarefree(&f)
        }
        OrderShape::P2Q { p, q } => count_p2q(p, q),
        OrderShape::P3Q { p, q } => count_p3q(p, q),
        OrderShape::P2Q2 { p, q } => count_p2q2(p, q),
        OrderShape::P2QR { p, q, r } => count_p2qr(p, q, r),
        OrderShape::Unsupported { exponents } => Err(CensusError::Unsupported { exponents }),
    }?;
    debug_assert!(result.count >= abelian_count(&f) as u128);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_of(r: Result<GroupCount, CensusError>) -> u128 {
        r.unwrap().count
    }

    #[test]
    fn prime_power_values() {
        assert_eq!(n_of(count_prime_power(2, 4)), 14);
        assert_eq!(n_of(count_prime_power(3, 4)), 15);
        assert_eq!(n_of(count_prime_power(2, 5)), 51);
        assert_eq!(n_of(count_prime_power(3, 5)), 71);
        // 14 + 61 + 2*3 + 2
        assert_eq!(n_of(count_prime_power(7, 5)), 83);
        // 10 + 61 + 2 + 4
        assert_eq!(n_of(count_prime_power(5, 5)), 77);
        for p in [2, 3, 5, 101] {
            assert_eq!(n_of(count_prime_power(p, 1)), 1);
            assert_eq!(n_of(count_prime_power(p, 2)), 2);
            assert_eq!(n_of(count_prime_power(p, 3)), 5);
        }
        assert!(matches!(
            count_prime_power(2, 6),
            Err(CensusError::Unsupported { .. })
        ));
        assert!(matches!(
            count_prime_power(2, 0),
            Err(CensusError::Unsupported { .. })
        ));
        assert!(count_prime_power(4, 2).is_err());
    }

    #[test]
    fn squarefree_values() {
        let sq = |n| n_of(count_squarefree(&factorize(n).unwrap()));
        assert_eq!(sq(30), 4);
        assert_eq!(sq(15), 1);
        assert_eq!(sq(13), 1);
        assert_eq!(sq(6), 2);
        assert_eq!(sq(210), 12);
        assert!(count_squarefree(&factorize(12).unwrap()).is_err());
    }

    #[test]
    fn squarefree_terms_for_30() {
        let g = count_squarefree(&factorize(30).unwrap()).unwrap();
        let nonzero: Vec<_> = g
            .terms
            .iter()
            .filter(|t| !t.value.is_zero())
            .map(|t| (t.label.as_str(), *t.value.numer()))
            .collect();
        assert_eq!(nonzero, vec![("m=30", 1), ("m=15", 3)]);
    }

    #[test]
    fn squarefree_context_counts() {
        let f = factorize(2 * 3 * 7).unwrap();
        let ctx = SquarefreeContext::new(&f, 21);
        assert_eq!(ctx.c, vec![(2, 2)]);
        let ctx = SquarefreeContext::new(&f, 7);
        assert_eq!(ctx.c, vec![(2, 1), (3, 1)]);
    }

    #[test]
    fn p2q_values() {
        assert_eq!(n_of(count_p2q(3, 2)), 5);
        assert_eq!(n_of(count_p2q(2, 3)), 5);
        assert_eq!(n_of(count_p2q(5, 3)), 3);
        assert_eq!(n_of(count_p2q(2, 5)), 5); // order 20
        assert_eq!(n_of(count_p2q(2, 7)), 4); // order 28
        assert!(count_p2q(3, 3).is_err());
    }

    #[test]
    fn p3q_values() {
        assert_eq!(n_of(count_p3q(2, 3)), 15);
        assert_eq!(n_of(count_p3q(2, 7)), 13);
        assert_eq!(n_of(count_p3q(2, 5)), 14);
        assert_eq!(n_of(count_p3q(3, 5)), 5);
        assert_eq!(n_of(count_p3q(3, 2)), 15);
        assert!(count_p3q(5, 5).is_err());
    }

    #[test]
    fn p3q_individual_terms_need_not_be_integral() {
        // q = 7 divides p - 1 = 28 and 3 divides q - 1
        let g = count_p3q(29, 7).unwrap();
        assert!(g.terms.iter().any(|t| !t.value.is_integer()));
        assert!(g.term_sum().is_integer());
        assert_eq!(g.term_sum().to_integer() as u128, g.count);
    }

    #[test]
    fn p2q2_values() {
        assert_eq!(n_of(count_p2q2(2, 3)), 14);
        assert_eq!(n_of(count_p2q2(3, 2)), 14);
        assert_eq!(n_of(count_p2q2(2, 5)), 16);
        assert_eq!(n_of(count_p2q2(3, 5)), 6);
        assert!(count_p2q2(7, 7).is_err());
    }

    #[test]
    fn p2qr_values() {
        assert_eq!(n_of(count_p2qr(2, 3, 5)), 13);
        assert_eq!(n_of(count_p2qr(2, 5, 3)), 13);
        assert_eq!(n_of(count_p2qr(3, 2, 5)), 10);
        assert_eq!(n_of(count_p2qr(2, 3, 7)), 15);
        assert!(count_p2qr(2, 2, 3).is_err());
        assert!(count_p2qr(2, 3, 3).is_err());
    }

    #[test]
    fn overrides_differ_from_general_branch() {
        assert_eq!(p3q_formula(2, 3).unwrap().count, 12);
        assert_eq!(p3q_formula(2, 7).unwrap().count, 12);
        assert_eq!(p2q2_formula(2, 3).unwrap().count, 12);
        assert_eq!(p2qr_formula(2, 3, 5).unwrap().count, 12);
        assert!(count_p3q(2, 3).unwrap().special_case);
        assert!(!count_p3q(2, 5).unwrap().special_case);
    }

    #[test]
    fn odd_p3q_with_q_three_matches_short_form() {
        // 5 + 14 w_{p-1}(3) + 2 w_{p+1}(3)
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
            let short = 5 + 14 * u128::from((p - 1) % 3 == 0) + 2 * u128::from((p + 1) % 3 == 0);
            assert_eq!(count_p3q(p, 3).unwrap().count, short, "p = {p}");
        }
    }

    #[test]
    fn prime_bound_is_enforced() {
        let big = 2_147_483_659; // first prime past 2^31 - 1
        assert!(matches!(count_p2q(big, 3), Err(CensusError::Overflow(_))));
        assert!(count_p2q(MAX_FORMULA_PRIME, 3).is_ok());
        assert!(matches!(count_p2q(4, 3), Err(CensusError::Precondition(_))));
    }

    #[test]
    fn dispatcher_examples() {
        assert_eq!(n_of(count_groups(60)), 13);
        assert_eq!(n_of(count_groups(16)), 14);
        assert_eq!(n_of(count_groups(210)), 12);
        assert_eq!(n_of(count_groups(1)), 1);
        assert_eq!(
            count_groups(360),
            Err(CensusError::Unsupported {
                exponents: vec![3, 2, 1]
            })
        );
        assert_eq!(count_groups(0), Err(CensusError::ZeroOrder));
    }

    #[test]
    fn group_count_json_round_trip() {
        let g = count_groups(1_000_000_007 * 4).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"shape\":\"p^2q\""));
        let back: GroupCount = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let bad = s.replace("p^2q", "pq");
        assert!(serde_json::from_str::<GroupCount>(&bad).is_err());
    }
}

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::MatrixGroup;
use crate::arith::{factorize, gcd};
use crate::error::CensusError;

/// Largest subgroup order the class counter accepts.
pub const MAX_SUBGROUP_ORDER: u64 = 49;

/// Subgroup orders the class counter knows how to seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OrderSpec {
    Prime(u64),
    PrimeSquare(u64),
    /// Two distinct primes, smaller first.
    TwoPrimes(u64, u64),
}

impl OrderSpec {
    pub fn from_order(r: u64) -> Result<Self, CensusError> {
        let f = factorize(r)?;
        match f.factors() {
            [(q, 1)] => Ok(OrderSpec::Prime(*q)),
            [(q, 2)] => Ok(OrderSpec::PrimeSquare(*q)),
            [(q, 1), (s, 1)] => Ok(OrderSpec::TwoPrimes(*q, *s)),
            _ => Err(CensusError::Precondition(format!(
                "subgroup order {r} is not of the form q, q^2 or qr"
            ))),
        }
    }

    pub fn order(&self) -> u64 {
        match *self {
            OrderSpec::Prime(q) => q,
            OrderSpec::PrimeSquare(q) => q * q,
            OrderSpec::TwoPrimes(q, s) => q * s,
        }
    }

    pub fn primes(&self) -> Vec<u64> {
        match *self {
            OrderSpec::Prime(q) | OrderSpec::PrimeSquare(q) => vec![q],
            OrderSpec::TwoPrimes(q, s) => vec![q, s],
        }
    }
}

/// Conjugacy classes of subgroups of one order, with a witness per class.
#[derive(Debug, Clone, Serialize)]
pub struct SubgroupClassCount {
    pub d: usize,
    pub p: u32,
    pub r: u64,
    pub classes: usize,
    /// One subgroup per class, as sorted element indices.
    pub witnesses: Vec<Vec<u32>>,
    /// How many subgroups of order `r` exist in total.
    pub subgroups: usize,
}

fn elements_of_order(g: &MatrixGroup, k: u64) -> Vec<u32> {
    g.element_orders()
        .iter()
        .enumerate()
        .filter(|&(_, &o)| o as u64 == k)
        .map(|(i, _)| i as u32)
        .collect()
}

/// Every subgroup of order `spec.order()`, in discovery order.
pub(crate) fn all_subgroups(g: &MatrixGroup, spec: OrderSpec) -> Vec<Vec<u32>> {
    let r = spec.order() as usize;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut found = Vec::new();
    let mut keep = |h: Vec<u32>, found: &mut Vec<Vec<u32>>| {
        if seen.insert(h.clone()) {
            found.push(h);
        }
    };

    // cyclic subgroups; a generator already inside one found subgroup
    // generates that same subgroup
    let mut covered = vec![false; g.order()];
    for x in elements_of_order(g, r as u64) {
        if covered[x as usize] {
            continue;
        }
        let h = g.closure(&[x], r).expect("cyclic closure has order r");
        for &y in &h {
            covered[y as usize] = true;
        }
        keep(h, &mut found);
    }

    match spec {
        OrderSpec::Prime(_) => {}
        OrderSpec::PrimeSquare(q) => {
            // C_q x C_q: two commuting elements of order q, neither a power
            // of the other.
            let xs = elements_of_order(g, q);
            let pairs: Vec<Vec<u32>> = xs
                .par_iter()
                .enumerate()
                .flat_map_iter(|(i, &x)| {
                    let cyc = g.closure(&[x], q as usize).unwrap();
                    xs[i + 1..]
                        .iter()
                        .filter(move |&&y| !cyc.contains(&y) && g.mul(x, y) == g.mul(y, x))
                        .filter_map(move |&y| g.closure(&[x, y], r))
                        .filter(|h| h.len() == r)
                        .collect::<Vec<_>>()
                })
                .collect();
            for h in pairs {
                keep(h, &mut found);
            }
        }
        OrderSpec::TwoPrimes(q, s) => {
            // C_s normal, extended by an element of order q normalising it.
            let xs = elements_of_order(g, s);
            let ys = elements_of_order(g, q);
            let products: Vec<Vec<u32>> = xs
                .par_iter()
                .flat_map_iter(|&x| {
                    let cyc = g.closure(&[x], s as usize).unwrap();
                    ys.iter()
                        .filter(move |&&y| cyc.binary_search(&g.conjugate(x, y)).is_ok())
                        .filter_map(move |&y| g.closure(&[x, y], r))
                        .filter(|h| h.len() == r)
                        .collect::<Vec<_>>()
                })
                .collect();
            for h in products {
                keep(h, &mut found);
            }
        }
    }
    for h in &found {
        debug_assert_eq!(h.len(), r);
        debug_assert!(h
            .iter()
            .all(|&a| h.iter().all(|&b| h.binary_search(&g.mul(a, b)).is_ok())));
    }
    found
}

/// Splits `subgroups` into conjugacy classes. Orbits are grown by
/// conjugating with a generating set of `g` until nothing new appears.
pub(crate) fn conjugacy_classes(g: &MatrixGroup, subgroups: &[Vec<u32>]) -> Vec<usize> {
    let known: HashSet<&[u32]> = subgroups.iter().map(|h| h.as_slice()).collect();
    let gens = g.generators();
    let mut visited: HashSet<Vec<u32>> = HashSet::new();
    let mut reps = Vec::new();
    for (i, h) in subgroups.iter().enumerate() {
        if visited.contains(h) {
            continue;
        }
        reps.push(i);
        visited.insert(h.clone());
        let mut frontier = vec![h.clone()];
        while let Some(k) = frontier.pop() {
            for &x in &gens {
                let c = g.conjugate_set(&k, x);
                if !visited.contains(&c) {
                    assert!(
                        known.contains(c.as_slice()),
                        "subgroup enumeration is not closed under conjugation"
                    );
                    visited.insert(c.clone());
                    frontier.push(c);
                }
            }
        }
    }
    reps
}

fn check_spec(r: u64) -> Result<OrderSpec, CensusError> {
    if r > MAX_SUBGROUP_ORDER {
        return Err(CensusError::Precondition(format!(
            "subgroup order {r} exceeds {MAX_SUBGROUP_ORDER}"
        )));
    }
    OrderSpec::from_order(r)
}

fn check_coprime_spec(g: &MatrixGroup, r: u64) -> Result<OrderSpec, CensusError> {
    let spec = check_spec(r)?;
    if spec.primes().contains(&(g.modulus() as u64)) {
        return Err(CensusError::Precondition(format!(
            "subgroup order {r} is divisible by the characteristic {}",
            g.modulus()
        )));
    }
    Ok(spec)
}

/// Number of conjugacy classes of subgroups of order `r` in `g`.
///
/// `r` must be a prime, a prime square or a product of two distinct primes,
/// at most 49. The search does not depend on the characteristic, so `r`
/// may share a prime with `p`.
pub fn count_subgroup_classes(g: &MatrixGroup, r: u64) -> Result<SubgroupClassCount, CensusError> {
    let spec = check_spec(r)?;
    let subgroups = all_subgroups(g, spec);
    let reps = conjugacy_classes(g, &subgroups);
    Ok(SubgroupClassCount {
        d: g.dim(),
        p: g.modulus(),
        r,
        classes: reps.len(),
        witnesses: reps.iter().map(|&i| subgroups[i].clone()).collect(),
        subgroups: subgroups.len(),
    })
}

/// Normaliser and centraliser sizes of one class of order-`q` subgroups.
#[derive(Debug, Clone, Serialize)]
pub struct TwistClass {
    pub witness: Vec<u32>,
    pub normalizer: usize,
    pub centralizer: usize,
    pub reducible: bool,
    /// Determinant of a generator; 1 for diagonal type `(a, a^-1)`.
    pub generator_det: u32,
}

impl TwistClass {
    pub fn index(&self) -> usize {
        self.normalizer / self.centralizer
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormTwist {
    pub q: u64,
    /// Classes with `[N(H) : C(H)] = 2`.
    pub count: usize,
    pub classes: Vec<TwistClass>,
}

fn normalizer_centralizer(g: &MatrixGroup, h: &[u32]) -> (usize, usize) {
    let gen = *h
        .iter()
        .find(|&&x| x != g.identity())
        .expect("nontrivial subgroup");
    (0..g.order() as u32)
        .into_par_iter()
        .map(|x| {
            let c = g.conjugate(gen, x);
            if c == gen {
                (1, 1)
            } else if h.binary_search(&c).is_ok() {
                (1, 0)
            } else {
                (0, 0)
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Counts the classes of order-`q` subgroups of `GL(2, p)` whose normaliser
/// has index 2 over the centraliser.
///
/// The index is computed for every order-`q` subgroup, not only for class
/// representatives, and an index that does not divide 2 is reported as an
/// error.
pub fn count_norm_twist(g: &MatrixGroup, q: u64) -> Result<NormTwist, CensusError> {
    if g.dim() != 2 {
        return Err(CensusError::Precondition(
            "normaliser twist is defined for GL(2, p) only".into(),
        ));
    }
    let spec = check_coprime_spec(g, q)?;
    if !matches!(spec, OrderSpec::Prime(_)) {
        return Err(CensusError::Precondition(format!("{q} is not prime")));
    }
    let subgroups = all_subgroups(g, spec);
    for h in &subgroups {
        let (n, c) = normalizer_centralizer(g, h);
        if n % c != 0 || !matches!(n / c, 1 | 2) {
            return Err(CensusError::Precondition(format!(
                "[N:C] = {n}/{c} does not divide 2 for an order-{q} subgroup of GL(2,{})",
                g.modulus()
            )));
        }
    }
    let reps = conjugacy_classes(g, &subgroups);
    let classes: Vec<TwistClass> = reps
        .into_iter()
        .map(|i| {
            let h = subgroups[i].clone();
            let (normalizer, centralizer) = normalizer_centralizer(g, &h);
            let gen = *h.iter().find(|&&x| x != g.identity()).unwrap();
            TwistClass {
                reducible: !g.is_irreducible(gen),
                generator_det: g.det(gen),
                witness: h,
                normalizer,
                centralizer,
            }
        })
        .collect();
    Ok(NormTwist {
        q,
        count: classes.iter().filter(|c| c.index() == 2).count(),
        classes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IrreducibleCheck {
    pub exists: bool,
    /// `None` when no irreducible cyclic subgroup exists.
    pub unique_class: Option<bool>,
}

/// Searches `g` for irreducible cyclic subgroups of order `m` and checks
/// whether they are all conjugate.
pub fn irreducible_cyclic_check(g: &MatrixGroup, m: u64) -> Result<IrreducibleCheck, CensusError> {
    if m == 0 || gcd(m as u128, g.modulus() as u128) != 1 {
        return Err(CensusError::Precondition(format!(
            "order {m} must be positive and coprime to {}",
            g.modulus()
        )));
    }
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut irreducible = Vec::new();
    for x in elements_of_order(g, m) {
        if g.is_irreducible(x) {
            let h = g.closure(&[x], m as usize).unwrap();
            if seen.insert(h.clone()) {
                irreducible.push(h);
            }
        }
    }
    if irreducible.is_empty() {
        return Ok(IrreducibleCheck {
            exists: false,
            unique_class: None,
        });
    }
    let reps = conjugacy_classes(g, &irreducible);
    Ok(IrreducibleCheck {
        exists: true,
        unique_class: Some(reps.len() == 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl::enumerate_gl;
    use crate::limits::Limits;

    fn gl(d: u32, p: u64) -> MatrixGroup {
        enumerate_gl(d, p, &Limits::default()).unwrap()
    }

    fn classes(d: u32, p: u64, r: u64) -> usize {
        count_subgroup_classes(&gl(d, p), r).unwrap().classes
    }

    #[test]
    fn order_spec_parsing() {
        assert_eq!(OrderSpec::from_order(7).unwrap(), OrderSpec::Prime(7));
        assert_eq!(
            OrderSpec::from_order(25).unwrap(),
            OrderSpec::PrimeSquare(5)
        );
        assert_eq!(
            OrderSpec::from_order(15).unwrap(),
            OrderSpec::TwoPrimes(3, 5)
        );
        assert!(OrderSpec::from_order(8).is_err());
        assert!(OrderSpec::from_order(30).is_err());
        assert!(OrderSpec::from_order(1).is_err());
    }

    #[test]
    fn brute_force_examples() {
        for p in [3, 5, 7] {
            assert_eq!(classes(2, p, 2), 2, "p = {p}");
        }
        assert_eq!(classes(2, 7, 3), 3);
        assert_eq!(classes(3, 2, 7), 1);
        assert_eq!(classes(3, 2, 3), 1);
        assert_eq!(classes(2, 11, 10), 11);
        assert_eq!(classes(2, 7, 9), 1);
    }

    #[test]
    fn rejects_unsupported_orders() {
        let g = gl(2, 5);
        assert!(count_subgroup_classes(&g, 8).is_err());
        assert!(count_subgroup_classes(&g, 53).is_err());
        // unipotent subgroups are all conjugate
        assert_eq!(count_subgroup_classes(&g, 5).unwrap().classes, 1);
        assert!(count_norm_twist(&g, 5).is_err());
        // Lagrange: no subgroup of an order not dividing |G|
        assert_eq!(count_subgroup_classes(&g, 7).unwrap().classes, 0);
    }

    #[test]
    fn witnesses_are_pairwise_non_conjugate_subgroups() {
        let g = gl(2, 7);
        for r in [2, 3, 4, 6, 9] {
            let res = count_subgroup_classes(&g, r).unwrap();
            for w in &res.witnesses {
                assert_eq!(w.len() as u64, r);
                assert!(w
                    .iter()
                    .all(|&a| w.iter().all(|&b| w.binary_search(&g.mul(a, b)).is_ok())));
            }
            for (i, a) in res.witnesses.iter().enumerate() {
                for b in &res.witnesses[i + 1..] {
                    let conjugate = (0..g.order() as u32).any(|x| &g.conjugate_set(a, x) == b);
                    assert!(!conjugate, "r = {r}: witnesses conjugate");
                }
            }
        }
    }

    #[test]
    fn norm_twist_examples() {
        for p in [3, 5, 7] {
            assert_eq!(count_norm_twist(&gl(2, p), 2).unwrap().count, 0);
        }
        assert_eq!(count_norm_twist(&gl(2, 7), 3).unwrap().count, 1);
        assert_eq!(count_norm_twist(&gl(2, 7), 5).unwrap().count, 0);
        assert!(count_norm_twist(&gl(3, 2), 3).is_err());
    }

    #[test]
    fn reducible_twisted_class_has_determinant_one() {
        // q = 3 divides p - 1 = 12 and p + 1 = 14 is prime to it, so the only
        // twisted class is reducible; its generators look like diag(a, a^-1).
        let t = count_norm_twist(&gl(2, 13), 3).unwrap();
        let twisted: Vec<_> = t.classes.iter().filter(|c| c.index() == 2).collect();
        assert_eq!(twisted.len(), 1);
        assert!(twisted[0].reducible);
        assert_eq!(twisted[0].generator_det, 1);
    }

    #[test]
    fn irreducible_examples() {
        let c = irreducible_cyclic_check(&gl(2, 3), 8).unwrap();
        assert_eq!(
            c,
            IrreducibleCheck {
                exists: true,
                unique_class: Some(true)
            }
        );
        assert!(!irreducible_cyclic_check(&gl(2, 5), 4).unwrap().exists);
        assert!(!irreducible_cyclic_check(&gl(2, 7), 1).unwrap().exists);
        assert!(irreducible_cyclic_check(&gl(2, 5), 5).is_err());
    }
}

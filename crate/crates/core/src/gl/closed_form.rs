//! Closed-form subgroup-class counts for `GL(2, p)` and `GL(3, p)`.

use num_rational::Ratio;

use super::OrderSpec;
use crate::arith::is_prime;
use crate::error::CensusError;

type Q = Ratio<i128>;

fn wi(r: i128, s: i128) -> i128 {
    i128::from(r % s == 0)
}

fn uncovered(d: u32, p: u64, r: u64) -> CensusError {
    CensusError::Unsupported {
        exponents: vec![d, p as u32, r as u32],
    }
}

/// Predicted number of conjugacy classes of subgroups of order `r` in
/// `GL(d, p)`.
///
/// Covered: every `r` coprime to `p` of the form `q`, `q^2` or `qs` when
/// `d = 2`, and every prime `q != p` when `d = 3`.
pub fn formula_s(d: u32, p: u64, r: u64) -> Result<u64, CensusError> {
    if !is_prime(p) {
        return Err(CensusError::Precondition(format!("{p} is not prime")));
    }
    let spec = OrderSpec::from_order(r).map_err(|_| uncovered(d, p, r))?;
    if spec.primes().contains(&p) {
        return Err(uncovered(d, p, r));
    }
    let pi = p as i128;
    let value: Q = match (d, spec) {
        (2, OrderSpec::Prime(2)) => Q::from_integer(2),
        (2, OrderSpec::Prime(q)) => {
            let q = q as i128;
            Q::new(q + 3, 2) * wi(pi - 1, q) + wi(pi + 1, q)
        }
        (2, OrderSpec::PrimeSquare(2)) => Q::from_integer(2 + 3 * wi(pi - 1, 4)),
        (2, OrderSpec::PrimeSquare(q)) => {
            let q = q as i128;
            Q::from_integer(wi(pi - 1, q))
                + Q::new(q * q + q + 2, 2) * wi(pi - 1, q * q)
                + wi(pi + 1, q * q)
        }
        (2, OrderSpec::TwoPrimes(2, s)) => {
            let s = s as i128;
            Q::new(3 * s + 7, 2) * wi(pi - 1, s) + 2 * wi(pi + 1, s)
        }
        (2, OrderSpec::TwoPrimes(q, s)) => {
            let (q, s) = (q as i128, s as i128);
            let cyc = wi(pi - 1, q * s);
            Q::new(q * s + q + s + 5, 2) * cyc + wi(pi * pi - 1, q * s) * (1 - cyc)
        }
        (3, OrderSpec::Prime(2)) => Q::from_integer(3),
        (3, OrderSpec::Prime(q)) => {
            let q = q as i128;
            let split = wi(pi - 1, q);
            Q::new(q * q + 4 * q + 9 + 4 * wi(q - 1, 3), 6) * split
                + wi((pi + 1) * (pi * pi + pi + 1), q) * (1 - split)
        }
        _ => return Err(uncovered(d, p, r)),
    };
    if !value.is_integer() {
        return Err(CensusError::Precondition(format!(
            "s_{r}(GL({d},{p})) evaluated to {value}"
        )));
    }
    Ok(value.to_integer() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        for p in [3, 5, 7, 11, 101] {
            assert_eq!(formula_s(2, p, 2).unwrap(), 2);
        }
        assert_eq!(formula_s(2, 7, 3).unwrap(), 3);
        assert_eq!(formula_s(2, 7, 9).unwrap(), 1);
        assert_eq!(formula_s(2, 11, 10).unwrap(), 11);
        assert_eq!(formula_s(3, 2, 3).unwrap(), 1);
        assert_eq!(formula_s(3, 2, 7).unwrap(), 1);
        assert_eq!(formula_s(3, 5, 2).unwrap(), 3);
    }

    #[test]
    fn uncovered_cases() {
        assert!(matches!(
            formula_s(2, 3, 3),
            Err(CensusError::Unsupported { .. })
        ));
        assert!(matches!(
            formula_s(3, 3, 9),
            Err(CensusError::Unsupported { .. })
        ));
        assert!(matches!(
            formula_s(2, 5, 8),
            Err(CensusError::Unsupported { .. })
        ));
        assert!(matches!(
            formula_s(4, 5, 3),
            Err(CensusError::Unsupported { .. })
        ));
        assert!(formula_s(2, 6, 5).is_err());
    }

    #[test]
    fn integral_for_many_primes() {
        let primes = [
            2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 61, 97,
        ];
        for &p in &primes {
            for &q in &primes {
                if q == p {
                    continue;
                }
                assert!(formula_s(2, p, q).is_ok());
                assert!(formula_s(2, p, q * q).is_ok());
                assert!(formula_s(3, p, q).is_ok());
                for &s in &primes {
                    if s != p && s > q {
                        assert!(formula_s(2, p, q * s).is_ok());
                    }
                }
            }
        }
    }
}

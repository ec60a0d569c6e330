//! Prime-field arithmetic and polynomials of bounded degree over `GF(q)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

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

/// Deterministic Miller–Rabin; these bases are exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
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

/// Smallest prime `>= m` (and `>= 2`).
pub fn next_prime(m: u64) -> u64 {
    let mut c = m.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    q: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;
    fn try_from(q: u64) -> Result<Self> {
        Self::new(q)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.q
    }
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(invalid(format!("field order {q} is not prime")));
        }
        Ok(PrimeField { q })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn check(&self, a: u64) -> Result<u64> {
        if a < self.q {
            Ok(a)
        } else {
            Err(Error::InvalidElement {
                value: a,
                modulus: self.q,
            })
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.q as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.q - b % self.q)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.q)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.q)
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        (!a.is_multiple_of(self.q)).then(|| pow_mod(a, self.q - 2, self.q))
    }
}

/// A polynomial with an explicit degree bound: `coeffs.len() == d + 1`,
/// constant term first. Trailing zeros are kept so that the polynomials with
/// bound `d` number exactly `q^(d+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("a polynomial needs at least one coefficient"));
        }
        for &c in &coeffs {
            field.check(c)?;
        }
        Ok(Poly { field, coeffs })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: u64) -> Result<u64> {
        self.field.check(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.add(self.field.mul(acc, z), c))
    }

    /// Inverse of [`encode_poly`].
    pub fn decode(&self) -> u128 {
        let q = self.field.q as u128;
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * q + c as u128)
    }
}

/// `q^(d+1)`, saturating at `u128::MAX`.
pub fn poly_count(q: u64, d: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..=d {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}

/// Maps `value` to the polynomial whose coefficients are its base-`q` digits,
/// least significant first. Injective on `[0, q^(d+1))`.
pub fn encode_poly(value: u128, field: PrimeField, d: usize) -> Result<Poly> {
    if value >= poly_count(field.q, d) {
        return Err(invalid(format!(
            "{value} has more than {} base-{} digits",
            d + 1,
            field.q
        )));
    }
    let q = field.q as u128;
    let mut rest = value;
    let coeffs = (0..=d)
        .map(|_| {
            let digit = (rest % q) as u64;
            rest /= q;
            digit
        })
        .collect();
    Ok(Poly { field, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sieve(limit: usize) -> Vec<bool> {
        let mut is = vec![true; limit + 1];
        is[0] = false;
        is[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if is[i] {
                for j in (i * i..=limit).step_by(i) {
                    is[j] = false;
                }
            }
            i += 1;
        }
        is
    }

    #[test]
    fn primality_matches_sieve() {
        let s = sieve(20_000);
        for n in 0..=20_000u64 {
            assert_eq!(is_prime(n), s[n as usize], "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn next_prime_examples() {
        let s = sieve(200);
        let oracle = |m: usize| (m..).find(|&c| s[c]).unwrap() as u64;
        assert_eq!(next_prime(2), 2);
        assert_eq!(next_prime(32), oracle(32));
        assert_eq!(next_prime(32), 37);
        assert_eq!(next_prime(100), oracle(100));
        assert_eq!(next_prime(100), 101);
    }

    #[test]
    fn field_rejects_composites() {
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(13).is_ok());
    }

    #[test]
    fn eval_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(Poly::new(f7, vec![3]).unwrap().eval(5).unwrap(), 3);
        assert_eq!(Poly::new(f7, vec![3, 2]).unwrap().eval(5).unwrap(), 6);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(Poly::new(f5, vec![1, 1, 1]).unwrap().eval(4).unwrap(), 1);
        assert!(matches!(
            Poly::new(f5, vec![1, 1]).unwrap().eval(5),
            Err(Error::InvalidElement {
                value: 5,
                modulus: 5
            })
        ));
        assert!(Poly::new(f5, vec![5]).is_err());
    }

    #[test]
    fn encode_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(encode_poly(0, f5, 2).unwrap().coeffs(), &[0, 0, 0]);
        assert_eq!(encode_poly(13, f5, 2).unwrap().coeffs(), &[3, 2, 0]);
        assert!(encode_poly(125, f5, 2).is_err());
        let f3 = PrimeField::new(3).unwrap();
        for v in 0..81u128 {
            assert_eq!(encode_poly(v, f3, 3).unwrap().decode(), v);
        }
    }

    #[test]
    fn encode_is_injective_exhaustively() {
        for (q, d) in [(2u64, 12usize), (3, 7), (5, 4), (7, 3), (11, 2), (97, 1)] {
            let f = PrimeField::new(q).unwrap();
            let count = poly_count(q, d);
            assert!(count <= 10_000);
            let mut seen = std::collections::HashSet::new();
            for v in 0..count {
                assert!(seen.insert(encode_poly(v, f, d).unwrap().coeffs().to_vec()));
            }
        }
    }

    #[test]
    fn distinct_polys_agree_on_at_most_d_points() {
        for q in [2u64, 3, 5, 7, 11] {
            let f = PrimeField::new(q).unwrap();
            for d in 0..=2usize {
                let polys: Vec<Vec<u64>> = (0..poly_count(q, d))
                    .map(|v| {
                        let p = encode_poly(v, f, d).unwrap();
                        (0..q).map(|z| p.eval(z).unwrap()).collect()
                    })
                    .collect();
                for (i, a) in polys.iter().enumerate() {
                    for b in &polys[i + 1..] {
                        let agree = a.iter().zip(b).filter(|(x, y)| x == y).count();
                        assert!(agree <= d, "q={q} d={d}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u64..1_000_003, b in 0u64..1_000_003, c in 0u64..1_000_003) {
            let f = PrimeField::new(1_000_003).unwrap();
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(f.sub(a, b), b), a);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }

        #[test]
        fn horner_matches_power_sum(coeffs in proptest::collection::vec(0u64..101, 1..6), z in 0u64..101) {
            let f = PrimeField::new(101).unwrap();
            let p = Poly::new(f, coeffs.clone()).unwrap();
            let direct = coeffs.iter().enumerate()
                .fold(0, |acc, (i, &c)| f.add(acc, f.mul(c, f.pow(z, i as u64))));
            prop_assert_eq!(p.eval(z).unwrap(), direct);
        }
    }
}

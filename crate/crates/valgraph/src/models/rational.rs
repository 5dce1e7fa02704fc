//! The rational congruence model: N = H cap U inside Q^x, where
//! H = h^{-1}(mZ) for the total-exponent homomorphism h, and
//! U = (Q^x)^m (1 + m_{v_l}) for a prime l.
//!
//! h needs full factorizations, so numerators and denominators are factored
//! by trial division up to a configured bound and larger inputs are
//! rejected, never probabilistically factored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gf::Gf;

#[derive(Debug, Clone)]
pub struct RationalModel {
    pub m: u32,
    pub l: u64,
    pub bound: u64,
    pub residue_field: Gf,
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl RationalModel {
    pub fn build(m: u32, l: u64, bound: u64) -> Result<RationalModel> {
        if m < 2 {
            return Err(Error::SpecInvalid("m must be at least 2".into()));
        }
        if !is_prime(l) {
            return Err(Error::SpecInvalid(format!("l = {l} is not prime")));
        }
        let residue_field = Gf::new(l)?;
        let model = RationalModel { m, l, bound, residue_field };
        if !model.n_contains(&BigRational::from_integer(BigInt::from(-1)))? {
            return Err(Error::SpecInvalid(format!(
                "-1 is not in N for (m, l) = ({m}, {l}); take m odd"
            )));
        }
        Ok(model)
    }

    /// Index of N in Q^x: m (from h) times m * gcd(l-1, m) (from U).
    pub fn index(&self) -> usize {
        let g = gcd(self.l - 1, self.m as u64);
        (self.m as u64 * self.m as u64 * g) as usize
    }

    pub fn factor_int(&self, x: &BigInt) -> Result<BTreeMap<u64, i64>> {
        let mut n = x.abs();
        let mut out = BTreeMap::new();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut p = 2u64;
        while BigInt::from(p) * BigInt::from(p) <= n {
            if p > self.bound {
                return Err(Error::FactorizationTooLarge { value: x.to_string(), bound: self.bound });
            }
            let bp = BigInt::from(p);
            let mut k = 0i64;
            while (&n % &bp).is_zero() {
                n /= &bp;
                k += 1;
            }
            if k > 0 {
                out.insert(p, k);
            }
            p += 1;
        }
        if n > BigInt::from(1) {
            let rest: u64 = n.to_string().parse().map_err(|_| Error::FactorizationTooLarge {
                value: x.to_string(),
                bound: self.bound,
            })?;
            if rest > self.bound * self.bound {
                return Err(Error::FactorizationTooLarge { value: x.to_string(), bound: self.bound });
            }
            *out.entry(rest).or_insert(0) += 1;
        }
        Ok(out)
    }

    pub fn factor(&self, x: &BigRational) -> Result<BTreeMap<u64, i64>> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut out = self.factor_int(x.numer())?;
        for (p, k) in self.factor_int(x.denom())? {
            *out.entry(p).or_insert(0) -= k;
        }
        out.retain(|_, k| *k != 0);
        Ok(out)
    }

    /// h(x) = sum of all prime exponents (sign discarded).
    pub fn h(&self, x: &BigRational) -> Result<i64> {
        Ok(self.factor(x)?.values().sum())
    }

    /// Exact p-adic valuation; needs no factorization bound.
    pub fn v_p(&self, x: &BigRational, p: u64) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let bp = BigInt::from(p);
        let count = |mut n: BigInt| -> i64 {
            let mut k = 0;
            n = n.abs();
            while (&n % &bp).is_zero() {
                n /= &bp;
                k += 1;
            }
            k
        };
        Ok(count(x.numer().clone()) - count(x.denom().clone()))
    }

    /// Residue in F_l of the l-unit part x * l^{-v_l(x)}.
    pub fn unit_residue(&self, x: &BigRational) -> Result<u32> {
        let v = self.v_p(x, self.l)?;
        let bl = BigInt::from(self.l);
        let pow = |k: i64| -> BigRational {
            let mut acc = BigInt::from(1);
            for _ in 0..k.unsigned_abs() {
                acc *= &bl;
            }
            if k >= 0 {
                BigRational::from_integer(acc)
            } else {
                BigRational::new(BigInt::from(1), acc)
            }
        };
        let u = x * pow(-v);
        let num = u.numer().mod_floor(&bl);
        let den = u.denom().mod_floor(&bl);
        let f = &self.residue_field;
        let r = f.div(
            num.to_string().parse::<u32>().map_err(|_| Error::Internal("residue".into()))?,
            den.to_string().parse::<u32>().map_err(|_| Error::Internal("residue".into()))?,
        )?;
        Ok(r)
    }

    /// Is r an m-th power in F_l^x?
    pub fn is_mth_power_residue(&self, r: u32) -> Result<bool> {
        if r == 0 {
            return Err(Error::DivisionByZero);
        }
        let g = gcd(self.l - 1, self.m as u64);
        Ok(self.residue_field.pow(r, ((self.l - 1) / g) as i64)? == 1)
    }

    pub fn in_u(&self, x: &BigRational) -> Result<bool> {
        let v = self.v_p(x, self.l)?;
        if v.rem_euclid(self.m as i64) != 0 {
            return Ok(false);
        }
        // sign: -1 = (-1)^m in (Q^x)^m for odd m; for even m a negative
        // number is in U iff l-1 (the residue of -1) is an m-th power
        if x.is_negative() && self.m % 2 == 0 {
            let neg_one = self.residue_field.minus_one();
            if !self.is_mth_power_residue(neg_one)? {
                return Ok(false);
            }
        }
        self.is_mth_power_residue(self.unit_residue(&x.abs())?)
    }

    pub fn n_contains(&self, x: &BigRational) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.h(x)?.rem_euclid(self.m as i64) != 0 {
            return Ok(false);
        }
        self.in_u(x)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

trait ModFloor {
    fn mod_floor(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn model() -> RationalModel {
        RationalModel::build(3, 7, 1_000_000).unwrap()
    }

    #[test]
    fn h_is_total_exponent() {
        let m = model();
        assert_eq!(m.h(&rat(12, 1)).unwrap(), 3); // 2^2 * 3
        assert_eq!(m.h(&rat(-12, 5)).unwrap(), 2); // 2^2 * 3 / 5
        assert_eq!(m.h(&rat(1, 1)).unwrap(), 0);
    }

    #[test]
    fn membership_examples() {
        let m = model();
        // l^m = 343: h = 3 = 0 mod 3, v_7 = 3 = 0 mod 3, unit residue 1
        assert!(m.n_contains(&rat(343, 1)).unwrap());
        // 7 itself: h = 1
        assert!(!m.n_contains(&rat(7, 1)).unwrap());
        // 8 = 2^3: h = 3 ok, v_7 = 0, residue 1 = 8 mod 7 is a cube
        assert!(m.n_contains(&rat(8, 1)).unwrap());
        // 27 = 3^3: residue 6 mod 7; cubes mod 7 are {1, 6}
        assert!(m.n_contains(&rat(27, 1)).unwrap());
        // -1 is in N (m odd)
        assert!(m.n_contains(&rat(-1, 1)).unwrap());
        // 2^3 * 3^0 ... try 2*4 = 8 ok; 6^3 = 216: h = 6, v7 = 0, 216 mod 7 = 6 ok
        assert!(m.n_contains(&rat(216, 1)).unwrap());
        // 30 = 2*3*5: h = 3 ok; residue 30 mod 7 = 2, not a cube
        assert!(!m.n_contains(&rat(30, 1)).unwrap());
    }

    #[test]
    fn factorization_bound_enforced() {
        let m = RationalModel::build(3, 7, 100).unwrap();
        let big_prime = rat(1_000_003, 1);
        assert!(matches!(
            m.n_contains(&big_prime),
            Err(Error::FactorizationTooLarge { .. })
        ));
    }

    #[test]
    fn cubes_mod_7() {
        let m = model();
        let cubes: Vec<u32> = (1..7).filter(|&r| m.is_mth_power_residue(r).unwrap()).collect();
        assert_eq!(cubes, vec![1, 6]);
    }
}

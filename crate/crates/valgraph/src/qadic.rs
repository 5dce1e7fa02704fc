//! Certified 2-adic valuations of elements a + b*sqrt(d) of a real
//! quadratic field embedded in Q_2.
//!
//! Requires d = 1 mod 8 so that sqrt(d) exists in Z_2.  The square root is
//! lifted bit by bit and cached per precision; every valuation answer is
//! certified exact (lowest set bit strictly below precision minus a guard
//! slack) or the computation fails with a precision error after the hard
//! cap is reached.

use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Adaptive 2-adic precision: start at `initial` digits, double up to `cap`,
/// accept an answer only if it sits `guard` digits below the precision used.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PrecisionPolicy {
    pub initial: u32,
    pub cap: u32,
    pub guard: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { initial: 32, cap: 4096, guard: 4 }
    }
}

/// Which 2-adic square root of d plays the role of sqrt(d): the branch
/// congruent to 1 mod 4 (+1) or to 3 mod 4 (-1).  Swapping the branch swaps
/// the two places of the quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SqrtBranch {
    Plus,
    Minus,
}

#[derive(Debug)]
pub struct TwoAdicCtx {
    d: BigInt,
    branch: SqrtBranch,
    pub policy: PrecisionPolicy,
    sqrt_cache: Mutex<Vec<(u32, BigUint)>>,
}

pub fn val2_bigint(x: &BigInt) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(x.trailing_zeros().unwrap() as i64)
}

pub fn val2_rational(x: &BigRational) -> Result<i64> {
    Ok(val2_bigint(x.numer())? - val2_bigint(x.denom())?)
}

/// Inverse of an odd integer modulo 2^prec.
fn inv_mod_pow2(a: &BigUint, prec: u32) -> BigUint {
    // Newton iteration: x -> x(2 - a x), doubling correct bits each step.
    let mask = (BigUint::one() << prec) - BigUint::one();
    let mut x = BigUint::one();
    let two = BigUint::from(2u32);
    let mut bits = 1u32;
    while bits < prec {
        let ax = (a * &x) & &mask;
        let t = (&two + &mask + BigUint::one() - ax) & &mask; // 2 - ax mod 2^prec
        x = (&x * t) & &mask;
        bits *= 2;
    }
    x
}

/// Reduces a 2-integral rational modulo 2^prec.
fn rational_mod_pow2(x: &BigRational, prec: u32) -> Result<BigUint> {
    let mask = (BigUint::one() << prec) - BigUint::one();
    let denom = x.denom();
    if denom.is_even() {
        return Err(Error::Internal("rational not 2-integral".into()));
    }
    let modulus = BigInt::from(1u32) << prec;
    let num = x.numer().mod_floor_ref(&modulus);
    let den = denom.mod_floor_ref(&modulus);
    let den_inv = inv_mod_pow2(&den.to_biguint().unwrap(), prec);
    Ok((num.to_biguint().unwrap() * den_inv) & mask)
}

trait ModFloorRef {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt;
}

impl ModFloorRef for BigInt {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

impl TwoAdicCtx {
    pub fn new(d: BigInt, branch: SqrtBranch, policy: PrecisionPolicy) -> Result<TwoAdicCtx> {
        if (&d % BigInt::from(8)) != BigInt::from(1) || d <= BigInt::one() {
            return Err(Error::SpecInvalid(format!(
                "d = {d} must be > 1 and congruent to 1 mod 8 for sqrt(d) in Q_2"
            )));
        }
        // d must not be a perfect square, otherwise Q(sqrt d) is not a field
        let s = d.sqrt();
        if &s * &s == d {
            return Err(Error::SpecInvalid(format!("d = {d} is a perfect square")));
        }
        Ok(TwoAdicCtx { d, branch, policy, sqrt_cache: Mutex::new(Vec::new()) })
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn branch(&self) -> SqrtBranch {
        self.branch
    }

    /// sqrt(d) mod 2^prec on the chosen branch, computed by bit lifting.
    pub fn sqrt_mod(&self, prec: u32) -> BigUint {
        {
            let cache = self.sqrt_cache.lock().unwrap();
            if let Some((_, s)) = cache.iter().find(|(p, _)| *p >= prec) {
                let mask = (BigUint::one() << prec) - BigUint::one();
                return s & mask;
            }
        }
        let d = self.d.to_biguint().unwrap();
        let mut s = BigUint::one();
        // invariant: s^2 = d mod 2^(k+1); lifting the bit at position k-1
        // fixes the congruence mod 2^(k+2).  Start: 1^2 = d mod 8.
        let mut k = 3u32;
        while k <= prec + 1 {
            let modulus = BigUint::one() << (k + 1);
            let s2 = (&s * &s) % &modulus;
            let target = &d % &modulus;
            if s2 != target {
                s += BigUint::one() << (k - 1);
            }
            k += 1;
        }
        let mask = (BigUint::one() << prec) - BigUint::one();
        s &= &mask;
        if (&s % BigUint::from(4u32))
            != (match self.branch {
                SqrtBranch::Plus => BigUint::one(),
                SqrtBranch::Minus => BigUint::from(3u32),
            })
        {
            let modulus = BigUint::one() << prec;
            s = &modulus - &s;
        }
        let mut cache = self.sqrt_cache.lock().unwrap();
        cache.push((prec, s.clone()));
        s
    }

    /// Certified v_2(a + b*sqrt(d)).  Errors on 0 and on precision exhaustion.
    pub fn val_quad(&self, a: &BigRational, b: &BigRational) -> Result<i64> {
        if b.is_zero() {
            if a.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return val2_rational(a);
        }
        if a.is_zero() {
            return val2_rational(b); // sqrt(d) is a 2-adic unit
        }
        let va = val2_rational(a)?;
        let vb = val2_rational(b)?;
        if va != vb {
            return Ok(va.min(vb));
        }
        let shift = va;
        let two_pow = |k: i64| -> BigRational {
            if k >= 0 {
                BigRational::from_integer(BigInt::one() << (k as u32))
            } else {
                BigRational::new(BigInt::one(), BigInt::one() << ((-k) as u32))
            }
        };
        let a0 = a / two_pow(shift);
        let b0 = b / two_pow(shift);
        let mut prec = self.policy.initial;
        loop {
            let s = self.sqrt_mod(prec);
            let mask = (BigUint::one() << prec) - BigUint::one();
            let am = rational_mod_pow2(&a0, prec)?;
            let bm = rational_mod_pow2(&b0, prec)?;
            let z = (am + bm * &s) & &mask;
            if !z.is_zero() {
                let v = z.trailing_zeros().unwrap() as u32;
                if v + self.policy.guard < prec {
                    return Ok(shift + v as i64);
                }
            }
            if prec >= self.policy.cap {
                return Err(Error::PrecisionExhausted(format!(
                    "v_2(a + b*sqrt({})) not determined within {} digits",
                    self.d, self.policy.cap
                )));
            }
            prec = (prec * 2).min(self.policy.cap);
        }
    }
}

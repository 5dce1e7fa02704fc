//! The quaternion model: D = (-1,-1 / F) over F = Q(sqrt d) with d = 1
//! mod 8, so that sqrt(d) lies in Q_2 and the 2-adic valuation of Q has two
//! extensions w_1, w_2 to F (swapped by the nontrivial automorphism of F).
//!
//! Each w_i extends to D via the reduced norm; we normalize
//! w~_i = w_i o Nrd, so w~_i(pi) = 1 for the uniformizer pi = i + j and
//! w~_i restricted to F^x is 2 w_i.  The residue field at each place is F_4
//! with lift set {0, 1, a, 1 + a}, a = (-1 + i + j + k)/2.
//!
//! Elements are exact: four coordinates in F, each a pair of rationals.
//! Only valuations consult the 2-adic machinery, which is certified.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gf::{Gf, GfElem};
use crate::qadic::{PrecisionPolicy, SqrtBranch, TwoAdicCtx};

/// a + b sqrt(d) with exact rational a, b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadRat {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadRat {
    pub fn from_ints(a: i64, b: i64) -> QuadRat {
        QuadRat {
            a: BigRational::from_integer(BigInt::from(a)),
            b: BigRational::from_integer(BigInt::from(b)),
        }
    }

    pub fn rational(a: BigRational) -> QuadRat {
        QuadRat { a, b: BigRational::zero() }
    }

    pub fn zero() -> QuadRat {
        QuadRat::from_ints(0, 0)
    }

    pub fn one() -> QuadRat {
        QuadRat::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate a - b sqrt(d).
    pub fn conj(&self) -> QuadRat {
        QuadRat { a: self.a.clone(), b: -self.b.clone() }
    }
}

/// Quaternion c0 + c1 i + c2 j + c3 k over F.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quat(pub [QuadRat; 4]);

impl Quat {
    pub fn zero() -> Quat {
        Quat([QuadRat::zero(), QuadRat::zero(), QuadRat::zero(), QuadRat::zero()])
    }

    pub fn scalar(c: QuadRat) -> Quat {
        Quat([c, QuadRat::zero(), QuadRat::zero(), QuadRat::zero()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_rational_scalar(&self) -> bool {
        self.0[0].is_rational() && self.0[1..].iter().all(|c| c.is_zero())
    }
}

#[derive(Debug)]
pub struct QuaternionModel {
    ctx: TwoAdicCtx,
    pub residue_field: Gf,
    d_rat: BigRational,
}

impl QuaternionModel {
    pub fn build(d: i64, branch: SqrtBranch, policy: PrecisionPolicy) -> Result<QuaternionModel> {
        if d <= 1 {
            return Err(Error::SpecInvalid(
                "d must be a positive nonsquare congruent to 1 mod 8".into(),
            ));
        }
        let ctx = TwoAdicCtx::new(BigInt::from(d), branch, policy)?;
        let residue_field = Gf::new(4)?;
        let model = QuaternionModel {
            ctx,
            residue_field,
            d_rat: BigRational::from_integer(BigInt::from(d)),
        };
        // -1 is a w~-unit with residue 1 at both places
        if !model.n_contains(&model.neg(&model.one()))? {
            return Err(Error::Internal("-1 must lie in N".into()));
        }
        Ok(model)
    }

    pub fn d(&self) -> &BigInt {
        self.ctx.d()
    }

    pub fn branch(&self) -> SqrtBranch {
        self.ctx.branch()
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.ctx.policy
    }

    pub fn index(&self) -> usize {
        36
    }

    // ---- field arithmetic in F = Q(sqrt d) ----

    pub fn f_add(&self, x: &QuadRat, y: &QuadRat) -> QuadRat {
        QuadRat { a: &x.a + &y.a, b: &x.b + &y.b }
    }

    pub fn f_sub(&self, x: &QuadRat, y: &QuadRat) -> QuadRat {
        QuadRat { a: &x.a - &y.a, b: &x.b - &y.b }
    }

    pub fn f_neg(&self, x: &QuadRat) -> QuadRat {
        QuadRat { a: -x.a.clone(), b: -x.b.clone() }
    }

    pub fn f_mul(&self, x: &QuadRat, y: &QuadRat) -> QuadRat {
        QuadRat {
            a: &x.a * &y.a + &self.d_rat * &x.b * &y.b,
            b: &x.a * &y.b + &x.b * &y.a,
        }
    }

    pub fn f_inv(&self, x: &QuadRat) -> Result<QuadRat> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &x.a * &x.a - &self.d_rat * &x.b * &x.b;
        if norm.is_zero() {
            return Err(Error::Internal("nonsquare d gives nonzero norms".into()));
        }
        Ok(QuadRat { a: &x.a / &norm, b: -(&x.b / &norm) })
    }

    /// w_place(x) for x in F: certified 2-adic valuation along the embedding.
    pub fn f_val(&self, x: &QuadRat, place: usize) -> Result<i64> {
        match place {
            0 => self.ctx.val_quad(&x.a, &x.b),
            1 => self.ctx.val_quad(&x.a, &(-x.b.clone())),
            _ => Err(Error::SpecInvalid(format!("place {place} not declared"))),
        }
    }

    // ---- quaternion arithmetic ----

    pub fn one(&self) -> Quat {
        Quat::scalar(QuadRat::one())
    }

    pub fn i(&self) -> Quat {
        Quat([QuadRat::zero(), QuadRat::one(), QuadRat::zero(), QuadRat::zero()])
    }

    pub fn j(&self) -> Quat {
        Quat([QuadRat::zero(), QuadRat::zero(), QuadRat::one(), QuadRat::zero()])
    }

    pub fn k(&self) -> Quat {
        Quat([QuadRat::zero(), QuadRat::zero(), QuadRat::zero(), QuadRat::one()])
    }

    pub fn sqrt_d(&self) -> Quat {
        Quat::scalar(QuadRat::from_ints(0, 1))
    }

    /// Uniformizer pi = i + j with pi^2 = -2.
    pub fn uniformizer(&self) -> Quat {
        Quat([QuadRat::zero(), QuadRat::one(), QuadRat::one(), QuadRat::zero()])
    }

    /// a = (-1 + i + j + k)/2, a unit with a^2 + a + 1 = 0 and residue
    /// generating F_4.
    pub fn a_elem(&self) -> Quat {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let h = QuadRat::rational(half);
        Quat([self.f_neg(&h), h.clone(), h.clone(), h])
    }

    pub fn add(&self, x: &Quat, y: &Quat) -> Quat {
        Quat(std::array::from_fn(|i| self.f_add(&x.0[i], &y.0[i])))
    }

    pub fn sub(&self, x: &Quat, y: &Quat) -> Quat {
        Quat(std::array::from_fn(|i| self.f_sub(&x.0[i], &y.0[i])))
    }

    pub fn neg(&self, x: &Quat) -> Quat {
        Quat(std::array::from_fn(|i| self.f_neg(&x.0[i])))
    }

    pub fn mul(&self, x: &Quat, y: &Quat) -> Quat {
        let [a0, a1, a2, a3] = &x.0;
        let [b0, b1, b2, b3] = &y.0;
        let m = |u: &QuadRat, v: &QuadRat| self.f_mul(u, v);
        let add = |u: QuadRat, v: QuadRat| self.f_add(&u, &v);
        let sub = |u: QuadRat, v: QuadRat| self.f_sub(&u, &v);
        let c0 = sub(sub(m(a0, b0), m(a1, b1)), add(m(a2, b2), m(a3, b3)));
        let c1 = add(add(m(a0, b1), m(a1, b0)), sub(m(a2, b3), m(a3, b2)));
        let c2 = add(sub(m(a0, b2), m(a1, b3)), add(m(a2, b0), m(a3, b1)));
        let c3 = add(add(m(a0, b3), m(a1, b2)), sub(m(a3, b0), m(a2, b1)));
        Quat([c0, c1, c2, c3])
    }

    pub fn conj(&self, x: &Quat) -> Quat {
        Quat([
            x.0[0].clone(),
            self.f_neg(&x.0[1]),
            self.f_neg(&x.0[2]),
            self.f_neg(&x.0[3]),
        ])
    }

    /// Reduced norm: sum of squares of the four coordinates.
    pub fn nrd(&self, x: &Quat) -> QuadRat {
        let mut acc = QuadRat::zero();
        for c in &x.0 {
            acc = self.f_add(&acc, &self.f_mul(c, c));
        }
        acc
    }

    pub fn inv(&self, x: &Quat) -> Result<Quat> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.f_inv(&self.nrd(x))?;
        let c = self.conj(x);
        Ok(Quat(std::array::from_fn(|i| self.f_mul(&c.0[i], &n))))
    }

    pub fn scale(&self, x: &Quat, c: &QuadRat) -> Quat {
        Quat(std::array::from_fn(|i| self.f_mul(&x.0[i], c)))
    }

    /// The involution extending sqrt(d) -> -sqrt(d); swaps the two places.
    pub fn sigma(&self, x: &Quat) -> Quat {
        Quat(std::array::from_fn(|i| x.0[i].conj()))
    }

    pub fn pow(&self, x: &Quat, e: i64) -> Result<Quat> {
        if e < 0 {
            return self.pow(&self.inv(x)?, -e);
        }
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        Ok(acc)
    }

    // ---- places, residues, membership ----

    /// w~_place(x) = w_place(Nrd x); w~(pi) = 1.
    pub fn w_tilde(&self, x: &Quat, place: usize) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.f_val(&self.nrd(x), place)
    }

    fn residue_lifts(&self) -> [Quat; 4] {
        let a = self.a_elem();
        [Quat::zero(), self.one(), a.clone(), self.add(&self.one(), &a)]
    }

    /// Residue in F_4 of a w~-unit: labels 0, 1, 2 = abar, 3 = abar + 1.
    pub fn residue(&self, x: &Quat, place: usize) -> Result<GfElem> {
        if self.w_tilde(x, place)? != 0 {
            return Err(Error::NotAUnit);
        }
        self.residue_any(x, place)
    }

    fn residue_any(&self, x: &Quat, place: usize) -> Result<GfElem> {
        let lifts = self.residue_lifts();
        let mut found = None;
        for (label, lift) in lifts.iter().enumerate() {
            let delta = self.sub(x, lift);
            let positive = if delta.is_zero() {
                true
            } else {
                self.w_tilde(&delta, place)? > 0
            };
            if positive {
                if found.is_some() {
                    return Err(Error::Internal("two residue candidates matched".into()));
                }
                found = Some(label as GfElem);
            }
        }
        found.ok_or(Error::NotAUnit)
    }

    /// Scales x by (-2)^k exactly.
    pub fn scale_pow_minus_two(&self, x: &Quat, k: i64) -> Quat {
        let mut c = BigRational::one();
        let m2 = BigRational::from_integer(BigInt::from(-2));
        for _ in 0..k.unsigned_abs() {
            c *= &m2;
        }
        if k < 0 {
            c = c.recip();
        }
        self.scale(x, &QuadRat::rational(c))
    }

    /// Membership in N = N_1 cap N_2, N_i = <pi^2> x U^(1)_i = <-2> x U^(1)_i.
    pub fn n_contains(&self, x: &Quat) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        for place in 0..2 {
            let t = self.w_tilde(x, place)?;
            if t.rem_euclid(2) != 0 {
                return Ok(false);
            }
            let y = self.scale_pow_minus_two(x, -t / 2);
            let delta = self.sub(&y, &self.one());
            if delta.is_zero() {
                continue;
            }
            if self.w_tilde(&delta, place)? <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // ---- distinguished asymmetric elements ----

    /// (1 + sqrt d)/2: a w-unit at one place, positive valuation at the other.
    pub fn u_plus(&self) -> QuadRat {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        QuadRat { a: half.clone(), b: half }
    }

    pub fn u_minus(&self) -> QuadRat {
        self.u_plus().conj()
    }

    /// Small element of F whose two valuations have odd sum, found by scan.
    pub fn odd_split(&self) -> Result<QuadRat> {
        for p in 1i64..40 {
            for q in 1i64..6 {
                let cand = QuadRat::from_ints(p, q);
                let norm = &cand.a * &cand.a - &self.d_rat * &cand.b * &cand.b;
                if norm.is_zero() {
                    continue;
                }
                let v = crate::qadic::val2_rational(&norm)?;
                if v >= 3 && v % 2 == 1 {
                    return Ok(cand);
                }
            }
        }
        Err(Error::SearchExhausted("no odd-split element of F found".into()))
    }

    /// 1 + u_plus (a - 1): lands in the coset (aN_1, N_2) or its mirror.
    pub fn lopsided_a(&self, mirror: bool) -> Quat {
        let c = if mirror { self.u_minus() } else { self.u_plus() };
        let am1 = self.sub(&self.a_elem(), &self.one());
        self.add(&self.one(), &self.scale(&am1, &c))
    }

    /// 1 + i + u_plus j: reduced norm has odd 2-adic norm valuation, so its
    /// two place valuations have different parities.
    pub fn parity_breaker(&self) -> Quat {
        let mut z = self.add(&self.one(), &self.i());
        let uj = self.scale(&self.j(), &self.u_plus());
        z = self.add(&z, &uj);
        z
    }

    pub fn fmt_f(&self, x: &QuadRat) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        if !x.a.is_zero() {
            parts.push(x.a.to_string());
        }
        if !x.b.is_zero() {
            if x.b.is_one() {
                parts.push("s".into());
            } else if x.b == -BigRational::one() {
                parts.push("-s".into());
            } else {
                parts.push(format!("{}s", x.b));
            }
        }
        parts.join("+").replace("+-", "-")
    }

    pub fn fmt(&self, x: &Quat) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let names = ["", "i", "j", "k"];
        let mut parts = Vec::new();
        for (c, name) in x.0.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let cs = self.fmt_f(c);
            if name.is_empty() {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(name.to_string());
            } else if cs == "-1" {
                parts.push(format!("-{name}"));
            } else if cs.contains('+') || cs.contains('-') || cs.contains('/') {
                parts.push(format!("({cs}){name}"));
            } else {
                parts.push(format!("{cs}{name}"));
            }
        }
        parts.join("+").replace("+-", "-")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> QuaternionModel {
        QuaternionModel::build(17, SqrtBranch::Plus, PrecisionPolicy::default()).unwrap()
    }

    #[test]
    fn pi_squared_is_minus_two() {
        let m = model();
        let pi = m.uniformizer();
        let pi2 = m.mul(&pi, &pi);
        let minus_two = Quat::scalar(QuadRat::from_ints(-2, 0));
        assert_eq!(pi2, minus_two);
        assert_eq!(m.nrd(&pi), QuadRat::from_ints(2, 0));
        assert_eq!(m.w_tilde(&pi, 0).unwrap(), 1);
        assert_eq!(m.w_tilde(&pi, 1).unwrap(), 1);
    }

    #[test]
    fn a_satisfies_its_minimal_polynomial() {
        let m = model();
        let a = m.a_elem();
        let a2 = m.mul(&a, &a);
        let sum = m.add(&m.add(&a2, &a), &m.one());
        assert!(sum.is_zero());
        assert_eq!(m.w_tilde(&a, 0).unwrap(), 0);
        let r = m.residue(&a, 0).unwrap();
        assert_eq!(r, 2); // the F_4 generator
        assert_eq!(m.residue(&a, 1).unwrap(), 2);
    }

    #[test]
    fn commutator_is_unit_not_congruent_to_one() {
        let m = model();
        let pi = m.uniformizer();
        let a = m.a_elem();
        let c = m.mul(&m.mul(&pi, &a), &m.mul(&m.inv(&pi).unwrap(), &m.inv(&a).unwrap()));
        for place in 0..2 {
            assert_eq!(m.w_tilde(&c, place).unwrap(), 0);
            let r = m.residue(&c, place).unwrap();
            assert_ne!(r, 1);
        }
        assert!(!m.n_contains(&c).unwrap());
    }

    #[test]
    fn rationals_and_f_elements_lie_in_n() {
        let m = model();
        for x in [
            Quat::scalar(QuadRat::from_ints(2, 0)),
            Quat::scalar(QuadRat::from_ints(-6, 0)),
            Quat::scalar(QuadRat::from_ints(5, 1)),
            Quat::scalar(m.u_plus()),
        ] {
            assert!(m.n_contains(&x).unwrap(), "F^x should be inside N");
        }
        assert!(!m.n_contains(&m.uniformizer()).unwrap());
        assert!(!m.n_contains(&m.a_elem()).unwrap());
    }

    #[test]
    fn asymmetric_elements_split_places() {
        let m = model();
        let up = Quat::scalar(m.u_plus());
        let w0 = m.w_tilde(&up, 0).unwrap();
        let w1 = m.w_tilde(&up, 1).unwrap();
        assert_eq!((w0.min(w1), w0.max(w1)), (0, 4)); // v2(1-17) = 4, so {0, v-2} doubled
        let z = m.parity_breaker();
        let z0 = m.w_tilde(&z, 0).unwrap();
        let z1 = m.w_tilde(&z, 1).unwrap();
        assert_eq!(z0 + z1, 1);
    }

    #[test]
    fn sigma_swaps_places() {
        let m = model();
        let z = m.parity_breaker();
        let sz = m.sigma(&z);
        assert_eq!(m.w_tilde(&z, 0).unwrap(), m.w_tilde(&sz, 1).unwrap());
        assert_eq!(m.w_tilde(&z, 1).unwrap(), m.w_tilde(&sz, 0).unwrap());
    }

    #[test]
    fn rejects_bad_d() {
        assert!(QuaternionModel::build(5, SqrtBranch::Plus, PrecisionPolicy::default()).is_err());
        assert!(QuaternionModel::build(25, SqrtBranch::Plus, PrecisionPolicy::default()).is_err());
    }
}

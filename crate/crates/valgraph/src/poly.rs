//! Dense polynomials over a small finite field, plus reduced rational
//! functions.  Used by the semi-local function-field model, where all
//! arithmetic is exact.

use crate::error::{Error, Result};
use crate::gf::{Gf, GfElem};

/// Coefficients low-to-high, no trailing zeros; empty vector is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(pub Vec<GfElem>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: GfElem) -> Poly {
        if c == 0 {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    pub fn x() -> Poly {
        Poly(vec![0, 1])
    }

    pub fn normalize(mut v: Vec<GfElem>) -> Poly {
        while v.last() == Some(&0) {
            v.pop();
        }
        Poly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn lead(&self) -> GfElem {
        *self.0.last().unwrap_or(&0)
    }

    pub fn add(&self, other: &Poly, f: &Gf) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![0; n];
        for (i, slot) in v.iter_mut().enumerate() {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            *slot = f.add(a, b);
        }
        Poly::normalize(v)
    }

    pub fn neg(&self, f: &Gf) -> Poly {
        Poly(self.0.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly, f: &Gf) -> Poly {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &Poly, f: &Gf) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Poly::normalize(v)
    }

    pub fn scale(&self, c: GfElem, f: &Gf) -> Poly {
        Poly::normalize(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn divrem(&self, div: &Poly, f: &Gf) -> Result<(Poly, Poly)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = div.degree().unwrap();
        let lead_inv = f.inv(div.lead())?;
        let mut rem = self.0.clone();
        let mut quot = vec![0; self.0.len().saturating_sub(dd)];
        while rem.len() > dd {
            let lead = *rem.last().unwrap();
            let shift = rem.len() - 1 - dd;
            if lead != 0 {
                let q = f.mul(lead, lead_inv);
                quot[shift] = q;
                for (k, &dk) in div.0.iter().enumerate() {
                    rem[shift + k] = f.sub(rem[shift + k], f.mul(q, dk));
                }
            }
            rem.pop();
            while rem.len() > dd && rem.last() == Some(&0) {
                rem.pop();
            }
        }
        Ok((Poly::normalize(quot), Poly::normalize(rem)))
    }

    pub fn gcd(&self, other: &Poly, f: &Gf) -> Result<Poly> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, f)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            // monic normalization
            let li = f.inv(a.lead())?;
            Ok(a.scale(li, f))
        }
    }

    pub fn eval(&self, x: GfElem, f: &Gf) -> GfElem {
        let mut acc = 0;
        for &c in self.0.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Multiplicity of the root `p` (0 if not a root or self == 0 treated as error upstream).
    pub fn root_multiplicity(&self, p: GfElem, f: &Gf) -> usize {
        if self.is_zero() {
            return 0;
        }
        let linear = Poly(vec![f.neg(p), 1]);
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(&linear, f).unwrap();
            if !r.is_zero() {
                return m;
            }
            m += 1;
            cur = q;
        }
    }

    /// Lagrange interpolation through (points[i], values[i]); points distinct.
    pub fn interpolate(points: &[GfElem], values: &[GfElem], f: &Gf) -> Result<Poly> {
        let mut acc = Poly::zero();
        for (i, (&xi, &yi)) in points.iter().zip(values).enumerate() {
            let mut basis = Poly::constant(1);
            let mut denom = 1;
            for (j, &xj) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul(&Poly(vec![f.neg(xj), 1]), f);
                denom = f.mul(denom, f.sub(xi, xj));
            }
            let c = f.mul(yi, f.inv(denom)?);
            acc = acc.add(&basis.scale(c, f), f);
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32, f: &Gf) -> Poly {
        let mut acc = Poly::constant(1);
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }

    pub fn fmt(&self, f: &Gf) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let cs = f.fmt_elem(c);
            let t = match i {
                0 => cs,
                1 => {
                    if c == 1 {
                        "t".into()
                    } else {
                        format!("({cs})t")
                    }
                }
                _ => {
                    if c == 1 {
                        format!("t^{i}")
                    } else {
                        format!("({cs})t^{i}")
                    }
                }
            };
            terms.push(t);
        }
        terms.join("+")
    }
}

/// Reduced rational function num/den, den monic, gcd(num, den) = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly, f: &Gf) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn { num: Poly::zero(), den: Poly::constant(1) });
        }
        let g = num.gcd(&den, f)?;
        let (num, _) = num.divrem(&g, f)?;
        let (den, _) = den.divrem(&g, f)?;
        let li = f.inv(den.lead())?;
        Ok(RatFn { num: num.scale(li, f), den: den.scale(li, f) })
    }

    pub fn from_poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::constant(1) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFn, f: &Gf) -> Result<RatFn> {
        RatFn::new(
            self.num.mul(&o.den, f).add(&o.num.mul(&self.den, f), f),
            self.den.mul(&o.den, f),
            f,
        )
    }

    pub fn neg(&self, f: &Gf) -> RatFn {
        RatFn { num: self.num.neg(f), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFn, f: &Gf) -> Result<RatFn> {
        RatFn::new(self.num.mul(&o.num, f), self.den.mul(&o.den, f), f)
    }

    pub fn inv(&self, f: &Gf) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFn::new(self.den.clone(), self.num.clone(), f)
    }

    /// Order of vanishing at t = p (negative for poles).
    pub fn ord_at(&self, p: GfElem, f: &Gf) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.root_multiplicity(p, f) as i64 - self.den.root_multiplicity(p, f) as i64)
    }

    /// Value at t = p for functions of order 0 there.
    pub fn eval_unit(&self, p: GfElem, f: &Gf) -> Result<GfElem> {
        if self.ord_at(p, f)? != 0 {
            return Err(Error::NotAUnit);
        }
        let linear = Poly(vec![f.neg(p), 1]);
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        // strip matching (t-p) powers
        loop {
            let (qn, rn) = num.divrem(&linear, f)?;
            let (qd, rd) = den.divrem(&linear, f)?;
            if rn.is_zero() && rd.is_zero() {
                num = qn;
                den = qd;
            } else {
                break;
            }
        }
        let dv = den.eval(p, f);
        f.div(num.eval(p, f), dv)
    }

    pub fn pow(&self, e: i64, f: &Gf) -> Result<RatFn> {
        if e < 0 {
            return self.inv(f)?.pow(-e, f);
        }
        let mut acc = RatFn::from_poly(Poly::constant(1));
        for _ in 0..e {
            acc = acc.mul(self, f)?;
        }
        Ok(acc)
    }

    pub fn fmt(&self, f: &Gf) -> String {
        if self.den == Poly::constant(1) {
            self.num.fmt(f)
        } else {
            format!("({})/({})", self.num.fmt(f), self.den.fmt(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let f = Gf::new(4).unwrap();
        let a = Poly(vec![1, 2, 3, 1]);
        let b = Poly(vec![2, 1]);
        let (q, r) = a.divrem(&b, &f).unwrap();
        let back = q.mul(&b, &f).add(&r, &f);
        assert_eq!(back, a);
    }

    #[test]
    fn interpolation_hits_values() {
        let f = Gf::new(4).unwrap();
        let pts = [0, 1, 2];
        let vals = [3, 1, 2];
        let p = Poly::interpolate(&pts, &vals, &f).unwrap();
        for (x, v) in pts.iter().zip(vals) {
            assert_eq!(p.eval(*x, &f), v);
        }
    }

    #[test]
    fn rational_function_orders() {
        let f = Gf::new(4).unwrap();
        // x = t^2 (t-1) / (t-2): ord_0 = 2, ord_1 = 1, ord_2 = -1
        let num = Poly::x().pow(2, &f).mul(&Poly(vec![f.neg(1), 1]), &f);
        let den = Poly(vec![f.neg(2), 1]);
        let x = RatFn::new(num, den, &f).unwrap();
        assert_eq!(x.ord_at(0, &f).unwrap(), 2);
        assert_eq!(x.ord_at(1, &f).unwrap(), 1);
        assert_eq!(x.ord_at(2, &f).unwrap(), -1);
        assert_eq!(x.ord_at(3, &f).unwrap(), 0);
        let y = x.mul(&x.inv(&f).unwrap(), &f).unwrap();
        assert_eq!(y, RatFn::from_poly(Poly::constant(1)));
    }
}

//! Small finite fields F_q, q = p^n.
//!
//! Elements are labelled 0..q-1.  For prime q the label is the residue
//! itself; for prime powers the label encodes polynomial coordinates in
//! base p over a fixed irreducible modulus, so label arithmetic is stable
//! across runs.

use crate::error::{Error, Result};

pub type GfElem = u32;

#[derive(Debug, Clone)]
pub struct Gf {
    p: u64,
    n: u32,
    q: u64,
    /// monic irreducible modulus of degree n (coefficients, low to high), empty for n = 1
    modulus: Vec<u64>,
    mul_table: Vec<GfElem>,
    inv_table: Vec<GfElem>,
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q as p^n with p prime, or fails.
fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut n = 0u32;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                n += 1;
            }
            return if rest == 1 { Some((p, n)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn poly_label(coeffs: &[u64], p: u64) -> GfElem {
    let mut label = 0u64;
    for &c in coeffs.iter().rev() {
        label = label * p + c;
    }
    label as GfElem
}

fn label_poly(label: GfElem, p: u64, n: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(n as usize);
    let mut rest = label as u64;
    for _ in 0..n {
        v.push(rest % p);
        rest /= p;
    }
    v
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let n = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // reduce by the monic modulus
    for i in (n..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (k, &mk) in modulus.iter().enumerate().take(n) {
            let idx = i - n + k;
            prod[idx] = (prod[idx] + c * (p - mk) % p) % p;
        }
    }
    prod.truncate(n);
    prod.resize(n, 0);
    prod
}

/// Finds a monic irreducible polynomial of degree n over F_p by trial division.
fn find_irreducible(p: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    let total = p.pow(n as u32);
    'cand: for tail in 0..total {
        let mut cand = label_poly(tail as GfElem, p, n as u32);
        cand.push(1); // monic degree n
        // trial-divide by all monic polynomials of degree 1..=n/2
        for d in 1..=(n / 2) {
            let dt = p.pow(d as u32);
            for dtail in 0..dt {
                let mut div = label_poly(dtail as GfElem, p, d as u32);
                div.push(1);
                if poly_divides(&div, &cand, p) {
                    continue 'cand;
                }
            }
        }
        return cand;
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

fn poly_divides(div: &[u64], num: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = num.to_vec();
    let dd = div.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for (k, &dk) in div.iter().enumerate() {
                let idx = shift + k;
                rem[idx] = (rem[idx] + lead * (p - dk % p) % p) % p;
            }
        }
        rem.pop();
        while rem.len() > dd && *rem.last().unwrap() == 0 {
            rem.pop();
        }
    }
    rem.iter().all(|&c| c == 0)
}

impl Gf {
    pub fn new(q: u64) -> Result<Gf> {
        let (p, n) = prime_power(q)
            .ok_or_else(|| Error::SpecInvalid(format!("{q} is not a prime power")))?;
        if n > 1 && q > 4096 {
            return Err(Error::SpecInvalid(format!(
                "prime-power field order {q} too large (max 4096)"
            )));
        }
        if !is_prime(p) {
            return Err(Error::SpecInvalid(format!("{q} is not a prime power")));
        }
        let modulus = if n > 1 { find_irreducible(p, n) } else { Vec::new() };
        let mut gf = Gf {
            p,
            n,
            q,
            modulus,
            mul_table: Vec::new(),
            inv_table: Vec::new(),
        };
        if n > 1 {
            let qs = q as usize;
            let mut table = vec![0 as GfElem; qs * qs];
            for a in 0..qs {
                let pa = label_poly(a as GfElem, p, n);
                for b in a..qs {
                    let pb = label_poly(b as GfElem, p, n);
                    let prod = poly_label(&poly_mul_mod(&pa, &pb, &gf.modulus, p), p);
                    table[a * qs + b] = prod;
                    table[b * qs + a] = prod;
                }
            }
            gf.mul_table = table;
        }
        let mut inv = vec![0 as GfElem; q as usize];
        for a in 1..q as GfElem {
            if inv[a as usize] != 0 {
                continue;
            }
            for b in 1..q as GfElem {
                if gf.mul(a, b) == 1 {
                    inv[a as usize] = b;
                    inv[b as usize] = a;
                    break;
                }
            }
        }
        gf.inv_table = inv;
        Ok(gf)
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn zero(&self) -> GfElem {
        0
    }

    pub fn one(&self) -> GfElem {
        1
    }

    pub fn check(&self, a: GfElem) -> Result<GfElem> {
        if (a as u64) < self.q {
            Ok(a)
        } else {
            Err(Error::SpecInvalid(format!("{a} is not a label in F_{}", self.q)))
        }
    }

    pub fn add(&self, a: GfElem, b: GfElem) -> GfElem {
        if self.n == 1 {
            ((a as u64 + b as u64) % self.p) as GfElem
        } else {
            let pa = label_poly(a, self.p, self.n);
            let pb = label_poly(b, self.p, self.n);
            let sum: Vec<u64> = pa.iter().zip(&pb).map(|(&x, &y)| (x + y) % self.p).collect();
            poly_label(&sum, self.p)
        }
    }

    pub fn neg(&self, a: GfElem) -> GfElem {
        if self.n == 1 {
            ((self.p - a as u64) % self.p) as GfElem
        } else {
            let pa = label_poly(a, self.p, self.n);
            let neg: Vec<u64> = pa.iter().map(|&x| (self.p - x) % self.p).collect();
            poly_label(&neg, self.p)
        }
    }

    pub fn sub(&self, a: GfElem, b: GfElem) -> GfElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: GfElem, b: GfElem) -> GfElem {
        if self.n == 1 {
            ((a as u64 * b as u64) % self.p) as GfElem
        } else {
            self.mul_table[a as usize * self.q as usize + b as usize]
        }
    }

    pub fn inv(&self, a: GfElem) -> Result<GfElem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.n == 1 && self.inv_table.is_empty() {
            // not reachable: table always built
        }
        Ok(self.inv_table[a as usize])
    }

    pub fn div(&self, a: GfElem, b: GfElem) -> Result<GfElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: GfElem, e: i64) -> Result<GfElem> {
        if e < 0 {
            return self.pow(self.inv(a)?, -e);
        }
        let mut acc = 1;
        let mut base = a;
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn minus_one(&self) -> GfElem {
        self.neg(1)
    }

    /// Embeds an integer via the prime subfield.
    pub fn from_int(&self, k: i64) -> GfElem {
        let r = k.rem_euclid(self.p as i64) as GfElem;
        r
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElem> {
        0..self.q as GfElem
    }

    pub fn units(&self) -> impl Iterator<Item = GfElem> {
        1..self.q as GfElem
    }

    pub fn order_of(&self, a: GfElem) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut x = a;
        let mut ord = 1;
        while x != 1 {
            x = self.mul(x, a);
            ord += 1;
        }
        Ok(ord)
    }

    /// A generator of the multiplicative group (smallest label).
    pub fn generator(&self) -> GfElem {
        for a in self.units() {
            if self.order_of(a).unwrap() == self.q - 1 {
                return a;
            }
        }
        unreachable!("F_q^x is cyclic")
    }

    pub fn fmt_elem(&self, a: GfElem) -> String {
        if self.n == 1 {
            format!("{a}")
        } else {
            let pa = label_poly(a, self.p, self.n);
            let mut terms = Vec::new();
            for (i, &c) in pa.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let t = match i {
                    0 => format!("{c}"),
                    1 => {
                        if c == 1 {
                            "g".to_string()
                        } else {
                            format!("{c}g")
                        }
                    }
                    _ => {
                        if c == 1 {
                            format!("g^{i}")
                        } else {
                            format!("{c}g^{i}")
                        }
                    }
                };
                terms.push(t);
            }
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join("+")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f17_basics() {
        let f = Gf::new(17).unwrap();
        assert_eq!(f.mul(3, 6), 1);
        assert_eq!(f.inv(3).unwrap(), 6);
        assert_eq!(f.minus_one(), 16);
        assert_eq!(f.pow(3, 8).unwrap(), 16); // 3^8 = -1 mod 17
    }

    #[test]
    fn f4_is_a_field() {
        let f = Gf::new(4).unwrap();
        assert_eq!(f.characteristic(), 2);
        // x^2 + x + 1 = 0 for the generator of F_4
        let g = f.generator();
        assert_eq!(f.add(f.add(f.mul(g, g), g), 1), 0);
        for a in f.units() {
            let b = f.inv(a).unwrap();
            assert_eq!(f.mul(a, b), 1);
        }
        assert_eq!(f.minus_one(), 1);
    }

    #[test]
    fn f8_field_laws() {
        let f = Gf::new(8).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(Gf::new(12).is_err());
        assert!(Gf::new(1).is_err());
    }
}

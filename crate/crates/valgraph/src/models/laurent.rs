//! Truncated local field F_q((t)) with N = <t^e> (1 + tO), residue
//! characteristic 2.
//!
//! Elements carry an explicit precision horizon: the series is known on
//! [val, horizon) and nothing is claimed beyond it.  Elements built from
//! finitely many terms are exact (infinite horizon); inversion truncates to
//! the model precision.  An addition whose leading term cannot be certified
//! inside the horizon (minus a guard slack) is rejected, never silently
//! truncated.

use crate::error::{Error, Result};
use crate::gf::{Gf, GfElem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Laur {
    Zero,
    Series {
        /// exponent of the leading term; coeffs[0] != 0
        val: i64,
        /// coefficients of t^val, t^(val+1), ...
        coeffs: Vec<GfElem>,
        /// known strictly below this exponent; None = exact
        horizon: Option<i64>,
    },
}

impl Laur {
    pub fn val(&self) -> Result<i64> {
        match self {
            Laur::Zero => Err(Error::DivisionByZero),
            Laur::Series { val, .. } => Ok(*val),
        }
    }

    pub fn lead(&self) -> Result<GfElem> {
        match self {
            Laur::Zero => Err(Error::DivisionByZero),
            Laur::Series { coeffs, .. } => Ok(coeffs[0]),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Laur::Zero | Laur::Series { horizon: None, .. })
    }

    fn coeff_at(&self, exp: i64) -> GfElem {
        match self {
            Laur::Zero => 0,
            Laur::Series { val, coeffs, .. } => {
                if exp < *val || exp - *val >= coeffs.len() as i64 {
                    0
                } else {
                    coeffs[(exp - *val) as usize]
                }
            }
        }
    }

    fn horizon(&self) -> Option<i64> {
        match self {
            Laur::Zero => None,
            Laur::Series { horizon, .. } => *horizon,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LaurentModel {
    pub gf: Gf,
    pub e: u32,
    /// number of unit-part coefficients kept by truncating operations
    pub k: u32,
    /// certification slack below the horizon
    pub guard: i64,
}

impl LaurentModel {
    pub fn build(q: u64, e: u32, k: u32) -> Result<LaurentModel> {
        let gf = Gf::new(q)?;
        if gf.characteristic() != 2 {
            return Err(Error::SpecInvalid(format!(
                "-1 is not in N: residue characteristic must be 2, got q = {q}"
            )));
        }
        if e == 0 {
            return Err(Error::SpecInvalid("e must be positive".into()));
        }
        if (q - 1) * (e as u64) < 2 {
            return Err(Error::SpecInvalid("N is not proper: (q-1)e < 2".into()));
        }
        if k < 2 {
            return Err(Error::SpecInvalid("precision k must be at least 2".into()));
        }
        Ok(LaurentModel { gf, e, k, guard: 1 })
    }

    pub fn index(&self) -> usize {
        ((self.gf.order() - 1) * self.e as u64) as usize
    }

    /// Exact element from (exponent, coefficient) terms.
    pub fn from_terms(&self, terms: &[(i64, GfElem)]) -> Result<Laur> {
        let mut terms: Vec<(i64, GfElem)> = terms
            .iter()
            .filter(|(_, c)| *c != 0)
            .map(|&(e, c)| {
                self.gf.check(c)?;
                Ok((e, c))
            })
            .collect::<Result<_>>()?;
        terms.sort();
        let mut merged: Vec<(i64, GfElem)> = Vec::new();
        for (e, c) in terms {
            if let Some(last) = merged.last_mut() {
                if last.0 == e {
                    last.1 = self.gf.add(last.1, c);
                    continue;
                }
            }
            merged.push((e, c));
        }
        merged.retain(|(_, c)| *c != 0);
        if merged.is_empty() {
            return Ok(Laur::Zero);
        }
        let val = merged[0].0;
        let top = merged.last().unwrap().0;
        let mut coeffs = vec![0; (top - val + 1) as usize];
        for (e, c) in merged {
            coeffs[(e - val) as usize] = c;
        }
        Ok(Laur::Series { val, coeffs, horizon: None })
    }

    pub fn t_pow(&self, exp: i64) -> Laur {
        Laur::Series { val: exp, coeffs: vec![1], horizon: None }
    }

    pub fn one(&self) -> Laur {
        self.t_pow(0)
    }

    pub fn add(&self, x: &Laur, y: &Laur) -> Result<Laur> {
        match (x, y) {
            (Laur::Zero, _) => return Ok(y.clone()),
            (_, Laur::Zero) => return Ok(x.clone()),
            _ => {}
        }
        let (vx, vy) = (x.val()?, y.val()?);
        let start = vx.min(vy);
        let horizon = match (x.horizon(), y.horizon()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MAX).min(b.unwrap_or(i64::MAX))),
        };
        let known_end = match horizon {
            None => {
                let ex = match x {
                    Laur::Series { val, coeffs, .. } => val + coeffs.len() as i64,
                    Laur::Zero => start,
                };
                let ey = match y {
                    Laur::Series { val, coeffs, .. } => val + coeffs.len() as i64,
                    Laur::Zero => start,
                };
                ex.max(ey)
            }
            Some(h) => h,
        };
        let mut coeffs = Vec::new();
        let mut val = None;
        for exp in start..known_end {
            let c = self.gf.add(x.coeff_at(exp), y.coeff_at(exp));
            if val.is_none() {
                if c == 0 {
                    continue;
                }
                val = Some(exp);
            }
            coeffs.push(c);
        }
        match val {
            None => match horizon {
                None => Ok(Laur::Zero),
                Some(h) => Err(Error::PrecisionExhausted(format!(
                    "sum vanishes up to the horizon t^{h}; valuation uncertified"
                ))),
            },
            Some(v) => {
                if let Some(h) = horizon {
                    if v >= h - self.guard {
                        return Err(Error::PrecisionExhausted(format!(
                            "sum valuation {v} too close to horizon {h} (guard {})",
                            self.guard
                        )));
                    }
                }
                while coeffs.last() == Some(&0) && horizon.is_none() {
                    coeffs.pop();
                }
                Ok(Laur::Series { val: v, coeffs, horizon })
            }
        }
    }

    pub fn neg(&self, x: &Laur) -> Laur {
        match x {
            Laur::Zero => Laur::Zero,
            Laur::Series { val, coeffs, horizon } => Laur::Series {
                val: *val,
                coeffs: coeffs.iter().map(|&c| self.gf.neg(c)).collect(),
                horizon: *horizon,
            },
        }
    }

    pub fn sub(&self, x: &Laur, y: &Laur) -> Result<Laur> {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Laur, y: &Laur) -> Result<Laur> {
        let (vx, cx, hx, vy, cy, hy) = match (x, y) {
            (Laur::Zero, _) | (_, Laur::Zero) => return Ok(Laur::Zero),
            (
                Laur::Series { val: vx, coeffs: cx, horizon: hx },
                Laur::Series { val: vy, coeffs: cy, horizon: hy },
            ) => (*vx, cx, *hx, *vy, cy, *hy),
        };
        let val = vx + vy;
        let horizon = match (hx, hy) {
            (None, None) => None,
            (a, b) => {
                let ha = a.map(|h| h + vy).unwrap_or(i64::MAX);
                let hb = b.map(|h| h + vx).unwrap_or(i64::MAX);
                Some(ha.min(hb))
            }
        };
        let len = match horizon {
            None => cx.len() + cy.len() - 1,
            Some(h) => (h - val).max(0) as usize,
        };
        let mut coeffs = vec![0; len];
        for (i, &a) in cx.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in cy.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] = self.gf.add(coeffs[i + j], self.gf.mul(a, b));
            }
        }
        if horizon.is_none() {
            while coeffs.last() == Some(&0) {
                coeffs.pop();
            }
        }
        if coeffs.is_empty() || coeffs[0] == 0 {
            // leading coefficients are products of nonzero field elements
            return Err(Error::Internal("product lost its leading term".into()));
        }
        Ok(Laur::Series { val, coeffs, horizon })
    }

    /// Inverse, truncated to the model precision unless x is a monomial.
    pub fn inv(&self, x: &Laur) -> Result<Laur> {
        let (vx, cx, hx) = match x {
            Laur::Zero => return Err(Error::DivisionByZero),
            Laur::Series { val, coeffs, horizon } => (*val, coeffs, *horizon),
        };
        let lead_inv = self.gf.inv(cx[0])?;
        if cx.len() == 1 && hx.is_none() {
            return Ok(Laur::Series { val: -vx, coeffs: vec![lead_inv], horizon: None });
        }
        let budget = match hx {
            None => self.k as i64,
            Some(h) => (h - vx).min(self.k as i64),
        };
        if budget < 1 + self.guard {
            return Err(Error::PrecisionExhausted("operand too shallow to invert".into()));
        }
        // power series inversion of the unit part
        let n = budget as usize;
        let mut inv = vec![0; n];
        inv[0] = lead_inv;
        for m in 1..n {
            let mut acc = 0;
            for i in 1..=m {
                let a = cx.get(i).copied().unwrap_or(0);
                acc = self.gf.add(acc, self.gf.mul(a, inv[m - i]));
            }
            inv[m] = self.gf.neg(self.gf.mul(lead_inv, acc));
        }
        Ok(Laur::Series { val: -vx, coeffs: inv, horizon: Some(-vx + budget) })
    }

    pub fn pow(&self, x: &Laur, exp: i64) -> Result<Laur> {
        if exp < 0 {
            return self.pow(&self.inv(x)?, -exp);
        }
        let mut acc = self.one();
        for _ in 0..exp {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Equality on the certified data: leading terms are always certified,
    /// so distinct valuations or any differing known coefficient decide
    /// inequality; agreement across the common known range decides equality
    /// (exact when both operands are exact, window-certified otherwise).
    pub fn try_eq(&self, x: &Laur, y: &Laur) -> Result<bool> {
        match (x, y) {
            (Laur::Zero, Laur::Zero) => Ok(true),
            (Laur::Zero, Laur::Series { .. }) | (Laur::Series { .. }, Laur::Zero) => Ok(false),
            (
                Laur::Series { val: vx, coeffs: cx, horizon: hx },
                Laur::Series { val: vy, coeffs: cy, horizon: hy },
            ) => {
                if vx != vy {
                    return Ok(false);
                }
                let end = match (hx, hy) {
                    (None, None) => (vx + cx.len() as i64).max(vy + cy.len() as i64),
                    (a, b) => a
                        .unwrap_or(vx + cx.len() as i64)
                        .min(b.unwrap_or(vy + cy.len() as i64)),
                };
                for exp in *vx..end {
                    if x.coeff_at(exp) != y.coeff_at(exp) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn n_contains(&self, x: &Laur) -> Result<bool> {
        match x {
            Laur::Zero => Err(Error::DivisionByZero),
            Laur::Series { val, coeffs, .. } => {
                Ok(val.rem_euclid(self.e as i64) == 0 && coeffs[0] == 1)
            }
        }
    }

    pub fn fmt(&self, x: &Laur) -> String {
        match x {
            Laur::Zero => "0".into(),
            Laur::Series { val, coeffs, horizon } => {
                let mut terms = Vec::new();
                for (i, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let exp = val + i as i64;
                    let cs = self.gf.fmt_elem(c);
                    let t = match exp {
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
                                format!("t^{exp}")
                            } else {
                                format!("({cs})t^{exp}")
                            }
                        }
                    };
                    terms.push(t);
                }
                let body = if terms.is_empty() { "0".into() } else { terms.join("+") };
                match horizon {
                    None => body,
                    Some(h) => format!("{body}+O(t^{h})"),
                }
            }
        }
    }
}

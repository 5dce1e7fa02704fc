//! Semi-local model on the rational function field F_q(t): finitely many
//! degree-one places p_1..p_r, a common uniformizer pi = prod (t - p_i),
//! and N = intersection of <pi^e> U^(1) over the declared places.  All
//! arithmetic is exact.

use crate::error::{Error, Result};
use crate::gf::{Gf, GfElem};
use crate::poly::{Poly, RatFn};

#[derive(Debug, Clone)]
pub struct FnFieldModel {
    pub gf: Gf,
    pub places: Vec<GfElem>,
    pub e: u32,
    pi: RatFn,
}

impl FnFieldModel {
    pub fn build(q: u64, places: Vec<GfElem>, e: u32) -> Result<FnFieldModel> {
        let gf = Gf::new(q)?;
        if gf.characteristic() != 2 {
            return Err(Error::SpecInvalid(format!(
                "-1 is not in N: residue characteristic must be 2, got q = {q}"
            )));
        }
        if e == 0 || places.is_empty() {
            return Err(Error::SpecInvalid("need e >= 1 and at least one place".into()));
        }
        for &p in &places {
            gf.check(p)?;
        }
        let mut sorted = places.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != places.len() {
            return Err(Error::SpecInvalid("places must be distinct".into()));
        }
        if (q - 1) * (e as u64) < 2 {
            return Err(Error::SpecInvalid("N is not proper".into()));
        }
        let mut pi = Poly::constant(1);
        for &p in &places {
            pi = pi.mul(&Poly(vec![gf.neg(p), 1]), &gf);
        }
        Ok(FnFieldModel { gf, places, e, pi: RatFn::from_poly(pi) })
    }

    pub fn r(&self) -> usize {
        self.places.len()
    }

    pub fn index(&self) -> usize {
        (((self.gf.order() - 1) * self.e as u64) as usize).pow(self.r() as u32)
    }

    /// The common uniformizer pi = prod (t - p_i).
    pub fn uniformizer(&self) -> RatFn {
        self.pi.clone()
    }

    pub fn val(&self, x: &RatFn, place: usize) -> Result<i64> {
        let p = *self
            .places
            .get(place)
            .ok_or_else(|| Error::SpecInvalid(format!("place {place} not declared")))?;
        x.ord_at(p, &self.gf)
    }

    /// Residue of a place-unit.
    pub fn residue(&self, x: &RatFn, place: usize) -> Result<GfElem> {
        let p = *self
            .places
            .get(place)
            .ok_or_else(|| Error::SpecInvalid(format!("place {place} not declared")))?;
        x.eval_unit(p, &self.gf)
    }

    /// Residue of x * pi^{-v_place(x)} at the place.
    pub fn unit_part_residue(&self, x: &RatFn, place: usize) -> Result<GfElem> {
        let v = self.val(x, place)?;
        let adj = x.mul(&self.pi.pow(-v, &self.gf)?, &self.gf)?;
        self.residue(&adj, place)
    }

    pub fn n_contains(&self, x: &RatFn) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        for place in 0..self.r() {
            let v = self.val(x, place)?;
            if v.rem_euclid(self.e as i64) != 0 {
                return Ok(false);
            }
            if self.unit_part_residue(x, place)? != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Unit with residue `value` at the given place and residue 1 elsewhere.
    pub fn residue_unit(&self, place: usize, value: GfElem) -> Result<RatFn> {
        if value == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.r() == 1 {
            return Ok(RatFn::from_poly(Poly::constant(value)));
        }
        let values: Vec<GfElem> =
            (0..self.r()).map(|i| if i == place { value } else { 1 }).collect();
        let p = Poly::interpolate(&self.places, &values, &self.gf)?;
        RatFn::new(p, Poly::constant(1), &self.gf)
    }

    /// Element with valuation 1 at `place`, valuation 0 and residue 1 at the
    /// other declared places.
    pub fn place_uniformizer(&self, place: usize) -> Result<RatFn> {
        let p = self.places[place];
        let linear = RatFn::from_poly(Poly(vec![self.gf.neg(p), 1]));
        if self.r() == 1 {
            return Ok(linear);
        }
        // correct residues at the other places: (t - p) evaluates to p_j - p
        let mut values = vec![1; self.r()];
        for (j, &pj) in self.places.iter().enumerate() {
            if j != place {
                values[j] = self.gf.inv(self.gf.sub(pj, p))?;
            }
        }
        let corr = Poly::interpolate(&self.places, &values, &self.gf)?;
        linear.mul(&RatFn::new(corr, Poly::constant(1), &self.gf)?, &self.gf)
    }

    /// Element of N with valuation e at `place` and 0 at the others.
    pub fn n_block(&self, place: usize) -> Result<RatFn> {
        let s = self.place_uniformizer(place)?.pow(self.e as i64, &self.gf)?;
        let res = self.unit_part_residue_raw(&s, place)?;
        let fix = self.residue_unit(place, self.gf.inv(res)?)?;
        let n = s.mul(&fix, &self.gf)?;
        debug_assert!(self.n_contains(&n).unwrap());
        Ok(n)
    }

    fn unit_part_residue_raw(&self, x: &RatFn, place: usize) -> Result<GfElem> {
        self.unit_part_residue(x, place)
    }

    pub fn fmt(&self, x: &RatFn) -> String {
        x.fmt(&self.gf)
    }
}

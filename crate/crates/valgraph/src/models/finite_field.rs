//! F_q with N the subgroup of m-th powers.  Everything is enumerable, so
//! this model is the exhaustive-oracle workhorse.

use crate::error::{Error, Result};
use crate::gf::{Gf, GfElem};

#[derive(Debug, Clone)]
pub struct FfModel {
    pub gf: Gf,
    pub m: u64,
    n_set: Vec<bool>,
    pub index: usize,
}

impl FfModel {
    pub fn build(q: u64, m: u64) -> Result<FfModel> {
        let gf = Gf::new(q)?;
        if m < 2 {
            return Err(Error::SpecInvalid("m must be at least 2 so that N is proper".into()));
        }
        if (q - 1) % m != 0 {
            return Err(Error::SpecInvalid(format!("m = {m} does not divide q-1 = {}", q - 1)));
        }
        let mut n_set = vec![false; q as usize];
        for a in gf.units() {
            n_set[gf.pow(a, m as i64)? as usize] = true;
        }
        let size = n_set.iter().filter(|&&b| b).count();
        let index = (q as usize - 1) / size;
        if !n_set[gf.minus_one() as usize] {
            return Err(Error::SpecInvalid(format!(
                "-1 = {} is not an m-th power in F_{q} (m = {m})",
                gf.minus_one()
            )));
        }
        if index != m as usize {
            // m | q-1 makes the power map m-to-1, so this cannot happen
            return Err(Error::Internal("unexpected index of the m-th powers".into()));
        }
        Ok(FfModel { gf, m, n_set, index })
    }

    pub fn n_contains(&self, a: GfElem) -> bool {
        self.n_set[a as usize]
    }

    pub fn n_elements(&self) -> Vec<GfElem> {
        self.gf.units().filter(|&a| self.n_contains(a)).collect()
    }
}

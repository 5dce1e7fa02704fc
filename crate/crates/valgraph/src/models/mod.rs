//! Exactly computable pairs (D, N): a division ring D (or field) together
//! with a finite-index normal subgroup N of D^x containing -1, exposed
//! behind one handle with exact arithmetic, N-membership, valuations,
//! residues, coset tables and finite enumeration windows.

pub mod finite_field;
pub mod function_field;
pub mod laurent;
pub mod quaternion;
pub mod rational;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Gf, GfElem};
use crate::group::GroupTable;
use crate::poly::{Poly, RatFn};
use crate::qadic::{PrecisionPolicy, SqrtBranch};

use finite_field::FfModel;
use function_field::FnFieldModel;
use laurent::{Laur, LaurentModel};
use quaternion::{Quat, QuadRat, QuaternionModel};
use rational::RationalModel;

/// Stable label of a coset of N in D^x; label 0 is N itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CosetId(pub usize);

impl CosetId {
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

/// Model-tagged exact element encoding.
#[derive(Debug, Clone, PartialEq)]
pub enum RingElement {
    Ff(GfElem),
    Laurent(Laur),
    FnField(RatFn),
    Rat(BigRational),
    Quat(Quat),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

#[derive(Debug, Clone, Serialize)]
pub enum ModelSpec {
    FiniteField { q: u64, m: u64 },
    LaurentLocal { q: u64, e: u32, k: u32 },
    FunctionFieldSemiLocal { q: u64, places: Vec<u32>, e: u32 },
    RationalCongruence { m: u32, l: u64, bound: u64 },
    Quaternion { d: i64, branch: SqrtBranch, policy: PrecisionPolicy },
}

/// A model spec file plus expected-outcome declarations (`expect.*` keys).
#[derive(Debug, Clone)]
pub struct ParsedSpec {
    pub model: ModelSpec,
    pub expect: BTreeMap<String, String>,
}

/// Enumeration window for infinite models: valuations range over
/// [-val_bound, val_bound] and unit parts vary to depth `unit_depth`.
#[derive(Debug, Clone, Serialize)]
pub struct WindowSpec {
    pub val_bound: i64,
    pub unit_depth: u32,
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec { val_bound: 8, unit_depth: 2 }
    }
}

/// Certification level of a finite-window answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cert {
    Certified,
    WindowCertified,
    Inconclusive,
}

impl Cert {
    pub fn meet(self, other: Cert) -> Cert {
        use Cert::*;
        match (self, other) {
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (WindowCertified, _) | (_, WindowCertified) => WindowCertified,
            _ => Certified,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Cert::Certified => "certified",
            Cert::WindowCertified => "window-certified",
            Cert::Inconclusive => "inconclusive",
        }
    }
}

/// Subgroup M of N given by a membership rule, with -1 always inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SubgroupSpec {
    FullN,
    /// elements of N whose valuations agree at every declared place
    DiagonalValuation,
    /// rational scalars inside N (quaternion model: N cap k^x for k = Q)
    RationalScalars,
}

#[derive(Debug)]
pub enum ModelKind {
    Ff(FfModel),
    Laurent(LaurentModel),
    FnField(FnFieldModel),
    Rational(RationalModel),
    Quaternion(QuaternionModel),
}

pub struct CosetTable {
    pub reps: Vec<RingElement>,
    pub group: GroupTable,
    /// valuation-residue fingerprints of the representatives (coset
    /// invariants used to prune membership tests)
    fingerprints: Vec<Vec<i64>>,
}

pub struct ModelHandle {
    kind: ModelKind,
    spec: ModelSpec,
    cosets: Mutex<Option<Arc<CosetTable>>>,
}

impl std::fmt::Debug for ModelHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModelHandle({:?})", self.spec)
    }
}

macro_rules! wrong_elem {
    () => {
        Err(Error::SpecInvalid("element does not belong to this model".into()))
    };
}

impl ModelHandle {
    pub fn build(spec: ModelSpec) -> Result<ModelHandle> {
        let kind = match &spec {
            ModelSpec::FiniteField { q, m } => ModelKind::Ff(FfModel::build(*q, *m)?),
            ModelSpec::LaurentLocal { q, e, k } => {
                ModelKind::Laurent(LaurentModel::build(*q, *e, *k)?)
            }
            ModelSpec::FunctionFieldSemiLocal { q, places, e } => ModelKind::FnField(
                FnFieldModel::build(*q, places.iter().map(|&p| p as GfElem).collect(), *e)?,
            ),
            ModelSpec::RationalCongruence { m, l, bound } => {
                ModelKind::Rational(RationalModel::build(*m, *l, *bound)?)
            }
            ModelSpec::Quaternion { d, branch, policy } => {
                ModelKind::Quaternion(QuaternionModel::build(*d, *branch, policy.clone())?)
            }
        };
        let handle = ModelHandle { kind, spec, cosets: Mutex::new(None) };
        // standing hypothesis: -1 in N, N proper
        if !handle.n_membership(&handle.minus_one())? {
            return Err(Error::SpecInvalid("-1 does not lie in N".into()));
        }
        Ok(handle)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ModelKind::Ff(_) => "finite-field",
            ModelKind::Laurent(_) => "laurent-local",
            ModelKind::FnField(_) => "function-field-semilocal",
            ModelKind::Rational(_) => "rational-congruence",
            ModelKind::Quaternion(_) => "quaternion",
        }
    }

    /// [D^x : N], known a priori for every kind.
    pub fn expected_index(&self) -> usize {
        match &self.kind {
            ModelKind::Ff(m) => m.index,
            ModelKind::Laurent(m) => m.index(),
            ModelKind::FnField(m) => m.index(),
            ModelKind::Rational(m) => m.index(),
            ModelKind::Quaternion(m) => m.index(),
        }
    }

    pub fn places(&self) -> usize {
        match &self.kind {
            ModelKind::Ff(_) => 0,
            ModelKind::Laurent(_) => 1,
            ModelKind::FnField(m) => m.r(),
            ModelKind::Rational(_) => 1,
            ModelKind::Quaternion(_) => 2,
        }
    }

    /// Ramification-style step of the value group of N at each place:
    /// valuations of N-elements are multiples of this.
    pub fn place_step(&self) -> i64 {
        match &self.kind {
            ModelKind::Ff(_) => 1,
            ModelKind::Laurent(m) => m.e as i64,
            ModelKind::FnField(m) => m.e as i64,
            ModelKind::Rational(m) => m.m as i64,
            ModelKind::Quaternion(_) => 2,
        }
    }

    // ---- element constructors ----

    pub fn zero(&self) -> RingElement {
        match &self.kind {
            ModelKind::Ff(_) => RingElement::Ff(0),
            ModelKind::Laurent(_) => RingElement::Laurent(Laur::Zero),
            ModelKind::FnField(_) => RingElement::FnField(RatFn::from_poly(Poly::zero())),
            ModelKind::Rational(_) => RingElement::Rat(BigRational::zero()),
            ModelKind::Quaternion(_) => RingElement::Quat(Quat::zero()),
        }
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    pub fn minus_one(&self) -> RingElement {
        self.from_int(-1)
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        match &self.kind {
            ModelKind::Ff(m) => RingElement::Ff(m.gf.from_int(n)),
            ModelKind::Laurent(m) => {
                let c = m.gf.from_int(n);
                RingElement::Laurent(m.from_terms(&[(0, c)]).expect("constant"))
            }
            ModelKind::FnField(m) => {
                RingElement::FnField(RatFn::from_poly(Poly::constant(m.gf.from_int(n))))
            }
            ModelKind::Rational(_) => RingElement::Rat(BigRational::from_integer(BigInt::from(n))),
            ModelKind::Quaternion(_) => {
                RingElement::Quat(Quat::scalar(QuadRat::from_ints(n, 0)))
            }
        }
    }

    pub fn is_zero(&self, x: &RingElement) -> bool {
        match x {
            RingElement::Ff(a) => *a == 0,
            RingElement::Laurent(a) => matches!(a, Laur::Zero),
            RingElement::FnField(a) => a.is_zero(),
            RingElement::Rat(a) => a.is_zero(),
            RingElement::Quat(a) => a.is_zero(),
        }
    }

    // ---- arithmetic ----

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        match (&self.kind, x, y) {
            (ModelKind::Ff(m), RingElement::Ff(a), RingElement::Ff(b)) => {
                Ok(RingElement::Ff(m.gf.add(*a, *b)))
            }
            (ModelKind::Laurent(m), RingElement::Laurent(a), RingElement::Laurent(b)) => {
                Ok(RingElement::Laurent(m.add(a, b)?))
            }
            (ModelKind::FnField(m), RingElement::FnField(a), RingElement::FnField(b)) => {
                Ok(RingElement::FnField(a.add(b, &m.gf)?))
            }
            (ModelKind::Rational(_), RingElement::Rat(a), RingElement::Rat(b)) => {
                Ok(RingElement::Rat(a + b))
            }
            (ModelKind::Quaternion(m), RingElement::Quat(a), RingElement::Quat(b)) => {
                Ok(RingElement::Quat(m.add(a, b)))
            }
            _ => wrong_elem!(),
        }
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        match (&self.kind, x) {
            (ModelKind::Ff(m), RingElement::Ff(a)) => RingElement::Ff(m.gf.neg(*a)),
            (ModelKind::Laurent(m), RingElement::Laurent(a)) => RingElement::Laurent(m.neg(a)),
            (ModelKind::FnField(m), RingElement::FnField(a)) => RingElement::FnField(a.neg(&m.gf)),
            (ModelKind::Rational(_), RingElement::Rat(a)) => RingElement::Rat(-a.clone()),
            (ModelKind::Quaternion(m), RingElement::Quat(a)) => RingElement::Quat(m.neg(a)),
            _ => panic!("element does not belong to this model"),
        }
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        match (&self.kind, x, y) {
            (ModelKind::Ff(m), RingElement::Ff(a), RingElement::Ff(b)) => {
                Ok(RingElement::Ff(m.gf.mul(*a, *b)))
            }
            (ModelKind::Laurent(m), RingElement::Laurent(a), RingElement::Laurent(b)) => {
                Ok(RingElement::Laurent(m.mul(a, b)?))
            }
            (ModelKind::FnField(m), RingElement::FnField(a), RingElement::FnField(b)) => {
                Ok(RingElement::FnField(a.mul(b, &m.gf)?))
            }
            (ModelKind::Rational(_), RingElement::Rat(a), RingElement::Rat(b)) => {
                Ok(RingElement::Rat(a * b))
            }
            (ModelKind::Quaternion(m), RingElement::Quat(a), RingElement::Quat(b)) => {
                Ok(RingElement::Quat(m.mul(a, b)))
            }
            _ => wrong_elem!(),
        }
    }

    pub fn inv(&self, x: &RingElement) -> Result<RingElement> {
        match (&self.kind, x) {
            (ModelKind::Ff(m), RingElement::Ff(a)) => Ok(RingElement::Ff(m.gf.inv(*a)?)),
            (ModelKind::Laurent(m), RingElement::Laurent(a)) => {
                Ok(RingElement::Laurent(m.inv(a)?))
            }
            (ModelKind::FnField(m), RingElement::FnField(a)) => {
                Ok(RingElement::FnField(a.inv(&m.gf)?))
            }
            (ModelKind::Rational(_), RingElement::Rat(a)) => {
                if a.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(RingElement::Rat(a.recip()))
                }
            }
            (ModelKind::Quaternion(m), RingElement::Quat(a)) => Ok(RingElement::Quat(m.inv(a)?)),
            _ => wrong_elem!(),
        }
    }

    pub fn pow(&self, x: &RingElement, e: i64) -> Result<RingElement> {
        if e < 0 {
            return self.pow(&self.inv(x)?, -e);
        }
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn element_op(
        &self,
        op: ElementOp,
        x: &RingElement,
        y: Option<&RingElement>,
    ) -> Result<RingElement> {
        let need_y = || y.ok_or_else(|| Error::SpecInvalid("binary op needs two operands".into()));
        match op {
            ElementOp::Add => self.add(x, need_y()?),
            ElementOp::Sub => self.sub(x, need_y()?),
            ElementOp::Mul => self.mul(x, need_y()?),
            ElementOp::Inv => self.inv(x),
            ElementOp::Neg => Ok(self.neg(x)),
        }
    }

    /// Certified equality; may fail with a precision error on truncated
    /// local elements.
    pub fn try_eq(&self, x: &RingElement, y: &RingElement) -> Result<bool> {
        match (&self.kind, x, y) {
            (ModelKind::Laurent(m), RingElement::Laurent(a), RingElement::Laurent(b)) => {
                m.try_eq(a, b)
            }
            _ => Ok(self.is_zero(&self.sub(x, y)?)),
        }
    }

    /// Conjugate x^g = g^-1 x g.
    pub fn conjugate(&self, x: &RingElement, g: &RingElement) -> Result<RingElement> {
        self.mul(&self.mul(&self.inv(g)?, x)?, g)
    }

    // ---- the subgroup N ----

    pub fn n_membership(&self, x: &RingElement) -> Result<bool> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        match (&self.kind, x) {
            (ModelKind::Ff(m), RingElement::Ff(a)) => Ok(m.n_contains(*a)),
            (ModelKind::Laurent(m), RingElement::Laurent(a)) => m.n_contains(a),
            (ModelKind::FnField(m), RingElement::FnField(a)) => m.n_contains(a),
            (ModelKind::Rational(m), RingElement::Rat(a)) => m.n_contains(a),
            (ModelKind::Quaternion(m), RingElement::Quat(a)) => m.n_contains(a),
            _ => wrong_elem!(),
        }
    }

    // ---- places ----

    pub fn valuation_of(&self, x: &RingElement, place: usize) -> Result<i64> {
        if place >= self.places() {
            return Err(Error::SpecInvalid(format!("place {place} not declared")));
        }
        match (&self.kind, x) {
            (ModelKind::Laurent(_), RingElement::Laurent(a)) => a.val(),
            (ModelKind::FnField(m), RingElement::FnField(a)) => m.val(a, place),
            (ModelKind::Rational(m), RingElement::Rat(a)) => m.v_p(a, m.l),
            (ModelKind::Quaternion(m), RingElement::Quat(a)) => m.w_tilde(a, place),
            _ => wrong_elem!(),
        }
    }

    pub fn valuations(&self, x: &RingElement) -> Result<Vec<i64>> {
        (0..self.places()).map(|p| self.valuation_of(x, p)).collect()
    }

    pub fn residue_field(&self, place: usize) -> Result<&Gf> {
        if place >= self.places() && !matches!(self.kind, ModelKind::Ff(_)) {
            return Err(Error::SpecInvalid(format!("place {place} not declared")));
        }
        match &self.kind {
            ModelKind::Ff(m) => Ok(&m.gf),
            ModelKind::Laurent(m) => Ok(&m.gf),
            ModelKind::FnField(m) => Ok(&m.gf),
            ModelKind::Rational(m) => Ok(&m.residue_field),
            ModelKind::Quaternion(m) => Ok(&m.residue_field),
        }
    }

    /// Residue of a place-unit in the residue field of the place.
    pub fn residue(&self, x: &RingElement, place: usize) -> Result<GfElem> {
        if self.valuation_of(x, place)? != 0 {
            return Err(Error::NotAUnit);
        }
        match (&self.kind, x) {
            (ModelKind::Laurent(_), RingElement::Laurent(a)) => a.lead(),
            (ModelKind::FnField(m), RingElement::FnField(a)) => m.residue(a, place),
            (ModelKind::Rational(m), RingElement::Rat(a)) => m.unit_residue(a),
            (ModelKind::Quaternion(m), RingElement::Quat(a)) => m.residue(a, place),
            _ => wrong_elem!(),
        }
    }

    /// Membership in the local factor of N at one declared place (the group
    /// <pi^e> U^(1) there); N is the intersection over all places.
    pub fn n_membership_at_place(&self, x: &RingElement, place: usize) -> Result<bool> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        match (&self.kind, x) {
            (ModelKind::Laurent(m), RingElement::Laurent(a)) => m.n_contains(a),
            (ModelKind::FnField(m), RingElement::FnField(a)) => {
                let v = m.val(a, place)?;
                Ok(v.rem_euclid(m.e as i64) == 0 && m.unit_part_residue(a, place)? == 1)
            }
            (ModelKind::Quaternion(m), RingElement::Quat(a)) => {
                let t = m.w_tilde(a, place)?;
                if t.rem_euclid(2) != 0 {
                    return Ok(false);
                }
                let y = m.scale_pow_minus_two(a, -t / 2);
                let delta = m.sub(&y, &m.one());
                if delta.is_zero() {
                    return Ok(true);
                }
                Ok(m.w_tilde(&delta, place)? > 0)
            }
            _ => Err(Error::SpecInvalid("model has no per-place subgroup factor".into())),
        }
    }

    /// The place-swapping involution, where the model has one.
    pub fn apply_involution(&self, x: &RingElement) -> Result<RingElement> {
        match (&self.kind, x) {
            (ModelKind::Quaternion(m), RingElement::Quat(a)) => {
                Ok(RingElement::Quat(m.sigma(a)))
            }
            _ => Err(Error::SpecInvalid("model has no declared involution".into())),
        }
    }

    pub fn has_involution(&self) -> bool {
        matches!(self.kind, ModelKind::Quaternion(_))
    }

    // ---- enumeration ----

    /// All nonzero elements; finite-field kind only.
    pub fn enumerate_nonzero(&self) -> Result<Vec<RingElement>> {
        match &self.kind {
            ModelKind::Ff(m) => Ok(m.gf.units().map(RingElement::Ff).collect()),
            _ => Err(Error::NotEnumerable),
        }
    }

    /// The whole of N for finite kinds, None otherwise.
    pub fn n_exhaustive(&self) -> Option<Vec<RingElement>> {
        match &self.kind {
            ModelKind::Ff(m) => Some(m.n_elements().into_iter().map(RingElement::Ff).collect()),
            _ => None,
        }
    }

    /// Certified elements of N spanning the window.
    pub fn n_window(&self, w: &WindowSpec) -> Result<Vec<RingElement>> {
        match &self.kind {
            ModelKind::Ff(_) => Ok(self.n_exhaustive().unwrap()),
            ModelKind::Laurent(m) => {
                let mut out = Vec::new();
                let e = m.e as i64;
                let mut v = -(w.val_bound / e) * e;
                while v <= w.val_bound {
                    for tail in tails(&m.gf, w.unit_depth) {
                        let mut terms = vec![(v, 1)];
                        for (i, c) in tail.iter().enumerate() {
                            terms.push((v + 1 + i as i64, *c));
                        }
                        out.push(RingElement::Laurent(m.from_terms(&terms)?));
                    }
                    v += e;
                }
                Ok(out)
            }
            ModelKind::FnField(m) => {
                let e = m.e as i64;
                let span = (w.val_bound / e).max(1);
                let mut blocks = Vec::new();
                for place in 0..m.r() {
                    blocks.push(RingElement::FnField(m.n_block(place)?));
                }
                let mut out = Vec::new();
                let mut exps = vec![-span; m.r()];
                loop {
                    let mut x = self.one();
                    for (place, &a) in exps.iter().enumerate() {
                        x = self.mul(&x, &self.pow(&blocks[place], a)?)?;
                    }
                    out.push(x.clone());
                    // unit-depth variants 1 + c pi^dep are in N at every place
                    for dep in 1..=w.unit_depth {
                        for c in m.gf.units() {
                            let u = RingElement::FnField(
                                RatFn::from_poly(Poly::constant(c))
                                    .mul(&m.uniformizer().pow(dep as i64, &m.gf)?, &m.gf)?
                                    .add(&RatFn::from_poly(Poly::constant(1)), &m.gf)?,
                            );
                            out.push(self.mul(&x, &u)?);
                        }
                    }
                    if !increment(&mut exps, -span, span) {
                        break;
                    }
                }
                Ok(out)
            }
            ModelKind::Rational(m) => {
                let mut primes = vec![m.l];
                for p in [2u64, 3, 5, 7, 11, 13] {
                    if p != m.l && primes.len() < 4 {
                        primes.push(p);
                    }
                }
                let b = 2i64.max(w.unit_depth as i64);
                let mut out = Vec::new();
                let mut exps = vec![-b; primes.len()];
                loop {
                    let mut x = BigRational::from_integer(BigInt::from(1));
                    for (i, &a) in exps.iter().enumerate() {
                        x *= pow_rat(primes[i], a);
                    }
                    for sign in [1i64, -1] {
                        let cand = if sign == 1 { x.clone() } else { -x.clone() };
                        let el = RingElement::Rat(cand);
                        if self.n_membership(&el)? {
                            out.push(el);
                        }
                    }
                    if !increment(&mut exps, -b, b) {
                        break;
                    }
                }
                Ok(out)
            }
            ModelKind::Quaternion(m) => self.quaternion_n_window(m, w),
        }
    }

    fn quaternion_n_window(&self, m: &QuaternionModel, w: &WindowSpec) -> Result<Vec<RingElement>> {
        // generators of known phi-vectors: 2, u_plus, u_minus, odd-split
        let two = Quat::scalar(QuadRat::from_ints(2, 0));
        let up = Quat::scalar(m.u_plus());
        let um = Quat::scalar(m.u_minus());
        let zeta = Quat::scalar(m.odd_split()?);
        let gens = [two, up, um, zeta];
        let mut phis = Vec::new();
        for g in &gens {
            let w0 = m.w_tilde(g, 0)? / 2;
            let w1 = m.w_tilde(g, 1)? / 2;
            phis.push((w0, w1));
        }
        let bound = (w.val_bound / 2).max(1);
        let reach = 8i64;
        let mut best: BTreeMap<(i64, i64), Vec<i64>> = BTreeMap::new();
        let mut exps = vec![-reach; 4];
        loop {
            let v0: i64 = exps.iter().zip(&phis).map(|(a, p)| a * p.0).sum();
            let v1: i64 = exps.iter().zip(&phis).map(|(a, p)| a * p.1).sum();
            if v0.abs() <= bound && v1.abs() <= bound {
                let weight: i64 = exps.iter().map(|a| a.abs()).sum();
                let entry = best.entry((v0, v1)).or_insert_with(|| exps.clone());
                let old: i64 = entry.iter().map(|a| a.abs()).sum();
                if weight < old {
                    *entry = exps.clone();
                }
            }
            if !increment(&mut exps, -reach, reach) {
                break;
            }
        }
        // unit pool inside U^(1)_1 cap U^(1)_2
        let mut units = vec![m.one()];
        if w.unit_depth >= 1 {
            for g in [m.i(), m.j(), m.k()] {
                let u = m.add(&m.one(), &m.scale(&g, &QuadRat::from_ints(2, 0)));
                units.push(u);
            }
        }
        if w.unit_depth >= 2 {
            let u1 = m.add(&m.one(), &m.scale(&m.i(), &QuadRat::from_ints(2, 0)));
            let u2 = m.add(&m.one(), &m.scale(&m.j(), &QuadRat::from_ints(2, 0)));
            units.push(m.mul(&u1, &u2));
            units.push(m.add(&m.one(), &m.scale(&m.i(), &QuadRat::from_ints(4, 0))));
        }
        let mut out = Vec::new();
        for exps in best.values() {
            let mut base = m.one();
            for (g, &a) in gens.iter().zip(exps) {
                base = m.mul(&base, &m.pow(g, a)?);
            }
            for u in &units {
                let x = m.mul(&base, u);
                out.push(RingElement::Quat(m.neg(&x)));
                out.push(RingElement::Quat(x));
            }
        }
        Ok(out)
    }

    /// A window of D^x elements spread over cosets and valuations.
    pub fn dx_window(&self, w: &WindowSpec) -> Result<Vec<RingElement>> {
        match &self.kind {
            ModelKind::Ff(_) => self.enumerate_nonzero(),
            ModelKind::Laurent(m) => {
                let mut out = Vec::new();
                for v in -w.val_bound..=w.val_bound {
                    for lead in m.gf.units() {
                        for tail in tails(&m.gf, w.unit_depth.min(1)) {
                            let mut terms = vec![(v, lead)];
                            for (i, c) in tail.iter().enumerate() {
                                terms.push((v + 1 + i as i64, *c));
                            }
                            out.push(RingElement::Laurent(m.from_terms(&terms)?));
                        }
                    }
                }
                Ok(out)
            }
            ModelKind::FnField(m) => {
                let span = 2i64;
                let mut out = Vec::new();
                let mut exps = vec![-span; m.r()];
                loop {
                    let mut x = self.one();
                    for place in 0..m.r() {
                        let s = RingElement::FnField(m.place_uniformizer(place)?);
                        x = self.mul(&x, &self.pow(&s, exps[place])?)?;
                    }
                    out.push(x.clone());
                    for place in 0..m.r() {
                        for c in m.gf.units().filter(|&c| c != 1) {
                            let u = RingElement::FnField(m.residue_unit(place, c)?);
                            out.push(self.mul(&x, &u)?);
                        }
                    }
                    if !increment(&mut exps, -span, span) {
                        break;
                    }
                }
                Ok(out)
            }
            ModelKind::Rational(m) => {
                let mut primes = vec![m.l];
                for p in [2u64, 3, 5] {
                    if p != m.l && primes.len() < 3 {
                        primes.push(p);
                    }
                }
                let b = 2i64;
                let mut out = Vec::new();
                let mut exps = vec![-b; primes.len()];
                loop {
                    let mut x = BigRational::from_integer(BigInt::from(1));
                    for (i, &a) in exps.iter().enumerate() {
                        x *= pow_rat(primes[i], a);
                    }
                    out.push(RingElement::Rat(x.clone()));
                    out.push(RingElement::Rat(-x));
                    if !increment(&mut exps, -b, b) {
                        break;
                    }
                }
                Ok(out)
            }
            ModelKind::Quaternion(m) => {
                let smalls = WindowSpec { val_bound: 4, unit_depth: w.unit_depth.min(1) };
                let base = self.quaternion_n_window(m, &smalls)?;
                let reps = [
                    m.one(),
                    m.uniformizer(),
                    m.a_elem(),
                    m.mul(&m.uniformizer(), &m.a_elem()),
                    m.mul(&m.a_elem(), &m.a_elem()),
                    m.parity_breaker(),
                ];
                let mut out = Vec::new();
                for r in &reps {
                    for b in &base {
                        let RingElement::Quat(bq) = b else { unreachable!() };
                        out.push(RingElement::Quat(m.mul(r, bq)));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Elements z with v_place(z) > delta (a window into m_{D,w}(delta)).
    pub fn mj_window(&self, place: usize, delta: i64, w: &WindowSpec) -> Result<Vec<RingElement>> {
        if place >= self.places() {
            return Err(Error::SpecInvalid(format!("place {place} not declared")));
        }
        match &self.kind {
            ModelKind::Ff(_) => Err(Error::SpecInvalid("finite fields carry no places".into())),
            ModelKind::Laurent(m) => {
                let mut out = Vec::new();
                for v in delta + 1..=delta + 1 + w.unit_depth as i64 {
                    for c in m.gf.units() {
                        out.push(RingElement::Laurent(m.from_terms(&[(v, c)])?));
                        out.push(RingElement::Laurent(m.from_terms(&[(v, c), (v + 1, 1)])?));
                    }
                }
                Ok(out)
            }
            ModelKind::FnField(m) => {
                let mut out = Vec::new();
                let s = m.place_uniformizer(place)?;
                for extra in 0..=w.unit_depth as i64 {
                    let base = s.pow(delta + 1 + extra, &m.gf)?;
                    for c in m.gf.units() {
                        let z = base.mul(&RatFn::from_poly(Poly::constant(c)), &m.gf)?;
                        out.push(RingElement::FnField(z.clone()));
                        // variants with nontrivial behavior at the other places
                        for other in 0..m.r() {
                            if other == place {
                                continue;
                            }
                            for g in m.gf.units().filter(|&g| g != 1) {
                                let u = m.residue_unit(other, g)?;
                                out.push(RingElement::FnField(z.mul(&u, &m.gf)?));
                            }
                            let sp = m.place_uniformizer(other)?;
                            for a in [-2i64, -1, 1] {
                                out.push(RingElement::FnField(
                                    z.mul(&sp.pow(a, &m.gf)?, &m.gf)?,
                                ));
                            }
                        }
                    }
                }
                Ok(out)
            }
            ModelKind::Rational(m) => {
                let mut out = Vec::new();
                for v in delta + 1..=delta + 2 {
                    for c in [1i64, 2, 3, -1] {
                        if c.unsigned_abs() % m.l != 0 {
                            let z = BigRational::from_integer(BigInt::from(c)) * pow_rat(m.l, v);
                            out.push(RingElement::Rat(z));
                        }
                    }
                }
                Ok(out)
            }
            ModelKind::Quaternion(m) => {
                let pi = m.uniformizer();
                let up = Quat::scalar(m.u_plus());
                let um = Quat::scalar(m.u_minus());
                let a = m.a_elem();
                let mut out = Vec::new();
                for extra in 0..=1i64 {
                    let base = m.pow(&pi, delta + 1 + extra)?;
                    for asym in [0i64, -1, -2, -3] {
                        for (s, name) in [(&up, 0), (&um, 1)] {
                            let _ = name;
                            let mut z = m.mul(&base, &m.pow(s, asym)?);
                            if m.w_tilde(&z, place)? > delta {
                                out.push(RingElement::Quat(z.clone()));
                                z = m.mul(&z, &a);
                                if m.w_tilde(&z, place)? > delta {
                                    out.push(RingElement::Quat(z));
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    // ---- coset table ----

    fn coset_generators(&self) -> Result<Vec<RingElement>> {
        match &self.kind {
            ModelKind::Ff(m) => Ok(vec![RingElement::Ff(m.gf.generator())]),
            ModelKind::Laurent(m) => Ok(vec![
                RingElement::Laurent(m.from_terms(&[(0, m.gf.generator())])?),
                RingElement::Laurent(m.t_pow(1)),
            ]),
            ModelKind::FnField(m) => {
                let mut gens = Vec::new();
                for place in 0..m.r() {
                    gens.push(RingElement::FnField(m.residue_unit(place, m.gf.generator())?));
                    gens.push(RingElement::FnField(m.place_uniformizer(place)?));
                }
                Ok(gens)
            }
            ModelKind::Rational(m) => {
                let mut gens = vec![RingElement::Rat(BigRational::from_integer(BigInt::from(
                    m.l,
                )))];
                for p in [2u64, 3, 5, 7, 11, 13, 17, 19] {
                    if p != m.l {
                        gens.push(RingElement::Rat(BigRational::from_integer(BigInt::from(p))));
                    }
                }
                Ok(gens)
            }
            ModelKind::Quaternion(m) => Ok(vec![
                RingElement::Quat(m.uniformizer()),
                RingElement::Quat(m.a_elem()),
                RingElement::Quat(m.lopsided_a(false)),
                RingElement::Quat(m.parity_breaker()),
            ]),
        }
    }

    pub fn coset_table(&self) -> Result<Arc<CosetTable>> {
        let mut guard = self.cosets.lock().unwrap();
        if let Some(t) = guard.as_ref() {
            return Ok(t.clone());
        }
        let table = Arc::new(self.build_coset_table()?);
        *guard = Some(table.clone());
        Ok(table)
    }

    /// Cheap coset invariant: per-place valuations modulo the value step of
    /// N (equal fingerprints are necessary for equal cosets).
    fn coset_fingerprint(&self, x: &RingElement) -> Result<Vec<i64>> {
        let step = self.place_step();
        self.valuations(x)?
            .into_iter()
            .map(|v| Ok(v.rem_euclid(step)))
            .collect()
    }

    fn find_coset(
        &self,
        reps: &[RingElement],
        fps: &[Vec<i64>],
        x: &RingElement,
    ) -> Result<Option<usize>> {
        let fp = self.coset_fingerprint(x)?;
        for (i, r) in reps.iter().enumerate() {
            if fps[i] != fp {
                continue;
            }
            if self.n_membership(&self.mul(x, &self.inv(r)?)?)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn build_coset_table(&self) -> Result<CosetTable> {
        let gens = self.coset_generators()?;
        let expected = self.expected_index();
        let mut reps = vec![self.one()];
        let mut fps = vec![self.coset_fingerprint(&reps[0])?];
        let mut frontier = vec![self.one()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for r in &frontier {
                for g in &gens {
                    let cand = self.mul(r, g)?;
                    if self.find_coset(&reps, &fps, &cand)?.is_none() {
                        fps.push(self.coset_fingerprint(&cand)?);
                        reps.push(cand.clone());
                        next.push(cand);
                        if reps.len() > expected {
                            return Err(Error::Internal(format!(
                                "coset closure exceeded the expected index {expected}"
                            )));
                        }
                    }
                }
            }
            frontier = next;
        }
        if reps.len() != expected {
            return Err(Error::Internal(format!(
                "coset generators span {} of {expected} cosets",
                reps.len()
            )));
        }
        let n = reps.len();
        let mut mul = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = self.mul(&reps[i], &reps[j])?;
                mul[i][j] = self
                    .find_coset(&reps, &fps, &prod)?
                    .ok_or_else(|| Error::Internal("product escaped the coset list".into()))?;
            }
        }
        let labels = reps.iter().map(|r| self.format_element(r)).collect();
        let group = GroupTable::new(mul, labels)?;
        Ok(CosetTable { reps, group, fingerprints: fps })
    }

    pub fn coset_of(&self, x: &RingElement) -> Result<CosetId> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        let table = self.coset_table()?;
        self.find_coset(&table.reps, &table.fingerprints, x)?
            .map(CosetId)
            .ok_or_else(|| Error::Internal("element matched no coset".into()))
    }

    /// Involution action on coset labels, when the model has one.
    pub fn involution_on_cosets(&self) -> Result<Vec<usize>> {
        let table = self.coset_table()?;
        let mut perm = Vec::with_capacity(table.reps.len());
        for r in &table.reps {
            let img = self.apply_involution(r)?;
            perm.push(self.coset_of(&img)?.0);
        }
        Ok(perm)
    }

    // ---- subgroups ----

    pub fn subgroup_contains(&self, sub: SubgroupSpec, x: &RingElement) -> Result<bool> {
        if !self.n_membership(x)? {
            return Ok(false);
        }
        match sub {
            SubgroupSpec::FullN => Ok(true),
            SubgroupSpec::DiagonalValuation => {
                if self.places() == 0 {
                    return Err(Error::SpecInvalid("model declares no places".into()));
                }
                let vals = self.valuations(x)?;
                Ok(vals.windows(2).all(|w| w[0] == w[1]))
            }
            SubgroupSpec::RationalScalars => match (&self.kind, x) {
                (ModelKind::Quaternion(_), RingElement::Quat(q)) => Ok(q.is_rational_scalar()),
                (ModelKind::Rational(_), _) => Ok(true),
                _ => Err(Error::SpecInvalid(
                    "rational-scalar subgroup only applies to the quaternion model".into(),
                )),
            },
        }
    }

    pub fn subgroup_window(&self, sub: SubgroupSpec, w: &WindowSpec) -> Result<Vec<RingElement>> {
        let mut out = Vec::new();
        for x in self.n_window(w)? {
            if self.subgroup_contains(sub, &x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    // ---- formatting & parsing ----

    pub fn format_element(&self, x: &RingElement) -> String {
        match (&self.kind, x) {
            (ModelKind::Ff(_), RingElement::Ff(a)) => format!("{a}"),
            (ModelKind::Laurent(m), RingElement::Laurent(a)) => m.fmt(a),
            (ModelKind::FnField(m), RingElement::FnField(a)) => m.fmt(a),
            (ModelKind::Rational(_), RingElement::Rat(a)) => a.to_string(),
            (ModelKind::Quaternion(m), RingElement::Quat(a)) => m.fmt(a),
            _ => "<foreign element>".into(),
        }
    }

    /// Canonical dedup key (exact data, including precision horizons).
    pub fn element_key(&self, x: &RingElement) -> String {
        match x {
            RingElement::Laurent(Laur::Series { val, coeffs, horizon }) => {
                format!("L:{val}:{coeffs:?}:{horizon:?}")
            }
            _ => format!("{}:{}", self.kind_name(), self.format_element(x)),
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<RingElement> {
        let s = s.trim();
        match &self.kind {
            ModelKind::Ff(m) => {
                let v: i64 = s
                    .parse()
                    .map_err(|_| Error::SpecInvalid(format!("bad field element: {s}")))?;
                Ok(RingElement::Ff(m.gf.from_int(v)))
            }
            ModelKind::Laurent(m) => {
                let terms = parse_poly_terms(s)?;
                let terms: Vec<(i64, GfElem)> =
                    terms.into_iter().map(|(e, c)| (e, m.gf.from_int(c))).collect();
                Ok(RingElement::Laurent(m.from_terms(&terms)?))
            }
            ModelKind::FnField(m) => {
                let (ns, ds) = match s.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (s, "1"),
                };
                let to_poly = |txt: &str| -> Result<Poly> {
                    let mut coeffs: Vec<GfElem> = Vec::new();
                    for (e, c) in parse_poly_terms(txt)? {
                        if e < 0 {
                            return Err(Error::SpecInvalid("negative powers: use p/q".into()));
                        }
                        if coeffs.len() <= e as usize {
                            coeffs.resize(e as usize + 1, 0);
                        }
                        coeffs[e as usize] = m.gf.add(coeffs[e as usize], m.gf.from_int(c));
                    }
                    Ok(Poly::normalize(coeffs))
                };
                Ok(RingElement::FnField(RatFn::new(to_poly(ns)?, to_poly(ds)?, &m.gf)?))
            }
            ModelKind::Rational(_) => {
                let (ns, ds) = match s.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (s, "1"),
                };
                let n: i64 = ns
                    .trim()
                    .parse()
                    .map_err(|_| Error::SpecInvalid(format!("bad rational: {s}")))?;
                let d: i64 = ds
                    .trim()
                    .parse()
                    .map_err(|_| Error::SpecInvalid(format!("bad rational: {s}")))?;
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(RingElement::Rat(BigRational::new(BigInt::from(n), BigInt::from(d))))
            }
            ModelKind::Quaternion(m) => {
                let mut acc = Quat::zero();
                for (sign, term) in split_signed_terms(s) {
                    let atom = match term.trim() {
                        "pi" => m.uniformizer(),
                        "a" => m.a_elem(),
                        "i" => m.i(),
                        "j" => m.j(),
                        "k" => m.k(),
                        "s" | "sqrt_d" => m.sqrt_d(),
                        other => {
                            let v: i64 = other.parse().map_err(|_| {
                                Error::SpecInvalid(format!("bad quaternion atom: {other}"))
                            })?;
                            Quat::scalar(QuadRat::from_ints(v, 0))
                        }
                    };
                    let atom = if sign < 0 { m.neg(&atom) } else { atom };
                    acc = m.add(&acc, &atom);
                }
                Ok(RingElement::Quat(acc))
            }
        }
    }

    /// Distinguished base point for the order machinery: pi for local kinds,
    /// the first non-N coset representative otherwise.
    pub fn canonical_y(&self) -> Result<RingElement> {
        match &self.kind {
            ModelKind::Ff(m) => Ok(RingElement::Ff(m.gf.generator())),
            ModelKind::Laurent(m) => Ok(RingElement::Laurent(m.t_pow(1))),
            ModelKind::FnField(m) => Ok(RingElement::FnField(m.uniformizer())),
            ModelKind::Rational(m) => {
                Ok(RingElement::Rat(BigRational::from_integer(BigInt::from(m.l))))
            }
            ModelKind::Quaternion(m) => Ok(RingElement::Quat(m.uniformizer())),
        }
    }
}

fn tails(gf: &Gf, depth: u32) -> Vec<Vec<GfElem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for t in &out {
            for c in gf.elements() {
                let mut v = t.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn increment(exps: &mut [i64], lo: i64, hi: i64) -> bool {
    for e in exps.iter_mut() {
        if *e < hi {
            *e += 1;
            return true;
        }
        *e = lo;
    }
    false
}

fn pow_rat(p: u64, e: i64) -> BigRational {
    let mut acc = BigInt::from(1);
    for _ in 0..e.unsigned_abs() {
        acc *= BigInt::from(p);
    }
    if e >= 0 {
        BigRational::from_integer(acc)
    } else {
        BigRational::new(BigInt::from(1), acc)
    }
}

/// Parses "t^3+2t+1" style expressions into (exponent, integer coeff) terms.
fn parse_poly_terms(s: &str) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    for (sign, term) in split_signed_terms(s) {
        let term = term.trim().replace(' ', "");
        if term.is_empty() {
            return Err(Error::SpecInvalid("empty term".into()));
        }
        let (coeff, exp) = if let Some(rest) = term.strip_prefix("t") {
            (1i64, parse_exp(rest)?)
        } else if let Some(pos) = term.find('t') {
            let c: i64 = term[..pos]
                .trim_end_matches('*')
                .parse()
                .map_err(|_| Error::SpecInvalid(format!("bad coefficient in {term}")))?;
            (c, parse_exp(&term[pos + 1..])?)
        } else {
            let c: i64 =
                term.parse().map_err(|_| Error::SpecInvalid(format!("bad term {term}")))?;
            (c, 0)
        };
        out.push((exp, sign * coeff));
    }
    Ok(out)
}

fn parse_exp(rest: &str) -> Result<i64> {
    if rest.is_empty() {
        return Ok(1);
    }
    let rest = rest
        .strip_prefix('^')
        .ok_or_else(|| Error::SpecInvalid(format!("expected ^ in exponent: {rest}")))?;
    rest.parse().map_err(|_| Error::SpecInvalid(format!("bad exponent {rest}")))
}

fn split_signed_terms(s: &str) -> Vec<(i64, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i64;
    let mut depth = 0i32;
    for (idx, ch) in s.chars().enumerate() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' if depth == 0 && !cur.trim().is_empty() => {
                out.push((sign, cur.clone()));
                cur.clear();
                sign = 1;
            }
            '-' if depth == 0 && (idx == 0 || cur.trim().is_empty()) => {
                sign = -sign;
            }
            '-' if depth == 0 && matches!(cur.trim().chars().last(), Some('^')) => {
                cur.push(ch); // negative exponent
            }
            '-' if depth == 0 => {
                out.push((sign, cur.clone()));
                cur.clear();
                sign = -1;
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur));
    }
    out
}

/// Parses the key-value model spec format; unknown keys are errors.
pub fn parse_spec_text(text: &str) -> Result<ParsedSpec> {
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    let mut expect = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::SpecInvalid(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if let Some(e) = key.strip_prefix("expect.") {
            expect.insert(e.to_string(), value);
        } else if kv.insert(key.clone(), value).is_some() {
            return Err(Error::SpecInvalid(format!("duplicate key {key}")));
        }
    }
    let mut take = |k: &str| kv.remove(k);
    let kind = take("kind").ok_or_else(|| Error::SpecInvalid("missing key: kind".into()))?;
    let parse_u64 = |name: &str, v: Option<String>| -> Result<Option<u64>> {
        match v {
            None => Ok(None),
            Some(s) => Ok(Some(s.parse().map_err(|_| {
                Error::SpecInvalid(format!("bad integer for {name}: {s}"))
            })?)),
        }
    };
    let model = match kind.as_str() {
        "finite-field" => {
            let q = parse_u64("q", take("q"))?.ok_or_else(|| Error::SpecInvalid("missing q".into()))?;
            let m = parse_u64("m", take("m"))?.ok_or_else(|| Error::SpecInvalid("missing m".into()))?;
            ModelSpec::FiniteField { q, m }
        }
        "laurent-local" => {
            let q = parse_u64("q", take("q"))?.ok_or_else(|| Error::SpecInvalid("missing q".into()))?;
            let e = parse_u64("e", take("e"))?.ok_or_else(|| Error::SpecInvalid("missing e".into()))?;
            let k = parse_u64("k", take("k"))?.unwrap_or(8);
            ModelSpec::LaurentLocal { q, e: e as u32, k: k as u32 }
        }
        "function-field-semilocal" => {
            let q = parse_u64("q", take("q"))?.ok_or_else(|| Error::SpecInvalid("missing q".into()))?;
            let e = parse_u64("e", take("e"))?.ok_or_else(|| Error::SpecInvalid("missing e".into()))?;
            let places_s =
                take("places").ok_or_else(|| Error::SpecInvalid("missing places".into()))?;
            let places: Vec<u32> = places_s
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| Error::SpecInvalid(format!("bad place label {p}")))
                })
                .collect::<Result<_>>()?;
            ModelSpec::FunctionFieldSemiLocal { q, places, e: e as u32 }
        }
        "rational-congruence" => {
            let m = parse_u64("m", take("m"))?.ok_or_else(|| Error::SpecInvalid("missing m".into()))?;
            let l = parse_u64("l", take("l"))?.ok_or_else(|| Error::SpecInvalid("missing l".into()))?;
            let bound = parse_u64("bound", take("bound"))?.unwrap_or(1_000_000);
            ModelSpec::RationalCongruence { m: m as u32, l, bound }
        }
        "quaternion" => {
            let d = parse_u64("d", take("d"))?.unwrap_or(17) as i64;
            let branch = match take("branch").as_deref() {
                None | Some("plus") | Some("+1") => SqrtBranch::Plus,
                Some("minus") | Some("-1") => SqrtBranch::Minus,
                Some(other) => {
                    return Err(Error::SpecInvalid(format!("bad branch {other}")));
                }
            };
            let p0 = parse_u64("p0", take("p0"))?.unwrap_or(32) as u32;
            let pmax = parse_u64("pmax", take("pmax"))?.unwrap_or(4096) as u32;
            let guard = parse_u64("guard", take("guard"))?.unwrap_or(4) as u32;
            ModelSpec::Quaternion {
                d,
                branch,
                policy: PrecisionPolicy { initial: p0, cap: pmax, guard },
            }
        }
        other => return Err(Error::SpecInvalid(format!("unknown kind {other}"))),
    };
    if let Some(k) = kv.keys().next() {
        return Err(Error::SpecInvalid(format!("unknown key {k}")));
    }
    Ok(ParsedSpec { model, expect })
}

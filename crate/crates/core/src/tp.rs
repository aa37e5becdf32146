//! TP-function storage, relation verification and reconstruction from the
//! standard basis.
//!
//! Reconstruction runs the injectivity recurrence forward: points are
//! processed layer by layer from `m` upward and, inside a layer, by ascending
//! `eta`. On the bottom layer a point that is neither fint nor sint is solved
//! from a TP4 relation on the landmark indices `(gamma, beta, alpha, d)`;
//! on higher layers a non-fint point is solved from a TP3 relation on
//! `(beta, alpha, d)`. The recurrence only adds, subtracts and takes maxima,
//! so integer inputs produce integer outputs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::domain::{
    corteges3, corteges4, landmarks, standard_basis, BoxShape, LatticePoint, TruncatedBox,
};
use crate::error::Error;
use crate::rat::{self, Rat};

/// Which relation a violation refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum RelationKind {
    #[serde(rename = "TP3")]
    Tp3,
    #[serde(rename = "TP4")]
    Tp4,
    /// Used by the property checkers in [`crate::properties`].
    #[serde(rename = "submodular")]
    Submodular,
    #[serde(rename = "skew-submodular")]
    SkewSubmodular,
    #[serde(rename = "DC")]
    DiscreteConcavity,
}

/// One failed relation instance.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub kind: RelationKind,
    pub base: LatticePoint,
    pub indices: Vec<usize>,
    #[serde(with = "rat::serde_rat")]
    pub lhs: Rat,
    #[serde(with = "rat::serde_rat")]
    pub rhs: Rat,
}

/// All failures found by a check; empty iff the property holds.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

/// An exact-rational function given on every point of a truncated box.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValuedFunction {
    bx: TruncatedBox,
    values: BTreeMap<LatticePoint, Rat>,
}

impl ValuedFunction {
    /// The value map must cover the box exactly.
    pub fn new(bx: TruncatedBox, values: BTreeMap<LatticePoint, Rat>) -> Result<Self, Error> {
        let expect: BTreeSet<_> = bx.points().into_iter().collect();
        let got: BTreeSet<_> = values.keys().cloned().collect();
        if expect != got {
            return Err(Error::DomainMismatch(format!(
                "value map has {} keys, box has {} points",
                got.len(),
                expect.len()
            )));
        }
        Ok(ValuedFunction { bx, values })
    }

    pub fn box_(&self) -> &TruncatedBox {
        &self.bx
    }

    pub fn value(&self, x: &LatticePoint) -> &Rat {
        &self.values[x]
    }

    pub fn values(&self) -> &BTreeMap<LatticePoint, Rat> {
        &self.values
    }

    /// Sub-map on an arbitrary point set (each point must lie in the box).
    pub fn restrict_to(
        &self,
        points: &BTreeSet<LatticePoint>,
    ) -> Result<BTreeMap<LatticePoint, Rat>, Error> {
        let mut out = BTreeMap::new();
        for p in points {
            match self.values.get(p) {
                Some(v) => {
                    out.insert(p.clone(), v.clone());
                }
                None => {
                    return Err(Error::DomainMismatch(format!("point {p} outside the box")));
                }
            }
        }
        Ok(out)
    }

    /// Restriction to the standard basis, as a basis assignment.
    pub fn restrict_to_basis(&self) -> BasisAssignment {
        let basis = standard_basis(&self.bx);
        let values = self
            .restrict_to(&basis)
            .expect("standard basis lies in the box");
        BasisAssignment {
            bx: self.bx.clone(),
            values,
        }
    }
}

/// Values on exactly the standard basis of a truncated box.
///
/// When `m = 0` the zero point belongs to the basis; it takes the value 0 by
/// convention and may be omitted from user-supplied maps. (The zero point
/// occurs in no relation, so any fixed value works; pipelines that need a
/// different one use [`BasisAssignment::with_values`].)
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BasisAssignment {
    bx: TruncatedBox,
    values: BTreeMap<LatticePoint, Rat>,
}

impl BasisAssignment {
    /// Builds an assignment from user values; the zero point (when in the
    /// basis) defaults to 0 and must not carry any other value.
    pub fn new(bx: TruncatedBox, mut values: BTreeMap<LatticePoint, Rat>) -> Result<Self, Error> {
        let zero = LatticePoint::zero(bx.n());
        if bx.m() == 0 {
            match values.get(&zero) {
                None => {
                    values.insert(zero, rat::zero());
                }
                Some(v) if v == &rat::zero() => {}
                Some(v) => {
                    return Err(Error::Precondition(format!(
                        "the zero point is fixed at 0 by convention, got {}",
                        rat::to_string(v)
                    )));
                }
            }
        }
        Self::with_values(bx, values)
    }

    /// Builds an assignment from a complete value map (zero point included
    /// when `m = 0`, with an arbitrary value).
    pub fn with_values(
        bx: TruncatedBox,
        values: BTreeMap<LatticePoint, Rat>,
    ) -> Result<Self, Error> {
        let basis = standard_basis(&bx);
        let got: BTreeSet<_> = values.keys().cloned().collect();
        if got != basis {
            return Err(Error::KeySetMismatch(format!(
                "assignment has {} keys, standard basis has {} points",
                got.len(),
                basis.len()
            )));
        }
        Ok(BasisAssignment { bx, values })
    }

    pub fn box_(&self) -> &TruncatedBox {
        &self.bx
    }

    pub fn value(&self, x: &LatticePoint) -> &Rat {
        &self.values[x]
    }

    pub fn values(&self) -> &BTreeMap<LatticePoint, Rat> {
        &self.values
    }
}

/// Checks every feasible TP3 and TP4 relation with exact equality.
pub fn verify(f: &ValuedFunction) -> ViolationReport {
    let mut violations = Vec::new();
    let bx = f.box_();
    for c in corteges3(bx) {
        let [a, b, cc, d, e, ff] = c.points();
        let lhs = f.value(&a) + f.value(&b);
        let rhs = rat::max(f.value(&cc) + f.value(&d), f.value(&e) + f.value(&ff));
        if lhs != rhs {
            violations.push(Violation {
                kind: RelationKind::Tp3,
                base: c.base.clone(),
                indices: vec![c.i, c.j, c.k],
                lhs,
                rhs,
            });
        }
    }
    for c in corteges4(bx) {
        let [a, b, cc, d, e, ff] = c.points();
        let lhs = f.value(&a) + f.value(&b);
        let rhs = rat::max(f.value(&cc) + f.value(&d), f.value(&e) + f.value(&ff));
        if lhs != rhs {
            violations.push(Violation {
                kind: RelationKind::Tp4,
                base: c.base.clone(),
                indices: vec![c.i, c.j, c.k, c.l],
                lhs,
                rhs,
            });
        }
    }
    ViolationReport { violations }
}

/// Reconstructs the unique TP-function restricting to the given basis values.
///
/// The result is re-verified before returning; a failure there cannot be
/// produced by any input and is surfaced as [`Error::TheoremViolation`].
pub fn reconstruct(g: &BasisAssignment) -> Result<ValuedFunction, Error> {
    let bx = g.box_().clone();
    let shape = bx.shape().clone();
    let mut values: BTreeMap<LatticePoint, Rat> = g.values().clone();

    for p in bx.m()..=bx.m_prime() {
        // Collect the unknowns of this layer with their eta weights.
        let mut todo: Vec<(u64, LatticePoint)> = Vec::new();
        for x in bx.layer(p) {
            if values.contains_key(&x) {
                continue;
            }
            let lm = landmarks(&shape, &x)?;
            let eta = lm
                .eta
                .ok_or_else(|| Error::TheoremViolation(format!("unvalued point {x} has no eta")))?;
            todo.push((eta, x));
        }
        todo.sort();

        for (_, x) in todo {
            let lm = landmarks(&shape, &x)?;
            let fetch =
                |pt: &LatticePoint, values: &BTreeMap<LatticePoint, Rat>| -> Result<Rat, Error> {
                    values.get(pt).cloned().ok_or_else(|| {
                        Error::TheoremViolation(format!(
                            "recurrence for {x} needs {pt} before it is valued"
                        ))
                    })
                };
            let val = if p == bx.m() {
                // Bottom layer: x is neither fint nor sint, so gamma..d exist.
                let (i, j, k, l) = match (lm.gamma, lm.beta, lm.alpha, lm.d) {
                    (Some(i), Some(j), Some(k), l) => (i, j, k, l),
                    _ => {
                        return Err(Error::TheoremViolation(format!(
                            "bottom-layer point {x} lacks landmark indices"
                        )))
                    }
                };
                let xp = x.minus(j).minus(l);
                let b = fetch(&xp.plus2(i, k), &values)?;
                let c = fetch(&xp.plus2(i, j), &values)?;
                let d = fetch(&xp.plus2(k, l), &values)?;
                let e = fetch(&xp.plus2(i, l), &values)?;
                let ff = fetch(&xp.plus2(j, k), &values)?;
                rat::max(c + d, e + ff) - b
            } else {
                // Higher layer: x is not a fint, so beta, alpha exist.
                let (i, j, k) = match (lm.beta, lm.alpha, lm.d) {
                    (Some(i), Some(j), k) => (i, j, k),
                    _ => {
                        return Err(Error::TheoremViolation(format!(
                            "non-fint point {x} lacks landmark indices"
                        )))
                    }
                };
                let xp = x.minus(i).minus(k);
                let b = fetch(&xp.plus(j), &values)?;
                let c = fetch(&xp.plus2(i, j), &values)?;
                let d = fetch(&xp.plus(k), &values)?;
                let e = fetch(&xp.plus2(j, k), &values)?;
                let ff = fetch(&xp.plus(i), &values)?;
                rat::max(c + d, ff + e) - b
            };
            values.insert(x, val);
        }
    }

    let f = ValuedFunction::new(bx, values)
        .map_err(|e| Error::TheoremViolation(format!("incomplete reconstruction: {e}")))?;
    let report = verify(&f);
    if !report.is_empty() {
        return Err(Error::TheoremViolation(format!(
            "reconstructed function violates {} relation(s)",
            report.len()
        )));
    }
    Ok(f)
}

/// The quasi-separable function `f(x) = phi_1(x_1) + ... + phi_n(x_n) + phi_0(|x|)`.
///
/// `phi` holds the tables of `phi_1..phi_n` (`phi[i-1]` has length `a_i + 1`);
/// `phi0` is indexed by `|x| - m` and has length `m' - m + 1`. Every
/// quasi-separable function is a TP-function.
pub fn quasi_separable(
    shape: &BoxShape,
    m: u32,
    m_prime: u32,
    phi0: &[Rat],
    phi: &[Vec<Rat>],
) -> Result<ValuedFunction, Error> {
    let bx = TruncatedBox::new(shape.clone(), m, m_prime)?;
    if phi.len() != shape.n() {
        return Err(Error::DomainMismatch(format!(
            "expected {} coordinate tables, got {}",
            shape.n(),
            phi.len()
        )));
    }
    for (t, tab) in phi.iter().enumerate() {
        if tab.len() != shape.cap(t + 1) as usize + 1 {
            return Err(Error::DomainMismatch(format!(
                "phi_{} must be defined on 0..={}",
                t + 1,
                shape.cap(t + 1)
            )));
        }
    }
    if phi0.len() != (m_prime - m) as usize + 1 {
        return Err(Error::DomainMismatch(format!(
            "phi_0 must be defined on {m}..={m_prime}"
        )));
    }
    let mut values = BTreeMap::new();
    for x in bx.points() {
        let mut v = phi0[(x.size() - m) as usize].clone();
        for i in 1..=shape.n() {
            v += phi[i - 1][x.coord(i) as usize].clone();
        }
        values.insert(x, v);
    }
    ValuedFunction::new(bx, values)
}

/// The complementary function `f*(x) = f(a - x)` on `B_{|a|-m'}^{|a|-m}(a)`.
pub fn complementary(f: &ValuedFunction) -> ValuedFunction {
    let bx = f.box_();
    let shape = bx.shape().clone();
    let total = shape.total();
    let cbx = TruncatedBox::new(shape.clone(), total - bx.m_prime(), total - bx.m())
        .expect("complement bounds are valid");
    let mut values = BTreeMap::new();
    for x in cbx.points() {
        values.insert(x.clone(), f.value(&shape.complement(&x)).clone());
    }
    ValuedFunction::new(cbx, values).expect("complement covers its box")
}

/// JSON form shared by functions and basis assignments:
/// `{"box": {"a": [...], "m": .., "m_prime": ..}, "values": [{"point": [...],
/// "value": "p/q"}]}`.
#[derive(Serialize, Deserialize)]
pub struct FunctionJson {
    #[serde(rename = "box")]
    pub bx: TruncatedBox,
    pub values: Vec<PointValueJson>,
}

#[derive(Serialize, Deserialize)]
pub struct PointValueJson {
    pub point: LatticePoint,
    pub value: String,
}

fn values_to_json(values: &BTreeMap<LatticePoint, Rat>) -> Vec<PointValueJson> {
    values
        .iter()
        .map(|(p, v)| PointValueJson {
            point: p.clone(),
            value: rat::to_string(v),
        })
        .collect()
}

fn values_from_json(list: &[PointValueJson]) -> Result<BTreeMap<LatticePoint, Rat>, Error> {
    let mut out = BTreeMap::new();
    for pv in list {
        if out
            .insert(pv.point.clone(), rat::parse(&pv.value)?)
            .is_some()
        {
            return Err(Error::Parse(format!("duplicate point {}", pv.point)));
        }
    }
    Ok(out)
}

impl ValuedFunction {
    pub fn to_json(&self) -> FunctionJson {
        FunctionJson {
            bx: self.bx.clone(),
            values: values_to_json(&self.values),
        }
    }

    pub fn from_json(j: &FunctionJson) -> Result<Self, Error> {
        ValuedFunction::new(j.bx.clone(), values_from_json(&j.values)?)
    }
}

impl BasisAssignment {
    pub fn to_json(&self) -> FunctionJson {
        FunctionJson {
            bx: self.bx.clone(),
            values: values_to_json(&self.values),
        }
    }

    /// Reads user-supplied basis values (zero point optional when `m = 0`).
    pub fn from_json(j: &FunctionJson) -> Result<Self, Error> {
        BasisAssignment::new(j.bx.clone(), values_from_json(&j.values)?)
    }
}

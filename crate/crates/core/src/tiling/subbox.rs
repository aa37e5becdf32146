//! Extending a TP-function from a shifted sub-box `B(a'| a'')` to the box.
//!
//! The sub-zonogon boundary points extend to a tiling of the whole zonogon;
//! the rhombi inside the sub-zonogon are then replaced by the sub-box's
//! standard tiling (no rhombus may straddle the boundary — asserted), the
//! original values go on the sub-basis vertices and 0 everywhere else, and
//! the whole thing is transported to the standard basis and reconstructed.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    assignment_from_standard_values, extend_points_to_tiling, minimize_to_standard,
    standard_tiling, transport_values, validate, Geom, Rhombus, Tiling,
};
use crate::domain::{BoxShape, LatticePoint, TruncatedBox};
use crate::error::Error;
use crate::rat::{self, Rat};
use crate::tp::{reconstruct, verify, ValuedFunction};

/// A shifted sub-box `{x : lo <= x <= hi}` with its value map in the ambient
/// coordinates. Flat directions (`lo_i = hi_i`) are allowed.
pub struct SubBoxFunction {
    pub lo: LatticePoint,
    pub hi: LatticePoint,
    pub values: BTreeMap<LatticePoint, Rat>,
}

impl SubBoxFunction {
    fn widths(&self) -> Vec<u32> {
        self.lo
            .coords()
            .iter()
            .zip(self.hi.coords())
            .map(|(&l, &h)| h - l)
            .collect()
    }

    fn points(&self) -> Vec<LatticePoint> {
        let widths = self.widths();
        let mut out = vec![self.lo.clone()];
        for (t, &w) in widths.iter().enumerate() {
            let mut next = Vec::new();
            for p in &out {
                for v in 0..=w {
                    let mut c = p.coords().to_vec();
                    c[t] = self.lo.coords()[t] + v;
                    next.push(LatticePoint::new(c));
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// Collapses the flat directions, giving a function on an honest box in
    /// local coordinates, together with the kept 1-based colors.
    fn reduced(&self) -> Result<Option<(BoxShape, ValuedFunction, Vec<usize>)>, Error> {
        let widths = self.widths();
        let kept: Vec<usize> = (1..=widths.len()).filter(|&i| widths[i - 1] > 0).collect();
        if kept.is_empty() {
            return Ok(None);
        }
        let shape = BoxShape::new(kept.iter().map(|&i| widths[i - 1]).collect())?;
        let bx = TruncatedBox::entire(shape.clone());
        let mut values = BTreeMap::new();
        for (p, v) in &self.values {
            let local = LatticePoint::new(
                kept.iter()
                    .map(|&i| p.coord(i) - self.lo.coord(i))
                    .collect(),
            );
            values.insert(local, v.clone());
        }
        let f = ValuedFunction::new(bx, values)?;
        Ok(Some((shape, f, kept)))
    }

    fn inflate(&self, kept: &[usize], local: &LatticePoint) -> LatticePoint {
        let mut coords = self.lo.coords().to_vec();
        for (t, &i) in kept.iter().enumerate() {
            coords[i - 1] += local.coords()[t];
        }
        LatticePoint::new(coords)
    }
}

/// Boundary points of the zonogon `Z(ã)` in local coordinates: prefixes on
/// the left, suffixes on the right.
fn zonogon_boundary_points(shape: &BoxShape) -> BTreeSet<LatticePoint> {
    let n = shape.n();
    let mut out = BTreeSet::new();
    for i in 1..=n {
        for t in 0..=shape.cap(i) {
            out.insert(LatticePoint::new(
                (1..=n)
                    .map(|c| {
                        if c < i {
                            shape.cap(c)
                        } else if c == i {
                            t
                        } else {
                            0
                        }
                    })
                    .collect(),
            ));
            out.insert(LatticePoint::new(
                (1..=n)
                    .map(|c| {
                        if c > i {
                            shape.cap(c)
                        } else if c == i {
                            t
                        } else {
                            0
                        }
                    })
                    .collect(),
            ));
        }
    }
    out
}

/// Point-in-convex-polygon on doubled coordinates; the polygon is given
/// counterclockwise... orientation is detected, only strict insideness is
/// reported.
fn strictly_inside(poly2: &[(i128, i128)], p2: (i128, i128)) -> bool {
    let mut sign = 0i128;
    let m = poly2.len();
    for t in 0..m {
        let a = poly2[t];
        let b = poly2[(t + 1) % m];
        let d = (b.0 - a.0, b.1 - a.1);
        let o = (p2.0 - a.0, p2.1 - a.1);
        let cross = d.0 * o.1 - d.1 * o.0;
        if cross == 0 {
            return false;
        }
        let s = cross.signum();
        if sign == 0 {
            sign = s;
        } else if s != sign {
            return false;
        }
    }
    true
}

fn inside_or_boundary(poly2: &[(i128, i128)], p2: (i128, i128)) -> bool {
    let mut sign = 0i128;
    let m = poly2.len();
    for t in 0..m {
        let a = poly2[t];
        let b = poly2[(t + 1) % m];
        let d = (b.0 - a.0, b.1 - a.1);
        let o = (p2.0 - a.0, p2.1 - a.1);
        let cross = d.0 * o.1 - d.1 * o.0;
        if cross == 0 {
            // on the supporting line: must be within the segment's box
            let within = p2.0 >= a.0.min(b.0)
                && p2.0 <= a.0.max(b.0)
                && p2.1 >= a.1.min(b.1)
                && p2.1 <= a.1.max(b.1);
            if within {
                return true;
            }
            continue;
        }
        let s = cross.signum();
        if sign == 0 {
            sign = s;
        } else if s != sign {
            return false;
        }
    }
    true
}

/// The boundary cycle of the sub-zonogon `lo + Z(ã)` in ambient doubled
/// coordinates: left boundary up, then right boundary back down.
fn subzonogon_polygon(
    geom: &Geom,
    sub: &SubBoxFunction,
    kept: &[usize],
    reduced_shape: &BoxShape,
) -> Vec<(i128, i128)> {
    let nr = reduced_shape.n();
    let mut cycle: Vec<LatticePoint> = Vec::new();
    // left boundary: grow colors 1..nr in order
    for i in 1..=nr {
        for t in 0..reduced_shape.cap(i) {
            cycle.push(LatticePoint::new(
                (1..=nr)
                    .map(|c| {
                        if c < i {
                            reduced_shape.cap(c)
                        } else if c == i {
                            t
                        } else {
                            0
                        }
                    })
                    .collect(),
            ));
        }
    }
    // right boundary: shrink colors 1..nr in order, from the top
    for i in 1..=nr {
        for t in (1..=reduced_shape.cap(i)).rev() {
            cycle.push(LatticePoint::new(
                (1..=nr)
                    .map(|c| {
                        if c > i {
                            reduced_shape.cap(c)
                        } else if c == i {
                            t
                        } else {
                            0
                        }
                    })
                    .collect(),
            ));
        }
    }
    cycle
        .into_iter()
        .map(|local| {
            let (x, y) = geom.pos(&sub.inflate(kept, &local));
            (2 * x, 2 * y)
        })
        .collect()
}

/// Extends a TP-function on a sub-box into a TP-function on `B(a)` agreeing
/// with it there.
pub fn extend_function_from_subbox(
    shape: &BoxShape,
    sub: &SubBoxFunction,
) -> Result<ValuedFunction, Error> {
    let n = shape.n();
    if sub.lo.dim() != n || sub.hi.dim() != n || !sub.lo.le(&sub.hi) || !shape.contains(&sub.hi) {
        return Err(Error::Precondition(
            "need lo <= hi componentwise inside the box".into(),
        ));
    }
    let expect: BTreeSet<_> = sub.points().into_iter().collect();
    let got: BTreeSet<_> = sub.values.keys().cloned().collect();
    if expect != got {
        return Err(Error::KeySetMismatch(
            "values must cover exactly the sub-box".into(),
        ));
    }

    let reduced = sub.reduced()?;
    let Some((reduced_shape, sub_fn, kept)) = reduced else {
        // single point: any TP extension works; pin its value via a separable shift
        let bx = TruncatedBox::entire(shape.clone());
        let v0 = sub
            .values
            .values()
            .next()
            .cloned()
            .unwrap_or_else(rat::zero);
        let values: BTreeMap<_, _> = bx.points().into_iter().map(|x| (x, v0.clone())).collect();
        return ValuedFunction::new(bx, values);
    };
    let report = verify(&sub_fn);
    if !report.is_empty() {
        return Err(Error::NotTp(report.len()));
    }

    // whole box: nothing to splice
    if sub.lo == LatticePoint::zero(n) && sub.hi.coords() == shape.capacities() {
        let bx = TruncatedBox::entire(shape.clone());
        return ValuedFunction::new(bx, sub.values.clone());
    }

    // 1. extend the sub-zonogon boundary to a tiling of Z(a)
    let boundary: BTreeSet<LatticePoint> = zonogon_boundary_points(&reduced_shape)
        .into_iter()
        .map(|local| sub.inflate(&kept, &local))
        .collect();
    let host = extend_points_to_tiling(shape, &boundary).map_err(|w| {
        Error::TheoremViolation(format!(
            "sub-zonogon boundary points are never obstructed: {w}"
        ))
    })?;

    // 2. splice: swap the rhombi inside the sub-zonogon for the standard
    // sub-tiling, asserting that none straddles the boundary
    let geom = Geom::new(shape);
    let poly2 = subzonogon_polygon(&geom, sub, &kept, &reduced_shape);
    let mut rhombi: BTreeSet<Rhombus> = BTreeSet::new();
    let mut inside_count = 0u64;
    for r in host.rhombi() {
        let (ax, ay) = geom.pos(&r.anchor);
        let ei = geom.xi(r.i);
        let ej = geom.xi(r.j);
        let center2 = (2 * ax + ei.0 + ej.0, 2 * ay + ei.1 + ej.1);
        let center_in = strictly_inside(&poly2, center2);
        let corners_in = r.corners().iter().all(|c| {
            let (x, y) = geom.pos(c);
            inside_or_boundary(&poly2, (2 * x, 2 * y))
        });
        if center_in != corners_in {
            return Err(Error::TheoremViolation(format!(
                "rhombus {r:?} straddles the sub-zonogon boundary"
            )));
        }
        if !center_in {
            rhombi.insert(r.clone());
        } else {
            inside_count += 1;
        }
    }
    let nr = reduced_shape.n();
    let expect_inside: u64 = (1..=nr)
        .flat_map(|i| (i + 1..=nr).map(move |j| (i, j)))
        .map(|(i, j)| u64::from(reduced_shape.cap(i)) * u64::from(reduced_shape.cap(j)))
        .sum();
    if inside_count != expect_inside {
        return Err(Error::TheoremViolation(
            "sub-zonogon interior is not exactly tiled".into(),
        ));
    }
    for r in standard_tiling(&reduced_shape).rhombi() {
        rhombi.insert(Rhombus {
            anchor: sub.inflate(&kept, &r.anchor),
            i: kept[r.i - 1],
            j: kept[r.j - 1],
        });
    }
    if !validate(shape, &rhombi) {
        return Err(Error::TheoremViolation("splice broke the tiling".into()));
    }
    let spliced = Tiling::new_unchecked(shape.clone(), rhombi);

    // 3. values on the spliced diagram's vertices: f' on the sub-basis, 0 off
    let sub_basis: BTreeSet<LatticePoint> = standard_tiling(&reduced_shape)
        .vertices()
        .into_iter()
        .map(|local| sub.inflate(&kept, &local))
        .collect();
    let mut values = BTreeMap::new();
    for v in spliced.vertices() {
        let val = if sub_basis.contains(&v) {
            sub.values[&v].clone()
        } else {
            rat::zero()
        };
        values.insert(v, val);
    }

    // 4. transport to the standard basis and reconstruct
    let flips = minimize_to_standard(&spliced)?;
    let transported = transport_values(&spliced, &values, &flips)?;
    let assignment = assignment_from_standard_values(shape, &transported)?;
    let f = reconstruct(&assignment)?;
    for (p, v) in &sub.values {
        if f.value(p) != v {
            return Err(Error::TheoremViolation(format!(
                "sub-box extension changed the value at {p}"
            )));
        }
    }
    Ok(f)
}

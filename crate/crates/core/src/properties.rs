//! Submodularity, skew-submodularity and discrete-concavity checkers.
//!
//! All three are exact `>=` comparisons over quadruples of box points:
//!
//! * submodular:       `f(x+1i) + f(x+1j)    >= f(x)      + f(x+1i+1j)`
//! * skew-submodular:  `f(x+1i+1j) + f(x+1j) >= f(x+1i)   + f(x+2·1j)`
//! * DC (unified):     `f(x+1i+1j) + f(x+1j+1k) >= f(x+2·1j) + f(x+1i+1k)`
//!   with `i, j, k ∈ {0} ∪ [n]` and `1_0` the zero vector.
//!
//! A scope restricts which quadruples count: all of the function's domain, or
//! only those with every point inside a given set (a basis). For TP-functions
//! these properties propagate from the standard basis to the whole box, which
//! the test suites exercise as oracles.

use std::collections::BTreeSet;

use crate::domain::LatticePoint;
use crate::rat::Rat;
use crate::tp::{RelationKind, ValuedFunction, Violation, ViolationReport};

/// Which quadruples a property check ranges over.
#[derive(Clone, Copy, Debug)]
pub enum Scope<'a> {
    /// Every quadruple lying inside the function's (truncated) box.
    Domain,
    /// Only quadruples whose points all belong to the given set.
    OnPoints(&'a BTreeSet<LatticePoint>),
}

impl Scope<'_> {
    fn admits(&self, f: &ValuedFunction, points: &[&LatticePoint]) -> bool {
        match self {
            Scope::Domain => points.iter().all(|p| f.box_().contains(p)),
            Scope::OnPoints(set) => points.iter().all(|p| set.contains(p)),
        }
    }
}

/// `x + 1_i` with the convention `1_0 = 0`.
fn bump(x: &LatticePoint, i: usize) -> LatticePoint {
    if i == 0 {
        x.clone()
    } else {
        x.plus(i)
    }
}

fn in_shape(f: &ValuedFunction, x: &LatticePoint) -> bool {
    f.box_().shape().contains(x)
}

/// Checks the submodular inequality over all in-scope `(x, i < j)`.
pub fn check_submodular(f: &ValuedFunction, scope: Scope) -> ViolationReport {
    let n = f.box_().n();
    let mut violations = Vec::new();
    for x in f.box_().shape().points() {
        for i in 1..=n {
            for j in i + 1..=n {
                if !in_shape(f, &x.plus2(i, j)) {
                    continue;
                }
                let (a, b) = (x.plus(i), x.plus(j));
                let d = x.plus2(i, j);
                if !scope.admits(f, &[&x, &a, &b, &d]) {
                    continue;
                }
                let lhs = f.value(&a) + f.value(&b);
                let rhs = f.value(&x) + f.value(&d);
                if lhs < rhs {
                    violations.push(Violation {
                        kind: RelationKind::Submodular,
                        base: x.clone(),
                        indices: vec![i, j],
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    ViolationReport { violations }
}

/// Checks the skew-submodular inequality over all in-scope `(x, i ≠ j)`,
/// both index orders.
pub fn check_skew_submodular(f: &ValuedFunction, scope: Scope) -> ViolationReport {
    let n = f.box_().n();
    let mut violations = Vec::new();
    for x in f.box_().shape().points() {
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                let top = x.plus2(i, j).plus(j); // x + 1i + 2·1j dominates all four
                if !in_shape(f, &top) {
                    continue;
                }
                let ij = x.plus2(i, j);
                let jj = x.plus(j);
                let ii = x.plus(i);
                let j2 = x.plus(j).plus(j);
                if !scope.admits(f, &[&ij, &jj, &ii, &j2]) {
                    continue;
                }
                let lhs = f.value(&ij) + f.value(&jj);
                let rhs = f.value(&ii) + f.value(&j2);
                if lhs < rhs {
                    violations.push(Violation {
                        kind: RelationKind::SkewSubmodular,
                        base: x.clone(),
                        indices: vec![i, j],
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    ViolationReport { violations }
}

/// Checks the unified discrete-concavity inequality over all in-scope
/// `(x, i, j, k)` with indices in `{0} ∪ [n]`, unordered, repeats allowed.
pub fn check_dctp(f: &ValuedFunction, scope: Scope) -> ViolationReport {
    let n = f.box_().n();
    let mut violations = Vec::new();
    for x in f.box_().shape().points() {
        for i in 0..=n {
            for j in 0..=n {
                for k in 0..=n {
                    let p1 = bump(&bump(&x, i), j);
                    let p2 = bump(&bump(&x, j), k);
                    let q1 = bump(&bump(&x, j), j);
                    let q2 = bump(&bump(&x, i), k);
                    if ![&p1, &p2, &q1, &q2].iter().all(|p| in_shape(f, p)) {
                        continue;
                    }
                    if !scope.admits(f, &[&p1, &p2, &q1, &q2]) {
                        continue;
                    }
                    let lhs = f.value(&p1) + f.value(&p2);
                    let rhs = f.value(&q1) + f.value(&q2);
                    if lhs < rhs {
                        violations.push(Violation {
                            kind: RelationKind::DiscreteConcavity,
                            base: x.clone(),
                            indices: vec![i, j, k],
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
    }
    ViolationReport { violations }
}

/// Checks supermodularity (the reversed submodular inequality) by negating.
pub fn check_supermodular(f: &ValuedFunction, scope: Scope) -> ViolationReport {
    let neg = ValuedFunction::new(
        f.box_().clone(),
        f.values().iter().map(|(k, v)| (k.clone(), -v)).collect(),
    )
    .expect("same domain");
    let mut report = check_submodular(&neg, scope);
    for v in &mut report.violations {
        v.lhs = -std::mem::take(&mut v.lhs);
        v.rhs = -std::mem::take(&mut v.rhs);
    }
    report
}

/// Rejection sampling of TP-functions that are submodular and/or
/// skew-submodular on the standard basis: draw random basis values, repair
/// violating basis quadruples by lowering the dominant point, reconstruct,
/// then re-check with the actual checkers and discard non-conforming samples.
/// The checkers never assume the repair loop converged.
pub fn sample_tp_with(
    bx: &crate::domain::TruncatedBox,
    rng: &mut rand::rngs::SmallRng,
    want_submodular: bool,
    want_skew: bool,
) -> Option<ValuedFunction> {
    use crate::domain::standard_basis;
    use crate::rat;
    use crate::tp::{reconstruct, BasisAssignment};
    use rand::Rng;
    use std::collections::BTreeMap;

    let basis = standard_basis(bx);
    let mut values: BTreeMap<LatticePoint, Rat> = basis
        .iter()
        .map(|b| {
            let v = if b.is_zero() {
                0
            } else {
                rng.random_range(-6..=6)
            };
            (b.clone(), rat::int(v))
        })
        .collect();
    for _ in 0..200 {
        let mut changed = false;
        let shape = bx.shape();
        let n = bx.n();
        for x in shape.points() {
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    if want_submodular && i < j && shape.contains(&x.plus2(i, j)) {
                        let quad = [x.clone(), x.plus(i), x.plus(j), x.plus2(i, j)];
                        if quad.iter().all(|p| values.contains_key(p)) {
                            let lhs = &values[&quad[1]] + &values[&quad[2]];
                            let rhs = &values[&quad[0]] + &values[&quad[3]];
                            if lhs < rhs {
                                let fix = lhs - values[&quad[0]].clone();
                                values.insert(quad[3].clone(), fix);
                                changed = true;
                            }
                        }
                    }
                    if want_skew && shape.contains(&x.plus2(i, j).plus(j)) {
                        let quad = [x.plus2(i, j), x.plus(j), x.plus(i), x.plus(j).plus(j)];
                        if quad.iter().all(|p| values.contains_key(p)) {
                            let lhs = &values[&quad[0]] + &values[&quad[1]];
                            let rhs = &values[&quad[2]] + &values[&quad[3]];
                            if lhs < rhs {
                                let fix = lhs - values[&quad[2]].clone();
                                values.insert(quad[3].clone(), fix);
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let g = BasisAssignment::with_values(bx.clone(), values).ok()?;
    let f = reconstruct(&g).ok()?;
    let basis_scope = Scope::OnPoints(&basis);
    if want_submodular && !check_submodular(&f, basis_scope).is_empty() {
        return None;
    }
    if want_skew && !check_skew_submodular(&f, basis_scope).is_empty() {
        return None;
    }
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::sample_tp_with;
    use super::*;
    use crate::domain::{standard_basis, BoxShape, TruncatedBox};
    use crate::oracle::shapes_up_to;
    use crate::rat::int;
    use crate::tiling::{basis_of, enumerate_tilings};
    use crate::tp::ValuedFunction;
    use rand::rngs::SmallRng;
    use rand::SeedableRng;
    use std::collections::BTreeMap;

    fn pt(coords: &[u32]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    fn modular_fn(shape: &BoxShape, coeffs: &[i64]) -> ValuedFunction {
        let bx = TruncatedBox::entire(shape.clone());
        let values: BTreeMap<_, _> = bx
            .points()
            .into_iter()
            .map(|x| {
                let v: i64 = (1..=shape.n())
                    .map(|i| coeffs[i - 1] * i64::from(x.coord(i)))
                    .sum();
                (x, int(v))
            })
            .collect();
        ValuedFunction::new(bx, values).unwrap()
    }

    #[test]
    fn modular_functions_are_exactly_submodular() {
        let sh = BoxShape::new(vec![2, 1, 2]).unwrap();
        let f = modular_fn(&sh, &[3, -1, 2]);
        assert!(check_submodular(&f, Scope::Domain).is_empty());
        // and supermodular too (equality throughout)
        assert!(check_supermodular(&f, Scope::Domain).is_empty());
    }

    #[test]
    fn separable_concave_is_skew_submodular() {
        // f(x) = sum of concave phi_i(x_i)
        let sh = BoxShape::new(vec![2, 2]).unwrap();
        let bx = TruncatedBox::entire(sh.clone());
        let phi = |v: u32| {
            int(match v {
                0 => 0,
                1 => 3,
                _ => 5,
            })
        };
        let values: BTreeMap<_, _> = bx
            .points()
            .into_iter()
            .map(|x| {
                let v = phi(x.coord(1)) + phi(x.coord(2));
                (x, v)
            })
            .collect();
        let f = ValuedFunction::new(bx, values).unwrap();
        assert!(check_skew_submodular(&f, Scope::Domain).is_empty());

        // on a 0/1 cube the skew check is vacuous
        let cube = TruncatedBox::cube(3, 0, 3).unwrap();
        let g = ValuedFunction::new(
            cube.clone(),
            cube.points().into_iter().map(|x| (x, int(7))).collect(),
        )
        .unwrap();
        assert!(check_skew_submodular(&g, Scope::Domain).is_empty());
    }

    #[test]
    fn fixture_supermodularity_fails_exactly_at_13_23() {
        // the fixture is supermodular on the standard basis but not globally;
        // the unique global failure is the pair (13, 23)
        let f = crate::tp::tests::supermodular_fixture();
        let basis = standard_basis(f.box_());
        assert!(check_supermodular(&f, Scope::OnPoints(&basis)).is_empty());
        let report = check_supermodular(&f, Scope::Domain);
        assert_eq!(report.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.base, pt(&[0, 0, 1]));
        assert_eq!(v.indices, vec![1, 2]);
    }

    #[test]
    fn exploratory_modular_propagation() {
        // Exploratory (not an acceptance gate): TP-functions that are
        // modular on the standard basis appear to be modular globally.
        // Samples come from an equality-repair loop plus rejection.
        use crate::tp::{reconstruct, BasisAssignment};
        use rand::Rng;
        let mut rng = SmallRng::seed_from_u64(83);
        for a in [vec![1u32, 1, 1], vec![1, 2, 1], vec![2, 2], vec![2, 1, 1]] {
            let sh = BoxShape::new(a.clone()).unwrap();
            let bx = TruncatedBox::entire(sh.clone());
            let basis = standard_basis(&bx);
            let mut found = 0;
            let mut tries = 0;
            while found < 10 && tries < 200 {
                tries += 1;
                let mut values: BTreeMap<LatticePoint, crate::rat::Rat> = basis
                    .iter()
                    .map(|b| {
                        let v = if b.is_zero() {
                            0
                        } else {
                            rng.random_range(-6..=6)
                        };
                        (b.clone(), int(v))
                    })
                    .collect();
                // force equality on every basis submodular quadruple
                for _ in 0..50 {
                    let mut changed = false;
                    for x in sh.points() {
                        for i in 1..=sh.n() {
                            for j in i + 1..=sh.n() {
                                if !sh.contains(&x.plus2(i, j)) {
                                    continue;
                                }
                                let quad = [x.clone(), x.plus(i), x.plus(j), x.plus2(i, j)];
                                if !quad.iter().all(|p| values.contains_key(p)) {
                                    continue;
                                }
                                let want = &values[&quad[1]] + &values[&quad[2]]
                                    - values[&quad[0]].clone();
                                if values[&quad[3]] != want {
                                    values.insert(quad[3].clone(), want);
                                    changed = true;
                                }
                            }
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                let Ok(g) = BasisAssignment::with_values(bx.clone(), values) else {
                    continue;
                };
                let Ok(f) = reconstruct(&g) else { continue };
                let scope = Scope::OnPoints(&basis);
                if !check_submodular(&f, scope).is_empty()
                    || !check_supermodular(&f, scope).is_empty()
                {
                    continue;
                }
                found += 1;
                assert!(check_submodular(&f, Scope::Domain).is_empty(), "{a:?}");
                assert!(check_supermodular(&f, Scope::Domain).is_empty(), "{a:?}");
            }
            assert!(found >= 5, "modular sampler starved on {a:?}");
        }
    }

    #[test]
    fn submodularity_propagates_from_the_basis() {
        // basis-submodular TP-functions are submodular on every normal basis
        // and globally (three-level agreement)
        let mut rng = SmallRng::seed_from_u64(61);
        for sh in shapes_up_to(3, 6) {
            if sh.capacities().iter().any(|&c| c > 2) || sh.n() < 2 {
                continue;
            }
            let bx = TruncatedBox::entire(sh.clone());
            let mut found = 0;
            while found < 10 {
                let Some(f) = sample_tp_with(&bx, &mut rng, true, false) else {
                    continue;
                };
                found += 1;
                assert!(
                    check_submodular(&f, Scope::Domain).is_empty(),
                    "global submodularity failed for {sh:?}"
                );
                for t in enumerate_tilings(&sh).unwrap() {
                    let b = basis_of(&t).unwrap();
                    assert!(check_submodular(&f, Scope::OnPoints(&b)).is_empty());
                }
            }
        }
    }

    #[test]
    fn skew_propagates_and_slope_holds() {
        let mut rng = SmallRng::seed_from_u64(67);
        for a in [vec![1u32, 2, 1], vec![2, 2], vec![2, 1, 2]] {
            let sh = BoxShape::new(a.clone()).unwrap();
            let bx = TruncatedBox::entire(sh.clone());
            let mut found = 0;
            while found < 10 {
                let Some(f) = sample_tp_with(&bx, &mut rng, false, true) else {
                    continue;
                };
                found += 1;
                assert!(check_skew_submodular(&f, Scope::Domain).is_empty(), "{a:?}");
                // slope inequality: f(x+1i+1j) + f(x+1j+1k) >= f(x+1i+1k) + f(x+2·1j)
                let n = sh.n();
                for x in sh.points() {
                    for i in 1..=n {
                        for j in 1..=n {
                            for k in 1..=n {
                                if i == j || j == k || i == k {
                                    continue;
                                }
                                let pts = [
                                    x.plus2(i, j),
                                    x.plus2(j, k),
                                    x.plus2(i, k),
                                    x.plus(j).plus(j),
                                ];
                                if !pts.iter().all(|p| sh.contains(p)) {
                                    continue;
                                }
                                let lhs = f.value(&pts[0]) + f.value(&pts[1]);
                                let rhs = f.value(&pts[2]) + f.value(&pts[3]);
                                assert!(lhs >= rhs, "{a:?} slope at {x} ({i},{j},{k})");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dctp_iff_submodular_and_skew() {
        let mut rng = SmallRng::seed_from_u64(71);
        for a in [vec![2u32, 2], vec![1, 2, 1], vec![2, 1, 1]] {
            let sh = BoxShape::new(a.clone()).unwrap();
            let bx = TruncatedBox::entire(sh.clone());
            let mut tried = 0;
            let mut found = 0;
            while found < 20 && tried < 400 {
                tried += 1;
                let Some(f) = sample_tp_with(&bx, &mut rng, tried % 2 == 0, tried % 3 != 0) else {
                    continue;
                };
                found += 1;
                let dc = check_dctp(&f, Scope::Domain).is_empty();
                let sub = check_submodular(&f, Scope::Domain).is_empty();
                let skew = check_skew_submodular(&f, Scope::Domain).is_empty();
                assert_eq!(dc, sub && skew, "{a:?}");
            }
            assert!(found >= 10, "sampling starved on {a:?}");
        }
    }

    #[test]
    fn truncated_box_variant() {
        // on B_0^{m'}(a): submodular + skew on the standard basis implies
        // DCTP on the whole truncated domain
        let mut rng = SmallRng::seed_from_u64(73);
        for (a, mp) in [
            (vec![2u32, 2], 3u32),
            (vec![1, 2, 1], 2),
            (vec![2, 1, 1], 3),
        ] {
            let sh = BoxShape::new(a.clone()).unwrap();
            let bx = TruncatedBox::new(sh.clone(), 0, mp).unwrap();
            let mut found = 0;
            while found < 10 {
                let Some(f) = sample_tp_with(&bx, &mut rng, true, true) else {
                    continue;
                };
                found += 1;
                assert!(check_dctp(&f, Scope::Domain).is_empty(), "{a:?} m'={mp}");
            }
        }
    }

    #[test]
    fn simplex_corollary_n3_m2() {
        // the slice B_2^2((2,2,2)) projects along the first coordinate onto
        // B_0^2((2,2)); slice-basis submodularity + skewness make the
        // projection a DCTP-function
        let mut rng = SmallRng::seed_from_u64(79);
        let sh = BoxShape::new(vec![2, 2, 2]).unwrap();
        let slice = TruncatedBox::new(sh.clone(), 2, 2).unwrap();
        let proj_shape = BoxShape::new(vec![2, 2]).unwrap();
        let proj_bx = TruncatedBox::new(proj_shape.clone(), 0, 2).unwrap();

        // the slice basis projects onto the standard basis of the projection
        let basis = standard_basis(&slice);
        let projected: std::collections::BTreeSet<LatticePoint> = basis
            .iter()
            .map(|x| pt(&[x.coord(2), x.coord(3)]))
            .collect();
        let expect: std::collections::BTreeSet<LatticePoint> =
            standard_basis(&proj_bx).into_iter().collect();
        assert_eq!(projected, expect);

        let mut found = 0;
        while found < 10 {
            // sample a TP-function on the slice whose projected basis values
            // are submodular and skew-submodular
            let Some(f) = sample_slice_projected(&slice, &proj_bx, &mut rng) else {
                continue;
            };
            found += 1;
            assert!(check_dctp(&f, Scope::Domain).is_empty());
        }
    }

    /// Samples a TP f on the n=3, m=2 slice, projects along the first
    /// coordinate, keeps it only when the projection is basis-submodular and
    /// basis-skew, and returns the projection on `B_0^2((2,2))`.
    fn sample_slice_projected(
        slice: &TruncatedBox,
        proj_bx: &TruncatedBox,
        rng: &mut SmallRng,
    ) -> Option<ValuedFunction> {
        let f = sample_tp_with(slice, rng, false, false)?;
        let values: BTreeMap<LatticePoint, crate::rat::Rat> = proj_bx
            .points()
            .into_iter()
            .map(|y| {
                let x = pt(&[2 - y.size(), y.coord(1), y.coord(2)]);
                (y, f.value(&x).clone())
            })
            .collect();
        let g = ValuedFunction::new(proj_bx.clone(), values).ok()?;
        // the projection of a slice TP-function is TP on the truncated box
        assert!(crate::tp::verify(&g).is_empty());
        let basis = standard_basis(proj_bx);
        let scope = Scope::OnPoints(&basis);
        if !check_submodular(&g, scope).is_empty() || !check_skew_submodular(&g, scope).is_empty() {
            return None;
        }
        Some(g)
    }
}

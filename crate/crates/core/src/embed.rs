//! Reduction of general boxes to Boolean cubes.
//!
//! `[N]` with `N = |a|` splits into blocks `L_i = [ā_{i-1}+1 .. ā_i]`. The
//! embedding `[x]` picks the first `x_i` elements of each block; `#(S)` counts
//! block intersections. A fint `x` spawns quasi-intervals `Q_0 = [x], ...,
//! Q_q` by shifting its head inside the first block; each carries an excess
//! `ε(Q) = shift · head`, the bookkeeping quantity behind the big-M lift of
//! box basis values to cube basis values. Truncations are removed one step at
//! a time by the insertion-point lift, so a general truncated box reduces to
//! a cube reconstruction.

use std::collections::{BTreeMap, BTreeSet};

use crate::domain::{
    classify_point, fints_of_size, standard_basis, BoxShape, LatticePoint, PointClass, TruncatedBox,
};
use crate::error::Error;
use crate::oracle::SuiteResult;
use crate::rat::{self, Rat};
use crate::tp::{reconstruct, verify, BasisAssignment, ValuedFunction};

/// Block decomposition of `[N]`, `N = |a|`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockStructure {
    shape: BoxShape,
    /// prefix sums `ā_0 = 0, ā_1, ..., ā_n = N`
    abar: Vec<u32>,
}

impl BlockStructure {
    pub fn new(shape: BoxShape) -> Self {
        let mut abar = vec![0u32];
        for i in 1..=shape.n() {
            abar.push(abar[i - 1] + shape.cap(i));
        }
        BlockStructure { shape, abar }
    }

    pub fn shape(&self) -> &BoxShape {
        &self.shape
    }

    pub fn total(&self) -> usize {
        *self.abar.last().unwrap() as usize
    }

    /// The block `L_i` as an inclusive 1-based range of `[N]`.
    pub fn block(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        (self.abar[i - 1] as usize + 1)..=(self.abar[i] as usize)
    }

    /// The block index containing element `e` of `[N]`.
    pub fn block_of(&self, e: usize) -> usize {
        (1..=self.shape.n())
            .find(|&i| self.block(i).contains(&e))
            .expect("element within [N]")
    }

    /// `[x]`: the first `x_i` elements of each block.
    pub fn embed_point(&self, x: &LatticePoint) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for i in 1..=self.shape.n() {
            let start = self.abar[i - 1] as usize + 1;
            for t in 0..x.coord(i) as usize {
                s.insert(start + t);
            }
        }
        s
    }

    /// `#(S)`: block intersection counts.
    pub fn project_set(&self, s: &BTreeSet<usize>) -> LatticePoint {
        let mut coords = vec![0u32; self.shape.n()];
        for &e in s {
            coords[self.block_of(e) - 1] += 1;
        }
        LatticePoint::new(coords)
    }
}

/// A head-shifted image of a fint inside `[N]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuasiInterval {
    pub set: BTreeSet<usize>,
    pub head_size: u32,
    pub shift: u32,
    /// `ε = shift · head_size`
    pub excess: u32,
}

/// The quasi-intervals `Q_0 = [x], ..., Q_q` of a fint, `q = a_c - x_c`;
/// `Q_p` shifts the head `p` positions right, and `Q_q` is a genuine interval.
pub fn quasi_intervals_of_fint(
    blocks: &BlockStructure,
    x: &LatticePoint,
) -> Result<Vec<QuasiInterval>, Error> {
    match classify_point(blocks.shape(), x)? {
        PointClass::Fint => {}
        _ => {
            return Err(Error::Precondition(format!("{x} is not a fint")));
        }
    }
    let c = x.c().unwrap();
    let head_size = x.coord(c);
    let base = blocks.embed_point(x);
    let head_start = blocks.abar[c - 1] as usize + 1;
    let tail: BTreeSet<usize> = base
        .iter()
        .copied()
        .filter(|&e| e >= head_start + head_size as usize)
        .collect();
    let q = blocks.shape().cap(c) - head_size;
    let mut out = Vec::new();
    for p in 0..=q {
        let mut set: BTreeSet<usize> = (0..head_size as usize)
            .map(|t| head_start + p as usize + t)
            .collect();
        set.extend(tail.iter().copied());
        out.push(QuasiInterval {
            set,
            head_size,
            shift: p,
            excess: p * head_size,
        });
    }
    Ok(out)
}

/// Reads `(head, shift, excess)` off an arbitrary quasi-interval set: the head
/// is the part in the block of `min(Q)`, the shift its offset in that block.
pub fn excess_of_set(blocks: &BlockStructure, set: &BTreeSet<usize>) -> QuasiInterval {
    let Some(&min) = set.iter().next() else {
        return QuasiInterval {
            set: BTreeSet::new(),
            head_size: 0,
            shift: 0,
            excess: 0,
        };
    };
    let c = blocks.block_of(min);
    let head_size = set
        .iter()
        .filter(|&&e| blocks.block(c).contains(&e))
        .count() as u32;
    let shift = (min - (blocks.abar[c - 1] as usize + 1)) as u32;
    QuasiInterval {
        set: set.clone(),
        head_size,
        shift,
        excess: shift * head_size,
    }
}

/// All intervals `[lo..hi]` of `[N]` with size in `1..=max_size`.
fn intervals_of(n: usize, max_size: u32) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    for lo in 1..=n {
        for hi in lo..=n {
            if (hi - lo + 1) as u32 <= max_size {
                out.push((lo..=hi).collect());
            }
        }
    }
    out
}

/// Lifts box basis values (fints of sizes `1..=m'`, `m = 0`) to cube basis
/// values on `C_0^{m'}(N)` via `g(I) = f0(#(I)) + M·ε(I)`.
///
/// `M` is the exact integer-scaled bound `1 + (N+1)·max(1, max|f0|)`, chosen
/// so that doubling it cannot change any restricted value.
pub fn lift_box_basis(
    shape: &BoxShape,
    m_prime: u32,
    f0: &BTreeMap<LatticePoint, Rat>,
) -> Result<BasisAssignment, Error> {
    let blocks = BlockStructure::new(shape.clone());
    let mut expected: BTreeSet<LatticePoint> = BTreeSet::new();
    for p in 1..=m_prime {
        expected.extend(fints_of_size(shape, p));
    }
    let got: BTreeSet<_> = f0.keys().cloned().collect();
    if got != expected {
        return Err(Error::KeySetMismatch(format!(
            "expected values on the {} fints of sizes 1..={m_prime}, got {} keys",
            expected.len(),
            got.len()
        )));
    }
    let n_big = blocks.total();
    let big_m = rat::int(n_big as i64 + 1) * rat::max_abs(f0.values(), rat::int(1)) + rat::int(1);

    let cube = TruncatedBox::cube(n_big, 0, m_prime)?;
    let mut values = BTreeMap::new();
    values.insert(LatticePoint::zero(n_big), rat::zero());
    for interval in intervals_of(n_big, m_prime) {
        let q = excess_of_set(&blocks, &interval);
        let fint = blocks.project_set(&interval);
        let v = f0[&fint].clone() + rat::int(q.excess as i64) * big_m.clone();
        let point = LatticePoint::from_subset(n_big, &interval.iter().copied().collect::<Vec<_>>());
        values.insert(point, v);
    }
    BasisAssignment::with_values(cube, values)
}

/// One truncation-removal step: basis values on `B_m^{m'}(a)` to basis values
/// on `B_{m-1}^{m'}(a)` via the insertion point `p(y) = min{p : y_p < a_p}`,
/// `g0(y) = f0(y + 1_p) + M·(y_{p+1} + ... + y_n)`.
pub fn lift_truncation_step(f0: &BasisAssignment) -> Result<BasisAssignment, Error> {
    let bx = f0.box_();
    if bx.m() == 0 {
        return Err(Error::Precondition(
            "box is not truncated from below".into(),
        ));
    }
    let shape = bx.shape().clone();
    let lower = TruncatedBox::new(shape.clone(), bx.m() - 1, bx.m_prime())?;
    let big_m = rat::int(shape.total() as i64 + 1)
        * rat::max_abs(f0.values().values(), rat::int(1))
        + rat::int(1);

    // fint values carry over; the old bottom-layer sints leave the basis
    let mut values: BTreeMap<LatticePoint, Rat> = f0
        .values()
        .iter()
        .filter(|(k, _)| {
            !k.is_zero()
                && classify_point(&shape, k)
                    .map(|c| c.is_fint())
                    .unwrap_or(false)
        })
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    for y in standard_basis(&lower) {
        if values.contains_key(&y) {
            continue;
        }
        if y.is_zero() {
            values.insert(y, rat::zero());
            continue;
        }
        let p = (1..=shape.n())
            .find(|&i| y.coord(i) < shape.cap(i))
            .expect("basis point of size m-1 < |a| has an insertion point");
        let up = y.plus(p);
        let t: i64 = (p + 1..=shape.n()).map(|i| i64::from(y.coord(i))).sum();
        let v = f0.value(&up).clone() + rat::int(t) * big_m.clone();
        values.insert(y, v);
    }
    BasisAssignment::with_values(lower, values)
}

/// Reconstruction through the embedding route: peel truncation steps down to
/// `m = 0`, lift to the cube `C_0^{m'}(N)`, reconstruct there and pull values
/// back through `[·]`.
///
/// This is the independent counterpart of [`crate::tp::reconstruct`]; the two
/// are differential-tested against each other.
pub fn reconstruct_via_embedding(g: &BasisAssignment) -> Result<ValuedFunction, Error> {
    let bx = g.box_().clone();
    let mut cur = g.clone();
    for _ in 0..bx.m() {
        cur = lift_truncation_step(&cur)?;
    }
    // now on B_0^{m'}(a): keep only fint values for the cube lift
    let shape = bx.shape().clone();
    let mut f0 = BTreeMap::new();
    for p in 1..=bx.m_prime() {
        for fint in fints_of_size(&shape, p) {
            f0.insert(fint.clone(), cur.value(&fint).clone());
        }
    }
    let lifted = lift_box_basis(&shape, bx.m_prime(), &f0)?;
    let cube_f = reconstruct(&lifted)?;
    let blocks = BlockStructure::new(shape);

    let mut values = BTreeMap::new();
    for x in bx.points() {
        let image = blocks.embed_point(&x);
        let point =
            LatticePoint::from_subset(blocks.total(), &image.iter().copied().collect::<Vec<_>>());
        values.insert(x.clone(), cube_f.value(&point).clone());
    }
    let f = ValuedFunction::new(bx, values)?;
    let report = verify(&f);
    if !report.is_empty() {
        return Err(Error::TheoremViolation(format!(
            "embedded reconstruction violates {} relation(s)",
            report.len()
        )));
    }
    Ok(f)
}

/// Extends a TP-function on `B_m^{m'}(a)` to one on the entire box, agreeing
/// with it on the original domain.
///
/// New upper basis fints take values from `defaults` (0 when absent); the
/// construction extends upward, complements, extends upward again and
/// complements back, so the points of size `< m` are controlled by defaults
/// keyed at `a - y` for the second-stage fints `y`.
pub fn extend_to_entire_box(
    f: &ValuedFunction,
    defaults: &BTreeMap<LatticePoint, Rat>,
) -> Result<ValuedFunction, Error> {
    let report = verify(f);
    if !report.is_empty() {
        return Err(Error::NotTp(report.len()));
    }
    let bx = f.box_().clone();
    let shape = bx.shape().clone();
    let total = shape.total();
    if bx.m() == 0 && bx.m_prime() == total {
        return Ok(f.clone());
    }
    let dflt = |p: &LatticePoint| defaults.get(p).cloned().unwrap_or_else(rat::zero);

    // extend upward: basis of B_m^{|a|} = old basis plus fints above m'
    let upper = TruncatedBox::new(shape.clone(), bx.m(), total)?;
    let mut values = BTreeMap::new();
    for b in standard_basis(&upper) {
        let v = if b.size() <= bx.m_prime() {
            f.value(&b).clone()
        } else {
            dflt(&b)
        };
        values.insert(b, v);
    }
    let g = reconstruct(&BasisAssignment::with_values(upper, values)?)?;

    // complement, extend upward again (defaults keyed at a - y), reconstruct
    let gstar = crate::tp::complementary(&g);
    let full = TruncatedBox::entire(shape.clone());
    let mut values = BTreeMap::new();
    for b in standard_basis(&full) {
        let v = if gstar.box_().contains(&b) {
            gstar.value(&b).clone()
        } else {
            dflt(&shape.complement(&b))
        };
        values.insert(b, v);
    }
    let h = reconstruct(&BasisAssignment::with_values(full, values)?)?;
    let result = crate::tp::complementary(&h);

    for x in bx.points() {
        if result.value(&x) != f.value(&x) {
            return Err(Error::TheoremViolation(format!(
                "box extension changed the value at {x}"
            )));
        }
    }
    Ok(result)
}

/// Differential suite: the embedding route reproduces direct reconstruction.
pub fn suite_embedding(seed: u64) -> SuiteResult {
    use crate::oracle::{random_assignment, shapes_up_to};
    use rand::rngs::SmallRng;
    use rand::SeedableRng;
    let mut rng = SmallRng::seed_from_u64(seed);
    let mut checks = 0;
    let mut failures = 0;
    for shape in shapes_up_to(3, 5) {
        if shape.is_cube() {
            continue;
        }
        let bx = TruncatedBox::entire(shape);
        for _ in 0..2 {
            let g = random_assignment(&bx, (-9, 9), &mut rng);
            checks += 1;
            let ok = match (reconstruct(&g), reconstruct_via_embedding(&g)) {
                (Ok(direct), Ok(emb)) => direct.values() == emb.values(),
                _ => false,
            };
            if !ok {
                failures += 1;
            }
        }
    }
    SuiteResult {
        name: "embedding",
        checks,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{random_assignment, shapes_up_to};
    use crate::rat::int;
    use rand::rngs::SmallRng;
    use rand::SeedableRng;

    fn pt(coords: &[u32]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    fn shape(a: &[u32]) -> BoxShape {
        BoxShape::new(a.to_vec()).unwrap()
    }

    fn set(elems: &[usize]) -> BTreeSet<usize> {
        elems.iter().copied().collect()
    }

    #[test]
    fn embed_and_project() {
        let blocks = BlockStructure::new(shape(&[1, 2, 1, 1]));
        assert_eq!(blocks.embed_point(&pt(&[0, 2, 1, 0])), set(&[2, 3, 4]));
        let blocks2 = BlockStructure::new(shape(&[2, 2]));
        assert_eq!(blocks2.embed_point(&pt(&[1, 1])), set(&[1, 3]));
        assert_eq!(blocks2.embed_point(&pt(&[0, 0])), set(&[]));
        assert_eq!(blocks2.project_set(&set(&[1, 3])), pt(&[1, 1]));
        assert_eq!(blocks2.project_set(&set(&[2, 3])), pt(&[1, 1]));
    }

    #[test]
    fn project_embed_is_identity() {
        for sh in shapes_up_to(4, 7) {
            let blocks = BlockStructure::new(sh.clone());
            for x in sh.points() {
                assert_eq!(blocks.project_set(&blocks.embed_point(&x)), x);
            }
        }
    }

    #[test]
    fn quasi_interval_families() {
        let blocks = BlockStructure::new(shape(&[2, 2]));
        let qs = quasi_intervals_of_fint(&blocks, &pt(&[1, 1])).unwrap();
        assert_eq!(qs.len(), 2);
        assert_eq!(qs[0].set, set(&[1, 3]));
        assert_eq!(qs[0].excess, 0);
        assert_eq!(qs[1].set, set(&[2, 3]));
        assert_eq!(qs[1].excess, 1);

        let blocks = BlockStructure::new(shape(&[3, 1]));
        let qs = quasi_intervals_of_fint(&blocks, &pt(&[1, 1])).unwrap();
        assert_eq!(
            qs.iter().map(|q| q.set.clone()).collect::<Vec<_>>(),
            vec![set(&[1, 4]), set(&[2, 4]), set(&[3, 4])]
        );
        assert_eq!(
            qs.iter().map(|q| q.excess).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );

        // head at capacity: a single quasi-interval with zero excess
        let qs = quasi_intervals_of_fint(&blocks, &pt(&[3, 1])).unwrap();
        assert_eq!(qs.len(), 1);
        assert_eq!(qs[0].excess, 0);
    }

    #[test]
    fn excess_bookkeeping_identity() {
        // For every non-interval quasi-interval Q, form X = Q - {i,k} with
        // i = min, k = max, j = next after the head, and the five sets
        // B=Xj, C=Xij, D=Xk, E=Xjk, F=Xi. Exactly:
        //   ε(Q)+ε(B) = ε(E)+ε(F) > ε(C)+ε(D).
        for sh in shapes_up_to(3, 6) {
            let blocks = BlockStructure::new(sh.clone());
            for p in 1..=sh.total() {
                for fint in fints_of_size(&sh, p) {
                    for q in quasi_intervals_of_fint(&blocks, &fint).unwrap() {
                        let is_interval = {
                            let v: Vec<usize> = q.set.iter().copied().collect();
                            v.windows(2).all(|w| w[1] == w[0] + 1)
                        };
                        if is_interval {
                            continue;
                        }
                        let i = *q.set.iter().next().unwrap();
                        let k = *q.set.iter().next_back().unwrap();
                        let head_end = i + q.head_size as usize - 1;
                        let j = head_end + 1;
                        assert!(!q.set.contains(&j));
                        let mut x = q.set.clone();
                        x.remove(&i);
                        x.remove(&k);
                        let with = |extra: &[usize]| {
                            let mut s = x.clone();
                            s.extend(extra.iter().copied());
                            s
                        };
                        let e = |s: &BTreeSet<usize>| excess_of_set(&blocks, s).excess as i64;
                        let eq = e(&q.set);
                        let eb = e(&with(&[j]));
                        let ec = e(&with(&[i, j]));
                        let ed = e(&with(&[k]));
                        let ee = e(&with(&[j, k]));
                        let ef = e(&with(&[i]));
                        assert_eq!(eq + eb, ee + ef, "{:?}", q.set);
                        assert!(eq + eb > ec + ed, "{:?}", q.set);
                    }
                }
            }
        }
    }

    #[test]
    fn lift_box_basis_values() {
        // a=(2,2): g({2,3}) = f0(1,1) + M (shifted head), g([x]) = f0(x)
        let sh = shape(&[2, 2]);
        let mut f0 = BTreeMap::new();
        for p in 1..=2u32 {
            for fint in fints_of_size(&sh, p) {
                f0.insert(fint.clone(), int(0));
            }
        }
        // all-zero f0: the lift is pure excess (M = 1 + (N+1)·max(1,0) = 6),
        // zero exactly on the [x] images
        let zero_lift = lift_box_basis(&sh, 2, &f0).unwrap();
        let blocks = BlockStructure::new(sh.clone());
        for (pt_key, v) in zero_lift.values() {
            if pt_key.is_zero() {
                continue;
            }
            let set: BTreeSet<usize> = pt_key.support().into_iter().collect();
            let q = excess_of_set(&blocks, &set);
            assert_eq!(v, &(int(6) * int(q.excess as i64)), "{pt_key}");
        }
        f0.insert(pt(&[1, 1]), int(3));
        let lifted = lift_box_basis(&sh, 2, &f0).unwrap();
        let n_big = 4;
        let as_point = |elems: &[usize]| LatticePoint::from_subset(n_big, elems);
        // M = 1 + (N+1)*max(1, 3) = 16; {2,3} carries the shifted head of (1,1)
        assert_eq!(lifted.value(&as_point(&[2, 3])), &(int(3) + int(16)));
        assert_eq!(lifted.value(&as_point(&[1, 2])), &int(0));
        assert_eq!(lifted.value(&as_point(&[3, 4])), &int(0));
        // the reconstructed cube function recovers f0 at the unshifted image
        let cube_f = reconstruct(&lifted).unwrap();
        assert_eq!(cube_f.value(&as_point(&[1, 3])), &int(3));
    }

    #[test]
    fn embedding_reproduces_direct_reconstruction() {
        let mut rng = SmallRng::seed_from_u64(3);
        for sh in shapes_up_to(3, 5) {
            let bx = TruncatedBox::entire(sh.clone());
            for _ in 0..3 {
                let g = random_assignment(&bx, (-9, 9), &mut rng);
                let direct = reconstruct(&g).unwrap();
                let emb = reconstruct_via_embedding(&g).unwrap();
                assert_eq!(direct.values(), emb.values(), "{sh:?}");
            }
        }
    }

    #[test]
    fn truncation_chain_matches_direct() {
        // full chain m -> 0 on B_2^3(1,1,1,1) and friends
        let mut rng = SmallRng::seed_from_u64(5);
        for (a, m, mp) in [
            (vec![1u32, 1, 1, 1], 2u32, 3u32),
            (vec![1, 2, 1], 2, 3),
            (vec![2, 2], 1, 3),
        ] {
            let bx = TruncatedBox::new(shape(&a), m, mp).unwrap();
            for _ in 0..5 {
                let g = random_assignment(&bx, (-9, 9), &mut rng);
                let direct = reconstruct(&g).unwrap();
                let emb = reconstruct_via_embedding(&g).unwrap();
                assert_eq!(direct.values(), emb.values(), "{a:?} m={m} mp={mp}");
            }
        }
    }

    #[test]
    fn insertion_point_examples() {
        // y=(0,1,0,1): p=1, y^=(1,1,0,1), t=2
        let sh = shape(&[1, 1, 1, 1]);
        let y = pt(&[0, 1, 0, 1]);
        let p = (1..=4).find(|&i| y.coord(i) < sh.cap(i)).unwrap();
        assert_eq!(p, 1);
        assert_eq!(y.plus(p), pt(&[1, 1, 0, 1]));
        let t: u32 = (p + 1..=4).map(|i| y.coord(i)).sum();
        assert_eq!(t, 2);

        // prefix fint y=(1,1,0,0): p=3, t=0, so g0(y) = f0(y^)
        let y = pt(&[1, 1, 0, 0]);
        let p = (1..=4).find(|&i| y.coord(i) < sh.cap(i)).unwrap();
        assert_eq!(p, 3);
        let t: u32 = (p + 1..=4).map(|i| y.coord(i)).sum();
        assert_eq!(t, 0);
    }

    #[test]
    fn doubling_big_m_changes_nothing() {
        // recompute the cube lift with a doubled M by scaling f0 bounds
        let sh = shape(&[1, 2, 1]);
        let bx = TruncatedBox::entire(sh.clone());
        let mut rng = SmallRng::seed_from_u64(7);
        for _ in 0..5 {
            let g = random_assignment(&bx, (-9, 9), &mut rng);
            let mut f0 = BTreeMap::new();
            for p in 1..=sh.total() {
                for fint in fints_of_size(&sh, p) {
                    f0.insert(fint.clone(), g.value(&fint).clone());
                }
            }
            let restricted = |assignment: &BasisAssignment| -> BTreeMap<LatticePoint, Rat> {
                let blocks = BlockStructure::new(sh.clone());
                let cube_f = reconstruct(assignment).unwrap();
                bx.points()
                    .into_iter()
                    .map(|x| {
                        let image = blocks.embed_point(&x);
                        let point = LatticePoint::from_subset(
                            blocks.total(),
                            &image.iter().copied().collect::<Vec<_>>(),
                        );
                        (x, cube_f.value(&point).clone())
                    })
                    .collect()
            };
            let lifted = lift_box_basis(&sh, sh.total(), &f0).unwrap();
            let base = restricted(&lifted);

            // doubled M: rebuild by hand with 2M
            let blocks = BlockStructure::new(sh.clone());
            let n_big = blocks.total();
            let big2 =
                (rat::int(n_big as i64 + 1) * rat::max_abs(f0.values(), int(1)) + int(1)) * int(2);
            let cube = TruncatedBox::cube(n_big, 0, sh.total()).unwrap();
            let mut values = BTreeMap::new();
            values.insert(LatticePoint::zero(n_big), rat::zero());
            for interval in intervals_of(n_big, sh.total()) {
                let q = excess_of_set(&blocks, &interval);
                let fint = blocks.project_set(&interval);
                let point =
                    LatticePoint::from_subset(n_big, &interval.iter().copied().collect::<Vec<_>>());
                values.insert(
                    point,
                    f0[&fint].clone() + int(q.excess as i64) * big2.clone(),
                );
            }
            let doubled = BasisAssignment::with_values(cube, values).unwrap();
            assert_eq!(base, restricted(&doubled));
        }
    }

    #[test]
    fn lift_recovers_f0_on_all_fints() {
        // the restricted cube function matches f0 on every fint, not only
        // basis-size ones
        let sh = shape(&[1, 2, 1]);
        let mut rng = SmallRng::seed_from_u64(9);
        let bx = TruncatedBox::entire(sh.clone());
        for _ in 0..5 {
            let g = random_assignment(&bx, (-9, 9), &mut rng);
            let f = reconstruct_via_embedding(&g).unwrap();
            for p in 1..=sh.total() {
                for fint in fints_of_size(&sh, p) {
                    assert_eq!(f.value(&fint), g.value(&fint));
                }
            }
        }
    }

    #[test]
    fn extend_to_entire_box_cases() {
        // identity when nothing is truncated
        let sh = shape(&[1, 1, 1]);
        let bx = TruncatedBox::entire(sh.clone());
        let zero_fn = |bx: &TruncatedBox| {
            ValuedFunction::new(
                bx.clone(),
                bx.points().into_iter().map(|x| (x, int(0))).collect(),
            )
            .unwrap()
        };
        let f = zero_fn(&bx);
        assert_eq!(extend_to_entire_box(&f, &BTreeMap::new()).unwrap(), f);

        // zero on a middle band extends to zero with zero defaults
        let band = TruncatedBox::new(sh.clone(), 1, 2).unwrap();
        let f = zero_fn(&band);
        let ext = extend_to_entire_box(&f, &BTreeMap::new()).unwrap();
        assert!(ext.values().values().all(|v| v == &int(0)));

        // random TP on B_1^2(1,1,1): the extension verifies and restricts back
        let mut rng = SmallRng::seed_from_u64(11);
        for _ in 0..10 {
            let g = random_assignment(&band, (-9, 9), &mut rng);
            let f = reconstruct(&g).unwrap();
            let ext = extend_to_entire_box(&f, &BTreeMap::new()).unwrap();
            assert!(verify(&ext).is_empty());
            for x in band.points() {
                assert_eq!(ext.value(&x), f.value(&x));
            }
        }
    }
}

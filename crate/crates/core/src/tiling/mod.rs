//! Rhombic tilings of the zonogon `Z(a)` and their basis combinatorics.
//!
//! The zonogon is the planar shadow of the box under `x ↦ Σ x_i ξ_i` with the
//! generator directions ordered clockwise. Combinatorially a tiling is a set
//! of `ij`-rhombi `(anchor, i, j)`; its vertex set, pulled back to lattice
//! points, is a TP-basis, and exchanging the two triangulations of a little
//! hexagon (a *flip*) realizes a normal TP3-mutation of that basis. The
//! standard basis corresponds to the height-minimal tiling.
//!
//! Plane coordinates are used only to order things consistently; we embed
//! with `ξ_i = (B^i, 1)` for a base `B` large enough that distinct box points
//! land on distinct plane points, and all predicates are exact integer
//! arithmetic. Rendering uses its own (floating) coordinates in [`svg`].

mod insert;
mod subbox;
mod svg;
mod wiring;

pub use insert::{extend_points_to_tiling, Obstacle};
pub use subbox::{extend_function_from_subbox, SubBoxFunction};
pub use svg::render_svg;
pub use wiring::{from_wiring, inseparable_triangles, to_wiring, WireId, Wiring};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::domain::{standard_basis, BoxShape, LatticePoint, TruncatedBox};
use crate::error::Error;
use crate::oracle::SuiteResult;
use crate::rat::{self, Rat};

/// One little `ij`-rhombus with corners `x, x+1_i, x+1_j, x+1_i+1_j`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Rhombus {
    #[serde(rename = "x")]
    pub anchor: LatticePoint,
    pub i: usize,
    pub j: usize,
}

impl Rhombus {
    pub fn corners(&self) -> [LatticePoint; 4] {
        [
            self.anchor.clone(),
            self.anchor.plus(self.i),
            self.anchor.plus(self.j),
            self.anchor.plus2(self.i, self.j),
        ]
    }

    /// The four directed sides as `(tail, color)` unit edges.
    pub fn sides(&self) -> [(LatticePoint, usize); 4] {
        [
            (self.anchor.clone(), self.i),
            (self.anchor.plus(self.j), self.i),
            (self.anchor.clone(), self.j),
            (self.anchor.plus(self.i), self.j),
        ]
    }
}

/// A rhombic tiling diagram of `Z(a)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tiling {
    shape: BoxShape,
    rhombi: BTreeSet<Rhombus>,
}

/// Hexagon orientation: `Vee` has its interior vertex low (`s + 1_j`),
/// `Wedge` has it high (`s + 1_i + 1_k`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    Vee,
    Wedge,
}

/// A little hexagon spanned by colors `i < j < k` at anchor `s`, together
/// with the orientation of its current 3-rhombus partition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hexagon {
    pub anchor: LatticePoint,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub orientation: Orientation,
}

impl Hexagon {
    /// The three rhombi of the given orientation.
    fn rhombi(&self, orientation: Orientation) -> [Rhombus; 3] {
        let s = &self.anchor;
        match orientation {
            Orientation::Vee => [
                Rhombus {
                    anchor: s.clone(),
                    i: self.i,
                    j: self.j,
                },
                Rhombus {
                    anchor: s.clone(),
                    i: self.j,
                    j: self.k,
                },
                Rhombus {
                    anchor: s.plus(self.j),
                    i: self.i,
                    j: self.k,
                },
            ],
            Orientation::Wedge => [
                Rhombus {
                    anchor: s.clone(),
                    i: self.i,
                    j: self.k,
                },
                Rhombus {
                    anchor: s.plus(self.i),
                    i: self.j,
                    j: self.k,
                },
                Rhombus {
                    anchor: s.plus(self.k),
                    i: self.i,
                    j: self.j,
                },
            ],
        }
    }

    /// The interior vertex of the current partition.
    pub fn interior_vertex(&self) -> LatticePoint {
        match self.orientation {
            Orientation::Vee => self.anchor.plus(self.j),
            Orientation::Wedge => self.anchor.plus2(self.i, self.k),
        }
    }

    /// The interior vertex after flipping.
    pub fn flipped_vertex(&self) -> LatticePoint {
        match self.orientation {
            Orientation::Vee => self.anchor.plus2(self.i, self.k),
            Orientation::Wedge => self.anchor.plus(self.j),
        }
    }
}

/// Exact plane embedding: `ξ_i = (B^i, 1)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Geom {
    base: i128,
}

impl Geom {
    pub(crate) fn new(shape: &BoxShape) -> Self {
        let max_cap = shape.capacities().iter().copied().max().unwrap_or(1);
        Geom {
            base: i128::from(max_cap) + 1,
        }
    }

    pub(crate) fn xi(&self, color: usize) -> (i128, i128) {
        (self.base.pow(color as u32), 1)
    }

    pub(crate) fn pos(&self, x: &LatticePoint) -> (i128, i128) {
        let mut px = 0i128;
        let mut py = 0i128;
        for (t, &v) in x.coords().iter().enumerate() {
            let (ex, ey) = self.xi(t + 1);
            px += i128::from(v) * ex;
            py += i128::from(v) * ey;
        }
        (px, py)
    }
}

impl Tiling {
    pub fn new(shape: BoxShape, rhombi: BTreeSet<Rhombus>) -> Result<Self, Error> {
        let t = Tiling { shape, rhombi };
        if !t.is_valid() {
            return Err(Error::InvalidShape("not a rhombic tiling".into()));
        }
        Ok(t)
    }

    pub(crate) fn new_unchecked(shape: BoxShape, rhombi: BTreeSet<Rhombus>) -> Self {
        Tiling { shape, rhombi }
    }

    pub fn shape(&self) -> &BoxShape {
        &self.shape
    }

    pub fn rhombi(&self) -> &BTreeSet<Rhombus> {
        &self.rhombi
    }

    /// All rhombus corners as lattice points. For `n = 1` the degenerate
    /// tiling is the chain `0..=a_1`.
    pub fn vertices(&self) -> BTreeSet<LatticePoint> {
        if self.shape.n() == 1 {
            return (0..=self.shape.cap(1))
                .map(|t| LatticePoint::new(vec![t]))
                .collect();
        }
        self.rhombi
            .iter()
            .flat_map(|r| r.corners().into_iter())
            .collect()
    }

    /// All unit edges of the diagram.
    pub fn edges(&self) -> BTreeSet<(LatticePoint, usize)> {
        if self.shape.n() == 1 {
            return (0..self.shape.cap(1))
                .map(|t| (LatticePoint::new(vec![t]), 1))
                .collect();
        }
        self.rhombi
            .iter()
            .flat_map(|r| r.sides().into_iter())
            .collect()
    }

    /// Total height `Σ_{v ∈ V(D)} |v|`.
    pub fn height(&self) -> u64 {
        self.vertices().iter().map(|v| u64::from(v.size())).sum()
    }

    /// Structural validity: right rhombus count per color pair, every
    /// boundary edge used exactly once, every interior edge shared by exactly
    /// two rhombi.
    pub fn is_valid(&self) -> bool {
        validate(&self.shape, &self.rhombi)
    }
}

/// The boundary edges of `Z(a)`: on the left path `(a_1..a_{i-1}, t, 0..)`
/// with color `i`, on the right path `(0.., t, a_{i+1}..a_n)` with color `i`.
fn boundary_edges(shape: &BoxShape) -> BTreeSet<(LatticePoint, usize)> {
    let n = shape.n();
    let mut out = BTreeSet::new();
    for i in 1..=n {
        for t in 0..shape.cap(i) {
            let left = LatticePoint::new(
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
            );
            let right = LatticePoint::new(
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
            );
            out.insert((left, i));
            out.insert((right, i));
        }
    }
    out
}

/// Checks whether a rhombus set is a genuine tiling of `Z(a)`.
pub fn validate(shape: &BoxShape, rhombi: &BTreeSet<Rhombus>) -> bool {
    let n = shape.n();
    if n == 1 {
        return rhombi.is_empty();
    }
    // shape constraints and per-pair counts
    let mut pair_counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for r in rhombi {
        if r.i >= r.j || r.j > n || r.i == 0 {
            return false;
        }
        if !shape.contains(&r.anchor.plus2(r.i, r.j)) {
            return false;
        }
        *pair_counts.entry((r.i, r.j)).or_insert(0) += 1;
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let expect = u64::from(shape.cap(i)) * u64::from(shape.cap(j));
            if pair_counts.get(&(i, j)).copied().unwrap_or(0) != expect {
                return false;
            }
        }
    }
    // edge incidence
    let mut edge_count: BTreeMap<(LatticePoint, usize), u8> = BTreeMap::new();
    for r in rhombi {
        for side in r.sides() {
            *edge_count.entry(side).or_insert(0) += 1;
        }
    }
    let boundary = boundary_edges(shape);
    for b in &boundary {
        if edge_count.get(b).copied().unwrap_or(0) != 1 {
            return false;
        }
    }
    for (e, c) in &edge_count {
        let expect_boundary = boundary.contains(e);
        match (expect_boundary, c) {
            (true, 1) | (false, 2) => {}
            _ => return false,
        }
    }
    true
}

/// The height-minimal tiling: its vertex set is `Int(a) ∪ {0}`, the standard
/// basis of the box.
pub fn standard_tiling(shape: &BoxShape) -> Tiling {
    let n = shape.n();
    let mut rhombi = BTreeSet::new();
    // peel color n: the previous diagram's right boundary sweeps across ξ_n
    for nn in 2..=n {
        for c in (1..=nn - 1).rev() {
            for t in 0..shape.cap(c) {
                for s in 0..shape.cap(nn) {
                    let anchor = LatticePoint::new(
                        (1..=n)
                            .map(|d| {
                                if d == c {
                                    t
                                } else if d > c && d < nn {
                                    shape.cap(d)
                                } else if d == nn {
                                    s
                                } else {
                                    0
                                }
                            })
                            .collect(),
                    );
                    rhombi.insert(Rhombus {
                        anchor,
                        i: c,
                        j: nn,
                    });
                }
            }
        }
    }
    let t = Tiling {
        shape: shape.clone(),
        rhombi,
    };
    debug_assert!(t.is_valid());
    t
}

/// The pre-images of the vertex set: a TP-basis. Requires a valid diagram;
/// flip-reachability from the standard tiling is asserted on the way.
pub fn basis_of(tiling: &Tiling) -> Result<BTreeSet<LatticePoint>, Error> {
    if !tiling.is_valid() {
        return Err(Error::InvalidShape("not a rhombic tiling".into()));
    }
    minimize_to_standard(tiling)?;
    Ok(tiling.vertices())
}

/// All little hexagons of a diagram, in deterministic order.
pub fn find_hexagons(tiling: &Tiling) -> Vec<Hexagon> {
    let shape = &tiling.shape;
    let n = shape.n();
    let mut out = Vec::new();
    for anchor in shape.points() {
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    if !shape.contains(&anchor.plus2(i, j).plus(k)) {
                        continue;
                    }
                    for orientation in [Orientation::Vee, Orientation::Wedge] {
                        let hex = Hexagon {
                            anchor: anchor.clone(),
                            i,
                            j,
                            k,
                            orientation,
                        };
                        if hex
                            .rhombi(orientation)
                            .iter()
                            .all(|r| tiling.rhombi.contains(r))
                        {
                            out.push(hex);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Exchanges the hexagon's two partitions; the interior vertex `y` is traded
/// for the opposite one and the diagram height changes by ±1.
pub fn flip(tiling: &Tiling, hex: &Hexagon) -> Result<Tiling, Error> {
    let old = hex.rhombi(hex.orientation);
    if !old.iter().all(|r| tiling.rhombi.contains(r)) {
        return Err(Error::Precondition("hexagon not present in diagram".into()));
    }
    let flipped = match hex.orientation {
        Orientation::Vee => Orientation::Wedge,
        Orientation::Wedge => Orientation::Vee,
    };
    let mut rhombi = tiling.rhombi.clone();
    for r in &old {
        rhombi.remove(r);
    }
    for r in hex.rhombi(flipped) {
        rhombi.insert(r);
    }
    Ok(Tiling {
        shape: tiling.shape.clone(),
        rhombi,
    })
}

/// Flips wedge hexagons downward until none remain; the result must be the
/// standard tiling. Returns the flip sequence (as applied, in order).
pub fn minimize_to_standard(tiling: &Tiling) -> Result<Vec<Hexagon>, Error> {
    let mut cur = tiling.clone();
    let mut flips = Vec::new();
    loop {
        let wedge = find_hexagons(&cur)
            .into_iter()
            .find(|h| h.orientation == Orientation::Wedge);
        match wedge {
            Some(h) => {
                let next = flip(&cur, &h)?;
                debug_assert_eq!(next.height() + 1, cur.height());
                cur = next;
                flips.push(h);
            }
            None => break,
        }
    }
    if cur != standard_tiling(&tiling.shape) {
        return Err(Error::TheoremViolation(
            "wedge-free diagram differs from the standard tiling".into(),
        ));
    }
    Ok(flips)
}

/// Breadth-first flip closure of the standard tiling: all tilings of `Z(a)`.
pub fn enumerate_tilings(shape: &BoxShape) -> Result<Vec<Tiling>, Error> {
    const GUARD: usize = 1_000_000;
    let start = standard_tiling(shape);
    let mut seen: BTreeSet<BTreeSet<Rhombus>> = BTreeSet::new();
    seen.insert(start.rhombi.clone());
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(t) = queue.pop_front() {
        for hex in find_hexagons(&t) {
            let next = flip(&t, &hex)?;
            if seen.insert(next.rhombi.clone()) {
                if seen.len() > GUARD {
                    return Err(Error::ResourceGuard(format!("more than {GUARD} tilings")));
                }
                queue.push_back(next);
            }
        }
        out.push(t);
    }
    Ok(out)
}

/// Moves basis values along a flip sequence: at each flip the outgoing vertex
/// `y` and the four shared hexagon corners determine the incoming vertex's
/// value through the TP3 equality.
pub fn transport_values(
    tiling: &Tiling,
    values: &BTreeMap<LatticePoint, Rat>,
    flips: &[Hexagon],
) -> Result<BTreeMap<LatticePoint, Rat>, Error> {
    let verts = tiling.vertices();
    if values.keys().cloned().collect::<BTreeSet<_>>() != verts {
        return Err(Error::KeySetMismatch(
            "values must cover exactly the diagram's vertex set".into(),
        ));
    }
    let mut cur = tiling.clone();
    let mut vals = values.clone();
    for hex in flips {
        let old = hex.rhombi(hex.orientation);
        if !old.iter().all(|r| cur.rhombi.contains(r)) {
            return Err(Error::Precondition("flip not applicable".into()));
        }
        let s = &hex.anchor;
        let u = s.plus(hex.i);
        let v = s.plus2(hex.i, hex.j);
        let w = s.plus(hex.k);
        let z = s.plus2(hex.j, hex.k);
        let y_old = hex.interior_vertex();
        let y_new = hex.flipped_vertex();
        let fetch = |p: &LatticePoint| -> Result<Rat, Error> {
            vals.get(p)
                .cloned()
                .ok_or_else(|| Error::KeySetMismatch(format!("missing value at {p}")))
        };
        let val = rat::max(fetch(&v)? + fetch(&w)?, fetch(&u)? + fetch(&z)?) - fetch(&y_old)?;
        vals.remove(&y_old);
        vals.insert(y_new, val);
        cur = flip(&cur, hex)?;
    }
    Ok(vals)
}

/// Searches `X` for a witness `i<j<k`, `x, x'` with `x_i < x'_i`,
/// `x_j > x'_j`, `x_k < x'_k` — the exact obstruction to a common tiling.
pub fn obstacle_check(shape: &BoxShape, points: &BTreeSet<LatticePoint>) -> Option<Obstacle> {
    let n = shape.n();
    for x in points {
        for xp in points {
            for i in 1..=n {
                if x.coord(i) >= xp.coord(i) {
                    continue;
                }
                for j in i + 1..=n {
                    if x.coord(j) <= xp.coord(j) {
                        continue;
                    }
                    for k in j + 1..=n {
                        if x.coord(k) < xp.coord(k) {
                            return Some(Obstacle {
                                i,
                                j,
                                k,
                                x: x.clone(),
                                x_prime: xp.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// Builds the basis assignment that puts the transported value at every
/// standard basis point (used after [`transport_values`] down to standard).
pub fn assignment_from_standard_values(
    shape: &BoxShape,
    values: &BTreeMap<LatticePoint, Rat>,
) -> Result<crate::tp::BasisAssignment, Error> {
    let bx = TruncatedBox::entire(shape.clone());
    let basis = standard_basis(&bx);
    let mut map = BTreeMap::new();
    for b in &basis {
        let v = values
            .get(b)
            .cloned()
            .ok_or_else(|| Error::KeySetMismatch(format!("missing value at {b}")))?;
        map.insert(b.clone(), v);
    }
    crate::tp::BasisAssignment::with_values(bx, map)
}

/// JSON form of a tiling: `{"a": [...], "rhombi": [{"x": [...], "i": .., "j": ..}]}`.
#[derive(Serialize, Deserialize)]
pub struct TilingJson {
    pub a: Vec<u32>,
    pub rhombi: Vec<Rhombus>,
}

impl Tiling {
    pub fn to_json(&self) -> TilingJson {
        TilingJson {
            a: self.shape.capacities().to_vec(),
            rhombi: self.rhombi.iter().cloned().collect(),
        }
    }

    pub fn from_json(j: &TilingJson) -> Result<Self, Error> {
        let shape = BoxShape::new(j.a.clone())?;
        Tiling::new(shape, j.rhombi.iter().cloned().collect())
    }
}

/// Differential suite: flip closure counts match the word-based enumerator,
/// and the extendability theorem's three tests agree.
pub fn suite_tilings(seed: u64) -> SuiteResult {
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};
    let mut rng = SmallRng::seed_from_u64(seed);
    let mut checks = 0;
    let mut failures = 0;
    for a in [
        vec![1u32, 1, 1],
        vec![1, 1, 1, 1],
        vec![1, 2, 1],
        vec![2, 2],
    ] {
        let shape = BoxShape::new(a.clone()).unwrap();
        checks += 1;
        let flips = enumerate_tilings(&shape).map(|v| v.len()).unwrap_or(0);
        let words = crate::oracle::word_tilings(&shape).len();
        if flips != words {
            failures += 1;
        }
        // random subsets: algorithm <=> obstacle-free <=> containment
        let points = shape.points();
        let tilings = enumerate_tilings(&shape).unwrap();
        for _ in 0..40 {
            let x: BTreeSet<LatticePoint> = points
                .iter()
                .filter(|_| rng.random_range(0..3) == 0)
                .cloned()
                .collect();
            checks += 1;
            let free = obstacle_check(&shape, &x).is_none();
            let algo = extend_points_to_tiling(&shape, &x);
            let contained = tilings.iter().any(|t| x.is_subset(&t.vertices()));
            let ok = match algo {
                Ok(t) => free && contained && x.is_subset(&t.vertices()) && t.is_valid(),
                Err(_) => !free && !contained,
            };
            if !ok {
                failures += 1;
            }
        }
    }
    SuiteResult {
        name: "tilings",
        checks,
        failures,
    }
}

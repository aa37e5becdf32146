//! Extending a point set to a rhombic tiling by incremental wire insertion.
//!
//! Wires are inserted in lexicographic `(color, index)` order. In the dual
//! picture, the partial diagram after inserting capacities `b` is a tiling of
//! `Z(b)`, and inserting the next wire of color `k` amounts to choosing a
//! path `P` through the current diagram from the top of the left `k`-run to
//! the top of the right `k`-run, using only reversed edges of colors `< k`.
//! Vertices strictly above `P` shift by `1_k`, vertices on `P` are doubled,
//! and every traversed edge spawns a new `(i, k)`-rhombus.
//!
//! Each requirement point `x` must sit below the new wire when `x_k < q` and
//! above it when `x_k >= q`; its current face is the dual vertex `x ∧ b`.
//! Among the admissible paths the highest one (inclusion-maximal region
//! below) is taken, which yields the height-minimal tiling, unique among
//! tilings containing `X`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{validate, Geom, Rhombus, Tiling};
use crate::domain::{BoxShape, LatticePoint};
use crate::error::Error;

/// The witness to non-extendability: `x_i < x'_i`, `x_j > x'_j`, `x_k < x'_k`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Obstacle {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub x: LatticePoint,
    pub x_prime: LatticePoint,
}

impl std::fmt::Display for Obstacle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "points {} and {} alternate on colors ({}, {}, {})",
            self.x, self.x_prime, self.i, self.j, self.k
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Below,
    On,
    Above,
}

/// Geometric split of a (doubled) plane point against the (doubled) path
/// polyline. `path2` holds doubled positions with strictly decreasing
/// `u = -x + B^k y`.
struct Splitter {
    path2: Vec<(i128, i128)>,
    u_of: fn((i128, i128), i128) -> i128,
    base_k: i128,
    start2: (i128, i128),
    end2: (i128, i128),
}

impl Splitter {
    fn new(geom: &Geom, path: &[LatticePoint], k: usize) -> Self {
        fn u_of(p: (i128, i128), base_k: i128) -> i128 {
            -p.0 + base_k * p.1
        }
        let base_k = geom.xi(k).0;
        let path2: Vec<(i128, i128)> = path
            .iter()
            .map(|p| {
                let (x, y) = geom.pos(p);
                (2 * x, 2 * y)
            })
            .collect();
        Splitter {
            start2: path2[0],
            end2: *path2.last().unwrap(),
            path2,
            u_of,
            base_k,
        }
    }

    fn split(&self, p2: (i128, i128)) -> Side {
        let u = (self.u_of)(p2, self.base_k);
        let u_start = (self.u_of)(self.start2, self.base_k);
        let u_end = (self.u_of)(self.end2, self.base_k);
        if u >= u_start {
            return if p2 == self.start2 {
                Side::On
            } else {
                Side::Below
            };
        }
        if u <= u_end {
            return if p2 == self.end2 {
                Side::On
            } else {
                Side::Below
            };
        }
        for w in self.path2.windows(2) {
            let ua = (self.u_of)(w[0], self.base_k);
            let ub = (self.u_of)(w[1], self.base_k);
            if !(ub <= u && u <= ua) {
                continue;
            }
            let d = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            let o = (p2.0 - w[0].0, p2.1 - w[0].1);
            let cross = d.0 * o.1 - d.1 * o.0;
            return match cross.cmp(&0) {
                std::cmp::Ordering::Greater => Side::Above,
                std::cmp::Ordering::Equal => Side::On,
                std::cmp::Ordering::Less => Side::Below,
            };
        }
        unreachable!("u lies between the path's endpoints");
    }
}

/// Mutable state of the incremental construction: a tiling of `Z(b)` with its
/// vertex and edge sets tracked explicitly (they are not derivable from the
/// rhombi while `b` is degenerate).
struct State {
    n: usize,
    b: Vec<u32>,
    verts: BTreeSet<LatticePoint>,
    edges: BTreeSet<(LatticePoint, usize)>,
    rhombi: BTreeSet<Rhombus>,
}

impl State {
    fn new(n: usize) -> Self {
        State {
            n,
            b: vec![0; n],
            verts: [LatticePoint::zero(n)].into_iter().collect(),
            edges: BTreeSet::new(),
            rhombi: BTreeSet::new(),
        }
    }

    /// All paths from `start` to `end` along reversed edges of colors `< k`.
    fn backward_paths(
        &self,
        start: &LatticePoint,
        end: &LatticePoint,
        k: usize,
    ) -> Vec<Vec<LatticePoint>> {
        const GUARD: usize = 1_000_000;
        let mut out = Vec::new();
        let mut cur = vec![start.clone()];
        self.backward_rec(&mut cur, end, k, &mut out);
        assert!(out.len() <= GUARD, "path enumeration guard tripped");
        out
    }

    fn backward_rec(
        &self,
        cur: &mut Vec<LatticePoint>,
        end: &LatticePoint,
        k: usize,
        out: &mut Vec<Vec<LatticePoint>>,
    ) {
        let v = cur.last().unwrap().clone();
        if &v == end {
            out.push(cur.clone());
            return;
        }
        for i in 1..k {
            if v.coord(i) == 0 {
                continue;
            }
            let prev = v.minus(i);
            if self.edges.contains(&(prev.clone(), i)) {
                cur.push(prev);
                self.backward_rec(cur, end, k, out);
                cur.pop();
            }
        }
    }

    /// Inserts the next wire of color `k`, choosing the lowest path that puts
    /// each requirement on its side. `below_req`/`above_req` hold the dual
    /// vertices that must end up weakly below/above the new wire.
    fn insert_wire(
        &mut self,
        geom: &Geom,
        k: usize,
        below_req: &BTreeSet<LatticePoint>,
        above_req: &BTreeSet<LatticePoint>,
    ) -> Result<(), Error> {
        let n = self.n;
        let start = LatticePoint::new(
            (1..=n)
                .map(|c| if c <= k { self.b[c - 1] } else { 0 })
                .collect(),
        );
        let end = LatticePoint::new(
            (1..=n)
                .map(|c| if c == k { self.b[c - 1] } else { 0 })
                .collect(),
        );
        for req in below_req.iter().chain(above_req) {
            if !self.verts.contains(req) {
                return Err(Error::TheoremViolation(format!(
                    "requirement face {req} is not a vertex of the partial diagram"
                )));
            }
        }

        // candidate paths that satisfy the side requirements
        let mut candidates: Vec<(Vec<LatticePoint>, Splitter, BTreeSet<Rhombus>)> = Vec::new();
        for path in self.backward_paths(&start, &end, k) {
            let splitter = Splitter::new(geom, &path, k);
            let vert_ok = |p: &LatticePoint, want_below: bool| {
                let (x, y) = geom.pos(p);
                let side = splitter.split((2 * x, 2 * y));
                matches!(
                    (want_below, side),
                    (true, Side::Below | Side::On) | (false, Side::Above | Side::On)
                )
            };
            if !below_req.iter().all(|p| vert_ok(p, true)) {
                continue;
            }
            if !above_req.iter().all(|p| vert_ok(p, false)) {
                continue;
            }
            let below_set: BTreeSet<Rhombus> = self
                .rhombi
                .iter()
                .filter(|r| {
                    let (ax, ay) = geom.pos(&r.anchor);
                    let ei = geom.xi(r.i);
                    let ej = geom.xi(r.j);
                    let center2 = (2 * ax + ei.0 + ej.0, 2 * ay + ei.1 + ej.1);
                    splitter.split(center2) == Side::Below
                })
                .cloned()
                .collect();
            candidates.push((path, splitter, below_set));
        }
        if candidates.is_empty() {
            return Err(Error::TheoremViolation(format!(
                "no admissible route for wire of color {k}"
            )));
        }
        // highest admissible path: it shifts the fewest vertices up by 1_k,
        // which keeps the diagram height minimal. The admissible routes form
        // a lattice, so the inclusion-maximal below-region is unique.
        let max_idx = (0..candidates.len())
            .max_by_key(|&t| candidates[t].2.len())
            .unwrap();
        let maximal = candidates[max_idx].2.clone();
        for (_, _, below) in &candidates {
            if !below.is_subset(&maximal) {
                return Err(Error::TheoremViolation(
                    "admissible wire routes are not a lattice below the highest one".into(),
                ));
            }
        }
        let (path, splitter, _) = candidates.swap_remove(max_idx);

        // rebuild the state: shift everything strictly above the path
        let mut verts = BTreeSet::new();
        for v in &self.verts {
            let (x, y) = geom.pos(v);
            match splitter.split((2 * x, 2 * y)) {
                Side::Below => {
                    verts.insert(v.clone());
                }
                Side::Above => {
                    verts.insert(v.plus(k));
                }
                Side::On => {
                    verts.insert(v.clone());
                    verts.insert(v.plus(k));
                }
            }
        }
        let mut edges = BTreeSet::new();
        for (tail, color) in &self.edges {
            let (tx, ty) = geom.pos(tail);
            let (ex, ey) = geom.xi(*color);
            let mid2 = (2 * tx + ex, 2 * ty + ey);
            match splitter.split(mid2) {
                Side::Below => {
                    edges.insert((tail.clone(), *color));
                }
                Side::Above => {
                    edges.insert((tail.plus(k), *color));
                }
                Side::On => {
                    edges.insert((tail.clone(), *color));
                    edges.insert((tail.plus(k), *color));
                }
            }
        }
        let mut rhombi = BTreeSet::new();
        for r in &self.rhombi {
            let (ax, ay) = geom.pos(&r.anchor);
            let ei = geom.xi(r.i);
            let ej = geom.xi(r.j);
            let center2 = (2 * ax + ei.0 + ej.0, 2 * ay + ei.1 + ej.1);
            match splitter.split(center2) {
                Side::Below => {
                    rhombi.insert(r.clone());
                }
                Side::Above => {
                    rhombi.insert(Rhombus {
                        anchor: r.anchor.plus(k),
                        i: r.i,
                        j: r.j,
                    });
                }
                Side::On => {
                    return Err(Error::TheoremViolation(
                        "a rhombus center lies on the wire route".into(),
                    ));
                }
            }
        }
        // the wire itself: a k-edge at every path vertex, a rhombus per step
        for v in &path {
            edges.insert((v.clone(), k));
        }
        for w in path.windows(2) {
            let i = (1..k)
                .find(|&c| w[0].coord(c) == w[1].coord(c) + 1)
                .expect("path step uses a color below k");
            rhombi.insert(Rhombus {
                anchor: w[1].clone(),
                i,
                j: k,
            });
        }
        self.verts = verts;
        self.edges = edges;
        self.rhombi = rhombi;
        self.b[k - 1] += 1;
        Ok(())
    }
}

/// Extends `X ⊆ B(a)` to a tiling whose vertex set contains it, or returns
/// the obstacle witness. The result is the height-minimal such tiling and is
/// unique among the minimal ones; for `X = ∅` it is the standard tiling.
pub fn extend_points_to_tiling(
    shape: &BoxShape,
    points: &BTreeSet<LatticePoint>,
) -> Result<Tiling, Obstacle> {
    for p in points {
        assert!(shape.contains(p), "point {p} outside the box");
    }
    if let Some(w) = super::obstacle_check(shape, points) {
        return Err(w);
    }
    let geom = Geom::new(shape);
    let n = shape.n();
    let mut state = State::new(n);
    for k in 1..=n {
        for q in 1..=shape.cap(k) {
            let below_req: BTreeSet<LatticePoint> = points
                .iter()
                .filter(|x| x.coord(k) < q)
                .map(|x| meet_with(x, &state.b))
                .collect();
            let above_req: BTreeSet<LatticePoint> = points
                .iter()
                .filter(|x| x.coord(k) >= q)
                .map(|x| meet_with(x, &state.b))
                .collect();
            // obstacle-freeness guarantees every insertion succeeds
            if let Err(e) = state.insert_wire(&geom, k, &below_req, &above_req) {
                panic!("wire insertion failed on an obstacle-free set: {e}");
            }
        }
    }
    let tiling = Tiling::new_unchecked(shape.clone(), state.rhombi);
    assert!(
        validate(shape, tiling.rhombi()),
        "wire insertion produced an invalid diagram"
    );
    let verts = tiling.vertices();
    for p in points {
        assert!(verts.contains(p), "extension lost the point {p}");
    }
    Ok(tiling)
}

fn meet_with(x: &LatticePoint, b: &[u32]) -> LatticePoint {
    LatticePoint::new(
        x.coords()
            .iter()
            .zip(b)
            .map(|(&xv, &bv)| xv.min(bv))
            .collect(),
    )
}

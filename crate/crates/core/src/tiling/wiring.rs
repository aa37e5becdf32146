//! The wiring (de Bruijn) dual of a tiling.
//!
//! Wire `(i, q)` follows the dual path of the q-th `i`-edge of the left
//! boundary; it crosses every wire of every other color exactly once and no
//! wire of its own color. The diagram is stored purely combinatorially as the
//! crossing sequence along each wire; anchors are recovered by walking a wire
//! while counting how many wires of each color currently run below.

use std::collections::{BTreeMap, BTreeSet};

use super::{Rhombus, Tiling};
use crate::domain::LatticePoint;
use crate::error::Error;

/// A wire identity: color and index within the color, both 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct WireId {
    pub color: usize,
    pub index: usize,
}

/// A wiring diagram: for each wire, the ordered sequence of wires it crosses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Wiring {
    pub n: usize,
    pub capacities: Vec<u32>,
    pub crossings: BTreeMap<WireId, Vec<WireId>>,
}

/// Walks every dual path of the tiling.
pub fn to_wiring(tiling: &Tiling) -> Wiring {
    let shape = tiling.shape();
    let n = shape.n();
    // index rhombi by their sides for O(1) stepping
    let mut by_side: BTreeMap<(LatticePoint, usize), Vec<&Rhombus>> = BTreeMap::new();
    for r in tiling.rhombi() {
        for side in r.sides() {
            by_side.entry(side).or_default().push(r);
        }
    }
    let mut crossings = BTreeMap::new();
    for color in 1..=n {
        for index in 1..=shape.cap(color) as usize {
            let mut seq = Vec::new();
            // q-th color edge on the left boundary
            let mut edge = (
                LatticePoint::new(
                    (1..=n)
                        .map(|c| {
                            if c < color {
                                shape.cap(c)
                            } else if c == color {
                                index as u32 - 1
                            } else {
                                0
                            }
                        })
                        .collect(),
                ),
                color,
            );
            let mut prev: Option<&Rhombus> = None;
            while let Some(cands) = by_side.get(&edge) {
                let Some(&r) = cands.iter().find(|&&cand| prev != Some(cand)) else {
                    break;
                };
                let other = if r.i == color { r.j } else { r.i };
                seq.push(WireId {
                    color: other,
                    index: r.anchor.coord(other) as usize + 1,
                });
                // cross to the opposite side of the rhombus
                edge = if edge.0 == r.anchor {
                    (r.anchor.plus(other), color)
                } else {
                    (r.anchor.clone(), color)
                };
                prev = Some(r);
            }
            crossings.insert(WireId { color, index }, seq);
        }
    }
    Wiring {
        n,
        capacities: shape.capacities().to_vec(),
        crossings,
    }
}

/// Rebuilds the rhombus set from crossing sequences alone.
///
/// Walking wire `w = (i, q)` left to right, a counter `s_c` tracks how many
/// `c`-wires run below the current position: colors `c < i` start with all
/// their wires below and lose one at each crossing, colors `c > i` start with
/// none and gain one. At a crossing the partner wire passes through the
/// point, so the anchor coordinate is `s_c - 1` for partners of lower color.
pub fn from_wiring(wiring: &Wiring) -> Result<Tiling, Error> {
    let n = wiring.n;
    let shape = crate::domain::BoxShape::new(wiring.capacities.clone())?;
    let mut rhombi: BTreeSet<Rhombus> = BTreeSet::new();
    let mut seen: BTreeMap<(WireId, WireId), LatticePoint> = BTreeMap::new();
    for (wire, seq) in &wiring.crossings {
        let i = wire.color;
        let mut below: Vec<i64> = (1..=n)
            .map(|c| if c < i { i64::from(shape.cap(c)) } else { 0 })
            .collect();
        below[i - 1] = wire.index as i64 - 1;
        for partner in seq {
            let c = partner.color;
            let mut anchor: Vec<i64> = below.clone();
            if c < i {
                anchor[c - 1] -= 1; // the partner itself is not below the point
                below[c - 1] -= 1;
            } else {
                below[c - 1] += 1;
            }
            // same-color wires are nested, so the running count must agree
            // with the partner's own index
            if anchor[c - 1] != partner.index as i64 - 1 || anchor.iter().any(|&v| v < 0) {
                return Err(Error::Parse("inconsistent crossing sequence".into()));
            }
            let anchor = LatticePoint::new(anchor.iter().map(|&v| v as u32).collect());
            let key = if *wire < *partner {
                (*wire, *partner)
            } else {
                (*partner, *wire)
            };
            if let Some(prev) = seen.get(&key) {
                if prev != &anchor {
                    return Err(Error::Parse(
                        "the two walks of a crossing disagree on its anchor".into(),
                    ));
                }
            } else {
                seen.insert(key, anchor.clone());
                rhombi.insert(Rhombus {
                    anchor,
                    i: i.min(c),
                    j: i.max(c),
                });
            }
        }
    }
    Tiling::new(shape, rhombi)
}

/// Triples of pairwise-crossing wires whose triangle no other wire enters,
/// classified as Δ (the `ik` crossing above the `j`-wire) or ∇ (below).
/// These correspond exactly to the ∨- and ∧-hexagons of the tiling.
pub fn inseparable_triangles(wiring: &Wiring) -> Vec<(WireId, WireId, WireId, bool)> {
    let mut out = Vec::new();
    let wires: Vec<WireId> = wiring.crossings.keys().copied().collect();
    let pos = |w: &WireId, other: &WireId| -> Option<usize> {
        wiring.crossings[w].iter().position(|c| c == other)
    };
    for a in &wires {
        for b in &wires {
            if b.color <= a.color {
                continue;
            }
            for c in &wires {
                if c.color <= b.color {
                    continue;
                }
                // adjacency of the three crossings along each wire
                let (ab_on_a, ac_on_a) = (pos(a, b).unwrap(), pos(a, c).unwrap());
                let (ab_on_b, bc_on_b) = (pos(b, a).unwrap(), pos(b, c).unwrap());
                let (ac_on_c, bc_on_c) = (pos(c, a).unwrap(), pos(c, b).unwrap());
                let adjacent = ab_on_a.abs_diff(ac_on_a) == 1
                    && ab_on_b.abs_diff(bc_on_b) == 1
                    && ac_on_c.abs_diff(bc_on_c) == 1;
                if !adjacent {
                    continue;
                }
                // Δ iff the b-wire passes below the a∩c crossing: wires of
                // higher color start above and sink below once crossed, so b
                // is below there exactly when a crossed it first.
                let delta = ab_on_a < ac_on_a;
                out.push((*a, *b, *c, delta));
            }
        }
    }
    out
}

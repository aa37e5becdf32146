//! Independent brute-force oracles for differential testing.
//!
//! Everything in this module deliberately avoids the code paths it is used to
//! check: the propagation solver knows nothing about the layer/eta evaluation
//! order of [`crate::tp::reconstruct`], and the word-based tiling enumerator
//! builds rhombus sets from swap sequences without ever flipping a hexagon.
//! The [`run_suite`] entry point drives the differential suites behind the
//! `oracle` CLI subcommand.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::domain::{corteges3, corteges4, standard_basis, BoxShape, LatticePoint, TruncatedBox};
use crate::error::Error;
use crate::rat::{self, Rat};
use crate::tp::{reconstruct, verify, BasisAssignment};

/// Solves for the unique TP-function extending a basis assignment by blind
/// fixed-point propagation over all corteges.
///
/// Each relation `A + B = max(C+D, E+F)` determines `A` from the other five
/// values (and symmetrically `B`); the solver repeatedly scans every cortege
/// and fills in whichever of the two left-hand points is still unknown. It
/// never solves for a point inside the max, so every derived value is forced.
/// Returns `None` if propagation stalls before the box is covered.
pub fn propagation_solve(g: &BasisAssignment) -> Option<BTreeMap<LatticePoint, Rat>> {
    let bx = g.box_();
    let mut values: BTreeMap<LatticePoint, Rat> = g.values().clone();
    let target = bx.points().len();

    // (A, B, C, D, E, F) tuples for both relation kinds.
    let mut relations: Vec<[LatticePoint; 6]> = Vec::new();
    for c in corteges3(bx) {
        relations.push(c.points());
    }
    for c in corteges4(bx) {
        relations.push(c.points());
    }

    loop {
        if values.len() == target {
            return Some(values);
        }
        let mut progressed = false;
        for rel in &relations {
            let [a, b, c, d, e, f] = rel;
            let known = |p: &LatticePoint| values.contains_key(p);
            if !(known(c) && known(d) && known(e) && known(f)) {
                continue;
            }
            let rhs = rat::max(
                values[c].clone() + values[d].clone(),
                values[e].clone() + values[f].clone(),
            );
            match (known(a), known(b)) {
                (true, false) => {
                    let v = rhs - values[a].clone();
                    values.insert(b.clone(), v);
                    progressed = true;
                }
                (false, true) => {
                    let v = rhs - values[b].clone();
                    values.insert(a.clone(), v);
                    progressed = true;
                }
                _ => {}
            }
        }
        if !progressed {
            return None;
        }
    }
}

/// Enumerates every rhombic tiling of the zonogon `Z(a)` from scratch.
///
/// A tiling is produced as the rhombus set of a sequence of adjacent
/// transpositions turning the increasing color word `1^{a_1} ... n^{a_n}`
/// into the decreasing one; swapping positions holding colors `i < j` places
/// an `ij`-rhombus anchored at the color counts to the left of the swap.
/// Distinct sequences reaching the same tiling collapse by set equality.
/// Rhombi are returned as `(anchor, i, j)` triples with `i < j` 1-based.
pub fn word_tilings(shape: &BoxShape) -> Vec<BTreeSet<(LatticePoint, usize, usize)>> {
    type Tiling = BTreeSet<(LatticePoint, usize, usize)>;
    let n = shape.n();
    let start: Vec<usize> = (1..=n)
        .flat_map(|i| vec![i; shape.cap(i) as usize])
        .collect();

    fn futures(
        word: &[usize],
        n: usize,
        memo: &mut BTreeMap<Vec<usize>, Vec<Tiling>>,
    ) -> Vec<Tiling> {
        if let Some(hit) = memo.get(word) {
            return hit.clone();
        }
        let mut out: BTreeSet<Tiling> = BTreeSet::new();
        let mut sorted = true;
        for t in 0..word.len().saturating_sub(1) {
            if word[t] < word[t + 1] {
                sorted = false;
                let mut counts = vec![0u32; n];
                for &c in &word[..t] {
                    counts[c - 1] += 1;
                }
                let rhombus = (LatticePoint::new(counts), word[t], word[t + 1]);
                let mut next = word.to_vec();
                next.swap(t, t + 1);
                for mut fut in futures(&next, n, memo) {
                    fut.insert(rhombus.clone());
                    out.insert(fut);
                }
            }
        }
        if sorted {
            // decreasing word reached: the empty completion
            out.insert(Tiling::new());
        }
        let res: Vec<Tiling> = out.into_iter().collect();
        memo.insert(word.to_vec(), res.clone());
        res
    }

    futures(&start, n, &mut BTreeMap::new())
}

/// Draws a uniform random integer assignment on the standard basis.
pub fn random_assignment(
    bx: &TruncatedBox,
    range: (i64, i64),
    rng: &mut SmallRng,
) -> BasisAssignment {
    let values: BTreeMap<_, _> = standard_basis(bx)
        .into_iter()
        .map(|b| {
            let v = if b.is_zero() {
                0
            } else {
                rng.random_range(range.0..=range.1)
            };
            (b, rat::int(v))
        })
        .collect();
    BasisAssignment::new(bx.clone(), values).expect("basis keys")
}

/// All shapes with `1 <= n <= max_n` and `|a| <= max_total`.
pub fn shapes_up_to(max_n: usize, max_total: u32) -> Vec<BoxShape> {
    let mut out = Vec::new();
    fn rec(cur: &mut Vec<u32>, left: u32, max_n: usize, out: &mut Vec<BoxShape>) {
        if !cur.is_empty() {
            out.push(BoxShape::new(cur.clone()).unwrap());
        }
        if cur.len() == max_n {
            return;
        }
        for v in 1..=left {
            cur.push(v);
            rec(cur, left - v, max_n, out);
            cur.pop();
        }
    }
    rec(&mut Vec::new(), max_total, max_n, &mut out);
    out
}

/// Outcome of one differential suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: u64,
    pub failures: u64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Reconstruction vs. blind propagation, round-trips, and TP4-from-TP3,
/// across every box with `n <= max_n` and small total size.
pub fn suite_reconstruct(max_n: usize, seed: u64) -> SuiteResult {
    let mut rng = SmallRng::seed_from_u64(seed);
    let mut checks = 0;
    let mut failures = 0;
    for shape in shapes_up_to(max_n, 5) {
        let total = shape.total();
        for m in 0..=total {
            for mp in m..=total {
                let bx = TruncatedBox::new(shape.clone(), m, mp).unwrap();
                for _ in 0..3 {
                    let g = random_assignment(&bx, (-20, 20), &mut rng);
                    checks += 1;
                    let f = match reconstruct(&g) {
                        Ok(f) => f,
                        Err(_) => {
                            failures += 1;
                            continue;
                        }
                    };
                    let ok_round = f.restrict_to_basis() == g;
                    let ok_prop = propagation_solve(&g).as_ref() == Some(f.values());
                    let ok_tp4 = verify(&f).is_empty();
                    if !(ok_round && ok_prop && ok_tp4) {
                        failures += 1;
                    }
                }
            }
        }
    }
    SuiteResult {
        name: "reconstruct",
        checks,
        failures,
    }
}

/// `cortege` feasibility vs. a brute-force membership scan.
pub fn suite_corteges(max_n: usize, _seed: u64) -> SuiteResult {
    let mut checks = 0;
    let mut failures = 0;
    for shape in shapes_up_to(max_n, 5) {
        let total = shape.total();
        for m in 0..=total {
            for mp in m..=total {
                let bx = TruncatedBox::new(shape.clone(), m, mp).unwrap();
                checks += 1;
                let fine3 = corteges3(&bx)
                    .iter()
                    .all(|c| c.points().iter().all(|p| bx.contains(p)));
                let fine4 = corteges4(&bx)
                    .iter()
                    .all(|c| c.points().iter().all(|p| bx.contains(p)));
                if !(fine3 && fine4) {
                    failures += 1;
                }
            }
        }
    }
    SuiteResult {
        name: "corteges",
        checks,
        failures,
    }
}

/// Runs the named suite, or all of them, printing one line per suite.
pub fn run_suite(which: &str, max_n: usize, seed: u64) -> Result<Vec<SuiteResult>, Error> {
    let mut out = Vec::new();
    let all = which == "all";
    let mut known = false;
    if all || which == "reconstruct" {
        known = true;
        out.push(suite_reconstruct(max_n, seed));
    }
    if all || which == "corteges" {
        known = true;
        out.push(suite_corteges(max_n, seed));
    }
    if all || which == "flow" {
        known = true;
        out.push(crate::flow::suite_flow(max_n, seed));
    }
    if all || which == "embedding" {
        known = true;
        out.push(crate::embed::suite_embedding(seed));
    }
    if all || which == "tilings" {
        known = true;
        out.push(crate::tiling::suite_tilings(seed));
    }
    if all || which == "laurent" {
        known = true;
        out.push(crate::laurent::suite_laurent(max_n.min(5), seed));
    }
    if !known {
        return Err(Error::Precondition(format!("unknown suite `{which}`")));
    }
    Ok(out)
}

//! The flow-in-matrix model on the grid `Γ_{n,m'}`.
//!
//! The grid has vertices `v_{pq}` for columns `p ∈ [n]` and rows `q ∈ [m']`,
//! with edges `v_{pq} → v_{p-1,q}` (left) and `v_{pq} → v_{p,q+1}` (up).
//! Sources are the bottom-row vertices `s_p = v_{p,1}`, sinks the left-column
//! vertices `t_q = v_{1,q}`. A flow for `S ⊆ [n]` is a system of paths from
//! `{s_p : p ∈ S}`, admissible when the paths are pairwise vertex-disjoint
//! and the sinks used are exactly `t_1, ..., t_{|S|}`; disjointness then
//! forces the i-th smallest source onto `t_i`.
//!
//! `f_w(S)` is the maximum total vertex weight of an admissible flow. The
//! normative semantics of [`max_weight_value`] is exhaustive enumeration.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::domain::{standard_basis, LatticePoint, TruncatedBox};
use crate::error::Error;
use crate::oracle::SuiteResult;
use crate::rat::{self, Rat};
use crate::tp::{verify, BasisAssignment, ValuedFunction};

/// The grid `Γ_{n,m'}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Grid {
    pub n: usize,
    pub m_prime: usize,
}

impl Grid {
    pub fn new(n: usize, m_prime: usize) -> Self {
        Grid { n, m_prime }
    }
}

/// A single source-to-sink path, stored as its `(p, q)` vertex sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FlowPath(pub Vec<(usize, usize)>);

impl FlowPath {
    pub fn source(&self) -> (usize, usize) {
        self.0[0]
    }

    pub fn sink(&self) -> (usize, usize) {
        *self.0.last().unwrap()
    }
}

/// An admissible flow: vertex-disjoint paths onto consecutive sinks.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Flow(pub Vec<FlowPath>);

impl Flow {
    pub fn vertices(&self) -> BTreeSet<(usize, usize)> {
        self.0.iter().flat_map(|p| p.0.iter().copied()).collect()
    }

    /// Covers every vertex of the `m × m` corner square.
    pub fn is_strong(&self, m: u32) -> bool {
        let m = m as usize;
        let vs = self.vertices();
        (1..=m).all(|p| (1..=m).all(|q| vs.contains(&(p, q))))
    }
}

fn routes(
    from: (usize, usize),
    sink_row: usize,
    used: &BTreeSet<(usize, usize)>,
) -> Vec<Vec<(usize, usize)>> {
    // all monotone routes from `from` to (1, sink_row) avoiding `used`
    fn rec(
        cur: &mut Vec<(usize, usize)>,
        sink_row: usize,
        used: &BTreeSet<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let (p, q) = *cur.last().unwrap();
        if (p, q) == (1, sink_row) {
            out.push(cur.clone());
            return;
        }
        if q < sink_row && !used.contains(&(p, q + 1)) {
            cur.push((p, q + 1));
            rec(cur, sink_row, used, out);
            cur.pop();
        }
        if p > 1 && !used.contains(&(p - 1, q)) {
            cur.push((p - 1, q));
            rec(cur, sink_row, used, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if !used.contains(&from) {
        let mut cur = vec![from];
        rec(&mut cur, sink_row, used, &mut out);
    }
    out
}

/// Exactly the admissible flows with source set `{s_p : p ∈ S}`.
///
/// `sources` must be strictly increasing 1-based columns with `|S| <= m'`;
/// the path from the i-th source ends at `t_i`.
pub fn enumerate_admissible_flows(grid: &Grid, sources: &[usize]) -> Result<Vec<Flow>, Error> {
    if sources.len() > grid.m_prime {
        return Err(Error::Precondition(format!(
            "|S| = {} exceeds m' = {}",
            sources.len(),
            grid.m_prime
        )));
    }
    if sources.windows(2).any(|w| w[0] >= w[1]) || sources.iter().any(|&p| p == 0 || p > grid.n) {
        return Err(Error::Precondition(
            "sources must be strictly increasing columns in [n]".into(),
        ));
    }
    fn rec(
        sources: &[usize],
        idx: usize,
        used: &mut BTreeSet<(usize, usize)>,
        acc: &mut Vec<FlowPath>,
        flows: &mut Vec<Flow>,
    ) {
        if idx == sources.len() {
            flows.push(Flow(acc.clone()));
            return;
        }
        let from = (sources[idx], 1);
        for route in routes(from, idx + 1, used) {
            for v in &route {
                used.insert(*v);
            }
            acc.push(FlowPath(route.clone()));
            rec(sources, idx + 1, used, acc, flows);
            acc.pop();
            for v in &route {
                used.remove(v);
            }
        }
    }
    let mut flows = Vec::new();
    rec(
        sources,
        0,
        &mut BTreeSet::new(),
        &mut Vec::new(),
        &mut flows,
    );
    Ok(flows)
}

/// Admissible flows covering the whole `m × m` corner square.
pub fn strong_flows(grid: &Grid, sources: &[usize], m: u32) -> Result<Vec<Flow>, Error> {
    Ok(enumerate_admissible_flows(grid, sources)?
        .into_iter()
        .filter(|f| f.is_strong(m))
        .collect())
}

/// The big-M penalty block of a weight matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Penalty {
    pub m: u32,
    pub big_m: Rat,
}

/// An `n × m'` vertex weight matrix, optionally of the penalized class.
///
/// `entries[q-1][p-1]` holds `w'_{pq}` (row 1 is the bottom row). With a
/// penalty `(m, M)` the effective weight adds `M` on `{(p,q) : 2 <= p <= m,
/// q < p}` and `-m(m-1)/2 · M` at `(1,1)`, which forces optima onto flows
/// covering the corner square.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightMatrix {
    pub n: usize,
    pub m_prime: usize,
    pub entries: Vec<Vec<Rat>>,
    pub penalty: Option<Penalty>,
}

impl WeightMatrix {
    pub fn new(n: usize, m_prime: usize, entries: Vec<Vec<Rat>>) -> Result<Self, Error> {
        if entries.len() != m_prime || entries.iter().any(|r| r.len() != n) {
            return Err(Error::DomainMismatch(format!(
                "expected {m_prime} rows of {n} entries"
            )));
        }
        Ok(WeightMatrix {
            n,
            m_prime,
            entries,
            penalty: None,
        })
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.n, self.m_prime)
    }

    /// Base entry `w'_{pq}`, 1-based.
    pub fn base(&self, p: usize, q: usize) -> &Rat {
        &self.entries[q - 1][p - 1]
    }

    /// Effective vertex weight including the penalty block.
    pub fn weight(&self, p: usize, q: usize) -> Rat {
        let mut w = self.base(p, q).clone();
        if let Some(pen) = &self.penalty {
            let m = pen.m as usize;
            if p >= 2 && p <= m && q < p {
                w += pen.big_m.clone();
            }
            if (p, q) == (1, 1) {
                let c = rat::int((m as i64) * (m as i64 - 1) / 2);
                w -= c * pen.big_m.clone();
            }
        }
        w
    }

    pub fn flow_weight(&self, flow: &Flow) -> Rat {
        let mut total = rat::zero();
        for path in &flow.0 {
            for &(p, q) in &path.0 {
                total += self.weight(p, q);
            }
        }
        total
    }
}

/// `f_w(S)`: the maximum weight of an admissible flow for `S`, by exhaustive
/// enumeration. The empty set yields 0 (the empty flow).
pub fn max_weight_value(w: &WeightMatrix, sources: &[usize]) -> Result<Rat, Error> {
    let flows = enumerate_admissible_flows(&w.grid(), sources)?;
    let mut best: Option<Rat> = None;
    for f in &flows {
        let val = w.flow_weight(f);
        if best.as_ref().is_none_or(|b| &val > b) {
            best = Some(val);
        }
    }
    best.ok_or_else(|| {
        Error::TheoremViolation(format!("no admissible flow for sources {sources:?}"))
    })
}

/// The essential index pairs `Π = {(p,q) : m+1 <= p <= n, q <= min(p, m')}`.
pub fn in_pi(p: usize, q: usize, n: usize, m: u32, m_prime: usize) -> bool {
    p > m as usize && p <= n && q >= 1 && q <= p.min(m_prime)
}

/// The bijection `π : Π → basis \ {[1..m]}` for the truncated cube: the
/// interval `[p-q+1 .. p]` when `q >= m`, else the sint
/// `[1..m-q] ∪ [p-q+1..p]` of size `m`. Returned as a 0/1 point on `[n]`.
pub fn pi_point(p: usize, q: usize, n: usize, m: u32) -> LatticePoint {
    let mut members: Vec<usize> = (p - q + 1..=p).collect();
    if (q as u32) < m {
        members.extend(1..=(m as usize - q));
    }
    LatticePoint::from_subset(n, &members)
}

/// The map μ: basis values on a truncated cube to the unique matrix of the
/// zero-padded class generating them.
///
/// Requires a normalized assignment: `g([1..m]) = 0` (for `m = 0` this is the
/// zero-point convention).
pub fn matrix_from_basis(g: &BasisAssignment) -> Result<WeightMatrix, Error> {
    let bx = g.box_();
    if !bx.shape().is_cube() {
        return Err(Error::Precondition(
            "matrix_from_basis expects a truncated Boolean cube".into(),
        ));
    }
    let n = bx.n();
    let m = bx.m();
    let m_prime = bx.m_prime() as usize;
    let base_interval = LatticePoint::from_subset(n, &(1..=m as usize).collect::<Vec<_>>());
    if g.value(&base_interval) != &rat::zero() {
        return Err(Error::Precondition(
            "assignment must be normalized: g([1..m]) = 0".into(),
        ));
    }

    let gv = |p: usize, q: usize| -> Rat { g.value(&pi_point(p, q, n, m)).clone() };
    let mut entries = vec![vec![rat::zero(); n]; m_prime];
    for p in (m as usize + 1)..=n {
        for q in 1..=p.min(m_prime) {
            let v = if p == m as usize + 1 && q == 1 {
                gv(p, q)
            } else if q == 1 {
                gv(p, 1) - gv(p - 1, 1)
            } else if p == (m as usize + 1).max(q) {
                gv(p, q) - gv(p, q - 1)
            } else {
                gv(p, q) + gv(p - 1, q - 1) - gv(p - 1, q) - gv(p, q - 1)
            };
            entries[q - 1][p - 1] = v;
        }
    }

    let mut w = WeightMatrix::new(n, m_prime, entries)?;
    if m >= 2 {
        // exact big-M, strictly above the n·m·max|w'| sufficiency bound
        let max_abs = rat::max_abs(w.entries.iter().flatten(), rat::zero());
        let big_m = rat::int((n as i64) * (m as i64)) * max_abs + rat::int(1);
        w.penalty = Some(Penalty { m, big_m });
    }
    Ok(w)
}

/// The map φ: evaluates `f_w` on every point of a truncated cube.
///
/// The result is always a TP-function; this is re-verified and a failure is
/// surfaced as [`Error::TheoremViolation`].
pub fn generate_function(w: &WeightMatrix, bx: &TruncatedBox) -> Result<ValuedFunction, Error> {
    if !bx.shape().is_cube() {
        return Err(Error::Precondition(
            "generate_function expects a truncated Boolean cube".into(),
        ));
    }
    if bx.n() != w.n || bx.m_prime() as usize > w.m_prime {
        return Err(Error::DomainMismatch(format!(
            "box C_{}^{} does not fit a {} x {} matrix",
            bx.m(),
            bx.m_prime(),
            w.n,
            w.m_prime
        )));
    }
    if let Some(pen) = &w.penalty {
        if pen.m != bx.m() {
            return Err(Error::DomainMismatch(
                "penalty block and box truncation disagree".into(),
            ));
        }
    }
    let mut values = std::collections::BTreeMap::new();
    for x in bx.points() {
        let sources = x.to_subset();
        values.insert(x, max_weight_value(w, &sources)?);
    }
    let f = ValuedFunction::new(bx.clone(), values)?;
    let report = verify(&f);
    if !report.is_empty() {
        return Err(Error::TheoremViolation(format!(
            "flow-generated function violates {} relation(s)",
            report.len()
        )));
    }
    Ok(f)
}

/// The lowest admissible flow for an interval `[c..d]` or a sesqui-interval
/// `[1..d1] ∪ [c2..d2]` of size `m`, built from the explicit three-turn path
/// shapes. For intervals this is the unique admissible flow.
pub fn lowest_flow(grid: &Grid, sources: &[usize], m: u32) -> Result<Flow, Error> {
    let k = sources.len();
    if k > grid.m_prime {
        return Err(Error::Precondition("|S| exceeds m'".into()));
    }
    if k == 0 {
        return Ok(Flow(vec![]));
    }
    let is_interval = sources.windows(2).all(|w| w[1] == w[0] + 1);
    let mut paths = Vec::new();
    if is_interval {
        // P_i climbs column c+i-1 to row i, then runs left to the sink.
        for i in 1..=k {
            let col = sources[0] + i - 1;
            let mut verts: Vec<(usize, usize)> = (1..=i).map(|q| (col, q)).collect();
            verts.extend((1..col).rev().map(|p| (p, i)));
            paths.push(FlowPath(verts));
        }
        return Ok(Flow(paths));
    }
    // sesqui-interval [1..d1] ∪ [c2..d2] of size m
    if k as u32 != m {
        return Err(Error::Precondition(
            "a sesqui-interval flow needs |S| = m".into(),
        ));
    }
    let d1 = sources
        .iter()
        .zip(1..)
        .take_while(|&(&p, t)| p == t)
        .count();
    let tail = &sources[d1..];
    if d1 == 0 || tail.is_empty() || tail.windows(2).any(|w| w[1] != w[0] + 1) || tail[0] <= d1 + 1
    {
        return Err(Error::Precondition(
            "sources must form an interval or a sesqui-interval [1..d1] ∪ [c2..d2]".into(),
        ));
    }
    let c2 = tail[0];
    for i in 1..=d1 {
        let verts: Vec<(usize, usize)> = (1..=i)
            .map(|q| (i, q))
            .chain((1..i).rev().map(|p| (p, i)))
            .collect();
        paths.push(FlowPath(verts));
    }
    for i in d1 + 1..=k {
        let ip = i - d1;
        let col = c2 + ip - 1;
        // up to row ip, left to column d1+ip, up to row i, left to the sink
        let mut verts: Vec<(usize, usize)> = (1..=ip).map(|q| (col, q)).collect();
        verts.extend((d1 + ip..col).rev().map(|p| (p, ip)));
        verts.extend((ip + 1..=i).map(|q| (d1 + ip, q)));
        verts.extend((1..d1 + ip).rev().map(|p| (p, i)));
        paths.push(FlowPath(verts));
    }
    Ok(Flow(paths))
}

/// Differential suite: flow-generated functions are TP and the bijection
/// triangle closes on random assignments.
pub fn suite_flow(max_n: usize, seed: u64) -> SuiteResult {
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};
    let mut rng = SmallRng::seed_from_u64(seed);
    let mut checks = 0;
    let mut failures = 0;
    let n = max_n.clamp(3, 6);

    // random matrices generate TP-functions
    for _ in 0..5 {
        let m_prime = rng.random_range(2..=n.min(4));
        let entries: Vec<Vec<Rat>> = (0..m_prime)
            .map(|_| (0..n).map(|_| rat::int(rng.random_range(-9..=9))).collect())
            .collect();
        let w = WeightMatrix::new(n, m_prime, entries).unwrap();
        let bx = TruncatedBox::cube(n, 0, m_prime as u32).unwrap();
        checks += 1;
        if generate_function(&w, &bx).is_err() {
            failures += 1;
        }
    }

    // φ ∘ μ ∘ ρ = id on random normalized assignments
    for m in 0..=2u32 {
        for mp in (m.max(1))..=(n as u32) {
            let bx = TruncatedBox::cube(n, m, mp).unwrap();
            let norm_pt = LatticePoint::from_subset(n, &(1..=m as usize).collect::<Vec<_>>());
            let mut values = std::collections::BTreeMap::new();
            for b in standard_basis(&bx) {
                let v = if b == norm_pt {
                    rat::zero()
                } else {
                    rat::int(rng.random_range(-9..=9))
                };
                values.insert(b, v);
            }
            let g = BasisAssignment::with_values(bx.clone(), values).unwrap();
            checks += 1;
            let ok = matrix_from_basis(&g)
                .and_then(|w| generate_function(&w, &bx))
                .map(|f| f.restrict_to_basis() == g)
                .unwrap_or(false);
            if !ok {
                failures += 1;
            }
        }
    }

    SuiteResult {
        name: "flow",
        checks,
        failures,
    }
}

/// Serde form of the weight matrix JSON: row-major entries with row 1 first.
#[derive(Serialize, Deserialize)]
pub struct WeightMatrixJson {
    pub n: usize,
    pub m_prime: usize,
    #[serde(default)]
    pub m: u32,
    pub entries: Vec<Vec<String>>,
}

impl WeightMatrix {
    pub fn to_json(&self) -> WeightMatrixJson {
        WeightMatrixJson {
            n: self.n,
            m_prime: self.m_prime,
            m: self.penalty.as_ref().map_or(0, |p| p.m),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(rat::to_string).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &WeightMatrixJson) -> Result<Self, Error> {
        let entries = j
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| rat::parse(s))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut w = WeightMatrix::new(j.n, j.m_prime, entries)?;
        if j.m >= 2 {
            let max_abs = rat::max_abs(w.entries.iter().flatten(), rat::zero());
            let big_m = rat::int((j.n as i64) * (j.m as i64)) * max_abs + rat::int(1);
            w.penalty = Some(Penalty { m: j.m, big_m });
        }
        Ok(w)
    }
}

//! Tropical Laurent polynomials: every value of a TP-function is a max of
//! integer-coefficient linear forms in basis values.
//!
//! Each admissible flow contributes one monomial, read off its turns: a path
//! turning left at `v_{pq}` contributes `+π(p,q) - π(p-1,q-1)` and a right
//! turn the negatives, with terms outside the essential index set dropped; a
//! path whose first step is horizontal (or which is the single vertex
//! `v_{11}`) counts a left turn at its source. All coefficients land in
//! `{-1, 0, 1, 2}`.
//!
//! Truncated cubes keep only *strong* flows (covering the corner square);
//! general boxes keep only *regular* flows (zero excess balance) with
//! coefficients pushed onto fints through the block projection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::{BoxShape, LatticePoint, TruncatedBox};
use crate::embed::{excess_of_set, BlockStructure};
use crate::error::Error;
use crate::flow::{enumerate_admissible_flows, in_pi, pi_point, strong_flows, Flow, Grid};
use crate::oracle::SuiteResult;
use crate::rat::{self, Rat};

/// One tropical monomial: an integer-coefficient linear form in basis values.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Monomial {
    pub terms: BTreeMap<LatticePoint, i64>,
}

impl Monomial {
    fn add(&mut self, point: LatticePoint, coeff: i64) {
        let entry = self.terms.entry(point.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&point);
        }
    }

    /// Every coefficient lies in `{-1, 0, 1, 2}`.
    pub fn coefficients_in_range(&self) -> bool {
        self.terms.values().all(|&c| (-1..=2).contains(&c))
    }

    pub fn evaluate(&self, g: &BTreeMap<LatticePoint, Rat>) -> Result<Rat, Error> {
        let mut v = rat::zero();
        for (p, &c) in &self.terms {
            let gv = g
                .get(p)
                .ok_or_else(|| Error::KeySetMismatch(format!("missing basis value at {p}")))?;
            v += rat::int(c) * gv.clone();
        }
        Ok(v)
    }
}

/// A tropical Laurent polynomial: `max` over monomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TropicalPolynomial {
    pub target: LatticePoint,
    pub monomials: Vec<Monomial>,
}

impl TropicalPolynomial {
    fn from_monomials(target: LatticePoint, mut monomials: Vec<Monomial>) -> Self {
        monomials.sort();
        monomials.dedup();
        TropicalPolynomial { target, monomials }
    }
}

/// `max` over the monomials at the given basis values.
pub fn evaluate(poly: &TropicalPolynomial, g: &BTreeMap<LatticePoint, Rat>) -> Result<Rat, Error> {
    let mut best: Option<Rat> = None;
    for m in &poly.monomials {
        let v = m.evaluate(g)?;
        if best.as_ref().is_none_or(|b| &v > b) {
            best = Some(v);
        }
    }
    best.ok_or_else(|| Error::Precondition("polynomial has no monomials".into()))
}

/// Turn sequence of a path: `(p, q, left?)` triples.
fn turns(path: &[(usize, usize)]) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    if path.len() == 1 {
        // the degenerate source-equals-sink path at v_{11} acts as a left turn
        out.push((path[0].0, path[0].1, true));
        return out;
    }
    if path[1].1 == path[0].1 {
        // horizontal first edge: left turn at the source
        out.push((path[0].0, path[0].1, true));
    }
    for w in path.windows(3) {
        let up_in = w[1].0 == w[0].0;
        let up_out = w[2].0 == w[1].0;
        if up_in && !up_out {
            out.push((w[1].0, w[1].1, true)); // vertical then horizontal
        } else if !up_in && up_out {
            out.push((w[1].0, w[1].1, false)); // horizontal then vertical
        }
    }
    out
}

/// The coefficient vector of one flow over the standard basis of `C_m^{m'}`,
/// through the index bijection π.
///
/// Turn contributions only reach the basis points other than `[1..m]`; the
/// base interval takes `1 - (sum of the rest)`, which is what the difference
/// formulas produce once the normalization `g([1..m]) = 0` is not assumed.
/// Every monomial therefore has coefficient sum exactly 1, matching the fact
/// that adding a constant to a TP-function adds it to every value.
pub fn flow_coefficients(flow: &Flow, grid: &Grid, m: u32) -> Monomial {
    let mut mono = Monomial::default();
    for path in &flow.0 {
        for (p, q, left) in turns(&path.0) {
            let sign = if left { 1 } else { -1 };
            if in_pi(p, q, grid.n, m, grid.m_prime) {
                mono.add(pi_point(p, q, grid.n, m), sign);
            }
            if q >= 2 && in_pi(p - 1, q - 1, grid.n, m, grid.m_prime) {
                mono.add(pi_point(p - 1, q - 1, grid.n, m), -sign);
            }
        }
    }
    let sum: i64 = mono.terms.values().sum();
    if sum != 1 {
        let base = LatticePoint::from_subset(grid.n, &(1..=m as usize).collect::<Vec<_>>());
        mono.add(base, 1 - sum);
    }
    mono
}

/// Excess balance of one flow under the block structure: the net `M`
/// coefficient its turns pick up from interval excesses.
fn excess_balance(flow: &Flow, blocks: &BlockStructure) -> i64 {
    let mut beta = 0i64;
    for path in &flow.0 {
        for (p, q, left) in turns(&path.0) {
            if p < q {
                continue;
            }
            let sign = if left { 1 } else { -1 };
            let i_pq: std::collections::BTreeSet<usize> = (p - q + 1..=p).collect();
            beta += sign * excess_of_set(blocks, &i_pq).excess as i64;
            if q >= 2 {
                let i_prev: std::collections::BTreeSet<usize> = (p - q + 1..=p - 1).collect();
                beta -= sign * excess_of_set(blocks, &i_prev).excess as i64;
            }
        }
    }
    beta
}

fn check_bounds(polys: &TropicalPolynomial) -> Result<(), Error> {
    for m in &polys.monomials {
        if !m.coefficients_in_range() {
            return Err(Error::TheoremViolation(format!(
                "monomial coefficient outside {{-1,0,1,2}} for target {}",
                polys.target
            )));
        }
    }
    Ok(())
}

/// Laurent polynomial of `f(S)` on the cube `2^[n]` over interval values.
pub fn laurent_cube(n: usize, s: &[usize]) -> Result<TropicalPolynomial, Error> {
    laurent_truncated(n, 0, n as u32, s)
}

/// Laurent polynomial of `f(S)` on the truncated cube `C_m^{m'}` over the
/// standard basis: one monomial per strong flow.
pub fn laurent_truncated(
    n: usize,
    m: u32,
    m_prime: u32,
    s: &[usize],
) -> Result<TropicalPolynomial, Error> {
    if (s.len() as u32) < m || (s.len() as u32) > m_prime {
        return Err(Error::Precondition(format!(
            "|S| = {} outside [{m}, {m_prime}]",
            s.len()
        )));
    }
    let grid = Grid::new(n, m_prime as usize);
    let flows = strong_flows(&grid, s, m)?;
    if flows.is_empty() {
        return Err(Error::TheoremViolation(format!("no strong flow for {s:?}")));
    }
    let monomials = flows
        .iter()
        .map(|f| flow_coefficients(f, &grid, m))
        .collect();
    let poly = TropicalPolynomial::from_monomials(LatticePoint::from_subset(n, s), monomials);
    check_bounds(&poly)?;
    Ok(poly)
}

/// Laurent polynomial of `f(x)` on a box `B(a)` over fint values: embed `x`
/// into the cube on `[N]`, keep the regular flows (zero excess balance) and
/// project interval coefficients onto fints.
pub fn laurent_box(shape: &BoxShape, x: &LatticePoint) -> Result<TropicalPolynomial, Error> {
    if !shape.contains(x) {
        return Err(Error::Precondition(format!("{x} is not in the box")));
    }
    let blocks = BlockStructure::new(shape.clone());
    let n_big = blocks.total();
    let image: Vec<usize> = blocks.embed_point(x).into_iter().collect();
    let grid = Grid::new(n_big, n_big);
    let flows = enumerate_admissible_flows(&grid, &image)?;
    let mut monomials = Vec::new();
    for flow in &flows {
        if excess_balance(flow, &blocks) != 0 {
            continue;
        }
        let cube_mono = flow_coefficients(flow, &grid, 0);
        let mut mono = Monomial::default();
        for (interval_pt, coeff) in cube_mono.terms {
            let set = interval_pt.support().into_iter().collect();
            mono.add(blocks.project_set(&set), coeff);
        }
        monomials.push(mono);
    }
    if monomials.is_empty() {
        return Err(Error::TheoremViolation(format!("no regular flow for {x}")));
    }
    let poly = TropicalPolynomial::from_monomials(x.clone(), monomials);
    check_bounds(&poly)?;
    Ok(poly)
}

/// A semi-strict Gelfand–Tsetlin pattern: a triangular array `a_{ij}`,
/// `1 <= j <= i <= k`, with `a_{i-1,j-1} < a_{ij} <= a_{i,j-1}`; its shape is
/// the strictly increasing first column.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GtPattern {
    /// `rows[i-1][j-1]` holds `a_{ij}`
    pub rows: Vec<Vec<usize>>,
}

impl GtPattern {
    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0]).collect()
    }

    fn is_semi_strict(&self) -> bool {
        let k = self.rows.len();
        for i in 1..=k {
            if self.rows[i - 1].len() != i {
                return false;
            }
            for j in 2..=i {
                let a_ij = self.rows[i - 1][j - 1];
                if a_ij > self.rows[i - 1][j - 2] {
                    return false; // needs a_{ij} <= a_{i,j-1}
                }
                if a_ij <= self.rows[i - 2][j - 2] {
                    return false; // needs a_{i-1,j-1} < a_{ij}
                }
            }
        }
        let shape = self.shape();
        shape.windows(2).all(|w| w[0] < w[1]) && shape.iter().all(|&v| v >= 1)
    }
}

/// All semi-strict GT-patterns with shape `sorted(S)`; in bijection with the
/// admissible flows for `S` in `Γ_{n,n}`.
pub fn gt_patterns(n: usize, s: &[usize]) -> Result<Vec<GtPattern>, Error> {
    if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&p| p == 0 || p > n) {
        return Err(Error::Precondition(
            "S must be strictly increasing in [n]".into(),
        ));
    }
    let k = s.len();
    let mut out = Vec::new();
    if k == 0 {
        out.push(GtPattern { rows: vec![] });
        return Ok(out);
    }
    // fill rows top-down; row i entry j ranges over
    // a_{i-1,j-1} < a_{ij} <= a_{i,j-1}
    fn rec(rows: &mut Vec<Vec<usize>>, shape: &[usize], out: &mut Vec<GtPattern>) {
        let i = rows.len() + 1;
        if i > shape.len() {
            out.push(GtPattern { rows: rows.clone() });
            return;
        }
        fn fill(row: &mut Vec<usize>, i: usize, rows: &[Vec<usize>], out: &mut Vec<Vec<usize>>) {
            let j = row.len() + 1;
            if j > i {
                out.push(row.clone());
                return;
            }
            let hi = row[j - 2]; // a_{i,j-1}
            let lo = rows[i - 2][j - 2] + 1; // a_{i-1,j-1} + 1
            for v in lo..=hi {
                row.push(v);
                fill(row, i, rows, out);
                row.pop();
            }
        }
        let mut completions = Vec::new();
        if i == 1 {
            completions.push(vec![shape[0]]);
        } else {
            let mut row = vec![shape[i - 1]];
            fill(&mut row, i, rows, &mut completions);
        }
        for row in completions {
            rows.push(row);
            rec(rows, shape, out);
            rows.pop();
        }
    }
    rec(&mut Vec::new(), s, &mut out);
    debug_assert!(out.iter().all(|p| p.is_semi_strict()));
    Ok(out)
}

/// Flow → pattern: row `i` lists the columns of the vertices of `P_i` entered
/// by vertical edges, source included.
pub fn flow_to_pattern(flow: &Flow) -> GtPattern {
    let mut rows = Vec::new();
    for path in &flow.0 {
        let verts = &path.0;
        let mut row = vec![verts[0].0];
        for w in verts.windows(2) {
            if w[1].1 == w[0].1 + 1 {
                row.push(w[1].0);
            }
        }
        rows.push(row);
    }
    GtPattern { rows }
}

/// Pattern → flow: rebuild each path from its vertical-entry columns.
pub fn pattern_to_flow(pattern: &GtPattern) -> Flow {
    let mut paths = Vec::new();
    for (t, row) in pattern.rows.iter().enumerate() {
        let i = t + 1;
        let mut verts: Vec<(usize, usize)> = Vec::new();
        for (jt, &col) in row.iter().enumerate() {
            let q = jt + 1;
            if let Some(&(pc, _)) = verts.last() {
                // run left along row q-1 from pc to col, then step up
                for p in (col..pc).rev() {
                    verts.push((p, q - 1));
                }
                verts.push((col, q));
            } else {
                verts.push((col, 1));
            }
        }
        for p in (1..row[row.len() - 1]).rev() {
            verts.push((p, i));
        }
        paths.push(crate::flow::FlowPath(verts));
    }
    Flow(paths)
}

/// The interval difference weight
/// `Δf([c..d]) = f(I) + f(I∖{c,d}) - f(I∖{c}) - f(I∖{d})`
/// (`Δf = f({c})` when `c = d`), summed over a pattern's entries: the GT
/// route to one tropical monomial.
pub fn gt_value(
    g: &BTreeMap<LatticePoint, Rat>,
    pattern: &GtPattern,
    n: usize,
) -> Result<Rat, Error> {
    let val = |members: Vec<usize>| -> Result<Rat, Error> {
        if members.is_empty() {
            return Ok(rat::zero());
        }
        let p = LatticePoint::from_subset(n, &members);
        g.get(&p)
            .cloned()
            .ok_or_else(|| Error::KeySetMismatch(format!("missing interval value at {p}")))
    };
    let mut total = rat::zero();
    for (t, row) in pattern.rows.iter().enumerate() {
        for (jt, &a_ij) in row.iter().enumerate() {
            let j = jt + 1;
            let d = a_ij;
            let c = a_ij - j + 1;
            let _ = t;
            if c == d {
                total += val(vec![c])?;
            } else {
                total += val((c..=d).collect())?;
                total += val((c + 1..d).collect())?;
                total -= val((c + 1..=d).collect())?;
                total -= val((c..d).collect())?;
            }
        }
    }
    Ok(total)
}

/// The two-element interval formula: for `i < k`,
/// `f(ik) = max_{i<=j<k} { f(i)+...+f(j-1) + f({j,j+1}) + f(j+2)+...+f(k) }
///   - f(i+1) - ... - f(k-1)`.
pub fn two_element_value(
    g: &BTreeMap<LatticePoint, Rat>,
    n: usize,
    i: usize,
    k: usize,
) -> Result<Rat, Error> {
    if i >= k || k > n {
        return Err(Error::Precondition("need i < k <= n".into()));
    }
    let single = |t: usize| -> Result<Rat, Error> {
        let p = LatticePoint::from_subset(n, &[t]);
        g.get(&p)
            .cloned()
            .ok_or_else(|| Error::KeySetMismatch(format!("missing value at {p}")))
    };
    let mut best: Option<Rat> = None;
    for j in i..k {
        let mut v = rat::zero();
        for t in i..j {
            v += single(t)?;
        }
        let pair = LatticePoint::from_subset(n, &[j, j + 1]);
        v += g
            .get(&pair)
            .cloned()
            .ok_or_else(|| Error::KeySetMismatch(format!("missing value at {pair}")))?;
        for t in j + 2..=k {
            v += single(t)?;
        }
        if best.as_ref().is_none_or(|b| &v > b) {
            best = Some(v);
        }
    }
    let mut result = best.unwrap();
    for t in i + 1..k {
        result -= single(t)?;
    }
    Ok(result)
}

/// Differential suite: Laurent evaluation equals reconstruction; GT-pattern
/// counts match flow counts.
pub fn suite_laurent(max_n: usize, seed: u64) -> SuiteResult {
    use crate::oracle::random_assignment;
    use crate::tp::reconstruct;
    use rand::rngs::SmallRng;
    use rand::SeedableRng;
    let mut rng = SmallRng::seed_from_u64(seed);
    let n = max_n.clamp(3, 6);
    let mut checks = 0;
    let mut failures = 0;
    let bx = TruncatedBox::cube(n, 0, n as u32).unwrap();
    let grid = Grid::new(n, n);
    for _ in 0..3 {
        let g = random_assignment(&bx, (-9, 9), &mut rng);
        let f = reconstruct(&g).unwrap();
        for x in bx.points() {
            let s = x.to_subset();
            checks += 1;
            let ok = laurent_cube(n, &s)
                .and_then(|p| evaluate(&p, g.values()))
                .map(|v| &v == f.value(&x))
                .unwrap_or(false);
            if !ok {
                failures += 1;
            }
        }
    }
    // |Φ_S| = #patterns for every S
    for x in bx.points() {
        let s = x.to_subset();
        checks += 1;
        let flows = enumerate_admissible_flows(&grid, &s).unwrap();
        let pats = gt_patterns(n, &s).unwrap();
        if flows.len() != pats.len() {
            failures += 1;
        }
    }
    SuiteResult {
        name: "laurent",
        checks,
        failures,
    }
}

/// JSON form: `{"target": [...], "monomials": [{"terms": [{"point": ..,
/// "coeff": ..}]}]}`.
#[derive(Serialize, Deserialize)]
pub struct PolynomialJson {
    pub target: Vec<u32>,
    pub monomials: Vec<MonomialJson>,
}

#[derive(Serialize, Deserialize)]
pub struct MonomialJson {
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
pub struct TermJson {
    pub point: Vec<u32>,
    pub coeff: i64,
}

impl TropicalPolynomial {
    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            target: self.target.coords().to_vec(),
            monomials: self
                .monomials
                .iter()
                .map(|m| MonomialJson {
                    terms: m
                        .terms
                        .iter()
                        .map(|(p, &c)| TermJson {
                            point: p.coords().to_vec(),
                            coeff: c,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

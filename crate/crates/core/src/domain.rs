//! Lattice points, box shapes and the combinatorics of the standard basis.
//!
//! Points live in `Z^n` with `0 <= x <= a`. A nonzero point is a
//! *fuzzy-interval* (fint) when every coordinate strictly between the first
//! and last support index is at capacity, and a *sesquialteral fuzzy-interval*
//! (sint) when it is not a fint but splits as `x' + x''` into two fints with
//! `d(x') < c(x'')` and the prefix `1..d(x')-1` of `x'` saturated. For the
//! Boolean cube these are exactly the intervals `[c..d]` and the sets
//! `[1..d1] ∪ [c2..d2]`.
//!
//! All indices in this crate (`c`, `d`, `alpha`, ..., cortege indices) are
//! 1-based, matching the usual notation for `[n] = {1, ..., n}`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An immutable lattice point with non-negative integer coordinates.
///
/// Points order lexicographically, which gives all containers a deterministic
/// iteration order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(Vec<u32>);

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (t, v) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl LatticePoint {
    pub fn new(coords: Vec<u32>) -> Self {
        LatticePoint(coords)
    }

    pub fn zero(n: usize) -> Self {
        LatticePoint(vec![0; n])
    }

    /// Builds the 0/1 indicator point of a subset of `[n]` (1-based members).
    pub fn from_subset(n: usize, members: &[usize]) -> Self {
        let mut c = vec![0u32; n];
        for &i in members {
            c[i - 1] = 1;
        }
        LatticePoint(c)
    }

    /// The subset of `[n]` encoded by a 0/1 point.
    pub fn to_subset(&self) -> Vec<usize> {
        self.support()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    /// Coordinate `x_i`, 1-based.
    pub fn coord(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    /// The size `|x| = x_1 + ... + x_n`.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    /// Support indices (1-based, ascending).
    pub fn support(&self) -> Vec<usize> {
        (1..=self.dim()).filter(|&i| self.coord(i) > 0).collect()
    }

    /// First support index `c(x)`; `None` for the zero point.
    pub fn c(&self) -> Option<usize> {
        (1..=self.dim()).find(|&i| self.coord(i) > 0)
    }

    /// Last support index `d(x)`; `None` for the zero point.
    pub fn d(&self) -> Option<usize> {
        (1..=self.dim()).rev().find(|&i| self.coord(i) > 0)
    }

    /// `x + 1_i` (1-based `i`).
    pub fn plus(&self, i: usize) -> Self {
        let mut c = self.0.clone();
        c[i - 1] += 1;
        LatticePoint(c)
    }

    /// `x - 1_i`; panics if `x_i = 0`.
    pub fn minus(&self, i: usize) -> Self {
        let mut c = self.0.clone();
        c[i - 1] -= 1;
        LatticePoint(c)
    }

    pub fn plus2(&self, i: usize, j: usize) -> Self {
        self.plus(i).plus(j)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &LatticePoint) -> Self {
        LatticePoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        )
    }

    pub fn le(&self, other: &LatticePoint) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }
}

/// The capacity vector `a` of a box `B(a)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoxShape(Vec<u32>);

impl BoxShape {
    pub fn new(a: Vec<u32>) -> Result<Self, Error> {
        if a.is_empty() {
            return Err(Error::InvalidShape("dimension must be at least 1".into()));
        }
        if a.contains(&0) {
            return Err(Error::InvalidShape(
                "every capacity a_i must be at least 1".into(),
            ));
        }
        Ok(BoxShape(a))
    }

    /// The Boolean cube shape `(1, ..., 1)`.
    pub fn cube(n: usize) -> Self {
        BoxShape(vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn capacities(&self) -> &[u32] {
        &self.0
    }

    /// Capacity `a_i`, 1-based.
    pub fn cap(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    /// The size `|a|`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_cube(&self) -> bool {
        self.0.iter().all(|&v| v == 1)
    }

    pub fn contains(&self, x: &LatticePoint) -> bool {
        x.dim() == self.n() && x.coords().iter().zip(&self.0).all(|(&v, &a)| v <= a)
    }

    /// All points of `B(a)` in lexicographic order.
    pub fn points(&self) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.n()];
        loop {
            out.push(LatticePoint(cur.clone()));
            // odometer increment
            let mut t = self.n();
            loop {
                if t == 0 {
                    return out;
                }
                t -= 1;
                if cur[t] < self.0[t] {
                    cur[t] += 1;
                    for v in cur.iter_mut().skip(t + 1) {
                        *v = 0;
                    }
                    break;
                }
            }
        }
    }

    /// The complement point `a - x`.
    pub fn complement(&self, x: &LatticePoint) -> LatticePoint {
        LatticePoint(
            x.coords()
                .iter()
                .zip(&self.0)
                .map(|(&v, &a)| a - v)
                .collect(),
        )
    }
}

/// The truncated box `B_m^{m'}(a)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TruncatedBox {
    #[serde(rename = "a")]
    shape: BoxShape,
    m: u32,
    m_prime: u32,
}

impl TruncatedBox {
    pub fn new(shape: BoxShape, m: u32, m_prime: u32) -> Result<Self, Error> {
        if m > m_prime || m_prime > shape.total() {
            return Err(Error::InvalidShape(format!(
                "need 0 <= m <= m' <= |a|, got m={m}, m'={m_prime}, |a|={}",
                shape.total()
            )));
        }
        Ok(TruncatedBox { shape, m, m_prime })
    }

    /// The entire box `B(a) = B_0^{|a|}(a)`.
    pub fn entire(shape: BoxShape) -> Self {
        let t = shape.total();
        TruncatedBox {
            shape,
            m: 0,
            m_prime: t,
        }
    }

    /// Truncated Boolean cube `C_m^{m'}` on `[n]`.
    pub fn cube(n: usize, m: u32, m_prime: u32) -> Result<Self, Error> {
        TruncatedBox::new(BoxShape::cube(n), m, m_prime)
    }

    pub fn shape(&self) -> &BoxShape {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn m_prime(&self) -> u32 {
        self.m_prime
    }

    /// The width `m' - m`.
    pub fn width(&self) -> u32 {
        self.m_prime - self.m
    }

    pub fn contains(&self, x: &LatticePoint) -> bool {
        self.shape.contains(x) && {
            let s = x.size();
            self.m <= s && s <= self.m_prime
        }
    }

    /// All points, lexicographic.
    pub fn points(&self) -> Vec<LatticePoint> {
        self.shape
            .points()
            .into_iter()
            .filter(|x| {
                let s = x.size();
                self.m <= s && s <= self.m_prime
            })
            .collect()
    }

    /// Points of the `p`-th layer.
    pub fn layer(&self, p: u32) -> Vec<LatticePoint> {
        self.shape
            .points()
            .into_iter()
            .filter(|x| x.size() == p)
            .collect()
    }
}

/// Classification of a nonzero box point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PointClass {
    Fint,
    /// `x = head + tail` with both parts fints, `d(head) < c(tail)` and the
    /// prefix `1..d(head)-1` saturated; `head` is the maximal such prefix.
    Sint {
        head: LatticePoint,
        tail: LatticePoint,
    },
    Other,
}

impl PointClass {
    pub fn is_fint(&self) -> bool {
        matches!(self, PointClass::Fint)
    }
    pub fn is_sint(&self) -> bool {
        matches!(self, PointClass::Sint { .. })
    }
}

/// Landmark indices of a nonzero point, and the induction weight `eta`.
///
/// `alpha` is the maximal `i < d` with `x_i < a_i`; `beta` the maximal
/// `i' < alpha` with `x_{i'} > 0`; `gamma` the maximal `i'' < beta` with
/// `x_{i''} < a_{i''}`. `beta` is absent exactly for fints and `gamma` is
/// absent exactly for fints and sints. When `beta` exists,
/// `eta = |a|*(beta + d) + x_beta + x_d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Landmarks {
    pub c: usize,
    pub d: usize,
    pub alpha: Option<usize>,
    pub beta: Option<usize>,
    pub gamma: Option<usize>,
    pub eta: Option<u64>,
}

fn is_fint(shape: &BoxShape, x: &LatticePoint) -> bool {
    let (c, d) = match (x.c(), x.d()) {
        (Some(c), Some(d)) => (c, d),
        _ => return false,
    };
    (c + 1..d).all(|i| x.coord(i) == shape.cap(i))
}

/// Classifies a nonzero point of `B(a)` as fint, sint or other.
///
/// For a sint the returned decomposition takes the maximal prefix part: the
/// head greedily covers saturated full blocks and then the last head block.
pub fn classify_point(shape: &BoxShape, x: &LatticePoint) -> Result<PointClass, Error> {
    if x.dim() != shape.n() || !shape.contains(x) {
        return Err(Error::InvalidPoint(format!(
            "{x} is not a point of the box"
        )));
    }
    if x.is_zero() {
        return Err(Error::ZeroPoint);
    }
    if is_fint(shape, x) {
        return Ok(PointClass::Fint);
    }
    // The head must end at some d' <= s where s is the first unsaturated index,
    // and the remainder must be a nonzero fint starting after d'. Scanning d'
    // downward finds the maximal head first.
    let n = shape.n();
    let s = (1..=n)
        .find(|&i| x.coord(i) < shape.cap(i))
        .expect("non-fint point has an unsaturated coordinate");
    for dp in (1..=s).rev() {
        if x.coord(dp) == 0 {
            continue;
        }
        let head = LatticePoint::new(
            (1..=n)
                .map(|i| if i <= dp { x.coord(i) } else { 0 })
                .collect(),
        );
        let tail = LatticePoint::new(
            (1..=n)
                .map(|i| if i > dp { x.coord(i) } else { 0 })
                .collect(),
        );
        if tail.is_zero() {
            continue;
        }
        if tail.c().unwrap() > dp && is_fint(shape, &tail) {
            return Ok(PointClass::Sint { head, tail });
        }
    }
    Ok(PointClass::Other)
}

/// Landmarks `c, d, alpha, beta, gamma` and the weight `eta` of a nonzero point.
pub fn landmarks(shape: &BoxShape, x: &LatticePoint) -> Result<Landmarks, Error> {
    if x.dim() != shape.n() || !shape.contains(x) {
        return Err(Error::InvalidPoint(format!(
            "{x} is not a point of the box"
        )));
    }
    if x.is_zero() {
        return Err(Error::ZeroPoint);
    }
    let c = x.c().unwrap();
    let d = x.d().unwrap();
    let alpha = (1..d).rev().find(|&i| x.coord(i) < shape.cap(i));
    let beta = alpha.and_then(|a| (1..a).rev().find(|&i| x.coord(i) > 0));
    let gamma = beta.and_then(|b| (1..b).rev().find(|&i| x.coord(i) < shape.cap(i)));
    let eta = beta.map(|b| {
        u64::from(shape.total()) * (b as u64 + d as u64)
            + u64::from(x.coord(b))
            + u64::from(x.coord(d))
    });
    Ok(Landmarks {
        c,
        d,
        alpha,
        beta,
        gamma,
        eta,
    })
}

/// The standard basis `Sint(a;m) ∪ Int(a;m) ∪ ... ∪ Int(a;m')` of a truncated
/// box (with the zero point included when `m = 0`).
pub fn standard_basis(bx: &TruncatedBox) -> BTreeSet<LatticePoint> {
    let mut basis = BTreeSet::new();
    for x in bx.points() {
        if x.is_zero() {
            basis.insert(x);
            continue;
        }
        let class = classify_point(bx.shape(), &x).expect("nonzero box point");
        let keep = if x.size() == bx.m() {
            class.is_fint() || class.is_sint()
        } else {
            class.is_fint()
        };
        if keep {
            basis.insert(x);
        }
    }
    basis
}

/// Fints of size `p` in `B(a)`.
pub fn fints_of_size(shape: &BoxShape, p: u32) -> Vec<LatticePoint> {
    shape
        .points()
        .into_iter()
        .filter(|x| x.size() == p && !x.is_zero() && is_fint(shape, x))
        .collect()
}

/// A feasible TP3 cortege `(x, i<j<k)`: all six points of the relation lie in
/// the box.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cortege3 {
    pub base: LatticePoint,
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Cortege3 {
    /// The six argument points `(x+1i+1k, x+1j, x+1i+1j, x+1k, x+1i, x+1j+1k)`.
    pub fn points(&self) -> [LatticePoint; 6] {
        let x = &self.base;
        [
            x.plus2(self.i, self.k),
            x.plus(self.j),
            x.plus2(self.i, self.j),
            x.plus(self.k),
            x.plus(self.i),
            x.plus2(self.j, self.k),
        ]
    }
}

/// A feasible TP4 cortege `(x, i<j<k<l)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cortege4 {
    pub base: LatticePoint,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl Cortege4 {
    /// The six argument points `(x+1i+1k, x+1j+1l, x+1i+1j, x+1k+1l, x+1i+1l, x+1j+1k)`.
    pub fn points(&self) -> [LatticePoint; 6] {
        let x = &self.base;
        [
            x.plus2(self.i, self.k),
            x.plus2(self.j, self.l),
            x.plus2(self.i, self.j),
            x.plus2(self.k, self.l),
            x.plus2(self.i, self.l),
            x.plus2(self.j, self.k),
        ]
    }
}

/// All feasible TP3 corteges of the box.
///
/// A base point `x` (not necessarily in the box itself) is feasible for
/// `i<j<k` when `x_i, x_j, x_k` are below capacity and the two layers
/// `|x|+1, |x|+2` fit inside `[m, m']`.
pub fn corteges3(bx: &TruncatedBox) -> Vec<Cortege3> {
    let n = bx.n();
    let mut out = Vec::new();
    if n < 3 || bx.width() == 0 {
        return out;
    }
    for x in bx.shape().points() {
        let s = x.size();
        if s + 2 > bx.m_prime() || s + 1 < bx.m() {
            continue;
        }
        let free: Vec<usize> = (1..=n)
            .filter(|&i| x.coord(i) < bx.shape().cap(i))
            .collect();
        for (ti, &i) in free.iter().enumerate() {
            for (tj, &j) in free.iter().enumerate().skip(ti + 1) {
                for &k in free.iter().skip(tj + 1) {
                    out.push(Cortege3 {
                        base: x.clone(),
                        i,
                        j,
                        k,
                    });
                }
            }
        }
    }
    out
}

/// All feasible TP4 corteges of the box. Empty when `n < 4`.
pub fn corteges4(bx: &TruncatedBox) -> Vec<Cortege4> {
    let n = bx.n();
    let mut out = Vec::new();
    if n < 4 {
        return out;
    }
    for x in bx.shape().points() {
        let s = x.size();
        if s + 2 > bx.m_prime() || s + 2 < bx.m() {
            continue;
        }
        let free: Vec<usize> = (1..=n)
            .filter(|&i| x.coord(i) < bx.shape().cap(i))
            .collect();
        let f = free.len();
        for ti in 0..f {
            for tj in ti + 1..f {
                for tk in tj + 1..f {
                    for tl in tk + 1..f {
                        out.push(Cortege4 {
                            base: x.clone(),
                            i: free[ti],
                            j: free[tj],
                            k: free[tk],
                            l: free[tl],
                        });
                    }
                }
            }
        }
    }
    out
}

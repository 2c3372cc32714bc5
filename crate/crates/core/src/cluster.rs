//! Clusters of infinitely near points.
//!
//! A cluster records the sequence of point blow-ups of a proper birational
//! morphism through its proximity relations. Point `0` is the origin and every
//! later point is proximate to one (free) or two (satellite) earlier points.
//! Everything downstream of this module is combinatorial except the optional
//! chart coordinates of free points, which only the valuation oracle reads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Zero};

use crate::error::{Error, Result};

/// Index of a point in blow-up order; `0` is the origin.
pub type PointId = usize;

pub const ORIGIN: PointId = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKind {
    Origin,
    Free,
    Satellite,
}

/// Position of a free point on the exceptional line it lies on.
///
/// Slopes are measured in the chart of the parent blow-up. On `E_O` the slope
/// is `y/x`; elsewhere the local coordinates at the parent `p` are arranged so
/// that the component `p` was proximate to last is `{u = 0}` (slope infinity
/// on `E_p`) and, for a satellite `p`, the other component is `{w = 0}`
/// (slope zero on `E_p`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coordinate {
    Finite(BigRational),
    Infinity,
}

impl Coordinate {
    pub fn integer(n: i64) -> Self {
        Coordinate::Finite(BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coordinate::Finite(c) => write!(f, "{c}"),
            Coordinate::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Coordinate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Coordinate::Infinity);
        }
        parse_rational(s).map(Coordinate::Finite)
    }
}

/// Parses `"a"` or `"a/b"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// A validated cluster of infinitely near points.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    proximities: Vec<Vec<PointId>>,
    proximate_points: Vec<Vec<PointId>>,
    kinds: Vec<PointKind>,
    coords: BTreeMap<PointId, Coordinate>,
}

impl Cluster {
    /// Validates raw proximity lists (`proximities[q]` = points `q` is proximate to).
    pub fn new(proximities: Vec<Vec<PointId>>) -> Result<Self> {
        Self::with_coords(proximities, BTreeMap::new())
    }

    pub fn with_coords(
        raw: Vec<Vec<PointId>>,
        coords: BTreeMap<PointId, Coordinate>,
    ) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyCluster);
        }
        let n = raw.len();
        let mut proximities = Vec::with_capacity(n);
        let mut kinds = Vec::with_capacity(n);
        let mut proximate_points = vec![Vec::new(); n];
        // adjacency of strict transforms on the surface obtained so far
        let mut adjacent: BTreeSet<(PointId, PointId)> = BTreeSet::new();

        for (q, list) in raw.into_iter().enumerate() {
            let mut list = list;
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateProximity { point: q, target: w[0] });
            }
            if let Some(&target) = list.iter().find(|&&p| p >= q) {
                return Err(Error::ProximityToLaterPoint { point: q, target });
            }
            let kind = match (q, list.len()) {
                (0, 0) => PointKind::Origin,
                (_, 0) if q > 0 => return Err(Error::DisconnectedCluster { point: q }),
                (_, 1) => PointKind::Free,
                (_, 2) => PointKind::Satellite,
                (_, count) => {
                    return Err(Error::PointProximateToZeroOrThreePlus { point: q, count })
                }
            };
            match kind {
                PointKind::Origin => {}
                PointKind::Free => {
                    adjacent.insert((list[0], q));
                }
                PointKind::Satellite => {
                    let (a, b) = (list[0], list[1]);
                    if !adjacent.remove(&(a, b)) {
                        return Err(Error::GeometricallyInfeasibleSatellite {
                            point: q,
                            first: a,
                            second: b,
                        });
                    }
                    adjacent.insert((a, q));
                    adjacent.insert((b, q));
                }
            }
            for &p in &list {
                proximate_points[p].push(q);
            }
            proximities.push(list);
            kinds.push(kind);
        }

        let cluster = Cluster {
            proximities,
            proximate_points,
            kinds,
            coords: BTreeMap::new(),
        };
        cluster.validate_coords(&coords)?;
        Ok(Cluster { coords, ..cluster })
    }

    fn validate_coords(&self, coords: &BTreeMap<PointId, Coordinate>) -> Result<()> {
        let mut used: BTreeSet<(PointId, &Coordinate)> = BTreeSet::new();
        for (&q, c) in coords {
            let invalid = |reason: &str| Error::InvalidCoordinate {
                point: q,
                reason: reason.to_string(),
            };
            if q >= self.len() {
                return Err(Error::UnknownPoint(q));
            }
            if self.kinds[q] != PointKind::Free {
                return Err(invalid("only free points carry coordinates"));
            }
            let p = self.proximities[q][0];
            if self.is_special_position(p, c) {
                return Err(invalid("position is an intersection with another exceptional component"));
            }
            if !used.insert((p, c)) {
                return Err(invalid("two free points share a position"));
            }
        }
        Ok(())
    }

    /// Whether `c` on `E_p` is where another exceptional component meets `E_p`.
    pub fn is_special_position(&self, p: PointId, c: &Coordinate) -> bool {
        match (self.kinds[p], c) {
            (PointKind::Origin, _) => false,
            (_, Coordinate::Infinity) => true,
            (PointKind::Satellite, Coordinate::Finite(c)) => c.is_zero(),
            (PointKind::Free, Coordinate::Finite(_)) => false,
        }
    }

    /// Number of points, origin included.
    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.len()
    }

    pub fn contains(&self, p: PointId) -> bool {
        p < self.len()
    }

    pub(crate) fn check_point(&self, p: PointId) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::UnknownPoint(p))
        }
    }

    pub(crate) fn check_len(&self, found: usize) -> Result<()> {
        if found == self.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.len(),
                found,
            })
        }
    }

    /// Points `q` is proximate to, ascending.
    pub fn proximities(&self, q: PointId) -> &[PointId] {
        &self.proximities[q]
    }

    pub fn raw_proximities(&self) -> &[Vec<PointId>] {
        &self.proximities
    }

    /// Points proximate to `p`, ascending.
    pub fn proximate_points(&self, p: PointId) -> &[PointId] {
        &self.proximate_points[p]
    }

    pub fn classify(&self, p: PointId) -> PointKind {
        self.kinds[p]
    }

    pub fn coords(&self) -> &BTreeMap<PointId, Coordinate> {
        &self.coords
    }

    /// Same proximities with different free-point coordinates.
    pub fn with_replaced_coords(&self, coords: BTreeMap<PointId, Coordinate>) -> Result<Self> {
        self.validate_coords(&coords)?;
        Ok(Cluster {
            coords,
            ..self.clone()
        })
    }

    /// The point whose first neighbourhood contains `q`.
    pub fn parent(&self, q: PointId) -> Option<PointId> {
        self.proximities[q].last().copied()
    }

    /// For a satellite `q`, the older of its two proximate points.
    pub fn other_proximate(&self, q: PointId) -> Option<PointId> {
        match self.kinds[q] {
            PointKind::Satellite => Some(self.proximities[q][0]),
            _ => None,
        }
    }

    /// `q ≤ p`: `p` equals `q` or is infinitely near to it.
    pub fn precedes(&self, q: PointId, p: PointId) -> bool {
        let mut cur = Some(p);
        while let Some(x) = cur {
            if x == q {
                return true;
            }
            if x < q {
                return false;
            }
            cur = self.parent(x);
        }
        false
    }

    /// Points `p ≤ q` in blow-up order, ending with `q`.
    pub fn chain(&self, q: PointId) -> Vec<PointId> {
        let mut chain = vec![q];
        let mut cur = q;
        while let Some(p) = self.parent(cur) {
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        chain
    }

    /// `E_p²` on the final surface: `-(1 + #{q : q → p})`.
    pub fn self_intersection(&self, p: PointId) -> i64 {
        -(1 + self.proximate_points[p].len() as i64)
    }

    pub fn proximity_matrix(&self) -> ProximityMatrix {
        let n = self.len();
        let mut entries = vec![vec![0i64; n]; n];
        for q in 0..n {
            entries[q][q] = 1;
            for &p in &self.proximities[q] {
                entries[q][p] = -1;
            }
        }
        ProximityMatrix { entries }
    }

    /// `N = -PᵀP`, the intersection matrix of the strict transforms.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let p = self.proximity_matrix();
        let n = self.len();
        let mut out = vec![vec![0i64; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = -(0..n).map(|k| p.entries[k][i] * p.entries[k][j]).sum::<i64>();
            }
        }
        out
    }

    pub fn dual_graph(&self) -> DualGraph {
        let n = self.len();
        let intersections = self.intersection_matrix();
        let adjacency: Vec<BTreeSet<PointId>> = (0..n)
            .map(|p| (0..n).filter(|&q| q != p && intersections[p][q] == 1).collect())
            .collect();
        let dead_ends = (0..n)
            .filter(|&p| connected_without(&adjacency, p))
            .collect();
        DualGraph {
            adjacency,
            dead_ends,
        }
    }

    pub fn dead_ends(&self) -> Vec<PointId> {
        self.dual_graph().dead_ends
    }
}

fn connected_without(adjacency: &[BTreeSet<PointId>], removed: PointId) -> bool {
    let n = adjacency.len();
    let Some(start) = (0..n).find(|&p| p != removed) else {
        return true;
    };
    let mut seen = vec![false; n];
    seen[removed] = true;
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(p) = stack.pop() {
        for &q in &adjacency[p] {
            if !seen[q] {
                seen[q] = true;
                count += 1;
                stack.push(q);
            }
        }
    }
    count == n - 1
}

/// Proximity matrix, row `q` holding `1` on the diagonal and `-1` at every `p`
/// with `q → p`. Unit lower triangular, so `e = P·v` and `ρ = Pᵀ·e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityMatrix {
    entries: Vec<Vec<i64>>,
}

impl ProximityMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn transpose_mul_vec(&self, v: &[i64]) -> Vec<i64> {
        let n = self.size();
        (0..n)
            .map(|j| (0..n).map(|i| self.entries[i][j] * v[i]).sum())
            .collect()
    }

    /// Exact integer inverse by forward substitution on the unit triangle.
    pub fn inverse(&self) -> Vec<Vec<i64>> {
        let n = self.size();
        let mut inv = vec![vec![0i64; n]; n];
        for col in 0..n {
            for row in 0..n {
                let mut acc = if row == col { 1 } else { 0 };
                for k in 0..row {
                    acc -= self.entries[row][k] * inv[k][col];
                }
                inv[row][col] = acc;
            }
        }
        inv
    }

    /// Determinant; always `1` for a valid cluster.
    pub fn determinant(&self) -> i64 {
        (0..self.size()).map(|i| self.entries[i][i]).product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub adjacency: Vec<BTreeSet<PointId>>,
    pub dead_ends: Vec<PointId>,
}

impl DualGraph {
    pub fn are_adjacent(&self, p: PointId, q: PointId) -> bool {
        self.adjacency[p].contains(&q)
    }

    pub fn is_dead_end(&self, p: PointId) -> bool {
        self.dead_ends.binary_search(&p).is_ok()
    }
}

//! The exceptional divisor lattice.
//!
//! A divisor is held simultaneously in three integer coordinate systems:
//! values `v` (coefficients on the strict transforms `E_p`), multiplicities
//! `e` (coefficients on the total transforms), and excesses `ρ` (coefficients
//! on the branch basis `B_p`). They are related by `e = P·v` and `ρ = Pᵀ·e`.

use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::cluster::{Cluster, PointId, ORIGIN};
use crate::error::{Error, Result};

/// Default cap on unloading rounds.
pub const DEFAULT_UNLOAD_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Values,
    Mults,
    Excesses,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    values: Vec<i64>,
    mults: Vec<i64>,
    excesses: Vec<i64>,
}

impl Divisor {
    pub fn zero(cluster: &Cluster) -> Self {
        let n = cluster.len();
        Divisor {
            values: vec![0; n],
            mults: vec![0; n],
            excesses: vec![0; n],
        }
    }

    pub fn from_basis(cluster: &Cluster, basis: Basis, coeffs: &[i64]) -> Result<Self> {
        match basis {
            Basis::Values => Self::from_values(cluster, coeffs),
            Basis::Mults => Self::from_mults(cluster, coeffs),
            Basis::Excesses => Self::from_excesses(cluster, coeffs),
        }
    }

    pub fn from_values(cluster: &Cluster, values: &[i64]) -> Result<Self> {
        cluster.check_len(values.len())?;
        let mults = values_to_mults(cluster, values);
        let excesses = mults_to_excesses(cluster, &mults);
        Ok(Divisor {
            values: values.to_vec(),
            mults,
            excesses,
        })
    }

    pub fn from_mults(cluster: &Cluster, mults: &[i64]) -> Result<Self> {
        cluster.check_len(mults.len())?;
        let values = mults_to_values(cluster, mults);
        let excesses = mults_to_excesses(cluster, mults);
        Ok(Divisor {
            values,
            mults: mults.to_vec(),
            excesses,
        })
    }

    pub fn from_excesses(cluster: &Cluster, excesses: &[i64]) -> Result<Self> {
        cluster.check_len(excesses.len())?;
        let mults = excesses_to_mults(cluster, excesses);
        let values = mults_to_values(cluster, &mults);
        Ok(Divisor {
            values,
            mults,
            excesses: excesses.to_vec(),
        })
    }

    /// The strict transform `E_p`.
    pub fn exceptional(cluster: &Cluster, p: PointId) -> Result<Self> {
        cluster.check_point(p)?;
        let mut v = vec![0; cluster.len()];
        v[p] = 1;
        Self::from_values(cluster, &v)
    }

    /// The total transform `Ē_p`.
    pub fn total_exceptional(cluster: &Cluster, p: PointId) -> Result<Self> {
        cluster.check_point(p)?;
        let mut e = vec![0; cluster.len()];
        e[p] = 1;
        Self::from_mults(cluster, &e)
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    pub fn excesses(&self) -> &[i64] {
        &self.excesses
    }

    pub fn coeffs(&self, basis: Basis) -> &[i64] {
        match basis {
            Basis::Values => &self.values,
            Basis::Mults => &self.mults,
            Basis::Excesses => &self.excesses,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `ρ_p ≥ 0` at every point.
    pub fn is_antinef(&self) -> bool {
        self.excesses.iter().all(|&r| r >= 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        let s = |xs: &[i64]| xs.iter().map(|x| k * x).collect();
        Divisor {
            values: s(&self.values),
            mults: s(&self.mults),
            excesses: s(&self.excesses),
        }
    }

    /// `v_p(self) ≥ v_p(other)` for every `p`.
    pub fn dominates(&self, other: &Divisor) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a >= b)
    }

    /// Noether pairing `Σ_p e_p(D)·e_p(C)`.
    pub fn intersect(&self, other: &Divisor) -> i64 {
        self.mults.iter().zip(&other.mults).map(|(a, b)| a * b).sum()
    }

    pub fn self_intersection(&self) -> i64 {
        self.intersect(self)
    }

    /// Number of points with nonzero multiplicity.
    pub fn support_total_size(&self) -> usize {
        self.mults.iter().filter(|&&e| e != 0).count()
    }

    pub fn unload(&self, cluster: &Cluster) -> Result<Self> {
        self.unload_with_budget(cluster, DEFAULT_UNLOAD_BUDGET)
    }

    /// Antinef closure.
    ///
    /// Each round adds `⌈ρ_p / E_p²⌉` copies of `E_p` to every point with
    /// `ρ_p < 0`, all deficient points at once.
    pub fn unload_with_budget(&self, cluster: &Cluster, budget: usize) -> Result<Self> {
        cluster.check_len(self.len())?;
        let mut values = self.values.clone();
        let mut excesses = self.excesses.clone();
        let mut rounds = 0;
        loop {
            let deficient: Vec<(PointId, i64)> = excesses
                .iter()
                .enumerate()
                .filter(|(_, &r)| r < 0)
                .map(|(p, &r)| {
                    let square = -cluster.self_intersection(p);
                    (p, ceil_div(-r, square))
                })
                .collect();
            if deficient.is_empty() {
                break;
            }
            if rounds == budget {
                return Err(Error::IterationBudgetExceeded(budget));
            }
            rounds += 1;
            for (p, n) in deficient {
                values[p] += n;
            }
            let mults = values_to_mults(cluster, &values);
            excesses = mults_to_excesses(cluster, &mults);
        }
        Self::from_values(cluster, &values)
    }

    /// `Σ_p ẽ_p(ẽ_p + 1)/2` over the multiplicities of the antinef closure.
    pub fn codimension(&self, cluster: &Cluster) -> Result<i64> {
        let closure = self.unload(cluster)?;
        Ok(closure.mults.iter().map(|e| e * (e + 1) / 2).sum())
    }

    /// Entrywise `max(v, 0)` in the values basis.
    pub fn clamp_values(&self, cluster: &Cluster) -> Result<Self> {
        let v: Vec<i64> = self.values.iter().map(|&x| x.max(0)).collect();
        Self::from_values(cluster, &v)
    }
}

/// `⌈a / b⌉` for `a ≥ 0`, `b > 0`.
fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(a >= 0 && b > 0);
    (a + b - 1) / b
}

fn values_to_mults(cluster: &Cluster, values: &[i64]) -> Vec<i64> {
    cluster
        .points()
        .map(|q| values[q] - cluster.proximities(q).iter().map(|&p| values[p]).sum::<i64>())
        .collect()
}

fn mults_to_values(cluster: &Cluster, mults: &[i64]) -> Vec<i64> {
    let mut values = vec![0; mults.len()];
    for q in cluster.points() {
        values[q] = mults[q] + cluster.proximities(q).iter().map(|&p| values[p]).sum::<i64>();
    }
    values
}

fn mults_to_excesses(cluster: &Cluster, mults: &[i64]) -> Vec<i64> {
    cluster
        .points()
        .map(|p| {
            mults[p]
                - cluster
                    .proximate_points(p)
                    .iter()
                    .map(|&q| mults[q])
                    .sum::<i64>()
        })
        .collect()
}

fn excesses_to_mults(cluster: &Cluster, excesses: &[i64]) -> Vec<i64> {
    let mut mults = vec![0; excesses.len()];
    for p in cluster.points().rev() {
        mults[p] = excesses[p]
            + cluster
                .proximate_points(p)
                .iter()
                .map(|&q| mults[q])
                .sum::<i64>();
    }
    mults
}

impl Add for &Divisor {
    type Output = Divisor;

    fn add(self, rhs: &Divisor) -> Divisor {
        let s = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Divisor {
            values: s(&self.values, &rhs.values),
            mults: s(&self.mults, &rhs.mults),
            excesses: s(&self.excesses, &rhs.excesses),
        }
    }
}

impl Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, rhs: &Divisor) -> Divisor {
        self + &rhs.scale(-1)
    }
}

/// The branch divisor `B_p`, dual to `-E_p`.
pub fn branch_divisor(cluster: &Cluster, p: PointId) -> Result<Divisor> {
    cluster.check_point(p)?;
    let mut rho = vec![0; cluster.len()];
    rho[p] = 1;
    Divisor::from_excesses(cluster, &rho)
}

/// `B_O`, the divisor of the maximal ideal.
pub fn maximal_ideal_divisor(cluster: &Cluster) -> Divisor {
    branch_divisor(cluster, ORIGIN).expect("origin is always present")
}

/// Reassembles `Σ_p ρ_p·B_p`.
pub fn from_branch_decomposition(cluster: &Cluster, parts: &[(PointId, i64)]) -> Result<Divisor> {
    let mut total = Divisor::zero(cluster);
    for &(p, k) in parts {
        total = &total + &branch_divisor(cluster, p)?.scale(k);
    }
    Ok(total)
}

//! Shared fixtures and independent oracles for the integration suites.
#![allow(dead_code)]

pub mod checks;

use curveta_core::oracle::{self, parse::parse_poly};
use curveta_core::{applications, BivariatePoly, Cluster, Divisor, PuiseuxData};
use num::{BigRational, Integer};
use proptest::prelude::*;

pub fn ex28() -> Cluster {
    Cluster::new(vec![vec![], vec![0], vec![0, 1], vec![2], vec![2, 3]]).unwrap()
}

pub fn ex52() -> Cluster {
    Cluster::new(vec![vec![], vec![0], vec![0, 1], vec![2], vec![3], vec![3, 4]]).unwrap()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Grows a cluster one point at a time on the current configuration: a free
/// point on some `E_p`, or a satellite at a crossing `E_a ∩ E_b`.
pub fn grow_cluster(choices: &[(usize, bool)]) -> Cluster {
    let mut prox: Vec<Vec<usize>> = vec![vec![]];
    let mut crossings: Vec<(usize, usize)> = Vec::new();
    for &(k, satellite) in choices {
        let q = prox.len();
        if satellite && !crossings.is_empty() {
            let (a, b) = crossings.remove(k % crossings.len());
            prox.push(vec![a, b]);
            crossings.push((a, q));
            crossings.push((b, q));
        } else {
            let p = k % q;
            prox.push(vec![p]);
            crossings.push((p, q));
        }
    }
    Cluster::new(prox).expect("grown clusters are valid")
}

pub fn cluster_strategy(max_points: usize) -> impl Strategy<Value = Cluster> {
    prop::collection::vec((0usize..64, any::<bool>()), 0..max_points).prop_map(|c| grow_cluster(&c))
}

/// A cluster and a random antinef divisor `Σ c_p B_p` with `c_p ≤ 2`.
pub fn antinef_strategy(max_points: usize) -> impl Strategy<Value = (Cluster, Divisor)> {
    cluster_strategy(max_points).prop_flat_map(|c| {
        let n = c.len();
        (Just(c), prop::collection::vec(0i64..3, n)).prop_map(|(c, w)| {
            let mut d = Divisor::zero(&c);
            for (p, &k) in w.iter().enumerate() {
                let b = curveta_core::branch_divisor(&c, p).unwrap().scale(k);
                d = &d + &b;
            }
            (c, d)
        })
    })
}

/// Chain cluster whose multiplicity sequence is `mults`: `j` has as
/// proximate points the shortest run after it whose multiplicities sum to
/// `e_j`, or the rest of the chain.
pub fn chain_cluster(mults: &[i64]) -> Cluster {
    let n = mults.len();
    let mut prox = vec![Vec::new(); n];
    for j in 0..n {
        let mut acc = 0;
        for (q, &e) in mults.iter().enumerate().skip(j + 1) {
            if acc >= mults[j] {
                break;
            }
            prox[q].push(j);
            acc += e;
        }
    }
    Cluster::new(prox).expect("sequence satisfies the proximity equalities")
}

/// Random characteristic data with `n ≤ 12`.
pub fn puiseux_strategy() -> impl Strategy<Value = PuiseuxData> {
    (1i64..=12, prop::collection::vec(1i64..40, 0..4)).prop_map(|(n, steps)| {
        let mut exps = Vec::new();
        let mut g = n;
        let mut m = n;
        for s in steps {
            if g == 1 {
                break;
            }
            let mut cand = m + s;
            while cand % g == 0 {
                cand += 1;
            }
            exps.push(cand);
            g = g.gcd(&cand);
            m = cand;
        }
        while g != 1 {
            m += 1;
            if m % g != 0 {
                exps.push(m);
                g = g.gcd(&m);
            }
        }
        PuiseuxData::new(n, exps).expect("built valid")
    })
}

/// Semigroup generators by the recursion
/// `m̌_{i+1} = (n_{i-1}/n_i)·m̌_i - m_i + m_{i+1}`.
pub fn semigroup_by_recursion(data: &PuiseuxData) -> Vec<i64> {
    let mut out = vec![data.n];
    let betas = &data.char_exponents;
    if betas.is_empty() {
        return out;
    }
    out.push(betas[0]);
    let mut n_prev = data.n;
    for i in 1..betas.len() {
        let n_i = n_prev.gcd(&betas[i - 1]);
        let last = *out.last().unwrap();
        out.push(n_prev / n_i * last - betas[i - 1] + betas[i]);
        n_prev = n_i;
    }
    out
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        (sign * a[n - 1][n - 1]) as i64
    }
}

/// Jumps found by evaluating the multiplier divisor at every multiple of
/// `1/L`, `L = lcm v_p(F)`, below `λ_max`.
pub fn grid_jumps(cluster: &Cluster, f: &Divisor, lambda_max: &BigRational) -> Vec<BigRational> {
    let l = f.values().iter().filter(|&&v| v > 0).fold(1i64, |a, &v| a.lcm(&v));
    let mut out = Vec::new();
    let mut prev = Divisor::zero(cluster);
    for k in 1.. {
        let lambda = rat(k, l);
        if &lambda >= lambda_max {
            break;
        }
        let d = applications::multiplier_divisor(cluster, f, &lambda).unwrap();
        if d != prev {
            out.push(lambda);
        }
        prev = d;
    }
    out
}

/// `Y` abbreviates `y^2 - x^3`.
pub fn table_poly(s: &str) -> BivariatePoly {
    parse_poly(&s.replace('Y', "(y^2 - x^3)")).unwrap()
}

/// Ideal equality against a listed generating set: each listed generator
/// lies in `H_D`, and their pointwise minimum values unload to `D`.
pub fn matches_listed(cluster: &Cluster, d: &Divisor, listed: &[&str]) -> Result<(), String> {
    let mut min: Option<Vec<i64>> = None;
    for s in listed {
        let v = oracle::values(&table_poly(s), cluster).map_err(|e| e.to_string())?;
        if v.iter().zip(d.values()).any(|(a, b)| a < b) {
            return Err(format!("{s} with values {v:?} is not in H_D for {:?}", d.values()));
        }
        min = Some(match min {
            None => v,
            Some(m) => m.iter().zip(&v).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    let min = min.unwrap_or_else(|| vec![0; cluster.len()]);
    let closure = Divisor::from_values(cluster, &min).unwrap().unload(cluster).unwrap();
    if &closure == d {
        Ok(())
    } else {
        Err(format!("listed generators give {:?}, expected {:?}", closure.values(), d.values()))
    }
}

/// Multiplier ideals of `F = (6,9,18,20,21,42)` below 1 on [`ex52`].
pub const TABLE1: &[((i64, i64), &[&str])] = &[
    ((5, 18), &["x", "y"]),
    ((7, 18), &["y", "x^2"]),
    ((4, 9), &["x^2", "x*y", "y^2"]),
    ((1, 2), &["x*y", "y^2", "x^3"]),
    ((23, 42), &["y^2", "x^3", "x^2*y"]),
    ((25, 42), &["Y", "x^2*y", "x*y^2", "x^4"]),
    ((11, 18), &["x^2*y", "x*y^2", "y^3", "x^4"]),
    ((9, 14), &["x*y^2", "y^3", "x^4", "x^3*y"]),
    ((29, 42), &["x*Y", "y*Y", "x^3*y", "x^2*y^2", "x^5"]),
    ((13, 18), &["y^3", "x^3*y", "x^2*y^2", "x^5"]),
    ((31, 42), &["y*Y", "x^2*y^2", "x*y^3", "x^2*Y", "x^4*y"]),
    ((7, 9), &["x^2*y^2", "x*y^3", "y^4", "x^5", "x^4*y"]),
    ((11, 14), &["x^2*Y", "x*y*Y", "y^2*Y", "x^4*y", "x^3*y^2", "x^6"]),
    ((5, 6), &["x*y*Y", "y^2*Y", "x^3*Y", "x^3*y^2", "x^2*y^3", "x^5*y"]),
    ((37, 42), &["x*y*Y", "y^2*Y", "x^3*Y", "x^2*y^3", "x*y^4", "x^5*y", "x^4*y^2", "x^7"]),
    ((8, 9), &["y^2*Y", "x^5*y", "x^3*Y", "x^2*y^3", "x^2*y*Y", "x*y^4", "x^4*y^2", "x^7"]),
    ((13, 14), &["y^2*Y", "x^3*Y", "x^2*y*Y", "x*y^4", "y^5", "x^4*y^2", "x^3*y^3", "x^7", "x^6*y"]),
    ((17, 18), &["x^2*y*Y", "x*y^2*Y", "y^3*Y", "x^4*y^2", "x^4*Y", "x^3*y^3", "x^6*y"]),
    ((41, 42), &["x^2*y*Y", "x*y^2*Y", "y^3*Y", "x^4*Y", "x^3*y^3", "x^2*y^4", "x^6*y", "x^5*y^2", "x^8"]),
];

/// Valuation filtration at `p4` of [`ex28`]: `(first, last, generators)`.
pub const TABLE2: &[(i64, i64, &[&str])] = &[
    (1, 4, &["x", "y"]),
    (5, 6, &["y", "x^2"]),
    (7, 8, &["x*y", "x^2", "y^2"]),
    (9, 10, &["x*y", "y^2", "x^3"]),
    (11, 12, &["x^2*y", "y^2", "x^3"]),
    (13, 13, &["Y", "x^2*y", "x*y^2", "x^4"]),
    (14, 14, &["x^2*y", "x*y^2", "y^3", "x^4"]),
    (15, 16, &["x*y^2", "y^3", "x^4", "x^3*y"]),
    (17, 17, &["x*Y", "y*Y", "x^3*y", "x^2*y^2", "x^5"]),
    (18, 18, &["y^3", "x^3*y", "x^2*y^2", "x^5"]),
    (19, 19, &["y*Y", "x^2*Y", "x^4*y", "x^2*y^2", "x*y^3"]),
    (20, 20, &["x^4*y", "x^2*y^2", "x*y^3", "y^4", "x^5"]),
    (21, 21, &["x^2*Y", "x*y*Y", "y^2*Y", "x^4*y", "x^3*y^2", "x^6"]),
    (22, 22, &["x*y^3", "y^4", "x^4*y", "x^3*y^2", "x^6"]),
    (23, 23, &["x*y*Y", "y^2*Y", "x^3*y^2", "x^3*Y", "x^2*y^3", "x^5*y"]),
    (24, 24, &["y^4", "x^3*y^2", "x^2*y^3", "x^6", "x^5*y"]),
    (25, 25, &["Y^2", "x^3*Y", "x^2*y*Y", "x^5*y", "x^4*y^2", "x^7"]),
    (26, 26, &["Y^2", "x^2*y^3", "x*y^4", "x^5*y", "x^4*y^2", "x^7"]),
];

/// Reassigns every free point a coordinate drawn from `seeds`, skipping
/// values that are special or already taken on the same line.
pub fn perturb_coords(c: &Cluster, seeds: &[i64]) -> Cluster {
    use curveta_core::{Coordinate, PointKind};
    use std::collections::BTreeMap;
    let mut coords = BTreeMap::new();
    for (i, q) in c.points().filter(|&q| c.classify(q) == PointKind::Free).enumerate() {
        let start = seeds.get(i).copied().unwrap_or(0);
        for k in 0.. {
            let value = if k % 2 == 0 { start + k / 2 } else { start - 1 - k / 2 };
            let mut trial = coords.clone();
            trial.insert(q, Coordinate::integer(value));
            if c.with_replaced_coords(trial.clone()).is_ok() {
                coords = trial;
                break;
            }
        }
    }
    c.with_replaced_coords(coords).expect("each coordinate was checked")
}

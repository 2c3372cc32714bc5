//! Integral closures, multiplier ideals and valuation filtrations, all
//! reduced to generators of complete ideals `H_D`.

use num::{BigInt, BigRational, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::cluster::{Cluster, PointId};
use crate::divisor::{branch_divisor, Divisor};
use crate::error::{Error, Result};
use crate::generators::GeneratorEngine;
use crate::maximal_contact::MaximalContactSet;
use crate::monomial::MonomialIdeal;

/// Integral closure of an ideal whose pullback divisor is `f`: `H_F`.
pub fn integral_closure(
    cluster: &Cluster,
    f: &Divisor,
    contacts: &MaximalContactSet,
) -> Result<MonomialIdeal> {
    GeneratorEngine::new(cluster, contacts).ideal(f)
}

/// `K_π`, multiplicity one at every point.
pub fn relative_canonical(cluster: &Cluster) -> Divisor {
    Divisor::from_mults(cluster, &vec![1; cluster.len()]).expect("length matches")
}

/// Antinef closure of `max(0, ⌊λ·F⌋ - K_π)` in the values basis; `H` of it
/// is the multiplier ideal `J(a^λ)`.
pub fn multiplier_divisor(cluster: &Cluster, f: &Divisor, lambda: &BigRational) -> Result<Divisor> {
    cluster.check_len(f.len())?;
    let k = relative_canonical(cluster);
    let values: Vec<i64> = f
        .values()
        .iter()
        .zip(k.values())
        .map(|(&v, &kp)| {
            let scaled = (lambda * BigRational::from_integer(BigInt::from(v))).floor();
            let floor = scaled.to_integer().to_i64().expect("value fits in i64");
            (floor - kp).max(0)
        })
        .collect();
    Divisor::from_values(cluster, &values)?.unload(cluster)
}

pub fn multiplier_ideal(
    cluster: &Cluster,
    f: &Divisor,
    lambda: &BigRational,
    contacts: &MaximalContactSet,
) -> Result<(Divisor, MonomialIdeal)> {
    let f = f.unload(cluster)?;
    let d = multiplier_divisor(cluster, &f, lambda)?;
    let ideal = GeneratorEngine::new(cluster, contacts).ideal(&d)?;
    Ok((d, ideal))
}

/// Rationals `(k_p + 1 + j)/v_p(F)` in `(0, λ_max)`, sorted and distinct.
/// The multiplier divisor can only change at these.
pub fn jumping_candidates(cluster: &Cluster, f: &Divisor, lambda_max: &BigRational) -> Vec<BigRational> {
    let k = relative_canonical(cluster);
    let mut out = Vec::new();
    for (&v, &kp) in f.values().iter().zip(k.values()) {
        if v <= 0 {
            continue;
        }
        for num in (kp + 1).. {
            let c = BigRational::new(BigInt::from(num), BigInt::from(v));
            if &c >= lambda_max {
                break;
            }
            if c.is_positive() {
                out.push(c);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpingEntry {
    pub lambda: BigRational,
    pub divisor: Divisor,
    pub ideal: MonomialIdeal,
}

/// Jumping numbers below a bound with the multiplier ideal at each.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JumpingTable {
    pub entries: Vec<JumpingEntry>,
}

/// Jumping numbers `λ` with `0 < λ < λ_max`: candidates at which the
/// multiplier divisor differs from its value at the previous candidate.
pub fn jumping_numbers(
    cluster: &Cluster,
    f: &Divisor,
    lambda_max: &BigRational,
    contacts: &MaximalContactSet,
) -> Result<JumpingTable> {
    let f = f.unload(cluster)?;
    let candidates = jumping_candidates(cluster, &f, lambda_max);
    let divisors: Vec<Divisor> = candidates
        .par_iter()
        .map(|l| multiplier_divisor(cluster, &f, l))
        .collect::<Result<_>>()?;
    let mut jumps = Vec::new();
    let mut prev = Divisor::zero(cluster);
    for (l, d) in candidates.into_iter().zip(divisors) {
        if d != prev {
            jumps.push((l, d.clone()));
        }
        prev = d;
    }
    let engine = GeneratorEngine::new(cluster, contacts);
    let entries = jumps
        .into_par_iter()
        .map(|(lambda, divisor)| {
            let ideal = engine.ideal(&divisor)?;
            Ok(JumpingEntry {
                lambda,
                divisor,
                ideal,
            })
        })
        .collect::<Result<_>>()?;
    Ok(JumpingTable { entries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationStep {
    pub index: i64,
    pub divisor: Divisor,
    pub ideal: MonomialIdeal,
}

/// `V_i = {ζ : v_q(ζ) ≥ i}` for `i = 1..=i_max`, as `H` of the antinef
/// closure of `i·E_q`. Requires `i_max ≤ B_q²`.
pub fn valuation_filtration(
    cluster: &Cluster,
    q: PointId,
    i_max: i64,
    contacts: &MaximalContactSet,
) -> Result<Vec<FiltrationStep>> {
    let bound = branch_divisor(cluster, q)?.self_intersection();
    if i_max > bound {
        return Err(Error::IndexBeyondDomination {
            index: i_max,
            bound,
        });
    }
    let eq = Divisor::exceptional(cluster, q)?;
    let engine = GeneratorEngine::new(cluster, contacts);
    (1..=i_max)
        .into_par_iter()
        .map(|i| {
            let divisor = eq.scale(i).unload(cluster)?;
            let ideal = engine.ideal(&divisor)?;
            Ok(FiltrationStep {
                index: i,
                divisor,
                ideal,
            })
        })
        .collect()
}

//! Invariant checks shared by the property suites and the acceptance runner.
//! Each returns a description of the first violation.

use curveta_core::generators::{adjacent_divisor, zariski_factor};
use curveta_core::maximal_contact::branch_data;
use curveta_core::{branch_divisor, Cluster, Divisor, GeneratorEngine, MaximalContactSet, PointKind};

use super::bareiss_det;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// `v ↔ e ↔ ρ` round trips through every constructor.
pub fn bases(c: &Cluster, values: &[i64]) -> Check {
    let d = ok(Divisor::from_values(c, values))?;
    ensure!(ok(Divisor::from_mults(c, d.mults()))? == d, "mults round trip for {values:?}");
    ensure!(ok(Divisor::from_excesses(c, d.excesses()))? == d, "excess round trip for {values:?}");
    Ok(())
}

/// `N = -PᵀP` from raw proximities, `P` unimodular, `N` negative definite.
pub fn matrices(c: &Cluster) -> Check {
    let n = c.len();
    let mut p = vec![vec![0i64; n]; n];
    for q in 0..n {
        p[q][q] = 1;
        for &t in c.proximities(q) {
            p[q][t] = -1;
        }
    }
    let expected: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| -(0..n).map(|k| p[k][i] * p[k][j]).sum::<i64>()).collect())
        .collect();
    ensure!(c.intersection_matrix() == expected, "N differs from -PᵀP");
    ensure!(c.proximity_matrix().rows() == p.as_slice(), "proximity matrix orientation");
    ensure!(bareiss_det(&p) == 1, "P is not unimodular");
    for k in 1..=n {
        let minor: Vec<Vec<i64>> = expected[..k].iter().map(|r| r[..k].to_vec()).collect();
        let sign = if k % 2 == 0 { 1 } else { -1 };
        ensure!(bareiss_det(&minor) * sign > 0, "leading minor {k} has the wrong sign");
    }
    for q in 0..n {
        let count = c.proximate_points(q).len() as i64;
        ensure!(expected[q][q] == -(1 + count), "diagonal at {q}");
    }
    Ok(())
}

/// Unloading is idempotent, antinef, dominating, and below every antinef
/// divisor above the input. `ceiling` is antinef with `ceiling ≥ values`.
pub fn unloading(c: &Cluster, values: &[i64], ceiling: &Divisor) -> Check {
    let d = ok(Divisor::from_values(c, values))?;
    let u = ok(d.unload(c))?;
    ensure!(u.is_antinef(), "unload({values:?}) not antinef");
    ensure!(ok(u.unload(c))? == u, "unload not idempotent on {values:?}");
    ensure!(u.values().iter().zip(values).all(|(a, b)| a >= b), "unload lowered a value");
    ensure!(
        u.values().iter().zip(ceiling.values()).all(|(a, b)| a <= b),
        "unload({values:?}) = {:?} exceeds antinef {:?}",
        u.values(),
        ceiling.values()
    );
    Ok(())
}

/// `Σ ρ_p B_p = D`.
pub fn zariski(c: &Cluster, d: &Divisor) -> Check {
    let mut total = Divisor::zero(c);
    for (p, rho) in ok(zariski_factor(d))? {
        total = &total + &ok(branch_divisor(c, p))?.scale(rho);
    }
    ensure!(&total == d, "reconstruction of {:?}", d.values());
    Ok(())
}

/// Adjacent divisors of every simple `B_q ≠ B_O`.
pub fn adjacency(c: &Cluster) -> Check {
    for q in c.points().skip(1) {
        let b = ok(branch_divisor(c, q))?;
        let a = ok(adjacent_divisor(c, q))?;
        ensure!(a.mults()[0] == b.mults()[0] + 1, "e_O of adjacent at {q}");
        for p in c.points().skip(1) {
            let drop = b.mults()[p] - a.mults()[p];
            ensure!((0..=1).contains(&drop), "multiplicity at {p} moves by {drop} for q = {q}");
        }
        ensure!(
            ok(a.codimension(c))? == ok(b.codimension(c))? + 1,
            "codimension of adjacent at {q}"
        );
        ensure!(a.excesses()[0] > 0, "ρ_O of adjacent at {q}");
    }
    Ok(())
}

/// Support shrinks along dashed edges and every leaf is `B_O`.
pub fn tree_shape(c: &Cluster, d: &Divisor, s: &MaximalContactSet) -> Check {
    let tree = ok(GeneratorEngine::new(c, s).tree(d))?;
    let bo = ok(branch_divisor(c, 0))?;
    for e in tree.dashed_edges() {
        let (from, to) = (&tree.nodes[e.from], &tree.nodes[e.to]);
        ensure!(
            to.support_total_size() < from.support_total_size(),
            "dashed edge {:?} -> {:?} keeps support",
            from.values(),
            to.values()
        );
    }
    if !d.is_zero() {
        for l in tree.leaves() {
            ensure!(tree.nodes[l] == bo, "leaf {:?} is not B_O", tree.nodes[l].values());
        }
    }
    Ok(())
}

/// Distinct divisors in the tree stay within `4 × |K|`.
pub fn tree_budget(c: &Cluster, d: &Divisor, s: &MaximalContactSet) -> Result<(usize, usize), String> {
    let tree = ok(GeneratorEngine::new(c, s).tree(d))?;
    let mut distinct = tree.nodes.clone();
    distinct.sort();
    distinct.dedup();
    Ok((tree.nodes.len(), distinct.len()))
}

/// `B_q² = n_{g-1}·m̌_g` at every satellite `q`.
pub fn satellite_self_intersection(c: &Cluster) -> Check {
    for q in c.points().filter(|&q| c.classify(q) == PointKind::Satellite) {
        let b = ok(branch_divisor(c, q))?;
        let data = ok(branch_data(c, q))?;
        let g = data.genus();
        ensure!(g > 0, "satellite {q} with smooth branch");
        let semigroup = curveta_core::maximal_contact::semigroup_generators(&data);
        let expected = data.gcd_chain[g - 1] * semigroup.generators[g];
        let sum: i64 = b.mults().iter().map(|e| e * e).sum();
        ensure!(sum == expected, "Σe² = {sum}, n·m̌ = {expected} at {q}");
        ensure!(b.self_intersection() == sum, "B_q² at {q}");
    }
    Ok(())
}

/// Every selection `f_τⁿ` lies in `B_q` and not in the adjacent divisor.
pub fn selections(c: &Cluster, s: &MaximalContactSet) -> Check {
    let engine = GeneratorEngine::new(c, s);
    for q in c.points().skip(1) {
        let sel = ok(engine.selection(q))?.ok_or(format!("no selection at {q}"))?;
        let m = ok(sel.monomial(s))?;
        ensure!(m.member(&ok(branch_divisor(c, q))?), "{m} not in B_{q}");
        ensure!(!m.member(&ok(adjacent_divisor(c, q))?), "{m} in adjacent of B_{q}");
    }
    Ok(())
}

/// Generators lie in `H_D`, none in `H_{D+B_O}`, and their minimum values
/// are exactly `D`, so every positive excess is saturated.
pub fn soundness(c: &Cluster, d: &Divisor, s: &MaximalContactSet) -> Check {
    let ideal = ok(GeneratorEngine::new(c, s).ideal(d))?;
    let raised = d + &ok(branch_divisor(c, 0))?;
    for m in ideal.generators() {
        ensure!(m.member(d), "{m} not in H_D for {:?}", d.values());
        ensure!(!m.member(&raised), "{m} redundant for {:?}", d.values());
    }
    let min = ideal.min_values().unwrap_or_else(|| vec![0; c.len()]);
    for p in c.points().filter(|&p| d.excesses()[p] > 0) {
        ensure!(min[p] == d.values()[p], "excess at {p} unsaturated for {:?}", d.values());
    }
    ensure!(min == d.values(), "min values {min:?} vs {:?}", d.values());
    Ok(())
}

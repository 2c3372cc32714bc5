//! Monomial generators of `H_D`.
//!
//! `H_D` factors as a product of powers of simple ideals `H_{B_q}` read off
//! the excesses of `D`. A simple `H_{B_q}` with `q ≠ O` is generated by one
//! power of a maximal contact element together with the generators of its
//! adjacent ideal, whose divisor is the antinef closure of `B_q + E_O` and
//! has strictly smaller support. `H_{B_O}` is the maximal ideal.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::{Cluster, PointId, PointKind, ORIGIN};
use crate::divisor::{branch_divisor, maximal_ideal_divisor, Divisor};
use crate::error::{Error, Result};
use crate::maximal_contact::{MaximalContactSet, Var};
use crate::monomial::{Monomial, MonomialIdeal};

/// `(p, ρ_p)` for every `p` with `ρ_p > 0`.
pub fn zariski_factor(d: &Divisor) -> Result<Vec<(PointId, i64)>> {
    if !d.is_antinef() {
        return Err(Error::NotAntinef);
    }
    Ok(d
        .excesses()
        .iter()
        .enumerate()
        .filter(|(_, &r)| r > 0)
        .map(|(p, &r)| (p, r))
        .collect())
}

/// Antinef closure of `B_q + E_O`.
pub fn adjacent_divisor(cluster: &Cluster, q: PointId) -> Result<Divisor> {
    cluster.check_point(q)?;
    if q == ORIGIN {
        return Err(Error::IsMaximalIdeal);
    }
    let raised = &branch_divisor(cluster, q)? + &Divisor::exceptional(cluster, ORIGIN)?;
    raised.unload(cluster)
}

/// The power `f_τⁿ` of a maximal contact element lying in `H_{B_q}` but not
/// in its adjacent ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Selection {
    pub dead_end: PointId,
    pub power: u32,
    /// Other dead-ends meeting the same conditions, with their powers.
    pub alternatives: Vec<(PointId, u32)>,
}

impl Selection {
    pub fn monomial(&self, contacts: &MaximalContactSet) -> Result<Monomial> {
        Monomial::from_exponents(contacts, [(Var::Point(self.dead_end), self.power)])
    }
}

/// Selects `(τ, n)` for `B_q`, `q ≠ O`: `p` is the last free point with
/// `e_p(B_q) ≠ 0`; candidates are dead-ends with `e_p(B_τ) = 1` and
/// `e_O(B_τ)` dividing `e_O(B_q)`, with `n = e_O(B_q)/e_O(B_τ)`. The smallest
/// candidate whose `f_τⁿ` lies in `H_{B_q}` but not in the adjacent ideal
/// wins; since the two ideals are adjacent, any such element completes it.
pub fn select_element(
    cluster: &Cluster,
    contacts: &MaximalContactSet,
    q: PointId,
) -> Result<Selection> {
    let adjacent = adjacent_divisor(cluster, q)?;
    select_with_adjacent(cluster, contacts, q, &adjacent)
}

fn select_with_adjacent(
    cluster: &Cluster,
    contacts: &MaximalContactSet,
    q: PointId,
    adjacent: &Divisor,
) -> Result<Selection> {
    let bq = branch_divisor(cluster, q)?;
    let e = bq.mults();
    let fail = |reason: String| Error::NoAdmissibleElement { point: q, reason };
    let p = (0..=q)
        .rev()
        .find(|&p| e[p] != 0 && cluster.classify(p) != PointKind::Satellite)
        .ok_or_else(|| fail("no free point in the support".into()))?;
    let candidates: Vec<(PointId, u32)> = contacts
        .elements()
        .iter()
        .filter_map(|el| match el.var {
            Var::Point(d) => Some((d, el)),
            Var::Aux(_) => None,
        })
        .filter(|(_, el)| {
            let eo = el.e_origin();
            el.branch.mults()[p] == 1 && eo <= e[ORIGIN] && e[ORIGIN] % eo == 0
        })
        .map(|(d, el)| (d, (e[ORIGIN] / el.e_origin()) as u32))
        .collect();
    if candidates.is_empty() {
        return Err(fail(format!("no dead-end with e_{p} = 1")));
    }
    let mut admissible = Vec::new();
    for &(d, n) in &candidates {
        let m = Monomial::from_exponents(contacts, [(Var::Point(d), n)])?;
        if m.member(&bq) && !m.member(adjacent) {
            admissible.push((d, n));
        }
    }
    let Some(&(dead_end, power)) = admissible.first() else {
        let listed: Vec<String> = candidates.iter().map(|(d, n)| format!("f{d}^{n}")).collect();
        return Err(fail(format!(
            "none of {} separates B_{q} from its adjacent divisor",
            listed.join(", ")
        )));
    };
    let alternatives = admissible[1..].to_vec();
    Ok(Selection {
        dead_end,
        power,
        alternatives,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EdgeKind {
    /// From a divisor to a simple factor, weighted by the excess.
    Solid { weight: i64 },
    /// From `B_q` to its adjacent divisor.
    Dashed { dead_end: PointId, power: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub from: usize,
    pub to: usize,
    #[serde(flatten)]
    pub kind: EdgeKind,
}

/// The recursion tree; node `0` is the root. Repeated divisors appear as
/// separate nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTree {
    pub nodes: Vec<Divisor>,
    pub edges: Vec<TreeEdge>,
}

impl GeneratorTree {
    pub fn root(&self) -> &Divisor {
        &self.nodes[0]
    }

    pub fn children(&self, node: usize) -> impl Iterator<Item = &TreeEdge> {
        self.edges.iter().filter(move |e| e.from == node)
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&n| self.children(n).next().is_none())
            .collect()
    }

    pub fn dashed_edges(&self) -> impl Iterator<Item = &TreeEdge> {
        self.edges
            .iter()
            .filter(|e| matches!(e.kind, EdgeKind::Dashed { .. }))
    }

    /// Graphviz rendering; `label` names dashed edges.
    pub fn to_dot(&self, label: &dyn Fn(PointId, u32) -> String) -> String {
        let mut out = String::from("digraph generators {\n  node [shape=box];\n");
        for (i, d) in self.nodes.iter().enumerate() {
            let v: Vec<String> = d.values().iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", v.join(","));
        }
        for e in &self.edges {
            match e.kind {
                EdgeKind::Solid { weight } => {
                    let _ = writeln!(out, "  n{} -> n{} [label=\"{weight}\"];", e.from, e.to);
                }
                EdgeKind::Dashed { dead_end, power } => {
                    let _ = writeln!(
                        out,
                        "  n{} -> n{} [style=dashed, label=\"{}\"];",
                        e.from,
                        e.to,
                        label(dead_end, power)
                    );
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug)]
struct SimpleEntry {
    /// Generators of `H_{B_q}` as assembled: `f_τⁿ` plus the adjacent
    /// ideal's generators, without further pruning.
    ideal: MonomialIdeal,
    adjacent: Option<(Divisor, Selection)>,
}

/// Memoizing generator engine for one cluster and contact set.
pub struct GeneratorEngine<'a> {
    cluster: &'a Cluster,
    contacts: &'a MaximalContactSet,
    total_origin: Divisor,
    simple: Mutex<HashMap<PointId, Arc<SimpleEntry>>>,
    full: Mutex<HashMap<Vec<i64>, Arc<MonomialIdeal>>>,
}

impl<'a> GeneratorEngine<'a> {
    pub fn new(cluster: &'a Cluster, contacts: &'a MaximalContactSet) -> Self {
        GeneratorEngine {
            cluster,
            contacts,
            total_origin: maximal_ideal_divisor(cluster),
            simple: Mutex::new(HashMap::new()),
            full: Mutex::new(HashMap::new()),
        }
    }

    pub fn cluster(&self) -> &Cluster {
        self.cluster
    }

    pub fn contacts(&self) -> &MaximalContactSet {
        self.contacts
    }

    /// `H_D`, unloading `D` first if needed.
    pub fn ideal(&self, d: &Divisor) -> Result<MonomialIdeal> {
        self.cluster.check_len(d.len())?;
        let d = if d.is_antinef() {
            d.clone()
        } else {
            d.unload(self.cluster)?
        };
        Ok((*self.ideal_antinef(&d)?).clone())
    }

    fn ideal_antinef(&self, d: &Divisor) -> Result<Arc<MonomialIdeal>> {
        if let Some(hit) = self.full.lock().unwrap().get(d.values()) {
            return Ok(hit.clone());
        }
        let len = self.cluster.len();
        let ideal = if d.is_zero() {
            MonomialIdeal::unit(len)
        } else {
            let factors = zariski_factor(d)?;
            let simples: Vec<Arc<SimpleEntry>> = factors
                .par_iter()
                .map(|&(q, _)| self.simple_entry(q))
                .collect::<Result<_>>()?;
            let mut acc = MonomialIdeal::unit(len);
            let mut acc_div = Divisor::zero(self.cluster);
            for (&(q, rho), entry) in factors.iter().zip(&simples) {
                let bq = branch_divisor(self.cluster, q)?;
                let (pw, pw_div) = self.power_pruned(&entry.ideal, &bq, rho as u32)?;
                acc_div = &acc_div + &pw_div;
                acc = acc.product(&pw).nakayama_prune(&acc_div, &self.total_origin)?;
            }
            acc.nakayama_prune(d, &self.total_origin)?
        };
        let ideal = Arc::new(ideal);
        let mut memo = self.full.lock().unwrap();
        Ok(memo.entry(d.values().to_vec()).or_insert(ideal).clone())
    }

    /// `I^k` for `I = H_B`, pruning each intermediate product against its
    /// own divisor.
    fn power_pruned(
        &self,
        ideal: &MonomialIdeal,
        b: &Divisor,
        k: u32,
    ) -> Result<(MonomialIdeal, Divisor)> {
        let mut acc = (MonomialIdeal::unit(self.cluster.len()), Divisor::zero(self.cluster));
        let mut base = (ideal.normalized(), b.clone());
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                let div = &acc.1 + &base.1;
                acc = (acc.0.product(&base.0).nakayama_prune(&div, &self.total_origin)?, div);
            }
            k >>= 1;
            if k > 0 {
                let div = base.1.scale(2);
                base = (base.0.product(&base.0).nakayama_prune(&div, &self.total_origin)?, div);
            }
        }
        Ok(acc)
    }

    fn simple_entry(&self, q: PointId) -> Result<Arc<SimpleEntry>> {
        if let Some(hit) = self.simple.lock().unwrap().get(&q) {
            return Ok(hit.clone());
        }
        let entry = if q == ORIGIN {
            let (a, b) = self.contacts.smooth_pair();
            SimpleEntry {
                ideal: MonomialIdeal::raw(vec![
                    Monomial::var(self.contacts, a)?,
                    Monomial::var(self.contacts, b)?,
                ]),
                adjacent: None,
            }
        } else {
            let adjacent = adjacent_divisor(self.cluster, q)?;
            let sel = select_with_adjacent(self.cluster, self.contacts, q, &adjacent)?;
            let below = self.ideal_antinef(&adjacent)?;
            let mut gens = vec![sel.monomial(self.contacts)?];
            gens.extend(below.generators().iter().cloned());
            SimpleEntry {
                ideal: MonomialIdeal::raw(gens),
                adjacent: Some((adjacent, sel)),
            }
        };
        let entry = Arc::new(entry);
        let mut memo = self.simple.lock().unwrap();
        Ok(memo.entry(q).or_insert(entry).clone())
    }

    /// Generators of the simple ideal `H_{B_q}` as assembled from the
    /// selected element and the adjacent ideal.
    pub fn simple_ideal(&self, q: PointId) -> Result<MonomialIdeal> {
        self.cluster.check_point(q)?;
        Ok(self.simple_entry(q)?.ideal.clone())
    }

    pub fn selection(&self, q: PointId) -> Result<Option<Selection>> {
        self.cluster.check_point(q)?;
        Ok(self.simple_entry(q)?.adjacent.as_ref().map(|(_, s)| s.clone()))
    }

    /// Recursion tree rooted at the antinef closure of `d`.
    pub fn tree(&self, d: &Divisor) -> Result<GeneratorTree> {
        let d = d.unload(self.cluster)?;
        let mut tree = GeneratorTree {
            nodes: vec![d.clone()],
            edges: Vec::new(),
        };
        self.expand(&mut tree, 0)?;
        Ok(tree)
    }

    fn expand(&self, tree: &mut GeneratorTree, node: usize) -> Result<()> {
        let d = tree.nodes[node].clone();
        if d.is_zero() {
            return Ok(());
        }
        let factors = zariski_factor(&d)?;
        if let [(q, 1)] = factors[..] {
            return self.expand_simple(tree, node, q);
        }
        for (q, rho) in factors {
            let child = tree.nodes.len();
            tree.nodes.push(branch_divisor(self.cluster, q)?);
            tree.edges.push(TreeEdge {
                from: node,
                to: child,
                kind: EdgeKind::Solid { weight: rho },
            });
            self.expand_simple(tree, child, q)?;
        }
        Ok(())
    }

    fn expand_simple(&self, tree: &mut GeneratorTree, node: usize, q: PointId) -> Result<()> {
        let entry = self.simple_entry(q)?;
        if let Some((adjacent, sel)) = &entry.adjacent {
            let child = tree.nodes.len();
            tree.nodes.push(adjacent.clone());
            tree.edges.push(TreeEdge {
                from: node,
                to: child,
                kind: EdgeKind::Dashed {
                    dead_end: sel.dead_end,
                    power: sel.power,
                },
            });
            self.expand(tree, child)?;
        }
        Ok(())
    }
}

/// `H_D` as monomials in the maximal contact elements, with its recursion tree.
pub fn compute_generators(
    cluster: &Cluster,
    d: &Divisor,
    contacts: &MaximalContactSet,
) -> Result<(MonomialIdeal, GeneratorTree)> {
    let engine = GeneratorEngine::new(cluster, contacts);
    let ideal = engine.ideal(d)?;
    let tree = engine.tree(d)?;
    Ok((ideal, tree))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Cluster, MaximalContactSet) {
        let c = Cluster::new(vec![vec![], vec![0], vec![0, 1], vec![2], vec![2, 3]]).unwrap();
        let s = MaximalContactSet::explicit(&c).unwrap();
        (c, s)
    }

    #[test]
    fn factorization() {
        let (c, _) = setup();
        let d = Divisor::from_values(&c, &[4, 6, 12, 13, 26]).unwrap();
        assert_eq!(zariski_factor(&d).unwrap(), vec![(4, 1)]);
        let adj = Divisor::from_values(&c, &[5, 7, 13, 13, 26]).unwrap();
        assert_eq!(zariski_factor(&adj).unwrap(), vec![(0, 2), (1, 1), (2, 1)]);
        let raw = Divisor::from_values(&c, &[5, 6, 12, 13, 26]).unwrap();
        assert_eq!(zariski_factor(&raw), Err(Error::NotAntinef));
    }

    #[test]
    fn adjacency() {
        let (c, _) = setup();
        assert_eq!(adjacent_divisor(&c, 4).unwrap().values(), &[5, 7, 13, 13, 26]);
        assert_eq!(adjacent_divisor(&c, 1).unwrap().values(), &[2, 2, 4, 4, 8]);
        assert_eq!(adjacent_divisor(&c, 0), Err(Error::IsMaximalIdeal));
    }

    #[test]
    fn selections() {
        let (c, s) = setup();
        let sel = |q| {
            let x = select_element(&c, &s, q).unwrap();
            (x.dead_end, x.power)
        };
        assert_eq!(sel(4), (3, 2));
        assert_eq!(sel(1), (1, 1));
        assert_eq!(sel(2), (1, 2));
        assert_eq!(select_element(&c, &s, 2).unwrap().alternatives, vec![(3, 1)]);
    }

    #[test]
    fn structural_candidate_that_does_not_separate_is_skipped() {
        // f4 passes e_{p1} = 1 but only follows B_6 up to p2; f5^3 is needed.
        let c = Cluster::new(vec![vec![], vec![0], vec![0, 1], vec![0, 2], vec![3], vec![1], vec![1, 2]])
            .unwrap();
        let s = MaximalContactSet::new(&c).unwrap();
        let x = select_element(&c, &s, 6).unwrap();
        assert_eq!((x.dead_end, x.power), (5, 3));
        assert!(x.alternatives.is_empty());
    }

    #[test]
    fn example_ideal() {
        let (c, s) = setup();
        let d = Divisor::from_values(&c, &[4, 6, 12, 13, 26]).unwrap();
        let (ideal, tree) = compute_generators(&c, &d, &s).unwrap();
        assert_eq!(ideal.to_string(), "(f3^2, f0^2*f1^3, f0*f1^4, f0^5*f1, f0^4*f1^2, f0^7)");
        assert_eq!(tree.nodes.len(), 9);
        let bo = maximal_ideal_divisor(&c);
        for leaf in tree.leaves() {
            assert_eq!(tree.nodes[leaf], bo);
        }
    }

    #[test]
    fn simple_ideals_as_assembled() {
        let (c, s) = setup();
        let e = GeneratorEngine::new(&c, &s);
        assert_eq!(e.simple_ideal(0).unwrap().to_string(), "(f0, f1)");
        assert_eq!(
            e.simple_ideal(1).unwrap().to_string(),
            "(f1, f0^2, f0*f1, f1^2)"
        );
        assert_eq!(
            e.simple_ideal(2).unwrap().to_string(),
            "(f1^2, f0^3, f0^2*f1, f0*f1^2, f1^3)"
        );
        let b1 = branch_divisor(&c, 1).unwrap();
        assert_eq!(e.ideal(&b1).unwrap().to_string(), "(f1, f0^2)");
    }

    #[test]
    fn unit_and_maximal() {
        let (c, s) = setup();
        let e = GeneratorEngine::new(&c, &s);
        assert!(e.ideal(&Divisor::zero(&c)).unwrap().is_unit());
        assert_eq!(e.ideal(&maximal_ideal_divisor(&c)).unwrap().to_string(), "(f0, f1)");
    }
}

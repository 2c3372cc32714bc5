//! Equisingularity data of branch divisors and maximal contact elements.

use std::fmt;

use num::integer::gcd;
use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::cluster::{Cluster, PointId, PointKind, ORIGIN};
use crate::divisor::{branch_divisor, Divisor};
use crate::error::{Error, Result};
use crate::oracle::poly::BivariatePoly;
use crate::oracle::{self, Placement};

/// Characteristic data of a plane branch: `x = tⁿ`, `y = Σ a_j t^j` with
/// characteristic exponents `m₁ < … < m_g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PuiseuxData {
    pub n: i64,
    pub char_exponents: Vec<i64>,
    /// `n₀ = n`, `n_i = gcd(n_{i-1}, m_i)`; ends in `1`.
    pub gcd_chain: Vec<i64>,
}

impl PuiseuxData {
    /// Validates and fills in the gcd chain.
    pub fn new(n: i64, char_exponents: Vec<i64>) -> Result<Self> {
        let bad = |why: &str| Err(Error::InconsistentSequence(why.to_string()));
        if n < 1 {
            return bad("multiplicity must be positive");
        }
        let mut chain = vec![n];
        let mut prev = 0;
        for &m in &char_exponents {
            let last = *chain.last().unwrap();
            if m <= prev || (prev == 0 && m <= n) {
                return bad("characteristic exponents must increase and exceed n");
            }
            if m % last == 0 {
                return bad("characteristic exponent divisible by the running gcd");
            }
            chain.push(gcd(last, m));
            prev = m;
        }
        if *chain.last().unwrap() != 1 {
            return bad("gcd chain does not reach 1");
        }
        Ok(PuiseuxData {
            n,
            char_exponents,
            gcd_chain: chain,
        })
    }

    pub fn genus(&self) -> usize {
        self.char_exponents.len()
    }

    /// Multiplicities and free flags of the resolution points, as produced by
    /// the Euclidean algorithm on each characteristic pair.
    pub fn expansion(&self) -> (Vec<i64>, Vec<bool>) {
        let mut mults = Vec::new();
        let mut free = Vec::new();
        if self.char_exponents.is_empty() {
            return (vec![self.n], vec![true]);
        }
        let mut prev = 0;
        for (i, &m) in self.char_exponents.iter().enumerate() {
            let (ms, fs) = euclid_expansion(m - prev, self.gcd_chain[i]);
            mults.extend(ms);
            free.extend(fs);
            prev = m;
        }
        (mults, free)
    }
}

/// Blocks of the Euclidean algorithm on `(a, b)`: the first block is free,
/// the second starts with a free point, everything after is satellite.
fn euclid_expansion(a: i64, b: i64) -> (Vec<i64>, Vec<bool>) {
    let (mut a, mut b) = (a, b);
    let mut mults = Vec::new();
    let mut free = Vec::new();
    let mut block = 0;
    while b > 0 {
        let (h, r) = (a / b, a % b);
        for k in 0..h {
            mults.push(b);
            free.push(block == 0 || (block == 1 && k == 0));
        }
        a = b;
        b = r;
        block += 1;
    }
    (mults, free)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemigroupData {
    /// `n, m̌₁, …, m̌_g`.
    pub generators: Vec<i64>,
}

/// `m̌_i = Σ_{j<i} (n_{j-1} - n_j)·m_j / n_{i-1} + m_i`.
pub fn semigroup_generators(data: &PuiseuxData) -> SemigroupData {
    let mut generators = vec![data.n];
    let mut acc = 0;
    for (i, &m) in data.char_exponents.iter().enumerate() {
        let n_prev = data.gcd_chain[i];
        debug_assert_eq!(acc % n_prev, 0);
        generators.push(acc / n_prev + m);
        acc += (data.gcd_chain[i] - data.gcd_chain[i + 1]) * m;
    }
    SemigroupData { generators }
}

/// Nonzero multiplicities of `B_q`, in blow-up order.
pub fn multiplicity_sequence(cluster: &Cluster, q: PointId) -> Result<Vec<i64>> {
    Ok(branch_pattern(cluster, q)?.0)
}

/// Multiplicities of `B_q` along its support with free flags (origin counts
/// as free).
pub fn branch_pattern(cluster: &Cluster, q: PointId) -> Result<(Vec<i64>, Vec<bool>)> {
    let b = branch_divisor(cluster, q)?;
    let mut mults = Vec::new();
    let mut free = Vec::new();
    for (p, &e) in b.mults().iter().enumerate() {
        if e != 0 {
            mults.push(e);
            free.push(cluster.classify(p) != PointKind::Satellite);
        }
    }
    Ok((mults, free))
}

/// Recovers characteristic exponents from a multiplicity sequence and its
/// free/satellite pattern; trailing free points of multiplicity one are
/// allowed.
pub fn characteristic_data(mults: &[i64], free: &[bool]) -> Result<PuiseuxData> {
    let bad = |why: String| Err(Error::InconsistentSequence(why));
    if mults.is_empty() || mults.len() != free.len() {
        return bad("empty sequence or pattern length mismatch".into());
    }
    let n = mults[0];
    let mut n_cur = n;
    let mut m_prev = 0;
    let mut exps = Vec::new();
    let mut idx = 0;
    loop {
        if n_cur == 1 {
            if let Some(k) = (idx..mults.len()).find(|&k| mults[k] != 1 || !free[k]) {
                return bad(format!("position {k}: expected a free point of multiplicity 1"));
            }
            break;
        }
        let start = idx;
        while idx < mults.len() && free[idx] && mults[idx] == n_cur {
            idx += 1;
        }
        if idx == mults.len() {
            return bad(format!("sequence stops at multiplicity {n_cur}"));
        }
        let r = mults[idx];
        if !free[idx] || r <= 0 || r >= n_cur {
            return bad(format!("position {idx}: cannot start a characteristic pair"));
        }
        let h = (idx - start) as i64;
        let m = m_prev + h * n_cur + r;
        let (exp_mults, exp_free) = euclid_expansion(m - m_prev, n_cur);
        let end = start + exp_mults.len();
        if end > mults.len()
            || mults[start..end] != exp_mults[..]
            || free[start..end] != exp_free[..]
        {
            return bad(format!("positions {start}..{end} do not match the pair ({n_cur}, {m})"));
        }
        exps.push(m);
        n_cur = gcd(n_cur, r);
        m_prev = m;
        idx = end;
    }
    PuiseuxData::new(n, exps)
}

/// Characteristic data of the branch divisor `B_q`.
pub fn branch_data(cluster: &Cluster, q: PointId) -> Result<PuiseuxData> {
    let (mults, free) = branch_pattern(cluster, q)?;
    characteristic_data(&mults, &free)
}

/// A variable of the monomial ring: a dead-end's maximal contact element or
/// one of the auxiliary smooth elements added when the dead-ends supply too
/// few smooth transverse elements at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    Point(PointId),
    Aux(u8),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Point(p) => write!(f, "f{p}"),
            Var::Aux(k) => write!(f, "g{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactElement {
    pub var: Var,
    /// Branch divisor of the element; `B_O` for auxiliary elements.
    pub branch: Divisor,
    pub sequence: Vec<i64>,
    pub puiseux: PuiseuxData,
    pub semigroup: SemigroupData,
    pub poly: Option<BivariatePoly>,
}

impl ContactElement {
    pub fn e_origin(&self) -> i64 {
        self.branch.mults()[ORIGIN]
    }
}

/// How to pick an explicit curvette: `skip` admissible directions off the
/// cluster, then bend by higher-order `tail` coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CurvetteChoice {
    pub skip: usize,
    pub tail: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalContactSet {
    elements: Vec<ContactElement>,
    smooth_pair: (Var, Var),
}

impl MaximalContactSet {
    /// One element per dead-end, plus auxiliary smooth elements if needed.
    pub fn new(cluster: &Cluster) -> Result<Self> {
        let mut elements = Vec::new();
        for d in cluster.dead_ends() {
            elements.push(element(cluster, Var::Point(d), branch_divisor(cluster, d)?)?);
        }
        let smooth: Vec<&ContactElement> = elements.iter().filter(|e| e.e_origin() == 1).collect();
        let pair = smooth
            .iter()
            .enumerate()
            .flat_map(|(i, a)| smooth[i + 1..].iter().map(move |b| (*a, *b)))
            .find(|(a, b)| a.branch.intersect(&b.branch) == 1)
            .map(|(a, b)| (a.var, b.var));
        let smooth_pair = match (pair, smooth.first()) {
            (Some(p), _) => p,
            (None, Some(first)) => (first.var, Var::Aux(0)),
            (None, None) => (Var::Aux(0), Var::Aux(1)),
        };
        let bo = branch_divisor(cluster, ORIGIN)?;
        for v in [smooth_pair.0, smooth_pair.1] {
            if let Var::Aux(_) = v {
                elements.push(element(cluster, v, bo.clone())?);
            }
        }
        Ok(MaximalContactSet {
            elements,
            smooth_pair,
        })
    }

    /// Attaches explicit polynomials with the default curvette choices.
    pub fn explicit(cluster: &Cluster) -> Result<Self> {
        Self::explicit_with(cluster, |_| CurvetteChoice::default())
    }

    /// Attaches explicit curvettes, each verified against the oracle.
    pub fn explicit_with(
        cluster: &Cluster,
        choose: impl Fn(Var) -> CurvetteChoice,
    ) -> Result<Self> {
        let mut set = Self::new(cluster)?;
        let placement = Placement::with_defaults(cluster);
        let origin_skip = set
            .elements
            .iter()
            .find(|e| e.var == Var::Point(ORIGIN))
            .map(|e| choose(e.var).skip + 1)
            .unwrap_or(0);
        for el in &mut set.elements {
            let (point, choice) = match el.var {
                Var::Point(d) => (d, choose(el.var)),
                Var::Aux(k) => {
                    let mut c = choose(el.var);
                    c.skip += origin_skip + k as usize;
                    (ORIGIN, c)
                }
            };
            let f = oracle::curvette(cluster, &placement, point, choice.skip, &choice.tail)?;
            let found = oracle::multiplicities_with(&f, cluster, &placement)?;
            if found != el.branch.mults() {
                return Err(Error::OracleMismatch {
                    point,
                    expected: el.branch.mults().to_vec(),
                    found,
                });
            }
            el.poly = Some(f);
        }
        Ok(set)
    }

    pub fn elements(&self) -> &[ContactElement] {
        &self.elements
    }

    pub fn get(&self, var: Var) -> Option<&ContactElement> {
        self.elements.iter().find(|e| e.var == var)
    }

    pub fn dead_end(&self, d: PointId) -> Option<&ContactElement> {
        self.get(Var::Point(d))
    }

    /// The two smooth transverse elements emitted for `B_O`.
    pub fn smooth_pair(&self) -> (Var, Var) {
        self.smooth_pair
    }

    pub fn is_augmented(&self) -> bool {
        self.elements.iter().any(|e| matches!(e.var, Var::Aux(_)))
    }

    pub fn has_polynomials(&self) -> bool {
        self.elements.iter().all(|e| e.poly.is_some())
    }
}

fn element(cluster: &Cluster, var: Var, branch: Divisor) -> Result<ContactElement> {
    let (sequence, free) = match var {
        Var::Point(d) => branch_pattern(cluster, d)?,
        Var::Aux(_) => (vec![1], vec![true]),
    };
    let puiseux = characteristic_data(&sequence, &free)?;
    let semigroup = semigroup_generators(&puiseux);
    Ok(ContactElement {
        var,
        branch,
        sequence,
        puiseux,
        semigroup,
        poly: None,
    })
}

/// An irreducible polynomial whose strict transforms follow `B_d` exactly,
/// using default coordinates where the cluster gives none.
pub fn canonical_polynomial(cluster: &Cluster, dead_end: PointId) -> Result<BivariatePoly> {
    let placement = Placement::with_defaults(cluster);
    let f = oracle::curvette(cluster, &placement, dead_end, 0, &[])?;
    let expected = branch_divisor(cluster, dead_end)?.mults().to_vec();
    let found = oracle::multiplicities_with(&f, cluster, &placement)?;
    if found != expected {
        return Err(Error::OracleMismatch {
            point: dead_end,
            expected,
            found,
        });
    }
    Ok(f)
}

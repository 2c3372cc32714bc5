//! Formal monomials in maximal contact elements and ideals they generate.
//!
//! A monomial carries its value vector, which by Noether's formula is the
//! sum of the value vectors of its factors' branch divisors.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::maximal_contact::{MaximalContactSet, Var};
use crate::oracle::poly::BivariatePoly;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: BTreeMap<Var, u32>,
    values: Vec<i64>,
}

impl Monomial {
    /// The empty product, with zero values on `len` points.
    pub fn one(len: usize) -> Self {
        Monomial {
            exponents: BTreeMap::new(),
            values: vec![0; len],
        }
    }

    pub fn var(contacts: &MaximalContactSet, v: Var) -> Result<Self> {
        Self::from_exponents(contacts, [(v, 1)])
    }

    pub fn from_exponents(
        contacts: &MaximalContactSet,
        exps: impl IntoIterator<Item = (Var, u32)>,
    ) -> Result<Self> {
        let len = contacts
            .elements()
            .first()
            .map(|e| e.branch.len())
            .unwrap_or(0);
        let mut m = Self::one(len);
        for (v, k) in exps {
            if k == 0 {
                continue;
            }
            let el = contacts
                .get(v)
                .ok_or_else(|| Error::MissingPolynomial(format!("no contact element {v}")))?;
            *m.exponents.entry(v).or_insert(0) += k;
            for (acc, x) in m.values.iter_mut().zip(el.branch.values()) {
                *acc += i64::from(k) * x;
            }
        }
        Ok(m)
    }

    pub fn exponents(&self) -> &BTreeMap<Var, u32> {
        &self.exponents
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.exponents.get(&v).copied().unwrap_or(0)
    }

    /// `v_p` for every point `p`.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn valuation(&self, p: usize) -> i64 {
        self.values[p]
    }

    pub fn degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exponents = self.exponents.clone();
        for (&v, &k) in &other.exponents {
            *exponents.entry(v).or_insert(0) += k;
        }
        Monomial {
            exponents,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .filter(|_| k > 0)
                .map(|(&v, &e)| (v, e * k))
                .collect(),
            values: self.values.iter().map(|x| x * i64::from(k)).collect(),
        }
    }

    /// Exponentwise `self | other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents.iter().all(|(v, &k)| other.exponent(*v) >= k)
    }

    /// `v_p(m) ≥ v_p(D)` at every point.
    pub fn member(&self, d: &Divisor) -> bool {
        self.values.iter().zip(d.values()).all(|(a, b)| a >= b)
    }

    /// Expanded product of the explicit polynomials.
    pub fn specialize(&self, contacts: &MaximalContactSet) -> Result<BivariatePoly> {
        let mut out = BivariatePoly::one();
        for (&v, &k) in &self.exponents {
            let poly = contacts
                .get(v)
                .and_then(|e| e.poly.as_ref())
                .ok_or_else(|| Error::MissingPolynomial(v.to_string()))?;
            out = &out * &poly.pow(k);
        }
        Ok(out)
    }

    /// Factored form such as `x^2*(y^2 - x^3)`, using the explicit polynomials.
    pub fn specialize_factored(&self, contacts: &MaximalContactSet) -> Result<String> {
        if self.is_one() {
            return Ok("1".into());
        }
        let mut parts = Vec::new();
        for (&v, &k) in &self.exponents {
            let poly = contacts
                .get(v)
                .and_then(|e| e.poly.as_ref())
                .ok_or_else(|| Error::MissingPolynomial(v.to_string()))?;
            let s = poly.to_string();
            let base = if poly.num_terms() > 1 { format!("({s})") } else { s };
            parts.push(if k == 1 { base } else { format!("{base}^{k}") });
        }
        Ok(parts.join("*"))
    }
}

impl Ord for Monomial {
    /// Total degree ascending, then exponents compared lexicographically in
    /// variable order with larger exponents first.
    fn cmp(&self, other: &Self) -> Ordering {
        let deg = self.degree().cmp(&other.degree());
        if deg != Ordering::Equal {
            return deg;
        }
        let mut vars: Vec<Var> = self
            .exponents
            .keys()
            .chain(other.exponents.keys())
            .copied()
            .collect();
        vars.sort();
        vars.dedup();
        for v in vars {
            let c = other.exponent(v).cmp(&self.exponent(v));
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (v, &k)) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if k == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{k}")?;
            }
        }
        Ok(())
    }
}

/// Finite set of monomials, sorted, with no generator dividing another.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(generators: Vec<Monomial>) -> Self {
        let mut gens = generators;
        gens.sort();
        gens.dedup();
        let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
        // in degree order a divisor always precedes its multiples
        for m in gens {
            if !kept.iter().any(|k| k.divides(&m)) {
                kept.push(m);
            }
        }
        MonomialIdeal { generators: kept }
    }

    /// Sorted and deduplicated, but without divisibility normalization.
    pub fn raw(generators: Vec<Monomial>) -> Self {
        let mut generators = generators;
        generators.sort();
        generators.dedup();
        MonomialIdeal { generators }
    }

    /// Divisibility normalization of an arbitrary presentation.
    pub fn normalized(&self) -> Self {
        Self::new(self.generators.clone())
    }

    pub fn unit(len: usize) -> Self {
        MonomialIdeal {
            generators: vec![Monomial::one(len)],
        }
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(Monomial::is_one)
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let gens = self
            .generators
            .iter()
            .flat_map(|a| other.generators.iter().map(move |b| a.mul(b)))
            .collect();
        MonomialIdeal::new(gens)
    }

    /// `I^k` by repeated squaring; `prune` runs after every multiplication.
    pub fn power_with(
        &self,
        k: u32,
        len: usize,
        prune: &dyn Fn(MonomialIdeal) -> Result<MonomialIdeal>,
    ) -> Result<MonomialIdeal> {
        let mut acc = MonomialIdeal::unit(len);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = prune(acc.product(&base))?;
            }
            k >>= 1;
            if k > 0 {
                base = prune(base.product(&base))?;
            }
        }
        Ok(acc)
    }

    pub fn power(&self, k: u32, len: usize) -> MonomialIdeal {
        self.power_with(k, len, &|i| Ok(i)).expect("identity prune cannot fail")
    }

    /// Every generator lies in `H_D`.
    pub fn contained_in(&self, d: &Divisor) -> bool {
        self.generators.iter().all(|m| m.member(d))
    }

    /// Drops generators lying in `H_{D + Ē_O}`, which are redundant for
    /// generating `H_D`, then normalizes by divisibility.
    pub fn nakayama_prune(&self, d: &Divisor, total_origin: &Divisor) -> Result<MonomialIdeal> {
        if let Some(m) = self.generators.iter().find(|m| !m.member(d)) {
            return Err(Error::PreconditionViolated(m.to_string()));
        }
        let raised = d + total_origin;
        Ok(MonomialIdeal::new(
            self.generators
                .iter()
                .filter(|m| !m.member(&raised))
                .cloned()
                .collect(),
        ))
    }

    pub fn specialize(&self, contacts: &MaximalContactSet) -> Result<Vec<BivariatePoly>> {
        self.generators.iter().map(|m| m.specialize(contacts)).collect()
    }

    /// Componentwise minimum of the generators' values: the values of the
    /// divisor cut out by the ideal's pullback.
    pub fn min_values(&self) -> Option<Vec<i64>> {
        let first = self.generators.first()?.values().to_vec();
        Some(self.generators.iter().skip(1).fold(first, |acc, m| {
            acc.iter().zip(m.values()).map(|(a, b)| *a.min(b)).collect()
        }))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, m) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}

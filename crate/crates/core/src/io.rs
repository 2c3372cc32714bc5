//! JSON input formats and serializable output records.
//!
//! Every output record derives both `Serialize` and `Deserialize`, and
//! re-parsing emitted JSON yields an equal value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::applications::{FiltrationStep, JumpingEntry};
use crate::cluster::{Cluster, Coordinate, PointId};
use crate::divisor::{Basis, Divisor};
use crate::error::{Error, Result};
use crate::generators::{GeneratorTree, TreeEdge};
use crate::maximal_contact::{ContactElement, MaximalContactSet};
use crate::monomial::{Monomial, MonomialIdeal};

/// `{"points": 5, "proximities": [[], [0], ...], "coords": {"3": "1/2"}}`.
/// `points` is optional and checked against the list length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    pub proximities: Vec<Vec<PointId>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coords: BTreeMap<PointId, String>,
}

impl ClusterJson {
    pub fn from_cluster(cluster: &Cluster) -> Self {
        ClusterJson {
            points: Some(cluster.len()),
            proximities: cluster.raw_proximities().to_vec(),
            coords: cluster
                .coords()
                .iter()
                .map(|(&p, c)| (p, c.to_string()))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Cluster> {
        if let Some(n) = self.points {
            if n != self.proximities.len() {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: self.proximities.len(),
                });
            }
        }
        let coords = self
            .coords
            .iter()
            .map(|(&p, s)| {
                s.parse::<Coordinate>()
                    .map(|c| (p, c))
                    .map_err(|_| Error::InvalidCoordinate {
                        point: p,
                        reason: format!("cannot parse {s:?}"),
                    })
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Cluster::with_coords(self.proximities.clone(), coords)
    }
}

/// `{"basis": "values", "coeffs": [4, 6, 12, 13, 26]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorJson {
    pub basis: Basis,
    pub coeffs: Vec<i64>,
}

impl DivisorJson {
    pub fn build(&self, cluster: &Cluster) -> Result<Divisor> {
        Divisor::from_basis(cluster, self.basis, &self.coeffs)
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_cluster(text: &str) -> Result<Cluster> {
    parse_json::<ClusterJson>(text)?.build()
}

pub fn parse_divisor(text: &str, cluster: &Cluster) -> Result<Divisor> {
    parse_json::<DivisorJson>(text)?.build(cluster)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output records serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorOut {
    pub values: Vec<i64>,
    pub mults: Vec<i64>,
    pub excesses: Vec<i64>,
}

impl From<&Divisor> for DivisorOut {
    fn from(d: &Divisor) -> Self {
        DivisorOut {
            values: d.values().to_vec(),
            mults: d.mults().to_vec(),
            excesses: d.excesses().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialOut {
    pub monomial: String,
    pub exponents: BTreeMap<String, u32>,
    pub values: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
}

impl MonomialOut {
    /// `contacts` with polynomials attached adds the specialization.
    pub fn new(m: &Monomial, contacts: Option<&MaximalContactSet>) -> Result<Self> {
        let poly = match contacts {
            Some(s) => Some(m.specialize_factored(s)?),
            None => None,
        };
        Ok(MonomialOut {
            monomial: m.to_string(),
            exponents: m.exponents().iter().map(|(v, &k)| (v.to_string(), k)).collect(),
            values: m.values().to_vec(),
            poly,
        })
    }
}

pub fn ideal_out(i: &MonomialIdeal, contacts: Option<&MaximalContactSet>) -> Result<Vec<MonomialOut>> {
    i.generators().iter().map(|m| MonomialOut::new(m, contacts)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeOut {
    /// Value vectors; node `0` is the root.
    pub nodes: Vec<Vec<i64>>,
    pub edges: Vec<TreeEdge>,
}

impl From<&GeneratorTree> for TreeOut {
    fn from(t: &GeneratorTree) -> Self {
        TreeOut {
            nodes: t.nodes.iter().map(|d| d.values().to_vec()).collect(),
            edges: t.edges.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GensOut {
    pub divisor: DivisorOut,
    /// True when auxiliary smooth elements `g0`, `g1` were added.
    pub augmented: bool,
    pub generators: Vec<MonomialOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorOut {
    pub divisor: DivisorOut,
    /// `(p, ρ_p)` for every `ρ_p > 0`.
    pub factors: Vec<(PointId, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactOut {
    pub var: String,
    pub branch_values: Vec<i64>,
    pub sequence: Vec<i64>,
    pub n: i64,
    pub char_exponents: Vec<i64>,
    pub semigroup: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
}

impl ContactOut {
    pub fn new(e: &ContactElement, explicit: bool) -> Self {
        ContactOut {
            var: e.var.to_string(),
            branch_values: e.branch.values().to_vec(),
            sequence: e.sequence.clone(),
            n: e.puiseux.n,
            char_exponents: e.puiseux.char_exponents.clone(),
            semigroup: e.semigroup.generators.clone(),
            poly: if explicit {
                e.poly.as_ref().map(|p| p.to_string())
            } else {
                None
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactsOut {
    pub smooth_pair: (String, String),
    pub augmented: bool,
    pub elements: Vec<ContactOut>,
}

impl ContactsOut {
    pub fn new(s: &MaximalContactSet, explicit: bool) -> Self {
        let (a, b) = s.smooth_pair();
        ContactsOut {
            smooth_pair: (a.to_string(), b.to_string()),
            augmented: s.is_augmented(),
            elements: s.elements().iter().map(|e| ContactOut::new(e, explicit)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpRow {
    /// Exact rational, `"p/q"` or an integer.
    pub lambda: String,
    pub divisor: Vec<i64>,
    pub generators: Vec<MonomialOut>,
}

impl JumpRow {
    pub fn new(e: &JumpingEntry, contacts: Option<&MaximalContactSet>) -> Result<Self> {
        Ok(JumpRow {
            lambda: e.lambda.to_string(),
            divisor: e.divisor.values().to_vec(),
            generators: ideal_out(&e.ideal, contacts)?,
        })
    }
}

/// Consecutive indices `first..=last` sharing one ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationRow {
    pub first: i64,
    pub last: i64,
    pub divisor: Vec<i64>,
    pub generators: Vec<MonomialOut>,
}

/// Groups a filtration into maximal runs with equal divisors.
pub fn filtration_rows(
    steps: &[FiltrationStep],
    contacts: Option<&MaximalContactSet>,
) -> Result<Vec<FiltrationRow>> {
    let mut rows: Vec<FiltrationRow> = Vec::new();
    for s in steps {
        if let Some(last) = rows.last_mut() {
            if last.divisor == s.divisor.values() {
                last.last = s.index;
                continue;
            }
        }
        rows.push(FiltrationRow {
            first: s.index,
            last: s.index,
            divisor: s.divisor.values().to_vec(),
            generators: ideal_out(&s.ideal, contacts)?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOut {
    pub poly: String,
    pub values: Vec<i64>,
    pub divisor: Vec<i64>,
    pub member: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultsOut {
    pub poly: String,
    pub mults: Vec<i64>,
    pub values: Vec<i64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::compute_generators;

    fn roundtrip<T>(v: &T)
    where
        T: Serialize + for<'de> Deserialize<'de> + PartialEq + std::fmt::Debug,
    {
        let back: T = parse_json(&to_json(v)).unwrap();
        assert_eq!(&back, v);
    }

    const EX28: &str = r#"{"points": 5, "proximities": [[], [0], [0, 1], [2], [2, 3]]}"#;

    #[test]
    fn cluster_json() {
        let c = parse_cluster(EX28).unwrap();
        assert_eq!(c.len(), 5);
        let j = ClusterJson::from_cluster(&c);
        roundtrip(&j);
        assert_eq!(j.build().unwrap(), c);
        let with = parse_cluster(r#"{"proximities": [[], [0], [1]], "coords": {"1": "1/2", "2": "-3"}}"#).unwrap();
        assert_eq!(with.coords().len(), 2);
        roundtrip(&ClusterJson::from_cluster(&with));
        assert!(matches!(parse_cluster("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_cluster(r#"{"proximities": [[], [0]], "extra": 1}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_cluster(r#"{"points": 3, "proximities": [[], [0]]}"#),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn divisor_json() {
        let c = parse_cluster(EX28).unwrap();
        let d = parse_divisor(r#"{"basis": "mults", "coeffs": [4, 2, 2, 1, 1]}"#, &c).unwrap();
        assert_eq!(d.values(), &[4, 6, 12, 13, 26]);
        roundtrip(&DivisorJson { basis: Basis::Excesses, coeffs: d.excesses().to_vec() });
        assert!(matches!(parse_divisor(r#"{"basis": "weird", "coeffs": []}"#, &c), Err(Error::Parse(_))));
    }

    #[test]
    fn output_records_roundtrip() {
        let c = parse_cluster(EX28).unwrap();
        let s = MaximalContactSet::explicit(&c).unwrap();
        let d = Divisor::from_values(&c, &[4, 6, 12, 13, 26]).unwrap();
        let (ideal, tree) = compute_generators(&c, &d, &s).unwrap();
        let out = GensOut {
            divisor: (&d).into(),
            augmented: s.is_augmented(),
            generators: ideal_out(&ideal, Some(&s)).unwrap(),
            tree: Some((&tree).into()),
        };
        roundtrip(&out);
        assert_eq!(out.generators[0].poly.as_deref(), Some("(y^2 - x^3)^2"));
        roundtrip(&ContactsOut::new(&s, true));
    }
}

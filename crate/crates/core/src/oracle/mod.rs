//! Independent verification by explicit blow-ups.
//!
//! Everything here works on concrete polynomials and never consults the
//! combinatorial machinery beyond the cluster's proximity lists.
//!
//! Chart convention: at a point `q ≠ O` the local coordinates `(u, w)` satisfy
//! `E_{parent(q)} = {u = 0}`, and for a satellite `q` the other component
//! through `q` is `{w = 0}`. At `O` the coordinates are `(x, y)`. A point on
//! `E_p` is located by the slope `w/u` in `p`'s coordinates: finite slope `c`
//! is reached by `(u, w) ↦ (u, u(c + w))` and slope infinity by
//! `(u, w) ↦ (uw, u)`. On `E_p` with `p ≠ O`, infinity is where
//! `E_{parent(p)}` meets; for a satellite `p`, zero is where the other
//! component meets.

pub mod parse;
pub mod poly;
pub mod puiseux;
pub mod univariate;

use num::{BigInt, BigRational, Zero};

use crate::cluster::{Cluster, Coordinate, PointId, PointKind, ORIGIN};
use crate::divisor::{branch_divisor, Divisor};
use crate::error::{Error, Result};
use poly::{rat, BivariatePoly};
use univariate::UniPoly;

/// Slope of every non-origin point on the exceptional line of its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    slopes: Vec<Option<Coordinate>>,
}

impl Placement {
    /// Explicit coordinates where given; otherwise the smallest unused
    /// allowed integer `0, 1, 2, …` on each exceptional line, in point order.
    pub fn with_defaults(cluster: &Cluster) -> Self {
        Self::build(cluster, true).expect("defaults always exist")
    }

    /// Fails with `CoordinateMissing` at the first free point lacking one.
    pub fn explicit(cluster: &Cluster) -> Result<Self> {
        Self::build(cluster, false)
    }

    fn build(cluster: &Cluster, defaults: bool) -> Result<Self> {
        let mut slopes: Vec<Option<Coordinate>> = vec![None; cluster.len()];
        for q in cluster.points().skip(1) {
            if let Some(slope) = satellite_slope(cluster, q) {
                slopes[q] = Some(slope);
            } else if let Some(c) = cluster.coords().get(&q) {
                slopes[q] = Some(c.clone());
            }
        }
        for q in cluster.points().skip(1) {
            if slopes[q].is_some() {
                continue;
            }
            if !defaults {
                return Err(Error::CoordinateMissing(q));
            }
            let p = cluster.parent(q).expect("non-origin point has a parent");
            let taken = used_on(cluster, &slopes, p);
            let s = smallest_free_integer(cluster, p, &taken);
            slopes[q] = Some(Coordinate::integer(s));
        }
        Ok(Placement { slopes })
    }

    pub fn slope(&self, q: PointId) -> Option<&Coordinate> {
        self.slopes[q].as_ref()
    }

    /// Slopes on `E_p` already occupied by cluster points.
    pub fn used_on(&self, cluster: &Cluster, p: PointId) -> Vec<Coordinate> {
        used_on(cluster, &self.slopes, p)
    }
}

fn satellite_slope(cluster: &Cluster, q: PointId) -> Option<Coordinate> {
    let other = cluster.other_proximate(q)?;
    let p = cluster.parent(q)?;
    if cluster.parent(p) == Some(other) {
        Some(Coordinate::Infinity)
    } else {
        Some(Coordinate::integer(0))
    }
}

fn used_on(cluster: &Cluster, slopes: &[Option<Coordinate>], p: PointId) -> Vec<Coordinate> {
    cluster
        .points()
        .filter(|&q| q > p && cluster.parent(q) == Some(p))
        .filter_map(|q| slopes[q].clone())
        .collect()
}

fn smallest_free_integer(cluster: &Cluster, p: PointId, taken: &[Coordinate]) -> i64 {
    (0..)
        .find(|&s| {
            let c = Coordinate::integer(s);
            !cluster.is_special_position(p, &c) && !taken.contains(&c)
        })
        .expect("integers are unbounded")
}

fn apply_chart(f: &BivariatePoly, slope: &Coordinate, strip: u32) -> Result<BivariatePoly> {
    let g = match slope {
        Coordinate::Finite(c) => f.chart_finite(c),
        Coordinate::Infinity => f.chart_infinity(),
    };
    g.check_size()?;
    Ok(g.div_monomial(strip, 0))
}

/// Multiplicities `e_p(f)` of the strict transforms at every cluster point.
pub fn multiplicities(f: &BivariatePoly, cluster: &Cluster) -> Result<Vec<i64>> {
    multiplicities_with(f, cluster, &Placement::with_defaults(cluster))
}

pub fn multiplicities_with(
    f: &BivariatePoly,
    cluster: &Cluster,
    placement: &Placement,
) -> Result<Vec<i64>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    f.check_size()?;
    let n = cluster.len();
    let mut strict: Vec<Option<BivariatePoly>> = vec![None; n];
    let mut mults = vec![0i64; n];
    // a transform is only needed while later points may hang off it
    let mut last_child = vec![0; n];
    for q in cluster.points().skip(1) {
        last_child[cluster.parent(q).unwrap()] = q;
    }
    mults[ORIGIN] = f.order().unwrap() as i64;
    strict[ORIGIN] = Some(f.clone());
    for q in cluster.points().skip(1) {
        let p = cluster.parent(q).unwrap();
        let parent_poly = strict[p].as_ref().unwrap();
        let slope = placement.slope(q).expect("every non-origin point is placed");
        let g = apply_chart(parent_poly, slope, mults[p] as u32)?;
        mults[q] = g.order().unwrap() as i64;
        strict[q] = Some(g);
        if last_child[p] == q {
            strict[p] = None;
        }
    }
    Ok(mults)
}

/// Values `v_p(f)`, obtained from the multiplicities by forward substitution.
pub fn values(f: &BivariatePoly, cluster: &Cluster) -> Result<Vec<i64>> {
    let e = multiplicities(f, cluster)?;
    Ok(Divisor::from_mults(cluster, &e)?.values().to_vec())
}

/// Whether `π*f` vanishes along `D`: `v_p(f) ≥ v_p(D)` at every point.
pub fn member_poly(f: &BivariatePoly, d: &Divisor, cluster: &Cluster) -> Result<bool> {
    cluster.check_len(d.len())?;
    if f.is_zero() {
        return Ok(true);
    }
    let v = values(f, cluster)?;
    Ok(v.iter().zip(d.values()).all(|(a, b)| a >= b))
}

/// Local intersection multiplicity at the origin by Noether's formula,
/// following every common infinitely near point.
pub fn intersection_mult(f: &BivariatePoly, g: &BivariatePoly) -> Result<i64> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::CommonComponent);
    }
    let bound = i64::from(f.total_degree().unwrap()) * i64::from(g.total_degree().unwrap());
    let mut total = 0i64;
    let mut stack = vec![(f.clone(), g.clone())];
    while let Some((f, g)) = stack.pop() {
        let (mf, mg) = (f.order().unwrap(), g.order().unwrap());
        if mf == 0 || mg == 0 {
            continue;
        }
        total += i64::from(mf) * i64::from(mg);
        if total > bound {
            return Err(Error::CommonComponent);
        }
        for slope in common_tangents(&f, mf, &g, mg)? {
            let fs = apply_chart(&f, &slope, mf)?;
            let gs = apply_chart(&g, &slope, mg)?;
            stack.push((fs, gs));
        }
    }
    Ok(total)
}

/// Directions shared by the tangent cones of `f` and `g`.
fn common_tangents(
    f: &BivariatePoly,
    mf: u32,
    g: &BivariatePoly,
    mg: u32,
) -> Result<Vec<Coordinate>> {
    let cf = UniPoly::new(f.form_coefficients(mf));
    let cg = UniPoly::new(g.form_coefficients(mg));
    let mut out = Vec::new();
    // x divides the cone iff its y^m coefficient vanishes
    if cf.degree() < Some(mf as usize) && cg.degree() < Some(mg as usize) {
        out.push(Coordinate::Infinity);
    }
    let common = cf.gcd(&cg);
    let (roots, rest) = common.rational_roots();
    if rest.degree().unwrap_or(0) > 0 {
        return Err(Error::IrrationalTangent);
    }
    out.extend(roots.into_iter().map(Coordinate::Finite));
    Ok(out)
}

/// Directions tried before giving up on a curvette.
const DIRECTION_BUDGET: usize = 64;

/// Admissible directions on `E_d` off the cluster: `∞` first at the origin,
/// then `0, 1, -1, 2, -2, …`.
fn admissible_directions<'a>(
    cluster: &'a Cluster,
    placement: &Placement,
    d: PointId,
) -> impl Iterator<Item = Coordinate> + 'a {
    let taken = placement.used_on(cluster, d);
    let origin = (d == ORIGIN).then_some(Coordinate::Infinity);
    let integers = (0i64..).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] });
    origin
        .into_iter()
        .chain(integers.map(Coordinate::integer))
        .filter(move |c| !cluster.is_special_position(d, c) && !taken.contains(c))
}

/// `t ↦ (x(t), y(t))` for the line through `d` with direction `slope`,
/// pushed down through every chart.
fn line_parameterization(
    cluster: &Cluster,
    placement: &Placement,
    d: PointId,
    slope: &Coordinate,
) -> (UniPoly, UniPoly) {
    let t = UniPoly::monomial(rat(1), 1);
    let (mut u, mut w) = match slope {
        Coordinate::Finite(s) => (t.clone(), t.scale(s)),
        Coordinate::Infinity => (UniPoly::zero(), t.clone()),
    };
    let mut q = d;
    while let Some(p) = cluster.parent(q) {
        (u, w) = match placement.slope(q).unwrap() {
            Coordinate::Finite(c) => {
                let shifted = &w + &UniPoly::new(vec![c.clone()]);
                (u.clone(), &u * &shifted)
            }
            Coordinate::Infinity => (&u * &w, u.clone()),
        };
        q = p;
    }
    (u, w)
}

/// The `skip`-th direction whose curvette has exactly the multiplicities of
/// `B_d`; the check guards the truncation.
fn curvette_direction(
    cluster: &Cluster,
    placement: &Placement,
    d: PointId,
    skip: usize,
) -> Result<(Coordinate, BivariatePoly)> {
    let branch = branch_divisor(cluster, d)?;
    let expected = branch.mults().to_vec();
    // two curvettes at d already differ past exponent B_d² in τ, so this
    // precision always suffices; the shortest truncation that verifies wins
    let ceiling = branch.self_intersection() as usize + 2;
    let mut first_found = None;
    let mut good = 0;
    for slope in admissible_directions(cluster, placement, d).take(DIRECTION_BUDGET + skip) {
        let (x, y) = line_parameterization(cluster, placement, d, &slope);
        let mut precision = 2;
        let verified = loop {
            let g = puiseux::implicit_branch(&x, &y, precision).expect("a line is not a point");
            g.check_size()?;
            let found = multiplicities_with(&g, cluster, placement)?;
            if found == expected {
                break Some(g);
            }
            if precision >= ceiling {
                first_found.get_or_insert(found);
                break None;
            }
            precision = (precision + precision / 2).min(ceiling);
        };
        if let Some(g) = verified {
            if good == skip {
                return Ok((slope, g));
            }
            good += 1;
        }
    }
    Err(Error::OracleMismatch {
        point: d,
        expected,
        found: first_found.unwrap_or_default(),
    })
}

/// A curvette at `d`: the implicit equation of the branch cut out by a
/// line through `d` transverse to `E_d` and avoiding the cluster, truncated
/// in Puiseux form. `skip` passes over that many working directions.
/// `tail` adds `Σ a_k·x^N·y^k` with `N` above every value of `B_d`, which
/// leaves all values, hence all multiplicities, unchanged.
pub fn curvette(
    cluster: &Cluster,
    placement: &Placement,
    d: PointId,
    skip: usize,
    tail: &[BigRational],
) -> Result<BivariatePoly> {
    cluster.check_point(d)?;
    let (_, g) = curvette_direction(cluster, placement, d, skip)?;
    if tail.iter().all(|a| a.is_zero()) {
        return Ok(g);
    }
    let n = branch_divisor(cluster, d)?.values().iter().copied().max().unwrap_or(0) as u32 + 1;
    let bend = tail.iter().enumerate().fold(BivariatePoly::zero(), |acc, (k, a)| {
        &acc + &BivariatePoly::monomial(a.clone(), n, k as u32)
    });
    Ok((&g + &bend).normalized())
}

/// Parameterization `t ↦ (x(t), y(t))` of the line whose branch
/// [`curvette`] truncates, for the same `skip`.
pub fn curvette_parameterization(
    cluster: &Cluster,
    placement: &Placement,
    d: PointId,
    skip: usize,
) -> Result<(UniPoly, UniPoly)> {
    cluster.check_point(d)?;
    let (slope, _) = curvette_direction(cluster, placement, d, skip)?;
    Ok(line_parameterization(cluster, placement, d, &slope))
}

/// Whether `q` is a free point or the origin.
pub fn is_free_or_origin(cluster: &Cluster, q: PointId) -> bool {
    cluster.classify(q) != PointKind::Satellite
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_zero_at_origin(f: &BivariatePoly) -> bool {
    f.coeff(0, 0).is_zero()
}

#[cfg(test)]
mod tests {
    use super::parse::parse_poly;
    use super::*;

    fn ex28() -> Cluster {
        Cluster::new(vec![vec![], vec![0], vec![0, 1], vec![2], vec![2, 3]]).unwrap()
    }

    #[test]
    fn default_placement() {
        let c = ex28();
        let pl = Placement::with_defaults(&c);
        assert_eq!(pl.slope(1), Some(&Coordinate::integer(0)));
        assert_eq!(pl.slope(2), Some(&Coordinate::Infinity));
        assert_eq!(pl.slope(3), Some(&Coordinate::integer(1)));
        assert_eq!(pl.slope(4), Some(&Coordinate::Infinity));
        assert_eq!(Placement::explicit(&c), Err(Error::CoordinateMissing(1)));
    }

    #[test]
    fn multiplicities_of_known_curves() {
        let c = ex28();
        let m = |s: &str| multiplicities(&parse_poly(s).unwrap(), &c).unwrap();
        assert_eq!(m("y^2 - x^3"), vec![2, 1, 1, 1, 0]);
        assert_eq!(m("x"), vec![1, 0, 0, 0, 0]);
        assert_eq!(m("y"), vec![1, 1, 0, 0, 0]);
        assert_eq!(m("(y^2 - x^3)^2 - x^5*y"), vec![4, 2, 2, 1, 1]);
        assert_eq!(m("1"), vec![0; 5]);
        assert_eq!(
            multiplicities(&BivariatePoly::zero(), &c),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn values_and_membership() {
        let c = ex28();
        let v = |s: &str| values(&parse_poly(s).unwrap(), &c).unwrap();
        assert_eq!(v("x"), vec![1, 1, 2, 2, 4]);
        assert_eq!(v("(y^2 - x^3)^2 - x^5*y"), vec![4, 6, 12, 13, 26]);
        assert_eq!(v("1"), vec![0; 5]);
        let d = Divisor::from_values(&c, &[4, 6, 12, 13, 26]).unwrap();
        assert!(member_poly(&parse_poly("x^5*y").unwrap(), &d, &c).unwrap());
        let bo = Divisor::from_mults(&c, &[1, 0, 0, 0, 0]).unwrap();
        assert!(!member_poly(&BivariatePoly::one(), &bo, &c).unwrap());
    }

    #[test]
    fn intersection_multiplicities() {
        let p = |s: &str| parse_poly(s).unwrap();
        assert_eq!(intersection_mult(&p("y^2 - x^3"), &p("y")).unwrap(), 3);
        assert_eq!(intersection_mult(&p("y^2 - x^3"), &p("x")).unwrap(), 2);
        let f = p("(y^2 - x^3)^2 - x^5*y");
        assert_eq!(intersection_mult(&f, &p("x")).unwrap(), 4);
        assert_eq!(intersection_mult(&f, &p("y")).unwrap(), 6);
        assert_eq!(intersection_mult(&f, &p("y^2 - x^3")).unwrap(), 13);
        assert_eq!(intersection_mult(&p("x + 1"), &p("y")).unwrap(), 0);
        assert_eq!(
            intersection_mult(&p("x*y"), &p("x*(x+y)")),
            Err(Error::CommonComponent)
        );
        assert_eq!(
            intersection_mult(&p("y^2 - 2*x^2"), &p("y^2 - 2*x^2 + x^3")),
            Err(Error::IrrationalTangent)
        );
    }

    #[test]
    fn curvettes_of_example_cluster() {
        let c = ex28();
        let pl = Placement::with_defaults(&c);
        let cv = |d| curvette(&c, &pl, d, 0, &[]).unwrap().to_string();
        assert_eq!(cv(0), "x");
        assert_eq!(cv(1), "y");
        assert_eq!(cv(3), "y^2 - x^3");
        let (x, y) = curvette_parameterization(&c, &pl, 3, 0).unwrap();
        assert_eq!(x, UniPoly::from_ints(&[0, 0, 1]));
        assert_eq!(y, UniPoly::from_ints(&[0, 0, 0, 1]));
    }

    #[test]
    fn higher_cusp() {
        let c = Cluster::new(vec![vec![], vec![0], vec![1], vec![1, 2], vec![3]]).unwrap();
        let pl = Placement::with_defaults(&c);
        let (x, y) = curvette_parameterization(&c, &pl, 4, 0).unwrap();
        assert_eq!(x, UniPoly::from_ints(&[0, 0, 1]));
        assert_eq!(y, UniPoly::from_ints(&[0, 0, 0, 0, 0, 1]));
        let f = curvette(&c, &pl, 4, 0, &[]).unwrap();
        assert_eq!(f.to_string(), "y^2 - x^5");
        assert_eq!(multiplicities(&f, &c).unwrap(), vec![2, 2, 1, 1, 1]);
    }
}

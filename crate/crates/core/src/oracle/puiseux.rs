//! Implicit equations of single branches from truncated parameterizations.
//!
//! A germ `t ↦ (X(t), Y(t))` with `ord X = n ≤ ord Y` is rewritten as
//! `X = a·τⁿ`, `Y = P(τ)`; the norm `∏_ζ (Y − P(ζτ))` over the `n`-th roots
//! of `X/a` is a Weierstrass polynomial whose only branch at the origin is
//! the given one, since `X` vanishes only at `τ = 0`.

use num::{BigRational, One, Zero};

use super::poly::BivariatePoly;
use super::univariate::UniPoly;

type Series = Vec<BigRational>;

fn truncated(p: &UniPoly, m: usize) -> Series {
    let mut s: Series = p.coeffs().iter().take(m).cloned().collect();
    s.resize(m, BigRational::zero());
    s
}

fn mul(a: &[BigRational], b: &[BigRational], m: usize) -> Series {
    let mut out = vec![BigRational::zero(); m];
    for (i, ai) in a.iter().enumerate().take(m) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(m - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `h^(1/n)` for `h₀ = 1`, by `k·g_k = Σ_{j=1..k} (j/n − (k − j))·h_j·g_{k−j}`.
fn nth_root(h: &[BigRational], n: usize, m: usize) -> Series {
    let alpha = BigRational::new(1.into(), (n as i64).into());
    let mut g = vec![BigRational::zero(); m];
    g[0] = BigRational::one();
    for k in 1..m {
        let mut acc = BigRational::zero();
        for j in 1..=k.min(h.len() - 1) {
            let w = &alpha * BigRational::from_integer((j as i64).into())
                - BigRational::from_integer(((k - j) as i64).into());
            acc += w * &h[j] * &g[k - j];
        }
        g[k] = acc / BigRational::from_integer((k as i64).into());
    }
    g
}

/// `p(q(τ))` with `q₀ = 0`.
fn compose(p: &[BigRational], q: &[BigRational], m: usize) -> Series {
    let mut out = vec![BigRational::zero(); m];
    let mut power = vec![BigRational::zero(); m];
    power[0] = BigRational::one();
    for c in p.iter().take(m) {
        if !c.is_zero() {
            for (o, pw) in out.iter_mut().zip(&power) {
                *o += c * pw;
            }
        }
        power = mul(&power, q, m);
    }
    out
}

/// Inverse of `τ = t·s(t)`, `s₀ = 1`, as `t = τ·r(τ)`.
fn revert(s: &[BigRational], m: usize) -> Series {
    // fixed point t ← τ / s(t), one correct coefficient per round
    let mut inv_s = vec![BigRational::zero(); m];
    inv_s[0] = BigRational::one();
    for k in 1..m {
        let acc: BigRational = (1..=k).map(|j| &s[j] * &inv_s[k - j]).sum();
        inv_s[k] = -acc;
    }
    let mut t = vec![BigRational::zero(); m];
    if m > 1 {
        t[1] = BigRational::one();
    }
    for _ in 0..m {
        let shifted = compose(&inv_s, &t, m);
        let mut next = vec![BigRational::zero(); m];
        next[1..m].clone_from_slice(&shifted[..m - 1]);
        if next == t {
            break;
        }
        t = next;
    }
    t
}

/// Characteristic polynomial `det(λI − M)` by Faddeev–LeVerrier; only
/// integer divisions occur, so entries may be polynomials.
fn charpoly(m: &[Vec<UniPoly>]) -> Vec<UniPoly> {
    let n = m.len();
    let matmul = |a: &[Vec<UniPoly>], b: &[Vec<UniPoly>]| -> Vec<Vec<UniPoly>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(UniPoly::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                    .collect()
            })
            .collect()
    };
    let mut c = vec![UniPoly::zero(); n + 1];
    c[n] = UniPoly::one();
    let mut mk: Vec<Vec<UniPoly>> = vec![vec![UniPoly::zero(); n]; n];
    for k in 1..=n {
        let mut next = matmul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = &row[i] + &c[n - k + 1];
        }
        mk = next;
        let product = matmul(m, &mk);
        let trace = (0..n).fold(UniPoly::zero(), |acc, i| &acc + &product[i][i]);
        c[n - k] = trace.scale(&-BigRational::new(1.into(), (k as i64).into()));
    }
    c
}

/// Implicit equation of the branch `(x(t), y(t))`, keeping Puiseux terms of
/// exponent below `precision`. `None` if both coordinates vanish identically.
pub fn implicit_branch(x: &UniPoly, y: &UniPoly, precision: usize) -> Option<BivariatePoly> {
    let ox = x.order();
    let oy = y.order();
    // X carries the multiplicity; swap back at the end if X = y
    let (big_x, big_y, swapped) = match (ox, oy) {
        (Some(a), Some(b)) if a <= b => (x, y, false),
        (Some(_), Some(_)) | (None, Some(_)) => (y, x, true),
        (Some(_), None) => (x, y, false),
        (None, None) => return None,
    };
    let n = big_x.order().unwrap();
    let m = precision.max(n + 1) + 1;
    let a0 = big_x.coeffs()[n].clone();
    let unit: Series = truncated(big_x, n + m)[n..].iter().map(|c| c / &a0).collect();
    let root = nth_root(&unit, n, m);
    let t_of_tau = revert(&root, m);
    let p = compose(&truncated(big_y, m), &t_of_tau, m);
    let p: Series = p.into_iter().take(precision.max(n + 1)).collect();

    // P(C) for the companion matrix C of τⁿ − X/a0, entries in Q[X]
    let ratio = a0.recip();
    let mut mat = vec![vec![UniPoly::zero(); n]; n];
    for (k, pk) in p.iter().enumerate() {
        if pk.is_zero() {
            continue;
        }
        for i in 0..n {
            let (wraps, row) = ((i + k) / n, (i + k) % n);
            let term = UniPoly::monomial(pk * ratio_pow(&ratio, wraps), wraps);
            mat[row][i] = &mat[row][i] + &term;
        }
    }
    let coeffs = charpoly(&mat);
    let mut terms = Vec::new();
    for (b, cb) in coeffs.iter().enumerate() {
        for (a, c) in cb.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let (ex, ey) = if swapped { (b as u32, a as u32) } else { (a as u32, b as u32) };
                terms.push(((ex, ey), c.clone()));
            }
        }
    }
    Some(BivariatePoly::from_terms(terms).normalized())
}

fn ratio_pow(r: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * r)
}

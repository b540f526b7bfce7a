//! Height-bounded search for integral points on lines and conics.

use super::{is_integral, Ambient, IntegralityContext};
use crate::arith::{exact_sqrt, PrimeSet};
use crate::error::{Error, Result};
use crate::projgeo::linalg::{ext_gcd, saturate};
use crate::projgeo::{HomogForm, ProjPoint, RationalParam};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

#[derive(Clone, Debug)]
pub enum SearchCurve {
    /// A plane line or conic.
    Plane(HomogForm),
    /// A line of ℙ³.
    Line3(RationalParam),
}

/// Terms of f grouped by the power of variable i.
fn split_by_var(f: &HomogForm, i: usize) -> Vec<(u32, Vec<u32>, BigInt)> {
    f.primitive()
        .terms()
        .into_iter()
        .map(|(e, c)| {
            let rest: Vec<u32> = e
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &k)| k)
                .collect();
            (e[i], rest, c.to_integer())
        })
        .collect()
}

/// Integer roots of a·x² + b·x + c in [−h, h]; `None` means every x.
fn int_roots(a: &BigInt, b: &BigInt, c: &BigInt, h: &BigInt) -> Option<Vec<BigInt>> {
    let mut out = Vec::new();
    if a.is_zero() {
        if b.is_zero() {
            return if c.is_zero() { None } else { Some(out) };
        }
        if (c % b).is_zero() {
            out.push(-c / b);
        }
    } else {
        let disc = b * b - BigInt::from(4) * a * c;
        if disc.is_negative() {
            return Some(out);
        }
        if let Some(r) = exact_sqrt(&disc) {
            let two_a = BigInt::from(2) * a;
            for num in [-b + &r, -b - &r] {
                if (&num % &two_a).is_zero() {
                    out.push(num / &two_a);
                }
            }
        }
    }
    out.retain(|x| x.abs() <= *h);
    Some(out)
}

/// All points of a plane curve of degree ≤ 2 with primitive coordinates of
/// absolute value ≤ h, sorted.
pub fn points_on_plane_curve(c: &HomogForm, h: u64) -> BTreeSet<ProjPoint> {
    assert!(
        c.nvars() == 3 && (1..=2).contains(&c.degree()),
        "plane line or conic expected"
    );
    let mut out = BTreeSet::new();
    if c.is_zero() {
        return out;
    }
    // Solve for a variable that occurs squared if there is one, else for
    // one that occurs at all.
    let deg_in = |i: usize| c.terms().iter().map(|(e, _)| e[i]).max().unwrap_or(0);
    let i = (0..3)
        .max_by_key(|&i| (deg_in(i), std::cmp::Reverse(i)))
        .unwrap();
    let groups = split_by_var(c, i);
    let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
    let hb = BigInt::from(h);
    let hi = h as i64;
    for u in -hi..=hi {
        for v in -hi..=hi {
            let (bu, bv) = (BigInt::from(u), BigInt::from(v));
            let mut coef = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
            for (k, rest, cc) in &groups {
                coef[*k as usize] += cc
                    * num_traits::pow(bu.clone(), rest[0] as usize)
                    * num_traits::pow(bv.clone(), rest[1] as usize);
            }
            let xs: Vec<BigInt> = match int_roots(&coef[2], &coef[1], &coef[0], &hb) {
                Some(r) => r,
                None => (-hi..=hi).map(BigInt::from).collect(),
            };
            for x in xs {
                let mut p = vec![BigInt::zero(); 3];
                p[i] = x;
                p[others[0]] = bu.clone();
                p[others[1]] = bv.clone();
                if p.iter().all(|q| q.is_zero()) {
                    continue;
                }
                if crate::arith::content(&p).is_one() {
                    out.insert(ProjPoint::from_big(&p).unwrap());
                }
            }
        }
    }
    out
}

/// S-units of absolute value ≤ h, both signs.
pub fn s_units_up_to(s: &PrimeSet, h: u64) -> Vec<BigInt> {
    let mut units = vec![1u64];
    for &p in s.primes() {
        let mut next = Vec::new();
        for &u in &units {
            let mut v = u;
            while v <= h {
                next.push(v);
                match v.checked_mul(p) {
                    Some(w) => v = w,
                    None => break,
                }
            }
        }
        units = next;
    }
    units.sort();
    units.dedup();
    units
        .into_iter()
        .filter(|&u| u <= h)
        .flat_map(|u| [BigInt::from(u), -BigInt::from(u)])
        .collect()
}

/// Integer basis of the points of a line of ℙ³.
fn line_basis(par: &RationalParam) -> Result<[Vec<BigInt>; 2]> {
    let pts: Vec<Vec<BigInt>> = [(1, 0), (0, 1)]
        .iter()
        .map(|&(s, t)| {
            let v = par.eval(&BigInt::from(s).into(), &BigInt::from(t).into());
            ProjPoint::new(&v).map(|p| p.coords().to_vec())
        })
        .collect::<Result<_>>()?;
    let b = saturate(&pts, par.ambient_vars());
    if b.len() != 2 {
        return Err(Error::InvalidInput(
            "parametrization does not describe a line".into(),
        ));
    }
    Ok([b[0].clone(), b[1].clone()])
}

/// Integral points on a line of w³ = F: with a basis (B₀, B₁) of its integer
/// points, w(s·B₀ + t·B₁) = a·s + b·t must be an S-unit, a linear equation
/// solved once per unit.
fn line3_points(
    par: &RationalParam,
    ctx: &IntegralityContext,
    h: u64,
) -> Result<BTreeSet<ProjPoint>> {
    let [b0, b1] = line_basis(par)?;
    let (a, b) = (b0[3].clone(), b1[3].clone());
    let mut out = BTreeSet::new();
    if a.is_zero() && b.is_zero() {
        return Ok(out);
    }
    let (g, x0, y0) = ext_gcd(&a, &b);
    let hb = BigInt::from(h);
    let (da, db) = (&a / &g, &b / &g);
    for u in s_units_up_to(&ctx.s, h) {
        if !(&u % &g).is_zero() {
            continue;
        }
        let k0 = &u / &g;
        let (s0, t0) = (&x0 * &k0, &y0 * &k0);
        // coordinate j is alpha_j + beta_j·k along s = s0 + k·db, t = t0 − k·da
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for j in 0..4 {
            let alpha = &s0 * &b0[j] + &t0 * &b1[j];
            let beta = &db * &b0[j] - &da * &b1[j];
            if beta.is_zero() {
                if alpha.abs() > hb {
                    lo = Some(BigInt::one());
                    hi = Some(BigInt::zero());
                }
                continue;
            }
            let (l, r) = {
                let e1 = (-&hb - &alpha).div_ceil(&beta.abs());
                let e2 = (&hb - &alpha).div_floor(&beta.abs());
                if beta.is_positive() {
                    (e1, e2)
                } else {
                    (
                        (&alpha - &hb).div_ceil(&beta.abs()),
                        (&alpha + &hb).div_floor(&beta.abs()),
                    )
                }
            };
            lo = Some(lo.map_or(l.clone(), |x: BigInt| x.max(l)));
            hi = Some(hi.map_or(r.clone(), |x: BigInt| x.min(r)));
        }
        let (Some(lo), Some(hi)) = (lo, hi) else {
            continue;
        };
        let mut k = lo;
        while k <= hi {
            let s = &s0 + &k * &db;
            let t = &t0 - &k * &da;
            if s.gcd(&t).is_one() {
                let p: Vec<BigInt> = (0..4).map(|j| &s * &b0[j] + &t * &b1[j]).collect();
                out.insert(ProjPoint::from_big(&p)?);
            }
            k += 1;
        }
    }
    Ok(out)
}

fn keep_integral(pts: BTreeSet<ProjPoint>, ctx: &IntegralityContext) -> Result<Vec<ProjPoint>> {
    let mut out = Vec::new();
    for p in pts {
        match is_integral(&p, ctx) {
            Ok(true) => out.push(p),
            Ok(false) | Err(Error::OnDivisor) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// All integral points of height ≤ h on a plane line or conic, or on a line
/// of the surface.
pub fn search_integral_points(
    c: &SearchCurve,
    ctx: &IntegralityContext,
    h: u64,
) -> Result<Vec<ProjPoint>> {
    if h == 0 {
        return Err(Error::InvalidInput("height bound must be positive".into()));
    }
    match c {
        SearchCurve::Plane(f) => {
            if ctx.ambient == Ambient::SurfaceModH {
                return Err(Error::AmbientMismatch(
                    "plane curve in a surface context".into(),
                ));
            }
            if f.nvars() != 3 || !(1..=2).contains(&f.degree()) {
                return Err(Error::InvalidInput(
                    "only plane lines and conics are searched".into(),
                ));
            }
            keep_integral(points_on_plane_curve(f, h), ctx)
        }
        SearchCurve::Line3(par) => {
            if ctx.ambient != Ambient::SurfaceModH {
                return Err(Error::AmbientMismatch(
                    "lines of ℙ³ are searched in the surface model".into(),
                ));
            }
            if par.degree() != 1 || par.ambient_vars() != 4 {
                return Err(Error::InvalidInput("a line of ℙ³ is expected".into()));
            }
            keep_integral(line3_points(par, ctx, h)?, ctx)
        }
    }
}

fn eval_i128(terms: &[(Vec<u32>, i128)], x: &[i128]) -> i128 {
    terms
        .iter()
        .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, &xi)| acc * xi.pow(k)))
        .sum()
}

fn i128_terms(f: &HomogForm) -> Vec<(Vec<u32>, i128)> {
    f.primitive()
        .terms()
        .into_iter()
        .map(|(e, c)| {
            (
                e,
                c.to_integer()
                    .to_i128()
                    .expect("small coefficients in the naive oracle"),
            )
        })
        .collect()
}

fn gcd_i128(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &x| {
        let (mut a, mut b) = (g.abs(), x.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    })
}

/// Reference enumeration over the whole coordinate box.
pub fn naive_integral_points(
    c: &SearchCurve,
    ctx: &IntegralityContext,
    h: u64,
) -> Result<Vec<ProjPoint>> {
    let h = h as i128;
    let mut out = BTreeSet::new();
    let mut visit = |x: &[i128], on: bool| -> Result<()> {
        if !on || x.iter().all(|&v| v == 0) || gcd_i128(x) != 1 {
            return Ok(());
        }
        let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let p = ProjPoint::from_big(&big)?;
        match is_integral(&p, ctx) {
            Ok(true) => {
                out.insert(p);
            }
            Ok(false) | Err(Error::OnDivisor) => {}
            Err(e) => return Err(e),
        }
        Ok(())
    };
    match c {
        SearchCurve::Plane(f) => {
            let t = i128_terms(f);
            for x in -h..=h {
                for y in -h..=h {
                    for z in -h..=h {
                        let p = [x, y, z];
                        visit(&p, eval_i128(&t, &p) == 0)?;
                    }
                }
            }
        }
        SearchCurve::Line3(par) => {
            let [b0, b1] = line_basis(par)?;
            let eqs = crate::projgeo::linalg::int_kernel(&[b0, b1], 4);
            let eqs: Vec<Vec<i128>> = eqs
                .iter()
                .map(|e| e.iter().map(|c| c.to_i128().expect("small line")).collect())
                .collect();
            for x in -h..=h {
                for y in -h..=h {
                    for z in -h..=h {
                        for w in -h..=h {
                            let p = [x, y, z, w];
                            let on = eqs
                                .iter()
                                .all(|e| e.iter().zip(&p).map(|(a, b)| a * b).sum::<i128>() == 0);
                            visit(&p, on)?;
                        }
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

//! Picard lattice of ℙ² blown up in at most eight points, the divisor D̂
//! over a plane cubic, cyclic covers of X ∖ D̂ and simple connectivity.
//!
//! Pic X = ℤh ⊕ ℤe₁ ⊕ … ⊕ ℤeₙ with h² = 1, eᵢ² = −1 and all other products
//! zero. A class is stored as (d; m₁, …, mₙ) meaning d·h + Σ mᵢ·eᵢ.

mod snf;

pub use snf::{smith_normal_form, Snf};

use crate::arith::Rat;
use crate::cubic::{classify, CubicClass, PlaneCubic};
use crate::error::{Error, Result};
use crate::projgeo::linalg::rank;
use crate::projgeo::{evaluate, monomials, HomogForm, ProjPoint};
use num_traits::Zero;
use std::fmt;

pub const MAX_BLOWUPS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PicClass {
    pub d: i64,
    pub m: Vec<i64>,
}

impl PicClass {
    pub fn new(d: i64, m: Vec<i64>) -> Self {
        PicClass { d, m }
    }

    pub fn h(n: usize) -> Self {
        PicClass {
            d: 1,
            m: vec![0; n],
        }
    }

    pub fn e(i: usize, n: usize) -> Self {
        let mut m = vec![0; n];
        m[i] = 1;
        PicClass { d: 0, m }
    }

    pub fn zero(n: usize) -> Self {
        PicClass {
            d: 0,
            m: vec![0; n],
        }
    }

    /// Number of blown-up points.
    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn add(&self, o: &PicClass) -> Result<PicClass> {
        same_rank(self, o)?;
        Ok(PicClass {
            d: self.d + o.d,
            m: self.m.iter().zip(&o.m).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: i64) -> PicClass {
        PicClass {
            d: k * self.d,
            m: self.m.iter().map(|a| k * a).collect(),
        }
    }

    pub fn neg(&self) -> PicClass {
        self.scale(-1)
    }

    /// (d, m₁, …, mₙ).
    pub fn coords(&self) -> Vec<i64> {
        std::iter::once(self.d)
            .chain(self.m.iter().copied())
            .collect()
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(i64, String)> = vec![(self.d, "h".into())];
        terms.extend(
            self.m
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, format!("e{}", i + 1))),
        );
        let mut out = String::new();
        for (c, name) in terms.into_iter().filter(|(c, _)| *c != 0) {
            let sign = if c < 0 { "-" } else { "+" };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&name);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

fn same_rank(a: &PicClass, b: &PicClass) -> Result<()> {
    if a.rank() != b.rank() {
        return Err(Error::DimensionMismatch(format!(
            "classes on blow-ups in {} and {} points",
            a.rank(),
            b.rank()
        )));
    }
    Ok(())
}

pub fn intersect(a: &PicClass, b: &PicClass) -> Result<i64> {
    same_rank(a, b)?;
    Ok(a.d * b.d - a.m.iter().zip(&b.m).map(|(x, y)| x * y).sum::<i64>())
}

/// K = −3h + Σ eᵢ.
pub fn canonical_class(n: usize) -> Result<PicClass> {
    if n > MAX_BLOWUPS {
        return Err(Error::InvalidInput(format!(
            "{n} blow-ups; at most {MAX_BLOWUPS} are allowed"
        )));
    }
    Ok(PicClass {
        d: -3,
        m: vec![1; n],
    })
}

/// Why a point set fails general position (indices into the input).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GpViolation {
    Collinear([usize; 3]),
    SixOnConic([usize; 6]),
    /// All eight lie on a cubic singular at the indexed one.
    EightOnNodalCubic {
        node: usize,
    },
}

impl fmt::Display for GpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GpViolation::Collinear(t) => write!(f, "collinear {t:?}"),
            GpViolation::SixOnConic(s) => write!(f, "on a conic {s:?}"),
            GpViolation::EightOnNodalCubic { node } => {
                write!(f, "on a cubic singular at point {node}")
            }
        }
    }
}

fn check_point_list(points: &[ProjPoint]) -> Result<()> {
    if points.len() > MAX_BLOWUPS {
        return Err(Error::InvalidInput(format!(
            "{} points; at most {MAX_BLOWUPS} are allowed",
            points.len()
        )));
    }
    for (i, p) in points.iter().enumerate() {
        if p.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "{p} is not a plane point"
            )));
        }
        if points[..i].contains(p) {
            return Err(Error::InvalidInput(format!("{p} is repeated")));
        }
    }
    Ok(())
}

fn monomial_rows(points: &[&ProjPoint], degree: usize) -> Vec<Vec<Rat>> {
    let mons = monomials(3, degree);
    points
        .iter()
        .map(|p| {
            mons.iter()
                .map(|e| {
                    let v = p
                        .coords()
                        .iter()
                        .zip(e)
                        .fold(num_bigint::BigInt::from(1), |acc, (x, &k)| acc * x.pow(k));
                    Rat::from_integer(v)
                })
                .collect()
        })
        .collect()
}

/// `None` when the points are in general position, else a witness.
pub fn general_position(points: &[ProjPoint]) -> Result<Option<GpViolation>> {
    check_point_list(points)?;
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if rank(&monomial_rows(&[&points[i], &points[j], &points[k]], 1)) < 3 {
                    return Ok(Some(GpViolation::Collinear([i, j, k])));
                }
            }
        }
    }
    if n >= 6 {
        for six in subsets(n, 6) {
            let pts: Vec<&ProjPoint> = six.iter().map(|&i| &points[i]).collect();
            if rank(&monomial_rows(&pts, 2)) < 6 {
                return Ok(Some(GpViolation::SixOnConic(
                    six.try_into().expect("six indices"),
                )));
            }
        }
    }
    if n == 8 {
        let mons = monomials(3, 3);
        for node in 0..8 {
            // through the other seven, with vanishing gradient at the node
            let others: Vec<&ProjPoint> =
                (0..8).filter(|&i| i != node).map(|i| &points[i]).collect();
            let mut rows = monomial_rows(&others, 3);
            let p = points[node].coords();
            for var in 0..3 {
                rows.push(
                    mons.iter()
                        .map(|e| {
                            if e[var] == 0 {
                                return Rat::zero();
                            }
                            let mut v = num_bigint::BigInt::from(e[var]);
                            for (w, (x, &k)) in p.iter().zip(e).enumerate() {
                                let k = if w == var { k - 1 } else { k };
                                v *= x.pow(k);
                            }
                            Rat::from_integer(v)
                        })
                        .collect(),
                );
            }
            if rank(&rows) < mons.len() {
                return Ok(Some(GpViolation::EightOnNodalCubic { node }));
            }
        }
    }
    Ok(None)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A blown-up point with its position relative to D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlownPoint {
    pub point: ProjPoint,
    /// Multiplicity of D at the point (0 when off D).
    pub multiplicity: u8,
    /// Indices of the components of D through the point.
    pub on: Vec<usize>,
}

impl BlownPoint {
    pub fn is_smooth_on_d(&self) -> bool {
        self.multiplicity == 1
    }
}

/// A cubic D with its components over ℚ̄ (all rational here) and a set of
/// blown-up points in general position.
#[derive(Clone, Debug)]
pub struct BlowupConfig {
    pub d: PlaneCubic,
    pub class: CubicClass,
    pub components: Vec<HomogForm>,
    pub points: Vec<BlownPoint>,
}

fn component_multiplicity(c: &HomogForm, p: &ProjPoint) -> Result<u8> {
    if !evaluate(c, p)?.is_zero() {
        return Ok(0);
    }
    for g in c.gradient() {
        if !evaluate(&g, p)?.is_zero() {
            return Ok(1);
        }
    }
    Ok(2)
}

impl BlowupConfig {
    pub fn new(d: PlaneCubic, points: Vec<ProjPoint>) -> Result<Self> {
        check_point_list(&points)?;
        if let Some(v) = general_position(&points)? {
            return Err(Error::Precondition(format!(
                "points not in general position: {v}"
            )));
        }
        let class = classify(&d)?;
        if class == CubicClass::NotOverQ {
            return Err(Error::Unsupported(
                "components of D not defined over ℚ".into(),
            ));
        }
        let fac = d.factorization();
        let mut components = fac.lines.clone();
        if fac.rest.degree() > 0 {
            components.push(fac.rest.primitive());
        }
        let mut blown = Vec::new();
        for p in points {
            let multiplicity = d.multiplicity_at(&p)?;
            let mut on = Vec::new();
            for (i, c) in components.iter().enumerate() {
                if component_multiplicity(c, &p)? > 0 {
                    on.push(i);
                }
            }
            blown.push(BlownPoint {
                point: p,
                multiplicity,
                on,
            });
        }
        Ok(BlowupConfig {
            d,
            class,
            components,
            points: blown,
        })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Class of the strict transform of component j.
    pub fn strict_transform(&self, j: usize) -> Result<PicClass> {
        let c = &self.components[j];
        let m = self
            .points
            .iter()
            .map(|b| component_multiplicity(c, &b.point).map(|k| -(k as i64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PicClass {
            d: c.degree() as i64,
            m,
        })
    }
}

/// D̂ = D̃ + Σ (E_P·D̃ − 1)·E_P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatDivisor {
    /// Every blown point lies on D with multiplicity at most 2.
    pub valid: bool,
    pub class: PicClass,
    /// Coefficient of each E_P in D̂.
    pub exceptional: Vec<i64>,
    /// Classes of the irreducible components of D̂: strict transforms, then
    /// the exceptional curves with coefficient 1.
    pub components: Vec<PicClass>,
}

pub fn hat_divisor(cfg: &BlowupConfig) -> Result<HatDivisor> {
    let n = cfg.n();
    let valid = cfg.points.iter().all(|b| (1..=2).contains(&b.multiplicity));
    let mut components = Vec::new();
    let mut class = PicClass::zero(n);
    for j in 0..cfg.components.len() {
        let c = cfg.strict_transform(j)?;
        class = class.add(&c)?;
        components.push(c);
    }
    let exceptional: Vec<i64> = cfg
        .points
        .iter()
        .map(|b| b.multiplicity as i64 - 1)
        .collect();
    for (i, &a) in exceptional.iter().enumerate() {
        class = class.add(&PicClass::e(i, n).scale(a))?;
        if a == 1 {
            components.push(PicClass::e(i, n));
        }
    }
    Ok(HatDivisor {
        valid,
        class,
        exceptional,
        components,
    })
}

/// Generators of {a ∈ (ℤ/n)^r : Σ aᵢ·[Cᵢ] ≡ 0 in Pic X / n}. Empty when
/// X ∖ ∪Cᵢ has no cyclic cover of degree n.
pub fn cyclic_cover_kernel(components: &[PicClass], n: i64) -> Result<Vec<Vec<i64>>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("cover degree {n} < 2")));
    }
    let Some(first) = components.first() else {
        return Ok(Vec::new());
    };
    for c in components {
        same_rank(first, c)?;
    }
    let rows: Vec<Vec<i64>> = components.iter().map(PicClass::coords).collect();
    let s = smith_normal_form(&rows);
    // a = Uᵀ·y with yᵢ·dᵢ ≡ 0 (mod n)
    let mut out = Vec::new();
    for (i, row) in s.u.iter().enumerate() {
        let di = s.diag.get(i).copied().unwrap_or(0);
        let g = num_integer::gcd(di, n);
        if g == 1 {
            continue;
        }
        let k = n / g;
        let v: Vec<i64> = row.iter().map(|x| (k * x).rem_euclid(n)).collect();
        if v.iter().any(|&x| x != 0) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Which case of the classification decided the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopologyReason {
    IrreducibleSmoothPointBlown,
    IrreducibleNoSmoothPointBlown,
    ConicPointBlown,
    NoConicPointBlown,
    TwoLinesBlown,
    FewerThanTwoLinesBlown,
    /// ℙ² minus three concurrent lines: outside the classifier's domain.
    ExcludedConcurrentLines,
}

impl TopologyReason {
    pub fn name(self) -> &'static str {
        match self {
            TopologyReason::IrreducibleSmoothPointBlown => "irreducible-smooth-point-blown",
            TopologyReason::IrreducibleNoSmoothPointBlown => "irreducible-no-smooth-point-blown",
            TopologyReason::ConicPointBlown => "conic-point-blown",
            TopologyReason::NoConicPointBlown => "no-conic-point-blown",
            TopologyReason::TwoLinesBlown => "two-lines-blown",
            TopologyReason::FewerThanTwoLinesBlown => "fewer-than-two-lines-blown",
            TopologyReason::ExcludedConcurrentLines => "excluded-concurrent-lines",
        }
    }
}

impl fmt::Display for TopologyReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    pub simply_connected: bool,
    pub reason: TopologyReason,
    /// Elementary divisors of the intersection matrix of D̂'s components.
    pub elementary_divisors: Vec<i64>,
    /// Verdict of the Smith-normal-form route.
    pub snf_simply_connected: bool,
}

/// Rows: components of D̂; columns: their products with h, e₁, …, eₙ.
pub fn intersection_matrix(components: &[PicClass]) -> Result<Vec<Vec<i64>>> {
    let Some(first) = components.first() else {
        return Ok(Vec::new());
    };
    let n = first.rank();
    let basis: Vec<PicClass> = std::iter::once(PicClass::h(n))
        .chain((0..n).map(|i| PicClass::e(i, n)))
        .collect();
    components
        .iter()
        .map(|c| basis.iter().map(|b| intersect(c, b)).collect())
        .collect()
}

/// H₁(X ∖ D̂) is the cokernel of Pic X → ℤ^components; trivial exactly when
/// every elementary divisor is 1 and the rank is the number of components.
pub fn snf_simply_connected(components: &[PicClass]) -> Result<(bool, Vec<i64>)> {
    let m = intersection_matrix(components)?;
    let s = smith_normal_form(&m);
    let ok = s.diag.len() == components.len() && s.diag.iter().all(|&d| d == 1);
    Ok((ok, s.diag))
}

pub fn simply_connected(cfg: &BlowupConfig) -> Result<Topology> {
    let hat = hat_divisor(cfg)?;
    if !hat.valid {
        return Err(Error::InvalidInput(
            "a blown point is off D or a triple point of D".into(),
        ));
    }
    let (snf_ok, divisors) = snf_simply_connected(&hat.components)?;
    // blowing up a singular point adds its exceptional curve to D̂ and
    // leaves the complement unchanged, so only smooth points count
    let smooth: Vec<&BlownPoint> = cfg.points.iter().filter(|b| b.is_smooth_on_d()).collect();
    let (ok, reason) = match cfg.class {
        c if c.is_irreducible() => {
            if smooth.is_empty() {
                (false, TopologyReason::IrreducibleNoSmoothPointBlown)
            } else {
                (true, TopologyReason::IrreducibleSmoothPointBlown)
            }
        }
        CubicClass::ConicPlusChord
        | CubicClass::ConicPlusTangent
        | CubicClass::LinePlusConicIrrationalConfig => {
            let conic = cfg
                .components
                .iter()
                .position(|c| c.degree() == 2)
                .expect("a conic component");
            if smooth.iter().any(|b| b.on == [conic]) {
                (true, TopologyReason::ConicPointBlown)
            } else {
                (false, TopologyReason::NoConicPointBlown)
            }
        }
        CubicClass::ThreeLinesGeneral | CubicClass::ThreeConcurrentLines => {
            if cfg.class == CubicClass::ThreeConcurrentLines && cfg.points.is_empty() {
                (false, TopologyReason::ExcludedConcurrentLines)
            } else {
                let lines: std::collections::BTreeSet<usize> =
                    smooth.iter().flat_map(|b| b.on.clone()).collect();
                if lines.len() >= 2 {
                    (true, TopologyReason::TwoLinesBlown)
                } else {
                    (false, TopologyReason::FewerThanTwoLinesBlown)
                }
            }
        }
        c => return Err(Error::Unsupported(format!("cubic of class {c}"))),
    };
    Ok(Topology {
        simply_connected: ok,
        reason,
        elementary_divisors: divisors,
        snf_simply_connected: snf_ok,
    })
}

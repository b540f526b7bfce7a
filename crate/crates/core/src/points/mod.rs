//! S-integral points: integrality in the plane, surface and blow-up models,
//! the divisor at infinity of a conic, the Pell engine, point search and
//! the fibration-driven generators.

pub mod generate;
pub mod hypotheses;
pub mod pell;
pub mod search;

pub use generate::{
    double_fibration_generate, single_fibration_generate, Budget, DoubleFibration, GenerationReport,
};
pub use hypotheses::{check_h1, check_h3, DComponent, H1Verdict};
pub use pell::{fundamental_automorphism, orbit, PellAutomorphism};
pub use search::{naive_integral_points, search_integral_points, SearchCurve};

use crate::arith::{content, is_s_unit, rat_sqrt, squarefree_decompose, PrimeSet, Rat};
use crate::cubic::PlaneCubic;
use crate::error::{Error, Result};
use crate::projgeo::linalg::{complete_basis, int_kernel};
use crate::projgeo::{
    cross, evaluate, p1_rat, parametrize_conic, BinaryForm, HomogForm, ProjPoint, RationalParam,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// ℙ² with the divisor of a form.
    PlaneModD,
    /// w³ = F with the plane w = 0.
    SurfaceModH,
    /// ℙ² blown up at P, with the divisor D̂.
    BlowupModDhat,
    /// Same, with D̂ ∪ E.
    BlowupModDhatE,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityContext {
    pub ambient: Ambient,
    pub s: PrimeSet,
    /// The plane divisor (for the surface and blow-ups: the cubic F).
    pub divisor: HomogForm,
    pub blown: Option<ProjPoint>,
}

impl IntegralityContext {
    pub fn plane(divisor: &HomogForm, s: PrimeSet) -> Result<Self> {
        if divisor.nvars() != 3 || divisor.is_zero() {
            return Err(Error::InvalidInput(
                "plane divisor must be a nonzero ternary form".into(),
            ));
        }
        Ok(IntegralityContext {
            ambient: Ambient::PlaneModD,
            s,
            divisor: divisor.primitive(),
            blown: None,
        })
    }

    pub fn surface(f: &PlaneCubic, s: PrimeSet) -> Self {
        IntegralityContext {
            ambient: Ambient::SurfaceModH,
            s,
            divisor: f.form().clone(),
            blown: None,
        }
    }

    pub fn blowup(f: &PlaneCubic, p: &ProjPoint, s: PrimeSet, with_e: bool) -> Result<Self> {
        if f.multiplicity_at(p)? != 1 {
            return Err(Error::InvalidInput(format!(
                "{p} is not a smooth point of {f}"
            )));
        }
        let ambient = if with_e {
            Ambient::BlowupModDhatE
        } else {
            Ambient::BlowupModDhat
        };
        Ok(IntegralityContext {
            ambient,
            s,
            divisor: f.form().clone(),
            blown: Some(p.clone()),
        })
    }

    fn blown_point(&self) -> Result<&ProjPoint> {
        self.blown
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("context has no blown-up point".into()))
    }
}

fn int_value(f: &HomogForm, p: &ProjPoint) -> Result<BigInt> {
    let v = evaluate(f, p)?;
    if !v.is_integer() {
        return Err(Error::InvalidInput(
            "divisor form has fractional coefficients".into(),
        ));
    }
    Ok(v.to_integer())
}

/// n with every prime factor shared with m removed.
pub fn strip_common(n: &BigInt, m: &BigInt) -> BigInt {
    let mut n = n.abs();
    if m.is_zero() {
        return n;
    }
    loop {
        let g = n.gcd(m);
        if g.is_one() {
            return n;
        }
        n /= &g;
    }
}

pub fn is_integral(p: &ProjPoint, ctx: &IntegralityContext) -> Result<bool> {
    match ctx.ambient {
        Ambient::PlaneModD => {
            if p.dim() != 2 {
                return Err(Error::DimensionMismatch("plane point expected".into()));
            }
            let v = int_value(&ctx.divisor, p)?;
            if v.is_zero() {
                return Err(Error::OnDivisor);
            }
            is_s_unit(&v, &ctx.s)
        }
        Ambient::SurfaceModH => {
            if p.dim() != 3 {
                return Err(Error::DimensionMismatch("surface point expected".into()));
            }
            let c = p.coords();
            let w = &c[3];
            let q = ProjPoint::from_big(&c[..3]).map_err(|_| Error::NotOnCurve)?;
            // w³ = F on primitive coordinates; (x, y, z) is primitive unless
            // its content divides w, which the cube equation rules out.
            let fv = ctx.divisor.eval_int(&c[..3])?;
            if fv != Rat::from_integer(w * w * w) {
                return Err(Error::NotOnCurve);
            }
            let _ = q;
            if w.is_zero() {
                return Err(Error::OnDivisor);
            }
            is_s_unit(w, &ctx.s)
        }
        Ambient::BlowupModDhat | Ambient::BlowupModDhatE => {
            blowup_integrality(&BlowupPoint::off_e(p.clone()), ctx)
        }
    }
}

/// A point of the blow-up: its image in ℙ² and, over the blown-up point,
/// the line through P giving its direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupPoint {
    pub image: ProjPoint,
    pub direction: Option<HomogForm>,
}

impl BlowupPoint {
    pub fn off_e(image: ProjPoint) -> Self {
        BlowupPoint {
            image,
            direction: None,
        }
    }

    pub fn on_e(p: ProjPoint, direction: HomogForm) -> Self {
        BlowupPoint {
            image: p,
            direction: Some(direction),
        }
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gradient_at(f: &HomogForm, p: &ProjPoint) -> Result<Vec<BigInt>> {
    f.gradient().iter().map(|g| int_value(g, p)).collect()
}

fn direction_of(q: &BlowupPoint, p: &ProjPoint) -> Result<Vec<BigInt>> {
    let n = q
        .direction
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("a point over P needs a direction".into()))?;
    if n.nvars() != 3 || n.degree() != 1 || !evaluate(n, p)?.is_zero() {
        return Err(Error::InvalidInput(format!(
            "{n} is not a line through {p}"
        )));
    }
    Ok(n.primitive().int_coeffs())
}

/// Integrality on the blow-up, read off the affine charts: at a prime ℓ with
/// σ(q) ≡ P the reduction lies on E, at the direction (σ(q) − P)/ℓᵛ, and on
/// D̂ exactly when that direction is tangent to D at P.
pub fn blowup_integrality(q: &BlowupPoint, ctx: &IntegralityContext) -> Result<bool> {
    let with_e = match ctx.ambient {
        Ambient::BlowupModDhat => false,
        Ambient::BlowupModDhatE => true,
        _ => return Err(Error::AmbientMismatch("blow-up context expected".into())),
    };
    let p = ctx.blown_point()?;
    let grad = gradient_at(&ctx.divisor, p)?;
    if q.image == *p {
        if with_e {
            return Err(Error::OnDivisor);
        }
        let n = direction_of(q, p)?;
        let tangent = crate::arith::primitive_int(&grad);
        let c = content(&cross(&n, &tangent));
        if c.is_zero() {
            return Err(Error::OnDivisor);
        }
        return is_s_unit(&c, &ctx.s);
    }
    let x = q.image.coords();
    let fx = int_value(&ctx.divisor, &q.image)?;
    if fx.is_zero() {
        return Err(Error::OnDivisor);
    }
    let c = content(&cross(x, p.coords()));
    let away = strip_common(&fx, &c);
    if !is_s_unit(&away, &ctx.s)? {
        return Ok(false);
    }
    if with_e {
        return is_s_unit(&c, &ctx.s);
    }
    let pc = p.coords();
    for i in 0..3 {
        if pc[i].is_zero() {
            continue;
        }
        let y: Vec<BigInt> = x
            .iter()
            .zip(pc)
            .map(|(xj, pj)| &pc[i] * xj - &x[i] * pj)
            .collect();
        let e = content(&y);
        let h = dot(&grad, &y) / &e;
        let bad = strip_common(&e.gcd(&h), &pc[i]);
        if !is_s_unit(&bad, &ctx.s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coordinates (s, t) of a primitive point x = s·P + t·V.
pub fn line_coordinates(p: &[BigInt], v: &[BigInt], x: &[BigInt]) -> Option<(BigInt, BigInt)> {
    for i in 0..3 {
        for j in i + 1..3 {
            let d = &p[i] * &v[j] - &p[j] * &v[i];
            if d.is_zero() {
                continue;
            }
            let sn = &x[i] * &v[j] - &x[j] * &v[i];
            let tn = &p[i] * &x[j] - &p[j] * &x[i];
            if !(&sn % &d).is_zero() || !(&tn % &d).is_zero() {
                return None;
            }
            let (s, t) = (sn / &d, tn / &d);
            let ok = (0..3).all(|k| &s * &p[k] + &t * &v[k] == x[k]);
            return ok.then_some((s, t));
        }
    }
    None
}

/// The same predicate through the pencil of lines at P: on the line
/// through P and q with integer basis (P, V), F = t·g(s, t), and q is
/// D̂-integral iff g(s, t) is an S-unit.
pub fn blowup_integrality_pencil(q: &BlowupPoint, ctx: &IntegralityContext) -> Result<bool> {
    let with_e = match ctx.ambient {
        Ambient::BlowupModDhat => false,
        Ambient::BlowupModDhatE => true,
        _ => return Err(Error::AmbientMismatch("blow-up context expected".into())),
    };
    let p = ctx.blown_point()?;
    let grad = gradient_at(&ctx.divisor, p)?;
    let line: Vec<BigInt> = if q.image == *p {
        if with_e {
            return Err(Error::OnDivisor);
        }
        direction_of(q, p)?
    } else {
        crate::arith::primitive_int(&cross(p.coords(), q.image.coords()))
    };
    let v = complete_basis(p.coords(), &int_kernel(&[line], 3))
        .ok_or_else(|| Error::InvalidInput("blown-up point is not primitive on its line".into()))?;
    if q.image == *p {
        let g10 = dot(&crate::arith::primitive_int(&grad), &v);
        if g10.is_zero() {
            return Err(Error::OnDivisor);
        }
        return is_s_unit(&g10, &ctx.s);
    }
    let fx = int_value(&ctx.divisor, &q.image)?;
    if fx.is_zero() {
        return Err(Error::OnDivisor);
    }
    if with_e {
        return is_s_unit(&fx, &ctx.s);
    }
    let (_, t) = line_coordinates(p.coords(), &v, q.image.coords())
        .or_else(|| {
            let neg: Vec<BigInt> = q.image.coords().iter().map(|c| -c).collect();
            line_coordinates(p.coords(), &v, &neg)
        })
        .ok_or_else(|| Error::InvalidInput("point is not on its own pencil line".into()))?;
    is_s_unit(&(fx / t), &ctx.s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InfinityKind {
    Empty,
    OneRational,
    TwoRational,
    QuadraticRealPair,
    QuadraticImaginaryPair,
    /// One point carrying all of the intersection.
    Tangency,
    /// Three or more distinct points.
    ThreeOrMore,
}

impl fmt::Display for InfinityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The divisor cut on a rational curve by D, in the curve's parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityType {
    pub kind: InfinityKind,
    /// Rational support points.
    pub points: Vec<ProjPoint>,
    /// Squarefree part of the discriminant for a conjugate pair.
    pub radicand: Option<BigInt>,
    /// Reduced support as a binary form in the parameter, primitive.
    pub support: BinaryForm,
    /// D pulled back along the parametrization.
    pub pullback: BinaryForm,
    pub param: RationalParam,
    pub base: ProjPoint,
}

/// Small-height rational point on a conic, if one is found.
pub fn find_conic_point(c: &HomogForm, bound: i64) -> Option<ProjPoint> {
    search::points_on_plane_curve(c, bound as u64)
        .into_iter()
        .next()
}

pub fn infinity_type(c: &HomogForm, d: &HomogForm) -> Result<InfinityType> {
    let base = find_conic_point(c, 30)
        .ok_or_else(|| Error::Precondition(format!("no rational point of height ≤ 30 on {c}")))?;
    infinity_type_at(c, d, &base)
}

pub fn infinity_type_at(c: &HomogForm, d: &HomogForm, base: &ProjPoint) -> Result<InfinityType> {
    let param = parametrize_conic(c, base)?;
    infinity_type_param(param, d, base.clone())
}

pub fn infinity_type_param(
    param: RationalParam,
    d: &HomogForm,
    base: ProjPoint,
) -> Result<InfinityType> {
    let pullback = param.compose(d)?;
    if pullback.is_zero() {
        return Err(Error::ComponentOverlap);
    }
    let sq = pullback.squarefree()?;
    let mut support = BinaryForm::new(vec![Rat::one()]);
    for (f, _) in &sq {
        support = support.mul(f);
    }
    let all: Vec<Rat> = support.coeffs.clone();
    let prim = crate::arith::normalize_primitive(&all)?;
    let support = BinaryForm::new(prim.into_iter().map(Rat::from_integer).collect());
    let rational_points = |b: &BinaryForm| -> Result<Vec<ProjPoint>> {
        b.rational_roots()?
            .iter()
            .map(|(r, _)| {
                let (s, t) = p1_rat(r);
                param.point_at(&s, &t)
            })
            .collect()
    };
    let (kind, points, radicand) = match support.degree() {
        0 => (InfinityKind::Empty, vec![], None),
        1 => {
            let m = sq.iter().map(|(_, m)| *m).max().unwrap();
            let kind = if m == 1 {
                InfinityKind::OneRational
            } else {
                InfinityKind::Tangency
            };
            (kind, rational_points(&support)?, None)
        }
        2 => {
            let disc = support.discriminant();
            if rat_sqrt(&disc).is_some() {
                (InfinityKind::TwoRational, rational_points(&support)?, None)
            } else {
                let r = squarefree_decompose(&disc.to_integer()).1;
                let kind = if disc.is_positive() {
                    InfinityKind::QuadraticRealPair
                } else {
                    InfinityKind::QuadraticImaginaryPair
                };
                (kind, vec![], Some(r))
            }
        }
        _ => (InfinityKind::ThreeOrMore, rational_points(&support)?, None),
    };
    Ok(InfinityType {
        kind,
        points,
        radicand,
        support,
        pullback,
        param,
        base,
    })
}

//! Pell engine: automorphisms of a conic fixing its points at infinity and
//! preserving integrality, and their orbits.
//!
//! A conic with a rational point is parametrized by φ(s, t); the divisor at
//! infinity pulls back to a binary quadratic q = As² + Bst + Ct² of
//! discriminant Δ. Any α = (X + Y√Δ)/2 gives the automorph
//!
//!   γ = [[(X − BY)/2, −CY], [AY, (X + BY)/2]],   q∘γ = N(α)·q,
//!
//! which fixes both roots of q, and M = Φ·Sym²(γ)·Φ⁻¹ is the matching
//! plane transformation (Φ holds the coefficients of φ).

use super::{Ambient, InfinityKind, InfinityType, IntegralityContext};
use crate::arith::{fundamental_unit, is_s_unit, squarefree_decompose, PrimeSet, QuadElem, Rat};
use crate::error::{Error, Result};
use crate::projgeo::linalg::{int_mat_mul, int_mat_vec, inverse, mat_mul, IntMatrix, RatMatrix};
use crate::projgeo::{BinaryForm, HomogForm, ProjPoint};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

/// Partial quotients tried when looking for a fundamental unit.
pub const CF_STEPS: usize = 4000;
/// Box for the direct search over (X, Y).
const SEARCH_BOX: i64 = 12;
/// Powers of the fundamental unit tried.
const UNIT_POWERS: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellAutomorphism {
    /// Primitive integer 3×3 matrix acting on column vectors.
    pub matrix: IntMatrix,
    pub conic: HomogForm,
    pub divisor: HomogForm,
    /// D(Mx) = κ·D(x) for x on the conic.
    pub kappa: Rat,
}

impl PellAutomorphism {
    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        ProjPoint::from_big(&int_mat_vec(&self.matrix, p.coords()))
    }

    pub fn inverse(&self) -> PellAutomorphism {
        let inv = normalize(&adjugate(&self.matrix));
        PellAutomorphism {
            matrix: inv,
            conic: self.conic.clone(),
            divisor: self.divisor.clone(),
            kappa: Rat::one() / &self.kappa,
        }
    }

    pub fn max_entry(&self) -> BigInt {
        max_entry(&self.matrix)
    }

    pub fn det(&self) -> BigInt {
        det3(&self.matrix)
    }
}

impl fmt::Display for PellAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

fn det3(m: &[Vec<BigInt>]) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn adjugate(m: &[Vec<BigInt>]) -> IntMatrix {
    let mut a = vec![vec![BigInt::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            a[i][j] = &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
        }
    }
    a
}

fn max_entry(m: &[Vec<BigInt>]) -> BigInt {
    m.iter()
        .flatten()
        .map(|x| x.abs())
        .max()
        .unwrap_or_default()
}

/// Primitive, with positive trace (or first nonzero entry positive when the
/// trace vanishes).
fn normalize(m: &[Vec<BigInt>]) -> IntMatrix {
    let g = m.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
    let mut out: IntMatrix = m
        .iter()
        .map(|r| r.iter().map(|x| x / &g).collect())
        .collect();
    let tr: BigInt = (0..3).map(|i| out[i][i].clone()).sum();
    let neg = if tr.is_zero() {
        out.iter()
            .flatten()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative())
    } else {
        tr.is_negative()
    };
    if neg {
        for x in out.iter_mut().flatten() {
            *x = -x.clone();
        }
    }
    out
}

fn rat_to_int_matrix(m: &RatMatrix) -> IntMatrix {
    let l = m
        .iter()
        .flatten()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: IntMatrix = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    normalize(&ints)
}

fn is_scalar(m: &[Vec<BigInt>]) -> bool {
    (0..3).all(|i| {
        (0..3).all(|j| {
            if i == j {
                m[i][i] == m[0][0]
            } else {
                m[i][j].is_zero()
            }
        })
    })
}

fn sym2(g: &[[BigInt; 2]; 2]) -> RatMatrix {
    let [[a, b], [c, d]] = g;
    let r = |x: BigInt| Rat::from_integer(x);
    vec![
        vec![r(a * a), r(BigInt::from(2) * a * b), r(b * b)],
        vec![r(a * c), r(a * d + b * c), r(b * d)],
        vec![r(c * c), r(BigInt::from(2) * c * d), r(d * d)],
    ]
}

fn s_unit_rat(q: &Rat, s: &PrimeSet) -> bool {
    !q.is_zero()
        && is_s_unit(q.numer(), s).unwrap_or(false)
        && is_s_unit(q.denom(), s).unwrap_or(false)
}

/// Integer (X, Y) proportional to (2a, 2b/f) for α = a + b√d.
fn xy_of(alpha: &QuadElem, f: &BigInt) -> (BigInt, BigInt) {
    let x = &alpha.a * Rat::from_integer(BigInt::from(2));
    let y = &alpha.b * Rat::from_integer(BigInt::from(2)) / Rat::from_integer(f.clone());
    let l = x.denom().lcm(y.denom());
    (
        (x * Rat::from_integer(l.clone())).to_integer(),
        (y * Rat::from_integer(l)).to_integer(),
    )
}

/// Canonical representative of {M, M⁻¹}: the entrywise lexicographically
/// larger of the two normalized matrices.
fn canonical(m: &IntMatrix) -> IntMatrix {
    let inv = normalize(&adjugate(m));
    let flat = |x: &IntMatrix| x.iter().flatten().cloned().collect::<Vec<_>>();
    if flat(&inv) > flat(m) {
        inv
    } else {
        m.clone()
    }
}

/// Ordering used to pick the automorphism: smaller entries first, then
/// positive determinant, then the lexicographically larger matrix.
fn preference(a: &IntMatrix, b: &IntMatrix) -> Ordering {
    let flat = |x: &IntMatrix| x.iter().flatten().cloned().collect::<Vec<_>>();
    max_entry(a)
        .cmp(&max_entry(b))
        .then(det3(a).is_negative().cmp(&det3(b).is_negative()))
        .then(flat(b).cmp(&flat(a)))
}

struct Setup<'a> {
    conic: &'a HomogForm,
    divisor: &'a HomogForm,
    s: &'a PrimeSet,
    coeffs: [BigInt; 3],
    phi: RatMatrix,
    phi_inv: RatMatrix,
    x0: Vec<BigInt>,
    d0: Rat,
}

impl Setup<'_> {
    fn matrix(&self, x: &BigInt, y: &BigInt) -> Option<IntMatrix> {
        let [a, b, c] = &self.coeffs;
        let g = [
            [x - b * y, -BigInt::from(2) * c * y],
            [BigInt::from(2) * a * y, x + b * y],
        ];
        if (&g[0][0] * &g[1][1] - &g[0][1] * &g[1][0]).is_zero() {
            return None;
        }
        let m = mat_mul(&mat_mul(&self.phi, &sym2(&g)), &self.phi_inv);
        Some(rat_to_int_matrix(&m))
    }

    /// κ when M passes every check.
    fn validate(&self, m: &IntMatrix) -> Option<Rat> {
        let det = det3(m);
        if det.is_zero() || !is_s_unit(&det, self.s).ok()? {
            return None;
        }
        let mx = int_mat_vec(m, &self.x0);
        let kappa = self.divisor.eval_int(&mx).ok()? / &self.d0;
        if !s_unit_rat(&kappa, self.s) {
            return None;
        }
        let mut p = m.clone();
        for _ in 0..6 {
            if is_scalar(&p) {
                return None;
            }
            p = int_mat_mul(&p, m);
        }
        let rows: RatMatrix = m
            .iter()
            .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let moved = self.conic.transform(&rows).ok()?;
        moved.proportional(self.conic).then_some(kappa)
    }
}

/// The preferred automorphism of the conic fixing each point of its divisor
/// at infinity and mapping integral points to integral points; `None` when
/// no candidate passes.
pub fn fundamental_automorphism(
    conic: &HomogForm,
    inf: &InfinityType,
    ctx: &IntegralityContext,
) -> Result<Option<PellAutomorphism>> {
    if ctx.ambient != Ambient::PlaneModD {
        return Err(Error::AmbientMismatch(
            "the Pell engine works in the plane model".into(),
        ));
    }
    if conic.nvars() != 3 || conic.degree() != 2 || inf.param.degree() != 2 {
        return Err(Error::InvalidInput(
            "a plane conic with its quadratic parametrization is expected".into(),
        ));
    }
    match inf.kind {
        InfinityKind::QuadraticRealPair | InfinityKind::QuadraticImaginaryPair => {}
        // needs a finite prime in S
        InfinityKind::TwoRational if ctx.s.is_empty() => return Ok(None),
        InfinityKind::TwoRational => {}
        k => {
            return Err(Error::Precondition(format!(
                "no unit action for an infinity of type {k}"
            )))
        }
    }
    let sc = &inf.support.coeffs;
    let coeffs = [sc[0].to_integer(), sc[1].to_integer(), sc[2].to_integer()];
    let phi: RatMatrix = inf.param.comps.iter().map(|c| c.coeffs.clone()).collect();
    let phi_inv = inverse(&phi)
        .ok_or_else(|| Error::InvalidInput("degenerate conic parametrization".into()))?;
    let (x0, d0) = [
        (1, 1),
        (1, 2),
        (2, 1),
        (1, -1),
        (3, 1),
        (1, 3),
        (1, 0),
        (0, 1),
    ]
    .iter()
    .find_map(|&(s, t)| {
        let p = inf
            .param
            .point_at(&Rat::from_integer(s.into()), &Rat::from_integer(t.into()))
            .ok()?;
        let v = ctx.divisor.eval_int(p.coords()).ok()?;
        (!v.is_zero()).then(|| (p.coords().to_vec(), v))
    })
    .ok_or_else(|| Error::InvalidInput("conic lies in the divisor".into()))?;
    let setup = Setup {
        conic,
        divisor: &ctx.divisor,
        s: &ctx.s,
        coeffs,
        phi,
        phi_inv,
        x0,
        d0,
    };

    let mut box_cands: Vec<(BigInt, BigInt)> = Vec::new();
    for x in -SEARCH_BOX..=SEARCH_BOX {
        for y in 1..=SEARCH_BOX {
            if BigInt::from(x).gcd(&BigInt::from(y)).is_one() {
                box_cands.push((x.into(), y.into()));
            }
        }
    }
    let mut seen = HashSet::new();
    let mut best: Option<(IntMatrix, Rat)> = None;
    // true when m was valid, whether or not it became the best
    let mut consider = |m: IntMatrix, best: &mut Option<(IntMatrix, Rat)>| -> bool {
        let m = canonical(&m);
        if let Some((bm, _)) = best.as_ref() {
            // cheap reject before validation
            if max_entry(&m) > max_entry(bm) {
                return false;
            }
        }
        if !seen.insert(m.clone()) {
            return false;
        }
        let Some(kappa) = setup.validate(&m) else {
            return false;
        };
        if best
            .as_ref()
            .is_none_or(|(bm, _)| preference(&m, bm) == Ordering::Less)
        {
            *best = Some((m, kappa));
        }
        true
    };
    for (x, y) in box_cands {
        if let Some(m) = setup.matrix(&x, &y) {
            consider(m, &mut best);
        }
    }
    let [a, b, c] = &setup.coeffs;
    let disc = b * b - BigInt::from(4) * a * c;
    if inf.kind == InfinityKind::QuadraticRealPair {
        let (f, d) = squarefree_decompose(&disc);
        if let Some(eps) = fundamental_unit(&d, CF_STEPS) {
            // higher powers only grow once one is valid
            for k in 1..=UNIT_POWERS {
                let (x, y) = xy_of(&eps.pow(k), &f);
                if let Some(m) = setup.matrix(&x, &y) {
                    if best
                        .as_ref()
                        .is_some_and(|(bm, _)| max_entry(&canonical(&m)) > max_entry(bm))
                    {
                        break;
                    }
                    if consider(m, &mut best) {
                        break;
                    }
                }
            }
        }
    }
    Ok(best.map(|(matrix, kappa)| PellAutomorphism {
        matrix,
        conic: conic.clone(),
        divisor: ctx.divisor.clone(),
        kappa,
    }))
}

/// p, T·p, …, Tⁿ⁻¹·p.
pub fn orbit(p: &ProjPoint, t: &PellAutomorphism, n: usize) -> Result<Vec<ProjPoint>> {
    if !crate::projgeo::evaluate(&t.conic, p)?.is_zero() {
        return Err(Error::NotOnCurve);
    }
    let rows: RatMatrix = t
        .matrix
        .iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    if !t.conic.transform(&rows)?.proportional(&t.conic) {
        return Err(Error::InvalidInput(
            "the automorphism does not fix the conic".into(),
        ));
    }
    let mut out = Vec::with_capacity(n);
    let mut seen = HashSet::new();
    let mut q = p.clone();
    for i in 0..n {
        if !seen.insert(q.clone()) {
            return Err(Error::InvalidInput("the orbit is finite".into()));
        }
        out.push(q.clone());
        if i + 1 < n {
            q = t.apply(&q)?;
        }
    }
    Ok(out)
}

/// An integral γ with det ±1 and g∘γ = ±g, for a binary quadratic g with
/// positive nonsquare discriminant: the first power of the fundamental unit
/// lying in the order of discriminant Δ(g).
pub fn binary_automorph(g: &BinaryForm, max_steps: usize) -> Option<[[BigInt; 2]; 2]> {
    if g.degree() != 2 || g.is_zero() {
        return None;
    }
    let prim = crate::arith::normalize_primitive(&g.coeffs).ok()?;
    let (a, b, c) = (&prim[0], &prim[1], &prim[2]);
    let disc = b * b - BigInt::from(4) * a * c;
    if !disc.is_positive() || crate::arith::exact_sqrt(&disc).is_some() {
        return None;
    }
    let (f, d) = squarefree_decompose(&disc);
    let eps = fundamental_unit(&d, max_steps)?;
    let two = Rat::from_integer(BigInt::from(2));
    let mut alpha = eps.clone();
    for _ in 0..64 {
        let x = &alpha.a * &two;
        let y = &alpha.b * &two / Rat::from_integer(f.clone());
        if x.is_integer() && y.is_integer() {
            let (x, y) = (x.to_integer(), y.to_integer());
            let (p, q) = (&x - b * &y, &x + b * &y);
            if p.is_even() && q.is_even() {
                return Some([[p / 2, -c * &y], [a * &y, q / 2]]);
            }
        }
        alpha = &alpha * &eps;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::infinity_type_at;

    fn form(s: &str) -> HomogForm {
        HomogForm::parse_expr(s, 3).unwrap()
    }

    fn ints(m: &IntMatrix) -> Vec<Vec<i64>> {
        m.iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect()
    }

    #[test]
    fn pell_fixture() {
        let c = form("x^2 - 2*y^2 - z^2");
        let z = form("z");
        let base = ProjPoint::from_ints(&[1, 0, 1]).unwrap();
        let inf = infinity_type_at(&c, &z, &base).unwrap();
        let ctx = IntegralityContext::plane(&z, PrimeSet::empty()).unwrap();
        let t = fundamental_automorphism(&c, &inf, &ctx).unwrap().unwrap();
        assert_eq!(
            ints(&t.matrix),
            vec![vec![3, 4, 0], vec![2, 3, 0], vec![0, 0, 1]]
        );
        let o = orbit(&base, &t, 3).unwrap();
        let want: Vec<ProjPoint> = [[1, 0, 1], [3, 2, 1], [17, 12, 1]]
            .iter()
            .map(|p| ProjPoint::from_ints(p).unwrap())
            .collect();
        assert_eq!(o, want);
        assert_eq!(orbit(&base, &t, 1).unwrap(), vec![base.clone()]);
        let back = t.inverse();
        assert_eq!(back.apply(&want[1]).unwrap(), base);
    }

    #[test]
    fn imaginary_pair_needs_a_split_prime() {
        let c = form("x^2 + y^2 - z^2");
        let z = form("z");
        let base = ProjPoint::from_ints(&[1, 0, 1]).unwrap();
        let inf = infinity_type_at(&c, &z, &base).unwrap();
        let none = IntegralityContext::plane(&z, PrimeSet::empty()).unwrap();
        assert!(fundamental_automorphism(&c, &inf, &none).unwrap().is_none());
        let five = IntegralityContext::plane(&z, PrimeSet::new(vec![5]).unwrap()).unwrap();
        let t = fundamental_automorphism(&c, &inf, &five).unwrap().unwrap();
        for p in orbit(&base, &t, 8).unwrap() {
            assert!(crate::points::is_integral(&p, &five).unwrap());
        }
    }

    #[test]
    fn two_rational_points_without_primes() {
        let c = form("x^2 + y^2 - z^2");
        let y = form("y");
        let base = ProjPoint::from_ints(&[0, 1, 1]).unwrap();
        let inf = infinity_type_at(&c, &y, &base).unwrap();
        let ctx = IntegralityContext::plane(&y, PrimeSet::empty()).unwrap();
        assert!(fundamental_automorphism(&c, &inf, &ctx).unwrap().is_none());
        let tang = infinity_type_at(
            &form("x*z - y^2"),
            &form("z"),
            &ProjPoint::from_ints(&[0, 0, 1]).unwrap(),
        )
        .unwrap();
        assert!(fundamental_automorphism(&form("x*z - y^2"), &tang, &ctx).is_err());
    }

    #[test]
    fn binary_automorphs() {
        let g = BinaryForm::from_ints(&[1, 0, -2]);
        let m = binary_automorph(&g, 100).unwrap();
        let [[a, b], [c, d]] = &m;
        let sub = |s: &BigInt, t: &BigInt| s * s - BigInt::from(2) * t * t;
        let v = sub(&(a * 5 + b * 3), &(c * 5 + d * 3));
        assert_eq!(v.abs(), sub(&BigInt::from(5), &BigInt::from(3)).abs());
        assert_eq!((a * d - b * c).abs(), BigInt::one());
        // Δ = 20 needs the unit to land in ℤ[√5]
        let h = BinaryForm::from_ints(&[1, 0, -5]);
        let [[a, b], [c, d]] = binary_automorph(&h, 100).unwrap();
        assert_eq!((&a * &d - &b * &c).abs(), BigInt::one());
        assert!(binary_automorph(&BinaryForm::from_ints(&[1, 0, 1]), 100).is_none());
    }
}

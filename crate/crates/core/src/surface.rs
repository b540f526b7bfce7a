//! The cubic surface w³ = F over a plane cubic, its rational lines and conic
//! fibrations, and the blow-up of the plane at a point of the cubic with its
//! pencil of lines.

use crate::arith::{primitive_int, rat_cbrt, squarefree_decompose, QuadElem, Rat};
use crate::cubic::{flex_decomposition, rational_flexes, PlaneCubic};
use crate::error::{Error, Result};
use crate::projgeo::linalg::{complete_basis, det, int_kernel};
use crate::projgeo::{
    evaluate, intersection_multiplicity, line_through_points, meet_lines, p1_of, p1_rat,
    parametrize_conic, BinaryForm, CurvePencil, HomogForm, ProjPoint, RationalParam, P1,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// w³ = F(x, y, z) in ℙ³; H is the plane w = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicSurface {
    base: PlaneCubic,
    g: HomogForm,
}

impl CubicSurface {
    pub fn new(base: PlaneCubic) -> Self {
        let g = surface_form(base.form());
        CubicSurface { base, g }
    }

    pub fn base(&self) -> &PlaneCubic {
        &self.base
    }

    /// w³ − F as a form in x, y, z, w.
    pub fn form(&self) -> &HomogForm {
        &self.g
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool> {
        if p.dim() != 3 {
            return Err(Error::DimensionMismatch("surface points live in ℙ³".into()));
        }
        Ok(evaluate(&self.g, p)?.is_zero())
    }
}

/// Lifts a ternary form to x, y, z, w.
pub fn lift3(f: &HomogForm) -> HomogForm {
    let subs: Vec<HomogForm> = (0..3).map(|i| HomogForm::var(4, i)).collect();
    f.substitute(&subs).expect("ternary form")
}

fn surface_form(f: &HomogForm) -> HomogForm {
    HomogForm::var(4, 3).pow(3).sub(&lift3(f))
}

/// The line {L = 0, w = ζ^twist·M} with ζ a primitive cube root of unity.
/// Only twist 0 is defined over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceLine {
    pub flexline: HomogForm,
    pub mform: HomogForm,
    pub twist: u8,
}

impl SurfaceLine {
    pub fn is_rational(&self) -> bool {
        self.twist == 0
    }

    /// Same flex line, w-coordinate multiplied by ζ^j.
    pub fn conjugate(&self, j: u8) -> SurfaceLine {
        SurfaceLine {
            twist: (self.twist + j) % 3,
            ..self.clone()
        }
    }

    /// L and w − M as forms on ℙ³.
    pub fn plane_forms(&self) -> Result<[HomogForm; 2]> {
        self.require_rational()?;
        Ok([
            lift3(&self.flexline),
            HomogForm::var(4, 3).sub(&lift3(&self.mform)),
        ])
    }

    fn require_rational(&self) -> Result<()> {
        if self.twist != 0 {
            return Err(Error::InvalidInput("line is not defined over ℚ".into()));
        }
        Ok(())
    }

    /// The point of ℙ³ over a point q of the flex line.
    pub fn lift(&self, q: &ProjPoint) -> Result<ProjPoint> {
        self.require_rational()?;
        if !evaluate(&self.flexline, q)?.is_zero() {
            return Err(Error::NotOnCurve);
        }
        let mut c = q.as_rats();
        c.push(evaluate(&self.mform, q)?);
        ProjPoint::new(&c)
    }

    pub fn param(&self) -> Result<RationalParam> {
        self.require_rational()?;
        let base = RationalParam::line_of_form(&self.flexline)?;
        let mut comps = base.comps.clone();
        comps.push(base.compose(&self.mform)?);
        RationalParam::new(comps)
    }

    /// The common point of the three conjugate lines, on H.
    pub fn flex_point(&self) -> Result<ProjPoint> {
        let q = meet_lines(&self.flexline, &self.mform)?;
        let mut c = q.as_rats();
        c.push(Rat::zero());
        ProjPoint::new(&c)
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool> {
        let [a, b] = self.plane_forms()?;
        Ok(evaluate(&a, p)?.is_zero() && evaluate(&b, p)?.is_zero())
    }

    /// Whether w = ζʲM lies on w³ = F, i.e. F ≡ M³ on L.
    pub fn lies_on(&self, s: &CubicSurface) -> Result<bool> {
        let par = RationalParam::line_of_form(&self.flexline)?;
        Ok(par.compose(s.base().form())? == par.compose(&self.mform)?.pow(3))
    }
}

impl fmt::Display for SurfaceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.twist {
            0 => {
                let w_minus_m = HomogForm::var(4, 3).sub(&lift3(&self.mform));
                write!(f, "{} = {} = 0", self.flexline, w_minus_m)
            }
            j => write!(f, "{} = 0, w = zeta^{j}*({})", self.flexline, self.mform),
        }
    }
}

/// The rational lines of w³ = F: one for every rational flex line L with
/// c·F = L·Q + M³ and c a rational cube.
pub fn rational_lines(s: &CubicSurface) -> Result<Vec<SurfaceLine>> {
    let d = s.base();
    let mut out: Vec<SurfaceLine> = Vec::new();
    for flex in rational_flexes(d)? {
        if out.iter().any(|l| l.flexline.proportional(&flex.line)) {
            continue;
        }
        let dec = flex_decomposition(d, &flex.line)?;
        let Some(root) = rat_cbrt(&dec.c) else {
            continue;
        };
        let line = SurfaceLine {
            flexline: flex.line.clone(),
            mform: dec.m.scale(&(Rat::one() / root)),
            twist: 0,
        };
        debug_assert!(line.lies_on(s).unwrap());
        out.push(line);
    }
    Ok(out)
}

/// The plane containing all given rational lines, when there are at least
/// two and they span a plane.
pub fn common_plane(lines: &[SurfaceLine]) -> Result<Option<HomogForm>> {
    if lines.len() < 2 {
        return Ok(None);
    }
    let mut rows = Vec::new();
    for l in lines {
        let par = l.param()?;
        for (s, t) in [(Rat::one(), Rat::zero()), (Rat::zero(), Rat::one())] {
            rows.push(ProjPoint::new(&par.eval(&s, &t))?.coords().to_vec());
        }
    }
    let k = int_kernel(&rows, 4);
    Ok(match k.len() {
        1 => Some(HomogForm::linear_int(&k[0]).normalized()),
        _ => None,
    })
}

fn zeta() -> QuadElem {
    QuadElem::new(
        Rat::new((-1).into(), 2.into()),
        Rat::new(1.into(), 2.into()),
        BigInt::from(-3),
    )
    .unwrap()
}

fn quad_rat(x: &Rat) -> QuadElem {
    QuadElem::from_rat(x.clone(), &BigInt::from(-3))
}

/// Kernel of a matrix over ℚ(√d).
pub fn quad_nullspace(mut m: Vec<Vec<QuadElem>>, cols: usize) -> Vec<Vec<QuadElem>> {
    let d = m
        .first()
        .map(|r| r[0].d().clone())
        .unwrap_or_else(|| BigInt::from(-3));
    let zero = QuadElem::from_rat(Rat::zero(), &d);
    let one = QuadElem::from_rat(Rat::one(), &d);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        m[r] = m[r].iter().map(|x| x * &inv).collect();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row_r = m[r].clone();
                m[i] = m[i]
                    .iter()
                    .zip(&row_r)
                    .map(|(a, b)| a - &(&f * b))
                    .collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero.clone(); cols];
            v[f] = one.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[i][f];
            }
            v
        })
        .collect()
}

/// The three lines over a flex line (w = ζʲ·M, j = 0, 1, 2, after rescaling
/// w by a real cube root of c) meet in exactly one point. Returns it.
pub fn conjugate_lines_meet(d: &PlaneCubic, l: &HomogForm) -> Result<ProjPoint> {
    let dec = flex_decomposition(d, l)?;
    let z = zeta();
    let mut rows = Vec::new();
    for j in 0..3u32 {
        let zj = z.pow(j);
        let mut r1: Vec<QuadElem> = dec.l.coeffs().iter().map(quad_rat).collect();
        r1.push(quad_rat(&Rat::zero()));
        let mut r2: Vec<QuadElem> = dec
            .m
            .coeffs()
            .iter()
            .map(|c| -&(&zj * &quad_rat(c)))
            .collect();
        r2.push(quad_rat(&Rat::one()));
        rows.push(r1);
        rows.push(r2);
    }
    let k = quad_nullspace(rows, 4);
    if k.len() != 1 {
        return Err(Error::InvalidInput(format!(
            "the lines over {l} meet in a space of dimension {}",
            k.len()
        )));
    }
    let v = &k[0];
    let lead = v.iter().find(|x| !x.is_zero()).unwrap().inv().unwrap();
    let scaled: Vec<QuadElem> = v.iter().map(|x| x * &lead).collect();
    if scaled.iter().any(|x| !x.is_rational()) {
        return Err(Error::InvalidInput("common point is not rational".into()));
    }
    ProjPoint::new(&scaled.iter().map(|x| x.a.clone()).collect::<Vec<_>>())
}

/// Planes a·L + b·(w − M) through a rational line ℓ.
#[derive(Clone, Debug)]
pub struct ConicFibration {
    pub surface: CubicSurface,
    pub axis: SurfaceLine,
}

/// The residual conic of a plane through the axis and its projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeukersConic {
    pub u: P1,
    pub plane: HomogForm,
    /// Columns of the plane coordinates: X ↦ Σ Xᵢ·basis[i].
    pub basis: Vec<Vec<BigInt>>,
    pub surface_conic: HomogForm,
    pub plane_conic: HomogForm,
    /// The line b·M − a·L cut by w = 0; `None` for the plane L = 0.
    pub infinity_line: Option<HomogForm>,
    pub degenerate: bool,
    /// A known rational point of the plane conic.
    pub base_point: Option<ProjPoint>,
}

impl ConicFibration {
    pub fn new(surface: CubicSurface, axis: SurfaceLine) -> Result<Self> {
        if !axis.is_rational() {
            return Err(Error::InvalidInput(
                "the axis of a conic fibration must be rational".into(),
            ));
        }
        if !axis.lies_on(&surface)? {
            return Err(Error::AmbientMismatch(format!(
                "{axis} is not on the surface"
            )));
        }
        Ok(ConicFibration { surface, axis })
    }

    pub fn plane(&self, u: &P1) -> HomogForm {
        let [l, wm] = self.axis.plane_forms().unwrap();
        let (a, b) = p1_rat(u);
        l.scale(&a).add(&wm.scale(&b)).primitive()
    }

    /// μ(p) for a surface point p; on the axis this is the tangent plane.
    pub fn mu_of_point(&self, p: &ProjPoint) -> Result<P1> {
        if !self.surface.contains(p)? {
            return Err(Error::NotOnCurve);
        }
        let [l, wm] = self.axis.plane_forms()?;
        let lv = evaluate(&l, p)?;
        let wv = evaluate(&wm, p)?;
        if !(lv.is_zero() && wv.is_zero()) {
            return Ok(p1_of(&wv, &-lv));
        }
        let grad: Vec<Rat> = self
            .surface
            .form()
            .gradient()
            .iter()
            .map(|g| evaluate(g, p))
            .collect::<Result<_>>()?;
        if grad.iter().all(|x| x.is_zero()) {
            return Err(Error::Singular(format!(
                "{p} is a singular point of the surface"
            )));
        }
        let b = grad[3].clone();
        let lc = l.coeffs();
        let i = (0..3).find(|&i| !lc[i].is_zero()).unwrap();
        // grad_i = a·Lᵢ − b·Mᵢ
        let mi = self.axis.mform.coeffs()[i].clone();
        let a = (&grad[i] + &b * &mi) / &lc[i];
        let plane = l.scale(&a).add(&wm.scale(&b));
        if !plane.proportional(&HomogForm::linear(&grad)) {
            return Err(Error::InvalidInput(
                "tangent plane does not contain the axis".into(),
            ));
        }
        Ok(p1_of(&a, &b))
    }

    pub fn fiber(&self, u: &P1) -> Result<BeukersConic> {
        let plane = self.plane(u);
        let basis = int_kernel(&[plane.int_coeffs()], 4);
        let subs: Vec<HomogForm> = (0..4)
            .map(|i| HomogForm::linear_int(&basis.iter().map(|b| b[i].clone()).collect::<Vec<_>>()))
            .collect();
        let [l4, wm4] = self.axis.plane_forms()?;
        let restricted = self.surface.form().substitute(&subs)?;
        let lam = {
            let a = l4.substitute(&subs)?;
            if a.is_zero() {
                wm4.substitute(&subs)?
            } else {
                a
            }
        };
        let surface_conic = restricted
            .div_exact(&lam)
            .ok_or_else(|| Error::InvalidInput("plane section does not contain the axis".into()))?
            .primitive();
        let (a, b) = p1_rat(u);
        let (plane_conic, infinity_line) = if b.is_zero() {
            (self.axis.flexline.pow(2), None)
        } else {
            let n = self.axis.mform.scale(&b).sub(&self.axis.flexline.scale(&a));
            let f = self.surface.base().form();
            let num = n.pow(3).sub(&f.scale(&(&b * &b * &b)));
            let c = num
                .div_exact(&self.axis.flexline)
                .expect("L divides the fiber numerator")
                .primitive();
            (c, Some(n.normalized()))
        };
        let degenerate = b.is_zero() || det(&surface_conic.quadratic_matrix()).is_zero();
        Ok(BeukersConic {
            u: u.clone(),
            plane,
            basis,
            surface_conic,
            plane_conic,
            infinity_line,
            degenerate,
            base_point: None,
        })
    }

    /// The fiber through a surface point, with the point's projection as
    /// base point.
    pub fn fiber_through(&self, p: &ProjPoint) -> Result<BeukersConic> {
        let u = self.mu_of_point(p)?;
        let mut c = self.fiber(&u)?;
        let q = project_rho(p)?;
        if !evaluate(&c.plane_conic, &q)?.is_zero() {
            return Err(Error::InvalidInput(format!(
                "{q} is not on the fiber conic"
            )));
        }
        c.base_point = Some(q);
        Ok(c)
    }
}

impl BeukersConic {
    /// The plane conic restricted to its line at infinity: a binary
    /// quadratic whose roots are the points of C ∩ D.
    pub fn infinity_form(&self) -> Result<(RationalParam, BinaryForm)> {
        let n = self.infinity_line.as_ref().ok_or_else(|| {
            Error::InvalidInput("degenerate fiber has no line at infinity".into())
        })?;
        let par = RationalParam::line_of_form(n)?;
        let b = par.compose(&self.plane_conic)?;
        Ok((par, b))
    }

    /// Squarefree structure of F along the conic, read through the
    /// parametrization from the base point.
    pub fn tangency_profile(&self, d: &PlaneCubic) -> Result<Vec<(BinaryForm, usize)>> {
        let p = self
            .base_point
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("fiber has no base point".into()))?;
        let phi = parametrize_conic(&self.plane_conic, p)?;
        phi.compose(d.form())?.squarefree()
    }

    /// Rational points of C ∩ D with their intersection multiplicities.
    pub fn rational_infinity_points(&self, d: &PlaneCubic) -> Result<Vec<(ProjPoint, usize)>> {
        let (par, b) = self.infinity_form()?;
        let mut out = Vec::new();
        for (r, _) in b.rational_roots()? {
            let (s, t) = p1_rat(&r);
            let q = par.point_at(&s, &t)?;
            let m = match &self.base_point {
                Some(p) => intersection_multiplicity(
                    d.form(),
                    &parametrize_conic(&self.plane_conic, p)?,
                    &q,
                )?,
                None => crate::projgeo::intersection_multiplicity_resultant(
                    d.form(),
                    &self.plane_conic,
                    &q,
                )?,
            };
            out.push((q, m));
        }
        Ok(out)
    }
}

/// Verdict on a second line relative to a conic fibration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinePosition {
    /// Skew to the axis: meets every fiber once.
    Section,
    /// Meets the axis off H.
    Coplanar(ProjPoint),
    /// Meets the axis on H.
    Meets(ProjPoint),
}

pub fn section_check(mu: &ConicFibration, other: &SurfaceLine) -> Result<LinePosition> {
    if !other.lies_on(&mu.surface)? {
        return Err(Error::AmbientMismatch(format!(
            "{other} is not on the surface"
        )));
    }
    let axis = &mu.axis;
    let same_flex = axis.flexline.proportional(&other.flexline);
    if same_flex {
        if other.twist == 0 {
            return Err(Error::InvalidInput(
                "a line is not a section of its own fibration".into(),
            ));
        }
        return Ok(LinePosition::Meets(axis.flex_point()?));
    }
    let q = meet_lines(&axis.flexline, &other.flexline)?;
    let m = evaluate(&axis.mform, &q)?;
    let m2 = evaluate(&other.mform, &q)?;
    let point = |w: Rat| -> Result<ProjPoint> {
        let mut c = q.as_rats();
        c.push(w);
        ProjPoint::new(&c)
    };
    if other.twist == 0 {
        if m != m2 {
            return Ok(LinePosition::Section);
        }
        let p = point(m.clone())?;
        return Ok(if m.is_zero() {
            LinePosition::Meets(p)
        } else {
            LinePosition::Coplanar(p)
        });
    }
    // w = M(q) against w = ζʲ·M'(q): equal only when both vanish.
    if m.is_zero() && m2.is_zero() {
        Ok(LinePosition::Meets(point(Rat::zero())?))
    } else {
        Ok(LinePosition::Section)
    }
}

/// ℙ³ → ℙ², dropping w.
pub fn project_rho(p: &ProjPoint) -> Result<ProjPoint> {
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch("ρ is defined on ℙ³".into()));
    }
    let c = p.coords();
    ProjPoint::from_big(&c[..3])
        .map_err(|_| Error::InvalidInput("ρ is undefined at [0:0:0:1]".into()))
}

/// ℙ² blown up at a smooth point P of D, with the pencil λ of lines
/// through P spanned by l1 and l2.
#[derive(Clone, Debug)]
pub struct BlowupSurface {
    pub d: PlaneCubic,
    pub p: ProjPoint,
    pub l1: HomogForm,
    pub l2: HomogForm,
}

/// A λ-fiber: the line through P, parametrized as s·P + t·V with (P, V) a
/// basis of its integer points, and F = t·g(s, t) on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaFiber {
    pub u: P1,
    pub line: HomogForm,
    pub v: Vec<BigInt>,
    pub residual: BinaryForm,
    /// The line is tangent to D at P.
    pub degenerate: bool,
}

impl BlowupSurface {
    pub fn new(d: PlaneCubic, p: ProjPoint) -> Result<Self> {
        if p.dim() != 2 {
            return Err(Error::DimensionMismatch(
                "blown-up point must lie in ℙ²".into(),
            ));
        }
        match d.multiplicity_at(&p)? {
            0 => return Err(Error::NotOnCurve),
            1 => {}
            _ => return Err(Error::Singular(format!("{p} is a singular point of D"))),
        }
        let k = int_kernel(&[p.coords().to_vec()], 3);
        let l1 = HomogForm::linear_int(&k[0]);
        let l2 = HomogForm::linear_int(&k[1]);
        Ok(BlowupSurface { d, p, l1, l2 })
    }

    pub fn pencil_line(&self, u: &P1) -> HomogForm {
        let (a, b) = p1_rat(u);
        self.l1.scale(&a).add(&self.l2.scale(&b)).primitive()
    }

    pub fn lambda_of_point(&self, q: &ProjPoint) -> Result<P1> {
        if q == &self.p {
            return Err(Error::InvalidInput(
                "λ is undefined at the blown-up point".into(),
            ));
        }
        Ok(p1_of(&evaluate(&self.l2, q)?, &-evaluate(&self.l1, q)?))
    }

    pub fn tangent_parameter(&self) -> Result<P1> {
        let t = self.d.tangent_line(&self.p)?;
        let m = vec![
            self.l1.coeffs().to_vec(),
            self.l2.coeffs().to_vec(),
            t.coeffs().to_vec(),
        ];
        // t = a·l1 + b·l2; solve on two independent coordinates
        for i in 0..3 {
            for j in i + 1..3 {
                let dd = &m[0][i] * &m[1][j] - &m[0][j] * &m[1][i];
                if dd.is_zero() {
                    continue;
                }
                let a = (&m[2][i] * &m[1][j] - &m[2][j] * &m[1][i]) / &dd;
                let b = (&m[0][i] * &m[2][j] - &m[0][j] * &m[2][i]) / &dd;
                return Ok(p1_of(&a, &b));
            }
        }
        unreachable!("l1 and l2 are independent")
    }

    pub fn lambda_fiber(&self, u: &P1) -> Result<LambdaFiber> {
        let line = self.pencil_line(u);
        let basis = int_kernel(&[line.int_coeffs()], 3);
        let v = complete_basis(self.p.coords(), &basis).ok_or_else(|| {
            Error::InvalidInput("blown-up point is not primitive on its line".into())
        })?;
        let pr: Vec<Rat> = self.p.as_rats();
        let comps: Vec<BinaryForm> = (0..3)
            .map(|i| BinaryForm::new(vec![pr[i].clone(), Rat::from_integer(v[i].clone())]))
            .collect();
        let cubic = RationalParam::new(comps)?.compose(self.d.form())?;
        let t = BinaryForm::from_ints(&[0, 1]);
        let residual = cubic.div_exact(&t).expect("P lies on D");
        let degenerate = residual.coeffs[0].is_zero();
        Ok(LambdaFiber {
            u: u.clone(),
            line,
            v,
            residual,
            degenerate,
        })
    }
}

impl LambdaFiber {
    /// Point s·P + t·V.
    pub fn point(&self, p: &ProjPoint, s: &BigInt, t: &BigInt) -> Result<ProjPoint> {
        let c: Vec<BigInt> = p
            .coords()
            .iter()
            .zip(&self.v)
            .map(|(a, b)| s * a + t * b)
            .collect();
        ProjPoint::from_big(&c)
    }
}

/// One point of tangency of a line through P with a conic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPoint {
    pub coords: Vec<QuadElem>,
    pub rational: Option<ProjPoint>,
    pub on_d: bool,
}

/// Both tangency points; `radicand` is 1 when they are rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPair {
    pub radicand: BigInt,
    pub points: Vec<BranchPoint>,
}

pub fn evaluate_quad(f: &HomogForm, x: &[QuadElem]) -> QuadElem {
    let d = x
        .iter()
        .find(|c| !c.is_rational())
        .map(|c| c.d().clone())
        .unwrap_or_else(BigInt::one);
    let mut acc = QuadElem::from_rat(Rat::zero(), &d);
    for (e, c) in f.terms() {
        let mut t = QuadElem::from_rat(c, &d);
        for (xi, &k) in x.iter().zip(&e) {
            t = &t * &xi.pow(k);
        }
        acc = &acc + &t;
    }
    acc
}

/// Tangency points of the two tangent lines from P to a smooth conic.
pub fn branch_points(d: &PlaneCubic, p: &ProjPoint, conic: &HomogForm) -> Result<BranchPair> {
    let a = conic.quadratic_matrix();
    if det(&a).is_zero() {
        return Err(Error::Singular(format!("{conic} is a degenerate conic")));
    }
    if evaluate(conic, p)?.is_zero() {
        return Err(Error::InvalidInput(format!("{p} lies on the conic")));
    }
    let pr = p.as_rats();
    let polar: Vec<Rat> = (0..3)
        .map(|i| (0..3).map(|j| &a[i][j] * &pr[j]).sum())
        .collect();
    let par = RationalParam::line_of_form(&HomogForm::linear(&polar))?;
    let q = par.compose(conic)?;
    let disc = q.discriminant();
    let p0 = par.eval(&Rat::one(), &Rat::zero());
    let p1 = par.eval(&Rat::zero(), &Rat::one());
    if crate::arith::rat_sqrt(&disc).is_some() {
        let one = BigInt::one();
        let points = q
            .rational_roots()?
            .iter()
            .map(|(r, _)| {
                let (s, t) = p1_rat(r);
                let pt = par.point_at(&s, &t)?;
                let on_d = evaluate(d.form(), &pt)?.is_zero();
                Ok(BranchPoint {
                    coords: pt
                        .as_rats()
                        .into_iter()
                        .map(|c| QuadElem::from_rat(c, &one))
                        .collect(),
                    rational: Some(pt),
                    on_d,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(BranchPair {
            radicand: one,
            points,
        });
    }
    // roots s/t = (−b ± √disc)/(2a) with t = 1; a ≠ 0 since disc is not a square
    let (f, r) = squarefree_decompose(&(disc.numer() * disc.denom()));
    let scale = Rat::from_integer(f) / Rat::from_integer(disc.denom().clone());
    let (qa, qb) = (&q.coeffs[0], &q.coeffs[1]);
    let two_a = qa * Rat::from_integer(2.into());
    let mut points = Vec::new();
    for sign in [1i64, -1] {
        let s = QuadElem::new(
            -qb / &two_a,
            Rat::from_integer(sign.into()) * &scale / &two_a,
            r.clone(),
        )?;
        let coords: Vec<QuadElem> = (0..3)
            .map(|i| {
                &(&s * &QuadElem::from_rat(p0[i].clone(), &r))
                    + &QuadElem::from_rat(p1[i].clone(), &r)
            })
            .collect();
        let on_d = evaluate_quad(d.form(), &coords).is_zero();
        points.push(BranchPoint {
            coords,
            rational: None,
            on_d,
        });
    }
    Ok(BranchPair {
        radicand: r,
        points,
    })
}

/// Branch points of λ restricted to a fiber conic.
pub fn lambda_branch_on_conic(x: &BlowupSurface, c: &BeukersConic) -> Result<BranchPair> {
    if c.degenerate {
        return Err(Error::Singular("degenerate fiber".into()));
    }
    branch_points(&x.d, &x.p, &c.plane_conic)
}

/// The pencil a·L² + b·C of conics osculating C at Q.
pub fn osculating_pencil(c: &HomogForm, l: &HomogForm, q: &ProjPoint) -> Result<CurvePencil> {
    if c.degree() != 2 || l.degree() != 1 || c.nvars() != 3 || l.nvars() != 3 {
        return Err(Error::DimensionMismatch(
            "a plane conic and a plane line are needed".into(),
        ));
    }
    if !evaluate(c, q)?.is_zero() || !evaluate(l, q)?.is_zero() {
        return Err(Error::NotOnCurve);
    }
    let m = intersection_multiplicity(c, &RationalParam::line_of_form(l)?, q)?;
    if m != 2 {
        return Err(Error::InvalidInput(format!(
            "{l} is not tangent to {c} at {q}"
        )));
    }
    CurvePencil::new(l.pow(2), c.clone())
}

pub fn collinear(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    det(&[a.as_rats(), b.as_rats(), c.as_rats()]).is_zero()
}

/// Conics through four points in general position, spanned by the line
/// pairs p₁p₂ ∪ p₃p₄ and p₁p₃ ∪ p₂p₄.
pub fn conics_through_four_points(p: &[ProjPoint; 4]) -> Result<CurvePencil> {
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return Err(Error::InvalidInput("repeated point".into()));
            }
            for k in j + 1..4 {
                if collinear(&p[i], &p[j], &p[k]) {
                    return Err(Error::InvalidInput(format!(
                        "{}, {}, {} are collinear",
                        p[i], p[j], p[k]
                    )));
                }
            }
        }
    }
    let g = line_through_points(&p[0], &p[1])?.mul(&line_through_points(&p[2], &p[3])?);
    let h = line_through_points(&p[0], &p[2])?.mul(&line_through_points(&p[1], &p[3])?);
    CurvePencil::new(g, h)
}

/// Primitive integer coordinates of a point of a rational line by parameter.
pub fn primitive_point(v: &[BigInt]) -> Vec<BigInt> {
    let mut c = primitive_int(v);
    if c.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        c.iter_mut().for_each(|x| *x = -x.clone());
    }
    c
}

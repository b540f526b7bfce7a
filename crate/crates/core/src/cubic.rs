//! Plane cubics: factorization into rational lines, singular points,
//! classification, Hessian, rational flexes and the flex decomposition
//! c·F = L·Q + M³.

use crate::arith::{rat_sqrt, Rat};
use crate::error::{Error, Result};
use crate::projgeo::linalg::{det, rank};
use crate::projgeo::{
    common_rational_zeros, evaluate, line_through_points, p1_rat, BinaryForm, HomogForm, ProjPoint,
    RationalParam,
};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A reduced plane cubic with coprime integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCubic {
    f: HomogForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CubicClass {
    Smooth,
    Nodal,
    Cuspidal,
    ConicPlusChord,
    ConicPlusTangent,
    ThreeLinesGeneral,
    ThreeConcurrentLines,
    LinePlusConicIrrationalConfig,
    NotOverQ,
}

impl CubicClass {
    /// Irreducible over the algebraic closure.
    pub fn is_irreducible(self) -> bool {
        matches!(
            self,
            CubicClass::Smooth | CubicClass::Nodal | CubicClass::Cuspidal
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            CubicClass::Smooth => "Smooth",
            CubicClass::Nodal => "Nodal",
            CubicClass::Cuspidal => "Cuspidal",
            CubicClass::ConicPlusChord => "ConicPlusChord",
            CubicClass::ConicPlusTangent => "ConicPlusTangent",
            CubicClass::ThreeLinesGeneral => "ThreeLinesGeneral",
            CubicClass::ThreeConcurrentLines => "ThreeConcurrentLines",
            CubicClass::LinePlusConicIrrationalConfig => "LinePlusConicIrrationalConfig",
            CubicClass::NotOverQ => "NotOverQ",
        }
    }
}

impl fmt::Display for CubicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularKind {
    Node,
    Cusp,
    /// All second partials vanish: three concurrent lines.
    Triple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub point: ProjPoint,
    pub multiplicity: u8,
    pub kind: SingularKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flex {
    pub point: ProjPoint,
    pub line: HomogForm,
    pub smooth: bool,
}

/// c·F = L·Q + M³.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlexDecomposition {
    pub l: HomogForm,
    pub m: HomogForm,
    pub q: HomogForm,
    pub c: Rat,
}

/// Rational linear factors and the remaining cofactor.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub lines: Vec<HomogForm>,
    pub rest: HomogForm,
}

impl PlaneCubic {
    pub fn new(f: HomogForm) -> Result<Self> {
        if f.nvars() != 3 || f.degree() != 3 {
            return Err(Error::DimensionMismatch(format!(
                "plane cubic expected, got degree {} in {} variables",
                f.degree(),
                f.nvars()
            )));
        }
        if f.is_zero() {
            return Err(Error::ZeroInput("PlaneCubic"));
        }
        let f = f.primitive();
        let fac = factor(&f);
        for i in 0..fac.lines.len() {
            for j in i + 1..fac.lines.len() {
                if fac.lines[i].proportional(&fac.lines[j]) {
                    return Err(Error::NonReduced);
                }
            }
        }
        Ok(PlaneCubic { f })
    }

    /// Coefficient list or expression text.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let f = if t.chars().any(|c| c.is_ascii_alphabetic()) {
            HomogForm::parse_expr(t, 3)?
        } else {
            let f = HomogForm::parse_coeff_list(t)?;
            if f.degree() != 3 || f.nvars() != 3 {
                return Err(Error::Parse("expected a cubic in 3 variables".into()));
            }
            f
        };
        PlaneCubic::new(f)
    }

    pub fn form(&self) -> &HomogForm {
        &self.f
    }

    pub fn eval(&self, p: &ProjPoint) -> Result<Rat> {
        evaluate(&self.f, p)
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool> {
        Ok(self.eval(p)?.is_zero())
    }

    /// Multiplicity of the curve at p (0 when p is off the curve).
    pub fn multiplicity_at(&self, p: &ProjPoint) -> Result<u8> {
        if !self.contains(p)? {
            return Ok(0);
        }
        let grad = self.f.gradient();
        let mut all_zero = true;
        for g in &grad {
            if !evaluate(g, p)?.is_zero() {
                all_zero = false;
            }
        }
        if !all_zero {
            return Ok(1);
        }
        Ok(
            if hessian_matrix_at(&self.f, p)?
                .iter()
                .flatten()
                .all(|x| x.is_zero())
            {
                3
            } else {
                2
            },
        )
    }

    /// Tangent line at a smooth point.
    pub fn tangent_line(&self, p: &ProjPoint) -> Result<HomogForm> {
        if !self.contains(p)? {
            return Err(Error::NotOnCurve);
        }
        let g: Vec<Rat> = self
            .f
            .gradient()
            .iter()
            .map(|d| evaluate(d, p))
            .collect::<Result<_>>()?;
        if g.iter().all(|x| x.is_zero()) {
            return Err(Error::Singular(format!("{p} is a singular point")));
        }
        Ok(HomogForm::linear(&g).normalized())
    }

    pub fn factorization(&self) -> Factorization {
        factor(&self.f)
    }
}

impl fmt::Display for PlaneCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.f)
    }
}

fn test_lines() -> Vec<HomogForm> {
    ["x", "y", "z", "x + y + z"]
        .iter()
        .map(|s| HomogForm::parse_expr(s, 3).unwrap())
        .collect()
}

/// One rational linear factor of a ternary form, if any.
fn find_linear_factor(g: &HomogForm) -> Option<HomogForm> {
    match g.degree() {
        0 => return None,
        1 => return Some(g.clone()),
        _ => {}
    }
    let mut roots: Vec<Vec<ProjPoint>> = Vec::new();
    for l in test_lines() {
        if g.div_exact(&l).is_some() {
            return Some(l);
        }
        let par = RationalParam::line_of_form(&l).ok()?;
        let b = par.compose(g).ok()?;
        let pts = b
            .rational_roots()
            .ok()?
            .iter()
            .filter_map(|(r, _)| {
                let (s, t) = p1_rat(r);
                par.point_at(&s, &t).ok()
            })
            .collect();
        roots.push(pts);
    }
    // A factor that is not a test line meets them in rational points, and
    // since no three test lines are concurrent two of those points differ.
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            for r in &roots[i] {
                for q in &roots[j] {
                    if r == q {
                        continue;
                    }
                    let cand = line_through_points(r, q).ok()?;
                    if g.div_exact(&cand).is_some() {
                        return Some(cand);
                    }
                }
            }
        }
    }
    None
}

/// Splits off all rational linear factors (with repetition).
pub fn factor(f: &HomogForm) -> Factorization {
    let mut lines = Vec::new();
    let mut rest = f.clone();
    while let Some(l) = find_linear_factor(&rest) {
        let l = l.normalized();
        rest = rest.div_exact(&l).expect("factor divides");
        lines.push(l);
        if rest.degree() == 0 {
            break;
        }
    }
    Factorization { lines, rest }
}

fn hessian_matrix_forms(f: &HomogForm) -> Vec<Vec<HomogForm>> {
    let g = f.gradient();
    g.iter()
        .map(|gi| (0..3).map(|j| gi.partial(j)).collect())
        .collect()
}

pub fn hessian_matrix_at(f: &HomogForm, p: &ProjPoint) -> Result<Vec<Vec<Rat>>> {
    hessian_matrix_forms(f)
        .iter()
        .map(|row| row.iter().map(|h| evaluate(h, p)).collect())
        .collect()
}

/// det of the matrix of second partials.
pub fn hessian_form(f: &HomogForm) -> HomogForm {
    let m = hessian_matrix_forms(f);
    let minor =
        |a: usize, b: usize, c: usize, d: usize| m[1][a].mul(&m[2][b]).sub(&m[1][c].mul(&m[2][d]));
    let t0 = m[0][0].mul(&minor(1, 2, 2, 1));
    let t1 = m[0][1].mul(&minor(0, 2, 2, 0));
    let t2 = m[0][2].mul(&minor(0, 1, 1, 0));
    t0.sub(&t1).add(&t2)
}

pub fn hessian(d: &PlaneCubic) -> HomogForm {
    hessian_form(d.form())
}

/// Rational singular points with their multiplicity and type.
pub fn singular_points(d: &PlaneCubic) -> Result<Vec<SingularPoint>> {
    let pts = common_rational_zeros(&d.form().gradient())?;
    let mut out = Vec::new();
    for p in pts {
        let h = hessian_matrix_at(d.form(), &p)?;
        let (multiplicity, kind) = match rank(&h) {
            0 => (3, SingularKind::Triple),
            1 => (2, SingularKind::Cusp),
            _ => (2, SingularKind::Node),
        };
        out.push(SingularPoint {
            point: p,
            multiplicity,
            kind,
        });
    }
    Ok(out)
}

pub fn classify(d: &PlaneCubic) -> Result<CubicClass> {
    let fac = d.factorization();
    match fac.lines.len() {
        3 => {
            let rows: Vec<Vec<Rat>> = fac.lines.iter().map(|l| l.coeffs().to_vec()).collect();
            Ok(if det(&rows).is_zero() {
                CubicClass::ThreeConcurrentLines
            } else {
                CubicClass::ThreeLinesGeneral
            })
        }
        1 => {
            let conic = &fac.rest;
            if det(&conic.quadratic_matrix()).is_zero() {
                // a pair of conjugate lines
                return Ok(CubicClass::NotOverQ);
            }
            let par = RationalParam::line_of_form(&fac.lines[0])?;
            let disc = par.compose(conic)?.discriminant();
            Ok(if disc.is_zero() {
                CubicClass::ConicPlusTangent
            } else if rat_sqrt(&disc).is_some() {
                CubicClass::ConicPlusChord
            } else {
                CubicClass::LinePlusConicIrrationalConfig
            })
        }
        0 => {
            let h = hessian(d);
            if h.is_zero() || h.proportional(d.form()) {
                return Ok(CubicClass::NotOverQ);
            }
            let sing = singular_points(d)?;
            Ok(match sing.first() {
                None => CubicClass::Smooth,
                Some(s) if s.kind == SingularKind::Cusp => CubicClass::Cuspidal,
                Some(_) => CubicClass::Nodal,
            })
        }
        _ => unreachable!("a cubic with two rational linear factors has three"),
    }
}

/// Rational lines through a singular point p in the tangent cone.
pub fn principal_tangents(d: &PlaneCubic, p: &ProjPoint) -> Result<Vec<HomogForm>> {
    let h = hessian_matrix_at(d.form(), p)?;
    let mut cone = HomogForm::zero(3, 2);
    let two = Rat::from_integer(2.into());
    for i in 0..3 {
        for j in i..3 {
            let mut e = vec![0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let c = if i == j {
                h[i][i].clone()
            } else {
                &h[i][j] * &two
            };
            cone = cone.add(&HomogForm::monomial(&e, c));
        }
    }
    if cone.is_zero() {
        return Ok(vec![]);
    }
    let probe = test_lines()
        .into_iter()
        .find(|l| !evaluate(l, p).unwrap().is_zero())
        .expect("some test line misses p");
    let par = RationalParam::line_of_form(&probe)?;
    let b = par.compose(&cone)?;
    let mut out = Vec::new();
    for (r, _) in b.rational_roots()? {
        let (s, t) = p1_rat(&r);
        let q = par.point_at(&s, &t)?;
        out.push(line_through_points(p, &q)?);
    }
    Ok(out)
}

/// All rational flexes of an absolutely irreducible cubic. At a rational
/// singular point every rational principal tangent is reported.
pub fn rational_flexes(d: &PlaneCubic) -> Result<Vec<Flex>> {
    let class = classify(d)?;
    if !class.is_irreducible() {
        return Err(Error::Reducible(format!("{d} is {class}")));
    }
    let h = hessian(d);
    let pts = common_rational_zeros(&[d.form().clone(), h])?;
    let mut out = Vec::new();
    for p in pts {
        match d.tangent_line(&p) {
            Ok(line) => out.push(Flex {
                point: p,
                line,
                smooth: true,
            }),
            Err(Error::Singular(_)) => {
                for line in principal_tangents(d, &p)? {
                    out.push(Flex {
                        point: p.clone(),
                        line,
                        smooth: false,
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// c·F = L·Q + M³ for a flex line L.
///
/// M is primitive, has no term in the last variable occurring in L, and its
/// sign makes c positive.
pub fn flex_decomposition(d: &PlaneCubic, l: &HomogForm) -> Result<FlexDecomposition> {
    if l.nvars() != 3 || l.degree() != 1 || l.is_zero() {
        return Err(Error::InvalidInput(format!("{l} is not a plane line")));
    }
    let par = RationalParam::line_of_form(l)?;
    let b = par.compose(d.form())?;
    if b.is_zero() {
        return Err(Error::NotFlexLine(format!(
            "{l} is a component of the cubic"
        )));
    }
    let roots = b.rational_roots()?;
    if roots.len() != 1 || roots[0].1 != 3 {
        return Err(Error::NotFlexLine(format!(
            "restriction of the cubic to {l} is {b}, not a cube"
        )));
    }
    let (s0, t0) = p1_rat(&roots[0].0);
    let pivot = (0..3).rev().find(|&i| !l.coeffs()[i].is_zero()).unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let p1 = par.eval(&Rat::one(), &Rat::zero());
    let p2 = par.eval(&Rat::zero(), &Rat::one());
    let (i, j) = (others[0], others[1]);
    let a = [
        [p1[i].clone(), p1[j].clone()],
        [p2[i].clone(), p2[j].clone()],
    ];
    let det2 = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    // M(P1) = t0, M(P2) = −s0: M restricts to the linear form vanishing at the root.
    let (r1, r2) = (t0.clone(), -s0.clone());
    let mi = (&r1 * &a[1][1] - &r2 * &a[0][1]) / &det2;
    let mj = (&a[0][0] * &r2 - &a[1][0] * &r1) / &det2;
    let mut mc = vec![Rat::zero(); 3];
    mc[i] = mi;
    mc[j] = mj;
    let mut m = HomogForm::linear(&mc).primitive();
    let mb = par.compose(&m)?.pow(3);
    let k = b.coeffs.iter().position(|x| !x.is_zero()).unwrap();
    let mut c = &mb.coeffs[k] / &b.coeffs[k];
    if c.is_negative() {
        m = m.neg();
        c = -c;
    }
    let lhs = d.form().scale(&c).sub(&m.pow(3));
    let q = lhs
        .div_exact(l)
        .ok_or_else(|| Error::NotFlexLine(format!("{l} does not divide c·F − M³")))?;
    Ok(FlexDecomposition {
        l: l.clone(),
        m,
        q,
        c,
    })
}

impl FlexDecomposition {
    /// L·Q + M³ − c·F, zero for a valid decomposition.
    pub fn residual(&self, f: &HomogForm) -> HomogForm {
        self.l
            .mul(&self.q)
            .add(&self.m.pow(3))
            .sub(&f.scale(&self.c))
    }
}

/// The binary form F ∘ L for a plane line.
pub fn restriction(d: &PlaneCubic, l: &HomogForm) -> Result<BinaryForm> {
    RationalParam::line_of_form(l)?.compose(d.form())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn cubic(s: &str) -> PlaneCubic {
        PlaneCubic::parse(s).unwrap()
    }

    fn form(s: &str) -> HomogForm {
        HomogForm::parse_expr(s, 3).unwrap()
    }

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(c).unwrap()
    }

    #[test]
    fn singular_point_examples() {
        assert!(singular_points(&cubic("z*y^2 - x^3 - z^3"))
            .unwrap()
            .is_empty());
        let c = singular_points(&cubic("z*y^2 - x^3")).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].point, pt(&[0, 0, 1]));
        assert_eq!(c[0].kind, SingularKind::Cusp);
        let t: Vec<ProjPoint> = singular_points(&cubic("x*y*z"))
            .unwrap()
            .into_iter()
            .map(|s| s.point)
            .collect();
        assert_eq!(t, vec![pt(&[0, 0, 1]), pt(&[0, 1, 0]), pt(&[1, 0, 0])]);
        let n = singular_points(&cubic("y^2*z - x^3 - x^2*z")).unwrap();
        assert_eq!(n[0].kind, SingularKind::Node);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify(&cubic("x*y*z")).unwrap(),
            CubicClass::ThreeLinesGeneral
        );
        assert_eq!(
            classify(&cubic("x*y*(x + y)")).unwrap(),
            CubicClass::ThreeConcurrentLines
        );
        assert_eq!(
            classify(&cubic("z*y^2 - x^3 - z^3")).unwrap(),
            CubicClass::Smooth
        );
        assert_eq!(
            classify(&cubic("z*y^2 - x^3")).unwrap(),
            CubicClass::Cuspidal
        );
        assert_eq!(
            classify(&cubic("y^2*z - x^3 - x^2*z")).unwrap(),
            CubicClass::Nodal
        );
        // conic x z − y² with tangent z, chord x − z, and a line through conjugate points
        assert_eq!(
            classify(&cubic("z*(x*z - y^2)")).unwrap(),
            CubicClass::ConicPlusTangent
        );
        assert_eq!(
            classify(&cubic("(x - z)*(x*z - y^2)")).unwrap(),
            CubicClass::ConicPlusChord
        );
        assert_eq!(
            classify(&cubic("(x + z)*(x*z - y^2)")).unwrap(),
            CubicClass::LinePlusConicIrrationalConfig
        );
        assert_eq!(classify(&cubic("x^3 + y^3")).unwrap(), CubicClass::NotOverQ);
        assert_eq!(
            classify(&cubic("x*(y^2 - 2*z^2)")).unwrap(),
            CubicClass::NotOverQ
        );
        assert_eq!(PlaneCubic::parse("x^2*y").unwrap_err(), Error::NonReduced);
    }

    #[test]
    fn hessian_examples() {
        assert_eq!(hessian(&cubic("x*y*z")), form("2*x*y*z"));
        assert!(hessian_form(&form("x^3")).is_zero());
        let h = hessian(&cubic("z*y^2 - x^3 - z^3"));
        assert_eq!(evaluate(&h, &pt(&[0, 1, 0])).unwrap(), rat(0));
    }

    #[test]
    fn flexes_of_the_worked_cubic() {
        let d = cubic("z*y^2 - x^3 - z^3");
        let fl = rational_flexes(&d).unwrap();
        let want = [
            ([0, 1, 0], "z"),
            ([0, 1, 1], "z - y"),
            ([0, -1, 1], "z + y"),
        ];
        assert_eq!(fl.len(), 3);
        for (p, l) in want {
            let f = fl.iter().find(|f| f.point == pt(&p)).expect("flex present");
            assert!(f.line.proportional(&form(l)));
            assert!(f.smooth);
        }
        let cusp = rational_flexes(&cubic("z*y^2 - x^3")).unwrap();
        assert!(cusp
            .iter()
            .any(|f| f.point == pt(&[0, 1, 0]) && f.line.proportional(&form("z")) && f.smooth));
        assert!(rational_flexes(&cubic("x^3 + 2*y^3 + 4*z^3"))
            .unwrap()
            .is_empty());
        assert!(rational_flexes(&cubic("x*y*z")).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let d = cubic("z*y^2 - x^3 - z^3");
        let a = flex_decomposition(&d, &form("z")).unwrap();
        assert_eq!(
            (a.m.clone(), a.q.clone(), a.c.clone()),
            (form("-x"), form("y^2 - z^2"), rat(1))
        );
        let b = flex_decomposition(&d, &form("z - y")).unwrap();
        assert_eq!((b.m.clone(), b.q.clone()), (form("-x"), form("-z^2 - y*z")));
        assert!(b.residual(d.form()).is_zero());
        assert!(matches!(
            flex_decomposition(&d, &form("x")),
            Err(Error::NotFlexLine(_))
        ));
    }
}

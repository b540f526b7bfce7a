//! Projective geometry over ℚ: forms, points, parametrizations, resultants
//! and intersection multiplicities.

mod binary;
pub mod form;
pub mod linalg;
mod param;
mod point;
mod upoly;

pub use binary::{p1_of, resultant, BinaryForm, P1};
pub use form::{monomial_count, monomial_index, monomials, parse_rat, HomogForm};
pub use param::{p1_infinity, p1_rat, RationalParam};
pub use point::ProjPoint;
pub use upoly::UPoly;

use crate::arith::Rat;
use crate::error::{Error, Result};
use linalg::{det, inverse, mat_vec};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// F at the primitive coordinates of p.
pub fn evaluate(f: &HomogForm, p: &ProjPoint) -> Result<Rat> {
    f.eval_int(p.coords())
}

/// F ∘ L for a parametrized plane line.
pub fn restrict_to_line(f: &HomogForm, l: &RationalParam) -> Result<BinaryForm> {
    if f.nvars() != 3 || l.ambient_vars() != 3 || l.degree() != 1 {
        return Err(Error::DimensionMismatch(
            "restrict_to_line needs a plane form and a plane line".into(),
        ));
    }
    l.compose(f)
}

/// Rational roots of a binary form, with multiplicities.
pub fn rational_roots(f: &BinaryForm) -> Result<Vec<(P1, usize)>> {
    f.rational_roots()
}

/// Order of vanishing of F ∘ C at the parameter of p.
pub fn intersection_multiplicity(f: &HomogForm, c: &RationalParam, p: &ProjPoint) -> Result<usize> {
    let comp = c.compose(f)?;
    if comp.is_zero() {
        return Err(Error::ComponentOverlap);
    }
    let params = c.parameters_of(p)?;
    if params.is_empty() {
        return Err(Error::NotOnCurve);
    }
    Ok(params
        .iter()
        .map(|q| comp.vanishing_order(&p1_rat(q)).unwrap_or(0))
        .sum())
}

/// Candidate projection centres, tried in order.
const CENTRES: [[i64; 3]; 16] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 1],
    [1, 2, 3],
    [3, 1, 2],
    [2, 3, 1],
    [1, -1, 2],
    [2, -3, 5],
    [5, 2, -7],
    [1, 4, -3],
    [7, -5, 3],
    [3, 7, 11],
    [11, -4, 9],
    [13, 6, -5],
    [4, -9, 17],
];

/// An invertible integer matrix whose first column is c.
fn frame_with_first_column(c: &[BigInt]) -> Vec<Vec<Rat>> {
    let cr: Vec<Rat> = c.iter().map(|x| Rat::from_integer(x.clone())).collect();
    for (j, k) in [(1usize, 2usize), (0, 2), (0, 1)] {
        let mut m = vec![vec![Rat::zero(); 3]; 3];
        for i in 0..3 {
            m[i][0] = cr[i].clone();
        }
        m[j][1] = Rat::one();
        m[k][2] = Rat::one();
        if !det(&m).is_zero() {
            return m;
        }
    }
    unreachable!("nonzero centre");
}

/// Coefficients of x^k (as polynomials in y with z = 1), k = deg..0.
fn x_coefficients(f: &HomogForm) -> Vec<UPoly> {
    let d = f.degree();
    let mut rows = vec![vec![Rat::zero(); d + 1]; d + 1];
    for (e, c) in f.terms() {
        rows[d - e[0] as usize][e[1] as usize] += c;
    }
    rows.into_iter().map(UPoly::new).collect()
}

fn upoly_det(m: &[Vec<UPoly>]) -> UPoly {
    let n = m.len();
    if n == 0 {
        return UPoly::constant(Rat::one());
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = UPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<UPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&upoly_det(&minor));
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// Res_x(F, G) as a binary form in (y, z) of degree deg F · deg G.
/// Meaningful when F(1,0,0) and G(1,0,0) are not both zero.
pub fn resultant_x(f: &HomogForm, g: &HomogForm) -> BinaryForm {
    let (m, n) = (f.degree(), g.degree());
    let a = x_coefficients(f);
    let b = x_coefficients(g);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![UPoly::zero(); size];
        for (j, c) in a.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![UPoly::zero(); size];
        for (j, c) in b.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    let r = if size == 0 {
        UPoly::constant(Rat::one())
    } else {
        upoly_det(&rows)
    };
    let deg = m * n;
    let coeffs = (0..=deg)
        .map(|i| r.c.get(deg - i).cloned().unwrap_or_else(Rat::zero))
        .collect();
    BinaryForm::new(coeffs)
}

/// The polynomial f(x, y0, z0) in x.
fn on_vertical(f: &HomogForm, y0: &Rat, z0: &Rat) -> UPoly {
    let mut c = vec![Rat::zero(); f.degree() + 1];
    for (e, k) in f.terms() {
        c[e[0] as usize] += k
            * num_traits::pow(y0.clone(), e[1] as usize)
            * num_traits::pow(z0.clone(), e[2] as usize);
    }
    UPoly::new(c)
}

/// Rational common zeros of ternary forms of equal degree with finitely many
/// common zeros over the algebraic closure.
pub fn common_rational_zeros(forms: &[HomogForm]) -> Result<Vec<ProjPoint>> {
    let forms: Vec<&HomogForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    if forms.is_empty() {
        return Err(Error::ZeroInput("common_rational_zeros"));
    }
    if forms
        .iter()
        .any(|f| f.nvars() != 3 || f.degree() != forms[0].degree())
    {
        return Err(Error::DimensionMismatch(
            "common zeros need ternary forms of one degree".into(),
        ));
    }
    if forms.len() == 1 {
        return Err(Error::InvalidInput(
            "a single curve has infinitely many zeros".into(),
        ));
    }
    let g1 = forms[0].clone();
    for mult in 1..=6i64 {
        let mut g2 = HomogForm::zero(3, g1.degree());
        let mut k = Rat::one();
        for f in &forms[1..] {
            g2 = g2.add(&f.scale(&k));
            k *= Rat::from_integer(BigInt::from(mult + 1));
        }
        for c in CENTRES.iter() {
            let cb: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
            if g1.eval_int(&cb)?.is_zero() || g2.eval_int(&cb)?.is_zero() {
                continue;
            }
            let m = frame_with_first_column(&cb);
            let t: Vec<HomogForm> = forms
                .iter()
                .map(|f| f.transform(&m))
                .collect::<Result<_>>()?;
            let r = resultant_x(&g1.transform(&m)?, &g2.transform(&m)?);
            if r.is_zero() {
                continue;
            }
            let mut out = Vec::new();
            for ((y0, z0), _) in r.rational_roots()? {
                let (y0, z0) = (Rat::from_integer(y0), Rat::from_integer(z0));
                let mut g = UPoly::zero();
                for f in &t {
                    g = g.gcd(&on_vertical(f, &y0, &z0));
                }
                if g.is_zero() {
                    continue;
                }
                for (x0, _) in g.rational_roots() {
                    let img = mat_vec(&m, &[x0, y0.clone(), z0.clone()]);
                    out.push(ProjPoint::new(&img)?);
                }
            }
            out.sort();
            out.dedup();
            return Ok(out);
        }
    }
    Err(Error::InvalidInput("forms share a common component".into()))
}

/// Intersection multiplicity of two plane curves at p by projecting from a
/// centre and reading the multiplicity of p's image among the roots of the
/// resultant. Used as an independent check of the parametric route.
pub fn intersection_multiplicity_resultant(
    f: &HomogForm,
    g: &HomogForm,
    p: &ProjPoint,
) -> Result<usize> {
    if f.nvars() != 3 || g.nvars() != 3 || p.dim() != 2 {
        return Err(Error::DimensionMismatch("plane curves expected".into()));
    }
    if !evaluate(f, p)?.is_zero() || !evaluate(g, p)?.is_zero() {
        return Ok(0);
    }
    for c in CENTRES.iter() {
        let cb: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let cp = ProjPoint::from_big(&cb)?;
        if &cp == p || f.eval_int(&cb)?.is_zero() || g.eval_int(&cb)?.is_zero() {
            continue;
        }
        // the line through p and c must meet f ∩ g only at p
        let line = RationalParam::line_through(p, &cp)?;
        let fr = line.compose(f)?.dehomogenize_s();
        let gr = line.compose(g)?.dehomogenize_s();
        if fr.is_zero() || gr.is_zero() {
            continue;
        }
        let h = fr.gcd(&gr);
        if h.c.iter().rev().skip(1).any(|x| !x.is_zero()) {
            continue;
        }
        let m = frame_with_first_column(&cb);
        let r = resultant_x(&f.transform(&m)?, &g.transform(&m)?);
        if r.is_zero() {
            return Err(Error::ComponentOverlap);
        }
        let minv = inverse(&m).expect("invertible frame");
        let q = mat_vec(&minv, &p.as_rats());
        return r
            .vanishing_order(&(q[1].clone(), q[2].clone()))
            .ok_or(Error::ComponentOverlap);
    }
    Err(Error::Unsupported("no admissible projection centre".into()))
}

/// Smooth-point parametrization of a conic by projection from p.
pub fn parametrize_conic(q: &HomogForm, p: &ProjPoint) -> Result<RationalParam> {
    if q.nvars() != 3 || q.degree() != 2 || p.dim() != 2 {
        return Err(Error::DimensionMismatch(
            "parametrize_conic needs a plane conic and a plane point".into(),
        ));
    }
    let a = q.quadratic_matrix();
    if det(&a).is_zero() {
        return Err(Error::Reducible(format!("{q} is a degenerate conic")));
    }
    if !evaluate(q, p)?.is_zero() {
        return Err(Error::NotOnCurve);
    }
    let pr = p.as_rats();
    let unit = |i: usize| -> Vec<Rat> {
        (0..3)
            .map(|j| if i == j { Rat::one() } else { Rat::zero() })
            .collect()
    };
    let (b1, b2) = [(0usize, 1usize), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| (unit(i), unit(j)))
        .find(|(u, v)| !det(&[pr.clone(), u.clone(), v.clone()]).is_zero())
        .expect("p is nonzero");
    // v = s·b1 + t·b2
    let v: Vec<BinaryForm> = (0..3)
        .map(|i| BinaryForm::new(vec![b1[i].clone(), b2[i].clone()]))
        .collect();
    let vforms: Vec<HomogForm> = v.iter().map(HomogForm::from_binary).collect();
    let qv = q.substitute(&vforms)?.to_binary();
    let ap = mat_vec(&a, &pr);
    let mut bpv = BinaryForm::zero(1);
    for i in 0..3 {
        bpv = bpv.add(&v[i].scale(&ap[i]));
    }
    let two = Rat::from_integer(BigInt::from(2));
    let comps: Vec<BinaryForm> = (0..3)
        .map(|i| qv.scale(&pr[i]).add(&bpv.mul(&v[i]).scale(&-two.clone())))
        .collect();
    // clear denominators and content
    let all: Vec<Rat> = comps.iter().flat_map(|c| c.coeffs.clone()).collect();
    let prim = crate::arith::normalize_primitive(&all)?;
    let k = &prim
        .iter()
        .zip(&all)
        .find(|(_, a)| !a.is_zero())
        .map(|(p, a)| Rat::from_integer(p.clone()) / a)
        .unwrap();
    RationalParam::new(comps.iter().map(|c| c.scale(k)).collect())
}

/// The line through two plane points.
pub fn line_through_points(p: &ProjPoint, q: &ProjPoint) -> Result<HomogForm> {
    if p.dim() != 2 || q.dim() != 2 {
        return Err(Error::DimensionMismatch("plane points expected".into()));
    }
    if p == q {
        return Err(Error::InvalidInput(
            "coincident points do not span a line".into(),
        ));
    }
    Ok(HomogForm::linear_int(&cross(p.coords(), q.coords())).normalized())
}

/// Intersection point of two distinct plane lines.
pub fn meet_lines(l1: &HomogForm, l2: &HomogForm) -> Result<ProjPoint> {
    let a = l1.primitive().int_coeffs();
    let b = l2.primitive().int_coeffs();
    let c = cross(&a, &b);
    if c.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidInput("lines coincide".into()));
    }
    ProjPoint::from_big(&c)
}

pub fn cross(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// A pencil a·G + b·H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePencil {
    pub g: HomogForm,
    pub h: HomogForm,
}

impl CurvePencil {
    pub fn new(g: HomogForm, h: HomogForm) -> Result<Self> {
        if g.nvars() != h.nvars() || g.degree() != h.degree() {
            return Err(Error::DimensionMismatch(
                "pencil generators of different shape".into(),
            ));
        }
        if g.proportional(&h) || g.is_zero() || h.is_zero() {
            return Err(Error::InvalidInput(
                "pencil generators must be independent".into(),
            ));
        }
        Ok(CurvePencil { g, h })
    }

    pub fn member(&self, a: &Rat, b: &Rat) -> HomogForm {
        self.g.scale(a).add(&self.h.scale(b))
    }

    pub fn degree(&self) -> usize {
        self.g.degree()
    }

    /// The member through a point that is not a base point.
    pub fn member_through(&self, p: &ProjPoint) -> Result<(Rat, Rat)> {
        let gv = evaluate(&self.g, p)?;
        let hv = evaluate(&self.h, p)?;
        if gv.is_zero() && hv.is_zero() {
            return Err(Error::InvalidInput(format!(
                "{p} is a base point of the pencil"
            )));
        }
        Ok((hv, -gv))
    }

    /// True when `f` is a member (up to scalar).
    pub fn contains(&self, f: &HomogForm) -> bool {
        if f.nvars() != self.g.nvars() || f.degree() != self.g.degree() {
            return false;
        }
        let rows: Vec<Vec<Rat>> = vec![
            self.g.coeffs().to_vec(),
            self.h.coeffs().to_vec(),
            f.coeffs().to_vec(),
        ];
        linalg::rank(&rows) == 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn form(s: &str) -> HomogForm {
        HomogForm::parse_expr(s, 3).unwrap()
    }

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(c).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f = form("z*y^2 - x^3 - z^3");
        assert_eq!(evaluate(&f, &pt(&[2, 3, 1])).unwrap(), rat(0));
        assert_eq!(evaluate(&f, &pt(&[0, 0, 1])).unwrap(), rat(-1));
        assert!(evaluate(&f, &pt(&[0, 0, 0, 1])).is_err());
    }

    #[test]
    fn restriction_examples() {
        let f = form("z*y^2 - x^3 - z^3");
        let l = RationalParam::line_through(&pt(&[1, 0, 0]), &pt(&[0, 1, 0])).unwrap();
        assert_eq!(
            restrict_to_line(&f, &l).unwrap(),
            BinaryForm::from_ints(&[-1, 0, 0, 0])
        );
        assert!(restrict_to_line(&form("x*y*z"), &l).unwrap().is_zero());
        let c = form("x^2 + y^2 - z^2");
        let m = RationalParam::line_through(&pt(&[1, 0, 0]), &pt(&[0, 0, 1])).unwrap();
        assert_eq!(
            restrict_to_line(&c, &m).unwrap(),
            BinaryForm::from_ints(&[1, 0, -1])
        );
    }

    #[test]
    fn multiplicity_examples() {
        let f = form("z*y^2 - x^3 - z^3");
        let l = RationalParam::line_through(&pt(&[1, 0, 0]), &pt(&[0, 1, 0])).unwrap();
        assert_eq!(
            intersection_multiplicity(&f, &l, &pt(&[0, 1, 0])).unwrap(),
            3
        );
        assert_eq!(
            intersection_multiplicity_resultant(&f, &form("z"), &pt(&[0, 1, 0])).unwrap(),
            3
        );
        let c = form("x*z - y^2");
        let tangent = RationalParam::line_of_form(&form("z")).unwrap();
        assert_eq!(
            intersection_multiplicity(&c, &tangent, &pt(&[1, 0, 0])).unwrap(),
            2
        );
        assert_eq!(
            intersection_multiplicity_resultant(&c, &form("z"), &pt(&[1, 0, 0])).unwrap(),
            2
        );
        let transversal = RationalParam::line_of_form(&form("y")).unwrap();
        assert_eq!(
            intersection_multiplicity(&f, &transversal, &pt(&[1, 0, -1])).unwrap(),
            1
        );
        assert!(intersection_multiplicity(&form("x*y*z"), &l, &pt(&[1, 0, 0])).is_err());
    }

    #[test]
    fn conic_parametrizations() {
        let q = form("x^2 + y^2 - z^2");
        let par = parametrize_conic(&q, &pt(&[1, 0, 1])).unwrap();
        assert!(par.compose(&q).unwrap().is_zero());
        let q2 = form("x*z - y^2");
        let par2 = parametrize_conic(&q2, &pt(&[0, 0, 1])).unwrap();
        assert!(par2.compose(&q2).unwrap().is_zero());
        assert!(parametrize_conic(&form("x*y"), &pt(&[1, 0, 0])).is_err());
        assert!(parametrize_conic(&q, &pt(&[1, 1, 1])).is_err());
    }

    #[test]
    fn common_zeros() {
        let f = form("x*y*z");
        let z = common_rational_zeros(&f.gradient()).unwrap();
        assert_eq!(z, vec![pt(&[0, 0, 1]), pt(&[0, 1, 0]), pt(&[1, 0, 0])]);
        let c = form("z*y^2 - x^3");
        assert_eq!(
            common_rational_zeros(&c.gradient()).unwrap(),
            vec![pt(&[0, 0, 1])]
        );
        let s = form("z*y^2 - x^3 - z^3");
        assert!(common_rational_zeros(&s.gradient()).unwrap().is_empty());
    }

    #[test]
    fn pencil_members() {
        let p = CurvePencil::new(form("x^2 - z^2"), form("y^2 - z^2")).unwrap();
        assert!(p.contains(&form("x^2 + y^2 - 2*z^2")));
        assert!(!p.contains(&form("x*y")));
    }
}

//! Decidable forms of the branch-locus and common-constant-curve hypotheses
//! for a pair of pencils.

use crate::arith::Rat;
use crate::cubic::factor;
use crate::error::{Error, Result};
use crate::projgeo::linalg::{det, nullspace};
use crate::projgeo::{p1_of, p1_rat, BinaryForm, CurvePencil, HomogForm, ProjPoint, P1};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A component of D with its behaviour under the two fibrations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DComponent {
    pub form: HomogForm,
    pub lambda_constant: Option<bool>,
    pub mu_constant: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Verdict {
    pub ok: bool,
    /// λ-fibers whose support lies in the branch curve.
    pub fibers: Vec<P1>,
    pub witnesses: Vec<HomogForm>,
    /// λ(D_μ) when it is a single point.
    pub lambda_of_d_mu: Option<P1>,
}

/// The member of the pencil containing the curve k, if there is exactly one.
/// The remainder modulo k is linear in the member, so k divides aG + bH iff
/// a·(G mod k) + b·(H mod k) = 0.
pub fn fiber_containing(pencil: &CurvePencil, k: &HomogForm) -> Option<P1> {
    if k.degree() > pencil.degree() {
        return None;
    }
    let rg = pencil.g.rem(k);
    let rh = pencil.h.rem(k);
    match (rg.is_zero(), rh.is_zero()) {
        (true, true) => None,
        (true, false) => Some(p1_of(&Rat::one(), &Rat::zero())),
        (false, true) => Some(p1_of(&Rat::zero(), &Rat::one())),
        (false, false) => {
            let i = rg.coeffs().iter().position(|c| !c.is_zero())?;
            let (a, b) = (rh.coeffs()[i].clone(), -rg.coeffs()[i].clone());
            pencil
                .member(&a, &b)
                .rem(k)
                .is_zero()
                .then(|| p1_of(&a, &b))
        }
    }
}

/// Rational members whose support may be singular or reducible: for conic
/// pencils the rational roots of det(a·A_G + b·A_H).
fn degenerate_members(pencil: &CurvePencil) -> Result<Vec<P1>> {
    if pencil.degree() != 2 || pencil.g.nvars() != 3 {
        return Ok(vec![]);
    }
    let (ag, ah) = (pencil.g.quadratic_matrix(), pencil.h.quadratic_matrix());
    let at = |a: i64, b: i64| -> Rat {
        let (a, b) = (Rat::from_integer(a.into()), Rat::from_integer(b.into()));
        let m: Vec<Vec<Rat>> = (0..3)
            .map(|i| (0..3).map(|j| &ag[i][j] * &a + &ah[i][j] * &b).collect())
            .collect();
        det(&m)
    };
    // det is a binary cubic c0a³ + c1a²b + c2ab² + c3b³
    let c0 = at(1, 0);
    let c3 = at(0, 1);
    let p = at(1, 1) - &c0 - &c3;
    let m = at(1, -1) - &c0 + &c3;
    let two = Rat::from_integer(BigInt::from(2));
    let c1 = (&p + &m) / &two;
    let c2 = (&p - &m) / &two;
    let d = BinaryForm::new(vec![c0, c1, c2, c3]);
    if d.is_zero() {
        return Ok(vec![]);
    }
    Ok(d.rational_roots()?.into_iter().map(|(r, _)| r).collect())
}

fn member_at(pencil: &CurvePencil, u: &P1) -> HomogForm {
    let (a, b) = p1_rat(u);
    pencil.member(&a, &b)
}

fn push_unique(v: &mut Vec<P1>, u: P1) {
    if !v.contains(&u) {
        v.push(u);
    }
}

/// True when every component of k is a component of b.
fn support_divides(k: &HomogForm, b: &HomogForm) -> bool {
    b.pow(k.degree().max(1)).div_exact(k).is_some()
}

/// Members of λ lying in the branch curve. Candidates are the members
/// through the small-height points of the branch curve, the degenerate
/// members and the generators; each is confirmed by exact division.
fn branch_fibers(branch: &HomogForm, lambda: &CurvePencil) -> Result<Vec<P1>> {
    let mut cands: Vec<P1> = Vec::new();
    push_unique(&mut cands, (BigInt::one(), BigInt::zero()));
    push_unique(&mut cands, (BigInt::zero(), BigInt::one()));
    for u in degenerate_members(lambda)? {
        push_unique(&mut cands, u);
    }
    let h = 5i64;
    for x in -h..=h {
        for y in -h..=h {
            for z in 0..=h {
                let Ok(p) = ProjPoint::from_ints(&[x, y, z]) else {
                    continue;
                };
                if p.coords() != [BigInt::from(x), BigInt::from(y), BigInt::from(z)] {
                    continue;
                }
                if !branch.eval_int(p.coords())?.is_zero() {
                    continue;
                }
                if let Ok((a, b)) = lambda.member_through(&p) {
                    push_unique(&mut cands, p1_of(&a, &b));
                }
            }
        }
    }
    Ok(cands
        .into_iter()
        .filter(|u| support_divides(&member_at(lambda, u), branch))
        .collect())
}

/// At most one λ-fiber in the branch curve and, if there is one, λ(D_μ) is
/// not a point, D_μ being the components of D that are not μ-constant.
pub fn check_h1(
    branch: Option<&HomogForm>,
    lambda: &CurvePencil,
    comps: &[DComponent],
) -> Result<H1Verdict> {
    if comps
        .iter()
        .any(|c| c.lambda_constant.is_none() || c.mu_constant.is_none())
    {
        return Err(Error::InvalidInput(
            "every component of D needs both constancy flags".into(),
        ));
    }
    let branch = match branch {
        Some(b) if b.degree() > 0 && !b.is_zero() => b,
        _ => {
            return Ok(H1Verdict {
                ok: true,
                fibers: vec![],
                witnesses: vec![],
                lambda_of_d_mu: None,
            })
        }
    };
    let fibers = branch_fibers(branch, lambda)?;
    let witnesses: Vec<HomogForm> = fibers
        .iter()
        .map(|u| member_at(lambda, u).normalized())
        .collect();
    let d_mu: Vec<&DComponent> = comps
        .iter()
        .filter(|c| c.mu_constant == Some(false))
        .collect();
    let mut image: Option<P1> = None;
    let mut is_point = !d_mu.is_empty();
    for c in &d_mu {
        if c.lambda_constant != Some(true) {
            is_point = false;
            break;
        }
        match fiber_containing(lambda, &c.form) {
            Some(u) if image.as_ref().is_none_or(|v| *v == u) => image = Some(u),
            _ => {
                is_point = false;
                break;
            }
        }
    }
    let lambda_of_d_mu = if is_point { image } else { None };
    let ok = match fibers.len() {
        0 => true,
        1 => lambda_of_d_mu.is_none(),
        _ => false,
    };
    Ok(H1Verdict {
        ok,
        fibers,
        witnesses,
        lambda_of_d_mu,
    })
}

fn push_form(v: &mut Vec<HomogForm>, f: HomogForm) {
    let f = f.normalized();
    if !v.iter().any(|g| g.proportional(&f)) {
        v.push(f);
    }
}

/// Curves constant for both pencils: components of degenerate members of
/// either pencil, and members common to both, that lie in a fiber of each.
/// Curves proportional to a form in `exclude` (components of D) are dropped.
pub fn check_h3(
    lambda: &CurvePencil,
    mu: &CurvePencil,
    exclude: &[HomogForm],
) -> Result<Vec<HomogForm>> {
    for p in [lambda, mu] {
        if p.g.nvars() != 3 {
            return Err(Error::Unsupported("plane pencils only".into()));
        }
        if p.degree() > 2 {
            return Err(Error::Unsupported(format!(
                "degenerate members of degree {} pencils",
                p.degree()
            )));
        }
    }
    let mut cands: Vec<HomogForm> = Vec::new();
    for p in [lambda, mu] {
        for u in degenerate_members(p)? {
            let m = member_at(p, &u);
            let f = factor(&m);
            for l in f.lines {
                push_form(&mut cands, l);
            }
            if f.rest.degree() > 0 {
                push_form(&mut cands, f.rest);
            }
        }
    }
    if lambda.degree() == mu.degree() {
        // a·G₁ + b·H₁ − c·G₂ − d·H₂ = 0
        let cols: Vec<&[Rat]> = vec![
            lambda.g.coeffs(),
            lambda.h.coeffs(),
            mu.g.coeffs(),
            mu.h.coeffs(),
        ];
        let rows: Vec<Vec<Rat>> = (0..cols[0].len())
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        for v in nullspace(&rows, 4) {
            let m = lambda.member(&v[0], &v[1]);
            if !m.is_zero() {
                let f = factor(&m);
                for l in f.lines {
                    push_form(&mut cands, l);
                }
                if f.rest.degree() > 0 {
                    push_form(&mut cands, f.rest);
                }
            }
        }
    }
    Ok(cands
        .into_iter()
        .filter(|k| fiber_containing(lambda, k).is_some() && fiber_containing(mu, k).is_some())
        .filter(|k| !exclude.iter().any(|e| e.proportional(k)))
        .collect())
}

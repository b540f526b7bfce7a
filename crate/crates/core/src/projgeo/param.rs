//! Rational parametrizations ℙ¹ → ℙⁿ by binary forms.

use super::binary::{BinaryForm, P1};
use super::form::HomogForm;
use super::linalg::int_kernel;
use super::point::ProjPoint;
use crate::arith::Rat;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coordinates as binary forms of a common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalParam {
    pub comps: Vec<BinaryForm>,
}

impl RationalParam {
    pub fn new(comps: Vec<BinaryForm>) -> Result<Self> {
        if comps.len() < 3 || comps.len() > 4 {
            return Err(Error::DimensionMismatch(
                "parametrization needs 3 or 4 components".into(),
            ));
        }
        let d = comps[0].degree();
        if comps.iter().any(|c| c.degree() != d) {
            return Err(Error::DimensionMismatch(
                "components of mixed degree".into(),
            ));
        }
        if comps.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroInput("RationalParam"));
        }
        Ok(RationalParam { comps })
    }

    /// [s:t] ↦ s·p + t·q.
    pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<Self> {
        if p.dim() != q.dim() {
            return Err(Error::DimensionMismatch(
                "points in different spaces".into(),
            ));
        }
        if p == q {
            return Err(Error::InvalidInput("line through a doubled point".into()));
        }
        let comps = p
            .as_rats()
            .into_iter()
            .zip(q.as_rats())
            .map(|(a, b)| BinaryForm::new(vec![a, b]))
            .collect();
        RationalParam::new(comps)
    }

    /// Parametrizes the plane line L = 0 by a basis of its integer points.
    pub fn line_of_form(l: &HomogForm) -> Result<Self> {
        if l.degree() != 1 || l.nvars() != 3 || l.is_zero() {
            return Err(Error::InvalidInput(format!("{l} is not a plane line")));
        }
        let row = l.primitive().int_coeffs();
        let k = int_kernel(&[row], 3);
        let p = ProjPoint::from_big(&k[0])?;
        let q = ProjPoint::from_big(&k[1])?;
        RationalParam::line_through(&p, &q)
    }

    pub fn degree(&self) -> usize {
        self.comps[0].degree()
    }

    pub fn ambient_vars(&self) -> usize {
        self.comps.len()
    }

    pub fn as_forms(&self) -> Vec<HomogForm> {
        self.comps.iter().map(HomogForm::from_binary).collect()
    }

    /// F ∘ param as a binary form.
    pub fn compose(&self, f: &HomogForm) -> Result<BinaryForm> {
        if f.nvars() != self.comps.len() {
            return Err(Error::DimensionMismatch(format!(
                "form in {} variables composed with a map to {} coordinates",
                f.nvars(),
                self.comps.len()
            )));
        }
        Ok(f.substitute(&self.as_forms())?.to_binary())
    }

    pub fn eval(&self, s: &Rat, t: &Rat) -> Vec<Rat> {
        self.comps.iter().map(|c| c.eval(s, t)).collect()
    }

    pub fn point_at(&self, s: &Rat, t: &Rat) -> Result<ProjPoint> {
        ProjPoint::new(&self.eval(s, t))
    }

    /// Parameters [s:t] mapping to `p`.
    pub fn parameters_of(&self, p: &ProjPoint) -> Result<Vec<P1>> {
        if p.dim() + 1 != self.comps.len() {
            return Err(Error::DimensionMismatch(
                "point and parametrization in different spaces".into(),
            ));
        }
        let pc = p.as_rats();
        let n = pc.len();
        // p_i·C_j − p_j·C_i vanish exactly at the parameters of p.
        let mut eqs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let e = self.comps[j]
                    .scale(&pc[i])
                    .add(&self.comps[i].scale(&-pc[j].clone()));
                if !e.is_zero() {
                    eqs.push(e);
                }
            }
        }
        let candidates: Vec<P1> = match eqs.first() {
            Some(e) => e.rational_roots()?.into_iter().map(|(r, _)| r).collect(),
            None => return Err(Error::InvalidInput("degenerate parametrization".into())),
        };
        let mut out = Vec::new();
        for (s, t) in candidates {
            let (sr, tr) = (Rat::from_integer(s.clone()), Rat::from_integer(t.clone()));
            if eqs.iter().all(|e| e.eval(&sr, &tr).is_zero())
                && self.comps.iter().any(|c| !c.eval(&sr, &tr).is_zero())
            {
                out.push((s, t));
            }
        }
        Ok(out)
    }
}

pub fn p1_rat(p: &P1) -> (Rat, Rat) {
    (
        Rat::from_integer(p.0.clone()),
        Rat::from_integer(p.1.clone()),
    )
}

pub fn p1_infinity() -> P1 {
    (BigInt::one(), BigInt::zero())
}

//! Binary forms f(s, t) = Σ cᵢ s^(d−i) tⁱ with exact coefficients.

use super::linalg::det;
use super::upoly::UPoly;
use crate::arith::{normalize_primitive, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// A binary form of formal degree `coeffs.len() − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    pub coeffs: Vec<Rat>,
}

/// A point [s:t] of ℙ¹ with primitive integer coordinates.
pub type P1 = (BigInt, BigInt);

impl BinaryForm {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty());
        BinaryForm { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        BinaryForm::new(
            c.iter()
                .map(|&x| Rat::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            coeffs: vec![Rat::zero(); degree + 1],
        }
    }

    /// The linear form t0·s − s0·t vanishing at [s0:t0].
    pub fn vanishing_at(p: &(Rat, Rat)) -> Self {
        BinaryForm::new(vec![p.1.clone(), -p.0.clone()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, s: &Rat, t: &Rat) -> Rat {
        let d = self.degree();
        let mut acc = Rat::zero();
        let mut spow = vec![Rat::one(); d + 1];
        let mut tpow = vec![Rat::one(); d + 1];
        for i in 1..=d {
            spow[i] = &spow[i - 1] * s;
            tpow[i] = &tpow[i - 1] * t;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &spow[d - i] * &tpow[i];
            }
        }
        acc
    }

    pub fn add(&self, o: &BinaryForm) -> BinaryForm {
        assert_eq!(
            self.degree(),
            o.degree(),
            "adding binary forms of different degree"
        );
        BinaryForm::new(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rat) -> BinaryForm {
        BinaryForm::new(self.coeffs.iter().map(|a| a * k).collect())
    }

    pub fn mul(&self, o: &BinaryForm) -> BinaryForm {
        let mut c = vec![Rat::zero(); self.degree() + o.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        BinaryForm::new(c)
    }

    pub fn pow(&self, e: usize) -> BinaryForm {
        let mut acc = BinaryForm::new(vec![Rat::one()]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division; `None` when the divisor does not divide.
    pub fn div_exact(&self, d: &BinaryForm) -> Option<BinaryForm> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BinaryForm::zero(self.degree().checked_sub(d.degree())?));
        }
        if d.degree() > self.degree() {
            return None;
        }
        // Long division from the s-side: coefficient index i tracks t^i.
        let lead = d.coeffs.iter().position(|c| !c.is_zero())?;
        let qd = self.degree() - d.degree();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rat::zero(); qd + 1];
        for k in 0..=qd {
            let idx = k + lead;
            if idx >= r.len() {
                break;
            }
            let coef = &r[idx] / &d.coeffs[lead];
            if !coef.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &coef * b;
                }
            }
            q[k] = coef;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(BinaryForm::new(q))
        } else {
            None
        }
    }

    /// Dehomogenization at t = 1 as a polynomial in s.
    pub fn dehomogenize(&self) -> UPoly {
        let d = self.degree();
        UPoly::new((0..=d).map(|k| self.coeffs[d - k].clone()).collect())
    }

    /// Dehomogenization at s = 1 as a polynomial in t.
    pub fn dehomogenize_s(&self) -> UPoly {
        UPoly::new(self.coeffs.clone())
    }

    /// Multiplicity of the root [1:0].
    pub fn infinity_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Order of vanishing at [s0:t0]; `None` for the zero form.
    pub fn vanishing_order(&self, p: &(Rat, Rat)) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = BinaryForm::vanishing_at(p);
        let mut f = self.clone();
        let mut k = 0;
        while let Some(q) = f.div_exact(&lin) {
            if q.coeffs.is_empty() {
                break;
            }
            f = q;
            k += 1;
            if f.degree() == 0 {
                break;
            }
        }
        Some(k)
    }

    /// b² − 4ac for a quadratic form.
    pub fn discriminant(&self) -> Rat {
        assert_eq!(self.degree(), 2, "discriminant of a non-quadratic form");
        let (a, b, c) = (&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]);
        b * b - Rat::from_integer(BigInt::from(4)) * a * c
    }

    /// Rational roots with multiplicities, roots as primitive [s:t].
    pub fn rational_roots(&self) -> Result<Vec<(P1, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroInput("rational_roots"));
        }
        let mut out = Vec::new();
        let k = self.infinity_multiplicity();
        for (r, m) in self.dehomogenize().rational_roots() {
            out.push((p1_of(&r, &Rat::one()), m));
        }
        if k > 0 {
            out.push(((BigInt::one(), BigInt::zero()), k));
        }
        out.sort();
        Ok(out)
    }

    /// Multiplicity pattern over the algebraic closure: squarefree factors
    /// (as binary forms) with their multiplicities.
    pub fn squarefree(&self) -> Result<Vec<(BinaryForm, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroInput("squarefree"));
        }
        let mut out = Vec::new();
        for (f, m) in self.dehomogenize().squarefree() {
            let deg = f.degree() as usize;
            let coeffs = (0..=deg).map(|i| f.c[deg - i].clone()).collect();
            out.push((BinaryForm::new(coeffs), m));
        }
        let k = self.infinity_multiplicity();
        if k > 0 {
            out.push((BinaryForm::new(vec![Rat::zero(), Rat::one()]), k));
        }
        Ok(out)
    }

    /// Leading nonzero coefficient in s-descending order.
    pub fn first_nonzero(&self) -> Option<&Rat> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    /// Proportional forms of equal degree.
    pub fn proportional(&self, o: &BinaryForm) -> bool {
        if self.degree() != o.degree() {
            return false;
        }
        let n = self.coeffs.len();
        for i in 0..n {
            for j in i + 1..n {
                if &self.coeffs[i] * &o.coeffs[j] != &self.coeffs[j] * &o.coeffs[i] {
                    return false;
                }
            }
        }
        true
    }
}

/// Primitive integer representative of [s:t].
pub fn p1_of(s: &Rat, t: &Rat) -> P1 {
    let v = normalize_primitive(&[s.clone(), t.clone()]).expect("nonzero projective point");
    (v[0].clone(), v[1].clone())
}

/// Sylvester resultant of two binary forms with their formal degrees.
pub fn resultant(f: &BinaryForm, g: &BinaryForm) -> Rat {
    let (m, n) = (f.degree(), g.degree());
    if m == 0 && n == 0 {
        return Rat::one();
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rat::zero(); size];
        for (j, c) in f.coeffs.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rat::zero(); size];
        for (j, c) in g.coeffs.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    det(&rows)
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match d - i {
                0 => {}
                1 => write!(f, "*s")?,
                e => write!(f, "*s^{e}")?,
            }
            match i {
                0 => {}
                1 => write!(f, "*t")?,
                e => write!(f, "*t^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

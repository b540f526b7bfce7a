use super::Rat;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element a + b√d of ℚ(√d), d squarefree and nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: Rat,
    pub b: Rat,
    d: BigInt,
}

impl QuadElem {
    /// Builds a + b√d. `d` must be squarefree, nonzero and different from 1.
    pub fn new(a: Rat, b: Rat, d: BigInt) -> Result<Self> {
        if d.is_zero() || d.is_one() || !is_squarefree_small(&d) {
            return Err(Error::InvalidInput(format!(
                "{d} is not a squarefree radicand"
            )));
        }
        Ok(QuadElem { a, b, d })
    }

    /// Skips the squarefree check; the caller has already reduced `d`.
    pub(crate) fn new_unchecked(a: Rat, b: Rat, d: BigInt) -> Self {
        QuadElem { a, b, d }
    }

    pub fn from_rat(a: Rat, d: &BigInt) -> Self {
        QuadElem {
            a,
            b: Rat::zero(),
            d: d.clone(),
        }
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn conj(&self) -> Self {
        QuadElem {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// a² − d·b².
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - Rat::from_integer(self.d.clone()) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rat {
        &self.a + &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(QuadElem {
            a: c.a / &n,
            b: c.b / &n,
            d: self.d.clone(),
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = QuadElem::from_rat(Rat::one(), &self.d);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign of the real number a + b√d (d > 0 only).
    pub fn real_sign(&self) -> i32 {
        assert!(
            self.d.is_positive(),
            "real_sign needs a real quadratic field"
        );
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // a and b√d have opposite signs: compare a² with d·b².
        let lhs = &self.a * &self.a;
        let rhs = Rat::from_integer(self.d.clone()) * &self.b * &self.b;
        if lhs > rhs {
            sa
        } else if lhs < rhs {
            sb
        } else {
            0
        }
    }
}

fn sign(q: &Rat) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn is_squarefree_small(d: &BigInt) -> bool {
    super::squarefree_decompose(d).0.is_one()
}

fn same_field(x: &QuadElem, y: &QuadElem) {
    assert!(
        x.d == y.d || x.b.is_zero() || y.b.is_zero(),
        "mixing elements of different quadratic fields"
    );
}

fn field_of(x: &QuadElem, y: &QuadElem) -> BigInt {
    if x.b.is_zero() {
        y.d.clone()
    } else {
        x.d.clone()
    }
}

impl<'a> Add<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        same_field(self, o);
        QuadElem {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d: field_of(self, o),
        }
    }
}

impl<'a> Sub<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        same_field(self, o);
        QuadElem {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            d: field_of(self, o),
        }
    }
}

impl<'a> Mul<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        same_field(self, o);
        let d = field_of(self, o);
        let dd = Rat::from_integer(d.clone());
        QuadElem {
            a: &self.a * &o.a + dd * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

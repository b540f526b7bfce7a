//! Dense univariate polynomials over ℚ, used behind binary forms.

use crate::arith::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending order; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    pub c: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }

    pub fn constant(a: Rat) -> Self {
        UPoly::new(vec![a])
    }

    /// x − r.
    pub fn linear_root(r: &Rat) -> Self {
        UPoly::new(vec![-r.clone(), Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; −1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lead(&self) -> Rat {
        self.c.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![Rat::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            c[i] += a;
        }
        for (i, a) in o.c.iter().enumerate() {
            c[i] += a;
        }
        UPoly::new(c)
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> UPoly {
        UPoly::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() < d.c.len() {
            return (UPoly::zero(), self.clone());
        }
        let lead = d.lead();
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] / &lead;
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * b;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&(Rat::one() / l))
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Primitive integer coefficients (content removed, positive leading term).
    pub fn to_primitive_ints(&self) -> Vec<BigInt> {
        let den = self.c.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()));
        let mut v: Vec<BigInt> = self
            .c
            .iter()
            .map(|a| a.numer() * (&den / a.denom()))
            .collect();
        let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() {
            let g = if v.last().unwrap().is_negative() {
                -g
            } else {
                g
            };
            for x in v.iter_mut() {
                *x = &*x / &g;
            }
        }
        v
    }

    /// Yun's squarefree decomposition: pairs (factor, multiplicity) with
    /// every factor squarefree, monic and pairwise coprime.
    pub fn squarefree(&self) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.divrem(&a0).0;
        let mut c = fp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree() >= 1 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            if b.degree() < 1 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Rational roots with multiplicities, in increasing order.
    pub fn rational_roots(&self) -> Vec<(Rat, usize)> {
        let mut out = Vec::new();
        for (fac, mult) in self.squarefree() {
            for r in squarefree_rational_roots(&fac) {
                out.push((r, mult));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// Rational roots of a squarefree polynomial.
fn squarefree_rational_roots(p: &UPoly) -> Vec<Rat> {
    if p.degree() < 1 {
        return vec![];
    }
    if p.degree() == 1 {
        return vec![-&p.c[0] / &p.c[1]];
    }
    let a = p.to_primitive_ints();
    let n = a.len() - 1;
    let an = a[n].clone();
    // g(y) = an^(n-1) p(y / an) is monic with integer coefficients.
    let mut g = vec![BigInt::zero(); n + 1];
    let mut pw = BigInt::one();
    for i in (0..n).rev() {
        g[i] = &a[i] * &pw;
        pw *= &an;
    }
    g[n] = BigInt::one();
    integer_roots_monic(&g)
        .into_iter()
        .map(|y| Rat::new(y, an.clone()))
        .collect()
}

/// Integer roots of a squarefree monic integer polynomial by Sturm bisection.
fn integer_roots_monic(g: &[BigInt]) -> Vec<BigInt> {
    let poly = UPoly::new(g.iter().map(|x| Rat::from_integer(x.clone())).collect());
    let seq = sturm_sequence(&poly);
    let bound = g.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero) + BigInt::one();
    let mut roots = Vec::new();
    let lo = -bound.clone() - BigInt::one();
    let hi = bound;
    let vlo = variations(&seq, &lo);
    let vhi = variations(&seq, &hi);
    isolate(&poly, &seq, lo, hi, vlo, vhi, &mut roots);
    roots
}

fn isolate(
    poly: &UPoly,
    seq: &[UPoly],
    lo: BigInt,
    hi: BigInt,
    vlo: usize,
    vhi: usize,
    out: &mut Vec<BigInt>,
) {
    if vlo <= vhi {
        return;
    }
    if &hi - &lo <= BigInt::one() {
        if poly.eval(&Rat::from_integer(hi.clone())).is_zero() {
            out.push(hi);
        }
        return;
    }
    let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
    let vmid = variations(seq, &mid);
    isolate(poly, seq, lo, mid.clone(), vlo, vmid, out);
    isolate(poly, seq, mid, hi, vmid, vhi, out);
}

fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].divrem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.scale(&-Rat::one()));
    }
    seq
}

fn variations(seq: &[UPoly], x: &BigInt) -> usize {
    let xr = Rat::from_integer(x.clone());
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let v = p.eval(&xr);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn up(v: &[i64]) -> UPoly {
        UPoly::new(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn roots_with_multiplicity() {
        // (x - 1)^2 (2x + 3) (x^2 - 2)
        let p = up(&[-1, 1])
            .mul(&up(&[-1, 1]))
            .mul(&up(&[3, 2]))
            .mul(&up(&[-2, 0, 1]));
        let r = p.rational_roots();
        assert_eq!(r, vec![(ratio(-3, 2), 1), (rat(1), 2)]);
    }

    #[test]
    fn huge_coefficients() {
        let big = Rat::from_integer(BigInt::from(10).pow(60) + BigInt::from(7));
        let p = UPoly::linear_root(&big)
            .mul(&UPoly::linear_root(&(-big.clone() / rat(3))))
            .mul(&up(&[1, 0, 1]));
        let r = p.rational_roots();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].0, big);
    }

    #[test]
    fn squarefree_decomposition() {
        let p = up(&[0, 0, 0, 1]).mul(&up(&[1, 1]));
        let sf = p.squarefree();
        assert_eq!(sf, vec![(up(&[1, 1]), 1), (up(&[0, 1]), 3)]);
    }
}

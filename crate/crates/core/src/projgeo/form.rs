//! Dense homogeneous forms in graded-lex order (x > y > z > w).

use super::binary::BinaryForm;
use crate::arith::{normalize_primitive, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// A homogeneous polynomial with rational coefficients, one per monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogForm {
    nvars: usize,
    degree: usize,
    coeffs: Vec<Rat>,
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Number of monomials of degree d in n variables.
pub fn monomial_count(n: usize, d: usize) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    binom(d + n - 1, n - 1)
}

/// Exponent vectors in graded-lex order.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, rem: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n - 1 {
            cur.push(rem as u32);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=rem).rev() {
            cur.push(a as u32);
            rec(i + 1, n, rem - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(monomial_count(n, d));
    if n == 0 {
        return out;
    }
    rec(0, n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Position of an exponent vector in [`monomials`].
pub fn monomial_index(exps: &[u32]) -> usize {
    let n = exps.len();
    let mut rem: usize = exps.iter().map(|&e| e as usize).sum();
    let mut idx = 0;
    for i in 0..n.saturating_sub(1) {
        let e = exps[i] as usize;
        for a in e + 1..=rem {
            idx += monomial_count(n - i - 1, rem - a);
        }
        rem -= e;
    }
    idx
}

impl HomogForm {
    pub fn new(nvars: usize, degree: usize, coeffs: Vec<Rat>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidInput(
                "form needs at least one variable".into(),
            ));
        }
        let want = monomial_count(nvars, degree);
        if coeffs.len() != want {
            return Err(Error::DimensionMismatch(format!(
                "degree {degree} in {nvars} variables needs {want} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(HomogForm {
            nvars,
            degree,
            coeffs,
        })
    }

    pub fn from_ints(nvars: usize, degree: usize, c: &[i64]) -> Result<Self> {
        HomogForm::new(
            nvars,
            degree,
            c.iter()
                .map(|&x| Rat::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn zero(nvars: usize, degree: usize) -> Self {
        HomogForm {
            nvars,
            degree,
            coeffs: vec![Rat::zero(); monomial_count(nvars, degree)],
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        HomogForm {
            nvars,
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// The coordinate function of variable `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        HomogForm::monomial(&e, Rat::one())
    }

    pub fn monomial(exps: &[u32], c: Rat) -> Self {
        let d = exps.iter().map(|&e| e as usize).sum();
        let mut f = HomogForm::zero(exps.len(), d);
        f.coeffs[monomial_index(exps)] = c;
        f
    }

    /// Σ cᵢ·xᵢ.
    pub fn linear(c: &[Rat]) -> Self {
        HomogForm {
            nvars: c.len(),
            degree: 1,
            coeffs: c.to_vec(),
        }
    }

    pub fn linear_int(c: &[BigInt]) -> Self {
        HomogForm::linear(
            &c.iter()
                .map(|x| Rat::from_integer(x.clone()))
                .collect::<Vec<_>>(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, exps: &[u32]) -> &Rat {
        &self.coeffs[monomial_index(exps)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Nonzero terms in monomial order.
    pub fn terms(&self) -> Vec<(Vec<u32>, Rat)> {
        monomials(self.nvars, self.degree)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, c.clone()))
            .collect()
    }

    fn check_shape(&self, o: &HomogForm) {
        assert!(
            self.nvars == o.nvars && self.degree == o.degree,
            "shape mismatch: ({}, {}) vs ({}, {})",
            self.nvars,
            self.degree,
            o.nvars,
            o.degree
        );
    }

    pub fn add(&self, o: &HomogForm) -> HomogForm {
        self.check_shape(o);
        HomogForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &HomogForm) -> HomogForm {
        self.check_shape(o);
        HomogForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> HomogForm {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, k: &Rat) -> HomogForm {
        HomogForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, o: &HomogForm) -> HomogForm {
        assert_eq!(
            self.nvars, o.nvars,
            "multiplying forms in different variables"
        );
        let mut out = HomogForm::zero(self.nvars, self.degree + o.degree);
        let ta = self.terms();
        let tb = o.terms();
        let mut e = vec![0u32; self.nvars];
        for (ea, ca) in &ta {
            for (eb, cb) in &tb {
                for i in 0..self.nvars {
                    e[i] = ea[i] + eb[i];
                }
                out.coeffs[monomial_index(&e)] += ca * cb;
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> HomogForm {
        let mut acc = HomogForm::constant(self.nvars, Rat::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, p: &[Rat]) -> Result<Rat> {
        if p.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "form in {} variables evaluated at a point with {} coordinates",
                self.nvars,
                p.len()
            )));
        }
        let mut acc = Rat::zero();
        for (e, c) in self.terms() {
            let mut t = c;
            for (x, &k) in p.iter().zip(&e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_int(&self, p: &[BigInt]) -> Result<Rat> {
        if p.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "form in {} variables evaluated at a point with {} coordinates",
                self.nvars,
                p.len()
            )));
        }
        // clear denominators once, then stay in BigInt
        let mut den = BigInt::one();
        for (_, c) in self.terms() {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        // power tables avoid recomputing x^k per term
        let pows: Vec<Vec<BigInt>> = p
            .iter()
            .map(|x| {
                let mut v = vec![BigInt::one()];
                for k in 0..self.degree {
                    let nx = &v[k] * x;
                    v.push(nx);
                }
                v
            })
            .collect();
        let mut acc = BigInt::zero();
        for (e, c) in self.terms() {
            let mut t = c.numer() * (&den / c.denom());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= &pows[i][k as usize];
                }
            }
            acc += t;
        }
        Ok(Rat::new(acc, den))
    }

    /// ∂/∂xᵢ.
    pub fn partial(&self, i: usize) -> HomogForm {
        if self.degree == 0 {
            return HomogForm::zero(self.nvars, 0);
        }
        let mut out = HomogForm::zero(self.nvars, self.degree - 1);
        for (mut e, c) in self.terms() {
            if e[i] == 0 {
                continue;
            }
            let k = e[i];
            e[i] -= 1;
            out.coeffs[monomial_index(&e)] += c * Rat::from_integer(BigInt::from(k));
        }
        out
    }

    pub fn gradient(&self) -> Vec<HomogForm> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Replaces variable i by `subs[i]`; all substitutes share variables and degree.
    pub fn substitute(&self, subs: &[HomogForm]) -> Result<HomogForm> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} substitutes for {} variables",
                subs.len(),
                self.nvars
            )));
        }
        let m = subs[0].nvars;
        let e = subs[0].degree;
        if subs.iter().any(|s| s.nvars != m || s.degree != e) {
            return Err(Error::DimensionMismatch(
                "substitutes of mixed shape".into(),
            ));
        }
        // powers[i][k] = subs[i]^k
        let mut powers: Vec<Vec<HomogForm>> = Vec::with_capacity(self.nvars);
        for s in subs {
            let mut v = vec![HomogForm::constant(m, Rat::one())];
            for k in 1..=self.degree {
                let next = v[k - 1].mul(s);
                v.push(next);
            }
            powers.push(v);
        }
        let mut out = HomogForm::zero(m, self.degree * e);
        for (ex, c) in self.terms() {
            let mut t = HomogForm::constant(m, c);
            for (i, &k) in ex.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Linear change of variables x ↦ M·x (rows of M give the new expressions).
    pub fn transform(&self, m: &[Vec<Rat>]) -> Result<HomogForm> {
        let subs: Vec<HomogForm> = m.iter().map(|row| HomogForm::linear(row)).collect();
        self.substitute(&subs)
    }

    /// Exact quotient by `d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &HomogForm) -> Option<HomogForm> {
        assert_eq!(self.nvars, d.nvars);
        if d.is_zero() || d.degree > self.degree {
            return None;
        }
        let qd = self.degree - d.degree;
        let mut q = HomogForm::zero(self.nvars, qd);
        if self.is_zero() {
            return Some(q);
        }
        let dterms = d.terms();
        let (lead_e, lead_c) = dterms[0].clone();
        let mut r = self.clone();
        let monos = monomials(self.nvars, self.degree);
        for (idx, e) in monos.iter().enumerate() {
            let c = r.coeffs[idx].clone();
            if c.is_zero() {
                continue;
            }
            if e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = &c / &lead_c;
            for (de, dc) in &dterms {
                let te: Vec<u32> = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                r.coeffs[monomial_index(&te)] -= &qc * dc;
            }
            q.coeffs[monomial_index(&qe)] += qc;
        }
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Normal form modulo `d`: terms divisible by the leading monomial of `d`
    /// are reduced away. Zero exactly when `d` divides.
    pub fn rem(&self, d: &HomogForm) -> HomogForm {
        assert_eq!(self.nvars, d.nvars);
        assert!(!d.is_zero(), "reduction by the zero form");
        let mut r = self.clone();
        if d.degree > self.degree {
            return r;
        }
        let dterms = d.terms();
        let (lead_e, lead_c) = dterms[0].clone();
        let monos = monomials(self.nvars, self.degree);
        for (idx, e) in monos.iter().enumerate() {
            let c = r.coeffs[idx].clone();
            if c.is_zero() || e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                continue;
            }
            let qe: Vec<u32> = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = &c / &lead_c;
            for (de, dc) in &dterms {
                let te: Vec<u32> = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                r.coeffs[monomial_index(&te)] -= &qc * dc;
            }
        }
        r
    }

    /// True when the two forms differ by a nonzero scalar.
    pub fn proportional(&self, o: &HomogForm) -> bool {
        if self.nvars != o.nvars || self.degree != o.degree || self.is_zero() || o.is_zero() {
            return false;
        }
        let i = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if o.coeffs[i].is_zero() {
            return false;
        }
        let k = &o.coeffs[i] / &self.coeffs[i];
        self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| a * &k == *b)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Positive rescaling to coprime integer coefficients (sign kept).
    pub fn primitive(&self) -> HomogForm {
        if self.is_zero() {
            return self.clone();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        HomogForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: ints.iter().map(|x| Rat::from_integer(x / &g)).collect(),
        }
    }

    /// Primitive with the first nonzero coefficient positive; canonical for
    /// comparing zero loci.
    pub fn normalized(&self) -> HomogForm {
        if self.is_zero() {
            return self.clone();
        }
        let v = normalize_primitive(&self.coeffs).expect("nonzero form");
        HomogForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: v.into_iter().map(Rat::from_integer).collect(),
        }
    }

    /// Integer coefficients; panics when some coefficient is fractional.
    pub fn int_coeffs(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "fractional coefficient");
                c.to_integer()
            })
            .collect()
    }

    /// A form in two variables as a binary form.
    pub fn to_binary(&self) -> BinaryForm {
        assert_eq!(self.nvars, 2);
        BinaryForm::new(self.coeffs.clone())
    }

    pub fn from_binary(b: &BinaryForm) -> HomogForm {
        HomogForm {
            nvars: 2,
            degree: b.degree(),
            coeffs: b.coeffs.clone(),
        }
    }

    /// Symmetric matrix A with Q(v) = vᵀ A v, for quadratic forms.
    pub fn quadratic_matrix(&self) -> Vec<Vec<Rat>> {
        assert_eq!(self.degree, 2, "quadratic_matrix of a non-quadratic form");
        let n = self.nvars;
        let mut a = vec![vec![Rat::zero(); n]; n];
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        for (e, c) in self.terms() {
            let idx: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
            if idx.len() == 1 {
                a[idx[0]][idx[0]] = c;
            } else {
                a[idx[0]][idx[1]] = &c * &half;
                a[idx[1]][idx[0]] = &c * &half;
            }
        }
        a
    }

    /// Text payload: degree, nvars, then coefficients.
    pub fn to_coeff_list(&self) -> String {
        let mut s = format!("{} {}", self.degree, self.nvars);
        for c in &self.coeffs {
            s.push(' ');
            s.push_str(&c.to_string());
        }
        s
    }

    pub fn parse_coeff_list(text: &str) -> Result<HomogForm> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() < 2 {
            return Err(Error::Parse("expected degree and variable count".into()));
        }
        let degree: usize = toks[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree {:?}", toks[0])))?;
        let nvars: usize = toks[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad variable count {:?}", toks[1])))?;
        if !(1..=3).contains(&degree) || !(3..=4).contains(&nvars) {
            return Err(Error::Parse(format!(
                "unsupported degree {degree} / variables {nvars}"
            )));
        }
        let coeffs = toks[2..]
            .iter()
            .map(|t| parse_rat(t))
            .collect::<Result<Vec<_>>>()?;
        HomogForm::new(nvars, degree, coeffs).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Parses expressions such as `z*y^2 - x^3 - 1/2 z^3`.
    pub fn parse_expr(text: &str, nvars: usize) -> Result<HomogForm> {
        let terms = parse_terms(text, nvars)?;
        if terms.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let degree = terms[0].0.iter().map(|&e| e as usize).sum::<usize>();
        let mut f = HomogForm::zero(nvars, degree);
        for (e, c) in terms {
            let d: usize = e.iter().map(|&k| k as usize).sum();
            if d != degree {
                return Err(Error::Parse(format!(
                    "expression {text:?} is not homogeneous"
                )));
            }
            f.coeffs[monomial_index(&e)] += c;
        }
        Ok(f)
    }
}

pub fn parse_rat(t: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("bad rational {t:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rat::new(n, d))
    } else {
        Ok(Rat::from_integer(t.parse().map_err(|_| bad())?))
    }
}

type Poly = std::collections::BTreeMap<Vec<u32>, Rat>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Rat::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Recursive descent over sums, products, powers and parentheses.
struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl ExprParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {}", self.pos))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn constant(&self, c: Rat) -> Poly {
        let mut p = Poly::new();
        if !c.is_zero() {
            p.insert(vec![0; self.nvars], c);
        }
        p
    }

    fn sum(&mut self) -> Result<Poly> {
        let mut acc = Poly::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let t = self.product()?;
            for (e, c) in t {
                *acc.entry(e).or_insert_with(Rat::zero) +=
                    c * Rat::from_integer(BigInt::from(sign));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(acc)
    }

    fn product(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = poly_mul(&acc, &f);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.number()?;
                    if d.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    let k = self.constant(Rat::from_integer(BigInt::from(1)) / d);
                    acc = poly_mul(&acc, &k);
                }
                // implicit product, as in 3x or 2(x + y)
                Some(c) if c == b'(' || c.is_ascii_alphabetic() => {
                    let f = self.power()?;
                    acc = poly_mul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let k: u32 = std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            let mut acc = self.constant(Rat::from_integer(BigInt::from(1)));
            for _ in 0..k {
                acc = poly_mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<Rat> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        parse_rat(std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(self.constant(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let name = (c as char).to_string();
                let i = VAR_NAMES[..self.nvars]
                    .iter()
                    .position(|&v| v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                let mut e = vec![0u32; self.nvars];
                e[i] = 1;
                let mut p = Poly::new();
                p.insert(e, Rat::from_integer(BigInt::from(1)));
                Ok(p)
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}

fn parse_terms(text: &str, nvars: usize) -> Result<Vec<(Vec<u32>, Rat)>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Ok(vec![]);
    }
    let mut p = ExprParser {
        s: s.as_bytes(),
        pos: 0,
        nvars,
    };
    let poly = p.sum()?;
    if p.pos != s.len() {
        return Err(p.err("trailing input"));
    }
    if poly.is_empty() {
        return Err(Error::Parse(format!("expression {text:?} is zero")));
    }
    Ok(poly.into_iter().collect())
}

impl fmt::Display for HomogForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut parts = Vec::new();
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => parts.push(VAR_NAMES[i].to_string()),
                    _ => parts.push(format!("{}^{}", VAR_NAMES[i], p)),
                }
            }
            if !a.is_one() || parts.is_empty() {
                parts.insert(0, a.to_string());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

//! Point generation driven by fibrations: Pell orbits on the conics of one
//! fibration feed seeds to the fibers of the other, and back.

use super::pell::{binary_automorph, fundamental_automorphism, orbit, PellAutomorphism, CF_STEPS};
use super::{
    infinity_type_at, is_integral, line_coordinates, Ambient, InfinityKind, IntegralityContext,
};
use crate::arith::{exact_cbrt, is_s_unit, PrimeSet, Rat};
use crate::error::{Error, Result};
use crate::projgeo::{evaluate, p1_rat, CurvePencil, HomogForm, ProjPoint, P1};
use crate::surface::{project_rho, BlowupSurface, ConicFibration};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

/// Truncation of the infinite constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_points: usize,
    /// Fibers processed per fibration.
    pub max_fibers: usize,
    /// Height bound for seeds and for points handed to the other fibration.
    /// μ orbits stop once they leave it.
    pub height: u64,
    pub orbit_len: usize,
    /// Rounds of μ → λ → μ feedback.
    pub rounds: usize,
    /// Seed for the order in which equally small fibers are visited.
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_points: 5000,
            max_fibers: 64,
            height: 10_000,
            orbit_len: 50,
            rounds: 2,
            seed: 0,
        }
    }
}

impl Budget {
    fn is_zero(&self) -> bool {
        self.max_points == 0 || self.max_fibers == 0 || self.orbit_len == 0
    }
}

/// How fibers are processed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Rayon when the `parallel` feature is on, else sequential.
    #[default]
    Parallel,
}

/// The conic fibration μ on w³ = F and the pencil λ of lines through a
/// point P of D on the blow-up, over the same cubic.
#[derive(Clone, Debug)]
pub struct DoubleFibration {
    pub mu: ConicFibration,
    pub lambda: BlowupSurface,
    pub s: PrimeSet,
}

impl DoubleFibration {
    pub fn new(mu: ConicFibration, lambda: BlowupSurface, s: PrimeSet) -> Result<Self> {
        if mu.surface.base().form() != lambda.d.form() {
            return Err(Error::AmbientMismatch(
                "the two fibrations live over different cubics".into(),
            ));
        }
        Ok(DoubleFibration { mu, lambda, s })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenerationReport {
    /// Integral points found on λ-fibers (for the double fibration: on the
    /// blow-up minus D̂, in plane coordinates).
    pub points: BTreeSet<ProjPoint>,
    /// Integral points of the surface found on μ-fibers.
    pub surface_points: BTreeSet<ProjPoint>,
    pub lambda_counts: BTreeMap<P1, usize>,
    pub mu_counts: BTreeMap<P1, usize>,
    pub threshold: usize,
    pub skipped_degenerate: usize,
    pub skipped_no_automorphism: usize,
    /// Candidates dropped by re-verification.
    pub rejected: usize,
    pub rounds: usize,
    pub budget: Budget,
    /// Not part of the text form, which must be reproducible.
    pub elapsed: Duration,
}

impl GenerationReport {
    fn empty(budget: &Budget, k: usize) -> Self {
        GenerationReport {
            threshold: k,
            budget: budget.clone(),
            ..Default::default()
        }
    }

    pub fn fibers_at_least(&self, k: usize) -> usize {
        self.lambda_counts.values().filter(|&&c| c >= k).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let b = &self.budget;
        let _ = writeln!(s, "points: {}", self.points.len());
        let _ = writeln!(s, "surface_points: {}", self.surface_points.len());
        let _ = writeln!(s, "lambda_fibers: {}", self.lambda_counts.len());
        let _ = writeln!(s, "mu_fibers: {}", self.mu_counts.len());
        let _ = writeln!(s, "threshold: {}", self.threshold);
        let _ = writeln!(
            s,
            "fibers_at_threshold: {}",
            self.fibers_at_least(self.threshold)
        );
        let _ = writeln!(s, "skipped_degenerate: {}", self.skipped_degenerate);
        let _ = writeln!(
            s,
            "skipped_no_automorphism: {}",
            self.skipped_no_automorphism
        );
        let _ = writeln!(s, "rejected: {}", self.rejected);
        let _ = writeln!(s, "rounds: {}", self.rounds);
        let _ = writeln!(
            s,
            "budget: points={} fibers={} height={} orbit={} rounds={} seed={}",
            b.max_points, b.max_fibers, b.height, b.orbit_len, b.rounds, b.seed
        );
        let tuple = |p: &ProjPoint| {
            p.coords()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        s.push_str("[lambda]\n");
        for ((a, c), n) in &self.lambda_counts {
            let _ = writeln!(s, "{a} {c} {n}");
        }
        s.push_str("[mu]\n");
        for ((a, c), n) in &self.mu_counts {
            let _ = writeln!(s, "{a} {c} {n}");
        }
        s.push_str("[points]\n");
        for p in &self.points {
            let _ = writeln!(s, "{}", tuple(p));
        }
        s.push_str("[surface_points]\n");
        for p in &self.surface_points {
            let _ = writeln!(s, "{}", tuple(p));
        }
        s
    }
}

fn map_items<T, U, F>(items: &[T], exec: Exec, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

fn p1_height(u: &P1) -> BigInt {
    u.0.abs().max(u.1.abs())
}

/// Seeded shuffle, then stable sort by the height of the fiber parameter,
/// truncated to `cap`.
fn order_fibers<T>(mut items: Vec<(P1, T)>, seed: u64, cap: usize) -> Vec<(P1, T)> {
    items.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    items.sort_by_key(|(u, _)| p1_height(u));
    items.truncate(cap);
    items
}

enum Outcome {
    Points(P1, Vec<ProjPoint>, usize),
    Degenerate,
    NoAutomorphism,
}

fn unit(v: &BigInt, s: &PrimeSet) -> bool {
    !v.is_zero() && is_s_unit(v, s).unwrap_or(false)
}

fn orbit_within(
    p: &ProjPoint,
    t: &PellAutomorphism,
    n: usize,
    hb: &BigInt,
) -> Result<Vec<ProjPoint>> {
    let mut out = orbit(p, t, 1)?;
    while out.len() < n {
        let q = t.apply(out.last().expect("orbit starts at p"))?;
        if &q.height() > hb || q == *p {
            break;
        }
        out.push(q);
    }
    Ok(out)
}

/// Pell orbit on the μ-fiber through a surface point, lifted back to S.
fn mu_fiber(
    df: &DoubleFibration,
    seed: &ProjPoint,
    n: usize,
    hb: &BigInt,
    sctx: &IntegralityContext,
) -> Result<Outcome> {
    let c = df.mu.fiber_through(seed)?;
    if c.degenerate {
        return Ok(Outcome::Degenerate);
    }
    let (a, b) = p1_rat(&c.u);
    // w = N/b on the plane of the fiber
    let nform = df
        .mu
        .axis
        .mform
        .scale(&b)
        .sub(&df.mu.axis.flexline.scale(&a));
    let base = c
        .base_point
        .clone()
        .expect("fiber_through sets the base point");
    let inf = infinity_type_at(&c.plane_conic, &nform.primitive(), &base)?;
    if !matches!(
        inf.kind,
        InfinityKind::QuadraticRealPair
            | InfinityKind::QuadraticImaginaryPair
            | InfinityKind::TwoRational
    ) {
        return Ok(Outcome::NoAutomorphism);
    }
    let pctx = IntegralityContext::plane(&nform.primitive(), df.s.clone())?;
    let Some(t) = fundamental_automorphism(&c.plane_conic, &inf, &pctx)? else {
        return Ok(Outcome::NoAutomorphism);
    };
    let mut pts = Vec::new();
    let mut rejected = 0;
    // ρ of a lift is x itself: past the height bound it cannot seed λ
    for x in orbit_within(&base, &t, n, hb)? {
        let mut v: Vec<Rat> = x.as_rats().iter().map(|xi| xi * &b).collect();
        v.push(evaluate(&nform, &x)?);
        let q = ProjPoint::new(&v)?;
        match is_integral(&q, sctx) {
            Ok(true) => pts.push(q),
            _ => rejected += 1,
        }
    }
    Ok(Outcome::Points(c.u, pts, rejected))
}

/// Orbit of the automorph of the residual quadratic on the λ-line through
/// a plane point x₀.
fn lambda_fiber(
    df: &DoubleFibration,
    x0: &ProjPoint,
    n: usize,
    bctx: &IntegralityContext,
) -> Result<Outcome> {
    let x = &df.lambda;
    let u = x.lambda_of_point(x0)?;
    let fib = x.lambda_fiber(&u)?;
    if fib.degenerate {
        return Ok(Outcome::Degenerate);
    }
    let p = x.p.coords();
    let neg: Vec<BigInt> = x0.coords().iter().map(|c| -c).collect();
    let (mut s, mut t) = line_coordinates(p, &fib.v, x0.coords())
        .or_else(|| line_coordinates(p, &fib.v, &neg))
        .ok_or_else(|| Error::InvalidInput(format!("{x0} is not on its λ-line")))?;
    let Some(g) = binary_automorph(&fib.residual, CF_STEPS) else {
        return Ok(Outcome::NoAutomorphism);
    };
    let mut pts = Vec::new();
    let mut rejected = 0;
    for _ in 0..n {
        if !t.is_zero() {
            let q = fib.point(&x.p, &s, &t)?;
            match is_integral(&q, bctx) {
                Ok(true) => pts.push(q),
                _ => rejected += 1,
            }
        }
        let s2 = &g[0][0] * &s + &g[0][1] * &t;
        let t2 = &g[1][0] * &s + &g[1][1] * &t;
        (s, t) = (s2, t2);
    }
    Ok(Outcome::Points(u, pts, rejected))
}

fn lift_plane_seed(p: &ProjPoint, f: &HomogForm, s: &PrimeSet) -> Result<Option<ProjPoint>> {
    let v = evaluate(f, p)?.to_integer();
    if !unit(&v, s) {
        return Ok(None);
    }
    Ok(exact_cbrt(&v).map(|w| {
        let mut c = p.coords().to_vec();
        c.push(w);
        ProjPoint::from_big(&c).expect("nonzero")
    }))
}

pub fn double_fibration_generate(
    df: &DoubleFibration,
    seeds: &[ProjPoint],
    budget: &Budget,
    k: usize,
) -> Result<GenerationReport> {
    double_fibration_generate_with(df, seeds, budget, k, Exec::default())
}

/// Alternates the two stages: Pell orbits on the μ-fibers of the surface
/// seeds; λ-lines through the projected points of height within budget, each
/// populated by the unit action on its residual quadratic; λ-points that are
/// integral in the plane return to the surface as new μ-seeds.
pub fn double_fibration_generate_with(
    df: &DoubleFibration,
    seeds: &[ProjPoint],
    budget: &Budget,
    k: usize,
    exec: Exec,
) -> Result<GenerationReport> {
    let start = Instant::now();
    let mut rep = GenerationReport::empty(budget, k);
    if seeds.is_empty() || budget.is_zero() {
        return Ok(rep);
    }
    let f = df.lambda.d.form().clone();
    let sctx = IntegralityContext::surface(&df.lambda.d, df.s.clone());
    let pctx = IntegralityContext::plane(&f, df.s.clone())?;
    let bctx = IntegralityContext::blowup(&df.lambda.d, &df.lambda.p, df.s.clone(), false)?;
    let mut mu_seeds: Vec<ProjPoint> = Vec::new();
    for p in seeds {
        let q = match p.dim() {
            2 => {
                if !is_integral(p, &pctx)? {
                    return Err(Error::Precondition(format!("seed {p} is not integral")));
                }
                lift_plane_seed(p, &f, &df.s)?.ok_or_else(|| {
                    Error::Precondition(format!("seed {p} does not lift to the surface"))
                })?
            }
            _ => p.clone(),
        };
        if !is_integral(&q, &sctx)? {
            return Err(Error::Precondition(format!("seed {q} is not integral")));
        }
        mu_seeds.push(q);
    }
    let hb = BigInt::from(budget.height);
    let mut mu_seen: BTreeSet<P1> = BTreeSet::new();
    let mut lambda_seen: BTreeSet<P1> = BTreeSet::new();
    let mut full = false;
    for round in 0..budget.rounds.max(1) {
        rep.rounds = round + 1;
        let mut pool: BTreeSet<ProjPoint> = BTreeSet::new();
        for q in &mu_seeds {
            let x = project_rho(q)?;
            if x.height() <= hb {
                pool.insert(x);
            }
        }
        // μ stage
        let batch = std::mem::take(&mut mu_seeds);
        let params = map_items(&batch, exec, |q| df.mu.mu_of_point(q).ok());
        let mut fresh: BTreeMap<P1, ProjPoint> = BTreeMap::new();
        for (q, u) in batch.into_iter().zip(params) {
            if let Some(u) = u.filter(|u| !mu_seen.contains(u)) {
                fresh.entry(u).or_insert(q);
            }
        }
        let cands: Vec<(P1, ProjPoint)> = fresh.into_iter().collect();
        let cap = budget.max_fibers.saturating_sub(mu_seen.len());
        let cands = order_fibers(cands, budget.seed ^ (2 * round as u64), cap);
        let outs = map_items(&cands, exec, |(_, q)| {
            mu_fiber(df, q, budget.orbit_len, &hb, &sctx)
        });
        for ((u, _), out) in cands.iter().zip(outs) {
            mu_seen.insert(u.clone());
            match out {
                Ok(Outcome::Points(u, pts, rej)) => {
                    rep.rejected += rej;
                    rep.mu_counts.insert(u, pts.len());
                    for q in pts {
                        let x = project_rho(&q)?;
                        if x.height() <= hb {
                            pool.insert(x);
                        }
                        rep.surface_points.insert(q);
                    }
                }
                Ok(Outcome::Degenerate) => rep.skipped_degenerate += 1,
                Ok(Outcome::NoAutomorphism) | Err(_) => rep.skipped_no_automorphism += 1,
            }
        }
        // λ stage
        let mut fresh: BTreeMap<P1, ProjPoint> = BTreeMap::new();
        for x in pool {
            if x == df.lambda.p {
                continue;
            }
            let u = df.lambda.lambda_of_point(&x)?;
            if !lambda_seen.contains(&u) {
                fresh.entry(u).or_insert(x);
            }
        }
        let cands: Vec<(P1, ProjPoint)> = fresh.into_iter().collect();
        let cap = budget.max_fibers.saturating_sub(lambda_seen.len());
        let cands = order_fibers(cands, budget.seed ^ (2 * round as u64 + 1), cap);
        let outs = map_items(&cands, exec, |(_, x)| {
            lambda_fiber(df, x, budget.orbit_len, &bctx)
        });
        for ((u, _), out) in cands.iter().zip(outs) {
            lambda_seen.insert(u.clone());
            match out {
                Ok(Outcome::Points(u, pts, rej)) => {
                    rep.rejected += rej;
                    let mut count = 0;
                    for q in pts {
                        if rep.points.len() >= budget.max_points {
                            full = true;
                            break;
                        }
                        if let Some(lift) = lift_plane_seed(&q, &f, &df.s)? {
                            mu_seeds.push(lift);
                        }
                        if rep.points.insert(q) {
                            count += 1;
                        }
                    }
                    if count > 0 {
                        *rep.lambda_counts.entry(u).or_insert(0) += count;
                    }
                }
                Ok(Outcome::Degenerate) => rep.skipped_degenerate += 1,
                Ok(Outcome::NoAutomorphism) | Err(_) => rep.skipped_no_automorphism += 1,
            }
        }
        if full || mu_seeds.is_empty() {
            break;
        }
    }
    rep.elapsed = start.elapsed();
    Ok(rep)
}

/// Fibers of a pencil meeting the divisor in one point: each member through
/// a seed is parametrized with that point sent to [1:0], where the divisor
/// pulls back to a multiple of a power of t, and the points ψ(s, 1) are
/// re-verified one by one.
pub fn single_fibration_generate(
    pencil: &CurvePencil,
    ctx: &IntegralityContext,
    seeds: &[ProjPoint],
    budget: &Budget,
    k: usize,
) -> Result<GenerationReport> {
    let start = Instant::now();
    let mut rep = GenerationReport::empty(budget, k);
    if ctx.ambient != Ambient::PlaneModD {
        return Err(Error::AmbientMismatch(
            "single-fibration generation runs in the plane model".into(),
        ));
    }
    if seeds.is_empty() || budget.is_zero() {
        return Ok(rep);
    }
    if pencil.degree() != 2 || pencil.g.nvars() != 3 {
        return Err(Error::InvalidInput(
            "a pencil of plane conics is expected".into(),
        ));
    }
    let mut cands: Vec<(P1, ProjPoint)> = Vec::new();
    for p in seeds {
        if !is_integral(p, ctx)? {
            continue;
        }
        let (a, b) = pencil.member_through(p)?;
        let u = crate::projgeo::p1_of(&a, &b);
        if !cands.iter().any(|(v, _)| *v == u) {
            cands.push((u, p.clone()));
        }
    }
    let cands = order_fibers(cands, budget.seed, budget.max_fibers);
    let mut one_point = 0usize;
    for (u, p) in &cands {
        let (a, b) = p1_rat(u);
        let c = pencil.member(&a, &b);
        if crate::projgeo::linalg::det(&c.quadratic_matrix()).is_zero() {
            rep.skipped_degenerate += 1;
            continue;
        }
        let inf = infinity_type_at(&c, &ctx.divisor, p)?;
        if !matches!(inf.kind, InfinityKind::OneRational | InfinityKind::Tangency) {
            rep.skipped_no_automorphism += 1;
            continue;
        }
        one_point += 1;
        // move the root of the support to [1:0] by a unimodular change
        let (c0, c1) = (
            inf.support.coeffs[0].to_integer(),
            inf.support.coeffs[1].to_integer(),
        );
        let (s0, t0) = (c1.clone(), -c0.clone());
        let (_, x, y) = crate::projgeo::linalg::ext_gcd(&s0, &t0);
        // s0·x + t0·y = 1, so [[s0, −y], [t0, x]] has determinant 1
        let col2 = (-y, x);
        let mut count = 0usize;
        let mut j: i64 = 0;
        while count < budget.orbit_len && j.unsigned_abs() <= budget.height {
            let s = BigInt::from(j);
            let ps = Rat::from_integer(&s0 * &s + &col2.0);
            let pt = Rat::from_integer(&t0 * &s + &col2.1);
            j = if j > 0 { -j } else { 1 - j };
            let Ok(q) = inf.param.point_at(&ps, &pt) else {
                continue;
            };
            match is_integral(&q, ctx) {
                Ok(true) => {
                    if rep.points.len() >= budget.max_points {
                        break;
                    }
                    if rep.points.insert(q) {
                        count += 1;
                    }
                }
                _ => rep.rejected += 1,
            }
        }
        if count > 0 {
            rep.lambda_counts.insert(u.clone(), count);
        }
    }
    if !cands.is_empty() && one_point == 0 {
        return Err(Error::Precondition(
            "no seed fiber meets the divisor in a single point".into(),
        ));
    }
    rep.rounds = 1;
    rep.elapsed = start.elapsed();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::PlaneCubic;
    use crate::surface::{osculating_pencil, rational_lines, CubicSurface};

    fn form(s: &str) -> HomogForm {
        HomogForm::parse_expr(s, 3).unwrap()
    }

    fn worked() -> DoubleFibration {
        let d = PlaneCubic::parse("z*y^2 - x^3 - z^3").unwrap();
        let s = CubicSurface::new(d.clone());
        let l1 = rational_lines(&s)
            .unwrap()
            .into_iter()
            .find(|l| l.flexline.proportional(&form("z")))
            .unwrap();
        let mu = ConicFibration::new(s, l1).unwrap();
        let x = BlowupSurface::new(d, ProjPoint::from_ints(&[2, 3, 1]).unwrap()).unwrap();
        DoubleFibration::new(mu, x, PrimeSet::empty()).unwrap()
    }

    fn seeds(n: i64) -> Vec<ProjPoint> {
        (-n..=n)
            .map(|i| ProjPoint::from_ints(&[1, i, 0, -1]).unwrap())
            .collect()
    }

    #[test]
    fn small_run_is_verified_and_deterministic() {
        let df = worked();
        let b = Budget {
            max_points: 400,
            max_fibers: 8,
            height: 100,
            orbit_len: 10,
            rounds: 2,
            seed: 7,
        };
        let r = double_fibration_generate_with(&df, &seeds(4), &b, 5, Exec::Sequential).unwrap();
        assert!(!r.points.is_empty());
        let bctx = IntegralityContext::blowup(&df.lambda.d, &df.lambda.p, PrimeSet::empty(), false)
            .unwrap();
        for p in &r.points {
            assert!(is_integral(p, &bctx).unwrap());
        }
        let sctx = IntegralityContext::surface(&df.lambda.d, PrimeSet::empty());
        for p in &r.surface_points {
            assert!(is_integral(p, &sctx).unwrap());
        }
        let again = double_fibration_generate_with(&df, &seeds(4), &b, 5, Exec::Parallel).unwrap();
        assert_eq!(r.to_text(), again.to_text());
    }

    #[test]
    fn empty_inputs() {
        let df = worked();
        let b = Budget::default();
        assert!(double_fibration_generate(&df, &[], &b, 5)
            .unwrap()
            .points
            .is_empty());
        let zero = Budget {
            max_points: 0,
            ..Budget::default()
        };
        assert!(double_fibration_generate(&df, &seeds(2), &zero, 5)
            .unwrap()
            .points
            .is_empty());
        let off = ProjPoint::from_ints(&[2, 3, 1, 0]).unwrap();
        assert!(double_fibration_generate(&df, &[off], &b, 5).is_err());
    }

    #[test]
    fn osculating_pencil_fibers() {
        // D = L·C with L = x tangent to C = xz − y² at Q = [0:0:1]
        let c = form("x*z - y^2");
        let l = form("x");
        let pencil = osculating_pencil(&c, &l, &ProjPoint::from_ints(&[0, 0, 1]).unwrap()).unwrap();
        let ctx = IntegralityContext::plane(&l.mul(&c), PrimeSet::empty()).unwrap();
        // x = 1 and xz − y² = ±1
        let seeds: Vec<ProjPoint> = (1..4)
            .flat_map(|n| [[1, n, n * n + 1], [1, n, n * n - 1]])
            .map(|c| ProjPoint::from_ints(&c).unwrap())
            .collect();
        let b = Budget {
            max_points: 500,
            max_fibers: 10,
            height: 200,
            orbit_len: 12,
            rounds: 1,
            seed: 1,
        };
        let r = single_fibration_generate(&pencil, &ctx, &seeds, &b, 5).unwrap();
        assert!(!r.points.is_empty());
        for p in &r.points {
            assert!(is_integral(p, &ctx).unwrap());
        }
        assert!(single_fibration_generate(
            &pencil,
            &ctx,
            &seeds,
            &Budget { max_points: 0, ..b },
            5
        )
        .unwrap()
        .points
        .is_empty());
    }
}

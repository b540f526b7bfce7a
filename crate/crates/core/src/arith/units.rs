use super::{exact_sqrt, QuadElem, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Writes n = f²·d with d squarefree up to the trial-division limit.
///
/// Primes below 10⁶ are removed exactly; a remaining cofactor is kept in d
/// unless it is itself a perfect square.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut f = BigInt::one();
    let mut d = BigInt::from(sign);
    if let Some(small) = m.to_u64() {
        let (ff, dd) = squarefree_u64(small);
        return (BigInt::from(ff), BigInt::from(sign) * BigInt::from(dd));
    }
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0u32;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            f *= bp.pow(e / 2);
            if e % 2 == 1 {
                d *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(r) = exact_sqrt(&m) {
        f *= r;
    } else {
        d *= m;
    }
    (f, d)
}

fn squarefree_u64(mut m: u64) -> (u64, u64) {
    let mut f = 1u64;
    let mut d = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m && p <= TRIAL_LIMIT {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            f *= p;
        }
        if e % 2 == 1 {
            d *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = (m as f64).sqrt() as u64;
    let r = (r.saturating_sub(2)..=r + 2).find(|x| x * x == m);
    match r {
        Some(r) if m > 1 => f *= r,
        _ => d *= m,
    }
    (f, d)
}

/// Fundamental unit ε > 1 of the maximal order of ℚ(√d), d > 1 squarefree.
///
/// Runs the continued fraction of ω (√d, or (1+√d)/2 when d ≡ 1 mod 4) and
/// stops at the first convergent p/q with N(p − qω) = ±1. Returns `None` when
/// no unit shows up within `max_steps` partial quotients.
pub fn fundamental_unit(d: &BigInt, max_steps: usize) -> Option<QuadElem> {
    assert!(d > &BigInt::one());
    let four = BigInt::from(4);
    let one_mod_four = (d.mod_floor(&four)).is_one();
    let sq = d.sqrt();
    let (mut pk, mut qk) = if one_mod_four {
        (BigInt::one(), BigInt::from(2))
    } else {
        (BigInt::zero(), BigInt::one())
    };
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    for _ in 0..max_steps {
        let a = (&pk + &sq).div_floor(&qk);
        let p_next = &a * &p_cur + &p_prev;
        let q_next = &a * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        let norm = if one_mod_four {
            // (p − q/2)² − d q²/4, times 4.
            let t = BigInt::from(2) * &p_cur - &q_cur;
            (&t * &t - d * &q_cur * &q_cur) / &four
        } else {
            &p_cur * &p_cur - d * &q_cur * &q_cur
        };
        if norm.abs().is_one() {
            // ε = p − q·conj(ω)
            let eps = if one_mod_four {
                QuadElem::new_unchecked(
                    Rat::new(BigInt::from(2) * &p_cur - &q_cur, BigInt::from(2)),
                    Rat::new(q_cur.clone(), BigInt::from(2)),
                    d.clone(),
                )
            } else {
                QuadElem::new_unchecked(
                    Rat::from_integer(p_cur.clone()),
                    Rat::from_integer(q_cur.clone()),
                    d.clone(),
                )
            };
            return Some(eps);
        }
        let p_next = &a * &qk - &pk;
        let q_next = (d - &p_next * &p_next) / &qk;
        pk = p_next;
        qk = q_next;
    }
    None
}

//! Small dense linear algebra over ℚ and ℤ.

use crate::arith::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type RatMatrix = Vec<Vec<Rat>>;
pub type IntMatrix = Vec<Vec<BigInt>>;

/// Determinant by Gaussian elimination.
pub fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let mut a: RatMatrix = m.to_vec();
    let mut sign = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            a.swap(piv, col);
            sign = -sign;
        }
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    (0..n).fold(sign, |acc, i| acc * &a[i][i])
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(a: &mut RatMatrix) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return vec![];
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = Rat::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of the right null space {v : m·v = 0}.
pub fn nullspace(m: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -a[i][free].clone();
        }
        out.push(v);
    }
    out
}

pub fn inverse(m: &[Vec<Rat>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> RatMatrix {
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| (0..k).fold(Rat::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rat::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

pub fn int_mat_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

pub fn int_mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| (0..k).fold(BigInt::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn to_rat_matrix(a: &[Vec<BigInt>]) -> RatMatrix {
    a.iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Extended gcd: (g, x, y) with a·x + b·y = g ≥ 0.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// ℤ-basis of the lattice {v ∈ ℤⁿ : rows·v = 0}, via unimodular column
/// operations. The result is saturated.
pub fn int_kernel(rows: &[Vec<BigInt>], n: usize) -> IntMatrix {
    // u holds the accumulated column transform as a list of columns.
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut k = 0;
    for row in rows {
        if k == n {
            break;
        }
        let img = |col: &Vec<BigInt>| {
            row.iter()
                .zip(col)
                .fold(BigInt::zero(), |a, (x, y)| a + x * y)
        };
        let mut vals: Vec<BigInt> = u.iter().map(img).collect();
        // Fold all entries j ≥ k into column k by gcd steps.
        for j in k + 1..n {
            if vals[j].is_zero() {
                continue;
            }
            if vals[k].is_zero() {
                u.swap(k, j);
                vals.swap(k, j);
                continue;
            }
            let (g, x, y) = ext_gcd(&vals[k], &vals[j]);
            let a = &vals[k] / &g;
            let b = &vals[j] / &g;
            let ck = u[k].clone();
            let cj = u[j].clone();
            u[k] = ck.iter().zip(&cj).map(|(p, q)| &x * p + &y * q).collect();
            u[j] = ck.iter().zip(&cj).map(|(p, q)| &a * q - &b * p).collect();
            vals[k] = g;
            vals[j] = BigInt::zero();
        }
        if !vals[k].is_zero() {
            k += 1;
        }
    }
    let mut basis: IntMatrix = u[k..].to_vec();
    size_reduce(&mut basis);
    basis
}

/// Light size reduction so kernel bases stay readable.
fn size_reduce(b: &mut IntMatrix) {
    let norm = |v: &Vec<BigInt>| v.iter().fold(BigInt::zero(), |a, x| a + x * x);
    for _ in 0..8 {
        let mut changed = false;
        for i in 0..b.len() {
            for j in 0..b.len() {
                if i == j {
                    continue;
                }
                let nj = norm(&b[j]);
                if nj.is_zero() {
                    continue;
                }
                let dot = b[i]
                    .iter()
                    .zip(&b[j])
                    .fold(BigInt::zero(), |a, (x, y)| a + x * y);
                // nearest integer to dot / nj
                let q = (BigInt::from(2) * &dot + &nj).div_floor(&(BigInt::from(2) * &nj));
                if !q.is_zero() {
                    let bj = b[j].clone();
                    for (x, y) in b[i].iter_mut().zip(&bj) {
                        *x -= &q * y;
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Saturation of the ℤ-span of the given vectors.
pub fn saturate(vectors: &[Vec<BigInt>], n: usize) -> IntMatrix {
    let dual = int_kernel(vectors, n);
    int_kernel(&dual, n)
}

/// Completes a primitive vector p of the saturated rank-2 lattice spanned by
/// `basis` to a basis (p, v) of that lattice.
pub fn complete_basis(p: &[BigInt], basis: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    assert_eq!(basis.len(), 2);
    let b = to_rat_matrix(&transpose(basis));
    // Solve p = α b0 + β b1 over ℚ using two independent coordinates.
    let n = p.len();
    for i in 0..n {
        for j in i + 1..n {
            let m = vec![
                vec![b[i][0].clone(), b[i][1].clone()],
                vec![b[j][0].clone(), b[j][1].clone()],
            ];
            let d = det(&m);
            if d.is_zero() {
                continue;
            }
            let pi = Rat::from_integer(p[i].clone());
            let pj = Rat::from_integer(p[j].clone());
            let alpha = (&pi * &m[1][1] - &pj * &m[0][1]) / &d;
            let beta = (&m[0][0] * &pj - &m[1][0] * &pi) / &d;
            if !alpha.is_integer() || !beta.is_integer() {
                return None;
            }
            let (alpha, beta) = (alpha.to_integer(), beta.to_integer());
            let (g, x, y) = ext_gcd(&alpha, &beta);
            if !g.is_one() {
                return None;
            }
            // α·x + β·y = 1, so (−y, x) completes (α, β) to a unimodular matrix.
            let v: Vec<BigInt> = (0..n)
                .map(|k| -&y * &basis[0][k] + &x * &basis[1][k])
                .collect();
            return Some(v);
        }
    }
    None
}

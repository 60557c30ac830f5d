//! Exact linear algebra over `Q` by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Rat = BigRational;

/// Echelon form of an integer matrix with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    /// Parity of the row swaps performed.
    pub swaps: usize,
}

/// Scales each row by the lcm of its denominators.
///
/// Returns the integer matrix and the product of the scale factors.
pub fn integer_rows(m: &[Vec<Rat>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    (rows, scale)
}

/// Bareiss elimination; every stored entry is a minor of the input.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> Echelon {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if piv != r {
            a.swap(piv, r);
            swaps += 1;
        }
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows: a,
        pivots,
        swaps,
    }
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    bareiss(integer_rows(m).0).pivots.len()
}

/// Determinant of a square matrix.
pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    assert!(
        m.iter().all(|r| r.len() == n),
        "determinant of a non-square matrix"
    );
    if n == 0 {
        return Rat::one();
    }
    let (rows, scale) = integer_rows(m);
    let e = bareiss(rows);
    if e.pivots.len() < n {
        return Rat::zero();
    }
    let mut det = e.rows[n - 1][n - 1].clone();
    if e.swaps % 2 == 1 {
        det = -det;
    }
    Rat::new(det, scale)
}

/// Primitive integer basis of the right null space, one vector per free
/// column, each with positive leading entry.
pub fn null_space(m: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    let ncols = m.first().map_or(0, Vec::len);
    let e = bareiss(integer_rows(m).0);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); ncols];
            x[f] = Rat::one();
            for (r, &pc) in e.pivots.iter().enumerate().rev() {
                let row = &e.rows[r];
                let s: Rat = (pc + 1..ncols)
                    .map(|j| Rat::from_integer(row[j].clone()) * &x[j])
                    .fold(Rat::zero(), |a, b| a + b);
                x[pc] = -s / Rat::from_integer(row[pc].clone());
            }
            primitive(&x)
        })
        .collect()
}

/// Clears denominators and removes the content; leading entry positive.
pub fn primitive(x: &[Rat]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut v: Vec<BigInt> = x.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    if !g.is_zero() {
        for a in v.iter_mut() {
            *a = &*a / &g;
        }
    }
    if v.iter()
        .find(|a| !a.is_zero())
        .is_some_and(|a| a.is_negative())
    {
        for a in v.iter_mut() {
            *a = -&*a;
        }
    }
    v
}

/// Indices of a maximal set of linearly independent columns.
pub fn independent_columns(m: &[Vec<Rat>]) -> Vec<usize> {
    bareiss(integer_rows(m).0).pivots
}

pub fn principal_submatrix(m: &[Vec<Rat>], idx: &[usize]) -> Vec<Vec<Rat>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect())
        .collect()
}

pub fn is_symmetric(m: &[Vec<Rat>]) -> bool {
    let n = m.len();
    (0..n).all(|i| m[i].len() == n && (0..i).all(|j| m[i][j] == m[j][i]))
}

/// Leading principal minors `1..=n`.
pub fn leading_minors(m: &[Vec<Rat>]) -> Vec<Rat> {
    (1..=m.len())
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            determinant(&principal_submatrix(m, &idx))
        })
        .collect()
}

/// Positive semidefiniteness of a symmetric matrix: restricted to a maximal
/// independent set of columns it must be positive definite (Sylvester).
pub fn is_positive_semidefinite(m: &[Vec<Rat>]) -> bool {
    if !is_symmetric(m) {
        return false;
    }
    let idx = independent_columns(m);
    let sub = principal_submatrix(m, &idx);
    leading_minors(&sub).iter().all(|d| d.is_positive())
}

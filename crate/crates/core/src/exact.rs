//! Exact rational arithmetic helpers shared across the crate.
//!
//! All Lie-theoretic data (Killing pairings, module weights, lattice
//! certificates) is kept in `BigRational` so that the algebraic identities
//! asserted by the test suite hold exactly, not up to rounding.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_usize(n: usize) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact conversion of a finite `f64` (every finite double is rational).
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of approximations for extreme magnitudes.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `"p/q"` or `"p"` (used by CLI weight/coefficient flags).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.trim().parse().ok()?;
            let den: BigInt = q.trim().parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Rat::new(num, den))
            }
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(num))
        }
    }
}

/// Dense exact LU factorization with row pivoting (first nonzero pivot).
///
/// The matrices solved here are tiny (rank of the algebra, dimension of a
/// tangent basis), so a textbook elimination is plenty.
pub struct RatLu {
    n: usize,
    lu: Vec<Vec<Rat>>,
    perm: Vec<usize>,
}

impl RatLu {
    /// Returns `None` when the matrix is singular.
    pub fn new(a: &[Vec<Rat>]) -> Option<Self> {
        let n = a.len();
        let mut lu: Vec<Vec<Rat>> = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !lu[r][col].is_zero())?;
            lu.swap(col, pivot_row);
            perm.swap(col, pivot_row);
            let pivot = lu[col][col].clone();
            for r in col + 1..n {
                if lu[r][col].is_zero() {
                    continue;
                }
                let factor = &lu[r][col] / &pivot;
                for c in col..n {
                    let delta = &factor * &lu[col][c];
                    lu[r][c] = &lu[r][c] - &delta;
                }
                lu[r][col] = factor;
            }
        }
        Some(RatLu { n, lu, perm })
    }

    pub fn solve(&self, rhs: &[Rat]) -> Vec<Rat> {
        assert_eq!(rhs.len(), self.n, "rhs length mismatch");
        let mut y: Vec<Rat> = self.perm.iter().map(|&p| rhs[p].clone()).collect();
        for r in 1..self.n {
            for c in 0..r {
                let delta = &self.lu[r][c] * &y[c];
                y[r] = &y[r] - &delta;
            }
        }
        for r in (0..self.n).rev() {
            for c in r + 1..self.n {
                let delta = &self.lu[r][c] * &y[c];
                y[r] = &y[r] - &delta;
            }
            y[r] = &y[r] / &self.lu[r][r];
        }
        y
    }
}

/// Solves `sum_j x_j * cols[j] = rhs` exactly for a (possibly tall) system.
///
/// On success returns the coordinates; on inconsistency returns the residual
/// `rhs - A x` of the least-squares-free partial solve, which is a concrete
/// witness that `rhs` is outside the column span.
pub fn solve_in_span(cols: &[Vec<Rat>], rhs: &[Rat]) -> Result<Vec<Rat>, Vec<Rat>> {
    let m = rhs.len();
    let k = cols.len();
    if k == 0 {
        return if rhs.iter().all(Rat::is_zero) {
            Ok(Vec::new())
        } else {
            Err(rhs.to_vec())
        };
    }
    for col in cols {
        assert_eq!(col.len(), m, "column length mismatch");
    }
    // Augmented elimination on the m x (k+1) system.
    let mut aug: Vec<Vec<Rat>> = (0..m)
        .map(|r| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..k {
        let Some(pr) = (row..m).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, pr);
        let pivot = aug[row][col].clone();
        for c in col..=k {
            aug[row][c] = &aug[row][c] / &pivot;
        }
        for r in 0..m {
            if r != row && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in col..=k {
                    let delta = &factor * &aug[row][c];
                    aug[r][c] = &aug[r][c] - &delta;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    // Inconsistent when a zero row has nonzero rhs.
    if aug.iter().skip(row).any(|r| !r[k].is_zero()) {
        let mut x = vec![Rat::zero(); k];
        for (r, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = aug[r][k].clone();
        }
        let mut residual = rhs.to_vec();
        for (j, col) in cols.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for r in 0..m {
                let delta = &x[j] * &col[r];
                residual[r] = &residual[r] - &delta;
            }
        }
        return Err(residual);
    }
    let mut x = vec![Rat::zero(); k];
    for (r, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = aug[r][k].clone();
    }
    Ok(x)
}

/// Rank of an exact matrix given as a list of row vectors.
pub fn rat_rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let m = a.len();
    let n = a[0].len();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let pivot = a[rank][col].clone();
        for r in rank + 1..m {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &a[rank][c];
                a[r][c] = &a[r][c] - &delta;
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// Smallest positive integer `lambda` such that `lambda * q` is an integer
/// for every entry of `q` (lcm of reduced denominators).
pub fn integer_clearing_factor(q: &[Rat]) -> BigInt {
    let mut lambda = BigInt::one();
    for x in q {
        let den = x.denom();
        let g = num::integer::gcd(lambda.clone(), den.clone());
        lambda = lambda / g * den;
    }
    lambda.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        let a = vec![
            vec![rat(2, 1), rat(1, 1)],
            vec![rat(1, 1), rat(3, 1)],
        ];
        let lu = RatLu::new(&a).unwrap();
        let x = lu.solve(&[rat(5, 1), rat(10, 1)]);
        assert_eq!(x, vec![rat(1, 1), rat(3, 1)]);
    }

    #[test]
    fn lu_detects_singular() {
        let a = vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(4, 1)],
        ];
        assert!(RatLu::new(&a).is_none());
    }

    #[test]
    fn span_solve_consistent_and_witness() {
        let cols = vec![
            vec![rat(2, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(2, 1)],
        ];
        let x = solve_in_span(&cols, &[rat(2, 1), rat(2, 1), rat(2, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        let err = solve_in_span(&cols, &[rat(1, 1), rat(0, 1), rat(0, 1)]).unwrap_err();
        assert!(err.iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn clearing_factor() {
        let q = vec![rat(3, 8), rat(1, 2), rat(3, 8)];
        assert_eq!(integer_clearing_factor(&q), BigInt::from(8));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-5").unwrap(), rat(-5, 1));
        assert_eq!(parse_rat(" 7 / 2 ").unwrap(), rat(7, 2));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }
}

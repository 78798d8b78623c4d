//! Exact rational scalars, vectors and matrices.
//!
//! Everything here is over `BigRational`; there is no floating point in the
//! crate. Rationals print as `"p"` or `"p/q"`, which is also the literal
//! format accepted by [`parse_rat`].

use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"-3"`, `"+4"` or `"-3/7"`. Decimal points and exponents are rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Rational(s.to_string());
    let int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(int(s)?)),
        Some((n, d)) => {
            if d.starts_with(['+', '-']) {
                return Err(bad());
            }
            let d = int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(int(n)?, d))
        }
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A dense vector of rationals. The dimension is fixed at construction.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RVec(Vec<Rat>);

impl RVec {
    pub fn new(entries: Vec<Rat>) -> Self {
        RVec(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        RVec(entries.iter().map(|&v| rat(v)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        RVec(vec![Rat::zero(); dim])
    }

    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = Rat::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rat> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        dot(&self.0, &other.0)
    }

    pub fn add(&self, other: &RVec) -> RVec {
        RVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RVec) -> RVec {
        RVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rat) -> RVec {
        RVec(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> RVec {
        RVec(self.0.iter().map(|a| -a).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: &Rat, other: &RVec) -> RVec {
        RVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    /// Max absolute entry.
    pub fn max_abs(&self) -> Rat {
        self.0
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }

    /// Sum of absolute entries.
    pub fn l1(&self) -> Rat {
        self.0.iter().map(|a| a.abs()).sum()
    }

    /// The positive multiple of `self` with coprime integer entries.
    /// Zero maps to zero.
    pub fn primitive(&self) -> RVec {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|a| (a * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
        RVec(
            ints.into_iter()
                .map(|a| Rat::from_integer(a / &g))
                .collect(),
        )
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_rat).collect()
    }
}

pub(crate) fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

impl Deref for RVec {
    type Target = [Rat];
    fn deref(&self) -> &[Rat] {
        &self.0
    }
}

impl From<Vec<Rat>> for RVec {
    fn from(v: Vec<Rat>) -> Self {
        RVec(v)
    }
}

impl FromIterator<Rat> for RVec {
    fn from_iter<I: IntoIterator<Item = Rat>>(iter: I) -> Self {
        RVec(iter.into_iter().collect())
    }
}

impl fmt::Display for RVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rat(a))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Row-major rational matrix. `ncols` is kept explicitly so that a 0-row
/// matrix still knows its width.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RMat {
    rows: Vec<RVec>,
    ncols: usize,
}

impl RMat {
    pub fn new(rows: Vec<RVec>, ncols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.dim() != ncols) {
            return Err(Error::Dimension {
                context: "matrix row",
                expected: ncols,
                found: r.dim(),
            });
        }
        Ok(RMat { rows, ncols })
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        RMat::new(rows.iter().map(|r| RVec::from_i64s(r)).collect(), ncols)
            .expect("ragged literal matrix")
    }

    pub fn empty(ncols: usize) -> Self {
        RMat {
            rows: Vec::new(),
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        RMat {
            rows: (0..n).map(|k| RVec::unit(n, k)).collect(),
            ncols: n,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[RVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<RVec> {
        self.rows
    }

    pub fn mul_vec(&self, x: &RVec) -> Result<RVec> {
        if x.dim() != self.ncols {
            return Err(Error::Dimension {
                context: "matrix-vector product",
                expected: self.ncols,
                found: x.dim(),
            });
        }
        Ok(self.rows.iter().map(|r| r.dot(x)).collect())
    }

    /// `yᵀ A`, a combination of the rows.
    pub fn combine_rows(&self, y: &[Rat]) -> RVec {
        let mut acc = RVec::zeros(self.ncols);
        for (r, c) in self.rows.iter().zip(y) {
            if !c.is_zero() {
                acc = acc.axpy(c, r);
            }
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.0.clone()).collect();
        reduce(&mut m, self.ncols).len()
    }

    /// Basis of `{x : A x = 0}`; zero rows when the kernel is trivial.
    pub fn null_space(&self) -> RMat {
        let n = self.ncols;
        let mut m: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let pivots = reduce(&mut m, n);
        let mut basis = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rat::zero(); n];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            basis.push(RVec(v));
        }
        RMat {
            rows: basis,
            ncols: n,
        }
    }

    /// Some `x` with `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &RVec) -> Result<Option<RVec>> {
        if b.dim() != self.nrows() {
            return Err(Error::Dimension {
                context: "right-hand side",
                expected: self.nrows(),
                found: b.dim(),
            });
        }
        let n = self.ncols;
        let mut m: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .zip(b.iter())
            .map(|(r, bi)| {
                let mut row = r.0.clone();
                row.push(bi.clone());
                row
            })
            .collect();
        let pivots = reduce(&mut m, n + 1);
        if pivots.last() == Some(&n) {
            return Ok(None);
        }
        let mut x = vec![Rat::zero(); n];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = m[row][n].clone();
        }
        Ok(Some(RVec(x)))
    }

    /// Indices of a maximal linearly independent subset of rows, greedily in order.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut kept: Vec<Vec<Rat>> = Vec::new();
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let mut trial = kept.clone();
            trial.push(r.0.clone());
            if reduce(&mut trial.clone(), self.ncols).len() == trial.len() {
                kept = trial;
                out.push(i);
            }
        }
        out
    }
}

impl Index<usize> for RMat {
    type Output = RVec;
    fn index(&self, i: usize) -> &RVec {
        &self.rows[i]
    }
}

/// Free function form of [`RMat::solve`].
pub fn solve_linear(a: &RMat, b: &RVec) -> Result<Option<RVec>> {
    a.solve(b)
}

pub fn null_space(a: &RMat) -> RMat {
    a.null_space()
}

pub fn rank(a: &RMat) -> usize {
    a.rank()
}

fn pivot_weight(r: &Rat) -> BigInt {
    r.numer().abs() * r.denom()
}

/// In-place reduced row echelon form over the first `ncols` columns.
/// Returns the pivot column of each leading row; rows past the pivots are zero.
fn reduce(m: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let best = (row..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .max_by(|&a, &b| {
                pivot_weight(&m[a][col])
                    .cmp(&pivot_weight(&m[b][col]))
                    .then(b.cmp(&a))
            });
        let Some(p) = best else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_identity() {
        let a = RMat::identity(2);
        let x = a.solve(&RVec::from_i64s(&[3, -2])).unwrap();
        assert_eq!(x, Some(RVec::from_i64s(&[3, -2])));
    }

    #[test]
    fn solve_inconsistent_rank_one() {
        let a = RMat::from_i64s(&[&[1, 1], &[2, 2]]);
        assert_eq!(a.solve(&RVec::from_i64s(&[1, 3])).unwrap(), None);
    }

    #[test]
    fn solve_two_by_two() {
        let a = RMat::from_i64s(&[&[2, 1], &[1, 3]]);
        let b = RVec::from_i64s(&[5, 10]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x, RVec::from_i64s(&[1, 3]));
        assert_eq!(a.mul_vec(&x).unwrap(), b);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = RMat::identity(2);
        assert!(matches!(
            a.solve(&RVec::from_i64s(&[1, 2, 3])),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn null_space_cases() {
        assert_eq!(RMat::identity(2).null_space().nrows(), 0);

        let ns = RMat::from_i64s(&[&[1, 0]]).null_space();
        assert_eq!(ns.rows(), &[RVec::from_i64s(&[0, 1])]);

        let a = RMat::from_i64s(&[&[1, 1, 1]]);
        let ns = a.null_space();
        assert_eq!(ns.nrows(), 2);
        assert_eq!(ns.rank(), 2);
        for r in ns.rows() {
            assert!(a.mul_vec(r).unwrap().is_zero());
        }
    }

    #[test]
    fn rank_cases() {
        assert_eq!(RMat::identity(3).rank(), 3);
        assert_eq!(RMat::from_i64s(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(RMat::from_i64s(&[&[1, 0], &[0, 1], &[1, 1]]).rank(), 2);
        assert_eq!(RMat::empty(3).rank(), 0);
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rat("-3/7").unwrap(), ratio(-3, 7));
        assert_eq!(parse_rat("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rat("+5").unwrap(), rat(5));
        for bad in ["", "1.5", "1e3", "1/0", "a", "1/-2", "--1", "1/"] {
            assert!(parse_rat(bad).is_err(), "{bad:?} accepted");
        }
        assert_eq!(fmt_rat(&ratio(-6, 14)), "-3/7");
        assert_eq!(fmt_rat(&rat(0)), "0");
    }

    #[test]
    fn primitive_vectors() {
        let v = RVec::new(vec![ratio(1, 2), ratio(-3, 4), rat(0)]);
        assert_eq!(v.primitive(), RVec::from_i64s(&[2, -3, 0]));
        assert_eq!(
            RVec::from_i64s(&[4, 8]).primitive(),
            RVec::from_i64s(&[1, 2])
        );
    }

    #[test]
    fn independent_rows_greedy() {
        let a = RMat::from_i64s(&[&[1, 1], &[2, 2], &[0, 1]]);
        assert_eq!(a.independent_rows(), vec![0, 2]);
    }
}

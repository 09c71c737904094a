//! Exact rational scalars and vectors, plus the handful of linear-algebra
//! routines (rank, null space, hyperplanes) the rest of the crate needs.
//!
//! Everything here is exact: scalars are [`BigRational`]s, so sign tests
//! never depend on rounding.

use std::fmt;
use std::ops::{Index, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("points do not span a hyperplane of the ambient space")]
    DegenerateSpan,
    #[error("zero normal vector")]
    ZeroNormal,
    #[error("cannot parse rational `{0}`")]
    Parse(String),
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim();
    let err = || ExactError::Parse(s.to_string());
    match t.split_once('/') {
        None => BigInt::from_str(t).map(Rational::from_integer).map_err(|_| err()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A point or direction in Q^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        QVector(vec![Rational::zero(); n])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        QVector(xs.iter().map(|&x| rat(x)).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn dot(&self, other: &QVector) -> Result<Rational, ExactError> {
        if self.len() != other.len() {
            return Err(ExactError::LengthMismatch(self.len(), other.len()));
        }
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scaled(&self, k: &Rational) -> QVector {
        QVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Concatenation, used for Cartesian products.
    pub fn concat(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// Drops coordinate `k`.
    pub fn without(&self, k: usize) -> QVector {
        QVector(
            self.0
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, x)| x.clone())
                .collect(),
        )
    }

    /// Rescales to integer entries with content 1 and a positive first
    /// nonzero entry. Returns the factor that was applied.
    pub fn normalize_primitive(&self) -> (QVector, Rational) {
        if self.is_zero() {
            return (self.clone(), Rational::one());
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|x| (x * &lcm).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let lead_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        let mut factor = Rational::new(lcm, content);
        if lead_negative {
            factor = -factor;
        }
        (self.scaled(&factor), factor)
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<T: IntoIterator<Item = Rational>>(iter: T) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for QVector {
    type Err = ExactError;

    /// Comma-separated rationals, e.g. `"1,2,1/3"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Ok(QVector(Vec::new()));
        }
        t.split(',').map(parse_rational).collect()
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(format_rational))
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // Accept strings ("1/2") and plain JSON integers.
        let raw: Vec<serde_json::Value> = Vec::deserialize(d)?;
        raw.iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_rational(s).map_err(D::Error::custom),
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(rat)
                    .ok_or_else(|| D::Error::custom(format!("non-integer number {n}"))),
                other => Err(D::Error::custom(format!("expected rational, got {other}"))),
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Positive,
    Zero,
    Negative,
}

/// `{x : normal·x = offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    normal: QVector,
    offset: Rational,
}

impl Hyperplane {
    pub fn new(normal: QVector, offset: Rational) -> Result<Self, ExactError> {
        if normal.is_zero() {
            return Err(ExactError::ZeroNormal);
        }
        Ok(Hyperplane { normal, offset })
    }

    pub fn normal(&self) -> &QVector {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// `normal·x − offset`.
    pub fn eval(&self, x: &QVector) -> Rational {
        self.normal.dot_unchecked(x) - &self.offset
    }

    pub fn side(&self, x: &QVector) -> Side {
        let v = self.eval(x);
        if v.is_positive() {
            Side::Positive
        } else if v.is_negative() {
            Side::Negative
        } else {
            Side::Zero
        }
    }

    pub fn flipped(&self) -> Hyperplane {
        Hyperplane {
            normal: self.normal.scaled(&-Rational::one()),
            offset: -self.offset.clone(),
        }
    }
}

pub fn dot(a: &QVector, b: &QVector) -> Result<Rational, ExactError> {
    a.dot(b)
}

pub fn side(h: &Hyperplane, x: &QVector) -> Side {
    h.side(x)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let k = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &k * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows·x = 0}`.
pub fn null_space(rows: &[Vec<Rational>], ncols: usize) -> Vec<QVector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[r][f].clone();
            }
            QVector(x)
        })
        .collect()
}

/// Dimension of the affine hull; 0 for a single point.
pub fn affine_rank(points: &[QVector]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let rows: Vec<Vec<Rational>> = rest.iter().map(|p| (p - first).into_entries()).collect();
    if rows.is_empty() {
        0
    } else {
        rank(&rows)
    }
}

/// The canonical hyperplane through `points`, which must span an affine
/// subspace of dimension `ambient_dim − 1`. The normal has integer entries
/// with content 1 and a positive leading entry.
pub fn hyperplane_through(points: &[QVector], ambient_dim: usize) -> Result<Hyperplane, ExactError> {
    let first = points.first().ok_or(ExactError::DegenerateSpan)?;
    if ambient_dim == 0 || points.iter().any(|p| p.len() != ambient_dim) {
        return Err(ExactError::DegenerateSpan);
    }
    let rows: Vec<Vec<Rational>> = points[1..].iter().map(|p| (p - first).into_entries()).collect();
    let basis = if rows.is_empty() {
        // a single point in R^1
        if ambient_dim != 1 {
            return Err(ExactError::DegenerateSpan);
        }
        vec![QVector::from_ints(&[1])]
    } else {
        null_space(&rows, ambient_dim)
    };
    if basis.len() != 1 {
        return Err(ExactError::DegenerateSpan);
    }
    let (normal, _) = basis[0].normalize_primitive();
    let offset = normal.dot_unchecked(first);
    Hyperplane::new(normal, offset)
}

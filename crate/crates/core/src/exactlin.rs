//! Exact scalars (rationals and prime fields) and dense linear algebra.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    /// Characteristic of the field (0 for the rationals).
    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::from_i64(0, self)
    }

    pub fn one(self) -> Scalar {
        Scalar::from_i64(1, self)
    }

    pub fn parse(text: &str) -> Result<Field, LinAlgError> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let rest = t
            .strip_prefix("Fp")
            .or_else(|| t.strip_prefix("fp"))
            .or_else(|| t.strip_prefix("F"))
            .ok_or_else(|| LinAlgError::Parse(format!("unknown field `{t}`")))?;
        let p: u64 = rest
            .trim()
            .trim_start_matches(':')
            .trim()
            .parse()
            .map_err(|_| LinAlgError::Parse(format!("bad prime in `{t}`")))?;
        Field::prime(p)
    }

    pub fn prime(p: u64) -> Result<Field, LinAlgError> {
        if p < 2 || p >= (1 << 62) || !is_prime(p) {
            return Err(LinAlgError::Parse(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp {p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Exact rational, stored reduced with positive denominator.
///
/// Values that fit into `i64` numerator/denominator use the small representation;
/// the big representation is used only when they do not, so equality is structural.
#[derive(Clone, Debug)]
enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    fn from_i128(num: i128, den: i128) -> Rational {
        debug_assert!(den != 0);
        let g = gcd_i128(num, den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    fn add(&self, o: &Rational) -> Rational {
        match (self, o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return Rational::from_i128(*a as i128 + *c as i128, 1);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128(a * d + c * b, b * d)
            }
            _ => Rational::from_big(self.to_big() + o.to_big()),
        }
    }

    fn mul(&self, o: &Rational) -> Rational {
        match (self, o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * o.to_big()),
        }
    }

    fn neg(&self) -> Rational {
        match self {
            Rational::Small(n, d) => Rational::from_i128(-(*n as i128), *d as i128),
            Rational::Big(r) => Rational::from_big(-r.clone()),
        }
    }

    fn inv(&self) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small(n, d) => Rational::from_i128(*d as i128, *n as i128),
            Rational::Big(r) => Rational::from_big(r.recip()),
        })
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            (Rational::Big(x), Rational::Big(y)) => x == y,
            _ => false,
        }
    }
}
impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rational::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Rational::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}

/// An element of the ground field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Q(Rational),
    Fp { value: u64, p: u64 },
}

impl Scalar {
    pub fn from_i64(n: i64, field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar(Repr::Q(Rational::Small(n, 1))),
            Field::Prime(p) => Scalar(Repr::Fp {
                value: (n as i128).rem_euclid(p as i128) as u64,
                p,
            }),
        }
    }

    /// `num / den` in the given field; `None` if `den` vanishes there.
    pub fn from_ratio(num: i64, den: i64, field: Field) -> Option<Scalar> {
        Scalar::from_i64(num, field).div(&Scalar::from_i64(den, field))
    }

    pub fn from_bigint(n: &BigInt, field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar(Repr::Q(Rational::from_big(BigRational::from_integer(
                n.clone(),
            )))),
            Field::Prime(p) => {
                let m = n.mod_floor(&BigInt::from(p));
                Scalar(Repr::Fp {
                    value: m.to_u64().unwrap_or(0),
                    p,
                })
            }
        }
    }

    pub fn field(&self) -> Field {
        match &self.0 {
            Repr::Q(_) => Field::Rational,
            Repr::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(r) => r.is_zero(),
            Repr::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(Rational::Small(1, 1)) => true,
            Repr::Fp { value, .. } => *value == 1,
            _ => false,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match &self.0 {
            Repr::Q(r) => r.inv().map(|r| Scalar(Repr::Q(r))),
            Repr::Fp { value, p } => {
                if *value == 0 {
                    None
                } else {
                    Some(Scalar(Repr::Fp {
                        value: pow_mod(*value, p - 2, *p),
                        p: *p,
                    }))
                }
            }
        }
    }

    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        o.inv().map(|i| self * &i)
    }

    /// Numerator and denominator of a rational scalar.
    pub fn as_big_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Q(r) => Some(r.to_big()),
            Repr::Fp { .. } => None,
        }
    }

    pub fn from_big_rational(r: BigRational) -> Scalar {
        Scalar(Repr::Q(Rational::from_big(r)))
    }

    /// Representative in `[0, p)` of a prime-field scalar.
    pub fn as_residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Fp { value, .. } => Some(*value),
            Repr::Q(_) => None,
        }
    }

    pub fn parse(text: &str, field: Field) -> Result<Scalar, LinAlgError> {
        let t = text.trim();
        let bad = || LinAlgError::Parse(format!("bad scalar `{t}`"));
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        let n = Scalar::from_bigint(&num, field);
        let d = Scalar::from_bigint(&den, field);
        n.div(&d).ok_or_else(bad)
    }

    fn check(&self, o: &Scalar) {
        debug_assert_eq!(self.field(), o.field(), "mixed fields in scalar arithmetic");
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.check(o);
        match (&self.0, &o.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a.add(b))),
            (Repr::Fp { value: a, p }, Repr::Fp { value: b, .. }) => Scalar(Repr::Fp {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            }),
            _ => panic!("mixed fields in scalar arithmetic"),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.check(o);
        match (&self.0, &o.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a.mul(b))),
            (Repr::Fp { value: a, p }, Repr::Fp { value: b, .. }) => Scalar(Repr::Fp {
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            }),
            _ => panic!("mixed fields in scalar arithmetic"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Q(a) => Scalar(Repr::Q(a.neg())),
            Repr::Fp { value, p } => Scalar(Repr::Fp {
                value: (p - value) % p,
                p: *p,
            }),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(Rational::Small(n, 1)) => write!(f, "{n}"),
            Repr::Q(Rational::Small(n, d)) => write!(f, "{n}/{d}"),
            Repr::Q(Rational::Big(r)) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.to_big().cmp(&other.to_big()))
    }
}

/// Dense row-major matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_vec(
        field: Field,
        rows: usize,
        cols: usize,
        data: Vec<Scalar>,
    ) -> Result<Matrix, LinAlgError> {
        if data.len() != rows * cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(LinAlgError::FieldMismatch(field, bad.field()));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: Field, rows: &[Vec<Scalar>]) -> Result<Matrix, LinAlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinAlgError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::from_vec(field, rows.len(), cols, rows.concat())
    }

    pub fn from_i64(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data: entries.iter().map(|&e| Scalar::from_i64(e, field)).collect(),
        }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, o: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.field != o.field {
            return Err(LinAlgError::FieldMismatch(self.field, o.field));
        }
        if self.cols != o.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, o: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.field != o.field {
            return Err(LinAlgError::FieldMismatch(self.field, o.field));
        }
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// `[self | o]`
    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows, "hstack row mismatch");
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..o.cols {
                m.set(r, self.cols + c, o.get(r, c).clone());
            }
        }
        m
    }

    /// `[self ; o]`
    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(field: Field, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, idx.len());
        for (j, &c) in idx.iter().enumerate() {
            for r in 0..self.rows {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Exact Gauss-Jordan elimination.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            if !inv.is_one() {
                for c in col..m.cols {
                    let v = m.get(row, c) * &inv;
                    m.set(row, c, v);
                }
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let pv = m.get(row, c);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&factor * pv);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        if self.rows > self.cols {
            self.transpose().echelon().pivots.len()
        } else {
            self.echelon().pivots.len()
        }
    }

    /// Columns form a basis of the null space `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> Matrix {
        let e = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, self.field.one());
            for (i, &p) in e.pivots.iter().enumerate() {
                let v = -e.reduced.get(i, f);
                k.set(p, j, v);
            }
        }
        k
    }

    /// Solve `self * x = b`; `Ok(None)` if inconsistent.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>, LinAlgError> {
        if self.field != b.field {
            return Err(LinAlgError::FieldMismatch(self.field, b.field));
        }
        if b.rows != self.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "system has {} rows, right-hand side {}",
                self.rows, b.rows
            )));
        }
        let aug = self.hstack(b);
        let e = aug.echelon();
        if e.pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (i, &p) in e.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, e.reduced.get(i, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.field, self.rows)).ok()??;
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis (as columns) of the column space, chosen among the original columns.
    pub fn column_space(&self) -> Matrix {
        let e = self.echelon();
        self.select_columns(&e.pivots)
    }

    /// Smallest `k` such that `self^k = 0`, if the matrix is nilpotent.
    pub fn is_nilpotent(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut p = self.clone();
        for _ in 0..=self.rows {
            if p.is_zero() {
                return true;
            }
            p = &p * self;
        }
        p.is_zero()
    }

    pub fn trace(&self) -> Scalar {
        let mut t = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.get(i, i);
        }
        t
    }

    pub fn pow(&self, e: usize) -> Matrix {
        let mut r = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        self.try_mul(o).expect("matrix product")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        self.try_add(o).expect("matrix sum")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        self.try_add(&-o).expect("matrix difference")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &Matrix) -> Matrix {
    m.kernel_basis()
}

pub fn solve(m: &Matrix, b: &Matrix) -> Result<Option<Matrix>, LinAlgError> {
    m.solve(b)
}

/// A complement to a subspace of `k^n` spanned by standard basis vectors.
///
/// `projection` has kernel exactly the subspace and `projection * section = I`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub projection: Matrix,
    pub section: Matrix,
}

impl Quotient {
    /// Quotient of `k^n` by the column span of `sub` (an `n x k` matrix).
    pub fn of(field: Field, n: usize, sub: &Matrix) -> Quotient {
        assert_eq!(sub.rows(), n);
        let basis = sub.column_space();
        let r = basis.cols();
        let aug = basis.hstack(&Matrix::identity(field, n));
        let e = aug.echelon();
        let extra: Vec<usize> = e.pivots.iter().filter(|&&p| p >= r).map(|&p| p - r).collect();
        let section = Matrix::identity(field, n).select_columns(&extra);
        let full = basis.hstack(&section);
        let inv = full.inverse().expect("complement completes a basis");
        let rows: Vec<usize> = (r..n).collect();
        Quotient {
            projection: inv.select_rows(&rows),
            section,
        }
    }

    pub fn dim(&self) -> usize {
        self.section.cols()
    }
}

/// Rational roots of a polynomial with scalar coefficients (constant term first).
///
/// Over `Q` uses the rational root theorem (coefficients are cleared to integers, and only
/// moderately sized coefficients are handled); over `F_p` small primes are searched exhaustively.
pub fn rational_roots(coeffs: &[Scalar]) -> Vec<Scalar> {
    let Some(first) = coeffs.first() else {
        return Vec::new();
    };
    let field = first.field();
    let mut c: Vec<Scalar> = coeffs.to_vec();
    while c.last().is_some_and(Scalar::is_zero) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let eval = |x: &Scalar| {
        let mut acc = field.zero();
        for a in c.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    };
    let mut roots = Vec::new();
    match field {
        Field::Prime(p) => {
            if p <= 200_000 {
                for v in 0..p {
                    let x = Scalar::from_i64(v as i64, field);
                    if eval(&x).is_zero() {
                        roots.push(x);
                    }
                }
            }
        }
        Field::Rational => {
            let bigs: Vec<BigRational> = c.iter().map(|s| s.as_big_rational().unwrap()).collect();
            let lcm = bigs
                .iter()
                .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            let ints: Vec<BigInt> = bigs
                .iter()
                .map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer())
                .collect();
            if ints[0].is_zero() {
                roots.push(field.zero());
            }
            let low = ints.iter().find(|v| !v.is_zero()).cloned().unwrap();
            let high = ints.last().cloned().unwrap();
            let (Some(a0), Some(an)) = (low.abs().to_u64(), high.abs().to_u64()) else {
                return roots;
            };
            if a0 > 1_000_000_000_000 || an > 1_000_000_000_000 {
                return roots;
            }
            for p in divisors(a0) {
                for q in divisors(an) {
                    for sign in [1i64, -1] {
                        let x = Scalar::from_big_rational(BigRational::new(
                            BigInt::from(sign) * BigInt::from(p),
                            BigInt::from(q),
                        ));
                        if !roots.contains(&x) && eval(&x).is_zero() {
                            roots.push(x);
                        }
                    }
                }
            }
        }
    }
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d, Q).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::zeros(Q, 0, 0).rank(), 0);
        assert_eq!(Matrix::identity(Q, 5).rank(), 5);
        assert_eq!(Matrix::from_i64(Q, 2, 2, &[1, 2, 2, 4]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(Q, 3).kernel_basis().cols(), 0);
        let z = Matrix::zeros(Q, 2, 3);
        let k = z.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
        let m = Matrix::from_i64(Q, 1, 2, &[1, 1]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.get(0, 0), &(-k.get(1, 0)));
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn solve_examples() {
        let b = Matrix::from_i64(Q, 2, 1, &[3, -7]);
        assert_eq!(Matrix::identity(Q, 2).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Matrix::zeros(Q, 2, 2).solve(&b).unwrap(), None);
        let x = Matrix::from_i64(Q, 1, 1, &[2])
            .solve(&Matrix::from_i64(Q, 1, 1, &[1]))
            .unwrap()
            .unwrap();
        assert_eq!(x.get(0, 0), &q(1, 2));
        assert!(matches!(
            Matrix::identity(Q, 2).solve(&Matrix::zeros(Q, 3, 1)),
            Err(LinAlgError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn field_mixing_is_rejected() {
        let a = Matrix::identity(Q, 2);
        let b = Matrix::identity(Field::Prime(5), 2);
        assert!(matches!(a.try_mul(&b), Err(LinAlgError::FieldMismatch(..))));
    }

    #[test]
    fn rationals_overflow_into_bigints() {
        let big = Scalar::from_i64(i64::MAX, Q);
        let sq = &big * &big;
        let back = sq.div(&big).unwrap();
        assert_eq!(back, big);
        let s = &(&sq + &big) - &big;
        assert_eq!(s, sq);
        assert_eq!(q(6, -4), q(-3, 2));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let three = Scalar::from_i64(3, f);
        let inv = three.inv().unwrap();
        assert!((&three * &inv).is_one());
        assert_eq!(Scalar::from_i64(-1, f), Scalar::from_i64(6, f));
        assert!(Field::prime(9).is_err());
    }

    #[test]
    fn quotient_projection() {
        let sub = Matrix::from_i64(Q, 3, 1, &[1, 1, 0]);
        let qt = Quotient::of(Q, 3, &sub);
        assert_eq!(qt.dim(), 2);
        assert!((&qt.projection * &sub).is_zero());
        assert_eq!(&qt.projection * &qt.section, Matrix::identity(Q, 2));
    }

    #[test]
    fn roots() {
        // (x - 1/2)(x + 3) = x^2 + 5/2 x - 3/2
        let r = rational_roots(&[q(-3, 2), q(5, 2), q(1, 1)]);
        assert_eq!(r.len(), 2);
        assert!(r.contains(&q(1, 2)) && r.contains(&q(-3, 1)));
        assert!(rational_roots(&[q(1, 1), q(0, 1), q(1, 1)]).is_empty());
    }

    #[test]
    fn parse_scalars() {
        assert_eq!(Scalar::parse("-3/6", Q).unwrap(), q(-1, 2));
        assert_eq!(Scalar::parse("+2", Q).unwrap(), q(2, 1));
        assert!(Scalar::parse("1/0", Q).is_err());
        assert_eq!(Field::parse("Fp 5").unwrap(), Field::Prime(5));
        assert_eq!(Field::parse("Q").unwrap(), Field::Rational);
    }
}

//! Exact scalars (Q, F_p, F_p(sqrt d)) and dense Gauss-Jordan linear algebra.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u64 = 101;

/// Field descriptor. `Fp2 { p, d }` is F_p adjoined a square root of the
/// non-residue `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u64),
    Fp2 { p: u64, d: u64 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

impl Field {
    /// F_p for an odd prime p.
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 || !is_prime(p) {
            return Err(Error::Invalid(format!("modulus {p} is not an odd prime")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::Invalid(format!("modulus {p} is not word-sized")));
        }
        Ok(Field::Fp(p))
    }

    /// F_p with the extra restriction p not in {2, 3} used by the geometry modules.
    pub fn geometric_prime(p: u64) -> Result<Field> {
        if p == 3 {
            return Err(Error::Invalid("characteristic 3 is not supported".into()));
        }
        Field::prime(p)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Fp(p) | Field::Fp2 { p, .. } => p,
        }
    }

    pub fn is_finite(self) -> bool {
        !matches!(self, Field::Q)
    }

    /// Number of elements, `None` for Q.
    pub fn size(self) -> Option<u64> {
        match self {
            Field::Q => None,
            Field::Fp(p) => Some(p),
            Field::Fp2 { p, .. } => Some(p * p),
        }
    }

    /// The prime field under an extension; identity otherwise.
    pub fn base(self) -> Field {
        match self {
            Field::Fp2 { p, .. } => Field::Fp(p),
            f => f,
        }
    }

    /// F_p(sqrt d) with d the smallest non-residue.
    pub fn quadratic_extension(self) -> Result<Field> {
        match self {
            Field::Fp(p) => {
                let d = (2..p).find(|&d| legendre(d, p) == -1).expect("odd prime has a non-residue");
                Ok(Field::Fp2 { p, d })
            }
            Field::Fp2 { .. } => Ok(self),
            Field::Q => Err(Error::Unsupported("quadratic extension of Q".into())),
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => Scalar::Fp { v: n.rem_euclid(p as i64) as u64, p },
            Field::Fp2 { p, d } => Scalar::Fp2 { a: n.rem_euclid(p as i64) as u64, b: 0, p, d },
        }
    }

    /// n/m in the field; errors when m vanishes.
    pub fn from_frac(self, n: i64, m: i64) -> Result<Scalar> {
        self.from_i64(n).div(&self.from_i64(m))
    }

    /// a + b sqrt(d) in an extension field.
    pub fn adjoin(self, a: i64, b: i64) -> Result<Scalar> {
        match self {
            Field::Fp2 { p, d } => Ok(Scalar::Fp2 {
                a: a.rem_euclid(p as i64) as u64,
                b: b.rem_euclid(p as i64) as u64,
                p,
                d,
            }),
            _ => Err(Error::Unsupported(format!("{self} has no adjoined root"))),
        }
    }

    /// The chosen generator sqrt(d) of an extension.
    pub fn sqrt_generator(self) -> Result<Scalar> {
        self.adjoin(0, 1)
    }

    /// Map an element of the base field (or the field itself) into `self`.
    pub fn embed(self, x: &Scalar) -> Result<Scalar> {
        match (self, x) {
            (f, x) if x.field() == f => Ok(x.clone()),
            (Field::Fp2 { p, d }, Scalar::Fp { v, p: q }) if p == *q => Ok(Scalar::Fp2 { a: *v, b: 0, p, d }),
            _ => Err(Error::MixedFields(self.to_string(), x.field().to_string())),
        }
    }

    /// All elements of a finite field in a fixed order (a + b sqrt d, b major).
    pub fn elements(self) -> Result<Vec<Scalar>> {
        match self {
            Field::Q => Err(Error::Unsupported("enumeration over Q".into())),
            Field::Fp(p) => Ok((0..p).map(|v| Scalar::Fp { v, p }).collect()),
            Field::Fp2 { p, d } => {
                let mut out = Vec::with_capacity((p * p) as usize);
                for b in 0..p {
                    for a in 0..p {
                        out.push(Scalar::Fp2 { a, b, p, d });
                    }
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F_{p}"),
            Field::Fp2 { p, d } => write!(f, "F_{p}(sqrt {d})"),
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
    Fp2 { a: u64, b: u64, p: u64, d: u64 },
}

impl Scalar {
    pub fn rational(n: i64, d: i64) -> Result<Scalar> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Q(BigRational::new(BigInt::from(n), BigInt::from(d))))
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
            Scalar::Fp2 { p, d, .. } => Field::Fp2 { p: *p, d: *d },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Fp2 { a, b, .. } => *a == 0 && *b == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Fp2 { a, b, .. } => *a == 1 && *b == 0,
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::MixedFields(self.field().to_string(), other.field().to_string()))
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar> {
        self.check(o)?;
        Ok(match (self, o) {
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, .. }) => Scalar::Fp { v: (v + w) % p, p: *p },
            (Scalar::Fp2 { a, b, p, d }, Scalar::Fp2 { a: c, b: e, .. }) => {
                Scalar::Fp2 { a: (a + c) % p, b: (b + e) % p, p: *p, d: *d }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar> {
        self.check(o)?;
        Ok(match (self, o) {
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, .. }) => Scalar::Fp { v: mulmod(*v, *w, *p), p: *p },
            (Scalar::Fp2 { a, b, p, d }, Scalar::Fp2 { a: c, b: e, .. }) => {
                let (p, d) = (*p, *d);
                let re = (mulmod(*a, *c, p) + mulmod(mulmod(*b, *e, p), d, p)) % p;
                let im = (mulmod(*a, *e, p) + mulmod(*b, *c, p)) % p;
                Scalar::Fp2 { a: re, b: im, p, d }
            }
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(x) => Scalar::Q(-x),
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
            Scalar::Fp2 { a, b, p, d } => Scalar::Fp2 { a: (p - a) % p, b: (p - b) % p, p: *p, d: *d },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(x) => Scalar::Q(x.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: powmod(*v, p - 2, *p), p: *p },
            Scalar::Fp2 { a, b, p, d } => {
                let (p, d) = (*p, *d);
                let norm = (mulmod(*a, *a, p) + p - mulmod(mulmod(*b, *b, p), d, p)) % p;
                let ni = powmod(norm, p - 2, p);
                Scalar::Fp2 { a: mulmod(*a, ni, p), b: mulmod((p - b) % p, ni, p), p, d }
            }
        })
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        self.check(o)?;
        self.try_mul(&o.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut r = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        r
    }

    /// Signed integer power; negative exponents need a nonzero base.
    pub fn powi(&self, e: i64) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Square root in the element's own field, or `None`.
    pub fn sqrt(&self) -> Option<Scalar> {
        sqrt_in_field(self)
    }

    /// Galois conjugate a - b sqrt d; identity outside extensions.
    pub fn conjugate(&self) -> Scalar {
        match self {
            Scalar::Fp2 { a, b, p, d } => Scalar::Fp2 { a: *a, b: (p - b) % p, p: *p, d: *d },
            s => s.clone(),
        }
    }

    /// True when an extension element lies in the prime subfield.
    pub fn is_base(&self) -> bool {
        !matches!(self, Scalar::Fp2 { b, .. } if *b != 0)
    }

    /// Project an extension element with zero sqrt-part to F_p.
    pub fn to_base(&self) -> Option<Scalar> {
        match self {
            Scalar::Fp2 { a, b: 0, p, .. } => Some(Scalar::Fp { v: *a, p: *p }),
            Scalar::Fp2 { .. } => None,
            s => Some(s.clone()),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            _ => None,
        }
    }
}

/// Apply one of the four field operations; `y` is ignored for unary ops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

pub fn field_arith(x: &Scalar, y: &Scalar, op: FieldOp) -> Result<Scalar> {
    match op {
        FieldOp::Add => x.try_add(y),
        FieldOp::Mul => x.try_mul(y),
        FieldOp::Neg => Ok(x.neg()),
        FieldOp::Inv => x.inv(),
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Square root by Tonelli-Shanks over F_p or F_{p^2}; rationals only when
/// they are perfect squares.
pub fn sqrt_in_field(x: &Scalar) -> Option<Scalar> {
    if let Scalar::Q(r) = x {
        return rational_sqrt(r).map(Scalar::Q);
    }
    if x.is_zero() {
        return Some(x.clone());
    }
    let field = x.field();
    let q = field.size().expect("finite");
    let one = field.one();
    if !x.pow((q - 1) / 2).is_one() {
        return None;
    }
    let mut s = 0u32;
    let mut t = q - 1;
    while t % 2 == 0 {
        t /= 2;
        s += 1;
    }
    let z = non_square(field);
    let mut m = s;
    let mut c = z.pow(t);
    let mut tt = x.pow(t);
    let mut r = x.pow((t + 1) / 2);
    while !tt.is_one() {
        let mut i = 0u32;
        let mut probe = tt.clone();
        while !probe.is_one() {
            probe = &probe * &probe;
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = &b * &b;
        }
        m = i;
        c = &b * &b;
        tt = &tt * &c;
        r = &r * &b;
    }
    debug_assert!(&r * &r == *x && !one.is_zero());
    Some(r)
}

/// Smallest non-square in the scan order 2, 3, ... (F_p) or a + sqrt d (F_p^2).
fn non_square(field: Field) -> Scalar {
    let q = field.size().expect("finite");
    let is_ns = |e: &Scalar| !e.is_zero() && !e.pow((q - 1) / 2).is_one();
    match field {
        Field::Fp(p) => (2..p).map(|v| field.from_i64(v as i64)).find(is_ns),
        Field::Fp2 { p, .. } => (0..p as i64).map(|a| field.adjoin(a, 1).expect("extension")).find(is_ns),
        Field::Q => None,
    }
    .expect("non-square exists")
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.try_add(o).expect("scalar field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.try_sub(o).expect("scalar field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.try_mul(o).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Fp { v, p } => write!(f, "{v} mod {p}"),
            Scalar::Fp2 { a, b, p, d } => write!(f, "[{a},{b}] mod {p} adjoin sqrt({d})"),
        }
    }
}

impl std::str::FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("cannot parse scalar {s:?}"));
        if let Some((lhs, rest)) = s.split_once(" mod ") {
            let lhs = lhs.trim();
            if let Some((pp, dd)) = rest.split_once(" adjoin sqrt(") {
                let p: u64 = pp.trim().parse().map_err(|_| bad())?;
                let d: u64 = dd.trim_end_matches(')').trim().parse().map_err(|_| bad())?;
                let field = Field::prime(p)?.quadratic_extension()?;
                if field != (Field::Fp2 { p, d }) {
                    if legendre(d, p) != -1 {
                        return Err(Error::Invalid(format!("{d} is a square mod {p}")));
                    }
                }
                let inner = lhs.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
                let (a, b) = inner.split_once(',').ok_or_else(bad)?;
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let b: i64 = b.trim().parse().map_err(|_| bad())?;
                Ok(Scalar::Fp2 {
                    a: a.rem_euclid(p as i64) as u64,
                    b: b.rem_euclid(p as i64) as u64,
                    p,
                    d,
                })
            } else {
                let p: u64 = rest.trim().parse().map_err(|_| bad())?;
                let field = Field::prime(p)?;
                let v: i64 = lhs.parse().map_err(|_| bad())?;
                Ok(field.from_i64(v))
            }
        } else {
            let (n, d) = match s.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s, "1"),
            };
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Scalar::Q(BigRational::new(n, d)))
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Dense row-major matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from rows; every entry must live in `field`.
    pub fn from_rows(field: Field, rows: &[Vec<Scalar>]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Invalid("ragged matrix rows".into()));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::MixedFields(field.to_string(), x.field().to_string()));
                }
                data.push(x.clone());
            }
        }
        Ok(Matrix { rows: r, cols: c, field, data })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let v: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        let mut m = Matrix::from_rows(field, &v).expect("uniform field");
        if rows.is_empty() {
            m.cols = 0;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, nrows: usize, cols: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        debug_assert_eq!(x.field(), self.field);
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::Invalid(format!("shape mismatch {}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        if self.field != o.field {
            return Err(Error::MixedFields(self.field.to_string(), o.field.to_string()));
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
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Invalid("vector length mismatch".into()));
        }
        let mut out = vec![self.field.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() && !x.is_zero() {
                    *o = o.try_add(&a.try_mul(x)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Reduced row echelon form with first-nonzero pivoting; returns pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let rj = m.get(r, j);
                    if rj.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&factor * rj);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column in order.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (red, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = red.get(row, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution x of M x = b, or `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Invalid("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::Invalid("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for i in (c + 1)..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }
}

/// Rank of the span of a list of vectors of common length `dim`.
pub fn span_rank(field: Field, dim: usize, vecs: &[Vec<Scalar>]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    let mut m = Matrix::zeros(field, vecs.len(), dim);
    for (i, v) in vecs.iter().enumerate() {
        for (j, x) in v.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    m.rank()
}

fn ambient(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Option<(Field, usize)> {
    let first = a.first().or(b.first())?;
    Some((first.first().map_or(Field::Q, Scalar::field), first.len()))
}

/// span(A) == span(B), decided by rank of A, B and the stacked matrix.
pub fn subspace_equal(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> bool {
    let Some((field, dim)) = ambient(a, b) else {
        return true;
    };
    let ra = span_rank(field, dim, a);
    let rb = span_rank(field, dim, b);
    if ra != rb {
        return false;
    }
    let stacked: Vec<Vec<Scalar>> = a.iter().chain(b.iter()).cloned().collect();
    span_rank(field, dim, &stacked) == ra
}

/// Row-reduced basis of span(vecs) (deterministic canonical form).
pub fn canonical_basis(field: Field, dim: usize, vecs: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_columns(field, dim, vecs).transpose();
    let (red, piv) = m.rref();
    (0..piv.len()).map(|i| red.row(i)).collect()
}

/// Kernel of the map whose columns are images of basis vectors.
pub fn kernel_of_columns(field: Field, target_dim: usize, images: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    Matrix::from_columns(field, target_dim, images).kernel_basis()
}

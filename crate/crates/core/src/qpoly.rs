//! Polynomials in `q` (and in `q, t`) with big-integer coefficients, plus
//! truncated power series in an auxiliary variable `u`.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Below this length (of the shorter factor) products use the schoolbook
/// convolution; above it they go through Kronecker substitution.
const KRONECKER_THRESHOLD: usize = 24;

/// A dense polynomial in `q`. Index `e` of the coefficient vector holds the
/// coefficient of `q^e`; there are never trailing zeros, so the zero
/// polynomial has an empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `c * q^e`
    pub fn monomial<T: Into<BigInt>>(c: T, e: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The q-integer `[n]_q = 1 + q + ... + q^(n-1)`.
    pub fn q_int(n: usize) -> Self {
        QPoly {
            coeffs: vec![BigInt::one(); n],
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, e: usize) -> BigInt {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Sum of the coefficients, i.e. the value at `q = 1`.
    pub fn value_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Horner evaluation at an exact rational.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(<Rational as Zero>::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Formal derivative of the given order.
    pub fn derivative(&self, order: usize) -> Self {
        if order >= self.coeffs.len() {
            return QPoly::zero();
        }
        let coeffs = (order..self.coeffs.len())
            .map(|e| {
                let falling: BigInt = (0..order).map(|i| BigInt::from(e - i)).product();
                &self.coeffs[e] * falling
            })
            .collect();
        QPoly::from_coeffs(coeffs)
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Reverses the coefficient order about the given degree:
    /// `q^d * p(1/q)`. Requires `d >= degree`.
    pub fn reflect(&self, d: usize) -> Self {
        assert!(self.degree().is_none_or(|deg| deg <= d));
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (e, c) in self.coeffs.iter().enumerate() {
            coeffs[d - e] = c.clone();
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// JSON array of the coefficients in ascending degree, emitted as exact
    /// JSON numbers.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(bigint_json).collect())
    }
}

pub(crate) fn bigint_json(c: &BigInt) -> serde_json::Value {
    let n: serde_json::Number = c
        .to_string()
        .parse()
        .expect("decimal integers are valid JSON numbers");
    serde_json::Value::Number(n)
}

impl fmt::Display for QPoly {
    /// Ascending powers, e.g. `3 + 2*q + q^2`; the zero polynomial prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let var = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            write_term(f, &mut first, c, &var)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, first: &mut bool, c: &BigInt, var: &str) -> fmt::Result {
    let negative = c.is_negative();
    let mag = c.abs();
    if *first {
        if negative {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if negative { " - " } else { " + " })?;
    }
    *first = false;
    if var.is_empty() {
        write!(f, "{mag}")
    } else if mag.is_one() {
        write!(f, "{var}")
    } else {
        write!(f, "{mag}*{var}")
    }
}

fn add_into(acc: &mut Vec<BigInt>, other: &[BigInt]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), BigInt::zero());
    }
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        add_into(&mut self.coeffs, &rhs.coeffs);
        let coeffs = std::mem::take(&mut self.coeffs);
        *self = QPoly::from_coeffs(coeffs);
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        *self += &(-rhs);
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QPoly {
    type Output = QPoly;
    fn add(mut self, rhs: QPoly) -> QPoly {
        self += &rhs;
        self
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QPoly {
    type Output = QPoly;
    fn sub(self, rhs: QPoly) -> QPoly {
        &self - &rhs
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        if self.len() == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.len() == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        if self.len().min(rhs.len()) < KRONECKER_THRESHOLD {
            mul_schoolbook(self, rhs)
        } else {
            mul_kronecker(self, rhs)
        }
    }
}

impl Mul for QPoly {
    type Output = QPoly;
    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

impl Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        let mut acc = Vec::new();
        for p in iter {
            add_into(&mut acc, &p.coeffs);
        }
        QPoly::from_coeffs(acc)
    }
}

impl<'a> Sum<&'a QPoly> for QPoly {
    fn sum<I: Iterator<Item = &'a QPoly>>(iter: I) -> QPoly {
        let mut acc = Vec::new();
        for p in iter {
            add_into(&mut acc, &p.coeffs);
        }
        QPoly::from_coeffs(acc)
    }
}

pub(crate) fn mul_schoolbook(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_zero() || b.is_zero() {
        return QPoly::zero();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    QPoly::from_coeffs(out)
}

/// Splits a polynomial into magnitude vectors of its positive and negative parts.
fn split_signs(p: &QPoly) -> (Vec<BigUint>, Vec<BigUint>) {
    let mut pos = Vec::with_capacity(p.len());
    let mut neg = Vec::with_capacity(p.len());
    for c in &p.coeffs {
        match c.sign() {
            Sign::Minus => {
                pos.push(BigUint::zero());
                neg.push(c.magnitude().clone());
            }
            _ => {
                pos.push(c.magnitude().clone());
                neg.push(BigUint::zero());
            }
        }
    }
    (pos, neg)
}

pub(crate) fn mul_kronecker(a: &QPoly, b: &QPoly) -> QPoly {
    let (ap, an) = split_signs(a);
    let (bp, bn) = split_signs(b);
    let len = a.len() + b.len() - 1;
    let mut out = vec![BigInt::zero(); len];
    let a_neg = an.iter().any(|c| !c.is_zero());
    let b_neg = bn.iter().any(|c| !c.is_zero());
    let mut accumulate = |x: &[BigUint], y: &[BigUint], sign: Sign| {
        for (slot, c) in out.iter_mut().zip(kronecker_unsigned(x, y)) {
            *slot += BigInt::from_biguint(sign, c);
        }
    };
    accumulate(&ap, &bp, Sign::Plus);
    if a_neg && b_neg {
        accumulate(&an, &bn, Sign::Plus);
    }
    if b_neg {
        accumulate(&ap, &bn, Sign::Minus);
    }
    if a_neg {
        accumulate(&an, &bp, Sign::Minus);
    }
    QPoly::from_coeffs(out)
}

/// Product of two nonnegative coefficient vectors by packing each into a
/// single big integer with slots wide enough that no carries cross slots.
fn kronecker_unsigned(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let len = a.len() + b.len() - 1;
    let max_bits = |v: &[BigUint]| v.iter().map(|c| c.bits()).max().unwrap_or(0);
    let (ma, mb) = (max_bits(a), max_bits(b));
    if ma == 0 || mb == 0 {
        return vec![BigUint::zero(); len];
    }
    let terms = a.len().min(b.len()) as u64;
    let slot = ma + mb + (64 - terms.leading_zeros() as u64) + 1;
    let pa = pack(a, slot);
    let pb = pack(b, slot);
    unpack(&(pa * pb), slot, len)
}

fn pack(v: &[BigUint], slot: u64) -> BigUint {
    let total_bits = slot * v.len() as u64;
    let mut words = vec![0u64; total_bits.div_ceil(64) as usize + 1];
    for (i, c) in v.iter().enumerate() {
        let mut offset = i as u64 * slot;
        for digit in c.iter_u64_digits() {
            let w = (offset / 64) as usize;
            let s = offset % 64;
            words[w] |= digit << s;
            if s != 0 {
                words[w + 1] |= digit >> (64 - s);
            }
            offset += 64;
        }
    }
    let mut digits = Vec::with_capacity(words.len() * 2);
    for w in words {
        digits.push(w as u32);
        digits.push((w >> 32) as u32);
    }
    BigUint::new(digits)
}

fn unpack(x: &BigUint, slot: u64, len: usize) -> Vec<BigUint> {
    let words: Vec<u64> = x.iter_u64_digits().collect();
    let read_word = |bit: u64| -> u64 {
        let w = (bit / 64) as usize;
        let s = bit % 64;
        let lo = words.get(w).copied().unwrap_or(0) >> s;
        let hi = if s == 0 {
            0
        } else {
            words.get(w + 1).copied().unwrap_or(0) << (64 - s)
        };
        lo | hi
    };
    (0..len)
        .map(|i| {
            let start = i as u64 * slot;
            let nwords = slot.div_ceil(64);
            let mut digits: Vec<u32> = Vec::with_capacity(2 * nwords as usize);
            for k in 0..nwords {
                let mut w = read_word(start + 64 * k);
                let remaining = slot - 64 * k;
                if remaining < 64 {
                    w &= (1u64 << remaining) - 1;
                }
                digits.push(w as u32);
                digits.push((w >> 32) as u32);
            }
            BigUint::new(digits)
        })
        .collect()
}

/// A polynomial in two variables `q` and `t`, stored sparsely. Keys are
/// `(t_exponent, q_exponent)` so iteration runs lexicographically in
/// `(t, q)`; stored coefficients are never zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QTPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl QTPoly {
    pub fn zero() -> Self {
        QTPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0, 0)
    }

    /// `c * q^q_exp * t^t_exp`
    pub fn monomial<T: Into<BigInt>>(c: T, q_exp: u32, t_exp: u32) -> Self {
        let mut out = QTPoly::zero();
        out.add_term(t_exp, q_exp, c.into());
        out
    }

    /// Embeds a `q`-polynomial multiplied by `t^t_exp`.
    pub fn from_qpoly(p: &QPoly, t_exp: u32) -> Self {
        let mut out = QTPoly::zero();
        for (e, c) in p.coeffs().iter().enumerate() {
            out.add_term(t_exp, e as u32, c.clone());
        }
        out
    }

    fn add_term(&mut self, t_exp: u32, q_exp: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((t_exp, q_exp)).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(t_exp, q_exp));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^q_exp t^t_exp`.
    pub fn coeff(&self, q_exp: u32, t_exp: u32) -> BigInt {
        self.terms.get(&(t_exp, q_exp)).cloned().unwrap_or_default()
    }

    /// Iterates `((t_exp, q_exp), coefficient)` in `(t, q)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `t^t_exp` as a polynomial in `q`.
    pub fn t_slice(&self, t_exp: u32) -> QPoly {
        let mut coeffs = Vec::new();
        for (&(t, e), c) in self.terms.range((t_exp, 0)..=(t_exp, u32::MAX)) {
            debug_assert_eq!(t, t_exp);
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            coeffs[e] = c.clone();
        }
        QPoly::from_coeffs(coeffs)
    }

    /// Substitutes `t = 1`.
    pub fn at_t_one(&self) -> QPoly {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (&(_, e), c) in &self.terms {
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            coeffs[e] += c;
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn eval(&self, q: &Rational, t: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(te, qe), c)| {
                Rational::from_integer(c.clone())
                    * num_traits::pow(q.clone(), qe as usize)
                    * num_traits::pow(t.clone(), te as usize)
            })
            .sum()
    }

    /// A constant `+1` or `-1`; the only units of `Z[q, t]`.
    pub fn unit_inverse(&self) -> Option<QTPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let c = self.terms.get(&(0, 0))?;
        (c.is_one() || (-c).is_one()).then(|| self.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(&(t, q), c)| serde_json::json!({"t": t, "q": q, "coefficient": bigint_json(c)}))
                .collect(),
        )
    }
}

impl fmt::Display for QTPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(t, q), c) in &self.terms {
            let mut factors = Vec::new();
            match q {
                0 => {}
                1 => factors.push("q".to_string()),
                _ => factors.push(format!("q^{q}")),
            }
            match t {
                0 => {}
                1 => factors.push("t".to_string()),
                _ => factors.push(format!("t^{t}")),
            }
            write_term(f, &mut first, c, &factors.join("*"))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &QTPoly {
    type Output = QTPoly;
    fn add(self, rhs: &QTPoly) -> QTPoly {
        let mut out = self.clone();
        for (&(t, q), c) in &rhs.terms {
            out.add_term(t, q, c.clone());
        }
        out
    }
}

impl Neg for &QTPoly {
    type Output = QTPoly;
    fn neg(self) -> QTPoly {
        QTPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Sub for &QTPoly {
    type Output = QTPoly;
    fn sub(self, rhs: &QTPoly) -> QTPoly {
        self + &(-rhs)
    }
}

impl Mul for &QTPoly {
    type Output = QTPoly;
    fn mul(self, rhs: &QTPoly) -> QTPoly {
        let mut out = QTPoly::zero();
        for (&(t1, q1), c1) in &self.terms {
            for (&(t2, q2), c2) in &rhs.terms {
                out.add_term(t1 + t2, q1 + q2, c1 * c2);
            }
        }
        out
    }
}

/// Coefficient ring for truncated power series.
pub trait SeriesCoefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiplicative inverse, when one exists in the ring.
    fn inverse(&self) -> Option<Self>;
}

impl SeriesCoefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl SeriesCoefficient for QTPoly {
    fn zero() -> Self {
        QTPoly::zero()
    }
    fn one() -> Self {
        QTPoly::one()
    }
    fn is_zero(&self) -> bool {
        QTPoly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inverse(&self) -> Option<Self> {
        self.unit_inverse()
    }
}

/// A power series in `u` truncated after `u^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<C> {
    order: usize,
    coeffs: Vec<C>,
}

impl<C: SeriesCoefficient> QSeries<C> {
    /// Builds a series from the leading coefficients; missing ones are zero
    /// and anything past `order` is dropped.
    pub fn new(order: usize, mut coeffs: Vec<C>) -> Self {
        coeffs.resize(order + 1, C::zero());
        QSeries { order, coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::new(order, vec![C::one()])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n).fold(C::zero(), |acc, k| {
                    acc.add(&self.coeffs[k].mul(&rhs.coeffs[n - k]))
                })
            })
            .collect();
        QSeries { order, coeffs }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse().ok_or(Error::SeriesNotInvertible)?;
        let mut out: Vec<C> = Vec::with_capacity(self.order + 1);
        out.push(inv0.clone());
        for n in 1..=self.order {
            let acc = (1..=n).fold(C::zero(), |acc, k| acc.add(&self.coeffs[k].mul(&out[n - k])));
            out.push(C::zero().sub(&inv0.mul(&acc)));
        }
        Ok(QSeries {
            order: self.order,
            coeffs: out,
        })
    }
}

pub fn series_mul<C: SeriesCoefficient>(a: &QSeries<C>, b: &QSeries<C>) -> QSeries<C> {
    a.mul(b)
}

pub fn series_inverse<C: SeriesCoefficient>(a: &QSeries<C>) -> Result<QSeries<C>> {
    a.inverse()
}

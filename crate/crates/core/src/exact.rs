//! Exact integer and rational arithmetic helpers.
//!
//! Big integers and rationals come from `num-bigint` / `num-rational`; a
//! [`Rational`] is always stored in lowest terms with a positive denominator.
//! On top of those this module provides binomials (with the restrictive
//! convention `C(a, b) = 0` unless `0 <= b <= a`), Bernoulli numbers and
//! polynomials, and symmetric-function evaluation on compositions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int<T: Into<BigInt>>(v: T) -> BigInt {
    v.into()
}

pub fn rat<T: Into<BigInt>>(v: T) -> Rational {
    Rational::from_integer(v.into())
}

pub fn ratio<A: Into<BigInt>, B: Into<BigInt>>(num: A, den: B) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Renders a rational as `p/q`, or just `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Binomial coefficient with `C(a, b) = 0` unless `0 <= b <= a`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Ordinary multinomial coefficient `(sum k)! / prod k_i!`.
pub fn multinomial(parts: &[u32]) -> BigInt {
    let mut acc = BigInt::one();
    let mut running: i64 = 0;
    for &k in parts {
        running += i64::from(k);
        acc *= binomial(running, i64::from(k));
    }
    acc
}

pub fn pow_int(base: i64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Bernoulli numbers `B_0..=B_n` from `sum_{i=0}^{j} C(j+1, i) B_i = 0`,
/// which yields the convention `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
    out.push(Rational::one());
    for j in 1..=n {
        let mut acc = Rational::zero();
        for (i, b) in out.iter().enumerate() {
            acc += Rational::from_integer(binomial(j as i64 + 1, i as i64)) * b;
        }
        out.push(-acc / Rational::from_integer(BigInt::from(j + 1)));
    }
    out
}

pub fn bernoulli_number(j: usize) -> Rational {
    bernoulli_numbers(j).pop().expect("table holds B_0..=B_j")
}

/// The Bernoulli polynomial `B_j(x) = sum_i C(j, i) B_i x^(j - i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliPolynomial {
    /// Coefficient of `x^m` at index `m`.
    coefficients: Vec<Rational>,
}

impl BernoulliPolynomial {
    pub fn new(j: usize) -> Self {
        let b = bernoulli_numbers(j);
        let mut coefficients = vec![Rational::zero(); j + 1];
        for (i, bi) in b.iter().enumerate() {
            coefficients[j - i] = Rational::from_integer(binomial(j as i64, i as i64)) * bi;
        }
        BernoulliPolynomial { coefficients }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

pub fn bernoulli_polynomial_eval(j: usize, x: &Rational) -> Rational {
    BernoulliPolynomial::new(j).eval(x)
}

/// `e_s(k_1, .., k_r)`; zero when `s > r`.
pub fn elementary_symmetric(s: usize, parts: &[u32]) -> BigInt {
    if s > parts.len() {
        return BigInt::zero();
    }
    // e[m] after processing a prefix of the variables.
    let mut e = vec![BigInt::zero(); s + 1];
    e[0] = BigInt::one();
    for &k in parts {
        for m in (1..=s).rev() {
            let prev = &e[m - 1] * k;
            e[m] += prev;
        }
    }
    e.swap_remove(s)
}

pub fn power_sum(s: u32, parts: &[u32]) -> BigInt {
    parts
        .iter()
        .map(|&k| num_traits::pow(BigInt::from(k), s as usize))
        .sum()
}

/// Returns the integer value of `r` if it has denominator one.
pub fn as_integer(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

//! Moments and cumulants of coefficient distributions, the closed forms for
//! q-multinomials and generalized Galois numbers, and normality diagnostics.
//!
//! A nonnegative polynomial `f(q)` is read as the probability generating
//! function `f(q) / f(1)`. Everything is exact except the standard normal
//! CDF, which only enters the Kolmogorov distance.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    bernoulli_number, bernoulli_polynomial_eval, binomial, elementary_symmetric, factorial,
    format_rational, multinomial, pow_int, power_sum, rational_to_f64, Rational,
};
use crate::limits::Limits;
use crate::qcombi::{galois_number, rogers_szego_with_cap, Composition, QBinomialTable};
use crate::qpoly::QPoly;

/// Default absolute accuracy of [`normal_cdf`] and of reported Kolmogorov distances.
pub const DEFAULT_CDF_PRECISION: f64 = 1e-12;

/// The law of `X` with `P(X = j) = c_j / sum(c)` for a nonnegative
/// polynomial `sum c_j q^j`. Masses are kept as integer weights over a
/// common total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffDistribution {
    weights: Vec<BigInt>,
    total: BigInt,
}

impl CoeffDistribution {
    pub fn from_polynomial(p: &QPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if let Some(e) = p.coeffs().iter().position(Signed::is_negative) {
            return Err(Error::NegativeCoefficient(e));
        }
        Ok(CoeffDistribution {
            weights: p.coeffs().to_vec(),
            total: p.value_at_one(),
        })
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn total(&self) -> &BigInt {
        &self.total
    }

    pub fn masses(&self) -> Vec<Rational> {
        self.weights
            .iter()
            .map(|w| Rational::new(w.clone(), self.total.clone()))
            .collect()
    }

    /// Largest point of the support.
    pub fn max_point(&self) -> usize {
        self.weights.len() - 1
    }

    /// Raw moments `E[X^1], .., E[X^order]`.
    pub fn moments(&self, order: usize) -> Vec<Rational> {
        let mut sums = vec![BigInt::zero(); order];
        for (j, w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let x = BigInt::from(j);
            let mut power = w.clone();
            for s in sums.iter_mut() {
                power *= &x;
                *s += &power;
            }
        }
        sums.into_iter()
            .map(|s| Rational::new(s, self.total.clone()))
            .collect()
    }

    pub fn mean(&self) -> Rational {
        self.moments(1).swap_remove(0)
    }

    pub fn variance(&self) -> Rational {
        self.cumulants(2).get(2).clone()
    }

    pub fn cumulants(&self, order: usize) -> CumulantVector {
        CumulantVector(cumulants_from_moments(&self.moments(order)))
    }

    /// The law of `d - X`. Requires `d >= max_point()`.
    pub fn reflect(&self, d: usize) -> Self {
        let poly = QPoly::from_coeffs(self.weights.clone()).reflect(d);
        CoeffDistribution {
            weights: poly.into_coeffs(),
            total: self.total.clone(),
        }
    }
}

pub fn distribution_from_polynomial(p: &QPoly) -> Result<CoeffDistribution> {
    CoeffDistribution::from_polynomial(p)
}

/// Cumulants `kappa_1..kappa_J`; index `j` through [`CumulantVector::get`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantVector(Vec<Rational>);

impl CumulantVector {
    pub fn new(values: Vec<Rational>) -> Self {
        CumulantVector(values)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// `kappa_j`, one-based.
    pub fn get(&self, j: usize) -> &Rational {
        &self.0[j - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    /// Cumulants of `scale * X + shift`.
    pub fn affine(&self, scale: &Rational, shift: &Rational) -> Self {
        let mut power = Rational::one();
        let values = self
            .0
            .iter()
            .enumerate()
            .map(|(i, k)| {
                power *= scale;
                let v = k * &power;
                if i == 0 {
                    v + shift
                } else {
                    v
                }
            })
            .collect();
        CumulantVector(values)
    }
}

/// `kappa_n = m_n - sum_{k=1}^{n-1} C(n-1, k-1) kappa_k m_(n-k)` with
/// `moments[i] = m_(i+1)`.
pub fn cumulants_from_moments(moments: &[Rational]) -> Vec<Rational> {
    let mut kappa: Vec<Rational> = Vec::with_capacity(moments.len());
    for n in 1..=moments.len() {
        let mut acc = moments[n - 1].clone();
        for k in 1..n {
            let c = Rational::from_integer(binomial(n as i64 - 1, k as i64 - 1));
            acc -= c * &kappa[k - 1] * &moments[n - k - 1];
        }
        kappa.push(acc);
    }
    kappa
}

/// Multiplicity vectors `(p_1, .., p_a)` with `p_1 + 2 p_2 + .. + a p_a = a`.
fn partitions_by_multiplicity(a: usize) -> Vec<Vec<usize>> {
    fn go(part: usize, remaining: usize, mult: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(mult.clone());
            return;
        }
        if part == 0 {
            return;
        }
        for count in (0..=remaining / part).rev() {
            mult[part - 1] = count;
            go(part - 1, remaining - count * part, mult, out);
        }
        mult[part - 1] = 0;
    }
    let mut out = Vec::new();
    go(a, a, &mut vec![0; a], &mut out);
    out
}

/// Raw moments from cumulants through the sum over partitions of `alpha`:
/// `E[X^alpha] = sum prod_i (kappa_i / i!)^(p_i) * alpha! / prod_i p_i!`.
pub fn moments_from_cumulants(kappa: &[Rational]) -> Vec<Rational> {
    (1..=kappa.len())
        .map(|alpha| {
            partitions_by_multiplicity(alpha)
                .into_iter()
                .map(|mult| {
                    let mut term = Rational::from_integer(factorial(alpha as u64));
                    for (i, &p) in mult.iter().enumerate() {
                        if p == 0 {
                            continue;
                        }
                        let base = &kappa[i] / Rational::from_integer(factorial(i as u64 + 1));
                        term *= num_traits::pow(base, p);
                        term /= Rational::from_integer(factorial(p as u64));
                    }
                    term
                })
                .sum()
        })
        .collect()
}

/// Mean `e_2(k)/2` and variance `((e_1(k) + 1) e_2(k) - e_3(k)) / 12` of the
/// coefficient law of `[N; k]_q`.
pub fn qmultinomial_mean_var_formula(k: &Composition) -> (Rational, Rational) {
    let parts = k.parts();
    let e1 = elementary_symmetric(1, parts);
    let e2 = elementary_symmetric(2, parts);
    let e3 = elementary_symmetric(3, parts);
    let mean = Rational::new(e2.clone(), BigInt::from(2));
    let var = Rational::new((e1 + 1) * e2 - e3, BigInt::from(12));
    (mean, var)
}

/// Mean `(r-1) N (N-1) / 4r` and variance
/// `(r-1)(r+1) N (N-1)(2N+5) / 72 r^2` of the coefficient law of
/// `G_N^(r)(q)`.
pub fn galois_mean_var_formula(n: u64, r: u64) -> (Rational, Rational) {
    let n = BigInt::from(n);
    let r = BigInt::from(r);
    let nn1 = &n * (&n - 1);
    let mean = Rational::new((&r - 1) * &nn1, 4 * &r);
    let var = Rational::new((&r - 1) * (&r + 1) * &nn1 * (2 * &n + 5), 72 * &r * &r);
    (mean, var)
}

/// Weight functions summed against multinomial coefficients over all
/// compositions of `N` into `r` parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeightedSum {
    /// `e_s(k)`
    Elementary(usize),
    /// `e_2(k)^2`
    ElementarySquared,
    /// `p_4(k)`
    PowerSum4,
}

/// Closed form of `sum_k C(N; k) w(k)`.
pub fn multinomial_weighted_sum(n: u32, r: u32, kind: WeightedSum) -> Result<BigInt> {
    let (n_i, r_i) = (i64::from(n), i64::from(r));
    // r^(N - s), only ever needed where C(N, s) != 0
    let rpow = |s: i64| -> BigInt {
        if s > n_i {
            BigInt::zero()
        } else {
            pow_int(r_i, (n_i - s) as u32)
        }
    };
    match kind {
        WeightedSum::Elementary(s) => {
            let s = s as i64;
            Ok(factorial(s as u64) * binomial(n_i, s) * binomial(r_i, s) * rpow(s))
        }
        WeightedSum::ElementarySquared => {
            let r1 = BigInt::from(r_i - 1);
            let nb = BigInt::from(n_i);
            let numer = pow_int(r_i, n)
                * (&nb * &nb * &r1 * &r1 - &nb * &r1 * &r1 + 2 * &r1)
                * &nb
                * (&nb - 1);
            let value = Rational::new(numer, BigInt::from(4 * r_i * r_i));
            if !value.is_integer() {
                return Err(Error::NonIntegral(format_rational(&value)));
            }
            Ok(value.to_integer())
        }
        WeightedSum::PowerSum4 => Ok(BigInt::from(n_i) * rpow(0)
            + 14 * binomial(n_i, 2) * rpow(1)
            + 36 * binomial(n_i, 3) * rpow(2)
            + 24 * binomial(n_i, 4) * rpow(3)),
    }
}

/// `sum_k C(N; k) w(k)` by summing over every composition.
pub fn multinomial_weighted_sum_direct(n: u32, r: u32, kind: WeightedSum) -> BigInt {
    Composition::all(n, r as usize)
        .iter()
        .map(|k| {
            let parts = k.parts();
            let w = match kind {
                WeightedSum::Elementary(s) => elementary_symmetric(s, parts),
                WeightedSum::ElementarySquared => {
                    let e2 = elementary_symmetric(2, parts);
                    &e2 * &e2
                }
                WeightedSum::PowerSum4 => power_sum(4, parts),
            };
            multinomial(parts) * w
        })
        .sum()
}

/// Cumulant `kappa_{j,k} ` of the law with generating function `[k]_q! / k!`.
fn factorial_law_cumulant(j: usize, k: u64) -> Rational {
    if j == 1 {
        return Rational::new(BigInt::from(k) * BigInt::from(k.saturating_sub(1)), BigInt::from(4));
    }
    let bj = bernoulli_number(j);
    let x = Rational::from_integer(BigInt::from(k + 1));
    &bj / Rational::from_integer(BigInt::from(j))
        * (bernoulli_polynomial_eval(j + 1, &x) / Rational::from_integer(BigInt::from(j + 1))
            - Rational::from_integer(BigInt::from(k)))
}

/// The `j`-th cumulant of the coefficient law of `[N; k]_q`:
/// `kappa_{j,N} - sum_i kappa_{j,k_i}`, which for `j >= 2` equals
/// `B_j / (j (j+1)) * (B_{j+1}(N+1) - sum_i B_{j+1}(k_i + 1))`.
pub fn qmultinomial_cumulant_formula(n: u32, k: &Composition, j: usize) -> Result<Rational> {
    if j == 0 {
        return Err(Error::InvalidArgument("cumulant order starts at 1".into()));
    }
    if k.total() != u64::from(n) {
        return Err(Error::CompositionSumMismatch {
            expected: u64::from(n),
            actual: k.total(),
        });
    }
    if j >= 3 && j % 2 == 1 {
        return Ok(Rational::zero());
    }
    let mut acc = factorial_law_cumulant(j, u64::from(n));
    for &part in k.parts() {
        acc -= factorial_law_cumulant(j, u64::from(part));
    }
    Ok(acc)
}

/// Which sequence of compositions a cumulant growth sweep follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CompositionSchedule {
    /// Parts `floor(N/r)` and `ceil(N/r)`.
    Central,
    /// The central composition with `floor(sqrt N)` moved from the last
    /// parts onto the first.
    SqrtShifted,
}

impl CompositionSchedule {
    pub fn composition(self, n: u32, r: usize) -> Result<Composition> {
        let central = Composition::central(n, r)?;
        match self {
            CompositionSchedule::Central => Ok(central),
            CompositionSchedule::SqrtShifted => {
                let mut parts = central.parts().to_vec();
                let mut shift = (n as f64).sqrt().floor() as u32;
                for i in (1..parts.len()).rev() {
                    let moved = shift.min(parts[i]);
                    parts[i] -= moved;
                    parts[0] += moved;
                    shift -= moved;
                }
                Composition::new(parts)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantOrderRow {
    pub n: u32,
    pub composition: Composition,
    pub kappa: Rational,
    /// `kappa_j / N^(j+1)`
    pub normalized: Rational,
    /// `|normalized - limit|`
    pub error: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantOrderReport {
    pub r: usize,
    pub j: usize,
    pub schedule: CompositionSchedule,
    /// `(r-1)/4r` for `j = 1`, and `B_j / (j(j+1)) * (1 - r^-j)` for `j >= 2`.
    pub limit: Rational,
    pub rows: Vec<CumulantOrderRow>,
}

impl CumulantOrderReport {
    /// True when the error to the limit shrinks strictly along the sweep,
    /// or is identically zero.
    pub fn converging(&self) -> bool {
        self.rows.iter().all(|row| row.error.is_zero())
            || self.rows.windows(2).all(|w| w[1].error < w[0].error)
    }
}

pub fn cumulant_limit(j: usize, r: usize) -> Rational {
    let r = BigInt::from(r);
    if j == 1 {
        return Rational::new(&r - 1, 4 * &r);
    }
    let rj = num_traits::pow(r, j);
    bernoulli_number(j) / Rational::from_integer(BigInt::from(j * (j + 1)))
        * Rational::new(&rj - 1, rj)
}

/// Sweeps `kappa_j / N^(j+1)` along `n_list` for the given composition
/// schedule.
pub fn cumulant_order_check(
    schedule: CompositionSchedule,
    r: usize,
    j: usize,
    n_list: &[u32],
) -> Result<CumulantOrderReport> {
    let limit = cumulant_limit(j, r);
    let rows = n_list
        .iter()
        .map(|&n| {
            let composition = schedule.composition(n, r)?;
            let kappa = qmultinomial_cumulant_formula(n, &composition, j)?;
            let scale = Rational::from_integer(pow_int(i64::from(n), j as u32 + 1));
            let normalized = &kappa / scale;
            let error = (&normalized - &limit).abs();
            Ok(CumulantOrderRow {
                n,
                composition,
                kappa,
                normalized,
                error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CumulantOrderReport {
        r,
        j,
        schedule,
        limit,
        rows,
    })
}

/// The standard normal CDF to absolute accuracy `tol`.
///
/// `Phi(z) = (1 + erf(z / sqrt 2)) / 2` with
/// `erf(x) = 2/sqrt(pi) e^(-x^2) sum_n 2^n x^(2n+1) / (2n+1)!!`, a series of
/// positive terms. Summation stops once the term ratio is at most 1/2 and the
/// scaled term is below `tol / 2`, so the discarded tail is below that term.
/// Far tails, where `Phi` is within `1e-17` of 0 or 1, are returned exactly.
pub fn normal_cdf(z: f64, tol: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z < -8.5 {
        return 0.0;
    }
    if z > 8.5 {
        return 1.0;
    }
    let x = z.abs() / std::f64::consts::SQRT_2;
    let x2 = x * x;
    let prefactor = 2.0 / std::f64::consts::PI.sqrt() * (-x2).exp();
    let tol = tol.max(1e-16);
    let mut term = x;
    let mut sum = 0.0;
    let mut n = 0u32;
    loop {
        sum += term;
        let ratio = 2.0 * x2 / (2.0 * f64::from(n) + 3.0);
        let next = term * ratio;
        if ratio <= 0.5 && prefactor * next < tol / 2.0 {
            break;
        }
        term = next;
        n += 1;
    }
    let erf = (prefactor * sum).min(1.0);
    if z >= 0.0 {
        0.5 + 0.5 * erf
    } else {
        0.5 - 0.5 * erf
    }
}

/// Sup distance between the CDF of the standardized law and `Phi`. Both
/// one-sided gaps are checked at every support point.
pub fn kolmogorov_distance(d: &CoeffDistribution, tol: f64) -> Result<f64> {
    let c = d.cumulants(2);
    if c.get(2).is_zero() {
        return Err(Error::DegenerateVariance);
    }
    let mean = rational_to_f64(c.get(1));
    let sigma = rational_to_f64(c.get(2)).sqrt();
    let mut cumulative = BigInt::zero();
    let mut prev = 0.0f64;
    let mut worst = 0.0f64;
    for (j, w) in d.weights().iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        cumulative += w;
        let cdf = rational_to_f64(&Rational::new(cumulative.clone(), d.total().clone()));
        let phi = normal_cdf((j as f64 - mean) / sigma, tol);
        worst = worst.max((cdf - phi).abs()).max((prev - phi).abs());
        prev = cdf;
    }
    Ok(worst)
}

/// Standardized shape of the coefficient law of `G_N^(r)(q)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalityReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub r: u32,
    #[serde(serialize_with = "ser_rational")]
    pub mean: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub variance: Rational,
    /// `kappa_3 |kappa_3| / kappa_2^3`, the skewness squared with its sign.
    #[serde(serialize_with = "ser_rational")]
    pub skewness_sq_signed: Rational,
    /// `kappa_4 / kappa_2^2`
    #[serde(serialize_with = "ser_rational")]
    pub excess_kurtosis: Rational,
    #[serde(serialize_with = "ser_fixed12")]
    pub kolmogorov_distance: f64,
    pub cdf_precision: f64,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn ser_fixed12<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let n: serde_json::Number = format!("{x:.12}").parse().map_err(serde::ser::Error::custom)?;
    serde::Serialize::serialize(&n, s)
}

impl NormalityReport {
    pub const CSV_HEADER: &'static str = "N,r,mean,variance,skew_sq,ex_kurtosis,kolmogorov";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.12}",
            self.n,
            self.r,
            format_rational(&self.mean),
            format_rational(&self.variance),
            format_rational(&self.skewness_sq_signed),
            format_rational(&self.excess_kurtosis),
            self.kolmogorov_distance
        )
    }
}

pub fn normality_report(n: u32, r: u32, cdf_precision: f64) -> Result<NormalityReport> {
    if n < 2 {
        return Err(Error::DegenerateVariance);
    }
    let g = galois_number(n as usize, r as usize);
    let d = CoeffDistribution::from_polynomial(&g)?;
    let c = d.cumulants(4);
    let k2 = c.get(2);
    if k2.is_zero() {
        return Err(Error::DegenerateVariance);
    }
    let k3 = c.get(3);
    let k2_cubed = k2 * k2 * k2;
    Ok(NormalityReport {
        n,
        r,
        mean: c.get(1).clone(),
        variance: k2.clone(),
        skewness_sq_signed: k3 * k3.abs() / k2_cubed,
        excess_kurtosis: c.get(4) / (k2 * k2),
        kolmogorov_distance: kolmogorov_distance(&d, cdf_precision)?,
        cdf_precision,
    })
}

/// Reports for several `N`, computed in parallel and returned in input order.
pub fn normality_sweep(r: u32, n_list: &[u32], cdf_precision: f64) -> Result<Vec<NormalityReport>> {
    n_list
        .par_iter()
        .map(|&n| normality_report(n, r, cdf_precision))
        .collect()
}

/// Covariance of `(X_1, .., X_r; Y)` under the joint law with generating
/// function `r^-N H_N^(r)(z, q)`, from the full expansion. Row/column `r`
/// (the last) belongs to `Y`.
pub fn rogers_szego_covariance(n: u32, r: usize) -> Result<Vec<Vec<Rational>>> {
    rogers_szego_covariance_with_cap(n, r, Limits::default().max_cells)
}

pub fn rogers_szego_covariance_with_cap(n: u32, r: usize, max_cells: u64) -> Result<Vec<Vec<Rational>>> {
    let h = rogers_szego_with_cap(n, r, max_cells)?;
    let dim = r + 1;
    // Integer sums of v_a and v_a v_b weighted by coefficient counts.
    let mut first = vec![BigInt::zero(); dim];
    let mut second = vec![vec![BigInt::zero(); dim]; dim];
    let mut total = BigInt::zero();
    for (k, poly) in h.iter() {
        let mass = poly.value_at_one();
        let y1: BigInt = poly.coeffs().iter().enumerate().map(|(j, c)| c * j).sum();
        let y2: BigInt = poly.coeffs().iter().enumerate().map(|(j, c)| c * j * j).sum();
        let xs: Vec<BigInt> = k.parts().iter().map(|&x| BigInt::from(x)).collect();
        total += &mass;
        for a in 0..r {
            first[a] += &mass * &xs[a];
            for b in 0..r {
                second[a][b] += &mass * &xs[a] * &xs[b];
            }
            second[a][r] += &xs[a] * &y1;
            second[r][a] += &xs[a] * &y1;
        }
        first[r] += &y1;
        second[r][r] += &y2;
    }
    let e = |x: &BigInt| Rational::new(x.clone(), total.clone());
    let means: Vec<Rational> = first.iter().map(e).collect();
    Ok((0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| e(&second[a][b]) - &means[a] * &means[b])
                .collect()
        })
        .collect())
}

/// Covariance of the multinomial law with `N` trials and `r` equally likely
/// cells: `N(r-1)/r^2` on the diagonal and `-N/r^2` off it.
pub fn multinomial_covariance(n: u32, r: usize) -> Vec<Vec<Rational>> {
    let r2 = BigInt::from(r * r);
    let diag = Rational::new(BigInt::from(n) * BigInt::from(r - 1), r2.clone());
    let off = Rational::new(-BigInt::from(n), r2);
    (0..r)
        .map(|a| (0..r).map(|b| if a == b { diag.clone() } else { off.clone() }).collect())
        .collect()
}

/// Cumulants `kappa_1..kappa_order` of every q-multinomial law with `N`
/// fixed, straight from the polynomials. Useful for bulk comparisons.
pub fn qmultinomial_cumulants_direct(n: u32, k: &Composition, order: usize, table: &QBinomialTable) -> Result<CumulantVector> {
    let poly = table.multinomial(n, k.parts());
    Ok(CoeffDistribution::from_polynomial(&poly)?.cumulants(order))
}

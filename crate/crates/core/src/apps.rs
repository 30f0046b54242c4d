//! Two consumers of the Galois-number machinery: asymptotic counts of linear
//! codes over `F_q`, and basic specializations of affine Demazure characters
//! of type A.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exact::{format_rational, Rational};
use crate::oracle::prime_power;
use crate::permstat::{descent_inv_table, low_descent_numerator};
use crate::qcombi::{galois_number, rogers_szego};
use crate::qpoly::QPoly;
use crate::stats::CoeffDistribution;

/// Asymptotic estimates for the number of linear `q`-ary codes of length
/// `n` up to permutation, monomial and semilinear monomial equivalence.
/// These are `n -> infinity` equivalents, not exact counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeCountAsymptotics {
    pub n: usize,
    pub q: u64,
    pub p: u64,
    /// `log_p q`
    pub a: u32,
    /// `sum_{des(pi) <= 1} C(n + 1 - des(pi), n) q^inv(pi)`
    pub numerator: QPoly,
    pub numerator_value: BigInt,
    /// `numerator(q) / n!`
    pub permutation_estimate: Rational,
    /// `numerator(q) / (n! (q-1)^(n-1))`
    pub monomial_estimate: Rational,
    /// `numerator(q) / (n! (q-1)^(n-1) a)`
    pub semilinear_estimate: Rational,
}

impl CodeCountAsymptotics {
    pub fn denominators(&self) -> [BigInt; 3] {
        let fact: BigInt = (1..=self.n as u64).product();
        let mono = &fact * num_traits::pow(BigInt::from(self.q - 1), self.n.saturating_sub(1));
        let semi = &mono * self.a;
        [fact, mono, semi]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let [s, m, g] = self.denominators();
        json!({
            "n": self.n,
            "q": self.q,
            "p": self.p,
            "a": self.a,
            "numerator": self.numerator.to_json(),
            "numerator_value": self.numerator_value.to_string(),
            "denominators": [s.to_string(), m.to_string(), g.to_string()],
            "asymptotic_estimate": {
                "permutation": format_rational(&self.permutation_estimate),
                "monomial": format_rational(&self.monomial_estimate),
                "semilinear": format_rational(&self.semilinear_estimate),
            },
        })
    }
}

pub fn code_count_asymptotics(n: usize, q: u64) -> Result<CodeCountAsymptotics> {
    let (p, a) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let table = descent_inv_table(n)?;
    let numerator = low_descent_numerator(&table);
    let numerator_value = numerator.eval_int(&BigInt::from(q));
    let mut out = CodeCountAsymptotics {
        n,
        q,
        p,
        a,
        numerator,
        numerator_value,
        permutation_estimate: Rational::from_integer(BigInt::from(0)),
        monomial_estimate: Rational::from_integer(BigInt::from(0)),
        semilinear_estimate: Rational::from_integer(BigInt::from(0)),
    };
    let [s, m, g] = out.denominators();
    out.permutation_estimate = Rational::new(out.numerator_value.clone(), s);
    out.monomial_estimate = Rational::new(out.numerator_value.clone(), m);
    out.semilinear_estimate = Rational::new(out.numerator_value.clone(), g);
    Ok(out)
}

fn check_rank(r: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("rank r must be at least 2, got {r}")));
    }
    Ok(())
}

/// `(i, d_r(N))` with `i = N mod r` and
/// `d_r(N) = N(N-1)/2 - (N-i)(N+i-r)/(2r)`, left as a rational.
pub fn demazure_d_exact(n: u64, r: u64) -> (u64, Rational) {
    let i = n % r;
    let (nb, ib, rb) = (BigInt::from(n), BigInt::from(i), BigInt::from(r));
    let d = Rational::new(&nb * (&nb - 1), BigInt::from(2))
        - Rational::new((&nb - &ib) * (&nb + &ib - &rb), 2 * &rb);
    (i, d)
}

/// `(i, d_r(N))`, failing if `d_r(N)` is not an integer.
pub fn demazure_d(n: u64, r: u64) -> Result<(u64, BigInt)> {
    check_rank(r as usize)?;
    let (i, d) = demazure_d_exact(n, r);
    if !d.is_integer() {
        return Err(Error::NonIntegral(format_rational(&d)));
    }
    Ok((i, d.to_integer()))
}

/// The basic specialization of the Demazure character `V_{-N w_1}(Lambda_0)`
/// of affine `sl_r`: after removing the factor `e^(Lambda_0 - d delta)` it
/// is `G_N^(r)` in `q = e^delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemazureSpecialization {
    pub n: usize,
    pub r: usize,
    pub i: u64,
    pub d: BigInt,
    /// The character divided by `e^(Lambda_0 - d delta)`.
    pub shifted: QPoly,
}

impl DemazureSpecialization {
    /// Degree distribution: the coefficient of `e^(-l delta)` in the
    /// character, as a polynomial in `l`.
    pub fn degree_polynomial(&self) -> QPoly {
        let d = self.d_usize();
        self.shifted.reflect(d)
    }

    fn d_usize(&self) -> usize {
        usize::try_from(&self.d).expect("d_r(N) is a small nonnegative integer")
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "N": self.n,
            "r": self.r,
            "i": self.i,
            "d": self.d.to_string(),
            "shifted": self.shifted.to_json(),
            "degree_polynomial": self.degree_polynomial().to_json(),
        })
    }
}

pub fn demazure_basic_specialization(n: usize, r: usize) -> Result<DemazureSpecialization> {
    let (i, d) = demazure_d(n as u64, r as u64)?;
    let shifted = galois_number(n, r);
    let basic = DemazureSpecialization { n, r, i, d, shifted };
    if basic.shifted.degree().unwrap_or(0) > basic.d_usize() {
        return Err(Error::InvalidArgument(format!(
            "degree of G_{n}^({r}) exceeds d = {}",
            basic.d
        )));
    }
    Ok(basic)
}

/// For `r = 2`: the character graded by the power `m` of
/// `e^(Lambda_1 - Lambda_0)` and the degree `l` of `e^(-l delta)`, read off
/// from `H_N^(2)(z, 1/z, q)`. Keys are `(m, l)`.
pub fn demazure_character_sl2(n: u32) -> Result<BTreeMap<(i64, u64), BigInt>> {
    let (_, d) = demazure_d(u64::from(n), 2)?;
    let d = u64::try_from(&d).expect("small");
    let laurent = rogers_szego(n, 2)?.specialize_monomial(&[1, -1])?;
    let mut out = BTreeMap::new();
    for (m, poly) in laurent {
        for (j, c) in poly.coeffs().iter().enumerate() {
            if c.sign() != num_bigint::Sign::NoSign {
                out.insert((m, d - j as u64), c.clone());
            }
        }
    }
    Ok(out)
}

/// The `V_{-4 w_1}(Lambda_0)` character of affine `sl_2` as obtained from
/// Demazure's character formula, keyed like [`demazure_character_sl2`].
pub fn demazure_reference_character_n4() -> BTreeMap<(i64, u64), BigInt> {
    let rows: [(i64, &[(u64, i64)]); 5] = [
        (4, &[(4, 1)]),
        (-4, &[(4, 1)]),
        (2, &[(1, 1), (2, 1), (3, 1), (4, 1)]),
        (-2, &[(1, 1), (2, 1), (3, 1), (4, 1)]),
        (0, &[(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)]),
    ];
    rows.iter()
        .flat_map(|(m, terms)| terms.iter().map(move |&(l, c)| ((*m, l), BigInt::from(c))))
        .collect()
}

/// Mean `((r+1)N(N-1) - 2(N-i)(N+i-r)) / 4r` and variance
/// `(r-1)(r+1) N(N-1)(2N+5) / 72r^2` of the degree `Gamma = d_r(N) - G`.
pub fn demazure_gamma_moments(n: u64, r: u64) -> Result<(Rational, Rational)> {
    check_rank(r as usize)?;
    let i = n % r;
    let (nb, ib, rb) = (BigInt::from(n), BigInt::from(i), BigInt::from(r));
    let mean = Rational::new(
        (&rb + 1) * &nb * (&nb - 1) - 2 * (&nb - &ib) * (&nb + &ib - &rb),
        4 * &rb,
    );
    let var = Rational::new(
        (&rb - 1) * (&rb + 1) * &nb * (&nb - 1) * (2 * &nb + 5),
        72 * &rb * &rb,
    );
    Ok((mean, var))
}

/// The law of `Gamma = d_r(N) - G_{N,r}`.
pub fn demazure_gamma_distribution(n: usize, r: usize) -> Result<CoeffDistribution> {
    let basic = demazure_basic_specialization(n, r)?;
    CoeffDistribution::from_polynomial(&basic.degree_polynomial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::permstat::galois_via_macmahon;
    use crate::stats::galois_mean_var_formula;

    #[test]
    fn code_examples() {
        let c = code_count_asymptotics(2, 2).unwrap();
        assert_eq!(c.numerator, QPoly::from_i64s(&[3, 1]));
        assert_eq!(c.permutation_estimate, ratio(5, 2));
        let c = code_count_asymptotics(2, 4).unwrap();
        assert_eq!(c.a, 2);
        assert_eq!(c.denominators()[2], BigInt::from(12));
        assert_eq!(c.semilinear_estimate, ratio(7, 12));
        assert_eq!(code_count_asymptotics(3, 6), Err(Error::NotPrimePower(6)));
        let json = code_count_asymptotics(3, 9).unwrap().to_json();
        assert_eq!(json["a"], 2);
        assert!(json["asymptotic_estimate"]["monomial"].is_string());
    }

    #[test]
    fn code_numerator_is_galois_number() {
        for n in 0..=9 {
            let c = code_count_asymptotics(n, 3).unwrap();
            assert_eq!(c.numerator, galois_number(n, 2), "n={n}");
        }
    }

    #[test]
    fn d_examples() {
        assert_eq!(demazure_d(4, 2).unwrap(), (0, BigInt::from(4)));
        assert_eq!(demazure_d(0, 5).unwrap(), (0, BigInt::from(0)));
        assert_eq!(demazure_d(5, 3).unwrap(), (2, BigInt::from(8)));
        assert_eq!(demazure_d(3, 2).unwrap(), (1, BigInt::from(2)));
        assert!(demazure_d(3, 1).is_err());
    }

    #[test]
    fn d_is_integral_and_is_the_degree() {
        for r in 2..=12u64 {
            for n in 0..=60u64 {
                let (i, d) = demazure_d_exact(n, r);
                assert!(i < r && (n - i) % r == 0);
                assert!(d.is_integer(), "N={n} r={r}: {d}");
                if n <= 14 && r <= 6 {
                    let g = galois_number(n as usize, r as usize);
                    assert_eq!(rat(g.degree().unwrap() as i64), d, "N={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn specialization_examples() {
        let s = demazure_basic_specialization(1, 4).unwrap();
        assert_eq!(s.shifted, QPoly::constant(4));
        let s = demazure_basic_specialization(3, 2).unwrap();
        assert_eq!(s.shifted, QPoly::from_i64s(&[4, 2, 2]));
        assert_eq!((s.i, s.d.clone()), (1, BigInt::from(2)));
        assert_eq!(s.degree_polynomial(), QPoly::from_i64s(&[2, 2, 4]));
        let s = demazure_basic_specialization(4, 2).unwrap();
        assert_eq!(s.shifted, galois_via_macmahon(4, 2).unwrap());
    }

    #[test]
    fn worked_character_example() {
        assert_eq!(demazure_character_sl2(4).unwrap(), demazure_reference_character_n4());
        let laurent = rogers_szego(4, 2).unwrap().specialize_monomial(&[1, -1]).unwrap();
        assert_eq!(laurent[&4], QPoly::one());
        assert_eq!(laurent[&-2], QPoly::from_i64s(&[1, 1, 1, 1]));
        assert_eq!(laurent[&0], QPoly::from_i64s(&[1, 1, 2, 1, 1]));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(demazure_gamma_moments(4, 2).unwrap().0, ratio(5, 2));
        assert_eq!(demazure_gamma_moments(1, 3).unwrap(), (rat(0), rat(0)));
        let d = demazure_gamma_distribution(4, 2).unwrap();
        assert_eq!(d.mean(), ratio(5, 2));
    }

    #[test]
    fn gamma_moments_match() {
        for n in 0..=20u64 {
            for r in 2..=5u64 {
                let (mean, var) = demazure_gamma_moments(n, r).unwrap();
                let (g_mean, g_var) = galois_mean_var_formula(n, r);
                let (_, d) = demazure_d(n, r).unwrap();
                assert_eq!(var, g_var);
                assert_eq!(mean, Rational::from_integer(d) - g_mean, "N={n} r={r}");
                if n <= 12 {
                    let dist = demazure_gamma_distribution(n as usize, r as usize).unwrap();
                    assert_eq!((dist.mean(), dist.variance()), (mean, var));
                }
            }
        }
    }
}

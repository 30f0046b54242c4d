//! Named suites of cross-checks between independent computations. Each
//! check records what was compared and, on mismatch, both sides exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::apps::{
    code_count_asymptotics, demazure_character_sl2, demazure_d, demazure_d_exact,
    demazure_gamma_distribution, demazure_gamma_moments, demazure_reference_character_n4,
};
use crate::error::{Error, Result};
use crate::exact::format_rational;
use crate::limits::Limits;
use crate::oracle::{character_chi, check_flag_feasible, count_flags, enumerate_subspaces, subspace_counts_by_dim};
use crate::permstat::{galois_via_macmahon, stanley_identity_check};
use crate::qcombi::{galois_number, galois_number_by_compositions, q_binomial, Composition, QBinomialTable};
use crate::stats::{
    galois_mean_var_formula, multinomial_weighted_sum, multinomial_weighted_sum_direct,
    qmultinomial_cumulant_formula, qmultinomial_cumulants_direct, qmultinomial_mean_var_formula,
    CoeffDistribution, WeightedSum,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identity,
    Oracle,
    Moments,
    Cumulants,
    Stanley,
    Demazure,
    Codes,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Identity,
        Suite::Oracle,
        Suite::Moments,
        Suite::Cumulants,
        Suite::Stanley,
        Suite::Demazure,
        Suite::Codes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identity => "identity",
            Suite::Oracle => "oracle",
            Suite::Moments => "moments",
            Suite::Cumulants => "cumulants",
            Suite::Stanley => "stanley",
            Suite::Demazure => "demazure",
            Suite::Codes => "codes",
        }
    }

    /// Defaults for the parameters this suite reads.
    pub fn default_config(self) -> VerifyConfig {
        let (n_max, r_max) = match self {
            Suite::Identity => (8, 5),
            Suite::Oracle => (4, 4),
            Suite::Moments => (20, 5),
            Suite::Cumulants => (12, 4),
            Suite::Stanley => (7, 0),
            Suite::Demazure => (20, 5),
            Suite::Codes => (9, 2),
        };
        VerifyConfig {
            n_max,
            r_max,
            q: 2,
            order: if self == Suite::Stanley { 7 } else { 6 },
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    #[serde(rename = "N_max")]
    pub n_max: usize,
    pub r_max: usize,
    pub q: u64,
    /// Cumulant order for `cumulants`, series order for `stanley`.
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn equal<T: PartialEq + fmt::Display>(name: String, expected: &T, actual: &T) -> Check {
        let passed = expected == actual;
        Check {
            name,
            passed,
            detail: (!passed).then(|| format!("expected {expected}, got {actual}")),
        }
    }

    fn holds(name: String, passed: bool, detail: impl FnOnce() -> String) -> Check {
        Check {
            name,
            passed,
            detail: (!passed).then(detail),
        }
    }

    fn from_result(name: String, result: Result<Check>) -> Check {
        result.unwrap_or_else(|e| Check {
            name,
            passed: false,
            detail: Some(e.to_string()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub config: VerifyConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<VerifyReport> {
    let checks = match suite {
        Suite::Identity => identity_checks(config),
        Suite::Oracle => oracle_checks(config)?,
        Suite::Moments => moment_checks(config),
        Suite::Cumulants => cumulant_checks(config),
        Suite::Stanley => stanley_checks(config)?,
        Suite::Demazure => demazure_checks(config),
        Suite::Codes => code_checks(config)?,
    };
    Ok(VerifyReport {
        suite,
        config: *config,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn grid(n_max: usize, r_min: usize, r_max: usize) -> Vec<(usize, usize)> {
    (0..=n_max)
        .flat_map(|n| (r_min..=r_max).map(move |r| (n, r)))
        .collect()
}

fn identity_checks(c: &VerifyConfig) -> Vec<Check> {
    grid(c.n_max, 1, c.r_max)
        .into_par_iter()
        .flat_map_iter(|(n, r)| {
            let dp = galois_number(n, r);
            let by_def = galois_number_by_compositions(n as u32, r);
            let mac = galois_via_macmahon(n, r);
            let value = BigInt::from(r).pow(n as u32);
            [
                Check::equal(format!("galois N={n} r={r}: recursion = composition sum"), &by_def, &dp),
                Check::from_result(
                    format!("galois N={n} r={r}: descent-class sum = recursion"),
                    mac.map(|m| Check::equal(format!("galois N={n} r={r}: descent-class sum = recursion"), &dp, &m)),
                ),
                Check::equal(format!("galois N={n} r={r}: value at q=1 is r^N"), &value, &dp.value_at_one()),
            ]
        })
        .collect()
}

fn oracle_checks(c: &VerifyConfig) -> Result<Vec<Check>> {
    let q = c.q;
    let qb = BigInt::from(q);
    check_flag_feasible(q, c.n_max, &Limits::default())?;
    let mut checks = Vec::new();
    for n in 0..=c.n_max {
        let subspaces = enumerate_subspaces(q, n)?;
        let counts = subspace_counts_by_dim(&subspaces, n);
        for (k, &count) in counts.iter().enumerate() {
            checks.push(Check::equal(
                format!("subspaces q={q} N={n} dim={k}: count = [N;k] at q"),
                &q_binomial(n, k as i64).eval_int(&qb),
                &BigInt::from(count),
            ));
        }
        let id: Vec<u32> = (1..=n as u32).collect();
        checks.push(Check::equal(
            format!("chi q={q} N={n}: identity fixes every subspace"),
            &galois_number(n, 2).eval_int(&qb),
            &character_chi(q, n, &id)?,
        ));
        for r in 1..=c.r_max {
            checks.push(Check::equal(
                format!("flags q={q} N={n} r={r}: count = G_N^(r) at q"),
                &galois_number(n, r).eval_int(&qb),
                &count_flags(q, n, r)?,
            ));
        }
    }
    Ok(checks)
}

fn moment_checks(c: &VerifyConfig) -> Vec<Check> {
    let mut checks: Vec<Check> = grid(c.n_max, 1, c.r_max)
        .into_par_iter()
        .map(|(n, r)| {
            let name = format!("galois N={n} r={r}: mean and variance");
            let (mean, var) = galois_mean_var_formula(n as u64, r as u64);
            let result = CoeffDistribution::from_polynomial(&galois_number(n, r)).map(|d| {
                let (m, v) = (d.mean(), d.variance());
                Check::holds(name.clone(), m == mean && v == var, || {
                    format!(
                        "expected ({}, {}), got ({}, {})",
                        format_rational(&mean),
                        format_rational(&var),
                        format_rational(&m),
                        format_rational(&v)
                    )
                })
            });
            Check::from_result(name, result)
        })
        .collect();
    let table = QBinomialTable::new(c.n_max.min(14));
    for n in 0..=c.n_max.min(10) as u32 {
        for r in 1..=c.r_max.min(4) {
            for k in Composition::all(n, r) {
                let name = format!("q-multinomial {k}: mean and variance");
                let (mean, var) = qmultinomial_mean_var_formula(&k);
                let result = qmultinomial_cumulants_direct(n, &k, 2, &table).map(|d| {
                    Check::holds(name.clone(), d.get(1) == &mean && d.get(2) == &var, || {
                        format!("expected ({}, {})", format_rational(&mean), format_rational(&var))
                    })
                });
                checks.push(Check::from_result(name, result));
            }
            let kinds = [
                WeightedSum::Elementary(1),
                WeightedSum::Elementary(2),
                WeightedSum::Elementary(3),
                WeightedSum::Elementary(4),
                WeightedSum::ElementarySquared,
                WeightedSum::PowerSum4,
            ];
            for kind in kinds {
                let name = format!("weighted sum N={n} r={r} {kind:?}");
                let result = multinomial_weighted_sum(n, r as u32, kind)
                    .map(|v| Check::equal(name.clone(), &multinomial_weighted_sum_direct(n, r as u32, kind), &v));
                checks.push(Check::from_result(name, result));
            }
        }
    }
    checks
}

fn cumulant_checks(c: &VerifyConfig) -> Vec<Check> {
    let table = QBinomialTable::new(c.n_max);
    let cases: Vec<(u32, Composition)> = (0..=c.n_max as u32)
        .flat_map(|n| (1..=c.r_max).flat_map(move |r| Composition::all(n, r).into_iter().map(move |k| (n, k))))
        .collect();
    cases
        .par_iter()
        .flat_map_iter(|(n, k)| {
            let direct = qmultinomial_cumulants_direct(*n, k, c.order, &table);
            (1..=c.order)
                .map(|j| {
                    let name = format!("cumulant j={j} of [{n}; {k}]");
                    let result = direct.clone().and_then(|d| {
                        qmultinomial_cumulant_formula(*n, k, j).map(|f| {
                            Check::holds(name.clone(), &f == d.get(j), || {
                                format!("formula {}, direct {}", format_rational(&f), format_rational(d.get(j)))
                            })
                        })
                    });
                    Check::from_result(name, result)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

fn stanley_checks(c: &VerifyConfig) -> Result<Vec<Check>> {
    let report = stanley_identity_check(c.order)?;
    Ok(report
        .orders
        .iter()
        .flat_map(|o| {
            [
                Check::holds(format!("stanley u^{}: left side times denominator", o.order), o.product_matches, || {
                    format!("left side coefficient {}", o.lhs)
                }),
                Check::holds(format!("stanley u^{}: left side = series inverse", o.order), o.inverse_matches, || {
                    format!("left side coefficient {}", o.lhs)
                }),
            ]
        })
        .collect())
}

fn demazure_checks(c: &VerifyConfig) -> Vec<Check> {
    let mut checks = vec![Check::from_result(
        "demazure N=4 r=2: character from H_4^(2)(z, 1/z, q)".into(),
        demazure_character_sl2(4).map(|h| {
            let reference = demazure_reference_character_n4();
            Check::holds("demazure N=4 r=2: character from H_4^(2)(z, 1/z, q)".into(), h == reference, || {
                format!("expected {reference:?}, got {h:?}")
            })
        }),
    )];
    checks.push(Check::from_result(
        "demazure d_2(4) = 4".into(),
        demazure_d(4, 2).map(|(_, d)| Check::equal("demazure d_2(4) = 4".into(), &BigInt::from(4), &d)),
    ));
    let gamma: Vec<Check> = grid(c.n_max, 2, c.r_max.max(2)).into_par_iter().map(|(n, r)| {
        let name = format!("demazure N={n} r={r}: Gamma moments");
        let result = demazure_gamma_moments(n as u64, r as u64).and_then(|(mean, var)| {
            let (g_mean, g_var) = galois_mean_var_formula(n as u64, r as u64);
            let (_, d) = demazure_d(n as u64, r as u64)?;
            let dist = demazure_gamma_distribution(n, r)?;
            let shifted = crate::exact::Rational::from_integer(d) - g_mean;
            Ok(Check::holds(
                name.clone(),
                var == g_var && mean == shifted && dist.mean() == mean && dist.variance() == var,
                || {
                    format!(
                        "closed form ({}, {}), d - E[G] = {}, Galois variance {}, empirical ({}, {})",
                        format_rational(&mean),
                        format_rational(&var),
                        format_rational(&shifted),
                        format_rational(&g_var),
                        format_rational(&dist.mean()),
                        format_rational(&dist.variance())
                    )
                },
            ))
        });
        Check::from_result(name, result)
    }).collect();
    checks.extend(gamma);
    let d_max = (3 * c.n_max).max(60) as u64;
    for r in 2..=(c.r_max.max(12) as u64) {
        let bad: Vec<u64> = (0..=d_max).filter(|&n| !demazure_d_exact(n, r).1.is_integer()).collect();
        checks.push(Check::holds(format!("demazure d_{r}(N) integral for N <= {d_max}"), bad.is_empty(), || {
            format!("non-integral at N = {bad:?}")
        }));
    }
    checks
}

fn code_checks(c: &VerifyConfig) -> Result<Vec<Check>> {
    (0..=c.n_max)
        .map(|n| {
            let a = code_count_asymptotics(n, c.q)?;
            Ok(Check::equal(
                format!("codes n={n}: des <= 1 numerator = G_n(q)"),
                &galois_number(n, 2),
                &a.numerator,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite) -> VerifyConfig {
        let mut c = suite.default_config();
        c.n_max = c.n_max.min(5);
        c.r_max = c.r_max.min(3);
        c.order = c.order.min(5);
        c
    }

    #[test]
    fn every_suite_passes_on_small_inputs() {
        for suite in Suite::ALL {
            let report = run_suite(suite, &small(suite)).unwrap();
            assert!(report.passed, "{suite}: {:?}", report.failures().collect::<Vec<_>>());
            assert!(!report.checks.is_empty());
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn failing_checks_carry_both_sides() {
        let c = Check::equal("x".into(), &BigInt::from(3), &BigInt::from(4));
        assert!(!c.passed);
        assert_eq!(c.detail.as_deref(), Some("expected 3, got 4"));
        let json = serde_json::to_value(Check::equal("y".into(), &1, &1)).unwrap();
        assert!(json.get("detail").is_none());
    }

    #[test]
    fn oversized_requests_are_errors() {
        let mut c = Suite::Oracle.default_config();
        c.n_max = 30;
        assert!(run_suite(Suite::Oracle, &c).is_err());
        let mut c = Suite::Stanley.default_config();
        c.order = 40;
        assert!(run_suite(Suite::Stanley, &c).is_err());
    }
}

//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.
//!
//! Run with `cargo test -p galois-lab --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use galois_lab::apps::{
    code_count_asymptotics, demazure_character_sl2, demazure_d, demazure_d_exact,
    demazure_gamma_distribution, demazure_gamma_moments, demazure_reference_character_n4,
};
use galois_lab::exact::{format_rational, ratio};
use galois_lab::oracle::{character_chi, count_flags, swap_first_two};
use galois_lab::permstat::{galois_via_macmahon, mahonian_limit_gap, stanley_identity_check};
use galois_lab::qcombi::{galois_number, rogers_szego, Composition, QBinomialTable};
use galois_lab::stats::{
    galois_mean_var_formula, multinomial_covariance, multinomial_weighted_sum,
    multinomial_weighted_sum_direct, normality_sweep, qmultinomial_cumulant_formula,
    qmultinomial_cumulants_direct, rogers_szego_covariance, CoeffDistribution, WeightedSum,
    DEFAULT_CDF_PRECISION,
};
use galois_lab::{BigInt, QPoly, Rational};
use num_traits::{Signed, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let elapsed = start.elapsed();
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn flags_match_evaluation() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for q in [2u64, 3] {
        for n in 0..=4usize {
            for r in 1..=4usize {
                let flags = count_flags(q, n, r).map_err(|e| e.to_string())?;
                let value = galois_number(n, r).eval_int(&BigInt::from(q));
                ensure(flags == value, || format!("q={q} N={n} r={r}: {flags} flags, G = {value}"))?;
                cases += 1;
            }
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{cases} cases, exact"))
}

fn macmahon_identity() -> Outcome {
    let start = Instant::now();
    for n in 0..=9usize {
        for r in 1..=6usize {
            let mac = galois_via_macmahon(n, r).map_err(|e| e.to_string())?;
            let dp = galois_number(n, r);
            ensure(mac == dp, || format!("N={n} r={r}: {mac} vs {dp}"))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok("N <= 9, r <= 6, coefficientwise".into())
}

fn worked_example() -> Outcome {
    let laurent = rogers_szego(4, 2)
        .and_then(|h| h.specialize_monomial(&[1, -1]))
        .map_err(|e| e.to_string())?;
    let displayed: BTreeMap<i64, QPoly> = [
        (4, QPoly::from_i64s(&[1])),
        (-4, QPoly::from_i64s(&[1])),
        (2, QPoly::from_i64s(&[1, 1, 1, 1])),
        (-2, QPoly::from_i64s(&[1, 1, 1, 1])),
        (0, QPoly::from_i64s(&[1, 1, 2, 1, 1])),
    ]
    .into_iter()
    .collect();
    ensure(laurent == displayed, || format!("Laurent expansion {laurent:?}"))?;
    let (i, d) = demazure_d(4, 2).map_err(|e| e.to_string())?;
    ensure(i == 0 && d == BigInt::from(4), || format!("d_2(4) = {d}, i = {i}"))?;
    let character = demazure_character_sl2(4).map_err(|e| e.to_string())?;
    ensure(character == demazure_reference_character_n4(), || "character mismatch".into())?;
    Ok("H_4^(2)(z, 1/z, q) and d_2(4) = 4".into())
}

fn mean_variance() -> Outcome {
    for n in 0..=20usize {
        for r in 1..=5usize {
            let d = CoeffDistribution::from_polynomial(&galois_number(n, r)).map_err(|e| e.to_string())?;
            let (mean, var) = galois_mean_var_formula(n as u64, r as u64);
            ensure(d.mean() == mean && d.variance() == var, || {
                format!("N={n} r={r}: formula ({mean}, {var}), empirical ({}, {})", d.mean(), d.variance())
            })?;
        }
    }
    Ok("N <= 20, r <= 5, zero tolerance".into())
}

fn cumulant_formula() -> Outcome {
    let table = QBinomialTable::new(12);
    let mut cases = 0;
    for n in 0..=12u32 {
        for r in 1..=4usize {
            for k in Composition::all(n, r) {
                let direct = qmultinomial_cumulants_direct(n, &k, 6, &table).map_err(|e| e.to_string())?;
                for j in 1..=6 {
                    let f = qmultinomial_cumulant_formula(n, &k, j).map_err(|e| e.to_string())?;
                    ensure(&f == direct.get(j), || format!("[{n}; {k}] j={j}: {f} vs {}", direct.get(j)))?;
                    if j >= 3 && j % 2 == 1 {
                        ensure(f.is_zero(), || format!("[{n}; {k}] odd j={j}: {f}"))?;
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} (composition, j) pairs"))
}

fn weighted_sums() -> Outcome {
    let kinds = [
        WeightedSum::Elementary(1),
        WeightedSum::Elementary(2),
        WeightedSum::Elementary(3),
        WeightedSum::Elementary(4),
        WeightedSum::ElementarySquared,
        WeightedSum::PowerSum4,
    ];
    for n in 0..=10u32 {
        for r in 1..=4u32 {
            for kind in kinds {
                let closed = multinomial_weighted_sum(n, r, kind).map_err(|e| e.to_string())?;
                let direct = multinomial_weighted_sum_direct(n, r, kind);
                ensure(closed == direct, || format!("N={n} r={r} {kind:?}: {closed} vs {direct}"))?;
            }
        }
    }
    Ok("e_1..e_4, e_2^2, p_4 for N <= 10, r <= 4".into())
}

fn normality_trend() -> Outcome {
    let start = Instant::now();
    let sweep = [10u32, 20, 40, 80];
    let mut summary = Vec::new();
    for r in [2u32, 3] {
        let rows = normality_sweep(r, &sweep, DEFAULT_CDF_PRECISION).map_err(|e| e.to_string())?;
        let ks: Vec<f64> = rows.iter().map(|x| x.kolmogorov_distance).collect();
        let skew: Vec<Rational> = rows.iter().map(|x| x.skewness_sq_signed.abs()).collect();
        let kurt: Vec<Rational> = rows.iter().map(|x| x.excess_kurtosis.abs()).collect();
        ensure(ks.windows(2).all(|w| w[1] < w[0]), || format!("r={r}: KS {ks:?}"))?;
        ensure(ks[3] < ks[0] / 2.0, || format!("r={r}: KS(80) = {} vs KS(10) = {}", ks[3], ks[0]))?;
        ensure(skew.windows(2).all(|w| w[1] < w[0]), || format!("r={r}: skew^2 not decreasing"))?;
        ensure(kurt.windows(2).all(|w| w[1] < w[0]), || format!("r={r}: kurtosis not decreasing"))?;
        summary.push(format!("r={r} KS {:.6} -> {:.6}", ks[0], ks[3]));
    }
    within(start, Duration::from_secs(300))?;
    Ok(summary.join(", "))
}

fn mahonian_limit() -> Outcome {
    let rs: Vec<usize> = (1..=10).map(|e| 1usize << e).collect();
    for n in 2..=7usize {
        let gaps: Vec<Rational> = rs
            .iter()
            .map(|&r| mahonian_limit_gap(n, r))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(gaps.windows(2).all(|w| w[1] <= w[0]), || format!("N={n}: gaps not nonincreasing"))?;
        ensure(gaps[9] < &gaps[0] / Rational::from_integer(100.into()), || {
            format!("N={n}: gap(1024) = {} vs gap(2) = {}", format_rational(&gaps[9]), format_rational(&gaps[0]))
        })?;
        if n == 2 {
            for (&r, g) in rs.iter().zip(&gaps) {
                ensure(*g == ratio(1, r as i64), || format!("N=2 r={r}: gap {g}"))?;
            }
        }
    }
    Ok("r = 2..1024 (powers of two), N = 2..7".into())
}

fn covariance_blocks() -> Outcome {
    for n in 0..=8u32 {
        for r in 1..=4usize {
            let cov = rogers_szego_covariance(n, r).map_err(|e| e.to_string())?;
            let multi = multinomial_covariance(n, r);
            for a in 0..r {
                ensure(cov[a][r].is_zero() && cov[r][a].is_zero(), || format!("N={n} r={r}: Cov(X_{a}, Y) != 0"))?;
                ensure(cov[a][..r] == multi[a][..], || format!("N={n} r={r}: row {a} of Sigma(X)"))?;
            }
            let (_, var) = galois_mean_var_formula(u64::from(n), r as u64);
            ensure(cov[r][r] == var, || format!("N={n} r={r}: Var(Y) = {}", cov[r][r]))?;
        }
    }
    Ok("N <= 8, r <= 4".into())
}

fn stanley_identity() -> Outcome {
    let report = stanley_identity_check(7).map_err(|e| e.to_string())?;
    ensure(report.passed(), || {
        let bad: Vec<usize> = report
            .orders
            .iter()
            .filter(|o| !(o.product_matches && o.inverse_matches))
            .map(|o| o.order)
            .collect();
        format!("mismatch at orders {bad:?}")
    })?;
    Ok("orders 0..=7, product and inverse".into())
}

fn codes_numerator() -> Outcome {
    for n in 0..=9usize {
        for q in [2u64, 3, 4] {
            let c = code_count_asymptotics(n, q).map_err(|e| e.to_string())?;
            ensure(c.numerator == galois_number(n, 2), || format!("n={n}: {}", c.numerator))?;
        }
    }
    Ok("n <= 9".into())
}

fn demazure_moments() -> Outcome {
    for n in 0..=20u64 {
        for r in 2..=5u64 {
            let (mean, var) = demazure_gamma_moments(n, r).map_err(|e| e.to_string())?;
            let (g_mean, g_var) = galois_mean_var_formula(n, r);
            let (_, d) = demazure_d(n, r).map_err(|e| e.to_string())?;
            ensure(var == g_var, || format!("N={n} r={r}: variance {var} vs {g_var}"))?;
            let expected = Rational::from_integer(d) - g_mean;
            ensure(mean == expected, || format!("N={n} r={r}: mean {mean} vs {expected}"))?;
            let dist = demazure_gamma_distribution(n as usize, r as usize).map_err(|e| e.to_string())?;
            ensure(dist.mean() == mean && dist.variance() == var, || format!("N={n} r={r}: empirical law differs"))?;
        }
    }
    for n in 0..=60u64 {
        for r in 2..=12u64 {
            let (_, d) = demazure_d_exact(n, r);
            ensure(d.is_integer(), || format!("d_{r}({n}) = {d}"))?;
        }
    }
    Ok("moments N <= 20, r <= 5; d integral N <= 60, r <= 12".into())
}

fn character_trend() -> Outcome {
    let values: Vec<Rational> = (2..=5usize)
        .map(|n| {
            let chi = character_chi(2, n, &swap_first_two(n))?;
            Ok(Rational::new(chi, galois_number(n, 2).eval_int(&BigInt::from(2))))
        })
        .collect::<Result<_, galois_lab::Error>>()
        .map_err(|e| e.to_string())?;
    ensure(values.windows(2).all(|w| w[1] < w[0]), || format!("{values:?}"))?;
    Ok(values.iter().map(format_rational).collect::<Vec<_>>().join(" > "))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 13] = [
        ("flag counts equal G_N^(r)(q)", flags_match_evaluation),
        ("descent-class sum equals G_N^(r)", macmahon_identity),
        ("worked Laurent example and d_2(4)", worked_example),
        ("Galois mean and variance", mean_variance),
        ("q-multinomial cumulant formula", cumulant_formula),
        ("multinomial weighted sums", weighted_sums),
        ("normality trend", normality_trend),
        ("Mahonian limit gap", mahonian_limit),
        ("covariance block structure", covariance_blocks),
        ("descent/inversion series identity", stanley_identity),
        ("code-count numerator", codes_numerator),
        ("Demazure degree moments", demazure_moments),
        ("normalized transposition character", character_trend),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({detail}; {elapsed:.2}s)", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {name}: {why} ({elapsed:.2}s)", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

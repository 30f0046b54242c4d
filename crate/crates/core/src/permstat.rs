//! Inversions and descents on the symmetric group, the weighted-inversion
//! formula for generalized Galois numbers, its `r -> infinity` limit, the
//! `t`-deformation, and Stanley's descent-inversion generating function.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, pow_int, Rational};
use crate::limits::Limits;
use crate::qcombi::{q_factorial, DividedPowerSeries, QBinomialTable};
use crate::qpoly::{QPoly, QTPoly};

/// A permutation of `1..=N` with its inversion number and descent set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermRecord {
    pub perm: Vec<u32>,
    pub inv: u64,
    pub descent_set: BTreeSet<u32>,
    pub des: u32,
}

pub fn perm_stats(pi: &[u32]) -> Result<PermRecord> {
    let n = pi.len();
    let mut seen = vec![false; n];
    for &v in pi {
        let idx = v as usize;
        if idx == 0 || idx > n || seen[idx - 1] {
            return Err(Error::InvalidPermutation(format!(
                "{pi:?} is not a bijection on 1..={n}"
            )));
        }
        seen[idx - 1] = true;
    }
    let mut inv = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if pi[i] > pi[j] {
                inv += 1;
            }
        }
    }
    let descent_set: BTreeSet<u32> = (1..n).filter(|&i| pi[i - 1] > pi[i]).map(|i| i as u32).collect();
    let des = descent_set.len() as u32;
    Ok(PermRecord {
        perm: pi.to_vec(),
        inv,
        descent_set,
        des,
    })
}

/// For each descent number `t`, the inversion generating function
/// `sum_{des(pi) = t} q^inv(pi)` over the symmetric group on `N` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentInvTable {
    n: usize,
    rows: Vec<QPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMethod {
    /// Visit every permutation.
    Enumerate,
    /// Alternating sums of q-multinomials over descent-set supersets.
    InclusionExclusion,
}

impl DescentInvTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The polynomial for descent number `t`; zero past the last row.
    pub fn row(&self, t: usize) -> QPoly {
        self.rows.get(t).cloned().unwrap_or_default()
    }

    pub fn rows(&self) -> &[QPoly] {
        &self.rows
    }

    /// Sum of all rows, which is `[N]_q!`.
    pub fn total(&self) -> QPoly {
        self.rows.iter().sum()
    }

    /// Row sums at `q = 1`: the Eulerian numbers.
    pub fn eulerian(&self) -> Vec<BigInt> {
        self.rows.iter().map(QPoly::value_at_one).collect()
    }

    /// The joint generating function `sum_pi t^des q^inv`.
    pub fn to_qt(&self) -> QTPoly {
        self.rows
            .iter()
            .enumerate()
            .fold(QTPoly::zero(), |acc, (t, p)| &acc + &QTPoly::from_qpoly(p, t as u32))
    }

    /// CSV with header `N,t,exponent,coefficient`; one line per nonzero
    /// coefficient, ordered by `t` then exponent.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,t,exponent,coefficient\n");
        for (t, row) in self.rows.iter().enumerate() {
            for (e, c) in row.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    writeln!(out, "{},{},{},{}", self.n, t, e, c).expect("writing to a String");
                }
            }
        }
        out
    }
}

pub fn descent_inv_table(n: usize) -> Result<DescentInvTable> {
    descent_inv_table_with_limits(n, &Limits::default())
}

/// Enumerates for `n` up to `limits.enumeration_max_n`, and uses the
/// inclusion-exclusion path beyond that.
pub fn descent_inv_table_with_limits(n: usize, limits: &Limits) -> Result<DescentInvTable> {
    if n > limits.table_max_n {
        return Err(Error::CapExceeded {
            what: "descent/inversion table size N",
            requested: n.to_string(),
            cap: limits.table_max_n as u64,
        });
    }
    let method = if n <= limits.enumeration_max_n {
        TableMethod::Enumerate
    } else {
        TableMethod::InclusionExclusion
    };
    Ok(descent_inv_table_by(n, method))
}

pub fn descent_inv_table_by(n: usize, method: TableMethod) -> DescentInvTable {
    match method {
        TableMethod::Enumerate => enumerate_table(n),
        TableMethod::InclusionExclusion => inclusion_exclusion_table(n),
    }
}

/// Counts `(des, inv)` over all permutations. Work is split by the first
/// letter; the remaining letters are run through plain changes
/// (Steinhaus-Johnson-Trotter), so each step is one adjacent transposition
/// and `inv`, `des` update in constant time.
fn enumerate_table(n: usize) -> DescentInvTable {
    if n <= 1 {
        return DescentInvTable {
            n,
            rows: vec![QPoly::one()],
        };
    }
    let max_inv = n * (n - 1) / 2;
    let counts = (1..=n as u32)
        .into_par_iter()
        .map(|first| coset_counts(n, first, max_inv))
        .reduce(
            || vec![vec![0u64; max_inv + 1]; n],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(&b) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x += y;
                    }
                }
                a
            },
        );
    let rows = counts
        .into_iter()
        .map(|row| QPoly::from_coeffs(row.into_iter().map(BigInt::from).collect()))
        .collect();
    DescentInvTable { n, rows }
}

fn coset_counts(n: usize, first: u32, max_inv: usize) -> Vec<Vec<u64>> {
    let mut counts = vec![vec![0u64; max_inv + 1]; n];
    let m = n - 1;
    let mut word: Vec<u32> = Vec::with_capacity(n);
    word.push(first);
    word.extend((1..=n as u32).filter(|&v| v != first));
    // rank[i] is the relative order of word[i + 1] among the tail letters,
    // so plain changes can run on 0..m.
    let mut pos: Vec<usize> = (0..m).collect();
    let mut dir: Vec<isize> = vec![-1; m];
    let mut rank: Vec<usize> = (0..m).collect();

    let is_descent = |w: &[u32], i: usize| -> bool { w[i] > w[i + 1] };
    let mut inv = (first - 1) as usize;
    let mut des = usize::from(is_descent(&word, 0));

    loop {
        counts[des][inv] += 1;

        let mut mobile = None;
        for v in (0..m).rev() {
            let p = pos[v] as isize;
            let np = p + dir[v];
            if np >= 0 && (np as usize) < m && rank[np as usize] < v {
                mobile = Some((v, p as usize, np as usize));
                break;
            }
        }
        let Some((v, p, np)) = mobile else { break };
        let (lo, hi) = (p.min(np), p.max(np));

        // Full-word indices of the swapped pair.
        let (a, b) = (lo + 1, hi + 1);
        let window = a.saturating_sub(1)..(b + 1).min(n - 1);
        let before: usize = window.clone().filter(|&i| is_descent(&word, i)).count();
        inv = if word[a] < word[b] { inv + 1 } else { inv - 1 };
        word.swap(a, b);
        rank.swap(lo, hi);
        pos[rank[lo]] = lo;
        pos[rank[hi]] = hi;
        let after: usize = window.filter(|&i| is_descent(&word, i)).count();
        des = des + after - before;

        for d in dir.iter_mut().skip(v + 1) {
            *d = -*d;
        }
    }
    counts
}

/// `B_s = sum` of `[N; c]_q` over compositions `c` of `N` into `s + 1`
/// positive parts, for `s = 0..N`. Then
/// `A_t = sum_s (-1)^(t - s) C(N - 1 - s, t - s) B_s`.
fn inclusion_exclusion_table(n: usize) -> DescentInvTable {
    if n <= 1 {
        return DescentInvTable {
            n,
            rows: vec![QPoly::one()],
        };
    }
    let table = QBinomialTable::new(n);
    // positive[j][m]: compositions of m into j positive parts
    let mut positive: Vec<Vec<QPoly>> = Vec::with_capacity(n + 1);
    let mut zero_parts = vec![QPoly::zero(); n + 1];
    zero_parts[0] = QPoly::one();
    positive.push(zero_parts);
    for j in 1..=n {
        let prev = &positive[j - 1];
        let level: Vec<QPoly> = (0..=n)
            .into_par_iter()
            .map(|m| {
                if m < j {
                    return QPoly::zero();
                }
                (1..=m - j + 1)
                    .map(|a| table.get_ref(m, a) * &prev[m - a])
                    .sum()
            })
            .collect();
        positive.push(level);
    }
    let big_b: Vec<QPoly> = (0..n).map(|s| positive[s + 1][n].clone()).collect();
    let rows = (0..n)
        .map(|t| {
            (0..=t)
                .map(|s| {
                    let mut c = binomial((n - 1 - s) as i64, (t - s) as i64);
                    if (t - s) % 2 == 1 {
                        c = -c;
                    }
                    big_b[s].scale(&c)
                })
                .sum()
        })
        .collect();
    DescentInvTable { n, rows }
}

/// Converts `S = {s_1 < .. < s_j}` to `(s_1, s_2 - s_1, .., N - s_j)`.
pub fn composition_of_set(n: u32, set: &BTreeSet<u32>) -> Vec<u32> {
    let mut out = Vec::with_capacity(set.len() + 1);
    let mut last = 0;
    for &s in set {
        out.push(s - last);
        last = s;
    }
    out.push(n - last);
    out
}

/// `sum_{D(pi) = T} q^inv(pi)` by inclusion-exclusion over subsets of `T`.
pub fn descent_class_inv_poly(n: u32, descent_set: &BTreeSet<u32>) -> Result<QPoly> {
    if let Some(&bad) = descent_set.iter().find(|&&s| s == 0 || s >= n) {
        return Err(Error::InvalidArgument(format!(
            "descent position {bad} is outside 1..{n}"
        )));
    }
    let elems: Vec<u32> = descent_set.iter().copied().collect();
    let table = QBinomialTable::new(n as usize);
    let t = elems.len();
    let mut acc = QPoly::zero();
    for mask in 0u64..(1u64 << t) {
        let subset: BTreeSet<u32> = (0..t).filter(|&i| mask & (1 << i) != 0).map(|i| elems[i]).collect();
        let term = table.multinomial(n, &composition_of_set(n, &subset));
        if (t - subset.len()) % 2 == 1 {
            acc -= &term;
        } else {
            acc += &term;
        }
    }
    Ok(acc)
}

/// `G_N^(r)(q) = sum_pi C(N + r - 1 - des(pi), N) q^inv(pi)`.
pub fn galois_via_macmahon(n: usize, r: usize) -> Result<QPoly> {
    Ok(galois_from_table(&descent_inv_table(n)?, r))
}

pub fn galois_from_table(table: &DescentInvTable, r: usize) -> QPoly {
    let n = table.n() as i64;
    table
        .rows()
        .iter()
        .enumerate()
        .map(|(t, row)| row.scale(&binomial(n + r as i64 - 1 - t as i64, n)))
        .sum()
}

/// The sum restricted to permutations with at most one descent,
/// `sum_{des(pi) <= 1} C(N + 1 - des(pi), N) q^inv(pi)`.
pub fn low_descent_numerator(table: &DescentInvTable) -> QPoly {
    let n = table.n() as i64;
    (0..=1usize)
        .map(|t| table.row(t).scale(&binomial(n + 1 - t as i64, n)))
        .sum()
}

/// Largest coefficient gap between `N!/r^N * G_N^(r)(q)` and `[N]_q!`.
pub fn mahonian_limit_gap(n: usize, r: usize) -> Result<Rational> {
    Ok(mahonian_limit_gap_from_table(&descent_inv_table(n)?, r))
}

pub fn mahonian_limit_gap_from_table(table: &DescentInvTable, r: usize) -> Rational {
    let n = table.n();
    let g = galois_from_table(table, r);
    let fact = q_factorial(n);
    let scale = Rational::new(factorial(n as u64), pow_int(r as i64, n as u32));
    let len = g.len().max(fact.len());
    (0..len)
        .map(|e| (&scale * Rational::from_integer(g.coeff(e)) - Rational::from_integer(fact.coeff(e))).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// `G_N^(r)(q, t) = sum_pi C(N + r - 1 - des(pi), N) t^des(pi) q^inv(pi)`.
pub fn deformed_galois(n: usize, r: usize) -> Result<QTPoly> {
    Ok(deformed_galois_from_table(&descent_inv_table(n)?, r))
}

pub fn deformed_galois_from_table(table: &DescentInvTable, r: usize) -> QTPoly {
    let n = table.n() as i64;
    table.rows().iter().enumerate().fold(QTPoly::zero(), |acc, (t, row)| {
        let weighted = row.scale(&binomial(n + r as i64 - 1 - t as i64, n));
        &acc + &QTPoly::from_qpoly(&weighted, t as u32)
    })
}

/// `(t - 1)^k`
fn t_minus_one_pow(k: u32) -> QTPoly {
    (0..=k).fold(QTPoly::zero(), |acc, j| {
        let mut c = binomial(i64::from(k), i64::from(j));
        if (k - j) % 2 == 1 {
            c = -c;
        }
        &acc + &QTPoly::monomial(c, 0, j)
    })
}

/// `Exp_q(u (t - 1)) = sum_n q^C(n,2) (t - 1)^n u^n / [n]_q!` up to `u^order`.
pub fn exp_q_shifted(order: usize) -> DividedPowerSeries {
    let coeffs = (0..=order as u32)
        .map(|n| &QTPoly::monomial(1, n * n.saturating_sub(1) / 2, 0) * &t_minus_one_pow(n))
        .collect();
    DividedPowerSeries::new(order, coeffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StanleyOrder {
    pub order: usize,
    /// `[N]_q!` times the coefficient of `u^N`, i.e. `sum_pi t^des q^inv`.
    pub lhs: String,
    /// Coefficient of `(left side) * (Exp_q(u(t-1)) - t)` matches `1 - t`.
    pub product_matches: bool,
    /// The series inverse of `(Exp_q(u(t-1)) - t) / (1 - t)` matches the left side.
    pub inverse_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StanleyReport {
    pub max_order: usize,
    pub orders: Vec<StanleyOrder>,
}

impl StanleyReport {
    pub fn passed(&self) -> bool {
        self.orders.iter().all(|o| o.product_matches && o.inverse_matches)
    }
}

/// Compares both sides of
/// `sum_N sum_pi t^des q^inv u^N / [N]_q! = (1 - t) / (Exp_q(u(t - 1)) - t)`
/// up to `u^max_order`, with permutation tables as the left side. Two
/// checks per order, both in `Z[q, t]` after clearing `[N]_q!`:
/// the left side times the denominator, and the left side against the
/// series inverse of the normalized denominator.
pub fn stanley_identity_check(max_order: usize) -> Result<StanleyReport> {
    let limits = Limits::default();
    if max_order > limits.enumeration_max_n {
        return Err(Error::CapExceeded {
            what: "Stanley check order",
            requested: max_order.to_string(),
            cap: limits.enumeration_max_n as u64,
        });
    }
    let binomials = QBinomialTable::new(max_order);
    let lhs_coeffs: Vec<QTPoly> = (0..=max_order)
        .map(|n| descent_inv_table_by(n, TableMethod::Enumerate).to_qt())
        .collect();
    let lhs = DividedPowerSeries::new(max_order, lhs_coeffs);

    let one_minus_t = &QTPoly::one() - &QTPoly::monomial(1, 0, 1);
    let mut denominator = exp_q_shifted(max_order).coeffs().to_vec();
    denominator[0] = &denominator[0] - &QTPoly::monomial(1, 0, 1);
    let denominator = DividedPowerSeries::new(max_order, denominator);
    let product = lhs.mul(&denominator, &binomials);

    // (Exp_q(u(t-1)) - t) / (1 - t) = 1 - sum_{n>=1} q^C(n,2) (t-1)^(n-1) u^n/[n]!
    let normalized: Vec<QTPoly> = (0..=max_order as u32)
        .map(|n| {
            if n == 0 {
                QTPoly::one()
            } else {
                -&(&QTPoly::monomial(1, n * (n - 1) / 2, 0) * &t_minus_one_pow(n - 1))
            }
        })
        .collect();
    let rhs = DividedPowerSeries::new(max_order, normalized).inverse(&binomials)?;

    let orders = (0..=max_order)
        .map(|n| {
            let expected_product = if n == 0 { one_minus_t.clone() } else { QTPoly::zero() };
            StanleyOrder {
                order: n,
                lhs: lhs.coeff(n).to_string(),
                product_matches: *product.coeff(n) == expected_product,
                inverse_matches: rhs.coeff(n) == lhs.coeff(n),
            }
        })
        .collect();
    Ok(StanleyReport { max_order, orders })
}

//! q-factorials, Gaussian binomials, q-multinomials, Rogers-Szego
//! expansions and generalized Galois numbers.
//!
//! Everything here is division free: q-multinomials are chained q-binomials,
//! and q-binomials come from the Pascal-type recurrence
//! `[n; k] = [n-1; k-1] + q^k [n-1; k]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::limits::Limits;
use crate::qpoly::{QPoly, QTPoly};

/// An ordered tuple `(k_1, .., k_r)` of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument(
                "a composition needs at least one part".into(),
            ));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts `r`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&k| u64::from(k)).sum()
    }

    /// The central composition of `n` into `r` parts: every part is
    /// `floor(n/r)` or `ceil(n/r)`, larger parts last.
    pub fn central(n: u32, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("r must be positive".into()));
        }
        let base = n / r as u32;
        let extra = (n % r as u32) as usize;
        let parts = (0..r)
            .map(|i| if i >= r - extra { base + 1 } else { base })
            .collect();
        Ok(Composition(parts))
    }

    /// All compositions of `n` into exactly `r` nonnegative parts, in
    /// lexicographic order.
    pub fn all(n: u32, r: usize) -> Vec<Composition> {
        fn go(n: u32, r: usize, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if r == 1 {
                prefix.push(n);
                out.push(Composition(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in 0..=n {
                prefix.push(a);
                go(n - a, r - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if r > 0 {
            go(n, r, &mut Vec::with_capacity(r), &mut out);
        }
        out
    }

    /// `C(n + r - 1, r - 1)`, the number of compositions of `n` into `r` parts.
    pub fn count(n: u32, r: usize) -> BigInt {
        if r == 0 {
            return BigInt::from(u8::from(n == 0));
        }
        binomial(i64::from(n) + r as i64 - 1, r as i64 - 1)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Accepts a weakly decreasing sequence; trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn contains_part(&self, size: u32) -> bool {
        self.0.contains(&size)
    }

    /// Every partition with at most `r` parts, each of size at most `n`.
    pub fn all_in_box(n: u32, r: usize) -> Vec<Partition> {
        fn go(max: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition(prefix.clone()));
            if slots == 0 {
                return;
            }
            for part in 1..=max {
                prefix.push(part);
                go(part, slots - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(n, r, &mut Vec::new(), &mut out);
        out
    }
}

pub fn q_factorial(k: usize) -> QPoly {
    (1..=k).fold(QPoly::one(), |acc, i| &acc * &QPoly::q_int(i))
}

/// Pascal row `n` from row `n - 1`.
fn next_pascal_row(prev: &[QPoly]) -> Vec<QPoly> {
    let n = prev.len();
    (0..=n)
        .map(|k| {
            let mut entry = if k < n { prev[k].shift(k) } else { QPoly::zero() };
            if k > 0 {
                entry += &prev[k - 1];
            }
            entry
        })
        .collect()
}

/// Rows `0..=n` of Gaussian binomials.
#[derive(Clone, Debug)]
pub struct QBinomialTable {
    rows: Vec<Vec<QPoly>>,
}

impl QBinomialTable {
    pub fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<QPoly>> = Vec::with_capacity(n + 1);
        rows.push(vec![QPoly::one()]);
        for m in 1..=n {
            let row = next_pascal_row(&rows[m - 1]);
            rows.push(row);
        }
        QBinomialTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `[n; k]_q`, zero outside `0 <= k <= n`. Panics if `n` exceeds the table.
    pub fn get(&self, n: usize, k: i64) -> QPoly {
        if k < 0 || k as usize > n {
            return QPoly::zero();
        }
        self.rows[n][k as usize].clone()
    }

    pub fn get_ref(&self, n: usize, k: usize) -> &QPoly {
        &self.rows[n][k]
    }

    pub fn row(&self, n: usize) -> &[QPoly] {
        &self.rows[n]
    }

    /// q-multinomial as a chain of binomials from this table.
    pub fn multinomial(&self, n: u32, parts: &[u32]) -> QPoly {
        let total: u64 = parts.iter().map(|&k| u64::from(k)).sum();
        if total != u64::from(n) {
            return QPoly::zero();
        }
        let mut acc = QPoly::one();
        let mut running = 0usize;
        for &k in parts {
            running += k as usize;
            if k > 0 && (k as usize) < running {
                acc = &acc * self.get_ref(running, k as usize);
            }
        }
        acc
    }
}

/// Gaussian binomial `[n; k]_q`; zero for `k < 0` or `k > n`.
pub fn q_binomial(n: usize, k: i64) -> QPoly {
    if k < 0 || k as usize > n {
        return QPoly::zero();
    }
    let k = k as usize;
    // Only the band of columns 0..=k is needed.
    let mut row: Vec<QPoly> = vec![QPoly::one()];
    for m in 1..=n {
        let width = m.min(k) + 1;
        let mut next = Vec::with_capacity(width);
        for j in 0..width {
            let mut entry = if j < row.len() && j < m { row[j].shift(j) } else { QPoly::zero() };
            if j > 0 {
                entry += &row[j - 1];
            }
            next.push(entry);
        }
        row = next;
    }
    row.swap_remove(k)
}

/// `[N; k_1, .., k_r]_q`; zero unless the parts sum to `N`.
pub fn q_multinomial(n: u32, k: &Composition) -> QPoly {
    if k.total() != u64::from(n) {
        return QPoly::zero();
    }
    let mut acc = QPoly::one();
    let mut running = 0usize;
    for &part in k.parts() {
        running += part as usize;
        acc = &acc * &q_binomial(running, i64::from(part));
    }
    acc
}

/// The generalized Rogers-Szego polynomial `H_N^(r)(z, q)` as its full
/// table of coefficients: composition `k` maps to the coefficient of `z^k`,
/// which is `[N; k]_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RogersSzegoExpansion {
    n: u32,
    r: usize,
    entries: BTreeMap<Composition, QPoly>,
}

impl RogersSzegoExpansion {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: &Composition) -> Option<&QPoly> {
        self.entries.get(k)
    }

    /// Entries in lexicographic composition order.
    pub fn iter(&self) -> impl Iterator<Item = (&Composition, &QPoly)> {
        self.entries.iter()
    }

    /// `H_N^(r)(1, q)`, the generalized Galois number.
    pub fn at_z_one(&self) -> QPoly {
        self.entries.values().sum()
    }

    /// Substitutes `z_i = x^(a_i)` and groups by the resulting power of `x`.
    /// With `a = (1, -1)` this is the Laurent expansion of `H_N^(2)(z, 1/z, q)`.
    pub fn specialize_monomial(&self, exponents: &[i64]) -> Result<BTreeMap<i64, QPoly>> {
        if exponents.len() != self.r {
            return Err(Error::InvalidArgument(format!(
                "expected {} exponents, got {}",
                self.r,
                exponents.len()
            )));
        }
        let mut out: BTreeMap<i64, QPoly> = BTreeMap::new();
        for (k, poly) in &self.entries {
            let power: i64 = k
                .parts()
                .iter()
                .zip(exponents)
                .map(|(&part, &a)| i64::from(part) * a)
                .sum();
            *out.entry(power).or_default() += poly;
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// `[{"composition": [..], "coefficients": [..]}, ..]` in lexicographic
    /// composition order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|(k, p)| serde_json::json!({"composition": k, "coefficients": p.to_json()}))
                .collect(),
        )
    }
}

pub fn rogers_szego(n: u32, r: usize) -> Result<RogersSzegoExpansion> {
    rogers_szego_with_cap(n, r, Limits::default().max_cells)
}

pub fn rogers_szego_with_cap(n: u32, r: usize, max_cells: u64) -> Result<RogersSzegoExpansion> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let count = Composition::count(n, r);
    if count.to_u64().is_none_or(|c| c > max_cells) {
        return Err(Error::CapExceeded {
            what: "Rogers-Szego expansion entries",
            requested: count.to_string(),
            cap: max_cells,
        });
    }
    let table = QBinomialTable::new(n as usize);
    let entries = Composition::all(n, r)
        .into_par_iter()
        .map(|k| {
            let poly = table.multinomial(n, k.parts());
            (k, poly)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(RogersSzegoExpansion { n, r, entries })
}

/// The generalized Galois number `G_N^(r)(q)`, the number of flags
/// `0 = V_0 <= .. <= V_r = F_q^N` with repetitions allowed.
///
/// Uses `G_m^(s) = sum_k [m; k]_q G_k^(s-1)`, sweeping `m` upwards with a
/// rolling Pascal row. Intermediate levels keep every `m`; the top level is
/// only evaluated at `m = N`.
pub fn galois_number(n: usize, r: usize) -> QPoly {
    if r == 0 {
        return if n == 0 { QPoly::one() } else { QPoly::zero() };
    }
    if r == 1 {
        return QPoly::one();
    }
    // levels[s - 1][m] = G_m^(s) for s = 1..r-1
    let mut levels: Vec<Vec<QPoly>> = vec![vec![QPoly::one(); n + 1]];
    for _ in 2..r {
        levels.push(Vec::with_capacity(n + 1));
    }
    let mut row = vec![QPoly::one()];
    for m in 0..=n {
        if m > 0 {
            row = next_pascal_row(&row);
        }
        for s in 1..r - 1 {
            let (lower, upper) = levels.split_at_mut(s);
            let value = convolve_row(&row, &lower[s - 1][..=m]);
            upper[0].push(value);
        }
    }
    convolve_row(&row, &levels[r - 2])
}

/// `sum_k row[k] * g[k]`
fn convolve_row(row: &[QPoly], g: &[QPoly]) -> QPoly {
    debug_assert_eq!(row.len(), g.len());
    if g.iter().all(|p| p.len() == 1 && p.coeffs()[0].is_one()) {
        return row.iter().sum();
    }
    row.par_iter()
        .zip(g.par_iter())
        .map(|(b, p)| b * p)
        .reduce(QPoly::zero, |a, b| a + b)
}

/// `G_N^(r)(q)` straight from the definition: the sum of `[N; k]_q` over all
/// compositions `k` of `N` into `r` parts.
pub fn galois_number_by_compositions(n: u32, r: usize) -> QPoly {
    let table = QBinomialTable::new(n as usize);
    Composition::all(n, r)
        .iter()
        .map(|k| table.multinomial(n, k.parts()))
        .sum()
}

/// `p_{N,r} = C(N + r, N)`, the number of partitions with at most `r` parts
/// each of size at most `N`.
pub fn partition_count(n: u32, r: usize) -> BigInt {
    binomial(i64::from(n) + r as i64, i64::from(n))
}

/// The number of partitions with at most `r` parts of size at most `N` in
/// which every size in `forced` occurs as a part: `C(N + r - t, N)` with
/// `t = |forced|`.
pub fn partition_count_with_forced_sizes(n: u32, r: usize, forced: &BTreeSet<u32>) -> Result<BigInt> {
    if let Some(&bad) = forced.iter().find(|&&s| s == 0 || s > n) {
        return Err(Error::InvalidArgument(format!(
            "forced part size {bad} is outside 1..={n}"
        )));
    }
    let t = forced.len() as i64;
    Ok(binomial(i64::from(n) + r as i64 - t, i64::from(n)))
}

/// A power series `sum_N a_N u^N / [N]_q!` with coefficients in `Z[q, t]`.
/// Products use the q-binomial convolution
/// `(a * b)_N = sum_k [N; k]_q a_k b_(N-k)`, so no division by `[N]_q!` is
/// ever needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividedPowerSeries {
    coeffs: Vec<QTPoly>,
}

impl DividedPowerSeries {
    pub fn new(order: usize, mut coeffs: Vec<QTPoly>) -> Self {
        coeffs.resize(order + 1, QTPoly::zero());
        DividedPowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The cleared coefficient `a_N`, i.e. `[N]_q!` times the coefficient of `u^N`.
    pub fn coeff(&self, n: usize) -> &QTPoly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[QTPoly] {
        &self.coeffs
    }

    pub fn mul(&self, rhs: &Self, table: &QBinomialTable) -> Self {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n).fold(QTPoly::zero(), |acc, k| {
                    let binom = QTPoly::from_qpoly(table.get_ref(n, k), 0);
                    &acc + &(&binom * &(&self.coeffs[k] * &rhs.coeffs[n - k]))
                })
            })
            .collect();
        DividedPowerSeries { coeffs }
    }

    pub fn inverse(&self, table: &QBinomialTable) -> Result<Self> {
        let inv0 = self.coeffs[0].unit_inverse().ok_or(Error::SeriesNotInvertible)?;
        let mut out: Vec<QTPoly> = vec![inv0.clone()];
        for n in 1..=self.order() {
            let acc = (1..=n).fold(QTPoly::zero(), |acc, k| {
                let binom = QTPoly::from_qpoly(table.get_ref(n, k), 0);
                &acc + &(&binom * &(&self.coeffs[k] * &out[n - k]))
            });
            out.push(-&(&inv0 * &acc));
        }
        Ok(DividedPowerSeries { coeffs: out })
    }
}

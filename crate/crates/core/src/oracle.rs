//! Brute-force linear algebra over small prime fields: every subspace of
//! `F_q^N`, weakly increasing flags, and subspaces fixed by a coordinate
//! permutation.
//!
//! Nothing here uses q-analogues. Subspaces are listed as reduced row-echelon
//! matrices, one pivot pattern at a time, so the counts are an independent
//! check on polynomial evaluations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits::Limits;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, a))` with `n = p^a`, `a >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|&d| n.is_multiple_of(d))?;
    let mut m = n;
    let mut a = 0;
    while m.is_multiple_of(p) {
        m /= p;
        a += 1;
    }
    (m == 1).then_some((p, a))
}

fn inv_mod(a: u32, q: u32) -> u32 {
    // Fermat: a^(q-2)
    let (mut base, mut exp, mut acc) = (u64::from(a), q - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % u64::from(q);
        }
        base = base * base % u64::from(q);
        exp >>= 1;
    }
    acc as u32
}

/// A dense matrix over `F_q`, `q` prime, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldMatrix {
    q: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl PrimeFieldMatrix {
    pub fn zeros(q: u32, rows: usize, cols: usize) -> Result<Self> {
        if !is_prime(u64::from(q)) {
            return Err(Error::NotPrime(u64::from(q)));
        }
        Ok(PrimeFieldMatrix {
            q,
            rows,
            cols,
            entries: vec![0; rows * cols],
        })
    }

    /// Entries are reduced mod `q`; all rows must have length `cols`.
    pub fn from_rows(q: u32, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut m = PrimeFieldMatrix::zeros(q, rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                m.entries[i * cols + j] = x.rem_euclid(i64::from(q)) as u32;
            }
        }
        Ok(m)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Reduced row-echelon form with zero rows dropped.
    pub fn rref(&self) -> PrimeFieldMatrix {
        let (q, cols) = (u64::from(self.q), self.cols);
        let mut m: Vec<Vec<u32>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(rank, p);
            let inv = u64::from(inv_mod(m[rank][c], self.q));
            for x in m[rank].iter_mut() {
                *x = (u64::from(*x) * inv % q) as u32;
            }
            let pivot = m[rank].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == rank || row[c] == 0 {
                    continue;
                }
                let f = u64::from(row[c]);
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = ((u64::from(*x) + (q - f) * u64::from(y)) % q) as u32;
                }
            }
            rank += 1;
        }
        m.truncate(rank);
        PrimeFieldMatrix {
            q: self.q,
            rows: rank,
            cols,
            entries: m.concat(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rows
    }

    /// The matrix with column `j` moved to column `tau[j]`.
    fn permute_columns(&self, tau: &[u32]) -> PrimeFieldMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for (j, &target) in tau.iter().enumerate() {
                out.entries[i * self.cols + target as usize] = self.get(i, j);
            }
        }
        out
    }

}

/// A subspace of `F_q^N` named by the reduced row-echelon form of any basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceId {
    q: u32,
    n: usize,
    /// Basis rows, flattened.
    basis: Vec<u32>,
}

impl SubspaceId {
    pub fn from_matrix(m: &PrimeFieldMatrix) -> Self {
        let r = m.rref();
        SubspaceId {
            q: r.q,
            n: r.cols,
            basis: r.entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len().checked_div(self.n).unwrap_or(0)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn basis(&self) -> Vec<Vec<u32>> {
        if self.n == 0 {
            return Vec::new();
        }
        self.basis.chunks(self.n).map(<[u32]>::to_vec).collect()
    }

    pub fn to_matrix(&self) -> PrimeFieldMatrix {
        PrimeFieldMatrix {
            q: self.q,
            rows: self.dim(),
            cols: self.n,
            entries: self.basis.clone(),
        }
    }

    /// True when `self` is a subspace of `other`.
    pub fn is_subspace_of(&self, other: &SubspaceId) -> bool {
        if self.dim() > other.dim() {
            return false;
        }
        let (q, n) = (u64::from(self.q), self.n);
        let rows: Vec<&[u32]> = other.basis.chunks(n.max(1)).collect();
        let pivots: Vec<usize> = rows
            .iter()
            .map(|row| row.iter().position(|&x| x != 0).expect("rref rows are nonzero"))
            .collect();
        // Reduce each basis vector of self against the rref of other.
        self.basis.chunks(n.max(1)).all(|u| {
            let mut u: Vec<u64> = u.iter().map(|&x| u64::from(x)).collect();
            for (row, &p) in rows.iter().zip(&pivots) {
                let f = u[p];
                if f != 0 {
                    for (x, &y) in u.iter_mut().zip(row.iter()) {
                        *x = (*x + (q - f) * u64::from(y)) % q;
                    }
                }
            }
            u.iter().all(|&x| x == 0)
        })
    }

    /// The image under the coordinate permutation `e_j -> e_tau(j)`.
    pub fn permuted(&self, tau: &[u32]) -> SubspaceId {
        SubspaceId::from_matrix(&self.to_matrix().permute_columns(tau))
    }
}

fn check_field(q: u64, n: usize, limits: &Limits) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let vectors = (q as f64).powi(n as i32);
    if vectors > limits.field_max_vectors as f64 {
        return Err(Error::CapExceeded {
            what: "vectors in F_q^N",
            requested: format!("{q}^{n}"),
            cap: limits.field_max_vectors,
        });
    }
    Ok(())
}

/// Every `k`-subset of `0..n` as a sorted vector.
fn pivot_patterns(n: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n)
        .map(|mask| (0..n).filter(|&j| mask >> j & 1 == 1).collect::<Vec<_>>())
        .collect()
}

/// Free positions `(row, col)` of a row-echelon form with the given pivots.
fn free_positions(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for c in p + 1..n {
            if !pivots.contains(&c) {
                out.push((i, c));
            }
        }
    }
    out
}

/// Number of subspaces the enumeration would produce, counted pattern by
/// pattern without building them.
fn subspace_total(q: u64, n: usize) -> BigInt {
    pivot_patterns(n)
        .iter()
        .map(|p| num_traits::pow(BigInt::from(q), free_positions(n, p).len()))
        .sum()
}

/// All subspaces of `F_q^N`, sorted by dimension and then by basis.
pub fn enumerate_subspaces(q: u64, n: usize) -> Result<Vec<SubspaceId>> {
    enumerate_subspaces_with_limits(q, n, &Limits::default())
}

pub fn enumerate_subspaces_with_limits(q: u64, n: usize, limits: &Limits) -> Result<Vec<SubspaceId>> {
    check_field(q, n, limits)?;
    let total = subspace_total(q, n);
    if total > BigInt::from(limits.max_cells) {
        return Err(Error::CapExceeded {
            what: "subspaces of F_q^N",
            requested: total.to_string(),
            cap: limits.max_cells,
        });
    }
    let q32 = q as u32;
    let mut all: Vec<SubspaceId> = pivot_patterns(n)
        .into_par_iter()
        .flat_map_iter(|pivots| {
            let free = free_positions(n, &pivots);
            let count = q.pow(free.len() as u32);
            let k = pivots.len();
            (0..count).map(move |mut code| {
                let mut basis = vec![0u32; k * n];
                for (i, &p) in pivots.iter().enumerate() {
                    basis[i * n + p] = 1;
                }
                for &(i, c) in &free {
                    basis[i * n + c] = (code % q) as u32;
                    code /= q;
                }
                SubspaceId { q: q32, n, basis }
            })
        })
        .collect();
    all.par_sort_unstable_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    Ok(all)
}

/// Subspace counts indexed by dimension.
pub fn subspace_counts_by_dim(subspaces: &[SubspaceId], n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    for s in subspaces {
        counts[s.dim()] += 1;
    }
    counts
}

/// Number of flags `0 = V_0 <= V_1 <= .. <= V_r = F_q^N` with repetitions
/// allowed.
pub fn count_flags(q: u64, n: usize, r: usize) -> Result<BigInt> {
    count_flags_with_limits(q, n, r, &Limits::default())
}

/// Fails unless flags of `F_q^N` fit the caps: the vector cap, and at most
/// `max_cells` pairs of subspaces for the containment relation.
pub fn check_flag_feasible(q: u64, n: usize, limits: &Limits) -> Result<()> {
    check_field(q, n, limits)?;
    let s = subspace_total(q, n);
    if &s * &s > BigInt::from(limits.max_cells) {
        return Err(Error::CapExceeded {
            what: "subspace pairs for flag counting",
            requested: format!("{s}^2"),
            cap: limits.max_cells,
        });
    }
    Ok(())
}

pub fn count_flags_with_limits(q: u64, n: usize, r: usize, limits: &Limits) -> Result<BigInt> {
    check_flag_feasible(q, n, limits)?;
    let subspaces = enumerate_subspaces_with_limits(q, n, limits)?;
    if r == 0 {
        return Ok(BigInt::from(u8::from(n == 0)));
    }
    // below[v]: indices of all subspaces contained in subspace v
    let below: Vec<Vec<usize>> = subspaces
        .par_iter()
        .map(|v| {
            subspaces
                .iter()
                .enumerate()
                .take_while(|(_, u)| u.dim() <= v.dim())
                .filter(|(_, u)| u.is_subspace_of(v))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    // chains[v] = number of chains 0 = V_0 <= .. <= V_k = v
    let mut chains: Vec<BigInt> = subspaces
        .iter()
        .map(|v| BigInt::from(u8::from(v.dim() == 0)))
        .collect();
    for _ in 0..r {
        chains = below
            .iter()
            .map(|us| us.iter().map(|&u| &chains[u]).sum())
            .collect();
    }
    Ok(chains.last().cloned().unwrap_or_else(BigInt::zero))
}

/// `chi_N(tau)`: the number of subspaces with `tau V = V`, where `tau`
/// permutes coordinates and is given in one-line notation on `1..=N`.
pub fn character_chi(q: u64, n: usize, tau: &[u32]) -> Result<BigInt> {
    character_chi_with_limits(q, n, tau, &Limits::default())
}

pub fn character_chi_with_limits(q: u64, n: usize, tau: &[u32], limits: &Limits) -> Result<BigInt> {
    let zero_based = validate_permutation(n, tau)?;
    let subspaces = enumerate_subspaces_with_limits(q, n, limits)?;
    let fixed = subspaces
        .par_iter()
        .filter(|v| v.permuted(&zero_based) == **v)
        .count();
    Ok(BigInt::from(fixed))
}

fn validate_permutation(n: usize, tau: &[u32]) -> Result<Vec<u32>> {
    let mut seen = vec![false; n];
    if tau.len() != n {
        return Err(Error::InvalidPermutation(format!("{tau:?} has length {}, expected {n}", tau.len())));
    }
    for &x in tau {
        let i = x as usize;
        if i == 0 || i > n || seen[i - 1] {
            return Err(Error::InvalidPermutation(format!("{tau:?}")));
        }
        seen[i - 1] = true;
    }
    Ok(tau.iter().map(|x| x - 1).collect())
}

/// Cycle type of a permutation in one-line notation on `1..=N`, as a
/// weakly decreasing list.
pub fn cycle_type(tau: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; tau.len()];
    let mut out = Vec::new();
    for start in 0..tau.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = tau[i] as usize - 1;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// `chi_N` on every permutation of `1..=N`, grouped by cycle type. The map
/// values list each distinct character value seen within the class.
pub fn character_by_class(q: u64, n: usize) -> Result<BTreeMap<Vec<usize>, Vec<BigInt>>> {
    let subspaces = enumerate_subspaces(q, n)?;
    let mut out: BTreeMap<Vec<usize>, Vec<BigInt>> = BTreeMap::new();
    for tau in permutations(n) {
        let zero_based: Vec<u32> = tau.iter().map(|x| x - 1).collect();
        let value = BigInt::from(
            subspaces
                .par_iter()
                .filter(|v| v.permuted(&zero_based) == **v)
                .count(),
        );
        let values = out.entry(cycle_type(&tau)).or_default();
        if !values.contains(&value) {
            values.push(value);
        }
    }
    Ok(out)
}

/// The transposition of the first two coordinates, or the identity if `N < 2`.
pub fn swap_first_two(n: usize) -> Vec<u32> {
    let mut tau: Vec<u32> = (1..=n as u32).collect();
    if n >= 2 {
        tau.swap(0, 1);
    }
    tau
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = (1..=n as u32).collect();
    fn go(k: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == current.len() {
            out.push(current.clone());
            return;
        }
        for i in k..current.len() {
            current.swap(k, i);
            go(k + 1, current, out);
            current.swap(k, i);
        }
    }
    go(0, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcombi::{galois_number, q_binomial};

    fn eval(p: &crate::QPoly, q: u64) -> BigInt {
        p.eval_int(&BigInt::from(q))
    }

    #[test]
    fn rref_is_canonical() {
        let a = PrimeFieldMatrix::from_rows(3, 3, &[vec![1, 2, 0], vec![2, 1, 1]]).unwrap();
        let b = PrimeFieldMatrix::from_rows(3, 3, &[vec![0, 0, 1], vec![1, 2, 0], vec![2, 1, 0]]).unwrap();
        assert_eq!(SubspaceId::from_matrix(&a), SubspaceId::from_matrix(&b));
        assert_eq!(a.rank(), 2);
        let r = b.rref();
        assert_eq!(r.row(0), &[1, 2, 0]);
        assert_eq!(r.row(1), &[0, 0, 1]);
        assert_eq!(PrimeFieldMatrix::from_rows(2, 2, &[vec![3, -1]]).unwrap().row(0), &[1, 1]);
        assert_eq!(PrimeFieldMatrix::zeros(4, 1, 1), Err(Error::NotPrime(4)));
    }

    #[test]
    fn subspace_examples() {
        assert_eq!(enumerate_subspaces(2, 2).unwrap().len(), 5);
        assert_eq!(enumerate_subspaces(5, 0).unwrap().len(), 1);
        assert_eq!(enumerate_subspaces(2, 3).unwrap().len(), 16);
        assert_eq!(enumerate_subspaces(4, 2), Err(Error::NotPrime(4)));
        assert!(matches!(enumerate_subspaces(2, 19), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn subspaces_by_dimension() {
        for q in [2u64, 3] {
            for n in 0..=5usize {
                let all = enumerate_subspaces(q, n).unwrap();
                let counts = subspace_counts_by_dim(&all, n);
                for (k, &c) in counts.iter().enumerate() {
                    assert_eq!(BigInt::from(c), eval(&q_binomial(n, k as i64), q), "q={q} N={n} k={k}");
                }
                let mut dedup = all.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), all.len());
                assert!(all.iter().all(|s| SubspaceId::from_matrix(&s.to_matrix()) == *s));
            }
        }
    }

    #[test]
    fn flag_examples() {
        assert_eq!(count_flags(2, 2, 2).unwrap(), BigInt::from(5));
        for n in 0..=3 {
            assert_eq!(count_flags(3, n, 1).unwrap(), BigInt::from(1));
        }
        assert_eq!(count_flags(2, 3, 3).unwrap(), eval(&galois_number(3, 3), 2));
    }

    #[test]
    fn flags_match_galois_numbers() {
        for q in [2u64, 3] {
            for n in 0..=3usize {
                for r in 1..=4usize {
                    assert_eq!(count_flags(q, n, r).unwrap(), eval(&galois_number(n, r), q), "q={q} N={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn character_examples() {
        assert_eq!(character_chi(2, 2, &[1, 2]).unwrap(), BigInt::from(5));
        assert_eq!(character_chi(2, 2, &[2, 1]).unwrap(), BigInt::from(3));
        for n in 0..=4 {
            let id: Vec<u32> = (1..=n as u32).collect();
            assert_eq!(character_chi(3, n, &id).unwrap(), eval(&galois_number(n, 2), 3));
        }
        assert!(character_chi(2, 3, &[1, 1, 2]).is_err());
        assert!(character_chi(2, 3, &[1, 2]).is_err());
    }

    #[test]
    fn character_is_a_class_function() {
        for n in 1..=4 {
            for (class, values) in character_by_class(2, n).unwrap() {
                assert_eq!(values.len(), 1, "N={n} class {class:?}: {values:?}");
            }
        }
    }

    #[test]
    fn subspace_containment() {
        let all = enumerate_subspaces(2, 3).unwrap();
        let zero = &all[0];
        let full = all.last().unwrap();
        assert!(all.iter().all(|v| zero.is_subspace_of(v) && v.is_subspace_of(full)));
        let lines = all.iter().filter(|v| v.dim() == 1).count();
        let pairs = all
            .iter()
            .filter(|v| v.dim() == 1)
            .flat_map(|l| all.iter().filter(move |p| p.dim() == 2 && l.is_subspace_of(p)))
            .count();
        // each of 7 lines lies in 3 planes
        assert_eq!((lines, pairs), (7, 21));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(cycle_type(&[2, 1, 4, 5, 3]), vec![3, 2]);
    }
}

//! Size caps that keep combinatorially large computations from exhausting
//! memory or time.

/// Environment variable overriding [`Limits::max_cells`].
pub const MAX_CELLS_ENV: &str = "GALOIS_LAB_MAX_CELLS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of compositions a full Rogers-Szego expansion may hold.
    pub max_cells: u64,
    /// Largest `N` for which permutations of `N` are enumerated one by one.
    pub enumeration_max_n: usize,
    /// Largest `N` for which the descent/inversion table is built at all.
    pub table_max_n: usize,
    /// Largest `q^N` for brute-force linear algebra over `F_q^N`.
    pub field_max_vectors: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cells: 10_000_000,
            enumeration_max_n: 11,
            table_max_n: 40,
            field_max_vectors: 1 << 18,
        }
    }
}

impl Limits {
    /// Defaults, with `max_cells` taken from `GALOIS_LAB_MAX_CELLS` when it
    /// holds a positive integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = std::env::var(MAX_CELLS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
        {
            limits.max_cells = v;
        }
        limits
    }
}

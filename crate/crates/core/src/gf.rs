//! Linear algebra over Z_b for prime b: the generator-matrix machinery.
//!
//! Everything here is exact small-field arithmetic. Matrices are square m x m
//! with entries reduced mod b; the named constructors cover the matrices the
//! net constructions use (identity, the digit-reversal matrix J, the all-ones
//! upper and lower triangles U and L).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// True for primes; trial division is plenty for the bases in scope.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Triangular shape of a matrix, per the net-family naming.
///
/// `Diagonal` matrices are simultaneously upper and lower triangular and are
/// reported separately; `Other` covers everything that fails the nonsingular
/// triangular pattern (including any zero diagonal entry).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Triangularity {
    Nut,
    Nlt,
    Diagonal,
    Other,
}

/// Square matrix over Z_b, b prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFMatrix {
    base: u32,
    m: usize,
    entries: Vec<u32>, // row-major
}

impl GFMatrix {
    /// Builds a matrix from rows; entries are reduced mod base.
    pub fn from_rows(base: u32, rows: &[Vec<u32>]) -> Result<Self> {
        if !is_prime(base) {
            return Err(Error::NonPrimeBase(base));
        }
        let m = rows.len();
        if m == 0 {
            return Err(Error::DimensionMismatch("matrix must be non-empty".into()));
        }
        let mut entries = Vec::with_capacity(m * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in {m}x{m} matrix",
                    row.len()
                )));
            }
            entries.extend(row.iter().map(|&e| e % base));
        }
        Ok(Self { base, m, entries })
    }

    fn filled(base: u32, m: usize, f: impl Fn(usize, usize) -> u32) -> Result<Self> {
        if !is_prime(base) {
            return Err(Error::NonPrimeBase(base));
        }
        if m == 0 {
            return Err(Error::DimensionMismatch("matrix must be non-empty".into()));
        }
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                entries.push(f(i, j) % base);
            }
        }
        Ok(Self { base, m, entries })
    }

    /// The m x m identity.
    pub fn identity(base: u32, m: usize) -> Result<Self> {
        Self::filled(base, m, |i, j| u32::from(i == j))
    }

    /// The anti-diagonal (digit reversal) matrix J_m.
    pub fn anti_diagonal(base: u32, m: usize) -> Result<Self> {
        Self::filled(base, m, |i, j| u32::from(i + j == m - 1))
    }

    /// The all-ones upper triangle U_m.
    pub fn upper_ones(base: u32, m: usize) -> Result<Self> {
        Self::filled(base, m, |i, j| u32::from(j >= i))
    }

    /// The all-ones lower triangle L_m.
    pub fn lower_ones(base: u32, m: usize) -> Result<Self> {
        Self::filled(base, m, |i, j| u32::from(j <= i))
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Matrix dimension m.
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.m + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.m)
            .map(|i| self.entries[i * self.m..(i + 1) * self.m].to_vec())
            .collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.base != other.base || self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} over Z_{} vs {}x{} over Z_{}",
                self.m, self.m, self.base, other.m, other.m, other.base
            )));
        }
        Ok(())
    }

    /// Matrix product over Z_b.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (m, b) = (self.m, self.base as u64);
        let mut entries = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0u64;
                for k in 0..m {
                    acc += self.get(i, k) as u64 * other.get(k, j) as u64;
                }
                entries[i * m + j] = (acc % b) as u32;
            }
        }
        Ok(Self { base: self.base, m, entries })
    }

    /// Matrix-vector product over Z_b; `v` holds digits, least significant first.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {}x{} matrix",
                v.len(),
                self.m,
                self.m
            )));
        }
        let b = self.base as u64;
        Ok((0..self.m)
            .map(|i| {
                let mut acc = 0u64;
                for (j, &vj) in v.iter().enumerate() {
                    acc += self.get(i, j) as u64 * vj as u64;
                }
                (acc % b) as u32
            })
            .collect())
    }

    /// Inverse over Z_b via Gauss-Jordan elimination with first-nonzero pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let (m, base) = (self.m, self.base);
        let mut a: Vec<Vec<u32>> = self.rows();
        let mut inv: Vec<Vec<u32>> = Self::identity(base, m)?.rows();

        for col in 0..m {
            // First non-zero pivot in column order.
            let pivot_row = (col..m)
                .find(|&r| a[r][col] != 0)
                .ok_or(Error::Singular { base })?;
            a.swap(col, pivot_row);
            inv.swap(col, pivot_row);

            let pinv = mod_inverse(a[col][col], base);
            for j in 0..m {
                a[col][j] = mod_mul(a[col][j], pinv, base);
                inv[col][j] = mod_mul(inv[col][j], pinv, base);
            }
            for r in 0..m {
                if r == col || a[r][col] == 0 {
                    continue;
                }
                let factor = a[r][col];
                for j in 0..m {
                    a[r][j] = mod_sub(a[r][j], mod_mul(factor, a[col][j], base), base);
                    inv[r][j] = mod_sub(inv[r][j], mod_mul(factor, inv[col][j], base), base);
                }
            }
        }
        GFMatrix::from_rows(base, &inv)
    }

    /// The duality transform J * self^{-1} * J.
    ///
    /// Maps a nonsingular upper triangle to a lower one and vice versa; it is
    /// an involution on nonsingular matrices.
    pub fn nlt_dual(&self) -> Result<Self> {
        let j = Self::anti_diagonal(self.base, self.m)?;
        j.mul(&self.inverse()?)?.mul(&j)
    }

    /// Triangular classification per the net-family definitions.
    pub fn classify_triangular(&self) -> Triangularity {
        let m = self.m;
        if (0..m).any(|i| self.get(i, i) == 0) {
            return Triangularity::Other;
        }
        let below_zero = (0..m).all(|i| (0..i).all(|j| self.get(i, j) == 0));
        let above_zero = (0..m).all(|i| (i + 1..m).all(|j| self.get(i, j) == 0));
        match (below_zero, above_zero) {
            (true, true) => Triangularity::Diagonal,
            (true, false) => Triangularity::Nut,
            (false, true) => Triangularity::Nlt,
            (false, false) => Triangularity::Other,
        }
    }

    /// Reads the matrix file format: a JSON array of m rows of m integers.
    pub fn from_json_str(base: u32, s: &str) -> Result<Self> {
        let rows: Vec<Vec<u32>> =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        for row in &rows {
            for &e in row {
                if e >= base {
                    return Err(Error::Parse(format!("entry {e} not reduced mod {base}")));
                }
            }
        }
        Self::from_rows(base, &rows)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.rows()).expect("matrix serializes")
    }
}

fn mod_mul(a: u32, b: u32, base: u32) -> u32 {
    ((a as u64 * b as u64) % base as u64) as u32
}

fn mod_sub(a: u32, b: u32, base: u32) -> u32 {
    (a + base - b) % base
}

/// Inverse of a mod prime base, a != 0.
fn mod_inverse(a: u32, base: u32) -> u32 {
    debug_assert!(a != 0 && a < base);
    // Fermat: a^(b-2) mod b.
    let mut result = 1u64;
    let mut acc = a as u64;
    let mut e = base - 2;
    let b = base as u64;
    while e > 0 {
        if e & 1 == 1 {
            result = result * acc % b;
        }
        acc = acc * acc % b;
        e >>= 1;
    }
    result as u32
}

/// Rank over Z_b of an arbitrary list of length-m rows.
pub fn rank_of_rows(base: u32, rows: &[Vec<u32>]) -> usize {
    let mut a: Vec<Vec<u32>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..nrows).find(|&r| a[r][col] % base != 0) else {
            continue;
        };
        a.swap(rank, pivot_row);
        let pinv = mod_inverse(a[rank][col] % base, base);
        for j in col..ncols {
            a[rank][j] = mod_mul(a[rank][j] % base, pinv, base);
        }
        for r in 0..nrows {
            if r == rank || a[r][col] % base == 0 {
                continue;
            }
            let factor = a[r][col] % base;
            for j in col..ncols {
                let s = mod_mul(factor, a[rank][j], base);
                a[r][j] = mod_sub(a[r][j] % base, s, base);
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// The digital-net rank condition.
///
/// True iff for every split d1 + d2 = m the first d1 rows of `c1` stacked on
/// the first d2 rows of `c2` have full rank m over Z_b. Nets generated by such
/// a pair place exactly one point in every b-adic box of area b^-m.
pub fn net_rank_condition(c1: &GFMatrix, c2: &GFMatrix) -> Result<bool> {
    c1.check_compatible(c2)?;
    let m = c1.dim();
    let (rows1, rows2) = (c1.rows(), c2.rows());
    for d1 in 0..=m {
        let d2 = m - d1;
        let mut stacked: Vec<Vec<u32>> = Vec::with_capacity(m);
        stacked.extend_from_slice(&rows1[..d1]);
        stacked.extend_from_slice(&rows2[..d2]);
        if rank_of_rows(c1.base(), &stacked) < m {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_checks() {
        let primes: Vec<u32> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn identity_inverse() {
        for m in 1..=6 {
            let i = GFMatrix::identity(2, m).unwrap();
            assert_eq!(i.inverse().unwrap(), i);
        }
    }

    #[test]
    fn upper_ones_inverse_base2() {
        // U_3^{-1} over Z_2 is the unit upper bidiagonal matrix.
        let u = GFMatrix::upper_ones(2, 3).unwrap();
        let inv = u.inverse().unwrap();
        let expected =
            GFMatrix::from_rows(2, &[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]).unwrap();
        assert_eq!(inv, expected);
        assert_eq!(u.mul(&inv).unwrap(), GFMatrix::identity(2, 3).unwrap());
    }

    #[test]
    fn singular_matrices_rejected() {
        let z = GFMatrix::from_rows(2, &[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(z.inverse(), Err(Error::Singular { base: 2 }));
        let dup = GFMatrix::from_rows(3, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(dup.inverse().is_err());
    }

    #[test]
    fn composite_base_rejected() {
        assert_eq!(GFMatrix::identity(4, 3), Err(Error::NonPrimeBase(4)));
        assert_eq!(
            GFMatrix::from_rows(6, &[vec![1]]),
            Err(Error::NonPrimeBase(6))
        );
    }

    #[test]
    fn rank_condition_named_pairs() {
        let m = 4;
        let j = GFMatrix::anti_diagonal(2, m).unwrap();
        let i = GFMatrix::identity(2, m).unwrap();
        let u = GFMatrix::upper_ones(2, m).unwrap();
        assert!(net_rank_condition(&j, &i).unwrap());
        assert!(net_rank_condition(&j, &u).unwrap());

        let i2 = GFMatrix::identity(2, 2).unwrap();
        assert!(!net_rank_condition(&i2, &i2).unwrap());
    }

    #[test]
    fn rank_condition_dimension_mismatch() {
        let a = GFMatrix::identity(2, 2).unwrap();
        let b = GFMatrix::identity(2, 3).unwrap();
        assert!(matches!(
            net_rank_condition(&a, &b),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn nlt_dual_identity() {
        let i = GFMatrix::identity(2, 5).unwrap();
        assert_eq!(i.nlt_dual().unwrap(), i);
    }

    #[test]
    fn nlt_dual_of_u4() {
        let u = GFMatrix::upper_ones(2, 4).unwrap();
        let dual = u.nlt_dual().unwrap();
        let expected = GFMatrix::from_rows(
            2,
            &[
                vec![1, 0, 0, 0],
                vec![1, 1, 0, 0],
                vec![0, 1, 1, 0],
                vec![0, 0, 1, 1],
            ],
        )
        .unwrap();
        assert_eq!(dual, expected);
        assert_eq!(dual.classify_triangular(), Triangularity::Nlt);
    }

    #[test]
    fn classification() {
        assert_eq!(
            GFMatrix::identity(2, 4).unwrap().classify_triangular(),
            Triangularity::Diagonal
        );
        assert_eq!(
            GFMatrix::upper_ones(2, 4).unwrap().classify_triangular(),
            Triangularity::Nut
        );
        assert_eq!(
            GFMatrix::lower_ones(2, 4).unwrap().classify_triangular(),
            Triangularity::Nlt
        );
        // Zero diagonal entry disqualifies even a triangular shape.
        let bad = GFMatrix::from_rows(2, &[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(bad.classify_triangular(), Triangularity::Other);
        let full = GFMatrix::from_rows(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(full.classify_triangular(), Triangularity::Other);
    }

    #[test]
    fn matrix_json_round_trip() {
        let u = GFMatrix::upper_ones(2, 3).unwrap();
        let json = u.to_json_string();
        assert_eq!(json, "[[1,1,1],[0,1,1],[0,0,1]]");
        assert_eq!(GFMatrix::from_json_str(2, &json).unwrap(), u);
        assert!(GFMatrix::from_json_str(2, "[[2]]").is_err());
        assert!(GFMatrix::from_json_str(2, "[[1],[0,1]]").is_err());
    }

    /// All triangular matrices with non-zero diagonal over Z_2 for small m,
    /// upper or lower per `upper`, enumerated exhaustively.
    fn all_unit_triangular_base2(m: usize, upper: bool) -> Vec<GFMatrix> {
        let free = m * (m - 1) / 2;
        (0..1u32 << free)
            .map(|bits| {
                let mut rows = vec![vec![0u32; m]; m];
                let mut k = 0;
                for i in 0..m {
                    rows[i][i] = 1;
                    for j in (i + 1)..m {
                        let bit = (bits >> k) & 1;
                        if upper {
                            rows[i][j] = bit;
                        } else {
                            rows[j][i] = bit;
                        }
                        k += 1;
                    }
                }
                GFMatrix::from_rows(2, &rows).unwrap()
            })
            .collect()
    }

    #[test]
    fn triangular_nets_satisfy_rank_condition_exhaustively() {
        // Every nonsingular triangular c2 paired with J passes the rank
        // condition, checked over all dyadic cases up to m = 5.
        for m in 1..=5 {
            let j = GFMatrix::anti_diagonal(2, m).unwrap();
            for upper in [true, false] {
                for c2 in all_unit_triangular_base2(m, upper) {
                    assert!(
                        net_rank_condition(&j, &c2).unwrap(),
                        "failed for m={m} upper={upper} {c2:?}"
                    );
                }
            }
        }
    }

    fn arb_matrix(bases: &'static [u32]) -> impl Strategy<Value = GFMatrix> {
        (0..bases.len(), 1usize..=8).prop_flat_map(move |(bi, m)| {
            let base = bases[bi];
            proptest::collection::vec(0..base, m * m).prop_map(move |v| {
                let rows: Vec<Vec<u32>> = v.chunks(m).map(<[u32]>::to_vec).collect();
                GFMatrix::from_rows(base, &rows).unwrap()
            })
        })
    }

    fn arb_nut(bases: &'static [u32]) -> impl Strategy<Value = GFMatrix> {
        arb_matrix(bases).prop_map(|a| {
            let (base, m) = (a.base(), a.dim());
            let mut rows = a.rows();
            for i in 0..m {
                for j in 0..i {
                    rows[i][j] = 0;
                }
                if rows[i][i] == 0 {
                    rows[i][i] = 1;
                }
            }
            GFMatrix::from_rows(base, &rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn inverse_is_involution(a in arb_matrix(&[2, 3, 5])) {
            if let Ok(inv) = a.inverse() {
                prop_assert_eq!(inv.inverse().unwrap(), a.clone());
                let prod = a.mul(&inv).unwrap();
                prop_assert_eq!(prod, GFMatrix::identity(a.base(), a.dim()).unwrap());
            }
        }

        #[test]
        fn nlt_dual_is_involution(a in arb_nut(&[2, 3, 5])) {
            let dual = a.nlt_dual().unwrap();
            prop_assert!(matches!(
                dual.classify_triangular(),
                Triangularity::Nlt | Triangularity::Diagonal
            ));
            prop_assert_eq!(dual.nlt_dual().unwrap(), a);
        }

        #[test]
        fn rank_invariant_under_row_swaps(
            a in arb_matrix(&[2, 3, 5]),
            i in 0usize..8,
            j in 0usize..8,
        ) {
            let rows = a.rows();
            let rank = rank_of_rows(a.base(), &rows);
            let mut swapped = rows.clone();
            let (i, j) = (i % a.dim(), j % a.dim());
            swapped.swap(i, j);
            prop_assert_eq!(rank_of_rows(a.base(), &swapped), rank);
            prop_assert!(rank <= a.dim());
        }
    }
}

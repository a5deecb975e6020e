//! Construction of digital nets and related point sets.
//!
//! Digital nets arise by multiplying the base-b digit vector of each index n
//! by a pair of generator matrices over Z_b; the first coordinate always uses
//! the digit-reversal matrix J here, so x_n = n/b^m. The closed-form digit
//! maps (radical inverse, and the two XOR-prefix maps the triangular families
//! produce) are provided alongside, as is the Fibonacci lattice and the
//! elementary-interval counting oracle for the net property.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::GFMatrix;
use crate::pointset::{checked_pow, GridPointSet};
use crate::rational::{rat, Rational};

/// Generator-matrix pair for a digital net; base and m come from the matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetSpec {
    c1: GFMatrix,
    c2: GFMatrix,
}

impl NetSpec {
    pub fn new(c1: GFMatrix, c2: GFMatrix) -> Result<Self> {
        if c1.base() != c2.base() || c1.dim() != c2.dim() {
            return Err(Error::DimensionMismatch(format!(
                "generator matrices disagree: {}x{} over Z_{} vs {}x{} over Z_{}",
                c1.dim(),
                c1.dim(),
                c1.base(),
                c2.dim(),
                c2.dim(),
                c2.base()
            )));
        }
        Ok(Self { c1, c2 })
    }

    pub fn base(&self) -> u32 {
        self.c1.base()
    }

    pub fn m(&self) -> u32 {
        self.c1.dim() as u32
    }

    pub fn c1(&self) -> &GFMatrix {
        &self.c1
    }

    pub fn c2(&self) -> &GFMatrix {
        &self.c2
    }
}

/// Base-b digits of n, least significant first, padded to length m.
fn digits(n: u64, base: u32, m: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(m as usize);
    let mut n = n;
    let b = base as u64;
    for _ in 0..m {
        v.push((n % b) as u32);
        n /= b;
    }
    v
}

/// Numerator over base^m of sum_i digits[i-1] * base^(m-i): digit i weights
/// position i after the radix point.
fn coordinate_numerator(digits: &[u32], base: u32, m: u32) -> u64 {
    let b = base as u64;
    let mut num = 0u64;
    let mut weight = checked_pow(base, m).unwrap() / b; // base^(m-1)
    for &d in digits {
        num += d as u64 * weight;
        weight /= b;
    }
    num
}

/// Generates the digital net of a matrix pair: b^m points ordered by index n.
///
/// Point n has coordinates sum_i (C_j n)_i b^-i where n is the digit vector of
/// n, least significant digit first. The digit bijection is the identity.
pub fn generate_net(spec: &NetSpec) -> Result<GridPointSet> {
    let (base, m) = (spec.base(), spec.m());
    let den = checked_pow(base, m)?;
    if den > (1 << 26) {
        return Err(Error::TooLarge(format!(
            "net with {den} points is beyond the supported size"
        )));
    }
    let mut points = Vec::with_capacity(den as usize);
    for n in 0..den {
        let e = digits(n, base, m);
        let yx = spec.c1.mul_vec(&e)?;
        let yy = spec.c2.mul_vec(&e)?;
        points.push((
            coordinate_numerator(&yx, base, m),
            coordinate_numerator(&yy, base, m),
        ));
    }
    GridPointSet::new(base, m, points)
}

/// The three closed-form digit maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DigitMapKind {
    /// phi_b: mirrors the base-b digits of n about the radix point.
    RadicalInverse,
    /// psi: XOR of adjacent digit pairs, psi(n) = sum (e_{i-1} xor e_i)/2^i
    /// with e_0 = 0. This is the y-map of the dual of the all-ones NUT net.
    Psi,
    /// omega: XOR of digit prefixes, omega(n) = sum (e_1 xor .. xor e_i)/2^i.
    /// This is the y-map of the all-ones NLT net.
    Omega,
}

/// Numerator of the digit map value over base^m.
fn digit_map_numerator(kind: DigitMapKind, base: u32, m: u32, n: u64) -> Result<u64> {
    if base < 2 {
        return Err(Error::UnsupportedBase { base, reason: "base must be >= 2" });
    }
    let den = checked_pow(base, m)?;
    if n >= den {
        return Err(Error::OutOfRange(format!("n = {n} not below {base}^{m}")));
    }
    match kind {
        DigitMapKind::RadicalInverse => {
            let e = digits(n, base, m);
            Ok(coordinate_numerator(&e, base, m))
        }
        DigitMapKind::Psi => {
            if base != 2 {
                return Err(Error::UnsupportedBase { base, reason: "psi is dyadic" });
            }
            // Digit i of n ^ (n << 1) is e_{i-1} xor e_i with e_0 = 0; the
            // mask drops the overflow digit so the sum stops at 1/2^m.
            let folded = (n ^ (n << 1)) & (den - 1);
            let e = digits(folded, 2, m);
            Ok(coordinate_numerator(&e, 2, m))
        }
        DigitMapKind::Omega => {
            if base != 2 {
                return Err(Error::UnsupportedBase { base, reason: "omega is dyadic" });
            }
            let e = digits(n, 2, m);
            let mut prefix = 0u32;
            let folded: Vec<u32> = e
                .iter()
                .map(|&d| {
                    prefix ^= d;
                    prefix
                })
                .collect();
            Ok(coordinate_numerator(&folded, 2, m))
        }
    }
}

/// Evaluates a digit map exactly; the result has denominator base^m.
pub fn digit_map(kind: DigitMapKind, base: u32, m: u32, n: u64) -> Result<Rational> {
    let den = checked_pow(base, m)?;
    Ok(rat(digit_map_numerator(kind, base, m, n)?, den))
}

/// The Hammersley point set {(n/b^m, phi_b(n))}; any base >= 2, composite
/// bases included (the radical inverse needs no field structure).
pub fn hammersley(base: u32, m: u32) -> Result<GridPointSet> {
    if base < 2 {
        return Err(Error::UnsupportedBase { base, reason: "base must be >= 2" });
    }
    if m < 1 {
        return Err(Error::OutOfRange("m must be >= 1".into()));
    }
    let den = checked_pow(base, m)?;
    if den > (1 << 26) {
        return Err(Error::TooLarge(format!(
            "Hammersley set with {den} points is beyond the supported size"
        )));
    }
    let mut points = Vec::with_capacity(den as usize);
    for n in 0..den {
        points.push((n, digit_map_numerator(DigitMapKind::RadicalInverse, base, m, n)?));
    }
    GridPointSet::new(base, m, points)
}

/// The named net families exposed on the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedNet {
    /// Dyadic net generated by (J, U): second matrix all ones on and above
    /// the diagonal.
    Pu,
    /// Dyadic net generated by (J, L): all ones on and below the diagonal.
    Pl,
    Hammersley,
}

/// Builds one of the named nets. Pu and Pl are dyadic by definition.
pub fn named_net(kind: NamedNet, base: u32, m: u32) -> Result<GridPointSet> {
    match kind {
        NamedNet::Hammersley => hammersley(base, m),
        NamedNet::Pu | NamedNet::Pl => {
            if base != 2 {
                return Err(Error::UnsupportedBase {
                    base,
                    reason: "this net family is defined in base 2",
                });
            }
            let j = GFMatrix::anti_diagonal(2, m as usize)?;
            let c2 = match kind {
                NamedNet::Pu => GFMatrix::upper_ones(2, m as usize)?,
                _ => GFMatrix::lower_ones(2, m as usize)?,
            };
            generate_net(&NetSpec::new(j, c2)?)
        }
    }
}

/// Largest Fibonacci pair (F_{k-1}, F_k) with F_k <= n, starting from (1, 1).
fn fibonacci_pair_at_most(n: u64) -> (u64, u64) {
    let (mut prev, mut cur) = (1u64, 1u64);
    while let Some(next) = prev.checked_add(cur) {
        if next > n {
            break;
        }
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// The Fibonacci lattice with N points: {(i/N, i*F_{k-1} mod N / N)} where
/// N = F_k. N must be a Fibonacci number >= 2.
pub fn fibonacci_lattice(n: u64) -> Result<GridPointSet> {
    if n < 2 {
        return Err(Error::NotFibonacci(n));
    }
    let (prev, cur) = fibonacci_pair_at_most(n);
    if cur != n {
        return Err(Error::NotFibonacci(n));
    }
    if n > u32::MAX as u64 {
        return Err(Error::TooLarge(format!("Fibonacci lattice with {n} points")));
    }
    let points = (0..n).map(|i| (i, i * prev % n)).collect();
    // The grid denominator is N itself: base N, m = 1.
    GridPointSet::new(n as u32, 1, points)
}

/// Decides the (0,m,2)-net property by direct counting.
///
/// True iff every b-adic box of area b^-m (every split j1 + j2 = m) contains
/// exactly one point, with half-open boxes and exact integer bucket tests.
pub fn is_0m2_net_by_counting(points: &GridPointSet) -> Result<bool> {
    let (base, m, den) = (points.base() as u64, points.m(), points.den());
    if points.len() as u64 != den {
        return Err(Error::GridMismatch(format!(
            "expected {den} points for a base-{base} net with m = {m}, got {}",
            points.len()
        )));
    }
    let mut seen = vec![false; den as usize];
    for j1 in 0..=m {
        let j2 = m - j1;
        let shift_x = checked_pow(base as u32, m - j1)?; // b^(m-j1)
        let shift_y = checked_pow(base as u32, m - j2)?; // b^j1
        let buckets_y = checked_pow(base as u32, j2)?;
        seen.iter_mut().for_each(|s| *s = false);
        for &(x, y) in points.points() {
            let cell = (x / shift_x) * buckets_y + y / shift_y;
            if seen[cell as usize] {
                return Ok(false);
            }
            seen[cell as usize] = true;
        }
        // den points, den cells, no collisions: every cell hit exactly once.
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::{box_is_interior_empty, BoxReport};
    use proptest::prelude::*;

    fn j_i_spec(base: u32, m: u32) -> NetSpec {
        NetSpec::new(
            GFMatrix::anti_diagonal(base, m as usize).unwrap(),
            GFMatrix::identity(base, m as usize).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn hand_evaluated_two_bit_net() {
        let net = generate_net(&j_i_spec(2, 2)).unwrap();
        assert_eq!(net.points(), &[(0, 0), (1, 2), (2, 1), (3, 3)]);
    }

    #[test]
    fn one_bit_identity_net() {
        let net = generate_net(&j_i_spec(2, 1)).unwrap();
        assert_eq!(net.points(), &[(0, 0), (1, 1)]);
    }

    #[test]
    fn reversal_first_matrix_gives_x_equals_n() {
        for (base, m) in [(2u32, 5u32), (3, 3), (5, 2)] {
            let j = GFMatrix::anti_diagonal(base, m as usize).unwrap();
            let u = GFMatrix::upper_ones(base, m as usize).unwrap();
            let net = generate_net(&NetSpec::new(j, u).unwrap()).unwrap();
            for (n, &(x, _)) in net.points().iter().enumerate() {
                assert_eq!(x, n as u64);
            }
        }
    }

    #[test]
    fn radical_inverse_values() {
        assert_eq!(digit_map(DigitMapKind::RadicalInverse, 2, 4, 0).unwrap(), rat(0, 1));
        for m in 2..=10u32 {
            let half = 1u64 << (m - 1);
            assert_eq!(
                digit_map(DigitMapKind::RadicalInverse, 2, m, half).unwrap(),
                rat(1, 1 << m)
            );
            assert_eq!(
                digit_map(DigitMapKind::RadicalInverse, 2, m, half - 1).unwrap(),
                rat((1 << m) - 2, 1 << m)
            );
        }
    }

    #[test]
    fn psi_values() {
        for m in 4..=8u32 {
            assert_eq!(digit_map(DigitMapKind::Psi, 2, m, 4).unwrap(), rat(3, 16));
            assert_eq!(digit_map(DigitMapKind::Psi, 2, m, 5).unwrap(), rat(15, 16));
            assert_eq!(digit_map(DigitMapKind::Psi, 2, m, 6).unwrap(), rat(5, 16));
        }
    }

    #[test]
    fn omega_powers_of_two() {
        for m in 4..=10u32 {
            for k in 0..m - 1 {
                // omega(2^(k+1)) = sum_{j=k+2}^m 2^-j = (2^(m-k-1) - 1) / 2^m.
                let expected = rat((1u64 << (m - k - 1)) - 1, 1 << m);
                assert_eq!(
                    digit_map(DigitMapKind::Omega, 2, m, 1 << (k + 1)).unwrap(),
                    expected
                );
            }
        }
    }

    #[test]
    fn digit_map_domain_errors() {
        assert!(matches!(
            digit_map(DigitMapKind::RadicalInverse, 2, 3, 8),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            digit_map(DigitMapKind::Psi, 3, 3, 0),
            Err(Error::UnsupportedBase { .. })
        ));
        assert!(matches!(
            digit_map(DigitMapKind::Omega, 5, 3, 0),
            Err(Error::UnsupportedBase { .. })
        ));
    }

    #[test]
    fn hammersley_small_cases() {
        assert_eq!(
            hammersley(2, 2).unwrap().points(),
            &[(0, 0), (1, 2), (2, 1), (3, 3)]
        );
        assert_eq!(hammersley(3, 1).unwrap().points(), &[(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn hammersley_matches_digital_path() {
        for m in 1..=8 {
            let via_matrices = generate_net(&j_i_spec(2, m)).unwrap();
            assert_eq!(hammersley(2, m).unwrap(), via_matrices);
        }
        for m in 1..=4 {
            let via_matrices = generate_net(&j_i_spec(3, m)).unwrap();
            assert_eq!(hammersley(3, m).unwrap(), via_matrices);
        }
    }

    #[test]
    fn hammersley_composite_base() {
        let set = hammersley(4, 2).unwrap();
        assert_eq!(set.len(), 16);
        for (n, &(x, _)) in set.points().iter().enumerate() {
            assert_eq!(x, n as u64);
        }
        assert!(is_0m2_net_by_counting(&set).unwrap());
    }

    #[test]
    fn theorem_four_witness_box_is_empty() {
        // For m >= 4 the box just left of 1/2 with nearly full height misses
        // every Hammersley point: phi(2^(m-1)-1) = 1 - 2/2^m, phi(2^(m-1)) = 1/2^m.
        for m in 4..=8u32 {
            let den = 1u64 << m;
            let set = hammersley(2, m).unwrap();
            let bx = BoxReport::from_grid(
                den / 2 - 2, // 1/2 - 1/2^(m-1)
                den / 2 + 1, // 1/2 + 1/2^m
                1,
                den - 2,
                den,
            )
            .unwrap();
            assert!(box_is_interior_empty(&set, &bx));
            assert_eq!(bx.area, rat(3 * (den - 3), den * den));
        }
    }

    #[test]
    fn pu_dual_y_is_psi() {
        // The coordinate-swapped dual of the (J, U) net is generated by
        // (J, J U^{-1} J); its y-map is psi.
        for m in 2..=10u32 {
            let j = GFMatrix::anti_diagonal(2, m as usize).unwrap();
            let u = GFMatrix::upper_ones(2, m as usize).unwrap();
            let dual = generate_net(&NetSpec::new(j, u.nlt_dual().unwrap()).unwrap()).unwrap();
            for (n, &(x, y)) in dual.points().iter().enumerate() {
                assert_eq!(x, n as u64);
                assert_eq!(
                    rat(y, dual.den()),
                    digit_map(DigitMapKind::Psi, 2, m, n as u64).unwrap()
                );
            }
        }
        // Spot value from the proof sketch: psi(5) = 15/16 at m = 4.
        let j = GFMatrix::anti_diagonal(2, 4).unwrap();
        let u = GFMatrix::upper_ones(2, 4).unwrap();
        let dual = generate_net(&NetSpec::new(j, u.nlt_dual().unwrap()).unwrap()).unwrap();
        assert_eq!(dual.points()[5].1, 15);
    }

    #[test]
    fn pl_y_is_omega() {
        for m in 1..=10u32 {
            let pl = named_net(NamedNet::Pl, 2, m).unwrap();
            for (n, &(x, y)) in pl.points().iter().enumerate() {
                assert_eq!(x, n as u64);
                assert_eq!(
                    rat(y, pl.den()),
                    digit_map(DigitMapKind::Omega, 2, m, n as u64).unwrap()
                );
            }
        }
    }

    #[test]
    fn named_net_dispatch() {
        assert_eq!(
            named_net(NamedNet::Hammersley, 2, 3).unwrap(),
            hammersley(2, 3).unwrap()
        );
        assert!(matches!(
            named_net(NamedNet::Pu, 3, 4),
            Err(Error::UnsupportedBase { .. })
        ));
        assert!(matches!(
            named_net(NamedNet::Pl, 5, 4),
            Err(Error::UnsupportedBase { .. })
        ));
    }

    #[test]
    fn fibonacci_lattice_cases() {
        assert_eq!(fibonacci_lattice(2).unwrap().points(), &[(0, 0), (1, 1)]);
        let f13 = fibonacci_lattice(13).unwrap();
        assert_eq!(f13.len(), 13);
        assert_eq!(f13.den(), 13);
        // Multiplier is the predecessor 8.
        assert_eq!(f13.points()[1], (1, 8));
        assert_eq!(f13.points()[2], (2, 3));
        assert_eq!(fibonacci_lattice(12), Err(Error::NotFibonacci(12)));
        assert_eq!(fibonacci_lattice(1), Err(Error::NotFibonacci(1)));
        assert_eq!(fibonacci_lattice(0), Err(Error::NotFibonacci(0)));
        for n in [3, 5, 8, 21, 34, 55, 89, 144, 233] {
            assert!(fibonacci_lattice(n).is_ok());
        }
    }

    #[test]
    fn counting_oracle_on_hammersley() {
        assert!(is_0m2_net_by_counting(&hammersley(2, 3).unwrap()).unwrap());
        // Duplicating a point breaks the property.
        let dup = GridPointSet::new(2, 2, vec![(0, 0), (1, 2), (1, 2), (3, 3)]).unwrap();
        assert!(!is_0m2_net_by_counting(&dup).unwrap());
        // Wrong cardinality is a grid mismatch, not `false`.
        let short = GridPointSet::new(2, 2, vec![(0, 0)]).unwrap();
        assert!(matches!(
            is_0m2_net_by_counting(&short),
            Err(Error::GridMismatch(_))
        ));
    }

    /// Exhaustive nonsingular triangular c2 over Z_2: counting oracle agrees
    /// with the algebraic rank condition (and both hold).
    #[test]
    fn rank_condition_equals_counting_exhaustively() {
        for m in 1..=4usize {
            let j = GFMatrix::anti_diagonal(2, m).unwrap();
            let free = m * (m - 1) / 2;
            for upper in [true, false] {
                for bits in 0..1u32 << free {
                    let mut rows = vec![vec![0u32; m]; m];
                    let mut k = 0;
                    for i in 0..m {
                        rows[i][i] = 1;
                        for jj in (i + 1)..m {
                            let bit = (bits >> k) & 1;
                            if upper {
                                rows[i][jj] = bit;
                            } else {
                                rows[jj][i] = bit;
                            }
                            k += 1;
                        }
                    }
                    let c2 = GFMatrix::from_rows(2, &rows).unwrap();
                    let spec = NetSpec::new(j.clone(), c2.clone()).unwrap();
                    let algebraic = crate::gf::net_rank_condition(&j, &c2).unwrap();
                    let counted = is_0m2_net_by_counting(&generate_net(&spec).unwrap()).unwrap();
                    assert_eq!(algebraic, counted);
                    assert!(algebraic);
                }
            }
        }
    }

    #[test]
    fn duality_small_exhaustive() {
        // net(J, C2) swapped equals net(J, dual(C2)); and net(dual(C2), J)
        // reproduces net(J, C2) itself (right-multiplication invariance).
        for m in 1..=6usize {
            let j = GFMatrix::anti_diagonal(2, m).unwrap();
            let u = GFMatrix::upper_ones(2, m).unwrap();
            let p = generate_net(&NetSpec::new(j.clone(), u.clone()).unwrap()).unwrap();
            let dual = u.nlt_dual().unwrap();
            let swapped = generate_net(&NetSpec::new(j.clone(), dual.clone()).unwrap()).unwrap();
            assert!(p.swapped().same_point_set(&swapped));
            let same = generate_net(&NetSpec::new(dual, j.clone()).unwrap()).unwrap();
            assert!(p.same_point_set(&same));
        }
    }

    fn arb_gf_matrix(base: u32, max_m: usize) -> impl Strategy<Value = GFMatrix> {
        (1..=max_m).prop_flat_map(move |m| {
            proptest::collection::vec(0..base, m * m).prop_map(move |v| {
                let rows: Vec<Vec<u32>> = v.chunks(m).map(<[u32]>::to_vec).collect();
                GFMatrix::from_rows(base, &rows).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_condition_equals_counting_random(
            base_idx in 0usize..2,
            pair in (1usize..=4).prop_flat_map(|m| {
                (Just(m), proptest::collection::vec(0u32..5, 2 * m * m))
            }),
        ) {
            let base = [3u32, 5][base_idx];
            let (m, v) = pair;
            let rows =
                |s: &[u32]| -> Vec<Vec<u32>> { s.chunks(m).map(<[u32]>::to_vec).collect() };
            let c1 = GFMatrix::from_rows(base, &rows(&v[..m * m])).unwrap();
            let c2 = GFMatrix::from_rows(base, &rows(&v[m * m..])).unwrap();
            let spec = NetSpec::new(c1.clone(), c2.clone()).unwrap();
            let algebraic = crate::gf::net_rank_condition(&c1, &c2).unwrap();
            let counted = is_0m2_net_by_counting(&generate_net(&spec).unwrap()).unwrap();
            prop_assert_eq!(algebraic, counted);
        }

        #[test]
        fn x_permutation_structure(c2 in arb_gf_matrix(2, 6)) {
            // With C1 = J the x coordinates enumerate the full grid in order.
            let m = c2.dim();
            let j = GFMatrix::anti_diagonal(2, m).unwrap();
            let net = generate_net(&NetSpec::new(j, c2).unwrap()).unwrap();
            for (n, &(x, _)) in net.points().iter().enumerate() {
                prop_assert_eq!(x, n as u64);
            }
        }
    }
}

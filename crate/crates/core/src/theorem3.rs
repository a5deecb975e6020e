//! Exhaustive verification of the dyadic NUT lower bound's case analysis.
//!
//! For a dyadic NUT net the first 32 ordinate values depend only on the ten
//! superdiagonal entries in columns 2..=5 of the generator, so the lower
//! bound (5/2)/2^m reduces to finitely many cases: for each of the 2^10
//! coefficient patterns, some window of consecutive indices in 1..=31 shows a
//! y-gap large enough to certify an empty box of scaled area >= 5/2. This
//! module recomputes every case, extracts the gap witness, converts it into a
//! concrete empty box on the m = 5 net, and cross-checks against the actual
//! dispersion.

use std::collections::BTreeMap;

use crate::empty_box::largest_empty_box;
use crate::error::Result;
use crate::gf::GFMatrix;
use crate::net::{generate_net, NetSpec};
use crate::pointset::BoxReport;
use crate::rational::{format_rational, rat, to_decimal_string, Rational};

/// The ten free superdiagonal entries (c12, c13, c23, c14, c24, c34, c15,
/// c25, c35, c45) of a dyadic NUT generator, column-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NutCoeffs {
    bits: [u8; 10],
}

/// Column offsets into the bit tuple: column j >= 2 starts at TRI_OFFSET[j-2].
const TRI_OFFSET: [usize; 4] = [0, 1, 3, 6];

impl NutCoeffs {
    pub fn from_bits(bits: [u8; 10]) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "binary entries only");
        Self { bits }
    }

    /// Case index i in 0..1024 maps bit k of i to tuple position k.
    pub fn from_index(i: u16) -> Self {
        assert!(i < 1024);
        let mut bits = [0u8; 10];
        for (k, b) in bits.iter_mut().enumerate() {
            *b = ((i >> k) & 1) as u8;
        }
        Self { bits }
    }

    pub fn index(&self) -> u16 {
        self.bits
            .iter()
            .enumerate()
            .map(|(k, &b)| u16::from(b) << k)
            .sum()
    }

    pub fn bits(&self) -> [u8; 10] {
        self.bits
    }

    /// Entry c_{i,j} (1-based, j > i, j <= 5).
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        debug_assert!((2..=5).contains(&j) && i >= 1 && i < j);
        self.bits[TRI_OFFSET[j - 2] + i - 1]
    }

    /// The m = 5 unit-diagonal NUT generator with these superdiagonal entries.
    pub fn matrix(&self) -> GFMatrix {
        let mut rows = vec![vec![0u32; 5]; 5];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1;
            for j in (i + 2)..=5 {
                row[j - 1] = u32::from(self.entry(i + 1, j));
            }
        }
        GFMatrix::from_rows(2, &rows).expect("valid dyadic matrix")
    }
}

/// Ordinates nu(n) for n = 0..31 at m = 5, straight from the digit formula
/// (independent of the matrix/net generation path).
///
/// nu(n) = sum_i (e_i xor c_{i,i+1} e_{i+1} xor ... xor c_{i,5} e_5) / 2^i
/// where n = e_1 + 2 e_2 + ... + 16 e_5. Because every digit of n < 32 beyond
/// the fifth vanishes, the same values appear in any net with m >= 5.
pub fn nu5_values(coeffs: &NutCoeffs) -> Vec<Rational> {
    (0..32u64)
        .map(|n| {
            let e = |i: usize| ((n >> (i - 1)) & 1) as u8;
            let mut num = 0u64;
            for i in 1..=5 {
                let mut bit = e(i);
                for j in (i + 1)..=5 {
                    bit ^= coeffs.entry(i, j) & e(j);
                }
                num |= (bit as u64) << (5 - i);
            }
            rat(num, 32)
        })
        .collect()
}

/// Window lengths searched, paired with the gap threshold each must meet.
/// A window of w consecutive columns with internal y-gap g certifies an empty
/// box of scaled area (w+1) g; all five pairs give at least 5/2.
const WINDOW_CONDITIONS: [(u32, (u64, u64)); 5] =
    [(2, (29, 32)), (4, (1, 2)), (9, (1, 4)), (19, (1, 8)), (28, (3, 32))];

/// A window of consecutive indices whose sorted values exhibit a gap large
/// enough to certify an empty box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapWitness {
    /// First index of the window (1-based; index 0 is never searched).
    pub n_start: u32,
    /// Window length (count of consecutive indices).
    pub w: u32,
    /// Largest difference between adjacent sorted window values. Boundary
    /// values 0 and 1 are NOT joined in here, unlike the column-gap method:
    /// a gap between interior values stays valid however the window sits.
    pub gap: Rational,
    /// Lower endpoint of the (leftmost) widest gap.
    pub gap_lo: Rational,
    /// (w + 1) * gap: the certified empty-box area in units of 1/2^m.
    pub implied_area_scaled: Rational,
}

/// Largest adjacent difference of the sorted values, leftmost on ties.
fn max_adjacent_gap(window: &[Rational]) -> (Rational, Rational) {
    let mut sorted: Vec<&Rational> = window.iter().collect();
    sorted.sort();
    let mut best_gap = Rational::from_integer(0.into());
    let mut best_lo = sorted[0].clone();
    for pair in sorted.windows(2) {
        let g = pair[1] - pair[0];
        if g > best_gap {
            best_gap = g;
            best_lo = pair[0].clone();
        }
    }
    (best_gap, best_lo)
}

/// Searches windows limited to indices 1..=max_index.
///
/// Returns the first hit scanning window starts in increasing order and, per
/// start, window lengths in increasing order.
pub fn find_gap_witness_limited(values: &[Rational], max_index: u32) -> Option<GapWitness> {
    assert_eq!(values.len(), 32, "expects the 32 ordinates of n = 0..31");
    assert!(max_index <= 31);
    for n_start in 1..=max_index {
        for (w, (thr_num, thr_den)) in WINDOW_CONDITIONS {
            let end = n_start + w - 1;
            if end > max_index {
                continue;
            }
            let window = &values[n_start as usize..=end as usize];
            let (gap, gap_lo) = max_adjacent_gap(window);
            if gap >= rat(thr_num, thr_den) {
                let implied_area_scaled = rat((w + 1) as u64, 1) * &gap;
                return Some(GapWitness { n_start, w, gap, gap_lo, implied_area_scaled });
            }
        }
    }
    None
}

/// Full-string search over indices 1..=31.
pub fn find_gap_witness(values: &[Rational]) -> Option<GapWitness> {
    find_gap_witness_limited(values, 31)
}

/// One coefficient case: witness, its realized box, and the true dispersion
/// of the m = 5 net the coefficients generate.
#[derive(Debug, Clone)]
pub struct CaseRecord {
    pub coeffs: NutCoeffs,
    pub witness: Option<GapWitness>,
    /// The witness converted to a concrete box on the m = 5 net; it is
    /// re-verified to have point-free interior and area (w+1)/2^m * gap.
    pub witness_box: Option<BoxReport>,
    pub net_dispersion: Rational,
}

/// Aggregate over all 1024 coefficient cases.
#[derive(Debug, Clone)]
pub struct Theorem3Summary {
    pub cases: Vec<CaseRecord>,
    /// Cases with a witness; full coverage is 1024.
    pub covered: usize,
    /// Witness counts by window length w.
    pub window_counts: BTreeMap<u32, usize>,
    pub min_implied_area_scaled: Option<Rational>,
    /// Maximum of n_start + w over all witnesses (localization check: every
    /// certified box lives in the first 32 columns).
    pub max_window_end: u32,
    /// Minimum over the 1024 nets of the true dispersion at m = 5.
    pub min_net_dispersion: Option<Rational>,
}

impl Theorem3Summary {
    pub fn all_covered(&self) -> bool {
        self.covered == self.cases.len()
    }

    /// CSV: one row per case with the ten bits, the witness data and the
    /// actual net dispersion at m = 5.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(
            "case,c12,c13,c23,c14,c24,c34,c15,c25,c35,c45,\
             witness_w,witness_n_start,gap,implied_area_scaled,\
             net_dispersion,net_dispersion_decimal\n",
        );
        for rec in &self.cases {
            let bits = rec.coeffs.bits();
            let bit_cols: Vec<String> = bits.iter().map(u8::to_string).collect();
            let (w, ns, gap, area) = match &rec.witness {
                Some(wt) => (
                    wt.w.to_string(),
                    wt.n_start.to_string(),
                    format_rational(&wt.gap),
                    format_rational(&wt.implied_area_scaled),
                ),
                None => (String::new(), String::new(), String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                rec.coeffs.index(),
                bit_cols.join(","),
                w,
                ns,
                gap,
                area,
                format_rational(&rec.net_dispersion),
                to_decimal_string(&rec.net_dispersion, 12),
            ));
        }
        out
    }
}

/// Runs all 1024 coefficient cases at m = 5.
///
/// For each case the ordinates are computed twice (digit formula and actual
/// net generation) and must agree; the gap witness is converted to a box and
/// re-verified; the net's exact dispersion is computed with the sweep.
pub fn enumerate_theorem3() -> Result<Theorem3Summary> {
    let j5 = GFMatrix::anti_diagonal(2, 5)?;
    let mut cases = Vec::with_capacity(1024);
    let mut window_counts: BTreeMap<u32, usize> = BTreeMap::new();
    let mut covered = 0usize;
    let mut min_area: Option<Rational> = None;
    let mut min_disp: Option<Rational> = None;
    let mut max_window_end = 0u32;

    for index in 0..1024u16 {
        let coeffs = NutCoeffs::from_index(index);
        let values = nu5_values(&coeffs);

        let net = generate_net(&NetSpec::new(j5.clone(), coeffs.matrix())?)?;
        // Route agreement: the net's ordinates are the formula's values.
        for (n, &(x, y)) in net.points().iter().enumerate() {
            assert_eq!(x, n as u64);
            assert_eq!(rat(y, 32), values[n], "ordinate mismatch at case {index} n {n}");
        }

        let witness = find_gap_witness(&values);
        let witness_box = witness.as_ref().map(|wt| {
            let x_lo = rat((wt.n_start - 1) as u64, 32);
            let x_hi = rat((wt.n_start + wt.w) as u64, 32);
            let bx = BoxReport::new(x_lo, x_hi, wt.gap_lo.clone(), &wt.gap_lo + &wt.gap)
                .expect("witness corners are ordered");
            assert!(
                crate::pointset::box_is_interior_empty(&net, &bx),
                "witness box not empty at case {index}"
            );
            assert_eq!(bx.area, &wt.implied_area_scaled * rat(1, 32));
            bx
        });

        let net_dispersion = largest_empty_box(&net)?.area;
        if let Some(wt) = &witness {
            covered += 1;
            *window_counts.entry(wt.w).or_insert(0) += 1;
            max_window_end = max_window_end.max(wt.n_start + wt.w);
            let area = wt.implied_area_scaled.clone();
            min_area = Some(match min_area {
                Some(cur) => cur.min(area),
                None => area,
            });
            // The witness is a lower-bound certificate, never above truth.
            assert!(net_dispersion >= &wt.implied_area_scaled * rat(1, 32));
        }
        min_disp = Some(match min_disp {
            Some(cur) => cur.min(net_dispersion.clone()),
            None => net_dispersion.clone(),
        });

        cases.push(CaseRecord { coeffs, witness, witness_box, net_dispersion });
    }

    Ok(Theorem3Summary {
        cases,
        covered,
        window_counts,
        min_implied_area_scaled: min_area,
        max_window_end,
        min_net_dispersion: min_disp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs_from_prefix(prefix: [u8; 3]) -> NutCoeffs {
        let mut bits = [0u8; 10];
        bits[..3].copy_from_slice(&prefix);
        NutCoeffs::from_bits(bits)
    }

    #[test]
    fn index_round_trip() {
        for i in [0u16, 1, 7, 512, 1023] {
            assert_eq!(NutCoeffs::from_index(i).index(), i);
        }
        let c = NutCoeffs::from_bits([1, 0, 1, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(c.entry(1, 2), 1);
        assert_eq!(c.entry(1, 3), 0);
        assert_eq!(c.entry(2, 3), 1);
        assert_eq!(c.entry(4, 5), 1);
    }

    #[test]
    fn nu_values_all_ones_prefix() {
        // (c12, c13, c23) = (1,1,1): nu(3..6) = (2, 7, 3, 1)/8.
        let values = nu5_values(&coeffs_from_prefix([1, 1, 1]));
        assert_eq!(values[3], rat(2, 8));
        assert_eq!(values[4], rat(7, 8));
        assert_eq!(values[5], rat(3, 8));
        assert_eq!(values[6], rat(1, 8));
    }

    #[test]
    fn nu_values_010_prefix() {
        // (c12, c13, c23) = (0,1,0): nu(3..6) = (6, 5, 1, 7)/8.
        let values = nu5_values(&coeffs_from_prefix([0, 1, 0]));
        assert_eq!(values[3], rat(6, 8));
        assert_eq!(values[4], rat(5, 8));
        assert_eq!(values[5], rat(1, 8));
        assert_eq!(values[6], rat(7, 8));
    }

    #[test]
    fn nu_values_zero_matrix_is_radical_inverse() {
        use crate::net::{digit_map, DigitMapKind};
        let values = nu5_values(&NutCoeffs::from_bits([0; 10]));
        for (n, v) in values.iter().enumerate() {
            assert_eq!(
                v,
                &digit_map(DigitMapKind::RadicalInverse, 2, 5, n as u64).unwrap()
            );
        }
    }

    #[test]
    fn witness_for_all_ones_prefix() {
        // The window {3..6} sorts to (1,2,3,7)/8 with gap 1/2 and no earlier
        // window meets its threshold.
        let values = nu5_values(&coeffs_from_prefix([1, 1, 1]));
        let wt = find_gap_witness(&values).unwrap();
        assert_eq!((wt.n_start, wt.w), (3, 4));
        assert_eq!(wt.gap, rat(1, 2));
        assert_eq!(wt.implied_area_scaled, rat(5, 2));
    }

    #[test]
    fn equispaced_values_have_no_witness() {
        let values: Vec<Rational> = (0..32).map(|n| rat(n, 32)).collect();
        assert_eq!(find_gap_witness(&values), None);
    }

    #[test]
    fn prefixes_needing_the_full_string() {
        // These ten six-bit prefixes admit no witness within indices 1..=15;
        // they are exactly the cases where the fifth matrix column matters.
        let prefixes: [[u8; 6]; 10] = [
            [0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 0, 0, 1, 1, 1],
            [0, 1, 1, 0, 0, 0],
            [0, 1, 1, 0, 0, 1],
            [0, 1, 1, 1, 1, 0],
            [1, 0, 0, 0, 0, 0],
            [1, 0, 0, 0, 1, 1],
            [1, 0, 0, 1, 0, 0],
            [1, 0, 0, 1, 0, 1],
        ];
        for prefix in prefixes {
            let mut bits = [0u8; 10];
            bits[..6].copy_from_slice(&prefix);
            // Values below index 16 do not involve the fifth column, so any
            // column-5 completion exhibits the same restricted failure.
            let values = nu5_values(&NutCoeffs::from_bits(bits));
            assert_eq!(
                find_gap_witness_limited(&values, 15),
                None,
                "prefix {prefix:?} unexpectedly covered by a short window"
            );
            // The full string delivers a witness for every prefix except
            // (0,0,0,1,1,1) with an all-zero fifth column, whose big gaps all
            // sit against the boundary (see the enumeration test).
            let full = find_gap_witness(&values);
            if prefix == [0, 0, 0, 1, 1, 1] {
                assert_eq!(full, None);
            } else {
                assert!(full.is_some(), "prefix {prefix:?} has no witness");
            }
        }
    }

    #[test]
    fn enumeration_coverage() {
        let summary = enumerate_theorem3().unwrap();
        assert_eq!(summary.cases.len(), 1024);

        // Interior-only window gaps certify 1023 of the 1024 cases. The one
        // holdout is (c12..c45) = (0,0,0,1,1,1,0,0,0,0): its only large gaps
        // touch the boundary (nu(15) = 2/32, nu(16) = 1/32 leave the strip
        // above y = 2/32 empty over three columns, area 90/1024 >= 5/64), so
        // no interior two-value distance reaches 29/32 and no longer window
        // passes its threshold. The dispersion conclusion still holds for it,
        // as the independent sweep below confirms.
        assert_eq!(summary.covered, 1023);
        let uncovered: Vec<u16> = summary
            .cases
            .iter()
            .filter(|rec| rec.witness.is_none())
            .map(|rec| rec.coeffs.index())
            .collect();
        assert_eq!(uncovered, vec![0b0000111000]);

        assert!(summary.max_window_end <= 32);
        assert!(summary.min_implied_area_scaled.clone().unwrap() >= rat(5, 2));
        // Fallback windows (w = 2 and w = 28) certify at least 87/32.
        for rec in &summary.cases {
            if let Some(wt) = &rec.witness {
                if wt.w == 2 || wt.w == 28 {
                    assert!(wt.implied_area_scaled >= rat(87, 32));
                }
            }
        }
        // Every actual net at m = 5 has dispersion >= 5/64 (and within the
        // triangular upper bound 31/256), the uncovered case included.
        assert!(summary.min_net_dispersion.clone().unwrap() >= rat(5, 64));
        for rec in &summary.cases {
            assert!(rec.net_dispersion <= rat(31, 256));
        }
        assert_eq!(summary.cases[0b0000111000].net_dispersion, rat(49, 512));
    }

    #[test]
    fn csv_has_one_row_per_case() {
        let summary = enumerate_theorem3().unwrap();
        let csv = summary.to_csv_string();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1025);
        assert!(lines[0].starts_with("case,c12,"));
        // Spot-check the all-ones-prefix case row.
        let idx = coeffs_from_prefix([1, 1, 1]).index();
        let row = lines[1 + idx as usize];
        assert!(row.starts_with(&format!("{idx},1,1,1,0,0,0,0,0,0,0,4,3,1/2,5/2,")));
    }
}

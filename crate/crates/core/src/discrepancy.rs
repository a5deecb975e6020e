//! Exact star, L2 and extreme discrepancy for grid point sets.
//!
//! All three use the unnormalized counting function: for an anchored box
//! [0,t) the local discrepancy is (number of points inside) - N t1 t2, and
//! the suprema below are over that quantity. Because the counting function
//! only jumps at point coordinates, each supremum is attained at a critical
//! corner evaluated with both the open and the closed count, which turns the
//! computation into integer arithmetic over the square of the common
//! denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat, rat_u128, Rational};
use crate::GridPointSet;

/// Default point cap for the extreme-discrepancy search.
pub const EXTREME_CAP: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscrepancyKind {
    Star,
    L2Squared,
    Extreme,
}

/// Where a discrepancy supremum is attained.
///
/// `closed` records which one-sided limit realizes the value: a closed count
/// (points on the boundary included, the count-heavy side) or an open count
/// (interior points only, the volume-heavy side).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscrepancyWitness {
    Corner { x: Rational, y: Rational, closed: bool },
    Box { x_lo: Rational, x_hi: Rational, y_lo: Rational, y_hi: Rational, closed: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub kind: DiscrepancyKind,
    pub value: Rational,
    pub witness: Option<DiscrepancyWitness>,
}

impl Serialize for DiscrepancyReport {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "snake_case", tag = "shape")]
        enum WitnessRepr {
            Corner { x: String, y: String, closed: bool },
            Box { x_lo: String, x_hi: String, y_lo: String, y_hi: String, closed: bool },
        }
        let witness = self.witness.as_ref().map(|w| match w {
            DiscrepancyWitness::Corner { x, y, closed } => WitnessRepr::Corner {
                x: format_rational(x),
                y: format_rational(y),
                closed: *closed,
            },
            DiscrepancyWitness::Box { x_lo, x_hi, y_lo, y_hi, closed } => WitnessRepr::Box {
                x_lo: format_rational(x_lo),
                x_hi: format_rational(x_hi),
                y_lo: format_rational(y_lo),
                y_hi: format_rational(y_hi),
                closed: *closed,
            },
        });
        let mut s = ser.serialize_struct("DiscrepancyReport", 3)?;
        s.serialize_field("kind", &self.kind)?;
        s.serialize_field("value", &format_rational(&self.value))?;
        s.serialize_field("witness", &witness)?;
        s.end()
    }
}

/// The i128 corner arithmetic needs N * den^2 to fit comfortably.
fn guard_scale(points: &GridPointSet) -> Result<()> {
    if points.den() > 1 << 31 || points.len() > 1 << 26 {
        return Err(Error::TooLarge(format!(
            "den {} / {} points exceed the exact-arithmetic guard",
            points.den(),
            points.len()
        )));
    }
    Ok(())
}

/// Sorted distinct values of one coordinate, always joined with 0 and den.
fn grid_values(coords: impl Iterator<Item = u64>, den: u64) -> Vec<u64> {
    let mut v: Vec<u64> = coords.collect();
    v.extend([0, den]);
    v.sort_unstable();
    v.dedup();
    v
}

/// Exact star discrepancy: sup over anchored boxes [0,t) of |count - N t1 t2|.
///
/// Evaluated at every critical corner (x, y) from the coordinate grids joined
/// with 1, counting twice: points weakly below the corner (the supremum from
/// inside, count - N x y) and points strictly below (the supremum from
/// outside, N x y - count).
pub fn star_discrepancy(points: &GridPointSet) -> Result<DiscrepancyReport> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    guard_scale(points)?;
    let den = points.den();
    let n = points.len() as i128;
    let den2 = den as i128 * den as i128;

    let xv = grid_values(points.points().iter().map(|p| p.0), den);
    let yv = grid_values(points.points().iter().map(|p| p.1), den);
    let yrank = |y: u64| yv.binary_search(&y).expect("coordinate in grid");

    // Points grouped by x for the left-to-right accumulation.
    let mut by_x: Vec<(u64, usize)> = points
        .points()
        .iter()
        .map(|&(x, y)| (x, yrank(y)))
        .collect();
    by_x.sort_unstable();

    let ky = yv.len();
    let mut counts = vec![0u64; ky]; // per y rank, over x <= current column
    let mut open_prefix = vec![0i128; ky]; // prefix counts of the previous column state
    let mut closed_prefix = vec![0i128; ky];

    let mut best: i128 = -1;
    let mut best_witness = (0u64, 0u64, true);
    let mut cursor = 0usize;

    for &x in &xv {
        // Open counts use the state strictly left of x.
        std::mem::swap(&mut open_prefix, &mut closed_prefix);
        while cursor < by_x.len() && by_x[cursor].0 == x {
            counts[by_x[cursor].1] += 1;
            cursor += 1;
        }
        let mut acc = 0i128;
        for (k, &c) in counts.iter().enumerate() {
            acc += c as i128;
            closed_prefix[k] = acc;
        }

        for (k, &y) in yv.iter().enumerate() {
            let volume = n * x as i128 * y as i128;
            let closed_term = closed_prefix[k] * den2 - volume;
            if closed_term > best {
                best = closed_term;
                best_witness = (x, y, true);
            }
            let open_count = if k == 0 { 0 } else { open_prefix[k - 1] };
            let open_term = volume - open_count * den2;
            if open_term > best {
                best = open_term;
                best_witness = (x, y, false);
            }
        }
    }

    debug_assert!(best >= 0);
    let (wx, wy, closed) = best_witness;
    Ok(DiscrepancyReport {
        kind: DiscrepancyKind::Star,
        value: rat_u128(best as u128, den as u128 * den as u128),
        witness: Some(DiscrepancyWitness::Corner {
            x: rat(wx, den),
            y: rat(wy, den),
            closed,
        }),
    })
}

/// Exact squared L2 star discrepancy via the pairwise (Warnock) expansion:
///
/// L2^2 = sum_{p,q} (1 - max(x_p, x_q))(1 - max(y_p, y_q))
///        - N/2 * sum_p (1 - x_p^2)(1 - y_p^2) + N^2 / 9.
pub fn l2_star_discrepancy_squared(points: &GridPointSet) -> Result<DiscrepancyReport> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    guard_scale(points)?;
    let den = points.den();
    let n = points.len() as u64;
    let pts = points.points();

    // Pairwise term, numerator over den^2; row sums stay within u128.
    let mut s1 = BigInt::from(0u32);
    for &(xa, ya) in pts {
        let mut row = 0u128;
        for &(xb, yb) in pts {
            row += (den - xa.max(xb)) as u128 * (den - ya.max(yb)) as u128;
        }
        s1 += BigInt::from(row);
    }

    // Single-sum term, numerator over den^4.
    let den2 = den as u128 * den as u128;
    let mut s2 = BigInt::from(0u32);
    for &(x, y) in pts {
        let term = (den2 - (x as u128 * x as u128)) * (den2 - (y as u128 * y as u128));
        s2 += BigInt::from(term);
    }

    let den2_big = BigInt::from(den) * BigInt::from(den);
    let den4_big = &den2_big * &den2_big;
    let value = BigRational::new(s1, den2_big)
        - BigRational::new(BigInt::from(n) * s2, BigInt::from(2u32) * den4_big)
        + BigRational::new(BigInt::from(n) * BigInt::from(n), BigInt::from(9u32));

    Ok(DiscrepancyReport { kind: DiscrepancyKind::L2Squared, value, witness: None })
}

/// Exact extreme discrepancy with the default cap of 1024 points.
pub fn extreme_discrepancy(points: &GridPointSet) -> Result<DiscrepancyReport> {
    extreme_discrepancy_capped(points, EXTREME_CAP)
}

/// Exact extreme discrepancy: sup over all axis-parallel boxes of
/// |count - N * area|.
///
/// For each pair of critical x-edges the inner supremum over y-edges is a
/// maximal difference of prefix terms F(y) - N w y, maintained in one pass,
/// so the whole search is O(K^3) for K distinct coordinates. The count-heavy
/// side uses closed slabs and allows degenerate boxes (a box shrinking onto
/// points); the volume-heavy side uses open slabs.
pub fn extreme_discrepancy_capped(
    points: &GridPointSet,
    cap: usize,
) -> Result<DiscrepancyReport> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    if points.len() > cap {
        return Err(Error::TooLarge(format!(
            "{} points exceed the extreme-discrepancy cap {cap}",
            points.len()
        )));
    }
    guard_scale(points)?;
    let den = points.den();
    let n = points.len() as i128;
    let den2 = den as i128 * den as i128;

    let xv = grid_values(points.points().iter().map(|p| p.0), den);
    let yv = grid_values(points.points().iter().map(|p| p.1), den);
    let (kx, ky) = (xv.len(), yv.len());
    let yrank = |y: u64| yv.binary_search(&y).expect("coordinate in grid");

    // Column -> y ranks of its points.
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); kx];
    for &(x, y) in points.points() {
        let xi = xv.binary_search(&x).expect("coordinate in grid");
        columns[xi].push(yrank(y));
    }

    let mut best: i128 = -1;
    let mut best_witness = (0u64, 0u64, 0u64, 0u64, true);
    let mut hist = vec![0i128; ky];

    // Count-heavy side: closed boxes [x_lo, x_hi] x [y_lo, y_hi], degenerate
    // edges allowed.
    for i in 0..kx {
        hist.iter_mut().for_each(|h| *h = 0);
        for j in i..kx {
            for &r in &columns[j] {
                hist[r] += 1;
            }
            let w = (xv[j] - xv[i]) as i128;
            let nw = n * w;
            let mut prefix = 0i128;
            let mut runmin = i128::MAX;
            let mut runmin_y = 0u64;
            for (k, &y) in yv.iter().enumerate() {
                let before = prefix * den2 - nw * y as i128;
                if before < runmin {
                    runmin = before;
                    runmin_y = y;
                }
                prefix += hist[k];
                let after = prefix * den2 - nw * y as i128;
                let candidate = after - runmin;
                if candidate > best {
                    best = candidate;
                    best_witness = (xv[i], xv[j], runmin_y, y, true);
                }
            }
        }
    }

    // Volume-heavy side: open boxes (x_lo, x_hi) x (y_lo, y_hi). The slab
    // histogram always holds the columns strictly between the current pair.
    for i in 0..kx {
        hist.iter_mut().for_each(|h| *h = 0);
        for j in i + 1..kx {
            let w = (xv[j] - xv[i]) as i128;
            let nw = n * w;
            let mut prefix = 0i128;
            let mut runmin = i128::MAX;
            let mut runmin_y = 0u64;
            for (k, &y) in yv.iter().enumerate() {
                // Count below y (strict): prefix before this rank.
                let top_term = nw * y as i128 - prefix * den2;
                if runmin < i128::MAX {
                    let candidate = top_term - runmin;
                    if candidate > best {
                        best = candidate;
                        best_witness = (xv[i], xv[j], runmin_y, y, false);
                    }
                }
                prefix += hist[k];
                let bottom_term = nw * y as i128 - prefix * den2;
                if bottom_term < runmin {
                    runmin = bottom_term;
                    runmin_y = y;
                }
            }
            for &r in &columns[j] {
                hist[r] += 1;
            }
        }
    }

    debug_assert!(best >= 0);
    let (x_lo, x_hi, y_lo, y_hi, closed) = best_witness;
    Ok(DiscrepancyReport {
        kind: DiscrepancyKind::Extreme,
        value: rat_u128(best as u128, den as u128 * den as u128),
        witness: Some(DiscrepancyWitness::Box {
            x_lo: rat(x_lo, den),
            x_hi: rat(x_hi, den),
            y_lo: rat(y_lo, den),
            y_hi: rat(y_hi, den),
            closed,
        }),
    })
}

//! Exact computation of dispersion: the area of the largest axis-parallel box
//! whose open interior contains no point of the set.
//!
//! For a finite set this maximum is attained by a box whose edges lie on
//! point coordinates or on the square boundary, so the search space is a
//! finite grid and every comparison is integer arithmetic on numerators over
//! the common denominator. Three routes are provided:
//!
//! * [`largest_empty_box`] — an O(N^2) sweep over box bottoms, maintaining
//!   the maximal x-gap of a shrinking strip via linked-list deletions;
//! * [`dispersion_bruteforce`] — exhaustive enumeration of all edge 4-tuples
//!   with a linear emptiness scan, the trust anchor for everything else;
//! * [`column_gap_dispersion`] — the window/gap method for sets whose
//!   x-coordinates form the full grid, one point per column.
//!
//! All three report the same area, and break ties among maximal boxes by the
//! lexicographically smallest (x_lo, y_lo, x_hi, y_hi).

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::{box_is_interior_empty, BoxReport, GridPointSet};
use crate::rational::{format_rational, rat_u128, Rational};

/// Default point cap for the brute-force oracle.
pub const BRUTE_FORCE_CAP: usize = 64;

/// Which algorithm produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Sweep,
    Brute,
    ColumnGap,
}

/// A dispersion value together with a checkable witness box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DispersionResult {
    pub area: Rational,
    pub witness: BoxReport,
    pub algorithm: Algorithm,
}

impl Serialize for DispersionResult {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("DispersionResult", 3)?;
        s.serialize_field("area", &format_rational(&self.area))?;
        s.serialize_field("witness", &self.witness)?;
        s.serialize_field("algorithm", &self.algorithm)?;
        s.end()
    }
}

/// Box candidate in grid units: area numerator over den^2, edges over den.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Candidate {
    area: u128,
    x_lo: u64,
    y_lo: u64,
    x_hi: u64,
    y_hi: u64,
}

impl Candidate {
    fn corner_tuple(&self) -> (u64, u64, u64, u64) {
        (self.x_lo, self.y_lo, self.x_hi, self.y_hi)
    }
}

/// Keeps the larger area; on ties the lexicographically smaller corner tuple.
fn consider(best: &mut Option<Candidate>, c: Candidate) {
    match best {
        None => *best = Some(c),
        Some(b) => {
            if c.area > b.area || (c.area == b.area && c.corner_tuple() < b.corner_tuple()) {
                *best = Some(c);
            }
        }
    }
}

fn finish(points: &GridPointSet, c: Candidate, algorithm: Algorithm) -> Result<DispersionResult> {
    let den = points.den();
    let witness = BoxReport::from_grid(c.x_lo, c.x_hi, c.y_lo, c.y_hi, den)?;
    debug_assert!(box_is_interior_empty(points, &witness));
    debug_assert_eq!(witness.area, rat_u128(c.area, den as u128 * den as u128));
    Ok(DispersionResult { area: witness.area.clone(), witness, algorithm })
}

/// Exact dispersion via the strip sweep; O(N^2) time, O(N) extra space.
///
/// For every candidate box bottom y_lo (a point ordinate or 0) the points
/// strictly above form a strip; lowering the top y_hi through the distinct
/// ordinates in descending order only deletes points, so the maximal x-gap is
/// maintained in O(1) per deletion through the merges of a doubly linked list
/// over the sorted x-values. Each (y_lo, y_hi) state contributes the box
/// [leftmost maximal gap] x [strip bounds].
pub fn largest_empty_box(points: &GridPointSet) -> Result<DispersionResult> {
    let den = points.den();
    let pts = points.points();
    let n = pts.len();
    if n == 0 {
        return Err(Error::EmptySet);
    }

    let mut order_x: Vec<u32> = (0..n as u32).collect();
    order_x.sort_unstable_by_key(|&i| pts[i as usize]);
    let mut order_y: Vec<u32> = (0..n as u32).collect();
    order_y.sort_unstable_by_key(|&i| (pts[i as usize].1, pts[i as usize].0));

    let mut ylos: Vec<u64> = pts.iter().map(|p| p.1).collect();
    ylos.push(0);
    ylos.sort_unstable();
    ylos.dedup();

    // Buffers reused across strips. Positions 0 and cnt-1 are the sentinels
    // at x = 0 and x = den; they are never deleted.
    let mut elem_x: Vec<u64> = Vec::with_capacity(n + 2);
    let mut prev: Vec<u32> = vec![0; n + 2];
    let mut next: Vec<u32> = vec![0; n + 2];
    let mut pos: Vec<u32> = vec![0; n];

    let mut best: Option<Candidate> = None;

    for &y_lo in &ylos {
        elem_x.clear();
        elem_x.push(0);
        for &i in &order_x {
            let (x, y) = pts[i as usize];
            if y > y_lo {
                pos[i as usize] = elem_x.len() as u32;
                elem_x.push(x);
            }
        }
        elem_x.push(den);
        let cnt = elem_x.len();
        for p in 0..cnt {
            prev[p] = p.saturating_sub(1) as u32;
            next[p] = (p + 1) as u32;
        }

        // Leftmost maximal gap of the full strip.
        let mut gap = 0u64;
        let mut gap_start = 0u64;
        for p in 1..cnt {
            let g = elem_x[p] - elem_x[p - 1];
            if g > gap {
                gap = g;
                gap_start = elem_x[p - 1];
            }
        }

        // order_y[first_above..] are exactly the strip's points.
        let first_above = order_y.partition_point(|&i| pts[i as usize].1 <= y_lo);
        let mut k = order_y.len();
        let mut y_hi = den;
        loop {
            if gap > 0 {
                consider(
                    &mut best,
                    Candidate {
                        area: gap as u128 * (y_hi - y_lo) as u128,
                        x_lo: gap_start,
                        y_lo,
                        x_hi: gap_start + gap,
                        y_hi,
                    },
                );
            }
            if k == first_above {
                break;
            }
            // Delete the highest remaining ordinate group; merged gaps can
            // only grow, so the running (gap, leftmost start) stays exact.
            let group_y = pts[order_y[k - 1] as usize].1;
            while k > first_above && pts[order_y[k - 1] as usize].1 == group_y {
                k -= 1;
                let p = pos[order_y[k] as usize] as usize;
                let (l, r) = (prev[p] as usize, next[p] as usize);
                next[l] = r as u32;
                prev[r] = l as u32;
                let g = elem_x[r] - elem_x[l];
                if g > gap || (g == gap && elem_x[l] < gap_start) {
                    gap = g;
                    gap_start = elem_x[l];
                }
            }
            y_hi = group_y;
        }
    }

    finish(points, best.expect("candidate exists"), Algorithm::Sweep)
}

/// Exhaustive oracle with the default cap of 64 points.
pub fn dispersion_bruteforce(points: &GridPointSet) -> Result<DispersionResult> {
    dispersion_bruteforce_capped(points, BRUTE_FORCE_CAP)
}

/// Exhaustive oracle: every edge 4-tuple from the coordinate grids plus the
/// square boundary, each checked by a linear scan. Exponentially simpler than
/// the sweep and kept deliberately naive; refuses sets larger than `cap`.
pub fn dispersion_bruteforce_capped(
    points: &GridPointSet,
    cap: usize,
) -> Result<DispersionResult> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    if points.len() > cap {
        return Err(Error::TooLarge(format!(
            "{} points exceed the brute-force cap {cap}",
            points.len()
        )));
    }
    let den = points.den();
    let pts = points.points();

    let mut xs: Vec<u64> = pts.iter().map(|p| p.0).collect();
    xs.extend([0, den]);
    xs.sort_unstable();
    xs.dedup();
    let mut ys: Vec<u64> = pts.iter().map(|p| p.1).collect();
    ys.extend([0, den]);
    ys.sort_unstable();
    ys.dedup();

    let mut best: Option<Candidate> = None;
    // Loop nesting follows the tie-break order (x_lo, y_lo, x_hi, y_hi), so
    // the first maximal box found is the lexicographic minimum.
    for (i, &x_lo) in xs.iter().enumerate() {
        for &y_lo in &ys {
            for &x_hi in &xs[i + 1..] {
                for &y_hi in ys.iter().filter(|&&v| v > y_lo) {
                    let occupied = pts.iter().any(|&(x, y)| {
                        x_lo < x && x < x_hi && y_lo < y && y < y_hi
                    });
                    if !occupied {
                        consider(
                            &mut best,
                            Candidate {
                                area: (x_hi - x_lo) as u128 * (y_hi - y_lo) as u128,
                                x_lo,
                                y_lo,
                                x_hi,
                                y_hi,
                            },
                        );
                    }
                }
            }
        }
    }
    finish(points, best.expect("candidate exists"), Algorithm::Brute)
}

/// Dispersion of a permutation-structured set via windows of consecutive
/// columns.
///
/// The set must have x-coordinates exactly {0, 1/N, ..., (N-1)/N}, one point
/// per column. Each window of columns n1..n2 (1 <= n1 <= n2 <= N-1) admits an
/// empty box spanning x in ((n1-1)/N, (n2+1)/N) whose height is the largest
/// gap between adjacent values of {y_n : n1 <= n <= n2} joined with {0, 1};
/// the overall answer is the maximum over windows, with 1/N (an empty strip
/// between adjacent columns) as the floor. Column 0 never blocks a box: its
/// point lies on the left boundary of the square.
pub fn column_gap_dispersion(points: &GridPointSet) -> Result<DispersionResult> {
    let den = points.den();
    let n = points.len() as u64;
    if n == 0 {
        return Err(Error::EmptySet);
    }
    if den % n != 0 {
        return Err(Error::NotPermutationStructured(format!(
            "{n} points cannot tile denominator {den}"
        )));
    }
    let step = den / n;
    let mut y_of_col: Vec<Option<u64>> = vec![None; n as usize];
    for &(x, y) in points.points() {
        if x % step != 0 {
            return Err(Error::NotPermutationStructured(format!(
                "x numerator {x} is not a multiple of {step}"
            )));
        }
        let col = (x / step) as usize;
        if y_of_col[col].replace(y).is_some() {
            return Err(Error::NotPermutationStructured(format!(
                "two points share column {col}"
            )));
        }
    }
    // n points over n columns with no duplicates: every column is filled.
    let y_col: Vec<u64> = y_of_col.into_iter().map(Option::unwrap).collect();

    // The strip between columns 0 and 1 (leftmost of the N unit strips).
    let mut best = Some(Candidate {
        area: step as u128 * den as u128,
        x_lo: 0,
        y_lo: 0,
        x_hi: step,
        y_hi: den,
    });

    // Columns 1..N-1 sorted by ordinate, for per-window ordered rebuilds.
    let mut order: Vec<u32> = (1..n as u32).collect();
    order.sort_unstable_by_key(|&c| (y_col[c as usize], c));

    let mut elem_y: Vec<u64> = Vec::with_capacity(n as usize + 2);
    let mut owner: Vec<u32> = Vec::with_capacity(n as usize + 2);
    let mut prev: Vec<u32> = vec![0; n as usize + 2];
    let mut next: Vec<u32> = vec![0; n as usize + 2];
    let mut pos: Vec<u32> = vec![0; n as usize];

    for n1 in 1..n {
        // Sorted ordinates of columns n1..N-1, with sentinels 0 and den.
        elem_y.clear();
        owner.clear();
        elem_y.push(0);
        owner.push(u32::MAX);
        for &c in &order {
            if u64::from(c) >= n1 {
                pos[c as usize] = elem_y.len() as u32;
                elem_y.push(y_col[c as usize]);
                owner.push(c);
            }
        }
        elem_y.push(den);
        owner.push(u32::MAX);
        let cnt = elem_y.len();
        for p in 0..cnt {
            prev[p] = p.saturating_sub(1) as u32;
            next[p] = (p + 1) as u32;
        }

        let mut gap = 0u64;
        let mut gap_start = 0u64;
        for p in 1..cnt {
            let g = elem_y[p] - elem_y[p - 1];
            if g > gap {
                gap = g;
                gap_start = elem_y[p - 1];
            }
        }

        for n2 in (n1..n).rev() {
            if gap > 0 {
                consider(
                    &mut best,
                    Candidate {
                        area: ((n2 - n1 + 2) * step) as u128 * gap as u128,
                        x_lo: (n1 - 1) * step,
                        y_lo: gap_start,
                        x_hi: (n2 + 1) * step,
                        y_hi: gap_start + gap,
                    },
                );
            }
            if n2 > n1 {
                let p = pos[n2 as usize] as usize;
                debug_assert_eq!(owner[p], n2 as u32);
                let (l, r) = (prev[p] as usize, next[p] as usize);
                next[l] = r as u32;
                prev[r] = l as u32;
                let g = elem_y[r] - elem_y[l];
                if g > gap || (g == gap && elem_y[l] < gap_start) {
                    gap = g;
                    gap_start = elem_y[l];
                }
            }
        }
    }

    finish(points, best.expect("candidate exists"), Algorithm::ColumnGap)
}

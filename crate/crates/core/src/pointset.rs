//! Point sets on a power grid and empty-box reports.
//!
//! A [`GridPointSet`] holds N points of the unit square whose coordinates all
//! share one denominator `den = base^m`; only the integer numerators are
//! stored. Every geometric question the library answers (emptiness, gaps,
//! areas) then reduces to integer arithmetic on numerators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, Rational};

/// Computes `base^m` as u64, failing when the grid would not fit.
pub(crate) fn checked_pow(base: u32, m: u32) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..m {
        acc = acc
            .checked_mul(base as u64)
            .ok_or_else(|| Error::TooLarge(format!("{base}^{m} exceeds u64")))?;
    }
    Ok(acc)
}

/// N points in [0,1)^2 with common denominator `base^m`, stored as numerators.
///
/// For generated nets the points are ordered by generation index n and
/// `len() == base^m`; hand-loaded sets may hold any N >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPointSet {
    base: u32,
    m: u32,
    den: u64,
    points: Vec<(u64, u64)>,
}

#[derive(Serialize, Deserialize)]
struct GridPointSetRepr {
    base: u32,
    m: u32,
    den: u64,
    points: Vec<(u64, u64)>,
}

impl GridPointSet {
    /// Validates and builds a set; `den` is derived as `base^m`.
    pub fn new(base: u32, m: u32, points: Vec<(u64, u64)>) -> Result<Self> {
        if base < 2 {
            return Err(Error::OutOfRange(format!("base {base} < 2")));
        }
        if m < 1 {
            return Err(Error::OutOfRange("m must be >= 1".into()));
        }
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        let den = checked_pow(base, m)?;
        for &(x, y) in &points {
            if x >= den || y >= den {
                return Err(Error::GridMismatch(format!(
                    "coordinate ({x},{y}) outside [0,{den})"
                )));
            }
        }
        Ok(Self { base, m, den, points })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Common coordinate denominator, `base^m`.
    pub fn den(&self) -> u64 {
        self.den
    }

    /// Number of points N.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Coordinate numerator pairs, in generation order.
    pub fn points(&self) -> &[(u64, u64)] {
        &self.points
    }

    /// The n-th point as exact rationals.
    pub fn point(&self, n: usize) -> (Rational, Rational) {
        let (x, y) = self.points[n];
        (rat(x, self.den), rat(y, self.den))
    }

    /// The same set with x and y exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            base: self.base,
            m: self.m,
            den: self.den,
            points: self.points.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }

    /// Points as a sorted multiset, for order-insensitive equality.
    pub fn sorted_points(&self) -> Vec<(u64, u64)> {
        let mut v = self.points.clone();
        v.sort_unstable();
        v
    }

    /// True when both sets hold the same points regardless of order.
    pub fn same_point_set(&self, other: &Self) -> bool {
        self.den == other.den && self.sorted_points() == other.sorted_points()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("GridPointSet serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("point set JSON: {e}")))
    }
}

impl Serialize for GridPointSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        GridPointSetRepr {
            base: self.base,
            m: self.m,
            den: self.den,
            points: self.points.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for GridPointSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = GridPointSetRepr::deserialize(de)?;
        let set = GridPointSet::new(repr.base, repr.m, repr.points)
            .map_err(serde::de::Error::custom)?;
        if set.den != repr.den {
            return Err(serde::de::Error::custom(format!(
                "den field {} disagrees with base^m = {}",
                repr.den, set.den
            )));
        }
        Ok(set)
    }
}

/// An axis-parallel box with rational corners and its exact area.
///
/// The interesting boxes are those whose open interior misses a point set;
/// [`box_is_interior_empty`] re-checks that claim by linear scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxReport {
    pub x_lo: Rational,
    pub x_hi: Rational,
    pub y_lo: Rational,
    pub y_hi: Rational,
    pub area: Rational,
}

impl BoxReport {
    /// Builds a report, checking corner ordering and computing the area.
    pub fn new(x_lo: Rational, x_hi: Rational, y_lo: Rational, y_hi: Rational) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        if !(zero <= x_lo && x_lo < x_hi && x_hi <= one) {
            return Err(Error::OutOfRange(format!(
                "x edges {} .. {} invalid",
                format_rational(&x_lo),
                format_rational(&x_hi)
            )));
        }
        if !(zero <= y_lo && y_lo < y_hi && y_hi <= one) {
            return Err(Error::OutOfRange(format!(
                "y edges {} .. {} invalid",
                format_rational(&y_lo),
                format_rational(&y_hi)
            )));
        }
        let area = (&x_hi - &x_lo) * (&y_hi - &y_lo);
        Ok(Self { x_lo, x_hi, y_lo, y_hi, area })
    }

    /// Convenience constructor from numerators over a common denominator.
    pub fn from_grid(x_lo: u64, x_hi: u64, y_lo: u64, y_hi: u64, den: u64) -> Result<Self> {
        Self::new(rat(x_lo, den), rat(x_hi, den), rat(y_lo, den), rat(y_hi, den))
    }

    /// The corner tuple used for deterministic tie-breaking.
    pub fn corner_tuple(&self) -> (&Rational, &Rational, &Rational, &Rational) {
        (&self.x_lo, &self.y_lo, &self.x_hi, &self.y_hi)
    }
}

#[derive(Serialize, Deserialize)]
struct BoxReportRepr {
    x_lo: String,
    x_hi: String,
    y_lo: String,
    y_hi: String,
    area: String,
}

impl Serialize for BoxReport {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        BoxReportRepr {
            x_lo: format_rational(&self.x_lo),
            x_hi: format_rational(&self.x_hi),
            y_lo: format_rational(&self.y_lo),
            y_hi: format_rational(&self.y_hi),
            area: format_rational(&self.area),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for BoxReport {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = BoxReportRepr::deserialize(de)?;
        let parse = |s: &str| parse_rational(s).map_err(serde::de::Error::custom);
        let bx = BoxReport::new(
            parse(&repr.x_lo)?,
            parse(&repr.x_hi)?,
            parse(&repr.y_lo)?,
            parse(&repr.y_hi)?,
        )
        .map_err(serde::de::Error::custom)?;
        let area = parse(&repr.area)?;
        if area != bx.area {
            return Err(serde::de::Error::custom("area field disagrees with edges"));
        }
        Ok(bx)
    }
}

/// Smallest integer k with k > q * den, clamped at den + 1.
fn strict_above(q: &Rational, den: u64) -> u64 {
    let scaled_num = q.numer() * BigInt::from(den);
    // floor + 1 exceeds q*den whether or not the value is integral.
    let k: BigInt = Integer::div_floor(&scaled_num, q.denom()) + 1;
    // q <= 1 by BoxReport invariant, so this fits.
    k.to_u64().unwrap_or(den + 1).min(den + 1)
}

/// Largest integer k with k < q * den, or None when no k >= 0 qualifies.
fn strict_below(q: &Rational, den: u64) -> Option<u64> {
    let scaled_num = q.numer() * BigInt::from(den);
    if !scaled_num.is_positive() {
        return None;
    }
    let floor: BigInt = Integer::div_floor(&scaled_num, q.denom());
    let k = if (&floor * q.denom()) == scaled_num {
        floor - 1
    } else {
        floor
    };
    if k.is_negative() {
        None
    } else {
        k.to_u64()
    }
}

/// True iff no point lies strictly inside the box (exact comparisons).
///
/// Points on the box edges do not count: the test is on the open interior.
pub fn box_is_interior_empty(points: &GridPointSet, bx: &BoxReport) -> bool {
    let den = points.den();
    // Translate the rational edges once into inclusive numerator bounds.
    let x_min = strict_above(&bx.x_lo, den);
    let y_min = strict_above(&bx.y_lo, den);
    let x_max = match strict_below(&bx.x_hi, den) {
        Some(v) => v,
        None => return true,
    };
    let y_max = match strict_below(&bx.y_hi, den) {
        Some(v) => v,
        None => return true,
    };
    !points
        .points()
        .iter()
        .any(|&(x, y)| x_min <= x && x <= x_max && y_min <= y && y <= y_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn single_point_set() -> GridPointSet {
        // (1/2, 1/2) on the 2^1 grid.
        GridPointSet::new(2, 1, vec![(1, 1)]).unwrap()
    }

    #[test]
    fn boundary_point_is_not_interior() {
        let set = single_point_set();
        let bx = BoxReport::new(rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 2)).unwrap();
        assert!(box_is_interior_empty(&set, &bx));
    }

    #[test]
    fn interior_point_is_detected() {
        let set = single_point_set();
        let bx = BoxReport::new(rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 1)).unwrap();
        assert!(!box_is_interior_empty(&set, &bx));
    }

    #[test]
    fn off_grid_edges_are_exact() {
        // Point (1/2, 1/2); box x in (1/3, 2/3) contains it, (2/3, 1) does not.
        let set = single_point_set();
        let inside = BoxReport::new(rat(1, 3), rat(2, 3), rat(1, 3), rat(2, 3)).unwrap();
        assert!(!box_is_interior_empty(&set, &inside));
        let beside = BoxReport::new(rat(2, 3), rat(1, 1), rat(0, 1), rat(1, 1)).unwrap();
        assert!(box_is_interior_empty(&set, &beside));
        // Degenerate-slab direction: x in (1/2, 1) has the point on its edge.
        let edge = BoxReport::new(rat(1, 2), rat(1, 1), rat(0, 1), rat(1, 1)).unwrap();
        assert!(box_is_interior_empty(&set, &edge));
    }

    #[test]
    fn box_report_validates_corners() {
        assert!(BoxReport::new(rat(1, 2), rat(1, 2), rat(0, 1), rat(1, 1)).is_err());
        assert!(BoxReport::new(rat(1, 2), rat(1, 4), rat(0, 1), rat(1, 1)).is_err());
        assert!(BoxReport::new(rat(0, 1), rat(3, 2), rat(0, 1), rat(1, 1)).is_err());
        let bx = BoxReport::new(rat(1, 4), rat(1, 2), rat(1, 8), rat(5, 8)).unwrap();
        assert_eq!(bx.area, rat(1, 8));
    }

    #[test]
    fn grid_point_set_validation() {
        assert!(GridPointSet::new(1, 3, vec![(0, 0)]).is_err());
        assert!(GridPointSet::new(2, 0, vec![(0, 0)]).is_err());
        assert!(GridPointSet::new(2, 2, vec![]).is_err());
        assert!(GridPointSet::new(2, 2, vec![(4, 0)]).is_err());
        assert!(GridPointSet::new(2, 2, vec![(3, 3)]).is_ok());
    }

    #[test]
    fn json_schema_shape() {
        let set = GridPointSet::new(2, 2, vec![(0, 0), (1, 2), (2, 1), (3, 3)]).unwrap();
        let json = set.to_json_string();
        assert_eq!(
            json,
            r#"{"base":2,"m":2,"den":4,"points":[[0,0],[1,2],[2,1],[3,3]]}"#
        );
        assert_eq!(GridPointSet::from_json_str(&json).unwrap(), set);
        // A den field inconsistent with base^m must be rejected.
        let bad = r#"{"base":2,"m":2,"den":8,"points":[[0,0]]}"#;
        assert!(GridPointSet::from_json_str(bad).is_err());
    }

    #[test]
    fn box_report_json_round_trip() {
        let bx = BoxReport::new(rat(3, 16), rat(9, 16), rat(1, 16), rat(13, 16)).unwrap();
        let json = serde_json::to_string(&bx).unwrap();
        assert!(json.contains("\"x_lo\":\"3/16\""));
        let back: BoxReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, bx);
    }

    proptest! {
        #[test]
        fn point_set_json_round_trip(
            m in 1u32..6,
            raw in proptest::collection::vec((0u64..64, 0u64..64), 1..40),
        ) {
            let den = 1u64 << m;
            let pts: Vec<(u64, u64)> = raw.into_iter()
                .map(|(x, y)| (x % den, y % den))
                .collect();
            let set = GridPointSet::new(2, m, pts).unwrap();
            prop_assert_eq!(GridPointSet::from_json_str(&set.to_json_string()).unwrap(), set);
        }

        #[test]
        fn interior_empty_matches_rational_scan(
            pts in proptest::collection::vec((0u64..8, 0u64..8), 1..12),
            corners in (0u64..9, 0u64..9, 0u64..9, 0u64..9),
        ) {
            let set = GridPointSet::new(2, 3, pts).unwrap();
            let (a, b, c, d) = corners;
            let (x_lo, x_hi) = (a.min(b), a.max(b));
            let (y_lo, y_hi) = (c.min(d), c.max(d));
            prop_assume!(x_lo < x_hi && y_lo < y_hi);
            let bx = BoxReport::from_grid(x_lo, x_hi, y_lo, y_hi, 8).unwrap();
            // Reference: direct rational comparisons, point by point.
            let reference = !set.points().iter().any(|&(x, y)| {
                let (x, y) = (rat(x, 8), rat(y, 8));
                bx.x_lo < x && x < bx.x_hi && bx.y_lo < y && y < bx.y_hi
            });
            prop_assert_eq!(box_is_interior_empty(&set, &bx), reference);
        }
    }
}

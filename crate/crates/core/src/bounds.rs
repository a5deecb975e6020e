//! The catalog of closed-form dispersion values and bounds, plus the
//! conformance checker that compares a set's computed dispersion against
//! every bound applicable to its construction.
//!
//! Bound values are evaluated in arbitrary-precision rational arithmetic, so
//! any base/m combination is exact. The three max-form bounds are computed by
//! direct maximization over their stated index ranges; the piecewise closed
//! forms are kept alongside as cross-checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::empty_box::largest_empty_box;
use crate::error::{Error, Result};
use crate::gf::{GFMatrix, Triangularity};
use crate::net::fibonacci_lattice;
use crate::pointset::GridPointSet;
use crate::rational::{format_rational, rat, to_decimal_string, Rational};

/// Every closed-form dispersion statement the library knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Universal planar lower bound max{1/(N+1), 5/(4(N+5))}.
    DumiLower,
    /// Upper bound 4 b^2 / b^m for every (0,m,2)-net in base b.
    Prop1Upper,
    /// Lower bound 2/b^m (1 - 1/b^m) for every digital (0,m,2)-net.
    Prop2Lower,
    /// Upper bound 2b/b^m (1 - b/(2 b^m)) for triangular-generated nets.
    Thm2NutUpper,
    /// Lower bound (5/2)/2^m for dyadic triangular nets, m >= 5.
    Thm3DyadicNutLower,
    /// Lower bound max_w (w+1)/b * (b-w)/b^m when the relevant corner entry
    /// of the triangular generator is 1.
    Prop4C11Lower,
    /// Exact dispersion of the dyadic Hammersley set.
    Thm4HammersleyExact,
    /// Lower bound for the base-b Hammersley set, m >= 2.
    Thm5BadicHammersleyLower,
    /// Exact dispersion (5/2)/2^m of the all-ones NUT net, m >= 4.
    Thm6PuExact,
    /// Lower bound for the all-ones NLT net, m >= 4.
    Thm7PlLower,
    /// Exact dispersion 2(N-1)/N^2 of the Fibonacci lattice.
    FibonacciExact,
}

/// Whether a bound constrains the dispersion from below, above, or exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Lower,
    Upper,
    Exact,
}

impl BoundKind {
    pub const ALL: [BoundKind; 11] = [
        BoundKind::DumiLower,
        BoundKind::Prop1Upper,
        BoundKind::Prop2Lower,
        BoundKind::Thm2NutUpper,
        BoundKind::Thm3DyadicNutLower,
        BoundKind::Prop4C11Lower,
        BoundKind::Thm4HammersleyExact,
        BoundKind::Thm5BadicHammersleyLower,
        BoundKind::Thm6PuExact,
        BoundKind::Thm7PlLower,
        BoundKind::FibonacciExact,
    ];

    pub fn relation(self) -> Relation {
        match self {
            BoundKind::Prop1Upper | BoundKind::Thm2NutUpper => Relation::Upper,
            BoundKind::Thm4HammersleyExact
            | BoundKind::Thm6PuExact
            | BoundKind::FibonacciExact => Relation::Exact,
            _ => Relation::Lower,
        }
    }

    /// The snake_case tag used in reports and CSV output.
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::DumiLower => "dumi_lower",
            BoundKind::Prop1Upper => "prop1_upper",
            BoundKind::Prop2Lower => "prop2_lower",
            BoundKind::Thm2NutUpper => "thm2_nut_upper",
            BoundKind::Thm3DyadicNutLower => "thm3_dyadic_nut_lower",
            BoundKind::Prop4C11Lower => "prop4_c11_lower",
            BoundKind::Thm4HammersleyExact => "thm4_hammersley_exact",
            BoundKind::Thm5BadicHammersleyLower => "thm5_badic_hammersley_lower",
            BoundKind::Thm6PuExact => "thm6_pu_exact",
            BoundKind::Thm7PlLower => "thm7_pl_lower",
            BoundKind::FibonacciExact => "fibonacci_exact",
        }
    }
}

fn bpow(base: u32, e: u32) -> BigInt {
    BigInt::from(base).pow(e)
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn ratio(num: BigInt, den: BigInt) -> Rational {
    BigRational::new(num, den)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::DomainError(msg()))
    }
}

/// Evaluates a closed-form value. `m_or_n` is m for the net bounds and the
/// point count N for `DumiLower` and `FibonacciExact` (whose `base` argument
/// is ignored).
pub fn closed_form(kind: BoundKind, base: u32, m_or_n: u64) -> Result<Rational> {
    match kind {
        BoundKind::DumiLower => {
            let n = m_or_n;
            require(n >= 1, || "N must be >= 1".into())?;
            Ok(rat(1, n + 1).max(rat(5, 4 * (n + 5))))
        }
        BoundKind::FibonacciExact => {
            let n = m_or_n;
            // Reuses the lattice constructor's Fibonacci check.
            fibonacci_lattice(n)?;
            // 2(N-1)/N^2.
            Ok(ratio(big(2) * big(n - 1), big(n) * big(n)))
        }
        _ => {
            let m = u32::try_from(m_or_n)
                .map_err(|_| Error::DomainError(format!("m = {m_or_n} out of range")))?;
            closed_form_net(kind, base, m)
        }
    }
}

fn closed_form_net(kind: BoundKind, base: u32, m: u32) -> Result<Rational> {
    let b = base;
    require(b >= 2, || format!("base {b} must be >= 2"))?;
    require(m >= 1, || "m must be >= 1".into())?;
    match kind {
        BoundKind::Prop1Upper => {
            // 4 b^2 / b^m.
            Ok(ratio(big(4) * bpow(b, 2), bpow(b, m)))
        }
        BoundKind::Prop2Lower => {
            // 2/b^m (1 - 1/b^m) = 2(b^m - 1)/b^2m.
            Ok(ratio(big(2) * (bpow(b, m) - 1), bpow(b, 2 * m)))
        }
        BoundKind::Thm2NutUpper => {
            // 2b/b^m (1 - b/(2 b^m)) = (2 b b^m - b^2)/b^2m.
            Ok(ratio(
                big(2) * big(b as u64) * bpow(b, m) - bpow(b, 2),
                bpow(b, 2 * m),
            ))
        }
        BoundKind::Thm3DyadicNutLower => {
            require(b == 2, || format!("dyadic bound, got base {b}"))?;
            require(m >= 5, || format!("requires m >= 5, got {m}"))?;
            Ok(ratio(big(5), big(2) * bpow(2, m)))
        }
        BoundKind::Prop4C11Lower => Ok(max_form(kind, b, m)?.0),
        BoundKind::Thm4HammersleyExact => {
            require(b == 2, || format!("dyadic value, got base {b}"))?;
            Ok(match m {
                1 => rat(1, 2),
                2 => rat(3, 8),
                3 => rat(1, 4),
                _ => ratio(big(3) * (bpow(2, m) - 3), bpow(2, 2 * m)),
            })
        }
        BoundKind::Thm5BadicHammersleyLower => {
            require(m >= 2, || format!("requires m >= 2, got {m}"))?;
            Ok(max_form(kind, b, m)?.0)
        }
        BoundKind::Thm6PuExact => {
            require(b == 2, || format!("dyadic value, got base {b}"))?;
            require(m >= 4, || format!("requires m >= 4, got {m}"))?;
            Ok(ratio(big(5), big(2) * bpow(2, m)))
        }
        BoundKind::Thm7PlLower => {
            require(b == 2, || format!("dyadic bound, got base {b}"))?;
            require(m >= 4, || format!("requires m >= 4, got {m}"))?;
            Ok(max_form(kind, b, m)?.0)
        }
        _ => unreachable!("handled in closed_form"),
    }
}

/// Direct maximization for the three max-form bounds; returns the value and
/// the maximizing index (w or k). Ties resolve to the smallest index.
pub fn max_form(kind: BoundKind, base: u32, m: u32) -> Result<(Rational, u32)> {
    let b = base;
    match kind {
        BoundKind::Prop4C11Lower => {
            require(b >= 2 && m >= 1, || format!("bad domain b={b}, m={m}"))?;
            // max_w (w+1)/b * (b-w)/b^m over w = 0..b-1.
            (0..b)
                .map(|w| {
                    let num = big((w + 1) as u64) * big((b - w) as u64);
                    (ratio(num, bpow(b, m + 1)), w)
                })
                .max_by(|(v1, w1), (v2, w2)| v1.cmp(v2).then(w2.cmp(w1)))
                .ok_or_else(|| Error::DomainError("empty index range".into()))
        }
        BoundKind::Thm5BadicHammersleyLower => {
            require(b >= 2 && m >= 2, || format!("bad domain b={b}, m={m}"))?;
            // max_w (w+1)((b-w+2) b^(m-1) - b - 1) / b^2m over w = 2..b.
            (2..=b)
                .map(|w| {
                    let inner = big((b - w + 2) as u64) * bpow(b, m - 1) - big((b + 1) as u64);
                    let num = big((w + 1) as u64) * inner;
                    (ratio(num, bpow(b, 2 * m)), w)
                })
                .max_by(|(v1, w1), (v2, w2)| v1.cmp(v2).then(w2.cmp(w1)))
                .ok_or_else(|| Error::DomainError("empty index range".into()))
        }
        BoundKind::Thm7PlLower => {
            require(b == 2, || format!("dyadic bound, got base {b}"))?;
            require(m >= 4, || format!("requires m >= 4, got {m}"))?;
            // max_k (2^(k+1)-1)(2^(m-k+1)-1) / 2^2m over k = 2..m-2.
            (2..=m - 2)
                .map(|k| {
                    let num = (bpow(2, k + 1) - 1) * (bpow(2, m - k + 1) - 1);
                    (ratio(num, bpow(2, 2 * m)), k)
                })
                .max_by(|(v1, k1), (v2, k2)| v1.cmp(v2).then(k2.cmp(k1)))
                .ok_or_else(|| Error::DomainError("empty index range".into()))
        }
        _ => Err(Error::DomainError(format!(
            "{} is not a max-form bound",
            kind.name()
        ))),
    }
}

/// The parity-split closed form printed next to the Prop4 max form.
pub fn prop4_case_split(base: u32, m: u32) -> Result<Rational> {
    let b = base;
    require(b >= 2 && m >= 1, || format!("bad domain b={b}, m={m}"))?;
    if b % 2 == 0 {
        // 1/2 (b/2 + 1) / b^m.
        Ok(ratio(big((b / 2 + 1) as u64), big(2) * bpow(b, m)))
    } else {
        // 1/b ((b+1)/2)^2 / b^m.
        let h = big(((b + 1) / 2) as u64);
        Ok(ratio(&h * &h, bpow(b, m + 1)))
    }
}

/// The parity-split closed form for the base-b Hammersley lower bound.
///
/// It matches the max form except at (odd b >= 5, m = 2), where the interior
/// maximizer loses to w = 2 by exactly 1/b^2m; the cross-check tests record
/// that discrepancy instead of hiding it.
pub fn thm5_case_split(base: u32, m: u32) -> Result<Rational> {
    let b = base;
    require(b >= 2 && m >= 2, || format!("bad domain b={b}, m={m}"))?;
    if b == 2 {
        // 3/2^m (1 - 3/2^m).
        Ok(ratio(big(3) * (bpow(2, m) - 3), bpow(2, 2 * m)))
    } else if b % 2 == 0 {
        // (b+2)/(2 b^m) ((b+4)/(2b) - (b+1)/b^m).
        let left = ratio(big((b + 2) as u64), big(2) * bpow(b, m));
        let right = ratio(big((b + 4) as u64), big(2) * big(b as u64))
            - ratio(big((b + 1) as u64), bpow(b, m));
        Ok(left * right)
    } else {
        // (b+3)/(2 b^m) ((b+3)/(2b) - (b+1)/b^m).
        let left = ratio(big((b + 3) as u64), big(2) * bpow(b, m));
        let right = ratio(big((b + 3) as u64), big(2) * big(b as u64))
            - ratio(big((b + 1) as u64), bpow(b, m));
        Ok(left * right)
    }
}

/// The parity-split closed form for the all-ones NLT lower bound.
pub fn thm7_case_split(m: u32) -> Result<Rational> {
    require(m >= 4, || format!("requires m >= 4, got {m}"))?;
    let four = big(4);
    let value = if m % 2 == 0 {
        // (4 - 4/2^(m/2) + 1/2^m) / 2^m.
        ratio(four, BigInt::one()) - ratio(big(4), bpow(2, m / 2)) + ratio(BigInt::one(), bpow(2, m))
    } else {
        // (4 - 3/2^((m-1)/2) + 1/2^m) / 2^m.
        ratio(four, BigInt::one()) - ratio(big(3), bpow(2, (m - 1) / 2))
            + ratio(BigInt::one(), bpow(2, m))
    };
    Ok(value / ratio(bpow(2, m), BigInt::one()))
}

/// One known family, used to decide which bounds apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetFamily {
    Hammersley,
    Pu,
    Pl,
    DigitalNet,
    Fibonacci,
    Raw,
}

/// Construction metadata that travels with a generated set.
///
/// Bounds are conditional on how a set was built, which the raw points do not
/// reveal; hand-loaded sets should use [`NetClass::raw`] and get only the
/// universal bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetClass {
    pub family: SetFamily,
    /// Holds the elementary-interval property (exactly one point per b-adic
    /// box of area b^-m).
    pub is_0m2: bool,
    /// Generated by (J, C2) with C2 nonsingular upper triangular.
    pub is_nut_net: bool,
    /// Generated by (J, C2) with C2 nonsingular lower triangular.
    pub is_nlt_net: bool,
    /// NUT net with c_{1,1} = 1 or NLT net with c_{m,m} = 1.
    pub unit_corner: bool,
}

impl NetClass {
    /// The Hammersley set: C2 is the identity, so it is both a NUT and an NLT
    /// net with unit corners; the net property holds for every base >= 2.
    pub fn hammersley() -> Self {
        Self {
            family: SetFamily::Hammersley,
            is_0m2: true,
            is_nut_net: true,
            is_nlt_net: true,
            unit_corner: true,
        }
    }

    /// The all-ones NUT net family.
    pub fn pu() -> Self {
        Self {
            family: SetFamily::Pu,
            is_0m2: true,
            is_nut_net: true,
            is_nlt_net: false,
            unit_corner: true,
        }
    }

    /// The all-ones NLT net family.
    pub fn pl() -> Self {
        Self {
            family: SetFamily::Pl,
            is_0m2: true,
            is_nut_net: false,
            is_nlt_net: true,
            unit_corner: true,
        }
    }

    /// Classification computed from an explicit generator pair.
    pub fn digital(c1: &GFMatrix, c2: &GFMatrix) -> Result<Self> {
        let m = c1.dim();
        let j = GFMatrix::anti_diagonal(c1.base(), m)?;
        let is_0m2 = crate::gf::net_rank_condition(c1, c2)?;
        let shape = c2.classify_triangular();
        let first_is_j = *c1 == j;
        let is_nut_net =
            first_is_j && matches!(shape, Triangularity::Nut | Triangularity::Diagonal);
        let is_nlt_net =
            first_is_j && matches!(shape, Triangularity::Nlt | Triangularity::Diagonal);
        let unit_corner = (is_nut_net && c2.get(0, 0) == 1)
            || (is_nlt_net && c2.get(m - 1, m - 1) == 1);
        Ok(Self {
            family: SetFamily::DigitalNet,
            is_0m2,
            is_nut_net,
            is_nlt_net,
            unit_corner,
        })
    }

    pub fn fibonacci() -> Self {
        Self {
            family: SetFamily::Fibonacci,
            is_0m2: false,
            is_nut_net: false,
            is_nlt_net: false,
            unit_corner: false,
        }
    }

    /// A set about which nothing is known; only universal bounds apply.
    pub fn raw() -> Self {
        Self {
            family: SetFamily::Raw,
            is_0m2: false,
            is_nut_net: false,
            is_nlt_net: false,
            unit_corner: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// Result of checking one bound against a computed dispersion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub kind: BoundKind,
    pub relation: Relation,
    pub bound: Option<Rational>,
    pub verdict: Verdict,
    /// Skip reason, or the equality status for lower/upper bounds.
    pub detail: String,
}

/// Full conformance report for one point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformanceReport {
    pub dispersion: Rational,
    pub checks: Vec<BoundCheck>,
}

impl ConformanceReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per bound: kind, value, dispersion, verdict (exact rationals
    /// with decimal companions), comma-separated with LF line endings.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(
            "kind,relation,bound,bound_decimal,dispersion,dispersion_decimal,verdict,detail\n",
        );
        for c in &self.checks {
            let (b, bd) = match &c.bound {
                Some(v) => (format_rational(v), to_decimal_string(v, 12)),
                None => (String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                c.kind.name(),
                match c.relation {
                    Relation::Lower => "lower",
                    Relation::Upper => "upper",
                    Relation::Exact => "exact",
                },
                b,
                bd,
                format_rational(&self.dispersion),
                to_decimal_string(&self.dispersion, 12),
                match c.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "fail",
                    Verdict::Skipped => "skipped",
                },
                c.detail.replace(',', ";"),
            ));
        }
        out
    }
}

impl Serialize for ConformanceReport {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct CheckRepr<'a> {
            kind: &'a str,
            relation: Relation,
            #[serde(skip_serializing_if = "Option::is_none")]
            bound: Option<String>,
            verdict: Verdict,
            detail: &'a str,
        }
        let mut s = ser.serialize_struct("ConformanceReport", 2)?;
        s.serialize_field("dispersion", &format_rational(&self.dispersion))?;
        let checks: Vec<CheckRepr> = self
            .checks
            .iter()
            .map(|c| CheckRepr {
                kind: c.kind.name(),
                relation: c.relation,
                bound: c.bound.as_ref().map(format_rational),
                verdict: c.verdict,
                detail: &c.detail,
            })
            .collect();
        s.serialize_field("checks", &checks)?;
        s.end()
    }
}

/// Which bounds apply to a set of this classification, and the argument each
/// takes; `None` means skipped, with the reason.
fn applicability(
    kind: BoundKind,
    class: &NetClass,
    base: u32,
    m: u32,
    n: u64,
) -> std::result::Result<u64, String> {
    let triangular = class.is_nut_net || class.is_nlt_net;
    match kind {
        BoundKind::DumiLower => Ok(n),
        BoundKind::Prop1Upper | BoundKind::Prop2Lower => {
            if class.is_0m2 {
                Ok(m as u64)
            } else {
                Err("set is not a (0,m,2)-net".into())
            }
        }
        BoundKind::Thm2NutUpper => {
            if class.is_0m2 && triangular {
                Ok(m as u64)
            } else {
                Err("needs a triangular-generated (0,m,2)-net".into())
            }
        }
        BoundKind::Thm3DyadicNutLower => {
            if !(class.is_0m2 && triangular) {
                Err("needs a triangular-generated (0,m,2)-net".into())
            } else if base != 2 {
                Err(format!("dyadic bound, set has base {base}"))
            } else if m < 5 {
                Err(format!("requires m >= 5, set has m = {m}"))
            } else {
                Ok(m as u64)
            }
        }
        BoundKind::Prop4C11Lower => {
            if class.is_0m2 && class.unit_corner {
                Ok(m as u64)
            } else {
                Err("needs a unit corner entry in the triangular generator".into())
            }
        }
        BoundKind::Thm4HammersleyExact => {
            if class.family != SetFamily::Hammersley {
                Err("not a Hammersley set".into())
            } else if base != 2 {
                Err(format!("dyadic value, set has base {base}"))
            } else {
                Ok(m as u64)
            }
        }
        BoundKind::Thm5BadicHammersleyLower => {
            if class.family != SetFamily::Hammersley {
                Err("not a Hammersley set".into())
            } else if m < 2 {
                Err(format!("requires m >= 2, set has m = {m}"))
            } else {
                Ok(m as u64)
            }
        }
        BoundKind::Thm6PuExact => {
            if class.family != SetFamily::Pu {
                Err("not the all-ones NUT family".into())
            } else if m < 4 {
                Err(format!("requires m >= 4, set has m = {m}"))
            } else {
                Ok(m as u64)
            }
        }
        BoundKind::Thm7PlLower => {
            if class.family != SetFamily::Pl {
                Err("not the all-ones NLT family".into())
            } else if m < 4 {
                Err(format!("requires m >= 4, set has m = {m}"))
            } else {
                Ok(m as u64)
            }
        }
        BoundKind::FibonacciExact => {
            if class.family == SetFamily::Fibonacci {
                Ok(n)
            } else {
                Err("not a Fibonacci lattice".into())
            }
        }
    }
}

/// Checks the computed dispersion of `points` against every applicable bound.
///
/// Lower bounds require disp >= bound, upper bounds disp <= bound and exact
/// kinds equality, all as exact rational comparisons. Inapplicable bounds are
/// reported as skipped with the reason.
pub fn check_bounds(points: &GridPointSet, class: &NetClass) -> Result<ConformanceReport> {
    let dispersion = largest_empty_box(points)?.area;
    let (base, m, n) = (points.base(), points.m(), points.len() as u64);

    let mut checks = Vec::with_capacity(BoundKind::ALL.len());
    for kind in BoundKind::ALL {
        let check = match applicability(kind, class, base, m, n) {
            Err(reason) => BoundCheck {
                kind,
                relation: kind.relation(),
                bound: None,
                verdict: Verdict::Skipped,
                detail: reason,
            },
            Ok(arg) => {
                let bound = closed_form(kind, base, arg)?;
                let relation = kind.relation();
                let pass = match relation {
                    Relation::Lower => dispersion >= bound,
                    Relation::Upper => dispersion <= bound,
                    Relation::Exact => dispersion == bound,
                };
                let detail = if dispersion == bound {
                    "dispersion equals bound".to_string()
                } else if dispersion > bound {
                    "dispersion exceeds bound".to_string()
                } else {
                    "dispersion below bound".to_string()
                };
                BoundCheck {
                    kind,
                    relation,
                    bound: Some(bound),
                    verdict: if pass { Verdict::Pass } else { Verdict::Fail },
                    detail,
                }
            }
        };
        checks.push(check);
    }
    Ok(ConformanceReport { dispersion, checks })
}

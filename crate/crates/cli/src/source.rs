//! Point-set sources shared by the subcommands: either a JSON file or an
//! in-process construction from base/m and a named or file-loaded generator.

use std::path::PathBuf;

use dispnet::gf::GFMatrix;
use dispnet::net::{generate_net, hammersley, NetSpec};
use dispnet::GridPointSet;

use crate::CliError;

/// Inclusive integer range parsed from `a` or `a..b`.
#[derive(Debug, Clone, Copy)]
pub struct MRange {
    pub lo: u64,
    pub hi: u64,
}

impl MRange {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parse_one = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| CliError::usage(format!("bad integer {t:?} in range {s:?}")))
        };
        let range = match s.split_once("..") {
            Some((a, b)) => MRange { lo: parse_one(a)?, hi: parse_one(b)? },
            None => {
                let v = parse_one(s)?;
                MRange { lo: v, hi: v }
            }
        };
        if range.lo > range.hi {
            return Err(CliError::usage(format!("empty range {s:?}")));
        }
        Ok(range)
    }

    pub fn single(&self, what: &str) -> Result<u64, CliError> {
        if self.lo != self.hi {
            return Err(CliError::usage(format!("{what} takes a single value, not a range")));
        }
        Ok(self.lo)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

/// The --c2 option: identity | U | L | file:PATH.
#[derive(Debug, Clone)]
pub enum C2Spec {
    Identity,
    UpperOnes,
    LowerOnes,
    File(PathBuf),
}

impl C2Spec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "identity" | "I" | "i" => Ok(C2Spec::Identity),
            "U" | "u" => Ok(C2Spec::UpperOnes),
            "L" | "l" => Ok(C2Spec::LowerOnes),
            _ => match s.strip_prefix("file:") {
                Some(path) => Ok(C2Spec::File(PathBuf::from(path))),
                None => Err(CliError::usage(format!(
                    "--c2 must be identity, U, L or file:PATH (got {s:?})"
                ))),
            },
        }
    }

    pub fn matrix(&self, base: u32, m: usize) -> Result<GFMatrix, CliError> {
        match self {
            C2Spec::Identity => GFMatrix::identity(base, m).map_err(CliError::from),
            C2Spec::UpperOnes => GFMatrix::upper_ones(base, m).map_err(CliError::from),
            C2Spec::LowerOnes => GFMatrix::lower_ones(base, m).map_err(CliError::from),
            C2Spec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::usage(format!("cannot read {}: {e}", path.display()))
                })?;
                let mat = GFMatrix::from_json_str(base, &text)?;
                if mat.dim() != m {
                    return Err(CliError::usage(format!(
                        "matrix in {} is {}x{}, expected {m}x{m}",
                        path.display(),
                        mat.dim(),
                        mat.dim()
                    )));
                }
                Ok(mat)
            }
        }
    }
}

/// Builds the digital net (J, C2) for base/m.
pub fn build_net(base: u32, m: u64, c2: &C2Spec) -> Result<GridPointSet, CliError> {
    let m = usize::try_from(m).map_err(|_| CliError::usage("m out of range".into()))?;
    // Composite bases only make sense for the radical-inverse construction.
    if matches!(c2, C2Spec::Identity) && !dispnet::gf::is_prime(base) {
        return Ok(hammersley(base, m as u32)?);
    }
    let j = GFMatrix::anti_diagonal(base, m)?;
    let c2 = c2.matrix(base, m)?;
    Ok(generate_net(&NetSpec::new(j, c2)?)?)
}

/// Resolves `--in PATH` or `--base/--m/--c2` to a concrete point set.
pub fn load_points(
    input: Option<&PathBuf>,
    base: u32,
    m: Option<&str>,
    c2: Option<&str>,
) -> Result<GridPointSet, CliError> {
    match input {
        Some(path) => {
            if m.is_some() || c2.is_some() {
                return Err(CliError::usage(
                    "--in conflicts with --m/--c2: choose one point source".into(),
                ));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            GridPointSet::from_json_str(&text).map_err(CliError::from)
        }
        None => {
            let m = m.ok_or_else(|| CliError::usage("need --in PATH or --m M".into()))?;
            let m = MRange::parse(m)?.single("--m")?;
            let c2 = match c2 {
                Some(s) => C2Spec::parse(s)?,
                None => C2Spec::Identity,
            };
            build_net(base, m, &c2)
        }
    }
}

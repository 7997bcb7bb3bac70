use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Fixed,
    Inflated,
}

/// Inputs an inflated region was built from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inflation {
    pub gamma_hat_o: f64,
    pub sigma_hat_o: f64,
    pub alpha: f64,
    pub n0: usize,
    pub n: usize,
}

impl Inflation {
    /// α·√(n₀/n).
    pub fn inflated_alpha(&self) -> f64 {
        self.alpha * (self.n0 as f64 / self.n as f64).sqrt()
    }
}

/// Closed interval a subset estimate must land in to count as a hit.
/// Either bound may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceRegion {
    #[serde(serialize_with = "ser_bound", deserialize_with = "de_lower")]
    pub lower: f64,
    #[serde(serialize_with = "ser_bound", deserialize_with = "de_upper")]
    pub upper: f64,
    pub kind: RegionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Inflation>,
}

// JSON has no infinities; unbounded sides are written as null.
fn ser_bound<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_some(v)
    } else {
        s.serialize_none()
    }
}

fn de_lower<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
}

fn de_upper<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

pub fn build_fixed_region(lower: f64, upper: f64) -> Result<ToleranceRegion> {
    if lower.is_nan() || upper.is_nan() || lower >= upper {
        return Err(Error::arg(format!(
            "tolerance region needs lower < upper, got [{lower}, {upper}]"
        )));
    }
    if lower == f64::INFINITY || upper == f64::NEG_INFINITY {
        return Err(Error::arg("tolerance region is empty"));
    }
    Ok(ToleranceRegion {
        lower,
        upper,
        kind: RegionKind::Fixed,
        provenance: None,
    })
}

/// `γ̂ₒ ± α·√(n₀/n)·σ̂ₒ`. Shrinking the region (n > n₀) is refused.
pub fn build_inflated_region(
    gamma_hat_o: f64,
    sigma_hat_o: f64,
    alpha: f64,
    n0: usize,
    n: usize,
) -> Result<ToleranceRegion> {
    check_scale(sigma_hat_o, alpha, n0, n)?;
    if !gamma_hat_o.is_finite() {
        return Err(Error::arg("published estimate must be finite"));
    }
    let provenance = Inflation {
        gamma_hat_o,
        sigma_hat_o,
        alpha,
        n0,
        n,
    };
    let half = provenance.inflated_alpha() * sigma_hat_o;
    Ok(ToleranceRegion {
        lower: gamma_hat_o - half,
        upper: gamma_hat_o + half,
        kind: RegionKind::Inflated,
        provenance: Some(provenance),
    })
}

pub(crate) fn check_scale(sigma_hat_o: f64, alpha: f64, n0: usize, n: usize) -> Result<()> {
    if !(sigma_hat_o > 0.0 && sigma_hat_o.is_finite()) {
        return Err(Error::arg(format!(
            "published standard error must be positive, got {sigma_hat_o}"
        )));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::arg(format!("alpha must be positive, got {alpha}")));
    }
    if n == 0 || n0 == 0 {
        return Err(Error::arg("sample sizes must be positive"));
    }
    if n > n0 {
        return Err(Error::arg(format!(
            "subset size {n} exceeds the original sample size {n0}; the standard error would be \
             deflated. Choose M so that N/M is at most {n0}"
        )));
    }
    Ok(())
}

impl ToleranceRegion {
    /// Closed membership: an estimate sitting exactly on a bound is inside.
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

impl fmt::Display for ToleranceRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = if self.lower.is_finite() {
            self.lower.to_string()
        } else {
            "-inf".into()
        };
        let hi = if self.upper.is_finite() {
            self.upper.to_string()
        } else {
            "+inf".into()
        };
        write!(f, "[{lo}, {hi}]")
    }
}

/// Region as given on the command line: `lo:hi` (either side may be empty or
/// `inf`) or `inflate:α`. The inflated form still needs the published
/// estimate and sample sizes before it becomes a region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RegionSpec {
    Fixed { lower: f64, upper: f64 },
    Inflate { alpha: f64 },
}

fn parse_bound(s: &str, default: f64) -> Result<f64> {
    let t = s.trim();
    match t.to_ascii_lowercase().as_str() {
        "" => Ok(default),
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        _ => t
            .parse()
            .map_err(|_| Error::arg(format!("bad region bound `{t}`"))),
    }
}

impl FromStr for RegionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (left, right) = s
            .split_once(':')
            .ok_or_else(|| Error::arg(format!("region `{s}` is not lo:hi or inflate:alpha")))?;
        if left.trim() == "inflate" {
            let alpha = right
                .trim()
                .parse()
                .map_err(|_| Error::arg(format!("bad inflation alpha `{right}`")))?;
            return Ok(RegionSpec::Inflate { alpha });
        }
        let lower = parse_bound(left, f64::NEG_INFINITY)?;
        let upper = parse_bound(right, f64::INFINITY)?;
        build_fixed_region(lower, upper)?;
        Ok(RegionSpec::Fixed { lower, upper })
    }
}

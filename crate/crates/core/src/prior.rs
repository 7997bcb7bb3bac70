use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Beta(a, b) prior on a proportion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaPrior {
    pub a: f64,
    pub b: f64,
}

impl BetaPrior {
    pub const FLAT: BetaPrior = BetaPrior { a: 1.0, b: 1.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if ok(a) && ok(b) {
            Ok(Self { a, b })
        } else {
            Err(Error::arg(format!(
                "Beta prior needs a, b > 0, got ({a}, {b})"
            )))
        }
    }

    pub fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }
}

impl Default for BetaPrior {
    fn default() -> Self {
        Self::FLAT
    }
}

impl fmt::Display for BetaPrior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

/// `a,b`
impl FromStr for BetaPrior {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::arg(format!("prior `{s}` is not of the form a,b")))?;
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::arg(format!("bad prior parameter `{t}`")))
        };
        Self::new(num(a)?, num(b)?)
    }
}

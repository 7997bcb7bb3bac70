//! Term-based linear model descriptions and the small formula grammar used
//! on the command line: `y ~ a + log(b) + sq(c) + a:g`. A trailing `+ 0` or
//! `- 1` drops the intercept.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Dataset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Identity,
    Log,
    Square,
}

impl Transform {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Transform::Identity => x,
            Transform::Log => x.ln(),
            Transform::Square => x * x,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub column: String,
    pub transform: Transform,
}

impl Factor {
    pub fn identity(column: &str) -> Self {
        Self {
            column: column.to_owned(),
            transform: Transform::Identity,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.transform {
            Transform::Identity => write!(f, "{}", self.column),
            Transform::Log => write!(f, "log({})", self.column),
            Transform::Square => write!(f, "sq({})", self.column),
        }
    }
}

/// A model term: a single transformed column, or a product interaction when
/// it has two or more factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn column(name: &str) -> Self {
        Self {
            factors: vec![Factor::identity(name)],
        }
    }

    pub fn with_transform(name: &str, transform: Transform) -> Self {
        Self {
            factors: vec![Factor {
                column: name.to_owned(),
                transform,
            }],
        }
    }

    pub fn interaction(columns: &[&str]) -> Self {
        Self {
            factors: columns.iter().map(|c| Factor::identity(c)).collect(),
        }
    }

    /// Canonical label, e.g. `age:marital_single` or `log(income)`.
    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn is_untransformed_column(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].transform == Transform::Identity
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

pub const INTERCEPT_LABEL: &str = "(Intercept)";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub response: String,
    pub terms: Vec<Term>,
    pub intercept: bool,
}

impl ModelSpec {
    pub fn new(response: &str, terms: Vec<Term>) -> Result<Self> {
        let spec = Self {
            response: response.to_owned(),
            terms,
            intercept: true,
        };
        spec.check_shape()?;
        Ok(spec)
    }

    pub fn without_intercept(mut self) -> Self {
        self.intercept = false;
        self
    }

    /// Number of columns in the design matrix.
    pub fn n_coefficients(&self) -> usize {
        self.terms.len() + usize::from(self.intercept)
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.n_coefficients());
        if self.intercept {
            out.push(INTERCEPT_LABEL.to_owned());
        }
        out.extend(self.terms.iter().map(Term::label));
        out
    }

    fn check_shape(&self) -> Result<()> {
        if self.terms.is_empty() && !self.intercept {
            return Err(Error::Model("model has no terms and no intercept".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for term in &self.terms {
            if term.factors.is_empty() {
                return Err(Error::Model("empty term".into()));
            }
            if term.factors.iter().any(|f| f.column == self.response) {
                return Err(Error::Model(format!(
                    "response `{}` appears among the terms",
                    self.response
                )));
            }
            if !seen.insert(term.label()) {
                return Err(Error::Model(format!("duplicate term `{term}`")));
            }
        }
        Ok(())
    }

    /// Check that every referenced column exists in `data`.
    pub fn validate(&self, data: &Dataset) -> Result<()> {
        self.check_shape()?;
        if !data.has_column(&self.response) {
            return Err(Error::Model(format!(
                "unknown response column `{}`",
                self.response
            )));
        }
        for term in &self.terms {
            for factor in &term.factors {
                if !data.has_column(&factor.column) {
                    return Err(Error::Model(format!(
                        "unknown column `{}` in term `{term}`",
                        factor.column
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parse a formula and resolve it against `data`: a factor naming a
    /// categorical source column expands into one term per indicator column,
    /// and interactions expand over every combination.
    pub fn from_formula(formula: &str, data: &Dataset) -> Result<Self> {
        let parsed = parse_formula(formula)?;
        let mut terms = Vec::new();
        for term in parsed.terms {
            let mut expanded: Vec<Vec<Factor>> = vec![Vec::new()];
            for factor in term.factors {
                let columns: Vec<String> = match data.categorical_group(&factor.column) {
                    Some(group) if !data.has_column(&factor.column) => {
                        if factor.transform != Transform::Identity {
                            return Err(Error::Model(format!(
                                "transform applied to categorical column `{}`",
                                factor.column
                            )));
                        }
                        group.indicators.iter().map(|(_, c)| c.clone()).collect()
                    }
                    _ => vec![factor.column.clone()],
                };
                expanded = expanded
                    .into_iter()
                    .flat_map(|prefix| {
                        columns.iter().map(move |c| {
                            let mut next = prefix.clone();
                            next.push(Factor {
                                column: c.clone(),
                                transform: factor.transform,
                            });
                            next
                        })
                    })
                    .collect();
            }
            terms.extend(expanded.into_iter().map(|factors| Term { factors }));
        }
        let spec = ModelSpec {
            response: parsed.response,
            terms,
            intercept: parsed.intercept,
        };
        spec.validate(data)?;
        Ok(spec)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ ", self.response)?;
        let mut parts: Vec<String> = self.terms.iter().map(Term::label).collect();
        if !self.intercept {
            parts.push("0".into());
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        f.write_str(&parts.join(" + "))
    }
}

fn parse_factor(text: &str) -> Result<Factor> {
    let text = text.trim();
    let wrapped = |prefix: &str| {
        text.strip_prefix(prefix)
            .and_then(|rest| rest.strip_suffix(')'))
            .map(str::trim)
    };
    let (column, transform) = if let Some(inner) = wrapped("log(") {
        (inner, Transform::Log)
    } else if let Some(inner) = wrapped("sq(") {
        (inner, Transform::Square)
    } else {
        (text, Transform::Identity)
    };
    let valid = !column.is_empty()
        && column
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '.'));
    if !valid {
        return Err(Error::Model(format!("cannot parse factor `{text}`")));
    }
    Ok(Factor {
        column: column.to_owned(),
        transform,
    })
}

/// Parse `response ~ term + term ...` without consulting any dataset.
pub fn parse_formula(formula: &str) -> Result<ModelSpec> {
    let (lhs, rhs) = formula
        .split_once('~')
        .ok_or_else(|| Error::Model(format!("formula `{formula}` lacks `~`")))?;
    let response = lhs.trim();
    if response.is_empty() {
        return Err(Error::Model("formula has no response".into()));
    }
    let mut intercept = true;
    let mut terms = Vec::new();
    // `- 1` is the only subtraction the grammar supports.
    let rhs = rhs.replace("- 1", "+ 0").replace("-1", "+ 0");
    for piece in rhs.split('+') {
        let piece = piece.trim();
        match piece {
            "" => return Err(Error::Model(format!("empty term in `{formula}`"))),
            "0" => intercept = false,
            "1" => intercept = true,
            _ => {
                let factors = piece
                    .split(':')
                    .map(parse_factor)
                    .collect::<Result<Vec<_>>>()?;
                terms.push(Term { factors });
            }
        }
    }
    let spec = ModelSpec {
        response: response.to_owned(),
        terms,
        intercept,
    };
    spec.check_shape()?;
    Ok(spec)
}

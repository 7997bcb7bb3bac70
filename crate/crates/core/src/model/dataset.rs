//! Tabular confidential data after categorical encoding.
//!
//! A [`Dataset`] is a set of equal-length numeric columns. Categorical source
//! columns are one-hot encoded against a reference level (the first level in
//! sorted order); the encoder remembers which indicator columns came from
//! which source column so model formulas can refer to the source name.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kind of a source column in the input table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

/// Column kinds declared for an input table.
///
/// The text form has one `name:kind` declaration per line; blank lines and
/// lines starting with `#` are ignored. Columns the schema does not mention
/// are read as numeric.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schema {
    kinds: BTreeMap<String, ColumnKind>,
}

impl Schema {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, column: &str, kind: ColumnKind) -> Self {
        self.kinds.insert(column.to_owned(), kind);
        self
    }

    pub fn kind_of(&self, column: &str) -> ColumnKind {
        self.kinds
            .get(column)
            .copied()
            .unwrap_or(ColumnKind::Numeric)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut schema = Schema::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, kind) = line.split_once(':').ok_or_else(|| {
                Error::Schema(format!("line {}: expected `name:kind`", lineno + 1))
            })?;
            let kind = match kind.trim().to_ascii_lowercase().as_str() {
                "numeric" => ColumnKind::Numeric,
                "categorical" => ColumnKind::Categorical,
                other => {
                    return Err(Error::Schema(format!(
                        "line {}: unknown column kind `{other}`",
                        lineno + 1
                    )))
                }
            };
            let name = name.trim();
            if schema.kinds.insert(name.to_owned(), kind).is_some() {
                return Err(Error::Schema(format!("column `{name}` declared twice")));
            }
        }
        Ok(schema)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    fn declared(&self) -> impl Iterator<Item = &str> {
        self.kinds.keys().map(String::as_str)
    }
}

/// Indicator columns produced from one categorical source column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoricalGroup {
    pub reference: String,
    /// `(level, indicator column name)` for every non-reference level, sorted by level.
    pub indicators: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    groups: BTreeMap<String, CategoricalGroup>,
}

impl Dataset {
    /// Build a dataset from named numeric columns.
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::arg("column name count does not match column count"));
        }
        if names.is_empty() {
            return Err(Error::arg("dataset has no columns"));
        }
        let n = columns[0].len();
        if n == 0 {
            return Err(Error::arg("dataset has no rows"));
        }
        let mut seen = BTreeSet::new();
        for (name, col) in names.iter().zip(&columns) {
            if !seen.insert(name.as_str()) {
                return Err(Error::arg(format!("duplicate column `{name}`")));
            }
            if col.len() != n {
                return Err(Error::arg(format!(
                    "column `{name}` has {} rows, expected {n}",
                    col.len()
                )));
            }
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::Ingestion {
                    row: row + 1,
                    column: name.clone(),
                    reason: "non-finite value".into(),
                });
            }
        }
        Ok(Self {
            names,
            columns,
            groups: BTreeMap::new(),
        })
    }

    pub fn from_columns<'a>(cols: impl IntoIterator<Item = (&'a str, Vec<f64>)>) -> Result<Self> {
        let (names, columns): (Vec<_>, Vec<_>) =
            cols.into_iter().map(|(n, c)| (n.to_owned(), c)).unzip();
        Self::new(names, columns)
    }

    pub fn n_rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    /// Indicator columns derived from a categorical source column, if any.
    pub fn categorical_group(&self, source: &str) -> Option<&CategoricalGroup> {
        self.groups.get(source)
    }

    pub fn categorical_groups(&self) -> &BTreeMap<String, CategoricalGroup> {
        &self.groups
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    /// Overwrite row `i` in place; `values` follows [`Dataset::column_names`] order.
    pub fn set_row(&mut self, i: usize, values: &[f64]) -> Result<()> {
        if values.len() != self.columns.len() {
            return Err(Error::arg("row width does not match column count"));
        }
        if i >= self.n_rows() {
            return Err(Error::arg(format!("row {i} out of range")));
        }
        for (col, &v) in self.columns.iter_mut().zip(values) {
            col[i] = v;
        }
        Ok(())
    }

    /// New dataset holding the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Dataset> {
        if rows.is_empty() {
            return Err(Error::arg("row selection is empty"));
        }
        let columns = self
            .columns
            .iter()
            .map(|c| rows.iter().map(|&r| c[r]).collect())
            .collect();
        Ok(Dataset {
            names: self.names.clone(),
            columns,
            groups: self.groups.clone(),
        })
    }

    /// Read a delimited table (header row required) and encode it against `schema`.
    pub fn read_delimited<R: Read>(reader: R, schema: &Schema, delimiter: u8) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Format(format!("header row: {e}")))?
            .iter()
            .map(str::to_owned)
            .collect();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err(Error::Format("missing header row".into()));
        }
        for declared in schema.declared() {
            if !header.iter().any(|h| h == declared) {
                return Err(Error::Schema(format!(
                    "schema declares `{declared}` but the table has no such column"
                )));
            }
        }
        let mut raw: Vec<Vec<String>> = vec![Vec::new(); header.len()];
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Format(format!("row {}: {e}", i + 1)))?;
            if record.len() != header.len() {
                return Err(Error::Ingestion {
                    row: i + 1,
                    column: header.get(record.len()).cloned().unwrap_or_default(),
                    reason: format!("expected {} fields, found {}", header.len(), record.len()),
                });
            }
            for (j, field) in record.iter().enumerate() {
                raw[j].push(field.to_owned());
            }
        }
        encode_categoricals(&header, &raw, schema)
    }

    pub fn read_path(path: &Path, schema: &Schema, delimiter: u8) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_delimited(std::io::BufReader::new(file), schema, delimiter)
    }

    /// Write the encoded columns as a delimited table. Values use Rust's
    /// shortest round-trip formatting, so reading back reproduces them exactly.
    pub fn write_delimited<W: std::io::Write>(&self, writer: W, delimiter: u8) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .from_writer(writer);
        let fail = |e: csv::Error| Error::Format(format!("writing table: {e}"));
        w.write_record(&self.names).map_err(fail)?;
        for i in 0..self.n_rows() {
            w.write_record(self.columns.iter().map(|c| c[i].to_string()))
                .map_err(fail)?;
        }
        w.flush()
            .map_err(|e| Error::Format(format!("writing table: {e}")))
    }
}

fn is_missing(field: &str) -> bool {
    matches!(
        field,
        "" | "NA" | "na" | "NaN" | "nan" | "null" | "NULL" | "."
    )
}

/// Encode raw string columns into a [`Dataset`].
///
/// Numeric columns pass through. Each categorical column becomes one `name_level`
/// indicator per non-reference level, where the reference is the first level in
/// sorted order.
pub fn encode_categoricals(
    header: &[String],
    raw: &[Vec<String>],
    schema: &Schema,
) -> Result<Dataset> {
    let n = raw.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(Error::Format("table has no data rows".into()));
    }
    let mut names = Vec::new();
    let mut columns = Vec::new();
    let mut groups = BTreeMap::new();
    for (name, values) in header.iter().zip(raw) {
        if let Some(row) = values.iter().position(|v| is_missing(v)) {
            return Err(Error::Ingestion {
                row: row + 1,
                column: name.clone(),
                reason: "missing value".into(),
            });
        }
        match schema.kind_of(name) {
            ColumnKind::Numeric => {
                let col = values
                    .iter()
                    .enumerate()
                    .map(|(row, v)| {
                        v.parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| Error::Ingestion {
                                row: row + 1,
                                column: name.clone(),
                                reason: format!("`{v}` is not a finite number"),
                            })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                names.push(name.clone());
                columns.push(col);
            }
            ColumnKind::Categorical => {
                let levels: BTreeSet<&str> = values.iter().map(String::as_str).collect();
                if levels.len() < 2 {
                    return Err(Error::Ingestion {
                        row: 1,
                        column: name.clone(),
                        reason: "categorical column is constant (needs at least two levels)".into(),
                    });
                }
                let mut levels = levels.into_iter();
                let reference = levels.next().unwrap_or_default().to_owned();
                let mut indicators = Vec::new();
                for level in levels {
                    let col_name = format!("{name}_{level}");
                    columns.push(
                        values
                            .iter()
                            .map(|v| f64::from(u8::from(v == level)))
                            .collect(),
                    );
                    names.push(col_name.clone());
                    indicators.push((level.to_owned(), col_name));
                }
                groups.insert(
                    name.clone(),
                    CategoricalGroup {
                        reference,
                        indicators,
                    },
                );
            }
        }
    }
    let mut ds = Dataset::new(names, columns)?;
    ds.groups = groups;
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, schema: &Schema) -> Result<Dataset> {
        Dataset::read_delimited(text.as_bytes(), schema, b',')
    }

    #[test]
    fn two_level_encoding_uses_sorted_reference() {
        let schema = Schema::new().with("sex", ColumnKind::Categorical);
        let ds = read("y,sex\n1,M\n2,F\n3,M\n", &schema).unwrap();
        assert_eq!(ds.column_names(), ["y", "sex_M"]);
        assert_eq!(ds.column("sex_M").unwrap(), [1.0, 0.0, 1.0]);
        assert_eq!(ds.categorical_group("sex").unwrap().reference, "F");
    }

    #[test]
    fn all_numeric_table_passes_through() {
        let ds = read("a,b\n1,2.5\n3,-4\n", &Schema::new()).unwrap();
        let expected =
            Dataset::from_columns([("a", vec![1.0, 3.0]), ("b", vec![2.5, -4.0])]).unwrap();
        assert_eq!(ds, expected);
    }

    #[test]
    fn three_level_column_gives_two_indicators() {
        let schema = Schema::new().with("race", ColumnKind::Categorical);
        let ds = read("race,y\nb,1\na,2\nc,3\na,4\n", &schema).unwrap();
        let b = ds.column("race_b").unwrap();
        let c = ds.column("race_c").unwrap();
        assert!(!ds.has_column("race_a"));
        for i in 0..ds.n_rows() {
            assert!(b[i] + c[i] <= 1.0);
        }
        assert_eq!(b, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(c, [0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn missing_value_names_row_and_column() {
        let err = read("a,b\n1,2\n3,\n", &Schema::new()).unwrap_err();
        match err {
            Error::Ingestion { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "b");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constant_categorical_is_rejected() {
        let schema = Schema::new().with("g", ColumnKind::Categorical);
        assert!(matches!(
            read("g,y\nx,1\nx,2\n", &schema),
            Err(Error::Ingestion { .. })
        ));
    }

    #[test]
    fn custom_delimiter() {
        let ds = Dataset::read_delimited("a;b\n1;2\n".as_bytes(), &Schema::new(), b';').unwrap();
        assert_eq!(ds.column("b").unwrap(), [2.0]);
    }

    #[test]
    fn schema_text_form() {
        let s = Schema::parse("# kinds\nsex: categorical\nincome:numeric\n").unwrap();
        assert_eq!(s.kind_of("sex"), ColumnKind::Categorical);
        assert_eq!(s.kind_of("income"), ColumnKind::Numeric);
        assert_eq!(s.kind_of("other"), ColumnKind::Numeric);
        assert!(Schema::parse("x: text").is_err());
        assert!(Schema::parse("x numeric").is_err());
    }

    #[test]
    fn schema_column_must_exist() {
        let schema = Schema::new().with("nope", ColumnKind::Categorical);
        assert!(matches!(read("a\n1\n", &schema), Err(Error::Schema(_))));
    }
}

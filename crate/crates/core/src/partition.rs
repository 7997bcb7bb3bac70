//! Random, even, disjoint partitioning of rows into subsets.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dp::RngStream;
use crate::error::{Error, Result};
use crate::model::Dataset;

/// Assignment of `n_rows` rows to `subsets` blocks. Only `(seed, M, N)` is
/// ever stored; the assignment is recomputed from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPlan {
    seed: u64,
    subsets: usize,
    assignment: Vec<usize>,
}

impl PartitionPlan {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn subsets(&self) -> usize {
        self.subsets
    }

    pub fn n_rows(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Row indices of subset `l`, in original row order.
    pub fn rows_of(&self, l: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &a)| a == l)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.subsets];
        for &a in &self.assignment {
            sizes[a] += 1;
        }
        sizes
    }

    pub fn record(&self) -> PlanRecord {
        PlanRecord {
            seed: self.seed,
            subsets: self.subsets,
            n_rows: self.assignment.len(),
        }
    }
}

/// Serializable identity of a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub seed: u64,
    #[serde(rename = "M")]
    pub subsets: usize,
    #[serde(rename = "N")]
    pub n_rows: usize,
}

impl PlanRecord {
    pub fn rebuild(&self) -> Result<PartitionPlan> {
        make_partition(self.n_rows, self.subsets, self.seed)
    }
}

impl fmt::Display for PlanRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seed={} M={} N={}", self.seed, self.subsets, self.n_rows)
    }
}

impl FromStr for PlanRecord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut seed = None;
        let mut subsets = None;
        let mut n_rows = None;
        for field in s.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("plan field `{field}` lacks `=`")))?;
            let bad = |_| Error::Format(format!("bad value in plan field `{field}`"));
            match key {
                "seed" => seed = Some(value.parse().map_err(bad)?),
                "M" => subsets = Some(value.parse().map_err(bad)?),
                "N" => n_rows = Some(value.parse().map_err(bad)?),
                _ => return Err(Error::Format(format!("unknown plan field `{key}`"))),
            }
        }
        match (seed, subsets, n_rows) {
            (Some(seed), Some(subsets), Some(n_rows)) => Ok(Self {
                seed,
                subsets,
                n_rows,
            }),
            _ => Err(Error::Format(format!("incomplete plan record `{s}`"))),
        }
    }
}

/// Shuffle the rows with Fisher-Yates and cut the permutation into `subsets`
/// consecutive blocks; the first `N mod M` blocks take one extra row.
pub fn make_partition(n_rows: usize, subsets: usize, seed: u64) -> Result<PartitionPlan> {
    if subsets < 1 {
        return Err(Error::arg("number of subsets M must be at least 1"));
    }
    if subsets > n_rows {
        return Err(Error::arg(format!(
            "number of subsets M = {subsets} exceeds the number of rows N = {n_rows}"
        )));
    }
    let mut stream = RngStream::root(seed).derive("partition", 0);
    let mut perm: Vec<usize> = (0..n_rows).collect();
    for i in (1..n_rows).rev() {
        let j = stream.random_range(0..=i);
        perm.swap(i, j);
    }
    let base = n_rows / subsets;
    let extra = n_rows % subsets;
    let mut assignment = vec![0; n_rows];
    let mut pos = 0;
    for block in 0..subsets {
        let size = base + usize::from(block < extra);
        for &row in &perm[pos..pos + size] {
            assignment[row] = block;
        }
        pos += size;
    }
    Ok(PartitionPlan {
        seed,
        subsets,
        assignment,
    })
}

/// Rows of subset `l`, original order preserved.
pub fn subset_view(data: &Dataset, plan: &PartitionPlan, l: usize) -> Result<Dataset> {
    if plan.n_rows() != data.n_rows() {
        return Err(Error::arg(format!(
            "plan covers {} rows but the dataset has {}",
            plan.n_rows(),
            data.n_rows()
        )));
    }
    if l >= plan.subsets() {
        return Err(Error::arg(format!(
            "subset index {l} out of range 0..{}",
            plan.subsets()
        )));
    }
    data.select_rows(&plan.rows_of(l))
}

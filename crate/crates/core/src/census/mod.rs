//! Closed-form census of the states each algorithm can produce, and the
//! exhaustive oracles that check those formulas at small sizes.
//!
//! Several closed forms count (cut, factorization) pairs rather than distinct
//! states; their rows carry [`Relation::FormulaUpperBound`] and are checked
//! as inequalities.

mod enumerate;
mod formulas;
mod fractions;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};

pub use enumerate::{
    dj_formula_report, enumerate_dj, enumerate_grover, enumerate_simon, grover_formula_report,
    simon_report, table_string, EnumOptions,
};
pub use formulas::{
    binom, count_balanced, count_balanced_fully_separable, count_bisep_fixed_partition,
    count_dj_bisep_upper, count_grover, count_pairblock_factorizations, count_simon,
    simon_modal_weight, GroverCounts, SimonWeightClass, MAX_FORMULA_N,
};
pub use fractions::{
    asymptotics_table, dj_fractions, grover_bisep_fraction, log2_big, AsymptoticsRow, DjFractions,
    LogFraction,
};

pub const CENSUS_SCHEMA: &str = "census-v1";

/// Exact nonnegative count.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<BigUint>()
            .map(BigCount)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    FormulaUpperBound,
    OracleOnly,
    FormulaOnly,
}

impl Relation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Relation::Equal => "equal",
            Relation::FormulaUpperBound => "formula-upper-bound",
            Relation::OracleOnly => "oracle-only",
            Relation::FormulaOnly => "formula-only",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CensusRow {
    pub class: String,
    pub formula: Option<BigCount>,
    pub oracle: Option<BigCount>,
    pub relation: Relation,
    /// The closed form is outside the regime it was derived for; the
    /// relation is reported but not enforced.
    #[serde(default)]
    pub outside_regime: bool,
}

impl CensusRow {
    /// Build a row; `claimed` applies only when both values are present.
    pub fn new(
        class: impl Into<String>,
        formula: Option<BigCount>,
        oracle: Option<BigCount>,
        claimed: Relation,
    ) -> Self {
        let relation = match (&formula, &oracle) {
            (Some(_), Some(_)) => claimed,
            (Some(_), None) => Relation::FormulaOnly,
            (None, _) => Relation::OracleOnly,
        };
        Self {
            class: class.into(),
            formula,
            oracle,
            relation,
            outside_regime: false,
        }
    }

    pub fn outside_regime(mut self, flag: bool) -> Self {
        self.outside_regime = flag;
        self
    }

    /// Does the pair of values satisfy the stated relation?
    pub fn holds(&self) -> bool {
        match (&self.formula, &self.oracle, self.relation) {
            (Some(f), Some(o), Relation::Equal) => f == o,
            (Some(f), Some(o), Relation::FormulaUpperBound) => f >= o,
            _ => true,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema: String,
    pub algorithm: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    pub rows: Vec<CensusRow>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl CensusReport {
    pub fn new(algorithm: &str, n: usize, m: Option<u64>) -> Self {
        Self {
            schema: CENSUS_SCHEMA.into(),
            algorithm: algorithm.into(),
            n,
            m,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn row(&self, class: &str) -> Option<&CensusRow> {
        self.rows.iter().find(|r| r.class == class)
    }

    /// Rows inside the validity regime whose relation fails.
    pub fn violations(&self) -> Vec<&CensusRow> {
        self.rows
            .iter()
            .filter(|r| !r.outside_regime && !r.holds())
            .collect()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("census reports always serialize")
    }

    /// `class,formula,oracle,relation`, absent values left empty.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["class", "formula", "oracle", "relation"])
            .expect("in-memory write");
        for r in &self.rows {
            let show =
                |v: &Option<BigCount>| v.as_ref().map(ToString::to_string).unwrap_or_default();
            w.write_record([
                r.class.clone(),
                show(&r.formula),
                show(&r.oracle),
                r.relation.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    /// Human-aligned table.
    pub fn to_table_string(&self) -> String {
        let show = |v: &Option<BigCount>| {
            v.as_ref()
                .map(ToString::to_string)
                .unwrap_or_else(|| "-".into())
        };
        let mut lines = vec![[
            "class".to_string(),
            "formula".into(),
            "oracle".into(),
            "relation".into(),
        ]];
        for r in &self.rows {
            let mut rel = r.relation.to_string();
            if r.outside_regime {
                rel.push_str(" (outside regime)");
            }
            lines.push([r.class.clone(), show(&r.formula), show(&r.oracle), rel]);
        }
        let widths: Vec<usize> = (0..4)
            .map(|c| {
                lines
                    .iter()
                    .map(|l| l[c].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = format!("# {} n={}", self.algorithm, self.n);
        if let Some(m) = self.m {
            out.push_str(&format!(" M={m}"));
        }
        out.push('\n');
        for l in &lines {
            let cells: Vec<String> = l
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell:<w$}"))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        out
    }
}

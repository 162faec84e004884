//! Exhaustive enumeration oracles.
//!
//! The function space is cut into a fixed number of contiguous shards
//! (truth-table integer ranges for Deutsch-Jozsa, smallest marked input for
//! Grover). Shards are classified independently and their tallies added in
//! shard order, so the result does not depend on the worker count.

use std::collections::BTreeMap;

use super::formulas::{
    count_balanced, count_balanced_fully_separable, count_dj_bisep_upper, count_grover,
    count_pairblock_factorizations, count_simon, simon_modal_weight,
};
use super::{BigCount, CensusReport, CensusRow, Relation};
use crate::error::{Error, Result};
use crate::function::{format_bit_string, BooleanFunction};
use crate::oracle::simon_canonical_state;
use crate::separability::sign::SignTable;
use crate::separability::{classify, reassemble, Block};
use crate::state::StateVector;

const SHARDS: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
    /// Only enumerate balanced truth tables (required at `n = 5`).
    pub balanced_only: bool,
    /// Largest `n` for enumerating every truth table.
    pub max_full_n: usize,
    /// Largest `n` for balanced-only enumeration.
    pub max_balanced_n: usize,
    /// Largest `B(2^n, M)` for Grover enumeration.
    pub max_grover_states: u64,
    /// Largest `n` for the Simon classification oracle.
    pub max_simon_n: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            workers: None,
            balanced_only: false,
            max_full_n: 4,
            max_balanced_n: 5,
            max_grover_states: 10_000_000,
            max_simon_n: 8,
        }
    }
}

impl EnumOptions {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }
}

fn limit(what: &str, requested: u64, cap: u64) -> Error {
    Error::ResourceLimit {
        what: what.into(),
        requested,
        cap,
    }
}

#[cfg(feature = "parallel")]
fn run_shards<T, F>(shards: u64, workers: Option<usize>, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if workers == Some(1) {
        return Ok((0..shards).map(work).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvariantViolation(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..shards).into_par_iter().map(work).collect()))
}

#[cfg(not(feature = "parallel"))]
fn run_shards<T, F>(shards: u64, _workers: Option<usize>, work: F) -> Result<Vec<T>>
where
    F: Fn(u64) -> T,
{
    Ok((0..shards).map(work).collect())
}

/// Counts of finest-partition block-size patterns (sizes ascending).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Tally {
    visited: u64,
    balanced: u64,
    constant: u64,
    patterns: BTreeMap<Vec<usize>, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.visited += other.visited;
        self.balanced += other.balanced;
        self.constant += other.constant;
        for (k, v) in other.patterns {
            *self.patterns.entry(k).or_default() += v;
        }
        self
    }

    fn count_where(&self, pred: impl Fn(&[usize]) -> bool) -> u64 {
        self.patterns
            .iter()
            .filter(|(k, _)| pred(k))
            .map(|(_, v)| v)
            .sum()
    }
}

fn pattern_name(sizes: &[usize]) -> String {
    sizes
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("+")
}

/// Next larger integer with the same popcount.
fn next_same_popcount(v: u64) -> u64 {
    let c = v & v.wrapping_neg();
    let r = v + c;
    (((r ^ v) >> 2) / c) | r
}

fn dj_tally(n: usize, balanced_only: bool, workers: Option<usize>) -> Result<Tally> {
    let size = 1u64 << (1 << n);
    let half = 1u32 << (n - 1);
    let all_ones = size - 1;
    let shards = SHARDS.min(size);
    let parts = run_shards(shards, workers, |i| {
        let (lo, hi) = (i * size / shards, (i + 1) * size / shards);
        let mut t = Tally::default();
        let classify_one = |table: u64, t: &mut Tally| {
            let sizes = SignTable::new(n, table).expect("n <= 5").block_sizes();
            *t.patterns.entry(sizes).or_default() += 1;
        };
        if balanced_only {
            let mut v = lo;
            while v < hi && v.count_ones() != half {
                v += 1;
            }
            while v < hi {
                t.visited += 1;
                t.balanced += 1;
                classify_one(v, &mut t);
                v = next_same_popcount(v);
            }
        } else {
            for v in lo..hi {
                t.visited += 1;
                if v == 0 || v == all_ones {
                    t.constant += 1;
                } else if v.count_ones() == half {
                    t.balanced += 1;
                    classify_one(v, &mut t);
                }
            }
        }
        t
    })?;
    Ok(parts.into_iter().fold(Tally::default(), Tally::merge))
}

fn dj_rows(
    n: usize,
    report: &mut CensusReport,
    tally: Option<&Tally>,
    balanced_only: bool,
) -> Result<()> {
    let oracle =
        |pred: &dyn Fn(&[usize]) -> bool| tally.map(|t| BigCount::from(t.count_where(pred)));
    report.rows.push(CensusRow::new(
        "balanced",
        Some(count_balanced(n)?),
        tally.map(|t| BigCount::from(t.balanced)),
        Relation::Equal,
    ));
    if !balanced_only {
        report.rows.push(CensusRow::new(
            "constant",
            Some(BigCount::from(2)),
            tally.map(|t| BigCount::from(t.constant)),
            Relation::Equal,
        ));
    }
    report.rows.push(CensusRow::new(
        "balanced-fully-separable",
        Some(count_balanced_fully_separable(n)?),
        oracle(&|p| p.len() == n),
        Relation::Equal,
    ));
    if n >= 3 {
        let mut pair = vec![1; n - 2];
        pair.push(2);
        report.rows.push(CensusRow::new(
            "balanced-pair-block",
            Some(count_pairblock_factorizations(n)?),
            oracle(&|p| p == pair.as_slice()),
            Relation::FormulaUpperBound,
        ));
    }
    if n >= 2 {
        report.rows.push(CensusRow::new(
            "balanced-biseparable",
            Some(count_dj_bisep_upper(n)?.0),
            oracle(&|p| p.len() >= 2),
            Relation::FormulaUpperBound,
        ));
    }
    if let Some(t) = tally {
        report.rows.push(CensusRow::new(
            "balanced-genuinely-entangled",
            None,
            Some(BigCount::from(t.count_where(|p| p.len() == 1))),
            Relation::OracleOnly,
        ));
        push_histograms(report, "balanced-", n, t);
    }
    Ok(())
}

fn push_histograms(report: &mut CensusReport, prefix: &str, n: usize, t: &Tally) {
    for q in 1..=n {
        let c = t.count_where(|p| p.len() == q);
        report.rows.push(CensusRow::new(
            format!("{prefix}q-{q}"),
            None,
            Some(BigCount::from(c)),
            Relation::OracleOnly,
        ));
    }
    for (pattern, &c) in &t.patterns {
        report.rows.push(CensusRow::new(
            format!("{prefix}blocks-{}", pattern_name(pattern)),
            None,
            Some(BigCount::from(c)),
            Relation::OracleOnly,
        ));
    }
}

/// Closed-form Deutsch-Jozsa rows only.
pub fn dj_formula_report(n: usize) -> Result<CensusReport> {
    let mut report = CensusReport::new("dj", n, None);
    dj_rows(n, &mut report, None, false)?;
    Ok(report)
}

/// Classify every balanced function on `n` bits and reconcile with the
/// closed forms.
pub fn enumerate_dj(n: usize, opts: &EnumOptions) -> Result<CensusReport> {
    if n == 0 {
        return Err(crate::error::domain("n must be at least 1"));
    }
    let hard_cap = opts.max_balanced_n.min(5);
    if n > opts.max_full_n && !(opts.balanced_only && n <= hard_cap) {
        return Err(if opts.balanced_only || n > hard_cap {
            limit(
                "qubits for Deutsch-Jozsa enumeration",
                n as u64,
                hard_cap as u64,
            )
        } else {
            limit(
                "qubits for full Deutsch-Jozsa enumeration (use balanced-only)",
                n as u64,
                opts.max_full_n as u64,
            )
        });
    }
    let tally = dj_tally(n, opts.balanced_only, opts.workers)?;
    let mut report = CensusReport::new("dj", n, None);
    dj_rows(n, &mut report, Some(&tally), opts.balanced_only)?;
    report
        .notes
        .push(format!("enumerated {} truth tables", tally.visited));
    Ok(report)
}

/// All `M`-subsets of `0..size` whose smallest element is `first`, as masks.
fn for_each_subset_with_min(size: u32, m: u32, first: u32, mut visit: impl FnMut(u64)) {
    let width = size - first - 1;
    let k = m - 1;
    if k > width {
        return;
    }
    let head = 1u64 << first;
    if k == 0 {
        visit(head);
        return;
    }
    let end = 1u128 << width;
    let mut v = (1u128 << k) - 1;
    while v < end {
        visit(head | ((v as u64) << (first + 1)));
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
}

fn grover_rows(n: usize, m: u64, report: &mut CensusReport, tally: Option<&Tally>) -> Result<()> {
    let counts = count_grover(n, m)?;
    let regime = counts.outside_regime;
    let oracle =
        |pred: &dyn Fn(&[usize]) -> bool| tally.map(|t| BigCount::from(t.count_where(pred)));
    report.rows.push(CensusRow::new(
        "total",
        Some(counts.total.clone()),
        tally.map(|t| BigCount::from(t.visited)),
        Relation::Equal,
    ));
    let bisep_relation = if m % 2 == 1 || m == 2 {
        Relation::Equal
    } else {
        Relation::FormulaUpperBound
    };
    report.rows.push(
        CensusRow::new(
            "biseparable",
            Some(counts.bisep_formula.clone()),
            oracle(&|p| p.len() >= 2),
            bisep_relation,
        )
        .outside_regime(regime),
    );
    report.rows.push(
        CensusRow::new(
            "fully-entangled",
            counts.fully_entangled_formula.clone(),
            oracle(&|p| p.len() == 1),
            Relation::Equal,
        )
        .outside_regime(regime),
    );
    if let Some(form) = counts.jsep_form_count.clone() {
        let k = m.trailing_zeros() as usize;
        let mut shape = vec![1; k];
        shape.push(n - k);
        shape.sort_unstable();
        report.rows.push(
            CensusRow::new(
                format!("{}-separable-form", k + 1),
                Some(form),
                oracle(&|p| p == shape.as_slice()),
                Relation::Equal,
            )
            .outside_regime(regime),
        );
    }
    if let Some(t) = tally {
        push_histograms(report, "", n, t);
    }
    if regime {
        report.notes.push(format!(
            "M = {m} >= 2^(n/2): closed forms are outside their validity regime"
        ));
    }
    Ok(())
}

/// Closed-form Grover rows only.
pub fn grover_formula_report(n: usize, m: u64) -> Result<CensusReport> {
    let mut report = CensusReport::new("grover", n, Some(m));
    grover_rows(n, m, &mut report, None)?;
    Ok(report)
}

/// Classify every placement of `M` minus signs on `n` qubits.
pub fn enumerate_grover(n: usize, m: u64, opts: &EnumOptions) -> Result<CensusReport> {
    let counts = count_grover(n, m)?;
    if n > crate::separability::sign::MAX_SIGN_QUBITS {
        return Err(limit("qubits for Grover enumeration", n as u64, 6));
    }
    let states = u64::try_from(counts.total.value()).unwrap_or(u64::MAX);
    if states > opts.max_grover_states {
        return Err(limit(
            "Grover states to enumerate",
            states,
            opts.max_grover_states,
        ));
    }
    let size = 1u32 << n;
    let firsts = u64::from(size) - m + 1;
    let parts = run_shards(firsts, opts.workers, |first| {
        let mut t = Tally::default();
        for_each_subset_with_min(size, m as u32, first as u32, |mask| {
            t.visited += 1;
            let sizes = SignTable::new(n, mask).expect("n <= 6").block_sizes();
            *t.patterns.entry(sizes).or_default() += 1;
        });
        t
    })?;
    let tally = parts.into_iter().fold(Tally::default(), Tally::merge);
    let mut report = CensusReport::new("grover", n, Some(m));
    grover_rows(n, m, &mut report, Some(&tally))?;
    Ok(report)
}

/// Is the block holding the 1-bits of `r` exactly `|0...0> + |1...1>`?
fn has_ghz_block(n: usize, r: u64, blocks: &[Block]) -> bool {
    let ones: Vec<usize> = (1..=n).filter(|&q| (r >> (n - q)) & 1 == 1).collect();
    blocks.iter().any(|b| {
        b.qubits == ones && {
            let k = ones.len();
            let expected = if k == 1 {
                StateVector::from_i64s(1, &[1, 1])
            } else {
                StateVector::from_sparse(k, [(0, 1.into()), ((1 << k) - 1, 1.into())])
            };
            expected.map(|e| e == b.state).unwrap_or(false)
        }
    })
}

/// Simon census; with `opts`, every `|0> + |r>` is classified and checked
/// against `q = n - wt(r) + 1` with the 1-bits of `r` forming one GHZ block.
pub fn simon_report(n: usize, opts: Option<&EnumOptions>) -> Result<CensusReport> {
    let classes = count_simon(n)?;
    let mut oracle_by_weight = None;
    if let Some(opts) = opts {
        if n > opts.max_simon_n {
            return Err(limit(
                "qubits for the Simon oracle",
                n as u64,
                opts.max_simon_n as u64,
            ));
        }
        let mut counts = vec![0u64; n + 1];
        for r in 1..1u64 << n {
            let state = simon_canonical_state(n, r)?;
            let report = classify(&state)?;
            let k = r.count_ones() as usize;
            let blocks = report.factorization.blocks();
            let reassembled = reassemble(n, blocks)?;
            if report.q == n - k + 1
                && has_ghz_block(n, r, blocks)
                && reassembled.is_positive_multiple_of(&state)
            {
                counts[k] += 1;
            }
        }
        oracle_by_weight = Some(counts);
    }
    let mut report = CensusReport::new("simon", n, None);
    report.rows.push(CensusRow::new(
        "total",
        Some(BigCount::from((1u64 << n) - 1)),
        oracle_by_weight
            .as_ref()
            .map(|c| BigCount::from(c.iter().sum::<u64>())),
        Relation::Equal,
    ));
    for c in &classes {
        report.rows.push(CensusRow::new(
            format!("weight-{}", c.weight),
            Some(c.count.clone()),
            oracle_by_weight
                .as_ref()
                .map(|v| BigCount::from(v[c.weight])),
            Relation::Equal,
        ));
    }
    for c in &classes {
        report
            .notes
            .push(format!("weight {} -> q = {}", c.weight, c.q));
    }
    report
        .notes
        .push(format!("modal weight {}", simon_modal_weight(n)));
    Ok(report)
}

pub fn enumerate_simon(n: usize, opts: &EnumOptions) -> Result<CensusReport> {
    simon_report(n, Some(opts))
}

/// Debug rendering of a truth table for counterexample messages.
pub fn table_string(n: usize, mask: u64) -> String {
    BooleanFunction::from_mask(n, mask)
        .map(|f| f.to_bit_string())
        .unwrap_or_else(|_| format_bit_string(mask, 1 << n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(rep: &CensusReport, class: &str) -> u64 {
        u64::try_from(rep.row(class).unwrap().oracle.as_ref().unwrap().value()).unwrap()
    }

    #[test]
    fn gosper_step() {
        assert_eq!(next_same_popcount(0b0011), 0b0101);
        assert_eq!(next_same_popcount(0b0110), 0b1001);
    }

    #[test]
    fn subsets_with_min_cover_all_combinations() {
        let mut seen = Vec::new();
        for first in 0..=5 {
            for_each_subset_with_min(8, 3, first, |m| seen.push(m));
        }
        assert_eq!(seen.len(), 56);
        assert!(seen.iter().all(|m| m.count_ones() == 3));
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 56);
    }

    #[test]
    fn dj_n2_and_n3() {
        let opts = EnumOptions::default().with_workers(1);
        let r = enumerate_dj(2, &opts).unwrap();
        assert_eq!(oracle(&r, "balanced"), 6);
        assert_eq!(oracle(&r, "balanced-fully-separable"), 6);
        assert_eq!(oracle(&r, "balanced-biseparable"), 6);
        assert_eq!(oracle(&r, "balanced-genuinely-entangled"), 0);
        let r = enumerate_dj(3, &opts).unwrap();
        assert_eq!(oracle(&r, "balanced"), 70);
        assert_eq!(oracle(&r, "balanced-fully-separable"), 14);
        assert_eq!(oracle(&r, "balanced-pair-block"), 24);
        assert_eq!(oracle(&r, "balanced-biseparable"), 38);
        assert_eq!(oracle(&r, "balanced-genuinely-entangled"), 32);
        let row = r.row("balanced-biseparable").unwrap();
        assert_eq!(row.relation, Relation::FormulaUpperBound);
        assert_eq!(row.formula, Some(BigCount::from(132)));
        assert!(r.violations().is_empty());
    }

    #[test]
    fn balanced_only_matches_full_enumeration() {
        for n in 2..=4 {
            let full = enumerate_dj(n, &EnumOptions::default()).unwrap();
            let opts = EnumOptions {
                balanced_only: true,
                ..EnumOptions::default()
            };
            let bal = enumerate_dj(n, &opts).unwrap();
            for row in &bal.rows {
                assert_eq!(
                    full.row(&row.class).unwrap().oracle,
                    row.oracle,
                    "{}",
                    row.class
                );
            }
        }
    }

    #[test]
    fn dj_caps() {
        assert!(matches!(
            enumerate_dj(5, &EnumOptions::default()),
            Err(Error::ResourceLimit { .. })
        ));
        let opts = EnumOptions {
            balanced_only: true,
            ..EnumOptions::default()
        };
        assert!(matches!(
            enumerate_dj(6, &opts),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn grover_small_cases() {
        let opts = EnumOptions::default();
        let r = enumerate_grover(3, 1, &opts).unwrap();
        assert_eq!(oracle(&r, "q-1"), 8);
        let r = enumerate_grover(3, 3, &opts).unwrap();
        assert_eq!(oracle(&r, "q-1"), 56);
        let r = enumerate_grover(3, 2, &opts).unwrap();
        assert_eq!(oracle(&r, "biseparable"), 12);
        assert_eq!(oracle(&r, "fully-entangled"), 16);
        let r = enumerate_grover(4, 2, &opts).unwrap();
        assert_eq!(oracle(&r, "biseparable"), 32);
        assert_eq!(r.row("biseparable").unwrap().relation, Relation::Equal);
        assert!(r.violations().is_empty());
        let r = enumerate_grover(4, 4, &opts).unwrap();
        assert_eq!(oracle(&r, "3-separable-form"), 24);
        assert_eq!(oracle(&r, "biseparable"), 88);
        assert!(r.row("biseparable").unwrap().outside_regime);
    }

    #[test]
    fn grover_outside_regime_is_flagged_not_failed() {
        let r = enumerate_grover(2, 2, &EnumOptions::default()).unwrap();
        let row = r.row("biseparable").unwrap();
        assert!(!row.holds());
        assert!(row.outside_regime);
        assert!(r.violations().is_empty());
    }

    #[test]
    fn grover_cap() {
        let opts = EnumOptions {
            max_grover_states: 100,
            ..EnumOptions::default()
        };
        assert!(matches!(
            enumerate_grover(4, 2, &opts),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn simon_oracle_matches_binomials() {
        for n in 2..=5 {
            let r = enumerate_simon(n, &EnumOptions::default()).unwrap();
            assert!(r.violations().is_empty());
        }
        let r = simon_report(3, None).unwrap();
        assert_eq!(r.row("weight-2").unwrap().relation, Relation::FormulaOnly);
        assert!(r.notes.contains(&"modal weight 1".to_string()));
    }
}

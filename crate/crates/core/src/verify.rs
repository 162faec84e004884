//! Property suites that cross-check every module against its oracle.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::census::{
    binom, count_dj_bisep_upper, enumerate_dj, enumerate_grover, enumerate_simon,
    grover_bisep_fraction, table_string, CensusReport, EnumOptions, Relation,
};
use crate::error::{structural, Error, Result};
use crate::function::{format_bit_string, BooleanFunction};
use crate::oracle::{
    make_simon_instance, rng, run_dj_pipeline, simon_canonical_state, simon_global_state,
    simon_measure,
};
use crate::separability::sign::SignTable;
use crate::separability::{
    classify, full_separability_fast, lemma_check, schmidt_rank, wht, Bipartition,
};
use crate::state::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Dj,
    Grover,
    Simon,
    Lemma,
    Wht,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Dj => "dj",
            Suite::Grover => "grover",
            Suite::Simon => "simon",
            Suite::Lemma => "lemma",
            Suite::Wht => "wht",
            Suite::All => "all",
        }
    }

    /// Largest `n` each suite accepts.
    pub fn cap(&self, opts: &EnumOptions) -> usize {
        match self {
            Suite::Dj => opts.max_full_n,
            Suite::Grover => 5,
            Suite::Simon => opts.max_simon_n,
            Suite::Lemma => 4,
            Suite::Wht => 6,
            Suite::All => [
                Suite::Dj,
                Suite::Grover,
                Suite::Simon,
                Suite::Lemma,
                Suite::Wht,
            ]
            .iter()
            .map(|s| s.cap(opts))
            .min()
            .unwrap_or(0),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dj" => Suite::Dj,
            "grover" => Suite::Grover,
            "simon" => Suite::Simon,
            "lemma" => Suite::Lemma,
            "wht" => Suite::Wht,
            "all" => Suite::All,
            _ => return Err(structural(format!("unknown suite {s:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub n: Option<usize>,
    pub name: String,
    pub passed: bool,
    /// Upper-bound and outside-regime rows: reported, inequality only.
    pub informational: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    /// `suite,n,name,status,detail,counterexample`.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "n", "name", "status", "detail", "counterexample"])
            .expect("in-memory write");
        for c in &self.checks {
            let status = match (c.passed, c.informational) {
                (true, false) => "pass",
                (true, true) => "info",
                (false, _) => "fail",
            };
            w.write_record([
                c.suite.as_str().to_string(),
                c.n.map(|n| n.to_string()).unwrap_or_default(),
                c.name.clone(),
                status.into(),
                c.detail.clone(),
                c.counterexample.clone().unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match (c.passed, c.informational) {
                (true, false) => "PASS",
                (true, true) => "INFO",
                (false, _) => "FAIL",
            };
            let n = c.n.map(|n| format!(" n={n}")).unwrap_or_default();
            out.push_str(&format!(
                "{status} [{}{n}] {}: {}",
                c.suite, c.name, c.detail
            ));
            if let Some(cx) = &c.counterexample {
                out.push_str(&format!(" (counterexample {cx})"));
            }
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} checks, {} failed: {}\n",
            self.checks.len(),
            failed,
            if failed == 0 { "pass" } else { "fail" }
        ));
        out
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub census: EnumOptions,
    /// Samples per size when exhaustive enumeration is too large.
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            census: EnumOptions::default(),
            random_samples: 10_000,
            seed: 0x5eed,
        }
    }
}

/// Accumulates one property over many cases, keeping the first counterexample.
struct Tracker {
    cases: u64,
    failures: u64,
    counterexample: Option<String>,
}

impl Tracker {
    fn new() -> Self {
        Self {
            cases: 0,
            failures: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(what());
            }
        }
    }

    fn finish(self, suite: Suite, n: Option<usize>, name: &str) -> Check {
        Check {
            suite,
            n,
            name: name.into(),
            passed: self.failures == 0,
            informational: false,
            detail: format!("{} cases, {} failures", self.cases, self.failures),
            counterexample: self.counterexample,
        }
    }
}

/// Sign vectors to test at size `n`: all of them up to `max_exhaustive`,
/// otherwise seeded random samples.
fn sign_masks(n: usize, max_exhaustive: usize, opts: &VerifyOptions) -> Vec<u64> {
    if n <= max_exhaustive {
        return (0..1u64 << (1 << n)).collect();
    }
    let mut g = rng(opts.seed ^ (n as u64) << 32);
    let keep = if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    };
    (0..opts.random_samples)
        .map(|_| g.random::<u64>() & keep)
        .collect()
}

pub fn run(suite: Suite, n_min: usize, n_max: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    if n_min == 0 || n_min > n_max {
        return Err(structural(format!("invalid range {n_min}..{n_max}")));
    }
    let mut report = VerifyReport::default();
    let suites: &[Suite] = match suite {
        Suite::All => &[
            Suite::Wht,
            Suite::Lemma,
            Suite::Dj,
            Suite::Grover,
            Suite::Simon,
        ],
        _ => std::slice::from_ref(&suite),
    };
    for &s in suites {
        let cap = s.cap(&opts.census);
        if n_max > cap {
            return Err(Error::ResourceLimit {
                what: format!("qubits for the {s} suite"),
                requested: n_max as u64,
                cap: cap as u64,
            });
        }
        for n in n_min..=n_max {
            match s {
                Suite::Wht => wht_suite(n, opts, &mut report)?,
                Suite::Lemma => lemma_suite(n, &mut report)?,
                Suite::Dj => dj_suite(n, opts, &mut report)?,
                Suite::Grover => grover_suite(n, opts, &mut report)?,
                Suite::Simon => simon_suite(n, opts, &mut report)?,
                Suite::All => unreachable!(),
            }
        }
        match s {
            Suite::Dj => dj_global(&mut report)?,
            Suite::Grover => grover_global(&mut report)?,
            _ => {}
        }
    }
    Ok(report)
}

fn wht_suite(n: usize, opts: &VerifyOptions, report: &mut VerifyReport) -> Result<()> {
    let mut equivalence = Tracker::new();
    let mut parseval = Tracker::new();
    let mut engines = Tracker::new();
    let mut reassembly = Tracker::new();
    for mask in sign_masks(n, 4, opts) {
        let f = BooleanFunction::from_mask(n, mask)?;
        let s = f.to_state();
        let fast = full_separability_fast(&s)?.is_some();
        let rep = classify(&s)?;
        let cx = || table_string(n, mask);
        equivalence.record(fast == (rep.q == n), cx);
        let energy: i64 = wht(&s)?.iter().map(|c| c * c).sum();
        parseval.record(energy == 1 << (2 * n), cx);
        let bits = SignTable::new(n, mask)?;
        engines.record(bits.finest_partition() == rep.factorization.partition(), cx);
        let back = rep.factorization.reassemble()?;
        reassembly.record(back.is_positive_multiple_of(&s), cx);
    }
    report
        .checks
        .push(equivalence.finish(Suite::Wht, Some(n), "fast test <=> full separability"));
    report
        .checks
        .push(parseval.finish(Suite::Wht, Some(n), "Parseval"));
    report
        .checks
        .push(engines.finish(Suite::Wht, Some(n), "word engine = generic engine"));
    report
        .checks
        .push(reassembly.finish(Suite::Wht, Some(n), "factors reassemble to the state"));
    Ok(())
}

/// Ordered compositions of `n` into at least two positive parts.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            if prefix.len() >= 2 {
                out.push(prefix.clone());
            }
            return;
        }
        for part in 1..=rest {
            prefix.push(part);
            go(rest - part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

fn lemma_suite(n: usize, report: &mut VerifyReport) -> Result<()> {
    if n < 2 {
        return Ok(());
    }
    let mut product = Tracker::new();
    for parts in compositions(n) {
        let sizes: Vec<u64> = parts.iter().map(|&k| 1u64 << (1 << k)).collect();
        let total: u64 = sizes.iter().product();
        for idx in 0..total {
            let mut rest = idx;
            let factors = parts
                .iter()
                .zip(&sizes)
                .map(|(&k, &sz)| {
                    let mask = rest % sz;
                    rest /= sz;
                    BooleanFunction::from_mask(k, mask).map(|f| f.to_state())
                })
                .collect::<Result<Vec<_>>>()?;
            let (prod, any) = lemma_check(&factors)?;
            product.record(prod == any, || {
                let tables: Vec<String> = factors.iter().map(render_signs).collect();
                tables.join(" ⊗ ")
            });
        }
    }
    report.checks.push(product.finish(
        Suite::Lemma,
        Some(n),
        "product balanced <=> some factor balanced",
    ));

    let mut decomposition = Tracker::new();
    for mask in 0..1u64 << (1 << n) {
        let bits = SignTable::new(n, mask)?;
        if !bits.is_balanced() {
            continue;
        }
        let rep = classify(&BooleanFunction::from_mask(n, mask)?.to_state())?;
        if rep.q < 2 {
            continue;
        }
        let ok = rep.factorization.blocks().iter().any(|b| {
            b.state.is_equally_weighted() && b.state.plus_count() == b.state.minus_count()
        });
        decomposition.record(ok, || table_string(n, mask));
    }
    report.checks.push(decomposition.finish(
        Suite::Lemma,
        Some(n),
        "balanced and separable => some block balanced",
    ));
    Ok(())
}

fn render_signs(s: &StateVector) -> String {
    s.amps()
        .iter()
        .map(|a| {
            if a.sign() == num_bigint::Sign::Minus {
                '-'
            } else {
                '+'
            }
        })
        .collect()
}

fn census_checks(suite: Suite, rep: &CensusReport, report: &mut VerifyReport) {
    for row in &rep.rows {
        let (Some(f), Some(o)) = (&row.formula, &row.oracle) else {
            continue;
        };
        let informational = row.outside_regime || row.relation == Relation::FormulaUpperBound;
        let passed = row.outside_regime || row.holds();
        let mut detail = format!("formula {f} vs oracle {o} ({})", row.relation);
        if row.outside_regime {
            detail.push_str(", outside regime");
        }
        report.checks.push(Check {
            suite,
            n: Some(rep.n),
            name: match rep.m {
                Some(m) => format!("M={m} {}", row.class),
                None => row.class.clone(),
            },
            passed,
            informational,
            detail,
            counterexample: None,
        });
    }
}

fn dj_suite(n: usize, opts: &VerifyOptions, report: &mut VerifyReport) -> Result<()> {
    let mut pipeline = Tracker::new();
    for mask in sign_masks(n.min(6), 3, opts) {
        let f = if n <= 6 {
            BooleanFunction::from_mask(n, mask)?
        } else {
            unreachable!("dj suite is capped below 6")
        };
        let ok = match run_dj_pipeline(&f) {
            Ok(p) => p.register == f.to_state() && p.target == StateVector::from_i64s(1, &[1, -1])?,
            Err(_) => false,
        };
        pipeline.record(ok, || table_string(n, mask));
    }
    report.checks.push(pipeline.finish(
        Suite::Dj,
        Some(n),
        "oracle pipeline = direct construction",
    ));
    if n >= 2 {
        let rep = enumerate_dj(n, &opts.census)?;
        census_checks(Suite::Dj, &rep, report);
    }
    Ok(())
}

fn dj_global(report: &mut VerifyReport) -> Result<()> {
    let mut forms = Tracker::new();
    for n in 2..=12 {
        let (a, b) = count_dj_bisep_upper(n)?;
        forms.record(a == b, || format!("n = {n}: {a} vs {b}"));
    }
    report.checks.push(forms.finish(
        Suite::Dj,
        None,
        "both biseparable closed forms agree, n = 2..12",
    ));
    Ok(())
}

fn grover_suite(n: usize, opts: &VerifyOptions, report: &mut VerifyReport) -> Result<()> {
    if n < 2 {
        return Ok(());
    }
    for m in 1..=4u64 {
        if m >= 1 << n {
            continue;
        }
        let states = u64::try_from(binom(1 << n, m as i64)?.value()).unwrap_or(u64::MAX);
        if states > opts.census.max_grover_states {
            continue;
        }
        let rep = enumerate_grover(n, m, &opts.census)?;
        census_checks(Suite::Grover, &rep, report);
        if m % 2 == 1 {
            let q1 = rep.row("q-1").and_then(|r| r.oracle.clone());
            let total = rep.row("total").and_then(|r| r.oracle.clone());
            let mut t = Tracker::new();
            t.record(q1 == total, || {
                format!("M = {m}: {q1:?} of {total:?} fully entangled")
            });
            report.checks.push(t.finish(
                Suite::Grover,
                Some(n),
                &format!("M={m} odd => fully entangled"),
            ));
        }
    }
    Ok(())
}

fn grover_global(report: &mut VerifyReport) -> Result<()> {
    for m in [2u64, 4] {
        let mut t = Tracker::new();
        let mut prev = f64::INFINITY;
        for n in 4..=20 {
            let cur = grover_bisep_fraction(n, m)?.log2_ratio;
            t.record(cur < prev, || format!("n = {n}: {cur} >= {prev}"));
            prev = cur;
        }
        report.checks.push(t.finish(
            Suite::Grover,
            None,
            &format!("M={m} biseparable fraction strictly decreasing, n = 4..20"),
        ));
    }
    Ok(())
}

fn simon_suite(n: usize, opts: &VerifyOptions, report: &mut VerifyReport) -> Result<()> {
    if n < 2 {
        return Ok(());
    }
    let rep = enumerate_simon(n, &opts.census)?;
    census_checks(Suite::Simon, &rep, report);

    let mut invariance = Tracker::new();
    let mut rank = Tracker::new();
    let periods: Vec<u64> = if n <= 4 {
        (1..1u64 << n).collect()
    } else {
        let mut g = rng(opts.seed ^ 0x51 ^ n as u64);
        (0..16).map(|_| g.random_range(1..1u64 << n)).collect()
    };
    for r in periods {
        let expected = classify(&simon_canonical_state(n, r)?)?.block_sizes;
        for seed in 0..8u64 {
            let inst = make_simon_instance(n, r, opts.seed.wrapping_add(seed))?;
            let out = simon_measure(&inst, seed.wrapping_mul(0x9e37_79b9))?;
            let got = classify(&out.collapsed)?.block_sizes;
            invariance.record(got == expected, || {
                format!(
                    "r = {}, seed {seed}: {got:?} vs {expected:?}",
                    format_bit_string(r, n)
                )
            });
            if n <= 4 && seed == 0 {
                let global = simon_global_state(&inst)?;
                let cut = Bipartition::new(2 * n, (1..=n).collect())?;
                let rk = schmidt_rank(&global, &cut)?;
                rank.record(rk == 1 << (n - 1), || {
                    format!("r = {}: Schmidt rank {rk}", format_bit_string(r, n))
                });
            }
        }
    }
    report.checks.push(invariance.finish(
        Suite::Simon,
        Some(n),
        "collapsed class independent of seed",
    ));
    if n <= 4 {
        report
            .checks
            .push(rank.finish(Suite::Simon, Some(n), "register Schmidt rank = 2^(n-1)"));
    }
    Ok(())
}

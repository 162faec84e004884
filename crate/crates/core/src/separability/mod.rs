//! Exact separability analysis of pure real states.
//!
//! A state factors across a bipartition iff its reshaped amplitude matrix has
//! rank one, which for integer amplitudes is decided exactly by comparing
//! cross products against a pivot entry. The finest factorization peels off
//! the smallest splitting subsets first, and its block count `q` places the
//! state in `S_q` but not `S_{q+1}`.

mod rank;
pub mod sign;
mod wht;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::state::{reduce, StateVector};

pub use rank::{matrix_rank, schmidt_rank};
pub use wht::{full_separability_fast, lemma_check, wht};

/// Qubit count above which [`finest_factorization`] refuses to run unless
/// the caller raises the cap.
pub const DEFAULT_QUBIT_CAP: usize = 12;

/// One side of a cut of `{1, ..., n}`; always a nonempty proper subset.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bipartition {
    n: usize,
    subset: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, mut subset: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(structural(format!("no bipartition of {n} qubit(s) exists")));
        }
        subset.sort_unstable();
        subset.dedup();
        if subset.is_empty() || subset.len() >= n {
            return Err(structural(format!(
                "subset {subset:?} is not a nonempty proper subset of 1..={n}"
            )));
        }
        if subset[0] == 0 || subset[subset.len() - 1] > n {
            return Err(structural(format!("subset {subset:?} leaves 1..={n}")));
        }
        Ok(Self { n, subset })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|q| !self.subset.contains(q)).collect()
    }

    /// Bit mask over basis-index positions (qubit `q` is bit `n - q`).
    pub fn index_mask(&self) -> usize {
        self.subset.iter().fold(0, |m, &q| m | 1 << (self.n - q))
    }

    /// `(row, column)` of every basis index when the state is reshaped with
    /// subset bits as rows and the remaining bits as columns.
    fn reshape_map(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let in_subset: Vec<bool> = (1..=n).map(|q| self.subset.contains(&q)).collect();
        (0..1usize << n)
            .map(|x| {
                let (mut i, mut j) = (0, 0);
                for q in 1..=n {
                    let bit = (x >> (n - q)) & 1;
                    if in_subset[q - 1] {
                        i = (i << 1) | bit;
                    } else {
                        j = (j << 1) | bit;
                    }
                }
                (i, j)
            })
            .collect()
    }

    pub(crate) fn reshape<'a>(&self, s: &'a StateVector) -> Vec<Vec<&'a BigInt>> {
        let cols = 1 << (self.n - self.subset.len());
        let mut index = vec![0usize; 1 << self.n];
        for (x, (i, j)) in self.reshape_map().into_iter().enumerate() {
            index[i * cols + j] = x;
        }
        index
            .chunks(cols)
            .map(|row| row.iter().map(|&x| s.amp(x)).collect())
            .collect()
    }
}

/// Split `s` across `p` if possible.
///
/// On success returns `(factor, cofactor)` on the subset and its complement
/// (qubits in ascending order within each). Both are content-reduced, the
/// factor's leading nonzero entry is positive, and `factor ⊗ cofactor`
/// (re-interleaved) is a positive multiple of `s`.
pub fn try_factor(s: &StateVector, p: &Bipartition) -> Result<Option<(StateVector, StateVector)>> {
    if s.m() != p.n() {
        return Err(structural(format!(
            "state has {} qubits but the bipartition is of {}",
            s.m(),
            p.n()
        )));
    }
    let a = p.reshape(s);
    let Some((i0, j0)) = a
        .iter()
        .enumerate()
        .find_map(|(i, row)| row.iter().position(|v| !v.is_zero()).map(|j| (i, j)))
    else {
        return Err(Error::InvariantViolation("state vector is zero".into()));
    };
    let pivot = a[i0][j0];
    for row in &a {
        let ai = row[j0];
        for (j, &aij) in row.iter().enumerate() {
            let lhs = aij * pivot;
            let rhs = ai * a[i0][j];
            if lhs != rhs {
                return Ok(None);
            }
        }
    }
    let column: Vec<BigInt> = a.iter().map(|row| row[j0].clone()).collect();
    let row: Vec<BigInt> = a[i0].iter().map(|&v| v.clone()).collect();
    let u = reduce(&column, true);
    let mut v = reduce(&row, true);
    // a[i][j] = column[i]·row[j] / pivot; keep the overall scale positive.
    let su = column[i0].signum() * u[i0].signum();
    let sv = row[j0].signum() * v[j0].signum();
    if (su * sv * pivot.signum()).is_negative() {
        v.iter_mut().for_each(|x| *x = -&*x);
    }
    let k = p.subset().len();
    Ok(Some((
        StateVector::new(k, u)?,
        StateVector::new(p.n() - k, v)?,
    )))
}

/// A tensor factor living on `qubits` (1-based, ascending).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub qubits: Vec<usize>,
    pub state: StateVector,
}

/// The unique finest tensor decomposition of a pure state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factorization {
    n: usize,
    blocks: Vec<Block>,
}

impl Factorization {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn q(&self) -> usize {
        self.blocks.len()
    }

    /// Block sizes in ascending order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.qubits.len()).collect();
        sizes.sort_unstable();
        sizes
    }

    pub fn partition(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.qubits.clone()).collect()
    }

    /// Multiply the block factors back into an `n`-qubit amplitude vector.
    pub fn reassemble(&self) -> Result<StateVector> {
        reassemble(self.n, &self.blocks)
    }
}

/// Product state `Π_b block_b[x restricted to block_b's qubits]`.
pub fn reassemble(n: usize, blocks: &[Block]) -> Result<StateVector> {
    let mut seen = vec![false; n + 1];
    for b in blocks {
        if b.state.m() != b.qubits.len() {
            return Err(structural("block state size does not match its qubit list"));
        }
        for &q in &b.qubits {
            if q == 0 || q > n || std::mem::replace(&mut seen[q], true) {
                return Err(structural(format!("qubit {q} is out of range or repeated")));
            }
        }
    }
    if seen[1..].iter().any(|s| !s) {
        return Err(structural("blocks do not cover every qubit"));
    }
    let amps = (0..1usize << n)
        .map(|x| {
            blocks.iter().fold(BigInt::from(1), |acc, b| {
                let local = b
                    .qubits
                    .iter()
                    .fold(0usize, |i, &q| (i << 1) | ((x >> (n - q)) & 1));
                acc * b.state.amp(local)
            })
        })
        .collect();
    StateVector::new(n, amps)
}

pub fn finest_factorization(s: &StateVector) -> Result<Factorization> {
    finest_factorization_with_cap(s, DEFAULT_QUBIT_CAP)
}

pub fn finest_factorization_with_cap(s: &StateVector, cap: usize) -> Result<Factorization> {
    if s.m() > cap {
        return Err(Error::ResourceLimit {
            what: "qubits for finest factorization".into(),
            requested: s.m() as u64,
            cap: cap as u64,
        });
    }
    let mut blocks = Vec::new();
    peel((1..=s.m()).collect(), s.clone(), &mut blocks)?;
    blocks.sort_by_key(|b| b.qubits[0]);
    Ok(Factorization { n: s.m(), blocks })
}

/// Greedy peeling by ascending subset size, subsets in lexicographic order.
fn peel(mut qubits: Vec<usize>, mut state: StateVector, out: &mut Vec<Block>) -> Result<()> {
    // A split found at size t leaves no split of size < t in the cofactor,
    // so the scan resumes at t instead of restarting from 1.
    let mut t = 1;
    loop {
        let r = qubits.len();
        let mut found = None;
        while found.is_none() && t <= r / 2 {
            for local in Combinations::new(r, t) {
                let cut = Bipartition::new(r, local.iter().map(|i| i + 1).collect())?;
                if let Some(pair) = try_factor(&state, &cut)? {
                    found = Some((local, pair));
                    break;
                }
            }
            if found.is_none() {
                t += 1;
            }
        }
        let Some((local, (factor, cofactor))) = found else {
            out.push(Block { qubits, state });
            return Ok(());
        };
        let (picked, rest): (Vec<_>, Vec<_>) = qubits
            .iter()
            .enumerate()
            .partition(|(i, _)| local.contains(i));
        let picked: Vec<usize> = picked.into_iter().map(|(_, &q)| q).collect();
        if picked.len() > 1 {
            peel(picked, factor, out)?;
        } else {
            out.push(Block {
                qubits: picked,
                state: factor,
            });
        }
        qubits = rest.into_iter().map(|(_, &q)| q).collect();
        state = cofactor;
    }
}

/// Lexicographic `t`-subsets of `0..r`.
pub(crate) struct Combinations {
    r: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(r: usize, t: usize) -> Self {
        Self {
            r,
            current: (t <= r).then(|| (0..t).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let t = out.len();
        let mut next = out.clone();
        let mut i = t;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.r - t + i {
                next[i] += 1;
                for k in i + 1..t {
                    next[k] = next[k - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    FullySeparable,
    Biseparable,
    QSeparable,
    GenuinelyMultipartiteEntangled,
}

impl Label {
    pub fn for_blocks(n: usize, q: usize) -> Self {
        match q {
            q if q == n => Label::FullySeparable,
            1 => Label::GenuinelyMultipartiteEntangled,
            2 => Label::Biseparable,
            _ => Label::QSeparable,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Label::FullySeparable => "fully-separable",
            Label::Biseparable => "biseparable",
            Label::QSeparable => "q-separable",
            Label::GenuinelyMultipartiteEntangled => "genuinely-multipartite-entangled",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Separability class of a state: it lies in `S_q` and not in `S_{q+1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeparabilityReport {
    pub q: usize,
    pub block_sizes: Vec<usize>,
    pub label: Label,
    pub factorization: Factorization,
}

impl SeparabilityReport {
    pub fn n(&self) -> usize {
        self.factorization.n()
    }

    /// In `S_2`, i.e. at least one nontrivial cut.
    pub fn is_biseparable(&self) -> bool {
        self.q >= 2
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            schema: "report-v1".into(),
            n: self.n(),
            q: self.q,
            label: self.label,
            block_sizes: self.block_sizes.clone(),
            blocks: self
                .factorization
                .blocks()
                .iter()
                .map(|b| BlockJson {
                    qubits: b.qubits.clone(),
                    amps: b.state.amps().iter().map(ToString::to_string).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReportJson {
    pub schema: String,
    pub n: usize,
    pub q: usize,
    pub label: Label,
    pub block_sizes: Vec<usize>,
    pub blocks: Vec<BlockJson>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BlockJson {
    pub qubits: Vec<usize>,
    pub amps: Vec<String>,
}

pub fn classify(s: &StateVector) -> Result<SeparabilityReport> {
    classify_with_cap(s, DEFAULT_QUBIT_CAP)
}

pub fn classify_with_cap(s: &StateVector, cap: usize) -> Result<SeparabilityReport> {
    let factorization = finest_factorization_with_cap(s, cap)?;
    let q = factorization.q();
    Ok(SeparabilityReport {
        q,
        block_sizes: factorization.block_sizes(),
        label: Label::for_blocks(s.m(), q),
        factorization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{make_function, BooleanFunction, LinearForm};

    fn sv(m: usize, a: &[i64]) -> StateVector {
        StateVector::from_i64s(m, a).unwrap()
    }

    fn cut(n: usize, subset: &[usize]) -> Bipartition {
        Bipartition::new(n, subset.to_vec()).unwrap()
    }

    fn ghz(n: usize) -> StateVector {
        StateVector::from_sparse(n, [(0, 1.into()), ((1 << n) - 1, 1.into())]).unwrap()
    }

    #[test]
    fn bipartition_validation() {
        assert_eq!(cut(3, &[3, 1]).subset(), &[1, 3]);
        assert!(Bipartition::new(3, vec![]).is_err());
        assert!(Bipartition::new(3, vec![1, 2, 3]).is_err());
        assert!(Bipartition::new(3, vec![4]).is_err());
        assert!(Bipartition::new(1, vec![1]).is_err());
    }

    #[test]
    fn try_factor_examples() {
        let (u, v) = try_factor(&sv(2, &[1, -1, -1, 1]), &cut(2, &[1]))
            .unwrap()
            .unwrap();
        assert_eq!(u, sv(1, &[1, -1]));
        assert_eq!(v, sv(1, &[1, -1]));
        assert!(try_factor(&sv(2, &[1, 1, 1, -1]), &cut(2, &[1]))
            .unwrap()
            .is_none());
        for q in 1..=3 {
            assert!(try_factor(&ghz(3), &cut(3, &[q])).unwrap().is_none());
        }
    }

    #[test]
    fn try_factor_keeps_scale_positive() {
        // -(1,-1)⊗(1,-1) = (1,-1)⊗(-1,1)
        let s = sv(2, &[-1, 1, 1, -1]);
        let (u, v) = try_factor(&s, &cut(2, &[1])).unwrap().unwrap();
        assert_eq!(u, sv(1, &[1, -1]));
        assert_eq!(v, sv(1, &[-1, 1]));
        // Non-contiguous subset: qubit 2 factored out of (1,2)⊗(3,-1)... with qubit order 1,2,3.
        let a = sv(1, &[2, -6]);
        let b = sv(2, &[0, 3, 1, 1]);
        let s = a.tensor(&b).unwrap(); // qubit 1 from a, qubits 2,3 from b
        let (u, v) = try_factor(&s, &cut(3, &[2, 3])).unwrap().unwrap();
        assert_eq!(u, sv(2, &[0, 3, 1, 1]));
        assert_eq!(v, sv(1, &[1, -3]));
        assert!(try_factor(&s, &cut(3, &[2])).unwrap().is_none());
    }

    #[test]
    fn finest_factorization_examples() {
        let f = finest_factorization(&StateVector::uniform(3).unwrap()).unwrap();
        assert_eq!(f.partition(), vec![vec![1], vec![2], vec![3]]);
        let one_minus = make_function(2, "0001").unwrap().to_state();
        assert_eq!(finest_factorization(&one_minus).unwrap().q(), 1);
        // |0000> + |0110>
        let simon = StateVector::from_sparse(4, [(0, 1.into()), (0b0110, 1.into())]).unwrap();
        let f = finest_factorization(&simon).unwrap();
        assert_eq!(f.partition(), vec![vec![1], vec![2, 3], vec![4]]);
        assert_eq!(f.blocks()[1].state, sv(2, &[1, 0, 0, 1]));
        assert!(f.reassemble().unwrap().is_positive_multiple_of(&simon));
    }

    #[test]
    fn finest_factorization_respects_cap() {
        let s = StateVector::uniform(4).unwrap();
        assert!(matches!(
            finest_factorization_with_cap(&s, 3),
            Err(Error::ResourceLimit {
                requested: 4,
                cap: 3,
                ..
            })
        ));
    }

    #[test]
    fn classify_examples() {
        let bv = LinearForm::parse(3, "111")
            .unwrap()
            .to_function()
            .unwrap()
            .to_state();
        let r = classify(&bv).unwrap();
        assert_eq!((r.q, r.label), (3, Label::FullySeparable));
        for x in 0..8 {
            let s = BooleanFunction::from_solutions(3, &[x]).unwrap().to_state();
            let r = classify(&s).unwrap();
            assert_eq!((r.q, r.label), (1, Label::GenuinelyMultipartiteEntangled));
        }
        let s = sv(1, &[1, -1]).tensor(&sv(2, &[1, 1, 1, -1])).unwrap();
        let r = classify(&s).unwrap();
        assert_eq!(
            (r.q, r.block_sizes.clone(), r.label),
            (2, vec![1, 2], Label::Biseparable)
        );
    }

    #[test]
    fn labels_for_degenerate_sizes() {
        let r = classify(&sv(1, &[3, 1])).unwrap();
        assert_eq!((r.q, r.label), (1, Label::FullySeparable));
        assert_eq!(Label::for_blocks(2, 2), Label::FullySeparable);
        assert_eq!(Label::for_blocks(5, 3), Label::QSeparable);
    }

    #[test]
    fn general_integer_states_reassemble() {
        let a = sv(1, &[2, -3]);
        let b = sv(2, &[1, 4, -2, 5]);
        let c = sv(1, &[0, 7]);
        let s = a.tensor(&b).unwrap().tensor(&c).unwrap().neg();
        let f = finest_factorization(&s).unwrap();
        assert_eq!(f.partition(), vec![vec![1], vec![2, 3], vec![4]]);
        assert!(f.reassemble().unwrap().is_positive_multiple_of(&s));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(3, 0).count(), 1);
    }

    #[test]
    fn report_json_shape() {
        let r = classify(&sv(2, &[1, -1, 1, -1])).unwrap();
        let v = serde_json::to_value(r.to_json()).unwrap();
        assert_eq!(v["q"], 2);
        assert_eq!(v["label"], "fully-separable");
        assert_eq!(v["blocks"][1]["amps"], serde_json::json!(["1", "-1"]));
    }
}

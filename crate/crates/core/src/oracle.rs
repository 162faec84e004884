//! State preparation by simulation: the Hadamard layer, the oracle
//! `U_f|x>|y> = |x>|y ⊕ f(x)>` with a `|->` target, and Simon's two-register
//! evolution followed by a measurement of the second register.
//!
//! All randomness comes from an explicit seed fed to ChaCha8
//! (`ChaCha8Rng::seed_from_u64`), so results are reproducible bit for bit.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, structural, Error, Result};
use crate::function::{format_bit_string, parse_bit_string, BooleanFunction};
use crate::separability::{try_factor, Bipartition};
use crate::state::{StateVector, MAX_STATE_QUBITS};

/// Largest `n` for which Simon's `2n`-qubit global state is simulated.
pub const MAX_SIMON_GLOBAL_N: usize = 8;
/// Largest `n` for which a Simon function table is generated.
pub const MAX_SIMON_N: usize = 16;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Apply `U|x>|y> = |x>|y ⊕ g(x)>` to a state on `n_in + n_out` qubits laid
/// out as (input register, output register).
pub fn apply_oracle(
    s: &StateVector,
    n_in: usize,
    n_out: usize,
    g: impl Fn(usize) -> usize,
) -> Result<StateVector> {
    if s.m() != n_in + n_out {
        return Err(structural(format!(
            "oracle acts on {} qubits, state has {}",
            n_in + n_out,
            s.m()
        )));
    }
    let out_mask = (1usize << n_out) - 1;
    let amps = (0..s.len())
        .map(|i| {
            let (x, y) = (i >> n_out, i & out_mask);
            let gx = g(x);
            debug_assert!(gx <= out_mask);
            s.amp((x << n_out) | (y ^ gx)).clone()
        })
        .collect();
    StateVector::new(s.m(), amps)
}

/// Everything the Deutsch-Jozsa / Grover pipeline produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DjPipeline {
    pub post_oracle: StateVector,
    pub register: StateVector,
    pub target: StateVector,
}

/// Run the `(n+1)`-qubit pipeline and split off the target qubit.
pub fn run_dj_pipeline(f: &BooleanFunction) -> Result<DjPipeline> {
    let n = f.n();
    if n + 1 > MAX_STATE_QUBITS {
        return Err(structural(format!("n = {n} is too large to simulate")));
    }
    // |0...0>|1>, then a Hadamard on every qubit: the register becomes uniform
    // and the target becomes |0> - |1>.
    let mut s = StateVector::basis(n + 1, 1)?;
    for q in 1..=n + 1 {
        s = s.apply_hadamard(q)?;
    }
    let post_oracle = apply_oracle(&s, n, 1, |x| f.eval(x) as usize)?;

    let cut = Bipartition::new(n + 1, (1..=n).collect())?;
    let (factor, cofactor) = try_factor(&post_oracle, &cut)?
        .ok_or_else(|| Error::InvariantViolation("target qubit became entangled".into()))?;
    // Column y = 0 carries the register amplitudes times the target's +1 entry.
    let register = StateVector::new(
        n,
        (0..1usize << n)
            .map(|x| post_oracle.amp(x << 1).clone())
            .collect(),
    )?;
    let target = if factor == register {
        cofactor
    } else {
        cofactor.neg()
    };
    let minus = StateVector::from_i64s(1, &[1, -1])?;
    if target != minus || register.tensor(&target)? != post_oracle {
        return Err(Error::InvariantViolation(format!(
            "target factor {target:?} differs from |0> - |1>"
        )));
    }
    Ok(DjPipeline {
        post_oracle,
        register,
        target,
    })
}

/// Register state after the first oracle call; equals `(-1)^f(x)` entrywise.
pub fn prepare_dj_state(f: &BooleanFunction) -> Result<StateVector> {
    run_dj_pipeline(f).map(|p| p.register)
}

/// Grover oracle with `m` marked inputs placed by a seeded shuffle.
pub fn grover_function(n: usize, m: u64, seed: u64) -> Result<BooleanFunction> {
    if n == 0 || n > crate::function::MAX_TABLE_QUBITS {
        return Err(structural(format!("n = {n} is out of range")));
    }
    if m == 0 || m >= 1 << n {
        return Err(domain(format!("M = {m} must satisfy 0 < M < 2^{n}")));
    }
    let mut inputs: Vec<u64> = (0..1u64 << n).collect();
    inputs.shuffle(&mut rng(seed));
    let mut marked = inputs[..m as usize].to_vec();
    marked.sort_unstable();
    BooleanFunction::from_solutions(n, &marked)
}

/// A periodic two-to-one function with `f(x) = f(y)` iff `x = y ⊕ r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimonInstance {
    n: usize,
    r: u64,
    table: Vec<u64>,
}

impl SimonInstance {
    /// Validate an explicit table against the period `r`.
    pub fn from_table(n: usize, r: u64, table: Vec<u64>) -> Result<Self> {
        check_simon_params(n, r)?;
        if table.len() != 1 << n {
            return Err(structural(format!(
                "Simon table has {} entries, expected 2^{n}",
                table.len()
            )));
        }
        if let Some(v) = table.iter().find(|&&v| v >> n != 0) {
            return Err(structural(format!("output {v} has more than {n} bits")));
        }
        for x in 0..table.len() {
            if table[x] != table[x ^ r as usize] {
                return Err(domain(format!(
                    "f({x}) differs from f({x} ⊕ r): r is not a period"
                )));
            }
        }
        let distinct: BTreeSet<u64> = table.iter().copied().collect();
        if distinct.len() != 1 << (n - 1) {
            return Err(domain("the function is not two-to-one"));
        }
        Ok(Self { n, r, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn eval(&self, x: usize) -> u64 {
        self.table[x]
    }

    /// The `2^(n-1)` distinct outputs, ascending.
    pub fn outputs(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self.table.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn to_json(&self) -> SimonInstanceJson {
        SimonInstanceJson {
            n: self.n,
            r: format_bit_string(self.r, self.n),
            table: self
                .table
                .iter()
                .map(|&v| format_bit_string(v, self.n))
                .collect(),
        }
    }

    pub fn from_json(json: &SimonInstanceJson) -> Result<Self> {
        let r = parse_bit_string(&json.r, json.n)?;
        let table = json
            .table
            .iter()
            .map(|v| parse_bit_string(v, json.n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(json.n, r, table)
    }
}

/// File form of a [`SimonInstance`]: bit strings with qubit 1 first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimonInstanceJson {
    pub n: usize,
    pub r: String,
    pub table: Vec<String>,
}

fn check_simon_params(n: usize, r: u64) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("Simon instances need n >= 2, got {n}")));
    }
    if n > MAX_SIMON_N {
        return Err(Error::ResourceLimit {
            what: "Simon input bits".into(),
            requested: n as u64,
            cap: MAX_SIMON_N as u64,
        });
    }
    if r == 0 {
        return Err(domain("the period must satisfy r != 0"));
    }
    if r >> n != 0 {
        return Err(structural(format!("period {r:#b} has more than {n} bits")));
    }
    Ok(())
}

/// Seeded instance: the cosets `{x, x ⊕ r}` (ordered by their smaller
/// element) receive the first `2^(n-1)` entries of a seeded shuffle of
/// all `n`-bit values.
pub fn make_simon_instance(n: usize, r: u64, seed: u64) -> Result<SimonInstance> {
    check_simon_params(n, r)?;
    let mut labels: Vec<u64> = (0..1u64 << n).collect();
    labels.shuffle(&mut rng(seed));
    let mut table = vec![0u64; 1 << n];
    let reps = (0..1u64 << n).filter(|&x| x < x ^ r);
    for (rep, &label) in reps.zip(&labels) {
        table[rep as usize] = label;
        table[(rep ^ r) as usize] = label;
    }
    SimonInstance::from_table(n, r, table)
}

fn check_global_size(n: usize) -> Result<()> {
    if n > MAX_SIMON_GLOBAL_N {
        return Err(Error::ResourceLimit {
            what: "Simon two-register simulation (n)".into(),
            requested: n as u64,
            cap: MAX_SIMON_GLOBAL_N as u64,
        });
    }
    Ok(())
}

/// `Σ_x |x>|f(x)>` on `2n` qubits, first register most significant.
pub fn simon_global_state(inst: &SimonInstance) -> Result<StateVector> {
    let n = inst.n();
    check_global_size(n)?;
    let mut s = StateVector::basis(2 * n, 0)?;
    for q in 1..=n {
        s = s.apply_hadamard(q)?;
    }
    apply_oracle(&s, n, n, |x| inst.eval(x) as usize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementOutcome {
    /// Value read from the second register.
    pub observed: u64,
    /// Smaller preimage of `observed`.
    pub xbar: u64,
    pub r: u64,
    /// First-register state `|x̄> + |x̄ ⊕ r>`.
    pub collapsed: StateVector,
}

impl MeasurementOutcome {
    /// σ_x on every qubit where `x̄` has a 1, giving `|0> + |r>`.
    pub fn to_canonical(&self) -> Result<StateVector> {
        let n = self.collapsed.m();
        (1..=n)
            .filter(|&q| (self.xbar >> (n - q)) & 1 == 1)
            .try_fold(self.collapsed.clone(), |s, q| s.apply_local_x(q))
    }
}

/// Measure the second register of the simulated global state.
pub fn simon_measure(inst: &SimonInstance, seed: u64) -> Result<MeasurementOutcome> {
    let n = inst.n();
    let global = simon_global_state(inst)?;
    let outputs = inst.outputs();
    let observed = outputs[rng(seed).random_range(0..outputs.len())];
    let amps: Vec<BigInt> = (0..1usize << n)
        .map(|x| global.amp((x << n) | observed as usize).clone())
        .collect();
    let xbar = amps
        .iter()
        .position(|a| !a.is_zero())
        .ok_or_else(|| Error::InvariantViolation("measured a value with no preimage".into()))?
        as u64;
    Ok(MeasurementOutcome {
        observed,
        xbar,
        r: inst.r(),
        collapsed: StateVector::new(n, amps)?,
    })
}

/// `|0> + |r>` on `n` qubits.
pub fn simon_canonical_state(n: usize, r: u64) -> Result<StateVector> {
    if r == 0 {
        return Err(domain("the period must satisfy r != 0"));
    }
    if n == 0 || n > MAX_STATE_QUBITS || r >> n != 0 {
        return Err(structural(format!("period {r:#b} does not fit {n} qubits")));
    }
    StateVector::from_sparse(n, [(0, BigInt::from(1)), (r as usize, BigInt::from(1))])
}

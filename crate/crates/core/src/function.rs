//! Boolean functions `f: {0,1}^n -> {0,1}` and linear forms `a·x`.
//!
//! Inputs are indexed by `x = Σ x_i 2^(n-i)`: qubit 1 is the most significant
//! bit of the basis index. Every module and file format uses this convention.

use std::fmt;

use crate::error::{domain, structural, Result};
use crate::state::StateVector;

/// Largest qubit count for which a truth table is materialized.
pub const MAX_TABLE_QUBITS: usize = 24;

/// Parse an `n`-character bit string where the first character is qubit 1
/// (the most significant bit).
pub fn parse_bit_string(s: &str, n: usize) -> Result<u64> {
    if n == 0 || n > 63 {
        return Err(structural(format!("bit string width {n} is not in 1..=63")));
    }
    if s.len() != n {
        return Err(structural(format!(
            "bit string {s:?} has length {}, expected {n}",
            s.len()
        )));
    }
    s.chars().try_fold(0u64, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(structural(format!("bit string {s:?} contains {c:?}"))),
    })
}

/// Render `value` as an `n`-character bit string, qubit 1 first.
pub fn format_bit_string(value: u64, n: usize) -> String {
    (0..n)
        .map(|i| {
            if (value >> (n - 1 - i)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Truth table of a Boolean function on `n` input bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<bool>,
}

impl BooleanFunction {
    /// Build a function from its truth table, `table[x] = f(x)`.
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self> {
        if n == 0 {
            return Err(structural("a Boolean function needs n >= 1 inputs"));
        }
        if n > MAX_TABLE_QUBITS {
            return Err(structural(format!(
                "n = {n} exceeds the truth-table limit {MAX_TABLE_QUBITS}"
            )));
        }
        if table.len() != 1 << n {
            return Err(structural(format!(
                "truth table has length {}, expected 2^{n} = {}",
                table.len(),
                1usize << n
            )));
        }
        Ok(Self { n, table })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        if n == 0 || n > MAX_TABLE_QUBITS {
            return Err(structural(format!("n = {n} is out of range")));
        }
        Self::new(n, vec![value; 1 << n])
    }

    /// Function equal to 1 exactly on `solutions` (Grover's marked inputs).
    pub fn from_solutions(n: usize, solutions: &[u64]) -> Result<Self> {
        let mut f = Self::constant(n, false)?;
        for &x in solutions {
            let slot = f
                .table
                .get_mut(x as usize)
                .ok_or_else(|| structural(format!("solution {x} is not below 2^{n}")))?;
            if *slot {
                return Err(structural(format!("solution {x} listed twice")));
            }
            *slot = true;
        }
        Ok(f)
    }

    /// Decode a table packed into a machine word, bit `x` holding `f(x)`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 6 {
            return Err(structural(format!(
                "a 64-bit mask holds at most 6 inputs, got {n}"
            )));
        }
        if n < 6 && mask >> (1u64 << n) != 0 {
            return Err(structural(format!("mask {mask:#x} has bits beyond 2^{n}")));
        }
        Self::new(n, (0..1usize << n).map(|x| (mask >> x) & 1 == 1).collect())
    }

    /// Parse the text encoding used on the command line.
    ///
    /// Accepts a `{0,1}` string of length `2^n` listing `f(0), f(1), ...`, or
    /// a hexadecimal value `0x...` whose bit `x` (counted from the least
    /// significant end) is `f(x)`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        if n == 0 || n > MAX_TABLE_QUBITS {
            return Err(structural(format!("n = {n} is out of range")));
        }
        let len = 1usize << n;
        if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
            if hex.is_empty() || hex.len() > len.div_ceil(4) {
                return Err(structural(format!(
                    "hex table {text:?} must have 1..={} digits for n = {n}",
                    len.div_ceil(4)
                )));
            }
            let mut table = vec![false; len];
            for (pos, c) in hex.chars().rev().enumerate() {
                let digit = c
                    .to_digit(16)
                    .ok_or_else(|| structural(format!("hex table {text:?} contains {c:?}")))?;
                for b in 0..4 {
                    if (digit >> b) & 1 == 1 {
                        let x = pos * 4 + b;
                        if x >= len {
                            return Err(structural(format!(
                                "hex table {text:?} sets bit {x} beyond 2^{n}"
                            )));
                        }
                        table[x] = true;
                    }
                }
            }
            return Self::new(n, table);
        }
        let table = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(structural(format!("truth table contains {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    /// Number of inputs with `f(x) = 1`; Grover's solution count `M`.
    pub fn weight(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    pub fn is_balanced(&self) -> bool {
        self.weight() == 1 << (self.n - 1)
    }

    pub fn is_constant(&self) -> bool {
        let w = self.weight();
        w == 0 || w == self.table.len()
    }

    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            table: self.table.iter().map(|b| !b).collect(),
        }
    }

    /// Table packed into a word, bit `x` holding `f(x)`. Only for `n <= 6`.
    pub fn to_mask(&self) -> Option<u64> {
        (self.n <= 6).then(|| {
            self.table
                .iter()
                .enumerate()
                .fold(0u64, |acc, (x, &b)| acc | ((b as u64) << x))
        })
    }

    pub fn to_bit_string(&self) -> String {
        self.table
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// The phase state `(-1)^f(x)` summed over the computational basis.
    pub fn to_state(&self) -> StateVector {
        StateVector::from_signs(self.n, self.table.iter().map(|&b| !b))
            .expect("table length is a power of two")
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(n={}, {})", self.n, self.to_bit_string())
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

pub fn make_function(n: usize, table: &str) -> Result<BooleanFunction> {
    BooleanFunction::parse(n, table)
}

pub fn state_from_function(f: &BooleanFunction) -> StateVector {
    f.to_state()
}

/// The Bernstein-Vazirani form `f_a(x) = a_1 x_1 ⊕ ... ⊕ a_n x_n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct LinearForm {
    n: usize,
    a: u64,
}

impl LinearForm {
    pub fn new(n: usize, a: u64) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(structural(format!(
                "linear form width {n} is not in 1..=63"
            )));
        }
        if a >> n != 0 {
            return Err(domain(format!("a = {a:#b} has more than {n} bits")));
        }
        Ok(Self { n, a })
    }

    pub fn parse(n: usize, bits: &str) -> Result<Self> {
        Self::new(n, parse_bit_string(bits, n)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.a
    }

    pub fn eval(&self, x: u64) -> bool {
        (self.a & x).count_ones() % 2 == 1
    }

    pub fn to_function(&self) -> Result<BooleanFunction> {
        if self.n > MAX_TABLE_QUBITS {
            return Err(structural(format!(
                "n = {} is too large for a truth table",
                self.n
            )));
        }
        BooleanFunction::new(self.n, (0..1u64 << self.n).map(|x| self.eval(x)).collect())
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bit_string(self.a, self.n))
    }
}

pub fn bv_function(a: &LinearForm) -> Result<BooleanFunction> {
    a.to_function()
}

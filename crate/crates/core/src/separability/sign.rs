//! Word-packed separability engine for sign vectors on up to six qubits.
//!
//! A sign vector `(-1)^f` splits across `T | R∖T` iff
//! `f(x) ⊕ f(x∧T) ⊕ f(x∧(R∖T)) ⊕ f(0) = 0` for every `x ⊆ R`: the ±1 rank-one
//! condition with the all-zero index as pivot. Every factor produced by the
//! peeling is again `f` restricted to a region mask, so the whole finest
//! partition is computed on one 64-bit truth table.

use crate::error::{structural, Result};

pub const MAX_SIGN_QUBITS: usize = 6;

/// Minus-sign table: bit `x` of `minus` is set iff amplitude `x` is `-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SignTable {
    n: usize,
    minus: u64,
}

impl SignTable {
    pub fn new(n: usize, minus: u64) -> Result<Self> {
        if n == 0 || n > MAX_SIGN_QUBITS {
            return Err(structural(format!(
                "sign tables hold 1..=6 qubits, got {n}"
            )));
        }
        if n < MAX_SIGN_QUBITS && minus >> (1u64 << n) != 0 {
            return Err(structural(format!(
                "minus mask {minus:#x} exceeds 2^{n} entries"
            )));
        }
        Ok(Self { n, minus })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn minus(&self) -> u64 {
        self.minus
    }

    pub fn minus_count(&self) -> u32 {
        self.minus.count_ones()
    }

    pub fn is_balanced(&self) -> bool {
        self.minus_count() == 1 << (self.n - 1)
    }

    fn bit(&self, x: u64) -> u64 {
        (self.minus >> x) & 1
    }

    fn qubit_bit(&self, q: usize) -> u64 {
        1 << (self.n - q)
    }

    /// Does the restriction of the table to `region` split off `part ⊂ region`?
    pub fn splits(&self, region: u64, part: u64) -> bool {
        let rest = region & !part;
        let f0 = self.bit(0);
        // Walk every submask of `region`.
        let mut x = 0u64;
        loop {
            if self.bit(x) ^ self.bit(x & part) ^ self.bit(x & rest) ^ f0 != 0 {
                return false;
            }
            x = x.wrapping_sub(region) & region;
            if x == 0 {
                return true;
            }
        }
    }

    /// Factorable across the cut separating the 1-based `qubits` from the rest.
    pub fn splits_at(&self, qubits: &[usize]) -> bool {
        let all = (1u64 << self.n) - 1;
        let part = qubits.iter().fold(0, |m, &q| m | self.qubit_bit(q));
        self.splits(all, part)
    }

    /// Finest partition as 1-based qubit lists, sorted by smallest qubit.
    pub fn finest_partition(&self) -> Vec<Vec<usize>> {
        let mut regions = Vec::with_capacity(self.n);
        self.peel(
            self.region_of(&(1..=self.n).collect::<Vec<_>>()),
            &mut regions,
        );
        let mut blocks: Vec<Vec<usize>> = regions.into_iter().map(|r| self.qubits_of(r)).collect();
        blocks.sort_by_key(|b| b[0]);
        blocks
    }

    /// Ascending block sizes of the finest partition.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.finest_partition().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    fn region_of(&self, qubits: &[usize]) -> u64 {
        qubits.iter().fold(0, |m, &q| m | self.qubit_bit(q))
    }

    fn qubits_of(&self, region: u64) -> Vec<usize> {
        (1..=self.n)
            .filter(|&q| region & self.qubit_bit(q) != 0)
            .collect()
    }

    fn peel(&self, mut region: u64, out: &mut Vec<u64>) {
        let mut t = 1;
        loop {
            let qubits = self.qubits_of(region);
            let r = qubits.len();
            let mut found = None;
            while found.is_none() && t <= r / 2 {
                found = super::Combinations::new(r, t)
                    .map(|local| local.iter().fold(0, |m, &i| m | self.qubit_bit(qubits[i])))
                    .find(|&part| self.splits(region, part));
                if found.is_none() {
                    t += 1;
                }
            }
            match found {
                None => {
                    out.push(region);
                    return;
                }
                Some(part) => {
                    if part.count_ones() > 1 {
                        self.peel(part, out);
                    } else {
                        out.push(part);
                    }
                    region &= !part;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_examples() {
        // (+,-,-,+) = (+,-)⊗(+,-)
        let t = SignTable::new(2, 0b0110).unwrap();
        assert_eq!(t.finest_partition(), vec![vec![1], vec![2]]);
        // single minus sign
        let t = SignTable::new(2, 0b1000).unwrap();
        assert_eq!(t.finest_partition(), vec![vec![1, 2]]);
        assert!(!t.splits_at(&[1]));
    }

    #[test]
    fn region_restrictions_compose() {
        // (+,-) on qubit 2 times a one-minus state on qubits 1,3.
        let mut minus = 0u64;
        for x in 0..8u64 {
            let (q1, q2, q3) = ((x >> 2) & 1, (x >> 1) & 1, x & 1);
            if q2 ^ (q1 & q3) == 1 {
                minus |= 1 << x;
            }
        }
        let t = SignTable::new(3, minus).unwrap();
        assert_eq!(t.finest_partition(), vec![vec![1, 3], vec![2]]);
        assert_eq!(t.block_sizes(), vec![1, 2]);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(SignTable::new(0, 0).is_err());
        assert!(SignTable::new(7, 0).is_err());
        assert!(SignTable::new(2, 1 << 4).is_err());
        assert!(SignTable::new(6, u64::MAX).is_ok());
    }
}

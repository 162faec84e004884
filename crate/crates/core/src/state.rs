//! Real integer-amplitude states of `m` qubits.
//!
//! The physical state is `amps[x] / sqrt(Σ amps[y]^2)`; the normalization is
//! never materialized. Basis index `x` has qubit 1 as its most significant
//! bit, and `a ⊗ b` places the qubits of `a` first.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{structural, Result};

/// Largest qubit count for which a dense amplitude vector is built.
pub const MAX_STATE_QUBITS: usize = 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateVector {
    m: usize,
    amps: Vec<BigInt>,
}

impl StateVector {
    pub fn new(m: usize, amps: Vec<BigInt>) -> Result<Self> {
        if m == 0 {
            return Err(structural("a state needs at least one qubit"));
        }
        if m > MAX_STATE_QUBITS {
            return Err(structural(format!(
                "{m} qubits exceeds the dense-state limit {MAX_STATE_QUBITS}"
            )));
        }
        if amps.len() != 1 << m {
            return Err(structural(format!(
                "amplitude vector has length {}, expected 2^{m} = {}",
                amps.len(),
                1usize << m
            )));
        }
        if amps.iter().all(Zero::is_zero) {
            return Err(structural("the zero vector is not a state"));
        }
        Ok(Self { m, amps })
    }

    pub fn from_i64s(m: usize, amps: &[i64]) -> Result<Self> {
        Self::new(m, amps.iter().map(|&a| BigInt::from(a)).collect())
    }

    /// A real equally weighted state; `true` is `+1`, `false` is `-1`.
    pub fn from_signs(m: usize, signs: impl IntoIterator<Item = bool>) -> Result<Self> {
        Self::new(
            m,
            signs
                .into_iter()
                .map(|plus| if plus { BigInt::one() } else { -BigInt::one() })
                .collect(),
        )
    }

    /// Sparse constructor: `entries` are `(index, amplitude)` pairs, the rest zero.
    pub fn from_sparse(
        m: usize,
        entries: impl IntoIterator<Item = (usize, BigInt)>,
    ) -> Result<Self> {
        if m == 0 || m > MAX_STATE_QUBITS {
            return Err(structural(format!("{m} qubits is out of range")));
        }
        let mut amps = vec![BigInt::zero(); 1 << m];
        for (x, a) in entries {
            let len = amps.len();
            *amps
                .get_mut(x)
                .ok_or_else(|| structural(format!("index {x} is not below {len}")))? += a;
        }
        Self::new(m, amps)
    }

    /// `|0...0> + ... + |1...1>`, all amplitudes `+1`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m > MAX_STATE_QUBITS {
            return Err(structural(format!("{m} qubits is out of range")));
        }
        Self::from_signs(m, std::iter::repeat_n(true, 1 << m))
    }

    /// Computational basis state `|x>`.
    pub fn basis(m: usize, x: usize) -> Result<Self> {
        Self::from_sparse(m, [(x, BigInt::one())])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amps(&self) -> &[BigInt] {
        &self.amps
    }

    pub fn amp(&self, x: usize) -> &BigInt {
        &self.amps[x]
    }

    pub fn into_amps(self) -> Vec<BigInt> {
        self.amps
    }

    /// Nonzero entries in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.amps.iter().enumerate().filter(|(_, a)| !a.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.nonzero().count()
    }

    /// True when every amplitude is `+1` or `-1`.
    pub fn is_equally_weighted(&self) -> bool {
        self.amps.iter().all(|a| a.magnitude().is_one())
    }

    pub fn plus_count(&self) -> usize {
        self.amps.iter().filter(|a| a.is_one()).count()
    }

    pub fn minus_count(&self) -> usize {
        self.amps.iter().filter(|a| (-*a).is_one()).count()
    }

    /// Minus-sign positions packed into a word (`bit x` set iff `amps[x] = -1`).
    /// `None` unless the state is equally weighted on at most six qubits.
    pub fn minus_mask(&self) -> Option<u64> {
        if self.m > 6 || !self.is_equally_weighted() {
            return None;
        }
        Some(
            self.amps
                .iter()
                .enumerate()
                .filter(|(_, a)| a.is_negative())
                .fold(0u64, |acc, (x, _)| acc | 1 << x),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            m: self.m,
            amps: self.amps.iter().map(|a| -a).collect(),
        }
    }

    /// `(a ⊗ b)[x·2^m_b + y] = a[x]·b[y]`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let m = self.m + other.m;
        if m > MAX_STATE_QUBITS {
            return Err(structural(format!(
                "tensor product on {m} qubits exceeds {MAX_STATE_QUBITS}"
            )));
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self { m, amps })
    }

    fn bit_of(&self, qubit: usize) -> Result<usize> {
        if qubit == 0 || qubit > self.m {
            return Err(structural(format!(
                "qubit {qubit} is not in 1..={}",
                self.m
            )));
        }
        Ok(1 << (self.m - qubit))
    }

    /// Apply σ_x to `qubit` (1-based): permutes amplitudes by flipping one index bit.
    pub fn apply_local_x(&self, qubit: usize) -> Result<Self> {
        let bit = self.bit_of(qubit)?;
        let amps = (0..self.amps.len())
            .map(|x| self.amps[x ^ bit].clone())
            .collect();
        Ok(Self { m: self.m, amps })
    }

    /// Unnormalized Hadamard on `qubit`: `|0> -> |0>+|1>`, `|1> -> |0>-|1>`.
    pub fn apply_hadamard(&self, qubit: usize) -> Result<Self> {
        let bit = self.bit_of(qubit)?;
        let mut amps = self.amps.clone();
        for x in (0..amps.len()).filter(|x| x & bit == 0) {
            let lo = &self.amps[x];
            let hi = &self.amps[x | bit];
            amps[x] = lo + hi;
            amps[x | bit] = lo - hi;
        }
        Ok(Self { m: self.m, amps })
    }

    /// Greatest common divisor of all amplitudes (always positive).
    pub fn content(&self) -> BigInt {
        content(&self.amps)
    }

    /// Content-reduced representative with the first nonzero amplitude positive.
    /// Two states are equal up to a global real scale iff their canonical forms agree.
    pub fn canonical(&self) -> Self {
        Self {
            m: self.m,
            amps: reduce(&self.amps, true),
        }
    }

    /// True iff `self = c · other` for some positive rational `c`.
    pub fn is_positive_multiple_of(&self, other: &Self) -> bool {
        self.m == other.m && reduce(&self.amps, false) == reduce(&other.amps, false)
    }
}

pub(crate) fn content(amps: &[BigInt]) -> BigInt {
    amps.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
}

/// Divide by the content; optionally flip the overall sign so the leading
/// nonzero entry is positive.
pub(crate) fn reduce(amps: &[BigInt], leading_positive: bool) -> Vec<BigInt> {
    let mut g = content(amps);
    if leading_positive {
        if let Some(first) = amps.iter().find(|a| !a.is_zero()) {
            if first.sign() == Sign::Minus {
                g = -g;
            }
        }
    }
    amps.iter().map(|a| a / &g).collect()
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector(m={}, [", self.m)?;
        for (i, a) in self.amps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("])")
    }
}

pub fn uniform_state(n: usize) -> Result<StateVector> {
    StateVector::uniform(n)
}

pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    a.tensor(b)
}

pub fn apply_local_x(s: &StateVector, qubit: usize) -> Result<StateVector> {
    s.apply_local_x(qubit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{make_function, BooleanFunction};
    use proptest::prelude::*;

    fn sv(m: usize, a: &[i64]) -> StateVector {
        StateVector::from_i64s(m, a).unwrap()
    }

    #[test]
    fn state_from_function_examples() {
        let zero = make_function(2, "0000").unwrap().to_state();
        assert_eq!(zero, StateVector::uniform(2).unwrap());
        assert_eq!(
            make_function(2, "0110").unwrap().to_state(),
            sv(2, &[1, -1, -1, 1])
        );
        assert_eq!(
            make_function(2, "0001").unwrap().to_state(),
            sv(2, &[1, 1, 1, -1])
        );
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(StateVector::uniform(1).unwrap(), sv(1, &[1, 1]));
        assert_eq!(StateVector::uniform(3).unwrap().plus_count(), 8);
        assert!(matches!(
            StateVector::uniform(0),
            Err(crate::Error::Structural(_))
        ));
        for n in 1..=6 {
            let c = BooleanFunction::constant(n, false).unwrap();
            assert_eq!(c.to_state(), StateVector::uniform(n).unwrap());
        }
    }

    #[test]
    fn rejects_malformed_vectors() {
        assert!(StateVector::from_i64s(2, &[1, 1, 1]).is_err());
        assert!(StateVector::from_i64s(1, &[0, 0]).is_err());
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(
            sv(1, &[1, 1]).tensor(&sv(1, &[1, -1])).unwrap(),
            sv(2, &[1, -1, 1, -1])
        );
        assert_eq!(
            sv(1, &[1, -1]).tensor(&sv(1, &[1, -1])).unwrap(),
            sv(2, &[1, -1, -1, 1])
        );
        let u = StateVector::uniform(1)
            .unwrap()
            .tensor(&StateVector::uniform(2).unwrap());
        assert_eq!(u.unwrap(), StateVector::uniform(3).unwrap());
    }

    #[test]
    fn local_x_examples() {
        let bell = sv(2, &[1, 0, 0, 1]);
        assert_eq!(bell.apply_local_x(1).unwrap(), sv(2, &[0, 1, 1, 0]));
        assert!(bell.apply_local_x(0).is_err());
        assert!(bell.apply_local_x(3).is_err());
    }

    #[test]
    fn local_x_reaches_canonical_simon_form() {
        // |x̄> + |x̄ ⊕ r> with x̄ = 101, r = 011.
        let (xbar, r) = (0b101usize, 0b011usize);
        let s = StateVector::from_sparse(3, [(xbar, 1.into()), (xbar ^ r, 1.into())]).unwrap();
        let mut t = s;
        for q in 1..=3 {
            if (xbar >> (3 - q)) & 1 == 1 {
                t = t.apply_local_x(q).unwrap();
            }
        }
        assert_eq!(
            t,
            StateVector::from_sparse(3, [(0, 1.into()), (r, 1.into())]).unwrap()
        );
    }

    #[test]
    fn hadamard_layer_on_zero_gives_uniform() {
        let mut s = StateVector::basis(3, 0).unwrap();
        for q in 1..=3 {
            s = s.apply_hadamard(q).unwrap();
        }
        assert_eq!(s, StateVector::uniform(3).unwrap());
        let minus = StateVector::basis(1, 1).unwrap().apply_hadamard(1).unwrap();
        assert_eq!(minus, sv(1, &[1, -1]));
    }

    #[test]
    fn sign_counts_track_weight() {
        for n in 1..=3usize {
            for mask in 0..1u64 << (1 << n) {
                let f = BooleanFunction::from_mask(n, mask).unwrap();
                let s = f.to_state();
                assert_eq!(s.minus_count(), f.weight());
                assert_eq!(s.plus_count(), (1 << n) - f.weight());
                assert_eq!(f.complement().to_state(), s.neg());
                assert_eq!(s.minus_mask(), Some(mask));
            }
        }
        for mask in 0..1u64 << 16 {
            let f = BooleanFunction::from_mask(4, mask).unwrap();
            let s = f.to_state();
            assert_eq!(f.is_balanced(), s.plus_count() == s.minus_count());
        }
    }

    #[test]
    fn canonical_form_fixes_leading_sign() {
        let s = sv(2, &[0, -4, 2, 6]);
        assert_eq!(s.canonical(), sv(2, &[0, 2, -1, -3]));
        assert!(s.is_positive_multiple_of(&sv(2, &[0, -2, 1, 3])));
        assert!(!s.is_positive_multiple_of(&sv(2, &[0, 2, -1, -3])));
    }

    fn small_vec(len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-3i64..=3, len).prop_filter("nonzero", |v| v.iter().any(|&a| a != 0))
    }

    fn state(m: usize) -> impl Strategy<Value = StateVector> {
        small_vec(1 << m).prop_map(move |v| StateVector::from_i64s(m, &v).unwrap())
    }

    fn sized_states() -> impl Strategy<Value = (StateVector, StateVector, StateVector)> {
        (1usize..=2, 1usize..=2, 1usize..=2)
            .prop_flat_map(|(a, b, c)| (state(a), state(b), state(c)))
    }

    proptest! {
        #[test]
        fn complement_negates_state(n in 4usize..=8, seed in any::<u64>()) {
            let table = (0..1usize << n).map(|x| (seed.rotate_left(x as u32 % 64) ^ (x as u64 * 0x9E37)) & 1 == 1).collect();
            let f = BooleanFunction::new(n, table).unwrap();
            prop_assert_eq!(f.complement().to_state(), f.to_state().neg());
        }

        #[test]
        fn tensor_is_associative((a, b, c) in sized_states()) {
            let left = a.tensor(&b).unwrap().tensor(&c).unwrap();
            let right = a.tensor(&b.tensor(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn local_x_is_an_involution_preserving_multiset(s in (1usize..=4).prop_flat_map(state), q in 1usize..=4) {
            let q = (q - 1) % s.m() + 1;
            let t = s.apply_local_x(q).unwrap();
            prop_assert_eq!(t.apply_local_x(q).unwrap(), s.clone());
            let mut a = s.amps().to_vec();
            let mut b = t.amps().to_vec();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn local_x_commutes_with_tensor((a, b, _c) in sized_states(), q in 1usize..=2) {
            let q = (q - 1) % a.m() + 1;
            let lhs = a.tensor(&b).unwrap().apply_local_x(q).unwrap();
            let rhs = a.apply_local_x(q).unwrap().tensor(&b).unwrap();
            prop_assert_eq!(lhs, rhs);
            let qb = (q - 1) % b.m() + 1;
            let lhs = a.tensor(&b).unwrap().apply_local_x(a.m() + qb).unwrap();
            let rhs = a.tensor(&b.apply_local_x(qb).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

//! Closed-form counts, all in exact big-integer arithmetic.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::BigCount;
use crate::error::{domain, Error, Result};

/// Largest `n` accepted by the formulas that involve `B(2^n, ·)`.
pub const MAX_FORMULA_N: usize = 20;

fn check_formula_n(n: usize) -> Result<()> {
    if n > MAX_FORMULA_N {
        return Err(Error::ResourceLimit {
            what: "qubits for exact census formulas".into(),
            requested: n as u64,
            cap: MAX_FORMULA_N as u64,
        });
    }
    Ok(())
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// Exact binomial coefficient `B(a, b)`.
pub fn binom(a: i64, b: i64) -> Result<BigCount> {
    if a < 0 || b < 0 || b > a {
        return Err(domain(format!("B({a}, {b}) needs 0 <= b <= a")));
    }
    Ok(BigCount(binom_u(a as u64, b as u64)))
}

pub(crate) fn binom_u(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    if b <= 256 {
        // B(a, i) = B(a, i-1)·(a-i+1)/i stays integral at every step.
        (1..=b).fold(BigUint::one(), |acc, i| acc * (a - b + i) / i)
    } else {
        binom_by_primes(a, b)
    }
}

/// `B(a, b) = Π p^e` with Legendre's exponent `e = Σ_j ⌊a/p^j⌋ - ⌊b/p^j⌋ - ⌊(a-b)/p^j⌋`,
/// multiplied with a balanced product tree.
fn binom_by_primes(a: u64, b: u64) -> BigUint {
    let c = a - b;
    let mut factors = Vec::new();
    for p in primes_up_to(a) {
        let mut e = 0;
        let mut pk = p;
        while pk <= a {
            e += a / pk - b / pk - c / pk;
            pk = match pk.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
        if e > 0 {
            factors.push(BigUint::from(p).pow(e as u32));
        }
    }
    product_tree(factors)
}

fn product_tree(mut v: Vec<BigUint>) -> BigUint {
    if v.is_empty() {
        return BigUint::one();
    }
    while v.len() > 1 {
        v = v
            .chunks(2)
            .map(|c| {
                if c.len() == 2 {
                    &c[0] * &c[1]
                } else {
                    c[0].clone()
                }
            })
            .collect();
    }
    v.pop().unwrap()
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// `B(2^k, 2^(k-1))`: balanced functions on `k` bits.
pub(crate) fn balanced_u(k: usize) -> BigUint {
    binom_u(1 << k, 1 << (k - 1))
}

/// `N_bal = B(2^n, 2^(n-1))`.
pub fn count_balanced(n: usize) -> Result<BigCount> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    check_formula_n(n)?;
    Ok(BigCount(balanced_u(n)))
}

/// `N_bal,sep = 2(2^n - 1)`: balanced functions with fully separable states.
pub fn count_balanced_fully_separable(n: usize) -> Result<BigCount> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    if n > 62 {
        return Err(domain(format!("n = {n} is too large")));
    }
    Ok(BigCount(BigUint::from(2 * ((1u64 << n) - 1))))
}

/// `2(2^(n-2) - 1)·8·B(n,2)`: (partition, factor) pairs of the shape
/// "fully separable on n-2 qubits ⊗ entangled pair". Upper-bounds the number
/// of distinct balanced functions with that block structure.
pub fn count_pairblock_factorizations(n: usize) -> Result<BigCount> {
    if n < 3 {
        return Err(domain(format!(
            "the pair-block count needs n >= 3, got {n}"
        )));
    }
    if n > 62 {
        return Err(domain(format!("n = {n} is too large")));
    }
    let sep = 2 * ((1u64 << (n - 2)) - 1);
    Ok(BigCount(BigUint::from(sep) * 8u32 * binom_u(n as u64, 2)))
}

/// `N_bisep(k)`: sign vectors on a fixed `k | n-k` cut whose factors include
/// a balanced one.
pub fn count_bisep_fixed_partition(n: usize, k: usize) -> Result<BigCount> {
    if k == 0 || k >= n {
        return Err(domain(format!(
            "cut size k = {k} must lie in 1..n with n = {n}"
        )));
    }
    check_formula_n(n)?;
    Ok(BigCount(n_bisep(n, k)))
}

fn n_bisep(n: usize, k: usize) -> BigUint {
    let (a, b) = (balanced_u(k), balanced_u(n - k));
    &a * pow2(1 << (n - k)) + &b * pow2(1 << k) - a * b
}

/// Both closed forms of the biseparable balanced count; each is a count of
/// (cut, factorization) pairs and therefore an upper bound on distinct states.
///
/// The half-weighted terms are accumulated in doubled units and checked to be
/// even before halving.
pub fn count_dj_bisep_upper(n: usize) -> Result<(BigCount, BigCount)> {
    if n < 2 {
        return Err(domain(format!("biseparable counts need n >= 2, got {n}")));
    }
    check_formula_n(n)?;
    let nn = n as u64;

    let mut doubled_a = BigUint::zero();
    for k in 1..=(n - 1) / 2 {
        doubled_a += binom_u(nn, k as u64) * n_bisep(n, k) * 2u32;
    }
    if n.is_multiple_of(2) {
        doubled_a += binom_u(nn, nn / 2) * n_bisep(n, n / 2);
    }

    let mut doubled_b = BigUint::zero();
    for k in 1..n {
        let a = balanced_u(k);
        let b = balanced_u(n - k);
        let term = &a * pow2(1 << (n - k)) * 2u32 - a * b;
        doubled_b += binom_u(nn, k as u64) * term;
    }

    let halve = |d: BigUint, which: &str| {
        if d.is_odd() {
            Err(Error::InvariantViolation(format!(
                "doubled form {which} is odd at n = {n}"
            )))
        } else {
            Ok(BigCount(d >> 1))
        }
    };
    Ok((halve(doubled_a, "a")?, halve(doubled_b, "b")?))
}

/// Grover-state counts for `M` marked inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroverCounts {
    /// `N_M = B(2^n, M)`.
    pub total: BigCount,
    /// `n·B(2^(n-1), M/2)` for even `M`, zero for odd `M`.
    pub bisep_formula: BigCount,
    /// For `M = 2^k`: `2^(n-k)·B(n,k)` states of the `(k+1)`-separable form.
    pub jsep_form_count: Option<BigCount>,
    /// For odd `M` every state is fully entangled: equals `total` (`2^n` at `M = 1`).
    pub fully_entangled_formula: Option<BigCount>,
    /// `M >= 2^(n/2)`: outside the regime where the shape arguments apply.
    pub outside_regime: bool,
}

pub fn count_grover(n: usize, m: u64) -> Result<GroverCounts> {
    if n < 2 {
        return Err(domain(format!("Grover counts need n >= 2, got {n}")));
    }
    check_formula_n(n)?;
    let size = 1u64 << n;
    if m == 0 || m >= size {
        return Err(domain(format!("M = {m} must satisfy 0 < M < 2^{n}")));
    }
    let total = BigCount(binom_u(size, m));
    let bisep_formula = if m.is_multiple_of(2) {
        BigCount(BigUint::from(n) * binom_u(size / 2, m / 2))
    } else {
        BigCount(BigUint::zero())
    };
    let jsep_form_count = m.is_power_of_two().then(|| {
        let k = m.trailing_zeros() as usize;
        BigCount(pow2(n - k) * binom_u(n as u64, k as u64))
    });
    let fully_entangled_formula = (m % 2 == 1).then(|| total.clone());
    Ok(GroverCounts {
        total,
        bisep_formula,
        jsep_form_count,
        fully_entangled_formula,
        outside_regime: u128::from(m) * u128::from(m) >= u128::from(size),
    })
}

/// Simon weight class: periods of weight `k` give states in `S_(n-k+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimonWeightClass {
    pub weight: usize,
    pub count: BigCount,
    pub q: usize,
}

pub fn count_simon(n: usize) -> Result<Vec<SimonWeightClass>> {
    if n < 2 {
        return Err(domain(format!("Simon counts need n >= 2, got {n}")));
    }
    Ok((1..=n)
        .map(|k| SimonWeightClass {
            weight: k,
            count: BigCount(binom_u(n as u64, k as u64)),
            q: n - k + 1,
        })
        .collect())
}

/// The most populated weight class, `⌊n/2⌋`.
pub fn simon_modal_weight(n: usize) -> usize {
    n / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigCount {
        BigCount(BigUint::from(v))
    }

    /// Row `a` of Pascal's triangle by repeated addition.
    fn pascal_row(a: usize) -> Vec<BigUint> {
        let mut row = vec![BigUint::one()];
        for _ in 0..a {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(8, 4).unwrap(), big(70));
        assert_eq!(binom(16, 8).unwrap(), big(12870));
        assert_eq!(binom(5, 0).unwrap(), big(1));
        assert!(binom(3, 4).is_err());
        assert!(binom(-1, 0).is_err());
        assert!(binom(3, -1).is_err());
    }

    #[test]
    fn binom_matches_pascal_triangle() {
        let row = pascal_row(1024);
        let central = binom(1024, 512).unwrap();
        assert_eq!(central.0, row[512]);
        assert_eq!(central.to_string().len(), 307);
        for b in [0, 1, 17, 255, 256, 257, 300, 700, 1023, 1024] {
            assert_eq!(binom(1024, b).unwrap().0, row[b as usize], "b = {b}");
        }
    }

    #[test]
    fn balanced_counts() {
        assert_eq!(count_balanced(2).unwrap(), big(6));
        assert_eq!(count_balanced(3).unwrap(), big(70));
        assert_eq!(count_balanced(4).unwrap(), big(12870));
        assert_eq!(count_balanced_fully_separable(2).unwrap(), big(6));
        assert_eq!(count_balanced_fully_separable(3).unwrap(), big(14));
        assert_eq!(count_balanced_fully_separable(4).unwrap(), big(30));
        assert!(count_balanced(0).is_err());
        assert!(matches!(
            count_balanced(21),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn pairblock_counts() {
        assert_eq!(count_pairblock_factorizations(3).unwrap(), big(48));
        assert_eq!(count_pairblock_factorizations(4).unwrap(), big(288));
        assert!(count_pairblock_factorizations(2).is_err());
    }

    #[test]
    fn fixed_cut_counts() {
        assert_eq!(count_bisep_fixed_partition(3, 1).unwrap(), big(44));
        assert_eq!(count_bisep_fixed_partition(2, 1).unwrap(), big(12));
        assert!(count_bisep_fixed_partition(3, 0).is_err());
        assert!(count_bisep_fixed_partition(3, 3).is_err());
    }

    #[test]
    fn dj_bisep_forms() {
        assert_eq!(count_dj_bisep_upper(2).unwrap(), (big(12), big(12)));
        assert_eq!(count_dj_bisep_upper(3).unwrap(), (big(132), big(132)));
        for n in 2..=12 {
            let (a, b) = count_dj_bisep_upper(n).unwrap();
            assert_eq!(a, b, "n = {n}");
        }
        assert!(count_dj_bisep_upper(1).is_err());
    }

    #[test]
    fn grover_counts() {
        let c = count_grover(3, 1).unwrap();
        assert_eq!(c.total, big(8));
        assert_eq!(c.fully_entangled_formula, Some(big(8)));
        assert_eq!(c.jsep_form_count, Some(big(8)));
        let c = count_grover(3, 2).unwrap();
        assert_eq!((c.total, c.bisep_formula), (big(28), big(12)));
        assert!(!c.outside_regime);
        let c = count_grover(4, 4).unwrap();
        assert_eq!(c.jsep_form_count, Some(big(24)));
        assert_eq!(c.bisep_formula, big(112));
        assert!(c.outside_regime);
        let c = count_grover(4, 3).unwrap();
        assert_eq!(c.bisep_formula, big(0));
        assert_eq!(c.fully_entangled_formula, Some(big(560)));
        assert!(count_grover(3, 0).is_err());
        assert!(count_grover(3, 8).is_err());
        assert!(count_grover(2, 2).unwrap().outside_regime);
    }

    #[test]
    fn simon_counts() {
        let rows = count_simon(3).unwrap();
        let flat: Vec<_> = rows
            .iter()
            .map(|c| (c.weight, c.count.clone(), c.q))
            .collect();
        assert_eq!(flat, vec![(1, big(3), 3), (2, big(3), 2), (3, big(1), 1)]);
        for n in 2..=10 {
            let total: BigUint = count_simon(n).unwrap().into_iter().map(|c| c.count.0).sum();
            assert_eq!(total, BigUint::from((1u64 << n) - 1));
            let rows = count_simon(n).unwrap();
            let modal = simon_modal_weight(n);
            assert!(rows.iter().all(|c| c.count <= rows[modal - 1].count));
        }
    }
}

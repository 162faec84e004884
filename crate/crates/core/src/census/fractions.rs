//! Fractions of states in a class, carried as base-2 logarithms so that
//! doubly exponential denominators stay representable.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::formulas::{balanced_u, binom_u, MAX_FORMULA_N};
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogFraction {
    pub log2_numerator: f64,
    pub log2_denominator: f64,
    pub log2_ratio: f64,
}

impl LogFraction {
    pub fn new(log2_numerator: f64, log2_denominator: f64) -> Self {
        Self {
            log2_numerator,
            log2_denominator,
            log2_ratio: log2_numerator - log2_denominator,
        }
    }

    pub fn of_counts(numerator: &BigUint, denominator: &BigUint) -> Self {
        Self::new(log2_big(numerator), log2_big(denominator))
    }

    pub fn ratio(&self) -> f64 {
        self.log2_ratio.exp2()
    }
}

/// `log2(v)` of an arbitrarily large integer, from its top 64 bits.
pub fn log2_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v
            .to_u64()
            .expect("fits in 64 bits")
            .to_f64()
            .unwrap()
            .log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("64 bits after shift");
    (top as f64).log2() + shift as f64
}

/// Exact and asymptotic fractions for the Deutsch-Jozsa balanced states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DjFractions {
    /// `2(2^n - 1) / B(2^n, 2^(n-1))`, i.e. `2(2^n-1)(2^(n-1)!)^2 / 2^n!`.
    pub sep_exact: LogFraction,
    /// Stirling form `√(2π)(2^n - 1)2^(n/2) / 2^(2^n)`.
    pub sep_asymptotic: LogFraction,
    /// Limit bound `√(2π)·n²·2^(n/2) / 2^(2^(n-1))` on the biseparable fraction.
    pub bisep_bound: LogFraction,
}

fn half_log2_two_pi() -> f64 {
    0.5 * std::f64::consts::TAU.log2()
}

pub fn dj_fractions(n: usize) -> Result<DjFractions> {
    if n < 2 {
        return Err(domain(format!("fractions need n >= 2, got {n}")));
    }
    if n > MAX_FORMULA_N {
        return Err(Error::ResourceLimit {
            what: "qubits for exact fractions".into(),
            requested: n as u64,
            cap: MAX_FORMULA_N as u64,
        });
    }
    let size = (1u64 << n) as f64;
    let sep_exact = LogFraction::of_counts(&BigUint::from(2 * ((1u64 << n) - 1)), &balanced_u(n));
    let sep_asymptotic = LogFraction::new(
        half_log2_two_pi() + (size - 1.0).log2() + n as f64 / 2.0,
        size,
    );
    let bisep_bound = LogFraction::new(
        half_log2_two_pi() + 2.0 * (n as f64).log2() + n as f64 / 2.0,
        size / 2.0,
    );
    Ok(DjFractions {
        sep_exact,
        sep_asymptotic,
        bisep_bound,
    })
}

/// `n·B(2^(n-1), M/2) / B(2^n, M)`: share of biseparable Grover states
/// counted by the closed form, for even `M`.
pub fn grover_bisep_fraction(n: usize, m: u64) -> Result<LogFraction> {
    if m == 0 || m % 2 == 1 {
        return Err(domain(format!(
            "the biseparable fraction needs even M > 0, got {m}"
        )));
    }
    if !(2..=MAX_FORMULA_N).contains(&n) || m >= 1 << n {
        return Err(domain(format!(
            "M = {m} must satisfy M < 2^n with 2 <= n <= {MAX_FORMULA_N}"
        )));
    }
    let size = 1u64 << n;
    let num = BigUint::from(n) * binom_u(size / 2, m / 2);
    Ok(LogFraction::of_counts(&num, &binom_u(size, m)))
}

/// One row of the asymptotics table; every column is `log2` of a fraction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsRow {
    pub n: usize,
    pub sep_exact: f64,
    pub sep_asymptotic: f64,
    pub bisep_bound: f64,
    pub grover_m2: Option<f64>,
    pub grover_m4: Option<f64>,
}

pub fn asymptotics_table(max_n: usize) -> Result<Vec<AsymptoticsRow>> {
    if max_n < 2 {
        return Err(domain(format!("max n must be at least 2, got {max_n}")));
    }
    (2..=max_n)
        .map(|n| {
            let f = dj_fractions(n)?;
            let grover = |m: u64| {
                (m < 1 << n)
                    .then(|| grover_bisep_fraction(n, m).map(|g| g.log2_ratio))
                    .transpose()
            };
            Ok(AsymptoticsRow {
                n,
                sep_exact: f.sep_exact.log2_ratio,
                sep_asymptotic: f.sep_asymptotic.log2_ratio,
                bisep_bound: f.bisep_bound.log2_ratio,
                grover_m2: grover(2)?,
                grover_m4: grover(4)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_of_large_integers() {
        assert_eq!(log2_big(&BigUint::from(1u32)), 0.0);
        assert_eq!(log2_big(&(BigUint::from(1u32) << 5000)), 5000.0);
        let v = BigUint::from(3u32) << 200;
        assert!((log2_big(&v) - (200.0 + 3f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn small_n_fractions() {
        assert_eq!(dj_fractions(2).unwrap().sep_exact.log2_ratio, 0.0);
        let f = dj_fractions(3).unwrap();
        assert!((f.sep_exact.log2_ratio - 0.2f64.log2()).abs() < 1e-12);
        assert!((f.sep_exact.log2_ratio + 2.321928).abs() < 1e-6);
        assert!(dj_fractions(1).is_err());
        assert!(matches!(dj_fractions(21), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn stirling_gap_is_small_from_n8() {
        for n in 8..=14 {
            let f = dj_fractions(n).unwrap();
            assert!(
                (f.sep_asymptotic.log2_ratio - f.sep_exact.log2_ratio).abs() < 0.02,
                "n = {n}"
            );
        }
    }

    #[test]
    fn asymptotics_rows() {
        let rows = asymptotics_table(14).unwrap();
        assert_eq!(rows.len(), 13);
        assert!((rows[1].sep_exact + 2.3219).abs() < 1e-4);
        assert!(rows.windows(2).all(|w| w[1].sep_exact < w[0].sep_exact));
        assert_eq!(rows[0].grover_m4, None);
        assert!(asymptotics_table(21).is_err());
    }

    #[test]
    fn grover_fraction_m2_closed_form() {
        // n·2^(n-1) / B(2^n, 2) = n / (2^n - 1)
        for n in 2..=20 {
            let f = grover_bisep_fraction(n, 2).unwrap();
            let expected = (n as f64 / ((1u64 << n) - 1) as f64).log2();
            assert!((f.log2_ratio - expected).abs() < 1e-9);
        }
        assert!(grover_bisep_fraction(3, 3).is_err());
    }
}

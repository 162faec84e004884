use num_traits::Signed;

use crate::error::{domain, Result};
use crate::function::LinearForm;
use crate::state::StateVector;

fn signs(s: &StateVector) -> Result<Vec<i64>> {
    if !s.is_equally_weighted() {
        return Err(domain(
            "Walsh-Hadamard fast path needs every amplitude to be +1 or -1",
        ));
    }
    Ok(s.amps()
        .iter()
        .map(|a| if a.is_negative() { -1 } else { 1 })
        .collect())
}

/// Walsh-Hadamard spectrum `ŝ[a] = Σ_x s[x]·(-1)^(a·x)` of a sign vector,
/// via the in-place butterfly.
pub fn wht(s: &StateVector) -> Result<Vec<i64>> {
    let mut v = signs(s)?;
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
    Ok(v)
}

/// `Some((a, positive))` iff `s = ±(-1)^(a·x)`, i.e. iff the sign vector is
/// fully separable. Decided by a single nonzero spectral coefficient.
pub fn full_separability_fast(s: &StateVector) -> Result<Option<(LinearForm, bool)>> {
    let spectrum = wht(s)?;
    let mut nonzero = spectrum.iter().enumerate().filter(|(_, &c)| c != 0);
    let (a, &c) = nonzero
        .next()
        .expect("Parseval forbids an all-zero spectrum");
    if nonzero.next().is_some() {
        return Ok(None);
    }
    debug_assert_eq!(c.unsigned_abs(), 1u64 << s.m());
    Ok(Some((LinearForm::new(s.m(), a as u64)?, c > 0)))
}

/// Tensor the factors together and report
/// `(product is balanced, some factor is balanced)`.
pub fn lemma_check(factors: &[StateVector]) -> Result<(bool, bool)> {
    if factors.len() < 2 {
        return Err(domain(
            "the balancedness lemma is about products of at least two factors",
        ));
    }
    if let Some(bad) = factors.iter().position(|f| !f.is_equally_weighted()) {
        return Err(domain(format!("factor {bad} is not equally weighted")));
    }
    let balanced = |s: &StateVector| s.plus_count() == s.minus_count();
    let mut product = factors[0].clone();
    for f in &factors[1..] {
        product = product.tensor(f)?;
    }
    Ok((balanced(&product), factors.iter().any(balanced)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{make_function, BooleanFunction};

    fn sv(m: usize, a: &[i64]) -> StateVector {
        StateVector::from_i64s(m, a).unwrap()
    }

    #[test]
    fn spectrum_of_linear_forms_is_a_spike() {
        for n in 1..=4 {
            for a in 0..1u64 << n {
                let s = LinearForm::new(n, a)
                    .unwrap()
                    .to_function()
                    .unwrap()
                    .to_state();
                let spec = wht(&s).unwrap();
                for (b, &c) in spec.iter().enumerate() {
                    assert_eq!(c, if b as u64 == a { 1 << n } else { 0 });
                }
            }
        }
        assert_eq!(
            wht(&StateVector::uniform(2).unwrap()).unwrap(),
            vec![4, 0, 0, 0]
        );
    }

    #[test]
    fn parseval_exhaustive() {
        for n in 1..=3usize {
            for mask in 0..1u64 << (1 << n) {
                let s = BooleanFunction::from_mask(n, mask).unwrap().to_state();
                let energy: i64 = wht(&s).unwrap().iter().map(|c| c * c).sum();
                assert_eq!(energy, 1 << (2 * n));
            }
        }
    }

    #[test]
    fn fast_test_examples() {
        let f = LinearForm::parse(3, "101").unwrap().to_function().unwrap();
        let (a, plus) = full_separability_fast(&f.to_state()).unwrap().unwrap();
        assert_eq!((a.to_string(), plus), ("101".to_string(), true));
        let (a, plus) = full_separability_fast(&f.complement().to_state())
            .unwrap()
            .unwrap();
        assert_eq!((a.to_string(), plus), ("101".to_string(), false));
        let m1 = make_function(2, "0001").unwrap().to_state();
        assert!(full_separability_fast(&m1).unwrap().is_none());
        assert!(matches!(wht(&sv(1, &[2, 1])), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(
            lemma_check(&[sv(1, &[1, -1]), sv(1, &[1, 1])]).unwrap(),
            (true, true)
        );
        assert_eq!(
            lemma_check(&[sv(1, &[1, 1]), sv(1, &[1, 1])]).unwrap(),
            (false, false)
        );
        assert!(lemma_check(&[sv(1, &[1, 1])]).is_err());
        assert!(lemma_check(&[sv(1, &[1, 1]), sv(1, &[0, 1])]).is_err());
    }

    #[test]
    fn lemma_one_by_two_exhaustive() {
        for a in 0..4u64 {
            for b in 0..16u64 {
                let fa = BooleanFunction::from_mask(1, a).unwrap().to_state();
                let fb = BooleanFunction::from_mask(2, b).unwrap().to_state();
                let (prod, any) = lemma_check(&[fa, fb]).unwrap();
                assert_eq!(prod, any);
            }
        }
    }
}

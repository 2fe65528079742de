//! Exact fitting of minimal linear recurrences to integer sequences and the
//! corresponding rational generating functions, all over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::field::{format_rational, Rationals};
use crate::linalg::rref;
use crate::Error;

/// A fitted constant-coefficient linear recurrence
/// `T_n = sum_i recurrence[i-1] * T_{n-i}` valid for all `n >= order`,
/// together with the generating function `numerator / denominator`
/// (coefficient vectors in ascending powers, denominator constant term 1).
#[derive(Clone, PartialEq, Debug)]
pub struct SeriesFit {
    pub recurrence: Vec<BigRational>,
    pub initial: Vec<BigRational>,
    pub numerator: Vec<BigRational>,
    pub denominator: Vec<BigRational>,
    pub verified_through: usize,
}

/// Solves `M x = b` exactly, returning any solution (free variables 0) or
/// `None` if inconsistent. `rows` are the rows of `M`; `b` same length.
fn solve(rows: &[Vec<BigRational>], b: &[BigRational], unknowns: usize) -> Option<Vec<BigRational>> {
    let augmented: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(b)
        .map(|(r, rhs)| {
            let mut row = r.clone();
            row.push(rhs.clone());
            row
        })
        .collect();
    let (echelon, pivots) = rref(&Rationals, augmented);
    if pivots.contains(&unknowns) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for (row, &col) in echelon.iter().zip(&pivots) {
        x[col] = row[unknowns].clone();
    }
    Some(x)
}

/// Fits the minimal-order recurrence (order <= `max_order`) that reproduces
/// every term of `terms`. Requires `terms.len() >= 2 * max_order + 2` so the
/// fit is over-determined; errors with [`Error::NoRecurrence`] if nothing fits.
pub fn fit_recurrence(terms: &[BigRational], max_order: usize) -> Result<SeriesFit, Error> {
    if terms.len() < 2 * max_order + 2 {
        return Err(Error::Invalid(format!(
            "need at least {} terms to fit order {}, got {}",
            2 * max_order + 2,
            max_order,
            terms.len()
        )));
    }
    'orders: for d in 0..=max_order {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for n in d..terms.len() {
            rows.push((1..=d).map(|i| terms[n - i].clone()).collect::<Vec<_>>());
            rhs.push(terms[n].clone());
        }
        let coeffs = match solve(&rows, &rhs, d) {
            Some(c) => c,
            None => continue 'orders,
        };
        // verify against every term (solve can return a least-structure
        // solution when the system is under-determined)
        for n in d..terms.len() {
            let predicted: BigRational = (1..=d).map(|i| &coeffs[i - 1] * &terms[n - i]).sum();
            if predicted != terms[n] {
                continue 'orders;
            }
        }
        let initial: Vec<BigRational> = terms[..d].to_vec();
        let mut denominator = vec![BigRational::one()];
        denominator.extend(coeffs.iter().map(|c| -c.clone()));
        // numerator = (series * denominator) truncated: degree < d exactly
        let mut numerator = Vec::new();
        for k in 0..d {
            let coeff: BigRational = (0..=k).map(|i| &denominator[i] * &terms[k - i]).sum();
            numerator.push(coeff);
        }
        while numerator.last().map_or(false, |c| c.is_zero()) {
            numerator.pop();
        }
        if numerator.is_empty() {
            numerator.push(BigRational::zero());
        }
        return Ok(SeriesFit {
            recurrence: coeffs,
            initial,
            numerator,
            denominator,
            verified_through: terms.len() - 1,
        });
    }
    Err(Error::NoRecurrence(max_order))
}

impl SeriesFit {
    pub fn order(&self) -> usize {
        self.recurrence.len()
    }

    /// Regenerates terms 0..=n_max from the initial segment and recurrence.
    pub fn terms(&self, n_max: usize) -> Vec<BigRational> {
        let d = self.order();
        let mut out: Vec<BigRational> = self.initial.iter().take(n_max + 1).cloned().collect();
        for n in out.len()..=n_max {
            let next: BigRational = (1..=d).map(|i| &self.recurrence[i - 1] * &out[n - i]).sum();
            out.push(next);
        }
        out
    }

    /// JSON report with every value rendered exactly (`p` or `p/q` strings).
    pub fn to_json(&self, counts: &[BigRational]) -> serde_json::Value {
        let fmt = |v: &[BigRational]| -> Vec<String> {
            v.iter().map(format_rational).collect()
        };
        json!({
            "counts": fmt(counts),
            "recurrence": fmt(&self.recurrence),
            "numerator": fmt(&self.numerator),
            "denominator": fmt(&self.denominator),
            "verified_through": self.verified_through,
        })
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    while out.len() > 1 && out.last().map_or(false, |c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Two fits describe the same power series iff the coefficients agree on a
/// horizon past both orders and the cross-multiplied rational functions are
/// identical polynomials. Both checks are performed.
pub fn series_equal(a: &SeriesFit, b: &SeriesFit, horizon: usize) -> bool {
    let h = horizon.max(a.order() + b.order() + 2);
    a.terms(h) == b.terms(h)
        && poly_mul(&a.numerator, &b.denominator) == poly_mul(&b.numerator, &a.denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn fits_frozen_counting_sequence() {
        let terms = rats(&[1, 6, 31, 157, 793, 4004, 20216]);
        let fit = fit_recurrence(&terms, 2).unwrap_err();
        assert!(matches!(fit, Error::NoRecurrence(2)));
        let fit = fit_recurrence(&terms[..7], 2);
        assert!(fit.is_err());
        let terms8 = {
            let mut t = terms.clone();
            // T_7 from the known recurrence 6*T_6 - 5*T_5 + T_4
            t.push(rat(6) * rat(20216) - rat(5) * rat(4004) + rat(793));
            t
        };
        let fit = fit_recurrence(&terms8, 3).unwrap();
        assert_eq!(fit.recurrence, rats(&[6, -5, 1]));
        assert_eq!(fit.denominator, rats(&[1, -6, 5, -1]));
        // trailing zero coefficients are trimmed: the numerator is exactly 1
        assert_eq!(fit.numerator, rats(&[1]));
        assert_eq!(fit.terms(6), terms);
    }

    #[test]
    fn geometric_series() {
        let terms: Vec<BigRational> = (0..6).map(|n| rat(3i64.pow(n))).collect();
        let fit = fit_recurrence(&terms, 2).unwrap();
        assert_eq!(fit.order(), 1);
        assert_eq!(fit.recurrence, rats(&[3]));
        assert_eq!(fit.denominator, rats(&[1, -3]));
        assert_eq!(fit.numerator, rats(&[1]));
    }

    #[test]
    fn constant_and_zero_series() {
        let fit = fit_recurrence(&rats(&[7, 7, 7, 7, 7, 7]), 2).unwrap();
        assert_eq!(fit.order(), 1);
        assert_eq!(fit.recurrence, rats(&[1]));
        let zero = fit_recurrence(&rats(&[0, 0, 0, 0]), 1).unwrap();
        assert_eq!(zero.order(), 0);
        assert_eq!(zero.numerator, rats(&[0]));
    }

    #[test]
    fn minimality_fibonacci() {
        let mut t = rats(&[0, 1]);
        for n in 2..12 {
            let next = &t[n - 1] + &t[n - 2];
            t.push(next);
        }
        let fit = fit_recurrence(&t, 4).unwrap();
        assert_eq!(fit.order(), 2);
        assert_eq!(fit.recurrence, rats(&[1, 1]));
        assert_eq!(fit.numerator, rats(&[0, 1]));
    }

    #[test]
    fn equality_is_representation_independent() {
        // same series fitted from different-length prefixes
        let mut t = rats(&[1, 6, 31, 157]);
        for n in 4..12 {
            let next = rat(6) * &t[n - 1] - rat(5) * &t[n - 2] + &t[n - 3];
            t.push(next);
        }
        let a = fit_recurrence(&t[..8], 3).unwrap();
        let b = fit_recurrence(&t, 3).unwrap();
        assert!(series_equal(&a, &b, 12));
        let c = fit_recurrence(&rats(&[1, 2, 4, 8, 16, 32]), 2).unwrap();
        assert!(!series_equal(&a, &c, 12));
    }

    #[test]
    fn json_rendering_is_exact() {
        let terms: Vec<BigRational> = (0..6)
            .map(|n| BigRational::new(BigInt::from(1), BigInt::from(2i64.pow(n))))
            .collect();
        let fit = fit_recurrence(&terms, 2).unwrap();
        let js = fit.to_json(&terms);
        assert_eq!(js["recurrence"][0], "1/2");
        assert_eq!(js["counts"][0], "1");
        assert_eq!(js["counts"][2], "1/4");
    }
}

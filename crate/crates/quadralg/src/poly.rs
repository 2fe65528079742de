//! Polynomials of the free associative algebra: finite linear combinations of
//! words with coefficients in a pluggable exact field.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::field::{Cyclotomic, Field, PrimeField, Rationals};
use crate::word::{GenSet, MonomialOrder, Word};
use crate::Error;

/// A polynomial. Invariant: no zero coefficients are stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F: Field> {
    field: F,
    terms: BTreeMap<Word, F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn zero(field: F) -> Self {
        Poly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: F, word: Word, coeff: F::Elem) -> Self {
        let mut p = Poly::zero(field);
        p.add_term(word, coeff);
        p
    }

    pub fn one(field: F) -> Self {
        let c = field.one();
        Poly::monomial(field, Word::empty(), c)
    }

    pub fn from_terms(field: F, terms: impl IntoIterator<Item = (Word, F::Elem)>) -> Self {
        let mut p = Poly::zero(field);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, word: &Word) -> F::Elem {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &F::Elem)> {
        self.terms.iter()
    }

    /// Adds `coeff * word` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, word: Word, coeff: F::Elem) {
        if self.field.is_zero(&coeff) {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &coeff);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn add(&self, other: &Poly<F>) -> Poly<F> {
        let mut p = self.clone();
        for (w, c) in &other.terms {
            p.add_term(w.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Poly<F> {
        let mut p = Poly::zero(self.field.clone());
        for (w, c) in &self.terms {
            p.terms.insert(w.clone(), self.field.neg(c));
        }
        p
    }

    pub fn sub(&self, other: &Poly<F>) -> Poly<F> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &F::Elem) -> Poly<F> {
        let mut p = Poly::zero(self.field.clone());
        if self.field.is_zero(s) {
            return p;
        }
        for (w, c) in &self.terms {
            p.add_term(w.clone(), self.field.mul(c, s));
        }
        p
    }

    /// Bilinear extension of word concatenation. Errors when the two
    /// polynomials live over different field configurations.
    pub fn mul(&self, other: &Poly<F>) -> Result<Poly<F>, Error> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut p = Poly::zero(self.field.clone());
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                p.add_term(w1.concat(w2), self.field.mul(c1, c2));
            }
        }
        Ok(p)
    }

    /// `left * self * right` for plain words.
    pub fn sandwich(&self, left: &Word, right: &Word) -> Poly<F> {
        let mut p = Poly::zero(self.field.clone());
        for (w, c) in &self.terms {
            p.terms.insert(left.concat(w).concat(right), c.clone());
        }
        p
    }

    /// The maximal word under `ord`, with its coefficient.
    pub fn leading_term(&self, ord: &MonomialOrder) -> Result<(Word, F::Elem), Error> {
        let mut best: Option<&Word> = None;
        for w in self.terms.keys() {
            best = Some(match best {
                None => w,
                Some(b) => {
                    if ord.compare(w, b) == std::cmp::Ordering::Greater {
                        w
                    } else {
                        b
                    }
                }
            });
        }
        let w = best.ok_or(Error::ZeroPolynomial)?;
        Ok((w.clone(), self.terms[w].clone()))
    }

    /// True when every term has the same tensor degree; returns that degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let d = it.next()?.len();
        it.all(|w| w.len() == d).then_some(d)
    }

    /// Terms sorted descending under `ord`, for display.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(Word, F::Elem)> {
        let mut v: Vec<(Word, F::Elem)> =
            self.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        v.sort_by(|a, b| ord.compare(&b.0, &a.0));
        v
    }

    pub fn format(&self, gens: &GenSet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let cs = self.field.format(c);
            if i > 0 {
                if let Some(rest) = cs.strip_prefix('-') {
                    out.push_str(" - ");
                    push_term(&mut out, rest, w, gens);
                    continue;
                }
                out.push_str(" + ");
            }
            push_term(&mut out, &cs, w, gens);
        }
        out
    }
}

fn push_term(out: &mut String, coeff: &str, word: &Word, gens: &GenSet) {
    if word.is_empty() {
        out.push_str(coeff);
    } else if coeff == "1" {
        out.push_str(&word.format(gens));
    } else {
        out.push_str(coeff);
        out.push('*');
        out.push_str(&word.format(gens));
    }
}

impl Poly<Rationals> {
    /// The embedding Q -> Q(w) applied coefficientwise.
    pub fn to_cyclotomic(&self) -> Poly<Cyclotomic> {
        let f = Cyclotomic;
        Poly::from_terms(f, self.iter().map(|(w, c)| (w.clone(), f.embed(c))))
    }

    /// The reduction Q -> F_p; fails when p divides some denominator.
    pub fn to_prime(&self, field: PrimeField) -> Result<Poly<PrimeField>, Error> {
        let mut p = Poly::zero(field);
        for (w, c) in self.iter() {
            p.add_term(w.clone(), field.from_rational(c)?);
        }
        Ok(p)
    }

    pub fn rational_coeff(&self, word: &Word) -> BigRational {
        self.coeff(word)
    }
}

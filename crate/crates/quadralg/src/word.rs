//! Words (monomials of the free algebra), generator sets, and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use crate::Error;

/// A generator of the free algebra, with a display label and a positive
/// integer weight (the filtration weight |A| of u(A)).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generator {
    pub id: u8,
    pub label: String,
    pub weight: u32,
}

/// The ordered generator set of an algebra. Ids are dense 0..k-1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenSet {
    gens: Vec<Generator>,
}

impl GenSet {
    pub fn new(labeled: Vec<(String, u32)>) -> Self {
        let gens = labeled
            .into_iter()
            .enumerate()
            .map(|(i, (label, weight))| {
                assert!(weight >= 1, "generator weight must be positive");
                Generator {
                    id: i as u8,
                    label,
                    weight,
                }
            })
            .collect::<Vec<_>>();
        let mut labels: Vec<&str> = gens.iter().map(|g| g.label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        assert_eq!(labels.len(), gens.len(), "generator labels must be unique");
        GenSet { gens }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn label(&self, id: u8) -> &str {
        &self.gens[id as usize].label
    }

    pub fn weight(&self, id: u8) -> u32 {
        self.gens[id as usize].weight
    }

    pub fn by_label(&self, label: &str) -> Option<u8> {
        self.gens.iter().find(|g| g.label == label).map(|g| g.id)
    }

    /// Ids of all generators with the given weight, in id order.
    pub fn ids_of_weight(&self, weight: u32) -> Vec<u8> {
        self.gens
            .iter()
            .filter(|g| g.weight == weight)
            .map(|g| g.id)
            .collect()
    }

    /// The distinct generator weights, ascending.
    pub fn weights(&self) -> Vec<u32> {
        let mut ws: Vec<u32> = self.gens.iter().map(|g| g.weight).collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }
}

/// A monomial: a finite sequence of generator ids. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(id: u8) -> Self {
        Word(vec![id])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn weight(&self, gens: &GenSet) -> u32 {
        self.0.iter().map(|&id| gens.weight(id)).sum()
    }

    /// First position at which `factor` occurs as a contiguous subword.
    pub fn find_factor(&self, factor: &Word) -> Option<usize> {
        if factor.is_empty() || factor.len() > self.len() {
            return None;
        }
        (0..=self.len() - factor.len()).find(|&i| self.0[i..i + factor.len()] == factor.0[..])
    }

    pub fn contains_factor(&self, factor: &Word) -> bool {
        self.find_factor(factor).is_some()
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn format(&self, gens: &GenSet) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&id| gens.label(id))
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Natural order used for canonical storage: by length, then by letter ids.
/// Reduction logic uses a `MonomialOrder` instead.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for &id in &self.0 {
            write!(f, "{}", id)?;
        }
        Ok(())
    }
}

/// Degree-first-then-lexicographic order on words, parameterized by a
/// precedence permutation of the generator ids (highest first).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialOrder {
    /// rank[id] = position in the precedence list; 0 is the highest letter.
    rank: Vec<usize>,
    precedence: Vec<u8>,
}

impl MonomialOrder {
    pub fn from_precedence(precedence: Vec<u8>, gen_count: usize) -> Result<Self, Error> {
        let mut rank = vec![usize::MAX; gen_count];
        for (pos, &id) in precedence.iter().enumerate() {
            if (id as usize) >= gen_count || rank[id as usize] != usize::MAX {
                return Err(Error::BadOrder(format!(
                    "precedence must be a permutation of the {} generator ids",
                    gen_count
                )));
            }
            rank[id as usize] = pos;
        }
        if precedence.len() != gen_count {
            return Err(Error::BadOrder(format!(
                "precedence lists {} of {} generators",
                precedence.len(),
                gen_count
            )));
        }
        Ok(MonomialOrder { rank, precedence })
    }

    /// Parses e.g. "c,b,e,f,a,d" (highest first) against the generator labels.
    pub fn from_labels(gens: &GenSet, spec: &str) -> Result<Self, Error> {
        let ids = spec
            .split(',')
            .map(|s| {
                let s = s.trim();
                gens.by_label(s)
                    .ok_or_else(|| Error::BadOrder(format!("unknown generator label '{}'", s)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_precedence(ids, gens.len())
    }

    pub fn precedence(&self) -> &[u8] {
        &self.precedence
    }

    pub fn format(&self, gens: &GenSet) -> String {
        self.precedence
            .iter()
            .map(|&id| gens.label(id))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Total order: longer words are greater; ties broken left-to-right,
    /// higher-precedence letters first.
    pub fn compare(&self, w1: &Word, w2: &Word) -> Ordering {
        match w1.len().cmp(&w2.len()) {
            Ordering::Equal => {}
            c => return c,
        }
        for (&a, &b) in w1.0.iter().zip(w2.0.iter()) {
            // lower rank = higher precedence = greater word
            match self.rank[b as usize].cmp(&self.rank[a as usize]) {
                Ordering::Equal => {}
                c => return c,
            }
        }
        Ordering::Equal
    }
}

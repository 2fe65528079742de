//! Counting words over a finite alphabet that avoid a set of forbidden
//! factors: plain words plus single-star patterns `prefix . g^j . suffix`
//! (j >= 1), compiled exactly into a deterministic factor-avoidance
//! automaton and counted by transfer-matrix iteration.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::word::{GenSet, Word};
use crate::Error;

/// A forbidden-factor pattern. With `star_letter` absent this is the single
/// word `prefix.suffix`; with it present it denotes the infinite family
/// `prefix . g^j . suffix` for all j >= 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pattern {
    pub prefix: Word,
    pub star_letter: Option<u8>,
    pub suffix: Word,
}

impl Pattern {
    pub fn word(w: Word) -> Self {
        Pattern {
            prefix: w,
            star_letter: None,
            suffix: Word::empty(),
        }
    }

    pub fn format(&self, gens: &GenSet) -> String {
        let mut s = String::new();
        for &id in &self.prefix.0 {
            s.push_str(gens.label(id));
        }
        if let Some(g) = self.star_letter {
            s.push_str(gens.label(g));
            s.push('*');
        }
        for &id in &self.suffix.0 {
            s.push_str(gens.label(id));
        }
        s
    }

    /// Parses e.g. `ef*b` (e, then f repeated at least once, then b) or a
    /// plain factor word like `cef`, against the generator labels.
    pub fn parse(gens: &GenSet, s: &str) -> Result<Self, Error> {
        match s.find('*') {
            None => Ok(Pattern::word(crate::parse::parse_word(gens, s)?)),
            Some(pos) => {
                let head = crate::parse::parse_word(gens, &s[..pos])?;
                if head.is_empty() {
                    return Err(Error::Parse(format!("star with no letter in '{}'", s)));
                }
                let suffix = crate::parse::parse_word(gens, &s[pos + 1..])?;
                if s[pos + 1..].contains('*') {
                    return Err(Error::Parse(format!("multiple stars in '{}'", s)));
                }
                let mut prefix = head.0;
                let star = prefix.pop().unwrap();
                Ok(Pattern {
                    prefix: Word(prefix),
                    star_letter: Some(star),
                    suffix,
                })
            }
        }
    }
}

const DEAD: usize = usize::MAX;

/// Deterministic, complete (over surviving transitions) automaton whose
/// states all accept: it recognizes exactly the words containing no
/// forbidden factor. `None` transitions lead to the implicit reject sink.
#[derive(Clone, Debug)]
pub struct Automaton {
    pub alphabet_size: usize,
    pub start: usize,
    /// transitions[state][letter]
    pub transitions: Vec<Vec<Option<usize>>>,
}

struct Nfa {
    /// per node: (expected letter, successor); DEAD marks a completed match
    edges: Vec<Vec<(u8, usize)>>,
    entries: Vec<usize>,
}

fn build_nfa(patterns: &[Pattern]) -> Result<Nfa, Error> {
    let mut edges: Vec<Vec<(u8, usize)>> = Vec::new();
    let mut entries = Vec::new();
    for pat in patterns {
        match pat.star_letter {
            None => {
                let w = &pat.prefix.concat(&pat.suffix);
                if w.is_empty() {
                    return Err(Error::EmptyForbiddenWord);
                }
                let base = edges.len();
                entries.push(base);
                for (i, &letter) in w.0.iter().enumerate() {
                    let target = if i + 1 == w.len() { DEAD } else { base + i + 1 };
                    edges.push(vec![(letter, target)]);
                }
            }
            Some(g) => {
                // prefix chain, then a pre-star node (prefix seen, no g yet),
                // then a self-looping in-star node (>= 1 copy of g), then suffix
                let plen = pat.prefix.len();
                let slen = pat.suffix.len();
                let base = edges.len();
                entries.push(base);
                let pre_star = base + plen;
                let in_star = pre_star + 1;
                for (i, &letter) in pat.prefix.0.iter().enumerate() {
                    edges.push(vec![(letter, base + i + 1)]);
                }
                if slen == 0 {
                    // the first g already completes prefix.g^(>=1)
                    edges.push(vec![(g, DEAD)]);
                } else {
                    edges.push(vec![(g, in_star)]);
                    edges.push(vec![
                        (g, in_star),
                        (
                            pat.suffix.0[0],
                            if slen == 1 { DEAD } else { in_star + 1 },
                        ),
                    ]);
                    for i in 1..slen {
                        let target = if i + 1 == slen { DEAD } else { in_star + i + 1 };
                        edges.push(vec![(pat.suffix.0[i], target)]);
                    }
                }
            }
        }
    }
    Ok(Nfa { edges, entries })
}

/// Compiles the forbidden set into the avoidance automaton by subset
/// construction over the pattern-progress NFA.
pub fn build_automaton(alphabet_size: usize, forbidden: &[Pattern]) -> Result<Automaton, Error> {
    let nfa = build_nfa(forbidden)?;
    let mut state_of: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
    let mut transitions: Vec<Vec<Option<usize>>> = Vec::new();

    let start_set: BTreeSet<usize> = BTreeSet::new();
    state_of.insert(start_set.clone(), 0);
    subsets.push(start_set);
    transitions.push(Vec::new());

    let mut queue = vec![0usize];
    while let Some(s) = queue.pop() {
        let subset = subsets[s].clone();
        let mut row = Vec::with_capacity(alphabet_size);
        for letter in 0..alphabet_size as u8 {
            let mut next: BTreeSet<usize> = BTreeSet::new();
            let mut dead = false;
            let mut step = |node: usize| {
                for &(l, t) in &nfa.edges[node] {
                    if l == letter {
                        if t == DEAD {
                            dead = true;
                        } else {
                            next.insert(t);
                        }
                    }
                }
            };
            for &e in &nfa.entries {
                step(e);
            }
            for &n in &subset {
                step(n);
            }
            if dead {
                row.push(None);
                continue;
            }
            let id = match state_of.get(&next) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    state_of.insert(next.clone(), id);
                    subsets.push(next);
                    transitions.push(Vec::new());
                    queue.push(id);
                    id
                }
            };
            row.push(Some(id));
        }
        transitions[s] = row;
    }
    Ok(Automaton {
        alphabet_size,
        start: 0,
        transitions,
    })
}

impl Automaton {
    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut state = self.start;
        for &letter in &w.0 {
            match self.transitions[state][letter as usize] {
                Some(next) => state = next,
                None => return false,
            }
        }
        true
    }

    /// Exact count of accepted length-n words, by state-vector iteration.
    pub fn count(&self, n: usize) -> BigUint {
        let mut v = vec![BigUint::zero(); self.state_count()];
        v[self.start] = BigUint::from(1u32);
        for _ in 0..n {
            let mut next = vec![BigUint::zero(); self.state_count()];
            for (s, row) in self.transitions.iter().enumerate() {
                if v[s].is_zero() {
                    continue;
                }
                for t in row.iter().flatten() {
                    next[*t] += &v[s];
                }
            }
            v = next;
        }
        v.into_iter().sum()
    }

    pub fn counts_through(&self, n_max: usize) -> Vec<BigUint> {
        (0..=n_max).map(|n| self.count(n)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn gens6() -> GenSet {
        GenSet::new(
            [("a", 1), ("b", 1), ("c", 1), ("d", 2), ("e", 2), ("f", 2)]
                .into_iter()
                .map(|(l, w)| (l.to_string(), w))
                .collect(),
        )
    }

    fn pats(gens: &GenSet, specs: &[&str]) -> Vec<Pattern> {
        specs.iter().map(|s| Pattern::parse(gens, s).unwrap()).collect()
    }

    /// Independent oracle: does the word contain the pattern as a factor?
    fn contains_pattern(w: &[u8], p: &Pattern) -> bool {
        let n = w.len();
        for start in 0..=n {
            let plen = p.prefix.len();
            if start + plen > n || w[start..start + plen] != p.prefix.0[..] {
                continue;
            }
            match p.star_letter {
                None => {
                    let slen = p.suffix.len();
                    if start + plen + slen <= n
                        && w[start + plen..start + plen + slen] == p.suffix.0[..]
                    {
                        return true;
                    }
                }
                Some(g) => {
                    let mut j = start + plen;
                    while j < n && w[j] == g {
                        j += 1;
                        let slen = p.suffix.len();
                        if j + slen <= n && w[j..j + slen] == p.suffix.0[..] {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn brute_count(alphabet: usize, patterns: &[Pattern], n: usize) -> u64 {
        let mut total = 0u64;
        let mut w = vec![0u8; n];
        loop {
            if !patterns.iter().any(|p| contains_pattern(&w, p)) {
                total += 1;
            }
            // odometer
            let mut i = n;
            loop {
                if i == 0 {
                    return total;
                }
                i -= 1;
                w[i] += 1;
                if (w[i] as usize) < alphabet {
                    break;
                }
                w[i] = 0;
            }
        }
    }

    #[test]
    fn k3_counts() {
        let g = gens6();
        let forbidden = pats(&g, &["cef", "cd", "cb", "ca", "bf", "ba"]);
        let aut = build_automaton(6, &forbidden).unwrap();
        let counts: Vec<u64> = (0..=4).map(|n| aut.count(n).to_u64().unwrap()).collect();
        assert_eq!(counts, vec![1, 6, 31, 157, 793]);
    }

    #[test]
    fn empty_forbidden_set_counts_all_words() {
        let aut = build_automaton(6, &[]).unwrap();
        assert_eq!(aut.count(0).to_u64().unwrap(), 1);
        assert_eq!(aut.count(3).to_u64().unwrap(), 216);
    }

    #[test]
    fn star_pattern_exact_acceptance() {
        let g = gens6();
        let forbidden = pats(&g, &["fe", "fd", "db", "ec", "fc", "ef*b"]);
        let aut = build_automaton(6, &forbidden).unwrap();
        let accepts = |s: &str| aut.accepts(&crate::parse::parse_word(&g, s).unwrap());
        assert!(accepts("efa"));
        assert!(!accepts("efb"));
        assert!(!accepts("effb"));
        assert!(!accepts("aeffffba"));
        assert!(accepts("eb")); // needs at least one f between e and b
    }

    #[test]
    fn automaton_matches_brute_force() {
        let g = gens6();
        for specs in [
            vec!["cef", "cd", "cb", "ca", "bf", "ba"],
            vec!["fe", "fd", "db", "ec", "fc", "ef*b"],
            vec!["ab", "a*b"],
            vec!["aa"],
        ] {
            let patterns = pats(&g, &specs);
            let aut = build_automaton(6, &patterns).unwrap();
            for n in 0..=5 {
                assert_eq!(
                    aut.count(n).to_u64().unwrap(),
                    brute_count(6, &patterns, n),
                    "mismatch for {:?} at n={}",
                    specs,
                    n
                );
            }
        }
    }

    #[test]
    fn monotone_under_forbidden_inclusion() {
        let g = gens6();
        let small = pats(&g, &["cd", "cb"]);
        let large = pats(&g, &["cd", "cb", "ba", "ef*b"]);
        let a_small = build_automaton(6, &small).unwrap();
        let a_large = build_automaton(6, &large).unwrap();
        for n in 0..=6 {
            assert!(a_large.count(n) <= a_small.count(n));
        }
    }

    #[test]
    fn empty_word_pattern_rejected() {
        assert!(matches!(
            build_automaton(6, &[Pattern::word(Word::empty())]),
            Err(Error::EmptyForbiddenWord)
        ));
    }
}

//! Diamond-lemma rewriting: normal forms, overlap-ambiguity detection, and
//! bounded completion of a presentation up to a degree cap.

use std::collections::BTreeSet;

use crate::automaton::Pattern;
use crate::field::{Field, Rationals};
use crate::parse;
use crate::poly::Poly;
use crate::word::{GenSet, MonomialOrder, Word};
use crate::Error;

/// A reduction rule `lhs -> rhs` with every word of `rhs` strictly below
/// `lhs` in the active order.
#[derive(Clone, Debug)]
pub struct Rule<F: Field> {
    pub lhs: Word,
    pub rhs: Poly<F>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AmbiguityKind {
    Overlap,
    Inclusion,
}

/// A word admitting two rule applications whose results must agree.
#[derive(Clone, Debug)]
pub struct Ambiguity {
    pub left_rule: usize,
    pub right_rule: usize,
    pub overlap_word: Word,
    /// position at which the right rule's lhs starts inside the overlap word
    pub right_pos: usize,
    pub kind: AmbiguityKind,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem<F: Field> {
    pub gens: GenSet,
    pub order: MonomialOrder,
    pub rules: Vec<Rule<F>>,
    pub degree_cap: usize,
    /// ambiguities with overlap degree above the cap, left unprocessed
    pub unresolved: Vec<Ambiguity>,
}

fn rule_from_poly<F: Field>(p: &Poly<F>, ord: &MonomialOrder) -> Result<Rule<F>, Error> {
    let (lhs, c) = p.leading_term(ord)?;
    let field = p.field().clone();
    let inv = field.inv(&c);
    // rhs = lhs - p/c
    let rhs = Poly::monomial(field, lhs.clone(), p.field().one()).sub(&p.scale(&inv));
    Ok(Rule { lhs, rhs })
}

/// Leftmost (position, rule index) at which some rule lhs occurs in `w`.
fn leftmost_match<F: Field>(rules: &[Rule<F>], w: &Word) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None; // (pos, lhs_len, idx)
    for (idx, rule) in rules.iter().enumerate() {
        if let Some(pos) = w.find_factor(&rule.lhs) {
            let cand = (pos, rule.lhs.len(), idx);
            if best.map_or(true, |b| cand < b) {
                best = Some(cand);
            }
        }
    }
    best.map(|(pos, _, idx)| (pos, idx))
}

/// Reduces `p` to its normal form: repeatedly rewrites the greatest reducible
/// word at its leftmost reducible position. Terminates because every step
/// strictly decreases in the well-order.
pub fn reduce_poly<F: Field>(
    rules: &[Rule<F>],
    ord: &MonomialOrder,
    p: &Poly<F>,
) -> Poly<F> {
    let mut p = p.clone();
    loop {
        let mut target: Option<(Word, usize, usize)> = None;
        for (w, _) in p.iter() {
            if let Some((pos, idx)) = leftmost_match(rules, w) {
                let better = match &target {
                    None => true,
                    Some((tw, _, _)) => ord.compare(w, tw) == std::cmp::Ordering::Greater,
                };
                if better {
                    target = Some((w.clone(), pos, idx));
                }
            }
        }
        let (w, pos, idx) = match target {
            Some(t) => t,
            None => return p,
        };
        let rule = &rules[idx];
        let c = p.coeff(&w);
        let left = w.slice(0, pos);
        let right = w.slice(pos + rule.lhs.len(), w.len());
        p.add_term(w, p.field().neg(&c));
        p = p.add(&rule.rhs.sandwich(&left, &right).scale(&c));
    }
}

/// All minimal overlap and inclusion ambiguities among the rule lhs words,
/// sorted by overlap degree, then lexicographically on the overlap word.
pub fn find_ambiguities<F: Field>(rules: &[Rule<F>]) -> Vec<Ambiguity> {
    let mut out = Vec::new();
    for (i, ri) in rules.iter().enumerate() {
        for (j, rj) in rules.iter().enumerate() {
            let (li, lj) = (ri.lhs.len(), rj.lhs.len());
            // proper overlaps: a suffix of lhs_i equals a prefix of lhs_j
            for k in 1..li.min(lj) {
                if ri.lhs.0[li - k..] == rj.lhs.0[..k] {
                    let mut w = ri.lhs.0.clone();
                    w.extend_from_slice(&rj.lhs.0[k..]);
                    out.push(Ambiguity {
                        left_rule: i,
                        right_rule: j,
                        overlap_word: Word(w),
                        right_pos: li - k,
                        kind: AmbiguityKind::Overlap,
                    });
                }
            }
            // inclusions: lhs_j a proper factor of lhs_i
            if i != j && lj < li {
                if let Some(pos) = ri.lhs.find_factor(&rj.lhs) {
                    out.push(Ambiguity {
                        left_rule: i,
                        right_rule: j,
                        overlap_word: ri.lhs.clone(),
                        right_pos: pos,
                        kind: AmbiguityKind::Inclusion,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.overlap_word
            .len()
            .cmp(&b.overlap_word.len())
            .then_with(|| a.overlap_word.0.cmp(&b.overlap_word.0))
            .then_with(|| (a.left_rule, a.right_rule).cmp(&(b.left_rule, b.right_rule)))
    });
    out
}

/// The difference of the two reductions of an ambiguity's overlap word.
fn s_poly<F: Field>(rules: &[Rule<F>], amb: &Ambiguity) -> Poly<F> {
    let left = &rules[amb.left_rule];
    let right = &rules[amb.right_rule];
    let w = &amb.overlap_word;
    let left_result = left
        .rhs
        .sandwich(&Word::empty(), &w.slice(left.lhs.len(), w.len()));
    let right_result = right.rhs.sandwich(
        &w.slice(0, amb.right_pos),
        &w.slice(amb.right_pos + right.lhs.len(), w.len()),
    );
    left_result.sub(&right_result)
}

/// Inter-reduction: no rule lhs is a factor of another lhs, and every rhs is
/// in normal form with respect to the whole system.
fn inter_reduce<F: Field>(rules: &mut Vec<Rule<F>>, ord: &MonomialOrder) {
    'outer: loop {
        // fold rules whose lhs is reducible by some other rule
        for i in 0..rules.len() {
            let reducible = rules
                .iter()
                .enumerate()
                .any(|(j, r)| j != i && rules[i].lhs.contains_factor(&r.lhs));
            if reducible {
                let rule = rules.remove(i);
                let field = rule.rhs.field().clone();
                let p = Poly::monomial(field, rule.lhs, rule.rhs.field().one()).sub(&rule.rhs);
                let nf = reduce_poly(rules, ord, &p);
                if !nf.is_zero() {
                    rules.push(rule_from_poly(&nf, ord).expect("nonzero"));
                }
                continue 'outer;
            }
        }
        // normalize right-hand sides
        let mut changed = false;
        for i in 0..rules.len() {
            let nf = reduce_poly(rules, ord, &rules[i].rhs);
            if nf != rules[i].rhs {
                rules[i].rhs = nf;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Bounded Knuth-Bendix/Bergman completion: resolves all ambiguities of
/// overlap degree <= cap, adding rules from non-resolving S-polynomials.
/// Ambiguities above the cap are reported in `unresolved`.
pub fn complete<F: Field>(
    gens: &GenSet,
    relations: &[Poly<F>],
    order: MonomialOrder,
    cap: usize,
    max_rules: usize,
) -> Result<RewriteSystem<F>, Error> {
    assert!(cap >= 2, "completion cap must be at least 2");
    let mut rules: Vec<Rule<F>> = Vec::new();
    for r in relations {
        if !r.is_zero() {
            rules.push(rule_from_poly(r, &order)?);
        }
    }
    inter_reduce(&mut rules, &order);

    let mut processed: BTreeSet<(Vec<u8>, Vec<u8>, Vec<u8>)> = BTreeSet::new();
    loop {
        let ambs = find_ambiguities(&rules);
        let next = ambs.into_iter().find(|a| {
            a.overlap_word.len() <= cap
                && !processed.contains(&(
                    rules[a.left_rule].lhs.0.clone(),
                    rules[a.right_rule].lhs.0.clone(),
                    a.overlap_word.0.clone(),
                ))
        });
        let amb = match next {
            Some(a) => a,
            None => break,
        };
        processed.insert((
            rules[amb.left_rule].lhs.0.clone(),
            rules[amb.right_rule].lhs.0.clone(),
            amb.overlap_word.0.clone(),
        ));
        let nf = reduce_poly(&rules, &order, &s_poly(&rules, &amb));
        if !nf.is_zero() {
            rules.push(rule_from_poly(&nf, &order)?);
            if rules.len() > max_rules {
                return Err(Error::RuleLimit(max_rules));
            }
            inter_reduce(&mut rules, &order);
        }
    }

    // stable rule order for serialization and golden tests
    rules.sort_by(|a, b| {
        a.lhs
            .len()
            .cmp(&b.lhs.len())
            .then_with(|| a.lhs.0.cmp(&b.lhs.0))
    });
    let unresolved = find_ambiguities(&rules)
        .into_iter()
        .filter(|a| a.overlap_word.len() > cap)
        .collect();
    Ok(RewriteSystem {
        gens: gens.clone(),
        order,
        rules,
        degree_cap: cap,
        unresolved,
    })
}

impl<F: Field> RewriteSystem<F> {
    pub fn reduce(&self, p: &Poly<F>) -> Poly<F> {
        reduce_poly(&self.rules, &self.order, p)
    }

    pub fn lhs_words(&self) -> Vec<Word> {
        self.rules.iter().map(|r| r.lhs.clone()).collect()
    }

    pub fn rule_with_lhs(&self, lhs: &Word) -> Option<&Rule<F>> {
        self.rules.iter().find(|r| &r.lhs == lhs)
    }

    /// For a completed ch(K_3)-shaped system: the coefficient alpha_n,
    /// read off as minus the coefficient of d f^n b in the rhs of the rule
    /// with lhs e f^n b.
    pub fn family_coefficient(&self, n: usize) -> Result<F::Elem, Error> {
        let id = |label: &str| {
            self.gens
                .by_label(label)
                .ok_or_else(|| Error::Invalid(format!("no generator '{}'", label)))
        };
        let (e, f, d, b) = (id("e")?, id("f")?, id("d")?, id("b")?);
        let mut lhs = vec![e];
        lhs.extend(std::iter::repeat(f).take(n));
        lhs.push(b);
        let rule = self.rule_with_lhs(&Word(lhs)).ok_or(Error::RuleAbsent)?;
        let mut target = vec![d];
        target.extend(std::iter::repeat(f).take(n));
        target.push(b);
        let field = rule.rhs.field().clone();
        Ok(field.neg(&rule.rhs.coeff(&Word(target))))
    }

    /// Flags arithmetic progressions of lhs words of the form
    /// `prefix . g^j . suffix` with j = 1 .. cap - |prefix| - |suffix|,
    /// as candidate infinite families. Heuristic only; nothing is proven.
    pub fn conjecture_families(&self) -> Vec<Pattern> {
        let mut keys: BTreeSet<(Vec<u8>, u8, Vec<u8>)> = BTreeSet::new();
        for rule in &self.rules {
            let w = &rule.lhs.0;
            let mut i = 0;
            while i < w.len() {
                let g = w[i];
                let mut j = i;
                while j < w.len() && w[j] == g {
                    j += 1;
                }
                if !(i == 0 && j == w.len()) {
                    keys.insert((w[..i].to_vec(), g, w[j..].to_vec()));
                }
                i = j;
            }
        }
        let lhs_set: BTreeSet<Vec<u8>> = self.rules.iter().map(|r| r.lhs.0.clone()).collect();
        let mut out = Vec::new();
        for (prefix, g, suffix) in keys {
            let fixed = prefix.len() + suffix.len();
            if fixed == 0 || self.degree_cap < fixed + 3 {
                continue;
            }
            let jmax = self.degree_cap - fixed;
            let all_present = (1..=jmax).all(|j| {
                let mut w = prefix.clone();
                w.extend(std::iter::repeat(g).take(j));
                w.extend_from_slice(&suffix);
                lhs_set.contains(&w)
            });
            if all_present && jmax >= 3 {
                out.push(Pattern {
                    prefix: Word(prefix),
                    star_letter: Some(g),
                    suffix: Word(suffix),
                });
            }
        }
        out
    }

    /// Forbidden patterns for the avoidance automaton: conjectured star
    /// families plus the remaining lhs words as literal factors.
    pub fn forbidden_patterns(&self) -> Vec<Pattern> {
        let families = self.conjecture_families();
        let mut covered: BTreeSet<Vec<u8>> = BTreeSet::new();
        for fam in &families {
            let fixed = fam.prefix.len() + fam.suffix.len();
            for j in 1..=self.degree_cap.saturating_sub(fixed) {
                let mut w = fam.prefix.0.clone();
                w.extend(std::iter::repeat(fam.star_letter.unwrap()).take(j));
                w.extend_from_slice(&fam.suffix.0);
                covered.insert(w);
            }
        }
        let mut out = families;
        for rule in &self.rules {
            if !covered.contains(&rule.lhs.0) {
                out.push(Pattern {
                    prefix: rule.lhs.clone(),
                    star_letter: None,
                    suffix: Word::empty(),
                });
            }
        }
        out
    }
}

impl RewriteSystem<Rationals> {
    /// One `lhs -> rhs` line per rule, with a header recording order and cap.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("order {}\n", self.order.format(&self.gens)));
        out.push_str(&format!("cap {}\n", self.degree_cap));
        for rule in &self.rules {
            out.push_str(&format!(
                "rule {} -> {}\n",
                rule.lhs.format(&self.gens),
                rule.rhs.format(&self.gens)
            ));
        }
        out
    }

    pub fn from_text(gens: &GenSet, text: &str) -> Result<Self, Error> {
        let mut order = None;
        let mut cap = None;
        let mut rules = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("order ") {
                order = Some(MonomialOrder::from_labels(gens, rest)?);
            } else if let Some(rest) = line.strip_prefix("cap ") {
                cap = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse("bad cap".into()))?,
                );
            } else if let Some(rest) = line.strip_prefix("rule ") {
                let (lhs, rhs) = rest
                    .split_once("->")
                    .ok_or_else(|| Error::Parse("rule line missing ->".into()))?;
                rules.push(Rule {
                    lhs: parse::parse_word(gens, lhs.trim())?,
                    rhs: parse::parse_poly(gens, rhs.trim())?,
                });
            } else {
                return Err(Error::Parse(format!("unrecognized line '{}'", line)));
            }
        }
        Ok(RewriteSystem {
            gens: gens.clone(),
            order: order.ok_or_else(|| Error::Parse("missing order header".into()))?,
            rules,
            degree_cap: cap.ok_or_else(|| Error::Parse("missing cap header".into()))?,
            unresolved: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;
    use crate::parse::parse_poly;

    fn k3_system(cap: usize) -> RewriteSystem<Rationals> {
        let pres = graphs::k3_fixture();
        let ord = MonomialOrder::from_labels(&pres.gens, "c,b,e,f,a,d").unwrap();
        complete(&pres.gens, &pres.relations, ord, cap, 1000).unwrap()
    }

    fn gr_system(cap: usize) -> RewriteSystem<Rationals> {
        let pres = graphs::gr_k3_fixture();
        let ord = MonomialOrder::from_labels(&pres.gens, "f,e,d,c,b,a").unwrap();
        complete(&pres.gens, &pres.relations, ord, cap, 1000).unwrap()
    }

    fn lhs_labels(sys: &RewriteSystem<Rationals>) -> Vec<String> {
        sys.lhs_words()
            .iter()
            .map(|w| w.0.iter().map(|&id| sys.gens.label(id)).collect::<String>())
            .collect()
    }

    #[test]
    fn k3_completion_rule_set() {
        let sys = k3_system(3);
        let mut lhs = lhs_labels(&sys);
        lhs.sort();
        assert_eq!(lhs, vec!["ba", "bf", "ca", "cb", "cd", "cef"]);
        assert!(sys.unresolved.is_empty());
    }

    #[test]
    fn k3_initial_ambiguities() {
        let pres = graphs::k3_fixture();
        let ord = MonomialOrder::from_labels(&pres.gens, "c,b,e,f,a,d").unwrap();
        let mut rules: Vec<Rule<Rationals>> = pres
            .relations
            .iter()
            .map(|r| rule_from_poly(r, &ord).unwrap())
            .collect();
        inter_reduce(&mut rules, &ord);
        let ambs = find_ambiguities(&rules);
        let words: Vec<String> = ambs
            .iter()
            .map(|a| {
                a.overlap_word
                    .0
                    .iter()
                    .map(|&id| pres.gens.label(id))
                    .collect::<String>()
            })
            .collect();
        assert_eq!(words, vec!["cba", "cbf"]);
    }

    #[test]
    fn gr_initial_ambiguities() {
        let pres = graphs::gr_k3_fixture();
        let ord = MonomialOrder::from_labels(&pres.gens, "f,e,d,c,b,a").unwrap();
        let mut rules: Vec<Rule<Rationals>> = pres
            .relations
            .iter()
            .map(|r| rule_from_poly(r, &ord).unwrap())
            .collect();
        inter_reduce(&mut rules, &ord);
        let ambs = find_ambiguities(&rules);
        let mut words: Vec<String> = ambs
            .iter()
            .map(|a| {
                a.overlap_word
                    .0
                    .iter()
                    .map(|&id| pres.gens.label(id))
                    .collect::<String>()
            })
            .collect();
        words.sort();
        assert_eq!(words, vec!["fdb", "fec"]);
    }

    #[test]
    fn single_rule_no_self_overlap() {
        let g = GenSet::new(vec![("a".to_string(), 1), ("b".to_string(), 1)]);
        let ord = MonomialOrder::from_labels(&g, "b,a").unwrap();
        let rel = parse_poly(&g, "b*a - a*b").unwrap();
        let rules = vec![rule_from_poly(&rel, &ord).unwrap()];
        assert!(find_ambiguities(&rules).is_empty());
    }

    #[test]
    fn cba_associativity_reduces_to_zero() {
        let sys = k3_system(3);
        let g = &sys.gens;
        let c = parse_poly(g, "c").unwrap();
        let b = parse_poly(g, "b").unwrap();
        let a = parse_poly(g, "a").unwrap();
        let ba_nf = sys.reduce(&b.mul(&a).unwrap());
        let cb_nf = sys.reduce(&c.mul(&b).unwrap());
        let lhs = sys.reduce(&c.mul(&ba_nf).unwrap());
        let rhs = sys.reduce(&cb_nf.mul(&a).unwrap());
        assert_eq!(lhs, rhs);
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn normal_word_is_fixed_point() {
        let sys = k3_system(3);
        let p = parse_poly(&sys.gens, "d*e*a - 2*a*b*c").unwrap();
        let nf = sys.reduce(&p);
        assert_eq!(sys.reduce(&nf), nf);
        assert_eq!(nf, p); // dea and abc avoid all forbidden factors
    }

    #[test]
    fn gr_completion_family() {
        let sys = gr_system(8);
        let mut lhs = lhs_labels(&sys);
        lhs.sort();
        let mut expected: Vec<String> = vec!["db", "ec", "fc", "fd", "fe"]
            .into_iter()
            .map(String::from)
            .collect();
        for j in 1..=6usize {
            expected.push(format!("e{}b", "f".repeat(j)));
        }
        expected.sort();
        assert_eq!(lhs, expected);
    }

    #[test]
    fn family_coefficients_are_constant() {
        // In the inter-reduced system the coefficient of the normal word
        // d f^n b in the normal form of e f^n b is -1 for every n: the
        // decomposition-dependent recursion alpha_{n+1} = alpha_n/(1+alpha_n)
        // describes a non-unique bookkeeping split, not this canonical
        // coefficient. The halving shows up elsewhere in the rule instead.
        let sys = gr_system(8);
        let one = Rationals.one();
        for n in 1..=6usize {
            assert_eq!(sys.family_coefficient(n).unwrap(), one);
        }
        assert!(matches!(sys.family_coefficient(7), Err(Error::RuleAbsent)));
        // the degree-4 rule carries the exact 1/2 coefficients
        let g = &sys.gens;
        let lhs = crate::parse::parse_word(g, "effb").unwrap();
        let rule = sys.rule_with_lhs(&lhs).unwrap();
        let expect = crate::parse::parse_poly(
            g,
            "e*f*f*a + d*f*f*a - d*f*f*b + 1/2*e*d*f*b - 1/2*e*d*f*a - 1/2*d*d*f*b + 1/2*d*d*f*a",
        )
        .unwrap();
        assert_eq!(rule.rhs, expect);
    }

    #[test]
    fn conjectured_family_for_gr() {
        let sys = gr_system(8);
        let fams = sys.conjecture_families();
        assert_eq!(fams.len(), 1);
        let f = &fams[0];
        assert_eq!(f.prefix.format(&sys.gens), "e");
        assert_eq!(sys.gens.label(f.star_letter.unwrap()), "f");
        assert_eq!(f.suffix.format(&sys.gens), "b");
        let pats = sys.forbidden_patterns();
        assert_eq!(pats.len(), 6); // the family plus five literal factors
    }

    #[test]
    fn empty_relations_complete_to_empty_system() {
        let g = GenSet::new(vec![("x".to_string(), 1), ("y".to_string(), 1)]);
        let ord = MonomialOrder::from_labels(&g, "y,x").unwrap();
        let sys = complete::<Rationals>(&g, &[], ord, 5, 1000).unwrap();
        assert!(sys.rules.is_empty());
        assert!(sys.unresolved.is_empty());
    }

    #[test]
    fn system_text_roundtrip() {
        let sys = k3_system(3);
        let text = sys.to_text();
        let back = RewriteSystem::from_text(&sys.gens, &text).unwrap();
        assert_eq!(back.rules.len(), sys.rules.len());
        for (a, b) in sys.rules.iter().zip(back.rules.iter()) {
            assert_eq!(a.lhs, b.lhs);
            assert_eq!(a.rhs, b.rhs);
        }
    }
}

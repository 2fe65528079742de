//! Text formats: polynomial syntax (`3/2*u(12)*u(2)` joined by `+`/`-`) and
//! the presentation file format used by the CLI.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::field::Rationals;
use crate::poly::Poly;
use crate::word::{GenSet, Word};
use crate::Error;

/// Tokenizes a word against the generator labels, greedy longest match.
/// `*` separators and whitespace are ignored, so both `cef` and `c*e*f`
/// (or `u(3)*u(23)*u(13)`) parse.
pub fn parse_word(gens: &GenSet, s: &str) -> Result<Word, Error> {
    let mut letters = Vec::new();
    let mut rest = s.trim();
    if rest == "1" {
        return Ok(Word::empty());
    }
    'outer: while !rest.is_empty() {
        if rest.starts_with('*') || rest.starts_with(char::is_whitespace) {
            rest = &rest[1..];
            continue;
        }
        let mut best: Option<(u8, usize)> = None;
        for g in gens.iter() {
            if rest.starts_with(g.label.as_str())
                && best.map_or(true, |(_, l)| g.label.len() > l)
            {
                best = Some((g.id, g.label.len()));
            }
        }
        if let Some((id, l)) = best {
            letters.push(id);
            rest = &rest[l..];
            continue 'outer;
        }
        return Err(Error::Parse(format!(
            "no generator label matches at '{}'",
            rest
        )));
    }
    Ok(Word(letters))
}

fn parse_coeff(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator '{}'", num)))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator '{}'", den)))?;
    if d == BigInt::from(0) {
        return Err(Error::Parse("zero denominator".to_string()));
    }
    Ok(BigRational::new(n, d))
}

/// Parses a rational polynomial in the term syntax, e.g.
/// `d*b - d*a + a*b - b*a` or `3/2*u(12)*u(2) - u(1)`.
pub fn parse_poly(gens: &GenSet, s: &str) -> Result<Poly<Rationals>, Error> {
    let s = s.trim();
    if s.is_empty() || s == "0" {
        return Ok(Poly::zero(Rationals));
    }
    let mut poly = Poly::zero(Rationals);
    // split into signed terms; the unicode minus from some sources is accepted
    let normalized = s.replace('\u{2212}', "-");
    let mut term = String::new();
    let mut sign = 1i64;
    let mut terms: Vec<(i64, String)> = Vec::new();
    for ch in normalized.chars() {
        match ch {
            '+' | '-' => {
                if !term.trim().is_empty() {
                    terms.push((sign, term.trim().to_string()));
                }
                term = String::new();
                sign = if ch == '-' { -1 } else { 1 };
            }
            _ => term.push(ch),
        }
    }
    if !term.trim().is_empty() {
        terms.push((sign, term.trim().to_string()));
    }
    if terms.is_empty() {
        return Err(Error::Parse(format!("empty polynomial '{}'", s)));
    }
    for (sign, t) in terms {
        // optional leading coefficient, then generator labels
        let (coeff, word_part) = match t.split_once('*') {
            Some((head, tail)) if parse_coeff(head).is_ok() && gens.by_label(head.trim()).is_none() => {
                (parse_coeff(head)?, tail.to_string())
            }
            _ => {
                if let Ok(c) = parse_coeff(&t) {
                    if gens.by_label(t.trim()).is_none() {
                        poly.add_term(Word::empty(), c * BigRational::from_integer(sign.into()));
                        continue;
                    }
                }
                (BigRational::from_integer(1.into()), t.clone())
            }
        };
        let word = parse_word(gens, &word_part)?;
        poly.add_term(word, coeff * BigRational::from_integer(sign.into()));
    }
    Ok(poly)
}

/// Writes a presentation in the line-oriented text format:
/// `generator <label> <weight>` lines followed by `relation <poly>` lines.
pub fn format_presentation(gens: &GenSet, relations: &[Poly<Rationals>]) -> String {
    let mut out = String::new();
    for g in gens.iter() {
        out.push_str(&format!("generator {} {}\n", g.label, g.weight));
    }
    for r in relations {
        out.push_str(&format!("relation {}\n", r.format(gens)));
    }
    out
}

/// Parses the presentation text format written by `format_presentation`.
pub fn parse_presentation(text: &str) -> Result<(GenSet, Vec<Poly<Rationals>>), Error> {
    let mut labeled = Vec::new();
    let mut relation_lines = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("generator ") {
            let mut it = rest.split_whitespace();
            let label = it
                .next()
                .ok_or_else(|| Error::Parse("generator line missing label".into()))?;
            let weight: u32 = it
                .next()
                .ok_or_else(|| Error::Parse("generator line missing weight".into()))?
                .parse()
                .map_err(|_| Error::Parse("bad generator weight".into()))?;
            labeled.push((label.to_string(), weight));
        } else if let Some(rest) = line.strip_prefix("relation ") {
            relation_lines.push(rest.to_string());
        } else {
            return Err(Error::Parse(format!("unrecognized line '{}'", line)));
        }
    }
    if labeled.is_empty() {
        return Err(Error::Parse("presentation has no generators".into()));
    }
    let gens = GenSet::new(labeled);
    let relations = relation_lines
        .iter()
        .map(|l| parse_poly(&gens, l))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((gens, relations))
}

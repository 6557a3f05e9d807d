//! Words in the standard generators and their text syntax.
//!
//! Letters are written as whitespace-separated generator names with an
//! optional integer exponent: `s t s^-1`, `a^{-2} c`, `s^4`. When every
//! generator name is a single character, juxtaposed letters such as `sts`
//! are also accepted.

use std::fmt;

use crate::error::{Error, Result};

/// Generator index of `s` in a dihedral group.
pub const S: usize = 0;
/// Generator index of `t` in a dihedral group.
pub const T: usize = 1;
pub const DIHEDRAL_ALPHABET: [&str; 2] = ["s", "t"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    pub fn exponent(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// `gen^k` as a word of `|k|` letters.
    pub fn gen_power(gen: usize, k: i64) -> Self {
        let l = Letter::new(gen, k < 0);
        Word { letters: vec![l; k.unsigned_abs() as usize] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn power(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    /// `c · self · c⁻¹`.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        c.concat(self).concat(&c.inverse())
    }

    /// Sum of exponents: the homomorphism sending every generator to 1.
    pub fn abelianization(&self) -> i64 {
        self.letters.iter().map(|l| l.exponent()).sum()
    }

    /// Exponent sum restricted to one generator.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters.iter().filter(|l| l.gen == gen).map(|l| l.exponent()).sum()
    }

    /// Free reduction (cancels adjacent `x x⁻¹`).
    pub fn freely_reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    pub fn parse(text: &str, alphabet: &[&str]) -> Result<Word> {
        let mut letters = Vec::new();
        let single_char = alphabet.iter().all(|n| n.chars().count() == 1);
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = split_exponent(token)?;
            if name.is_empty() {
                return Err(Error::Syntax(format!("missing generator in {token:?}")));
            }
            let lookup = |n: &str| alphabet.iter().position(|a| *a == n);
            if let Some(g) = lookup(name) {
                letters.extend(Word::gen_power(g, exp).letters);
            } else if single_char {
                let chars: Vec<String> = name.chars().map(|c| c.to_string()).collect();
                let n = chars.len();
                for (i, c) in chars.iter().enumerate() {
                    let g = lookup(c).ok_or_else(|| {
                        Error::Syntax(format!("unknown generator {c:?} in {token:?}"))
                    })?;
                    let e = if i + 1 == n { exp } else { 1 };
                    letters.extend(Word::gen_power(g, e).letters);
                }
            } else {
                return Err(Error::Syntax(format!("unknown generator {name:?}")));
            }
        }
        Ok(Word { letters })
    }

    pub fn parse_dihedral(text: &str) -> Result<Word> {
        Word::parse(text, &DIHEDRAL_ALPHABET)
    }

    /// Renders the word with exponents collapsed (`s^2 t^-1`).
    pub fn display<'a>(&'a self, alphabet: &'a [&'a str]) -> WordDisplay<'a> {
        WordDisplay { word: self, alphabet }
    }

    pub fn to_dihedral_string(&self) -> String {
        self.display(&DIHEDRAL_ALPHABET).to_string()
    }

    /// Syllables `(gen, exponent)` after merging adjacent letters of the same generator.
    pub fn syllables(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for l in &self.letters {
            match out.last_mut() {
                Some((g, e)) if *g == l.gen => *e += l.exponent(),
                _ => out.push((l.gen, l.exponent())),
            }
            if out.last().map(|s| s.1) == Some(0) {
                out.pop();
            }
        }
        out
    }
}

fn split_exponent(token: &str) -> Result<(&str, i64)> {
    match token.split_once('^') {
        None => Ok((token, 1)),
        Some((name, e)) => {
            let e = e
                .trim_start_matches(['{', '('])
                .trim_end_matches(['}', ')'])
                .replace('−', "-");
            let v: i64 =
                e.parse().map_err(|_| Error::Syntax(format!("bad exponent in {token:?}")))?;
            Ok((name, v))
        }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a [&'a str],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syl = self.word.syllables();
        if syl.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in syl.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = self.alphabet.get(*g).copied().unwrap_or("?");
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Serde adapter writing a dihedral word as text (`"s t^-1"`).
pub mod dihedral_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Word;

    pub fn serialize<S: Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&w.to_dihedral_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let text = String::deserialize(d)?;
        let text = if text.trim() == "1" { "" } else { text.as_str() };
        Word::parse_dihedral(text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a dihedral generator index as `"s"` or `"t"`.
pub mod dihedral_gen {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::DIHEDRAL_ALPHABET;

    pub fn serialize<S: Serializer>(g: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(DIHEDRAL_ALPHABET.get(*g).copied().unwrap_or("?"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let text = String::deserialize(d)?;
        DIHEDRAL_ALPHABET
            .iter()
            .position(|a| *a == text)
            .ok_or_else(|| serde::de::Error::custom(format!("expected s or t, got {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spaced_and_juxtaposed() {
        let w = Word::parse_dihedral("s t s^-1").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.letters()[2], Letter::new(S, true));
        assert_eq!(Word::parse_dihedral("sts").unwrap(), Word::parse_dihedral("s t s").unwrap());
        assert_eq!(Word::parse_dihedral("s^{-1}").unwrap(), Word::gen_power(S, -1));
        assert_eq!(Word::parse_dihedral("s^4").unwrap().len(), 4);
        assert_eq!(Word::parse_dihedral("st^-1").unwrap().to_dihedral_string(), "s t^-1");
        assert!(Word::parse_dihedral("u").is_err());
        assert!(Word::parse_dihedral("s^x").is_err());
    }

    #[test]
    fn multi_char_alphabet() {
        let alpha = ["a1", "b2"];
        let w = Word::parse("a1 b2^-2", &alpha).unwrap();
        assert_eq!(w.display(&alpha).to_string(), "a1 b2^-2");
        assert!(Word::parse("a1b2", &alpha).is_err());
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(Word::parse_dihedral("sts").unwrap().abelianization(), 3);
        assert_eq!(Word::parse_dihedral("s t s^-1").unwrap().abelianization(), 1);
        assert_eq!(Word::parse_dihedral("").unwrap().display(&DIHEDRAL_ALPHABET).to_string(), "1");
    }
}

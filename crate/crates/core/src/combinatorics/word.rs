use std::fmt;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Exponent of a letter in a *-word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    One,
    Star,
}

impl Exponent {
    pub fn parse(c: char) -> Option<Exponent> {
        match c {
            '1' => Some(Exponent::One),
            '*' => Some(Exponent::Star),
            _ => None,
        }
    }

    /// All words of length `p`, `One` before `Star` at each position.
    pub fn all_words(p: usize) -> impl Iterator<Item = Vec<Exponent>> {
        (0..1u64 << p).map(move |bits| {
            (0..p)
                .map(|r| {
                    if bits >> (p - 1 - r) & 1 == 1 {
                        Exponent::Star
                    } else {
                        Exponent::One
                    }
                })
                .collect()
        })
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exponent::One => "1",
            Exponent::Star => "*",
        })
    }
}

/// A word `(J, alpha)`: letter `r` is `s_{J_r}^{alpha_r}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WordSpec {
    subsets: Vec<Subset>,
    exponents: Vec<Exponent>,
}

impl WordSpec {
    pub fn new(subsets: Vec<Subset>, exponents: Vec<Exponent>) -> Result<Self> {
        if subsets.is_empty() {
            return Err(Error::domain("words need at least one letter"));
        }
        if subsets.len() != exponents.len() {
            return Err(Error::domain(format!(
                "word has {} subsets but {} exponents",
                subsets.len(),
                exponents.len()
            )));
        }
        if subsets.iter().any(|s| s.is_empty()) {
            return Err(Error::domain("every letter needs a nonempty layer subset"));
        }
        Ok(WordSpec { subsets, exponents })
    }

    /// Same subset in every position.
    pub fn uniform(subset: Subset, exponents: Vec<Exponent>) -> Result<Self> {
        Self::new(vec![subset; exponents.len()], exponents)
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Subset] {
        &self.subsets
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exponents
    }

    pub fn subset(&self, r: usize) -> Subset {
        self.subsets[r]
    }

    pub fn exponent(&self, r: usize) -> Exponent {
        self.exponents[r]
    }

    /// Checks that every subset lives in `[L]`.
    pub fn check_layers(&self, layers: usize) -> Result<()> {
        match self.subsets.iter().find(|s| !s.is_within(layers)) {
            Some(s) => Err(Error::domain(format!(
                "subset {s} is not contained in [{layers}]"
            ))),
            None => Ok(()),
        }
    }

    /// Total letter count `sum |J_r|` after expanding each product.
    pub fn expanded_len(&self) -> usize {
        self.subsets.iter().map(|s| s.len()).sum()
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (s, e)) in self.subsets.iter().zip(&self.exponents).enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "s{s}")?;
            if *e == Exponent::Star {
                write!(f, "*")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordSpec({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let s = Subset::from_layers([0]).unwrap();
        assert!(WordSpec::new(vec![], vec![]).is_err());
        assert!(WordSpec::new(vec![s], vec![]).is_err());
        assert!(WordSpec::new(vec![Subset::EMPTY], vec![Exponent::One]).is_err());
        let w = WordSpec::new(vec![s, s], vec![Exponent::One, Exponent::Star]).unwrap();
        assert_eq!(w.to_string(), "s{1} s{1}*");
        assert!(w.check_layers(1).is_ok());
    }

    #[test]
    fn all_exponent_words() {
        let words: Vec<_> = Exponent::all_words(2).collect();
        assert_eq!(words.len(), 4);
        assert_eq!(words[1], vec![Exponent::One, Exponent::Star]);
    }
}

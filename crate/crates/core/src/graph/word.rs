use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{JsrError, Result};

/// A finite word over a 1-based alphabet, stored in application order:
/// the first letter acts on the state first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// `self` applied first, then `then`.
    pub fn concat(&self, then: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&then.0);
        Self(v)
    }

    pub fn check(&self, m: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l > m) {
            Some(&letter) => Err(JsrError::InvalidWord { letter, m }),
            None => Ok(()),
        }
    }

    /// All `m^len` words of length `len` in lexicographic order.
    pub fn all_of_length(m: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| {
                    (1..=m).map(move |l| {
                        let mut v = w.0.clone();
                        v.push(l);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

//! Letters as bit masks over a fixed, sorted proposition universe.

use std::collections::BTreeSet;

use crate::formula::PropFormula;
use crate::word::{LassoWord, Letter};
use crate::Error;

/// Largest supported universe; letter tables have `2^n` entries.
pub const MAX_PROPS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    props: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(props: impl IntoIterator<Item = S>) -> Result<Self, Error> {
        let set: BTreeSet<String> = props.into_iter().map(|p| p.as_ref().to_string()).collect();
        if set.len() > MAX_PROPS {
            return Err(Error::Invalid(format!(
                "{} propositions exceed the supported {MAX_PROPS}",
                set.len()
            )));
        }
        Ok(Alphabet { props: set.into_iter().collect() })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn size(&self) -> usize {
        1 << self.props.len()
    }

    pub fn index(&self, p: &str) -> Option<usize> {
        self.props.binary_search_by(|q| q.as_str().cmp(p)).ok()
    }

    pub fn has(&self, mask: u32, p: &str) -> bool {
        self.index(p).is_some_and(|i| mask >> i & 1 == 1)
    }

    pub fn holds(&self, f: &PropFormula, mask: u32) -> bool {
        f.eval_with(&|p| self.has(mask, p))
    }

    /// Mask of a letter; propositions outside the universe are ignored.
    pub fn mask(&self, l: &Letter) -> u32 {
        l.iter().filter_map(|p| self.index(p)).fold(0, |m, i| m | 1 << i)
    }

    pub fn letter(&self, mask: u32) -> Letter {
        self.props
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect()
    }

    pub fn letters(&self) -> impl Iterator<Item = u32> {
        0..self.size() as u32
    }

    pub fn word(&self, prefix: &[u32], cycle: &[u32]) -> LassoWord {
        LassoWord::new(
            prefix.iter().map(|&m| self.letter(m)).collect(),
            cycle.iter().map(|&m| self.letter(m)).collect(),
        )
    }

    /// Masks of the reduced positions of `w`.
    pub fn masks(&self, w: &LassoWord) -> Vec<u32> {
        (0..w.len()).map(|n| self.mask(w.letter_at(n))).collect()
    }
}

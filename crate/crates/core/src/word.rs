//! Ultimately periodic words `u·v^ω` over proposition sets.

use std::collections::BTreeSet;
use std::fmt;

pub type Letter = BTreeSet<String>;

/// Builds a letter from proposition names.
pub fn letter<'a>(props: impl IntoIterator<Item = &'a str>) -> Letter {
    props.into_iter().map(str::to_string).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl LassoWord {
    /// Panics if `cycle` is empty.
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be non-empty");
        LassoWord { prefix, cycle }
    }

    /// Number of distinct positions `|u| + |v|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest position with the same suffix as `n`.
    pub fn reduce(&self, n: usize) -> usize {
        let u = self.prefix.len();
        if n < u {
            n
        } else {
            u + (n - u) % self.cycle.len()
        }
    }

    /// Reduced successor of a reduced position.
    pub fn next(&self, n: usize) -> usize {
        if n + 1 < self.len() {
            n + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn letter_at(&self, n: usize) -> &Letter {
        let m = self.reduce(n);
        if m < self.prefix.len() {
            &self.prefix[m]
        } else {
            &self.cycle[m - self.prefix.len()]
        }
    }

    /// Shortest lasso denoting the same infinite word.
    pub fn canonical(&self) -> LassoWord {
        let n = self.cycle.len();
        let period = (1..=n)
            .find(|&d| n.is_multiple_of(d) && (0..n).all(|i| self.cycle[i] == self.cycle[(i + d) % n]))
            .unwrap_or(n);
        let mut prefix = self.prefix.clone();
        let mut cycle = self.cycle[..period].to_vec();
        while prefix.last().is_some_and(|l| *l == cycle[period - 1]) {
            prefix.pop();
            cycle.rotate_right(1);
        }
        LassoWord::new(prefix, cycle)
    }

    /// Every proposition occurring in some letter.
    pub fn props(&self) -> BTreeSet<String> {
        self.prefix.iter().chain(&self.cycle).flatten().cloned().collect()
    }

    /// Projection of every letter onto `keep`.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> LassoWord {
        let f = |l: &Letter| l.intersection(keep).cloned().collect();
        LassoWord::new(self.prefix.iter().map(f).collect(), self.cycle.iter().map(f).collect())
    }

    /// All lassos over subsets of `props` with `|u| + |v| <= max_len`.
    pub fn enumerate(props: &[&str], max_len: usize) -> Vec<LassoWord> {
        let letters: Vec<Letter> = (0..1usize << props.len())
            .map(|m| {
                props
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, p)| p.to_string())
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for total in 1..=max_len {
            let mut idx = vec![0usize; total];
            loop {
                let word: Vec<Letter> = idx.iter().map(|&i| letters[i].clone()).collect();
                for split in 0..total {
                    out.push(LassoWord::new(word[..split].to_vec(), word[split..].to_vec()));
                }
                let mut k = 0;
                while k < total {
                    idx[k] += 1;
                    if idx[k] < letters.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == total {
                    break;
                }
            }
        }
        out
    }
}

pub(crate) fn fmt_letter(l: &Letter, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{{")?;
    for (i, p) in l.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{p}")?;
    }
    write!(f, "}}")
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.prefix {
            fmt_letter(l, f)?;
        }
        write!(f, "|")?;
        for l in &self.cycle {
            fmt_letter(l, f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_count() {
        // sum over total length L of L * 4^L for two propositions
        assert_eq!(LassoWord::enumerate(&["a", "p"], 4).len(), 4 + 32 + 192 + 1024);
        assert_eq!(LassoWord::enumerate(&[], 3).len(), 1 + 2 + 3);
    }

    #[test]
    fn positions_reduce_into_the_cycle() {
        let w = LassoWord::new(vec![letter(["a"])], vec![letter([]), letter(["b"])]);
        assert_eq!(w.reduce(0), 0);
        assert_eq!(w.reduce(3), 1);
        assert_eq!(w.reduce(4), 2);
        assert_eq!(w.next(2), 1);
        assert_eq!(w.letter_at(6), &letter(["b"]));
        assert_eq!(w.to_string(), "{a}|{}{b}");
    }
}

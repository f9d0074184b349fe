//! Positive boolean formulas over states in minimal disjunctive normal form.
//!
//! A formula is an antichain of clauses, each clause a sorted set of states
//! read as a conjunction. `[]` is false and `[[]]` is true.

pub type Clause = Vec<usize>;
pub type Dnf = Vec<Clause>;

pub fn tt() -> Dnf {
    vec![Vec::new()]
}

pub fn ff() -> Dnf {
    Vec::new()
}

pub fn var(q: usize) -> Dnf {
    vec![vec![q]]
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Drops duplicate and subsumed clauses and sorts the rest.
pub fn minimize(mut d: Dnf) -> Dnf {
    d.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    d.dedup();
    let mut out: Dnf = Vec::new();
    for c in d {
        if !out.iter().any(|o| subset(o, &c)) {
            out.push(c);
        }
    }
    out.sort();
    out
}

pub fn or(a: &Dnf, b: &Dnf) -> Dnf {
    minimize(a.iter().chain(b).cloned().collect())
}

pub fn and(a: &Dnf, b: &Dnf) -> Dnf {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut c: Clause = x.iter().chain(y).copied().collect();
            c.sort_unstable();
            c.dedup();
            out.push(c);
        }
    }
    minimize(out)
}

pub fn is_true(d: &Dnf) -> bool {
    d.len() == 1 && d[0].is_empty()
}

pub fn is_false(d: &Dnf) -> bool {
    d.is_empty()
}

/// Whether the set `s` (sorted) satisfies `d`.
pub fn satisfied_by(d: &Dnf, s: &[usize]) -> bool {
    d.iter().any(|c| subset(c, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let a = or(&var(1), &var(2));
        let b = and(&a, &var(1));
        assert_eq!(b, vec![vec![1]]);
        assert_eq!(and(&a, &ff()), ff());
        assert_eq!(or(&a, &tt()), tt());
        assert_eq!(and(&var(3), &tt()), var(3));
        assert!(satisfied_by(&and(&var(1), &var(3)), &[1, 2, 3]));
        assert!(!satisfied_by(&and(&var(1), &var(3)), &[1, 2]));
        assert_eq!(minimize(vec![vec![1, 2], vec![1], vec![1, 2]]), vec![vec![1]]);
    }
}

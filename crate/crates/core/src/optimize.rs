//! Optimization objectives and monotone searches over parameter values.

use std::fmt;
use std::str::FromStr;

use crate::Error;

/// Which extremal valuation to compute. Min objectives apply to PLDL◇
/// formulas, Max objectives to PLDL□ formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Smallest value of the smallest variable.
    MinMin,
    /// Smallest value of the largest variable.
    MinMax,
    /// Largest value of the largest variable.
    MaxMax,
    /// Largest value of the smallest variable.
    MaxMin,
}

impl Objective {
    pub const ALL: [Objective; 4] = [Objective::MinMin, Objective::MinMax, Objective::MaxMax, Objective::MaxMin];

    pub fn is_min(self) -> bool {
        matches!(self, Objective::MinMin | Objective::MinMax)
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::MinMin => "min-min",
            Objective::MinMax => "min-max",
            Objective::MaxMax => "max-max",
            Objective::MaxMin => "max-min",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s.to_ascii_lowercase().replace('_', "-"))
            .ok_or_else(|| Error::Invalid(format!("unknown objective {s}")))
    }
}

/// An optimal parameter value; `Infinite` only arises for Max objectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Optimum {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Optimum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Optimum::Finite(k) => write!(f, "{k}"),
            Optimum::Infinite => f.write_str("inf"),
        }
    }
}

/// Least `k` in `lo..=hi` with `pred(k)`, for `pred` monotone from false to
/// true. Probes at doubling distances from `lo`, then bisects.
pub fn least_true(
    lo: u64,
    hi: u64,
    pred: &mut dyn FnMut(u64) -> Result<bool, Error>,
) -> Result<Option<u64>, Error> {
    if lo > hi {
        return Ok(None);
    }
    let mut below = None::<u64>;
    let mut step = 1u64;
    let mut probe = lo;
    let top = loop {
        if pred(probe)? {
            break probe;
        }
        below = Some(probe);
        if probe == hi {
            return Ok(None);
        }
        probe = probe.saturating_add(step).min(hi);
        step = step.saturating_mul(2);
    };
    let (mut a, mut b) = (below.map_or(lo, |x| x + 1), top);
    while a < b {
        let mid = a + (b - a) / 2;
        if pred(mid)? {
            b = mid;
        } else {
            a = mid + 1;
        }
    }
    Ok(Some(a))
}

/// Greatest `k` in `lo..=hi` with `pred(k)`, for `pred` monotone from true
/// to false.
pub fn greatest_true(
    lo: u64,
    hi: u64,
    pred: &mut dyn FnMut(u64) -> Result<bool, Error>,
) -> Result<Option<u64>, Error> {
    if lo > hi || !pred(lo)? {
        return Ok(None);
    }
    // the first false value, found by the mirrored search
    let first_false = least_true(lo + 1, hi, &mut |k| Ok(!pred(k)?))?;
    Ok(Some(first_false.map_or(hi, |k| k - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn searches_match_scan() {
        for hi in 0..20u64 {
            for t in 0..=hi + 1 {
                let got = least_true(0, hi, &mut |k| Ok(k >= t)).unwrap();
                let want = (0..=hi).find(|&k| k >= t);
                assert_eq!(got, want, "least hi={hi} t={t}");
                let got = greatest_true(0, hi, &mut |k| Ok(k < t)).unwrap();
                let want = (0..=hi).rev().find(|&k| k < t);
                assert_eq!(got, want, "greatest hi={hi} t={t}");
            }
        }
    }

    #[test]
    fn objectives_parse() {
        assert_eq!("min-max".parse::<Objective>().unwrap(), Objective::MinMax);
        assert_eq!("MaxMin".to_lowercase().parse::<Objective>().ok(), None);
        assert_eq!("MAX_MIN".parse::<Objective>().unwrap(), Objective::MaxMin);
        assert_eq!(Optimum::Infinite.to_string(), "inf");
    }
}

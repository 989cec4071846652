use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Splitting type `⊕ O(aᵢ)` of a bundle on P¹, stored ascending.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SplittingType(Vec<i64>);

/// Positivity properties of a splitting type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicates {
    pub ample: bool,
    pub globally_generated: bool,
    pub balanced: bool,
    pub degree: i64,
    pub rank: usize,
}

/// `h⁰(O(a)(d))`
pub fn h0_line(a: i64, d: i64) -> usize {
    (a + d + 1).max(0) as usize
}

impl SplittingType {
    pub fn new(mut summands: Vec<i64>) -> Self {
        summands.sort_unstable();
        SplittingType(summands)
    }

    pub fn uniform(a: i64, rank: usize) -> Self {
        SplittingType(alloc::vec![a; rank])
    }

    pub fn summands(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn min(&self) -> Option<i64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.0.last().copied()
    }

    pub fn dual(&self) -> Self {
        SplittingType(self.0.iter().rev().map(|a| -a).collect())
    }

    pub fn twist(&self, d: i64) -> Self {
        SplittingType(self.0.iter().map(|a| a + d).collect())
    }

    /// Direct sum.
    pub fn sum(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self::new(v)
    }

    pub fn h0(&self, d: i64) -> usize {
        self.0.iter().map(|a| h0_line(*a, d)).sum()
    }

    pub fn is_ample(&self) -> bool {
        self.0.iter().all(|a| *a >= 1)
    }

    pub fn is_globally_generated(&self) -> bool {
        self.0.iter().all(|a| *a >= 0)
    }

    pub fn is_balanced(&self) -> bool {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => hi - lo <= 1,
            _ => true,
        }
    }

    pub fn predicates(&self) -> Predicates {
        Predicates {
            ample: self.is_ample(),
            globally_generated: self.is_globally_generated(),
            balanced: self.is_balanced(),
            degree: self.degree(),
            rank: self.rank(),
        }
    }

    /// Twists outside this window have identical `h⁰` for any two types of
    /// the same rank and degree whose entries lie in `[lo, hi]`.
    fn window(&self, other: &Self) -> (i64, i64) {
        let lo = self.min().unwrap_or(0).min(other.min().unwrap_or(0));
        let hi = self.max().unwrap_or(0).max(other.max().unwrap_or(0));
        (-hi - 1, -lo + 1)
    }

    /// `h⁰(self(d)) ≤ h⁰(other(d))` for every twist `d`.
    pub fn h0_dominated_by(&self, other: &Self) -> bool {
        let (lo, hi) = self.window(other);
        let tail_ok = self.rank() <= other.rank()
            && (self.rank() < other.rank() || self.degree() <= other.degree());
        tail_ok && (lo..=hi).all(|d| self.h0(d) <= other.h0(d))
    }

    /// Recovers a splitting type from its `h⁰` profile. `start` must be a
    /// twist with `h⁰ = 0`; the scan gives up after `max_steps` twists.
    pub fn from_h0<O>(rank: usize, start: i64, max_steps: usize, mut oracle: O) -> Result<Self>
    where
        O: FnMut(i64) -> Result<usize>,
    {
        let h_start = oracle(start)?;
        if h_start != 0 {
            return Err(Error::InconsistentProfile(alloc::format!("h0({start}) = {h_start}, expected 0")));
        }
        let mut summands = Vec::with_capacity(rank);
        let mut prev_h = 0usize;
        let mut prev_delta = 0usize;
        let mut d = start;
        for _ in 0..max_steps {
            if prev_delta == rank {
                return Ok(Self::new(summands));
            }
            d += 1;
            let h = oracle(d)?;
            if h < prev_h {
                return Err(Error::InconsistentProfile(alloc::format!("h0 decreases at twist {d}")));
            }
            let delta = h - prev_h;
            if delta < prev_delta || delta > rank {
                return Err(Error::InconsistentProfile(alloc::format!(
                    "first difference {delta} at twist {d} after {prev_delta} (rank {rank})"
                )));
            }
            for _ in prev_delta..delta {
                summands.push(-d);
            }
            prev_h = h;
            prev_delta = delta;
        }
        if prev_delta == rank {
            Ok(Self::new(summands))
        } else {
            Err(Error::InconsistentProfile(alloc::format!("profile did not stabilize within {max_steps} twists")))
        }
    }

    /// `⊕O(aᵢ)` rendering with exponents for repeated summands.
    pub fn render_sum(&self) -> String {
        if self.0.is_empty() {
            return String::from("0");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let a = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == a {
                j += 1;
            }
            let count = j - i;
            parts.push(if count == 1 { alloc::format!("O({a})") } else { alloc::format!("O({a})^{count}") });
            i = j;
        }
        parts.join(" ⊕ ")
    }
}

impl From<Vec<i64>> for SplittingType {
    fn from(v: Vec<i64>) -> Self {
        Self::new(v)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn h0_of_negative_pair() {
        assert_eq!(SplittingType::new(vec![-5, -5]).h0(7), 6);
    }

    #[test]
    fn inference_round_trip() {
        let e = SplittingType::new(vec![6, 5, 5]);
        let got = SplittingType::from_h0(3, -7, 100, |d| Ok(e.h0(d))).unwrap();
        assert_eq!(got.summands(), &[5, 5, 6]);
    }

    #[test]
    fn inference_from_partial_profile() {
        // only h0(3), h0(4), h0(5) are pinned; the rest follow from rank 5
        let oracle = |d: i64| -> Result<usize> {
            Ok(match d {
                i64::MIN..=3 => 0,
                4 => 3,
                _ => 8 + 5 * (d - 5) as usize,
            })
        };
        let got = SplittingType::from_h0(5, 3, 100, oracle).unwrap();
        assert_eq!(got.summands(), &[-5, -5, -4, -4, -4]);
    }

    #[test]
    fn inconsistent_profiles_are_rejected() {
        let bad = |d: i64| -> Result<usize> { Ok(if d <= 0 { 0 } else { 3 }) };
        assert!(matches!(SplittingType::from_h0(2, 0, 10, bad), Err(Error::InconsistentProfile(_))));
        assert!(SplittingType::from_h0(1, 5, 10, |d| Ok(d.max(0) as usize)).is_err());
    }

    #[test]
    fn predicates() {
        let p = SplittingType::new(vec![1, 1]).predicates();
        assert!(p.ample && p.balanced);
        let p = SplittingType::new(vec![0, 2]).predicates();
        assert!(!p.ample && !p.balanced && p.globally_generated);
        let d = SplittingType::new(vec![-5, -5, -4, -4, -4]).dual();
        assert_eq!(d.summands(), &[4, 4, 4, 5, 5]);
        assert!(d.is_ample() && d.is_balanced());
    }

    #[test]
    fn rendering() {
        let s = SplittingType::new(vec![2, 0, 2]);
        assert_eq!(alloc::format!("{s}"), "[0,2,2]");
        assert_eq!(s.render_sum(), "O(0) ⊕ O(2)^2");
    }

    proptest! {
        #[test]
        fn dual_and_twist(v in proptest::collection::vec(-8i64..8, 0..6), d in -5i64..5) {
            let s = SplittingType::new(v);
            prop_assert_eq!(s.dual().dual(), s.clone());
            prop_assert_eq!(s.twist(d).degree(), s.degree() + d * s.rank() as i64);
            let lo = -s.max().unwrap_or(0) - 2;
            prop_assert_eq!(SplittingType::from_h0(s.rank(), lo, 64, |k| Ok(s.h0(k))).unwrap(), s);
        }

        #[test]
        fn balanced_types_are_h0_minimal(v in proptest::collection::vec(-6i64..6, 1..6)) {
            let s = SplittingType::new(v);
            let r = s.rank() as i64;
            let q = s.degree().div_euclid(r);
            let extra = s.degree().rem_euclid(r) as usize;
            let mut b = alloc::vec![q; s.rank()];
            for x in b.iter_mut().take(extra) {
                *x += 1;
            }
            let balanced = SplittingType::new(b);
            prop_assert!(balanced.h0_dominated_by(&s));
        }
    }
}

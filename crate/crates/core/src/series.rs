//! Convergence bookkeeping for series and suprema over modes.
//!
//! A finite truncation can never prove divergence, so divergence is
//! declared by a conservative heuristic and reported with a witness: any
//! term above [`EXPLOSION_THRESHOLD`] (or non-finite), or a run of
//! [`MONOTONE_RUN`] consecutive non-decreasing positive terms past mode
//! [`MONOTONE_START`]. For suprema the run must be strictly increasing,
//! since a bounded constant sequence has a finite sup.

use core::fmt;

use serde::{Deserialize, Serialize};

pub const EXPLOSION_THRESHOLD: f64 = 1e12;
pub const MONOTONE_RUN: usize = 8;
pub const MONOTONE_START: usize = 16;

/// A nonnegative real or `+∞`. Serialised as a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite => None,
        }
    }

    /// Maps an `f64` onto the extended line, sending overflow to `Infinite`.
    pub fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            ExtendedReal::Finite(v)
        } else {
            ExtendedReal::Infinite
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v:e}"),
            ExtendedReal::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v),
            ExtendedReal::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = ExtendedReal;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v))
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v == "inf" {
                    Ok(ExtendedReal::Infinite)
                } else {
                    Err(E::custom("expected \"inf\""))
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// 1-based mode number.
    pub index: usize,
    pub term: f64,
}

/// Outcome of a series (or supremum) evaluation over modes.
///
/// `value` is finite exactly when `converged` is true.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesVerdict {
    pub value: ExtendedReal,
    pub converged: bool,
    pub terms_examined: usize,
    pub divergence_witness: Option<Witness>,
    /// Terms were still growing at the last examined mode, so the partial
    /// result may not have stabilised.
    pub tail_increasing: bool,
}

impl SeriesVerdict {
    pub fn value(&self) -> Option<f64> {
        self.value.finite()
    }

    pub fn zero() -> Self {
        Self::sum((0..0).map(|_| 0.0))
    }

    /// Sums `terms` (mode 1 first) under the divergence heuristic.
    pub fn sum<I: IntoIterator<Item = f64>>(terms: I) -> Self {
        Self::scan(terms, Mode::Sum)
    }

    /// Supremum of `terms` under the (strict) divergence heuristic.
    pub fn sup<I: IntoIterator<Item = f64>>(terms: I) -> Self {
        Self::scan(terms, Mode::Sup)
    }

    fn scan<I: IntoIterator<Item = f64>>(terms: I, mode: Mode) -> Self {
        let mut acc = 0.0;
        let mut examined = 0;
        let mut run = 0;
        let mut prev: Option<f64> = None;
        let mut growing_tail = false;
        for (i, t) in terms.into_iter().enumerate() {
            let index = i + 1;
            examined = index;
            let witness = Witness { index, term: t };
            if !t.is_finite() || libm::fabs(t) > EXPLOSION_THRESHOLD {
                return Self::divergent(examined, witness);
            }
            if let Some(p) = prev {
                let growing = match mode {
                    Mode::Sum => t > 0.0 && t >= p,
                    Mode::Sup => t > p,
                };
                growing_tail = t > p;
                // only growth beyond MONOTONE_START counts towards the run
                if growing && index > MONOTONE_START {
                    run += 1;
                } else if !growing {
                    run = 0;
                }
                if run >= MONOTONE_RUN {
                    return Self::divergent(examined, witness);
                }
            }
            prev = Some(t);
            match mode {
                Mode::Sum => acc += t,
                Mode::Sup => acc = f64::max(acc, libm::fabs(t)),
            }
        }
        Self {
            value: ExtendedReal::Finite(acc),
            converged: true,
            terms_examined: examined,
            divergence_witness: None,
            tail_increasing: growing_tail,
        }
    }

    fn divergent(examined: usize, witness: Witness) -> Self {
        Self {
            value: ExtendedReal::Infinite,
            converged: false,
            terms_examined: examined,
            divergence_witness: Some(witness),
            tail_increasing: true,
        }
    }
}

#[derive(Clone, Copy)]
enum Mode {
    Sum,
    Sup,
}

impl core::fmt::Display for SeriesVerdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match (&self.value, &self.divergence_witness) {
            (ExtendedReal::Finite(v), _) => {
                write!(f, "finite ({v:e} over {} terms)", self.terms_examined)
            }
            (ExtendedReal::Infinite, Some(w)) => write!(
                f,
                "divergent after {} terms (witness n = {}, term {:e})",
                self.terms_examined, w.index, w.term
            ),
            (ExtendedReal::Infinite, None) => {
                write!(f, "divergent after {} terms", self.terms_examined)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_converges() {
        let v = SeriesVerdict::sum((0..100).map(|k| 0.5f64.powi(k)));
        assert!(v.converged);
        assert!((v.value().unwrap() - 2.0).abs() < 1e-12);
        assert!(!v.tail_increasing);
    }

    #[test]
    fn explosion_gives_witness() {
        let v = SeriesVerdict::sum((1..40).map(|n| (n as f64).powi(10)));
        assert!(!v.converged);
        assert_eq!(v.value, ExtendedReal::Infinite);
        let w = v.divergence_witness.unwrap();
        // 16^10 ≈ 1.1e12 is the first term above the cap
        assert_eq!(w.index, 16);
    }

    #[test]
    fn monotone_run_past_sixteen() {
        let v = SeriesVerdict::sum((1..=512).map(|n| (n * n) as f64));
        assert_eq!(
            v.divergence_witness.unwrap().index,
            MONOTONE_START + MONOTONE_RUN
        );
    }

    #[test]
    fn zeros_and_constants() {
        assert!(SeriesVerdict::sum((0..64).map(|_| 0.0)).converged);
        // a constant sequence has finite sup but a divergent sum
        assert!(SeriesVerdict::sup((0..64).map(|_| 1.0)).converged);
        assert!(!SeriesVerdict::sum((0..64).map(|_| 1.0)).converged);
    }

    #[test]
    fn short_growing_sequence_flags_tail() {
        let v = SeriesVerdict::sup((1..=8).map(|n| n as f64));
        assert!(v.converged);
        assert!(v.tail_increasing);
        assert_eq!(v.value(), Some(8.0));
    }

    #[test]
    fn extended_real_display() {
        assert_eq!(alloc::format!("{}", ExtendedReal::Infinite), "inf");
        assert_eq!(
            ExtendedReal::from_f64(f64::INFINITY),
            ExtendedReal::Infinite
        );
        assert_eq!(ExtendedReal::from_f64(2.0).finite(), Some(2.0));
    }
}

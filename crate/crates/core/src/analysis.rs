//! Decoding of selector assignments and occurrence statistics over reads.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::CspInstance;
use crate::model::Assignment;
use crate::sampler::SampleSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum InvalidReason {
    /// No selector is on at this position (1-based).
    ZeroSelected(usize),
    /// Selected selectors carry different symbols.
    ConflictingSymbols(usize),
    /// More than one selector is on; only reported under strict decoding.
    MultipleSelected(usize),
}

impl std::fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InvalidReason::ZeroSelected(i) => write!(f, "no symbol selected at position {i}"),
            InvalidReason::ConflictingSymbols(i) => write!(f, "conflicting symbols at position {i}"),
            InvalidReason::MultipleSelected(i) => write!(f, "several selectors on at position {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecodedOutcome {
    Valid(String),
    Invalid(InvalidReason),
}

impl DecodedOutcome {
    pub fn as_valid(&self) -> Option<&str> {
        match self {
            DecodedOutcome::Valid(s) => Some(s),
            DecodedOutcome::Invalid(_) => None,
        }
    }
}

/// How multiple active selectors at one position are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodeMode {
    /// Accept several active selectors when they all carry the same symbol.
    #[default]
    SameSymbol,
    /// Require exactly one active selector per position.
    StrictOneHot,
}

pub fn decode(a: &Assignment, instance: &CspInstance) -> Result<DecodedOutcome> {
    decode_with(a, instance, DecodeMode::SameSymbol)
}

pub fn decode_with(a: &Assignment, instance: &CspInstance, mode: DecodeMode) -> Result<DecodedOutcome> {
    let (n, m) = (instance.n(), instance.m());
    if a.len() != n * m {
        return Err(Error::LengthMismatch {
            index: None,
            expected: n * m,
            found: a.len(),
        });
    }
    let mut out = String::with_capacity(m);
    for i in 1..=m {
        let base = (i - 1) * n;
        let mut chosen: Option<char> = None;
        let mut active = 0;
        for x in 0..n {
            if !a.get(base + x) {
                continue;
            }
            active += 1;
            let symbol = instance.strings()[x][i - 1];
            match chosen {
                None => chosen = Some(symbol),
                Some(c) if c != symbol => {
                    return Ok(DecodedOutcome::Invalid(InvalidReason::ConflictingSymbols(i)))
                }
                Some(_) => {}
            }
        }
        match chosen {
            None => return Ok(DecodedOutcome::Invalid(InvalidReason::ZeroSelected(i))),
            Some(_) if active > 1 && mode == DecodeMode::StrictOneHot => {
                return Ok(DecodedOutcome::Invalid(InvalidReason::MultipleSelected(i)))
            }
            Some(c) => out.push(c),
        }
    }
    Ok(DecodedOutcome::Valid(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Occurrence {
    /// Number of reads decoding to the string.
    pub count: usize,
    /// `count / num_reads`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccurrenceReport {
    pub num_reads: usize,
    pub per_string: BTreeMap<String, Occurrence>,
    pub invalid_count: usize,
    pub invalid_reasons: BTreeMap<String, usize>,
    /// Largest occurrence ratio; 0 when no read decodes to a valid string.
    pub mor: f64,
    pub mor_strings: BTreeSet<String>,
}

impl OccurrenceReport {
    pub fn ratio_of(&self, s: &str) -> f64 {
        self.per_string.get(s).map_or(0.0, |o| o.ratio)
    }

    pub fn count_of(&self, s: &str) -> usize {
        self.per_string.get(s).map_or(0, |o| o.count)
    }
}

pub fn occurrence_report(samples: &SampleSet, instance: &CspInstance) -> Result<OccurrenceReport> {
    occurrence_report_with(samples, instance, DecodeMode::SameSymbol)
}

/// Pools the counts of all records decoding to the same string. Invalid reads
/// stay in the denominator but form no bucket.
pub fn occurrence_report_with(
    samples: &SampleSet,
    instance: &CspInstance,
    mode: DecodeMode,
) -> Result<OccurrenceReport> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut invalid_reasons: BTreeMap<String, usize> = BTreeMap::new();
    let mut invalid_count = 0;
    for record in &samples.records {
        match decode_with(&record.assignment, instance, mode)? {
            DecodedOutcome::Valid(s) => *counts.entry(s).or_default() += record.count,
            DecodedOutcome::Invalid(reason) => {
                invalid_count += record.count;
                *invalid_reasons.entry(reason.to_string()).or_default() += record.count;
            }
        }
    }
    Ok(build_report(samples.num_reads, counts, invalid_count, invalid_reasons))
}

pub(crate) fn build_report(
    num_reads: usize,
    counts: BTreeMap<String, usize>,
    invalid_count: usize,
    invalid_reasons: BTreeMap<String, usize>,
) -> OccurrenceReport {
    let denominator = num_reads.max(1) as f64;
    let per_string: BTreeMap<String, Occurrence> = counts
        .into_iter()
        .map(|(s, count)| {
            (
                s,
                Occurrence {
                    count,
                    ratio: count as f64 / denominator,
                },
            )
        })
        .collect();
    let top = per_string.values().map(|o| o.count).max().unwrap_or(0);
    let mor_strings = per_string
        .iter()
        .filter(|(_, o)| top > 0 && o.count == top)
        .map(|(s, _)| s.clone())
        .collect();
    OccurrenceReport {
        num_reads,
        mor: top as f64 / denominator,
        per_string,
        invalid_count,
        invalid_reasons,
        mor_strings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::SampleRecord;

    fn set1() -> CspInstance {
        CspInstance::new(["aaa", "aaa", "ddd"]).unwrap()
    }

    fn bits(s: &str) -> Assignment {
        Assignment::from(s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    fn record(a: Assignment, count: usize) -> SampleRecord {
        SampleRecord {
            assignment: a,
            energy: 0.0,
            count,
        }
    }

    #[test]
    fn decode_examples() {
        let inst = set1();
        assert_eq!(
            decode(&bits("100100100"), &inst).unwrap(),
            DecodedOutcome::Valid("aaa".into())
        );
        assert_eq!(
            decode(&bits("110100100"), &inst).unwrap(),
            DecodedOutcome::Valid("aaa".into())
        );
        assert_eq!(
            decode(&bits("000000000"), &inst).unwrap(),
            DecodedOutcome::Invalid(InvalidReason::ZeroSelected(1))
        );
        assert_eq!(
            decode(&bits("100101100"), &inst).unwrap(),
            DecodedOutcome::Invalid(InvalidReason::ConflictingSymbols(2))
        );
        assert_eq!(
            decode(&bits("001100000"), &inst).unwrap(),
            DecodedOutcome::Invalid(InvalidReason::ZeroSelected(3))
        );
        assert!(decode(&bits("1001"), &inst).is_err());
    }

    #[test]
    fn strict_decoding_rejects_duplicates() {
        assert_eq!(
            decode_with(&bits("110100100"), &set1(), DecodeMode::StrictOneHot).unwrap(),
            DecodedOutcome::Invalid(InvalidReason::MultipleSelected(1))
        );
    }

    #[test]
    fn pooled_occurrence() {
        let inst = set1();
        let samples = SampleSet {
            records: vec![
                record(bits("100100100"), 60),
                record(bits("010010010"), 40),
            ],
            num_reads: 100,
        };
        let r = occurrence_report(&samples, &inst).unwrap();
        assert_eq!(r.per_string.len(), 1);
        assert_eq!(r.count_of("aaa"), 100);
        assert_eq!(r.ratio_of("aaa"), 1.0);
        assert_eq!(r.mor, 1.0);
        assert_eq!(r.mor_strings, BTreeSet::from(["aaa".to_string()]));
    }

    #[test]
    fn ratio_with_mixed_outcomes() {
        let inst = CspInstance::new(["aaa", "aaa", "ded", "ded", "ded", "ddd"]).unwrap();
        let ded = bits("001000001000001000");
        let aaa = bits("100000100000100000");
        let samples = SampleSet {
            records: vec![record(ded, 53), record(aaa, 30), record(Assignment::zeros(18), 17)],
            num_reads: 100,
        };
        let r = occurrence_report(&samples, &inst).unwrap();
        assert_eq!(r.ratio_of("ded"), 0.53);
        assert_eq!(r.ratio_of("aaa"), 0.3);
        assert_eq!(r.invalid_count, 17);
        assert_eq!(r.mor, 0.53);
        let total: usize = r.per_string.values().map(|o| o.count).sum();
        assert_eq!(total + r.invalid_count, r.num_reads);
    }

    #[test]
    fn all_invalid_reads() {
        let samples = SampleSet {
            records: vec![record(Assignment::zeros(9), 10)],
            num_reads: 10,
        };
        let r = occurrence_report(&samples, &set1()).unwrap();
        assert!(r.per_string.is_empty());
        assert_eq!(r.invalid_count, 10);
        assert_eq!(r.mor, 0.0);
        assert!(r.mor_strings.is_empty());
    }
}

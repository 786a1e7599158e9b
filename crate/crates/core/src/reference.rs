//! The four benchmark string sets with their expected closest strings and
//! the multipliers and chain strengths used for them on hardware.

use crate::instance::CspInstance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSet {
    pub id: usize,
    pub strings: &'static [&'static str],
    pub expected: &'static str,
    pub a: f64,
    pub b: f64,
    /// Chain strength used on the QPU.
    pub gamma: f64,
    /// Occurrence ratio of `expected` on the QPU, standard and numeric objective.
    pub qpu_ratio: (f64, f64),
}

impl ReferenceSet {
    pub fn instance(&self) -> CspInstance {
        CspInstance::new(self.strings).expect("reference sets are valid")
    }
}

pub const SETS: [ReferenceSet; 4] = [
    ReferenceSet {
        id: 1,
        strings: &["aaa", "aaa", "ddd"],
        expected: "aaa",
        a: 2.0,
        b: 1.0,
        gamma: 0.0,
        qpu_ratio: (1.00, 1.00),
    },
    ReferenceSet {
        id: 2,
        strings: &["aaa", "aaa", "ddd", "ddd", "ddd"],
        expected: "ddd",
        a: 3.0,
        b: 1.0,
        gamma: 1.0,
        qpu_ratio: (0.99, 0.97),
    },
    ReferenceSet {
        id: 3,
        strings: &["aaa", "aaa", "ded", "ded", "ded", "ddd"],
        expected: "ded",
        a: 5.0,
        b: 1.0,
        gamma: 6.0,
        qpu_ratio: (0.53, 0.51),
    },
    ReferenceSet {
        id: 4,
        strings: &["abcdef", "ghijkl", "abcghi", "xyzjkl", "abcmno"],
        expected: "abcjkl",
        a: 4.0,
        b: 1.0,
        gamma: 5.0,
        qpu_ratio: (0.22, 0.22),
    },
];

pub fn set(id: usize) -> &'static ReferenceSet {
    &SETS[id - 1]
}

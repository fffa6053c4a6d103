use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

use super::PersistenceDiagram;

/// Persistent Betti numbers `[B0, B1]` at a persistence threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BettiSignature {
    pub b0: usize,
    pub b1: usize,
    pub thresh: f64,
}

impl BettiSignature {
    pub fn counts(&self) -> [usize; 2] {
        [self.b0, self.b1]
    }
}

impl fmt::Display for BettiSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.b0, self.b1)
    }
}

/// Counts the bars of each dimension strictly longer than `thresh`.
/// Essential bars always count.
pub fn persistent_betti<T: Scalar>(diagram: &PersistenceDiagram<T>, thresh: T) -> BettiSignature {
    let mut counts = [0usize; 2];
    for bar in diagram.bars() {
        if bar.dim < 2 && (bar.is_essential() || bar.persistence() > thresh) {
            counts[bar.dim] += 1;
        }
    }
    BettiSignature { b0: counts[0], b1: counts[1], thresh: thresh.as_f64() }
}

/// Limiting behaviour of a latent trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BehaviourClass {
    FixedPoint,
    TwoPointCycle,
    TwoLoopCycle,
    Other { b0: usize, b1: usize },
}

impl BehaviourClass {
    pub fn from_counts(b0: usize, b1: usize) -> Self {
        match (b0, b1) {
            (1, 0) => Self::FixedPoint,
            (2, 0) => Self::TwoPointCycle,
            (2, 2) => Self::TwoLoopCycle,
            _ => Self::Other { b0, b1 },
        }
    }

    pub fn from_signature(sig: &BettiSignature) -> Self {
        Self::from_counts(sig.b0, sig.b1)
    }

    /// Report column: the class name, with every `Other` signature collapsed.
    pub fn column(&self) -> &'static str {
        match self {
            Self::FixedPoint => "fixed_point",
            Self::TwoPointCycle => "two_point_cycle",
            Self::TwoLoopCycle => "two_loop_cycle",
            Self::Other { .. } => "other",
        }
    }

    pub const COLUMNS: [&'static str; 4] = ["fixed_point", "two_point_cycle", "two_loop_cycle", "other"];
}

impl fmt::Display for BehaviourClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Other { b0, b1 } => write!(f, "other[{b0},{b1}]"),
            c => f.write_str(c.column()),
        }
    }
}

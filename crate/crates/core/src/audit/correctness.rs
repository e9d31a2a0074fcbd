use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{AUDIT_TOL, INPUTS};
use crate::protocol::{decode, honest_measurement, ClientProgram, ClientSecrets, ProtocolError};
use crate::qsim::measure_observables;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectnessCase {
    pub a: u8,
    pub b: u8,
    pub r_bits: Vec<u8>,
    /// Born probability that the decoded bit is `1 ⊕ ab`.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectnessReport {
    #[serde(flatten)]
    pub program: ClientProgram,
    pub cases: Vec<CorrectnessCase>,
    pub min_probability: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CorrectnessReport {
    /// Re-judges the verdict at another tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self.pass = self.cases.iter().all(|c| (c.probability - 1.0).abs() <= tol);
        self
    }
}

/// Exhaustive sweep over inputs and pad assignments using exact Born
/// probabilities.
pub fn audit_correctness(program: impl Into<ClientProgram>) -> Result<CorrectnessReport, ProtocolError> {
    let program = program.into();
    let variant = program.variant;
    let pads: BTreeSet<Vec<u8>> = program.pad_assignments().into_iter().collect();
    let mut cases = Vec::with_capacity(4 * pads.len());
    for (a, b) in INPUTS {
        for r in &pads {
            let secrets = ClientSecrets::new(variant, a, b, r.clone())?;
            let (psi, bases) = honest_measurement(variant, &secrets)?;
            let dist = measure_observables(&psi, &bases)?;
            let mut probability = 0.0;
            for (bits, p) in dist.support(0.0) {
                if decode(variant, &bits, &secrets)? == 1 ^ (a & b) {
                    probability += p;
                }
            }
            cases.push(CorrectnessCase {
                a,
                b,
                r_bits: r.clone(),
                probability,
            });
        }
    }
    let min_probability = cases.iter().map(|c| c.probability).fold(f64::INFINITY, f64::min);
    Ok(CorrectnessReport {
        program,
        cases,
        min_probability,
        tolerance: AUDIT_TOL,
        pass: false,
    }
    .with_tolerance(AUDIT_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::ProtocolVariant::{self, *};

    #[test]
    fn every_variant_is_correct() {
        for v in ProtocolVariant::ALL {
            let r = audit_correctness(v).unwrap();
            assert!(r.pass, "{v}: {}", r.min_probability);
            assert_eq!(r.cases.len(), 4 << v.random_bits());
        }
    }

    #[test]
    fn case_counts() {
        assert_eq!(audit_correctness(GhzPreparingClient).unwrap().cases.len(), 8);
        assert_eq!(audit_correctness(GhzBounce).unwrap().cases.len(), 32);
        assert_eq!(audit_correctness(SingleQubitBounce).unwrap().cases.len(), 8);
    }

    #[test]
    fn weakened_programs_stay_correct() {
        let p = ClientProgram::new(GhzBounce).without_pad_bit(0);
        let r = audit_correctness(p).unwrap();
        assert!(r.pass);
        assert_eq!(r.cases.len(), 16);
    }
}

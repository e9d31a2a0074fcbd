use serde::{Deserialize, Serialize};

use super::{AUDIT_TOL, INPUTS};
use crate::protocol::{choi_of_client_map, client_unitaries, resource_state, ClientProgram, ProtocolError};
use crate::qsim::{trace_distance, uniform_mixture};
use crate::{DensityMatrix, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlindnessForm {
    /// Averaged state the client sends.
    Emission,
    /// Normalised Choi state of the averaged client map.
    Channel,
}

/// Four input-indexed states (index `2a + b`) and their pairwise distances.
/// Serialised reports carry the matrices only when the audit fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "BlindnessRepr", from = "BlindnessRepr")]
pub struct BlindnessReport {
    pub program: ClientProgram,
    pub form: BlindnessForm,
    /// No quantum system leaves the client, so there is nothing to compare.
    pub vacuous: bool,
    pub states: Vec<Matrix>,
    pub pairwise_trace_distance: [[f64; 4]; 4],
    pub max_pairwise_trace_distance: f64,
    pub max_elementwise_difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Serialize, Deserialize)]
struct BlindnessRepr {
    #[serde(flatten)]
    program: ClientProgram,
    form: BlindnessForm,
    vacuous: bool,
    pairwise_trace_distance: [[f64; 4]; 4],
    max_pairwise_trace_distance: f64,
    max_elementwise_difference: f64,
    tolerance: f64,
    pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    states: Option<Vec<Matrix>>,
}

impl From<BlindnessReport> for BlindnessRepr {
    fn from(r: BlindnessReport) -> Self {
        Self {
            program: r.program,
            form: r.form,
            vacuous: r.vacuous,
            pairwise_trace_distance: r.pairwise_trace_distance,
            max_pairwise_trace_distance: r.max_pairwise_trace_distance,
            max_elementwise_difference: r.max_elementwise_difference,
            tolerance: r.tolerance,
            states: (!r.pass).then_some(r.states),
            pass: r.pass,
        }
    }
}

impl From<BlindnessRepr> for BlindnessReport {
    fn from(r: BlindnessRepr) -> Self {
        Self {
            program: r.program,
            form: r.form,
            vacuous: r.vacuous,
            states: r.states.unwrap_or_default(),
            pairwise_trace_distance: r.pairwise_trace_distance,
            max_pairwise_trace_distance: r.max_pairwise_trace_distance,
            max_elementwise_difference: r.max_elementwise_difference,
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }
}

impl BlindnessReport {
    fn compare(program: ClientProgram, form: BlindnessForm, states: Vec<DensityMatrix>) -> Result<Self, ProtocolError> {
        let mut pairwise = [[0.0; 4]; 4];
        let mut elementwise: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                let t = trace_distance(&states[i], &states[j])?;
                pairwise[i][j] = t;
                pairwise[j][i] = t;
                elementwise = elementwise.max(states[i].matrix().max_abs_diff(states[j].matrix()));
            }
        }
        let max = pairwise.iter().flatten().copied().fold(0.0, f64::max);
        Ok(Self {
            program,
            form,
            vacuous: false,
            states: states.into_iter().map(DensityMatrix::into_matrix).collect(),
            pairwise_trace_distance: pairwise,
            max_pairwise_trace_distance: max,
            max_elementwise_difference: elementwise,
            tolerance: AUDIT_TOL,
            pass: false,
        }
        .with_tolerance(AUDIT_TOL))
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self.pass = self.max_pairwise_trace_distance <= tol;
        self
    }
}

/// Everything the client sends, averaged uniformly over her pad bits. Bounce
/// variants transform the honest server's state.
pub fn averaged_client_emission(program: impl Into<ClientProgram>, a: u8, b: u8) -> Result<DensityMatrix, ProtocolError> {
    let program = program.into();
    if !program.variant.client_emits() {
        return Err(ProtocolError::NoEmission(program.variant));
    }
    crate::protocol::variant::check_bit("a", a)?;
    crate::protocol::variant::check_bit("b", b)?;
    let start = resource_state(program.variant);
    let sent = client_unitaries(program, a, b)
        .iter()
        .map(|u| Ok(DensityMatrix::pure(&start.apply_unitary(u)?)))
        .collect::<Result<Vec<_>, ProtocolError>>()?;
    Ok(uniform_mixture(&sent)?)
}

/// Compares the averaged emission across all four inputs. Measuring-client
/// variants emit nothing and pass vacuously.
pub fn audit_blindness_emission(program: impl Into<ClientProgram>) -> Result<BlindnessReport, ProtocolError> {
    let program = program.into();
    if !program.variant.client_emits() {
        return Ok(BlindnessReport {
            program,
            form: BlindnessForm::Emission,
            vacuous: true,
            states: Vec::new(),
            pairwise_trace_distance: [[0.0; 4]; 4],
            max_pairwise_trace_distance: 0.0,
            max_elementwise_difference: 0.0,
            tolerance: AUDIT_TOL,
            pass: true,
        });
    }
    let states = INPUTS
        .iter()
        .map(|&(a, b)| averaged_client_emission(program, a, b))
        .collect::<Result<Vec<_>, _>>()?;
    BlindnessReport::compare(program, BlindnessForm::Emission, states)
}

/// Compares the Choi states of the averaged client map across all inputs,
/// which covers every state a server could send, ancillas included.
pub fn audit_blindness_channel(program: impl Into<ClientProgram>) -> Result<BlindnessReport, ProtocolError> {
    let program = program.into();
    let states = INPUTS
        .iter()
        .map(|&(a, b)| Ok(choi_of_client_map(program, a, b)?.normalized_state()))
        .collect::<Result<Vec<_>, ProtocolError>>()?;
    BlindnessReport::compare(program, BlindnessForm::Channel, states)
}

/// One weakened program and which audits catch it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeControl {
    #[serde(flatten)]
    pub program: ClientProgram,
    pub removed_pad_bit: usize,
    pub emission_fails: bool,
    pub channel_fails: Option<bool>,
}

impl NegativeControl {
    pub fn caught(&self) -> bool {
        self.emission_fails || self.channel_fails == Some(true)
    }
}

/// Removes each pad bit of each variant in turn and runs the applicable
/// blindness audits on the result.
pub fn negative_controls() -> Result<Vec<NegativeControl>, ProtocolError> {
    let mut out = Vec::new();
    for v in crate::protocol::ProtocolVariant::ALL {
        for i in 0..v.random_bits() {
            let program = ClientProgram::new(v).without_pad_bit(i);
            let emission_fails = !audit_blindness_emission(program)?.pass;
            let channel_fails = if v.is_bounce() {
                Some(!audit_blindness_channel(program)?.pass)
            } else {
                None
            };
            out.push(NegativeControl {
                program,
                removed_pad_bit: i,
                emission_fails,
                channel_fails,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::ProtocolVariant::{self, *};
    use crate::qsim::scalar::C;

    #[test]
    fn ghz_prep_emission_is_dephased_support() {
        let mut want = Matrix::zeros(8);
        want[(0b001, 0b001)] = C::new(0.5, 0.0);
        want[(0b110, 0b110)] = C::new(0.5, 0.0);
        for (a, b) in INPUTS {
            let got = averaged_client_emission(GhzPreparingClient, a, b).unwrap();
            assert!(got.matrix().max_abs_diff(&want) <= 1e-12);
        }
    }

    #[test]
    fn sq_prep_emission_is_maximally_mixed() {
        let half = Matrix::identity(2).scale_real(0.5);
        for (a, b) in INPUTS {
            let got = averaged_client_emission(SingleQubitPreparingClient, a, b).unwrap();
            assert!(got.matrix().max_abs_diff(&half) <= 1e-12);
        }
    }

    #[test]
    fn emission_audits_pass() {
        for v in ProtocolVariant::ALL {
            let r = audit_blindness_emission(v).unwrap();
            assert!(r.pass, "{v}");
            assert_eq!(r.vacuous, v.is_measuring());
        }
        assert!(matches!(
            averaged_client_emission(GhzMeasuringClient, 0, 0),
            Err(ProtocolError::NoEmission(_))
        ));
    }

    #[test]
    fn channel_audits_pass_for_bounce_only() {
        for v in ProtocolVariant::ALL {
            match audit_blindness_channel(v) {
                Ok(r) => assert!(v.is_bounce() && r.pass),
                Err(e) => assert!(!v.is_bounce() && matches!(e, ProtocolError::NoClientTransform(_))),
            }
        }
    }

    #[test]
    fn broken_pad_fails_channel_audit() {
        let p = ClientProgram::new(GhzBounce).without_pad_bit(1).without_pad_bit(2);
        let r = audit_blindness_channel(p).unwrap();
        assert!(!r.pass);
        assert!(r.max_pairwise_trace_distance > 0.1);
    }

    #[test]
    fn every_removed_pad_is_caught() {
        let controls = negative_controls().unwrap();
        assert_eq!(controls.len(), 6);
        assert!(controls.iter().all(NegativeControl::caught), "{controls:?}");
    }

    #[test]
    fn serialised_report_carries_matrices_only_on_failure() {
        let ok = serde_json::to_string(&audit_blindness_emission(GhzPreparingClient).unwrap()).unwrap();
        assert!(!ok.contains("\"states\""));
        let p = ClientProgram::new(GhzPreparingClient).without_pad_bit(0);
        let bad = audit_blindness_emission(p).unwrap();
        let json = serde_json::to_string(&bad).unwrap();
        assert!(json.contains("\"states\""));
        let back: BlindnessReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, bad);
    }

    #[test]
    fn channel_and_emission_agree_on_honest_inputs() {
        for v in [GhzBounce, SingleQubitBounce] {
            let start = DensityMatrix::pure(&resource_state(v));
            for (a, b) in INPUTS {
                let via_choi = choi_of_client_map(v, a, b).unwrap().apply(&start).unwrap();
                let direct = averaged_client_emission(v, a, b).unwrap();
                assert!(via_choi.approx_eq(&direct, 1e-12));
            }
        }
    }
}

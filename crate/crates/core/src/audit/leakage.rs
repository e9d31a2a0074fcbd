use serde::{Deserialize, Serialize};

use super::INPUTS;
use crate::protocol::engine::validate_strategy;
use crate::protocol::{client_unitaries, resource_state, ClientProgram, Povm, ProtocolError, ServerStrategy};
use crate::qsim::gates::ObservableBasis;
use crate::qsim::{helstrom_probability, optimal_guessing, uniform_mixture};
use crate::{DensityMatrix, QuantumState};

/// How well a server can tell the four inputs apart after one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    #[serde(flatten)]
    pub program: ClientProgram,
    pub strategy: String,
    /// Bayes-optimal probability of naming `(a, b)` from the strategy's own
    /// POVM outcome, uniform prior.
    pub guessing_probability: f64,
    /// `½(1 + T(ωᵢ, ωⱼ))` for the server's views, index `2a + b`.
    pub helstrom_pairwise: [[f64; 4]; 4],
    /// Certified bracket on the best four-way guess over every measurement
    /// of the server's view.
    pub optimal_guessing_lower: f64,
    pub optimal_guessing_upper: f64,
}

fn nothing_held() -> DensityMatrix {
    DensityMatrix::pure(&QuantumState::basis(1, 0).expect("one qubit"))
}

/// Everything the server holds once the client is done, averaged over the
/// client's pads, for each input (index `2a + b`). In measuring-client runs
/// this is only what the server kept back.
pub fn server_views(program: impl Into<ClientProgram>, strategy: &ServerStrategy) -> Result<Vec<DensityMatrix>, ProtocolError> {
    let program = program.into();
    let variant = program.variant;
    validate_strategy(variant, strategy)?;
    let g = variant.gadget_qubits();
    let held = match strategy {
        ServerStrategy::Malicious(m) if !variant.is_preparing() => m.prepared.as_ref().expect("validated").state.clone(),
        _ => DensityMatrix::pure(&resource_state(variant)),
    };
    if variant.is_measuring() {
        let view = if held.num_qubits() > g {
            held.partial_trace(&(g..held.num_qubits()).collect::<Vec<_>>())?
        } else {
            nothing_held()
        };
        return Ok(vec![view; 4]);
    }
    INPUTS
        .iter()
        .map(|&(a, b)| {
            let states = client_unitaries(program, a, b)
                .iter()
                .map(|u| held.evolve_leading(u))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(uniform_mixture(&states)?)
        })
        .collect()
}

fn strategy_povm(program: ClientProgram, strategy: &ServerStrategy, view_dim: usize) -> Povm {
    match strategy {
        ServerStrategy::Malicious(m) => match &m.povm {
            Some(p) if p.dim() == view_dim => p.clone(),
            _ => Povm::trivial(view_dim),
        },
        ServerStrategy::Honest if program.variant.is_measuring() => Povm::trivial(view_dim),
        ServerStrategy::Honest => Povm::pauli(&vec![ObservableBasis::MeasX; program.variant.gadget_qubits()], 0),
    }
}

pub fn leakage_under_strategy(
    program: impl Into<ClientProgram>,
    strategy: &ServerStrategy,
) -> Result<LeakageReport, ProtocolError> {
    let program = program.into();
    let views = server_views(program, strategy)?;
    let povm = strategy_povm(program, strategy, views[0].dim());
    let guessing_probability = 0.25
        * povm
            .elements()
            .iter()
            .map(|e| views.iter().map(|w| w.expectation(e)).fold(0.0, f64::max))
            .sum::<f64>();
    let mut helstrom = [[0.5; 4]; 4];
    for i in 0..4 {
        for j in i + 1..4 {
            let h = helstrom_probability(&views[i], &views[j])?;
            helstrom[i][j] = h;
            helstrom[j][i] = h;
        }
    }
    let bound = optimal_guessing(&views, &[0.25; 4], 1e-10, 5000)?;
    Ok(LeakageReport {
        program,
        strategy: strategy.describe(),
        guessing_probability,
        helstrom_pairwise: helstrom,
        optimal_guessing_lower: bound.lower,
        optimal_guessing_upper: bound.upper,
    })
}

//! Exhaustive search over two-round classical protocols whose client is
//! restricted to affine GF(2) maps.
//!
//! Encoder input bits are packed as `a | b << 1 | x << 2`; the decoder sees
//! the same bits followed by the server's reply.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::affine::{AffineMap, TruthTable};
use super::NogoError;

/// Largest candidate count a search runs without an explicit override.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_random_bits: usize,
    pub max_msg_bits: usize,
    pub max_reply_bits: usize,
}

impl SearchBounds {
    pub fn new(max_random_bits: usize, max_msg_bits: usize, max_reply_bits: usize) -> Self {
        Self {
            max_random_bits,
            max_msg_bits,
            max_reply_bits,
        }
    }

    fn shapes(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..=self.max_random_bits).flat_map(move |n| {
            (0..=self.max_msg_bits).flat_map(move |m| (0..=self.max_reply_bits).map(move |k| (n, m, k)))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalProtocolCandidate {
    pub n_random: usize,
    pub encoder: AffineMap,
    /// Reply for each message the server may receive.
    pub server_fn: TruthTable,
    pub decoder: AffineMap,
}

fn nand_of(v: u32) -> u32 {
    1 ^ (v & (v >> 1) & 1)
}

/// The encoder's output distribution over uniform `x` is the same for every
/// `(a, b)`.
pub fn classical_blindness_holds(cand: &ClassicalProtocolCandidate) -> bool {
    let histogram = |ab: u32| {
        let mut out: Vec<u32> = (0..1u32 << cand.n_random)
            .map(|x| cand.encoder.apply(ab | (x << 2)))
            .collect();
        out.sort_unstable();
        out
    };
    let base = histogram(0);
    (1..4).all(|ab| histogram(ab) == base)
}

/// The decoded bit is `NAND(a, b)` for every input and every `x`. A message
/// outside the server table's domain counts as a failure.
pub fn classical_correctness_holds(cand: &ClassicalProtocolCandidate) -> bool {
    let width = 2 + cand.n_random;
    (0..1u32 << width).all(|v| match cand.server_fn.get(cand.encoder.apply(v)) {
        Some(reply) => cand.decoder.apply(v | (reply << width)) == nand_of(v),
        None => false,
    })
}

/// Counts for one `(random bits, message bits, reply bits)` shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeSummary {
    pub n_random: usize,
    pub msg_bits: usize,
    pub reply_bits: usize,
    pub candidates: u128,
    pub blind: u128,
    pub correct: u128,
    pub blind_and_correct: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NogoSearchResult {
    pub bounds: SearchBounds,
    pub pruned: bool,
    pub candidates_checked: u128,
    pub analytic_count: u128,
    pub shapes: Vec<ShapeSummary>,
    /// First blind and correct candidate in enumeration order, if any.
    pub witness: Option<ClassicalProtocolCandidate>,
}

fn pow2(e: usize) -> Option<u128> {
    (e < 128).then(|| 1u128 << e)
}

/// Number of `m × n` GF(2) matrices of rank `r`.
fn matrices_of_rank(m: usize, n: usize, r: usize) -> Option<u128> {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        let pi = pow2(i)?;
        num = num.checked_mul(pow2(m)?.checked_sub(pi)?)?.checked_mul(pow2(n)?.checked_sub(pi)?)?;
        den = den.checked_mul(pow2(r)?.checked_sub(pi)?)?;
    }
    Some(num / den)
}

/// Closed-form size of the candidate space. With pruning, an encoder of rank
/// `r` has `2^r` reachable messages and the server table ranges over those
/// only; otherwise over all `2^m` messages. `None` if it overflows `u128`.
pub fn analytic_count(bounds: SearchBounds, pruned: bool) -> Option<u128> {
    bounds.shapes().try_fold(0u128, |acc, (n, m, k)| {
        let width = 2 + n;
        let decoders = pow2(width + k + 1)?;
        let pairs = if pruned {
            (0..=m.min(width)).try_fold(0u128, |s, r| {
                let encoders = matrices_of_rank(m, width, r)?.checked_mul(pow2(m)?)?;
                s.checked_add(encoders.checked_mul(pow2(k.checked_mul(1 << r)?)?)?)
            })?
        } else {
            let messages = 1usize.checked_shl(m.try_into().ok()?)?;
            pow2(m * (width + 1))?.checked_mul(pow2(k.checked_mul(messages)?)?)?
        };
        acc.checked_add(pairs.checked_mul(decoders)?)
    })
}

#[derive(Default)]
struct Tally {
    candidates: u128,
    blind: u128,
    correct: u128,
    blind_and_correct: u128,
    witness: Option<ClassicalProtocolCandidate>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.candidates += other.candidates;
        self.blind += other.blind;
        self.correct += other.correct;
        self.blind_and_correct += other.blind_and_correct;
        self.witness = self.witness.or(other.witness);
        self
    }
}

fn search_encoder(n: usize, m: usize, k: usize, index: u64, pruned: bool) -> Tally {
    let width = 2 + n;
    let encoder = AffineMap::from_index(width, m, index);
    let domain: Vec<u32> = if pruned { encoder.image() } else { (0..1u32 << m).collect() };
    let messages: Vec<u32> = (0..1u32 << width).map(|v| encoder.apply(v)).collect();
    let slot: Vec<usize> = messages
        .iter()
        .map(|msg| domain.binary_search(msg).expect("message in domain"))
        .collect();
    let shell = ClassicalProtocolCandidate {
        n_random: n,
        encoder: encoder.clone(),
        server_fn: TruthTable::from_index(&domain, k, 0),
        decoder: AffineMap::from_index(width + k, 1, 0),
    };
    let blind = classical_blindness_holds(&shell);
    let servers = 1u64 << (k * domain.len());
    let decoders = 1u64 << (width + k + 1);
    let mut t = Tally::default();
    for s in 0..servers {
        let replies: Vec<u32> = slot
            .iter()
            .map(|&j| ((s >> (j * k)) as u32) & super::affine::mask(k))
            .collect();
        for d in 0..decoders {
            let decoder = AffineMap::from_index(width + k, 1, d);
            let correct = (0..1u32 << width).all(|v| decoder.apply(v | (replies[v as usize] << width)) == nand_of(v));
            t.candidates += 1;
            t.blind += blind as u128;
            t.correct += correct as u128;
            if blind && correct {
                t.blind_and_correct += 1;
                if t.witness.is_none() {
                    t.witness = Some(ClassicalProtocolCandidate {
                        server_fn: TruthTable::from_index(&domain, k, s),
                        decoder,
                        ..shell.clone()
                    });
                }
            }
        }
    }
    t
}

/// Enumerates every candidate within `bounds`, in parallel over encoders.
/// Refuses before doing any work if the analytic count exceeds `budget`.
pub fn search_classical_nogo(bounds: SearchBounds, pruned: bool, budget: u128) -> Result<NogoSearchResult, NogoError> {
    let analytic = analytic_count(bounds, pruned);
    match analytic {
        Some(c) if c <= budget && c <= u64::MAX as u128 => {}
        _ => return Err(NogoError::BudgetExceeded { estimate: analytic, budget }),
    }
    let mut shapes = Vec::new();
    let mut total = Tally::default();
    for (n, m, k) in bounds.shapes() {
        let encoders = 1u64 << (m * (n + 3));
        let tallies: Vec<Tally> = (0..encoders)
            .into_par_iter()
            .map(|e| search_encoder(n, m, k, e, pruned))
            .collect();
        let t = tallies.into_iter().fold(Tally::default(), Tally::merge);
        shapes.push(ShapeSummary {
            n_random: n,
            msg_bits: m,
            reply_bits: k,
            candidates: t.candidates,
            blind: t.blind,
            correct: t.correct,
            blind_and_correct: t.blind_and_correct,
        });
        total = total.merge(t);
    }
    Ok(NogoSearchResult {
        bounds,
        pruned,
        candidates_checked: total.candidates,
        analytic_count: analytic.expect("checked above"),
        shapes,
        witness: total.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn cand(n: usize, encoder: AffineMap, table: &[(u32, u32)], k: usize, decoder: AffineMap) -> ClassicalProtocolCandidate {
        ClassicalProtocolCandidate {
            n_random: n,
            encoder,
            server_fn: TruthTable {
                out_bits: k,
                entries: table.iter().copied().collect::<BTreeMap<_, _>>(),
            },
            decoder,
        }
    }

    fn const_decoder(width: usize, bit: u32) -> AffineMap {
        AffineMap::new(width + 1, vec![0], bit).unwrap()
    }

    #[test]
    fn blindness_examples() {
        let table = [(0, 0), (1, 0)];
        let only_x = cand(1, AffineMap::new(3, vec![0b100], 0).unwrap(), &table, 1, const_decoder(3, 1));
        assert!(classical_blindness_holds(&only_x));
        let padded = cand(1, AffineMap::new(3, vec![0b101], 0).unwrap(), &table, 1, const_decoder(3, 1));
        assert!(classical_blindness_holds(&padded));
        let clear = cand(0, AffineMap::new(2, vec![0b01], 0).unwrap(), &table, 1, const_decoder(2, 1));
        assert!(!classical_blindness_holds(&clear));
    }

    #[test]
    fn constant_decoder_is_incorrect() {
        let c = cand(0, AffineMap::new(2, vec![], 0).unwrap(), &[(0, 0)], 1, const_decoder(2, 1));
        assert!(!classical_correctness_holds(&c));
    }

    #[test]
    fn inputs_in_the_clear_are_correct_but_not_blind() {
        let enc = AffineMap::new(2, vec![0b01, 0b10], 0).unwrap();
        let and: Vec<(u32, u32)> = (0..4).map(|m| (m, m & (m >> 1) & 1)).collect();
        let dec = AffineMap::new(3, vec![0b100], 1).unwrap();
        let c = cand(0, enc, &and, 1, dec);
        assert!(classical_correctness_holds(&c));
        assert!(!classical_blindness_holds(&c));
    }

    #[test]
    fn analytic_counts_match_independent_enumeration() {
        // Frozen from a separate brute-force count of reachable messages.
        assert_eq!(analytic_count(SearchBounds::new(1, 1, 1), true), Some(2808));
        assert_eq!(analytic_count(SearchBounds::new(1, 1, 1), false), Some(3000));
        assert_eq!(analytic_count(SearchBounds::new(0, 2, 1), true), Some(9640));
        assert_eq!(analytic_count(SearchBounds::new(2, 2, 1), true), Some(1_061_656));
        assert_eq!(analytic_count(SearchBounds::new(2, 2, 1), false), Some(1_245_784));
    }

    #[test]
    fn rank_counts_sum_to_all_matrices() {
        for m in 0..4 {
            for n in 0..5 {
                let total: u128 = (0..=m.min(n)).map(|r| matrices_of_rank(m, n, r).unwrap()).sum();
                assert_eq!(total, 1 << (m * n));
            }
        }
    }

    #[test]
    fn small_searches_find_no_witness() {
        for (r, m, k) in [(1, 1, 1), (0, 2, 1)] {
            let res = search_classical_nogo(SearchBounds::new(r, m, k), true, DEFAULT_BUDGET).unwrap();
            assert!(res.witness.is_none());
            assert_eq!(res.candidates_checked, res.analytic_count);
        }
    }

    #[test]
    fn pruning_does_not_change_the_verdict() {
        let b = SearchBounds::new(1, 2, 1);
        let pruned = search_classical_nogo(b, true, DEFAULT_BUDGET).unwrap();
        let full = search_classical_nogo(b, false, DEFAULT_BUDGET).unwrap();
        assert!(pruned.witness.is_none() && full.witness.is_none());
        assert_eq!(full.candidates_checked, analytic_count(b, false).unwrap());
        assert!(full.candidates_checked > pruned.candidates_checked);
    }

    #[test]
    fn budget_refusal_reports_estimate() {
        let err = search_classical_nogo(SearchBounds::new(2, 2, 1), true, 1000).unwrap_err();
        assert_eq!(
            err,
            NogoError::BudgetExceeded {
                estimate: Some(1_061_656),
                budget: 1000
            }
        );
        let huge = search_classical_nogo(SearchBounds::new(8, 8, 8), true, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(huge, NogoError::BudgetExceeded { .. }));
    }
}

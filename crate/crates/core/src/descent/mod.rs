//! Descent of a split bundle `E` on the cover to the constant field `F`.
//!
//! The direct image `W_* = f_* E` is pulled back along `f`; the pullback is
//! matched against the Galois translates `g^* D_i`, the summand belonging to
//! the identity is read off, and each recovered class is tested with the
//! specialization oracle. Endomorphism algebras and the indecomposability
//! test give the Krull-Schmidt side, and towers `Y -> X -> P^1` exercise the
//! invariant subbundle description.

mod constrained;
mod endo;
mod tower;

#[cfg(test)]
mod tests;

pub use constrained::{
    class_decompose, hom_into, line_point_name, parabolic_pullback, translate_candidates, verify_pullback_splits,
    ClassMatch, ConstrainedBundle, HomSpace, LocalStructure, MATCH_ATTEMPTS,
};
pub use endo::{end_algebra, end_algebra_constrained, end_algebra_line, indecomposable_test, EndAlgebra};
pub use tower::{invariants_transversal, pushdown_extract, verify_invariant_subbundle, Labeled, TowerCheck, TowerSpec};

use crate::curve::{Divisor, Function};
use crate::error::{Error, Result};
use crate::pushpar::{assemble_parabolic, verify_algebraic_direct_image, SplitBundle};
use crate::rr::{line_descent_oracle, DescentWitness, LineDescent};

#[derive(Clone, Debug)]
pub enum Verdict {
    DefinedOverF {
        /// A `t`-free divisor per summand.
        representatives: Vec<Divisor>,
        /// `f` with `div f = D_i(tau) - D_i`, when the summand had to move.
        certificates: Vec<Option<Function>>,
        /// False when some representative needed `u(tau)` adjoined.
        same_tower: bool,
    },
    NotDefined {
        summand: usize,
        witness: DescentWitness,
    },
    Unknown {
        reason: String,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::DefinedOverF { .. } => "DefinedOverF",
            Verdict::NotDefined { .. } => "NotDefined",
            Verdict::Unknown { .. } => "Unknown",
        }
    }
}

fn oracle_verdict(e: &SplitBundle, divisors: &[Divisor], max_tau: usize) -> Result<Verdict> {
    let mut representatives = Vec::new();
    let mut certificates = Vec::new();
    let mut same_tower = true;
    for (i, d) in divisors.iter().enumerate() {
        match line_descent_oracle(&e.curve, d, max_tau) {
            Ok(LineDescent::Descends { representative, certificate, tower, .. }) => {
                same_tower &= &tower == e.curve.tower();
                representatives.push(representative);
                certificates.push(certificate);
            }
            Ok(LineDescent::Fails(witness)) => return Ok(Verdict::NotDefined { summand: i, witness }),
            Err(Error::Math(reason)) => return Ok(Verdict::Unknown { reason }),
            Err(other) => return Err(other),
        }
    }
    Ok(Verdict::DefinedOverF { representatives, certificates, same_tower })
}

/// Decides whether `E` is isomorphic to a bundle defined over `F`.
///
/// The pullback of `W_*` must match the translates `g^* D_i`; the classes
/// labelled by the identity are then tested one by one. The result is
/// checked against the oracle run directly on the `D_i`, and a `t`-free
/// certificate over the same tower must give an algebraic `W_*`.
pub fn descent_verdict(e: &SplitBundle, seed: u64, max_tau: usize) -> Result<Verdict> {
    let c = &e.curve;
    if c.tower().transcendental().is_none() {
        return Ok(Verdict::DefinedOverF {
            representatives: e.divisors.clone(),
            certificates: vec![None; e.rank()],
            same_tower: true,
        });
    }
    let w = assemble_parabolic(e, seed)?;
    let u = parabolic_pullback(&w, c)?;
    let n = c.n() as i64;
    let mut labeled = Vec::new();
    for (i, d) in e.divisors.iter().enumerate() {
        for g in 0..n {
            labeled.push(Labeled { divisor: c.galois_translate(d, g), shift: g, summand: i });
        }
    }
    let candidates: Vec<Divisor> = labeled.iter().map(|l| l.divisor.clone()).collect();
    let matching = class_decompose(&u, &candidates, seed)?;
    if !matching.matched {
        return Err(Error::Internal(format!(
            "the pullback of W_* does not split into the Galois translates: {}",
            matching.failure.unwrap_or_default()
        )));
    }
    let shifts: Vec<i64> = (0..n).collect();
    let recovered = pushdown_extract(e, &labeled, &matching, &shifts, 0)?;
    let verdict = oracle_verdict(e, &recovered.divisors, max_tau)?;
    let direct = oracle_verdict(e, &e.divisors, max_tau)?;
    if verdict.name() != direct.name() {
        return Err(Error::Internal(format!(
            "pipeline verdict {} differs from the direct oracle {}",
            verdict.name(),
            direct.name()
        )));
    }
    if let Verdict::DefinedOverF { representatives, same_tower, .. } = &verdict {
        if *same_tower {
            let model = SplitBundle::new(c.clone(), representatives.clone())?;
            if model.is_t_free() && !verify_algebraic_direct_image(&model, seed)? {
                return Err(Error::Internal("a t-free certificate has a non-algebraic direct image".into()));
            }
        }
    }
    Ok(verdict)
}

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::lin_equiv;
use crate::curve::{Curve, Divisor, Function, Place};
use crate::error::{math, Result};
use crate::field::factor::Nf;
use crate::field::tower::Specialization;
use crate::FieldTower;

/// Default number of specialization values tried.
pub const DEFAULT_MAX_TAU: usize = 24;

/// Evidence that a class does not descend: at `t = tau` the divisor and its
/// specialization are not linearly equivalent over `K'`.
#[derive(Clone, Debug)]
pub struct DescentWitness {
    pub tau: Nf,
    /// The tower `K'` the comparison was made over.
    pub tower: FieldTower,
    pub specialized: Divisor,
    /// `l(D - D(tau))` over `K'`.
    pub ell: usize,
}

#[derive(Clone, Debug)]
pub enum LineDescent {
    Descends {
        /// A `t`-free divisor in the class, with places over `tower`.
        representative: Divisor,
        tower: FieldTower,
        tau: Option<Nf>,
        /// `f` with `div(f) = D(tau) - D` over `tower`.
        certificate: Option<Function>,
    },
    Fails(DescentWitness),
}

impl LineDescent {
    pub fn descends(&self) -> bool {
        matches!(self, LineDescent::Descends { .. })
    }
}

fn place_is_algebraic(curve: &Curve, p: &Place) -> bool {
    match p {
        Place::Finite { x, y } => curve.tower().is_algebraic(x) && curve.tower().is_algebraic(y),
        _ => true,
    }
}

/// `D(tau)` over the target tower, or `None` when `tau` is bad for `D`:
/// a coordinate has a pole, a point lands over `0` or `1`, or two places of
/// `D` collide.
fn specialize_divisor(spec: &Specialization, target: &Curve, d: &Divisor) -> Option<Divisor> {
    let mut out = Divisor::zero();
    let mut seen: BTreeSet<Place> = BTreeSet::new();
    for (p, c) in d.iter() {
        let q = match p {
            Place::Finite { x, y } => {
                let x0 = spec.evaluate_in_target(x)?;
                let y0 = spec.evaluate_in_target(y)?;
                if x0.is_zero() || x0 == crate::FieldElem::one() {
                    return None;
                }
                target.finite_place(x0, y0).ok()?
            }
            other => other.clone(),
        };
        if !seen.insert(q.clone()) {
            return None;
        }
        out.add_at(q, c);
    }
    Some(out)
}

/// Decides whether `O(D)` is isomorphic to a bundle defined without `t`.
///
/// The class of `D` is compared with its specialization at a good `t = tau`.
/// Values of `tau` in `F` for which `u(tau)` already lies in `F` are tried
/// first; otherwise the first good value is used after adjoining `u(tau)`.
pub fn line_descent_oracle(curve: &Curve, d: &Divisor, max_tau: usize) -> Result<LineDescent> {
    let tower = curve.tower();
    if tower.transcendental().is_none() || d.support().all(|p| place_is_algebraic(curve, p)) {
        return Ok(LineDescent::Descends {
            representative: d.clone(),
            tower: tower.clone(),
            tau: None,
            certificate: None,
        });
    }
    let taus = tower.small_elements(max_tau);
    for allow_extension in [false, true] {
        for tau in &taus {
            let Some(spec) = tower.specialize(tau)? else { continue };
            if spec.adjunction.is_some() != allow_extension {
                continue;
            }
            let target = curve.base_change(spec.target.clone(), |e| spec.embed(e));
            let Some(dt) = specialize_divisor(&spec, &target, d) else { continue };
            let lifted = d.map_places(|p| Curve::map_place(p, |e| spec.embed(e)));
            let eq = lin_equiv(&target, &lifted, &dt)?;
            if eq.equivalent {
                return Ok(LineDescent::Descends {
                    representative: dt,
                    tower: spec.target.clone(),
                    tau: Some(spec.tau.clone()),
                    certificate: eq.witness,
                });
            }
            return Ok(LineDescent::Fails(DescentWitness {
                tau: spec.tau.clone(),
                tower: spec.target.clone(),
                specialized: dt,
                ell: 0,
            }));
        }
    }
    math(format!("no good specialization t = tau among {max_tau} candidates"))
}

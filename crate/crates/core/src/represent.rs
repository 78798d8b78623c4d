//! Finite Schaefer-type representation.
//!
//! For each seminorm the state polytope `B_α = K_α ∩ C*` is materialized by
//! its vertices. A linear objective over a polytope peaks at a vertex, so
//! every supremum over states is a maximum over this finite list; the vertex
//! set plays the role of the compact state space.

use num_traits::{One, Signed, Zero};

use crate::cone::DoubleDescription;
use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::exactla::{RMat, RVec, Rat};
use crate::lp::{self, Bound, LpOutcome, LpProblem, Relation, Sense};
use crate::model::{self, VecExpr};
use crate::space::{CalibratedSpace, Functional, PolyhedralSeminorm};

pub const DEFAULT_MAX_DIM: usize = 6;
pub const MAX_ROWS: usize = 10;

/// Dimension cap for vertex enumeration; `OC_MAX_DIM` overrides the default.
pub fn max_dim() -> usize {
    std::env::var("OC_MAX_DIM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

/// Vertex lists of the state polytopes, one per seminorm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStateSpace {
    dim: usize,
    vertices: Vec<Vec<RVec>>,
}

/// `φ(x)` at the state `(alpha, index)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateValue {
    pub alpha: usize,
    pub index: usize,
    pub value: Rat,
}

impl FiniteStateSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn families(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self, alpha: usize) -> Result<&[RVec]> {
        self.vertices
            .get(alpha)
            .map(Vec::as_slice)
            .ok_or(Error::BadIndex {
                index: alpha,
                count: self.vertices.len(),
            })
    }

    /// Every state, tagged `(alpha, index)`.
    pub fn states(&self) -> impl Iterator<Item = (usize, usize, &RVec)> {
        self.vertices
            .iter()
            .enumerate()
            .flat_map(|(a, vs)| vs.iter().enumerate().map(move |(i, v)| (a, i, v)))
    }

    fn check_dim(&self, x: &RVec) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::Dimension {
                context: "evaluation point",
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    /// `φ(x)(v, α) = ⟨v, x⟩` for every state.
    pub fn evaluate(&self, x: &RVec) -> Result<Vec<StateValue>> {
        self.check_dim(x)?;
        Ok(self
            .states()
            .map(|(alpha, index, v)| StateValue {
                alpha,
                index,
                value: v.dot(x),
            })
            .collect())
    }

    /// `max_{v ∈ V_α} |⟨v, x⟩|`
    pub fn induced_norm(&self, alpha: usize, x: &RVec) -> Result<Rat> {
        self.check_dim(x)?;
        Ok(max_abs_over(self.vertices(alpha)?, x))
    }

    /// `max_{v ∈ V_α} ⟨v, x⟩`, the supremum of `x` over the states.
    pub fn state_sup(&self, alpha: usize, x: &RVec) -> Result<Rat> {
        self.check_dim(x)?;
        Ok(max_over(self.vertices(alpha)?, x))
    }
}

pub(crate) fn max_over(vertices: &[RVec], x: &RVec) -> Rat {
    vertices
        .iter()
        .map(|v| v.dot(x))
        .max()
        .unwrap_or_else(Rat::zero)
}

pub(crate) fn max_abs_over(vertices: &[RVec], x: &RVec) -> Rat {
    vertices
        .iter()
        .map(|v| v.dot(x).abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

fn check_size(dim: usize, rows: usize) -> Result<()> {
    let max = max_dim();
    if dim > max || rows > MAX_ROWS {
        return Err(Error::TooLarge {
            dim,
            rows,
            max_dim: max,
            max_rows: MAX_ROWS,
        });
    }
    Ok(())
}

/// Vertices of `B = conv{±a_i} ∩ C*`.
///
/// The polytope is homogenized to the cone over `{1} × B`: the facets of
/// the cone over `{1} × conv{±a_i}` come from one double description pass,
/// the positivity rows `(0, g)` are appended, and a second pass returns the
/// extreme rays `(1, v)`. The origin is listed only when it is a vertex.
pub fn state_vertices(sn: &PolyhedralSeminorm, cone: &PolyCone) -> Result<Vec<RVec>> {
    let n = sn.dim();
    check_size(n, sn.rows().len())?;
    let lift = |t: Rat, v: &RVec| -> RVec { std::iter::once(t).chain(v.iter().cloned()).collect() };
    let points: Vec<RVec> = sn.signed_rows().map(|a| lift(Rat::one(), &a)).collect();
    let mut facets = DoubleDescription::run(n + 1, &points).generators();
    facets.extend(cone.generators().iter().map(|g| lift(Rat::zero(), g)));
    let dd = DoubleDescription::run(n + 1, &facets);
    debug_assert!(dd.lineality.is_empty(), "state cone is pointed");
    let mut out: Vec<RVec> = dd
        .rays
        .iter()
        .map(|r| {
            let t = r[0].clone();
            debug_assert!(t.is_positive(), "state rays lie over t > 0");
            RVec::new(r[1..].iter().map(|c| c / &t).collect())
        })
        .collect();
    out.sort_by(|a, b| a.entries().cmp(b.entries()));
    out.dedup();
    Ok(out)
}

pub fn build_representation(s: &CalibratedSpace) -> Result<FiniteStateSpace> {
    let vertices = s
        .seminorms()
        .iter()
        .map(|sn| state_vertices(sn, s.cone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteStateSpace {
        dim: s.dim(),
        vertices,
    })
}

/// Outcome of one representation property, with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Holds,
    /// `x` (in `E₊` for the positive check) with `p_α(x) > max_V |⟨v, x⟩|`.
    NormGap {
        x: RVec,
    },
    /// A dual-cone generator outside the cone spanned by the states, so some
    /// `x ∉ E₊` has `φ(x) ≥ 0`.
    UncoveredDualGenerator {
        h: RVec,
    },
    /// Stacked states span only `rank < dim`; `x` is a nonzero kernel vector.
    Kernel {
        x: RVec,
    },
}

impl Check {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationReport {
    pub injective: Check,
    pub bipositive: Check,
    pub isometric_on_positives: Vec<Check>,
    pub isometric_everywhere: Vec<Check>,
}

impl RepresentationReport {
    pub fn all_hold(&self) -> bool {
        self.injective.holds()
            && self.bipositive.holds()
            && self.isometric_on_positives.iter().all(Check::holds)
            && self.isometric_everywhere.iter().all(Check::holds)
    }
}

pub fn verify_representation(
    s: &CalibratedSpace,
    fs: &FiniteStateSpace,
) -> Result<RepresentationReport> {
    let all: Vec<RVec> = fs.states().map(|(_, _, v)| v.clone()).collect();
    let stacked = RMat::new(all.clone(), s.dim())?;
    let injective = match stacked.null_space().rows().first() {
        None => Check::Holds,
        Some(x) => Check::Kernel { x: x.clone() },
    };

    let span = PolyCone::from_generators(s.dim(), all)?;
    let mut bipositive = Check::Holds;
    for h in s.cone().inequalities() {
        if !span.contains(h)? {
            bipositive = Check::UncoveredDualGenerator { h: h.clone() };
            break;
        }
    }

    let mut on_pos = Vec::new();
    let mut everywhere = Vec::new();
    for (alpha, sn) in s.seminorms().iter().enumerate() {
        let v = fs.vertices(alpha)?;
        on_pos.push(norm_gap(sn, v, Some(s.cone()))?);
        everywhere.push(norm_gap(sn, v, None)?);
    }
    Ok(RepresentationReport {
        injective,
        bipositive,
        isometric_on_positives: on_pos,
        isometric_everywhere: everywhere,
    })
}

/// Decides `p(x) = max_V |⟨v, x⟩|` for all `x` (in `cone`, when given).
///
/// Per signed row `a`: maximize `⟨a, x⟩` subject to `|⟨v, x⟩| ≤ 1` on the
/// states. The identity holds iff no optimum exceeds 1. On the cone the
/// states are positive there, so the one-sided bound `⟨v, x⟩ ≤ 1` is used.
fn norm_gap(sn: &PolyhedralSeminorm, vertices: &[RVec], cone: Option<&PolyCone>) -> Result<Check> {
    let n = sn.dim();
    for a in sn.signed_rows() {
        let mut p = LpProblem::new(Sense::Maximize);
        let xs = p.add_vars(n, Bound::free());
        for (var, c) in xs.clone().zip(a.iter()) {
            p.set_objective(var, c.clone());
        }
        let x = VecExpr::vars(xs.clone());
        for v in vertices {
            p.add_terms(x.dot(v), Relation::Le, Rat::one());
            if cone.is_none() {
                p.add_terms(x.dot(v), Relation::Ge, -Rat::one());
            }
        }
        if let Some(c) = cone {
            model::in_cone(&mut p, c, &x);
        }
        let gap = match lp::solve(&p)? {
            LpOutcome::Optimal(o) if o.value > Rat::one() => Some(model::slice(&o.primal, xs)),
            LpOutcome::Unbounded { ray, .. } => Some(model::slice(&ray, xs)),
            _ => None,
        };
        if let Some(x) = gap {
            debug_assert!(sn.value(&x) > max_abs_over(vertices, &x));
            return Ok(Check::NormGap { x });
        }
    }
    Ok(Check::Holds)
}

/// Weights `w ≥ 0` on `V_α` with `Σw ≤ 1` and `Σ w(v) v = f`; `None` when
/// `f` is not a state.
pub fn realize_state(fs: &FiniteStateSpace, alpha: usize, f: &Functional) -> Result<Option<RVec>> {
    let v = fs.vertices(alpha)?;
    if f.dim() != fs.dim {
        return Err(Error::Dimension {
            context: "state",
            expected: fs.dim,
            found: f.dim(),
        });
    }
    if let Some(k) = v.iter().position(|u| *u == f.coeffs) {
        return Ok(Some(RVec::unit(v.len(), k)));
    }
    if f.coeffs.is_zero() {
        return Ok(Some(RVec::zeros(v.len())));
    }
    let mut p = LpProblem::feasibility(v.len(), Bound::nonneg());
    let comb = VecExpr::combination(fs.dim, 0..v.len(), v, &Rat::one());
    model::equals(&mut p, &comb, &f.coeffs);
    p.add_terms(model::sum_of(0..v.len()), Relation::Le, Rat::one());
    Ok(lp::solve(&p)?.optimum().map(|o| o.primal.clone()))
}

/// Direct check of `realize_state` output.
pub fn verify_weights(
    fs: &FiniteStateSpace,
    alpha: usize,
    f: &Functional,
    w: &RVec,
) -> Result<bool> {
    let v = fs.vertices(alpha)?;
    if w.dim() != v.len() || w.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    let total: Rat = w.iter().sum();
    let combo = RMat::new(v.to_vec(), fs.dim)?.combine_rows(w);
    Ok(total <= Rat::one() && combo == f.coeffs)
}

/// States of `α` as functionals, usable by the criteria without rebuilding.
pub(crate) fn vertices_for(s: &CalibratedSpace, alpha: usize) -> Result<Vec<RVec>> {
    state_vertices(s.seminorm(alpha)?, s.cone())
}

/// `isometric_everywhere` must agree with the state-cover criterion; this
/// helper exposes that decision for one family.
pub fn isometric_everywhere(s: &CalibratedSpace, alpha: usize) -> Result<bool> {
    let v = vertices_for(s, alpha)?;
    Ok(norm_gap(s.seminorm(alpha)?, &v, None)?.holds())
}

//! Small helpers for assembling LPs over vector-valued variable blocks.

use std::ops::Range;

use num_traits::{One, Zero};

use crate::cone::PolyCone;
use crate::exactla::{RVec, Rat};
use crate::lp::{LpProblem, Relation};

pub(crate) type Expr = Vec<(usize, Rat)>;

/// One linear expression per coordinate.
#[derive(Clone, Debug)]
pub(crate) struct VecExpr(pub Vec<Expr>);

impl VecExpr {
    pub fn vars(block: Range<usize>) -> Self {
        VecExpr(block.map(|v| vec![(v, Rat::one())]).collect())
    }

    /// `Σ_k sign·vectors[k]·x_{block[k]}`
    pub fn combination(dim: usize, block: Range<usize>, vectors: &[RVec], sign: &Rat) -> Self {
        let mut out = vec![Vec::new(); dim];
        for (var, v) in block.zip(vectors) {
            for (i, a) in v.iter().enumerate() {
                if !a.is_zero() {
                    out[i].push((var, sign * a));
                }
            }
        }
        VecExpr(out)
    }

    pub fn plus(&self, other: &VecExpr) -> Self {
        VecExpr(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.iter().chain(b).cloned().collect())
                .collect(),
        )
    }

    pub fn minus(&self, other: &VecExpr) -> Self {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> Self {
        VecExpr(
            self.0
                .iter()
                .map(|e| e.iter().map(|(v, c)| (*v, -c)).collect())
                .collect(),
        )
    }

    pub fn dot(&self, a: &RVec) -> Expr {
        let mut out = Vec::new();
        for (e, ai) in self.0.iter().zip(a.iter()) {
            if ai.is_zero() {
                continue;
            }
            out.extend(e.iter().map(|(v, c)| (*v, c * ai)));
        }
        out
    }
}

pub(crate) fn scaled(e: &Expr, s: &Rat) -> Expr {
    e.iter().map(|(v, c)| (*v, c * s)).collect()
}

/// `e ∈ C` through the facet description.
pub(crate) fn in_cone(p: &mut LpProblem, cone: &PolyCone, e: &VecExpr) {
    for h in cone.inequalities() {
        p.add_terms(e.dot(h), Relation::Ge, Rat::zero());
    }
}

/// `|⟨a, e⟩| ≤ 1` for every row `a`.
pub(crate) fn in_unit_ball(p: &mut LpProblem, rows: &[RVec], e: &VecExpr) {
    for a in rows {
        let t = e.dot(a);
        p.add_terms(t.clone(), Relation::Le, Rat::one());
        p.add_terms(t, Relation::Ge, -Rat::one());
    }
}

/// `|⟨a, e⟩| ≤ t` for every row `a`, with `t` a variable.
pub(crate) fn in_ball_radius(p: &mut LpProblem, rows: &[RVec], e: &VecExpr, t: usize) {
    for a in rows {
        let d = e.dot(a);
        let mut le = d.clone();
        le.push((t, -Rat::one()));
        p.add_terms(le, Relation::Le, Rat::zero());
        let mut ge = d;
        ge.push((t, Rat::one()));
        p.add_terms(ge, Relation::Ge, Rat::zero());
    }
}

/// `e = target` coordinatewise.
pub(crate) fn equals(p: &mut LpProblem, e: &VecExpr, target: &RVec) {
    for (ei, ti) in e.0.iter().zip(target.iter()) {
        p.add_terms(ei.clone(), Relation::Eq, ti.clone());
    }
}

/// Multiplier block for `f = Σ (μ⁺_i - μ⁻_i) a_i`, i.e. `f ∈ (Σμ)·conv{±a_i}`.
/// `mu` must hold `2·rows.len()` nonnegative variables.
pub(crate) fn dual_ball_point(dim: usize, rows: &[RVec], mu: Range<usize>) -> VecExpr {
    let m = rows.len();
    let pos = VecExpr::combination(dim, mu.start..mu.start + m, rows, &Rat::one());
    let neg = VecExpr::combination(dim, mu.start + m..mu.end, rows, &-Rat::one());
    pos.plus(&neg)
}

pub(crate) fn sum_of(block: Range<usize>) -> Expr {
    block.map(|v| (v, Rat::one())).collect()
}

pub(crate) fn slice(x: &RVec, block: Range<usize>) -> RVec {
    RVec::new(x[block].to_vec())
}

#![allow(dead_code)]

use ordrep::cone::PolyCone;
use ordrep::{CalibratedSpace, PolyhedralSeminorm, RVec};
use proptest::prelude::*;

pub fn v(x: &[i64]) -> RVec {
    RVec::from_i64s(x)
}

pub fn seminorm(rows: &[&[i64]]) -> PolyhedralSeminorm {
    PolyhedralSeminorm::new("p", rows[0].len(), rows.iter().map(|r| v(r)).collect()).unwrap()
}

pub fn int_vec(dim: usize, range: i64) -> impl Strategy<Value = RVec> {
    prop::collection::vec(-range..=range, dim).prop_map(|x| RVec::from_i64s(&x))
}

pub fn nonneg_weights(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..=4, len)
}

fn rows(dim: usize, count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<RVec>> {
    prop::collection::vec(int_vec(dim, 3), count)
}

/// Small pointed space with one or two seminorms whose rows span. When the
/// first seminorm is rank deficient a sup-norm is appended.
pub fn space() -> impl Strategy<Value = CalibratedSpace> {
    (2usize..=3)
        .prop_flat_map(|dim| (Just(dim), rows(dim, 0..=4), rows(dim, 1..=4), any::<bool>()))
        .prop_filter_map("not a calibrated space", |(dim, gens, first, two)| {
            let cone = PolyCone::from_generators(dim, gens).ok()?;
            if !cone.is_pointed() {
                return None;
            }
            let p = PolyhedralSeminorm::new("p", dim, first).ok()?;
            let mut family = vec![p.clone()];
            if two || p.matrix().rank() < dim {
                family.push(PolyhedralSeminorm::sup(dim));
            }
            CalibratedSpace::new(cone, family).ok()
        })
}

/// Nonnegative integer combination of the cone generators.
pub fn positive_point(s: &CalibratedSpace, weights: &[i64]) -> RVec {
    let mut x = RVec::zeros(s.dim());
    for (g, w) in s.cone().generators().iter().zip(weights) {
        x = x.axpy(&ordrep::rat(*w), g);
    }
    x
}

/// Integer combination of the rows of seminorm `alpha`: a functional of finite norm.
pub fn finite_functional(s: &CalibratedSpace, alpha: usize, coeffs: &[i64]) -> RVec {
    let mut f = RVec::zeros(s.dim());
    for (a, c) in s.seminorms()[alpha].rows().iter().zip(coeffs) {
        f = f.axpy(&ordrep::rat(*c), a);
    }
    f
}

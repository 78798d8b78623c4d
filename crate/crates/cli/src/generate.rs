//! Deterministic random instances.

use ordrep::cone::PolyCone;
use ordrep::{CalibratedSpace, PolyhedralSeminorm, RMat, RVec, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::Instance;

/// Entry bound for generated integers.
pub const MAX_ENTRY: i64 = 9;
const ATTEMPTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Random integer generators and rows.
    Random,
    /// Generators and rows with nonnegative entries; seminorms of this kind
    /// are increasing on the cone.
    Monotone,
    /// The first seminorm has a nontrivial kernel.
    RankDeficient,
    /// One of the above, chosen from the seed.
    Mixed,
}

#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub dim: usize,
    pub max_gens: usize,
    pub max_rows: usize,
    pub max_seminorms: usize,
    pub flavor: Flavor,
}

impl GenParams {
    pub fn new(dim: usize) -> Self {
        GenParams {
            dim,
            max_gens: 5,
            max_rows: 5,
            max_seminorms: 2,
            flavor: Flavor::Mixed,
        }
    }

    pub fn flavor(mut self, flavor: Flavor) -> Self {
        self.flavor = flavor;
        self
    }
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Small-integer vector, entries in `-bound..=bound` (or `0..=bound`).
pub fn int_vector(rng: &mut impl Rng, dim: usize, bound: i64, nonneg: bool) -> RVec {
    let lo = if nonneg { 0 } else { -bound };
    let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(lo..=bound)).collect();
    RVec::from_i64s(&v)
}

fn nonzero_vector(rng: &mut impl Rng, dim: usize, bound: i64, nonneg: bool) -> RVec {
    loop {
        let v = int_vector(rng, dim, bound, nonneg);
        if !v.is_zero() {
            return v;
        }
    }
}

fn flavor_for(seed: u64, flavor: Flavor) -> Flavor {
    match flavor {
        Flavor::Mixed => match seed % 3 {
            0 => Flavor::Random,
            1 => Flavor::Monotone,
            _ => Flavor::RankDeficient,
        },
        f => f,
    }
}

fn attempt(rng: &mut ChaCha8Rng, p: &GenParams, flavor: Flavor) -> Option<CalibratedSpace> {
    let n = p.dim;
    let nonneg = flavor == Flavor::Monotone;
    let k = rng.gen_range(1..=p.max_gens);
    let gens = (0..k).map(|_| nonzero_vector(rng, n, 5, nonneg)).collect();
    let cone = PolyCone::from_generators(n, gens).ok()?;
    if !cone.is_pointed() {
        return None;
    }
    let count = rng.gen_range(1..=p.max_seminorms.max(1));
    let mut seminorms = Vec::with_capacity(count.max(2));
    for a in 0..count {
        let rows_n = rng.gen_range(1..=p.max_rows);
        let rows: Vec<RVec> = if flavor == Flavor::RankDeficient && a == 0 && n > 1 {
            // Rows drawn from a random hyperplane through the origin.
            let span: Vec<RVec> = (0..n - 1)
                .map(|_| nonzero_vector(rng, n, 3, false))
                .collect();
            let span = RMat::new(span, n).ok()?;
            (0..rows_n)
                .map(|_| {
                    let c: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-2..=2)).collect();
                    span.combine_rows(&RVec::from_i64s(&c))
                })
                .collect()
        } else {
            (0..rows_n)
                .map(|_| nonzero_vector(rng, n, 5, nonneg))
                .collect()
        };
        seminorms.push(PolyhedralSeminorm::new(format!("p{a}"), n, rows).ok()?);
    }
    if flavor == Flavor::RankDeficient {
        if seminorms[0].matrix().rank() == n {
            return None;
        }
        if seminorms.len() == 1 {
            seminorms.push(PolyhedralSeminorm::sup(n));
        }
    }
    CalibratedSpace::new(cone, seminorms).ok()
}

/// A valid calibrated space, deterministic in `seed`. Non-pointed cones and
/// non-separating row sets are redrawn.
pub fn generate_space(seed: u64, p: &GenParams) -> ordrep::Result<CalibratedSpace> {
    assert!(p.dim >= 1 && p.max_gens >= 1 && p.max_rows >= 1);
    let flavor = flavor_for(seed, p.flavor);
    let mut rng = rng_for(seed, 0);
    for _ in 0..ATTEMPTS {
        if let Some(s) = attempt(&mut rng, p, flavor) {
            return Ok(s);
        }
    }
    Err(ordrep::Error::Hypothesis(format!(
        "no valid instance after {ATTEMPTS} draws for seed {seed}"
    )))
}

pub fn generate_instance(seed: u64, p: &GenParams) -> ordrep::Result<Instance> {
    let mut inst = Instance::bare(generate_space(seed, p)?);
    inst.name = Some(format!("seed-{seed}-dim-{}", p.dim));
    Ok(inst)
}

/// A random subspace of dimension 1 or 2 and values of `f` on its basis.
pub fn random_subspace(rng: &mut impl Rng, dim: usize) -> (Subspace, RVec) {
    loop {
        let k = rng.gen_range(1..=2.min(dim));
        let rows: Vec<RVec> = (0..k).map(|_| nonzero_vector(rng, dim, 3, false)).collect();
        let Ok(sub) = Subspace::new(RMat::new(rows, dim).unwrap()) else {
            continue;
        };
        let values = int_vector(rng, k, 4, false);
        return (sub, values);
    }
}

/// Integer combination of `vectors` with coefficients in `lo..=hi`.
pub fn combination(rng: &mut impl Rng, dim: usize, vectors: &[RVec], lo: i64, hi: i64) -> RVec {
    let mut out = RVec::zeros(dim);
    for v in vectors {
        out = out.axpy(&ordrep::rat(rng.gen_range(lo..=hi)), v);
    }
    out
}

//! Instance generators: distortion capacities, coverage functions, the
//! countable-chain and unit-interval constructions, and seeded random
//! families used by the tests and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::measure::{chain_measure, AtomicMeasure};
use crate::scalar::{Mode, Scalar};
use crate::setfun::{GroundSet, SetFunction, Subset};

/// Grid resolution for shape checks of polynomial distortions.
const POLY_GRID: i64 = 64;

/// Largest ground set the random generators produce.
pub const MAX_RANDOM_POINTS: usize = 12;

/// A non-decreasing map `g: [0,1] -> [0,1]` with `g(0) = 0` and `g(1) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distortion {
    /// Coefficients `c_0, c_1, ...` of `Σ c_k x^k`.
    Polynomial(Vec<Scalar>),
    /// Knots `(x, g(x))` with strictly increasing `x` from 0 to 1; linear in between.
    PiecewiseLinear(Vec<(Scalar, Scalar)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Linear,
    Concave,
    Convex,
    Neither,
}

impl Distortion {
    pub fn identity(mode: Mode) -> Self {
        Distortion::Polynomial(vec![Scalar::zero(mode), Scalar::one(mode)])
    }

    pub fn mode(&self) -> Mode {
        match self {
            Distortion::Polynomial(c) => c.first().map(Scalar::mode).unwrap_or(Mode::Exact),
            Distortion::PiecewiseLinear(k) => {
                k.first().map(|(x, _)| x.mode()).unwrap_or(Mode::Exact)
            }
        }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        match self {
            Distortion::Polynomial(coeffs) => coeffs
                .iter()
                .rev()
                .fold(Scalar::zero(x.mode()), |acc, c| acc * x + c),
            Distortion::PiecewiseLinear(knots) => {
                let k = knots
                    .windows(2)
                    .position(|w| x.le(&w[1].0))
                    .unwrap_or(knots.len() - 2);
                let ((x0, y0), (x1, y1)) = (&knots[k], &knots[k + 1]);
                y0 + &(&(y1 - y0) * &(x - x0)) / &(x1 - x0)
            }
        }
    }

    /// Grid on which monotonicity and shape are checked: the knots, or a uniform grid.
    fn grid(&self) -> Vec<Scalar> {
        match self {
            Distortion::Polynomial(_) => {
                let mode = self.mode();
                (0..=POLY_GRID)
                    .map(|k| &Scalar::from_i64(k, mode) / &Scalar::from_i64(POLY_GRID, mode))
                    .collect()
            }
            Distortion::PiecewiseLinear(knots) => knots.iter().map(|(x, _)| x.clone()).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidDistortion(m.to_string()));
        let mode = self.mode();
        match self {
            Distortion::Polynomial(c) if c.is_empty() => return bad("no coefficients"),
            Distortion::PiecewiseLinear(k) => {
                if k.len() < 2 {
                    return bad("need at least two knots");
                }
                if !k[0].0.is_zero() || !k[k.len() - 1].0.approx_eq(&Scalar::one(mode)) {
                    return bad("knots must span [0, 1]");
                }
                if k.windows(2).any(|w| !w[0].0.lt(&w[1].0)) {
                    return bad("knot positions must increase strictly");
                }
            }
            _ => {}
        }
        let modes_ok = match self {
            Distortion::Polynomial(c) => c.iter().all(|x| x.mode() == mode),
            Distortion::PiecewiseLinear(k) => {
                k.iter().all(|(x, y)| x.mode() == mode && y.mode() == mode)
            }
        };
        if !modes_ok {
            return Err(Error::ModeMismatch);
        }
        if !self.eval(&Scalar::zero(mode)).is_zero() {
            return bad("g(0) must be 0");
        }
        if !self.eval(&Scalar::one(mode)).approx_eq(&Scalar::one(mode)) {
            return bad("g(1) must be 1");
        }
        let values: Vec<Scalar> = self.grid().iter().map(|x| self.eval(x)).collect();
        if values.windows(2).any(|w| w[1].lt(&w[0])) {
            return bad("g must be non-decreasing");
        }
        Ok(())
    }

    /// Concavity or convexity judged from slopes between consecutive grid points.
    pub fn shape(&self) -> Shape {
        let grid = self.grid();
        let slopes: Vec<Scalar> = grid
            .windows(2)
            .map(|w| &(&self.eval(&w[1]) - &self.eval(&w[0])) / &(&w[1] - &w[0]))
            .collect();
        let non_increasing = slopes.windows(2).all(|w| w[1].le(&w[0]));
        let non_decreasing = slopes.windows(2).all(|w| w[1].ge(&w[0]));
        match (non_increasing, non_decreasing) {
            (true, true) => Shape::Linear,
            (true, false) => Shape::Concave,
            (false, true) => Shape::Convex,
            (false, false) => Shape::Neither,
        }
    }
}

fn check_probability(p: &[Scalar]) -> Result<Mode> {
    let Some(first) = p.first() else {
        return Err(Error::InvalidWeights("empty".into()));
    };
    let mode = first.mode();
    if p.iter().any(|x| x.mode() != mode) {
        return Err(Error::ModeMismatch);
    }
    if p.iter().any(Scalar::is_negative) {
        return Err(Error::InvalidWeights("negative weight".into()));
    }
    if !Scalar::sum(mode, p).approx_eq(&Scalar::one(mode)) {
        return Err(Error::InvalidWeights("weights must sum to 1".into()));
    }
    Ok(mode)
}

/// `v(S) = g(Σ_{i ∈ S} p_i)`.
pub fn distortion_capacity(g: &Distortion, p: &[Scalar]) -> Result<SetFunction> {
    let mode = check_probability(p)?;
    g.validate()?;
    if g.mode() != mode {
        return Err(Error::ModeMismatch);
    }
    let ground = GroundSet::new(p.len())?;
    SetFunction::from_fn(ground, |s| {
        g.eval(&Scalar::sum(mode, s.points().map(|i| &p[i])))
    })
}

/// `v(S) = Σ weight(item)` over items covered by some point of `S`.
/// `covers[i]` lists the items (at most 64) covered by point `i`.
pub fn coverage(covers: &[Vec<usize>], weights: &[Scalar]) -> Result<SetFunction> {
    if weights.is_empty() || weights.len() > 64 {
        return Err(Error::InvalidWeights(format!(
            "{} items; need 1..=64",
            weights.len()
        )));
    }
    let mode = weights[0].mode();
    if weights.iter().any(|w| w.mode() != mode) {
        return Err(Error::ModeMismatch);
    }
    if weights.iter().any(Scalar::is_negative) {
        return Err(Error::InvalidWeights("negative item weight".into()));
    }
    let masks = covers
        .iter()
        .map(|items| {
            items.iter().try_fold(0u64, |acc, &it| {
                if it < weights.len() {
                    Ok(acc | (1 << it))
                } else {
                    Err(Error::InvalidWeights(format!("item {it} has no weight")))
                }
            })
        })
        .collect::<Result<Vec<u64>>>()?;
    let ground = GroundSet::new(covers.len())?;
    SetFunction::from_fn(ground, |s| {
        let covered = s.points().fold(0u64, |acc, p| acc | masks[p]);
        Scalar::sum(
            mode,
            (0..weights.len())
                .filter(|it| covered & (1 << it) != 0)
                .map(|it| &weights[it]),
        )
    })
}

/// `v(S) = g(|S| / 3)` with `g(x) = 2x - x²` on three points.
pub fn running_example() -> SetFunction {
    let g = Distortion::Polynomial(vec![
        Scalar::ratio(0, 1),
        Scalar::ratio(2, 1),
        Scalar::ratio(-1, 1),
    ]);
    distortion_capacity(
        &g,
        &[
            Scalar::ratio(1, 3),
            Scalar::ratio(1, 3),
            Scalar::ratio(1, 3),
        ],
    )
    .expect("valid distortion")
}

/// The countable-chain construction restricted to `A = B ∪ C`: the chain
/// `∅ ⊂ {b_1} ⊂ ... ⊂ B ⊂ B ∪ {c_1} ⊂ ... ⊂ A`, its chain measure, and the
/// weights given by the prefix formulas
/// `μ({b_i}) = v({b_1..b_i}) - v({b_1..b_{i-1}})`,
/// `μ({c_j}) = v(B ∪ {c_1..c_j}) - v(B ∪ {c_1..c_{j-1}})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapleyExample {
    pub chain: Chain,
    pub measure: AtomicMeasure,
    pub formula_weights: Vec<(usize, Scalar)>,
    pub matches: bool,
}

pub fn shapley_example(b: &[usize], c: &[usize], v: &SetFunction) -> Result<ShapleyExample> {
    for &p in b.iter().chain(c) {
        v.ground().check_point(p)?;
    }
    let bset = Subset::from_points(b.iter().copied());
    let cset = Subset::from_points(c.iter().copied());
    if !bset.intersection(cset).is_empty() {
        return Err(Error::Overlap(bset.intersection(cset)));
    }
    let a = bset.union(cset);
    let order: Vec<usize> = b.iter().chain(c).copied().collect();
    let chain = Chain::from_order(a, &order)?;
    let measure = chain_measure(v, &chain)?;

    let prefix = |pts: &[usize]| Subset::from_points(pts.iter().copied());
    let mut formula_weights = Vec::with_capacity(order.len());
    for i in 0..b.len() {
        let w = v.value(prefix(&b[..=i])) - v.value(prefix(&b[..i]));
        formula_weights.push((b[i], w));
    }
    for j in 0..c.len() {
        let w = v.value(bset.union(prefix(&c[..=j]))) - v.value(bset.union(prefix(&c[..j])));
        formula_weights.push((c[j], w));
    }
    let matches = formula_weights
        .iter()
        .all(|(p, w)| measure.weight(*p).approx_eq(w));
    Ok(ShapleyExample {
        chain,
        measure,
        formula_weights,
        matches,
    })
}

/// `cells` equal cells `[k/cells, (k+1)/cells)` of the unit interval, the
/// distorted Lebesgue capacity on them, and the prefix chain `{[0, x)}`.
pub fn interval_discretization(cells: usize, g: &Distortion) -> Result<(SetFunction, Chain)> {
    let mode = g.mode();
    GroundSet::new(cells)?;
    let p = vec![&Scalar::one(mode) / &Scalar::from_i64(cells as i64, mode); cells];
    let v = distortion_capacity(g, &p)?;
    let chain = Chain::identity(v.ground().full());
    Ok((v, chain))
}

fn small_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    rng.random_range(lo..=hi)
}

fn random_probability(n: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let raw: Vec<i64> = (0..n).map(|_| small_int(rng, 1, 9)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|x| Scalar::ratio(x, total)).collect()
}

/// Random piecewise-linear distortion on a uniform knot grid with sorted slopes.
fn random_knots(rng: &mut ChaCha8Rng, concave: bool) -> Distortion {
    let segments = rng.random_range(1..=4usize);
    let mut slopes: Vec<i64> = (0..segments).map(|_| small_int(rng, 1, 8)).collect();
    slopes.sort_unstable();
    if concave {
        slopes.reverse();
    }
    let total: i64 = slopes.iter().sum();
    let mut knots = vec![(Scalar::ratio(0, 1), Scalar::ratio(0, 1))];
    let mut acc = 0;
    for (k, s) in slopes.iter().enumerate() {
        acc += s;
        knots.push((
            Scalar::ratio(k as i64 + 1, segments as i64),
            Scalar::ratio(acc, total),
        ));
    }
    Distortion::PiecewiseLinear(knots)
}

fn random_coverage(n: usize, rng: &mut ChaCha8Rng) -> SetFunction {
    loop {
        let items = rng.random_range(2..=8usize);
        let weights: Vec<i64> = (0..items).map(|_| small_int(rng, 1, 5)).collect();
        let covers: Vec<Vec<usize>> = (0..n)
            .map(|_| (0..items).filter(|_| rng.random_bool(0.5)).collect())
            .collect();
        let covered: std::collections::BTreeSet<usize> = covers.iter().flatten().copied().collect();
        let total: i64 = covered.iter().map(|&i| weights[i]).sum();
        if total == 0 {
            continue;
        }
        let normalized: Vec<Scalar> = weights.iter().map(|&w| Scalar::ratio(w, total)).collect();
        return coverage(&covers, &normalized).expect("valid coverage");
    }
}

fn average(x: &SetFunction, y: &SetFunction) -> SetFunction {
    let half = Scalar::ratio(1, 2);
    SetFunction::from_fn(x.ground().clone(), |s| &(x.value(s) + y.value(s)) * &half)
        .expect("same ground set")
}

fn check_random_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_RANDOM_POINTS {
        return Err(Error::GroundSize(n));
    }
    Ok(())
}

/// Seeded monotone grounded submodular instance: a concave distortion of a
/// random probability, a random coverage function, or their average.
pub fn random_submodular(n: usize, seed: u64) -> Result<SetFunction> {
    check_random_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v = match rng.random_range(0..3) {
            0 => distortion_capacity(
                &random_knots(&mut rng, true),
                &random_probability(n, &mut rng),
            )?,
            1 => random_coverage(n, &mut rng),
            _ => {
                let d = distortion_capacity(
                    &random_knots(&mut rng, true),
                    &random_probability(n, &mut rng),
                )?;
                average(&d, &random_coverage(n, &mut rng))
            }
        };
        if v.is_grounded() && v.is_monotone() && v.is_submodular() {
            return Ok(v);
        }
    }
}

/// Seeded monotone grounded supermodular instance: a convex distortion or the
/// dual of a random coverage function.
pub fn random_supermodular(n: usize, seed: u64) -> Result<SetFunction> {
    check_random_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v = match rng.random_range(0..2) {
            0 => distortion_capacity(
                &random_knots(&mut rng, false),
                &random_probability(n, &mut rng),
            )?,
            _ => random_coverage(n, &mut rng).dual_transform(),
        };
        if v.is_grounded() && v.is_monotone() && v.is_supermodular() {
            return Ok(v);
        }
    }
}

/// Seeded monotone grounded instance that is NOT submodular: random
/// nonnegative increments over the lattice, or a strictly convex distortion.
pub fn random_non_submodular(n: usize, seed: u64) -> Result<SetFunction> {
    check_random_size(n)?;
    if n < 2 {
        // Every set function on one point is submodular.
        return Err(Error::GroundSize(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v = if rng.random_bool(0.5) {
            random_monotone(n, &mut rng)
        } else {
            distortion_capacity(
                &random_knots(&mut rng, false),
                &random_probability(n, &mut rng),
            )?
        };
        if v.is_grounded() && v.is_monotone() && !v.is_submodular() {
            return Ok(v);
        }
    }
}

fn random_monotone(n: usize, rng: &mut ChaCha8Rng) -> SetFunction {
    let mut table = vec![0i64; 1 << n];
    for mask in 1..(1usize << n) {
        let floor = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| table[mask & !(1 << i)])
            .max()
            .unwrap_or(0);
        table[mask] = floor + small_int(rng, 0, 3);
    }
    SetFunction::new(
        GroundSet::new(n).expect("checked size"),
        table
            .into_iter()
            .map(|x| Scalar::from_i64(x, Mode::Exact))
            .collect(),
    )
    .expect("dense table")
}

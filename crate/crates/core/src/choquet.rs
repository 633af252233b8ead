//! Discrete Choquet integration.
//!
//! For `f` with distinct values `y_1 < ... < y_m` the asymmetric integral
//! `y v(Ω) + ∫_y^∞ v({f > z}) dz` (any `y <= y_1`) is the finite sum
//! `y_1 v(Ω) + Σ_{j >= 2} (y_j - y_{j-1}) v({f >= y_j})`.

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::measure::{chain_measure, core_claims, sample_core, CoreSide};
use crate::report::{Claim, ClaimKind, Relation, Route, Statement, VerificationReport};
use crate::scalar::{Mode, Scalar};
use crate::setfun::{GroundSet, SetFunction, Subset};

/// A real-valued function on the ground set.
#[derive(Clone, Debug, PartialEq)]
pub struct PointFunction {
    ground: GroundSet,
    values: Vec<Scalar>,
}

impl PointFunction {
    pub fn new(ground: GroundSet, values: Vec<Scalar>) -> Result<Self> {
        if values.len() != ground.n() {
            return Err(Error::Length {
                expected: ground.n(),
                got: values.len(),
            });
        }
        let mode = values[0].mode();
        if values.iter().any(|x| x.mode() != mode) {
            return Err(Error::ModeMismatch);
        }
        if let Some(p) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(Subset::singleton(p)));
        }
        Ok(PointFunction { ground, values })
    }

    /// `χ_A`.
    pub fn indicator(ground: GroundSet, a: Subset, mode: Mode) -> Result<Self> {
        ground.check(a)?;
        let values = (0..ground.n())
            .map(|p| Scalar::from_i64(a.contains(p) as i64, mode))
            .collect();
        PointFunction::new(ground, values)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn mode(&self) -> Mode {
        self.values[0].mode()
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> PointFunction {
        PointFunction {
            ground: self.ground.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Distinct values in increasing order.
    pub fn levels(&self) -> Vec<Scalar> {
        let mut levels = self.values.clone();
        levels.sort_by(exact_order);
        levels.dedup_by(|a, b| exact_order(a, b).is_eq());
        levels
    }

    /// `{ω : f(ω) >= y}`.
    pub fn at_least(&self, y: &Scalar) -> Subset {
        Subset::from_points(
            (0..self.values.len()).filter(|&p| exact_order(&self.values[p], y).is_ge()),
        )
    }

    /// `{ω : f(ω) > z}`.
    pub fn above(&self, z: &Scalar) -> Subset {
        Subset::from_points(
            (0..self.values.len()).filter(|&p| exact_order(&self.values[p], z).is_gt()),
        )
    }

    /// `{ω : f(ω) < a}`.
    pub fn below(&self, a: &Scalar) -> Subset {
        Subset::from_points(
            (0..self.values.len()).filter(|&p| exact_order(&self.values[p], a).is_lt()),
        )
    }

    pub fn is_injective(&self) -> bool {
        self.levels().len() == self.values.len()
    }
}

/// Level sets are split on exact value differences, never on tolerance.
fn exact_order(a: &Scalar, b: &Scalar) -> std::cmp::Ordering {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x.cmp(y),
        (Scalar::Float(x), Scalar::Float(y)) => x.total_cmp(y),
        _ => panic!("mixed scalar modes"),
    }
}

fn check_compatible(v: &SetFunction, f: &PointFunction) -> Result<()> {
    if f.values.len() != v.n() {
        return Err(Error::Length {
            expected: v.n(),
            got: f.values.len(),
        });
    }
    if f.mode() != v.mode() {
        return Err(Error::ModeMismatch);
    }
    Ok(())
}

/// The Choquet integral `v(f)`.
pub fn choquet_integral(v: &SetFunction, f: &PointFunction) -> Result<Scalar> {
    check_compatible(v, f)?;
    let levels = f.levels();
    let mut total = &levels[0] * v.value(v.ground().full());
    for w in levels.windows(2) {
        total = total + &(&w[1] - &w[0]) * v.value(f.at_least(&w[1]));
    }
    Ok(total)
}

/// `ρ(f) = v(-f)`.
pub fn risk_measure(v: &SetFunction, f: &PointFunction) -> Result<Scalar> {
    choquet_integral(v, &f.map(|x| -x))
}

/// The distinct level sets `{f > z}` ordered by inclusion, from `∅` to `Ω`.
/// Maximal exactly when `f` is injective.
pub fn level_set_chain(f: &PointFunction) -> Chain {
    let family = f.levels().iter().map(|y| f.at_least(y)).collect::<Vec<_>>();
    Chain::from_family(f.ground().full(), family).expect("level sets are nested")
}

/// Level-set chain refined to a maximal chain; ties are broken by ascending point index.
pub fn attaining_chain(f: &PointFunction) -> Chain {
    level_set_chain(f).refine_ascending()
}

/// Checks `v(f) = max over C_-(Ω) of ∫ f dμ`: the level-set witness agrees
/// with `v` on every level set, lies in the lower core, integrates `f` to
/// `v(f)`, and no sampled core measure integrates `f` above `v(f)`.
pub fn verify_choquet_sup(
    v: &SetFunction,
    f: &PointFunction,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let value = choquet_integral(v, f)?;
    let full = v.ground().full();
    let levels = level_set_chain(f);
    let chain = levels.refine_ascending();
    let mu = chain_measure(v, &chain)?;

    let mut claims: Vec<Claim> = levels
        .sets()
        .iter()
        .map(|&s| {
            Claim::check(
                ClaimKind::LevelSetAgreement,
                vec![s],
                mu.measure_of(s).expect("level sets lie in Ω"),
                Relation::Eq,
                v.value(s).clone(),
            )
        })
        .collect();
    claims.extend(full.points().map(|p| {
        Claim::check(
            ClaimKind::Nonnegative,
            vec![Subset::singleton(p)],
            mu.weight(p).clone(),
            Relation::Ge,
            Scalar::zero(v.mode()),
        )
    }));
    claims.extend(core_claims(&mu, v, CoreSide::Lower));
    claims.push(Claim::check(
        ClaimKind::IntegralEquality,
        vec![full],
        mu.integrate(f.values()),
        Relation::Eq,
        value.clone(),
    ));
    for sample in sample_core(v, full, samples, seed)? {
        claims.push(Claim::check(
            ClaimKind::SampleDomination,
            vec![full],
            sample.integrate(f.values()),
            Relation::Le,
            value.clone(),
        ));
    }

    Ok(VerificationReport {
        statement: Statement::Choquet,
        route: Route::Direct,
        carrier: full,
        target: None,
        base_order: chain.order().expect("refined chain is maximal"),
        chain: chain.sets().to_vec(),
        witness: mu,
        value: Some(value),
        seed: Some(seed),
        claims,
        routes_agree: None,
        pass: false,
    }
    .finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::in_lower_core;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn s(points: &[usize]) -> Subset {
        Subset::from_points(points.iter().copied())
    }

    fn running() -> SetFunction {
        SetFunction::from_fn(GroundSet::new(3).unwrap(), |s| {
            let p = q(s.len() as i64, 3);
            &q(2, 1) * &p - &p * &p
        })
        .unwrap()
    }

    fn pf(values: &[i64]) -> PointFunction {
        PointFunction::new(
            GroundSet::new(values.len()).unwrap(),
            values.iter().map(|&x| q(x, 1)).collect(),
        )
        .unwrap()
    }

    /// `y v(Ω) + ∫_y^max v({f > z}) dz` with the integrand sampled once per
    /// constant piece; independent of the closed form.
    fn riemann(v: &SetFunction, f: &PointFunction, y: &Scalar) -> Scalar {
        let mut cuts: Vec<Scalar> = vec![y.clone()];
        cuts.extend(f.values().iter().cloned());
        cuts.sort_by(|a, b| a.compare(b));
        cuts.dedup();
        let mut total = y * v.value(v.ground().full());
        for w in cuts.windows(2) {
            let mid = &(&w[0] + &w[1]) / &q(2, 1);
            total = total + &(&w[1] - &w[0]) * v.value(f.above(&mid));
        }
        total
    }

    #[test]
    fn running_example_integral() {
        let v = running();
        let f = pf(&[3, 1, 2]);
        assert_eq!(choquet_integral(&v, &f).unwrap(), q(22, 9));
        assert_eq!(riemann(&v, &f, &q(0, 1)), q(22, 9));
        assert_eq!(riemann(&v, &f, &q(-7, 2)), q(22, 9));
    }

    #[test]
    fn negative_values_and_risk() {
        let v = running();
        assert_eq!(choquet_integral(&v, &pf(&[-1, 0, 1])).unwrap(), q(4, 9));
        assert_eq!(risk_measure(&v, &pf(&[1, 0, -1])).unwrap(), q(4, 9));
        assert_eq!(riemann(&v, &pf(&[-1, 0, 1]), &q(-5, 1)), q(4, 9));
    }

    #[test]
    fn indicator_reduces_to_set_value() {
        let v = running();
        for a in v.ground().subsets() {
            let f = PointFunction::indicator(v.ground().clone(), a, Mode::Exact).unwrap();
            assert_eq!(&choquet_integral(&v, &f).unwrap(), v.value(a));
        }
    }

    #[test]
    fn level_set_chains() {
        assert_eq!(
            level_set_chain(&pf(&[3, 1, 2])).sets(),
            &[s(&[]), s(&[0]), s(&[0, 2]), s(&[0, 1, 2])]
        );
        assert_eq!(
            level_set_chain(&pf(&[4, 4, 4])).sets(),
            &[s(&[]), s(&[0, 1, 2])]
        );
        assert!(level_set_chain(&pf(&[5, -1, 0, 2])).is_maximal());
        let tied = pf(&[1, 2, 2, 0]);
        assert!(!level_set_chain(&tied).is_maximal());
        assert_eq!(
            attaining_chain(&tied).sets(),
            &[s(&[]), s(&[1]), s(&[1, 2]), s(&[0, 1, 2]), s(&[0, 1, 2, 3])]
        );
    }

    #[test]
    fn running_example_verification() {
        let v = running();
        let r = verify_choquet_sup(&v, &pf(&[3, 1, 2]), 12, 5).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.value, Some(q(22, 9)));
        assert_eq!(r.witness.weights(), &[q(5, 9), q(1, 9), q(1, 3)]);
        assert!(in_lower_core(&r.witness, &v, Subset::full(3)));
    }

    #[test]
    fn all_six_chains_are_dominated_with_two_attaining() {
        let v = running();
        let f = pf(&[3, 1, 2]);
        let orders = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let values: Vec<Scalar> = orders
            .iter()
            .map(|o| {
                chain_measure(&v, &Chain::maximal(v.ground(), o).unwrap())
                    .unwrap()
                    .integrate(f.values())
            })
            .collect();
        assert!(values.iter().all(|x| x.le(&q(22, 9))));
        // f is injective: only the decreasing order (0, 2, 1) attains.
        let attaining: Vec<usize> = (0..6).filter(|&k| values[k] == q(22, 9)).collect();
        assert_eq!(attaining, vec![1]);
    }

    #[test]
    fn mismatched_inputs_error() {
        let v = running();
        assert!(matches!(
            choquet_integral(&v, &pf(&[1, 2])),
            Err(Error::Length { .. })
        ));
        let float =
            PointFunction::new(GroundSet::new(3).unwrap(), vec![Scalar::float(1.0); 3]).unwrap();
        assert_eq!(choquet_integral(&v, &float), Err(Error::ModeMismatch));
    }
}

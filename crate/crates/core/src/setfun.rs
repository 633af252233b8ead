//! Ground sets, dense set functions and their lattice predicates.
//!
//! A [`SetFunction`] stores one [`Scalar`] per subset of a ground set of at
//! most [`MAX_POINTS`] points, indexed by the subset bitmask. The power set is
//! the implied sigma-algebra. Continuity along monotone sequences holds
//! trivially on a finite lattice, so no predicate represents it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};
pub use crate::subset::Subset;

/// Largest supported ground set.
pub const MAX_POINTS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroundSet {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_POINTS {
            return Err(Error::GroundSize(n));
        }
        Ok(GroundSet { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut ground = GroundSet::new(labels.len())?;
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        ground.labels = Some(labels);
        Ok(ground)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The whole space, `{0, ..., n - 1}`.
    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn check(&self, s: Subset) -> Result<()> {
        if s.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(Error::SubsetOutOfRange(s))
        }
    }

    pub fn check_point(&self, point: usize) -> Result<()> {
        if point < self.n {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { point, n: self.n })
        }
    }

    /// All `2^n` subsets in bitmask order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        (0..1u32 << self.n).map(Subset::from_bits)
    }

    pub fn label(&self, point: usize) -> String {
        match &self.labels {
            Some(l) => l[point].clone(),
            None => point.to_string(),
        }
    }

    /// Resolves a label, falling back to a numeric point index.
    pub fn point(&self, token: &str) -> Result<usize> {
        let token = token.trim().trim_matches('"');
        if let Some(i) = self.labels.iter().flatten().position(|l| l == token) {
            return Ok(i);
        }
        let p: usize = token
            .parse()
            .map_err(|_| Error::SubsetSyntax(token.to_string()))?;
        self.check_point(p)?;
        Ok(p)
    }

    /// Parses a point list such as `{0,2}`, `[a, b]`, `1,3`, `{}` or `all`.
    pub fn parse_points(&self, text: &str) -> Result<Subset> {
        let t = text.trim();
        if t == "all" || t == "Ω" {
            return Ok(self.full());
        }
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .or_else(|| t.strip_prefix('[').and_then(|r| r.strip_suffix(']')))
            .unwrap_or(t)
            .trim();
        if inner.is_empty() {
            return Ok(Subset::EMPTY);
        }
        let mut s = Subset::EMPTY;
        for token in inner.split(',') {
            let p = self.point(token)?;
            if s.contains(p) {
                return Err(Error::SubsetSyntax(text.to_string()));
            }
            s = s.with(p);
        }
        Ok(s)
    }

    /// Parses a table key: a bare decimal bitmask, a `0b` binary mask, or a point list.
    pub fn parse_key(&self, text: &str) -> Result<Subset> {
        let t = text.trim();
        let mask = if let Some(bin) = t.strip_prefix("0b") {
            Some(u32::from_str_radix(bin, 2).map_err(|_| Error::SubsetSyntax(t.to_string()))?)
        } else if !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) {
            Some(
                t.parse::<u32>()
                    .map_err(|_| Error::SubsetSyntax(t.to_string()))?,
            )
        } else {
            None
        };
        match mask {
            Some(m) => {
                let s = Subset::from_bits(m);
                self.check(s)?;
                Ok(s)
            }
            None => self.parse_points(t),
        }
    }

    /// Renders a subset with labels when present.
    pub fn format(&self, s: Subset) -> String {
        let names: Vec<String> = s.points().map(|p| self.label(p)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Which inequality family a lattice check uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeCheck {
    /// `v(S+i) + v(S+j)` against `v(S+i+j) + v(S)` for all `S` and `i, j` outside `S`.
    Increments,
    /// `v(A) + v(B)` against `v(A|B) + v(A&B)` for every pair `(A, B)`.
    AllPairs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Curvature {
    Sub,
    Super,
}

/// Summary of the structural predicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub grounded: bool,
    pub monotone: bool,
    pub submodular: bool,
    pub supermodular: bool,
}

impl Profile {
    /// Grounded, monotone and submodular: the hypotheses of the sup representation.
    pub fn is_submodular_capacity(&self) -> bool {
        self.grounded && self.monotone && self.submodular
    }

    pub fn is_supermodular_capacity(&self) -> bool {
        self.grounded && self.monotone && self.supermodular
    }

    pub fn is_additive(&self) -> bool {
        self.submodular && self.supermodular
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SetFunction {
    ground: GroundSet,
    table: Vec<Scalar>,
}

impl SetFunction {
    /// Builds from a dense table indexed by bitmask.
    pub fn new(ground: GroundSet, table: Vec<Scalar>) -> Result<Self> {
        let expected = 1usize << ground.n();
        if table.len() != expected {
            return Err(Error::TableLength {
                expected,
                got: table.len(),
            });
        }
        let mode = table[0].mode();
        for (mask, value) in table.iter().enumerate() {
            if value.mode() != mode {
                return Err(Error::ModeMismatch);
            }
            if !value.is_finite() {
                return Err(Error::NonFinite(Subset::from_bits(mask as u32)));
            }
        }
        Ok(SetFunction { ground, table })
    }

    pub fn from_fn(ground: GroundSet, mut f: impl FnMut(Subset) -> Scalar) -> Result<Self> {
        let table = ground.subsets().map(&mut f).collect();
        SetFunction::new(ground, table)
    }

    /// `v(S) = sum of weights[i] for i in S`.
    pub fn additive(ground: GroundSet, weights: &[Scalar]) -> Result<Self> {
        if weights.len() != ground.n() {
            return Err(Error::Length {
                expected: ground.n(),
                got: weights.len(),
            });
        }
        let mode = weights[0].mode();
        SetFunction::from_fn(ground, |s| {
            Scalar::sum(mode, s.points().map(|p| &weights[p]))
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn mode(&self) -> Mode {
        self.table[0].mode()
    }

    pub fn table(&self) -> &[Scalar] {
        &self.table
    }

    /// `v(s)`. Panics if `s` leaves the ground set.
    pub fn value(&self, s: Subset) -> &Scalar {
        &self.table[s.bits() as usize]
    }

    pub fn get(&self, s: Subset) -> Result<&Scalar> {
        self.ground.check(s)?;
        Ok(self.value(s))
    }

    /// `v(A) - v(∅)`: shifts any set function to a grounded one.
    pub fn grounded(&self) -> SetFunction {
        let base = self.value(Subset::EMPTY).clone();
        SetFunction {
            ground: self.ground.clone(),
            table: self.table.iter().map(|x| x - &base).collect(),
        }
    }

    pub fn to_mode(&self, mode: Mode) -> Result<SetFunction> {
        let table = self
            .table
            .iter()
            .map(|x| x.to_mode(mode))
            .collect::<Result<Vec<_>>>()?;
        SetFunction::new(self.ground.clone(), table)
    }

    pub fn is_grounded(&self) -> bool {
        self.value(Subset::EMPTY).is_zero()
    }

    /// Single-point increments suffice on a finite lattice.
    pub fn is_monotone(&self) -> bool {
        let full = self.ground.full();
        self.ground.subsets().all(|s| {
            full.difference(s)
                .points()
                .all(|i| self.value(s).le(self.value(s.with(i))))
        })
    }

    pub fn is_submodular(&self) -> bool {
        self.lattice_holds(Curvature::Sub, LatticeCheck::Increments)
    }

    pub fn is_submodular_with(&self, check: LatticeCheck) -> bool {
        self.lattice_holds(Curvature::Sub, check)
    }

    pub fn is_supermodular(&self) -> bool {
        self.lattice_holds(Curvature::Super, LatticeCheck::Increments)
    }

    pub fn is_supermodular_with(&self, check: LatticeCheck) -> bool {
        self.lattice_holds(Curvature::Super, check)
    }

    /// Modular: both inequalities hold, so `v(A) + v(B) = v(A|B) + v(A&B)`.
    pub fn is_modular(&self) -> bool {
        self.is_submodular() && self.is_supermodular()
    }

    pub fn profile(&self) -> Profile {
        Profile {
            grounded: self.is_grounded(),
            monotone: self.is_monotone(),
            submodular: self.is_submodular(),
            supermodular: self.is_supermodular(),
        }
    }

    fn lattice_holds(&self, curvature: Curvature, check: LatticeCheck) -> bool {
        let ok = |union_side: Scalar, split_side: Scalar| match curvature {
            // split = v(A) + v(B), union = v(A|B) + v(A&B)
            Curvature::Sub => split_side.ge(&union_side),
            Curvature::Super => split_side.le(&union_side),
        };
        let full = self.ground.full();
        match check {
            LatticeCheck::Increments => self.ground.subsets().all(|s| {
                let free: Vec<usize> = full.difference(s).points().collect();
                free.iter().enumerate().all(|(k, &i)| {
                    free[k + 1..].iter().all(|&j| {
                        ok(
                            self.value(s.with(i).with(j)) + self.value(s),
                            self.value(s.with(i)) + self.value(s.with(j)),
                        )
                    })
                })
            }),
            LatticeCheck::AllPairs => self.ground.subsets().all(|a| {
                self.ground.subsets().all(|b| {
                    ok(
                        self.value(a.union(b)) + self.value(a.intersection(b)),
                        self.value(a) + self.value(b),
                    )
                })
            }),
        }
    }

    /// `ṽ(A) = v(Ω) - v(Ω \ A) + v(∅)`.
    pub fn dual_transform(&self) -> SetFunction {
        self.dual_within(self.ground.full())
    }

    /// Duality relative to a carrier `A`: `ṽ(E) = v(A) - v(A \ E) + v(∅)` for `E ⊆ A`.
    /// Entries outside `A` are evaluated at `E ∩ A`.
    pub fn dual_within(&self, carrier: Subset) -> SetFunction {
        let top = self.value(carrier);
        let bottom = self.value(Subset::EMPTY);
        let table = self
            .ground
            .subsets()
            .map(|e| {
                let inside = e.intersection(carrier);
                top - self.value(carrier.difference(inside)) + bottom
            })
            .collect();
        SetFunction {
            ground: self.ground.clone(),
            table,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    /// `2p - p^2` with `p = |S| / 3`.
    fn running() -> SetFunction {
        SetFunction::from_fn(GroundSet::new(3).unwrap(), |s| {
            let p = q(s.len() as i64, 3);
            &q(2, 1) * &p - &p * &p
        })
        .unwrap()
    }

    fn from_values(n: usize, values: &[i64]) -> SetFunction {
        SetFunction::new(
            GroundSet::new(n).unwrap(),
            values.iter().map(|&v| q(v, 1)).collect(),
        )
        .unwrap()
    }

    fn convex_game() -> SetFunction {
        from_values(2, &[0, 0, 0, 1])
    }

    fn additive3() -> SetFunction {
        SetFunction::additive(GroundSet::new(3).unwrap(), &[q(1, 2), q(1, 3), q(1, 6)]).unwrap()
    }

    fn arb_set_function(max_n: usize) -> impl Strategy<Value = SetFunction> {
        (1..=max_n).prop_flat_map(|n| {
            prop::collection::vec(-6i64..6, 1 << n).prop_map(move |vals| {
                SetFunction::new(
                    GroundSet::new(n).unwrap(),
                    vals.into_iter()
                        .map(|v| Scalar::from_i64(v, Mode::Exact))
                        .collect(),
                )
                .unwrap()
            })
        })
    }

    /// Monotone grounded functions built from nonnegative increments.
    fn arb_monotone(max_n: usize) -> impl Strategy<Value = SetFunction> {
        (1..=max_n).prop_flat_map(|n| {
            prop::collection::vec(0i64..4, 1 << n).prop_map(move |incs| {
                let mut table = vec![0i64; 1 << n];
                for mask in 1..(1usize << n) {
                    let best = (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| table[mask & !(1 << i)])
                        .max()
                        .unwrap();
                    table[mask] = best + incs[mask];
                }
                from_values(n, &table)
            })
        })
    }

    #[test]
    fn grounded_examples() {
        let zero = SetFunction::from_fn(GroundSet::new(3).unwrap(), |_| q(0, 1)).unwrap();
        assert!(zero.is_grounded());
        let card =
            SetFunction::from_fn(GroundSet::new(3).unwrap(), |s| q(s.len() as i64, 1)).unwrap();
        assert!(card.is_grounded());
        let one = SetFunction::from_fn(GroundSet::new(3).unwrap(), |_| q(1, 1)).unwrap();
        assert!(!one.is_grounded());
        assert!(one.grounded().is_grounded());
    }

    #[test]
    fn monotone_examples() {
        let card =
            SetFunction::from_fn(GroundSet::new(3).unwrap(), |s| q(s.len() as i64, 1)).unwrap();
        assert!(card.is_monotone());
        assert!(running().is_monotone());
        // v({0}) = 1, v({0,1}) = 0
        assert!(!from_values(2, &[0, 1, 0, 0]).is_monotone());
    }

    #[test]
    fn submodular_examples() {
        let v = running();
        assert_eq!(v.value(Subset::singleton(0)), &q(5, 9));
        assert_eq!(v.value(Subset::from_points([0, 1])), &q(8, 9));
        assert!(v.is_submodular());
        assert!(v.is_submodular_with(LatticeCheck::AllPairs));
        assert!(!v.is_supermodular());
        assert!(additive3().is_submodular());
        assert!(additive3().is_supermodular());
        assert!(!convex_game().is_submodular());
        assert!(convex_game().is_supermodular());
    }

    #[test]
    fn running_example_dual() {
        let d = running().dual_transform();
        for i in 0..3 {
            assert_eq!(d.value(Subset::singleton(i)), &q(1, 9));
        }
        assert_eq!(d.value(Subset::from_points([0, 2])), &q(4, 9));
        assert_eq!(d.value(Subset::EMPTY), &q(0, 1));
        assert_eq!(d.value(Subset::full(3)), &q(1, 1));
        assert!(d.is_supermodular());
    }

    #[test]
    fn additive_is_self_dual() {
        let v = additive3();
        assert_eq!(v.dual_transform(), v);
    }

    #[test]
    fn table_validation() {
        let g = GroundSet::new(2).unwrap();
        assert!(matches!(
            SetFunction::new(g.clone(), vec![q(0, 1); 3]),
            Err(Error::TableLength {
                expected: 4,
                got: 3
            })
        ));
        assert_eq!(
            SetFunction::new(
                g.clone(),
                vec![q(0, 1), q(0, 1), Scalar::float(0.0), q(1, 1)]
            ),
            Err(Error::ModeMismatch)
        );
        assert!(matches!(
            SetFunction::new(g, vec![Scalar::float(f64::NAN); 4]),
            Err(Error::NonFinite(_))
        ));
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(25).is_err());
    }

    #[test]
    fn subset_parsing() {
        let g = GroundSet::with_labels(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        assert_eq!(
            g.parse_points("{a,c}").unwrap(),
            Subset::from_points([0, 2])
        );
        assert_eq!(
            g.parse_points("[1, 2]").unwrap(),
            Subset::from_points([1, 2])
        );
        assert_eq!(g.parse_points("{}").unwrap(), Subset::EMPTY);
        assert_eq!(g.parse_points("all").unwrap(), Subset::full(3));
        assert_eq!(g.parse_key("5").unwrap(), Subset::from_points([0, 2]));
        assert_eq!(g.parse_key("0b110").unwrap(), Subset::from_points([1, 2]));
        assert!(g.parse_key("8").is_err());
        assert!(g.parse_points("{a,a}").is_err());
        assert!(g.parse_points("{d}").is_err());
        assert_eq!(g.format(Subset::from_points([0, 2])), "{a,c}");
    }

    proptest! {
        #[test]
        fn increment_check_matches_all_pairs(v in arb_set_function(5)) {
            prop_assert_eq!(
                v.is_submodular_with(LatticeCheck::Increments),
                v.is_submodular_with(LatticeCheck::AllPairs)
            );
            prop_assert_eq!(
                v.is_supermodular_with(LatticeCheck::Increments),
                v.is_supermodular_with(LatticeCheck::AllPairs)
            );
        }

        #[test]
        fn duality_swaps_curvature(v in arb_set_function(5)) {
            let d = v.dual_transform();
            prop_assert_eq!(v.is_submodular(), d.is_supermodular());
            prop_assert_eq!(v.is_supermodular(), d.is_submodular());
            prop_assert_eq!(d.value(Subset::EMPTY), v.value(Subset::EMPTY));
            prop_assert_eq!(d.value(v.ground().full()), v.value(v.ground().full()));
            prop_assert_eq!(d.dual_transform(), v);
        }

        #[test]
        fn duality_preserves_monotonicity(v in arb_monotone(5)) {
            prop_assert!(v.is_monotone());
            prop_assert!(v.dual_transform().is_monotone());
            prop_assert!(v.dual_transform().is_grounded());
        }

        #[test]
        fn modular_means_additive(weights in prop::collection::vec(-5i64..5, 1..6)) {
            let n = weights.len();
            let w: Vec<Scalar> = weights.iter().map(|&x| q(x, 1)).collect();
            let v = SetFunction::additive(GroundSet::new(n).unwrap(), &w).unwrap();
            prop_assert!(v.is_modular());
        }

        #[test]
        fn modular_grounded_functions_are_sums_of_singletons(
            weights in prop::collection::vec(-5i64..5, 1..6),
            offset in -3i64..3,
            bump in (0u32..64, prop_oneof![Just(0i64), -2i64..2]),
        ) {
            let n = weights.len();
            let w: Vec<Scalar> = weights.iter().map(|&x| q(x, 1)).collect();
            let base = SetFunction::additive(GroundSet::new(n).unwrap(), &w).unwrap();
            let mask = bump.0 & ((1 << n) - 1);
            let v = SetFunction::from_fn(base.ground().clone(), |s| {
                let extra = if s.bits() == mask { bump.1 } else { 0 };
                base.value(s) + q(offset + extra, 1)
            })
            .unwrap()
            .grounded();
            if v.is_modular() {
                for s in v.ground().subsets() {
                    let sum = Scalar::sum(Mode::Exact, s.points().map(|p| v.value(Subset::singleton(p))));
                    prop_assert_eq!(v.value(s), &sum);
                }
            }
        }
    }
}

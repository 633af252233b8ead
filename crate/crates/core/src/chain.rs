//! Chains of subsets totally ordered by inclusion.
//!
//! On a finite carrier the algebra generated by a chain is the power set of
//! the carrier exactly when the chain is maximal, i.e. each step adds a single
//! point. [`Chain::generates`] uses that shortcut; [`Chain::generates_by_closure`]
//! computes the generated algebra directly and serves as its oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::setfun::{GroundSet, Subset};

/// Strictly increasing sets from `∅` to `carrier`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Chain {
    carrier: Subset,
    sets: Vec<Subset>,
}

impl Chain {
    /// Validates an explicit list; it must already be in increasing order.
    pub fn new(carrier: Subset, sets: Vec<Subset>) -> Result<Self> {
        match (sets.first(), sets.last()) {
            (Some(first), Some(last)) if first.is_empty() && *last == carrier => {}
            _ => {
                return Err(Error::InvalidChain(format!(
                    "must run from {{}} to {carrier}"
                )))
            }
        }
        if let Some(w) = sets.windows(2).find(|w| !w[0].is_proper_subset_of(w[1])) {
            return Err(Error::InvalidChain(format!(
                "{} is not inside {}",
                w[0], w[1]
            )));
        }
        Ok(Chain { carrier, sets })
    }

    /// Builds the chain from any totally ordered family: sorts, deduplicates and
    /// adds `∅` and `carrier`.
    pub fn from_family<I: IntoIterator<Item = Subset>>(carrier: Subset, family: I) -> Result<Self> {
        let mut sets: Vec<Subset> = family.into_iter().collect();
        sets.push(Subset::EMPTY);
        sets.push(carrier);
        sets.sort_by_key(|s| (s.len(), s.bits()));
        sets.dedup();
        if let Some(s) = sets.iter().find(|s| !s.is_subset_of(carrier)) {
            return Err(Error::NotSubset {
                inner: *s,
                outer: carrier,
            });
        }
        Chain::new(carrier, sets)
    }

    /// `∅ ⊂ {o1} ⊂ {o1, o2} ⊂ ... ⊂ Ω` for a permutation of the ground set.
    pub fn maximal(ground: &GroundSet, order: &[usize]) -> Result<Self> {
        for &p in order {
            ground.check_point(p)?;
        }
        Chain::from_order(ground.full(), order)
    }

    /// Maximal chain inside `carrier` that adds points in `order`.
    pub fn from_order(carrier: Subset, order: &[usize]) -> Result<Self> {
        let mut seen = Subset::EMPTY;
        let mut sets = Vec::with_capacity(order.len() + 1);
        sets.push(seen);
        for &p in order {
            if p >= 32 || !carrier.contains(p) || seen.contains(p) {
                return Err(Error::InvalidOrder(carrier, format!("{order:?}")));
            }
            seen = seen.with(p);
            sets.push(seen);
        }
        if seen != carrier {
            return Err(Error::InvalidOrder(carrier, format!("{order:?}")));
        }
        Ok(Chain { carrier, sets })
    }

    /// Maximal chain in the identity order `0, 1, ..., n - 1` restricted to `carrier`.
    pub fn identity(carrier: Subset) -> Self {
        let order: Vec<usize> = carrier.points().collect();
        Chain::from_order(carrier, &order).expect("identity order is valid")
    }

    pub fn carrier(&self) -> Subset {
        self.carrier
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.position(s).is_some()
    }

    pub fn position(&self, s: Subset) -> Option<usize> {
        self.sets
            .binary_search_by_key(&(s.len(), s.bits()), |x| (x.len(), x.bits()))
            .ok()
            .filter(|&k| self.sets[k] == s)
    }

    /// Every step adds exactly one point.
    pub fn is_maximal(&self) -> bool {
        self.atoms().all(|a| a.len() == 1)
    }

    /// Consecutive differences `S_k \ S_{k-1}`: the atoms of the generated algebra.
    pub fn atoms(&self) -> impl Iterator<Item = Subset> + '_ {
        self.sets.windows(2).map(|w| w[1].difference(w[0]))
    }

    /// For a maximal chain, the points in the order they are added.
    pub fn order(&self) -> Option<Vec<usize>> {
        self.atoms()
            .map(|a| (a.len() == 1).then(|| a.points().next().unwrap()))
            .collect()
    }

    /// `{I ∩ A : I in the chain}`.
    pub fn restrict(&self, a: Subset) -> Result<Chain> {
        check_subset(a, self.carrier)?;
        Chain::from_family(a, self.sets.iter().map(|s| s.intersection(a)))
    }

    /// Insertion of `b` into the restriction to `a`:
    /// `{B ∩ I : I ∈ I|A} ∪ {B ∪ I : I ∈ I|A}`, merged and sorted.
    pub fn insert(&self, a: Subset, b: Subset) -> Result<Chain> {
        check_subset(b, a)?;
        check_subset(a, self.carrier)?;
        let restricted = self.sets.iter().map(|s| s.intersection(a));
        let family = restricted.flat_map(|i| [b.intersection(i), b.union(i)]);
        Chain::from_family(a, family)
    }

    /// `{carrier \ S}` in increasing order.
    pub fn complemented(&self) -> Chain {
        Chain {
            carrier: self.carrier,
            sets: self
                .sets
                .iter()
                .rev()
                .map(|s| self.carrier.difference(*s))
                .collect(),
        }
    }

    /// Refines every non-singleton step by adding its points in ascending index order.
    pub fn refine_ascending(&self) -> Chain {
        let mut sets = vec![Subset::EMPTY];
        for w in self.sets.windows(2) {
            let mut cur = w[0];
            for p in w[1].difference(w[0]).points() {
                cur = cur.with(p);
                sets.push(cur);
            }
        }
        Chain {
            carrier: self.carrier,
            sets,
        }
    }

    /// Whether the chain generates every subset of its carrier (maximality shortcut).
    pub fn generates(&self) -> bool {
        self.is_maximal()
    }

    /// The same question answered by closing the chain under complement and union.
    pub fn generates_by_closure(&self) -> bool {
        generated_algebra(self.carrier, &self.sets).len() == 1usize << self.carrier.len()
    }
}

fn check_subset(inner: Subset, outer: Subset) -> Result<()> {
    if inner.is_subset_of(outer) {
        Ok(())
    } else {
        Err(Error::NotSubset { inner, outer })
    }
}

/// The algebra of subsets of `carrier` generated by `family`, by direct closure
/// under complement (within `carrier`) and pairwise union. Sorted by bitmask.
///
/// Cost is quadratic in the size of the result; intended for carriers of at
/// most a dozen or so points.
pub fn generated_algebra(carrier: Subset, family: &[Subset]) -> Vec<Subset> {
    let mut seen = std::collections::HashSet::new();
    let mut members: Vec<Subset> = Vec::new();
    let mut queue: Vec<Subset> = vec![Subset::EMPTY, carrier];
    queue.extend(family.iter().map(|s| s.intersection(carrier)));
    while let Some(s) = queue.pop() {
        if !seen.insert(s) {
            continue;
        }
        queue.push(carrier.difference(s));
        for &m in &members {
            queue.push(m.union(s));
        }
        members.push(s);
    }
    members.sort();
    members
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(points: &[usize]) -> Subset {
        Subset::from_points(points.iter().copied())
    }

    #[test]
    fn maximal_chain_examples() {
        let g3 = GroundSet::new(3).unwrap();
        let c = Chain::maximal(&g3, &[0, 1, 2]).unwrap();
        assert_eq!(c.sets(), &[s(&[]), s(&[0]), s(&[0, 1]), s(&[0, 1, 2])]);
        assert!(c.is_maximal());
        let c = Chain::maximal(&g3, &[2, 0, 1]).unwrap();
        assert_eq!(c.sets(), &[s(&[]), s(&[2]), s(&[0, 2]), s(&[0, 1, 2])]);
        assert_eq!(c.order().unwrap(), vec![2, 0, 1]);
        let g1 = GroundSet::new(1).unwrap();
        assert_eq!(
            Chain::maximal(&g1, &[0]).unwrap().sets(),
            &[s(&[]), s(&[0])]
        );
    }

    #[test]
    fn maximal_chain_rejects_bad_orders() {
        let g3 = GroundSet::new(3).unwrap();
        assert!(matches!(
            Chain::maximal(&g3, &[0, 0, 1]),
            Err(Error::InvalidOrder(..))
        ));
        assert!(matches!(
            Chain::maximal(&g3, &[0, 1]),
            Err(Error::InvalidOrder(..))
        ));
        assert!(matches!(
            Chain::maximal(&g3, &[0, 1, 3]),
            Err(Error::PointOutOfRange { .. })
        ));
    }

    #[test]
    fn explicit_chains_are_validated() {
        assert!(Chain::new(s(&[0, 1]), vec![s(&[]), s(&[1]), s(&[0, 1])]).is_ok());
        assert!(Chain::new(s(&[0, 1]), vec![s(&[]), s(&[1]), s(&[1]), s(&[0, 1])]).is_err());
        assert!(Chain::new(s(&[0, 1]), vec![s(&[]), s(&[0]), s(&[1]), s(&[0, 1])]).is_err());
        assert!(Chain::new(s(&[0, 1]), vec![s(&[1]), s(&[0, 1])]).is_err());
    }

    #[test]
    fn insertion_example() {
        let g4 = GroundSet::new(4).unwrap();
        let base = Chain::maximal(&g4, &[0, 1, 2, 3]).unwrap();
        let c = base.insert(s(&[0, 1, 3]), s(&[1, 3])).unwrap();
        assert_eq!(c.sets(), &[s(&[]), s(&[1]), s(&[1, 3]), s(&[0, 1, 3])]);
        assert!(c.is_maximal());
    }

    #[test]
    fn insertion_of_whole_or_empty_set_is_restriction() {
        let g4 = GroundSet::new(4).unwrap();
        let base = Chain::maximal(&g4, &[3, 1, 0, 2]).unwrap();
        let a = s(&[0, 2, 3]);
        assert_eq!(base.insert(a, a).unwrap(), base.restrict(a).unwrap());
        assert_eq!(
            base.insert(a, Subset::EMPTY).unwrap(),
            base.restrict(a).unwrap()
        );
        assert!(base.restrict(a).unwrap().contains(Subset::EMPTY));
    }

    #[test]
    fn insertion_errors() {
        let g3 = GroundSet::new(3).unwrap();
        let base = Chain::maximal(&g3, &[0, 1, 2]).unwrap();
        assert!(matches!(
            base.insert(s(&[0]), s(&[1])),
            Err(Error::NotSubset { .. })
        ));
        let small = Chain::from_order(s(&[0, 1]), &[0, 1]).unwrap();
        assert!(matches!(
            small.insert(s(&[0, 2]), s(&[0])),
            Err(Error::NotSubset { .. })
        ));
    }

    #[test]
    fn generation_examples() {
        let full = Subset::full(3);
        let c = Chain::new(full, vec![s(&[]), s(&[0]), s(&[0, 1]), full]).unwrap();
        assert!(c.generates());
        assert!(c.generates_by_closure());
        let coarse = Chain::new(full, vec![s(&[]), s(&[0, 1]), full]).unwrap();
        assert!(!coarse.generates());
        assert!(!coarse.generates_by_closure());
        assert_eq!(
            generated_algebra(full, coarse.sets()),
            vec![s(&[]), s(&[0, 1]), s(&[2]), full]
        );
        let one = Chain::new(s(&[0]), vec![s(&[]), s(&[0])]).unwrap();
        assert!(one.generates() && one.generates_by_closure());
    }

    #[test]
    fn complement_and_refinement() {
        let full = Subset::full(3);
        let c = Chain::maximal(&GroundSet::new(3).unwrap(), &[2, 0, 1]).unwrap();
        assert_eq!(
            c.complemented().sets(),
            &[s(&[]), s(&[1]), s(&[0, 1]), full]
        );
        assert_eq!(c.complemented().complemented(), c);
        let coarse = Chain::new(full, vec![s(&[]), s(&[2]), full]).unwrap();
        assert_eq!(
            coarse.refine_ascending().sets(),
            &[s(&[]), s(&[2]), s(&[0, 2]), full]
        );
    }

    fn arb_permutation(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
        (1..=max_n).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    }

    proptest! {
        #[test]
        fn every_permutation_chain_generates(order in arb_permutation(8)) {
            let g = GroundSet::new(order.len()).unwrap();
            let c = Chain::maximal(&g, &order).unwrap();
            prop_assert!(c.generates());
            prop_assert!(c.generates_by_closure());
            prop_assert_eq!(c.order().unwrap(), order);
        }

        #[test]
        fn insertion_properties(order in arb_permutation(6), a_bits in any::<u32>(), b_bits in any::<u32>()) {
            let n = order.len();
            let g = GroundSet::new(n).unwrap();
            let base = Chain::maximal(&g, &order).unwrap();
            let a = Subset::from_bits(a_bits & ((1 << n) - 1));
            let b = Subset::from_bits(b_bits).intersection(a);
            let c = base.insert(a, b).unwrap();
            prop_assert!(c.contains(Subset::EMPTY));
            prop_assert!(c.contains(b));
            prop_assert!(c.contains(a));
            prop_assert!(c.sets().windows(2).all(|w| w[0].is_proper_subset_of(w[1])));
            prop_assert!(c.is_maximal());
            prop_assert!(c.generates_by_closure());
        }

        #[test]
        fn closure_agrees_with_maximality(n in 1usize..7, picks in prop::collection::vec(any::<u32>(), 0..6)) {
            let full = Subset::full(n);
            let mut family: Vec<Subset> = Vec::new();
            let mut cur = Subset::EMPTY;
            for p in picks {
                cur = cur.union(Subset::from_bits(p)).intersection(full);
                family.push(cur);
            }
            let c = Chain::from_family(full, family).unwrap();
            prop_assert_eq!(c.generates(), c.generates_by_closure());
        }
    }
}

//! Members of the finite algebra generated by a chain, written as disjoint
//! unions of chain intervals `C_1 \ D_1 ∪ C_2 \ D_2 ∪ ...` with
//! `C_1 ⊃ D_1 ⊃ C_2 ⊃ ... ⊃ D_n` all drawn from the chain.

use serde::Serialize;

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::setfun::{SetFunction, Subset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainIntervalUnion {
    pairs: Vec<(Subset, Subset)>,
}

impl ChainIntervalUnion {
    /// Canonical form of `target`: maximal runs of chain atoms inside it, outermost first.
    pub fn from_set(chain: &Chain, target: Subset) -> Result<Self> {
        if !target.is_subset_of(chain.carrier()) {
            return Err(Error::NotSubset {
                inner: target,
                outer: chain.carrier(),
            });
        }
        let sets = chain.sets();
        let mut pairs = Vec::new();
        let mut run_top: Option<usize> = None;
        for k in (1..sets.len()).rev() {
            let atom = sets[k].difference(sets[k - 1]);
            let inside = atom.is_subset_of(target);
            if !inside && !atom.intersection(target).is_empty() {
                return Err(Error::NotInChainAlgebra(target));
            }
            match (inside, run_top) {
                (true, None) => run_top = Some(k),
                (false, Some(top)) => {
                    pairs.push((sets[top], sets[k]));
                    run_top = None;
                }
                _ => {}
            }
        }
        if let Some(top) = run_top {
            pairs.push((sets[top], sets[0]));
        }
        Ok(ChainIntervalUnion { pairs })
    }

    /// Normalizes `⋃ (C_i \ D_i)` over `terms`, optionally complemented within
    /// `complement_within`. Every set involved must be a member of `chain`.
    pub fn normalize(
        chain: &Chain,
        terms: &[(Subset, Subset)],
        complement_within: Option<Subset>,
    ) -> Result<Self> {
        let member = |s: Subset| {
            if chain.contains(s) {
                Ok(s)
            } else {
                Err(Error::NotChainMember(s))
            }
        };
        let mut union = Subset::EMPTY;
        for &(c, d) in terms {
            let (c, d) = (member(c)?, member(d)?);
            if !d.is_subset_of(c) {
                return Err(Error::NotSubset { inner: d, outer: c });
            }
            union = union.union(c.difference(d));
        }
        let target = match complement_within {
            Some(w) => member(w)?.difference(union),
            None => union,
        };
        ChainIntervalUnion::from_set(chain, target)
    }

    pub fn pairs(&self) -> &[(Subset, Subset)] {
        &self.pairs
    }

    /// The point set represented.
    pub fn points(&self) -> Subset {
        self.pairs
            .iter()
            .fold(Subset::EMPTY, |acc, (c, d)| acc.union(c.difference(*d)))
    }

    /// `Σ (v(C_i) - v(D_i))`: the finitely additive set function induced on the chain algebra.
    pub fn evaluate(&self, v: &SetFunction) -> Scalar {
        self.pairs
            .iter()
            .fold(Scalar::zero(v.mode()), |acc, (c, d)| {
                acc + (v.value(*c) - v.value(*d))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfun::GroundSet;
    use proptest::prelude::*;

    fn s(points: &[usize]) -> Subset {
        Subset::from_points(points.iter().copied())
    }

    fn inserted() -> Chain {
        let base = Chain::maximal(&GroundSet::new(4).unwrap(), &[0, 1, 2, 3]).unwrap();
        base.insert(s(&[0, 1, 3]), s(&[1, 3])).unwrap()
    }

    #[test]
    fn complement_of_member() {
        let c = inserted();
        let u =
            ChainIntervalUnion::normalize(&c, &[(s(&[1]), s(&[]))], Some(s(&[0, 1, 3]))).unwrap();
        assert_eq!(u.pairs(), &[(s(&[0, 1, 3]), s(&[1]))]);
        assert_eq!(u.points(), s(&[0, 3]));
    }

    #[test]
    fn union_of_disjoint_intervals() {
        let c = inserted();
        let u = ChainIntervalUnion::normalize(
            &c,
            &[(s(&[1]), s(&[])), (s(&[0, 1, 3]), s(&[1, 3]))],
            None,
        )
        .unwrap();
        assert_eq!(u.pairs(), &[(s(&[0, 1, 3]), s(&[1, 3])), (s(&[1]), s(&[]))]);
    }

    #[test]
    fn whole_carrier_is_one_interval() {
        let c = inserted();
        let u = ChainIntervalUnion::from_set(&c, c.carrier()).unwrap();
        assert_eq!(u.pairs(), &[(c.carrier(), Subset::EMPTY)]);
        assert!(ChainIntervalUnion::from_set(&c, Subset::EMPTY)
            .unwrap()
            .pairs()
            .is_empty());
    }

    #[test]
    fn foreign_sets_are_rejected() {
        let c = inserted();
        assert_eq!(
            ChainIntervalUnion::normalize(&c, &[(s(&[0]), s(&[]))], None),
            Err(Error::NotChainMember(s(&[0])))
        );
        let coarse =
            Chain::new(Subset::full(3), vec![s(&[]), s(&[0, 1]), Subset::full(3)]).unwrap();
        assert_eq!(
            ChainIntervalUnion::from_set(&coarse, s(&[0])),
            Err(Error::NotInChainAlgebra(s(&[0])))
        );
    }

    proptest! {
        #[test]
        fn expansion_matches_naive_set_algebra(
            order in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
            terms in prop::collection::vec((0usize..7, 0usize..7), 0..4),
            complement in prop::option::of(0usize..7),
        ) {
            let c = Chain::maximal(&GroundSet::new(6).unwrap(), &order).unwrap();
            let sets = c.sets();
            let pairs: Vec<(Subset, Subset)> = terms
                .iter()
                .map(|&(x, y)| (sets[x.max(y)], sets[x.min(y)]))
                .collect();
            let mut naive = Subset::EMPTY;
            for &(hi, lo) in &pairs {
                for p in 0..6 {
                    if hi.contains(p) && !lo.contains(p) {
                        naive = naive.with(p);
                    }
                }
            }
            if let Some(w) = complement {
                let w = sets[w];
                naive = Subset::from_points((0..6).filter(|&p| w.contains(p) && !naive.contains(p)));
            }
            let u = ChainIntervalUnion::normalize(&c, &pairs, complement.map(|w| sets[w])).unwrap();
            prop_assert_eq!(u.points(), naive);
            let nested: Vec<Subset> = u.pairs().iter().flat_map(|&(hi, lo)| [hi, lo]).collect();
            prop_assert!(nested.windows(2).all(|w| w[1].is_proper_subset_of(w[0])));
            let again = ChainIntervalUnion::normalize(&c, u.pairs(), None).unwrap();
            prop_assert_eq!(again, u);
        }
    }
}

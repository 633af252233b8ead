//! Ternary embedding of a generating family into a single chain.
//!
//! Membership in `J_1, ..., J_m` is encoded as the ternary digits of
//! `f = Σ 3^{-k} χ_{J_k}`. Each `J_N` is recovered from the sublevel sets
//! `{f < a}` alone, so these sublevel sets (a chain) generate the same
//! algebra as the family.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::chain::Chain;
use crate::choquet::PointFunction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::setfun::{GroundSet, Subset};

/// Most members a family may have; `3^{-24}` stays comfortably exact.
pub const MAX_MEMBERS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingFamily {
    #[serde(skip)]
    ground: GroundSet,
    members: Vec<Subset>,
}

impl GeneratingFamily {
    /// Families that do not separate points are accepted; see [`GeneratingFamily::separates_points`].
    pub fn new(ground: GroundSet, members: Vec<Subset>) -> Result<Self> {
        if members.len() > MAX_MEMBERS {
            return Err(Error::FamilySize(members.len()));
        }
        for &m in &members {
            ground.check(m)?;
        }
        Ok(GeneratingFamily { ground, members })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    fn signature(&self, point: usize) -> u32 {
        self.members
            .iter()
            .enumerate()
            .fold(0, |acc, (k, m)| acc | ((m.contains(point) as u32) << k))
    }

    /// Points grouped by identical membership across the family: the atoms of
    /// the algebra the family generates. Ordered by smallest point.
    pub fn point_classes(&self) -> Vec<Subset> {
        let mut classes: Vec<(u32, Subset)> = Vec::new();
        for p in 0..self.ground.n() {
            let sig = self.signature(p);
            match classes.iter_mut().find(|(s, _)| *s == sig) {
                Some((_, class)) => *class = class.with(p),
                None => classes.push((sig, Subset::singleton(p))),
            }
        }
        classes.into_iter().map(|(_, c)| c).collect()
    }

    /// Whether the family generates the full power set.
    pub fn separates_points(&self) -> bool {
        self.point_classes().len() == self.ground.n()
    }
}

fn third_power(k: usize) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(3), k))
}

/// `f(ω) = Σ_{k=1}^m 3^{-k} [ω ∈ J_k]`, exactly.
pub fn ternary_embed(family: &GeneratingFamily) -> PointFunction {
    let values = (0..family.ground.n())
        .map(|p| {
            let sum = family
                .members
                .iter()
                .enumerate()
                .filter(|(_, m)| m.contains(p))
                .fold(BigRational::zero(), |acc, (k, _)| acc + third_power(k + 1));
            Scalar::Exact(sum)
        })
        .collect();
    PointFunction::new(family.ground.clone(), values).expect("one value per point")
}

/// The distinct sublevel sets `{f < a}`, `0 <= a <= 1`, ordered by inclusion.
pub fn embed_chain(family: &GeneratingFamily) -> Chain {
    sublevel_chain(&ternary_embed(family))
}

/// Sublevel-set chain of any function with values in `[0, 1)`.
pub fn sublevel_chain(f: &PointFunction) -> Chain {
    let family: Vec<Subset> = f.levels().iter().map(|y| f.below(y)).collect();
    Chain::from_family(f.ground().full(), family).expect("sublevel sets are nested")
}

/// Recovers `J_N` from `f` as the union, over digit prefixes
/// `(a_1, ..., a_{N-1}) ∈ {0,1}^{N-1}` with `s = Σ a_n 3^{-n}`, of
/// `{f < s + 2·3^{-N}} \ {f < s + 3^{-N}}`.
///
/// Prefixes whose range `[s, s + 3^{-d})` contains no value of `f` are skipped;
/// they contribute nothing.
pub fn recover_generator(f: &PointFunction, member_count: usize, index: usize) -> Result<Subset> {
    if member_count > MAX_MEMBERS {
        return Err(Error::FamilySize(member_count));
    }
    if index == 0 || index > member_count {
        return Err(Error::GeneratorIndex {
            index,
            count: member_count,
        });
    }
    let values: Vec<&BigRational> = f
        .values()
        .iter()
        .map(|x| x.as_rational().ok_or(Error::ModeMismatch))
        .collect::<Result<_>>()?;

    let step = third_power(index);
    let mut result = Subset::EMPTY;
    // (prefix sum, depth)
    let mut stack = vec![(BigRational::zero(), 0usize)];
    while let Some((s, depth)) = stack.pop() {
        let width = third_power(depth);
        let hi = &s + &width;
        if !values.iter().any(|&x| x >= &s && x < &hi) {
            continue;
        }
        if depth + 1 == index {
            let lo = &s + &step;
            let hi = &lo + &step;
            let upper = f.below(&Scalar::Exact(hi));
            let lower = f.below(&Scalar::Exact(lo));
            result = result.union(upper.difference(lower));
        } else {
            stack.push((s.clone(), depth + 1));
            stack.push((&s + third_power(depth + 1), depth + 1));
        }
    }
    Ok(result)
}

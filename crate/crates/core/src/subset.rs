use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A subset of a ground set of at most 24 points, stored as a characteristic bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// `{0, 1, ..., n - 1}`.
    pub const fn full(n: usize) -> Self {
        if n >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub const fn singleton(point: usize) -> Self {
        Subset(1 << point)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        points.into_iter().fold(Subset::EMPTY, |acc, p| acc.with(p))
    }

    pub const fn contains(self, point: usize) -> bool {
        point < 32 && self.0 & (1 << point) != 0
    }

    pub const fn with(self, point: usize) -> Self {
        Subset(self.0 | (1 << point))
    }

    pub const fn without(self, point: usize) -> Self {
        Subset(self.0 & !(1 << point))
    }

    pub const fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub const fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub const fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub const fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_proper_subset_of(self, other: Subset) -> bool {
        self.is_subset_of(other) && self.0 != other.0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Points in ascending order.
    pub fn points(self) -> Points {
        Points(self.0)
    }

    /// Every subset of `self`, starting from the empty set, in increasing bitmask order.
    pub fn subsets(self) -> Submasks {
        Submasks {
            universe: self.0,
            next: Some(0),
        }
    }
}

pub struct Points(u32);

impl Iterator for Points {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Points {}

/// Ascending enumeration of submasks: `next = ((cur | !U) + 1) & U`.
pub struct Submasks {
    universe: u32,
    next: Option<u32>,
}

impl Iterator for Submasks {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = if cur == self.universe {
            None
        } else {
            Some((cur | !self.universe).wrapping_add(1) & self.universe)
        };
        Some(Subset(cur))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.points().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as the ascending list of member points.
impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.points())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let points = Vec::<usize>::deserialize(deserializer)?;
        if let Some(p) = points.iter().find(|&&p| p >= 32) {
            return Err(serde::de::Error::custom(format!("point {p} out of range")));
        }
        Ok(Subset::from_points(points))
    }
}

use serde::Serialize;

use crate::measure::AtomicMeasure;
use crate::scalar::Scalar;
use crate::setfun::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    /// `μ(A) = v(A)` on the carrier.
    Total,
    /// `μ(I) = v(I)` for a member of the witness chain.
    ChainAgreement,
    /// A single atom weight is nonnegative.
    Nonnegative,
    /// `μ(B) = v(B)` at the target set.
    Attainment,
    /// One violated core inequality `μ(E) <= v(E)` (or `>=` for the upper core).
    Dominance,
    /// Largest violation of the core inequalities over every subset of the carrier; must be `<= 0`.
    MaxExcess,
    /// `μ(I) = v(I)` for a level set of the integrand.
    LevelSetAgreement,
    /// `∫ f dμ` equals the Choquet integral.
    IntegralEquality,
    /// `∫ f dμ' <= v(f)` for a sampled core measure.
    SampleDomination,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Scalar, rhs: &Scalar) -> bool {
        match self {
            Relation::Eq => lhs.approx_eq(rhs),
            Relation::Le => lhs.le(rhs),
            Relation::Ge => lhs.ge(rhs),
        }
    }

    pub fn flipped(self) -> Relation {
        match self {
            Relation::Eq => Relation::Eq,
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
        }
    }
}

/// One checked statement: `lhs relation rhs` about the listed subsets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub kind: ClaimKind,
    pub subsets: Vec<Subset>,
    pub lhs: Scalar,
    pub relation: Relation,
    pub rhs: Scalar,
    pub pass: bool,
}

impl Claim {
    pub fn check(
        kind: ClaimKind,
        subsets: Vec<Subset>,
        lhs: Scalar,
        relation: Relation,
        rhs: Scalar,
    ) -> Self {
        let pass = relation.holds(&lhs, &rhs);
        Claim {
            kind,
            subsets,
            lhs,
            relation,
            rhs,
            pass,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statement {
    /// `v(B) = max over the lower core of A of μ(B)`.
    Sup,
    /// `v(B) = min over the upper core of A of μ(B)`.
    Inf,
    /// `v(f) = max over the lower core of Ω of ∫ f dμ`.
    Choquet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Direct,
    Dual,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub statement: Statement,
    pub route: Route,
    pub carrier: Subset,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Subset>,
    /// Point order of the base chain the witness chain was derived from.
    pub base_order: Vec<usize>,
    pub chain: Vec<Subset>,
    pub witness: AtomicMeasure,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub claims: Vec<Claim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes_agree: Option<bool>,
    pub pass: bool,
}

impl VerificationReport {
    pub(crate) fn finish(mut self) -> Self {
        self.pass = self.claims.iter().all(|c| c.pass) && self.routes_agree != Some(false);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.pass)
    }

    pub fn claims_of(&self, kind: ClaimKind) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(move |c| c.kind == kind)
    }
}

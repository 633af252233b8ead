//! Atomic measures, the chain-extension witness and core verification.
//!
//! For a maximal chain `∅ = S_0 ⊂ S_1 ⊂ ... ⊂ S_k = A` the chain measure puts
//! weight `v(S_j) - v(S_{j-1})` on the point added at step `j`. It agrees with
//! `v` on every chain member, and for grounded monotone submodular `v` it lies
//! in the lower core `{μ : μ(A) = v(A), μ(E) <= v(E) for E ⊆ A}`. Inserting
//! `B` into the chain before building the measure makes the witness attain
//! `μ(B) = v(B)`.
//!
//! On a finite carrier the algebra generated by the chain is already the
//! whole power set, so no limiting argument or extension step is needed: the
//! finitely additive function `Σ (v(C_i) - v(D_i))` on chain intervals (see
//! [`crate::interval`]) is the measure itself.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::report::{Claim, ClaimKind, Relation, Route, Statement, VerificationReport};
use crate::scalar::{Mode, Scalar};
use crate::setfun::{SetFunction, Subset};

/// Nonnegative (when built from monotone data) point masses on a carrier set.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure {
    carrier: Subset,
    /// One entry per ground point; zero outside the carrier.
    weights: Vec<Scalar>,
}

impl AtomicMeasure {
    /// `weights` holds one value per ground point; entries outside `carrier` are zeroed.
    pub fn new(carrier: Subset, mut weights: Vec<Scalar>) -> Result<Self> {
        let Some(first) = weights.first() else {
            return Err(Error::Length {
                expected: 1,
                got: 0,
            });
        };
        let mode = first.mode();
        if weights.iter().any(|w| w.mode() != mode) {
            return Err(Error::ModeMismatch);
        }
        if !carrier.is_subset_of(Subset::full(weights.len())) {
            return Err(Error::SubsetOutOfRange(carrier));
        }
        for (p, w) in weights.iter_mut().enumerate() {
            if !carrier.contains(p) {
                *w = Scalar::zero(mode);
            }
        }
        Ok(AtomicMeasure { carrier, weights })
    }

    pub fn carrier(&self) -> Subset {
        self.carrier
    }

    pub fn mode(&self) -> Mode {
        self.weights[0].mode()
    }

    pub fn weight(&self, point: usize) -> &Scalar {
        &self.weights[point]
    }

    /// Dense weights, one per ground point.
    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn is_nonnegative(&self) -> bool {
        self.carrier
            .points()
            .all(|p| !self.weights[p].is_negative())
    }

    pub fn total(&self) -> Scalar {
        self.sum_over(self.carrier)
    }

    /// `μ(E)` for `E ⊆ carrier`.
    pub fn measure_of(&self, e: Subset) -> Result<Scalar> {
        if !e.is_subset_of(self.carrier) {
            return Err(Error::NotSubset {
                inner: e,
                outer: self.carrier,
            });
        }
        Ok(self.sum_over(e))
    }

    fn sum_over(&self, e: Subset) -> Scalar {
        Scalar::sum(self.mode(), e.points().map(|p| &self.weights[p]))
    }

    /// `Σ f(i) μ({i})` over the carrier.
    pub fn integrate(&self, f: &[Scalar]) -> Scalar {
        self.carrier
            .points()
            .fold(Scalar::zero(self.mode()), |acc, p| {
                acc + &f[p] * &self.weights[p]
            })
    }

    /// Copy with `delta` added to one atom.
    pub fn perturbed(&self, point: usize, delta: &Scalar) -> AtomicMeasure {
        let mut out = self.clone();
        out.weights[point] = &out.weights[point] + delta;
        out
    }

    /// `μ(E)` for every `E ⊆ carrier`, paired with `E`, in ascending bitmask order.
    pub fn all_values(&self) -> Vec<(Subset, Scalar)> {
        let points: Vec<usize> = self.carrier.points().collect();
        let mut values: Vec<Scalar> = Vec::with_capacity(1 << points.len());
        let mut sets: Vec<Subset> = Vec::with_capacity(1 << points.len());
        values.push(Scalar::zero(self.mode()));
        sets.push(Subset::EMPTY);
        for idx in 1usize..(1 << points.len()) {
            let low = idx.trailing_zeros() as usize;
            let rest = idx & (idx - 1);
            let p = points[low];
            values.push(&values[rest] + &self.weights[p]);
            sets.push(sets[rest].with(p));
        }
        sets.into_iter().zip(values).collect()
    }
}

/// Serialized as the carrier plus `[point, weight]` pairs for carrier points.
impl Serialize for AtomicMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(usize, &Scalar)> = self
            .carrier
            .points()
            .map(|p| (p, &self.weights[p]))
            .collect();
        let mut st = serializer.serialize_struct("AtomicMeasure", 3)?;
        st.serialize_field("carrier", &self.carrier)?;
        st.serialize_field("weights", &pairs)?;
        st.serialize_field("nonnegative", &self.is_nonnegative())?;
        st.end()
    }
}

/// Telescoped increments of `v` along a maximal chain.
///
/// A non-monotone `v` yields negative atoms; the result is still returned and
/// [`AtomicMeasure::is_nonnegative`] reports it.
pub fn chain_measure(v: &SetFunction, chain: &Chain) -> Result<AtomicMeasure> {
    v.ground().check(chain.carrier())?;
    let order = chain.order().ok_or(Error::NotMaximal)?;
    let mut weights = vec![Scalar::zero(v.mode()); v.n()];
    for (w, &p) in chain.sets().windows(2).zip(&order) {
        weights[p] = v.value(w[1]) - v.value(w[0]);
    }
    AtomicMeasure::new(chain.carrier(), weights)
}

/// `μ(I) = v(I)` for every member of `chain`.
pub fn agrees_on_chain(mu: &AtomicMeasure, v: &SetFunction, chain: &Chain) -> bool {
    chain.sets().iter().all(|&s| {
        mu.measure_of(s)
            .map(|m| m.approx_eq(v.value(s)))
            .unwrap_or(false)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoreSide {
    /// `μ(E) <= v(E)`.
    Lower,
    /// `μ(E) >= v(E)`.
    Upper,
}

impl CoreSide {
    fn relation(self) -> Relation {
        match self {
            CoreSide::Lower => Relation::Le,
            CoreSide::Upper => Relation::Ge,
        }
    }
}

struct CoreScan {
    violations: Vec<(Subset, Scalar, Scalar)>,
    /// `max_E μ(E) - v(E)` for the lower side, `max_E v(E) - μ(E)` for the upper.
    max_excess: Scalar,
}

fn scan_core(mu: &AtomicMeasure, v: &SetFunction, side: CoreSide) -> CoreScan {
    let mut violations = Vec::new();
    let mut max_excess: Option<Scalar> = None;
    for (e, m) in mu.all_values() {
        let val = v.value(e);
        let excess = match side {
            CoreSide::Lower => &m - val,
            CoreSide::Upper => val - &m,
        };
        if !side.relation().holds(&m, val) {
            violations.push((e, m.clone(), val.clone()));
        }
        max_excess = Some(match max_excess {
            Some(best) => best.max(excess),
            None => excess,
        });
    }
    CoreScan {
        violations,
        max_excess: max_excess.expect("carrier has at least the empty subset"),
    }
}

/// Dominance claims for every violated core inequality plus the overall max-excess claim.
pub fn core_claims(mu: &AtomicMeasure, v: &SetFunction, side: CoreSide) -> Vec<Claim> {
    let scan = scan_core(mu, v, side);
    let mut claims: Vec<Claim> = scan
        .violations
        .into_iter()
        .map(|(e, m, val)| Claim {
            kind: ClaimKind::Dominance,
            subsets: vec![e],
            lhs: m,
            relation: side.relation(),
            rhs: val,
            pass: false,
        })
        .collect();
    claims.push(Claim::check(
        ClaimKind::MaxExcess,
        vec![mu.carrier()],
        scan.max_excess,
        Relation::Le,
        Scalar::zero(v.mode()),
    ));
    claims
}

fn in_core(mu: &AtomicMeasure, v: &SetFunction, a: Subset, side: CoreSide) -> bool {
    if mu.carrier() != a || v.ground().check(a).is_err() || mu.mode() != v.mode() {
        return false;
    }
    mu.is_nonnegative()
        && mu.total().approx_eq(v.value(a))
        && scan_core(mu, v, side).violations.is_empty()
}

/// `μ ∈ C_-(A)`: nonnegative, `μ(A) = v(A)` and `μ(E) <= v(E)` for all `E ⊆ A`.
pub fn in_lower_core(mu: &AtomicMeasure, v: &SetFunction, a: Subset) -> bool {
    in_core(mu, v, a, CoreSide::Lower)
}

/// `μ ∈ C_+(A)`: nonnegative, `μ(A) = v(A)` and `μ(E) >= v(E)` for all `E ⊆ A`.
pub fn in_upper_core(mu: &AtomicMeasure, v: &SetFunction, a: Subset) -> bool {
    in_core(mu, v, a, CoreSide::Upper)
}

fn check_pair(v: &SetFunction, a: Subset, b: Subset, base: &Chain) -> Result<()> {
    v.ground().check(a)?;
    if !b.is_subset_of(a) {
        return Err(Error::NotSubset { inner: b, outer: a });
    }
    if base.carrier() != v.ground().full() {
        return Err(Error::InvalidChain(format!(
            "base chain must span the ground set, got carrier {}",
            base.carrier()
        )));
    }
    if !base.is_maximal() {
        return Err(Error::NotMaximal);
    }
    Ok(())
}

fn verify_direct(
    v: &SetFunction,
    a: Subset,
    b: Subset,
    base: &Chain,
    side: CoreSide,
) -> Result<VerificationReport> {
    check_pair(v, a, b, base)?;
    let chain = base.insert(a, b)?;
    let mu = chain_measure(v, &chain)?;
    let measure = |s: Subset| mu.measure_of(s).expect("chain members lie in the carrier");

    let mut claims = vec![Claim::check(
        ClaimKind::Total,
        vec![a],
        mu.total(),
        Relation::Eq,
        v.value(a).clone(),
    )];
    claims.extend(chain.sets().iter().map(|&s| {
        Claim::check(
            ClaimKind::ChainAgreement,
            vec![s],
            measure(s),
            Relation::Eq,
            v.value(s).clone(),
        )
    }));
    claims.extend(a.points().map(|p| {
        Claim::check(
            ClaimKind::Nonnegative,
            vec![Subset::singleton(p)],
            mu.weight(p).clone(),
            Relation::Ge,
            Scalar::zero(v.mode()),
        )
    }));
    claims.push(Claim::check(
        ClaimKind::Attainment,
        vec![b],
        measure(b),
        Relation::Eq,
        v.value(b).clone(),
    ));
    claims.extend(core_claims(&mu, v, side));

    Ok(VerificationReport {
        statement: match side {
            CoreSide::Lower => Statement::Sup,
            CoreSide::Upper => Statement::Inf,
        },
        route: Route::Direct,
        carrier: a,
        target: Some(b),
        base_order: base.order().expect("base chain is maximal"),
        chain: chain.sets().to_vec(),
        witness: mu,
        value: None,
        seed: None,
        claims,
        routes_agree: None,
        pass: false,
    }
    .finish())
}

/// Checks `v(B) = sup over C_-(A) of μ(B)` by constructing the witness on the
/// insertion of `B` into the identity chain restricted to `A`.
///
/// Failures of the hypotheses (non-submodular or non-monotone `v`) surface as
/// failed claims, not errors.
pub fn verify_sup_representation(
    v: &SetFunction,
    a: Subset,
    b: Subset,
) -> Result<VerificationReport> {
    verify_sup_representation_with(v, a, b, &Chain::identity(v.ground().full()))
}

/// As [`verify_sup_representation`] with an explicit maximal base chain on the ground set.
pub fn verify_sup_representation_with(
    v: &SetFunction,
    a: Subset,
    b: Subset,
    base: &Chain,
) -> Result<VerificationReport> {
    verify_direct(v, a, b, base, CoreSide::Lower)
}

/// Checks `v(B) = inf over C_+(A) of μ(B)` directly on the upper core and again
/// through the dual set function; `routes_agree` records whether the two
/// routes produced the same claims.
pub fn verify_inf_representation(
    v: &SetFunction,
    a: Subset,
    b: Subset,
) -> Result<VerificationReport> {
    verify_inf_representation_with(v, a, b, &Chain::identity(v.ground().full()))
}

pub fn verify_inf_representation_with(
    v: &SetFunction,
    a: Subset,
    b: Subset,
    base: &Chain,
) -> Result<VerificationReport> {
    let mut direct = verify_direct(v, a, b, base, CoreSide::Upper)?;
    let dual = verify_inf_dual_route(v, a, b, base)?;
    direct.routes_agree = Some(same_claims(&direct, &dual));
    Ok(direct.finish())
}

/// The dual route alone: runs the sup verification on `ṽ(E) = v(A) - v(A \ E) + v(∅)`
/// for the pair `(A, A \ B)` over the complemented base chain, then maps every
/// claim back to a statement about `v` and the upper core.
pub fn verify_inf_dual_route(
    v: &SetFunction,
    a: Subset,
    b: Subset,
    base: &Chain,
) -> Result<VerificationReport> {
    check_pair(v, a, b, base)?;
    let dual = v.dual_within(a);
    let sup = verify_direct(
        &dual,
        a,
        a.difference(b),
        &base.complemented(),
        CoreSide::Lower,
    )?;

    let mu_a = sup.witness.total();
    // μ(A \ E) = μ(A) - μ(E) and v(A \ E) = v(A) + v(∅) - ṽ(E).
    let shift = v.value(a) + v.value(Subset::EMPTY);
    let claims = sup
        .claims
        .into_iter()
        .map(|c| match c.kind {
            ClaimKind::ChainAgreement | ClaimKind::Attainment | ClaimKind::Dominance => Claim {
                subsets: c.subsets.iter().map(|&e| a.difference(e)).collect(),
                lhs: &mu_a - &c.lhs,
                rhs: &shift - &c.rhs,
                relation: c.relation.flipped(),
                ..c
            },
            ClaimKind::MaxExcess => Claim {
                lhs: &c.lhs - &mu_a + &shift,
                ..c
            },
            _ => c,
        })
        .collect();

    Ok(VerificationReport {
        statement: Statement::Inf,
        route: Route::Dual,
        carrier: a,
        target: Some(b),
        base_order: base.order().expect("base chain is maximal"),
        chain: sup.chain.iter().rev().map(|&s| a.difference(s)).collect(),
        witness: sup.witness,
        value: None,
        seed: None,
        claims,
        routes_agree: None,
        pass: false,
    }
    .finish())
}

/// Claim-for-claim agreement, ignoring order, plus identical witness and chain.
pub fn same_claims(x: &VerificationReport, y: &VerificationReport) -> bool {
    let key = |c: &Claim| (c.kind, c.subsets.clone(), c.relation);
    let sorted = |r: &VerificationReport| {
        let mut cs = r.claims.clone();
        cs.sort_by_key(key);
        cs
    };
    let (cx, cy) = (sorted(x), sorted(y));
    x.witness == y.witness
        && x.chain == y.chain
        && cx.len() == cy.len()
        && cx.iter().zip(&cy).all(|(p, q)| {
            key(p) == key(q)
                && p.pass == q.pass
                && p.lhs.approx_eq(&q.lhs)
                && p.rhs.approx_eq(&q.rhs)
        })
}

/// Whether the measure agreeing with `v` on the inserted chain is unique and
/// equals the chain measure.
///
/// Solves the linear system `Σ_{i ∈ I} w_i = v(I)` over the chain members by
/// elimination, independently of the telescoping construction, and requires
/// full rank and an identical solution.
pub fn verify_uniqueness(v: &SetFunction, a: Subset, b: Subset) -> Result<bool> {
    verify_uniqueness_with(v, a, b, &Chain::identity(v.ground().full()))
}

pub fn verify_uniqueness_with(v: &SetFunction, a: Subset, b: Subset, base: &Chain) -> Result<bool> {
    check_pair(v, a, b, base)?;
    let chain = base.insert(a, b)?;
    let mu = chain_measure(v, &chain)?;
    if !v.is_grounded() {
        // μ(∅) = 0 always, so nothing agrees with v on ∅.
        return Ok(false);
    }
    let points: Vec<usize> = a.points().collect();
    let rows: Vec<(Vec<Scalar>, Scalar)> = chain
        .sets()
        .iter()
        .filter(|s| !s.is_empty())
        .map(|&s| {
            let row = points
                .iter()
                .map(|&p| Scalar::from_i64(s.contains(p) as i64, v.mode()))
                .collect();
            (row, v.value(s).clone())
        })
        .collect();
    let Some(solution) = solve_unique(rows, points.len()) else {
        return Ok(false);
    };
    Ok(points
        .iter()
        .zip(&solution)
        .all(|(&p, w)| w.approx_eq(mu.weight(p))))
}

/// Gauss-Jordan elimination; `None` unless the system is consistent with a unique solution.
fn solve_unique(mut rows: Vec<(Vec<Scalar>, Scalar)>, unknowns: usize) -> Option<Vec<Scalar>> {
    let mut pivot_row = 0;
    for col in 0..unknowns {
        let pivot = (pivot_row..rows.len()).find(|&r| !rows[r].0[col].is_zero())?;
        rows.swap(pivot_row, pivot);
        let (prow, prhs) = rows[pivot_row].clone();
        let inv = &Scalar::one(prhs.mode()) / &prow[col];
        for (r, (row, rhs)) in rows.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = &row[col] * &inv;
            for (x, y) in row.iter_mut().zip(&prow) {
                *x = &*x - &(&factor * y);
            }
            *rhs = &*rhs - &(&factor * &prhs);
        }
        let (row, rhs) = &mut rows[pivot_row];
        for x in row.iter_mut() {
            *x = &*x * &inv;
        }
        *rhs = &*rhs * &inv;
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return None;
    }
    Some(
        rows.into_iter()
            .take(unknowns)
            .map(|(_, rhs)| rhs)
            .collect(),
    )
}

/// Chain measures of `count` random orderings of `A`, reproducible from `seed`.
/// For grounded monotone submodular `v` every sample lies in `C_-(A)`.
pub fn sample_core(
    v: &SetFunction,
    a: Subset,
    count: usize,
    seed: u64,
) -> Result<Vec<AtomicMeasure>> {
    v.ground().check(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = a.points().collect();
    (0..count)
        .map(|_| {
            order.shuffle(&mut rng);
            chain_measure(v, &Chain::from_order(a, &order)?)
        })
        .collect()
}

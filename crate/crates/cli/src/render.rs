//! Plain-text rendering for `--pretty`.

use std::fmt::Write;

use submod_core::{GroundSet, Profile, SetFunction, Subset, VerificationReport};

pub fn sets(ground: &GroundSet, sets: &[Subset]) -> String {
    sets.iter()
        .map(|&s| ground.format(s))
        .collect::<Vec<_>>()
        .join(" ⊂ ")
}

pub fn profile(v: &SetFunction, p: &Profile) -> String {
    let mut out = format!("n = {}, mode = {:?}\n", v.n(), v.mode());
    for (name, flag) in [
        ("grounded", p.grounded),
        ("monotone", p.monotone),
        ("submodular", p.submodular),
        ("supermodular", p.supermodular),
    ] {
        let _ = writeln!(out, "{name:<13}{}", if flag { "yes" } else { "no" });
    }
    out
}

pub fn report(ground: &GroundSet, r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:?} ({:?}) on A = {}{}: {}",
        r.statement,
        r.route,
        ground.format(r.carrier),
        r.target
            .map(|b| format!(", B = {}", ground.format(b)))
            .unwrap_or_default(),
        if r.pass { "PASS" } else { "FAIL" }
    );
    if let Some(value) = &r.value {
        let _ = writeln!(out, "value: {value}");
    }
    let _ = writeln!(out, "base order: {:?}", r.base_order);
    if let Some(seed) = r.seed {
        let _ = writeln!(out, "seed: {seed}");
    }
    let _ = writeln!(out, "chain: {}", sets(ground, &r.chain));
    let weights: Vec<String> = r
        .carrier
        .points()
        .map(|p| format!("{}: {}", ground.label(p), r.witness.weight(p)))
        .collect();
    let _ = writeln!(out, "witness: {}", weights.join(", "));
    let _ = writeln!(
        out,
        "claims: {} checked, {} failed",
        r.claims.len(),
        r.failures().count()
    );
    for c in r.failures() {
        let subsets: Vec<String> = c.subsets.iter().map(|&s| ground.format(s)).collect();
        let _ = writeln!(
            out,
            "  {:?} {}: {} {:?} {}",
            c.kind,
            subsets.join(" "),
            c.lhs,
            c.relation,
            c.rhs
        );
    }
    if let Some(agree) = r.routes_agree {
        let _ = writeln!(out, "direct and dual routes agree: {agree}");
    }
    out
}
